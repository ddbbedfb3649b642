#include "cachelp/baselines.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cachelp {

namespace {

Rat frac(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat binom(long n, long k) {
    if (k < 0 || k > n || n < 0) return Rat(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(b);
}

// cross(o, a, b) > 0 means o->a->b turns left (counterclockwise).
Rat cross(const CurvePoint& o, const CurvePoint& a, const CurvePoint& b) {
    return (a.memory - o.memory) * (b.load - o.load) - (a.load - o.load) * (b.memory - o.memory);
}

}  // namespace

std::optional<Rat> TradeoffCurve::eval(const Rat& memory) const {
    if (breakpoints.empty()) return std::nullopt;
    const auto& first = breakpoints.front();
    const auto& last = breakpoints.back();
    if (memory <= first.memory) {
        if (memory == first.memory || kind == CurveKind::Converse) return first.load;
        return std::nullopt;  // an achievable curve promises nothing below its span
    }
    if (memory >= last.memory) return last.load;
    auto hi = std::upper_bound(breakpoints.begin(), breakpoints.end(), memory,
                               [](const Rat& m, const CurvePoint& p) { return m < p.memory; });
    auto lo = hi - 1;
    return lo->load +
           (hi->load - lo->load) * (memory - lo->memory) / (hi->memory - lo->memory);
}

std::vector<CurvePoint> yma_points(const Problem& prob) {
    const long K = prob.num_users, N = prob.num_files;
    std::vector<CurvePoint> pts;
    for (long t = 0; t <= K; ++t) {
        Rat mem = frac(N * t, K);
        Rat load = (binom(K, t + 1) - binom(K - std::min(K, N), t + 1)) / binom(K, t);
        pts.push_back({std::move(mem), std::move(load)});
    }
    return pts;
}

std::optional<std::vector<CurvePoint>> gv_points(const Problem& prob) {
    const long K = prob.num_users, N = prob.num_files;
    if (K < N) return std::nullopt;
    std::vector<CurvePoint> pts;
    for (long t = 1; t <= K; ++t)
        pts.push_back({frac(N, K * t), Rat(N) - frac(N * (N + 1), K * (t + 1))});
    return pts;
}

std::vector<CurvePoint> yu_thm2_points(const Problem& prob) {
    const long K = prob.num_users, N = prob.num_files;
    std::vector<CurvePoint> pts;
    for (long s = 1; s <= std::min(N, K); ++s)
        for (long l = 1; l <= s; ++l)
            pts.push_back({frac(N - l + 1, s), frac(s - 1, 2) + frac(l * (l - 1), 2 * s)});
    return pts;
}

std::optional<Rat> yu_thm4_bound(const Problem& prob, const Rat& memory) {
    const long K = prob.num_users, N = prob.num_files;
    if (K == 1) return std::nullopt;
    Rat best(0);
    for (long n = std::max(1l, K - N + 1); n <= K - 1; ++n) {
        long alpha = (N - 1) / (K - n);
        long beta = N - alpha * (K - n);
        Rat val;
        if (2 * beta + alpha * (K - 2 * n - 1) <= 0)
            val = frac(2 * K - n + 1, n + 1) -
                  frac(K * (K + 1), n * (n + 1)) * memory / Rat(N);
        else
            val = frac(2 * K - n + 1, n + 1) -
                  frac(2 * K * (K - n), n * (n + 1)) * memory / Rat(N - beta);
        if (val > best) best = std::move(val);
    }
    return best;
}

TradeoffCurve lower_convex_envelope(std::vector<CurvePoint> points, CurveKind kind) {
    TradeoffCurve curve;
    curve.kind = kind;
    if (points.empty()) return curve;
    // At a shared memory the curves disagree on which point survives: a
    // converse keeps its strongest (largest) bound, an achievable scheme its
    // cheapest (smallest) load.
    std::map<Rat, Rat> by_mem;
    for (auto& p : points) {
        auto [it, fresh] = by_mem.emplace(p.memory, p.load);
        if (!fresh) {
            if (kind == CurveKind::Converse ? p.load > it->second : p.load < it->second)
                it->second = p.load;
        }
    }
    std::vector<CurvePoint> hull;
    for (auto& [mem, load] : by_mem) {
        CurvePoint p{mem, load};
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
            hull.pop_back();
        hull.push_back(std::move(p));
    }
    curve.breakpoints = std::move(hull);
    return curve;
}

Rat best_achievable_at(const Problem& prob, const Rat& memory) {
    if (memory < 0) throw std::invalid_argument("memory must be nonnegative");
    TradeoffCurve yma = lower_convex_envelope(yma_points(prob), CurveKind::Achievable);
    auto best = yma.eval(memory);
    if (!best) throw std::logic_error("memory-sharing envelope does not cover this memory");
    if (auto gv = gv_points(prob)) {
        auto v = lower_convex_envelope(std::move(*gv), CurveKind::Achievable).eval(memory);
        if (v && *v < *best) best = v;
    }
    return *best;
}

Rat analytic_converse_at(const Problem& prob, const Rat& memory) {
    if (memory < 0) throw std::invalid_argument("memory must be nonnegative");
    auto v = lower_convex_envelope(yu_thm2_points(prob), CurveKind::Converse).eval(memory);
    Rat best = v ? *v : Rat(0);
    if (auto t4 = yu_thm4_bound(prob, memory); t4 && *t4 > best) best = *t4;
    return best;
}

GapTable gap_table(const TradeoffCurve& achievable, const std::vector<GapSeries>& converses,
                   const std::vector<Rat>& grid) {
    GapTable table;
    for (const auto& s : converses) table.names.push_back(s.name);
    for (const Rat& m : grid) {
        auto ach = achievable.eval(m);
        if (!ach) continue;  // outside the achievable span nothing can be compared
        std::vector<Rat> row;
        bool complete = true;
        for (const auto& s : converses) {
            auto cv = s.curve.eval(m);
            if (!cv) { complete = false; break; }
            row.push_back(*ach - *cv);
        }
        if (!complete) continue;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] < 0 && converses[j].lp_derived && !table.alarm) {
                table.alarm = true;
                table.alarm_detail = converses[j].name + " exceeds achievability at M = " +
                                     rat_string(m) + " by " + rat_string(-row[j]);
            }
        }
        table.grid.push_back(m);
        table.gaps.push_back(std::move(row));
    }
    return table;
}

std::vector<Rat> default_memory_grid(const Problem& prob, const Rat& step) {
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    const long K = prob.num_users, N = prob.num_files;
    std::vector<Rat> out;
    for (long i = 0; i <= N; ++i) out.push_back(Rat(i));
    if (N >= 2) {
        Rat m = frac(1, N - 1);
        Rat stop(std::max(N, K) / 2);
        while (m <= stop) {
            out.push_back(m);
            m += step;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace cachelp
