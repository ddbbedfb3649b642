#include "cachelp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace cachelp {

const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal:    return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded:  return "unbounded";
        case SolveStatus::IterLimit:  return "iteration-limit";
    }
    return "?";
}

namespace {

int sgn(const Rat& q) { return mpq_sgn(q.get_mpq_t()); }

const Rat kZero(0);

// Progress lines on stderr when CACHELP_TRACE is set; for chasing down slow
// solves, not part of any output contract.
bool trace_on() {
    static const bool on = std::getenv("CACHELP_TRACE") != nullptr;
    return on;
}

double now_s() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

enum VStat : char { kAtLower, kAtUpper, kBasic };

// Hand-off from the double-precision pass: which rows it ended up using and
// the basis it stopped at, in the activation order recorded here.
struct WarmStart {
    bool usable = false;
    std::vector<int> active;   // global row indices
    std::vector<int> basis;    // per local row: structural col or m + local row
    std::vector<char> vstat;   // structurals first, then logicals of active rows
};

constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool lu_zero(double v) { return v == 0.0; }
inline bool lu_zero(const Rat& v) { return mpq_sgn(v.get_mpq_t()) == 0; }

// Sparse LU of the basis matrix with Markowitz-style pivot ordering, shared
// by the double and the rational simplex. Column q holds the column of the
// variable basic in row q, so slots and rows share one index space; the
// Gauss-Jordan eta files used before kept a near-dense inverse around, which
// made refactorization quadratic in the number of basic structurals.
// solve_cols turns a row-space right hand side into basic values per slot,
// solve_rows turns slot-space costs into row-space duals.
template <class T>
class LuFactor {
public:
    struct Outcome {
        std::vector<int> dropped_slots;  // columns without a usable pivot
        std::vector<int> spare_rows;     // rows left unpivoted, same count
    };

    Outcome factor(int n, std::vector<std::vector<std::pair<int, T>>>& cols) {
        steps_.clear();
        steps_.reserve(static_cast<std::size_t>(n));
        ucols_.assign(static_cast<std::size_t>(n), {});
        scratch_.assign(static_cast<std::size_t>(n), T(0));

        std::vector<std::vector<std::pair<int, T>>> rows(static_cast<std::size_t>(n));
        std::vector<std::vector<int>> colrows(static_cast<std::size_t>(n));
        std::vector<int> colcnt(static_cast<std::size_t>(n), 0);
        std::vector<char> rowdone(static_cast<std::size_t>(n), 0);
        std::vector<char> coldone(static_cast<std::size_t>(n), 0);
        for (int q = 0; q < n; ++q)
            for (auto& [r, v] : cols[static_cast<std::size_t>(q)]) {
                if (lu_zero(v)) continue;
                rows[static_cast<std::size_t>(r)].emplace_back(q, std::move(v));
                colrows[static_cast<std::size_t>(q)].push_back(r);
                ++colcnt[static_cast<std::size_t>(q)];
            }

        // Columns wait in buckets keyed by their current count; entries go
        // stale when the count changes and are re-validated on pop. Rows that
        // shrink to one entry queue separately since they pivot with no fill.
        constexpr int kBuckets = 48;
        std::vector<std::vector<int>> bucket(kBuckets);
        auto bucket_of = [&](int c) {
            return std::min(colcnt[static_cast<std::size_t>(c)], kBuckets - 1);
        };
        auto push_col = [&](int c) {
            if (!coldone[static_cast<std::size_t>(c)] && colcnt[static_cast<std::size_t>(c)] > 0)
                bucket[static_cast<std::size_t>(bucket_of(c))].push_back(c);
        };
        for (int q = 0; q < n; ++q) push_col(q);
        std::vector<int> rsq;
        for (int r = 0; r < n; ++r)
            if (rows[static_cast<std::size_t>(r)].size() == 1) rsq.push_back(r);

        std::vector<T> acc(static_cast<std::size_t>(n), T(0));
        std::vector<char> accf(static_cast<std::size_t>(n), 0);
        std::vector<int> accs;
        std::vector<int> step_of_slot(static_cast<std::size_t>(n), -1);
        std::vector<int> stamp(static_cast<std::size_t>(n), -1);
        int epoch = 0;

        auto find_in_row = [&](int r, int q) -> T* {
            for (auto& cv : rows[static_cast<std::size_t>(r)])
                if (cv.first == q) return &cv.second;
            return nullptr;
        };

        auto eliminate = [&](int p, int q) {
            Step st;
            st.prow = p;
            st.pslot = q;
            st.piv = *find_in_row(p, q);
            for (int r : colrows[static_cast<std::size_t>(q)]) {
                if (r == p || rowdone[static_cast<std::size_t>(r)]) continue;
                T* vq = find_in_row(r, q);
                if (!vq) continue;
                T m = *vq / st.piv;
                accs.clear();
                for (auto& [c, v] : rows[static_cast<std::size_t>(r)]) {
                    if (c == q) continue;
                    acc[static_cast<std::size_t>(c)] = std::move(v);
                    accf[static_cast<std::size_t>(c)] = 1;
                    accs.push_back(c);
                }
                for (const auto& [c, v] : rows[static_cast<std::size_t>(p)]) {
                    if (c == q) continue;
                    if (!accf[static_cast<std::size_t>(c)]) {
                        acc[static_cast<std::size_t>(c)] = T(0);
                        accf[static_cast<std::size_t>(c)] = 2;
                        accs.push_back(c);
                    }
                    acc[static_cast<std::size_t>(c)] -= m * v;
                }
                auto& rr = rows[static_cast<std::size_t>(r)];
                rr.clear();
                for (int c : accs) {
                    bool nz = !lu_zero(acc[static_cast<std::size_t>(c)]);
                    if (nz) rr.emplace_back(c, std::move(acc[static_cast<std::size_t>(c)]));
                    if (accf[static_cast<std::size_t>(c)] == 2 && nz) {
                        colrows[static_cast<std::size_t>(c)].push_back(r);
                        ++colcnt[static_cast<std::size_t>(c)];
                        push_col(c);
                    } else if (accf[static_cast<std::size_t>(c)] == 1 && !nz) {
                        --colcnt[static_cast<std::size_t>(c)];
                        push_col(c);
                    }
                    accf[static_cast<std::size_t>(c)] = 0;
                    acc[static_cast<std::size_t>(c)] = T(0);
                }
                if (rr.size() == 1) rsq.push_back(r);
                st.lower.emplace_back(r, std::move(m));
            }
            rowdone[static_cast<std::size_t>(p)] = 1;
            coldone[static_cast<std::size_t>(q)] = 1;
            step_of_slot[static_cast<std::size_t>(q)] = static_cast<int>(steps_.size());
            for (auto& [c, v] : rows[static_cast<std::size_t>(p)]) {
                if (c == q) continue;
                st.urow.emplace_back(c, std::move(v));
                --colcnt[static_cast<std::size_t>(c)];
                push_col(c);
            }
            steps_.push_back(std::move(st));
        };

        int done = 0;
        while (done < n) {
            int p = -1, q = -1;
            while (!rsq.empty()) {
                int r = rsq.back();
                rsq.pop_back();
                if (rowdone[static_cast<std::size_t>(r)] ||
                    rows[static_cast<std::size_t>(r)].size() != 1)
                    continue;
                p = r;
                q = rows[static_cast<std::size_t>(r)].front().first;
                break;
            }
            for (int b = 0; b < kBuckets && q < 0; ++b) {
                auto& bk = bucket[static_cast<std::size_t>(b)];
                while (!bk.empty() && q < 0) {
                    int c = bk.back();
                    bk.pop_back();
                    if (coldone[static_cast<std::size_t>(c)] ||
                        colcnt[static_cast<std::size_t>(c)] <= 0)
                        continue;
                    if (bucket_of(c) != b) {
                        if (bucket_of(c) > b) push_col(c);
                        continue;  // a fresher entry sits in the right bucket
                    }
                    // Compact the column's row list and pick the shortest
                    // acceptable row; in doubles, acceptable means within a
                    // threshold of the column's largest magnitude.
                    auto& cr = colrows[static_cast<std::size_t>(c)];
                    ++epoch;
                    std::size_t w = 0;
                    int bestr = -1, anyr = -1;
                    std::size_t bestlen = 0;
                    [[maybe_unused]] double cmax = 0, anyv = 0;
                    for (std::size_t i = 0; i < cr.size(); ++i) {
                        int r = cr[i];
                        if (rowdone[static_cast<std::size_t>(r)] ||
                            stamp[static_cast<std::size_t>(r)] == epoch)
                            continue;
                        T* v = find_in_row(r, c);
                        if (!v) continue;
                        stamp[static_cast<std::size_t>(r)] = epoch;
                        cr[w++] = r;
                        if constexpr (std::is_same_v<T, double>) {
                            double a = std::abs(*v);
                            if (a > anyv) { anyv = a; anyr = r; }
                            cmax = std::max(cmax, a);
                        } else {
                            anyr = r;
                        }
                        std::size_t len = rows[static_cast<std::size_t>(r)].size();
                        if constexpr (std::is_same_v<T, double>) {
                            if (std::abs(*v) < 1e-11) continue;
                        }
                        if (bestr < 0 || len < bestlen) {
                            if constexpr (std::is_same_v<T, double>) {
                                if (std::abs(*v) < 0.05 * cmax) continue;
                            }
                            bestr = r;
                            bestlen = len;
                        }
                    }
                    cr.resize(w);
                    colcnt[static_cast<std::size_t>(c)] = static_cast<int>(w);
                    if (w == 0) continue;
                    if (bestr < 0) {
                        if constexpr (std::is_same_v<T, double>) {
                            if (anyv < 1e-11) continue;  // column is numeric noise
                        }
                        bestr = anyr;
                    }
                    if (bestr < 0) continue;
                    p = bestr;
                    q = c;
                }
            }
            if (q < 0) break;
            eliminate(p, q);
            ++done;
        }

        Outcome out;
        for (int q2 = 0; q2 < n; ++q2)
            if (!coldone[static_cast<std::size_t>(q2)]) out.dropped_slots.push_back(q2);
        for (int r = 0; r < n; ++r)
            if (!rowdone[static_cast<std::size_t>(r)]) out.spare_rows.push_back(r);
        if (!out.dropped_slots.empty()) {
            steps_.clear();
            ucols_.clear();
            return out;
        }
        for (std::size_t k = 0; k < steps_.size(); ++k)
            for (auto& [c, v] : steps_[k].urow) {
                int kc = step_of_slot[static_cast<std::size_t>(c)];
                ucols_[static_cast<std::size_t>(kc)].emplace_back(static_cast<int>(k), v);
                c = kc;
            }
        return out;
    }

    // B x = b: v enters indexed by row, leaves indexed by slot.
    void solve_cols(std::vector<T>& v) const {
        for (const auto& st : steps_) {
            const T& t = v[static_cast<std::size_t>(st.prow)];
            if (lu_zero(t)) continue;
            for (const auto& [r, mlt] : st.lower) v[static_cast<std::size_t>(r)] -= mlt * t;
        }
        auto& x = scratch_;
        for (int k = static_cast<int>(steps_.size()) - 1; k >= 0; --k) {
            const Step& st = steps_[static_cast<std::size_t>(k)];
            T t = std::move(v[static_cast<std::size_t>(st.prow)]);
            for (const auto& [kc, u] : st.urow)
                if (!lu_zero(x[static_cast<std::size_t>(kc)]))
                    t -= u * x[static_cast<std::size_t>(kc)];
            if (!lu_zero(t)) t /= st.piv;
            x[static_cast<std::size_t>(k)] = std::move(t);
        }
        for (std::size_t k = 0; k < steps_.size(); ++k)
            v[static_cast<std::size_t>(steps_[k].pslot)] = std::move(x[k]);
    }

    // B^T y = c: v enters indexed by slot, leaves indexed by row.
    void solve_rows(std::vector<T>& v) const {
        auto& x = scratch_;
        const int q = static_cast<int>(steps_.size());
        for (int k = 0; k < q; ++k)
            x[static_cast<std::size_t>(k)] =
                std::move(v[static_cast<std::size_t>(steps_[static_cast<std::size_t>(k)].pslot)]);
        for (int k = 0; k < q; ++k) {
            const Step& st = steps_[static_cast<std::size_t>(k)];
            T t = std::move(x[static_cast<std::size_t>(k)]);
            for (const auto& [j, u] : ucols_[static_cast<std::size_t>(k)])
                if (!lu_zero(x[static_cast<std::size_t>(j)]))
                    t -= u * x[static_cast<std::size_t>(j)];
            if (!lu_zero(t)) t /= st.piv;
            x[static_cast<std::size_t>(k)] = std::move(t);
        }
        for (int k = q - 1; k >= 0; --k) {
            const Step& st = steps_[static_cast<std::size_t>(k)];
            T t = std::move(x[static_cast<std::size_t>(k)]);
            for (const auto& [r, mlt] : st.lower)
                if (!lu_zero(v[static_cast<std::size_t>(r)]))
                    t -= mlt * v[static_cast<std::size_t>(r)];
            v[static_cast<std::size_t>(st.prow)] = std::move(t);
        }
    }

    std::size_t nnz() const {
        std::size_t s = steps_.size();
        for (const auto& st : steps_) s += st.lower.size() + st.urow.size();
        return s;
    }

private:
    struct Step {
        int prow = 0, pslot = 0;
        T piv{};
        std::vector<std::pair<int, T>> lower;  // (row, multiplier)
        std::vector<std::pair<int, T>> urow;   // (slot, value), then (step, value)
    };
    std::vector<Step> steps_;
    std::vector<std::vector<std::pair<int, T>>> ucols_;  // per step: (earlier step, value)
    mutable std::vector<T> scratch_;
};

// Same algorithm as the exact solver below, run in doubles with tolerances.
// Its only job is to find the binding rows and a good starting basis; any
// numerical trouble just downgrades the hand-off to "start cold".
class FloatSimplex {
public:
    explicit FloatSimplex(const LPInstance& lp) : lp_(lp) {
        m_ = static_cast<int>(lp.cols.size());
        acol_.resize(static_cast<std::size_t>(m_));
        for (std::size_t i = 0; i < lp.rows.size(); ++i)
            for (const auto& t : lp.rows[i].terms)
                acol_[static_cast<std::size_t>(t.col)].emplace_back(static_cast<int>(i),
                                                                    t.coef.get_d());
        rhs_.reserve(lp.rows.size());
        for (const auto& r : lp.rows) rhs_.push_back(r.rhs.get_d());
        row_local_.assign(lp.rows.size(), -1);
        vstat_.assign(static_cast<std::size_t>(m_), kAtLower);
        // A single-variable objective leaves almost every reduced cost at
        // zero, which stalls the dual ratio test. Tiny deterministic cost
        // perturbations break those ties; the exact pass uses true costs, so
        // only the choice of starting basis is affected.
        cost_.assign(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < m_; ++j) {
            std::uint64_t h = static_cast<std::uint64_t>(j) * 0x9E3779B97F4A7C15ull;
            h ^= h >> 29;
            cost_[static_cast<std::size_t>(j)] =
                1e-6 * (1.0 + static_cast<double>(h >> 40) / 16777216.0);
        }
        cost_[static_cast<std::size_t>(lp.load_col)] = 1.0;
    }

    WarmStart run() {
        // All rows take part; the all-logical basis is dual feasible for this
        // objective, so one dual-simplex run drives straight at the optimum.
        // (Lazy activation was tried here and lost badly: every violated row
        // costs at least one pivot to repair, and intermediate relaxation
        // optima violate elemental rows by the tens of thousands.)
        for (std::size_t i = 0; i < lp_.rows.size(); ++i) activate(static_cast<int>(i));
        if (!refactorize()) return {};
        recompute_basics();
        if (iterate_dual() != 0) return {};
        if (trace_on())
            std::fprintf(stderr, "[float] dual done: %llu iterations, lu nnz %zu, %.1fs\n",
                         static_cast<unsigned long long>(iterations_), lu_.nnz(),
                         now_s() - t0_);

        // Hand over only the rows that are tight at the float optimum. Their
        // logicals are nonbasic, so the basic structurals restricted to those
        // rows form a square invertible matrix: the exact pass starts from a
        // small working set instead of everything the float pass touched.
        WarmStart w;
        for (int l = 0; l < nact(); ++l)
            if (vstat_[static_cast<std::size_t>(m_ + l)] != kBasic)
                w.active.push_back(active_[static_cast<std::size_t>(l)]);
        for (int r = 0; r < nact(); ++r) {
            int var = basis_[static_cast<std::size_t>(r)];
            if (var < m_) w.basis.push_back(var);
        }
        if (w.basis.size() != w.active.size()) return {};  // repair broke the pairing
        w.vstat.assign(vstat_.begin(), vstat_.begin() + m_);
        for (int l = 0; l < nact(); ++l)
            if (vstat_[static_cast<std::size_t>(m_ + l)] != kBasic)
                w.vstat.push_back(vstat_[static_cast<std::size_t>(m_ + l)]);
        w.usable = true;
        return w;
    }

private:
    const LPInstance& lp_;
    int m_ = 0;
    std::vector<std::vector<std::pair<int, double>>> acol_;
    std::vector<double> rhs_;
    std::vector<int> active_;
    std::vector<int> row_local_;
    std::vector<char> vstat_;
    std::vector<int> basis_;
    std::vector<double> xB_;
    struct Eta {
        int p;
        double wp;
        std::vector<std::pair<int, double>> others;
    };
    LuFactor<double> lu_;
    std::vector<Eta> etas_;  // updates since the last refactorization
    std::vector<double> cost_;
    std::vector<double> devex_;  // persists across activation rounds
    int pivots_since_refactor_ = 0;
    std::uint64_t iterations_ = 0;
    double t0_ = now_s();

    double cost_of(int var) const {
        return var < m_ ? cost_[static_cast<std::size_t>(var)] : 0.0;
    }

    static constexpr double kFeasTol = 1e-7;
    static constexpr double kCostTol = 1e-7;
    static constexpr double kPivotTol = 1e-9;

    int nact() const { return static_cast<int>(active_.size()); }
    int nvars() const { return m_ + nact(); }

    void activate(int global_row) {
        int local = nact();
        row_local_[static_cast<std::size_t>(global_row)] = local;
        active_.push_back(global_row);
        basis_.push_back(m_ + local);
        xB_.push_back(0);
        vstat_.push_back(kBasic);
    }

    double lo_of(int var) const {
        if (var < m_) return lp_.cols[static_cast<std::size_t>(var)].lower.get_d();
        Rel rel = lp_.rows[static_cast<std::size_t>(active_[static_cast<std::size_t>(var - m_)])].rel;
        return rel == Rel::Ge ? -kInf : 0.0;
    }
    double up_of(int var) const {
        if (var < m_) {
            const auto& u = lp_.cols[static_cast<std::size_t>(var)].upper;
            return u ? u->get_d() : kInf;
        }
        Rel rel = lp_.rows[static_cast<std::size_t>(active_[static_cast<std::size_t>(var - m_)])].rel;
        return rel == Rel::Le ? kInf : 0.0;
    }

    template <typename Fn>
    void for_col(int var, Fn&& fn) const {
        if (var < m_) {
            for (const auto& [grow, coef] : acol_[static_cast<std::size_t>(var)]) {
                int l = row_local_[static_cast<std::size_t>(grow)];
                if (l >= 0) fn(l, coef);
            }
        } else {
            fn(var - m_, 1.0);
        }
    }

    void ftran(std::vector<double>& v) const {
        lu_.solve_cols(v);
        for (const auto& e : etas_) {
            double t = v[static_cast<std::size_t>(e.p)];
            if (t == 0) continue;
            t /= e.wp;
            for (const auto& [i, wi] : e.others) v[static_cast<std::size_t>(i)] -= wi * t;
            v[static_cast<std::size_t>(e.p)] = t;
        }
    }

    void btran(std::vector<double>& y) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = 0;
            for (const auto& [i, wi] : it->others) s += y[static_cast<std::size_t>(i)] * wi;
            double& yp = y[static_cast<std::size_t>(it->p)];
            yp = (yp - s) / it->wp;
        }
        lu_.solve_rows(y);
    }

    // Refactor the recorded basis. Structural columns that have gone
    // numerically singular are dropped to a bound and the rows they leave
    // unpivoted are repaired with logicals; false only if that keeps failing.
    bool refactorize() {
        etas_.clear();
        pivots_since_refactor_ = 0;
        const int n = nact();
        for (int attempt = 0; attempt < 5; ++attempt) {
            std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(n));
            for (int r = 0; r < n; ++r) {
                int var = basis_[static_cast<std::size_t>(r)];
                auto& col = cols[static_cast<std::size_t>(r)];
                if (var >= m_) col.emplace_back(var - m_, 1.0);
                else for_col(var, [&](int l, double c) { col.emplace_back(l, c); });
            }
            auto out = lu_.factor(n, cols);
            if (out.dropped_slots.empty()) return true;
            for (std::size_t i = 0; i < out.dropped_slots.size(); ++i) {
                int slot = out.dropped_slots[i];
                int var = basis_[static_cast<std::size_t>(slot)];
                vstat_[static_cast<std::size_t>(var)] =
                    lo_of(var) > -kInf ? kAtLower : kAtUpper;
                int lr = out.spare_rows[i];
                basis_[static_cast<std::size_t>(slot)] = m_ + lr;
                vstat_[static_cast<std::size_t>(m_ + lr)] = kBasic;
            }
        }
        return false;
    }

    void push_eta(int p, const std::vector<double>& w) {
        Eta e;
        e.p = p;
        e.wp = w[static_cast<std::size_t>(p)];
        for (int r = 0; r < nact(); ++r)
            if (r != p && w[static_cast<std::size_t>(r)] != 0)
                e.others.emplace_back(r, w[static_cast<std::size_t>(r)]);
        etas_.push_back(std::move(e));
    }

    void recompute_basics() {
        std::vector<double> v(static_cast<std::size_t>(nact()), 0.0);
        for (int l = 0; l < nact(); ++l)
            v[static_cast<std::size_t>(l)] = rhs_[static_cast<std::size_t>(active_[static_cast<std::size_t>(l)])];
        for (int var = 0; var < nvars(); ++var) {
            if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
            double xv = vstat_[static_cast<std::size_t>(var)] == kAtLower ? lo_of(var) : up_of(var);
            if (xv == 0) continue;
            for_col(var, [&](int l, double c) { v[static_cast<std::size_t>(l)] -= c * xv; });
        }
        ftran(v);
        xB_ = std::move(v);
    }

    // Reduced costs of the (perturbed) objective, basic entries zero.
    void compute_reduced(std::vector<double>& d) {
        std::vector<double> y(static_cast<std::size_t>(nact()), 0.0);
        for (int r = 0; r < nact(); ++r)
            y[static_cast<std::size_t>(r)] = cost_of(basis_[static_cast<std::size_t>(r)]);
        btran(y);
        d.assign(static_cast<std::size_t>(nvars()), 0.0);
        for (int var = 0; var < nvars(); ++var) {
            if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
            double dv = cost_of(var);
            for_col(var, [&](int l, double c) { dv -= y[static_cast<std::size_t>(l)] * c; });
            d[static_cast<std::size_t>(var)] = dv;
        }
    }

    // Dual simplex: picks the worst primal-infeasible row, prices its basis
    // inverse row against the nonbasic columns and pivots so dual feasibility
    // is preserved. 0 = optimal on the active rows, 1 = stuck, -1 = garbage.
    int iterate_dual() {
        std::vector<double> d, rho, alpha, w;
        compute_reduced(d);
        // Devex-style row weights; violations are compared scaled by them so
        // rows with a blown-up inverse row do not hog the pivot choice.
        auto& gamma = devex_;
        gamma.resize(static_cast<std::size_t>(nact()), 1.0);
        // Rows where the ratio test comes up empty get banned until the next
        // pivot or refactorization instead of killing the whole pass.
        std::vector<std::uint64_t> banned(static_cast<std::size_t>(nact()), 0);
        std::uint64_t epoch = 1;
        bool retried = false;
        const std::uint64_t cap = iterations_ + 200000;
        for (;;) {
            if (iterations_ >= cap) return 1;
            int leave_row = -1;
            bool skipped = false;
            double worst = kFeasTol, best_score = 0;
            for (int r = 0; r < nact(); ++r) {
                double xv = xB_[static_cast<std::size_t>(r)];
                if (!std::isfinite(xv)) return -1;
                int var = basis_[static_cast<std::size_t>(r)];
                double v = std::max(lo_of(var) - xv, xv - up_of(var));
                if (v <= kFeasTol) continue;
                if (banned[static_cast<std::size_t>(r)] == epoch) {
                    skipped = true;
                    continue;
                }
                double score = v * v / gamma[static_cast<std::size_t>(r)];
                if (leave_row < 0 || score > best_score) {
                    best_score = score;
                    worst = v;
                    leave_row = r;
                }
            }
            if (leave_row < 0) {
                if (!skipped) return 0;
                if (retried) return 1;
                // A fresh factorization may rescue rows that only look
                // unpivotable through accumulated eta noise.
                if (!refactorize()) return -1;
                recompute_basics();
                compute_reduced(d);
                retried = true;
                ++epoch;
                continue;
            }
            int leave_var = basis_[static_cast<std::size_t>(leave_row)];
            double lo = lo_of(leave_var), up = up_of(leave_var);
            bool at_upper = xB_[static_cast<std::size_t>(leave_row)] > up;
            double leave_bound = at_upper ? up : lo;
            double s = at_upper ? 1.0 : -1.0;

            rho.assign(static_cast<std::size_t>(nact()), 0.0);
            rho[static_cast<std::size_t>(leave_row)] = 1.0;
            btran(rho);

            alpha.assign(static_cast<std::size_t>(nvars()), 0.0);
            for (int var = 0; var < m_; ++var) {
                if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
                double a = 0;
                for_col(var, [&](int l, double c) { a += rho[static_cast<std::size_t>(l)] * c; });
                alpha[static_cast<std::size_t>(var)] = a;
            }
            for (int l = 0; l < nact(); ++l) {
                int var = m_ + l;
                if (vstat_[static_cast<std::size_t>(var)] != kBasic)
                    alpha[static_cast<std::size_t>(var)] = rho[static_cast<std::size_t>(l)];
            }

            int enter = -1;
            double best_ratio = 0, best_abs = 0;
            for (int var = 0; var < nvars(); ++var) {
                if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
                if (lo_of(var) == up_of(var)) continue;  // fixed, cannot move
                double ab = s * alpha[static_cast<std::size_t>(var)];
                bool lower = vstat_[static_cast<std::size_t>(var)] == kAtLower;
                if (lower ? ab <= kPivotTol : ab >= -kPivotTol) continue;
                double ratio = d[static_cast<std::size_t>(var)] / ab;
                if (ratio < 0) ratio = 0;
                if (enter < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && std::abs(ab) > best_abs)) {
                    enter = var;
                    best_ratio = ratio;
                    best_abs = std::abs(ab);
                }
            }
            if (enter < 0) {  // no way to fix this row in doubles; try another
                banned[static_cast<std::size_t>(leave_row)] = epoch;
                continue;
            }

            w.assign(static_cast<std::size_t>(nact()), 0.0);
            for_col(enter, [&](int l, double c) { w[static_cast<std::size_t>(l)] = c; });
            ftran(w);
            double wr = w[static_cast<std::size_t>(leave_row)];
            if (std::abs(wr) <= kPivotTol || !std::isfinite(wr)) {
                banned[static_cast<std::size_t>(leave_row)] = epoch;
                continue;
            }

            ++iterations_;
            if (trace_on() && iterations_ % 2000 == 0)
                std::fprintf(stderr, "[float]   it %llu: dual, infeas %.3g, %d etas, %.1fs\n",
                             static_cast<unsigned long long>(iterations_), worst,
                             static_cast<int>(etas_.size()), now_s() - t0_);

            double t = (xB_[static_cast<std::size_t>(leave_row)] - leave_bound) / wr;
            for (int r = 0; r < nact(); ++r) {
                if (r == leave_row) continue;
                double wv = w[static_cast<std::size_t>(r)];
                if (wv != 0) xB_[static_cast<std::size_t>(r)] -= t * wv;
            }
            double enter_from =
                vstat_[static_cast<std::size_t>(enter)] == kAtLower ? lo_of(enter) : up_of(enter);
            xB_[static_cast<std::size_t>(leave_row)] = enter_from + t;
            if (!std::isfinite(xB_[static_cast<std::size_t>(leave_row)])) return -1;

            double theta = d[static_cast<std::size_t>(enter)] / alpha[static_cast<std::size_t>(enter)];
            for (int var = 0; var < nvars(); ++var) {
                if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
                double av = alpha[static_cast<std::size_t>(var)];
                if (av != 0) d[static_cast<std::size_t>(var)] -= theta * av;
            }
            d[static_cast<std::size_t>(enter)] = 0;
            d[static_cast<std::size_t>(leave_var)] = -theta;

            double glv = gamma[static_cast<std::size_t>(leave_row)];
            for (int r = 0; r < nact(); ++r) {
                if (r == leave_row) continue;
                double wv = w[static_cast<std::size_t>(r)];
                if (wv == 0) continue;
                double cand = (wv / wr) * (wv / wr) * glv;
                if (cand > gamma[static_cast<std::size_t>(r)])
                    gamma[static_cast<std::size_t>(r)] = cand;
            }
            gamma[static_cast<std::size_t>(leave_row)] = std::max(glv / (wr * wr), 1.0);

            vstat_[static_cast<std::size_t>(leave_var)] = at_upper ? kAtUpper : kAtLower;
            vstat_[static_cast<std::size_t>(enter)] = kBasic;
            basis_[static_cast<std::size_t>(leave_row)] = enter;
            push_eta(leave_row, w);
            ++epoch;
            retried = false;

            if (++pivots_since_refactor_ >= 100) {
                if (!refactorize()) return -1;
                recompute_basics();
                compute_reduced(d);
            }
        }
    }
};

// Bounded-variable primal simplex in product form. Variables are the
// structural columns followed by one logical per active row
// (sum a_ij x_j + s_i = b_i with s_i ranged by the row relation). The basis
// inverse is a Gauss-Jordan eta file rebuilt on refactorization.
class SimplexSolver {
public:
    SimplexSolver(const LPInstance& lp, const SolverOptions& opt) : lp_(lp), opt_(opt) {
        m_ = static_cast<int>(lp.cols.size());
        acol_.resize(static_cast<std::size_t>(m_));
        for (std::size_t i = 0; i < lp.rows.size(); ++i)
            for (const auto& t : lp.rows[i].terms)
                acol_[static_cast<std::size_t>(t.col)].emplace_back(static_cast<int>(i), t.coef);
        row_local_.assign(lp.rows.size(), -1);
        vstat_.assign(static_cast<std::size_t>(m_), kAtLower);
    }

    RationalSolution run(const WarmStart* warm) {
        bool fresh_warm = false;
        if (warm && warm->usable && opt_.lazy_rows) {
            install(*warm);
            fresh_warm = true;
        } else {
            for (std::size_t i = 0; i < lp_.rows.size(); ++i)
                if (!opt_.lazy_rows || lp_.rows[i].tag != RowTag::Elemental)
                    activate(static_cast<int>(i));
        }

        RationalSolution sol;
        for (;;) {
            if (fresh_warm) {
                // A basis nonsingular in doubles can still be exactly
                // singular; fall back to the all-logical basis then.
                try {
                    refactorize();
                } catch (const std::logic_error&) {
                    reset_logical_basis();
                    refactorize();
                }
                fresh_warm = false;
            } else {
                refactorize();
            }
            recompute_basics();
            SolveStatus st = iterate();
            if (st != SolveStatus::Optimal) {
                sol.status = st;
                sol.note = note_;
                fill_primal(sol);
                sol.dual.assign(lp_.rows.size(), Rat(0));
                sol.iterations = iterations_;
                return sol;
            }
            std::vector<Rat> x = current_point();
            std::vector<int> violated;
            for (std::size_t i = 0; i < lp_.rows.size(); ++i) {
                if (row_local_[i] >= 0) continue;
                const auto& r = lp_.rows[i];
                Rat lhs(0);
                for (const auto& t : r.terms) lhs += t.coef * x[static_cast<std::size_t>(t.col)];
                bool bad = (r.rel == Rel::Le && lhs > r.rhs) ||
                           (r.rel == Rel::Ge && lhs < r.rhs) ||
                           (r.rel == Rel::Eq && lhs != r.rhs);
                if (bad) violated.push_back(static_cast<int>(i));
            }
            if (trace_on())
                std::fprintf(stderr, "[exact] %d active, %zu violated, %llu iterations, %.1fs\n",
                             nact(), violated.size(),
                             static_cast<unsigned long long>(iterations_), now_s() - t0_);
            if (violated.empty()) {
                sol.status = SolveStatus::Optimal;
                sol.primal = std::move(x);
                sol.objective = sol.primal[static_cast<std::size_t>(lp_.load_col)];
                sol.dual = extract_duals();
                sol.iterations = iterations_;
                return sol;
            }
            for (int i : violated) activate(i);
        }
    }

private:
    const LPInstance& lp_;
    SolverOptions opt_;
    int m_ = 0;
    std::vector<std::vector<std::pair<int, Rat>>> acol_;  // per structural col: (global row, coef)
    std::vector<int> active_;     // local row -> global row
    std::vector<int> row_local_;  // global row -> local row or -1
    std::vector<char> vstat_;     // per variable
    std::vector<int> basis_;      // local row -> basic variable
    std::vector<Rat> xB_;         // local row -> basic value
    struct Eta {
        int p;
        Rat wp;
        std::vector<std::pair<int, Rat>> others;
    };
    LuFactor<Rat> lu_;
    std::vector<Eta> etas_;  // updates since the last refactorization
    int pivots_since_refactor_ = 0;
    std::uint64_t iterations_ = 0;
    int price_start_ = 0;
    int stall_ = 0;
    bool bland_ = false;
    std::string note_;
    double t0_ = now_s();

    int nact() const { return static_cast<int>(active_.size()); }
    int nvars() const { return m_ + nact(); }
    const LinearConstraint& arow(int local) const {
        return lp_.rows[static_cast<std::size_t>(active_[static_cast<std::size_t>(local)])];
    }

    void activate(int global_row) {
        int local = nact();
        row_local_[static_cast<std::size_t>(global_row)] = local;
        active_.push_back(global_row);
        basis_.push_back(m_ + local);  // fresh logical enters the basis
        xB_.push_back(Rat(0));
        vstat_.push_back(kBasic);
    }

    void install(const WarmStart& w) {
        for (int gr : w.active) activate(gr);
        if (w.basis.size() != active_.size() || w.vstat.size() != static_cast<std::size_t>(nvars()))
            throw std::logic_error("warm start does not match the instance");
        basis_ = w.basis;
        vstat_.assign(w.vstat.begin(), w.vstat.end());
        for (int var : basis_) vstat_[static_cast<std::size_t>(var)] = kBasic;
        // Every nonbasic variable must rest at a finite bound; snap any the
        // float pass left on the wrong side.
        for (int var = 0; var < nvars(); ++var) {
            if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
            if (vstat_[static_cast<std::size_t>(var)] == kAtLower && !lo_of(var))
                vstat_[static_cast<std::size_t>(var)] = kAtUpper;
            else if (vstat_[static_cast<std::size_t>(var)] == kAtUpper && !up_of(var))
                vstat_[static_cast<std::size_t>(var)] = kAtLower;
        }
        xB_.assign(active_.size(), Rat(0));
    }

    void reset_logical_basis() {
        for (int r = 0; r < nact(); ++r) basis_[static_cast<std::size_t>(r)] = m_ + r;
        for (int var = 0; var < m_; ++var)
            vstat_[static_cast<std::size_t>(var)] = kAtLower;
        for (int r = 0; r < nact(); ++r)
            vstat_[static_cast<std::size_t>(m_ + r)] = kBasic;
        etas_.clear();
    }

    const Rat* lo_of(int var) const {
        if (var < m_) return &lp_.cols[static_cast<std::size_t>(var)].lower;
        Rel rel = arow(var - m_).rel;
        return rel == Rel::Ge ? nullptr : &kZero;
    }
    const Rat* up_of(int var) const {
        if (var < m_) {
            const auto& u = lp_.cols[static_cast<std::size_t>(var)].upper;
            return u ? &*u : nullptr;
        }
        Rel rel = arow(var - m_).rel;
        return rel == Rel::Le ? nullptr : &kZero;
    }
    const Rat& nonbasic_value(int var) const {
        const Rat* b = vstat_[static_cast<std::size_t>(var)] == kAtLower ? lo_of(var) : up_of(var);
        if (!b) throw std::logic_error("nonbasic variable without a finite bound");
        return *b;
    }

    template <typename Fn>
    void for_col(int var, Fn&& fn) const {
        if (var < m_) {
            for (const auto& [grow, coef] : acol_[static_cast<std::size_t>(var)]) {
                int l = row_local_[static_cast<std::size_t>(grow)];
                if (l >= 0) fn(l, coef);
            }
        } else {
            fn(var - m_, Rat(1));
        }
    }

    void ftran(std::vector<Rat>& v) const {
        lu_.solve_cols(v);
        for (const auto& e : etas_) {
            if (sgn(v[static_cast<std::size_t>(e.p)]) == 0) continue;
            Rat t = v[static_cast<std::size_t>(e.p)] / e.wp;
            for (const auto& [i, wi] : e.others) v[static_cast<std::size_t>(i)] -= wi * t;
            v[static_cast<std::size_t>(e.p)] = std::move(t);
        }
    }

    void btran(std::vector<Rat>& y) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            Rat s(0);
            for (const auto& [i, wi] : it->others) {
                if (sgn(y[static_cast<std::size_t>(i)]) != 0) s += y[static_cast<std::size_t>(i)] * wi;
            }
            Rat& yp = y[static_cast<std::size_t>(it->p)];
            yp = (yp - s) / it->wp;
        }
        lu_.solve_rows(y);
    }

    void refactorize() {
        etas_.clear();
        pivots_since_refactor_ = 0;
        const int n = nact();
        std::vector<std::vector<std::pair<int, Rat>>> cols(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            int var = basis_[static_cast<std::size_t>(r)];
            auto& col = cols[static_cast<std::size_t>(r)];
            if (var >= m_) col.emplace_back(var - m_, Rat(1));
            else for_col(var, [&](int l, const Rat& c) { col.emplace_back(l, c); });
        }
        if (!lu_.factor(n, cols).dropped_slots.empty())
            throw std::logic_error("basis matrix is singular");
    }

    void push_eta(int p, const std::vector<Rat>& w) {
        Eta e;
        e.p = p;
        e.wp = w[static_cast<std::size_t>(p)];
        for (int r = 0; r < nact(); ++r)
            if (r != p && sgn(w[static_cast<std::size_t>(r)]) != 0)
                e.others.emplace_back(r, w[static_cast<std::size_t>(r)]);
        etas_.push_back(std::move(e));
    }

    void recompute_basics() {
        std::vector<Rat> v(static_cast<std::size_t>(nact()), Rat(0));
        for (int l = 0; l < nact(); ++l) v[static_cast<std::size_t>(l)] = arow(l).rhs;
        for (int var = 0; var < nvars(); ++var) {
            if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
            const Rat& xv = nonbasic_value(var);
            if (sgn(xv) == 0) continue;
            for_col(var, [&](int l, const Rat& c) { v[static_cast<std::size_t>(l)] -= c * xv; });
        }
        ftran(v);
        xB_ = std::move(v);
    }

    // Sum of bound violations over basic variables; sigma gets the sign.
    Rat infeasibility(std::vector<int>* sigma) const {
        Rat total(0);
        if (sigma) sigma->assign(static_cast<std::size_t>(nact()), 0);
        for (int r = 0; r < nact(); ++r) {
            int var = basis_[static_cast<std::size_t>(r)];
            const Rat& xv = xB_[static_cast<std::size_t>(r)];
            const Rat* lo = lo_of(var);
            const Rat* up = up_of(var);
            if (lo && xv < *lo) {
                total += *lo - xv;
                if (sigma) (*sigma)[static_cast<std::size_t>(r)] = -1;
            } else if (up && xv > *up) {
                total += xv - *up;
                if (sigma) (*sigma)[static_cast<std::size_t>(r)] = 1;
            }
        }
        return total;
    }

    SolveStatus iterate() {
        std::vector<Rat> y;
        std::vector<Rat> w;
        for (;;) {
            if (iterations_ >= opt_.max_iterations) {
                note_ = "iteration limit reached";
                return SolveStatus::IterLimit;
            }
            std::vector<int> sigma;
            Rat c1 = infeasibility(&sigma);
            bool phase1 = sgn(c1) != 0;

            y.assign(static_cast<std::size_t>(nact()), Rat(0));
            for (int r = 0; r < nact(); ++r) {
                if (phase1)
                    y[static_cast<std::size_t>(r)] = Rat(sigma[static_cast<std::size_t>(r)]);
                else if (basis_[static_cast<std::size_t>(r)] == lp_.load_col)
                    y[static_cast<std::size_t>(r)] = 1;
            }
            btran(y);

            auto reduced_cost = [&](int var) {
                Rat d = (!phase1 && var == lp_.load_col) ? Rat(1) : Rat(0);
                for_col(var, [&](int l, const Rat& c) {
                    if (sgn(y[static_cast<std::size_t>(l)]) != 0)
                        d -= y[static_cast<std::size_t>(l)] * c;
                });
                return d;
            };
            auto improving_dir = [&](int var, const Rat& d) -> int {
                char st = vstat_[static_cast<std::size_t>(var)];
                if (st == kBasic) return 0;
                const Rat* lo = lo_of(var);
                const Rat* up = up_of(var);
                if (lo && up && *lo == *up) return 0;  // fixed, typically an Eq logical
                if (st == kAtLower && sgn(d) < 0) return 1;
                if (st == kAtUpper && sgn(d) > 0) return -1;
                return 0;
            };

            int enter = -1, dir = 0;
            Rat enter_d;
            if (bland_) {
                for (int var = 0; var < nvars(); ++var) {
                    Rat d = reduced_cost(var);
                    int dd = improving_dir(var, d);
                    if (dd != 0) { enter = var; dir = dd; enter_d = std::move(d); break; }
                }
            } else {
                const int section = std::max(256, nvars() / 16);
                int examined = 0;
                Rat best_abs;
                for (int off = 0; off < nvars(); ++off) {
                    int var = (price_start_ + off) % nvars();
                    if (vstat_[static_cast<std::size_t>(var)] == kBasic) continue;
                    Rat d = reduced_cost(var);
                    int dd = improving_dir(var, d);
                    ++examined;
                    if (dd != 0) {
                        Rat a = abs(d);
                        if (enter < 0 || a > best_abs) {
                            enter = var;
                            dir = dd;
                            enter_d = d;
                            best_abs = std::move(a);
                        }
                    }
                    if (enter >= 0 && examined >= section) {
                        price_start_ = (var + 1) % nvars();
                        break;
                    }
                }
            }
            if (enter < 0) {
                if (phase1) {
                    note_ = "phase 1 optimum with residual infeasibility " + rat_string(c1);
                    return SolveStatus::Infeasible;
                }
                return SolveStatus::Optimal;
            }

            w.assign(static_cast<std::size_t>(nact()), Rat(0));
            for_col(enter, [&](int l, const Rat& c) { w[static_cast<std::size_t>(l)] = c; });
            ftran(w);

            // Ratio test. The entering variable's own opposite bound seeds the
            // step limit (a bound flip); basic variables block after that.
            bool have_t = false, flip = false;
            Rat t;
            int leave_row = -1, leave_var = enter;
            bool leave_at_up = false;
            {
                const Rat* lo = lo_of(enter);
                const Rat* up = up_of(enter);
                if (lo && up) {
                    t = *up - *lo;
                    have_t = true;
                    flip = true;
                }
            }
            for (int r = 0; r < nact(); ++r) {
                const Rat& wr = w[static_cast<std::size_t>(r)];
                int sw = sgn(wr);
                if (sw == 0) continue;
                int var = basis_[static_cast<std::size_t>(r)];
                const Rat& xv = xB_[static_cast<std::size_t>(r)];
                const Rat* lo = lo_of(var);
                const Rat* up = up_of(var);
                // d(xB_r)/dt = -dir*wr
                int slope = (dir > 0) ? -sw : sw;
                bool below = phase1 && lo && xv < *lo;
                bool above = phase1 && up && xv > *up;
                Rat tr;
                bool at_up_block;
                if (below) {
                    if (slope <= 0) continue;  // moving further down is priced into the objective
                    tr = (*lo - xv) / (dir > 0 ? -wr : wr);
                    at_up_block = false;
                } else if (above) {
                    if (slope >= 0) continue;
                    tr = (*up - xv) / (dir > 0 ? -wr : wr);
                    at_up_block = true;
                } else if (slope < 0) {
                    if (!lo) continue;
                    tr = (xv - *lo) / (dir > 0 ? wr : -wr);
                    at_up_block = false;
                } else {
                    if (!up) continue;
                    tr = (*up - xv) / (dir > 0 ? -wr : wr);
                    at_up_block = true;
                }
                bool take = false;
                if (!have_t || tr < t) {
                    take = true;
                } else if (tr == t && leave_row >= 0 && bland_ && var < leave_var) {
                    take = true;
                } else if (tr == t && flip && bland_ && var < leave_var) {
                    take = true;
                }
                if (take) {
                    t = std::move(tr);
                    have_t = true;
                    flip = false;
                    leave_row = r;
                    leave_var = var;
                    leave_at_up = at_up_block;
                }
            }
            if (!have_t) {
                if (phase1) throw std::logic_error("phase 1 ratio test found no blocking bound");
                note_ = "column " + lp_.cols[static_cast<std::size_t>(enter)].name +
                        " improves without bound";
                return SolveStatus::Unbounded;
            }

            ++iterations_;
            if (trace_on() && iterations_ % 200 == 0)
                std::fprintf(stderr, "[exact]   it %llu: %s, %d etas, %.1fs\n",
                             static_cast<unsigned long long>(iterations_),
                             phase1 ? "phase 1" : "phase 2",
                             static_cast<int>(etas_.size()), now_s() - t0_);
            if (sgn(t) == 0) {
                if (++stall_ > 100) bland_ = true;
            } else {
                stall_ = 0;
                bland_ = false;
            }

            if (flip) {
                // The entering variable walks to its other bound; no pivot.
                for (int r = 0; r < nact(); ++r) {
                    const Rat& wr = w[static_cast<std::size_t>(r)];
                    if (sgn(wr) == 0) continue;
                    if (dir > 0) xB_[static_cast<std::size_t>(r)] -= t * wr;
                    else xB_[static_cast<std::size_t>(r)] += t * wr;
                }
                vstat_[static_cast<std::size_t>(enter)] =
                    vstat_[static_cast<std::size_t>(enter)] == kAtLower ? kAtUpper : kAtLower;
                continue;
            }

            Rat enter_val = nonbasic_value(enter);
            if (dir > 0) enter_val += t; else enter_val -= t;
            for (int r = 0; r < nact(); ++r) {
                const Rat& wr = w[static_cast<std::size_t>(r)];
                if (sgn(wr) == 0) continue;
                if (dir > 0) xB_[static_cast<std::size_t>(r)] -= t * wr;
                else xB_[static_cast<std::size_t>(r)] += t * wr;
            }
            vstat_[static_cast<std::size_t>(leave_var)] = leave_at_up ? kAtUpper : kAtLower;
            vstat_[static_cast<std::size_t>(enter)] = kBasic;
            basis_[static_cast<std::size_t>(leave_row)] = enter;
            xB_[static_cast<std::size_t>(leave_row)] = std::move(enter_val);
            push_eta(leave_row, w);

            if (++pivots_since_refactor_ >= opt_.refactor_interval) {
                refactorize();
                recompute_basics();
            }
        }
    }

    std::vector<Rat> current_point() const {
        std::vector<Rat> x(static_cast<std::size_t>(m_), Rat(0));
        for (int var = 0; var < m_; ++var)
            if (vstat_[static_cast<std::size_t>(var)] != kBasic) x[static_cast<std::size_t>(var)] = nonbasic_value(var);
        for (int r = 0; r < nact(); ++r)
            if (basis_[static_cast<std::size_t>(r)] < m_)
                x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = xB_[static_cast<std::size_t>(r)];
        return x;
    }

    void fill_primal(RationalSolution& sol) const {
        sol.primal = current_point();
        if (lp_.load_col >= 0 && lp_.load_col < m_)
            sol.objective = sol.primal[static_cast<std::size_t>(lp_.load_col)];
    }

    std::vector<Rat> extract_duals() const {
        std::vector<Rat> y(static_cast<std::size_t>(nact()), Rat(0));
        for (int r = 0; r < nact(); ++r)
            if (basis_[static_cast<std::size_t>(r)] == lp_.load_col)
                y[static_cast<std::size_t>(r)] = 1;
        btran(y);
        std::vector<Rat> full(lp_.rows.size(), Rat(0));
        for (int l = 0; l < nact(); ++l)
            full[static_cast<std::size_t>(active_[static_cast<std::size_t>(l)])] =
                y[static_cast<std::size_t>(l)];
        return full;
    }
};

}  // namespace

RationalSolution solve(const LPInstance& lp, const SolverOptions& opt) {
    if (lp.load_col < 0 || lp.load_col >= static_cast<int>(lp.cols.size()))
        throw std::invalid_argument("LP has no load column");
    WarmStart warm;
    if (opt.float_warmstart && opt.lazy_rows && lp.rows.size() >= 2000)
        warm = FloatSimplex(lp).run();
    SimplexSolver s(lp, opt);
    return s.run(warm.usable ? &warm : nullptr);
}

CertificateReport verify_certificate(const LPInstance& lp, const RationalSolution& sol) {
    CertificateReport rep;
    if (sol.status != SolveStatus::Optimal) {
        rep.first_violation = "solution status is not optimal";
        return rep;
    }
    if (sol.primal.size() != lp.cols.size() || sol.dual.size() != lp.rows.size()) {
        rep.first_violation = "certificate vectors have the wrong dimensions";
        return rep;
    }

    rep.primal_feasible = true;
    for (std::size_t j = 0; j < lp.cols.size() && rep.primal_feasible; ++j) {
        const auto& c = lp.cols[j];
        if (sol.primal[j] < c.lower || (c.upper && sol.primal[j] > *c.upper)) {
            rep.primal_feasible = false;
            rep.first_violation = "column " + c.name + " is outside its bounds";
        }
    }
    for (std::size_t i = 0; i < lp.rows.size() && rep.primal_feasible; ++i) {
        const auto& r = lp.rows[i];
        Rat lhs(0);
        for (const auto& t : r.terms) lhs += t.coef * sol.primal[static_cast<std::size_t>(t.col)];
        bool ok = (r.rel == Rel::Le && lhs <= r.rhs) || (r.rel == Rel::Ge && lhs >= r.rhs) ||
                  (r.rel == Rel::Eq && lhs == r.rhs);
        if (!ok) {
            rep.primal_feasible = false;
            rep.first_violation = "row " + std::to_string(i) + " (" + row_tag_name(r.tag) +
                                  ") is violated by the primal point";
        }
    }
    if (sol.primal[static_cast<std::size_t>(lp.load_col)] != sol.objective) {
        rep.primal_feasible = false;
        rep.first_violation = "objective value disagrees with the load column";
    }

    rep.dual_feasible = true;
    Rat dual_obj(0);
    for (std::size_t i = 0; i < lp.rows.size() && rep.dual_feasible; ++i) {
        const auto& r = lp.rows[i];
        const Rat& yi = sol.dual[i];
        if ((r.rel == Rel::Le && yi > 0) || (r.rel == Rel::Ge && yi < 0)) {
            rep.dual_feasible = false;
            rep.first_violation = "row " + std::to_string(i) + " has a dual of the wrong sign";
        }
        dual_obj += yi * r.rhs;
    }
    if (rep.dual_feasible) {
        std::vector<Rat> d(lp.cols.size(), Rat(0));
        d[static_cast<std::size_t>(lp.load_col)] = 1;
        for (std::size_t i = 0; i < lp.rows.size(); ++i) {
            const Rat& yi = sol.dual[i];
            if (sgn(yi) == 0) continue;
            for (const auto& t : lp.rows[i].terms)
                d[static_cast<std::size_t>(t.col)] -= yi * t.coef;
        }
        for (std::size_t j = 0; j < lp.cols.size() && rep.dual_feasible; ++j) {
            int s = sgn(d[j]);
            if (s > 0) {
                dual_obj += d[j] * lp.cols[j].lower;
            } else if (s < 0) {
                if (!lp.cols[j].upper) {
                    rep.dual_feasible = false;
                    rep.first_violation = "column " + lp.cols[j].name +
                                          " has negative reduced cost but no upper bound";
                } else {
                    dual_obj += d[j] * *lp.cols[j].upper;
                }
            }
        }
    }

    if (rep.primal_feasible && rep.dual_feasible) {
        if (sol.objective == dual_obj) {
            rep.duality_gap_zero = true;
        } else {
            rep.first_violation = "duality gap " + rat_string(sol.objective - dual_obj);
        }
    }
    return rep;
}

}  // namespace cachelp
