#include "cachelp/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <set>
#include <stdexcept>

#include "cachelp/solver.hpp"

namespace cachelp {

namespace {

std::vector<Rat> default_probes(const Problem& prob) {
    std::vector<Rat> probes;
    for (int m = 1; m < prob.num_files; ++m) probes.emplace_back(m);
    if (probes.empty()) probes.emplace_back(1);
    return probes;
}

struct Budgeted {
    const SearchBudget& budget;
    SearchTrace& trace;
    std::chrono::steady_clock::time_point last_solve_start;

    bool spent() const {
        return trace.truncated || trace.lp_solves >= budget.max_lp_solves;
    }

    // One LP value; marks the trace truncated when a budget runs out.
    std::optional<Rat> probe(const TradeoffSpec& spec, const Rat& memory) {
        if (spent()) {
            trace.truncated = true;
            return std::nullopt;
        }
        trace.lp_solves += 1;
        auto start = std::chrono::steady_clock::now();
        LPInstance lp = reduce_and_assemble(spec, memory);
        RationalSolution sol = solve(lp);
        if (budget.lp_seconds_cap > 0) {
            std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
            if (took.count() > budget.lp_seconds_cap) trace.truncated = true;
        }
        if (sol.status != SolveStatus::Optimal)
            throw std::runtime_error("search probe LP did not reach an optimum (" +
                                     std::string(solve_status_name(sol.status)) + ")");
        return sol.objective;
    }

    std::optional<std::vector<Rat>> probe_all(const TradeoffSpec& spec,
                                              const std::vector<Rat>& memories) {
        std::vector<Rat> vals;
        for (const Rat& m : memories) {
            auto v = probe(spec, m);
            if (!v) return std::nullopt;
            vals.push_back(std::move(*v));
        }
        return vals;
    }
};

Rat sum(const std::vector<Rat>& vals) {
    Rat s(0);
    for (const auto& v : vals) s += v;
    return s;
}

std::string demand_set_label(const std::vector<DemandVector>& demands) {
    std::string s;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        if (i) s += "+";
        s += demands[i].label();
    }
    return s;
}

}  // namespace

std::string SearchTrace::to_log() const {
    std::string out;
    for (const auto& step : steps) {
        out += step.candidate + ": probes[";
        for (std::size_t i = 0; i < step.probe_values.size(); ++i) {
            if (i) out += ", ";
            out += rat_string(step.probe_values[i]);
        }
        out += step.accepted ? "] accepted, best[" : "] rejected, best[";
        for (std::size_t i = 0; i < step.best_values.size(); ++i) {
            if (i) out += ", ";
            out += rat_string(step.best_values[i]);
        }
        out += "]\n";
    }
    out += "lp solves: " + std::to_string(lp_solves) + (truncated ? " (truncated)\n" : "\n");
    return out;
}

std::pair<TradeoffSpec, SearchTrace> greedy_demand_selection(
    const Problem& prob, const DemandType& type, const SearchBudget& budget) {
    SearchTrace trace;
    Budgeted run{budget, trace, {}};
    const std::vector<Rat> probes =
        budget.probe_memories.empty() ? default_probes(prob) : budget.probe_memories;

    TradeoffSpec best_spec;
    best_spec.prob = prob;
    std::vector<Rat> best_vals;

    const int seed_size = std::min(budget.max_demands, 2);
    for (const auto& cls : demand_subset_classes(prob, seed_size, {type})) {
        TradeoffSpec spec{prob, cls, {}, ""};
        auto vals = run.probe_all(spec, probes);
        if (!vals) break;
        SearchStep step;
        step.candidate = demand_set_label(cls);
        step.probe_values = *vals;
        step.accepted = best_vals.empty() || sum(*vals) > sum(best_vals);
        if (step.accepted) {
            best_spec = std::move(spec);
            best_vals = std::move(*vals);
        }
        step.best_values = best_vals;
        trace.steps.push_back(std::move(step));
    }
    if (best_vals.empty())
        throw std::runtime_error("demand search ran out of budget before scoring a seed");

    auto universe = demands_of_type(prob, type);
    while (static_cast<int>(best_spec.demands.size()) < budget.max_demands && !run.spent()) {
        std::optional<TradeoffSpec> round_spec;
        std::vector<Rat> round_vals;
        std::size_t round_step = 0;
        for (const auto& d : universe) {
            if (std::find(best_spec.demands.begin(), best_spec.demands.end(), d) !=
                best_spec.demands.end())
                continue;
            TradeoffSpec spec = best_spec;
            spec.demands.push_back(d);
            auto vals = run.probe_all(spec, probes);
            if (!vals) break;
            SearchStep step;
            step.candidate = "+" + d.label();
            step.probe_values = *vals;
            step.accepted = false;
            if (!round_spec || sum(*vals) > sum(round_vals)) {
                round_spec = std::move(spec);
                round_vals = std::move(*vals);
                round_step = trace.steps.size();
            }
            step.best_values = best_vals;
            trace.steps.push_back(std::move(step));
        }
        if (!round_spec || sum(round_vals) <= sum(best_vals)) break;  // nothing improves
        best_spec = std::move(*round_spec);
        best_vals = round_vals;
        trace.steps[round_step].accepted = true;
        trace.steps[round_step].best_values = std::move(round_vals);
    }

    best_spec.label = "search-" + demand_set_label(best_spec.demands);
    return {std::move(best_spec), std::move(trace)};
}

std::vector<CISpec> ci_candidate_pool(const TradeoffSpec& spec, int side_limit,
                                      std::size_t cap) {
    GroundSet g = build_ground_set(spec);
    const int nb = g.prob.num_files + g.prob.num_users + g.num_signals();

    std::vector<Mask> sides;
    for (int k = 1; k <= std::min(side_limit, nb); ++k) {
        Mask m = (Mask{1} << k) - 1;  // Gosper's hack walks the k-subsets in order
        while (m < (Mask{1} << nb)) {
            sides.push_back(m);
            Mask c = m & -m, r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
    }
    std::sort(sides.begin(), sides.end());
    if (sides.size() * sides.size() / 2 > cap)
        throw std::length_error("CI candidate pool would exceed " + std::to_string(cap) +
                                " side pairs");

    SymmetryGroup grp = admissible_group(g, spec.cis);
    auto canon_pair = [&](Mask a, Mask b) {
        if (a > b) std::swap(a, b);
        std::pair<Mask, Mask> best{a, b};
        for (const auto& p : grp.elements) {
            Mask ia = apply_to_set(p, a, g);
            Mask ib = apply_to_set(p, b, g);
            if (ia > ib) std::swap(ia, ib);
            if (std::pair{ia, ib} < best) best = {ia, ib};
        }
        return best;
    };

    std::set<std::pair<Mask, Mask>> seen;
    std::vector<std::pair<Mask, Mask>> kept;
    for (std::size_t i = 0; i < sides.size(); ++i)
        for (std::size_t j = i + 1; j < sides.size(); ++j) {
            Mask a = sides[i], b = sides[j];
            if (a & b) continue;
            auto key = canon_pair(a, b);
            if (seen.insert(key).second) kept.push_back(key);
        }
    std::sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
        int sx = std::popcount(x.first) + std::popcount(x.second);
        int sy = std::popcount(y.first) + std::popcount(y.second);
        if (sx != sy) return sx < sy;
        return x < y;
    });

    std::vector<CISpec> pool;
    for (const auto& [a, b] : kept) {
        CISpec ci;
        for (int bit = 0; bit < g.size(); ++bit) {
            if (a >> bit & 1u) ci.left.push_back(g.var_at(bit));
            if (b >> bit & 1u) ci.right.push_back(g.var_at(bit));
        }
        pool.push_back(std::move(ci));
    }
    return pool;
}

std::pair<TradeoffSpec, SearchTrace> ci_refinement(
    const TradeoffSpec& spec, const std::vector<CISpec>& pool, const SearchBudget& budget) {
    SearchTrace trace;
    Budgeted run{budget, trace, {}};
    const std::vector<Rat> probes =
        budget.probe_memories.empty() ? default_probes(spec.prob) : budget.probe_memories;

    TradeoffSpec best_spec = spec;
    auto base = run.probe_all(best_spec, probes);
    if (!base)
        throw std::runtime_error("CI search ran out of budget before scoring the base spec");
    std::vector<Rat> best_vals = std::move(*base);

    while (static_cast<int>(best_spec.cis.size()) < budget.max_cis && !run.spent()) {
        std::optional<TradeoffSpec> round_spec;
        std::vector<Rat> round_vals;
        std::size_t round_step = 0;
        for (const auto& ci : pool) {
            if (std::find(best_spec.cis.begin(), best_spec.cis.end(), ci) != best_spec.cis.end())
                continue;
            TradeoffSpec cand = best_spec;
            cand.cis.push_back(ci);
            auto vals = run.probe_all(cand, probes);
            if (!vals) break;
            SearchStep step;
            step.candidate = "+" + ci.text();
            step.probe_values = *vals;
            step.accepted = false;
            if (!round_spec || sum(*vals) > sum(round_vals)) {
                round_spec = std::move(cand);
                round_vals = std::move(*vals);
                round_step = trace.steps.size();
            }
            step.best_values = best_vals;
            trace.steps.push_back(std::move(step));
        }
        if (!round_spec || sum(round_vals) <= sum(best_vals)) break;
        best_spec = std::move(*round_spec);
        best_vals = round_vals;
        trace.steps[round_step].accepted = true;
        trace.steps[round_step].best_values = std::move(round_vals);
    }

    return {std::move(best_spec), std::move(trace)};
}

TradeoffCurve pointwise_max_curve(const std::vector<TradeoffCurve>& curves,
                                  const std::vector<Rat>& grid) {
    TradeoffCurve out;
    out.kind = CurveKind::Converse;
    for (const Rat& m : grid) {
        std::optional<Rat> best;
        for (const auto& c : curves) {
            auto v = c.eval(m);
            if (v && (!best || *v > *best)) best = std::move(v);
        }
        if (best) out.breakpoints.push_back({m, std::move(*best)});
    }
    return out;
}

}  // namespace cachelp
