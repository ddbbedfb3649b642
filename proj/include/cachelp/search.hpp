#ifndef CACHELP_SEARCH_HPP
#define CACHELP_SEARCH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cachelp/baselines.hpp"
#include "cachelp/lpbuild.hpp"

namespace cachelp {

struct SearchBudget {
    int max_demands = 4;
    int max_cis = 2;
    std::vector<Rat> probe_memories;       // empty: integer memories of the target regime
    std::uint64_t max_lp_solves = 100000;
    double lp_seconds_cap = 0;             // 0 disables the per-LP wall clock cap
};

struct SearchStep {
    std::string candidate;         // demand label or CI text
    std::vector<Rat> probe_values; // LP value at each probe memory
    bool accepted = false;
    std::vector<Rat> best_values;  // cumulative accepted values per probe
};

struct SearchTrace {
    std::vector<SearchStep> steps;
    std::uint64_t lp_solves = 0;
    bool truncated = false;  // a budget ran out before the loop converged

    std::string to_log() const;  // one candidate per line with exact values
};

// Appendix-style greedy demand growth: start from the best size-2 class
// representative (or the best single representative when max_demands is 1),
// then add the class-representative demand that maximizes the LP value summed
// over probe memories, until nothing strictly improves any probe value.
std::pair<TradeoffSpec, SearchTrace> greedy_demand_selection(
    const Problem& prob, const DemandType& type, const SearchBudget& budget);

// All unordered disjoint side pairs {A; B} over the spec's base variables with
// side sizes <= side_limit, deduplicated under the spec's admissible group;
// deterministic order. Throws when the pool would exceed cap.
std::vector<CISpec> ci_candidate_pool(const TradeoffSpec& spec, int side_limit,
                                      std::size_t cap = 200000);

// Greedy CI growth from the pool under the budget.
std::pair<TradeoffSpec, SearchTrace> ci_refinement(
    const TradeoffSpec& spec, const std::vector<CISpec>& pool, const SearchBudget& budget);

// Grid-sampled pointwise maximum.
TradeoffCurve pointwise_max_curve(const std::vector<TradeoffCurve>& curves,
                                  const std::vector<Rat>& grid);

}  // namespace cachelp

#endif
