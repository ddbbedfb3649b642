#ifndef CACHELP_BASELINES_HPP
#define CACHELP_BASELINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "cachelp/model.hpp"

namespace cachelp {

struct CurvePoint {
    Rat memory;
    Rat load;
    auto operator<=>(const CurvePoint&) const = default;
};

enum class CurveKind : std::uint8_t { Achievable, Converse };

// Piecewise-linear memory-load function over rational breakpoints with
// strictly increasing memories. Converses extend flat on both sides (a bound
// at M also bounds every smaller M, and stays valid with more memory).
// Achievable curves extend flat only rightward (more memory never hurts);
// left of their span they provide no guarantee and eval returns nothing.
struct TradeoffCurve {
    std::vector<CurvePoint> breakpoints;
    CurveKind kind = CurveKind::Converse;

    std::optional<Rat> eval(const Rat& memory) const;
};

// Uncoded-placement scheme corners (Nt/K, [C(K,t+1) - C(K-min(K,N),t+1)] / C(K,t))
// for t in [0:K].
std::vector<CurvePoint> yma_points(const Problem& prob);

// Coded-placement scheme corners (N/(Kt), N - N(N+1)/(K(t+1))) for t in [1:K].
// Requires K >= N; otherwise the curve is not applicable and is omitted from
// comparisons.
std::optional<std::vector<CurvePoint>> gv_points(const Problem& prob);

// Cut-set style converse corners ((N-l+1)/s, (s-1)/2 + l(l-1)/(2s)) over
// s in [1:min(N,K)], l in [1:s]; their envelope is the pointwise-max bound.
std::vector<CurvePoint> yu_thm2_points(const Problem& prob);

// Sharper small-memory converse: max over n in {max(1, K-N+1), ..., K-1} of a
// piecewise-linear expression in M, clamped below at 0. Not applicable for K = 1.
std::optional<Rat> yu_thm4_bound(const Problem& prob, const Rat& memory);

// Lower convex hull in the (M, R) plane restricted to the memory span of the
// inputs.
TradeoffCurve lower_convex_envelope(std::vector<CurvePoint> points, CurveKind kind);

// Pointwise min of the YMA envelope and (when K >= N) the GV envelope.
Rat best_achievable_at(const Problem& prob, const Rat& memory);

// Combined analytic converse: max of the yu_thm2_points envelope and
// yu_thm4_bound at M.
Rat analytic_converse_at(const Problem& prob, const Rat& memory);

struct GapSeries {
    std::string name;
    TradeoffCurve curve;
    bool lp_derived = false;  // negative gaps from LP converses raise the alarm
};

struct GapTable {
    std::vector<Rat> grid;
    std::vector<std::string> names;
    std::vector<std::vector<Rat>> gaps;  // gaps[i][j]: grid point i, series j
    bool alarm = false;                  // an LP-derived converse exceeded achievability
    std::string alarm_detail;
};

GapTable gap_table(const TradeoffCurve& achievable, const std::vector<GapSeries>& converses,
                   const std::vector<Rat>& grid);

// Step-spaced points over [1/(N-1), floor(max(N,K)/2)] plus the integer points
// of [0, N], deduplicated and sorted.
std::vector<Rat> default_memory_grid(const Problem& prob, const Rat& step = Rat(1, 8));

}  // namespace cachelp

#endif
