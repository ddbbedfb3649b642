#ifndef CACHELP_LPBUILD_HPP
#define CACHELP_LPBUILD_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cachelp/model.hpp"
#include "cachelp/symmetry.hpp"

namespace cachelp {

enum class Rel : std::uint8_t { Le, Eq, Ge };

// Which rule emitted a row.
enum class RowTag : std::uint8_t {
    Elemental, File, Cache, Signal, Decode, Collapse, Ci, ObjectiveLink
};
constexpr int kNumRowTags = 8;
const char* row_tag_name(RowTag t);

// A constraint over raw subset masks, before any merging. The special load
// column r is represented by the sentinel term subset kLoadTerm.
constexpr Mask kLoadTerm = 0xffffffffu;

struct RawTerm {
    Mask subset;  // kLoadTerm stands for the load column r
    Rat coef;
};

struct RawConstraint {
    std::vector<RawTerm> terms;
    Rel rel = Rel::Ge;
    Rat rhs;
    RowTag tag = RowTag::Elemental;
};

GroundSet build_ground_set(const TradeoffSpec& spec);

// Yeung's minimal elemental family over g: n rows H(V_i | V_{[n]\{i}}) >= 0
// plus, for each unordered pair {i,j} and each A subset of the rest,
// I(V_i; V_j | V_A) >= 0. Count: n + C(n,2) * 2^(n-2). Throws when the ground
// set exceeds the cap; the assembler streams these instead of materializing.
std::vector<RawConstraint> elemental_inequalities(const GroundSet& g, int cap = 18);

// Streaming form used by the assembler.
void for_each_elemental(const GroundSet& g, const std::function<void(const RawConstraint&)>& fn);

// The coded-caching constraints with B = 1, in joint-entropy form:
// file subsets H(W_S) = |S|; cache H(Z_k) <= M and H(Z_k, W_all) = H(W_all);
// signal H(X_d) <= r and H(X_d, W_all) = H(W_all); decoding
// H(W_{d_k}, Z_k, X_d) = H(Z_k, X_d) per selected demand and user.
std::vector<RawConstraint> problem_constraints(const TradeoffSpec& spec, const Rat& memory);

// The three CI rows for the declaration occupying aux slot aux_slot:
// H(C,A) = H(A), H(C,B) = H(B), H(C) = H(A) + H(B) - H(A,B).
std::vector<RawConstraint> ci_constraints(const CISpec& ci, int aux_slot, const GroundSet& g);

// The constant N when the subset's caches and signals decode every file
// missing from its file part (union of demanded-file coverage plus the file
// part equals [N]); CI members contribute no coverage. Also N when the file
// part is already all of [N].
std::optional<Rat> library_collapse(Mask s, const GroundSet& g);

// Functional-dependence closure of s: repeatedly add W_{d_k} whenever Z_k and
// X_d both belong, add C whenever one side of its CI declaration is contained,
// and jump to the full ground set once every file is present. H(S) = H(cl(S))
// at every feasible point of the unreduced LP, so columns are merged by
// closure.
Mask closure_of(Mask s, const GroundSet& g, const std::vector<CISpec>& cis);

struct LinTerm {
    int col;
    Rat coef;
};

struct LinearConstraint {
    std::vector<LinTerm> terms;  // sorted by col, no zero coefficients
    Rel rel = Rel::Ge;
    Rat rhs;
    RowTag tag = RowTag::Elemental;
};

struct LPColumn {
    bool is_load = false;
    Mask subset = 0;  // smallest member of its merged class when !is_load
    std::string name;
    Rat lower;                    // all columns here have lower bound 0
    std::optional<Rat> upper;     // unbounded above unless fixed
};

struct BuildStats {
    std::uint64_t raw_rows = 0;        // generated before reduction
    std::uint64_t kept_rows = 0;
    std::uint64_t dropped_tautologies = 0;
    std::uint64_t merged_duplicates = 0;
    std::uint64_t free_columns = 0;
    std::uint64_t fixed_columns = 0;   // substituted constants
    std::array<std::uint64_t, kNumRowTags> rows_per_tag{};
    std::size_t group_size = 0;
};

struct LPInstance {
    GroundSet ground;
    std::vector<LPColumn> cols;
    int load_col = -1;               // objective: minimize this column
    std::vector<LinearConstraint> rows;
    std::string label;
    Rat memory;
    BuildStats stats;
};

// Memory-independent reduced skeleton: rows carry rhs = rhs_const * unit +
// rhs_mem * M so a sweep rebuilds only the right-hand sides.
struct SkeletonRow {
    std::vector<LinTerm> terms;
    Rel rel = Rel::Ge;
    Rat rhs_const;
    Rat rhs_mem;
    RowTag tag = RowTag::Elemental;
};

struct LPSkeleton {
    GroundSet ground;
    std::vector<CISpec> cis;
    std::vector<LPColumn> cols;
    int load_col = -1;
    std::vector<SkeletonRow> rows;
    std::string label;
    BuildStats stats;
    // Where each subset's entropy ended up, indexed by mask: v >= 0 is a
    // column id, v <= -2 a constant entropy of -(v + 2). Entry 0 is -2.
    std::vector<std::int32_t> rewrite;
};

struct BuildOptions {
    int ground_cap = 18;
};

LPSkeleton build_skeleton(const TradeoffSpec& spec, const BuildOptions& opt = {});

// unit rescales the file length B; every constant in the system scales with it
// (homogeneity of the entropic LP in B).
LPInstance instantiate(const LPSkeleton& sk, const Rat& memory, const Rat& unit = Rat(1));

// build_skeleton + instantiate.
LPInstance reduce_and_assemble(const TradeoffSpec& spec, const Rat& memory,
                               const BuildOptions& opt = {});

}  // namespace cachelp

#endif
