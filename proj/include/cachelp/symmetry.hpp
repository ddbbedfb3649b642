#ifndef CACHELP_SYMMETRY_HPP
#define CACHELP_SYMMETRY_HPP

#include <vector>

#include "cachelp/model.hpp"

namespace cachelp {

// A combined file/user permutation (pi_hat, pi_bar), stored as image tables.
struct PermPair {
    std::vector<int> file_perm;  // file n maps to file_perm[n]
    std::vector<int> user_perm;  // user k maps to user_perm[k]

    bool operator==(const PermPair&) const = default;
    bool is_identity() const;
};

PermPair identity_pair(const Problem& prob);

// The action on demand vectors: d' = pi_hat o d o pi_bar^{-1}, i.e. the user
// at new position pi_bar(k) demands the relabeled file pi_hat(d_k).
DemandVector act_demand(const PermPair& p, const DemandVector& d);

// File(n) -> File(pi_hat(n)); Cache(k) -> Cache(pi_bar(k));
// Signal(d) -> Signal(act_demand(p, d)). Throws on Aux: CI variables are never
// permuted (their slots stay fixed; see admissible_group).
VarId apply_to_var(const PermPair& p, const VarId& v);

// Elementwise image; Aux bits stay in place. Throws when a signal image is not
// itself a member of g (such a pair is not admissible for this ground set).
Mask apply_to_set(const PermPair& p, Mask s, const GroundSet& g);

struct SymmetryGroup {
    std::vector<PermPair> elements;  // identity first, then deterministic order
    bool full_product = false;       // true when this is all of S_N x S_K

    std::size_t size() const { return elements.size(); }
};

// The full product group S_N x S_K.
SymmetryGroup full_group(const Problem& prob);

// The subgroup of S_N x S_K whose action maps the selected demand-signal set
// onto itself and maps each CI's unordered side pair {left; right} to the side
// pair of that same CI (sides may swap; Aux slots are never relabeled).
// Enumerates user permutations and solves for compatible file permutations
// instead of scanning all N!*K! pairs.
SymmetryGroup admissible_group(const GroundSet& g, const std::vector<CISpec>& cis);

// Lexicographically smallest bitmask in the orbit of s.
Mask canonicalize(Mask s, const SymmetryGroup& grp, const GroundSet& g);

// One lexicographically-least representative per equivalence class of
// size-subset_size demand sets whose members all have types in allowed_types.
// Grown by canonical augmentation from smaller classes.
std::vector<std::vector<DemandVector>> demand_subset_classes(
    const Problem& prob, int subset_size, const std::vector<DemandType>& allowed_types);

}  // namespace cachelp

#endif
