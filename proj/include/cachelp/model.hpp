#ifndef CACHELP_MODEL_HPP
#define CACHELP_MODEL_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "cachelp/rational.hpp"

namespace cachelp {

// A (K, N) coded caching instance. File length is normalized to 1, so every
// entropy, memory and load value is in units of one file.
struct Problem {
    int num_users = 0;  // K
    int num_files = 0;  // N
    auto operator<=>(const Problem&) const = default;
};

Problem make_instance(int num_users, int num_files);

// entries[k] is the file index demanded by user k.
struct DemandVector {
    std::vector<std::uint8_t> entries;
    auto operator<=>(const DemandVector&) const = default;
    std::string label() const;  // digit string, e.g. "0012"
};

// Digit string, one digit per user, each digit < N. File indices above 9 never
// occur in the presets this models.
DemandVector parse_demand_label(const std::string& label, const Problem& prob);

// Nonincreasing length-N vector of request multiplicities, summing to K.
using DemandType = std::vector<int>;

DemandType demand_type_of(const DemandVector& d, const Problem& prob);

// All demand types, in lexicographically decreasing order.
std::vector<DemandType> enumerate_demand_types(const Problem& prob);

// Every demand vector of the given type, in increasing label order.
std::vector<DemandVector> demands_of_type(const Problem& prob, const DemandType& type);

enum class VarKind : std::uint8_t { File, Cache, Signal, Aux };

// One random variable of the ground set: file W_n, cache Z_k, delivery signal
// X_d, or auxiliary common-information variable C_i.
struct VarId {
    VarKind kind = VarKind::File;
    int index = 0;         // file/cache/aux index; unused for Signal
    DemandVector demand;   // Signal only

    auto operator<=>(const VarId&) const = default;
};

VarId file_var(int n);
VarId cache_var(int k);
VarId signal_var(DemandVector d);
VarId aux_var(int slot);

// Common information specification {left; right}: C with H(C|left) = 0,
// H(C|right) = 0, H(C) = I(left; right). Sides are over base (non-Aux)
// variables only.
struct CISpec {
    std::vector<VarId> left, right;
    auto operator<=>(const CISpec&) const = default;
    std::string text() const;  // "{W0,W1; Xd0123}"
};

// One experiment unit: an instance, a selected demand subset, and CI
// declarations. Corresponds to one preset such as T4.3.
struct TradeoffSpec {
    Problem prob;
    std::vector<DemandVector> demands;
    std::vector<CISpec> cis;
    std::string label;
};

// Fixed variable order: files, caches, signals in input order, CI variables in
// declaration order. Bit positions in a VarSet mask follow this order.
struct GroundSet {
    Problem prob;
    std::vector<DemandVector> demands;
    int num_aux = 0;

    int size() const { return prob.num_files + prob.num_users + static_cast<int>(demands.size()) + num_aux; }
    int file_bit(int n) const { return n; }
    int cache_bit(int k) const { return prob.num_files + k; }
    int signal_bit(int i) const { return prob.num_files + prob.num_users + i; }
    int aux_bit(int i) const { return prob.num_files + prob.num_users + static_cast<int>(demands.size()) + i; }
    int num_signals() const { return static_cast<int>(demands.size()); }

    int signal_index(const DemandVector& d) const;  // -1 when absent
    VarId var_at(int bit) const;
    int bit_of(const VarId& v) const;  // -1 when absent
    std::string var_name(int bit) const;
};

// Membership bitmask over a GroundSet. Bit i set means variable i belongs to
// the subset. The empty set has entropy 0 by convention and gets no LP column.
using Mask = std::uint32_t;

std::string set_name(Mask s, const GroundSet& g);  // "{W0,Z1,Xd012}"

}  // namespace cachelp

#endif
