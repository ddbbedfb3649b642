#include "cachelp/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace cachelp {

namespace {

std::string var_id_name(const VarId& v) {
    switch (v.kind) {
        case VarKind::File:   return "W" + std::to_string(v.index);
        case VarKind::Cache:  return "Z" + std::to_string(v.index);
        case VarKind::Signal: return "Xd" + v.demand.label();
        case VarKind::Aux:    return "C" + std::to_string(v.index);
    }
    throw std::logic_error("bad VarKind");
}

}  // namespace

Rat parse_rat(const std::string& text) {
    auto bad = [&] { throw std::invalid_argument("not a rational: '" + text + "'"); };
    auto parse_int = [&](const std::string& s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) bad();
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') bad();
        return mpz_class(s);
    };
    auto slash = text.find('/');
    mpz_class num, den;
    if (slash == std::string::npos) {
        num = parse_int(text);
        den = 1;
    } else {
        num = parse_int(text.substr(0, slash));
        den = parse_int(text.substr(slash + 1));
        if (den == 0) bad();
    }
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_string(const Rat& q) {
    return q.get_str();
}

std::string rat_decimal(const Rat& q, int significant_digits) {
    if (significant_digits < 1) throw std::invalid_argument("need at least 1 significant digit");
    if (q == 0) return "0";
    mpz_class num = abs(q.get_num());
    mpz_class den = q.get_den();

    // Locate e with 10^e <= |q| < 10^(e+1).
    auto cmp_pow10 = [&](long k) {
        mpz_class lhs = num, rhs = den, p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k >= 0 ? k : -k));
        if (k >= 0) rhs *= p; else lhs *= p;
        return cmp(lhs, rhs);
    };
    long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
             static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
    while (cmp_pow10(e) < 0) --e;
    while (cmp_pow10(e + 1) >= 0) ++e;

    // Integer with significant_digits digits, rounded half away from zero.
    long shift = significant_digits - 1 - e;
    mpz_class n2 = num, d2 = den, p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift >= 0 ? shift : -shift));
    if (shift >= 0) n2 *= p; else d2 *= p;
    mpz_class scaled = (2 * n2 + d2) / (2 * d2);

    mpz_class limit;
    mpz_ui_pow_ui(limit.get_mpz_t(), 10, static_cast<unsigned long>(significant_digits));
    if (scaled >= limit) {  // rounding carried into one more digit
        scaled /= 10;
        ++e;
    }

    std::string digits = scaled.get_str();
    std::string out;
    if (e < 0) {
        out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + digits;
    } else if (e >= significant_digits - 1) {
        out = digits + std::string(static_cast<std::size_t>(e - significant_digits + 1), '0');
    } else {
        out = digits.substr(0, static_cast<std::size_t>(e + 1)) + "." +
              digits.substr(static_cast<std::size_t>(e + 1));
    }
    if (out.find('.') != std::string::npos) {
        out.erase(out.find_last_not_of('0') + 1);
        if (out.back() == '.') out.pop_back();
    }
    return (q < 0 ? "-" : "") + out;
}

Problem make_instance(int num_users, int num_files) {
    if (num_users < 1 || num_users > 16)
        throw std::invalid_argument("user count out of range: " + std::to_string(num_users));
    if (num_files < 1 || num_files > 10)
        throw std::invalid_argument("file count out of range: " + std::to_string(num_files));
    return Problem{num_users, num_files};
}

std::string DemandVector::label() const {
    std::string s;
    s.reserve(entries.size());
    for (auto e : entries) s.push_back(static_cast<char>('0' + e));
    return s;
}

DemandVector parse_demand_label(const std::string& label, const Problem& prob) {
    if (static_cast<int>(label.size()) != prob.num_users)
        throw std::invalid_argument("demand label '" + label + "' needs one digit per user");
    DemandVector d;
    d.entries.reserve(label.size());
    for (char c : label) {
        if (c < '0' || c > '9' || c - '0' >= prob.num_files)
            throw std::invalid_argument("demand label '" + label + "' has an invalid file digit");
        d.entries.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return d;
}

DemandType demand_type_of(const DemandVector& d, const Problem& prob) {
    DemandType counts(static_cast<std::size_t>(prob.num_files), 0);
    for (auto e : d.entries) counts[e] += 1;
    std::sort(counts.begin(), counts.end(), std::greater<>());
    return counts;
}

namespace {

void types_rec(int slots_left, int sum_left, int bound, DemandType& cur,
               std::vector<DemandType>& out) {
    if (slots_left == 0) {
        if (sum_left == 0) out.push_back(cur);
        return;
    }
    int lo = (sum_left + slots_left - 1) / slots_left;  // keep the tail feasible
    for (int v = std::min(bound, sum_left); v >= lo; --v) {
        cur.push_back(v);
        types_rec(slots_left - 1, sum_left - v, v, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<DemandType> enumerate_demand_types(const Problem& prob) {
    std::vector<DemandType> out;
    DemandType cur;
    types_rec(prob.num_files, prob.num_users, prob.num_users, cur, out);
    return out;
}

std::vector<DemandVector> demands_of_type(const Problem& prob, const DemandType& type) {
    std::vector<DemandVector> out;
    DemandVector d;
    d.entries.assign(static_cast<std::size_t>(prob.num_users), 0);
    for (;;) {
        if (demand_type_of(d, prob) == type) out.push_back(d);
        int k = prob.num_users - 1;
        while (k >= 0 && d.entries[static_cast<std::size_t>(k)] == prob.num_files - 1) {
            d.entries[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
        d.entries[static_cast<std::size_t>(k)] += 1;
    }
    return out;
}

VarId file_var(int n) { return VarId{VarKind::File, n, {}}; }
VarId cache_var(int k) { return VarId{VarKind::Cache, k, {}}; }
VarId signal_var(DemandVector d) { return VarId{VarKind::Signal, 0, std::move(d)}; }
VarId aux_var(int slot) { return VarId{VarKind::Aux, slot, {}}; }

std::string CISpec::text() const {
    auto side = [](const std::vector<VarId>& vs) {
        std::string s;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s += ",";
            s += var_id_name(vs[i]);
        }
        return s;
    };
    return "{" + side(left) + "; " + side(right) + "}";
}

int GroundSet::signal_index(const DemandVector& d) const {
    for (std::size_t i = 0; i < demands.size(); ++i)
        if (demands[i] == d) return static_cast<int>(i);
    return -1;
}

VarId GroundSet::var_at(int bit) const {
    if (bit < 0 || bit >= size()) throw std::out_of_range("variable bit out of range");
    if (bit < prob.num_files) return file_var(bit);
    bit -= prob.num_files;
    if (bit < prob.num_users) return cache_var(bit);
    bit -= prob.num_users;
    if (bit < num_signals()) return signal_var(demands[static_cast<std::size_t>(bit)]);
    bit -= num_signals();
    return aux_var(bit);
}

int GroundSet::bit_of(const VarId& v) const {
    switch (v.kind) {
        case VarKind::File:
            return (v.index >= 0 && v.index < prob.num_files) ? file_bit(v.index) : -1;
        case VarKind::Cache:
            return (v.index >= 0 && v.index < prob.num_users) ? cache_bit(v.index) : -1;
        case VarKind::Signal: {
            int i = signal_index(v.demand);
            return i < 0 ? -1 : signal_bit(i);
        }
        case VarKind::Aux:
            return (v.index >= 0 && v.index < num_aux) ? aux_bit(v.index) : -1;
    }
    return -1;
}

std::string GroundSet::var_name(int bit) const {
    return var_id_name(var_at(bit));
}

std::string set_name(Mask s, const GroundSet& g) {
    std::string out = "{";
    bool first = true;
    for (int b = 0; b < g.size(); ++b) {
        if (!(s >> b & 1u)) continue;
        if (!first) out += ",";
        first = false;
        out += g.var_name(b);
    }
    return out + "}";
}

}  // namespace cachelp
