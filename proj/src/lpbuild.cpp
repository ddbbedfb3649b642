#include "cachelp/lpbuild.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace cachelp {

const char* row_tag_name(RowTag t) {
    switch (t) {
        case RowTag::Elemental:     return "elemental";
        case RowTag::File:          return "file";
        case RowTag::Cache:         return "cache";
        case RowTag::Signal:        return "signal";
        case RowTag::Decode:        return "decode";
        case RowTag::Collapse:      return "collapse";
        case RowTag::Ci:            return "ci";
        case RowTag::ObjectiveLink: return "load-link";
    }
    return "?";
}

GroundSet build_ground_set(const TradeoffSpec& spec) {
    const Problem& prob = spec.prob;
    if (prob.num_users < 1 || prob.num_files < 1)
        throw std::invalid_argument("instance has no users or no files");
    if (spec.demands.empty())
        throw std::invalid_argument("a tradeoff needs at least one selected demand");
    for (const auto& d : spec.demands) {
        if (static_cast<int>(d.entries.size()) != prob.num_users)
            throw std::invalid_argument("demand '" + d.label() + "' has the wrong length");
        for (auto e : d.entries)
            if (e >= prob.num_files)
                throw std::invalid_argument("demand '" + d.label() + "' requests a missing file");
    }
    for (std::size_t i = 0; i < spec.demands.size(); ++i)
        for (std::size_t j = i + 1; j < spec.demands.size(); ++j)
            if (spec.demands[i] == spec.demands[j])
                throw std::invalid_argument("demand '" + spec.demands[i].label() + "' selected twice");

    GroundSet g{prob, spec.demands, static_cast<int>(spec.cis.size())};
    for (const auto& ci : spec.cis) {
        for (const auto* side : {&ci.left, &ci.right}) {
            if (side->empty())
                throw std::invalid_argument("CI " + ci.text() + " has an empty side");
            for (const auto& v : *side) {
                if (v.kind == VarKind::Aux)
                    throw std::invalid_argument("CI " + ci.text() + " may not reference another CI");
                if (g.bit_of(v) < 0)
                    throw std::invalid_argument("CI " + ci.text() +
                                                " references a variable outside the ground set");
            }
        }
    }
    if (g.size() > 30)
        throw std::length_error("ground set has " + std::to_string(g.size()) +
                                " variables; the 30-bit subset mask limit is exceeded");
    return g;
}

namespace {

Mask full_mask(const GroundSet& g) { return (Mask{1} << g.size()) - 1; }

Mask files_mask(const GroundSet& g) { return (Mask{1} << g.prob.num_files) - 1; }

Mask side_mask(const std::vector<VarId>& side, const GroundSet& g) {
    Mask m = 0;
    for (const auto& v : side) {
        int b = g.bit_of(v);
        if (b < 0) throw std::invalid_argument("CI side variable outside the ground set");
        m |= Mask{1} << b;
    }
    return m;
}

struct ClosureRules {
    struct Decode { Mask need; Mask add; };
    std::vector<Decode> decodes;          // {Z_k, X_d} present -> W_{d_k}
    struct CiRule { Mask left, right, add; };
    std::vector<CiRule> ci_rules;         // a side present -> C
    Mask fmask = 0;
    Mask full = 0;

    Mask sweep(Mask s) const {
        Mask out = s;
        for (const auto& d : decodes)
            if ((s & d.need) == d.need) out |= d.add;
        for (const auto& c : ci_rules)
            if ((s & c.left) == c.left || (s & c.right) == c.right) out |= c.add;
        if ((out & fmask) == fmask) out = full;
        return out;
    }
};

ClosureRules make_rules(const GroundSet& g, const std::vector<CISpec>& cis) {
    ClosureRules r;
    r.fmask = files_mask(g);
    r.full = full_mask(g);
    for (int k = 0; k < g.prob.num_users; ++k)
        for (int i = 0; i < g.num_signals(); ++i) {
            Mask need = (Mask{1} << g.cache_bit(k)) | (Mask{1} << g.signal_bit(i));
            Mask add = Mask{1} << g.file_bit(g.demands[static_cast<std::size_t>(i)]
                                                 .entries[static_cast<std::size_t>(k)]);
            r.decodes.push_back({need, add});
        }
    for (std::size_t i = 0; i < cis.size(); ++i)
        r.ci_rules.push_back({side_mask(cis[i].left, g), side_mask(cis[i].right, g),
                              Mask{1} << g.aux_bit(static_cast<int>(i))});
    return r;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    v *= 0x9e3779b97f4a7c15ull;
    v ^= v >> 29;
    h = (h ^ v) * 0xbf58476d1ce4e5b9ull;
    return h ^ (h >> 32);
}

constexpr unsigned long kHashMod = (1ull << 61) - 1;

std::uint64_t mix_rat(std::uint64_t h, const Rat& q) {
    h = mix(h, mpz_fdiv_ui(mpq_numref(q.get_mpq_t()), kHashMod));
    h = mix(h, mpz_fdiv_ui(mpq_denref(q.get_mpq_t()), kHashMod));
    return h;
}

Rel flip_rel(Rel r) {
    if (r == Rel::Le) return Rel::Ge;
    if (r == Rel::Ge) return Rel::Le;
    return Rel::Eq;
}

bool rat_is_int(const Rat& q, long v) {
    return mpz_cmp_si(mpq_denref(q.get_mpq_t()), 1) == 0 &&
           mpz_cmp_si(mpq_numref(q.get_mpq_t()), v) == 0;
}

struct Assembler {
    GroundSet g;
    std::vector<CISpec> cis;
    SymmetryGroup grp;
    std::vector<Mask> cl;                 // closure table over all 2^n masks
    std::vector<std::int32_t> rewrite;    // >=0 column id, <= -2 fixed to -(v+2)
    std::vector<LPColumn> cols;
    int load_col = -1;
    std::vector<SkeletonRow> rows;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
    BuildStats stats;

    void keep(SkeletonRow&& row, std::uint64_t h) {
        stats.rows_per_tag[static_cast<int>(row.tag)] += 1;
        buckets[h].push_back(static_cast<std::uint32_t>(rows.size()));
        rows.push_back(std::move(row));
    }

    // Normalized integer-coefficient row (the elemental stream). rhs is
    // rhs_num/rhs_den with rhs_den > 0 and the fraction reduced.
    void insert_int_row(const int* tcols, const long* tcoefs, int tn, Rel rel,
                        long rhs_num, long rhs_den, RowTag tag) {
        std::uint64_t h = mix(0, static_cast<std::uint64_t>(rel));
        for (int t = 0; t < tn; ++t) {
            h = mix(h, static_cast<std::uint64_t>(tcols[t]));
            h = mix(h, static_cast<std::uint64_t>(tcoefs[t]) % kHashMod);
            h = mix(h, 1);  // denominator 1
        }
        h = mix(h, static_cast<std::uint64_t>(rhs_num) % kHashMod);
        h = mix(h, static_cast<std::uint64_t>(rhs_den));
        h = mix(h, 1);  // rhs_mem == 0
        h = mix(h, 1);
        auto it = buckets.find(h);
        if (it != buckets.end()) {
            for (auto ri : it->second) {
                const SkeletonRow& r = rows[ri];
                if (r.rel != rel || static_cast<int>(r.terms.size()) != tn) continue;
                if (r.rhs_mem != 0) continue;
                bool same = true;
                for (int t = 0; t < tn && same; ++t)
                    same = r.terms[static_cast<std::size_t>(t)].col == tcols[t] &&
                           rat_is_int(r.terms[static_cast<std::size_t>(t)].coef, tcoefs[t]);
                if (same &&
                    mpz_cmp_si(mpq_numref(r.rhs_const.get_mpq_t()), rhs_num) == 0 &&
                    mpz_cmp_si(mpq_denref(r.rhs_const.get_mpq_t()), rhs_den) == 0) {
                    stats.merged_duplicates += 1;
                    return;
                }
            }
        }
        SkeletonRow row;
        row.rel = rel;
        row.tag = tag;
        row.rhs_const = Rat(rhs_num, rhs_den);
        row.rhs_const.canonicalize();
        row.rhs_mem = 0;
        row.terms.reserve(static_cast<std::size_t>(tn));
        for (int t = 0; t < tn; ++t)
            row.terms.push_back(LinTerm{tcols[t], Rat(tcoefs[t])});
        keep(std::move(row), h);
    }

    // One raw elemental row given by up to four term masks with +-1 signs.
    void stream_row(const std::pair<Mask, int>* raw, int nraw) {
        stats.raw_rows += 1;
        int tcols[4];
        long tcoefs[4];
        int tn = 0;
        long rhs_acc = 0;
        for (int t = 0; t < nraw; ++t) {
            Mask m = raw[t].first;
            long c = raw[t].second;
            if (m == 0) continue;
            std::int32_t v = rewrite[m];
            if (v <= -2) {
                rhs_acc -= c * static_cast<long>(-2 - v);
                continue;
            }
            bool merged = false;
            for (int u = 0; u < tn; ++u)
                if (tcols[u] == v) { tcoefs[u] += c; merged = true; break; }
            if (!merged) { tcols[tn] = static_cast<int>(v); tcoefs[tn] = c; ++tn; }
        }
        // drop cancelled terms, sort by column
        int w = 0;
        for (int t = 0; t < tn; ++t)
            if (tcoefs[t] != 0) { tcols[w] = tcols[t]; tcoefs[w] = tcoefs[t]; ++w; }
        tn = w;
        for (int a = 1; a < tn; ++a)
            for (int b = a; b > 0 && tcols[b - 1] > tcols[b]; --b) {
                std::swap(tcols[b - 1], tcols[b]);
                std::swap(tcoefs[b - 1], tcoefs[b]);
            }
        if (tn == 0) {
            if (rhs_acc > 0)
                throw std::logic_error("reduction produced an infeasible constant row");
            stats.dropped_tautologies += 1;
            return;
        }
        long g = 0;
        for (int t = 0; t < tn; ++t) g = std::gcd(g, std::abs(tcoefs[t]));
        Rel rel = Rel::Ge;
        long rhs = rhs_acc;
        if (tcoefs[0] < 0) {
            for (int t = 0; t < tn; ++t) tcoefs[t] = -tcoefs[t];
            rhs = -rhs;
            rel = flip_rel(rel);
        }
        for (int t = 0; t < tn; ++t) tcoefs[t] /= g;
        long g2 = std::gcd(std::abs(rhs), g);
        insert_int_row(tcols, tcoefs, tn, rel, rhs / g2, g / g2, RowTag::Elemental);
    }

    // General path for problem and CI rows (rational rhs, possible M term).
    void add_raw(const RawConstraint& c, const Rat& rhs_mem) {
        stats.raw_rows += 1;
        std::vector<std::pair<int, Rat>> acc;
        Rat rhs_const = c.rhs;
        for (const auto& t : c.terms) {
            int col;
            if (t.subset == kLoadTerm) {
                col = load_col;
            } else if (t.subset == 0) {
                continue;
            } else {
                std::int32_t v = rewrite[t.subset];
                if (v <= -2) {
                    rhs_const -= t.coef * Rat(-2 - v);
                    continue;
                }
                col = static_cast<int>(v);
            }
            bool merged = false;
            for (auto& [ac, acoef] : acc)
                if (ac == col) { acoef += t.coef; merged = true; break; }
            if (!merged) acc.emplace_back(col, t.coef);
        }
        std::erase_if(acc, [](const auto& p) { return p.second == 0; });
        std::sort(acc.begin(), acc.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        Rel rel = c.rel;
        if (acc.empty()) {
            if (rhs_mem != 0)
                throw std::logic_error("reduction erased a memory-dependent row");
            bool sat = (rel == Rel::Eq && rhs_const == 0) ||
                       (rel == Rel::Ge && rhs_const <= 0) ||
                       (rel == Rel::Le && rhs_const >= 0);
            if (!sat) throw std::logic_error("reduction produced an infeasible constant row");
            stats.dropped_tautologies += 1;
            return;
        }
        Rat rm = rhs_mem;
        if (acc.front().second < 0) {
            for (auto& [ac, acoef] : acc) acoef = -acoef;
            rhs_const = -rhs_const;
            rm = -rm;
            rel = flip_rel(rel);
        }
        bool all_int = std::all_of(acc.begin(), acc.end(), [](const auto& p) {
            return mpz_cmp_si(mpq_denref(p.second.get_mpq_t()), 1) == 0;
        });
        Rat scale;
        if (all_int) {
            mpz_class g = 0;
            for (const auto& [ac, acoef] : acc)
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpq_numref(acoef.get_mpq_t()));
            scale = Rat(1) / Rat(g);
        } else {
            scale = Rat(1) / acc.front().second;
        }
        for (auto& [ac, acoef] : acc) acoef *= scale;
        rhs_const *= scale;
        rm *= scale;

        std::uint64_t h = mix(0, static_cast<std::uint64_t>(rel));
        for (const auto& [ac, acoef] : acc) {
            h = mix(h, static_cast<std::uint64_t>(ac));
            h = mix_rat(h, acoef);
        }
        h = mix_rat(h, rhs_const);
        h = mix_rat(h, rm);
        auto it = buckets.find(h);
        if (it != buckets.end()) {
            for (auto ri : it->second) {
                const SkeletonRow& r = rows[ri];
                if (r.rel != rel || r.terms.size() != acc.size()) continue;
                bool same = r.rhs_const == rhs_const && r.rhs_mem == rm;
                for (std::size_t t = 0; t < acc.size() && same; ++t)
                    same = r.terms[t].col == acc[t].first && r.terms[t].coef == acc[t].second;
                if (same) {
                    stats.merged_duplicates += 1;
                    return;
                }
            }
        }
        SkeletonRow row;
        row.rel = rel;
        row.tag = c.tag;
        row.rhs_const = std::move(rhs_const);
        row.rhs_mem = std::move(rm);
        row.terms.reserve(acc.size());
        for (auto& [ac, acoef] : acc) row.terms.push_back(LinTerm{ac, std::move(acoef)});
        keep(std::move(row), h);
    }
};

struct SymRow {
    RawConstraint c;
    Rat rhs_mem;
};

// The coded-caching rows with the memory bound kept symbolic.
std::vector<SymRow> problem_rows_symbolic(const TradeoffSpec& spec, const GroundSet& g) {
    std::vector<SymRow> out;
    const int N = g.prob.num_files;
    const int K = g.prob.num_users;
    const Mask wall = files_mask(g);

    for (Mask f = 1; f <= wall; ++f) {
        RawConstraint c;
        c.tag = RowTag::File;
        c.rel = Rel::Eq;
        c.terms.push_back({f, Rat(1)});
        c.rhs = Rat(std::popcount(f));
        out.push_back({std::move(c), Rat(0)});
    }
    for (int k = 0; k < K; ++k) {
        Mask z = Mask{1} << g.cache_bit(k);
        RawConstraint mem;
        mem.tag = RowTag::Cache;
        mem.rel = Rel::Le;
        mem.terms.push_back({z, Rat(1)});
        mem.rhs = Rat(0);
        out.push_back({std::move(mem), Rat(1)});

        RawConstraint lib;
        lib.tag = RowTag::Cache;
        lib.rel = Rel::Eq;
        lib.terms.push_back({z | wall, Rat(1)});
        lib.terms.push_back({wall, Rat(-1)});
        lib.rhs = Rat(0);
        out.push_back({std::move(lib), Rat(0)});
    }
    for (int i = 0; i < g.num_signals(); ++i) {
        Mask x = Mask{1} << g.signal_bit(i);
        RawConstraint link;
        link.tag = RowTag::ObjectiveLink;
        link.rel = Rel::Le;
        link.terms.push_back({x, Rat(1)});
        link.terms.push_back({kLoadTerm, Rat(-1)});
        link.rhs = Rat(0);
        out.push_back({std::move(link), Rat(0)});

        RawConstraint lib;
        lib.tag = RowTag::Signal;
        lib.rel = Rel::Eq;
        lib.terms.push_back({x | wall, Rat(1)});
        lib.terms.push_back({wall, Rat(-1)});
        lib.rhs = Rat(0);
        out.push_back({std::move(lib), Rat(0)});

        for (int k = 0; k < K; ++k) {
            Mask z = Mask{1} << g.cache_bit(k);
            Mask w = Mask{1} << g.file_bit(spec.demands[static_cast<std::size_t>(i)]
                                               .entries[static_cast<std::size_t>(k)]);
            RawConstraint dec;
            dec.tag = RowTag::Decode;
            dec.rel = Rel::Eq;
            dec.terms.push_back({w | z | x, Rat(1)});
            dec.terms.push_back({z | x, Rat(-1)});
            dec.rhs = Rat(0);
            out.push_back({std::move(dec), Rat(0)});
        }
    }
    (void)N;
    return out;
}

std::string column_name(Mask s, const GroundSet& g) {
    std::string name = "h";
    for (int b = 0; b < g.size(); ++b)
        if (s >> b & 1u) name += "_" + g.var_name(b);
    return name;
}

}  // namespace

std::vector<RawConstraint> elemental_inequalities(const GroundSet& g, int cap) {
    if (g.size() > cap)
        throw std::length_error("ground set of " + std::to_string(g.size()) +
                                " variables exceeds the materialization cap " +
                                std::to_string(cap));
    std::vector<RawConstraint> out;
    for_each_elemental(g, [&](const RawConstraint& c) { out.push_back(c); });
    return out;
}

void for_each_elemental(const GroundSet& g,
                        const std::function<void(const RawConstraint&)>& fn) {
    const int n = g.size();
    const Mask full = full_mask(g);
    for (int i = 0; i < n; ++i) {
        RawConstraint c;
        c.tag = RowTag::Elemental;
        c.rel = Rel::Ge;
        c.rhs = Rat(0);
        c.terms.push_back({full, Rat(1)});
        Mask rest = full ^ (Mask{1} << i);
        if (rest != 0) c.terms.push_back({rest, Rat(-1)});
        fn(c);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Mask bi = Mask{1} << i, bj = Mask{1} << j;
            const Mask rest = full ^ bi ^ bj;
            Mask a = rest;
            for (;;) {
                RawConstraint c;
                c.tag = RowTag::Elemental;
                c.rel = Rel::Ge;
                c.rhs = Rat(0);
                c.terms.push_back({a | bi, Rat(1)});
                c.terms.push_back({a | bj, Rat(1)});
                c.terms.push_back({a | bi | bj, Rat(-1)});
                if (a != 0) c.terms.push_back({a, Rat(-1)});
                fn(c);
                if (a == 0) break;
                a = (a - 1) & rest;
            }
        }
}

std::vector<RawConstraint> problem_constraints(const TradeoffSpec& spec, const Rat& memory) {
    GroundSet g = build_ground_set(spec);
    std::vector<RawConstraint> out;
    for (auto& sr : problem_rows_symbolic(spec, g)) {
        sr.c.rhs += sr.rhs_mem * memory;
        out.push_back(std::move(sr.c));
    }
    return out;
}

std::vector<RawConstraint> ci_constraints(const CISpec& ci, int aux_slot, const GroundSet& g) {
    Mask a = side_mask(ci.left, g);
    Mask b = side_mask(ci.right, g);
    Mask c = Mask{1} << g.aux_bit(aux_slot);
    std::vector<RawConstraint> out;
    for (Mask s : {a, b}) {
        RawConstraint r;
        r.tag = RowTag::Ci;
        r.rel = Rel::Eq;
        r.terms.push_back({c | s, Rat(1)});
        r.terms.push_back({s, Rat(-1)});
        r.rhs = Rat(0);
        out.push_back(std::move(r));
    }
    RawConstraint id;
    id.tag = RowTag::Ci;
    id.rel = Rel::Eq;
    id.terms.push_back({c, Rat(1)});
    id.terms.push_back({a, Rat(-1)});
    id.terms.push_back({b, Rat(-1)});
    id.terms.push_back({a | b, Rat(1)});
    id.rhs = Rat(0);
    out.push_back(std::move(id));
    return out;
}

std::optional<Rat> library_collapse(Mask s, const GroundSet& g) {
    const Mask fmask = files_mask(g);
    Mask coverage = s & fmask;
    for (int k = 0; k < g.prob.num_users; ++k) {
        if (!(s >> g.cache_bit(k) & 1u)) continue;
        for (int i = 0; i < g.num_signals(); ++i)
            if (s >> g.signal_bit(i) & 1u)
                coverage |= Mask{1} << g.file_bit(g.demands[static_cast<std::size_t>(i)]
                                                      .entries[static_cast<std::size_t>(k)]);
    }
    if (coverage == fmask) return Rat(g.prob.num_files);
    return std::nullopt;
}

Mask closure_of(Mask s, const GroundSet& g, const std::vector<CISpec>& cis) {
    ClosureRules rules = make_rules(g, cis);
    for (;;) {
        Mask e = rules.sweep(s);
        if (e == s) return s;
        s = e;
    }
}

LPSkeleton build_skeleton(const TradeoffSpec& spec, const BuildOptions& opt) {
    Assembler a;
    a.g = build_ground_set(spec);
    a.cis = spec.cis;
    const int n = a.g.size();
    if (n > opt.ground_cap)
        throw std::length_error("ground set has " + std::to_string(n) +
                                " variables, above the configured cap of " +
                                std::to_string(opt.ground_cap));
    if (n > 24)
        throw std::length_error("ground set of " + std::to_string(n) +
                                " variables needs closure tables beyond the supported size");

    a.grp = admissible_group(a.g, spec.cis);
    a.stats.group_size = a.grp.size();

    const Mask full = full_mask(a.g);
    const Mask fmask = files_mask(a.g);
    ClosureRules rules = make_rules(a.g, spec.cis);

    a.cl.assign(static_cast<std::size_t>(full) + 1, 0);
    for (Mask s = full + 1; s-- > 0;) {
        Mask e = rules.sweep(s);
        a.cl[s] = (e == s) ? s : a.cl[e];
    }

    // Union-find over all masks. Two masks share a class when a chain of
    // provable equalities connects them: S ~ cl(S), and S ~ p(S) for any
    // file/user permutation pair p defined on S. A pair is defined on S when
    // every selected signal in S maps to a selected signal and every CI
    // variable in S keeps its declaration's unordered side pair (sides may
    // swap); Aux slots are never relabeled. A pair need not act on the whole
    // ground set, which makes this finer than orbit merging under a.grp and
    // lets, say, H(W_0, Z_0) meet H(W_1, Z_0) even when swapping files 0 and
    // 1 scrambles the selected demands.
    std::vector<Mask> parent(static_cast<std::size_t>(full) + 1);
    std::iota(parent.begin(), parent.end(), Mask{0});
    auto find = [&](Mask x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](Mask x, Mask y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (x < y) parent[y] = x; else parent[x] = y;  // the smallest mask stays root
    };
    for (Mask s = 1; s <= full; ++s)
        if (a.cl[s] != s) unite(s, a.cl[s]);

    // Generator library: the admissible group, all single-transposition
    // pairs, and pattern-matched pairs carrying one selected demand onto
    // another. Highly symmetric demand pairs can have huge match families;
    // past the cap a family is dropped whole (each link only adds merges, so
    // skipping some is sound).
    const int N = a.g.prob.num_files;
    const int K = a.g.prob.num_users;
    const auto& dems = a.g.demands;
    std::vector<PermPair> elems;
    std::set<std::vector<std::int8_t>> seen;
    auto push_elem = [&](const PermPair& p) {
        if (p.is_identity()) return;
        std::vector<std::int8_t> key;
        key.reserve(static_cast<std::size_t>(N + K));
        for (int v : p.file_perm) key.push_back(static_cast<std::int8_t>(v));
        for (int v : p.user_perm) key.push_back(static_cast<std::int8_t>(v));
        if (seen.insert(std::move(key)).second) elems.push_back(p);
    };
    for (const auto& p : a.grp.elements) push_elem(p);
    {
        std::vector<int> idf(static_cast<std::size_t>(N)), idu(static_cast<std::size_t>(K));
        std::iota(idf.begin(), idf.end(), 0);
        std::iota(idu.begin(), idu.end(), 0);
        std::vector<std::vector<int>> fps{idf}, ups{idu};
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                auto f = idf;
                std::swap(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(j)]);
                fps.push_back(std::move(f));
            }
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                auto u = idu;
                std::swap(u[static_cast<std::size_t>(i)], u[static_cast<std::size_t>(j)]);
                ups.push_back(std::move(u));
            }
        for (const auto& f : fps)
            for (const auto& u : ups) push_elem(PermPair{f, u});
    }
    constexpr std::size_t kFamilyCap = 20000;
    for (std::size_t i = 0; i < dems.size(); ++i)
        for (std::size_t j = 0; j < dems.size(); ++j) {
            if (demand_type_of(dems[i], a.g.prob) != demand_type_of(dems[j], a.g.prob))
                continue;
            std::vector<PermPair> fam;
            bool oversize = false;
            std::vector<int> up(static_cast<std::size_t>(K));
            std::iota(up.begin(), up.end(), 0);
            do {
                // Solve pi_hat o d_i o pi_bar^{-1} = d_j for pi_hat given
                // pi_bar = up, then extend over the unconstrained files.
                std::vector<int> fmap(static_cast<std::size_t>(N), -1);
                std::vector<char> used(static_cast<std::size_t>(N), 0);
                bool ok = true;
                for (int k = 0; k < K && ok; ++k) {
                    auto v = static_cast<std::size_t>(dems[i].entries[static_cast<std::size_t>(k)]);
                    int w = dems[j].entries[static_cast<std::size_t>(up[static_cast<std::size_t>(k)])];
                    if (fmap[v] < 0) {
                        if (used[static_cast<std::size_t>(w)]) ok = false;
                        else { fmap[v] = w; used[static_cast<std::size_t>(w)] = 1; }
                    } else if (fmap[v] != w) {
                        ok = false;
                    }
                }
                if (!ok) continue;
                std::vector<int> src, tgt;
                for (int v = 0; v < N; ++v) {
                    if (fmap[static_cast<std::size_t>(v)] < 0) src.push_back(v);
                    if (!used[static_cast<std::size_t>(v)]) tgt.push_back(v);
                }
                do {
                    auto f = fmap;
                    for (std::size_t t = 0; t < src.size(); ++t)
                        f[static_cast<std::size_t>(src[t])] = tgt[t];
                    fam.push_back(PermPair{std::move(f), up});
                    if (fam.size() > kFamilyCap) { oversize = true; break; }
                } while (std::next_permutation(tgt.begin(), tgt.end()));
                if (oversize) break;
            } while (std::next_permutation(up.begin(), up.end()));
            if (!oversize)
                for (auto& p : fam) push_elem(p);
        }
    seen.clear();

    std::vector<std::pair<Mask, Mask>> ci_sides;
    for (const auto& ci : spec.cis)
        ci_sides.emplace_back(side_mask(ci.left, a.g), side_mask(ci.right, a.g));

    constexpr Mask kPoison = Mask{1} << 31;
    for (const auto& p : elems) {
        std::array<int, 32> bit_to;
        bit_to.fill(-1);
        for (int v = 0; v < N; ++v)
            bit_to[static_cast<std::size_t>(a.g.file_bit(v))] =
                a.g.file_bit(p.file_perm[static_cast<std::size_t>(v)]);
        for (int k = 0; k < K; ++k)
            bit_to[static_cast<std::size_t>(a.g.cache_bit(k))] =
                a.g.cache_bit(p.user_perm[static_cast<std::size_t>(k)]);
        for (int t = 0; t < a.g.num_signals(); ++t) {
            int img = a.g.signal_index(act_demand(p, dems[static_cast<std::size_t>(t)]));
            bit_to[static_cast<std::size_t>(a.g.signal_bit(t))] =
                img < 0 ? -1 : a.g.signal_bit(img);
        }
        auto image_of = [&](Mask m) -> Mask {
            Mask out = 0;
            while (m) {
                int b = std::countr_zero(m);
                m &= m - 1;
                int nb = bit_to[static_cast<std::size_t>(b)];
                if (nb < 0) return kPoison;
                out |= Mask{1} << nb;
            }
            return out;
        };
        for (std::size_t c = 0; c < ci_sides.size(); ++c) {
            Mask la = image_of(ci_sides[c].first);
            Mask lb = image_of(ci_sides[c].second);
            bool kept = !((la | lb) & kPoison) &&
                        ((la == ci_sides[c].first && lb == ci_sides[c].second) ||
                         (la == ci_sides[c].second && lb == ci_sides[c].first));
            bit_to[static_cast<std::size_t>(a.g.aux_bit(static_cast<int>(c)))] =
                kept ? a.g.aux_bit(static_cast<int>(c)) : -1;
        }
        // 8-bit chunk tables map any mask to its image in three lookups;
        // bit 31 poisons images of masks the pair is not defined on.
        std::uint32_t tab0[256], tab1[256], tab2[256];
        std::uint32_t* tabs[3] = {tab0, tab1, tab2};
        Mask touched = 0;
        for (int c = 0; c < 3; ++c) {
            tabs[c][0] = 0;
            for (int v = 1; v < 256; ++v) {
                int b = std::countr_zero(static_cast<unsigned>(v)) + 8 * c;
                std::uint32_t one =
                    (b >= n || bit_to[static_cast<std::size_t>(b)] < 0)
                        ? kPoison
                        : Mask{1} << bit_to[static_cast<std::size_t>(b)];
                tabs[c][v] = tabs[c][v & (v - 1)] | one;
            }
        }
        for (int b = 0; b < n; ++b)
            if (bit_to[static_cast<std::size_t>(b)] != b) touched |= Mask{1} << b;
        for (Mask s = 1; s <= full; ++s) {
            if (!(s & touched)) continue;
            Mask img = tab0[s & 255] | tab1[(s >> 8) & 255] | tab2[(s >> 16) & 255];
            if (!(img & kPoison)) unite(s, img);
        }
    }

    // Classes holding a closed set whose closure its file part already forces
    // carry the constant entropy of that file part; they become rhs constants
    // instead of columns. Two such sets in one class must agree.
    std::vector<std::int8_t> pinned(static_cast<std::size_t>(full) + 1, -1);
    std::uint64_t n_fixed = 0;
    for (Mask s = 1; s <= full; ++s) {
        if (a.cl[s] != s || a.cl[s & fmask] != s) continue;
        Mask r = find(s);
        auto v = static_cast<std::int8_t>(std::popcount(s & fmask));
        if (pinned[r] < 0) {
            pinned[r] = v;
            ++n_fixed;
        } else if (pinned[r] != v) {
            throw std::logic_error("merging joined sets with different pinned entropies");
        }
    }

    a.rewrite.assign(static_cast<std::size_t>(full) + 1, -2);  // empty set: entropy 0
    for (Mask s = 1; s <= full; ++s) {
        Mask r = find(s);
        if (r != s) {
            a.rewrite[s] = a.rewrite[r];  // r < s, so already assigned
        } else if (pinned[s] >= 0) {
            a.rewrite[s] = static_cast<std::int32_t>(-2 - pinned[s]);
        } else {
            a.rewrite[s] = static_cast<std::int32_t>(a.cols.size());
            a.cols.push_back(LPColumn{false, s, column_name(s, a.g), Rat(0), std::nullopt});
        }
    }
    a.stats.fixed_columns = n_fixed;
    a.stats.free_columns = a.cols.size();
    a.load_col = static_cast<int>(a.cols.size());
    a.cols.push_back(LPColumn{true, 0, "r", Rat(0), std::nullopt});

    // Elemental family, streamed.
    std::pair<Mask, int> raw[4];
    for (int i = 0; i < n; ++i) {
        raw[0] = {full, 1};
        raw[1] = {full ^ (Mask{1} << i), -1};
        a.stream_row(raw, 2);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Mask bi = Mask{1} << i, bj = Mask{1} << j;
            const Mask rest = full ^ bi ^ bj;
            Mask s = rest;
            for (;;) {
                raw[0] = {s | bi, 1};
                raw[1] = {s | bj, 1};
                raw[2] = {s | bi | bj, -1};
                raw[3] = {s, -1};
                a.stream_row(raw, 4);
                if (s == 0) break;
                s = (s - 1) & rest;
            }
        }

    for (const auto& sr : problem_rows_symbolic(spec, a.g))
        a.add_raw(sr.c, sr.rhs_mem);
    for (std::size_t i = 0; i < spec.cis.size(); ++i)
        for (const auto& c : ci_constraints(spec.cis[i], static_cast<int>(i), a.g))
            a.add_raw(c, Rat(0));

    a.stats.kept_rows = a.rows.size();

    LPSkeleton sk;
    sk.ground = std::move(a.g);
    sk.cis = std::move(a.cis);
    sk.cols = std::move(a.cols);
    sk.load_col = a.load_col;
    sk.rows = std::move(a.rows);
    sk.label = spec.label;
    sk.stats = a.stats;
    sk.rewrite = std::move(a.rewrite);
    return sk;
}

LPInstance instantiate(const LPSkeleton& sk, const Rat& memory, const Rat& unit) {
    LPInstance lp;
    lp.ground = sk.ground;
    lp.cols = sk.cols;
    lp.load_col = sk.load_col;
    lp.label = sk.label;
    lp.memory = memory;
    lp.stats = sk.stats;
    lp.rows.reserve(sk.rows.size());
    for (const auto& r : sk.rows) {
        LinearConstraint c;
        c.terms = r.terms;
        c.rel = r.rel;
        c.rhs = r.rhs_const * unit + r.rhs_mem * memory;
        c.tag = r.tag;
        lp.rows.push_back(std::move(c));
    }
    return lp;
}

LPInstance reduce_and_assemble(const TradeoffSpec& spec, const Rat& memory,
                               const BuildOptions& opt) {
    return instantiate(build_skeleton(spec, opt), memory, Rat(1));
}

}  // namespace cachelp
