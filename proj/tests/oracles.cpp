#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oracles {

using cachelp::LinearConstraint;
using cachelp::LinTerm;
using cachelp::LPColumn;
using cachelp::Rel;
using cachelp::RowTag;
using cachelp::VarId;
using cachelp::VarKind;

int gf2_rank(std::vector<std::uint64_t> v) {
    int rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        std::size_t p = static_cast<std::size_t>(rank);
        while (p < v.size() && !(v[p] >> bit & 1)) ++p;
        if (p == v.size()) continue;
        std::swap(v[p], v[static_cast<std::size_t>(rank)]);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (i != static_cast<std::size_t>(rank) && (v[i] >> bit & 1))
                v[i] ^= v[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

int LinearScheme::entropy(Mask s) const {
    std::vector<std::uint64_t> all;
    for (std::size_t b = 0; b < vecs.size(); ++b)
        if (s >> b & 1) all.insert(all.end(), vecs[b].begin(), vecs[b].end());
    return gf2_rank(std::move(all));
}

namespace {

std::vector<std::uint64_t> file_bits(const GroundSet& g, int n, int unit) {
    std::vector<std::uint64_t> out;
    for (int j = 0; j < unit; ++j) out.push_back(1ull << (n * unit + j));
    (void)g;
    return out;
}

}  // namespace

LinearScheme full_cache_scheme(const GroundSet& g, int unit) {
    LinearScheme s;
    s.vecs.resize(static_cast<std::size_t>(g.size()));
    for (int n = 0; n < g.prob.num_files; ++n)
        s.vecs[static_cast<std::size_t>(g.file_bit(n))] = file_bits(g, n, unit);
    for (int k = 0; k < g.prob.num_users; ++k) {
        auto& z = s.vecs[static_cast<std::size_t>(g.cache_bit(k))];
        for (int n = 0; n < g.prob.num_files; ++n) {
            auto f = file_bits(g, n, unit);
            z.insert(z.end(), f.begin(), f.end());
        }
    }
    return s;  // signals and aux stay empty
}

LinearScheme broadcast_scheme(const GroundSet& g, int unit) {
    LinearScheme s;
    s.vecs.resize(static_cast<std::size_t>(g.size()));
    for (int n = 0; n < g.prob.num_files; ++n)
        s.vecs[static_cast<std::size_t>(g.file_bit(n))] = file_bits(g, n, unit);
    for (int i = 0; i < g.num_signals(); ++i) {
        auto& x = s.vecs[static_cast<std::size_t>(g.signal_bit(i))];
        std::set<int> wanted(g.demands[static_cast<std::size_t>(i)].entries.begin(),
                             g.demands[static_cast<std::size_t>(i)].entries.end());
        for (int n : wanted) {
            auto f = file_bits(g, n, unit);
            x.insert(x.end(), f.begin(), f.end());
        }
    }
    return s;
}

LinearScheme coded_pair_scheme(const GroundSet& g) {
    if (g.prob.num_users != 2 || g.prob.num_files != 2 || g.num_signals() != 1 ||
        g.num_aux != 0 || g.demands[0].entries != std::vector<std::uint8_t>{0, 1})
        throw std::invalid_argument("coded_pair_scheme wants 2 users, 2 files, demand 01");
    const std::uint64_t a1 = 1, a2 = 2, b1 = 4, b2 = 8;
    LinearScheme s;
    s.vecs.resize(static_cast<std::size_t>(g.size()));
    s.vecs[static_cast<std::size_t>(g.file_bit(0))] = {a1, a2};
    s.vecs[static_cast<std::size_t>(g.file_bit(1))] = {b1, b2};
    s.vecs[static_cast<std::size_t>(g.cache_bit(0))] = {a1, b1};
    s.vecs[static_cast<std::size_t>(g.cache_bit(1))] = {a2, b2};
    s.vecs[static_cast<std::size_t>(g.signal_bit(0))] = {a2 ^ b1};
    return s;
}

std::optional<std::string> scheme_violation(const LPSkeleton& sk, const LinearScheme& scheme,
                                            const Rat& memory, const Rat& load_bits, int unit) {
    for (Mask s = 1; s < sk.rewrite.size(); ++s) {
        std::int32_t code = sk.rewrite[s];
        if (code > -2) continue;
        Rat want = Rat(-2 - code) * unit;
        if (Rat(scheme.entropy(s)) != want) {
            std::ostringstream os;
            os << "pinned subset " << cachelp::set_name(s, sk.ground) << " has entropy "
               << scheme.entropy(s) << ", reduction says " << cachelp::rat_string(want);
            return os.str();
        }
    }
    cachelp::LPInstance lp = cachelp::instantiate(sk, memory, Rat(unit));
    std::vector<Rat> x(lp.cols.size());
    for (std::size_t j = 0; j < lp.cols.size(); ++j)
        x[j] = lp.cols[j].is_load ? load_bits : Rat(scheme.entropy(lp.cols[j].subset));
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& row = lp.rows[i];
        Rat lhs(0);
        for (const auto& t : row.terms) lhs += t.coef * x[static_cast<std::size_t>(t.col)];
        bool ok = row.rel == Rel::Le   ? lhs <= row.rhs
                  : row.rel == Rel::Ge ? lhs >= row.rhs
                                       : lhs == row.rhs;
        if (!ok) {
            std::ostringstream os;
            os << "row " << i << " (" << cachelp::row_tag_name(row.tag) << ") evaluates to "
               << cachelp::rat_string(lhs) << " against rhs " << cachelp::rat_string(row.rhs);
            return os.str();
        }
    }
    return std::nullopt;
}

namespace {

// Image of one base variable; nullopt when a permuted signal is unselected.
std::optional<int> act_base_bit(const GroundSet& g, const PermPair& e, const VarId& v) {
    switch (v.kind) {
        case VarKind::File:
            return g.file_bit(e.file_perm[static_cast<std::size_t>(v.index)]);
        case VarKind::Cache:
            return g.cache_bit(e.user_perm[static_cast<std::size_t>(v.index)]);
        case VarKind::Signal: {
            cachelp::DemandVector img;
            img.entries.resize(v.demand.entries.size());
            for (std::size_t k = 0; k < v.demand.entries.size(); ++k)
                img.entries[static_cast<std::size_t>(e.user_perm[k])] =
                    static_cast<std::uint8_t>(e.file_perm[v.demand.entries[k]]);
            int idx = g.signal_index(img);
            if (idx < 0) return std::nullopt;
            return g.signal_bit(idx);
        }
        case VarKind::Aux:
            break;
    }
    throw std::invalid_argument("aux is not a base variable");
}

std::optional<Mask> act_side(const GroundSet& g, const PermPair& e, const std::vector<VarId>& side) {
    Mask m = 0;
    for (const auto& v : side) {
        auto b = act_base_bit(g, e, v);
        if (!b) return std::nullopt;
        m |= Mask{1} << *b;
    }
    return m;
}

Mask side_mask(const GroundSet& g, const std::vector<VarId>& side) {
    Mask m = 0;
    for (const auto& v : side) m |= Mask{1} << g.bit_of(v);
    return m;
}

}  // namespace

std::optional<Mask> act_subset(const TradeoffSpec& spec, const GroundSet& g, const PermPair& e,
                               Mask s) {
    Mask img = 0;
    for (int b = 0; b < g.size(); ++b) {
        if (!(s >> b & 1)) continue;
        VarId v = g.var_at(b);
        if (v.kind == VarKind::Aux) {
            const CISpec& ci = spec.cis[static_cast<std::size_t>(v.index)];
            auto la = act_side(g, e, ci.left);
            auto lb = act_side(g, e, ci.right);
            if (!la || !lb) return std::nullopt;
            Mask oa = side_mask(g, ci.left), ob = side_mask(g, ci.right);
            bool kept = (*la == oa && *lb == ob) || (*la == ob && *lb == oa);
            if (!kept) return std::nullopt;
            img |= Mask{1} << b;  // aux slots never move
        } else {
            auto nb = act_base_bit(g, e, v);
            if (!nb) return std::nullopt;
            img |= Mask{1} << *nb;
        }
    }
    return img;
}

Mask brute_closure(const TradeoffSpec& spec, const GroundSet& g, Mask s) {
    const Mask everything = (Mask{1} << g.size()) - 1;
    Mask files = 0;
    for (int n = 0; n < g.prob.num_files; ++n) files |= Mask{1} << g.file_bit(n);
    for (;;) {
        Mask before = s;
        for (int i = 0; i < g.num_signals(); ++i) {
            if (!(s >> g.signal_bit(i) & 1)) continue;
            const auto& d = g.demands[static_cast<std::size_t>(i)];
            for (int k = 0; k < g.prob.num_users; ++k)
                if (s >> g.cache_bit(k) & 1) s |= Mask{1} << g.file_bit(d.entries[static_cast<std::size_t>(k)]);
        }
        for (std::size_t c = 0; c < spec.cis.size(); ++c) {
            Mask la = side_mask(g, spec.cis[c].left), lb = side_mask(g, spec.cis[c].right);
            if ((s & la) == la || (s & lb) == lb) s |= Mask{1} << g.aux_bit(static_cast<int>(c));
        }
        if ((s & files) == files) s = everything;
        if (s == before) return s;
    }
}

BrutePartition brute_partition(const TradeoffSpec& spec, const GroundSet& g) {
    const Mask full = (Mask{1} << g.size()) - 1;
    std::vector<Mask> parent(static_cast<std::size_t>(full) + 1);
    std::iota(parent.begin(), parent.end(), Mask{0});
    auto find = [&](Mask s) {
        while (parent[s] != s) s = parent[s] = parent[parent[s]];
        return s;
    };
    auto unite = [&](Mask a, Mask b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;  // keep the smallest mask as the root
    };

    for (Mask s = 1; s <= full; ++s) unite(s, brute_closure(spec, g, s));
    for (const auto& e : cachelp::full_group(spec.prob).elements) {
        if (e.is_identity()) continue;
        for (Mask s = 1; s <= full; ++s) {
            auto t = act_subset(spec, g, e, s);
            if (t) unite(s, *t);
        }
    }

    BrutePartition part;
    part.rep.resize(static_cast<std::size_t>(full) + 1, 0);
    part.fixed_val.assign(static_cast<std::size_t>(full) + 1, -1);
    Mask files = 0;
    for (int n = 0; n < g.prob.num_files; ++n) files |= Mask{1} << g.file_bit(n);
    std::map<Mask, int> pinned;
    for (Mask s = 1; s <= full; ++s) {
        if (brute_closure(spec, g, s) != s || brute_closure(spec, g, s & files) != s) continue;
        int v = std::popcount(s & files);
        auto [it, fresh] = pinned.emplace(find(s), v);
        if (!fresh && it->second != v)
            throw std::logic_error("one class, two pinned entropies");
    }
    for (Mask s = 1; s <= full; ++s) {
        Mask r = find(s);
        part.rep[s] = r;
        auto it = pinned.find(r);
        if (it != pinned.end()) part.fixed_val[s] = it->second;
    }
    return part;
}

namespace {

struct RowBuilder {
    std::map<int, Rat> terms;
    void add(int col, const Rat& c) {
        auto [it, fresh] = terms.emplace(col, c);
        if (!fresh) it->second += c;
    }
    LinearConstraint done(Rel rel, Rat rhs, RowTag tag) {
        LinearConstraint out;
        for (auto& [col, c] : terms)
            if (c != 0) out.terms.push_back({col, c});
        out.rel = rel;
        out.rhs = std::move(rhs);
        out.tag = tag;
        terms.clear();
        return out;
    }
};

}  // namespace

LPInstance unreduced_lp(const TradeoffSpec& spec, const Rat& memory) {
    GroundSet g = cachelp::build_ground_set(spec);
    const int n = g.size();
    if (n > 14) throw std::invalid_argument("unreduced lattice beyond 2^14 is not a test fixture");
    const Mask full = (Mask{1} << n) - 1;

    LPInstance lp;
    lp.ground = g;
    lp.label = "unreduced " + spec.label;
    lp.memory = memory;
    for (Mask s = 1; s <= full; ++s)
        lp.cols.push_back(LPColumn{false, s, cachelp::set_name(s, g), Rat(0), std::nullopt});
    lp.load_col = static_cast<int>(lp.cols.size());
    lp.cols.push_back(LPColumn{true, 0, "r", Rat(0), std::nullopt});
    auto col = [&](Mask s) { return static_cast<int>(s) - 1; };

    RowBuilder rb;
    auto push = [&](LinearConstraint c) { lp.rows.push_back(std::move(c)); };

    for (int i = 0; i < n; ++i) {
        rb.add(col(full), Rat(1));
        rb.add(col(full ^ (Mask{1} << i)), Rat(-1));
        push(rb.done(Rel::Ge, Rat(0), RowTag::Elemental));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Mask bi = Mask{1} << i, bj = Mask{1} << j;
            const Mask rest = full ^ bi ^ bj;
            Mask a = rest;
            for (;;) {
                rb.add(col(a | bi), Rat(1));
                rb.add(col(a | bj), Rat(1));
                rb.add(col(a | bi | bj), Rat(-1));
                if (a) rb.add(col(a), Rat(-1));
                push(rb.done(Rel::Ge, Rat(0), RowTag::Elemental));
                if (a == 0) break;
                a = (a - 1) & rest;
            }
        }

    Mask files = 0;
    for (int f = 0; f < g.prob.num_files; ++f) files |= Mask{1} << g.file_bit(f);
    for (Mask s = files;; s = (s - 1) & files) {
        if (s == 0) break;
        rb.add(col(s), Rat(1));
        push(rb.done(Rel::Eq, Rat(std::popcount(s)), RowTag::File));
    }

    for (int k = 0; k < g.prob.num_users; ++k) {
        Mask z = Mask{1} << g.cache_bit(k);
        rb.add(col(z), Rat(1));
        push(rb.done(Rel::Le, memory, RowTag::Cache));
        rb.add(col(z | files), Rat(1));
        push(rb.done(Rel::Eq, Rat(g.prob.num_files), RowTag::Collapse));
    }
    for (int i = 0; i < g.num_signals(); ++i) {
        Mask xm = Mask{1} << g.signal_bit(i);
        rb.add(col(xm), Rat(1));
        rb.add(lp.load_col, Rat(-1));
        push(rb.done(Rel::Le, Rat(0), RowTag::Signal));
        rb.add(col(xm | files), Rat(1));
        push(rb.done(Rel::Eq, Rat(g.prob.num_files), RowTag::Collapse));
        const auto& d = g.demands[static_cast<std::size_t>(i)];
        for (int k = 0; k < g.prob.num_users; ++k) {
            Mask zx = xm | (Mask{1} << g.cache_bit(k));
            Mask w = Mask{1} << g.file_bit(d.entries[static_cast<std::size_t>(k)]);
            if (w & zx) continue;
            rb.add(col(zx | w), Rat(1));
            rb.add(col(zx), Rat(-1));
            push(rb.done(Rel::Eq, Rat(0), RowTag::Decode));
        }
    }
    for (std::size_t c = 0; c < spec.cis.size(); ++c) {
        Mask cm = Mask{1} << g.aux_bit(static_cast<int>(c));
        Mask la = side_mask(g, spec.cis[c].left), lb = side_mask(g, spec.cis[c].right);
        rb.add(col(cm | la), Rat(1));
        rb.add(col(la), Rat(-1));
        push(rb.done(Rel::Eq, Rat(0), RowTag::Ci));
        rb.add(col(cm | lb), Rat(1));
        rb.add(col(lb), Rat(-1));
        push(rb.done(Rel::Eq, Rat(0), RowTag::Ci));
        rb.add(col(cm), Rat(1));
        rb.add(col(la), Rat(-1));
        rb.add(col(lb), Rat(-1));
        rb.add(col(la | lb), Rat(1));
        push(rb.done(Rel::Eq, Rat(0), RowTag::Ci));
    }

    std::set<std::pair<Mask, Mask>> sym;
    for (const auto& e : cachelp::full_group(spec.prob).elements) {
        if (e.is_identity()) continue;
        for (Mask s = 1; s <= full; ++s) {
            auto t = act_subset(spec, g, e, s);
            if (t && *t != s) sym.emplace(std::min(s, *t), std::max(s, *t));
        }
    }
    for (const auto& [a, b] : sym) {
        rb.add(col(a), Rat(1));
        rb.add(col(b), Rat(-1));
        push(rb.done(Rel::Eq, Rat(0), RowTag::Collapse));
    }

    lp.stats.raw_rows = lp.stats.kept_rows = lp.rows.size();
    lp.stats.free_columns = lp.cols.size();
    return lp;
}

DenseLP to_dense(const LPInstance& lp) {
    DenseLP d;
    std::vector<int> remap(lp.cols.size(), -1);
    std::vector<Rat> fixed(lp.cols.size(), Rat(0));
    int n = 0;
    for (std::size_t j = 0; j < lp.cols.size(); ++j) {
        const auto& c = lp.cols[j];
        if (c.upper && *c.upper == c.lower) fixed[j] = c.lower;
        else remap[j] = n++;
    }
    d.c.assign(static_cast<std::size_t>(n), Rat(0));
    d.c[static_cast<std::size_t>(remap[static_cast<std::size_t>(lp.load_col)])] = Rat(1);
    for (const auto& row : lp.rows) {
        std::vector<Rat> a(static_cast<std::size_t>(n), Rat(0));
        Rat rhs = row.rhs;
        for (const auto& t : row.terms) {
            if (remap[static_cast<std::size_t>(t.col)] < 0)
                rhs -= t.coef * fixed[static_cast<std::size_t>(t.col)];
            else
                a[static_cast<std::size_t>(remap[static_cast<std::size_t>(t.col)])] += t.coef;
        }
        d.A.push_back(std::move(a));
        d.b.push_back(std::move(rhs));
        d.rel.push_back(row.rel == Rel::Le ? -1 : row.rel == Rel::Ge ? 1 : 0);
    }
    return d;
}

DenseResult dense_simplex(const DenseLP& lp) {
    const int m = static_cast<int>(lp.A.size());
    const int n = m ? static_cast<int>(lp.A[0].size()) : static_cast<int>(lp.c.size());

    // Columns: originals, one slack per inequality, one artificial per row
    // that needs it; the tableau keeps b in the last column.
    int width = n;
    std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i)
        if (lp.rel[static_cast<std::size_t>(i)] != 0) slack_col[static_cast<std::size_t>(i)] = width++;
    std::vector<int> art_col(static_cast<std::size_t>(m), -1);
    std::vector<std::vector<Rat>> T(static_cast<std::size_t>(m));
    std::vector<int> basis(static_cast<std::size_t>(m), -1);

    for (int i = 0; i < m; ++i) {
        auto& row = T[static_cast<std::size_t>(i)];
        row.assign(static_cast<std::size_t>(width) + 1, Rat(0));
        bool flip = lp.b[static_cast<std::size_t>(i)] < 0;
        Rat sgn = flip ? Rat(-1) : Rat(1);
        for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = sgn * lp.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        row[static_cast<std::size_t>(width)] = sgn * lp.b[static_cast<std::size_t>(i)];
        int rel = flip ? -lp.rel[static_cast<std::size_t>(i)] : lp.rel[static_cast<std::size_t>(i)];
        if (slack_col[static_cast<std::size_t>(i)] >= 0)
            row[static_cast<std::size_t>(slack_col[static_cast<std::size_t>(i)])] = rel < 0 ? Rat(1) : Rat(-1);
        if (rel < 0) basis[static_cast<std::size_t>(i)] = slack_col[static_cast<std::size_t>(i)];
    }
    int nart = 0;
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] < 0) ++nart;
    for (auto& row : T) row.insert(row.end() - 1, static_cast<std::size_t>(nart), Rat(0));
    int next_art = width;
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] < 0) {
            art_col[static_cast<std::size_t>(i)] = next_art;
            T[static_cast<std::size_t>(i)][static_cast<std::size_t>(next_art)] = Rat(1);
            basis[static_cast<std::size_t>(i)] = next_art;
            ++next_art;
        }
    int total = width + nart;

    auto pivot = [&](int pr, int pc) {
        auto& prow = T[static_cast<std::size_t>(pr)];
        Rat pv = prow[static_cast<std::size_t>(pc)];
        for (auto& v : prow) v /= pv;
        for (int i = 0; i < m; ++i) {
            if (i == pr) continue;
            auto& row = T[static_cast<std::size_t>(i)];
            Rat f = row[static_cast<std::size_t>(pc)];
            if (f == 0) continue;
            for (int j = 0; j <= total; ++j)
                row[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
        }
        basis[static_cast<std::size_t>(pr)] = pc;
    };

    // Bland's rule on an explicit cost vector; returns false on unbounded.
    // Entering candidates stop at jmax so phase 2 can shut artificials out.
    auto optimize = [&](const std::vector<Rat>& cost, int jmax) {
        for (;;) {
            std::vector<Rat> y(static_cast<std::size_t>(total) + 1, Rat(0));
            for (int i = 0; i < m; ++i) {
                const Rat& cb = cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])];
                if (cb == 0) continue;
                for (int j = 0; j <= total; ++j)
                    y[static_cast<std::size_t>(j)] += cb * T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            int enter = -1;
            for (int j = 0; j < jmax; ++j)
                if (cost[static_cast<std::size_t>(j)] - y[static_cast<std::size_t>(j)] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best(0);
            for (int i = 0; i < m; ++i) {
                const Rat& a = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
                if (a <= 0) continue;
                Rat ratio = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(total)] / a;
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]))
                    leave = i, best = ratio;
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    };

    DenseResult res;
    if (nart > 0) {
        std::vector<Rat> c1(static_cast<std::size_t>(total) + 1, Rat(0));
        for (int j = width; j < total; ++j) c1[static_cast<std::size_t>(j)] = Rat(1);
        optimize(c1, total);  // bounded below by zero, cannot be unbounded
        Rat p1(0);
        for (int i = 0; i < m; ++i)
            if (basis[static_cast<std::size_t>(i)] >= width)
                p1 += T[static_cast<std::size_t>(i)][static_cast<std::size_t>(total)];
        if (p1 != 0) {
            res.status = DenseResult::kInfeasible;
            return res;
        }
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] < width) continue;
            int pc = -1;
            for (int j = 0; j < width; ++j)
                if (T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
                    pc = j;
                    break;
                }
            if (pc >= 0) pivot(i, pc);
            // else: the row is all zero across real columns and can be ignored;
            // the artificial stays basic at level zero.
        }
    }

    std::vector<Rat> c2(static_cast<std::size_t>(total) + 1, Rat(0));
    for (int j = 0; j < n; ++j) c2[static_cast<std::size_t>(j)] = lp.c[static_cast<std::size_t>(j)];
    if (!optimize(c2, width)) {
        res.status = DenseResult::kUnbounded;
        return res;
    }
    res.status = DenseResult::kOptimal;
    res.x.assign(static_cast<std::size_t>(n), Rat(0));
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] < n)
            res.x[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] =
                T[static_cast<std::size_t>(i)][static_cast<std::size_t>(total)];
    res.objective = Rat(0);
    for (int j = 0; j < n; ++j) res.objective += lp.c[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    return res;
}

std::optional<Rat> hull_eval(const std::vector<CurvePoint>& pts, CurveKind kind, const Rat& x) {
    if (pts.empty()) return std::nullopt;
    Rat lo = pts[0].memory, hi = pts[0].memory;
    for (const auto& p : pts) {
        lo = std::min(lo, p.memory);
        hi = std::max(hi, p.memory);
    }
    if (kind == CurveKind::Achievable && x < lo) return std::nullopt;
    Rat q = std::clamp(x, lo, hi);
    std::optional<Rat> best;
    auto offer = [&](const Rat& v) {
        if (!best || v < *best) best = v;
    };
    for (const auto& p : pts)
        if (p.memory == q) offer(p.load);
    for (const auto& p : pts)
        for (const auto& r : pts)
            if (p.memory < q && q < r.memory)
                offer(p.load + (r.load - p.load) * (q - p.memory) / (r.memory - p.memory));
    return best;
}

}  // namespace oracles
