#include "cachelp/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cachelp {

namespace {

std::vector<int> iota_vec(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

unsigned long long sat_factorial_product(int n, int k) {
    const unsigned long long cap = 1ull << 62;
    unsigned long long p = 1;
    auto mul = [&](int m) {
        for (int i = 2; i <= m; ++i) {
            if (p > cap / static_cast<unsigned long long>(i)) { p = cap; return; }
            p *= static_cast<unsigned long long>(i);
        }
    };
    mul(n);
    if (p < cap) mul(k);
    return p;
}

}  // namespace

bool PermPair::is_identity() const {
    for (std::size_t i = 0; i < file_perm.size(); ++i)
        if (file_perm[i] != static_cast<int>(i)) return false;
    for (std::size_t i = 0; i < user_perm.size(); ++i)
        if (user_perm[i] != static_cast<int>(i)) return false;
    return true;
}

PermPair identity_pair(const Problem& prob) {
    return PermPair{iota_vec(prob.num_files), iota_vec(prob.num_users)};
}

DemandVector act_demand(const PermPair& p, const DemandVector& d) {
    DemandVector out;
    out.entries.assign(d.entries.size(), 0);
    for (std::size_t k = 0; k < d.entries.size(); ++k)
        out.entries[static_cast<std::size_t>(p.user_perm[k])] =
            static_cast<std::uint8_t>(p.file_perm[d.entries[k]]);
    return out;
}

VarId apply_to_var(const PermPair& p, const VarId& v) {
    switch (v.kind) {
        case VarKind::File:   return file_var(p.file_perm[static_cast<std::size_t>(v.index)]);
        case VarKind::Cache:  return cache_var(p.user_perm[static_cast<std::size_t>(v.index)]);
        case VarKind::Signal: return signal_var(act_demand(p, v.demand));
        case VarKind::Aux:    throw std::invalid_argument("auxiliary variables have no permutation image");
    }
    throw std::logic_error("bad VarKind");
}

Mask apply_to_set(const PermPair& p, Mask s, const GroundSet& g) {
    Mask out = 0;
    for (int b = 0; b < g.size(); ++b) {
        if (!(s >> b & 1u)) continue;
        VarId v = g.var_at(b);
        if (v.kind == VarKind::Aux) {
            out |= Mask{1} << b;
            continue;
        }
        int nb = g.bit_of(apply_to_var(p, v));
        if (nb < 0)
            throw std::invalid_argument("permutation maps a signal outside the selected demand set");
        out |= Mask{1} << nb;
    }
    return out;
}

SymmetryGroup full_group(const Problem& prob) {
    if (sat_factorial_product(prob.num_files, prob.num_users) > 2'000'000ull)
        throw std::length_error("full product group too large to materialize");
    SymmetryGroup grp;
    grp.full_product = true;
    std::vector<int> fp = iota_vec(prob.num_files);
    do {
        std::vector<int> up = iota_vec(prob.num_users);
        do {
            grp.elements.push_back(PermPair{fp, up});
        } while (std::next_permutation(up.begin(), up.end()));
    } while (std::next_permutation(fp.begin(), fp.end()));
    return grp;
}

namespace {

bool ci_side_fixed(const PermPair& p, const CISpec& ci) {
    auto image_sorted = [&](const std::vector<VarId>& side) {
        std::vector<VarId> img;
        img.reserve(side.size());
        for (const auto& v : side) img.push_back(apply_to_var(p, v));
        std::sort(img.begin(), img.end());
        return img;
    };
    auto sorted = [](std::vector<VarId> side) {
        std::sort(side.begin(), side.end());
        return side;
    };
    std::vector<VarId> l = sorted(ci.left), r = sorted(ci.right);
    std::vector<VarId> il = image_sorted(ci.left), ir = image_sorted(ci.right);
    return (il == l && ir == r) || (il == r && ir == l);
}

}  // namespace

SymmetryGroup admissible_group(const GroundSet& g, const std::vector<CISpec>& cis) {
    const int K = g.prob.num_users;
    const int N = g.prob.num_files;
    const int D = g.num_signals();
    SymmetryGroup grp;

    std::vector<int> pibar = iota_vec(K);
    do {
        std::vector<int> sigma = iota_vec(D);
        do {
            // Derive the file permutation forced on demanded files by
            // demands[i] -> demands[sigma[i]] under this user permutation.
            std::vector<int> pihat(static_cast<std::size_t>(N), -1);
            bool ok = true;
            for (int i = 0; i < D && ok; ++i) {
                const auto& d = g.demands[static_cast<std::size_t>(i)].entries;
                const auto& dp = g.demands[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])].entries;
                for (int k = 0; k < K; ++k) {
                    int f = d[static_cast<std::size_t>(k)];
                    int fp = dp[static_cast<std::size_t>(pibar[static_cast<std::size_t>(k)])];
                    if (pihat[static_cast<std::size_t>(f)] == -1) pihat[static_cast<std::size_t>(f)] = fp;
                    else if (pihat[static_cast<std::size_t>(f)] != fp) { ok = false; break; }
                }
            }
            if (!ok) continue;
            std::vector<char> used(static_cast<std::size_t>(N), 0);
            for (int f = 0; f < N && ok; ++f) {
                int im = pihat[static_cast<std::size_t>(f)];
                if (im == -1) continue;
                if (used[static_cast<std::size_t>(im)]) ok = false;
                used[static_cast<std::size_t>(im)] = 1;
            }
            if (!ok) continue;

            std::vector<int> free_dom, free_img;
            for (int f = 0; f < N; ++f) {
                if (pihat[static_cast<std::size_t>(f)] == -1) free_dom.push_back(f);
                if (!used[static_cast<std::size_t>(f)]) free_img.push_back(f);
            }
            // Extend over undemanded files every possible way.
            std::vector<int> ext = free_img;
            do {
                PermPair cand{pihat, pibar};
                for (std::size_t i = 0; i < free_dom.size(); ++i)
                    cand.file_perm[static_cast<std::size_t>(free_dom[i])] = ext[i];
                bool keep = true;
                for (const auto& ci : cis)
                    if (!ci_side_fixed(cand, ci)) { keep = false; break; }
                if (keep) grp.elements.push_back(std::move(cand));
            } while (std::next_permutation(ext.begin(), ext.end()));
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    } while (std::next_permutation(pibar.begin(), pibar.end()));

    grp.full_product =
        grp.elements.size() == sat_factorial_product(N, K) && grp.elements.size() > 0;
    if (grp.elements.empty() || !grp.elements.front().is_identity())
        throw std::logic_error("admissible group enumeration lost the identity");
    return grp;
}

Mask canonicalize(Mask s, const SymmetryGroup& grp, const GroundSet& g) {
    Mask best = s;
    for (const auto& p : grp.elements) {
        Mask img = apply_to_set(p, s, g);
        if (img < best) best = img;
    }
    return best;
}

std::vector<std::vector<DemandVector>> demand_subset_classes(
    const Problem& prob, int subset_size, const std::vector<DemandType>& allowed_types) {
    std::vector<DemandVector> universe;
    for (const auto& t : allowed_types) {
        auto ds = demands_of_type(prob, t);
        universe.insert(universe.end(), ds.begin(), ds.end());
    }
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    if (subset_size == 0 || universe.empty())
        return {std::vector<DemandVector>{}};

    SymmetryGroup grp = full_group(prob);
    // Index-level action tables: the universe is closed under the group since
    // demand type is invariant.
    std::vector<std::vector<int>> tbl(grp.size(), std::vector<int>(universe.size()));
    for (std::size_t gi = 0; gi < grp.size(); ++gi)
        for (std::size_t di = 0; di < universe.size(); ++di) {
            DemandVector img = act_demand(grp.elements[gi], universe[di]);
            auto it = std::lower_bound(universe.begin(), universe.end(), img);
            tbl[gi][di] = static_cast<int>(it - universe.begin());
        }

    auto canon = [&](const std::vector<int>& s) {
        std::vector<int> best = s, img(s.size());
        for (const auto& row : tbl) {
            for (std::size_t i = 0; i < s.size(); ++i) img[i] = row[static_cast<std::size_t>(s[i])];
            std::sort(img.begin(), img.end());
            if (img < best) best = img;
        }
        return best;
    };

    std::set<std::vector<int>> level = {{}};
    for (int t = 0; t < subset_size; ++t) {
        std::set<std::vector<int>> next;
        for (const auto& rep : level) {
            for (int di = 0; di < static_cast<int>(universe.size()); ++di) {
                if (std::binary_search(rep.begin(), rep.end(), di)) continue;
                std::vector<int> s = rep;
                s.insert(std::upper_bound(s.begin(), s.end(), di), di);
                next.insert(canon(s));
            }
        }
        level = std::move(next);
    }

    std::vector<std::vector<DemandVector>> out;
    out.reserve(level.size());
    for (const auto& rep : level) {
        std::vector<DemandVector> cls;
        cls.reserve(rep.size());
        for (int di : rep) cls.push_back(universe[static_cast<std::size_t>(di)]);
        out.push_back(std::move(cls));
    }
    return out;
}

}  // namespace cachelp
