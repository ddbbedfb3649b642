#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cachelp/lpbuild.hpp"
#include "cachelp/presets.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cachelp;

namespace {

TradeoffSpec spec_of(int users, int files, std::initializer_list<const char*> demands) {
    TradeoffSpec s;
    s.prob = make_instance(users, files);
    for (const char* d : demands) s.demands.push_back(parse_demand_label(d, s.prob));
    return s;
}

// Canonical text form of a raw constraint, for order-insensitive comparison.
std::string raw_key(const RawConstraint& c) {
    std::vector<std::pair<Mask, std::string>> ts;
    for (const auto& t : c.terms) ts.emplace_back(t.subset, rat_string(t.coef));
    std::sort(ts.begin(), ts.end());
    std::ostringstream os;
    os << (c.rel == Rel::Le ? "<=" : c.rel == Rel::Ge ? ">=" : "==") << rat_string(c.rhs);
    for (const auto& [m, co] : ts) os << "|" << m << ":" << co;
    return os.str();
}

RawConstraint raw_row(std::initializer_list<std::pair<Mask, int>> terms, Rel rel, Rat rhs) {
    RawConstraint c;
    for (auto [m, co] : terms) c.terms.push_back({m, Rat(co)});
    c.rel = rel;
    c.rhs = std::move(rhs);
    return c;
}

std::vector<std::string> keys_of(const std::vector<RawConstraint>& rows) {
    std::vector<std::string> out;
    for (const auto& c : rows) out.push_back(raw_key(c));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("elemental family is exactly Yeung's minimal set") {
    std::vector<TradeoffSpec> specs;
    specs.push_back(spec_of(2, 2, {"01"}));
    specs.push_back(spec_of(3, 2, {"001"}));
    specs.push_back(spec_of(3, 3, {"012"}));
    specs.push_back(spec_of(3, 3, {"012", "001"}));
    specs.push_back(spec_of(4, 4, {"0012"}));
    for (const auto& s : specs) {
        GroundSet g = build_ground_set(s);
        const int n = g.size();
        const Mask full = (Mask{1} << n) - 1;

        auto rows = elemental_inequalities(g);
        std::size_t expected =
            static_cast<std::size_t>(n) +
            static_cast<std::size_t>(n * (n - 1) / 2) * (std::size_t{1} << (n - 2));
        CAPTURE(n);
        CHECK(rows.size() == expected);

        std::vector<RawConstraint> streamed;
        for_each_elemental(g, [&](const RawConstraint& c) { streamed.push_back(c); });
        REQUIRE(streamed.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            CHECK(raw_key(rows[i]) == raw_key(streamed[i]));

        // Decode every row back into its generator and require full coverage:
        // n conditional-entropy rows plus one conditional mutual information
        // per pair {i,j} and context A, each exactly once.
        std::set<int> cond;
        std::set<std::tuple<int, int, Mask>> mi;
        for (const auto& c : rows) {
            REQUIRE(c.rel == Rel::Ge);
            REQUIRE(c.rhs == 0);
            REQUIRE(c.tag == RowTag::Elemental);
            std::vector<Mask> plus, minus;
            for (const auto& t : c.terms) {
                REQUIRE((t.coef == 1 || t.coef == -1));
                (t.coef == 1 ? plus : minus).push_back(t.subset);
            }
            if (plus.size() == 1) {
                REQUIRE(minus.size() == 1);
                REQUIRE(plus[0] == full);
                Mask gone = full ^ minus[0];
                REQUIRE(std::popcount(gone) == 1);
                CHECK(cond.insert(std::countr_zero(gone)).second);
            } else {
                REQUIRE(plus.size() == 2);
                Mask a = plus[0] & plus[1];
                Mask bi = plus[0] ^ a, bj = plus[1] ^ a;
                REQUIRE(std::popcount(bi) == 1);
                REQUIRE(std::popcount(bj) == 1);
                std::vector<Mask> want_minus{a | bi | bj};
                if (a != 0) want_minus.push_back(a);
                std::sort(want_minus.begin(), want_minus.end());
                std::sort(minus.begin(), minus.end());
                REQUIRE(minus == want_minus);
                int i = std::countr_zero(bi), j = std::countr_zero(bj);
                CHECK(mi.insert({std::min(i, j), std::max(i, j), a}).second);
            }
        }
        CHECK(cond.size() == static_cast<std::size_t>(n));
        CHECK(mi.size() == expected - static_cast<std::size_t>(n));
    }
}

TEST_CASE("elemental rows at three ground variables, written out") {
    // A 1-user 1-file instance keeps the ground set at {W0, Z0, X}; masks are
    // W0 = 1, Z0 = 2, X = 4.
    GroundSet g{make_instance(1, 1), {parse_demand_label("0", make_instance(1, 1))}, 0};
    REQUIRE(g.size() == 3);
    auto rows = elemental_inequalities(g);
    std::vector<RawConstraint> want;
    want.push_back(raw_row({{7, 1}, {6, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{7, 1}, {5, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{7, 1}, {3, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{5, 1}, {6, 1}, {7, -1}, {4, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{1, 1}, {2, 1}, {3, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{3, 1}, {6, 1}, {7, -1}, {2, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{1, 1}, {4, 1}, {5, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{3, 1}, {5, 1}, {7, -1}, {1, -1}}, Rel::Ge, Rat(0)));
    want.push_back(raw_row({{2, 1}, {4, 1}, {6, -1}}, Rel::Ge, Rat(0)));
    REQUIRE(rows.size() == want.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(raw_key(rows[i]) == raw_key(want[i]));

    CHECK_THROWS_AS((void)elemental_inequalities(g, 2), std::length_error);
}

TEST_CASE("problem rows for the two-user pair, written out") {
    TradeoffSpec s = spec_of(2, 2, {"01"});
    // Masks: W0 = 1, W1 = 2, Z0 = 4, Z1 = 8, X = 16.
    const Rat m(3, 4);
    auto got = keys_of(problem_constraints(s, m));
    std::vector<RawConstraint> want;
    want.push_back(raw_row({{1, 1}}, Rel::Eq, Rat(1)));
    want.push_back(raw_row({{2, 1}}, Rel::Eq, Rat(1)));
    want.push_back(raw_row({{3, 1}}, Rel::Eq, Rat(2)));
    want.push_back(raw_row({{4, 1}}, Rel::Le, m));
    want.push_back(raw_row({{7, 1}, {3, -1}}, Rel::Eq, Rat(0)));
    want.push_back(raw_row({{8, 1}}, Rel::Le, m));
    want.push_back(raw_row({{11, 1}, {3, -1}}, Rel::Eq, Rat(0)));
    want.push_back(raw_row({{16, 1}, {kLoadTerm, -1}}, Rel::Le, Rat(0)));
    want.push_back(raw_row({{19, 1}, {3, -1}}, Rel::Eq, Rat(0)));
    want.push_back(raw_row({{21, 1}, {20, -1}}, Rel::Eq, Rat(0)));
    want.push_back(raw_row({{26, 1}, {24, -1}}, Rel::Eq, Rat(0)));
    CHECK(got == keys_of(want));

    // Tag counts drive per-tag reporting downstream, so nail them too.
    std::map<RowTag, int> tags;
    for (const auto& c : problem_constraints(s, m)) tags[c.tag] += 1;
    CHECK(tags[RowTag::File] == 3);
    CHECK(tags[RowTag::Cache] == 4);
    CHECK(tags[RowTag::ObjectiveLink] == 1);
    CHECK(tags[RowTag::Signal] == 1);
    CHECK(tags[RowTag::Decode] == 2);
}

TEST_CASE("common-information rows for one declaration") {
    TradeoffSpec s = spec_of(2, 2, {"01", "10"});
    s.cis.push_back(CISpec{{file_var(0)}, {file_var(1)}});
    GroundSet g = build_ground_set(s);
    // Masks: W0 = 1, W1 = 2, caches 4/8, signals 16/32, C0 = 64.
    auto got = keys_of(ci_constraints(s.cis[0], 0, g));
    std::vector<RawConstraint> want;
    want.push_back(raw_row({{65, 1}, {1, -1}}, Rel::Eq, Rat(0)));
    want.push_back(raw_row({{66, 1}, {2, -1}}, Rel::Eq, Rat(0)));
    want.push_back(raw_row({{64, 1}, {1, -1}, {2, -1}, {3, 1}}, Rel::Eq, Rat(0)));
    CHECK(got == keys_of(want));
    for (const auto& c : ci_constraints(s.cis[0], 0, g)) CHECK(c.tag == RowTag::Ci);

    // One side holding a signal rather than a file.
    TradeoffSpec t = spec_of(2, 2, {"01"});
    t.cis.push_back(CISpec{{file_var(0)}, {signal_var(t.demands[0])}});
    GroundSet gt = build_ground_set(t);
    auto got2 = keys_of(ci_constraints(t.cis[0], 0, gt));
    std::vector<RawConstraint> want2;
    want2.push_back(raw_row({{33, 1}, {1, -1}}, Rel::Eq, Rat(0)));
    want2.push_back(raw_row({{48, 1}, {16, -1}}, Rel::Eq, Rat(0)));
    want2.push_back(raw_row({{32, 1}, {1, -1}, {16, -1}, {17, 1}}, Rel::Eq, Rat(0)));
    CHECK(got2 == keys_of(want2));
}

TEST_CASE("library collapse detects exactly the decodable-complete subsets") {
    TradeoffSpec s = spec_of(2, 2, {"01"});
    GroundSet g = build_ground_set(s);
    const Mask w0 = 1, w1 = 2, z0 = 4, z1 = 8, x = 16;
    CHECK(library_collapse(w0 | w1, g) == Rat(2));
    CHECK(library_collapse(w0 | z1 | x, g) == Rat(2));
    CHECK(library_collapse(z0 | z1 | x, g) == Rat(2));
    CHECK(library_collapse(z0 | x, g) == std::nullopt);     // covers W0 only
    CHECK(library_collapse(z0 | z1, g) == std::nullopt);    // no signal to decode from
    CHECK(library_collapse(w0 | w1 | z0, g) == Rat(2));
    CHECK(library_collapse(x, g) == std::nullopt);
    CHECK(library_collapse(0, g) == std::nullopt);

    TradeoffSpec t = spec_of(3, 3, {"012"});
    GroundSet gt = build_ground_set(t);
    const Mask tz0 = 8, tz1 = 16, tz2 = 32, tx = 64;
    CHECK(library_collapse(tz0 | tz1 | tx, gt) == std::nullopt);  // file 2 missing
    CHECK(library_collapse(tz0 | tz1 | tz2 | tx, gt) == Rat(3));
    CHECK(library_collapse(Mask{4} | tz0 | tz1 | tx, gt) == Rat(3));  // W2 fills the gap

    // CI members never decode anything on their own.
    TradeoffSpec u = spec_of(2, 2, {"01", "10"});
    u.cis.push_back(CISpec{{file_var(0)}, {file_var(1)}});
    GroundSet gu = build_ground_set(u);
    Mask c0 = Mask{1} << gu.aux_bit(0);
    CHECK(library_collapse(c0 | (Mask{1} << gu.cache_bit(0)) | (Mask{1} << gu.signal_bit(0)), gu) ==
          std::nullopt);
}

namespace {

std::vector<TradeoffSpec> partition_specs() {
    std::vector<TradeoffSpec> specs;
    specs.push_back(spec_of(2, 2, {"01"}));
    {
        TradeoffSpec s = spec_of(2, 2, {"01", "10"});
        s.cis.push_back(CISpec{{file_var(0)}, {file_var(1)}});
        specs.push_back(s);
    }
    specs.push_back(spec_of(3, 2, {"001", "010"}));
    specs.push_back(spec_of(2, 3, {"01"}));
    specs.push_back(spec_of(3, 3, {"012"}));
    specs.push_back(spec_of(3, 3, {"012", "001"}));
    specs.push_back(spec_of(4, 4, {"0012"}));
    {
        TradeoffSpec s = spec_of(3, 3, {"012"});
        s.cis.push_back(CISpec{{file_var(0), file_var(1)}, {signal_var(s.demands[0])}});
        specs.push_back(s);
    }
    return specs;
}

}  // namespace

TEST_CASE("closure agrees with the brute fixpoint") {
    auto specs = partition_specs();
    specs.push_back(preset("T4.1"));
    specs.push_back(preset("T4.3"));
    for (const auto& s : specs) {
        GroundSet g = build_ground_set(s);
        const Mask full = (Mask{1} << g.size()) - 1;
        int bad = 0;
        Mask first = 0;
        for (Mask m = 0; m <= full; ++m) {
            if (closure_of(m, g, s.cis) != oracles::brute_closure(s, g, m) && bad++ == 0) first = m;
        }
        CAPTURE(s.label);
        CAPTURE(set_name(first, g));
        CHECK(bad == 0);
    }
}

TEST_CASE("merged columns equal the orbit-closure partition") {
    for (const auto& s : partition_specs()) {
        GroundSet g = build_ground_set(s);
        LPSkeleton sk = build_skeleton(s);
        oracles::BrutePartition bp = oracles::brute_partition(s, g);
        const Mask full = (Mask{1} << g.size()) - 1;
        REQUIRE(sk.rewrite.size() == static_cast<std::size_t>(full) + 1);
        REQUIRE(sk.rewrite[0] == -2);

        std::string diag;
        std::set<Mask> free_reps, fixed_reps;
        for (Mask m = 1; m <= full && diag.empty(); ++m) {
            std::int32_t code = sk.rewrite[m];
            if (bp.fixed_val[m] >= 0) {
                fixed_reps.insert(bp.rep[m]);
                if (code != -2 - bp.fixed_val[m])
                    diag = set_name(m, g) + " should be pinned at " +
                           std::to_string(bp.fixed_val[m]);
                continue;
            }
            free_reps.insert(bp.rep[m]);
            if (code < 0) {
                diag = set_name(m, g) + " lost its column";
            } else if (code != sk.rewrite[bp.rep[m]]) {
                diag = set_name(m, g) + " split from its class head " + set_name(bp.rep[m], g);
            } else if (sk.cols[static_cast<std::size_t>(code)].subset != bp.rep[m]) {
                diag = set_name(m, g) + " mapped to a column labeled " +
                       set_name(sk.cols[static_cast<std::size_t>(code)].subset, g);
            }
        }
        CAPTURE(s.label.empty() ? set_name(full, g) : s.label);
        CAPTURE(diag);
        CHECK(diag.empty());

        // One column per free class, every column hit, plus the load column.
        CHECK(sk.stats.free_columns == free_reps.size());
        CHECK(sk.stats.fixed_columns == fixed_reps.size());
        REQUIRE(sk.cols.size() == free_reps.size() + 1);
        REQUIRE(sk.load_col == static_cast<int>(free_reps.size()));
        CHECK(sk.cols[static_cast<std::size_t>(sk.load_col)].is_load);
        CHECK(sk.cols[static_cast<std::size_t>(sk.load_col)].name == "r");
        std::set<Mask> col_subsets;
        for (const auto& c : sk.cols)
            if (!c.is_load) col_subsets.insert(c.subset);
        CHECK(col_subsets == free_reps);
    }
}

TEST_CASE("skeleton rows are normalized and in range") {
    for (const auto& s : partition_specs()) {
        LPSkeleton sk = build_skeleton(s);
        int bad = 0;
        for (const auto& r : sk.rows) {
            bool ok = !r.terms.empty() && r.terms.front().coef > 0;
            for (std::size_t t = 0; ok && t < r.terms.size(); ++t) {
                const auto& lt = r.terms[t];
                ok = lt.coef != 0 && lt.col >= 0 && lt.col < static_cast<int>(sk.cols.size()) &&
                     (t == 0 || r.terms[t - 1].col < lt.col);
            }
            bad += !ok;
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("reduced and unreduced optima coincide on tiny instances") {
    struct Case {
        TradeoffSpec spec;
        std::vector<Rat> mems;
        Rat broadcast_load;  // expected optimum at M = 0
    };
    std::vector<Case> cases;
    cases.push_back({spec_of(2, 2, {"01"}),
                     {Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)},
                     Rat(2)});
    cases.push_back({spec_of(3, 2, {"010"}), {Rat(0), Rat(1, 2), Rat(1)}, Rat(2)});
    cases.push_back({spec_of(2, 3, {"01"}), {Rat(0), Rat(3, 2), Rat(3)}, Rat(2)});

    for (auto& tc : cases) {
        Rat prev(-1);
        for (const auto& m : tc.mems) {
            LPInstance red = reduce_and_assemble(tc.spec, m);
            LPInstance unred = oracles::unreduced_lp(tc.spec, m);
            auto r1 = oracles::dense_simplex(oracles::to_dense(red));
            auto r2 = oracles::dense_simplex(oracles::to_dense(unred));
            REQUIRE(r1.status == oracles::DenseResult::kOptimal);
            REQUIRE(r2.status == oracles::DenseResult::kOptimal);
            CAPTURE(rat_string(m));
            CHECK(r1.objective == r2.objective);
            if (prev >= 0) CHECK(r1.objective <= prev);  // more memory never hurts
            prev = r1.objective;
            if (m == 0) CHECK(r1.objective == tc.broadcast_load);
            if (m == Rat(tc.spec.prob.num_files)) CHECK(r1.objective == 0);
        }
    }
}

TEST_CASE("the optimum scales linearly with the file unit") {
    TradeoffSpec s = spec_of(2, 2, {"01"});
    LPSkeleton sk = build_skeleton(s);
    const Rat m(1, 2);
    auto base = oracles::dense_simplex(oracles::to_dense(instantiate(sk, m)));
    auto doubled = oracles::dense_simplex(oracles::to_dense(instantiate(sk, 2 * m, Rat(2))));
    REQUIRE(base.status == oracles::DenseResult::kOptimal);
    REQUIRE(doubled.status == oracles::DenseResult::kOptimal);
    CHECK(doubled.objective == 2 * base.objective);
}

TEST_CASE("linear schemes witness feasibility of the assembled system") {
    {
        TradeoffSpec s = spec_of(2, 2, {"01"});
        GroundSet g = build_ground_set(s);
        LPSkeleton sk = build_skeleton(s);
        CHECK(oracles::scheme_violation(sk, oracles::full_cache_scheme(g, 1), Rat(2), Rat(0), 1) ==
              std::nullopt);
        CHECK(oracles::scheme_violation(sk, oracles::broadcast_scheme(g, 1), Rat(0), Rat(2), 1) ==
              std::nullopt);
        CHECK(oracles::scheme_violation(sk, oracles::coded_pair_scheme(g), Rat(2), Rat(1), 2) ==
              std::nullopt);
        // Starve either resource and the witness must break.
        CHECK(oracles::scheme_violation(sk, oracles::full_cache_scheme(g, 1), Rat(1), Rat(0), 1)
                  .has_value());
        CHECK(oracles::scheme_violation(sk, oracles::broadcast_scheme(g, 1), Rat(0), Rat(1), 1)
                  .has_value());
        // Unit rescaling moves every constant along.
        CHECK(oracles::scheme_violation(sk, oracles::broadcast_scheme(g, 3), Rat(0), Rat(6), 3) ==
              std::nullopt);
    }
    {
        TradeoffSpec s = spec_of(4, 4, {"0012"});
        GroundSet g = build_ground_set(s);
        LPSkeleton sk = build_skeleton(s);
        CHECK(oracles::scheme_violation(sk, oracles::full_cache_scheme(g, 1), Rat(4), Rat(0), 1) ==
              std::nullopt);
        CHECK(oracles::scheme_violation(sk, oracles::broadcast_scheme(g, 1), Rat(0), Rat(3), 1) ==
              std::nullopt);
    }
    {
        TradeoffSpec s = spec_of(3, 3, {"012", "001"});
        GroundSet g = build_ground_set(s);
        LPSkeleton sk = build_skeleton(s);
        CHECK(oracles::scheme_violation(sk, oracles::full_cache_scheme(g, 1), Rat(3), Rat(0), 1) ==
              std::nullopt);
        CHECK(oracles::scheme_violation(sk, oracles::broadcast_scheme(g, 1), Rat(0), Rat(3), 1) ==
              std::nullopt);
    }
}

TEST_CASE("instantiate assembles right-hand sides from the skeleton") {
    TradeoffSpec s = spec_of(2, 2, {"01", "10"});
    s.cis.push_back(CISpec{{file_var(0)}, {file_var(1)}});
    LPSkeleton sk = build_skeleton(s);
    const Rat m(5), u(3);
    LPInstance lp = instantiate(sk, m, u);
    REQUIRE(lp.rows.size() == sk.rows.size());
    bool any_mem = false;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& sr = sk.rows[i];
        CHECK(lp.rows[i].rhs == sr.rhs_const * u + sr.rhs_mem * m);
        CHECK(lp.rows[i].rel == sr.rel);
        CHECK(lp.rows[i].tag == sr.tag);
        REQUIRE(lp.rows[i].terms.size() == sr.terms.size());
        if (sr.rhs_mem != 0) any_mem = true;
        if (sr.tag == RowTag::Elemental) CHECK(lp.rows[i].rhs == 0);
    }
    CHECK(any_mem);
    CHECK(lp.memory == m);
    CHECK(lp.cols.size() == sk.cols.size());
    CHECK(lp.load_col == sk.load_col);
    CHECK(lp.label == sk.label);
}

TEST_CASE("assembly statistics add up") {
    for (const auto& s : partition_specs()) {
        LPSkeleton sk = build_skeleton(s);
        const auto& st = sk.stats;
        CHECK(st.raw_rows == st.kept_rows + st.dropped_tautologies + st.merged_duplicates);
        CHECK(st.kept_rows == sk.rows.size());
        std::uint64_t tag_sum = 0;
        for (auto c : st.rows_per_tag) tag_sum += c;
        CHECK(tag_sum == st.kept_rows);

        GroundSet g = build_ground_set(s);
        const int n = g.size();
        std::uint64_t elems = static_cast<std::uint64_t>(n) +
                              static_cast<std::uint64_t>(n * (n - 1) / 2)
                                  * (std::uint64_t{1} << (n - 2));
        std::uint64_t prob_rows = (std::uint64_t{1} << g.prob.num_files) - 1 +
                                  2u * static_cast<std::uint64_t>(g.prob.num_users) +
                                  static_cast<std::uint64_t>(g.num_signals()) *
                                      (2u + static_cast<std::uint64_t>(g.prob.num_users));
        CHECK(st.raw_rows == elems + prob_rows + 3u * s.cis.size());
    }
}

TEST_CASE("reduction sizes stay pinned for the four-user presets") {
    struct Golden {
        const char* label;
        std::size_t rows;
        std::uint64_t free_cols, fixed_cols;
        std::size_t group;
    };
    for (Golden gd : {Golden{"T4.1", 41918, 1414, 4, 1}, Golden{"T4.2", 38669, 1286, 4, 1},
                      Golden{"T4.3", 38232, 1490, 4, 1}}) {
        LPSkeleton sk = build_skeleton(preset(gd.label));
        CAPTURE(gd.label);
        CHECK(sk.rows.size() == gd.rows);
        CHECK(sk.stats.free_columns == gd.free_cols);
        CHECK(sk.stats.fixed_columns == gd.fixed_cols);
        CHECK(sk.stats.group_size == gd.group);
    }

    LPSkeleton sk = build_skeleton(spec_of(4, 4, {"0012"}));
    CHECK(sk.rows.size() == 528);
    CHECK(sk.stats.free_columns == 55);
    CHECK(sk.stats.fixed_columns == 4);
    CHECK(sk.stats.group_size == 2);
}
