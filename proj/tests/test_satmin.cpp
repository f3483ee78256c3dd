#include "ostra/satmin.hpp"

#include <algorithm>

#include "doctest.h"
#include "ostra/dimacs.hpp"

using namespace ostra;

namespace {

BetaLinkage phi_link() {
    return derive_beta(QuadraticIrrational::parse("(1+sqrt(5))/2"));
}

}  // namespace

TEST_CASE("dictionary entries pair powers with oracle digits") {
    Dictionary d = build_dictionary(phi_link(), 2, 3);
    REQUIRE(d.entries.size() == 4);
    CHECK(d.entries[0] == std::pair<std::string, int>{"0", 0});
    CHECK(d.entries[1] == std::pair<std::string, int>{"1", 1});
    CHECK(d.entries[2] == std::pair<std::string, int>{"10", 0});
    CHECK(d.entries[3] == std::pair<std::string, int>{"101", 0});

    Dictionary single = build_dictionary(phi_link(), 2, 1);
    CHECK(single.entries ==
          decltype(single.entries){{"0", 0}, {"1", 1}});
}

TEST_CASE("dictionary text round-trips") {
    Dictionary d = build_dictionary(phi_link(), 2, 5);
    Dictionary back = Dictionary::from_text(d.to_text(), d.system, d.base);
    CHECK(back.entries == d.entries);
}

TEST_CASE("apta is prefix-closed with dictionary outputs") {
    Dictionary d = build_dictionary(phi_link(), 2, 8);
    Apta a = build_apta(d);
    // every node's parent chain reaches the root
    for (int v = 1; v < a.node_count(); ++v) {
        CHECK(a.parent[v] >= 0);
        CHECK(a.parent[v] < v);
        CHECK(a.child[a.parent[v]][a.parent_label[v]] == v);
    }
    // each dictionary string lands on a node with its output
    for (const auto& [str, out] : d.entries) {
        int node = 0;
        for (char ch : str) node = a.child[node][ch - '0'];
        CHECK(a.output[node] == out);
    }
    Dictionary tiny{d.system, 2, {{"1", 1}}};
    Apta ta = build_apta(tiny);
    CHECK(ta.node_count() == 2);
    CHECK(build_cg(ta).edges.empty());
}

TEST_CASE("consistency graph holds exactly the defined disagreeing pairs") {
    Dictionary d = build_dictionary(phi_link(), 2, 12);
    Apta a = build_apta(d);
    ConsistencyGraph g = build_cg(a);
    size_t expected = 0;
    for (int u = 0; u < a.node_count(); ++u)
        for (int v = u + 1; v < a.node_count(); ++v)
            if (a.output[u] != kNoOutput && a.output[v] != kNoOutput &&
                a.output[u] != a.output[v])
                ++expected;
    CHECK(g.edges.size() == expected);
    for (auto [u, v] : g.edges) {
        CHECK(a.output[u] != kNoOutput);
        CHECK(a.output[v] != kNoOutput);
        CHECK(a.output[u] != a.output[v]);
    }
}

TEST_CASE("cdcl solver basics") {
    CdclSolver s;
    s.ensure_vars(2);
    CHECK(s.add_clause({1, 2}));
    CHECK(s.solve() == SatResult::sat);
    CHECK((s.model_value(1) || s.model_value(2)));
    CHECK(s.add_clause({-1}));
    bool still_ok = s.add_clause({-2});  // falsified at level 0
    CHECK((!still_ok || s.solve() == SatResult::unsat));
}

TEST_CASE("cdcl solves the pigeonhole contradiction") {
    // 4 pigeons, 3 holes
    CdclSolver s;
    auto var = [](int p, int h) { return 3 * p + h + 1; };
    s.ensure_vars(12);
    for (int p = 0; p < 4; ++p)
        s.add_clause({var(p, 0), var(p, 1), var(p, 2)});
    bool ok = true;
    for (int h = 0; h < 3; ++h)
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q)
                ok = ok && s.add_clause({-var(p, h), -var(q, h)});
    CHECK((!ok || s.solve() == SatResult::unsat));
}

TEST_CASE("incremental blocking enumerates every assignment") {
    CdclSolver s;
    s.ensure_vars(3);
    s.add_clause({1, 2, 3});
    int models = 0;
    while (s.solve() == SatResult::sat) {
        ++models;
        std::vector<int> block;
        for (int v = 1; v <= 3; ++v) block.push_back(s.model_value(v) ? -v : v);
        if (!s.add_clause(block)) break;
    }
    CHECK(models == 7);
}

TEST_CASE("dimacs round-trips byte-exactly and deterministically") {
    Dictionary d = build_dictionary(phi_link(), 2, 10);
    Apta a = build_apta(d);
    CnfEncoding e1 = encode(a, build_cg(a), 4, OstrowskiConstraints::for_system(d.system));
    CnfEncoding e2 = encode(a, build_cg(a), 4, OstrowskiConstraints::for_system(d.system));
    std::string text1 = write_dimacs(e1.to_cnf());
    std::string text2 = write_dimacs(e2.to_cnf());
    CHECK(text1 == text2);
    CnfFile parsed = read_dimacs(text1);
    CHECK(parsed.vars == e1.vars);
    CHECK(parsed.clauses == e1.clauses);
    CHECK(write_dimacs(parsed) == text1);
    // the variable map comments use the documented shapes
    CHECK(text1.find("c x 0 0 ") != std::string::npos);
    CHECK(text1.find("c y 0 0 0 ") != std::string::npos);
    CHECK(text1.find("c o 0 0 ") != std::string::npos);
}

TEST_CASE("one color cannot host a conflict") {
    Dictionary d{NumerationSystem::fibonacci(), 2, {{"0", 0}, {"1", 1}}};
    Apta a = build_apta(d);
    CnfEncoding enc = encode(a, build_cg(a), 1,
                             OstrowskiConstraints::for_system(d.system));
    CHECK(solve(enc).result == SatResult::unsat);
}

TEST_CASE("decoded models satisfy the metallic constraints syntactically") {
    BetaLinkage link = phi_link();
    Dictionary d = build_dictionary(link, 2, 20);
    Apta a = build_apta(d);
    CnfEncoding enc = encode(a, build_cg(a), 8,
                             OstrowskiConstraints::for_system(link.system));
    SolveOutcome out = solve(enc);
    REQUIRE(out.result == SatResult::sat);
    Dfao m = decode_model(enc, out.model);
    // replay the sample
    for (const auto& [str, label] : d.entries) {
        std::vector<int> digits;
        for (char ch : str) digits.push_back(ch - '0');
        auto got = m.run(digits);
        REQUIRE(got.has_value());
        CHECK(*got == label);
    }
    // no self-loop on d1 = 1; 1-successors carry only the 0 edge
    for (int i = 0; i < m.state_count(); ++i) {
        CHECK(m.next[i][1] != i);
        int j = m.next[i][1];
        if (j != kDead && j != i) CHECK(m.next[j][1] == kDead);
    }
}

TEST_CASE("decoded models respect the base DFA through their base map") {
    BetaLinkage link = derive_beta(QuadraticIrrational::parse("(sqrt(3)-1)/2"));
    Dfao base = link.system.validity_dfa();
    Dictionary d = build_dictionary(link, 2, 12);
    Apta a = build_apta(d);
    CnfEncoding enc = encode(a, build_cg(a), 12,
                             OstrowskiConstraints::for_system(link.system));
    SolveOutcome out = solve(enc);
    REQUIRE(out.result == SatResult::sat);
    Dfao m = decode_model(enc, out.model);
    std::vector<int> bmap(enc.colors, -1);
    for (int p = 0; p < enc.colors; ++p)
        for (int t = 0; t < base.state_count(); ++t)
            if (out.model[enc.b[p][t]]) {
                CHECK(bmap[p] == -1);  // at most one base type
                bmap[p] = t;
            }
    for (int p = 0; p < enc.colors; ++p) {
        CHECK(bmap[p] >= 0);  // at least one base type
        for (int l = 0; l < enc.alphabet_size; ++l)
            if (m.next[p][l] != kDead)
                CHECK(base.next[bmap[p]][l] == bmap[m.next[p][l]]);
    }
    CHECK(bmap[0] == 0);
}

TEST_CASE("bfs symmetry breaking never changes the verdict") {
    BetaLinkage link = phi_link();
    for (int ds : {4, 7}) {
        Dictionary d = build_dictionary(link, 2, ds);
        Apta a = build_apta(d);
        ConsistencyGraph g = build_cg(a);
        auto constraints = OstrowskiConstraints::for_system(link.system);
        for (int k = 2; k <= 5; ++k) {
            EncodeOptions with, without;
            without.bfs_symmetry = false;
            SatResult r1 = solve(encode(a, g, k, constraints, with)).result;
            SatResult r2 = solve(encode(a, g, k, constraints, without)).result;
            CHECK(r1 == r2);
        }
    }
}

TEST_CASE("sat results are monotone in colors and digit set") {
    BetaLinkage link = phi_link();
    auto verdict = [&](int k, int ds) {
        Dictionary d = build_dictionary(link, 2, ds);
        Apta a = build_apta(d);
        CnfEncoding enc = encode(a, build_cg(a), k,
                                 OstrowskiConstraints::for_system(link.system));
        return solve(enc).result;
    };
    for (int k = 2; k <= 5; ++k)
        for (int ds = 2; ds <= 10; ds += 2) {
            if (verdict(k, ds) == SatResult::sat) {
                CHECK(verdict(k, ds - 1) == SatResult::sat);
            } else {
                if (k > 2) CHECK(verdict(k - 1, ds) == SatResult::unsat);
            }
        }
}

TEST_CASE("verify_candidate reports the first wrong index") {
    BetaLinkage link = phi_link();
    DigitAutomatonBundle bundle = build_digit_dfao(link, 2);
    OracleTable table = build_oracle_table(link, 2, 2000);
    CHECK_FALSE(verify_candidate(bundle.combined, table).has_value());
    // flip one output on a reachable state
    Dfao broken = bundle.combined;
    int target = broken.run(link.system.encode(4).digits).has_value()
                     ? [&] {
                           int s = broken.start;
                           for (int dgt : link.system.encode(4).digits)
                               s = broken.next[s][dgt];
                           return s;
                       }()
                     : 0;
    broken.output[target] = 1 - broken.output[target];
    auto fail = verify_candidate(broken, table);
    REQUIRE(fail.has_value());
    CHECK(*fail <= 3);  // 2^2 = 4 lands on the flipped state at n = 2
}

TEST_CASE("the ladder walks unsat to more states, unverified to more digits") {
    BetaLinkage link = phi_link();
    LadderOptions opts;
    opts.k_start = 7;
    opts.ds_start = 50;
    opts.k_target = 8;
    opts.n_verify = 2000;
    opts.enumerate_at_target = false;
    LadderResult result = run_ladder(link, 2, opts);
    REQUIRE(result.rows.size() >= 2);
    // digit sets grow at k = 7 until unsat flips the ladder to k = 8
    bool saw_unsat_at_7 = false;
    for (const LadderRow& row : result.rows) {
        CHECK(row.k >= 7);
        CHECK(row.k <= 8);
        if (row.k == 7 && !row.sat) saw_unsat_at_7 = true;
        if (row.k == 7 && row.sat) CHECK_FALSE(row.verified);
    }
    CHECK(saw_unsat_at_7);
    const LadderRow& last = result.rows.back();
    CHECK(last.k == 8);
    CHECK(last.sat);
    CHECK(last.verified);
}

TEST_CASE("enumeration is stable across granularities for the unique case") {
    BetaLinkage link = phi_link();
    Dictionary d = build_dictionary(link, 2, 54);
    Apta a = build_apta(d);
    CnfEncoding enc = encode(a, build_cg(a), 8,
                             OstrowskiConstraints::for_system(link.system));
    OracleTable table = build_oracle_table(link, 2, 10000);
    for (bool block_base : {false, true}) {
        std::vector<Dfao> all = enumerate_all(enc, {}, block_base);
        int verified = 0;
        const Dfao* unique_candidate = nullptr;
        for (const Dfao& cand : all)
            if (!verify_candidate(cand, table)) {
                ++verified;
                unique_candidate = &cand;
            }
        CHECK(verified == 1);
        REQUIRE(unique_candidate != nullptr);
        DigitAutomatonBundle bundle = build_digit_dfao(link, 2);
        CHECK(equivalent_dfao(minimize(*unique_candidate), bundle.combined));
        // enumerated automata are pairwise behaviorally distinct
        for (size_t i = 0; i < all.size(); ++i)
            for (size_t j = i + 1; j < all.size(); ++j)
                CHECK_FALSE(equivalent_dfao(all[i], all[j]));
    }
}
