#include "ostra/linrel.hpp"

#include <functional>

#include "doctest.h"
#include "ostra/qexact.hpp"
#include "ostra/regex.hpp"

using namespace ostra;

namespace {

// Brute-force ground truth: enumerate every tuple of equal-length digit
// strings up to max_len, keep those whose tapes are all valid, and
// compare automaton acceptance against exact integer arithmetic.
void check_against_arithmetic(const LinearRelation& rel, const Dfa& dfa, int max_len) {
    const NumerationSystem& sys = rel.system;
    int k = rel.tapes();
    int r = sys.max_digit() + 1;
    Alphabet alphabet = Alphabet::uniform(k, r);
    REQUIRE(dfa.alphabet == alphabet);

    std::vector<int> syms;
    std::function<void(int, int)> rec = [&](int len, int pos) {
        if (pos == len) {
            std::vector<std::vector<int>> tapes(k);
            for (int sym : syms) {
                auto col = alphabet.unpack(sym);
                for (int t = 0; t < k; ++t) tapes[t].push_back(col[t]);
            }
            bool all_valid = true;
            for (int t = 0; t < k; ++t)
                if (!sys.is_valid(tapes[t])) all_valid = false;
            bool expect = false;
            if (all_valid) {
                Int sum = 0;
                for (int t = 0; t < k; ++t) {
                    std::vector<int> shifted = tapes[t];
                    shifted.insert(shifted.end(), rel.shifts[t], 0);
                    sum += rel.coeffs[t] * sys.decode_digits(shifted);
                }
                expect = sum == rel.constant;
            }
            CHECK(dfa.accepts(syms) == expect);
            return;
        }
        for (int sym = 0; sym < alphabet.symbol_count(); ++sym) {
            syms.push_back(sym);
            rec(len, pos + 1);
            syms.pop_back();
        }
    };
    for (int len = 0; len <= max_len; ++len) rec(len, 0);
}

std::vector<int> pack_pair(const Alphabet& a, const std::vector<int>& u,
                           const std::vector<int>& v) {
    REQUIRE(u.size() == v.size());
    std::vector<int> syms;
    for (size_t i = 0; i < u.size(); ++i)
        syms.push_back(a.pack(std::vector<int>{u[i], v[i]}));
    return syms;
}

}  // namespace

TEST_CASE("fibonacci increment relation") {
    LinearRelation rel{NumerationSystem::fibonacci(), {1, -1}, {0, 0}, 1};
    Dfa dfa = relation_dfa(rel);
    // ((5)_F, (4)_F) padded: (1000, 0101)
    Alphabet pair = Alphabet::uniform(2, 2);
    CHECK(dfa.accepts(pack_pair(pair, {1, 0, 0, 0}, {0, 1, 0, 1})));
    check_against_arithmetic(rel, dfa, 8);
}

TEST_CASE("fibonacci x - 2y = 1") {
    LinearRelation rel{NumerationSystem::fibonacci(), {1, -2}, {0, 0}, 1};
    Dfa dfa = relation_dfa(rel);
    Alphabet pair = Alphabet::uniform(2, 2);
    // ((7)_F, (3)_F) = (1010, 0100)
    CHECK(dfa.accepts(pack_pair(pair, {1, 0, 1, 0}, {0, 1, 0, 0})));
    check_against_arithmetic(rel, dfa, 8);
}

TEST_CASE("fibonacci x - 10y - z = 0 against big-integer arithmetic") {
    LinearRelation rel{NumerationSystem::fibonacci(), {1, -10, -1}, {0, 0, 0}, 0};
    Dfa dfa = relation_dfa(rel);
    check_against_arithmetic(rel, dfa, 6);
}

TEST_CASE("pell and ostrowski relations against brute force") {
    for (auto sys : {NumerationSystem::pell(), NumerationSystem::ostrowski({2, 1}),
                     NumerationSystem::ostrowski({3})}) {
        int len = sys.max_digit() >= 3 ? 4 : 5;
        check_against_arithmetic({sys, {1, -1}, {0, 0}, 1}, relation_dfa({sys, {1, -1}, {0, 0}, 1}), len);
        check_against_arithmetic({sys, {1, -2}, {0, 0}, 0}, relation_dfa({sys, {1, -2}, {0, 0}, 0}), len);
        check_against_arithmetic({sys, {1, -1}, {1, 0}, 0}, relation_dfa({sys, {1, -1}, {1, 0}, 0}), len);
    }
}

TEST_CASE("shifted relations against brute force") {
    LinearRelation rel{NumerationSystem::fibonacci(), {1, -1}, {1, 0}, 0};
    check_against_arithmetic(rel, relation_dfa(rel), 7);
    LinearRelation rel2{NumerationSystem::ostrowski({2, 1}), {1, -3, -2}, {2, 0, 0}, 0};
    check_against_arithmetic(rel2, relation_dfa(rel2), 5);
}

TEST_CASE("the Eq.(1) instance for (sqrt(3)-1)/2 synchronizes floor(n*beta)") {
    // val(w 0^2) = 3u + 2z over tapes (w, u, z), with w and u carrying
    // the same string for u = n-1, pins z = floor(n*beta).
    NumerationSystem sys = NumerationSystem::ostrowski({2, 1});
    QuadraticIrrational beta(-1, 1, 3, 2);
    Dfa rel = relation_dfa({sys, {1, -3, -2}, {2, 0, 0}, 0});
    Alphabet triple = Alphabet::uniform(3, 3);
    auto triple_syms = [&](std::vector<int> ur, std::vector<int> zr) {
        size_t len = std::max(ur.size(), zr.size());
        ur.insert(ur.begin(), len - ur.size(), 0);
        zr.insert(zr.begin(), len - zr.size(), 0);
        std::vector<int> syms;
        for (size_t i = 0; i < len; ++i)
            syms.push_back(triple.pack(std::vector<int>{ur[i], ur[i], zr[i]}));
        return syms;
    };
    for (long n = 1; n <= 500; ++n) {
        Int u = n - 1;
        Int z = beatty_floor(n, beta);
        CHECK(rel.accepts(triple_syms(sys.encode(u).digits, sys.encode(z).digits)));
        // any other z in a small window must be rejected
        for (long dz = -2; dz <= 2; ++dz) {
            if (dz == 0) continue;
            Int wrong = z + dz;
            if (wrong < 0) continue;
            CHECK_FALSE(rel.accepts(
                triple_syms(sys.encode(u).digits, sys.encode(wrong).digits)));
        }
    }
}

TEST_CASE("regex fixtures chained over a full period equal the shift-by-m relation") {
    struct Case {
        NumerationSystem sys;
        int m;
    };
    for (const Case& c : {Case{NumerationSystem::fibonacci(), 1},
                          Case{NumerationSystem::pell(), 1},
                          Case{NumerationSystem::ostrowski({3}), 1},
                          Case{NumerationSystem::ostrowski({2, 1}), 2},
                          Case{NumerationSystem::ostrowski({3, 1, 1}), 3}}) {
        REQUIRE(shift_regex_fixture(c.sys).has_value());
        Dfa chained = shift_chain_dfa(c.sys, c.m, true);
        Dfa direct = relation_dfa({c.sys, {1, -1}, {c.m, 0}, 0});
        CHECK(equivalent_dfa(chained, direct));
    }
}

TEST_CASE("single-period fixtures match the generic value relation") {
    for (auto sys : {NumerationSystem::fibonacci(), NumerationSystem::pell(),
                     NumerationSystem::ostrowski({3})}) {
        Dfa from_regex = shift_dfa(sys);
        Dfa from_relation = shift_dfa_generic(sys);
        CHECK(equivalent_dfa(from_regex, from_relation));
    }
}

TEST_CASE("shift accepts the paper's example and the zero pair") {
    Dfa shift = shift_dfa(NumerationSystem::fibonacci());
    Alphabet pair = Alphabet::uniform(2, 2);
    CHECK(shift.accepts(pack_pair(pair, {0, 1, 0, 0, 1, 0}, {1, 0, 0, 1, 0, 0})));
    CHECK(shift.accepts(pack_pair(pair, {0}, {0})));
}

TEST_CASE("chained string shifts equal the shift-by-m relation at full periods") {
    NumerationSystem fib = NumerationSystem::fibonacci();
    for (int m = 1; m <= 3; ++m)
        CHECK(equivalent_dfa(shift_chain_dfa(fib, m),
                             relation_dfa({fib, {1, -1}, {m, 0}, 0})));
    NumerationSystem ost21 = NumerationSystem::ostrowski({2, 1});
    for (int m : {2, 4})
        CHECK(equivalent_dfa(shift_chain_dfa(ost21, m),
                             relation_dfa({ost21, {1, -1}, {m, 0}, 0})));
    NumerationSystem ost311 = NumerationSystem::ostrowski({3, 1, 1});
    CHECK(equivalent_dfa(shift_chain_dfa(ost311, 3),
                         relation_dfa({ost311, {1, -1}, {3, 0}, 0})));
}

TEST_CASE("floor_div_relation c=1 is the plain linear relation") {
    NumerationSystem sys = NumerationSystem::fibonacci();
    Dfa fd = floor_div_relation(sys, 2, 1);
    Dfa plain = minimize_dfa(relation_dfa({sys, {1, 2, -1}, {0, 0, 0}, 0}));
    CHECK(equivalent_dfa(fd, plain));
}

TEST_CASE("floor_div_relation matches the beatty oracle") {
    // z = floor((u + 2n)/3) over Zeckendorf tapes (u, n, z)
    NumerationSystem sys = NumerationSystem::fibonacci();
    Dfa fd = floor_div_relation(sys, 2, 3);
    Alphabet triple = Alphabet::uniform(3, 2);
    for (long u = 0; u <= 40; ++u)
        for (long n = 0; n <= 40; n += 3) {
            long z = (u + 2 * n) / 3;
            auto ur = sys.encode(u).digits;
            auto nr = sys.encode(n).digits;
            auto zr = sys.encode(z).digits;
            size_t len = std::max({ur.size(), nr.size(), zr.size()});
            ur.insert(ur.begin(), len - ur.size(), 0);
            nr.insert(nr.begin(), len - nr.size(), 0);
            zr.insert(zr.begin(), len - zr.size(), 0);
            std::vector<int> syms;
            for (size_t i = 0; i < len; ++i)
                syms.push_back(triple.pack(std::vector<int>{ur[i], nr[i], zr[i]}));
            CHECK(fd.accepts(syms));
        }
}

TEST_CASE("diagonal identity: c x - c y = 0 is the diagonal on valid strings") {
    NumerationSystem sys = NumerationSystem::fibonacci();
    Dfa diag3 = relation_dfa({sys, {3, -3}, {0, 0}, 0});
    Dfa diag1 = relation_dfa({sys, {1, -1}, {0, 0}, 0});
    CHECK(equivalent_dfa(diag3, diag1));
}

TEST_CASE("degenerate relations are rejected") {
    CHECK_THROWS(relation_dfa({NumerationSystem::fibonacci(), {}, {}, 0}));
    CHECK_THROWS(relation_dfa({NumerationSystem::fibonacci(), {0, 0}, {0, 0}, 1}));
    CHECK_THROWS(relation_dfa({NumerationSystem::fibonacci(), {1, -1}, {0}, 0}));
}

TEST_CASE("relation text form parses") {
    LinearRelation rel = LinearRelation::parse("fib: x - 2y = 1");
    CHECK(rel.system == NumerationSystem::fibonacci());
    CHECK(rel.coeffs == std::vector<long>{1, -2});
    CHECK(rel.shifts == std::vector<int>{0, 0});
    CHECK(rel.constant == 1);

    LinearRelation rel2 = LinearRelation::parse("ost[2,1]: shift2(w) - 3z - 2u = 0");
    CHECK(rel2.system == NumerationSystem::ostrowski({2, 1}));
    CHECK(rel2.coeffs == std::vector<long>{1, -3, -2});
    CHECK(rel2.shifts == std::vector<int>{2, 0, 0});
    CHECK(rel2.constant == 0);

    CHECK_THROWS(LinearRelation::parse("fib: x - 2y"));
    CHECK_THROWS(LinearRelation::parse("x - 2y = 1"));
}
