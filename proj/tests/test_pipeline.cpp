#include "ostra/pipeline.hpp"

#include "doctest.h"
#include "ostra/presets.hpp"

using namespace ostra;

namespace {

BetaLinkage link_of(const char* alpha_text) {
    return derive_beta(QuadraticIrrational::parse(alpha_text));
}

std::vector<int> pair_input(const NumerationSystem& sys, const Int& n, const Int& z) {
    auto nr = sys.encode(n).digits;
    auto zr = sys.encode(z).digits;
    size_t len = std::max(nr.size(), zr.size());
    nr.insert(nr.begin(), len - nr.size(), 0);
    zr.insert(zr.begin(), len - zr.size(), 0);
    Alphabet pair = Alphabet::uniform(2, sys.max_digit() + 1);
    std::vector<int> syms;
    for (size_t i = 0; i < len; ++i)
        syms.push_back(pair.pack(std::vector<int>{nr[i], zr[i]}));
    return syms;
}

}  // namespace

TEST_CASE("derive_beta: golden ratio takes the Zeckendorf special case") {
    BetaLinkage link = link_of("(1+sqrt(5))/2");
    CHECK(link.fib_special);
    CHECK(link.system == NumerationSystem::fibonacci());
    CHECK(link.a == 0);
    CHECK(link.b == 1);
    CHECK(link.c == 1);
}

TEST_CASE("derive_beta: sqrt(3)+1 rotates to beta = (sqrt(3)-1)/2") {
    BetaLinkage link = link_of("1+sqrt(3)");
    CHECK_FALSE(link.fib_special);
    CHECK(link.system == NumerationSystem::ostrowski({2, 1}));
    CHECK(link.base_value == QuadraticIrrational(-1, 1, 3, 2));
    CHECK(link.period_len == 2);
    CHECK(link.q_m == 3);
    CHECK(link.q_m1 == 2);
    CHECK(link.a == 2);
    CHECK(link.b == 2);
    CHECK(link.c == 1);
}

TEST_CASE("derive_beta: sqrt(2) lands on the Pell system") {
    BetaLinkage link = link_of("sqrt(2)");
    CHECK(link.system == NumerationSystem::pell());
    CHECK(link.base_value == QuadraticIrrational(-1, 1, 2, 1));
    CHECK(link.q_m == 2);
    CHECK(link.q_m1 == 1);
    CHECK(link.a == 1);
    CHECK(link.b == 1);
    CHECK(link.c == 1);
}

TEST_CASE("derive_beta: remaining preset linkages") {
    BetaLinkage bronze = link_of("(3+sqrt(13))/2");
    CHECK(bronze.system == NumerationSystem::ostrowski({3}));
    CHECK(bronze.q_m == 3);
    CHECK(bronze.q_m1 == 1);
    CHECK(bronze.a == 3);
    CHECK(bronze.b == 1);
    CHECK(bronze.c == 1);

    BetaLinkage pv2 = link_of("(3+sqrt(17))/2");
    CHECK(pv2.system == NumerationSystem::ostrowski({3, 1, 1}));
    CHECK(pv2.q_m == 7);
    CHECK(pv2.q_m1 == 4);
    CHECK(pv2.a == 3);
    CHECK(pv2.b == 2);
    CHECK(pv2.c == 1);

    BetaLinkage self = link_of("(sqrt(3)-1)/2");
    CHECK(self.system == NumerationSystem::ostrowski({2, 1}));
    CHECK(self.a == 0);
    CHECK(self.b == 1);
    CHECK(self.c == 1);
}

TEST_CASE("derive_beta rejects non-purely-periodic or negative inputs") {
    // sqrt(2)/4 = [0; 2, (1, 4)] keeps a digit before the cycle
    CHECK_THROWS_AS(link_of("sqrt(2)/4"), std::domain_error);
    CHECK_THROWS_AS(derive_beta(QuadraticIrrational(-1, -1, 5, 2)), std::domain_error);
}

TEST_CASE("a period-4 system outside the presets goes through end to end") {
    // sqrt(7) = [2; (1,1,1,4)] rotates to beta = [0; (4,1,1,1)]
    BetaLinkage link = link_of("sqrt(7)");
    CHECK(link.system == NumerationSystem::ostrowski({4, 1, 1, 1}));
    DigitAutomatonBundle bundle = build_digit_dfao(link, 2);
    for (unsigned long n = 0; n <= 100; ++n)
        CHECK(eval_digit(bundle, n) == fractional_digit(n, 2, link.alpha));
}

TEST_CASE("floor(n*phi) automaton has 7 states and accepts the paper's pair") {
    BetaLinkage link = link_of("(1+sqrt(5))/2");
    Dfa phin = build_floor_base(link);
    CHECK(phin.state_count() == 7);
    CHECK(phin.accepts(pair_input(link.system, 11, 17)));
    CHECK_FALSE(phin.accepts(pair_input(link.system, 11, 16)));
    CHECK(phin.accepts(pair_input(link.system, 0, 0)));
}

TEST_CASE("floor base/alpha automata match the oracle and published sizes") {
    BetaLinkage pv1 = link_of("1+sqrt(3)");
    Dfa betan = build_floor_base(pv1);
    CHECK(betan.state_count() == 23);
    Dfa alphan = build_floor_alpha(pv1);
    CHECK(alphan.state_count() == 20);
    // (5)_beta = 110, floor(5*alpha) = 13 = (13)_beta = 10010
    CHECK(alphan.accepts(pair_input(pv1.system, 5, 13)));

    QuadraticIrrational beta(-1, 1, 3, 2);
    for (long n = 0; n <= 2000; ++n) {
        CHECK(betan.accepts(pair_input(pv1.system, n, beatty_floor(n, beta))));
        CHECK(alphan.accepts(pair_input(pv1.system, n, beatty_floor(n, pv1.alpha))));
    }
    // completeness: wrong z rejected
    for (long n = 1; n <= 200; ++n) {
        CHECK_FALSE(betan.accepts(pair_input(pv1.system, n, beatty_floor(n, beta) + 1)));
        CHECK_FALSE(alphan.accepts(pair_input(pv1.system, n, beatty_floor(n, pv1.alpha) + 1)));
    }
}

TEST_CASE("floor base automata built from chained shifts agree") {
    for (const char* text : {"(1+sqrt(5))/2", "1+sqrt(3)"}) {
        BetaLinkage link = link_of(text);
        CHECK(equivalent_dfa(build_floor_base(link, false), build_floor_base(link, true)));
    }
}

TEST_CASE("floor(n*alpha) synchronization for every preset") {
    for (const PresetConfig& preset : presets()) {
        BetaLinkage link = link_of(preset.alpha_text.c_str());
        Dfa alphan = build_floor_alpha(link);
        for (long n = 0; n <= 500; ++n)
            CHECK(alphan.accepts(
                pair_input(link.system, n, beatty_floor(n, link.alpha))));
    }
}

TEST_CASE("digit DFAO sizes match the published table") {
    struct Case {
        const char* alpha;
        int base;
        int states;
    };
    for (const Case& c : {Case{"(1+sqrt(5))/2", 2, 8}, Case{"(1+sqrt(5))/2", 3, 13},
                          Case{"sqrt(2)", 2, 6}, Case{"(3+sqrt(13))/2", 2, 7},
                          Case{"(3+sqrt(13))/2", 3, 8}, Case{"(sqrt(3)-1)/2", 2, 12}}) {
        BetaLinkage link = link_of(c.alpha);
        DigitAutomatonBundle bundle = build_digit_dfao(link, c.base);
        CHECK(bundle.combined.state_count() == c.states);
    }
}

TEST_CASE("per-digit DFAs partition the inputs") {
    BetaLinkage link = link_of("(1+sqrt(5))/2");
    DigitAutomatonBundle bundle = build_digit_dfao(link, 3);
    for (long q = 0; q <= 2000; ++q) {
        Representation rep = link.system.encode(q);
        Int diff = beatty_floor(3 * Int(q), link.alpha) - 3 * beatty_floor(q, link.alpha);
        int expected_digit = (int)diff.get_si();
        int hits = 0;
        for (size_t i = 0; i < bundle.per_digit.size(); ++i)
            if (bundle.per_digit[i].accepts(rep.digits)) {
                ++hits;
                CHECK((int)i + 1 == expected_digit);
            }
        CHECK(hits == (expected_digit == 0 ? 0 : 1));
    }
}

TEST_CASE("eval_digit reproduces the printed expansions") {
    BetaLinkage phi = link_of("(1+sqrt(5))/2");
    DigitAutomatonBundle b2 = build_digit_dfao(phi, 2);
    const std::string bin = "1001111000110111";
    for (int n = 0; n < 16; ++n) CHECK(eval_digit(b2, n) == bin[n] - '0');
    CHECK(eval_digit(b2, 4) == 1);

    DigitAutomatonBundle b3 = build_digit_dfao(phi, 3);
    CHECK(eval_digit(b3, 3) == 2);
}

TEST_CASE("oracle agreement across bases for the golden ratio") {
    BetaLinkage phi = link_of("(1+sqrt(5))/2");
    for (int base : {2, 3}) {
        DigitAutomatonBundle bundle = build_digit_dfao(phi, base);
        for (unsigned long n = 0; n <= 2000; ++n)
            CHECK(eval_digit(bundle, n) == fractional_digit(n, base, phi.alpha));
    }
}
