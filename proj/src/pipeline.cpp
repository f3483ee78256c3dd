#include "ostra/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace ostra {

namespace {

long to_long(const Int& v, const char* what) {
    if (!v.fits_slong_p()) throw std::overflow_error(std::string(what) + ": too large");
    return v.get_si();
}

QuadraticIrrational golden_ratio() {
    return QuadraticIrrational(1, 1, 5, 2);
}

// Minimal a, b, c with alpha = (a + b*base)/c, b, c >= 1.
void solve_linkage(const QuadraticIrrational& alpha, const QuadraticIrrational& base,
                   Int& a, Int& b, Int& c) {
    if (alpha.d() != base.d())
        throw std::domain_error("linkage: alpha and base lie in different fields");
    Rat ratio = Rat(alpha.b(), alpha.c()) / Rat(base.b(), base.c());
    ratio.canonicalize();
    if (ratio <= 0) throw std::domain_error("linkage: negative sqrt coefficient");
    Int p = ratio.get_num(), q = ratio.get_den();
    Rat rest = q * Rat(alpha.a(), alpha.c()) - p * Rat(base.a(), base.c());
    rest.canonicalize();
    Int t = rest.get_den();
    a = rest.get_num();
    b = p * t;
    c = q * t;
    // The reconstruction must reproduce alpha exactly.
    QuadraticIrrational rebuilt(a * base.c() + b * base.a(), b * base.b(), base.d(),
                                c * base.c());
    if (!(rebuilt == alpha)) throw std::logic_error("linkage: reconstruction mismatch");
}

Dfa with_zero_pair(Dfa relation) {
    Dfa zeros = zero_column_dfa(relation.alphabet);
    return minimize_dfa(unite(relation, zeros));
}

}  // namespace

BetaLinkage derive_beta(const QuadraticIrrational& alpha) {
    if (!alpha.positive()) throw std::domain_error("derive_beta: alpha must be positive");
    ContinuedFraction cf = cf_expand(alpha);
    if (cf.preperiod.size() != 1)
        throw std::domain_error(
            "derive_beta: continued fraction is not purely periodic after the "
            "integer part; no Ostrowski construction applies");

    std::vector<int> period;
    for (const Int& d : cf.period) period.push_back((int)to_long(d, "period entry"));

    BetaLinkage link{alpha, alpha, NumerationSystem::fibonacci()};
    bool all_ones = std::all_of(period.begin(), period.end(),
                                [](int d) { return d == 1; });
    if (all_ones) {
        link.fib_special = true;
        link.base_value = golden_ratio();
        link.system = NumerationSystem::fibonacci();
        link.period_len = 1;
    } else {
        // Rotate until d_1 > 1.
        size_t r = 0;
        while (period[r] <= 1) ++r;
        std::rotate(period.begin(), period.begin() + r, period.end());

        ContinuedFraction beta_cf;
        beta_cf.preperiod = {Int(0)};
        for (int d : period) beta_cf.period.push_back(d);
        link.base_value = cf_value(beta_cf);

        link.system = (period == std::vector<int>{2})
                          ? NumerationSystem::pell()
                          : NumerationSystem::ostrowski(period);
        link.period_len = (int)period.size();
    }
    link.q_m = to_long(link.system.basis(link.period_len), "q_m");
    link.q_m1 = to_long(link.system.basis(link.period_len - 1), "q_{m-1}");

    Int a, b, c;
    solve_linkage(alpha, link.base_value, a, b, c);
    link.a = to_long(a, "linkage a");
    link.b = to_long(b, "linkage b");
    link.c = to_long(c, "linkage c");
    if (link.b < 1 || link.c < 1) throw std::domain_error("linkage: need b, c >= 1");
    return link;
}

Dfa build_floor_base(const BetaLinkage& link, bool chained_shifts) {
    const NumerationSystem& sys = link.system;
    int r = sys.max_digit() + 1;

    if (link.fib_special) {
        // floor(n*phi) = [(n-1)_F 0]_F + 1: u = n-1 and z = val(u 0) + 1.
        Dfa inc = relation_dfa({sys, {1, -1}, {0, 0}, 1});      // (n, u): n - u = 1
        Dfa shifted = relation_dfa({sys, {1, -1}, {0, 1}, 1});  // (z, u): z - val(u 0) = 1
        Alphabet triple = Alphabet::uniform(3, r);
        Dfa both = intersect(lift(inc, triple, std::vector<int>{0, 2}),
                             lift(shifted, triple, std::vector<int>{1, 2}));
        return with_zero_pair(project(both, 2));
    }

    int m = link.period_len;
    // v = u 0^m and val(v) = q_m * u + q_{m-1} * z, with u = n - 1.
    Dfa shift_m = chained_shifts ? shift_chain_dfa(sys, m)
                                 : relation_dfa({sys, {1, -1}, {m, 0}, 0});
    Dfa conv = relation_dfa({sys, {1, -link.q_m, -link.q_m1}, {0, 0, 0}, 0});  // (v,u,z)
    Alphabet uzv = Alphabet::uniform(3, r);
    Dfa eq1 = intersect(lift(shift_m, uzv, std::vector<int>{0, 2}),
                        lift(conv, uzv, std::vector<int>{2, 0, 1}));
    Dfa base_rel = project(eq1, 2);  // (u, z)

    Dfa inc = relation_dfa({sys, {1, -1}, {0, 0}, 1});  // (n, u)
    Alphabet nzu = Alphabet::uniform(3, r);
    Dfa both = intersect(lift(inc, nzu, std::vector<int>{0, 2}),
                         lift(base_rel, nzu, std::vector<int>{2, 1}));
    return with_zero_pair(project(both, 2));
}

Dfa build_floor_alpha(const BetaLinkage& link) {
    Dfa base = build_floor_base(link);
    if (link.a == 0 && link.b == 1 && link.c == 1) return base;

    const NumerationSystem& sys = link.system;
    int r = sys.max_digit() + 1;

    // w = b*n, u = floor(w * base), z = floor((u + a*n)/c).
    Dfa scale = relation_dfa({sys, {1, -link.b}, {0, 0}, 0});  // (w, n)
    Alphabet nuw = Alphabet::uniform(3, r);
    Dfa scaled_floor = project(
        intersect(lift(scale, nuw, std::vector<int>{2, 0}),
                  lift(base, nuw, std::vector<int>{2, 1})),
        2);  // (n, u)

    Dfa fdiv = floor_div_relation(sys, link.a, link.c);  // (u, n, z)
    Alphabet nzu = Alphabet::uniform(3, r);
    Dfa all = intersect(lift(scaled_floor, nzu, std::vector<int>{0, 2}),
                        lift(fdiv, nzu, std::vector<int>{2, 0, 1}));
    return with_zero_pair(project(all, 2));
}

DigitAutomatonBundle build_digit_dfao(const BetaLinkage& link, int base) {
    if (base < 2) throw std::invalid_argument("build_digit_dfao: base must be >= 2");
    const NumerationSystem& sys = link.system;
    int r = sys.max_digit() + 1;

    Dfa alphan = build_floor_alpha(link);
    Dfa scale = relation_dfa({sys, {1, -base}, {0, 0}, 0});  // (w, q): w = base*q

    // x = floor(base*q*alpha) as a (q, x) relation.
    Alphabet qxw = Alphabet::uniform(3, r);
    Dfa floor_scaled = project(
        intersect(lift(scale, qxw, std::vector<int>{2, 0}),
                  lift(alphan, qxw, std::vector<int>{2, 1})),
        2);

    DigitAutomatonBundle bundle{link.alpha, sys, base, {}, {}};
    Dfa validity = sys.validity_dfa();
    std::vector<std::pair<Dfa, int>> parts;
    Alphabet qxy = Alphabet::uniform(3, r);
    for (int i = 1; i < base; ++i) {
        Dfa digit_rel = relation_dfa({sys, {1, -base}, {0, 0}, i});  // (x, y)
        Dfa all = intersect(
            intersect(lift(floor_scaled, qxy, std::vector<int>{0, 1}),
                      lift(alphan, qxy, std::vector<int>{0, 2})),
            lift(digit_rel, qxy, std::vector<int>{1, 2}));
        Dfa projected = project(project(all, 2), 1);
        bundle.per_digit.push_back(projected);
        parts.emplace_back(projected, i);
    }
    bundle.combined = combine(parts, 0, validity);
    return bundle;
}

int eval_digit(const DigitAutomatonBundle& bundle, unsigned long n) {
    Int power;
    mpz_ui_pow_ui(power.get_mpz_t(), bundle.base, n);
    Representation rep = bundle.system.encode(power);
    auto out = bundle.combined.run(rep.digits);
    if (!out)
        throw std::logic_error("eval_digit: automaton has no output on a valid input");
    return *out;
}

}  // namespace ostra
