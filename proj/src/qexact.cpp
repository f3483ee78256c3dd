#include "ostra/qexact.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <utility>

namespace ostra {

Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

int sign_with_sqrt(const Int& a, const Int& b, const Int& d) {
    if (b == 0) return sgn(a);
    if (sgn(a) == sgn(b)) return sgn(b);
    if (a == 0) return sgn(b);
    // a and b have opposite signs: compare a^2 against b^2 d.
    Int a2 = a * a, b2d = b * b * d;
    if (a2 == b2d) return 0;  // cannot happen for square-free d >= 2
    return (b2d > a2) ? sgn(b) : sgn(a);
}

namespace {

constexpr unsigned long kSquareFreeLimit = 1000000000000UL;  // 10^12

bool is_square_free(const Int& d) {
    if (d > kSquareFreeLimit)
        throw std::domain_error("square-free check: d too large");
    unsigned long n = d.get_ui();
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        while (n % p == 0) n /= p;
    }
    return true;
}

// floor((P + sqrt(D))/Q) with D not a perfect square, any sign of Q.
Int floor_surd(const Int& p, const Int& d, const Int& q) {
    Int s = isqrt(d);
    Int num = p + s;  // floor(P + sqrt(D)), since sqrt(D) is irrational
    if (q > 0) {
        Int r;
        mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
        return r;
    }
    // Q < 0: floor(x/Q) = fdiv(num, Q) except when Q | num exactly,
    // where the true value lies strictly below num.
    Int r, rem;
    mpz_fdiv_qr(r.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
    if (rem == 0) r -= 1;
    return r;
}

}  // namespace

QuadraticIrrational::QuadraticIrrational(Int a, Int b, Int d, Int c)
    : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)), c_(std::move(c)) {
    if (b_ == 0) throw std::domain_error("quadratic irrational: b = 0 (rational)");
    if (d_ < 2) throw std::domain_error("quadratic irrational: d must be >= 2");
    if (!is_square_free(d_))
        throw std::domain_error("quadratic irrational: d not square-free");
    if (c_ == 0) throw std::domain_error("quadratic irrational: c = 0");
    if (c_ < 0) { a_ = -a_; b_ = -b_; c_ = -c_; }
    Int g = gcd(gcd(a_, b_), c_);
    if (g > 1) { a_ /= g; b_ /= g; c_ /= g; }
}

int QuadraticIrrational::sign() const { return sign_with_sqrt(a_, b_, d_); }

int QuadraticIrrational::compare(const Rat& r) const {
    // (a + b sqrt(d))/c - p/q  has the sign of  (a q - p c) + (b q) sqrt(d)
    Int p = r.get_num(), q = r.get_den();
    return sign_with_sqrt(a_ * q - p * c_, b_ * q, d_);
}

QuadraticIrrational QuadraticIrrational::reciprocal() const {
    // c (a - b sqrt(d)) / (a^2 - b^2 d)
    Int den = a_ * a_ - b_ * b_ * d_;
    return QuadraticIrrational(c_ * a_, -c_ * b_, d_, den);
}

QuadraticIrrational QuadraticIrrational::plus_integer(const Int& k) const {
    return QuadraticIrrational(a_ + k * c_, b_, d_, c_);
}

QuadraticIrrational QuadraticIrrational::negated() const {
    return QuadraticIrrational(-a_, -b_, d_, c_);
}

std::pair<Rat, Rat> QuadraticIrrational::bounds(unsigned prec) const {
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, prec);
    Int t = isqrt(d_ * scale * scale);
    // t/scale <= sqrt(d) < (t+1)/scale
    Rat lo_s(t, scale), hi_s(t + 1, scale);
    lo_s.canonicalize();
    hi_s.canonicalize();
    Rat av(a_), cv(c_), bv(b_);
    Rat lo = (av + bv * (b_ > 0 ? lo_s : hi_s)) / cv;
    Rat hi = (av + bv * (b_ > 0 ? hi_s : lo_s)) / cv;
    return {lo, hi};
}

std::string QuadraticIrrational::str() const {
    std::ostringstream out;
    out << "(" << a_.get_str();
    Int babs = abs(b_);
    out << (b_ >= 0 ? "+" : "-") << babs.get_str() << "*sqrt(" << d_.get_str() << ")";
    out << ")/" << c_.get_str();
    return out.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    bool eat_word(const char* w) {
        skip();
        size_t n = std::string(w).size();
        if (s.compare(i, n, w) == 0) { i += n; return true; }
        return false;
    }
    Int integer() {
        skip();
        size_t start = i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (i == start) throw std::invalid_argument("expected integer at '" + s.substr(start) + "'");
        return Int(s.substr(start, i - start));
    }
};

}  // namespace

QuadraticIrrational QuadraticIrrational::parse(const std::string& text) {
    Parser p(text);
    bool paren = p.eat('(');
    Int a = 0, b = 0, d = 0;

    bool first = true;
    while (true) {
        p.skip();
        int sign = 1;
        if (p.eat('-')) sign = -1;
        else if (p.eat('+')) sign = 1;
        else if (!first) break;
        p.skip();
        if (p.i >= p.s.size()) break;

        if (p.eat_word("sqrt")) {
            if (!p.eat('(')) throw std::invalid_argument("expected ( after sqrt");
            Int dd = p.integer();
            if (!p.eat(')')) throw std::invalid_argument("expected ) after sqrt");
            if (d != 0 && d != dd) throw std::invalid_argument("mixed radicands");
            d = dd;
            b += sign;
        } else {
            Int k = p.integer();
            p.skip();
            if (p.eat('*')) {
                if (!p.eat_word("sqrt") || !p.eat('('))
                    throw std::invalid_argument("expected k*sqrt(d)");
                Int dd = p.integer();
                if (!p.eat(')')) throw std::invalid_argument("expected ) after sqrt");
                if (d != 0 && d != dd) throw std::invalid_argument("mixed radicands");
                d = dd;
                b += sign * k;
            } else {
                a += sign * k;
            }
        }
        first = false;
    }

    if (paren && !p.eat(')')) throw std::invalid_argument("missing )");
    Int c = 1;
    if (p.eat('/')) c = p.integer();
    p.skip();
    if (p.i != p.s.size())
        throw std::invalid_argument("trailing input: '" + p.s.substr(p.i) + "'");
    if (d == 0) throw std::invalid_argument("no sqrt term (rational input)");
    return QuadraticIrrational(a, b, d, c);
}

Int beatty_floor(const Int& n, const QuadraticIrrational& q) {
    if (n < 0) throw std::domain_error("beatty_floor: negative n");
    if (n == 0) return 0;
    Int a = n * q.a(), b = n * q.b();
    Int t = isqrt(b * b * q.d());
    Int num;  // floor of the numerator
    if (b > 0) num = a + t;
    else num = a - t - 1;
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), q.c().get_mpz_t());
    return r;
}

int fractional_digit(unsigned long n, int base, const QuadraticIrrational& q) {
    if (base < 2) throw std::domain_error("fractional_digit: base must be >= 2");
    Int bn;
    mpz_ui_pow_ui(bn.get_mpz_t(), base, n);
    Int lo = beatty_floor(bn, q);
    Int hi = beatty_floor(bn * base, q);
    Int digit = hi - base * lo;
    return (int)digit.get_si();
}

std::string ContinuedFraction::str() const {
    std::ostringstream out;
    out << "[";
    for (size_t i = 0; i < preperiod.size(); ++i) {
        out << preperiod[i].get_str();
        if (i == 0 && (preperiod.size() > 1 || !period.empty())) out << "; ";
        else if (i + 1 < preperiod.size()) out << ", ";
    }
    if (preperiod.size() > 1 && !period.empty()) out << ", ";
    if (!period.empty()) {
        out << "(";
        for (size_t i = 0; i < period.size(); ++i) {
            if (i) out << ", ";
            out << period[i].get_str();
        }
        out << ")";
    }
    out << "]";
    return out.str();
}

ContinuedFraction cf_expand(const QuadraticIrrational& x) {
    // Write x = (P + sqrt(D))/Q; for b < 0 negate numerator and
    // denominator so the sqrt coefficient is positive.
    Int d = x.b() * x.b() * x.d();
    Int p = x.a(), q = x.c();
    if (x.b() < 0) { p = -p; q = -q; }
    if ((d - p * p) % q != 0) { p *= abs(q); d *= q * q; q *= abs(q); }

    std::map<std::pair<Int, Int>, size_t> seen;
    std::vector<Int> digits;
    constexpr size_t kMaxIter = 1000000;

    size_t cycle_start = 0;
    while (true) {
        auto key = std::make_pair(p, q);
        auto it = seen.find(key);
        if (it != seen.end()) { cycle_start = it->second; break; }
        seen.emplace(key, digits.size());
        Int a = floor_surd(p, d, q);
        digits.push_back(a);
        p = a * q - p;
        q = (d - p * p) / q;
        if (digits.size() > kMaxIter)
            throw std::runtime_error("cf_expand: period not detected (not a quadratic surd?)");
    }

    ContinuedFraction cf;
    cf.preperiod.assign(digits.begin(), digits.begin() + cycle_start);
    cf.period.assign(digits.begin() + cycle_start, digits.end());
    // d_0 always lives in the preperiod: a cycle starting at index 0 is
    // rotated one digit forward.
    if (cf.preperiod.empty()) {
        cf.preperiod.push_back(cf.period.front());
        cf.period.push_back(cf.period.front());
        cf.period.erase(cf.period.begin());
    }
    return cf;
}

QuadraticIrrational cf_value(const ContinuedFraction& cf) {
    if (cf.period.empty()) throw std::invalid_argument("cf_value: empty period");
    // Purely periodic tail y = [p1; p2, ..., pm, y]:
    // y = (m00 y + m01) / (m10 y + m11).
    Int m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (const Int& t : cf.period) {
        Int n00 = m00 * t + m01, n10 = m10 * t + m11;
        m01 = m00; m11 = m10;
        m00 = n00; m10 = n10;
    }
    // m10 y^2 + (m11 - m00) y - m01 = 0, take the root > 1.
    Int disc = (m11 - m00) * (m11 - m00) + 4 * m10 * m01;
    // Split disc = s^2 * d with d square-free.
    Int s = 1, d = disc;
    for (Int f = 2; f * f <= d; ++f) {
        while (d % (f * f) == 0) { d /= f * f; s *= f; }
    }
    if (d < 2) throw std::invalid_argument("cf_value: rational expansion");
    QuadraticIrrational y(m00 - m11, s, d, 2 * m10);

    // Fold the preperiod back: x = d_k + 1/next.
    for (auto it = cf.preperiod.rbegin(); it != cf.preperiod.rend(); ++it)
        y = y.reciprocal().plus_integer(*it);
    return y;
}

}  // namespace ostra
