#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace ostra {

using Int = mpz_class;
using Rat = mpq_class;

/// Exact floor of sqrt(n).  Throws std::domain_error for negative n.
Int isqrt(const Int& n);

/// Sign of A + B*sqrt(d), with d >= 2 square-free (so the value is
/// irrational unless B = 0).  Returns -1, 0 or +1.
int sign_with_sqrt(const Int& a, const Int& b, const Int& d);

/// The value (a + b*sqrt(d))/c with integer components, b != 0,
/// d >= 2 square-free, c >= 1, and gcd(a, b, c) = 1.  Immutable.
class QuadraticIrrational {
public:
    QuadraticIrrational(Int a, Int b, Int d, Int c);

    /// Parses the text form "(a+b*sqrt(d))/c".  Signs, whitespace and
    /// the shorthand forms "sqrt(2)", "(sqrt(3)-1)/2" are accepted.
    static QuadraticIrrational parse(const std::string& text);

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& d() const { return d_; }
    const Int& c() const { return c_; }

    std::string str() const;

    /// Sign of the value: -1 or +1 (never 0; the value is irrational).
    int sign() const;
    bool positive() const { return sign() > 0; }

    /// Sign of (this - r).
    int compare(const Rat& r) const;

    QuadraticIrrational reciprocal() const;
    QuadraticIrrational plus_integer(const Int& k) const;
    QuadraticIrrational negated() const;

    /// Rational interval [lo, hi] containing the value with
    /// hi - lo <= 10^-prec.
    std::pair<Rat, Rat> bounds(unsigned prec) const;

    bool operator==(const QuadraticIrrational& o) const {
        return a_ == o.a_ && b_ == o.b_ && d_ == o.d_ && c_ == o.c_;
    }

private:
    Int a_, b_, d_, c_;
};

/// floor(n * q), computed exactly through integer square roots.
Int beatty_floor(const Int& n, const QuadraticIrrational& q);

/// The n'th base-b digit of q after the point (n = 0 is the first
/// fractional digit): floor(b^(n+1) q) - b floor(b^n q).
int fractional_digit(unsigned long n, int base, const QuadraticIrrational& q);

/// Eventually periodic continued fraction: preperiod digits d_0, ...
/// followed by a repeating block.
struct ContinuedFraction {
    std::vector<Int> preperiod;
    std::vector<Int> period;

    std::string str() const;
    bool operator==(const ContinuedFraction&) const = default;
};

/// Exact surd expansion; the period is closed by detecting a repeated
/// (P, Q) state, never by floating-point comparison.
ContinuedFraction cf_expand(const QuadraticIrrational& q);

/// Reconstructs the quadratic irrational with the given expansion.
QuadraticIrrational cf_value(const ContinuedFraction& cf);

}  // namespace ostra
