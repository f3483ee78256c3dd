#pragma once

#include <string>
#include <vector>

#include "ostra/automata.hpp"
#include "ostra/linrel.hpp"
#include "ostra/numeration.hpp"
#include "ostra/qexact.hpp"

namespace ostra {

/// Ties a quadratic irrational alpha to the numeration system of its
/// periodic part: alpha = (a + b*base)/c where base is beta (the
/// rotated purely periodic value below 1) or, for the all-ones period,
/// the golden ratio with the Zeckendorf system.
struct BetaLinkage {
    QuadraticIrrational alpha;
    QuadraticIrrational base_value;
    NumerationSystem system;
    bool fib_special = false;
    int period_len = 0;   // m
    long q_m = 0, q_m1 = 0;
    long a = 0, b = 0, c = 0;
};

/// Derives the linkage from alpha's continued fraction.  Inputs whose
/// expansion is not purely periodic after the integer part are
/// rejected.
BetaLinkage derive_beta(const QuadraticIrrational& alpha);

/// Synchronized DFA of {(n, z): z = floor(n * base_value)}: the shift
/// relation for the Zeckendorf case, the convergent-denominator
/// relation otherwise.  `chained_shifts` composes m single shifts
/// through intermediate tapes instead of one shift-by-m relation.
Dfa build_floor_base(const BetaLinkage& link, bool chained_shifts = false);

/// Synchronized DFA of {(n, z): z = floor(n * alpha)}.
Dfa build_floor_alpha(const BetaLinkage& link);

struct DigitAutomatonBundle {
    QuadraticIrrational alpha;
    NumerationSystem system;
    int base = 0;
    std::vector<Dfa> per_digit;  // A_{b,i} for i = 1..base-1
    Dfao combined;               // A_b
};

/// Builds the per-digit DFAs A_{b,i} and the combined DFAO A_b that,
/// on the representation of b^n, outputs the n'th base-b digit of
/// alpha after the point.
DigitAutomatonBundle build_digit_dfao(const BetaLinkage& link, int base);

/// Encodes b^n in the bundle's system and runs A_b.
int eval_digit(const DigitAutomatonBundle& bundle, unsigned long n);

}  // namespace ostra
