#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ostra/automata.hpp"
#include "ostra/numeration.hpp"

namespace ostra {

/// The relation  sum_i coeffs[i] * val(x_i <<shifts[i]) = constant  over
/// k equal-length, zero-padded, valid representations, where <<s means
/// appending s zero digits before valuation.
struct LinearRelation {
    NumerationSystem system;
    std::vector<long> coeffs;
    std::vector<int> shifts;
    long constant = 0;

    int tapes() const { return (int)coeffs.size(); }
    std::string str() const;

    /// Textual fixture form, e.g. "fib: x - 2y = 1" or
    /// "ost[2,1]: shift2(w) - 3z - 2u = 0".
    static LinearRelation parse(const std::string& text);
};

/// Synchronized DFA of the relation over the system's digit alphabet:
/// most-significant-first carry construction, phase guessing for
/// periods longer than one, intersected with per-tape validity,
/// determinized and minimized.  Throws when the state budget is
/// exceeded.
Dfa relation_dfa(const LinearRelation& rel);

/// The plain string relation {(u, v): u = 0w and v = w0}: v is u
/// shifted left one position, with no validity applied.  For periods
/// longer than one the shifted string is generally not a canonical
/// representation, so this is a string-level building block only.
Dfa string_shift_dfa(const NumerationSystem& sys);

/// The value relation {(u, v) valid: val(v) = val(u 0)}.  For
/// single-term periods this equals the stored regex fixture
/// intersected with validity; the generic path works for any period.
Dfa shift_dfa(const NumerationSystem& sys);
Dfa shift_dfa_generic(const NumerationSystem& sys);
std::optional<std::string> shift_regex_fixture(const NumerationSystem& sys);

/// `count` string shifts chained through unconstrained intermediate
/// tapes, with validity applied to the endpoints.  For count equal to
/// (a multiple of) the period length this agrees with the shift-by-
/// count relation, which is how the m-fold shift is used.  The link
/// automaton is the plain string shift, or the system's regex fixture
/// when `use_regex_fixture` is set.
Dfa shift_chain_dfa(const NumerationSystem& sys, int count,
                    bool use_regex_fixture = false);

/// Relation {(u, n, z): z = floor((u + a*n)/c)} as a union of remainder
/// slices u + a*n - c*z = r.
Dfa floor_div_relation(const NumerationSystem& sys, long a, long c);

}  // namespace ostra
