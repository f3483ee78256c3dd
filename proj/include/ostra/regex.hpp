#pragma once

#include <string>

#include "ostra/automata.hpp"

namespace ostra {

/// Compiles a regular expression over tuple literals to a minimal DFA.
/// Supported syntax: union `|`, concatenation by juxtaposition, star
/// `*`, grouping `(...)`, column literals `[a,b,...]` (bare digits on
/// one-tape alphabets).  Whitespace is ignored.  The empty pattern
/// accepts only the empty string.  Parse errors report the offset.
Dfa regex_to_dfa(const std::string& pattern, const Alphabet& alphabet);

}  // namespace ostra
