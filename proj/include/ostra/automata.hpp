#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ostra {

/// Alphabet of column symbols for k synchronized tapes.  Each tape has
/// a digit range [0, ranges[t]); a symbol packs one column of digits.
struct Alphabet {
    std::vector<int> ranges;

    int tapes() const { return (int)ranges.size(); }
    int symbol_count() const;
    int pack(std::span<const int> column) const;
    std::vector<int> unpack(int symbol) const;

    std::string str() const;  // "2" or "2x2x3"
    static Alphabet parse(const std::string& text);
    static Alphabet uniform(int tapes, int range);

    bool operator==(const Alphabet&) const = default;
};

inline constexpr int kDead = -1;
inline constexpr int kNoOutput = -1;

/// Deterministic automaton with per-state outputs.  Transitions are
/// partial; a missing edge goes to the implied dead state.  A DFA is
/// the special case whose outputs are 0 (reject) and 1 (accept).
class Dfao {
public:
    Alphabet alphabet;
    int start = 0;
    std::vector<int> output;              // kNoOutput for output-less states
    std::vector<std::vector<int>> next;   // next[state][symbol], kDead if absent

    int state_count() const { return (int)output.size(); }
    int step(int state, int symbol) const {
        return state == kDead ? kDead : next[state][symbol];
    }

    /// Output of the last state reached; nullopt when the run falls
    /// into the implied dead state or ends on an output-less state.
    std::optional<int> run(std::span<const int> symbols) const;
    bool accepts(std::span<const int> symbols) const;

    /// True when every state carries output 0 or 1.
    bool is_dfa() const;

    void check() const;  // validates ranges; throws on corruption

    std::string to_text() const;
    static Dfao from_text(const std::string& text);

    struct DotOptions {
        std::string state_prefix;  // non-empty: plain labels + double circles
    };
    std::string to_dot(const DotOptions& opts = {}) const;
};

using Dfa = Dfao;

/// Nondeterministic automaton over the same symbol space, with
/// epsilon edges (used by regex construction and projection).
struct Nfa {
    Alphabet alphabet;
    std::vector<int> starts;
    std::vector<char> accepting;
    std::vector<std::vector<std::vector<int>>> next;  // [state][symbol]
    std::vector<std::vector<int>> eps;

    int add_state();
    void add_edge(int from, int symbol, int to);
    void add_eps(int from, int to);
};

enum class BoolOp { And, Or, Xor, AndNot };

/// Product construction; accepts x iff op(a accepts x, b accepts x).
/// Result is trimmed to reachable states.
Dfa product(const Dfa& a, const Dfa& b, BoolOp op);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);

/// Completes the automaton (materializing the dead state) and flips
/// acceptance.
Dfa complement(const Dfa& a);

/// Subset construction.
Dfa determinize(const Nfa& n);

/// Language-minimal DFA: dead and rejecting-forever states are merged
/// away, remaining states are canonically numbered in breadth-first
/// symbol order from the start state.
Dfa minimize_dfa(const Dfa& a);

/// Output-function-minimal DFAO: output-less live states are kept
/// distinct from the dead state, which is trimmed.
Dfao minimize(const Dfao& a);

/// Exact behavioral equivalence by product reachability.  For DFAs the
/// dead state counts as rejecting; for DFAOs "no output" is a
/// distinguished label.
bool equivalent_dfa(const Dfa& a, const Dfa& b);
bool equivalent_dfao(const Dfao& a, const Dfao& b);

/// True when no reachable state accepts.
bool is_empty(const Dfa& a);

/// Existential projection of one tape: accepts a reduced tuple iff
/// some value for the erased tape (padded on either side) is accepted.
Dfa project(const Dfa& a, int tape);

/// Reinterprets tape t of `a` as tape tape_map[t] of a wider tuple;
/// unmapped tapes are unconstrained.
Dfa lift(const Dfa& a, const Alphabet& wide, std::span<const int> tape_map);

/// DFAO assembling per-label DFAs: outputs label_i where part_i
/// accepts, `fallback` on other strings accepted by `domain`, and no
/// output outside the domain.  Overlapping parts are an error.
Dfao combine(const std::vector<std::pair<Dfa, int>>& parts, int fallback,
             const Dfa& domain);

/// Single accepting state looping on the all-zero column.
Dfa zero_column_dfa(const Alphabet& alphabet);

}  // namespace ostra
