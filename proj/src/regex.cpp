#include "ostra/regex.hpp"

#include <cctype>
#include <stdexcept>

namespace ostra {

namespace {

struct Frag {
    int in, out;
};

struct RegexParser {
    const std::string& s;
    size_t i = 0;
    Nfa& nfa;

    RegexParser(const std::string& text, Nfa& n) : s(text), nfa(n) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("regex parse error at position " +
                                    std::to_string(i) + ": " + what);
    }

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }

    Frag eps_frag() {
        int a = nfa.add_state(), b = nfa.add_state();
        nfa.add_eps(a, b);
        return {a, b};
    }

    Frag symbol_frag(int sym) {
        int a = nfa.add_state(), b = nfa.add_state();
        nfa.add_edge(a, sym, b);
        return {a, b};
    }

    int number() {
        size_t start = i;
        while (!done() && std::isdigit((unsigned char)s[i])) ++i;
        if (i == start) fail("expected digit");
        return std::stoi(s.substr(start, i - start));
    }

    Frag literal() {
        std::vector<int> col;
        if (peek() == '[') {
            ++i;
            col.push_back(number());
            while (!done() && peek() == ',') {
                ++i;
                col.push_back(number());
            }
            if (done() || peek() != ']') fail("expected ]");
            ++i;
        } else if (std::isdigit((unsigned char)peek())) {
            if (nfa.alphabet.tapes() != 1) fail("bare digit on multi-tape alphabet");
            col.push_back(peek() - '0');
            ++i;
        } else {
            fail("expected literal");
        }
        if ((int)col.size() != nfa.alphabet.tapes()) fail("column arity mismatch");
        int sym;
        try {
            sym = nfa.alphabet.pack(col);
        } catch (const std::exception&) {
            fail("digit out of alphabet range");
        }
        return symbol_frag(sym);
    }

    Frag atom() {
        if (peek() == '(') {
            ++i;
            Frag f = alternation();
            if (done() || peek() != ')') fail("expected )");
            ++i;
            return f;
        }
        return literal();
    }

    Frag repetition() {
        Frag f = atom();
        while (!done() && peek() == '*') {
            ++i;
            int a = nfa.add_state(), b = nfa.add_state();
            nfa.add_eps(a, f.in);
            nfa.add_eps(a, b);
            nfa.add_eps(f.out, f.in);
            nfa.add_eps(f.out, b);
            f = {a, b};
        }
        return f;
    }

    Frag concatenation() {
        Frag f = eps_frag();
        while (!done() && peek() != '|' && peek() != ')') {
            Frag g = repetition();
            nfa.add_eps(f.out, g.in);
            f = {f.in, g.out};
        }
        return f;
    }

    Frag alternation() {
        Frag f = concatenation();
        while (!done() && peek() == '|') {
            ++i;
            Frag g = concatenation();
            int a = nfa.add_state(), b = nfa.add_state();
            nfa.add_eps(a, f.in);
            nfa.add_eps(a, g.in);
            nfa.add_eps(f.out, b);
            nfa.add_eps(g.out, b);
            f = {a, b};
        }
        return f;
    }
};

}  // namespace

Dfa regex_to_dfa(const std::string& pattern, const Alphabet& alphabet) {
    std::string stripped;
    for (char c : pattern)
        if (!std::isspace((unsigned char)c)) stripped += c;

    Nfa nfa;
    nfa.alphabet = alphabet;
    RegexParser parser(stripped, nfa);
    Frag f = parser.alternation();
    if (!parser.done()) parser.fail("unexpected character");
    nfa.starts = {f.in};
    nfa.accepting[f.out] = 1;
    return minimize_dfa(determinize(nfa));
}

}  // namespace ostra
