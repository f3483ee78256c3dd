#include "ostra/linrel.hpp"

#include "ostra/regex.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ostra/hashing.hpp"

namespace ostra {

namespace {

// Recurrence coefficient d with U_{P+1} = d * U_P + U_{P-1}, for
// processing positions P with P mod m == phase.
int recurrence_coeff(const NumerationSystem& sys, int phase) {
    switch (sys.kind()) {
        case SystemKind::fibonacci: return 1;
        case SystemKind::pell: return 2;
        case SystemKind::ostrowski: return sys.period()[phase];
    }
    return 1;
}

// U_{-1}: 0 for Pell and Ostrowski (q_{-1}), 1 for the Zeckendorf
// basis (F_1).
long basis_minus_one(const NumerationSystem& sys) {
    return sys.kind() == SystemKind::fibonacci ? 1 : 0;
}

constexpr int kMaxTapes = 6;

struct BranchState {
    int phase;               // position of the next digit, mod m
    long x, y;               // value so far = x*U_{P+1} + y*U_P
    int vstates[kMaxTapes];  // per-tape validity DFA states
};

struct Builder {
    const LinearRelation& rel;
    int k;
    int m;
    int maxd;
    long spec_bound;               // the documented pruning constant B
    long bound;                    // box actually used (iterative deepening)
    std::vector<long> cone_bound;  // per-phase |x*r + y| ceiling for live states
    int sigma_max;
    // weight[phase][tape] = (A, B) with U_{p+sigma} = A*U_{p+1} + B*U_p
    // for positions p with p mod m == phase
    std::vector<std::vector<std::pair<long, long>>> weight;
    Dfa validity;

    explicit Builder(const LinearRelation& r) : rel(r) {
        k = rel.tapes();
        if (k < 1 || rel.coeffs.empty())
            throw std::invalid_argument("relation: needs at least one tape");
        if ((int)rel.shifts.size() != k)
            throw std::invalid_argument("relation: coeff/shift arity mismatch");
        if (std::all_of(rel.coeffs.begin(), rel.coeffs.end(),
                        [](long c) { return c == 0; }))
            throw std::invalid_argument("relation: all coefficients zero");
        if (k > kMaxTapes) throw std::invalid_argument("relation: too many tapes");
        m = rel.system.kind() == SystemKind::ostrowski
                ? (int)rel.system.period().size()
                : 1;
        maxd = rel.system.max_digit();
        sigma_max = *std::max_element(rel.shifts.begin(), rel.shifts.end());

        long csum = 0;
        for (long c : rel.coeffs) csum += std::labs(c);
        spec_bound = (std::labs(rel.constant) +
                      csum * (maxd + 1) * (sigma_max + 2)) *
                     (maxd + 2);
        bound = spec_bound;
        // Everything still to come injects at positions <= P; tape i
        // contributes at most |c_i| maxd U_{P+s+2}/U_P with s = sigma_i,
        // and U_{K+1}/U_K < d+1 bounds the ratio phase by phase.
        cone_bound.assign(m, 0);
        for (int phase = 0; phase < m; ++phase) {
            long f = std::labs(rel.constant);
            for (int i = 0; i < k; ++i) {
                long ratio = 1;
                for (int t = 0; t < rel.shifts[i] + 2; ++t)
                    ratio *= recurrence_coeff(rel.system, (phase + t) % m) + 1;
                f += std::labs(rel.coeffs[i]) * maxd * ratio;
            }
            cone_bound[phase] = f;
        }

        weight.assign(m, std::vector<std::pair<long, long>>(k));
        for (int phase = 0; phase < m; ++phase) {
            // (A_j, B_j) for U_{p+j}; A_0,B_0 = (0,1), A_1,B_1 = (1,0),
            // A_{j+1} = d_{p+j+1} A_j + A_{j-1}.
            std::vector<std::pair<long, long>> ab{{0, 1}, {1, 0}};
            for (int j = 1; j <= sigma_max; ++j) {
                long d = recurrence_coeff(rel.system, (phase + j) % m);
                ab.emplace_back(d * ab[j].first + ab[j - 1].first,
                                d * ab[j].second + ab[j - 1].second);
            }
            for (int i = 0; i < k; ++i) weight[phase][i] = ab[rel.shifts[i]];
        }
        validity = rel.system.validity_dfa();
    }

    // A state is hopeless when |x*r + y| exceeds the largest value the
    // remaining input can still contribute, for every feasible basis
    // ratio r in [d_phase, d_phase + 1].
    bool pruned(const BranchState& s) const {
        if (std::labs(s.x) > bound || std::labs(s.y) > bound) return true;
        long d = recurrence_coeff(rel.system, s.phase);
        long g1 = s.x * d + s.y;
        long g2 = s.x * (d + 1) + s.y;
        if ((g1 <= 0 && g2 >= 0) || (g1 >= 0 && g2 <= 0)) return false;
        return std::min(std::labs(g1), std::labs(g2)) > cone_bound[s.phase];
    }

    // Injects one input column at the current position, then rebases to
    // the next lower position.
    void step(BranchState& s, std::span<const int> column) const {
        for (int i = 0; i < k; ++i) {
            if (column[i] == 0) continue;
            auto [wa, wb] = weight[s.phase][i];
            s.x += rel.coeffs[i] * column[i] * wa;
            s.y += rel.coeffs[i] * column[i] * wb;
        }
        long d = recurrence_coeff(rel.system, s.phase);
        long nx = d * s.x + s.y;
        s.y = s.x;
        s.x = nx;
        s.phase = (s.phase + m - 1) % m;
    }

    bool accepting(const BranchState& s) const {
        for (int t = 0; t < k; ++t)
            if (validity.output[s.vstates[t]] != 1) return false;
        // The last digit sat at position 0 exactly when the phase
        // countdown has wrapped to m-1.
        if (m > 1 && s.phase != m - 1) return false;
        return s.x + s.y * basis_minus_one(rel.system) == rel.constant;
    }
};

}  // namespace

std::string LinearRelation::str() const {
    std::ostringstream out;
    out << system.str() << ":";
    for (int i = 0; i < tapes(); ++i) {
        out << " " << (coeffs[i] < 0 ? "- " : i ? "+ " : "");
        if (std::labs(coeffs[i]) != 1 || shifts[i]) out << std::labs(coeffs[i]) << "*";
        if (shifts[i]) out << "shift" << shifts[i] << "(x" << i << ")";
        else out << "x" << i;
    }
    out << " = " << constant;
    return out.str();
}

namespace {

Dfa relation_dfa_with_box(const LinearRelation& rel, long box) {
    Builder b(rel);
    b.bound = box;
    // Forward exploration is cheap per state (packed keys, no edges);
    // only the trimmed automaton pays for determinization.
    constexpr size_t kRawCap = 20000000;
    constexpr size_t kLiveCap = 1000000;

    Alphabet alphabet = Alphabet::uniform(b.k, b.maxd + 1);
    int nsym = alphabet.symbol_count();
    std::vector<std::vector<int>> columns;
    for (int sym = 0; sym < nsym; ++sym) columns.push_back(alphabet.unpack(sym));

    // Mixed-radix state key: phase, x+B, y+B, validity states.
    const uint64_t span = 2 * (uint64_t)b.bound + 1;
    const uint64_t vcount = (uint64_t)b.validity.state_count();
    {
        long double total = (long double)b.m * span * span;
        for (int t = 0; t < b.k; ++t) total *= vcount;
        if (total > 9.0e18L)
            throw std::runtime_error("relation_dfa: state key overflow for " + rel.str());
    }
    auto pack = [&](const BranchState& s) {
        uint64_t key = (uint64_t)s.phase;
        key = key * span + (uint64_t)(s.x + b.bound);
        key = key * span + (uint64_t)(s.y + b.bound);
        for (int t = 0; t < b.k; ++t) key = key * vcount + (uint64_t)s.vstates[t];
        return key;
    };
    auto unpack = [&](uint64_t key) {
        BranchState s{};
        for (int t = b.k; t-- > 0;) {
            s.vstates[t] = (int)(key % vcount);
            key /= vcount;
        }
        s.y = (long)(key % span) - b.bound;
        key /= span;
        s.x = (long)(key % span) - b.bound;
        key /= span;
        s.phase = (int)key;
        return s;
    };
    // Forward transition; returns false when the branch dies.
    auto forward = [&](BranchState& t, int sym) {
        const std::vector<int>& col = columns[sym];
        for (int tape = 0; tape < b.k; ++tape) {
            t.vstates[tape] = b.validity.next[t.vstates[tape]][col[tape]];
            if (t.vstates[tape] == kDead) return false;
        }
        b.step(t, col);
        return !b.pruned(t);
    };

    std::unordered_map<uint64_t, int> id;
    std::vector<uint64_t> states;
    std::vector<char> accepting;
    auto intern = [&](uint64_t key) {
        auto [it, fresh] = id.emplace(key, (int)states.size());
        if (fresh) {
            states.push_back(key);
            if (states.size() > kRawCap)
                throw std::runtime_error("relation_dfa: state budget exceeded for " +
                                         rel.str());
        }
        return it->second;
    };

    std::vector<int> start_ids;
    for (int phase = 0; phase < b.m; ++phase) {
        BranchState s{phase, 0, 0, {}};
        for (int t = 0; t < b.k; ++t) s.vstates[t] = b.validity.start;
        start_ids.push_back(intern(pack(s)));
    }
    for (size_t i = 0; i < states.size(); ++i) {
        BranchState base = unpack(states[i]);
        accepting.push_back(b.accepting(base));
        for (int sym = 0; sym < nsym; ++sym) {
            BranchState t = base;
            if (forward(t, sym)) intern(pack(t));
        }
    }

    // Trim to states that can reach acceptance.  Predecessors are
    // computed analytically and checked against the store, so the raw
    // edge set is never materialized.
    std::vector<std::vector<std::vector<int>>> rev_valid(
        vcount, std::vector<std::vector<int>>((size_t)b.maxd + 1));
    for (int v = 0; v < (int)vcount; ++v)
        for (int d = 0; d <= b.maxd; ++d) {
            int t = b.validity.next[v][d];
            if (t != kDead) rev_valid[t][d].push_back(v);
        }
    std::vector<char> live(states.size(), 0);
    std::vector<int> queue;
    for (size_t i = 0; i < states.size(); ++i)
        if (accepting[i]) {
            live[i] = 1;
            queue.push_back((int)i);
        }
    std::vector<int> choice(b.k);
    while (!queue.empty()) {
        BranchState post = unpack(states[queue.back()]);
        queue.pop_back();
        int pre_phase = (post.phase + 1) % b.m;
        long d = recurrence_coeff(rel.system, pre_phase);
        long x_inj = post.y;
        long y_inj = post.x - d * post.y;
        for (int sym = 0; sym < nsym; ++sym) {
            const std::vector<int>& col = columns[sym];
            long x0 = x_inj, y0 = y_inj;
            for (int tape = 0; tape < b.k; ++tape) {
                if (col[tape] == 0) continue;
                auto [wa, wb] = b.weight[pre_phase][tape];
                x0 -= rel.coeffs[tape] * col[tape] * wa;
                y0 -= rel.coeffs[tape] * col[tape] * wb;
            }
            if (std::labs(x0) > b.bound || std::labs(y0) > b.bound) continue;
            // enumerate per-tape validity preimages
            bool any_empty = false;
            for (int tape = 0; tape < b.k; ++tape) {
                if (rev_valid[post.vstates[tape]][col[tape]].empty()) any_empty = true;
                choice[tape] = 0;
            }
            if (any_empty) continue;
            while (true) {
                BranchState pre{pre_phase, x0, y0, {}};
                for (int tape = 0; tape < b.k; ++tape)
                    pre.vstates[tape] =
                        rev_valid[post.vstates[tape]][col[tape]][choice[tape]];
                auto it = id.find(pack(pre));
                if (it != id.end() && !live[it->second]) {
                    live[it->second] = 1;
                    queue.push_back(it->second);
                }
                int tape = b.k - 1;
                while (tape >= 0 &&
                       ++choice[tape] >=
                           (int)rev_valid[post.vstates[tape]][col[tape]].size()) {
                    choice[tape] = 0;
                    --tape;
                }
                if (tape < 0) break;
            }
        }
    }

    size_t live_count = 0;
    std::vector<int> remap(states.size(), -1);
    Nfa nfa;
    nfa.alphabet = alphabet;
    for (size_t i = 0; i < states.size(); ++i)
        if (live[i]) remap[i] = nfa.add_state(), ++live_count;
    if (live_count > kLiveCap)
        throw std::runtime_error("relation_dfa: live state budget exceeded for " +
                                 rel.str());
    for (size_t i = 0; i < states.size(); ++i) {
        if (!live[i]) continue;
        nfa.accepting[remap[i]] = accepting[i];
        BranchState base = unpack(states[i]);
        for (int sym = 0; sym < nsym; ++sym) {
            BranchState t = base;
            if (!forward(t, sym)) continue;
            auto it = id.find(pack(t));
            if (it != id.end() && live[it->second])
                nfa.add_edge(remap[i], sym, remap[it->second]);
        }
    }
    for (int s : start_ids)
        if (live[s]) nfa.starts.push_back(remap[s]);
    if (nfa.starts.empty()) {
        Dfa empty;
        empty.alphabet = alphabet;
        empty.start = 0;
        empty.output = {0};
        empty.next = {std::vector<int>(nsym, kDead)};
        return empty;
    }
    if (std::getenv("OSTRA_RELATION_STATS")) {
        long mx = 0, my = 0;
        for (size_t i = 0; i < states.size(); ++i)
            if (live[i]) {
                BranchState u = unpack(states[i]);
                mx = std::max(mx, std::labs(u.x));
                my = std::max(my, std::labs(u.y));
            }
        std::fprintf(stderr,
                     "relation %s: %zu branch states, %zu live, live max |x|=%ld |y|=%ld (box=%ld)\n",
                     rel.str().c_str(), states.size(), live_count, mx, my, b.bound);
    }
    return minimize_dfa(determinize(nfa));
}

}  // namespace

Dfa relation_dfa(const LinearRelation& rel) {
    if (rel.coeffs.empty() || rel.coeffs.size() != rel.shifts.size())
        return relation_dfa_with_box(rel, 1);  // Builder reports the defect
    // The carry pair of any state on an accepting run stays far inside
    // the documented bound; widen the box until the language stops
    // growing, and settle for the full bound if it never does.
    long csum = 0;
    for (long c : rel.coeffs) csum += std::labs(c);
    long spec = (std::labs(rel.constant) +
                 csum * (rel.system.max_digit() + 1) *
                     (*std::max_element(rel.shifts.begin(), rel.shifts.end()) + 2)) *
                (rel.system.max_digit() + 2);
    long box = std::min(spec, std::max(8L, 2 * (std::labs(rel.constant) + csum)));
    Dfa current = relation_dfa_with_box(rel, box);
    while (box < spec) {
        box = std::min(spec, 2 * box);
        Dfa wider = relation_dfa_with_box(rel, box);
        if (equivalent_dfa(current, wider)) return wider;
        current = std::move(wider);
    }
    return current;
}

std::optional<std::string> shift_regex_fixture(const NumerationSystem& sys) {
    switch (sys.kind()) {
        case SystemKind::fibonacci:
            return "([0,0]|[0,1][1,1]*[1,0])*";
        case SystemKind::pell:
            return "([0,0]|([0,1][1,1]*([1,0]|[1,2][2,0]))|[0,2][2,0])*";
        case SystemKind::ostrowski:
            if (sys.period() == std::vector<int>{3})
                return "([0,0]|[0,2][2,2]*[2,0]|([0,2][2,2]*[2,3]|[0,3])"
                       "[3,0]|([0,1]|[0,2][2,2]*[2,1])([1,1]|[1,2][2,2]*[2,1])*"
                       "(([1,2][2,2]*[2,3]|[1,3])[3,0]|[1,2][2,2]*[2,0]|[1,0]))*";
            if (sys.period() == std::vector<int>{2, 1})
                return "([0,0]|([0,1][1,1][1,0]|[0,1][1,0])|[0,2][2,0])*";
            if (sys.period() == std::vector<int>{3, 1, 1})
                return "([0,0]|[0,1][1,0]|[0,1][1,1][1,0]|[0,2][2,0]|"
                       "[0,2][2,1][1,0]|[0,3][3,0])*";
            return std::nullopt;
    }
    return std::nullopt;
}

Dfa string_shift_dfa(const NumerationSystem& sys) {
    // Columns (u_t, v_t) with u_0 = 0 and v_t = u_{t+1}; accepting
    // when the carried v digit is 0 (the appended zero).
    int r = sys.max_digit() + 1;
    Alphabet pair = Alphabet::uniform(2, r);
    Dfa d;
    d.alphabet = pair;
    d.start = 0;
    // state 0: nothing read; state 1 + p: previous v digit was p
    d.output.assign(1 + r, 0);
    d.output[0] = 1;
    d.output[1] = 1;
    d.next.assign(1 + r, std::vector<int>(pair.symbol_count(), kDead));
    for (int u = 0; u < r; ++u)
        for (int v = 0; v < r; ++v) {
            int sym = pair.pack(std::vector<int>{u, v});
            if (u == 0) d.next[0][sym] = 1 + v;
            for (int p = 0; p < r; ++p)
                if (u == p) d.next[1 + p][sym] = 1 + v;
        }
    return minimize_dfa(d);
}

Dfa shift_dfa_generic(const NumerationSystem& sys) {
    return relation_dfa({sys, {1, -1}, {1, 0}, 0});
}

Dfa shift_dfa(const NumerationSystem& sys) {
    auto fixture = shift_regex_fixture(sys);
    bool single_period = sys.kind() != SystemKind::ostrowski || sys.period().size() == 1;
    if (!fixture || !single_period) return shift_dfa_generic(sys);
    int r = sys.max_digit() + 1;
    Dfa raw = regex_to_dfa(*fixture, Alphabet::uniform(2, r));
    Dfa valid = sys.validity_dfa();
    Dfa both = intersect(lift(valid, raw.alphabet, std::vector<int>{0}),
                         lift(valid, raw.alphabet, std::vector<int>{1}));
    return minimize_dfa(intersect(raw, both));
}

Dfa shift_chain_dfa(const NumerationSystem& sys, int count, bool use_regex_fixture) {
    if (count < 1) throw std::invalid_argument("shift_chain_dfa: count >= 1");
    int r = sys.max_digit() + 1;
    Dfa one;
    if (use_regex_fixture) {
        auto fixture = shift_regex_fixture(sys);
        if (!fixture) throw std::invalid_argument("no shift regex fixture for " + sys.str());
        one = regex_to_dfa(*fixture, Alphabet::uniform(2, r));
    } else {
        one = string_shift_dfa(sys);
    }
    Dfa chain = one;
    for (int i = 1; i < count; ++i) {
        // chain(u, w), one(w, v)  ->  (u, v); w is a raw string
        Alphabet triple = Alphabet::uniform(3, r);
        Dfa a = lift(chain, triple, std::vector<int>{0, 1});
        Dfa b = lift(one, triple, std::vector<int>{1, 2});
        chain = project(intersect(a, b), 1);
    }
    Dfa valid = sys.validity_dfa();
    Alphabet pair = Alphabet::uniform(2, r);
    Dfa both = intersect(lift(valid, pair, std::vector<int>{0}),
                         lift(valid, pair, std::vector<int>{1}));
    return minimize_dfa(intersect(chain, both));
}

Dfa floor_div_relation(const NumerationSystem& sys, long a, long c) {
    if (c < 1) throw std::invalid_argument("floor_div_relation: c must be >= 1");
    Dfa acc;
    for (long r = 0; r < c; ++r) {
        Dfa slice = relation_dfa({sys, {1, a, -c}, {0, 0, 0}, r});
        acc = (r == 0) ? slice : unite(acc, slice);
    }
    return minimize_dfa(acc);
}

LinearRelation LinearRelation::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("relation: missing system prefix");
    std::string sys_text = text.substr(0, colon);
    // The fixture form spells Ostrowski systems "ost[...]".
    if (sys_text.rfind("ost[", 0) == 0) sys_text.insert(3, ":");
    LinearRelation rel{NumerationSystem::parse(sys_text), {}, {}, 0};

    std::map<char, int> tape_of;
    std::string rhs;
    size_t i = colon + 1;
    const std::string& s = text;
    auto skip = [&] { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; };
    bool lhs = true;
    int sign = 1;
    while (true) {
        skip();
        if (i >= s.size()) {
            if (lhs) throw std::invalid_argument("relation: missing '='");
            break;
        }
        if (s[i] == '=') { lhs = false; ++i; skip(); }
        if (!lhs) {
            rel.constant = std::stol(s.substr(i));
            break;
        }
        if (s[i] == '+') { sign = 1; ++i; continue; }
        if (s[i] == '-') { sign = -1; ++i; continue; }
        long coeff = 1;
        if (std::isdigit((unsigned char)s[i])) {
            size_t pos;
            coeff = std::stol(s.substr(i), &pos);
            i += pos;
            skip();
            if (i < s.size() && s[i] == '*') { ++i; skip(); }
        }
        int shift = 0;
        char var;
        if (s.compare(i, 5, "shift") == 0) {
            i += 5;
            size_t pos;
            shift = (int)std::stol(s.substr(i), &pos);
            i += pos;
            if (i >= s.size() || s[i] != '(')
                throw std::invalid_argument("relation: expected ( after shift");
            ++i;
            var = s[i++];
            if (i >= s.size() || s[i] != ')')
                throw std::invalid_argument("relation: expected ) after shift variable");
            ++i;
        } else if (std::isalpha((unsigned char)s[i])) {
            var = s[i++];
        } else {
            throw std::invalid_argument("relation: unexpected character at '" +
                                        s.substr(i) + "'");
        }
        if (!tape_of.count(var)) {
            tape_of[var] = (int)rel.coeffs.size();
            rel.coeffs.push_back(0);
            rel.shifts.push_back(0);
        }
        int t = tape_of[var];
        rel.coeffs[t] += sign * coeff;
        rel.shifts[t] = shift;
        sign = 1;
    }
    return rel;
}

}  // namespace ostra
