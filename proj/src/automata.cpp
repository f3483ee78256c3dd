#include "ostra/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ostra/hashing.hpp"

namespace ostra {

int Alphabet::symbol_count() const {
    int n = 1;
    for (int r : ranges) {
        if (r < 1) throw std::invalid_argument("alphabet: empty digit range");
        n *= r;
    }
    return n;
}

int Alphabet::pack(std::span<const int> column) const {
    if ((int)column.size() != tapes())
        throw std::invalid_argument("alphabet: column arity mismatch");
    int sym = 0, mult = 1;
    for (int t = 0; t < tapes(); ++t) {
        if (column[t] < 0 || column[t] >= ranges[t])
            throw std::out_of_range("alphabet: digit out of range");
        sym += column[t] * mult;
        mult *= ranges[t];
    }
    return sym;
}

std::vector<int> Alphabet::unpack(int symbol) const {
    std::vector<int> col(tapes());
    for (int t = 0; t < tapes(); ++t) {
        col[t] = symbol % ranges[t];
        symbol /= ranges[t];
    }
    return col;
}

std::string Alphabet::str() const {
    std::ostringstream out;
    for (size_t i = 0; i < ranges.size(); ++i) {
        if (i) out << "x";
        out << ranges[i];
    }
    return out.str();
}

Alphabet Alphabet::parse(const std::string& text) {
    Alphabet a;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, 'x')) a.ranges.push_back(std::stoi(part));
    if (a.ranges.empty()) throw std::invalid_argument("alphabet: empty spec");
    return a;
}

Alphabet Alphabet::uniform(int tapes, int range) {
    Alphabet a;
    a.ranges.assign(tapes, range);
    return a;
}

std::optional<int> Dfao::run(std::span<const int> symbols) const {
    int s = start;
    int nsym = alphabet.symbol_count();
    for (int sym : symbols) {
        if (sym < 0 || sym >= nsym) throw std::out_of_range("run: symbol out of range");
        s = next[s][sym];
        if (s == kDead) return std::nullopt;
    }
    if (output[s] == kNoOutput) return std::nullopt;
    return output[s];
}

bool Dfao::accepts(std::span<const int> symbols) const {
    auto o = run(symbols);
    return o && *o == 1;
}

bool Dfao::is_dfa() const {
    for (int o : output)
        if (o != 0 && o != 1) return false;
    return true;
}

void Dfao::check() const {
    int n = state_count(), nsym = alphabet.symbol_count();
    if (start < 0 || start >= n) throw std::logic_error("dfao: bad start");
    if ((int)next.size() != n) throw std::logic_error("dfao: bad transition table");
    for (const auto& row : next) {
        if ((int)row.size() != nsym) throw std::logic_error("dfao: bad row size");
        for (int t : row)
            if (t != kDead && (t < 0 || t >= n)) throw std::logic_error("dfao: bad target");
    }
}

int Nfa::add_state() {
    accepting.push_back(0);
    next.emplace_back(alphabet.symbol_count());
    eps.emplace_back();
    return (int)accepting.size() - 1;
}

void Nfa::add_edge(int from, int symbol, int to) { next[from][symbol].push_back(to); }
void Nfa::add_eps(int from, int to) { eps[from].push_back(to); }

namespace {

std::string symbol_str(const Alphabet& alphabet, int sym) {
    auto col = alphabet.unpack(sym);
    if (col.size() == 1) return std::to_string(col[0]);
    std::string s = "[";
    for (size_t i = 0; i < col.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(col[i]);
    }
    return s + "]";
}

int parse_symbol(const Alphabet& alphabet, const std::string& text) {
    std::vector<int> col;
    if (!text.empty() && text.front() == '[') {
        std::istringstream in(text.substr(1, text.size() - 2));
        std::string part;
        while (std::getline(in, part, ',')) col.push_back(std::stoi(part));
    } else {
        col.push_back(std::stoi(text));
    }
    return alphabet.pack(col);
}

// Canonical renumbering: breadth-first from the start state, edges in
// symbol order.  Unreachable states are dropped.
Dfao bfs_renumber(const Dfao& a) {
    int nsym = a.alphabet.symbol_count();
    std::vector<int> id(a.state_count(), -1);
    std::vector<int> order;
    std::deque<int> queue{a.start};
    id[a.start] = 0;
    order.push_back(a.start);
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int sym = 0; sym < nsym; ++sym) {
            int t = a.next[s][sym];
            if (t != kDead && id[t] < 0) {
                id[t] = (int)order.size();
                order.push_back(t);
                queue.push_back(t);
            }
        }
    }
    Dfao r;
    r.alphabet = a.alphabet;
    r.start = 0;
    r.output.resize(order.size());
    r.next.assign(order.size(), std::vector<int>(nsym, kDead));
    for (size_t i = 0; i < order.size(); ++i) {
        int s = order[i];
        r.output[i] = a.output[s];
        for (int sym = 0; sym < nsym; ++sym) {
            int t = a.next[s][sym];
            r.next[i][sym] = (t == kDead) ? kDead : id[t];
        }
    }
    return r;
}

// Completes the automaton with an explicit sink carrying `sink_output`.
// Returns the sink index (existing table untouched if already total).
Dfao complete_with_sink(const Dfao& a, int sink_output, int* sink_out = nullptr) {
    Dfao r = a;
    int nsym = r.alphabet.symbol_count();
    bool needs = false;
    for (const auto& row : r.next)
        for (int t : row)
            if (t == kDead) { needs = true; break; }
    int sink = kDead;
    if (needs) {
        sink = r.state_count();
        r.output.push_back(sink_output);
        r.next.emplace_back(nsym, sink);
        for (auto& row : r.next)
            for (int& t : row)
                if (t == kDead) t = sink;
    }
    if (sink_out) *sink_out = sink;
    return r;
}

// Moore partition refinement over a complete automaton; the initial
// partition groups states by output label.
std::vector<int> moore_classes(const Dfao& a) {
    int n = a.state_count(), nsym = a.alphabet.symbol_count();
    std::vector<int> cls(n);
    {
        std::map<int, int> by_output;
        for (int s = 0; s < n; ++s) {
            auto [it, fresh] = by_output.emplace(a.output[s], (int)by_output.size());
            cls[s] = it->second;
        }
    }
    while (true) {
        std::unordered_map<std::vector<int>, int, IntVecHash> sig_id;
        std::vector<int> fresh(n);
        std::vector<int> sig(nsym + 1);
        for (int s = 0; s < n; ++s) {
            sig[0] = cls[s];
            for (int sym = 0; sym < nsym; ++sym) sig[sym + 1] = cls[a.next[s][sym]];
            auto [it, added] = sig_id.emplace(sig, (int)sig_id.size());
            fresh[s] = it->second;
        }
        if (fresh == cls) break;
        cls = std::move(fresh);
    }
    return cls;
}

// Shared minimization core.  `good` decides which outputs make a state
// worth keeping; states that cannot reach a good state collapse into
// the implied dead state.
Dfao minimize_core(const Dfao& a, const std::function<bool(int)>& good,
                   int empty_output) {
    Dfao c = complete_with_sink(a, kNoOutput);
    int nsym = c.alphabet.symbol_count();

    // Restrict to the reachable part.
    c = bfs_renumber(c);
    int n = c.state_count();

    std::vector<int> cls = moore_classes(c);
    int nclasses = 1 + *std::max_element(cls.begin(), cls.end());

    Dfao q;
    q.alphabet = c.alphabet;
    q.start = cls[c.start];
    q.output.assign(nclasses, kNoOutput);
    q.next.assign(nclasses, std::vector<int>(nsym, kDead));
    for (int s = 0; s < n; ++s) {
        q.output[cls[s]] = c.output[s];
        for (int sym = 0; sym < nsym; ++sym) q.next[cls[s]][sym] = cls[c.next[s][sym]];
    }

    // Trim classes from which no good output is reachable.
    std::vector<char> live(nclasses, 0);
    std::vector<std::vector<int>> rev(nclasses);
    std::deque<int> queue;
    for (int s = 0; s < nclasses; ++s) {
        for (int sym = 0; sym < nsym; ++sym)
            if (q.next[s][sym] != kDead) rev[q.next[s][sym]].push_back(s);
        if (good(q.output[s])) { live[s] = 1; queue.push_back(s); }
    }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : rev[s])
            if (!live[p]) { live[p] = 1; queue.push_back(p); }
    }

    if (!live[q.start]) {
        Dfao e;
        e.alphabet = a.alphabet;
        e.start = 0;
        e.output = {empty_output};
        e.next = {std::vector<int>(nsym, kDead)};
        return e;
    }
    for (int s = 0; s < nclasses; ++s)
        for (int sym = 0; sym < nsym; ++sym)
            if (q.next[s][sym] != kDead && !live[q.next[s][sym]]) q.next[s][sym] = kDead;

    return bfs_renumber(q);
}

}  // namespace

Dfa minimize_dfa(const Dfa& a) {
    // Language semantics: dead and rejecting are the same behavior.
    Dfa b = a;
    for (int& o : b.output)
        if (o == kNoOutput) o = 0;
    Dfa c = complete_with_sink(b, 0);
    return minimize_core(c, [](int o) { return o == 1; }, 0);
}

Dfao minimize(const Dfao& a) {
    return minimize_core(a, [](int o) { return o != kNoOutput; }, kNoOutput);
}

namespace {

bool apply_op(BoolOp op, bool x, bool y) {
    switch (op) {
        case BoolOp::And: return x && y;
        case BoolOp::Or: return x || y;
        case BoolOp::Xor: return x != y;
        case BoolOp::AndNot: return x && !y;
    }
    return false;
}

}  // namespace

Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
    if (!(a.alphabet == b.alphabet))
        throw std::invalid_argument("product: alphabet mismatch");
    int nsym = a.alphabet.symbol_count();

    std::unordered_map<std::pair<int, int>, int, IntPairHash> id;
    std::vector<std::pair<int, int>> states;
    auto intern = [&](int x, int y) {
        auto [it, fresh] = id.emplace(std::make_pair(x, y), (int)states.size());
        if (fresh) states.emplace_back(x, y);
        return it->second;
    };

    Dfa r;
    r.alphabet = a.alphabet;
    r.start = intern(a.start, b.start);
    for (size_t i = 0; i < states.size(); ++i) {
        auto [x, y] = states[i];
        bool ax = x != kDead && a.output[x] == 1;
        bool by = y != kDead && b.output[y] == 1;
        r.output.push_back(apply_op(op, ax, by) ? 1 : 0);
        r.next.emplace_back(nsym, kDead);
        for (int sym = 0; sym < nsym; ++sym) {
            int nx = a.step(x, sym), ny = b.step(y, sym);
            if (nx == kDead && ny == kDead) continue;  // implied dead pair
            r.next[i][sym] = intern(nx, ny);
        }
    }
    return r;
}

Dfa intersect(const Dfa& a, const Dfa& b) { return product(a, b, BoolOp::And); }
Dfa unite(const Dfa& a, const Dfa& b) { return product(a, b, BoolOp::Or); }

Dfa complement(const Dfa& a) {
    Dfa c = complete_with_sink(a, 0);
    for (int& o : c.output) {
        if (o == kNoOutput) o = 0;
        o = 1 - o;
    }
    return c;
}

Dfa determinize(const Nfa& n) {
    int nsym = n.alphabet.symbol_count();
    std::vector<char> mark((size_t)(n.accepting.size()), 0);
    auto closure = [&](std::vector<int> set) {
        std::vector<int> out = set;
        for (int s : out) mark[s] = 1;
        for (size_t i = 0; i < out.size(); ++i)
            for (int t : n.eps[out[i]])
                if (!mark[t]) { mark[t] = 1; out.push_back(t); }
        for (int s : out) mark[s] = 0;
        std::sort(out.begin(), out.end());
        return out;
    };

    std::unordered_map<std::vector<int>, int, IntVecHash> id;
    std::vector<std::vector<int>> subsets;
    auto intern = [&](std::vector<int> subset) {
        auto [it, fresh] = id.emplace(subset, (int)subsets.size());
        if (fresh) subsets.push_back(std::move(subset));
        return it->second;
    };

    Dfa r;
    r.alphabet = n.alphabet;
    r.start = intern(closure(n.starts));
    for (size_t i = 0; i < subsets.size(); ++i) {
        auto subset = subsets[i];  // copy: subsets may grow
        bool acc = std::any_of(subset.begin(), subset.end(),
                               [&](int s) { return n.accepting[s]; });
        r.output.push_back(acc ? 1 : 0);
        r.next.emplace_back(nsym, kDead);
        for (int sym = 0; sym < nsym; ++sym) {
            std::vector<int> to;
            for (int s : subset)
                for (int t : n.next[s][sym]) to.push_back(t);
            if (to.empty()) continue;
            std::sort(to.begin(), to.end());
            to.erase(std::unique(to.begin(), to.end()), to.end());
            r.next[i][sym] = intern(closure(std::move(to)));
        }
    }
    return r;
}

namespace {

bool pair_bfs_equal(const Dfao& a, const Dfao& b,
                    const std::function<int(const Dfao&, int)>& label) {
    if (!(a.alphabet == b.alphabet))
        throw std::invalid_argument("equivalence: alphabet mismatch");
    int nsym = a.alphabet.symbol_count();
    std::set<std::pair<int, int>> seen;
    std::deque<std::pair<int, int>> queue;
    queue.emplace_back(a.start, b.start);
    seen.insert({a.start, b.start});
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        if (label(a, x) != label(b, y)) return false;
        for (int sym = 0; sym < nsym; ++sym) {
            int nx = a.step(x, sym), ny = b.step(y, sym);
            if (nx == kDead && ny == kDead) continue;
            if (seen.insert({nx, ny}).second) queue.emplace_back(nx, ny);
        }
    }
    return true;
}

}  // namespace

bool equivalent_dfa(const Dfa& a, const Dfa& b) {
    return pair_bfs_equal(a, b, [](const Dfao& m, int s) {
        return (s != kDead && m.output[s] == 1) ? 1 : 0;
    });
}

bool equivalent_dfao(const Dfao& a, const Dfao& b) {
    return pair_bfs_equal(a, b, [](const Dfao& m, int s) {
        return s == kDead ? kNoOutput : m.output[s];
    });
}

bool is_empty(const Dfa& a) {
    int nsym = a.alphabet.symbol_count();
    std::vector<char> seen(a.state_count(), 0);
    std::deque<int> queue{a.start};
    seen[a.start] = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        if (a.output[s] == 1) return false;
        for (int sym = 0; sym < nsym; ++sym) {
            int t = a.next[s][sym];
            if (t != kDead && !seen[t]) { seen[t] = 1; queue.push_back(t); }
        }
    }
    return true;
}

Dfa project(const Dfa& a, int tape) {
    int k = a.alphabet.tapes();
    if (k < 2) throw std::invalid_argument("project: need at least two tapes");
    if (tape < 0 || tape >= k) throw std::invalid_argument("project: bad tape");

    Alphabet reduced;
    for (int t = 0; t < k; ++t)
        if (t != tape) reduced.ranges.push_back(a.alphabet.ranges[t]);

    Nfa n;
    n.alphabet = reduced;
    for (int s = 0; s < a.state_count(); ++s) {
        n.add_state();
        n.accepting[s] = (a.output[s] == 1);
    }
    int nsym = a.alphabet.symbol_count();
    std::vector<int> zero_pad_syms;  // symbols whose kept columns are all zero
    for (int sym = 0; sym < nsym; ++sym) {
        auto col = a.alphabet.unpack(sym);
        std::vector<int> rcol;
        bool pad = true;
        for (int t = 0; t < k; ++t) {
            if (t == tape) continue;
            rcol.push_back(col[t]);
            if (col[t] != 0) pad = false;
        }
        int rsym = reduced.pack(rcol);
        for (int s = 0; s < a.state_count(); ++s) {
            int t = a.next[s][sym];
            if (t != kDead) n.add_edge(s, rsym, t);
        }
        if (pad) zero_pad_syms.push_back(sym);
    }

    // The erased tape may be longer than the kept ones: close the start
    // set under symbols whose kept columns are leading zeros.
    std::set<int> starts{a.start};
    std::deque<int> queue{a.start};
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int sym : zero_pad_syms) {
            int t = a.next[s][sym];
            if (t != kDead && starts.insert(t).second) queue.push_back(t);
        }
    }
    n.starts.assign(starts.begin(), starts.end());
    return minimize_dfa(determinize(n));
}

Dfa lift(const Dfa& a, const Alphabet& wide, std::span<const int> tape_map) {
    int k = a.alphabet.tapes();
    if ((int)tape_map.size() != k) throw std::invalid_argument("lift: tape map arity");
    for (int t = 0; t < k; ++t)
        if (wide.ranges[tape_map[t]] != a.alphabet.ranges[t])
            throw std::invalid_argument("lift: digit range mismatch");

    Dfa r;
    r.alphabet = wide;
    r.start = a.start;
    r.output = a.output;
    int wsym = wide.symbol_count();
    r.next.assign(a.state_count(), std::vector<int>(wsym, kDead));
    std::vector<int> src(k);
    for (int sym = 0; sym < wsym; ++sym) {
        auto col = wide.unpack(sym);
        for (int t = 0; t < k; ++t) src[t] = col[tape_map[t]];
        int asym = a.alphabet.pack(src);
        for (int s = 0; s < a.state_count(); ++s) r.next[s][sym] = a.next[s][asym];
    }
    return r;
}

Dfao combine(const std::vector<std::pair<Dfa, int>>& parts, int fallback,
             const Dfa& domain) {
    for (const auto& [part, label] : parts)
        if (!(part.alphabet == domain.alphabet))
            throw std::invalid_argument("combine: alphabet mismatch");
    int nsym = domain.alphabet.symbol_count();
    int m = (int)parts.size();

    std::unordered_map<std::vector<int>, int, IntVecHash> id;
    std::vector<std::vector<int>> states;
    auto intern = [&](std::vector<int> tuple) {
        auto [it, fresh] = id.emplace(tuple, (int)states.size());
        if (fresh) states.push_back(std::move(tuple));
        return it->second;
    };

    std::vector<int> start(m + 1);
    for (int i = 0; i < m; ++i) start[i] = parts[i].first.start;
    start[m] = domain.start;

    Dfao r;
    r.alphabet = domain.alphabet;
    r.start = intern(start);
    for (size_t i = 0; i < states.size(); ++i) {
        auto tuple = states[i];
        int dom = tuple[m];
        bool in_domain = dom != kDead && domain.output[dom] == 1;
        int out = kNoOutput;
        if (in_domain) {
            out = fallback;
            int hits = 0;
            for (int p = 0; p < m; ++p) {
                int s = tuple[p];
                if (s != kDead && parts[p].first.output[s] == 1) {
                    ++hits;
                    out = parts[p].second;
                }
            }
            if (hits > 1) throw std::runtime_error("combine: parts overlap");
        }
        r.output.push_back(out);
        r.next.emplace_back(nsym, kDead);
        for (int sym = 0; sym < nsym; ++sym) {
            std::vector<int> to(m + 1);
            bool all_dead = true;
            for (int p = 0; p <= m; ++p) {
                const Dfa& machine = (p == m) ? domain : parts[p].first;
                to[p] = machine.step(tuple[p], sym);
                if (to[p] != kDead) all_dead = false;
            }
            if (all_dead) continue;
            r.next[i][sym] = intern(std::move(to));
        }
    }
    return minimize(r);
}

Dfa zero_column_dfa(const Alphabet& alphabet) {
    Dfa d;
    d.alphabet = alphabet;
    d.start = 0;
    d.output = {1};
    d.next = {std::vector<int>(alphabet.symbol_count(), kDead)};
    d.next[0][0] = 0;  // the all-zero column packs to symbol 0
    return d;
}

std::string Dfao::to_text() const {
    std::ostringstream out;
    out << "alphabet: " << alphabet.str() << "\n";
    out << "states: " << state_count() << " start: " << start << "\n";
    int nsym = alphabet.symbol_count();
    for (int s = 0; s < state_count(); ++s) {
        out << "state " << s << " output ";
        if (output[s] == kNoOutput) out << "-";
        else out << output[s];
        out << "\n";
        for (int sym = 0; sym < nsym; ++sym)
            if (next[s][sym] != kDead)
                out << "  " << symbol_str(alphabet, sym) << " -> " << next[s][sym] << "\n";
    }
    return out.str();
}

Dfao Dfao::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    Dfao a;
    if (!(in >> word) || word != "alphabet:") throw std::invalid_argument("automaton: expected alphabet");
    in >> word;
    a.alphabet = Alphabet::parse(word);
    int nstates = 0;
    in >> word;  // "states:"
    in >> nstates;
    in >> word;  // "start:"
    in >> a.start;
    a.output.assign(nstates, kNoOutput);
    a.next.assign(nstates, std::vector<int>(a.alphabet.symbol_count(), kDead));
    int current = -1;
    while (in >> word) {
        if (word == "state") {
            in >> current >> word;  // index, "output"
            in >> word;
            if (current < 0 || current >= nstates) throw std::invalid_argument("automaton: bad state index");
            a.output[current] = (word == "-") ? kNoOutput : std::stoi(word);
        } else {
            int sym = parse_symbol(a.alphabet, word);
            std::string arrow;
            int target;
            in >> arrow >> target;
            if (arrow != "->" || current < 0) throw std::invalid_argument("automaton: bad transition line");
            a.next[current][sym] = target;
        }
    }
    a.check();
    return a;
}

std::string Dfao::to_dot(const DotOptions& opts) const {
    std::ostringstream out;
    out << "digraph automaton {\n  rankdir=LR;\n";
    out << "  __start [shape=none, label=\"\"];\n";
    int nsym = alphabet.symbol_count();
    for (int s = 0; s < state_count(); ++s) {
        out << "  s" << s << " [label=\"";
        if (!opts.state_prefix.empty()) {
            out << opts.state_prefix << s << "\", shape="
                << (output[s] == 1 ? "doublecircle" : "circle");
        } else {
            out << s << "/";
            if (output[s] == kNoOutput) out << "-";
            else out << output[s];
            out << "\", shape=circle";
        }
        out << "];\n";
    }
    out << "  __start -> s" << start << ";\n";
    for (int s = 0; s < state_count(); ++s)
        for (int sym = 0; sym < nsym; ++sym)
            if (next[s][sym] != kDead)
                out << "  s" << s << " -> s" << next[s][sym]
                    << " [label=\"" << symbol_str(alphabet, sym) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace ostra
