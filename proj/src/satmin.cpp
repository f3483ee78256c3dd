#include "ostra/satmin.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ostra {

std::string Dictionary::to_text() const {
    std::ostringstream out;
    out << "# system " << system.str() << " base " << base << "\n";
    for (const auto& [s, o] : entries) out << s << "\t" << o << "\n";
    return out.str();
}

Dictionary Dictionary::from_text(const std::string& text,
                                 const NumerationSystem& system, int base) {
    Dictionary d{system, base, {}};
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::invalid_argument("dictionary: missing tab separator");
        d.entries.emplace_back(line.substr(0, tab),
                               std::stoi(line.substr(tab + 1)));
    }
    return d;
}

Dictionary build_dictionary(const BetaLinkage& link, int base, int count) {
    if (count < 1) throw std::invalid_argument("dictionary: count must be >= 1");
    Dictionary d{link.system, base, {}};
    d.entries.emplace_back("0", 0);  // leading-zero convention anchor
    Int power = 1;
    for (int n = 0; n < count; ++n) {
        d.entries.emplace_back(link.system.encode(power).str(),
                               fractional_digit(n, base, link.alpha));
        power *= base;
    }
    return d;
}

Apta build_apta(const Dictionary& d) {
    Apta a;
    a.alphabet_size = d.system.max_digit() + 1;
    a.parent = {-1};
    a.parent_label = {-1};
    a.child = {std::vector<int>(a.alphabet_size, -1)};
    a.output = {kNoOutput};
    for (const auto& [str, out] : d.entries) {
        int node = 0;
        for (char ch : str) {
            int digit = ch - '0';
            if (digit < 0 || digit >= a.alphabet_size)
                throw std::invalid_argument("dictionary: digit outside alphabet");
            if (a.child[node][digit] < 0) {
                a.child[node][digit] = a.node_count();
                a.parent.push_back(node);
                a.parent_label.push_back(digit);
                a.child.emplace_back(a.alphabet_size, -1);
                a.output.push_back(kNoOutput);
            }
            node = a.child[node][digit];
        }
        if (a.output[node] != kNoOutput && a.output[node] != out)
            throw std::invalid_argument("dictionary: contradictory outputs for " + str);
        a.output[node] = out;
    }
    return a;
}

ConsistencyGraph build_cg(const Apta& a) {
    ConsistencyGraph g;
    std::vector<int> defined;
    for (int v = 0; v < a.node_count(); ++v)
        if (a.output[v] != kNoOutput) defined.push_back(v);
    for (size_t i = 0; i < defined.size(); ++i)
        for (size_t j = i + 1; j < defined.size(); ++j)
            if (a.output[defined[i]] != a.output[defined[j]])
                g.edges.emplace_back(defined[i], defined[j]);
    return g;
}

OstrowskiConstraints OstrowskiConstraints::for_system(const NumerationSystem& sys) {
    OstrowskiConstraints c;
    switch (sys.kind()) {
        case SystemKind::fibonacci:
            c.kind = Kind::metallic;
            c.d1 = 1;
            return c;
        case SystemKind::pell:
            c.kind = Kind::metallic;
            c.d1 = 2;
            return c;
        case SystemKind::ostrowski:
            if (sys.period().size() == 1) {
                c.kind = Kind::metallic;
                c.d1 = sys.period()[0];
                return c;
            }
            c.kind = Kind::base_states;
            c.base_dfa = sys.validity_dfa();
            return c;
    }
    return c;
}

namespace {

struct VarAllocator {
    int next = 1;
    std::vector<std::string>& comments;

    explicit VarAllocator(std::vector<std::string>& c) : comments(c) {}
    int fresh(const std::string& comment) {
        comments.push_back(comment + " " + std::to_string(next));
        return next++;
    }
    int fresh() { return next++; }
};

}  // namespace

CnfFile CnfEncoding::to_cnf() const {
    CnfFile f;
    f.vars = vars;
    f.comments = var_comments;
    f.clauses = clauses;
    return f;
}

CnfEncoding encode(const Apta& apta, const ConsistencyGraph& cg, int colors,
                   const OstrowskiConstraints& constraints,
                   const EncodeOptions& opts) {
    if (colors < 1) throw std::invalid_argument("encode: need at least one color");
    CnfEncoding enc;
    enc.colors = colors;
    enc.alphabet_size = apta.alphabet_size;
    int V = apta.node_count();
    int L = apta.alphabet_size;
    int K = colors;

    {
        std::set<int> labels;
        for (int v = 0; v < V; ++v)
            if (apta.output[v] != kNoOutput) labels.insert(apta.output[v]);
        enc.output_labels.assign(labels.begin(), labels.end());
    }
    int S = (int)enc.output_labels.size();
    auto label_index = [&](int label) {
        return (int)(std::lower_bound(enc.output_labels.begin(),
                                      enc.output_labels.end(), label) -
                     enc.output_labels.begin());
    };

    VarAllocator vars(enc.var_comments);

    enc.x.assign(V, std::vector<int>(K));
    for (int v = 0; v < V; ++v)
        for (int i = 0; i < K; ++i)
            enc.x[v][i] = vars.fresh("x " + std::to_string(v) + " " + std::to_string(i));

    enc.y.assign(L, std::vector<std::vector<int>>(K, std::vector<int>(K)));
    for (int l = 0; l < L; ++l)
        for (int p = 0; p < K; ++p)
            for (int q = 0; q < K; ++q)
                enc.y[l][p][q] = vars.fresh("y " + std::to_string(l) + " " +
                                            std::to_string(p) + " " + std::to_string(q));

    enc.o.assign(K, std::vector<int>(S));
    for (int i = 0; i < K; ++i)
        for (int s = 0; s < S; ++s)
            enc.o[i][s] = vars.fresh("o " + std::to_string(i) + " " +
                                     std::to_string(enc.output_labels[s]));

    int B = 0;
    if (constraints.kind == OstrowskiConstraints::Kind::base_states) {
        B = constraints.base_dfa.state_count();
        enc.b.assign(K, std::vector<int>(B));
        for (int p = 0; p < K; ++p)
            for (int t = 0; t < B; ++t)
                enc.b[p][t] = vars.fresh("b " + std::to_string(p) + " " +
                                         std::to_string(t));
    }

    auto& cls = enc.clauses;
    auto add = [&](std::vector<int> lits) { cls.push_back(std::move(lits)); };

    // Every vertex has exactly one color; the root has color 0.
    for (int v = 0; v < V; ++v) {
        std::vector<int> c;
        for (int i = 0; i < K; ++i) c.push_back(enc.x[v][i]);
        add(std::move(c));
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) add({-enc.x[v][i], -enc.x[v][j]});
    }
    add({enc.x[0][0]});

    // Colors have consistent outputs.
    for (int i = 0; i < K; ++i)
        for (int s = 0; s < S; ++s)
            for (int s2 = s + 1; s2 < S; ++s2)
                add({-enc.o[i][s], -enc.o[i][s2]});
    for (int v = 0; v < V; ++v) {
        if (apta.output[v] == kNoOutput) continue;
        int s = label_index(apta.output[v]);
        for (int i = 0; i < K; ++i) add({-enc.x[v][i], enc.o[i][s]});
    }
    if (opts.output_witness) {
        // An output label needs a witnessing sample vertex of that color.
        for (int i = 0; i < K; ++i)
            for (int s = 0; s < S; ++s) {
                std::vector<int> c{-enc.o[i][s]};
                for (int v = 0; v < V; ++v)
                    if (apta.output[v] == enc.output_labels[s])
                        c.push_back(enc.x[v][i]);
                add(std::move(c));
            }
    }

    // Tree edges force transitions, and transitions force the child
    // color.
    for (int v = 1; v < V; ++v) {
        int p = apta.parent[v], l = apta.parent_label[v];
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) {
                add({-enc.x[p][i], -enc.x[v][j], enc.y[l][i][j]});
                add({-enc.y[l][i][j], -enc.x[p][i], enc.x[v][j]});
            }
    }

    // Determinism.
    for (int l = 0; l < L; ++l)
        for (int p = 0; p < K; ++p)
            for (int q = 0; q < K; ++q)
                for (int q2 = q + 1; q2 < K; ++q2)
                    add({-enc.y[l][p][q], -enc.y[l][p][q2]});

    // Direct conflicts.
    for (auto [u, v] : cg.edges)
        for (int i = 0; i < K; ++i) add({-enc.x[u][i], -enc.x[v][i]});

    // Leading zeros: the start state loops on 0.
    add({enc.y[0][0][0]});

    // Completeness, amended for the implied dead state, plus the
    // numeration-system constraints.
    if (constraints.kind == OstrowskiConstraints::Kind::metallic) {
        int d1 = constraints.d1;
        for (int p = 0; p < K; ++p) {
            std::vector<int> c;
            for (int q = 0; q < K; ++q) c.push_back(enc.y[0][p][q]);
            add(std::move(c));
        }
        for (int l = 1; l <= d1; ++l)
            for (int p = 0; p < K; ++p) {
                // p is a d1-successor, or p carries an l-transition.
                std::vector<int> c;
                for (int i = 0; i < K; ++i)
                    if (i != p) c.push_back(enc.y[d1][i][p]);
                for (int q = 0; q < K; ++q) c.push_back(enc.y[l][p][q]);
                add(std::move(c));
            }
        // No self-loop on d1; d1-successors keep only their 0-edge.
        for (int i = 0; i < K; ++i) add({-enc.y[d1][i][i]});
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) {
                if (i == j) continue;
                for (int l = 1; l <= d1; ++l)
                    for (int q = 0; q < K; ++q)
                        add({-enc.y[d1][i][j], -enc.y[l][j][q]});
            }
    } else {
        const Dfao& base = constraints.base_dfa;
        // The start state loops only on 0; no other state has a
        // self-loop on any label.
        for (int l = 1; l < L; ++l) add({-enc.y[l][0][0]});
        for (int i = 1; i < K; ++i)
            for (int l = 0; l < L; ++l) add({-enc.y[l][i][i]});
        add({enc.b[0][0]});
        for (int p = 0; p < K; ++p) {
            for (int s = 0; s < B; ++s)
                for (int t = s + 1; t < B; ++t) add({-enc.b[p][s], -enc.b[p][t]});
            std::vector<int> c;
            for (int t = 0; t < B; ++t) c.push_back(enc.b[p][t]);
            add(std::move(c));
        }
        // Transitions must follow the base DFA.
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) {
                if (i == j && opts.lax_self_loops) continue;
                for (int s = 0; s < B; ++s)
                    for (int t = 0; t < B; ++t)
                        for (int l = 0; l < L; ++l)
                            if (base.next[s][l] != t) {
                                if (i == j && s != t) continue;
                                add({-enc.b[i][s], -enc.b[j][t], -enc.y[l][i][j]});
                            }
            }
        // Completeness on the labels the base state allows.
        for (int p = 0; p < K; ++p)
            for (int s = 0; s < B; ++s)
                for (int l = 0; l < L; ++l) {
                    if (base.next[s][l] == kDead) continue;
                    std::vector<int> c{-enc.b[p][s]};
                    for (int q = 0; q < K; ++q) c.push_back(enc.y[l][p][q]);
                    add(std::move(c));
                }
    }

    if (opts.bfs_symmetry && K > 1) {
        // t/p/m predicates enforcing lexicographic BFS state numbering.
        std::vector<std::vector<int>> tvar(K, std::vector<int>(K, 0));
        std::vector<std::vector<int>> pvar(K, std::vector<int>(K, 0));
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j)
                tvar[i][j] = vars.fresh();
        for (int j = 1; j < K; ++j)
            for (int i = 0; i < j; ++i) pvar[j][i] = vars.fresh();
        std::vector<std::vector<std::vector<int>>> mvar(
            K, std::vector<std::vector<int>>(K));
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                mvar[i][j].resize(L);
                for (int l = 0; l < L; ++l) mvar[i][j][l] = vars.fresh();
            }

        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                // t_{i,j} <-> some edge i -> j
                std::vector<int> c{-tvar[i][j]};
                for (int l = 0; l < L; ++l) {
                    c.push_back(enc.y[l][i][j]);
                    add({-enc.y[l][i][j], tvar[i][j]});
                }
                add(std::move(c));
                // m_{i,j,l} <-> edge on l and none smaller
                for (int l = 0; l < L; ++l) {
                    add({-mvar[i][j][l], enc.y[l][i][j]});
                    std::vector<int> r{mvar[i][j][l], -enc.y[l][i][j]};
                    for (int l2 = 0; l2 < l; ++l2) {
                        add({-mvar[i][j][l], -enc.y[l2][i][j]});
                        r.push_back(enc.y[l2][i][j]);
                    }
                    add(std::move(r));
                }
            }
        for (int j = 1; j < K; ++j) {
            // p_{j,i} <-> t_{i,j} and no smaller i'
            for (int i = 0; i < j; ++i) {
                add({-pvar[j][i], tvar[i][j]});
                std::vector<int> r{pvar[j][i], -tvar[i][j]};
                for (int i2 = 0; i2 < i; ++i2) {
                    add({-pvar[j][i], -tvar[i2][j]});
                    r.push_back(tvar[i2][j]);
                }
                add(std::move(r));
            }
            std::vector<int> c;
            for (int i = 0; i < j; ++i) c.push_back(pvar[j][i]);
            add(std::move(c));  // every state has a parent
        }
        // Parents appear in order, and same-parent children are ordered
        // by their minimal incoming label.
        for (int j = 1; j + 1 < K; ++j)
            for (int i = 0; i < j; ++i)
                for (int i2 = 0; i2 < i; ++i2) add({-pvar[j][i], -pvar[j + 1][i2]});
        for (int j = 1; j + 1 < K; ++j)
            for (int i = 0; i < j; ++i)
                for (int l = 0; l < L; ++l)
                    for (int l2 = 0; l2 <= l; ++l2)
                        add({-pvar[j][i], -pvar[j + 1][i], -mvar[i][j][l],
                             -mvar[i][j + 1][l2]});
    }

    enc.vars = vars.next - 1;
    return enc;
}

namespace {

SolveOutcome solve_external(const CnfEncoding& enc, const SolverConfig& config,
                            const std::vector<std::vector<int>>& extra) {
    CnfFile f = enc.to_cnf();
    for (const auto& c : extra) f.clauses.push_back(c);
    f.vars = enc.vars;
    std::string path = config.work_dir + "/ostra_instance.cnf";
    {
        std::ofstream out(path, std::ios::binary);
        out << write_dimacs(f);
    }
    ExternalSolveOutcome ext = solve_with_external(config.external_path, path);
    if (!ext.solved)
        throw std::runtime_error("external solver failed: " + ext.diagnostics);
    SolveOutcome out;
    out.result = ext.result;
    if (ext.result == SatResult::sat) {
        out.model.assign(enc.vars + 1, 0);
        for (int v = 1; v <= enc.vars && v < (int)ext.model.size(); ++v)
            out.model[v] = ext.model[v];
    }
    return out;
}

}  // namespace

SolveOutcome solve(const CnfEncoding& enc, const SolverConfig& config) {
    if (!config.external_path.empty()) return solve_external(enc, config, {});
    CdclSolver solver;
    solver.ensure_vars(enc.vars);
    bool ok = true;
    for (const auto& c : enc.clauses)
        if (!solver.add_clause(c)) { ok = false; break; }
    SolveOutcome out;
    if (!ok || solver.solve() == SatResult::unsat) {
        out.result = SatResult::unsat;
        return out;
    }
    out.result = SatResult::sat;
    out.model.assign(enc.vars + 1, 0);
    for (int v = 1; v <= enc.vars; ++v) out.model[v] = solver.model_value(v) ? 1 : 0;
    return out;
}

Dfao decode_model(const CnfEncoding& enc, const std::vector<int8_t>& model) {
    Dfao a;
    a.alphabet = Alphabet::uniform(1, enc.alphabet_size);
    a.start = 0;
    a.output.assign(enc.colors, kNoOutput);
    a.next.assign(enc.colors, std::vector<int>(enc.alphabet_size, kDead));
    for (int i = 0; i < enc.colors; ++i)
        for (size_t s = 0; s < enc.output_labels.size(); ++s)
            if (model[enc.o[i][s]]) {
                if (a.output[i] != kNoOutput)
                    throw std::logic_error("decode_model: two outputs on one state");
                a.output[i] = enc.output_labels[s];
            }
    for (int l = 0; l < enc.alphabet_size; ++l)
        for (int p = 0; p < enc.colors; ++p)
            for (int q = 0; q < enc.colors; ++q)
                if (model[enc.y[l][p][q]]) {
                    if (a.next[p][l] != kDead)
                        throw std::logic_error("decode_model: nondeterministic model");
                    a.next[p][l] = q;
                }
    return a;
}

std::vector<Dfao> enumerate_all(const CnfEncoding& enc, const SolverConfig& config,
                                bool block_base_vars, size_t limit) {
    std::vector<int> tracked;
    for (const auto& per_label : enc.y)
        for (const auto& row : per_label)
            for (int v : row) tracked.push_back(v);
    for (const auto& row : enc.o)
        for (int v : row) tracked.push_back(v);
    if (block_base_vars)
        for (const auto& row : enc.b)
            for (int v : row) tracked.push_back(v);

    std::vector<Dfao> found;
    if (config.external_path.empty()) {
        CdclSolver solver;
        solver.ensure_vars(enc.vars);
        for (const auto& c : enc.clauses)
            if (!solver.add_clause(c)) return found;
        while (found.size() < limit) {
            if (solver.solve() == SatResult::unsat) break;
            std::vector<int8_t> model(enc.vars + 1, 0);
            for (int v = 1; v <= enc.vars; ++v)
                model[v] = solver.model_value(v) ? 1 : 0;
            found.push_back(decode_model(enc, model));
            std::vector<int> block;
            for (int v : tracked) block.push_back(model[v] ? -v : v);
            if (!solver.add_clause(block)) break;
        }
    } else {
        std::vector<std::vector<int>> extra;
        while (found.size() < limit) {
            SolveOutcome out = solve_external(enc, config, extra);
            if (out.result == SatResult::unsat) break;
            found.push_back(decode_model(enc, out.model));
            std::vector<int> block;
            for (int v : tracked) block.push_back(out.model[v] ? -v : v);
            extra.push_back(std::move(block));
        }
    }
    if (found.size() >= limit)
        throw std::runtime_error("enumerate_all: candidate limit reached");
    return found;
}

OracleTable build_oracle_table(const BetaLinkage& link, int base,
                               unsigned long count) {
    OracleTable t;
    t.reps.reserve(count);
    t.digits.reserve(count);
    Int power = 1;
    for (unsigned long n = 0; n < count; ++n) {
        t.reps.push_back(link.system.encode(power));
        t.digits.push_back(fractional_digit(n, base, link.alpha));
        power *= base;
    }
    return t;
}

std::optional<unsigned long> verify_candidate(const Dfao& cand,
                                              const OracleTable& table) {
    for (size_t n = 0; n < table.reps.size(); ++n) {
        auto got = cand.run(table.reps[n].digits);
        if (!got || *got != table.digits[n]) return (unsigned long)n;
    }
    return std::nullopt;
}

std::optional<unsigned long> verify_candidate(const Dfao& cand,
                                              const BetaLinkage& link, int base,
                                              unsigned long n_max) {
    return verify_candidate(cand, build_oracle_table(link, base, n_max));
}

LadderResult run_ladder(const BetaLinkage& link, int base,
                        const LadderOptions& opts) {
    LadderResult result;
    OracleTable oracle = build_oracle_table(
        link, base, opts.n_verify);
    OstrowskiConstraints constraints = OstrowskiConstraints::for_system(link.system);

    int k = opts.k_start;
    int ds = opts.ds_start;
    while (true) {
        Dictionary dict = build_dictionary(link, base, ds);
        Apta apta = build_apta(dict);
        ConsistencyGraph cg = build_cg(apta);
        CnfEncoding enc = encode(apta, cg, k, constraints, opts.encode_opts);
        SolveOutcome out = solve(enc, opts.solver);

        LadderRow row{k, ds, out.result == SatResult::sat, false, -1, -1};
        if (out.result == SatResult::unsat) {
            result.rows.push_back(row);
            ++k;
            continue;
        }
        Dfao model = decode_model(enc, out.model);
        row.verified = !verify_candidate(model, oracle).has_value();
        bool at_target = opts.k_target > 0 ? k == opts.k_target : row.verified;
        if (row.verified && at_target && opts.enumerate_at_target) {
            std::vector<Dfao> all =
                enumerate_all(enc, opts.solver, opts.block_base_vars);
            row.enumerated = (int)all.size();
            row.candidates = 0;
            for (const Dfao& cand : all) {
                if (!verify_candidate(cand, oracle)) {
                    ++row.candidates;
                    result.candidates.push_back(cand);
                }
            }
        }
        result.rows.push_back(row);
        if (row.verified && at_target) return result;
        if (!row.verified && at_target) {
            ds += opts.ds_step;
            continue;
        }
        if (row.verified) return result;  // verified below the target
        ds += opts.ds_step;
    }
}

}  // namespace ostra
