#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ostra/automata.hpp"
#include "ostra/dimacs.hpp"
#include "ostra/pipeline.hpp"
#include "ostra/sat_solver.hpp"

namespace ostra {

/// Labeled sample: representations of b^0..b^{count-1} with their
/// digits, plus the entry mapping the string "0" to output 0.
struct Dictionary {
    NumerationSystem system;
    int base = 0;
    std::vector<std::pair<std::string, int>> entries;

    std::string to_text() const;  // one "string<TAB>output" per line
    static Dictionary from_text(const std::string& text,
                                const NumerationSystem& system, int base);
};

Dictionary build_dictionary(const BetaLinkage& link, int base, int count);

/// Augmented prefix tree acceptor of the dictionary.
struct Apta {
    int alphabet_size = 0;
    std::vector<int> parent;                // -1 at the root
    std::vector<int> parent_label;
    std::vector<std::vector<int>> child;    // [node][digit], -1 if absent
    std::vector<int> output;                // kNoOutput when undefined

    int node_count() const { return (int)parent.size(); }
};

Apta build_apta(const Dictionary& d);

/// Direct conflicts only: nodes whose defined outputs differ.
struct ConsistencyGraph {
    std::vector<std::pair<int, int>> edges;
};

ConsistencyGraph build_cg(const Apta& a);

/// Numeration-system constraints imposed on the inferred automaton:
/// the self-loop/successor families for single-term periods, the
/// base-state relation for longer ones.
struct OstrowskiConstraints {
    enum class Kind { metallic, base_states };
    Kind kind = Kind::metallic;
    int d1 = 1;
    Dfao base_dfa;  // the system's validity DFA (base_states only)

    static OstrowskiConstraints for_system(const NumerationSystem& sys);
};

struct EncodeOptions {
    bool bfs_symmetry = true;
    bool output_witness = true;     // forbid outputs no sample vertex witnesses
    bool lax_self_loops = false;    // exempt i = j from the base-state transition rule
};

struct CnfEncoding {
    int colors = 0;
    int alphabet_size = 0;
    int vars = 0;
    std::vector<std::vector<int>> clauses;
    std::vector<std::string> var_comments;          // DIMACS variable map
    std::vector<std::vector<int>> x;                // [vertex][color]
    std::vector<std::vector<std::vector<int>>> y;   // [label][p][q]
    std::vector<int> output_labels;                 // sorted distinct outputs
    std::vector<std::vector<int>> o;                // [color][label index]
    std::vector<std::vector<int>> b;                // [color][base state]

    CnfFile to_cnf() const;
};

CnfEncoding encode(const Apta& apta, const ConsistencyGraph& cg, int colors,
                   const OstrowskiConstraints& constraints,
                   const EncodeOptions& opts = {});

struct SolverConfig {
    std::string external_path;  // empty: use the built-in CDCL solver
    std::string work_dir = "."; // DIMACS location for external runs
};

struct SolveOutcome {
    SatResult result = SatResult::unsat;
    std::vector<int8_t> model;  // 1-based truth values when sat
};

SolveOutcome solve(const CnfEncoding& enc, const SolverConfig& config = {});

/// Reads the y and o variables of a model into an automaton.
Dfao decode_model(const CnfEncoding& enc, const std::vector<int8_t>& model);

/// All transition-distinct satisfying automata, by blocking the y and o
/// assignment of each model until unsat.  `block_base_vars` switches to
/// the coarser granularity that blocks b variables as well.
std::vector<Dfao> enumerate_all(const CnfEncoding& enc,
                                const SolverConfig& config = {},
                                bool block_base_vars = false,
                                size_t limit = 100000);

/// Frozen oracle sample for repeated candidate checks.
struct OracleTable {
    std::vector<Representation> reps;  // (b^n) in the system
    std::vector<int> digits;
};

OracleTable build_oracle_table(const BetaLinkage& link, int base,
                               unsigned long count);

/// First n where the candidate disagrees with the digit oracle, or
/// nullopt on a clean pass.
std::optional<unsigned long> verify_candidate(const Dfao& cand,
                                              const OracleTable& table);
std::optional<unsigned long> verify_candidate(const Dfao& cand,
                                              const BetaLinkage& link, int base,
                                              unsigned long n_max);

struct LadderRow {
    int k = 0;
    int digit_set = 0;
    bool sat = false;
    bool verified = false;       // the decoded model passes the oracle check
    int enumerated = -1;         // raw satisfying automata (enumeration runs only)
    int candidates = -1;         // of those, oracle-verified ones
};

struct LadderOptions {
    int k_start = 1;
    int ds_start = 1;
    int ds_step = 1;
    int k_target = 0;            // stop/enumerate when reached; 0 = first verified
    unsigned long n_verify = 10000;
    bool enumerate_at_target = true;
    bool block_base_vars = false;
    EncodeOptions encode_opts;
    SolverConfig solver;
};

struct LadderResult {
    std::vector<LadderRow> rows;
    std::vector<Dfao> candidates;  // verified candidates at the target
};

/// The UNSAT -> k+1, SAT-but-wrong -> larger digit set search.
LadderResult run_ladder(const BetaLinkage& link, int base,
                        const LadderOptions& opts);

}  // namespace ostra
