#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ostra {

enum class SatResult { sat, unsat };

/// Conflict-driven clause-learning solver over DIMACS-style literals
/// (positive/negative 1-based variable indices).  Clauses may be added
/// between solve() calls, which is how model enumeration blocks
/// previously found assignments.
class CdclSolver {
public:
    int add_var();
    void ensure_vars(int n);
    int var_count() const { return nvars_; }

    /// Returns false when the clause makes the instance trivially
    /// unsatisfiable.
    bool add_clause(std::vector<int> lits);

    SatResult solve();

    bool model_value(int var) const;  // valid after a sat answer

    uint64_t conflicts() const { return conflicts_; }

private:
    struct Clause {
        double act = 0;
        int lbd = 0;
        bool learnt = false;
        bool deleted = false;
        std::vector<int> lits;  // internal literals
    };
    struct Watch {
        int clause;
        int blocker;
    };

    // internal literal encoding: 2*var + (negative ? 1 : 0)
    static int neg(int lit) { return lit ^ 1; }
    static int var_of(int lit) { return lit >> 1; }
    int to_internal(int dimacs) const;

    bool value_true(int lit) const;
    bool value_false(int lit) const;
    bool assigned(int lit) const;

    void enqueue(int lit, int reason);
    int propagate();  // returns conflicting clause id or -1
    void analyze(int confl, std::vector<int>& learnt, int& backtrack_level);
    bool redundant(int lit, std::vector<int>& stack, std::vector<int>& to_clear);
    void cancel_until(int level);
    int pick_branch();
    void attach(int clause_id);
    void bump_var(int var);
    void bump_clause(int clause_id);
    void decay();
    void reduce_db();
    void restart();
    int clause_lbd(const std::vector<int>& lits);

    // activity-ordered heap
    void heap_insert(int var);
    void heap_sift_up(int pos);
    void heap_sift_down(int pos);
    bool heap_less(int a, int b) const;

    int nvars_ = 0;
    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<int8_t> assign_;   // per var: -1 unset, 0 false, 1 true
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;

    std::vector<double> activity_;
    double var_inc_ = 1.0;
    std::vector<int8_t> phase_;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    std::vector<int8_t> seen_;

    std::vector<int8_t> model_;
    uint64_t conflicts_ = 0;
    size_t learnt_limit_ = 8192;
    // adaptive restarts over the recent literal-block-distance window
    std::vector<int> lbd_window_;
    size_t lbd_pos_ = 0;
    double lbd_window_sum_ = 0;
    double lbd_global_sum_ = 0;
    std::vector<uint64_t> lbd_mark_;
    uint64_t lbd_stamp_ = 0;
    double var_decay_ = 0.8;
    size_t best_trail_ = 0;  // deepest assignment seen since the last solve
};

/// Runs an external solver binary on a DIMACS file and parses the
/// verdict and model ("s ..." / "v ..." output lines).
struct ExternalSolveOutcome {
    bool solved = false;       // false: crash, timeout, unparseable
    SatResult result = SatResult::unsat;
    std::vector<int8_t> model;  // 1-based truth values when sat
    std::string diagnostics;
};
ExternalSolveOutcome solve_with_external(const std::string& solver_path,
                                         const std::string& dimacs_path);

}  // namespace ostra
