#include "ostra/sat_solver.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ostra {

int CdclSolver::to_internal(int dimacs) const {
    int v = std::abs(dimacs) - 1;
    if (v < 0 || v >= nvars_) throw std::out_of_range("sat: literal out of range");
    return 2 * v + (dimacs < 0 ? 1 : 0);
}

int CdclSolver::add_var() {
    ++nvars_;
    watches_.emplace_back();
    watches_.emplace_back();
    assign_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(0);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    heap_insert(nvars_ - 1);
    return nvars_;
}

void CdclSolver::ensure_vars(int n) {
    while (nvars_ < n) add_var();
}

bool CdclSolver::value_true(int lit) const {
    int8_t a = assign_[var_of(lit)];
    return a >= 0 && a == ((lit & 1) ? 0 : 1);
}

bool CdclSolver::value_false(int lit) const {
    int8_t a = assign_[var_of(lit)];
    return a >= 0 && a == ((lit & 1) ? 1 : 0);
}

bool CdclSolver::assigned(int lit) const { return assign_[var_of(lit)] >= 0; }

bool CdclSolver::add_clause(std::vector<int> lits) {
    if (!ok_) return false;
    cancel_until(0);
    std::vector<int> internal;
    internal.reserve(lits.size());
    for (int l : lits) internal.push_back(to_internal(l));
    std::sort(internal.begin(), internal.end());
    internal.erase(std::unique(internal.begin(), internal.end()), internal.end());
    std::vector<int> final_lits;
    for (size_t i = 0; i < internal.size(); ++i) {
        int l = internal[i];
        if (i + 1 < internal.size() && internal[i + 1] == neg(l)) return true;  // tautology
        if (i > 0 && internal[i - 1] == neg(l)) return true;
        if (value_true(l)) return true;   // satisfied at level 0
        if (value_false(l)) continue;     // falsified at level 0
        final_lits.push_back(l);
    }
    if (final_lits.empty()) { ok_ = false; return false; }
    if (final_lits.size() == 1) {
        enqueue(final_lits[0], -1);
        if (propagate() != -1) { ok_ = false; return false; }
        return true;
    }
    for (int l : final_lits) activity_[var_of(l)] += 1e-5;
    for (int l : final_lits)
        if (heap_pos_[var_of(l)] >= 0) heap_sift_up(heap_pos_[var_of(l)]);
    clauses_.push_back({0.0, 0, false, false, std::move(final_lits)});
    attach((int)clauses_.size() - 1);
    return true;
}

void CdclSolver::attach(int clause_id) {
    const Clause& c = clauses_[clause_id];
    watches_[neg(c.lits[0])].push_back({clause_id, c.lits[1]});
    watches_[neg(c.lits[1])].push_back({clause_id, c.lits[0]});
}

void CdclSolver::enqueue(int lit, int reason) {
    int v = var_of(lit);
    assign_[v] = (lit & 1) ? 0 : 1;
    level_[v] = (int)trail_lim_.size();
    reason_[v] = reason;
    trail_.push_back(lit);
}

int CdclSolver::propagate() {
    while (qhead_ < trail_.size()) {
        int p = trail_[qhead_++];  // p is true; scan watchers of ~p
        auto& ws = watches_[p];
        size_t keep = 0;
        for (size_t i = 0; i < ws.size(); ++i) {
            Watch w = ws[i];
            if (value_true(w.blocker)) { ws[keep++] = w; continue; }
            Clause& c = clauses_[w.clause];
            if (c.deleted) continue;
            int false_lit = neg(p);
            if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
            if (value_true(c.lits[0])) { ws[keep++] = {w.clause, c.lits[0]}; continue; }
            bool moved = false;
            for (size_t k = 2; k < c.lits.size(); ++k) {
                if (!value_false(c.lits[k])) {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[neg(c.lits[1])].push_back({w.clause, c.lits[0]});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[keep++] = w;  // unit or conflicting; keep the watch
            if (value_false(c.lits[0])) {
                // conflict: restore remaining watches
                for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                ws.resize(keep);
                qhead_ = trail_.size();
                return w.clause;
            }
            enqueue(c.lits[0], w.clause);
        }
        ws.resize(keep);
    }
    return -1;
}

void CdclSolver::bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_sift_up(heap_pos_[v]);
}

void CdclSolver::bump_clause(int clause_id) {
    Clause& c = clauses_[clause_id];
    c.act += 1.0;
}

void CdclSolver::decay() {
    var_inc_ /= var_decay_;
    if (var_decay_ < 0.95 && conflicts_ % 5000 == 0) var_decay_ += 0.01;
}

void CdclSolver::analyze(int confl, std::vector<int>& learnt, int& backtrack_level) {
    learnt.clear();
    learnt.push_back(0);  // placeholder for the asserting literal
    int counter = 0;
    int p = -1;
    size_t index = trail_.size();
    int current_level = (int)trail_lim_.size();

    while (true) {
        Clause& c = clauses_[confl];
        if (c.learnt) bump_clause(confl);
        for (size_t i = (p == -1 ? 0 : 1); i < c.lits.size(); ++i) {
            int q = c.lits[i];
            int v = var_of(q);
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = 1;
                bump_var(v);
                if (level_[v] >= current_level) ++counter;
                else learnt.push_back(q);
            }
        }
        while (!seen_[var_of(trail_[--index])]) {}
        p = trail_[index];
        seen_[var_of(p)] = 0;
        --counter;
        if (counter == 0) break;
        confl = reason_[var_of(p)];
    }
    learnt[0] = neg(p);

    // Clause minimization: drop literals implied by the rest.  Marks on
    // dropped literals must be cleared along with everything else.
    std::vector<int> stack, to_clear;
    for (int lit : learnt) to_clear.push_back(var_of(lit));
    size_t keep = 1;
    for (size_t i = 1; i < learnt.size(); ++i) {
        int v = var_of(learnt[i]);
        if (reason_[v] == -1 || !redundant(learnt[i], stack, to_clear))
            learnt[keep++] = learnt[i];
    }
    learnt.resize(keep);

    backtrack_level = 0;
    if (learnt.size() > 1) {
        size_t max_i = 1;
        for (size_t i = 2; i < learnt.size(); ++i)
            if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
        std::swap(learnt[1], learnt[max_i]);
        backtrack_level = level_[var_of(learnt[1])];
    }
    for (int v : to_clear) seen_[v] = 0;
}

// Distinct decision levels among the literals (timestamped scratch).
int CdclSolver::clause_lbd(const std::vector<int>& lits) {
    ++lbd_stamp_;
    if (lbd_mark_.size() < (size_t)nvars_ + 1) lbd_mark_.assign(nvars_ + 1, 0);
    int lbd = 0;
    for (int lit : lits) {
        int lvl = level_[var_of(lit)];
        if (lbd_mark_[lvl] != lbd_stamp_) {
            lbd_mark_[lvl] = lbd_stamp_;
            ++lbd;
        }
    }
    return lbd;
}

bool CdclSolver::redundant(int lit, std::vector<int>& stack,
                           std::vector<int>& to_clear) {
    stack.clear();
    stack.push_back(lit);
    size_t mark = to_clear.size();
    while (!stack.empty()) {
        int l = stack.back();
        stack.pop_back();
        const Clause& c = clauses_[reason_[var_of(l)]];
        for (size_t i = 1; i < c.lits.size(); ++i) {
            int q = c.lits[i];
            int v = var_of(q);
            if (seen_[v] || level_[v] == 0) continue;
            if (reason_[v] == -1) {
                for (size_t j = mark; j < to_clear.size(); ++j) seen_[to_clear[j]] = 0;
                to_clear.resize(mark);
                return false;
            }
            seen_[v] = 1;
            to_clear.push_back(v);
            stack.push_back(q);
        }
    }
    return true;
}

void CdclSolver::cancel_until(int level) {
    if ((int)trail_lim_.size() <= level) return;
    for (size_t i = trail_.size(); i-- > trail_lim_[level];) {
        int v = var_of(trail_[i]);
        phase_[v] = assign_[v];
        assign_[v] = -1;
        reason_[v] = -1;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
}

bool CdclSolver::heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

void CdclSolver::heap_insert(int v) {
    heap_pos_[v] = (int)heap_.size();
    heap_.push_back(v);
    heap_sift_up(heap_pos_[v]);
}

void CdclSolver::heap_sift_up(int pos) {
    int v = heap_[pos];
    while (pos > 0) {
        int parent = (pos - 1) / 2;
        if (!heap_less(v, heap_[parent])) break;
        heap_[pos] = heap_[parent];
        heap_pos_[heap_[pos]] = pos;
        pos = parent;
    }
    heap_[pos] = v;
    heap_pos_[v] = pos;
}

void CdclSolver::heap_sift_down(int pos) {
    int v = heap_[pos];
    size_t n = heap_.size();
    while (true) {
        size_t child = 2 * (size_t)pos + 1;
        if (child >= n) break;
        if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
        if (!heap_less(heap_[child], v)) break;
        heap_[pos] = heap_[child];
        heap_pos_[heap_[pos]] = pos;
        pos = (int)child;
    }
    heap_[pos] = v;
    heap_pos_[v] = pos;
}

int CdclSolver::pick_branch() {
    while (!heap_.empty()) {
        int v = heap_[0];
        int last = heap_.back();
        heap_.pop_back();
        heap_pos_[v] = -1;
        if (!heap_.empty() && v != last) {
            heap_[0] = last;
            heap_pos_[last] = 0;
            heap_sift_down(0);
        }
        if (assign_[v] < 0) return v;
    }
    return -1;
}

void CdclSolver::reduce_db() {
    std::vector<int> learnts;
    for (int i = 0; i < (int)clauses_.size(); ++i)
        if (clauses_[i].learnt && !clauses_[i].deleted && clauses_[i].lits.size() > 2 &&
            clauses_[i].lbd > 2)
            learnts.push_back(i);
    if (learnts.size() < learnt_limit_) return;
    std::sort(learnts.begin(), learnts.end(), [&](int a, int b) {
        if (clauses_[a].lbd != clauses_[b].lbd) return clauses_[a].lbd > clauses_[b].lbd;
        return clauses_[a].act < clauses_[b].act;
    });
    std::vector<char> locked(clauses_.size(), 0);
    for (int l : trail_) {
        int r = reason_[var_of(l)];
        if (r >= 0) locked[r] = 1;
    }
    size_t to_delete = learnts.size() / 2;
    for (size_t i = 0; i < learnts.size() && to_delete > 0; ++i) {
        if (locked[learnts[i]]) continue;
        clauses_[learnts[i]].deleted = true;
        --to_delete;
    }
    // rebuild watches without deleted clauses
    for (auto& ws : watches_) {
        size_t keep = 0;
        for (const Watch& w : ws)
            if (!clauses_[w.clause].deleted) ws[keep++] = w;
        ws.resize(keep);
    }
    learnt_limit_ = learnt_limit_ + learnt_limit_ / 2;
}

namespace {

uint64_t luby(uint64_t i) {
    // Luby sequence: 1 1 2 1 1 2 4 ...
    uint64_t k = 1;
    while ((1ULL << (k + 1)) <= i + 1) ++k;
    while ((1ULL << k) - 1 != i + 1) {
        i = i - ((1ULL << k) - 1) + 1 - 1;
        k = 1;
        while ((1ULL << (k + 1)) <= i + 1) ++k;
    }
    return 1ULL << (k - 1);
}

}  // namespace

SatResult CdclSolver::solve() {
    if (!ok_) return SatResult::unsat;
    cancel_until(0);
    if (propagate() != -1) { ok_ = false; return SatResult::unsat; }

    best_trail_ = 0;
    constexpr size_t kWindow = 64;
    lbd_window_.assign(kWindow, 0);
    lbd_pos_ = 0;
    lbd_window_sum_ = 0;
    lbd_mark_.assign(nvars_ + 1, 0);
    uint64_t local_conflicts = 0;

    while (true) {
        int confl = propagate();
        if (confl != -1) {
            ++conflicts_;
            ++local_conflicts;
            if (trail_lim_.empty()) { ok_ = false; return SatResult::unsat; }
            std::vector<int> learnt;
            int back_level = 0;
            analyze(confl, learnt, back_level);
            int lbd = clause_lbd(learnt);
            lbd_global_sum_ += lbd;
            if (local_conflicts <= kWindow) {
                lbd_window_[lbd_pos_] = lbd;
                lbd_window_sum_ += lbd;
            } else {
                lbd_window_sum_ += lbd - lbd_window_[lbd_pos_];
                lbd_window_[lbd_pos_] = lbd;
            }
            lbd_pos_ = (lbd_pos_ + 1) % kWindow;
            cancel_until(back_level);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                clauses_.push_back({var_inc_, lbd, true, false, learnt});
                int id = (int)clauses_.size() - 1;
                attach(id);
                enqueue(learnt[0], id);
            }
            decay();
        } else {
            if (trail_.size() > best_trail_) {
                best_trail_ = trail_.size();
                for (int lit : trail_) phase_[var_of(lit)] = assign_[var_of(lit)];
            }
            if (local_conflicts >= kWindow &&
                lbd_window_sum_ / kWindow * 0.8 >
                    lbd_global_sum_ / (double)conflicts_) {
                lbd_window_sum_ = 0;
                std::fill(lbd_window_.begin(), lbd_window_.end(), 0);
                local_conflicts = 0;
                cancel_until(0);
                continue;
            }
            reduce_db();
            int v = pick_branch();
            if (v < 0) {
                model_.assign(nvars_ + 1, 0);
                for (int i = 0; i < nvars_; ++i) model_[i + 1] = assign_[i];
                cancel_until(0);
                return SatResult::sat;
            }
            trail_lim_.push_back((int)trail_.size());
            enqueue(2 * v + (phase_[v] == 1 ? 0 : 1), -1);
        }
    }
}

bool CdclSolver::model_value(int var) const {
    if (var < 1 || var >= (int)model_.size()) throw std::out_of_range("sat: model index");
    return model_[var] == 1;
}

ExternalSolveOutcome solve_with_external(const std::string& solver_path,
                                         const std::string& dimacs_path) {
    ExternalSolveOutcome out;
    std::string cmd = solver_path + " " + dimacs_path + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        out.diagnostics = "could not start solver: " + cmd;
        return out;
    }
    std::string text;
    char buf[4096];
    while (size_t got = fread(buf, 1, sizeof buf, pipe)) text.append(buf, got);
    pclose(pipe);

    std::istringstream in(text);
    std::string line;
    std::vector<int> lits;
    bool got_sat = false, got_unsat = false;
    while (std::getline(in, line)) {
        if (line.rfind("s SATISFIABLE", 0) == 0) got_sat = true;
        else if (line.rfind("s UNSATISFIABLE", 0) == 0) got_unsat = true;
        else if (!line.empty() && line[0] == 'v') {
            std::istringstream vs(line.substr(1));
            int lit;
            while (vs >> lit)
                if (lit != 0) lits.push_back(lit);
        }
    }
    if (got_unsat) {
        out.solved = true;
        out.result = SatResult::unsat;
        return out;
    }
    if (got_sat) {
        out.solved = true;
        out.result = SatResult::sat;
        int maxvar = 0;
        for (int l : lits) maxvar = std::max(maxvar, std::abs(l));
        out.model.assign(maxvar + 1, 0);
        for (int l : lits) out.model[std::abs(l)] = l > 0 ? 1 : 0;
        return out;
    }
    out.diagnostics = "solver output had no verdict line; instance kept at " +
                      dimacs_path + "\n" + text.substr(0, 2000);
    return out;
}

}  // namespace ostra
