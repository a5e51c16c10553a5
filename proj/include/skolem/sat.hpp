#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skolem/cnf.hpp"

namespace skolem {

/// One entry of the solver's proof log. An axiom is an input clause; a derived
/// clause is obtained from `start` by resolving, in order, with each premise on
/// the given pivot variable.
struct ProofEntry {
  struct Step {
    Var pivot;
    uint32_t premise;
  };
  std::vector<Lit> lits;
  bool axiom = true;
  uint32_t start = 0;
  std::vector<Step> chain;
};

struct SolverOptions {
  bool proof = false;
  /// 0 = unlimited. Counted per `solve` call.
  uint64_t conflict_budget = 0;
  /// Wall-clock limit per `solve` call in seconds; 0 = unlimited.
  double time_limit = 0;
  uint64_t seed = 0;
};

struct SolverStats {
  uint64_t solves = 0, conflicts = 0, decisions = 0, propagations = 0, restarts = 0;
};

/// CDCL solver: two watched literals, VSIDS, phase saving, Luby restarts,
/// LBD-based clause deletion. In proof mode every learned clause is logged as
/// a resolution chain and clause minimization is off.
class Solver {
 public:
  explicit Solver(SolverOptions opts = {});
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  int num_vars() const { return static_cast<int>(assigns_.size()); }
  Var new_var();
  void ensure_vars(int n);

  /// Adds a clause (backtracks to level 0 first). Returns false once the
  /// clause set is known unsatisfiable.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }
  void add_cnf(const Cnf& cnf);

  /// True = sat. Throws ResourceLimit when a budget runs out.
  bool solve(std::span<const Lit> assumptions = {});
  bool okay() const { return ok_; }

  /// Value of `v` in the last model (false for variables never constrained).
  bool model_value(Var v) const;
  const std::vector<bool>& model() const { return model_; }
  /// Assumptions responsible for the last unsat answer (subset, negated form not applied).
  const std::vector<Lit>& failed_assumptions() const { return failed_; }

  const SolverStats& stats() const { return stats_; }
  void set_conflict_budget(uint64_t b) { opts_.conflict_budget = b; }
  void set_time_limit(double seconds) { opts_.time_limit = seconds; }

  /// Proof mode only.
  const std::vector<ProofEntry>& proof() const { return proof_log_; }
  /// Id of the empty clause once unsat has been derived without assumptions.
  std::optional<uint32_t> empty_clause() const { return empty_id_; }

 private:
  // Internal literal: 2*var + sign, var 0-based.
  using ILit = uint32_t;
  static constexpr uint32_t kNoReason = UINT32_MAX;
  static constexpr uint8_t kTrue = 1, kFalse = 0, kUndef = 2;

  struct ClauseRec {
    std::vector<ILit> lits;
    bool learnt = false;
    bool deleted = false;
    uint32_t lbd = 0;
    double activity = 0;
    uint32_t proof_id = 0;
  };
  struct Watcher {
    uint32_t cref;
    ILit blocker;
  };

  static ILit to_ilit(Lit l) { return 2u * static_cast<uint32_t>(l.var() - 1) + (l.negative() ? 1u : 0u); }
  static Lit to_lit(ILit l) { return Lit(static_cast<Var>(l >> 1) + 1, l & 1); }
  uint8_t value(ILit l) const {
    uint8_t a = assigns_[l >> 1];
    return a == kUndef ? kUndef : static_cast<uint8_t>(a ^ (l & 1));
  }
  int level(uint32_t v) const { return level_[v]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(ILit l, uint32_t reason);
  uint32_t propagate();
  void analyze(uint32_t confl, std::vector<ILit>& out, int& bt_level, ProofEntry* entry);
  bool lit_redundant(ILit p, uint32_t abstract_levels);
  void analyze_final(ILit p);
  void cancel_until(int lvl);
  ILit pick_branch();
  void attach(uint32_t cref);
  void reduce_db();
  void bump_var(uint32_t v);
  void bump_clause(ClauseRec& c);
  uint32_t unit_proof(uint32_t v);
  uint32_t log_axiom(const std::vector<ILit>& lits);
  void derive_empty(uint32_t confl);
  int search(int64_t nof_conflicts, std::span<const Lit> assumptions);

  // heap over variables keyed by activity
  void heap_insert(uint32_t v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  uint32_t heap_pop();

  SolverOptions opts_;
  SolverStats stats_;
  bool ok_ = true;
  std::vector<uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<uint32_t> reason_;
  std::vector<uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<uint8_t> seen_;
  std::vector<int> heap_index_;
  std::vector<uint32_t> heap_;
  std::vector<uint32_t> unit_id_;  // proof id of the level-0 unit for a var
  std::vector<ClauseRec> clauses_;
  std::vector<uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<ILit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1, cla_inc_ = 1;
  uint64_t rng_state_;
  uint64_t conflicts_at_reduce_ = 0;
  uint64_t reduce_interval_ = 2000;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_ = false;
  uint64_t budget_end_ = 0;
  std::vector<ILit> analyze_stack_, analyze_toclear_;

  std::vector<bool> model_;
  std::vector<Lit> failed_;
  std::vector<ProofEntry> proof_log_;
  std::optional<uint32_t> empty_id_;
};

}  // namespace skolem
