#include "skolem/sat.hpp"

#include <algorithm>
#include <cmath>

#include "skolem/error.hpp"

namespace skolem {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

uint64_t splitmix(uint64_t& s) {
  uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

Solver::Solver(SolverOptions opts) : opts_(opts), rng_state_(opts.seed) {}

Var Solver::new_var() {
  uint32_t v = static_cast<uint32_t>(assigns_.size());
  assigns_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  polarity_.push_back(1);  // 1 = prefer negative
  double jitter = opts_.seed ? static_cast<double>(splitmix(rng_state_) >> 11) * 0x1.0p-53 * 1e-5 : 0.0;
  activity_.push_back(jitter);
  seen_.push_back(0);
  heap_index_.push_back(-1);
  unit_id_.push_back(kNoReason);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return static_cast<Var>(v) + 1;
}

void Solver::ensure_vars(int n) {
  while (num_vars() < n) new_var();
}

uint32_t Solver::log_axiom(const std::vector<ILit>& lits) {
  ProofEntry e;
  for (ILit l : lits) e.lits.push_back(to_lit(l));
  std::sort(e.lits.begin(), e.lits.end());
  proof_log_.push_back(std::move(e));
  return static_cast<uint32_t>(proof_log_.size() - 1);
}

void Solver::derive_empty(uint32_t confl) {
  ok_ = false;
  if (!opts_.proof) return;
  ProofEntry e;
  e.axiom = false;
  e.start = clauses_[confl].proof_id;
  for (ILit q : clauses_[confl].lits) e.chain.push_back({static_cast<Var>(q >> 1) + 1, unit_proof(q >> 1)});
  proof_log_.push_back(std::move(e));
  empty_id_ = static_cast<uint32_t>(proof_log_.size() - 1);
}

uint32_t Solver::unit_proof(uint32_t v) { return unit_id_[v]; }

void Solver::enqueue(ILit l, uint32_t reason) {
  uint32_t v = l >> 1;
  assigns_[v] = static_cast<uint8_t>(!(l & 1));
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
  if (opts_.proof && decision_level() == 0 && reason != kNoReason) {
    const ClauseRec& c = clauses_[reason];
    if (c.lits.size() == 1) {
      unit_id_[v] = c.proof_id;
    } else {
      ProofEntry e;
      e.axiom = false;
      e.lits = {to_lit(l)};
      e.start = c.proof_id;
      for (std::size_t i = 1; i < c.lits.size(); ++i)
        e.chain.push_back({static_cast<Var>(c.lits[i] >> 1) + 1, unit_id_[c.lits[i] >> 1]});
      proof_log_.push_back(std::move(e));
      unit_id_[v] = static_cast<uint32_t>(proof_log_.size() - 1);
    }
  }
}

void Solver::attach(uint32_t cref) {
  const ClauseRec& c = clauses_[cref];
  watches_[c.lits[0]].push_back({cref, c.lits[1]});
  watches_[c.lits[1]].push_back({cref, c.lits[0]});
}

bool Solver::add_clause(std::span<const Lit> in) {
  if (!ok_) return false;
  cancel_until(0);
  std::vector<ILit> lits;
  for (Lit l : in) {
    if (l.var() <= 0) throw InvalidArgument("literal with variable id 0");
    ensure_vars(l.var());
    lits.push_back(to_ilit(l));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if ((lits[i] ^ 1u) == lits[i - 1]) return true;  // tautology
  for (ILit l : lits)
    if (value(l) == kTrue) return true;
  // Non-false literals first.
  std::stable_partition(lits.begin(), lits.end(), [&](ILit l) { return value(l) != kFalse; });
  std::size_t live = 0;
  while (live < lits.size() && value(lits[live]) != kFalse) ++live;
  if (!opts_.proof) lits.resize(live);

  ClauseRec rec;
  rec.lits = lits;
  if (opts_.proof) rec.proof_id = log_axiom(lits);
  uint32_t cref = static_cast<uint32_t>(clauses_.size());
  clauses_.push_back(std::move(rec));
  if (live == 0) {
    derive_empty(cref);
    return false;
  }
  if (clauses_[cref].lits.size() >= 2) attach(cref);
  if (live == 1) {
    enqueue(clauses_[cref].lits[0], cref);
    uint32_t confl = propagate();
    if (confl != kNoReason) {
      derive_empty(confl);
      return false;
    }
  }
  return true;
}

void Solver::add_cnf(const Cnf& cnf) {
  ensure_vars(cnf.num_vars());
  for (const auto& c : cnf.clauses()) add_clause(c);
}

uint32_t Solver::propagate() {
  uint32_t confl = kNoReason;
  while (qhead_ < trail_.size()) {
    ILit p = trail_[qhead_++];
    ILit false_lit = p ^ 1u;
    auto& ws = watches_[false_lit];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseRec& c = clauses_[w.cref];
      if (c.deleted) {
        ++i;
        continue;
      }
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      ++i;
      ILit first = c.lits[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool found = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != kFalse) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1]].push_back({w.cref, first});
          found = true;
          break;
        }
      }
      if (found) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == kFalse) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoReason) break;
  }
  return confl;
}

void Solver::bump_var(uint32_t v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(ClauseRec& c) {
  if ((c.activity += cla_inc_) > 1e20) {
    for (uint32_t r : learnts_) clauses_[r].activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Solver::analyze(uint32_t confl, std::vector<ILit>& out, int& bt_level, ProofEntry* entry) {
  out.clear();
  out.push_back(0);
  std::vector<uint32_t> level0;
  int path = 0;
  ILit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  if (entry) entry->start = clauses_[confl].proof_id;
  do {
    ClauseRec& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t j = have_p ? 1 : 0; j < c.lits.size(); ++j) {
      ILit q = c.lits[j];
      uint32_t v = q >> 1;
      if (seen_[v]) continue;
      if (level(v) > 0) {
        seen_[v] = 1;
        bump_var(v);
        if (level(v) >= decision_level()) ++path;
        else out.push_back(q);
      } else if (entry) {
        seen_[v] = 2;
        level0.push_back(v);
      }
    }
    while (seen_[trail_[--index] >> 1] != 1) {
    }
    p = trail_[index];
    have_p = true;
    confl = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --path;
    if (path > 0 && entry) entry->chain.push_back({static_cast<Var>(p >> 1) + 1, clauses_[confl].proof_id});
  } while (path > 0);
  out[0] = p ^ 1u;

  if (!entry) {
    // Recursive minimization.
    uint32_t abstract = 0;
    for (std::size_t i = 1; i < out.size(); ++i) abstract |= 1u << (level(out[i] >> 1) & 31);
    analyze_toclear_ = out;
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      uint32_t v = out[i] >> 1;
      if (reason_[v] == kNoReason || !lit_redundant(out[i], abstract)) out[j++] = out[i];
    }
    out.resize(j);
    for (ILit l : analyze_toclear_) seen_[l >> 1] = 0;
  } else {
    for (std::size_t i = 1; i < out.size(); ++i) seen_[out[i] >> 1] = 0;
    for (uint32_t v : level0) {
      entry->chain.push_back({static_cast<Var>(v) + 1, unit_id_[v]});
      seen_[v] = 0;
    }
  }

  if (out.size() == 1) {
    bt_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < out.size(); ++i)
      if (level(out[i] >> 1) > level(out[max_i] >> 1)) max_i = i;
    std::swap(out[1], out[max_i]);
    bt_level = level(out[1] >> 1);
  }
}

bool Solver::lit_redundant(ILit p, uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    uint32_t r = reason_[analyze_stack_.back() >> 1];
    analyze_stack_.pop_back();
    const ClauseRec& c = clauses_[r];
    for (std::size_t i = 1; i < c.lits.size(); ++i) {
      ILit q = c.lits[i];
      uint32_t v = q >> 1;
      if (seen_[v] || level(v) == 0) continue;
      if (reason_[v] != kNoReason && (abstract_levels & (1u << (level(v) & 31)))) {
        seen_[v] = 1;
        analyze_stack_.push_back(q);
        analyze_toclear_.push_back(q);
      } else {
        for (std::size_t k = top; k < analyze_toclear_.size(); ++k) seen_[analyze_toclear_[k] >> 1] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::analyze_final(ILit p) {
  failed_.clear();
  failed_.push_back(to_lit(p ^ 1u));
  if (decision_level() == 0) return;
  seen_[p >> 1] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    uint32_t v = trail_[i] >> 1;
    if (!seen_[v]) continue;
    if (reason_[v] == kNoReason) {
      if (v != (p >> 1)) failed_.push_back(to_lit(trail_[i]));
    } else {
      const ClauseRec& c = clauses_[reason_[v]];
      for (std::size_t j = 1; j < c.lits.size(); ++j)
        if (level(c.lits[j] >> 1) > 0) seen_[c.lits[j] >> 1] = 1;
    }
    seen_[v] = 0;
  }
  seen_[p >> 1] = 0;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    uint32_t v = trail_[i] >> 1;
    assigns_[v] = kUndef;
    reason_[v] = kNoReason;
    polarity_[v] = trail_[i] & 1;
    heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  qhead_ = trail_.size();
  trail_lim_.resize(lvl);
}

Solver::ILit Solver::pick_branch() {
  while (!heap_.empty()) {
    uint32_t v = heap_pop();
    if (assigns_[v] == kUndef) return 2 * v + polarity_[v];
  }
  return UINT32_MAX;
}

void Solver::heap_insert(uint32_t v) {
  if (heap_index_[v] >= 0) return;
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  uint32_t v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) >> 1;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  uint32_t v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

uint32_t Solver::heap_pop() {
  uint32_t top = heap_[0];
  heap_index_[top] = -1;
  uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return top;
}

void Solver::reduce_db() {
  std::vector<uint32_t> cand;
  for (uint32_t r : learnts_) {
    const ClauseRec& c = clauses_[r];
    bool locked = reason_[c.lits[0] >> 1] == r && value(c.lits[0]) == kTrue;
    if (!locked && c.lbd > 2 && c.lits.size() > 2) cand.push_back(r);
  }
  std::sort(cand.begin(), cand.end(), [&](uint32_t a, uint32_t b) {
    if (clauses_[a].lbd != clauses_[b].lbd) return clauses_[a].lbd > clauses_[b].lbd;
    return clauses_[a].activity < clauses_[b].activity;
  });
  cand.resize(cand.size() / 2);
  for (uint32_t r : cand) {
    clauses_[r].deleted = true;
    clauses_[r].lits.clear();
    clauses_[r].lits.shrink_to_fit();
  }
  std::erase_if(learnts_, [&](uint32_t r) { return clauses_[r].deleted; });
  for (auto& ws : watches_) std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
}

int Solver::search(int64_t nof_conflicts, std::span<const Lit> assumptions) {
  int64_t conflicts_here = 0;
  std::vector<ILit> learnt;
  for (;;) {
    uint32_t confl = propagate();
    if (confl != kNoReason) {
      ++stats_.conflicts;
      ++conflicts_here;
      if (decision_level() == 0) {
        derive_empty(confl);
        return 0;
      }
      int bt = 0;
      ProofEntry entry;
      entry.axiom = false;
      analyze(confl, learnt, bt, opts_.proof ? &entry : nullptr);
      cancel_until(bt);
      ClauseRec rec;
      rec.lits = learnt;
      rec.learnt = true;
      {
        std::vector<int> lv;
        for (ILit l : learnt) lv.push_back(level(l >> 1));
        std::sort(lv.begin(), lv.end());
        rec.lbd = static_cast<uint32_t>(std::unique(lv.begin(), lv.end()) - lv.begin());
      }
      if (opts_.proof) {
        for (ILit l : learnt) entry.lits.push_back(to_lit(l));
        std::sort(entry.lits.begin(), entry.lits.end());
        proof_log_.push_back(std::move(entry));
        rec.proof_id = static_cast<uint32_t>(proof_log_.size() - 1);
      }
      uint32_t cref = static_cast<uint32_t>(clauses_.size());
      clauses_.push_back(std::move(rec));
      if (learnt.size() >= 2) {
        attach(cref);
        learnts_.push_back(cref);
        bump_clause(clauses_[cref]);
      }
      enqueue(learnt[0], cref);
      var_inc_ /= 0.95;
      cla_inc_ /= 0.999;

      if (budget_end_ && stats_.conflicts >= budget_end_) {
        cancel_until(0);
        throw ResourceLimit("conflict budget exhausted");
      }
      if (has_deadline_ && (stats_.conflicts & 63) == 0 && std::chrono::steady_clock::now() > deadline_) {
        cancel_until(0);
        throw ResourceLimit("time limit exceeded");
      }
    } else {
      if (nof_conflicts >= 0 && conflicts_here >= nof_conflicts) {
        cancel_until(0);
        return -1;
      }
      if (stats_.conflicts - conflicts_at_reduce_ >= reduce_interval_) {
        conflicts_at_reduce_ = stats_.conflicts;
        reduce_interval_ += 300;
        reduce_db();
      }
      ILit next = UINT32_MAX;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        ILit a = to_ilit(assumptions[static_cast<std::size_t>(decision_level())]);
        if (value(a) == kTrue) {
          trail_lim_.push_back(trail_.size());
        } else if (value(a) == kFalse) {
          analyze_final(a ^ 1u);
          return 0;
        } else {
          next = a;
          break;
        }
      }
      if (next == UINT32_MAX) {
        ++stats_.decisions;
        if (has_deadline_ && (stats_.decisions & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
          cancel_until(0);
          throw ResourceLimit("time limit exceeded");
        }
        next = pick_branch();
        if (next == UINT32_MAX) return 1;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }
}

bool Solver::solve(std::span<const Lit> assumptions) {
  failed_.clear();
  model_.clear();
  ++stats_.solves;
  if (!ok_) return false;
  for (Lit a : assumptions) ensure_vars(a.var());
  cancel_until(0);
  has_deadline_ = opts_.time_limit > 0;
  if (has_deadline_)
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::microseconds(static_cast<int64_t>(opts_.time_limit * 1e6));
  budget_end_ = opts_.conflict_budget ? stats_.conflicts + opts_.conflict_budget : 0;
  int status = -1;
  for (int restart = 0; status == -1; ++restart) {
    status = search(static_cast<int64_t>(luby(2, restart) * 100), assumptions);
    if (status == -1) ++stats_.restarts;
  }
  if (status == 1) {
    model_.resize(assigns_.size());
    for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
  }
  cancel_until(0);
  return status == 1;
}

bool Solver::model_value(Var v) const {
  if (v <= 0 || static_cast<std::size_t>(v) > model_.size()) return false;
  return model_[static_cast<std::size_t>(v - 1)];
}

}  // namespace skolem
