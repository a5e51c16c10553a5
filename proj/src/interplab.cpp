#include "skolem/interplab.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "skolem/error.hpp"
#include "skolem/sat.hpp"
#include "skolem/tseitin.hpp"

namespace skolem {

namespace {

struct ClauseHash {
  std::size_t operator()(const Clause& c) const {
    std::size_t h = c.size();
    for (Lit l : c) h = h * 0x100000001B3ull ^ static_cast<std::size_t>(static_cast<uint32_t>(l.dimacs()));
    return h;
  }
};

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Phi0: return "phi0";
    case Origin::Phi1: return "phi1";
    case Origin::Shared: return "shared";
  }
  return "shared";
}

// Binary steps for the cone of the empty clause in the solver log.
ResolutionProof expand_log(const std::vector<ProofEntry>& log, uint32_t empty) {
  std::vector<char> need(log.size(), 0);
  need[empty] = 1;
  for (std::size_t i = empty + 1; i-- > 0;) {
    if (!need[i] || log[i].axiom) continue;
    need[log[i].start] = 1;
    for (const auto& s : log[i].chain) need[s.premise] = 1;
  }
  ResolutionProof proof;
  std::vector<uint32_t> step_of(log.size(), 0);
  for (std::size_t i = 0; i <= empty; ++i) {
    if (!need[i]) continue;
    const ProofEntry& e = log[i];
    if (e.axiom) {
      ProofStep s;
      s.clause = e.lits;
      step_of[i] = static_cast<uint32_t>(proof.steps.size());
      proof.steps.push_back(std::move(s));
      continue;
    }
    uint32_t cur = step_of[e.start];
    for (const auto& ch : e.chain) {
      uint32_t prem = step_of[ch.premise];
      const Clause& a = proof.steps[cur].clause;
      bool cur_pos = std::binary_search(a.begin(), a.end(), pos(ch.pivot));
      ProofStep s;
      s.axiom = false;
      s.pivot = ch.pivot;
      s.left = cur_pos ? cur : prem;
      s.right = cur_pos ? prem : cur;
      auto r = resolve(proof.steps[s.left].clause, proof.steps[s.right].clause, ch.pivot);
      if (!r) throw Error("solver proof log: bad chain step on variable " + std::to_string(ch.pivot));
      s.clause = std::move(*r);
      cur = static_cast<uint32_t>(proof.steps.size());
      proof.steps.push_back(std::move(s));
    }
    step_of[i] = cur;
  }
  // The empty clause must be last.
  if (step_of[empty] + 1 != proof.steps.size()) throw Error("solver proof log: empty clause not last");
  return proof;
}

}  // namespace

std::size_t ResolutionProof::width() const {
  std::size_t w = 0;
  for (const auto& s : steps) w = std::max(w, s.clause.size());
  return w;
}

std::size_t ResolutionProof::resolutions() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const ProofStep& s) { return !s.axiom; }));
}

std::optional<Clause> resolve(const Clause& left, const Clause& right, Var pivot) {
  if (!std::binary_search(left.begin(), left.end(), pos(pivot)) ||
      !std::binary_search(right.begin(), right.end(), neg(pivot)))
    return std::nullopt;
  Clause out;
  out.reserve(left.size() + right.size());
  std::size_t i = 0, j = 0;
  auto push = [&](Lit l) {
    if (l.var() == pivot) return true;
    if (!out.empty() && out.back().var() == l.var()) {
      if (out.back() != l) return false;
      return true;
    }
    out.push_back(l);
    return true;
  };
  while (i < left.size() || j < right.size()) {
    Lit l = (j == right.size() || (i < left.size() && left[i] < right[j])) ? left[i++] : right[j++];
    if (!push(l)) return std::nullopt;
  }
  return out;
}

ProofResult solve_with_proof(const Cnf& cnf, double time_limit, uint64_t conflict_budget) {
  SolverOptions o;
  o.proof = true;
  o.time_limit = time_limit;
  o.conflict_budget = conflict_budget;
  Solver s(o);
  s.ensure_vars(cnf.num_vars());
  for (const auto& c : cnf.clauses())
    if (!s.add_clause(c)) break;
  ProofResult r;
  if (s.okay() && s.solve()) {
    r.sat = true;
    r.model = Assignment(cnf.num_vars());
    for (Var v = 1; v <= cnf.num_vars(); ++v) r.model.set(v, s.model_value(v));
    return r;
  }
  if (!s.empty_clause()) throw Error("solver reported unsat without an empty clause");
  r.proof = expand_log(s.proof(), *s.empty_clause());
  return r;
}

ProofCheck check_proof(const Cnf& cnf, const ResolutionProof& proof) {
  std::unordered_set<Clause, ClauseHash> axioms(cnf.clauses().begin(), cnf.clauses().end());
  ProofCheck r;
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const ProofStep& s = proof.steps[i];
    r.bad_step = i;
    if (!std::is_sorted(s.clause.begin(), s.clause.end())) {
      r.reason = "clause not sorted";
      return r;
    }
    if (s.axiom) {
      if (!axioms.count(s.clause)) {
        r.reason = "axiom not in the formula";
        return r;
      }
      continue;
    }
    if (s.left >= i || s.right >= i) {
      r.reason = "premise does not precede the step";
      return r;
    }
    auto res = resolve(proof.steps[s.left].clause, proof.steps[s.right].clause, s.pivot);
    if (!res) {
      r.reason = "premises do not resolve on the pivot";
      return r;
    }
    if (*res != s.clause) {
      r.reason = "resolvent differs from the recorded clause";
      return r;
    }
  }
  if (!proof.refutes()) {
    r.bad_step = proof.steps.size();
    r.reason = "last step is not the empty clause";
    return r;
  }
  r.ok = true;
  r.reason.clear();
  return r;
}

Cnf InterpolationInstance::conjunction() const {
  Cnf out(std::max(phi0.num_vars(), phi1.num_vars()));
  for (const auto& c : phi0.clauses()) out.add_clause_unchecked(c);
  for (const auto& c : phi1.clauses()) out.add_clause_unchecked(c);
  return out;
}

void InterpolationInstance::validate() const {
  std::unordered_map<Var, char> part;
  auto mark = [&](const std::vector<Var>& vs, char p) {
    for (Var v : vs)
      if (!part.emplace(v, p).second) throw InvalidArgument("variable " + std::to_string(v) + " in two partitions");
  };
  mark(a, 'a');
  mark(b, 'b');
  mark(c, 'c');
  auto check = [&](const Cnf& f, char own, const char* name) {
    for (const auto& cl : f.clauses())
      for (Lit l : cl) {
        auto it = part.find(l.var());
        if (it == part.end() || (it->second != own && it->second != 'c'))
          throw InvalidArgument(std::string(name) + " mentions variable " + std::to_string(l.var()) +
                                " outside its partitions");
      }
  };
  check(phi0, 'a', "phi0");
  check(phi1, 'b', "phi1");
}

ProofResult solve_instance(const InterpolationInstance& inst, double time_limit, uint64_t conflict_budget) {
  ProofResult r = solve_with_proof(inst.conjunction(), time_limit, conflict_budget);
  if (r.sat) return r;
  std::unordered_set<Clause, ClauseHash> in0(inst.phi0.clauses().begin(), inst.phi0.clauses().end());
  std::unordered_set<Clause, ClauseHash> in1(inst.phi1.clauses().begin(), inst.phi1.clauses().end());
  for (auto& s : r.proof.steps) {
    if (!s.axiom) continue;
    bool a = in0.count(s.clause), b = in1.count(s.clause);
    s.origin = a && b ? Origin::Shared : a ? Origin::Phi0 : Origin::Phi1;
  }
  return r;
}

Circuit extract_interpolant(const InterpolationInstance& inst, const ResolutionProof& proof) {
  if (!proof.refutes()) throw InvalidArgument("proof does not end in the empty clause");
  std::unordered_map<Var, char> part;
  for (Var v : inst.a) part[v] = 'a';
  for (Var v : inst.b) part[v] = 'b';
  for (Var v : inst.c) part[v] = 'c';
  std::unordered_set<Clause, ClauseHash> in0(inst.phi0.clauses().begin(), inst.phi0.clauses().end());
  std::unordered_set<Clause, ClauseHash> in1(inst.phi1.clauses().begin(), inst.phi1.clauses().end());

  CircuitBuilder b;
  std::vector<NodeId> node(proof.steps.size());
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const ProofStep& s = proof.steps[i];
    if (s.axiom) {
      bool ok = s.origin == Origin::Phi1 ? in1.count(s.clause) > 0
                : s.origin == Origin::Phi0 ? in0.count(s.clause) > 0
                                           : in0.count(s.clause) > 0 && in1.count(s.clause) > 0;
      if (!ok)
        throw InvalidArgument("axiom " + std::to_string(i + 1) + " is not a clause of " + origin_name(s.origin));
      node[i] = b.constant(s.origin == Origin::Phi1);
      continue;
    }
    auto it = part.find(s.pivot);
    if (it == part.end()) throw InvalidArgument("pivot " + std::to_string(s.pivot) + " outside A, B and C");
    NodeId l = node[s.left], r = node[s.right];
    switch (it->second) {
      case 'a': node[i] = b.lor(l, r); break;
      case 'b': node[i] = b.land(l, r); break;
      default: node[i] = b.mux(b.input(s.pivot), r, l); break;
    }
  }
  b.add_output(node.back());
  return b.finish();
}

InterpolationInstance bphp_interpolation_pair(const BphpParams& p) {
  const int k = p.k, m = p.m;
  if (m < 1 || m > 20 || k < 2) throw InvalidArgument("bphp pair needs m >= 1 and k >= 2");
  InterpolationInstance inst;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) inst.c.push_back(bphp_x(p, i, j));
  Var next = k * m;
  std::vector<std::pair<int, int>> pairs;
  for (int i1 = 0; i1 < k; ++i1)
    for (int i2 = i1 + 1; i2 < k; ++i2) pairs.emplace_back(i1, i2);
  auto X = [&](int i, int j) { return bphp_x(p, i, j); };

  for (int b = 0; b < 2; ++b) {
    Cnf& f = b ? inst.phi1 : inst.phi0;
    std::vector<Var>& side = b ? inst.b : inst.a;
    auto fresh = [&] {
      side.push_back(++next);
      return next;
    };
    // e ↔ (u ↔ v)
    auto iff_def = [&](Var e, Var u, Var v) {
      f.add_clause({neg(e), neg(u), pos(v)});
      f.add_clause({neg(e), pos(u), neg(v)});
      f.add_clause({pos(e), pos(u), pos(v)});
      f.add_clause({pos(e), neg(u), neg(v)});
    };
    std::vector<Var> y(static_cast<std::size_t>(m), 0);
    for (int j = 1; j < m; ++j) y[j] = fresh();

    for (uint64_t h = 0; h < (uint64_t{1} << m); ++h) {
      auto hb = [&](int j) { return ((h >> (m - 1 - j)) & 1) != 0; };
      if (hb(0) != (b != 0)) continue;
      for (auto [i1, i2] : pairs) {
        Clause c;
        for (int j = 0; j < m; ++j) {
          c.push_back(Lit(X(i1, j), hb(j)));
          c.push_back(Lit(X(i2, j), hb(j)));
          if (j > 0) c.push_back(Lit(y[j], hb(j)));
        }
        f.add_clause(std::move(c));
      }
    }

    // Y_j = 0 iff some pair shares a hole with prefix (b, Y_2..Y_{j-1}, 0).
    std::map<std::pair<int, int>, Var> e_of, d_of;
    auto e_var = [&](int i, int t) {
      auto [it, fresh_entry] = e_of.try_emplace({i, t}, 0);
      if (fresh_entry) {
        it->second = fresh();
        iff_def(it->second, X(i, t), y[t]);
      }
      return it->second;
    };
    auto d_var = [&](std::size_t pi, int t) {
      auto [it, fresh_entry] = d_of.try_emplace({static_cast<int>(pi), t}, 0);
      if (fresh_entry) {
        it->second = fresh();
        iff_def(it->second, X(pairs[pi].first, t), X(pairs[pi].second, t));
      }
      return it->second;
    };
    for (int j = 1; j < m; ++j) {
      std::vector<Var> cs;
      for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        auto [i1, i2] = pairs[pi];
        std::vector<Lit> conds;
        for (int i : {i1, i2}) {
          conds.push_back(Lit(X(i, 0), b == 0));
          for (int t = 1; t < j; ++t) conds.push_back(pos(e_var(i, t)));
          conds.push_back(neg(X(i, j)));
        }
        for (int t = j + 1; t < m; ++t) conds.push_back(pos(d_var(pi, t)));
        Var c = fresh();
        Clause back{pos(c)};
        for (Lit l : conds) {
          f.add_clause({neg(c), l});
          back.push_back(~l);
        }
        f.add_clause(std::move(back));
        cs.push_back(c);
      }
      Clause some{pos(y[j])};
      for (Var c : cs) {
        some.push_back(pos(c));
        f.add_clause({neg(y[j]), neg(c)});
      }
      f.add_clause(std::move(some));
    }
  }
  inst.phi0.ensure_vars(next);
  inst.phi1.ensure_vars(next);
  return inst;
}

WidthResult bounded_width_refute(const Cnf& cnf, int w, std::size_t max_clauses) {
  if (w < 0) throw InvalidArgument("width bound must be non-negative");
  struct Node {
    Clause clause;
    uint32_t left = 0, right = 0;
    Var pivot = 0;  // 0 for axioms
  };
  std::vector<Node> nodes;
  std::unordered_map<Clause, uint32_t, ClauseHash> seen;
  std::vector<std::vector<uint32_t>> queue;  // by width
  int nv = cnf.num_vars();
  std::vector<std::vector<uint32_t>> occ(2 * static_cast<std::size_t>(nv) + 2);
  auto slot = [](Lit l) { return 2 * static_cast<std::size_t>(l.var()) + (l.negative() ? 1 : 0); };
  std::optional<uint32_t> empty;

  // A proper subset of c is already present (only checked up to 14 literals).
  Clause sub;
  auto subsumed = [&](const Clause& c) {
    if (c.size() > 14) return false;
    for (uint32_t mask = 0; mask + 1 < (1u << c.size()); ++mask) {
      sub.clear();
      for (std::size_t i = 0; i < c.size(); ++i)
        if (mask >> i & 1) sub.push_back(c[i]);
      if (seen.count(sub)) return true;
    }
    return false;
  };
  auto add = [&](Clause c, uint32_t l, uint32_t r, Var pv) {
    if (seen.count(c) || subsumed(c)) return;
    if (nodes.size() >= max_clauses)
      throw ResourceLimit("width saturation exceeded " + std::to_string(max_clauses) + " clauses at w = " +
                          std::to_string(w));
    uint32_t id = static_cast<uint32_t>(nodes.size());
    seen.emplace(c, id);
    if (queue.size() <= c.size()) queue.resize(c.size() + 1);
    queue[c.size()].push_back(id);
    if (c.empty()) empty = id;
    nodes.push_back({std::move(c), l, r, pv});
  };
  for (const auto& c : cnf.clauses()) {
    Clause n = c;
    if (normalize_clause(n)) add(std::move(n), 0, 0, 0);
    if (empty) break;
  }

  std::size_t level = 0;
  std::vector<std::size_t> head;
  while (!empty) {
    head.resize(queue.size(), 0);
    level = 0;
    while (level < queue.size() && head[level] >= queue[level].size()) ++level;
    if (level == queue.size()) break;
    uint32_t g = queue[level][head[level]++];
    Clause gc = nodes[g].clause;  // nodes may grow
    if (subsumed(gc)) continue;
    for (Lit l : gc) {
      // Partners: processed clauses containing ~l. Copy the list size first;
      // g itself is not yet in occ.
      const auto& partners = occ[slot(~l)];
      for (std::size_t pi = 0; pi < partners.size() && !empty; ++pi) {
        uint32_t h = partners[pi];
        uint32_t left = l.negative() ? h : g, right = l.negative() ? g : h;
        auto r = resolve(nodes[left].clause, nodes[right].clause, l.var());
        if (!r || static_cast<int>(r->size()) > w) continue;
        add(std::move(*r), left, right, l.var());
      }
      if (empty) break;
    }
    for (Lit l : gc) occ[slot(l)].push_back(g);
  }

  WidthResult res;
  res.clauses = nodes.size();
  if (!empty) return res;
  res.refuted = true;
  std::vector<char> need(nodes.size(), 0);
  need[*empty] = 1;
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (!need[i] || nodes[i].pivot == 0) continue;
    need[nodes[i].left] = need[nodes[i].right] = 1;
  }
  // Premises can have larger ids than their users only if created earlier,
  // so ids are already topological.
  std::vector<uint32_t> step_of(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!need[i]) continue;
    ProofStep s;
    s.clause = nodes[i].clause;
    if (nodes[i].pivot != 0) {
      s.axiom = false;
      s.left = step_of[nodes[i].left];
      s.right = step_of[nodes[i].right];
      s.pivot = nodes[i].pivot;
    }
    step_of[i] = static_cast<uint32_t>(res.proof.steps.size());
    res.proof.steps.push_back(std::move(s));
  }
  return res;
}

SlivovskyResult slivovsky_synth(const Specification& spec, double time_limit) {
  const std::size_t m = spec.outputs().size();
  Var first_free = 1;
  for (Var v : spec.inputs()) first_free = std::max(first_free, v + 1);
  for (Var v : spec.outputs()) first_free = std::max(first_free, v + 1);

  std::vector<Circuit> psis(m);
  SlivovskyResult res;
  res.interpolant_sizes.assign(m, 0);
  res.proof_lengths.assign(m, 0);
  for (std::size_t i = m; i-- > 0;) {
    InterpolationInstance inst;
    inst.c = spec.inputs();
    inst.c.insert(inst.c.end(), spec.outputs().begin(), spec.outputs().begin() + static_cast<std::ptrdiff_t>(i));
    int next = first_free;
    for (int b = 0; b < 2; ++b) {
      CircuitBuilder cb;
      std::unordered_map<Var, NodeId> later;
      later[spec.outputs()[i]] = cb.constant(b != 0);
      auto bind = [&](Var v) {
        auto it = later.find(v);
        return it != later.end() ? it->second : cb.input(v);
      };
      for (std::size_t t = i + 1; t < m; ++t) later[spec.outputs()[t]] = cb.import(psis[t], bind)[0];
      cb.add_output(cb.import(spec.matrix(), bind)[0]);
      TseitinResult ts = tseitin(cb.finish(), false, next);
      Cnf& f = b ? inst.phi1 : inst.phi0;
      f = std::move(ts.cnf);
      std::vector<Var>& side = b ? inst.b : inst.a;
      for (Var v = next; v <= f.num_vars(); ++v) side.push_back(v);
      next = std::max(next, f.num_vars() + 1);
    }
    ProofResult pr = solve_instance(inst, time_limit);
    if (pr.sat) throw InterpolationInapplicable(i, pr.model.project(inst.c));
    psis[i] = extract_interpolant(inst, pr.proof);
    res.interpolant_sizes[i] = psis[i].size();
    res.proof_lengths[i] = pr.proof.steps.size();
  }
  res.psi = SkolemVector(spec.inputs(), spec.outputs(), std::move(psis));
  return res;
}

std::vector<InterpRow> interp_size_experiment(const std::vector<int>& ms, double time_limit, int (*k_of_m)(int)) {
  std::vector<InterpRow> rows;
  for (int m : ms) {
    InterpRow row;
    row.m = m;
    row.k = k_of_m ? k_of_m(m) : (1 << m) + 1;
    BphpParams p{row.k, m, BphpRegime::Free};
    row.lex_first_size = bphp_lexfirst_size(p);
    auto t0 = std::chrono::steady_clock::now();
    try {
      InterpolationInstance inst = bphp_interpolation_pair(p);
      ProofResult pr = solve_instance(inst, time_limit);
      if (!pr.sat) {
        row.proof_length = pr.proof.steps.size();
        row.interpolant_size = extract_interpolant(inst, pr.proof).size();
      }
    } catch (const ResourceLimit&) {
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
  }
  return rows;
}

void write_interp_csv(std::ostream& os, const std::vector<InterpRow>& rows) {
  os << "m,k,proofLength,interpolantSize,lexFirstSize\n";
  for (const auto& r : rows) {
    os << r.m << ',' << r.k << ',';
    if (r.proof_length) os << *r.proof_length;
    os << ',';
    if (r.interpolant_size) os << *r.interpolant_size;
    os << ',' << r.lex_first_size << '\n';
  }
}

void write_proof(std::ostream& os, const ResolutionProof& proof) {
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const ProofStep& s = proof.steps[i];
    os << (s.axiom ? 'a' : 'r') << ' ' << i + 1;
    for (Lit l : s.clause) os << ' ' << l.dimacs();
    os << " 0";
    if (s.axiom)
      os << ' ' << origin_name(s.origin);
    else
      os << ' ' << s.left + 1 << ' ' << s.right + 1 << ' ' << s.pivot;
    os << '\n';
  }
}

ResolutionProof parse_proof(std::istream& is) {
  ResolutionProof proof;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind[0] == 'c') continue;
    if (kind != "a" && kind != "r") throw ParseError(lineno, "expected 'a' or 'r'");
    std::size_t id = 0;
    if (!(ls >> id) || id != proof.steps.size() + 1) throw ParseError(lineno, "step ids must be consecutive from 1");
    ProofStep s;
    s.axiom = kind == "a";
    int lit = 0;
    for (;;) {
      if (!(ls >> lit)) throw ParseError(lineno, "clause not terminated by 0");
      if (lit == 0) break;
      s.clause.push_back(Lit(lit));
    }
    std::sort(s.clause.begin(), s.clause.end());
    if (s.axiom) {
      std::string o;
      if (!(ls >> o)) throw ParseError(lineno, "missing origin");
      if (o == "phi0") s.origin = Origin::Phi0;
      else if (o == "phi1") s.origin = Origin::Phi1;
      else if (o == "shared") s.origin = Origin::Shared;
      else throw ParseError(lineno, "unknown origin '" + o + "'");
    } else {
      std::size_t l = 0, r = 0;
      if (!(ls >> l >> r >> s.pivot) || l == 0 || r == 0 || l >= id || r >= id || s.pivot <= 0)
        throw ParseError(lineno, "bad premises or pivot");
      s.left = static_cast<uint32_t>(l - 1);
      s.right = static_cast<uint32_t>(r - 1);
    }
    proof.steps.push_back(std::move(s));
  }
  return proof;
}

}  // namespace skolem
