#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "skolem/error.hpp"
#include "skolem/synth.hpp"
#include "skolem/tseitin.hpp"
#include "skolem/verify.hpp"

namespace skolem {

namespace {

constexpr int kConst0 = 0, kConst1 = 1, kNot = 2, kAnd = 3, kOr = 4, kXor = 5;

bool desc_less(const ChainGate& x, const ChainGate& y) {
  if (x.op != y.op) return x.op < y.op;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

uint64_t row_of(const std::vector<bool>& in) {
  uint64_t r = 0;
  for (bool b : in) r = (r << 1) | b;
  return r;
}

}  // namespace

Circuit chain_circuit(const Chain& ch, const std::vector<Var>& input_vars) {
  if (static_cast<int>(input_vars.size()) != ch.inputs) throw InvalidArgument("chain input count mismatch");
  Circuit c;
  std::vector<std::optional<NodeId>> node(static_cast<std::size_t>(ch.inputs) + ch.gates.size());
  auto get = [&](int p) -> NodeId {
    auto& slot = node[static_cast<std::size_t>(p)];
    if (!slot) slot = c.add_input(input_vars[static_cast<std::size_t>(p)]);
    return *slot;
  };
  if (ch.gates.empty()) {
    c.add_output(get(ch.output_input));
    return c;
  }
  for (std::size_t j = 0; j < ch.gates.size(); ++j) {
    const ChainGate& g = ch.gates[j];
    NodeId r;
    switch (g.op) {
      case kConst0: r = c.add_const(false); break;
      case kConst1: r = c.add_const(true); break;
      case kNot: r = c.add_not(get(g.a)); break;
      case kAnd: r = c.add_binary(GateOp::And, get(g.a), get(g.b)); break;
      case kOr: r = c.add_binary(GateOp::Or, get(g.a), get(g.b)); break;
      default: r = c.add_binary(GateOp::Xor, get(g.a), get(g.b)); break;
    }
    node[static_cast<std::size_t>(ch.inputs) + j] = r;
  }
  c.add_output(*node.back());
  return c;
}

// ---------------------------------------------------------------------------

namespace {

struct Enumerator {
  int n, s;
  uint64_t cap, visited = 0, mask;
  bool overflow = false;
  std::vector<uint64_t> tt;  // per node
  std::vector<ChainGate> gates;
  std::vector<int> refs;
  int unreferenced = 0;
  std::unordered_map<uint64_t, std::size_t> index;
  std::vector<ChainSpace::Entry> entries;

  void record(uint64_t t, int output_input) {
    auto [it, fresh] = index.emplace(t, entries.size());
    if (fresh) {
      ChainSpace::Entry e;
      e.truth = t;
      e.representative = Chain{n, gates, output_input};
      entries.push_back(std::move(e));
    }
    ++entries[it->second].count;
  }

  void try_gate(const ChainGate& g) {
    if (overflow) return;
    const int j = static_cast<int>(gates.size());
    if (j >= 1) {
      const int prev = n + j - 1;
      if (g.a != prev && g.b != prev && !desc_less(gates.back(), g)) return;
    }
    if (++visited > cap) {
      overflow = true;
      return;
    }
    uint64_t t;
    switch (g.op) {
      case kConst0: t = 0; break;
      case kConst1: t = mask; break;
      case kNot: t = ~tt[static_cast<std::size_t>(g.a)] & mask; break;
      case kAnd: t = tt[static_cast<std::size_t>(g.a)] & tt[static_cast<std::size_t>(g.b)]; break;
      case kOr: t = tt[static_cast<std::size_t>(g.a)] | tt[static_cast<std::size_t>(g.b)]; break;
      default: t = tt[static_cast<std::size_t>(g.a)] ^ tt[static_cast<std::size_t>(g.b)]; break;
    }
    auto ref = [&](int p, int d) {
      if (p < n) return;
      int& r = refs[static_cast<std::size_t>(p - n)];
      if (r == 0 && d > 0) --unreferenced;
      r += d;
      if (r == 0 && d < 0) ++unreferenced;
    };
    if (g.a >= 0) ref(g.a, 1);
    if (g.b >= 0) ref(g.b, 1);
    gates.push_back(g);
    refs.push_back(0);
    ++unreferenced;
    tt.push_back(t);

    const int rest = unreferenced - 1;  // gates other than the last with no reader
    if (rest == 0) record(t, 0);
    const int remaining = s - (j + 1);
    if (g.op >= kNot && rest + 1 <= 2 * remaining) extend();

    tt.pop_back();
    --unreferenced;
    refs.pop_back();
    gates.pop_back();
    if (g.b >= 0) ref(g.b, -1);
    if (g.a >= 0) ref(g.a, -1);
  }

  void extend() {
    const int j = static_cast<int>(gates.size());
    if (j >= s) return;
    const int nodes = n + j;
    if (j == 0) {
      try_gate({kConst0, -1, -1});
      try_gate({kConst1, -1, -1});
    }
    for (int a = 0; a < nodes; ++a) try_gate({kNot, a, -1});
    for (int op = kAnd; op <= kXor; ++op)
      for (int a = 0; a < nodes; ++a)
        for (int b = a + 1; b < nodes; ++b) try_gate({op, a, b});
  }
};

}  // namespace

std::optional<ChainSpace> ChainSpace::enumerate(int inputs, int s, uint64_t cap) {
  if (inputs < 0 || inputs > 6) throw InvalidArgument("chain enumeration supports at most 6 inputs");
  if (s < 0) throw InvalidArgument("negative gate bound");
  Enumerator e;
  e.n = inputs;
  e.s = s;
  e.cap = cap;
  const uint64_t rows = uint64_t{1} << inputs;
  e.mask = rows == 64 ? ~uint64_t{0} : (uint64_t{1} << rows) - 1;
  for (int p = 0; p < inputs; ++p) {
    uint64_t t = 0;
    for (uint64_t r = 0; r < rows; ++r)
      if ((r >> (inputs - 1 - p)) & 1) t |= uint64_t{1} << r;
    e.tt.push_back(t);
    e.record(t, p);
  }
  e.extend();
  if (e.overflow) return std::nullopt;
  ChainSpace sp;
  sp.inputs_ = inputs;
  sp.s_ = s;
  sp.entries_ = std::move(e.entries);
  return sp;
}

uint64_t ChainSpace::total() const {
  uint64_t t = 0;
  for (const auto& e : entries_) t += e.count;
  return t;
}

bool ChainSpace::consistent(const Entry& e, const std::vector<Example>& ex) const {
  for (const auto& x : ex)
    if (((e.truth >> row_of(x.in)) & 1) != static_cast<uint64_t>(x.out)) return false;
  return true;
}

uint64_t ChainSpace::consistent_count(const std::vector<Example>& ex) const {
  uint64_t t = 0;
  for (const auto& e : entries_)
    if (consistent(e, ex)) t += e.count;
  return t;
}

const ChainSpace* cached_chain_space(int inputs, int s, uint64_t cap) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::optional<ChainSpace>> cache;
  static std::map<std::pair<int, int>, uint64_t> failed_cap;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(inputs, s);
  auto it = cache.find(key);
  if (it != cache.end()) return &*it->second;
  auto f = failed_cap.find(key);
  if (f != failed_cap.end() && f->second >= cap) return nullptr;
  auto sp = ChainSpace::enumerate(inputs, s, cap);
  if (!sp) {
    failed_cap[key] = cap;
    return nullptr;
  }
  return &*cache.emplace(key, std::move(sp)).first->second;
}

// ---------------------------------------------------------------------------

namespace {

void exactly_one(Cnf& f, const std::vector<Var>& vs, std::optional<Lit> when) {
  Clause c;
  if (when) c.push_back(~*when);
  for (Var v : vs) c.push_back(pos(v));
  f.add_clause(c);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) f.add_clause({neg(vs[i]), neg(vs[j])});
}

}  // namespace

ChainEncoding encode_bounded_circuits(int inputs, int s, const std::vector<Example>& examples) {
  if (inputs < 0 || s < 0) throw InvalidArgument("bad chain dimensions");
  ChainEncoding e;
  e.inputs = inputs;
  e.s = s;
  Cnf& f = e.cnf;
  const int n = inputs;
  auto fresh = [&] { return f.new_var(); };
  for (int j = 0; j < s; ++j) e.act.push_back(fresh());
  for (int j = 0; j < s; ++j) {
    std::vector<Var> o;
    for (int k = 0; k < 6; ++k) o.push_back(fresh());
    e.op.push_back(o);
    std::vector<Var> a, b;
    for (int p = 0; p < n + j; ++p) a.push_back(fresh());
    for (int p = 0; p < n + j; ++p) b.push_back(fresh());
    e.sa.push_back(a);
    e.sb.push_back(b);
  }
  for (int p = 0; p < n; ++p) e.out.push_back(fresh());
  for (int j = 0; j < s; ++j) {
    e.structure.push_back(e.act[static_cast<std::size_t>(j)]);
    for (Var v : e.op[static_cast<std::size_t>(j)]) e.structure.push_back(v);
    for (Var v : e.sa[static_cast<std::size_t>(j)]) e.structure.push_back(v);
    for (Var v : e.sb[static_cast<std::size_t>(j)]) e.structure.push_back(v);
  }
  for (Var v : e.out) e.structure.push_back(v);

  auto OP = [&](int j, int o) { return e.op[static_cast<std::size_t>(j)][static_cast<std::size_t>(o)]; };
  auto SA = [&](int j, int p) { return e.sa[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)]; };
  auto SB = [&](int j, int p) { return e.sb[static_cast<std::size_t>(j)][static_cast<std::size_t>(p)]; };
  auto ACT = [&](int j) { return e.act[static_cast<std::size_t>(j)]; };

  // Structure.
  for (int j = 0; j + 1 < s; ++j) f.add_clause({neg(ACT(j + 1)), pos(ACT(j))});
  for (int j = 0; j < s; ++j) {
    exactly_one(f, e.op[static_cast<std::size_t>(j)], pos(ACT(j)));
    for (int o = 0; o < 6; ++o) f.add_clause({neg(OP(j, o)), pos(ACT(j))});
    // CONST only as the sole gate
    for (int c = kConst0; c <= kConst1; ++c) {
      if (j > 0) f.add_clause({neg(OP(j, c))});
      else if (s > 1) f.add_clause({neg(OP(j, c)), neg(ACT(1))});
    }
    const int nodes = n + j;
    // a selector: exactly one iff NOT/AND/OR/XOR
    for (int p = 0; p < nodes; ++p) {
      f.add_clause({neg(SA(j, p)), pos(OP(j, kNot)), pos(OP(j, kAnd)), pos(OP(j, kOr)), pos(OP(j, kXor))});
      for (int q = p + 1; q < nodes; ++q) f.add_clause({neg(SA(j, p)), neg(SA(j, q))});
    }
    for (int o = kNot; o <= kXor; ++o) {
      Clause c{neg(OP(j, o))};
      for (int p = 0; p < nodes; ++p) c.push_back(pos(SA(j, p)));
      f.add_clause(c);
    }
    // b selector: exactly one iff binary, and a < b
    for (int p = 0; p < nodes; ++p) {
      f.add_clause({neg(SB(j, p)), pos(OP(j, kAnd)), pos(OP(j, kOr)), pos(OP(j, kXor))});
      for (int q = p + 1; q < nodes; ++q) f.add_clause({neg(SB(j, p)), neg(SB(j, q))});
      for (int q = 0; q <= p; ++q) f.add_clause({neg(SA(j, p)), neg(SB(j, q))});
    }
    for (int o = kAnd; o <= kXor; ++o) {
      Clause c{neg(OP(j, o))};
      for (int p = 0; p < nodes; ++p) c.push_back(pos(SB(j, p)));
      f.add_clause(c);
    }
  }
  // Output input selector: exactly one iff no gates.
  if (n > 0) {
    if (s > 0) {
      exactly_one(f, e.out, neg(ACT(0)));
      for (Var v : e.out) f.add_clause({neg(v), neg(ACT(0))});
    } else {
      exactly_one(f, e.out, std::nullopt);
    }
  } else if (s > 0) {
    f.add_clause({pos(ACT(0))});
  } else {
    f.add_clause({});
  }
  // Every gate but the last is read later.
  for (int j = 0; j + 1 < s; ++j) {
    Clause c{neg(ACT(j + 1))};
    for (int k = j + 1; k < s; ++k) {
      c.push_back(pos(SA(k, n + j)));
      c.push_back(pos(SB(k, n + j)));
    }
    f.add_clause(c);
  }
  // Adjacent independent gates in increasing descriptor order.
  for (int j = 0; j + 1 < s; ++j) {
    const int g = n + j;  // node of gate j
    const Lit ra = pos(SA(j + 1, g)), rb = pos(SB(j + 1, g));
    const int na = n + j;  // operand range of gate j
    for (int o1 = 0; o1 < 6; ++o1)
      for (int o2 = 0; o2 < o1; ++o2) f.add_clause({ra, rb, neg(OP(j, o1)), neg(OP(j + 1, o2))});
    // equal a operands
    Var eqa = fresh();
    for (int p = 0; p < na; ++p) f.add_clause({neg(SA(j, p)), neg(SA(j + 1, p)), pos(eqa)});
    for (int o = kNot; o <= kXor; ++o) {
      for (int p = 0; p < na; ++p)
        for (int q = 0; q < p; ++q) f.add_clause({ra, rb, neg(OP(j, o)), neg(OP(j + 1, o)), neg(SA(j, p)), neg(SA(j + 1, q))});
    }
    f.add_clause({ra, rb, neg(OP(j, kNot)), neg(OP(j + 1, kNot)), neg(eqa)});
    for (int o = kAnd; o <= kXor; ++o)
      for (int p = 0; p < na; ++p)
        for (int q = 0; q <= p; ++q)
          f.add_clause({ra, rb, neg(OP(j, o)), neg(OP(j + 1, o)), neg(eqa), neg(SB(j, p)), neg(SB(j + 1, q))});
    // and eqa only when they agree
    for (int p = 0; p <= na; ++p) {
      Clause c{neg(eqa), neg(SA(j + 1, p))};
      if (p < na) c.push_back(pos(SA(j, p)));
      f.add_clause(c);
    }
    {
      Clause c{neg(eqa)};
      for (int p = 0; p <= na; ++p) c.push_back(pos(SA(j + 1, p)));
      f.add_clause(c);
    }
  }
  e.structure.shrink_to_fit();

  // Evaluation, one block per example.
  for (const Example& ex : examples) {
    if (static_cast<int>(ex.in.size()) != n) throw InvalidArgument("example width mismatch");
    std::vector<Var> val;
    for (int j = 0; j < s; ++j) val.push_back(fresh());
    auto node_lit = [&](int p) -> std::optional<Lit> {
      if (p < n) return std::nullopt;
      return pos(val[static_cast<std::size_t>(p - n)]);
    };
    for (int j = 0; j < s; ++j) {
      Var A = fresh(), B = fresh();
      const Lit v = pos(val[static_cast<std::size_t>(j)]);
      for (int p = 0; p < n + j; ++p) {
        for (auto [sel, opnd] : {std::pair{SA(j, p), A}, std::pair{SB(j, p), B}}) {
          if (auto l = node_lit(p)) {
            f.add_clause({neg(sel), ~*l, pos(opnd)});
            f.add_clause({neg(sel), *l, neg(opnd)});
          } else {
            f.add_clause({neg(sel), Lit(opnd, !ex.in[static_cast<std::size_t>(p)])});
          }
        }
      }
      f.add_clause({neg(OP(j, kConst0)), ~v});
      f.add_clause({neg(OP(j, kConst1)), v});
      f.add_clause({neg(OP(j, kNot)), v, pos(A)});
      f.add_clause({neg(OP(j, kNot)), ~v, neg(A)});
      f.add_clause({neg(OP(j, kAnd)), ~v, pos(A)});
      f.add_clause({neg(OP(j, kAnd)), ~v, pos(B)});
      f.add_clause({neg(OP(j, kAnd)), v, neg(A), neg(B)});
      f.add_clause({neg(OP(j, kOr)), v, neg(A)});
      f.add_clause({neg(OP(j, kOr)), v, neg(B)});
      f.add_clause({neg(OP(j, kOr)), ~v, pos(A), pos(B)});
      f.add_clause({neg(OP(j, kXor)), ~v, pos(A), pos(B)});
      f.add_clause({neg(OP(j, kXor)), ~v, neg(A), neg(B)});
      f.add_clause({neg(OP(j, kXor)), v, neg(A), pos(B)});
      f.add_clause({neg(OP(j, kXor)), v, pos(A), neg(B)});
      // last present gate carries the label
      Clause last{neg(ACT(j)), Lit(val[static_cast<std::size_t>(j)], !ex.out)};
      if (j + 1 < s) last.push_back(pos(ACT(j + 1)));
      f.add_clause(last);
    }
    for (int p = 0; p < n; ++p)
      if (ex.in[static_cast<std::size_t>(p)] != ex.out) f.add_clause({neg(e.out[static_cast<std::size_t>(p)])});
  }
  return e;
}

Chain decode_chain(const ChainEncoding& enc, const Assignment& model) {
  Chain ch;
  ch.inputs = enc.inputs;
  for (int j = 0; j < enc.s; ++j) {
    if (!model.get(enc.act[static_cast<std::size_t>(j)])) break;
    ChainGate g;
    for (int o = 0; o < 6; ++o)
      if (model.get(enc.op[static_cast<std::size_t>(j)][static_cast<std::size_t>(o)])) g.op = o;
    const auto& sa = enc.sa[static_cast<std::size_t>(j)];
    const auto& sb = enc.sb[static_cast<std::size_t>(j)];
    for (std::size_t p = 0; p < sa.size(); ++p) {
      if (model.get(sa[p])) g.a = static_cast<int>(p);
      if (model.get(sb[p])) g.b = static_cast<int>(p);
    }
    ch.gates.push_back(g);
  }
  if (ch.gates.empty())
    for (std::size_t p = 0; p < enc.out.size(); ++p)
      if (model.get(enc.out[p])) ch.output_input = static_cast<int>(p);
  return ch;
}

// ---------------------------------------------------------------------------

CandidatePool sample_candidate_pool(int inputs, int s, const std::vector<Example>& examples,
                                    const std::vector<Var>& input_vars, int count, uint64_t seed,
                                    Oracle& oracle, const ChainSpace* space) {
  CandidatePool pool;
  if (space) {
    std::vector<const ChainSpace::Entry*> ok;
    std::vector<double> w;
    for (const auto& e : space->entries())
      if (space->consistent(e, examples)) {
        ok.push_back(&e);
        w.push_back(static_cast<double>(e.count));
      }
    if (ok.empty()) throw InvalidArgument("no chain is consistent with the examples");
    auto rng = rng_stream(seed, "pool");
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    for (int c = 0; c < count; ++c) pool.circuits.push_back(chain_circuit(ok[pick(rng)]->representative, input_vars));
    pool.exact = true;
    return pool;
  }
  ChainEncoding enc = encode_bounded_circuits(inputs, s, examples);
  CountEstimate est = approx_count_projected(enc.cnf, enc.structure, derive_seed(seed, "pool-count"), oracle);
  if (est.estimate == 0) throw InvalidArgument("no chain is consistent with the examples");
  int hb = est.estimate > 32 ? static_cast<int>(std::ceil(std::log2(static_cast<double>(est.estimate) / 32.0))) : 0;
  for (int c = 0; c < count; ++c) {
    OracleResult r =
        sample_with_retry(enc.cnf, enc.structure, hb, derive_seed(seed, "pool-sample", static_cast<uint64_t>(c)), oracle);
    if (!r.sat) r = oracle.solve(enc.cnf);
    pool.circuits.push_back(chain_circuit(decode_chain(enc, r.model), input_vars));
  }
  return pool;
}

Circuit majority_hypothesis(const CandidatePool& pool) {
  if (pool.circuits.empty()) throw InvalidArgument("empty pool");
  std::vector<const Circuit*> cs;
  for (const auto& c : pool.circuits) cs.push_back(&c);
  if (cs.size() % 2 == 0) cs.push_back(cs.front());
  CircuitBuilder b;
  auto bind = [&](Var v) { return b.input(v); };
  const std::size_t need = (cs.size() + 1) / 2;
  // at_least[t]: at least t of the circuits so far output 1
  std::vector<NodeId> at_least(need + 1, b.constant(false));
  at_least[0] = b.constant(true);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    NodeId g = b.import(*cs[k], bind)[0];
    for (std::size_t t = std::min(k + 1, need); t >= 1; --t) at_least[t] = b.lor(at_least[t], b.land(g, at_least[t - 1]));
  }
  b.add_output(at_least[need]);
  return b.finish();
}

int learner_budget(int s, int factor) {
  return static_cast<int>(std::ceil(factor * s * std::log2(s + 2.0)));
}

LearnerResult learn_unique_bit(const Specification& spec, std::size_t i, Oracle& oracle, uint64_t seed,
                               const LearnerOptions& opts) {
  if (i >= spec.outputs().size()) throw InvalidArgument("output index out of range");
  if (opts.d < 2) throw InvalidArgument("d must be at least 2");
  const std::vector<Var> inputs = prefix_vars(spec, i);
  const int nin = static_cast<int>(inputs.size());
  const Var yi = spec.outputs()[i];
  LearnerResult res;
  res.state.bit = i;
  res.state.seed = seed;
  res.state.s = opts.s0 > 0 ? opts.s0 : std::max(spec.n() + static_cast<int>(i) + 1, 4);
  std::vector<Example> examples;
  for (;;) {
    const int s = res.state.s;
    const ChainSpace* space = nin <= 6 ? cached_chain_space(nin, s, opts.enumeration_cap) : nullptr;
    res.exact_space = space != nullptr;
    const int budget = learner_budget(s, opts.budget_factor);
    for (int r = 0; r < budget; ++r) {
      if (space) res.consistent_counts.push_back(space->consistent_count(examples));
      CandidatePool pool;
      try {
        pool = sample_candidate_pool(nin, s, examples, inputs, opts.d * s,
                                     derive_seed(seed, "round", static_cast<uint64_t>(res.state.round)), oracle, space);
      } catch (const InvalidArgument&) {
        if (space) res.consistent_counts.pop_back();
        break;  // target not representable at this size
      }
      pool.d = opts.d;
      pool.delta = opts.delta;
      ++res.state.round;
      Circuit h = majority_hypothesis(pool);
      Cnf e = spec.cnf();
      e.ensure_vars(spec.num_vars());
      auto lits = encode_circuit(e, h);
      Lit o = lits[h.output()];
      e.add_clause({pos(yi), o});
      e.add_clause({neg(yi), ~o});
      OracleResult q = oracle.solve(e);
      if (!q.sat) {
        res.h = std::move(h);
        return res;
      }
      std::vector<Var> xy = spec.inputs();
      xy.insert(xy.end(), spec.outputs().begin(), spec.outputs().end());
      Assignment cex = q.model.project(xy);
      examples.push_back({cex.bits(inputs), cex.get(yi)});
      res.state.counterexamples.push_back(std::move(cex));
      ++res.rounds;
    }
    if (res.state.s * 2 > opts.s_cap)
      throw LearnerFailure("learner: no hypothesis within the size cap " + std::to_string(opts.s_cap));
    res.state.s *= 2;
    ++res.doublings;
  }
}

Circuit synth_unique_bit(const Specification& spec, std::size_t i, Oracle& oracle, int d, uint64_t seed) {
  LearnerOptions o;
  o.d = d;
  return learn_unique_bit(spec, i, oracle, seed, o).h;
}

}  // namespace skolem
