#include "skolem/circuit.hpp"

#include <algorithm>
#include <set>

#include "skolem/error.hpp"

namespace skolem {

bool Assignment::get(Var v) const {
  if (!has(v)) throw InvalidArgument("variable " + std::to_string(v) + " is unassigned");
  return values_[v] != 0;
}

void Assignment::set(Var v, bool b) {
  if (v <= 0) throw InvalidArgument("variable ids start at 1");
  if (v >= static_cast<int>(values_.size())) values_.resize(v + 1, -1);
  values_[v] = b ? 1 : 0;
}

bool Assignment::satisfies(const Clause& c) const {
  return std::any_of(c.begin(), c.end(), [&](Lit l) { return satisfies(l); });
}

bool Assignment::satisfies(const Cnf& f) const {
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [&](const Clause& c) { return satisfies(c); });
}

Assignment Assignment::project(std::span<const Var> vars) const {
  Assignment out(num_vars());
  for (Var v : vars)
    if (has(v)) out.set(v, get(v));
  return out;
}

std::vector<bool> Assignment::bits(std::span<const Var> vars) const {
  std::vector<bool> out;
  out.reserve(vars.size());
  for (Var v : vars) out.push_back(get(v));
  return out;
}

const char* to_string(GateOp op) {
  switch (op) {
    case GateOp::Input: return "INPUT";
    case GateOp::Const: return "CONST";
    case GateOp::Not: return "NOT";
    case GateOp::And: return "AND";
    case GateOp::Or: return "OR";
    case GateOp::Xor: return "XOR";
  }
  return "?";
}

NodeId Circuit::push(Gate g) {
  gates_.push_back(g);
  return static_cast<NodeId>(gates_.size() - 1);
}

NodeId Circuit::add_input(Var v) {
  if (v <= 0) throw InvalidArgument("INPUT must name a variable >= 1");
  return push({GateOp::Input, 0, 0, v, false});
}

NodeId Circuit::add_const(bool b) { return push({GateOp::Const, 0, 0, 0, b}); }

NodeId Circuit::add_not(NodeId a) {
  if (a >= gates_.size()) throw InvalidArgument("NOT operand does not precede the gate");
  return push({GateOp::Not, a, 0, 0, false});
}

NodeId Circuit::add_binary(GateOp op, NodeId a, NodeId b) {
  if (op != GateOp::And && op != GateOp::Or && op != GateOp::Xor)
    throw InvalidArgument("binary gate must be AND, OR or XOR");
  if (a >= gates_.size() || b >= gates_.size())
    throw InvalidArgument("operand does not precede the gate");
  return push({op, a, b, 0, false});
}

void Circuit::add_output(NodeId n) {
  if (n >= gates_.size()) throw InvalidArgument("output refers to a missing gate");
  outputs_.push_back(n);
}

std::size_t Circuit::size() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate& g) { return g.op != GateOp::Input; }));
}

std::vector<Var> Circuit::input_vars() const {
  std::set<Var> vs;
  for (const auto& g : gates_)
    if (g.op == GateOp::Input) vs.insert(g.var);
  return {vs.begin(), vs.end()};
}

std::size_t Circuit::live_size() const {
  std::vector<char> live(gates_.size(), 0);
  for (NodeId o : outputs_) live[o] = 1;
  std::size_t n = 0;
  for (std::size_t i = gates_.size(); i-- > 0;) {
    if (!live[i]) continue;
    const Gate& g = gates_[i];
    if (g.op == GateOp::Input) continue;
    ++n;
    if (g.op == GateOp::Not) live[g.a] = 1;
    if (g.op == GateOp::And || g.op == GateOp::Or || g.op == GateOp::Xor) live[g.a] = live[g.b] = 1;
  }
  return n;
}

std::vector<bool> Circuit::eval(const Assignment& a) const {
  std::vector<char> val(gates_.size());
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.op) {
      case GateOp::Input: val[i] = a.get(g.var); break;
      case GateOp::Const: val[i] = g.value; break;
      case GateOp::Not: val[i] = !val[g.a]; break;
      case GateOp::And: val[i] = val[g.a] && val[g.b]; break;
      case GateOp::Or: val[i] = val[g.a] || val[g.b]; break;
      case GateOp::Xor: val[i] = val[g.a] != val[g.b]; break;
    }
  }
  std::vector<bool> out;
  out.reserve(outputs_.size());
  for (NodeId o : outputs_) out.push_back(val[o] != 0);
  return out;
}

std::vector<uint64_t> Circuit::eval_words(const std::function<uint64_t(Var)>& input) const {
  std::vector<uint64_t> val(gates_.size());
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.op) {
      case GateOp::Input: val[i] = input(g.var); break;
      case GateOp::Const: val[i] = g.value ? ~0ull : 0ull; break;
      case GateOp::Not: val[i] = ~val[g.a]; break;
      case GateOp::And: val[i] = val[g.a] & val[g.b]; break;
      case GateOp::Or: val[i] = val[g.a] | val[g.b]; break;
      case GateOp::Xor: val[i] = val[g.a] ^ val[g.b]; break;
    }
  }
  std::vector<uint64_t> out;
  out.reserve(outputs_.size());
  for (NodeId o : outputs_) out.push_back(val[o]);
  return out;
}

// ---------------------------------------------------------------------------

NodeId CircuitBuilder::input(Var v) {
  auto it = inputs_.find(v);
  if (it != inputs_.end()) return it->second;
  NodeId n = c_.add_input(v);
  inputs_.emplace(v, n);
  return n;
}

NodeId CircuitBuilder::constant(bool b) {
  if (!const_[b]) const_[b] = c_.add_const(b);
  return *const_[b];
}

bool CircuitBuilder::is_const(NodeId n, bool* b) const {
  const Gate& g = c_.gate(n);
  if (g.op != GateOp::Const) return false;
  if (b) *b = g.value;
  return true;
}

NodeId CircuitBuilder::lnot(NodeId a) {
  bool v;
  if (is_const(a, &v)) return constant(!v);
  const Gate& g = c_.gate(a);
  if (g.op == GateOp::Not) return g.a;
  Key k{GateOp::Not, a, 0};
  auto it = table_.find(k);
  if (it != table_.end()) return it->second;
  NodeId n = c_.add_not(a);
  table_.emplace(k, n);
  return n;
}

namespace {
bool complementary(const Circuit& c, NodeId a, NodeId b) {
  const Gate& ga = c.gate(a);
  const Gate& gb = c.gate(b);
  return (ga.op == GateOp::Not && ga.a == b) || (gb.op == GateOp::Not && gb.a == a);
}
}  // namespace

NodeId CircuitBuilder::binary(GateOp op, NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  Key k{op, a, b};
  auto it = table_.find(k);
  if (it != table_.end()) return it->second;
  NodeId n = c_.add_binary(op, a, b);
  table_.emplace(k, n);
  return n;
}

NodeId CircuitBuilder::land(NodeId a, NodeId b) {
  bool v;
  if (is_const(a, &v)) return v ? b : constant(false);
  if (is_const(b, &v)) return v ? a : constant(false);
  if (a == b) return a;
  if (complementary(c_, a, b)) return constant(false);
  return binary(GateOp::And, a, b);
}

NodeId CircuitBuilder::lor(NodeId a, NodeId b) {
  bool v;
  if (is_const(a, &v)) return v ? constant(true) : b;
  if (is_const(b, &v)) return v ? constant(true) : a;
  if (a == b) return a;
  if (complementary(c_, a, b)) return constant(true);
  return binary(GateOp::Or, a, b);
}

NodeId CircuitBuilder::lxor(NodeId a, NodeId b) {
  bool v;
  if (is_const(a, &v)) return v ? lnot(b) : b;
  if (is_const(b, &v)) return v ? lnot(a) : a;
  if (a == b) return constant(false);
  if (complementary(c_, a, b)) return constant(true);
  return binary(GateOp::Xor, a, b);
}

NodeId CircuitBuilder::mux(NodeId sel, NodeId then_n, NodeId else_n) {
  bool v;
  if (is_const(sel, &v)) return v ? then_n : else_n;
  if (then_n == else_n) return then_n;
  return lor(land(sel, then_n), land(lnot(sel), else_n));
}

NodeId CircuitBuilder::land(std::span<const NodeId> xs) {
  if (xs.empty()) return constant(true);
  // Balanced to keep depth logarithmic.
  std::vector<NodeId> layer(xs.begin(), xs.end());
  while (layer.size() > 1) {
    std::vector<NodeId> next;
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(land(layer[i], layer[i + 1]));
    if (layer.size() % 2) next.push_back(layer.back());
    layer.swap(next);
  }
  return layer[0];
}

NodeId CircuitBuilder::lor(std::span<const NodeId> xs) {
  if (xs.empty()) return constant(false);
  std::vector<NodeId> layer(xs.begin(), xs.end());
  while (layer.size() > 1) {
    std::vector<NodeId> next;
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(lor(layer[i], layer[i + 1]));
    if (layer.size() % 2) next.push_back(layer.back());
    layer.swap(next);
  }
  return layer[0];
}

NodeId CircuitBuilder::equals_const(std::span<const NodeId> xs, const std::vector<bool>& bits) {
  if (xs.size() != bits.size()) throw InvalidArgument("equals_const: width mismatch");
  std::vector<NodeId> lits;
  lits.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) lits.push_back(bits[i] ? xs[i] : lnot(xs[i]));
  return land(lits);
}

std::vector<NodeId> CircuitBuilder::import(const Circuit& c,
                                           const std::function<NodeId(Var)>& bind) {
  std::vector<NodeId> map(c.num_nodes());
  for (std::size_t i = 0; i < c.num_nodes(); ++i) {
    const Gate& g = c.gate(static_cast<NodeId>(i));
    switch (g.op) {
      case GateOp::Input: map[i] = bind(g.var); break;
      case GateOp::Const: map[i] = constant(g.value); break;
      case GateOp::Not: map[i] = lnot(map[g.a]); break;
      case GateOp::And: map[i] = land(map[g.a], map[g.b]); break;
      case GateOp::Or: map[i] = lor(map[g.a], map[g.b]); break;
      case GateOp::Xor: map[i] = lxor(map[g.a], map[g.b]); break;
    }
  }
  std::vector<NodeId> outs;
  for (NodeId o : c.outputs()) outs.push_back(map[o]);
  return outs;
}

Circuit CircuitBuilder::finish() const { return prune(c_); }

Circuit prune(const Circuit& c) {
  const auto& gs = c.gates();
  std::vector<char> live(gs.size(), 0);
  for (NodeId o : c.outputs()) live[o] = 1;
  for (std::size_t i = gs.size(); i-- > 0;) {
    if (!live[i]) continue;
    const Gate& g = gs[i];
    if (g.op == GateOp::Not) live[g.a] = 1;
    if (g.op == GateOp::And || g.op == GateOp::Or || g.op == GateOp::Xor) live[g.a] = live[g.b] = 1;
  }
  Circuit out;
  std::vector<NodeId> map(gs.size(), 0);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    if (!live[i]) continue;
    const Gate& g = gs[i];
    switch (g.op) {
      case GateOp::Input: map[i] = out.add_input(g.var); break;
      case GateOp::Const: map[i] = out.add_const(g.value); break;
      case GateOp::Not: map[i] = out.add_not(map[g.a]); break;
      default: map[i] = out.add_binary(g.op, map[g.a], map[g.b]); break;
    }
  }
  for (NodeId o : c.outputs()) out.add_output(map[o]);
  return out;
}

Circuit rename_inputs(const Circuit& c, const std::function<Var(Var)>& rename) {
  Circuit out;
  for (const Gate& g : c.gates()) {
    switch (g.op) {
      case GateOp::Input: out.add_input(rename(g.var)); break;
      case GateOp::Const: out.add_const(g.value); break;
      case GateOp::Not: out.add_not(g.a); break;
      default: out.add_binary(g.op, g.a, g.b); break;
    }
  }
  for (NodeId o : c.outputs()) out.add_output(o);
  return out;
}

}  // namespace skolem
