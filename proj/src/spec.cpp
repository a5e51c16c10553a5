#include "skolem/spec.hpp"

#include <algorithm>
#include <set>

#include "skolem/error.hpp"
#include "skolem/tseitin.hpp"

namespace skolem {

Specification::Specification(std::vector<Var> inputs, std::vector<Var> outputs, Circuit matrix)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), matrix_(std::move(matrix)) {
  index_roles();
  int top = 0;
  for (Var v : inputs_) top = std::max(top, v);
  for (Var v : outputs_) top = std::max(top, v);
  cnf_ = tseitin(matrix_, true, top + 1).cnf;
  cnf_.ensure_vars(top);
}

Specification::Specification(std::vector<Var> inputs, std::vector<Var> outputs, Circuit matrix,
                             Cnf cnf, SourceFormat format)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      matrix_(std::move(matrix)),
      cnf_(std::move(cnf)),
      format_(format) {
  index_roles();
  for (Var v : inputs_) cnf_.ensure_vars(v);
  for (Var v : outputs_) cnf_.ensure_vars(v);
}

void Specification::index_roles() {
  if (matrix_.outputs().size() != 1) throw InvalidArgument("matrix must have exactly one output");
  int top = 0;
  for (Var v : inputs_) top = std::max(top, v);
  for (Var v : outputs_) top = std::max(top, v);
  index_.assign(top + 1, 0);
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i] <= 0) throw InvalidArgument("variable ids start at 1");
    if (index_[inputs_[i]] != 0) throw InvalidArgument("duplicate input variable");
    index_[inputs_[i]] = static_cast<int>(i) + 1;
  }
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    if (outputs_[i] <= 0) throw InvalidArgument("variable ids start at 1");
    if (index_[outputs_[i]] != 0)
      throw InvalidArgument("variable " + std::to_string(outputs_[i]) + " is both input and output");
    index_[outputs_[i]] = -(static_cast<int>(i) + 1);
  }
  for (Var v : matrix_.input_vars())
    if (v >= static_cast<int>(index_.size()) || index_[v] == 0)
      throw InvalidArgument("matrix reads undeclared variable " + std::to_string(v));
}

Role Specification::role(Var v) const {
  if (v <= 0 || v >= static_cast<int>(index_.size()) || index_[v] == 0) return Role::Auxiliary;
  return index_[v] > 0 ? Role::Input : Role::Output;
}

int Specification::role_index(Var v) const {
  if (v <= 0 || v >= static_cast<int>(index_.size())) return 0;
  return std::abs(index_[v]);
}

std::vector<Variable> Specification::variables() const {
  std::vector<Variable> out;
  for (Var v = 1; v <= num_vars(); ++v) out.push_back({v, role(v), role_index(v)});
  return out;
}

std::vector<Var> Specification::auxiliaries() const {
  std::vector<Var> out;
  for (Var v = 1; v <= num_vars(); ++v)
    if (role(v) == Role::Auxiliary) out.push_back(v);
  return out;
}

Assignment Specification::assignment(const std::vector<bool>& x, const std::vector<bool>& y) const {
  if (x.size() != inputs_.size() || y.size() != outputs_.size())
    throw InvalidArgument("assignment width mismatch");
  Assignment a(num_vars());
  for (std::size_t i = 0; i < x.size(); ++i) a.set(inputs_[i], x[i]);
  for (std::size_t i = 0; i < y.size(); ++i) a.set(outputs_[i], y[i]);
  return a;
}

// ---------------------------------------------------------------------------

SkolemVector::SkolemVector(const Specification& spec, std::vector<Circuit> psis)
    : SkolemVector(spec.inputs(), spec.outputs(), std::move(psis)) {}

SkolemVector::SkolemVector(std::vector<Var> inputs, std::vector<Var> outputs,
                           std::vector<Circuit> psis)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), psis_(std::move(psis)) {
  validate();
}

void SkolemVector::validate() const {
  if (psis_.size() != outputs_.size())
    throw InvalidArgument("Skolem vector needs one circuit per output");
  std::set<Var> xs(inputs_.begin(), inputs_.end());
  for (std::size_t i = 0; i < psis_.size(); ++i) {
    if (psis_[i].outputs().size() != 1)
      throw InvalidArgument("psi_" + std::to_string(i + 1) + " must have one output");
    for (Var v : psis_[i].input_vars()) {
      if (xs.count(v)) continue;
      auto it = std::find(outputs_.begin(), outputs_.end(), v);
      if (it == outputs_.end())
        throw InvalidArgument("psi_" + std::to_string(i + 1) + " reads undeclared variable " +
                              std::to_string(v));
      auto j = static_cast<std::size_t>(it - outputs_.begin());
      if (j >= i)
        throw InvalidArgument("psi_" + std::to_string(i + 1) + " reads y" + std::to_string(j + 1) +
                              ": cyclic dependency");
    }
  }
}

std::size_t SkolemVector::total_size() const {
  std::size_t n = 0;
  for (const auto& c : psis_) n += c.size();
  return n;
}

Assignment SkolemVector::apply(const Assignment& x) const {
  Assignment a = x;
  for (std::size_t i = 0; i < psis_.size(); ++i) a.set(outputs_[i], psis_[i].eval1(a));
  return a;
}

std::vector<bool> SkolemVector::eval(const std::vector<bool>& x) const {
  if (x.size() != inputs_.size()) throw InvalidArgument("input width mismatch");
  Assignment a;
  for (std::size_t i = 0; i < x.size(); ++i) a.set(inputs_[i], x[i]);
  a = apply(a);
  return a.bits(outputs_);
}

// ---------------------------------------------------------------------------

Circuit substitute(const Specification& spec, const std::vector<bool>& y) {
  if (y.size() != spec.outputs().size()) throw InvalidArgument("binding width mismatch");
  CircuitBuilder b;
  auto out = b.import(spec.matrix(), [&](Var v) {
    if (spec.role(v) == Role::Output) return b.constant(y[spec.role_index(v) - 1]);
    return b.input(v);
  });
  b.add_output(out[0]);
  return b.finish();
}

namespace {
// Builds nodes for Ψ inside `b`; returns node per output.
std::vector<NodeId> build_psi(CircuitBuilder& b, const SkolemVector& psi) {
  std::vector<NodeId> ynode;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    auto out = b.import(psi.psi(i), [&](Var v) -> NodeId {
      auto it = std::find(psi.outputs().begin(), psi.outputs().end(), v);
      if (it != psi.outputs().end()) return ynode.at(static_cast<std::size_t>(it - psi.outputs().begin()));
      return b.input(v);
    });
    ynode.push_back(out[0]);
  }
  return ynode;
}
}  // namespace

Circuit substitute(const Specification& spec, const SkolemVector& psi) {
  if (psi.outputs() != spec.outputs() || psi.inputs() != spec.inputs())
    throw InvalidArgument("Skolem vector does not match the specification's variables");
  CircuitBuilder b;
  auto ynode = build_psi(b, psi);
  auto out = b.import(spec.matrix(), [&](Var v) {
    if (spec.role(v) == Role::Output) return ynode[spec.role_index(v) - 1];
    return b.input(v);
  });
  b.add_output(out[0]);
  return b.finish();
}

Circuit compose(const SkolemVector& psi) {
  CircuitBuilder b;
  auto ynode = build_psi(b, psi);
  for (NodeId n : ynode) b.add_output(n);
  return b.finish();
}

}  // namespace skolem
