#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "skolem/cnf.hpp"

namespace skolem {

/// Partial or total map from variables to bits.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : values_(num_vars + 1, -1) {}

  int num_vars() const { return static_cast<int>(values_.size()) - 1; }
  bool has(Var v) const { return v > 0 && v < static_cast<int>(values_.size()) && values_[v] >= 0; }
  bool get(Var v) const;
  std::optional<bool> find(Var v) const {
    if (!has(v)) return std::nullopt;
    return values_[v] != 0;
  }
  void set(Var v, bool b);
  void unset(Var v) {
    if (v > 0 && v < static_cast<int>(values_.size())) values_[v] = -1;
  }
  bool satisfies(Lit l) const { return has(l.var()) && get(l.var()) != l.negative(); }
  bool satisfies(const Clause& c) const;
  bool satisfies(const Cnf& f) const;

  /// Restriction to `vars` (everything else unset).
  Assignment project(std::span<const Var> vars) const;
  /// Bits of `vars` in order; throws when one is unassigned.
  std::vector<bool> bits(std::span<const Var> vars) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<int8_t> values_;
};

enum class GateOp : uint8_t { Input, Const, Not, And, Or, Xor };

const char* to_string(GateOp op);

using NodeId = uint32_t;

struct Gate {
  GateOp op = GateOp::Const;
  NodeId a = 0;
  NodeId b = 0;
  Var var = 0;        // Input
  bool value = false; // Const
};

/// Fan-in-2 gate DAG over basis {CONST, NOT, AND, OR, XOR}. Gates are stored in
/// topological order: operands always precede their users.
class Circuit {
 public:
  NodeId add_input(Var v);
  NodeId add_const(bool b);
  NodeId add_not(NodeId a);
  NodeId add_binary(GateOp op, NodeId a, NodeId b);
  void add_output(NodeId n);
  void set_output(std::size_t i, NodeId n) { outputs_.at(i) = n; }

  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(NodeId n) const { return gates_.at(n); }
  const std::vector<NodeId>& outputs() const { return outputs_; }
  NodeId output(std::size_t i = 0) const { return outputs_.at(i); }
  std::size_t num_nodes() const { return gates_.size(); }

  /// Number of non-INPUT gates.
  std::size_t size() const;
  /// Distinct variables named by INPUT gates, ascending.
  std::vector<Var> input_vars() const;
  /// Number of gates reachable from the outputs (INPUTs excluded).
  std::size_t live_size() const;

  /// Evaluates every output. Throws InvalidArgument if an INPUT is unassigned.
  std::vector<bool> eval(const Assignment& a) const;
  bool eval1(const Assignment& a) const { return eval(a).at(0); }
  /// 64 evaluations at once: `input(v)` supplies one bit per lane.
  std::vector<uint64_t> eval_words(const std::function<uint64_t(Var)>& input) const;

 private:
  NodeId push(Gate g);
  std::vector<Gate> gates_;
  std::vector<NodeId> outputs_;
};

/// Incremental construction with constant folding and structural hashing.
class CircuitBuilder {
 public:
  CircuitBuilder() = default;

  NodeId input(Var v);
  NodeId constant(bool b);
  NodeId lnot(NodeId a);
  NodeId land(NodeId a, NodeId b);
  NodeId lor(NodeId a, NodeId b);
  NodeId lxor(NodeId a, NodeId b);
  NodeId lxnor(NodeId a, NodeId b) { return lnot(lxor(a, b)); }
  NodeId mux(NodeId sel, NodeId then_n, NodeId else_n);
  NodeId land(std::span<const NodeId> xs);
  NodeId lor(std::span<const NodeId> xs);
  /// Equality of `xs` with the constant bit vector `bits`.
  NodeId equals_const(std::span<const NodeId> xs, const std::vector<bool>& bits);

  /// Whether `n` is a CONST node; value in `*b`.
  bool is_const(NodeId n, bool* b = nullptr) const;

  /// Copies `c` into this builder, replacing each INPUT var through `bind`.
  /// Returns the node of every output of `c`.
  std::vector<NodeId> import(const Circuit& c, const std::function<NodeId(Var)>& bind);

  void add_output(NodeId n) { c_.add_output(n); }
  const Circuit& circuit() const { return c_; }
  /// Final circuit with only the cone of the outputs kept.
  Circuit finish() const;

 private:
  NodeId binary(GateOp op, NodeId a, NodeId b);
  struct Key {
    GateOp op;
    NodeId a, b;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return (static_cast<std::size_t>(k.a) * 0x9E3779B97F4A7C15ull) ^
             (static_cast<std::size_t>(k.b) << 3) ^ static_cast<std::size_t>(k.op);
    }
  };
  Circuit c_;
  std::unordered_map<Var, NodeId> inputs_;
  std::unordered_map<Key, NodeId, KeyHash> table_;
  std::optional<NodeId> const_[2];
};

/// Keeps only the gates in the cone of the outputs, preserving order.
Circuit prune(const Circuit& c);

/// Copies `c` with INPUT variables renamed through `rename`.
Circuit rename_inputs(const Circuit& c, const std::function<Var(Var)>& rename);

}  // namespace skolem
