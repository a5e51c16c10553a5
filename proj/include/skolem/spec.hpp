#pragma once

#include <string>
#include <vector>

#include "skolem/circuit.hpp"
#include "skolem/cnf.hpp"

namespace skolem {

enum class Role : uint8_t { Input, Output, Auxiliary };

struct Variable {
  Var id = 0;
  Role role = Role::Auxiliary;
  int role_index = 0;  // 1-based within X or Y; 0 for auxiliaries
};

enum class SourceFormat : uint8_t { Generated, Qdimacs, AnnotatedDimacs };

/// Relational specification F(X,Y) in circuit and CNF form.
///
/// `matrix` is a single-output circuit whose INPUT gates name X and Y
/// variables. `cnf` is over X, Y and auxiliaries; for every total assignment
/// to X and Y the CNF is satisfiable iff the matrix evaluates to 1.
class Specification {
 public:
  Specification() = default;
  /// Builds the CNF from `matrix` by Tseitin. X and Y must be disjoint.
  Specification(std::vector<Var> inputs, std::vector<Var> outputs, Circuit matrix);
  /// Takes both forms as given (parsers).
  Specification(std::vector<Var> inputs, std::vector<Var> outputs, Circuit matrix, Cnf cnf,
                SourceFormat format);

  const std::vector<Var>& inputs() const { return inputs_; }
  const std::vector<Var>& outputs() const { return outputs_; }
  int n() const { return static_cast<int>(inputs_.size()); }
  int m() const { return static_cast<int>(outputs_.size()); }
  const Circuit& matrix() const { return matrix_; }
  const Cnf& cnf() const { return cnf_; }
  SourceFormat format() const { return format_; }
  int num_vars() const { return cnf_.num_vars(); }

  Role role(Var v) const;
  /// 1-based index of v within its role, 0 for auxiliaries.
  int role_index(Var v) const;
  std::vector<Variable> variables() const;
  std::vector<Var> auxiliaries() const;

  /// F(x, y) by evaluating the matrix.
  bool eval(const Assignment& xy) const { return matrix_.eval1(xy); }
  /// Assignment over X∪Y from bit vectors (in declaration order).
  Assignment assignment(const std::vector<bool>& x, const std::vector<bool>& y) const;

 private:
  void index_roles();
  std::vector<Var> inputs_;
  std::vector<Var> outputs_;
  Circuit matrix_;
  Cnf cnf_;
  SourceFormat format_ = SourceFormat::Generated;
  std::vector<int> index_;  // var -> +i (input i), -i (output i), 0 aux
};

/// Ψ = <ψ_1..ψ_m>. ψ_i may read X and Y_j for j < i only; this is checked at
/// construction.
class SkolemVector {
 public:
  SkolemVector() = default;
  SkolemVector(const Specification& spec, std::vector<Circuit> psis);
  SkolemVector(std::vector<Var> inputs, std::vector<Var> outputs, std::vector<Circuit> psis);

  const std::vector<Circuit>& psis() const { return psis_; }
  const Circuit& psi(std::size_t i) const { return psis_.at(i); }
  std::size_t size() const { return psis_.size(); }
  const std::vector<Var>& inputs() const { return inputs_; }
  const std::vector<Var>& outputs() const { return outputs_; }
  /// Sum of the ψ sizes.
  std::size_t total_size() const;

  /// Computes Y from an assignment covering X (Y entries are filled in order).
  Assignment apply(const Assignment& x) const;
  /// Convenience: y bits for x bits.
  std::vector<bool> eval(const std::vector<bool>& x) const;

 private:
  void validate() const;
  std::vector<Var> inputs_;
  std::vector<Var> outputs_;
  std::vector<Circuit> psis_;
};

/// Circuit over X only computing F(x, binding(x)). Y variables are replaced
/// by the constants of `y`.
Circuit substitute(const Specification& spec, const std::vector<bool>& y);
/// Circuit over X only computing F(x, Ψ(x)).
Circuit substitute(const Specification& spec, const SkolemVector& psi);

/// Composes Ψ into one multi-output circuit over X only (Y references inlined).
Circuit compose(const SkolemVector& psi);

}  // namespace skolem
