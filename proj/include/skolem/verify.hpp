#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "skolem/oracle.hpp"
#include "skolem/spec.hpp"

namespace skolem {

struct ErrorFormula {
  Cnf cnf;
  /// Y' copy of each output, in output order.
  std::vector<Var> y_prime;
};

/// E(X,Y,Y') = F(X,Y) ∧ ¬F(X,Y') ∧ (Y' ↔ Ψ(X)). ψ_i reads Y_j (j < i) through
/// Y'_j. Satisfiable iff Ψ is not a Skolem vector for F.
ErrorFormula build_error_formula(const Specification& spec, const SkolemVector& psi);

struct Verdict {
  bool valid = false;
  /// Counterexample over X ∪ Y: F(x,y) = 1 and F(x,Ψ(x)) = 0.
  Assignment witness;
};

Verdict verify_skolem(const Specification& spec, const SkolemVector& psi, Oracle& oracle);

/// The two-copy formula F(X,Y) ∧ F(X̂,Ŷ) ∧ (Z = Ẑ) ∧ (Y_i ≠ Ŷ_i); `i` is 0-based.
Cnf uniqueness_formula(const Specification& spec, std::size_t i, const std::vector<Var>& z);

/// Whether Y_i (0-based) is uniquely defined in terms of `z` ⊆ X ∪ Y∖{Y_i}.
/// On false, `witness` (if given) receives the two differing models over X ∪ Y.
bool check_unique(const Specification& spec, std::size_t i, const std::vector<Var>& z, Oracle& oracle,
                  std::pair<Assignment, Assignment>* witness = nullptr);

/// X ∪ {Y_1..Y_i} for bit i (0-based): the conditioning set used by the synthesizers.
std::vector<Var> prefix_vars(const Specification& spec, std::size_t i);

}  // namespace skolem
