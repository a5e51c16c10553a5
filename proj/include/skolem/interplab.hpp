#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skolem/benchgen.hpp"
#include "skolem/circuit.hpp"
#include "skolem/cnf.hpp"
#include "skolem/oracle.hpp"
#include "skolem/spec.hpp"

namespace skolem {

enum class Origin : uint8_t { Phi0, Phi1, Shared };

struct ProofStep {
  bool axiom = true;
  Clause clause;  // sorted
  Origin origin = Origin::Shared;  // axioms
  uint32_t left = 0, right = 0;    // resolvents: left holds +pivot, right -pivot
  Var pivot = 0;
};

struct ResolutionProof {
  std::vector<ProofStep> steps;
  std::size_t width() const;
  std::size_t resolutions() const;
  bool refutes() const { return !steps.empty() && steps.back().clause.empty(); }
};

/// Resolvent of `left` (holding +pivot) and `right` (holding -pivot); nullopt
/// when the premises do not clash on `pivot` or the result is a tautology.
std::optional<Clause> resolve(const Clause& left, const Clause& right, Var pivot);

struct ProofResult {
  bool sat = false;
  Assignment model;
  ResolutionProof proof;  // unsat only; trimmed to the cone of the empty clause
};

/// Internal engine in proof mode; learned clauses are expanded into binary
/// resolution steps. Axioms are labelled Shared.
ProofResult solve_with_proof(const Cnf& cnf, double time_limit = 0, uint64_t conflict_budget = 0);

struct ProofCheck {
  bool ok = false;
  std::size_t bad_step = 0;
  std::string reason;
};

/// Every axiom is a clause of `cnf`, every resolvent is exact, the last step
/// is empty.
ProofCheck check_proof(const Cnf& cnf, const ResolutionProof& proof);

struct InterpolationInstance {
  Cnf phi0;  // over A ∪ C
  Cnf phi1;  // over B ∪ C
  std::vector<Var> a, b, c;
  /// φ0 ∧ φ1 in one clause list.
  Cnf conjunction() const;
  /// Throws InvalidArgument when the partition is broken.
  void validate() const;
};

/// Proof of φ0 ∧ φ1 with axioms labelled by side (a clause of both is Shared).
ProofResult solve_instance(const InterpolationInstance& inst, double time_limit = 0, uint64_t conflict_budget = 0);

/// Symmetric interpolant over C: φ0 axiom ↦ 0, φ1 axiom ↦ 1 (Shared counts as
/// φ0), A pivot ↦ OR, B pivot ↦ AND, C pivot p ↦ p ? right : left.
/// Size is at most kInterpolantGatesPerStep gates per resolution step.
Circuit extract_interpolant(const InterpolationInstance& inst, const ResolutionProof& proof);
inline constexpr std::size_t kInterpolantGatesPerStep = 4;

/// The pair for bit 1 (0-based bit 0) of bPHP: C = X; side b fixes Y_1 = b,
/// takes the natural clauses of ¬F, and defines its private copies of
/// Y_2..Y_m by the greedy lexicographic completion (Y_j = 0 iff some pair of
/// pigeons shares a hole whose first j bits are (b, Y_2..Y_{j-1}, 0)).
/// Unsatisfiable exactly when k > 2^m.
InterpolationInstance bphp_interpolation_pair(const BphpParams& p);

struct WidthResult {
  bool refuted = false;
  ResolutionProof proof;  // refuted only
  std::size_t clauses = 0;  // distinct clauses kept
};

/// Saturation under resolution keeping derived clauses of width <= w (input
/// clauses of any width take part). Throws ResourceLimit past `max_clauses`.
WidthResult bounded_width_refute(const Cnf& cnf, int w, std::size_t max_clauses = 2'000'000);

class InterpolationInapplicable : public Error {
 public:
  InterpolationInapplicable(std::size_t bit, Assignment witness)
      : Error("interpolation inapplicable at bit " + std::to_string(bit + 1)), bit_(bit), witness_(std::move(witness)) {}
  std::size_t bit() const { return bit_; }
  /// Assignment to C = X ∪ Y_{<i} under which both sides are satisfiable.
  const Assignment& witness() const { return witness_; }

 private:
  std::size_t bit_;
  Assignment witness_;
};

struct SlivovskyResult {
  SkolemVector psi;
  std::vector<std::size_t> interpolant_sizes;  // per bit, 0-based
  std::vector<std::size_t> proof_lengths;
};

/// Bits from last to first: C = X ∪ Y_{<i}, side b is ¬F with Y_i = b and the
/// later bits replaced by their circuits; the interpolant is ψ_i.
SlivovskyResult slivovsky_synth(const Specification& spec, double time_limit = 0);

struct InterpRow {
  int m = 0, k = 0;
  std::optional<std::size_t> proof_length, interpolant_size;
  std::size_t lex_first_size = 0;
  double seconds = 0;
};

/// One row per m with k = 2^m + 1 (or `k_of_m` when given): bit-1 pair proof
/// length and interpolant size next to bphp_lexfirst_size.
std::vector<InterpRow> interp_size_experiment(const std::vector<int>& ms, double time_limit = 0,
                                              int (*k_of_m)(int) = nullptr);
void write_interp_csv(std::ostream& os, const std::vector<InterpRow>& rows);

/// Text format: "a <id> <lits> 0 <phi0|phi1|shared>" and
/// "r <id> <lits> 0 <left> <right> <pivot>", ids from 1.
void write_proof(std::ostream& os, const ResolutionProof& proof);
ResolutionProof parse_proof(std::istream& is);

}  // namespace skolem
