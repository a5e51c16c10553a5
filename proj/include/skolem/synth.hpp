#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skolem/circuit.hpp"
#include "skolem/oracle.hpp"
#include "skolem/spec.hpp"

namespace skolem {

// ---------------------------------------------------------------------------
// Lexicographic-first synthesis (no oracle)

/// Size measure of F used in the size bound: node count of the matrix,
/// inputs included (so it is at least 1).
std::size_t spec_size(const Specification& spec);

/// Constant of the size bound total_size <= kLexSizeConstant * |F| * m * 4^m.
/// The construction gives m * 2^m * (|F| + 3), which is within the bound for
/// any |F| >= 1.
inline constexpr std::size_t kLexSizeConstant = 4;

/// ψ_i(x) = bit i of the lexicographically smallest y with F(x, y) (Y_1 most
/// significant), all zeros when there is none. Throws InvalidArgument when
/// m > lex_limit.
SkolemVector synth_lex(const Specification& spec, int lex_limit = 16);

// ---------------------------------------------------------------------------
// Covering-set synthesis

struct CoverSet {
  std::vector<std::vector<bool>> elements;  // in insertion order
  int iterations = 0;
  uint64_t oracle_calls = 0;
  /// Estimated number of uncovered inputs at the start of each iteration; the
  /// last entry is 0 once the cover is certified.
  std::vector<uint64_t> uncovered;
  int hash_bits_last = 0;
  int k_final = 0;
  bool certified = false;
};

struct CoverOptions {
  int k0 = 1;
  /// Largest k guess before giving up (0: 2^m, capped at 2^20).
  int max_k = 0;
  CountOptions count;
};

/// Greedy cover: with guess k and budget 2k(n+2) elements, repeatedly hash
/// X down to about 2k uncovered inputs per cell, take a sampled uncovered
/// (x, y) and add y. On budget exhaustion k doubles and the set is kept.
/// Throws ResourceLimit past the largest k.
std::pair<SkolemVector, CoverSet> synth_cover(const Specification& spec, Oracle& oracle, uint64_t seed,
                                              const CoverOptions& opts = {});

/// F(X,Y) ∧ ⋀_{y ∈ elements} ¬F(X, y) as CNF.
Cnf uncovered_formula(const Specification& spec, const std::vector<std::vector<bool>>& elements);

/// ψ_i = ⋁_{y ∈ S', y_i = 1} F(x, y) ∧ ⋀_{y' ∈ S', y' <lex y} ¬F(x, y').
SkolemVector build_cover_circuit(const Specification& spec, const std::vector<std::vector<bool>>& elements);

// ---------------------------------------------------------------------------
// Bounded circuits (chains) for the unique-bit learner

/// A chain over `inputs` ordered inputs: node p < inputs is input p; node
/// inputs + j is gates[j]. The output is the last gate, or node `output_input`
/// when there are no gates.
///
/// Canonical form (the enumerated and encoded space):
///  - CONST appears only as the single gate of a one-gate chain;
///  - binary operands satisfy a < b;
///  - every gate except the last is read by a later gate;
///  - if gate j+1 does not read gate j, desc(j) < desc(j+1), where desc is
///    (op, a, b) with op ordered CONST0 < CONST1 < NOT < AND < OR < XOR.
struct ChainGate {
  int op = 0;  // 0 CONST0, 1 CONST1, 2 NOT, 3 AND, 4 OR, 5 XOR
  int a = -1;
  int b = -1;
};

struct Chain {
  int inputs = 0;
  std::vector<ChainGate> gates;
  int output_input = 0;
};

Circuit chain_circuit(const Chain& ch, const std::vector<Var>& input_vars);

/// One labelled point: input bits (in input order) and the required output.
struct Example {
  std::vector<bool> in;
  bool out = false;
};

/// Exactly enumerated space of canonical chains with at most `s` gates over
/// `inputs` inputs (inputs <= 6), grouped by truth table.
class ChainSpace {
 public:
  struct Entry {
    uint64_t truth = 0;  // bit r: value on the input row r (input 0 most significant)
    uint64_t count = 0;
    Chain representative;
  };
  /// nullopt when more than `cap` chains would be visited.
  static std::optional<ChainSpace> enumerate(int inputs, int s, uint64_t cap);
  int inputs() const { return inputs_; }
  int max_gates() const { return s_; }
  const std::vector<Entry>& entries() const { return entries_; }
  uint64_t total() const;
  /// Number of chains consistent with every example.
  uint64_t consistent_count(const std::vector<Example>& ex) const;
  bool consistent(const Entry& e, const std::vector<Example>& ex) const;

 private:
  int inputs_ = 0;
  int s_ = 0;
  std::vector<Entry> entries_;
};

/// Process-wide cache around `ChainSpace::enumerate`.
const ChainSpace* cached_chain_space(int inputs, int s, uint64_t cap);

struct ChainEncoding {
  Cnf cnf;
  /// Variables whose assignments are in bijection with canonical chains.
  std::vector<Var> structure;
  int inputs = 0;
  int s = 0;
  // layout
  std::vector<Var> act;                    // act[j]: gate j present
  std::vector<std::vector<Var>> op;        // op[j][0..5]
  std::vector<std::vector<Var>> sa, sb;    // operand selectors, indexed by node
  std::vector<Var> out;                    // output input when no gates
};

/// CNF over structure variables (plus evaluation auxiliaries, one block per
/// example) whose projected models are the canonical chains of at most `s`
/// gates consistent with `examples`.
ChainEncoding encode_bounded_circuits(int inputs, int s, const std::vector<Example>& examples);
Chain decode_chain(const ChainEncoding& enc, const Assignment& model);

// ---------------------------------------------------------------------------
// Unique-bit learner

struct CandidatePool {
  std::vector<Circuit> circuits;
  int d = 4;
  double delta = 0.2;
  bool exact = false;  // drawn from an enumerated space (exactly uniform)
};

/// `count` chains drawn uniformly from the consistent canonical chains. Uses
/// the enumerated space when given, hashing over the encoding otherwise.
/// Throws InvalidArgument when no chain is consistent.
CandidatePool sample_candidate_pool(int inputs, int s, const std::vector<Example>& examples,
                                    const std::vector<Var>& input_vars, int count, uint64_t seed,
                                    Oracle& oracle, const ChainSpace* space);

/// Pointwise majority; an even pool is padded with a copy of its first circuit.
Circuit majority_hypothesis(const CandidatePool& pool);

struct LearnerState {
  std::size_t bit = 0;
  std::vector<Assignment> counterexamples;  // over X ∪ Y, each satisfies F
  int s = 0;
  int round = 0;
  uint64_t seed = 0;
};

struct LearnerOptions {
  int d = 4;
  double delta = 0.2;
  int s0 = 0;        // 0: max(n + i + 1, 4) for 0-based bit i
  int s_cap = 1024;
  /// Largest number of chains to enumerate for an exact space.
  uint64_t enumeration_cap = uint64_t{1} << 26;
  /// Rounds allowed per size guess: budget_factor * s * log2(s + 2).
  int budget_factor = 64;
};

struct LearnerResult {
  Circuit h;
  LearnerState state;
  int rounds = 0;  // counterexample rounds in total
  int doublings = 0;
  bool exact_space = false;
  /// Exact consistent-chain count before each round (exact spaces only).
  std::vector<uint64_t> consistent_counts;
};

class LearnerFailure : public Error {
 public:
  using Error::Error;
};

/// Learns Y_i (0-based) as a function of X ∪ Y_{<i}. Requires Y_i to be
/// uniquely defined there. Throws LearnerFailure past s_cap.
LearnerResult learn_unique_bit(const Specification& spec, std::size_t i, Oracle& oracle, uint64_t seed,
                               const LearnerOptions& opts = {});
Circuit synth_unique_bit(const Specification& spec, std::size_t i, Oracle& oracle, int d, uint64_t seed);

/// Round budget for size guess s.
int learner_budget(int s, int factor = 64);

// ---------------------------------------------------------------------------

struct AutoConfig {
  int lex_limit = 16;
  CoverOptions cover;
  LearnerOptions learner;
};

enum class Strategy { Lex, Cover, Unique, Auto };

struct AutoReport {
  Strategy used = Strategy::Lex;
  std::vector<std::size_t> unique_bits;
  std::vector<std::size_t> cover_bits;
  CoverSet cover;
  int learner_rounds = 0;
};

/// Lex when m <= lex_limit; otherwise unique bits by the learner and the rest
/// by cover synthesis on the residual spec. The result is verified before
/// returning (throws Error if verification fails).
SkolemVector synth_auto(const Specification& spec, Oracle& oracle, uint64_t seed, const AutoConfig& cfg = {},
                        AutoReport* report = nullptr);

}  // namespace skolem
