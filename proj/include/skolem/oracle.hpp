#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "skolem/circuit.hpp"
#include "skolem/cnf.hpp"
#include "skolem/error.hpp"

namespace skolem {

/// External solver process failed or produced output we cannot read.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Random streams derived from one 64-bit seed. A stream is identified by a
/// (purpose, iteration) label, so draws do not depend on call order.
std::mt19937_64 rng_stream(uint64_t seed, std::string_view purpose, uint64_t iteration = 0);
/// The derived 64-bit seed behind `rng_stream`, for passing on to callees.
uint64_t derive_seed(uint64_t seed, std::string_view purpose, uint64_t iteration = 0);

struct OracleResult {
  bool sat = false;
  /// Total over the query's variables when sat.
  Assignment model;
};

struct ExternalSolver {
  std::string path;
  std::vector<std::string> args;
  /// Seconds; 0 = none.
  double timeout = 0;
};

struct OracleConfig {
  bool external = false;
  ExternalSolver solver;
  /// Per query; 0 = unlimited.
  double time_limit = 0;
  uint64_t conflict_budget = 0;
};

/// Reads SKOLEMKIT_SOLVER (executable) and SKOLEMKIT_SOLVER_TIMEOUT (seconds).
OracleConfig oracle_config_from_env();

struct OracleStats {
  uint64_t calls = 0;
  std::size_t max_query_clauses = 0;
  int max_query_vars = 0;
  double seconds = 0;
};

/// An oracle session: routes queries to the internal engine or an external
/// executable and keeps statistics. Sessions are not shared between threads.
class Oracle {
 public:
  explicit Oracle(OracleConfig cfg = {}) : cfg_(std::move(cfg)) {}

  /// Satisfiability of `cnf` under the partial assignment `assumptions`.
  /// Throws ResourceLimit when a budget runs out.
  OracleResult solve(const Cnf& cnf, const Assignment& assumptions = {});

  const OracleConfig& config() const { return cfg_; }
  const OracleStats& stats() const { return stats_; }
  /// Bookkeeping for engines driven directly (counting, sampling).
  void record(std::size_t clauses, int vars, uint64_t calls, double seconds);

 private:
  OracleConfig cfg_;
  OracleStats stats_;
};

/// One query on the internal engine.
OracleResult solve(const Cnf& cnf, const Assignment& assumptions = {}, double time_limit = 0,
                   uint64_t conflict_budget = 0);

/// One query through an external DIMACS solver. The CNF (assumptions as unit
/// clauses) is written to a temporary file whose path is the last argument.
/// Throws OracleError on process failure or unparseable output and
/// ResourceLimit on timeout.
OracleResult solve_external(const Cnf& cnf, const ExternalSolver& solver, const Assignment& assumptions = {});

/// Parses SAT-competition output ("s ...", "v ..." lines).
OracleResult parse_competition_output(std::string_view out, int num_vars);

/// Draws an XOR over `proj`: each variable with probability 1/2, uniform parity.
XorConstraint random_xor(std::mt19937_64& rng, const std::vector<Var>& proj);

struct CountEstimate {
  uint64_t estimate = 0;
  int hash_bits = 0;
  int trials = 0;
  uint64_t seed = 0;
};

struct CountOptions {
  int trials = 9;
  /// Cell size bound; 73 corresponds to tolerance 0.8 in the usual formula.
  int threshold = 73;
};

/// Hash-based estimate of |{proj-projection of models of cnf}|. Estimate is 0
/// exactly when cnf is unsat; counts up to `threshold` are exact.
CountEstimate approx_count_projected(const Cnf& cnf, const std::vector<Var>& proj, uint64_t seed,
                                     Oracle& oracle, CountOptions opts = {});
CountEstimate approx_count_projected(const Cnf& cnf, const std::vector<Var>& proj, int trials,
                                     uint64_t seed);

/// Conjoins `hash_bits` random XORs over `proj` and returns a model drawn
/// uniformly from the surviving cell (cells are enumerated up to 64 projected
/// points). Unsat means the cell is empty.
OracleResult sample_projected(const Cnf& cnf, const std::vector<Var>& proj, int hash_bits, uint64_t seed,
                              Oracle& oracle);
OracleResult sample_projected(const Cnf& cnf, const std::vector<Var>& proj, int hash_bits, uint64_t seed);

/// `sample_projected` with up to `retries` further attempts, one hash bit fewer
/// each time, while the cell comes back empty.
OracleResult sample_with_retry(const Cnf& cnf, const std::vector<Var>& proj, int hash_bits, uint64_t seed,
                               Oracle& oracle, int retries = 8);

/// All projected models (as bit vectors over `proj`) up to `limit`, by
/// blocking clauses. Returns the distinct projections found.
std::vector<std::vector<bool>> enumerate_projected(const Cnf& cnf, const std::vector<Var>& proj,
                                                   std::size_t limit, Oracle& oracle);

}  // namespace skolem
