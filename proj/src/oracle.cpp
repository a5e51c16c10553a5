#include "skolem/oracle.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "skolem/io.hpp"
#include "skolem/sat.hpp"

namespace skolem {

namespace {

uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Lit> assumption_lits(const Assignment& a) {
  std::vector<Lit> out;
  for (Var v = 1; v <= a.num_vars(); ++v)
    if (a.has(v)) out.push_back(Lit(v, !a.get(v)));
  return out;
}

Assignment model_of(const Solver& s, int num_vars) {
  Assignment m(num_vars);
  for (Var v = 1; v <= num_vars; ++v) m.set(v, s.model_value(v));
  return m;
}

// Counts projected models under assumptions with guarded blocking clauses.
class CellCounter {
 public:
  CellCounter(const Cnf& cnf, std::vector<Var> proj, Oracle& oracle)
      : proj_(std::move(proj)), oracle_(oracle), clauses_(cnf.size()) {
    solver_.set_time_limit(oracle.config().time_limit);
    solver_.set_conflict_budget(oracle.config().conflict_budget);
    solver_.add_cnf(cnf);
    solver_.ensure_vars(cnf.num_vars());
    num_vars_ = cnf.num_vars();
  }

  Solver& solver() { return solver_; }

  /// Guarded literal that activates an XOR over the projection.
  Lit add_xor(const XorConstraint& x) {
    Cnf tmp(solver_.num_vars());
    auto p = encode_parity(tmp, x.vars);
    for (const auto& c : tmp.clauses()) solver_.add_clause(c);
    Lit act = pos(solver_.new_var());
    if (p) {
      solver_.add_clause({~act, *p ^ !x.parity});
    } else if (x.parity) {
      solver_.add_clause({~act});
    }
    return act;
  }

  /// Up to `limit` projected models; the full models are kept when `keep`.
  std::size_t count(std::vector<Lit> assumptions, std::size_t limit, std::vector<Assignment>* keep = nullptr) {
    Lit act = pos(solver_.new_var());
    assumptions.push_back(act);
    std::size_t n = 0;
    auto t0 = std::chrono::steady_clock::now();
    uint64_t calls = 0;
    while (n < limit) {
      ++calls;
      if (!solver_.solve(assumptions)) break;
      ++n;
      if (keep) keep->push_back(model_of(solver_, num_vars_));
      std::vector<Lit> block{~act};
      for (Var v : proj_) block.push_back(Lit(v, solver_.model_value(v)));
      solver_.add_clause(block);
    }
    solver_.add_clause({~act});
    oracle_.record(clauses_, solver_.num_vars(), calls, seconds_since(t0));
    return n;
  }

 private:
  Solver solver_;
  std::vector<Var> proj_;
  Oracle& oracle_;
  std::size_t clauses_;
  int num_vars_ = 0;
};

}  // namespace

uint64_t derive_seed(uint64_t seed, std::string_view purpose, uint64_t iteration) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : purpose) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
  return mix64(mix64(seed ^ h) ^ mix64(iteration + 0x632BE59BD9B4E019ull));
}

std::mt19937_64 rng_stream(uint64_t seed, std::string_view purpose, uint64_t iteration) {
  return std::mt19937_64(derive_seed(seed, purpose, iteration));
}

OracleConfig oracle_config_from_env() {
  OracleConfig cfg;
  if (const char* p = std::getenv("SKOLEMKIT_SOLVER"); p && *p) {
    cfg.external = true;
    cfg.solver.path = p;
  }
  if (const char* t = std::getenv("SKOLEMKIT_SOLVER_TIMEOUT"); t && *t) cfg.solver.timeout = std::atof(t);
  return cfg;
}

void Oracle::record(std::size_t clauses, int vars, uint64_t calls, double seconds) {
  stats_.calls += calls;
  stats_.max_query_clauses = std::max(stats_.max_query_clauses, clauses);
  stats_.max_query_vars = std::max(stats_.max_query_vars, vars);
  stats_.seconds += seconds;
}

OracleResult Oracle::solve(const Cnf& cnf, const Assignment& assumptions) {
  auto t0 = std::chrono::steady_clock::now();
  OracleResult r;
  if (cfg_.external) {
    ExternalSolver s = cfg_.solver;
    if (s.timeout == 0) s.timeout = cfg_.time_limit;
    r = solve_external(cnf, s, assumptions);
  } else {
    r = skolem::solve(cnf, assumptions, cfg_.time_limit, cfg_.conflict_budget);
  }
  record(cnf.size(), cnf.num_vars(), 1, seconds_since(t0));
  return r;
}

OracleResult solve(const Cnf& cnf, const Assignment& assumptions, double time_limit, uint64_t conflict_budget) {
  SolverOptions o;
  o.time_limit = time_limit;
  o.conflict_budget = conflict_budget;
  Solver s(o);
  s.add_cnf(cnf);
  int nv = std::max(cnf.num_vars(), assumptions.num_vars());
  s.ensure_vars(nv);
  OracleResult r;
  auto as = assumption_lits(assumptions);
  r.sat = s.solve(as);
  if (r.sat) r.model = model_of(s, nv);
  return r;
}

OracleResult parse_competition_output(std::string_view out, int num_vars) {
  OracleResult r;
  bool have_status = false;
  std::vector<int8_t> val(static_cast<std::size_t>(num_vars) + 1, -1);
  std::istringstream in{std::string(out)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "s") {
      std::string st;
      ls >> st;
      if (st == "SATISFIABLE") r.sat = true;
      else if (st == "UNSATISFIABLE") r.sat = false;
      else if (st == "UNKNOWN" || st == "INDETERMINATE") throw ResourceLimit("external solver gave up");
      else throw OracleError("unrecognized status line: " + line);
      have_status = true;
    } else if (tag == "v") {
      std::string tok;
      while (ls >> tok) {
        char* end = nullptr;
        long lit = std::strtol(tok.c_str(), &end, 10);
        if (*end != '\0') throw OracleError("bad model token: " + tok);
        if (lit == 0) break;
        long v = std::labs(lit);
        if (v > num_vars) continue;  // solver-internal variable
        val[static_cast<std::size_t>(v)] = lit > 0;
      }
    } else {
      throw OracleError("unexpected output line: " + line);
    }
  }
  if (!have_status) throw OracleError("no status line in solver output");
  if (r.sat) {
    r.model = Assignment(num_vars);
    for (Var v = 1; v <= num_vars; ++v) r.model.set(v, val[static_cast<std::size_t>(v)] == 1);
  }
  return r;
}

OracleResult solve_external(const Cnf& cnf, const ExternalSolver& solver, const Assignment& assumptions) {
  Cnf q = cnf;
  q.ensure_vars(assumptions.num_vars());
  for (Lit l : assumption_lits(assumptions)) q.add_clause({l});

  char path[] = "/tmp/skolemkit-XXXXXX.cnf";
  int fd = mkstemps(path, 4);
  if (fd < 0) throw OracleError("cannot create temporary file");
  {
    std::string text = write_dimacs(q);
    const char* p = text.data();
    std::size_t left = text.size();
    while (left > 0) {
      ssize_t w = ::write(fd, p, left);
      if (w <= 0) {
        ::close(fd);
        ::unlink(path);
        throw OracleError("cannot write temporary file");
      }
      p += w;
      left -= static_cast<std::size_t>(w);
    }
    ::close(fd);
  }

  int pipefd[2];
  if (pipe(pipefd) != 0) {
    ::unlink(path);
    throw OracleError("pipe failed");
  }
  pid_t pid = fork();
  if (pid < 0) {
    ::unlink(path);
    throw OracleError("fork failed");
  }
  if (pid == 0) {
    dup2(pipefd[1], 1);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, 2);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(solver.path.c_str()));
    for (const auto& a : solver.args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(path);
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  close(pipefd[1]);
  std::string out;
  auto t0 = std::chrono::steady_clock::now();
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    int wait_ms = -1;
    if (solver.timeout > 0) {
      double left = solver.timeout - seconds_since(t0);
      if (left <= 0) {
        timed_out = true;
        break;
      }
      wait_ms = std::max(1, static_cast<int>(left * 1000));
    }
    pollfd pfd{pipefd[0], POLLIN, 0};
    int pr = poll(&pfd, 1, wait_ms);
    if (pr == 0) continue;
    if (pr < 0) break;
    ssize_t n = read(pipefd[0], buf, sizeof buf);
    if (n <= 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  close(pipefd[0]);
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  ::unlink(path);
  if (timed_out) throw ResourceLimit("external solver timed out");
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) throw OracleError("cannot execute " + solver.path);
  if (WIFSIGNALED(status)) throw OracleError("external solver killed by signal");
  OracleResult r = parse_competition_output(out, q.num_vars());
  if (r.sat && !r.model.satisfies(q)) throw OracleError("external model does not satisfy the query");
  if (r.sat) r.model = r.model.project([&] {
      std::vector<Var> vs;
      for (Var v = 1; v <= q.num_vars(); ++v) vs.push_back(v);
      return vs;
    }());
  return r;
}

XorConstraint random_xor(std::mt19937_64& rng, const std::vector<Var>& proj) {
  XorConstraint x;
  for (Var v : proj)
    if (rng() & 1) x.vars.push_back(v);
  x.parity = rng() & 1;
  return x;
}

CountEstimate approx_count_projected(const Cnf& cnf, const std::vector<Var>& proj, uint64_t seed, Oracle& oracle,
                                     CountOptions opts) {
  if (opts.trials < 1) throw InvalidArgument("need at least one trial");
  for (Var v : proj)
    if (v < 1 || v > cnf.num_vars()) throw InvalidArgument("projection variable outside the CNF");
  CountEstimate est;
  est.trials = opts.trials;
  est.seed = seed;
  const auto limit = static_cast<std::size_t>(opts.threshold) + 1;
  CellCounter cc(cnf, proj, oracle);
  std::size_t c0 = cc.count({}, limit);
  if (c0 < limit) {
    est.estimate = c0;
    return est;
  }
  const int n = static_cast<int>(proj.size());
  std::vector<std::pair<uint64_t, int>> results;
  int hint = 1;
  for (int t = 0; t < opts.trials; ++t) {
    auto rng = rng_stream(seed, "count", static_cast<uint64_t>(t));
    std::vector<Lit> acts;
    for (int i = 0; i < n; ++i) acts.push_back(cc.add_xor(random_xor(rng, proj)));
    std::map<int, std::size_t> memo{{0, c0}};
    auto cell = [&](int level) {
      auto it = memo.find(level);
      if (it != memo.end()) return it->second;
      std::vector<Lit> as(acts.begin(), acts.begin() + level);
      std::size_t c = cc.count(as, limit);
      memo[level] = c;
      return c;
    };
    // Smallest level whose cell is below the threshold; cells shrink with the level.
    int lo = 0, hi = n;
    int probe = std::clamp(hint, 1, std::max(1, n));
    if (n > 0) {
      if (cell(probe) < limit) hi = probe;
      else lo = probe;
    }
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (cell(mid) < limit) hi = mid;
      else lo = mid;
    }
    int level = hi;
    std::size_t c = cell(level);
    hint = level;
    results.push_back({static_cast<uint64_t>(c) << level, level});
  }
  std::sort(results.begin(), results.end());
  auto med = results[results.size() / 2];
  est.estimate = med.first;
  est.hash_bits = med.second;
  return est;
}

CountEstimate approx_count_projected(const Cnf& cnf, const std::vector<Var>& proj, int trials, uint64_t seed) {
  Oracle o;
  CountOptions opts;
  opts.trials = trials;
  return approx_count_projected(cnf, proj, seed, o, opts);
}

OracleResult sample_projected(const Cnf& cnf, const std::vector<Var>& proj, int hash_bits, uint64_t seed,
                              Oracle& oracle) {
  if (hash_bits < 0) throw InvalidArgument("hash_bits must be nonnegative");
  CellCounter cc(cnf, proj, oracle);
  auto rng = rng_stream(seed, "sample", static_cast<uint64_t>(hash_bits));
  std::vector<Lit> acts;
  for (int i = 0; i < hash_bits; ++i) acts.push_back(cc.add_xor(random_xor(rng, proj)));
  std::vector<Assignment> models;
  cc.count(acts, 64, &models);
  OracleResult r;
  if (models.empty()) return r;
  r.sat = true;
  r.model = models[std::uniform_int_distribution<std::size_t>(0, models.size() - 1)(rng)];
  return r;
}

OracleResult sample_projected(const Cnf& cnf, const std::vector<Var>& proj, int hash_bits, uint64_t seed) {
  Oracle o;
  return sample_projected(cnf, proj, hash_bits, seed, o);
}

OracleResult sample_with_retry(const Cnf& cnf, const std::vector<Var>& proj, int hash_bits, uint64_t seed,
                               Oracle& oracle, int retries) {
  OracleResult r;
  for (int attempt = 0; attempt <= retries; ++attempt) {
    int bits = std::max(0, hash_bits - attempt);
    r = sample_projected(cnf, proj, bits, derive_seed(seed, "retry", static_cast<uint64_t>(attempt)), oracle);
    if (r.sat || bits == 0) break;
  }
  return r;
}

std::vector<std::vector<bool>> enumerate_projected(const Cnf& cnf, const std::vector<Var>& proj,
                                                   std::size_t limit, Oracle& oracle) {
  CellCounter cc(cnf, proj, oracle);
  std::vector<Assignment> models;
  cc.count({}, limit, &models);
  std::vector<std::vector<bool>> out;
  for (const auto& m : models) out.push_back(m.bits(proj));
  return out;
}

}  // namespace skolem
