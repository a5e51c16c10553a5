#include <map>
#include <random>

#include "doctest.h"
#include "skolem/oracle.hpp"
#include "skolem/sat.hpp"
#include "test_util.hpp"

using namespace skolem;
using namespace testutil;

TEST_CASE("complementary units are unsat") {
  Cnf f(1);
  f.add_clause({pos(1)});
  f.add_clause({neg(1)});
  CHECK_FALSE(solve(f).sat);
}

TEST_CASE("assumption forces the other literal") {
  Cnf f(2);
  f.add_clause({pos(1), pos(2)});
  Assignment as;
  as.set(1, false);
  auto r = solve(f, as);
  REQUIRE(r.sat);
  CHECK(r.model.get(2));
  CHECK_FALSE(r.model.get(1));
}

TEST_CASE("internal solver agrees with exhaustive enumeration") {
  std::mt19937_64 rng(1);
  for (int round = 0; round < 300; ++round) {
    int n = 4 + static_cast<int>(rng() % 13);  // up to 16 variables
    int m = static_cast<int>(n * (3.5 + (rng() % 200) / 100.0));
    Cnf f = random_kcnf(rng, n, m, 3);
    auto r = solve(f);
    CHECK(r.sat == brute_sat(f, Assignment()));
    if (r.sat) CHECK(r.model.satisfies(f));
  }
}

TEST_CASE("assumptions agree with brute force") {
  std::mt19937_64 rng(2);
  for (int round = 0; round < 100; ++round) {
    Cnf f = random_kcnf(rng, 12, 40, 3);
    Assignment as(12);
    for (int k = 0; k < 3; ++k) as.set(1 + static_cast<int>(rng() % 12), rng() & 1);
    auto r = solve(f, as);
    CHECK(r.sat == brute_sat(f, as));
    if (r.sat) {
      CHECK(r.model.satisfies(f));
      for (Var v = 1; v <= 12; ++v)
        if (as.has(v)) CHECK(r.model.get(v) == as.get(v));
    }
  }
}

TEST_CASE("incremental use keeps answers correct") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    Solver s;
    Cnf acc(12);
    for (int step = 0; step < 60; ++step) {
      Cnf one = random_kcnf(rng, 12, 1, 3);
      acc.append(one);
      s.add_clause(one.clauses()[0]);
      std::vector<Lit> as{Lit(1 + static_cast<int>(rng() % 12), rng() & 1)};
      Assignment a;
      a.set(as[0].var(), !as[0].negative());
      bool got = s.solve(as);
      CHECK(got == brute_sat(acc, a));
      if (!s.okay()) break;
    }
  }
}

TEST_CASE("conflict budget surfaces as ResourceLimit") {
  Cnf f = php(9, 8);
  CHECK_THROWS_AS(solve(f, {}, 0, 50), ResourceLimit);
}

TEST_CASE("proof log resolves to the empty clause") {
  Cnf f = php(5, 4);
  SolverOptions o;
  o.proof = true;
  Solver s(o);
  s.add_cnf(f);
  CHECK_FALSE(s.solve());
  REQUIRE(s.empty_clause().has_value());
  CHECK(s.proof()[*s.empty_clause()].lits.empty());
}

#ifdef SKOLEMKIT_SAT_PATH
TEST_CASE("external adapter matches the internal engine") {
  ExternalSolver ext{SKOLEMKIT_SAT_PATH, {}, 30};
  std::mt19937_64 rng(4);
  for (int round = 0; round < 100; ++round) {
    int n = 6 + static_cast<int>(rng() % 10);
    Cnf f = random_kcnf(rng, n, static_cast<int>(n * 4.3), 3);
    auto a = solve(f);
    auto b = solve_external(f, ext);
    CHECK(a.sat == b.sat);
    if (b.sat) CHECK(b.model.satisfies(f));
  }
  Cnf g(2);
  g.add_clause({pos(1), pos(2)});
  Assignment as;
  as.set(1, false);
  auto r = solve_external(g, ext, as);
  REQUIRE(r.sat);
  CHECK(r.model.get(2));
}

TEST_CASE("external adapter: garbled output and timeout") {
  Cnf f(1);
  f.add_clause({pos(1)});
  CHECK_THROWS_AS(solve_external(f, ExternalSolver{"/bin/echo", {"garbage"}, 5}), OracleError);
  CHECK_THROWS_AS(solve_external(f, ExternalSolver{"/nonexistent/solver", {}, 5}), OracleError);
  CHECK_THROWS_AS(solve_external(php(12, 11), ExternalSolver{SKOLEMKIT_SAT_PATH, {}, 0.001}), ResourceLimit);
}

TEST_CASE("oracle session routes to the external engine") {
  OracleConfig cfg;
  cfg.external = true;
  cfg.solver = ExternalSolver{SKOLEMKIT_SAT_PATH, {}, 30};
  Oracle o(cfg);
  CHECK_FALSE(o.solve(php(4, 3)).sat);
  CHECK(o.stats().calls == 1);
}
#endif

TEST_CASE("competition output parsing") {
  auto r = parse_competition_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3);
  REQUIRE(r.sat);
  CHECK(r.model.get(1));
  CHECK_FALSE(r.model.get(2));
  CHECK(r.model.get(3));
  CHECK_FALSE(parse_competition_output("s UNSATISFIABLE\n", 3).sat);
  CHECK_THROWS_AS(parse_competition_output("hello\n", 3), OracleError);
  CHECK_THROWS_AS(parse_competition_output("c nothing\n", 3), OracleError);
}

TEST_CASE("XOR encoding preserves the projected model set") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    int n = 2 + static_cast<int>(rng() % 9);
    std::vector<Var> proj;
    for (int v = 1; v <= n; ++v) proj.push_back(v);
    XorConstraint x = random_xor(rng, proj);
    Cnf f(n);
    encode_xor(f, x);
    CHECK(f.size() <= 4 * x.vars.size() + 1);
    for (uint64_t m = 0; m < (1ull << n); ++m) {
      Assignment a(n);
      bool par = false;
      for (int v = 1; v <= n; ++v) a.set(v, (m >> (v - 1)) & 1);
      for (Var v : x.vars) par ^= a.get(v);
      CHECK(brute_sat(f, a) == (par == x.parity));
    }
  }
}

TEST_CASE("counting: exact small cases") {
  Cnf one(3);
  one.add_clause({pos(1)});
  one.add_clause({neg(2)});
  one.add_clause({pos(3)});
  auto e = approx_count_projected(one, {1, 2, 3}, 9, 1);
  CHECK(e.estimate == 1);
  CHECK(e.hash_bits == 0);
  Cnf none(1);
  none.add_clause({pos(1)});
  none.add_clause({neg(1)});
  CHECK(approx_count_projected(none, {1}, 9, 1).estimate == 0);
}

TEST_CASE("counting: 256 projected models within a factor 2") {
  // 12 projected variables, 4 pinned; 4 extra unprojected variables tied in.
  Cnf f(16);
  for (int v = 1; v <= 4; ++v) f.add_clause({Lit(v, v % 2 == 0)});
  for (int v = 13; v <= 16; ++v) f.add_clause({neg(v), pos(v - 8)});
  std::vector<Var> proj;
  for (int v = 1; v <= 12; ++v) proj.push_back(v);
  REQUIRE(brute_projected_count(f, proj) == 256);
  int good = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    auto e = approx_count_projected(f, proj, 9, seed);
    good += e.estimate >= 128 && e.estimate <= 512;
  }
  CHECK(good >= 40);
}

TEST_CASE("counting: medians do not grow when clauses are added") {
  std::mt19937_64 rng(6);
  for (int round = 0; round < 3; ++round) {
    Cnf f = random_kcnf(rng, 14, 20, 3);
    Cnf g = f;
    g.append(random_kcnf(rng, 14, 6, 3));
    std::vector<Var> proj;
    for (int v = 1; v <= 12; ++v) proj.push_back(v);
    std::vector<uint64_t> ef, eg;
    for (uint64_t seed = 0; seed < 50; ++seed) {
      ef.push_back(approx_count_projected(f, proj, 9, seed).estimate);
      eg.push_back(approx_count_projected(g, proj, 9, seed).estimate);
    }
    std::sort(ef.begin(), ef.end());
    std::sort(eg.begin(), eg.end());
    CHECK(eg[25] <= ef[25]);
  }
}

TEST_CASE("sampling: zero hash bits is a plain solve") {
  Cnf f(2);
  f.add_clause({pos(1), pos(2)});
  auto r = sample_projected(f, {1, 2}, 0, 3);
  REQUIRE(r.sat);
  CHECK(r.model.satisfies(f));
}

TEST_CASE("sampling: near-uniform over {0,1}^8 with 8 hash bits") {
  Cnf f(8);
  std::vector<Var> proj{1, 2, 3, 4, 5, 6, 7, 8};
  std::map<std::vector<bool>, int> freq;
  int draws = 0;
  Oracle o;
  for (uint64_t seed = 0; seed < 256 * 40; ++seed) {
    auto r = sample_with_retry(f, proj, 8, seed, o);
    REQUIRE(r.sat);
    ++freq[r.model.bits(proj)];
    ++draws;
  }
  CHECK(freq.size() == 256);
  double mean = draws / 256.0;
  for (auto& [pt, c] : freq) {
    CHECK(c <= 3 * mean);
    CHECK(c >= mean / 3);
  }
}

TEST_CASE("sampling: empty cells are reported unsat and retries recover") {
  Cnf f(3);
  f.add_clause({pos(1)});
  std::vector<Var> proj{1, 2, 3};
  int empty = 0;
  Oracle o;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    auto r = sample_projected(f, proj, 6, seed, o);
    if (!r.sat) ++empty;
    else CHECK(r.model.satisfies(f));
    auto q = sample_with_retry(f, proj, 6, seed, o, 8);
    CHECK(q.sat);
  }
  CHECK(empty > 0);
}
