#include <random>

#include "doctest.h"
#include "skolem/benchgen.hpp"
#include "skolem/verify.hpp"
#include "test_util.hpp"

using namespace skolem;
using namespace testutil;

namespace {

Circuit single_literal(Var v, bool negate) {
  Circuit c;
  NodeId n = c.add_input(v);
  c.add_output(negate ? c.add_not(n) : n);
  return c;
}

Circuit constant(bool b) {
  Circuit c;
  c.add_output(c.add_const(b));
  return c;
}

bool is_counterexample(const Specification& spec, const SkolemVector& psi, const Assignment& w) {
  auto x = w.bits(spec.inputs());
  auto y = w.bits(spec.outputs());
  return spec.eval(spec.assignment(x, y)) && !spec.eval(spec.assignment(x, psi.eval(x)));
}

}  // namespace

TEST_CASE("identity relation: copy is valid, negation is refuted") {
  CircuitBuilder b;
  b.add_output(b.lxnor(b.input(2), b.input(1)));
  Specification spec({1}, {2}, b.finish());
  Oracle oracle;

  Verdict ok = verify_skolem(spec, SkolemVector(spec, {single_literal(1, false)}), oracle);
  CHECK(ok.valid);

  SkolemVector bad(spec, {single_literal(1, true)});
  Verdict no = verify_skolem(spec, bad, oracle);
  REQUIRE_FALSE(no.valid);
  CHECK(is_counterexample(spec, bad, no.witness));
}

TEST_CASE("factorization with constant factors 2 and 2") {
  Specification spec = gen_factor(4);
  std::vector<Circuit> psis;
  for (bool b : value_bits(2, 4)) psis.push_back(constant(b));
  for (bool b : value_bits(2, 4)) psis.push_back(constant(b));
  SkolemVector psi(spec, psis);
  Oracle oracle;
  Verdict v = verify_skolem(spec, psi, oracle);
  REQUIRE_FALSE(v.valid);
  CHECK(is_counterexample(spec, psi, v.witness));
  uint64_t x = bits_value(v.witness.bits(spec.inputs()));
  CHECK(x != 4);
  auto y = v.witness.bits(spec.outputs());
  uint64_t y1 = bits_value(std::vector<bool>(y.begin(), y.begin() + 4));
  uint64_t y2 = bits_value(std::vector<bool>(y.begin() + 4, y.end()));
  CHECK(y1 * y2 == x);
}

TEST_CASE("verifier agrees with brute force on random vectors") {
  std::mt19937_64 rng(11);
  Oracle oracle;
  int valid = 0, invalid = 0;
  for (int t = 0; t < 150; ++t) {
    int n = 1 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 3);
    Specification spec = random_spec(rng, n, m, 4 + static_cast<int>(rng() % 10));
    std::vector<Circuit> psis;
    for (int i = 0; i < m; ++i) {
      std::vector<Var> readable(spec.inputs());
      for (int j = 0; j < i; ++j) readable.push_back(spec.outputs()[static_cast<std::size_t>(j)]);
      psis.push_back(random_circuit(rng, readable, static_cast<int>(rng() % 4)));
    }
    SkolemVector psi(spec, psis);
    bool expect = brute_valid(spec, psi);
    Verdict v = verify_skolem(spec, psi, oracle);
    CHECK(v.valid == expect);
    if (!v.valid) CHECK(is_counterexample(spec, psi, v.witness));
    (expect ? valid : invalid)++;
  }
  CHECK(valid > 10);
  CHECK(invalid > 10);
}

TEST_CASE("error formula is satisfiable exactly when the vector is invalid") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    Specification spec = random_spec(rng, 2, 2, 5);
    std::vector<Circuit> psis{random_circuit(rng, spec.inputs(), 2),
                              random_circuit(rng, {1, 2, spec.outputs()[0]}, 2)};
    SkolemVector psi(spec, psis);
    ErrorFormula e = build_error_formula(spec, psi);
    CHECK(e.y_prime.size() == 2);
    CHECK(brute_sat(e.cnf, Assignment()) == !brute_valid(spec, psi));
  }
}

TEST_CASE("check_unique on small examples") {
  Oracle oracle;
  SUBCASE("Y1 or Y2: Y1 is not determined by X and Y2") {
    CircuitBuilder b;
    b.add_output(b.lor(b.input(2), b.input(3)));
    Specification spec({1}, {2, 3}, b.finish());
    std::pair<Assignment, Assignment> w;
    CHECK_FALSE(check_unique(spec, 0, {1, 3}, oracle, &w));
    CHECK(spec.eval(w.first));
    CHECK(spec.eval(w.second));
    CHECK(w.first.get(3) == w.second.get(3));
    CHECK(w.first.get(2) != w.second.get(2));
  }
  SUBCASE("identity: Y1 determined by X1") {
    CircuitBuilder b;
    b.add_output(b.lxnor(b.input(2), b.input(1)));
    Specification spec({1}, {2}, b.finish());
    CHECK(check_unique(spec, 0, {1}, oracle));
    CHECK_FALSE(check_unique(spec, 0, {}, oracle));
  }
  SUBCASE("bPHP(4,1): Y1 is not a function of X") {
    Bphp f = gen_bphp({4, 1, BphpRegime::Free});
    CHECK_FALSE(check_unique(f.spec, 0, f.spec.inputs(), oracle));
  }
  SUBCASE("Y_i in Z is rejected") {
    CircuitBuilder b;
    b.add_output(b.input(2));
    Specification spec({1}, {2}, b.finish());
    CHECK_THROWS_AS(check_unique(spec, 0, {2}, oracle), InvalidArgument);
  }
}

TEST_CASE("check_unique agrees with brute force and is monotone in Z") {
  std::mt19937_64 rng(23);
  Oracle oracle;
  int unique = 0;
  for (int t = 0; t < 120; ++t) {
    int n = 1 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 3);
    Specification spec = random_spec(rng, n, m, 3 + static_cast<int>(rng() % 8));
    std::size_t i = rng() % static_cast<uint64_t>(m);
    std::vector<Var> others;
    for (Var v : spec.inputs()) others.push_back(v);
    for (std::size_t j = 0; j < spec.outputs().size(); ++j)
      if (j != i) others.push_back(spec.outputs()[j]);
    std::vector<Var> z;
    for (Var v : others)
      if (rng() & 1) z.push_back(v);
    bool u = check_unique(spec, i, z, oracle);
    CHECK(u == brute_unique(spec, i, z));
    unique += u;
    if (u) CHECK(check_unique(spec, i, others, oracle));
  }
  CHECK(unique > 5);
}

TEST_CASE("prefix_vars") {
  Specification spec = gen_factor(FactorParams{4, 2});
  auto p = prefix_vars(spec, 2);
  CHECK(p == std::vector<Var>{1, 2, 3, 4, 5, 6});
}
