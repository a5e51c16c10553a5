#include <random>

#include "doctest.h"
#include "skolem/error.hpp"
#include "skolem/io.hpp"
#include "skolem/tseitin.hpp"
#include "test_util.hpp"

using namespace skolem;
using namespace testutil;

TEST_CASE("normalize_clause sorts, dedupes and spots tautologies") {
  Clause c{pos(3), neg(1), pos(3)};
  CHECK(normalize_clause(c));
  CHECK(c == Clause{neg(1), pos(3)});
  Clause t{pos(2), neg(2)};
  CHECK_FALSE(normalize_clause(t));
  Cnf f(3);
  CHECK_FALSE(f.add_clause({pos(1), neg(1)}));
  CHECK(f.size() == 0);
  CHECK_THROWS_AS(f.add_clause({Lit(0)}), InvalidArgument);
}

TEST_CASE("tseitin of an asserted AND gate") {
  Circuit c;
  NodeId a = c.add_input(1), b = c.add_input(2);
  c.add_output(c.add_binary(GateOp::And, a, b));
  auto r = tseitin(c);
  REQUIRE(r.cnf.size() == 4);
  Lit g = r.node_lit[2];
  CHECK(g == pos(3));
  std::vector<Clause> want{{neg(3), pos(1)}, {neg(3), pos(2)}, {neg(1), neg(2), pos(3)}, {pos(3)}};
  for (auto& w : want) normalize_clause(w);
  CHECK(r.cnf.clauses() == want);
}

TEST_CASE("tseitin of CONST(1) is one satisfied unit") {
  Circuit c;
  c.add_output(c.add_const(true));
  auto r = tseitin(c);
  CHECK(r.cnf.size() == 1);
  CHECK(r.cnf.clauses()[0].size() == 1);
  CHECK_FALSE(r.cnf.clauses()[0][0].negative());
}

TEST_CASE("tseitin soundness, exhaustive over inputs, brute force over auxiliaries") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 60; ++round) {
    int nin = 2 + static_cast<int>(rng() % 6);
    std::vector<Var> vars;
    for (int i = 1; i <= nin; ++i) vars.push_back(i);
    Circuit c = random_circuit(rng, vars, 2 + static_cast<int>(rng() % 6));
    auto r = tseitin(c, true, nin + 1);
    std::size_t gates = 0, xors = 0;
    for (const auto& g : c.gates()) {
      if (g.op == GateOp::And || g.op == GateOp::Or) ++gates;
      if (g.op == GateOp::Xor) ++xors;
    }
    CHECK(r.cnf.size() <= 3 * c.size() + xors + 1);
    for (uint64_t x = 0; x < (1ull << nin); ++x) {
      Assignment a = assign(vars, x);
      CHECK(brute_sat(r.cnf, a) == c.eval1(a));
    }
  }
}

TEST_CASE("substitute on the identity relation") {
  Circuit m;
  NodeId x = m.add_input(1), y = m.add_input(2);
  m.add_output(m.add_not(m.add_binary(GateOp::Xor, x, y)));
  Specification spec({1}, {2}, m);

  Circuit id;
  id.add_output(id.add_input(1));
  Circuit neg_id;
  neg_id.add_output(neg_id.add_not(neg_id.add_input(1)));

  for (bool flip : {false, true}) {
    SkolemVector psi(spec, {flip ? neg_id : id});
    Circuit s = substitute(spec, psi);
    for (bool xv : {false, true}) {
      Assignment a;
      a.set(1, xv);
      CHECK(s.eval1(a) == !flip);
    }
  }
}

TEST_CASE("substitute/eval coherence on random specs") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    int n = 3 + static_cast<int>(rng() % 4), m = 1 + static_cast<int>(rng() % 3);
    Specification spec = random_spec(rng, n, m, 10);
    std::vector<Circuit> psis;
    for (int i = 0; i < m; ++i) {
      std::vector<Var> allowed = spec.inputs();
      for (int j = 0; j < i; ++j) allowed.push_back(spec.outputs()[j]);
      psis.push_back(random_circuit(rng, allowed, 4));
    }
    SkolemVector psi(spec, psis);
    Circuit s = substitute(spec, psi);
    CHECK(s.size() <= spec.matrix().size() + psi.total_size());
    for (uint64_t x = 0; x < (1ull << n); ++x) {
      Assignment a = assign(spec.inputs(), x);
      Assignment full = psi.apply(a);
      CHECK(s.eval1(a) == spec.eval(full));
    }
  }
}

TEST_CASE("SkolemVector rejects cyclic dependencies at construction") {
  Circuit m;
  m.add_output(m.add_binary(GateOp::Or, m.add_input(2), m.add_input(3)));
  Specification spec({1}, {2, 3}, m);
  Circuit reads_y2;
  reads_y2.add_output(reads_y2.add_input(3));
  Circuit c1;
  c1.add_output(c1.add_input(1));
  CHECK_THROWS_AS(SkolemVector(spec, {reads_y2, c1}), InvalidArgument);
  CHECK_NOTHROW(SkolemVector(spec, {c1, rename_inputs(c1, [](Var) { return 2; })}));
  Circuit self;
  self.add_output(self.add_input(3));
  CHECK_THROWS_AS(SkolemVector(spec, {c1, self}), InvalidArgument);
}

TEST_CASE("eval basics") {
  Circuit c;
  NodeId a = c.add_input(1);
  c.add_output(c.add_not(a));
  c.add_output(c.add_binary(GateOp::Xor, a, a));
  Assignment x;
  x.set(1, true);
  CHECK(c.eval(x) == std::vector<bool>{false, false});
  CHECK_THROWS_AS(c.eval(Assignment()), InvalidArgument);
}

TEST_CASE("parse_spec: smallest QDIMACS instance") {
  Specification s = parse_spec("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n");
  CHECK(s.inputs() == std::vector<Var>{1});
  CHECK(s.outputs() == std::vector<Var>{2});
  CHECK(s.cnf().size() == 1);
  CHECK(s.format() == SourceFormat::Qdimacs);
  for (int v = 0; v < 4; ++v) {
    Assignment a = s.assignment({bool(v & 1)}, {bool(v & 2)});
    CHECK(s.eval(a) == (v != 0));
  }
}

TEST_CASE("parse_spec: annotated DIMACS equals the QDIMACS form") {
  const char* q = "p cnf 4 3\na 1 2 0\ne 3 0\n1 3 0\n-2 -3 4 0\n-4 3 0\n";
  const char* d = "c inputs 1 2\nc outputs 3\np cnf 4 3\n1 3 0\n-2 -3 4 0\n-4 3 0\n";
  Specification a = parse_spec(q), b = parse_spec(d);
  CHECK(a.inputs() == b.inputs());
  CHECK(a.outputs() == b.outputs());
  CHECK(a.cnf().clauses() == b.cnf().clauses());
  CHECK(b.format() == SourceFormat::AnnotatedDimacs);
  for (int v = 0; v < 8; ++v) {
    Assignment x = a.assignment({bool(v & 1), bool(v & 2)}, {bool(v & 4)});
    CHECK(a.eval(x) == b.eval(x));
  }
}

TEST_CASE("parse_spec errors carry line numbers") {
  try {
    parse_spec("p cnf 4 2\na 1 0\ne 2 0\n1 2 0\n3 5 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  try {
    parse_spec("p cnf x 2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse_spec("p cnf 3 0\na 1 2 0\ne 2 3 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("write_qdimacs/parse_spec round trip keeps F") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 40; ++round) {
    int n = 2 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 3);
    Specification s = random_spec(rng, n, m, 12);
    Specification t = parse_spec(write_qdimacs(s));
    CHECK(t.inputs() == s.inputs());
    CHECK(t.outputs() == s.outputs());
    CHECK(t.cnf().clauses() == s.cnf().clauses());
    for (uint64_t v = 0; v < (1ull << (n + m)); ++v) {
      Assignment a = assign([&] {
        auto all = s.inputs();
        all.insert(all.end(), s.outputs().begin(), s.outputs().end());
        return all;
      }(), v);
      CHECK(t.eval(a) == s.eval(a));
    }
  }
}

namespace {
SkolemVector random_vector(std::mt19937_64& rng, int n, int m) {
  std::vector<Var> xs, ys;
  for (int i = 1; i <= n; ++i) xs.push_back(i);
  for (int j = 1; j <= m; ++j) ys.push_back(n + j);
  std::vector<Circuit> psis;
  for (int i = 0; i < m; ++i) {
    std::vector<Var> allowed = xs;
    for (int j = 0; j < i; ++j) allowed.push_back(ys[j]);
    int kind = static_cast<int>(rng() % 8);
    Circuit c;
    if (kind == 0) {
      c.add_output(c.add_const(rng() & 1));
    } else if (kind == 1) {
      c.add_output(c.add_input(allowed[rng() % allowed.size()]));
    } else if (kind == 2) {
      NodeId a = c.add_input(allowed[0]);
      c.add_output(c.add_binary(GateOp::Or, a, c.add_const(rng() & 1)));
    } else {
      c = random_circuit(rng, allowed, 1 + static_cast<int>(rng() % 6));
    }
    psis.push_back(c);
  }
  return SkolemVector(xs, ys, psis);
}
}  // namespace

TEST_CASE("gate-list: a CONST vector is a one-gate document") {
  Circuit c;
  c.add_output(c.add_const(true));
  SkolemVector v({1}, {2}, {c});
  CHECK(emit_skolem(v) == "skolem 1 1\ng1 = CONST(1)\ny1 := g1\n");
}

TEST_CASE("gate-list emit/parse round trip on 100 random vectors") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    int n = 1 + static_cast<int>(rng() % 5), m = 1 + static_cast<int>(rng() % 4);
    SkolemVector v = random_vector(rng, n, m);
    std::string text = emit_skolem(v);
    SkolemVector w = parse_skolem(text, v.inputs(), v.outputs());
    CHECK(emit_skolem(w) == text);
    for (uint64_t x = 0; x < (1ull << n); ++x) CHECK(v.eval(bits_of(x, n)) == w.eval(bits_of(x, n)));
  }
}

TEST_CASE("gate-list parser rejects bad documents") {
  std::vector<Var> xs{1}, ys{2, 3};
  CHECK_THROWS_AS(parse_skolem("skolem 2 1\ng1 = AND(x1,y2)\ny1 := g1\ng2 = NOT(x1)\ny2 := g2\n", xs, ys),
                  ParseError);
  CHECK_THROWS_AS(parse_skolem("skolem 1 1\ng1 = NAND(x1,x1)\ny1 := g1\n", xs, {2}), ParseError);
  CHECK_THROWS_AS(parse_skolem("skolem 2 2\n", xs, ys), ParseError);
  CHECK_NOTHROW(parse_skolem("skolem 2 1\ng1 = NOT(x1)\ny1 := g1\ng2 = AND(y1,x1)\ny2 := g2\n", xs, ys));
}

TEST_CASE("AIGER export re-evaluates identically") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 30; ++round) {
    int n = 1 + static_cast<int>(rng() % 10), m = 1 + static_cast<int>(rng() % 3);
    SkolemVector v = random_vector(rng, n, m);
    std::string aag = emit_skolem(v, SkolemFormat::AigerAscii);
    CHECK(aag.rfind("aag ", 0) == 0);
    CHECK(aag.find("i0 x1") != std::string::npos);
    Circuit c = parse_aiger_ascii(aag, v.inputs());
    REQUIRE(c.outputs().size() == static_cast<std::size_t>(m));
    for (uint64_t x = 0; x < (1ull << n); ++x) {
      Assignment a = assign(v.inputs(), x);
      CHECK(c.eval(a) == v.eval(bits_of(x, n)));
    }
  }
}
