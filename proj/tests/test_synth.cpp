#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "skolem/benchgen.hpp"
#include "skolem/synth.hpp"
#include "skolem/verify.hpp"
#include "test_util.hpp"

using namespace skolem;
using namespace testutil;

namespace {

uint64_t truth_of(const Circuit& c, const std::vector<Var>& vars) {
  uint64_t t = 0;
  for (uint64_t r = 0; r < (1ull << vars.size()); ++r)
    if (c.eval1(assign(vars, r))) t |= 1ull << r;
  return t;
}

std::vector<Var> iota_vars(int n) {
  std::vector<Var> v;
  for (int i = 1; i <= n; ++i) v.push_back(i);
  return v;
}

// Y_1 <-> target(X)
Specification functional_spec(int n, const Circuit& target) {
  CircuitBuilder b;
  auto t = b.import(target, [&](Var v) { return b.input(v); })[0];
  b.add_output(b.lxnor(b.input(n + 1), t));
  return Specification(iota_vars(n), {n + 1}, b.finish());
}

}  // namespace

TEST_CASE("lex: identity relation") {
  CircuitBuilder b;
  b.add_output(b.lxnor(b.input(2), b.input(1)));
  Specification spec({1}, {2}, b.finish());
  SkolemVector psi = synth_lex(spec);
  CHECK(psi.eval({false}) == std::vector<bool>{false});
  CHECK(psi.eval({true}) == std::vector<bool>{true});
}

TEST_CASE("lex: factorization picks the smallest factor pair") {
  Specification spec = gen_factor(4);
  SkolemVector psi = synth_lex(spec);
  auto y6 = psi.eval(value_bits(6, 4));
  CHECK(bits_value(std::vector<bool>(y6.begin(), y6.begin() + 4)) == 2);
  CHECK(bits_value(std::vector<bool>(y6.begin() + 4, y6.end())) == 3);
  auto y4 = psi.eval(value_bits(4, 4));
  CHECK(bits_value(y4) == (2u << 4 | 2u));
}

TEST_CASE("lex: agrees with the brute-force smallest witness") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    int n = 1 + static_cast<int>(rng() % 6), m = 1 + static_cast<int>(rng() % 3);
    Specification spec = gen_random_spec(n, m, 6 + static_cast<int>(rng() % 10), rng());
    SkolemVector psi = synth_lex(spec);
    CHECK(psi.total_size() <= kLexSizeConstant * spec_size(spec) * static_cast<std::size_t>(m) << (2 * m));
    for (uint64_t x = 0; x < (1ull << n); ++x) {
      auto ys = brute_outputs(spec, x);
      CHECK(bits_value(psi.eval(bits_of(x, n))) == (ys.empty() ? 0 : ys.front()));
    }
  }
}

TEST_CASE("lex: refuses m over the limit") {
  Specification spec = gen_random_spec(2, 5, 8, 1);
  CHECK_THROWS_AS(synth_lex(spec, 4), InvalidArgument);
}

TEST_CASE("cover: single target") {
  CircuitBuilder b;
  std::vector<NodeId> ys{b.input(3), b.input(4), b.input(5)};
  b.add_output(b.equals_const(ys, {true, false, true}));
  Specification spec({1, 2}, {3, 4, 5}, b.finish());
  Oracle oracle;
  auto [psi, cs] = synth_cover(spec, oracle, 7);
  REQUIRE(cs.elements.size() == 1);
  CHECK(cs.elements[0] == std::vector<bool>{true, false, true});
  CHECK(cs.iterations == 1);
  CHECK(cs.certified);
  CHECK(verify_skolem(spec, psi, oracle).valid);
}

TEST_CASE("cover: unsatisfiable spec gives the empty set") {
  Circuit c;
  c.add_output(c.add_const(false));
  Specification spec({1}, {2}, c);
  Oracle oracle;
  auto [psi, cs] = synth_cover(spec, oracle, 1);
  CHECK(cs.elements.empty());
  CHECK(cs.certified);
  CHECK(psi.eval({true}) == std::vector<bool>{false});
  CHECK(verify_skolem(spec, psi, oracle).valid);
}

TEST_CASE("cover: planted instances") {
  Oracle oracle;
  for (int k : {1, 3, 6}) {
    PlantedCover pc = gen_planted_cover(8, 6, k, static_cast<uint64_t>(k));
    auto [psi, cs] = synth_cover(pc.spec, oracle, 100 + static_cast<uint64_t>(k));
    CHECK(cs.certified);
    CHECK(cs.elements.size() <= static_cast<std::size_t>(2 * k * (8 + 2)));
    CHECK(verify_skolem(pc.spec, psi, oracle).valid);
    CHECK(cs.uncovered.back() == 0);
    // lexicographically first element of S' satisfying F
    auto sorted = cs.elements;
    std::sort(sorted.begin(), sorted.end());
    for (uint64_t x = 0; x < 256; ++x) {
      auto xb = bits_of(x, 8);
      std::vector<bool> want(6, false);
      for (const auto& y : sorted)
        if (pc.spec.eval(pc.spec.assignment(xb, y))) {
          want = y;
          break;
        }
      CHECK(psi.eval(xb) == want);
    }
  }
}

TEST_CASE("cover circuit breaks ties toward the smaller element") {
  // F(x, y) = (y = 01) or (y = 10 and x)
  CircuitBuilder b;
  std::vector<NodeId> ys{b.input(2), b.input(3)};
  b.add_output(b.lor(b.equals_const(ys, {false, true}), b.land(b.equals_const(ys, {true, false}), b.input(1))));
  Specification spec({1}, {2, 3}, b.finish());
  SkolemVector psi = build_cover_circuit(spec, {{true, false}, {false, true}});
  CHECK(psi.eval({true}) == std::vector<bool>{false, true});
  CHECK(psi.eval({false}) == std::vector<bool>{false, true});
  CHECK(psi.total_size() <= 4 * spec_size(spec) * 2 * 4);
}

TEST_CASE("chain space: small counts") {
  auto sp = ChainSpace::enumerate(2, 1, 1000);
  REQUIRE(sp);
  CHECK(sp->total() == 9);  // x1, x2, 0, 1, ¬x1, ¬x2, AND, OR, XOR
  CHECK_FALSE(ChainSpace::enumerate(4, 5, 1000));
  // every representative computes its truth table
  auto sp3 = ChainSpace::enumerate(3, 3, 1 << 20);
  REQUIRE(sp3);
  for (const auto& e : sp3->entries()) CHECK(truth_of(chain_circuit(e.representative, {1, 2, 3}), {1, 2, 3}) == e.truth);
}

TEST_CASE("chain encoding matches enumeration") {
  Oracle oracle;
  std::mt19937_64 rng(8);
  for (auto [n, s] : {std::pair{2, 1}, {2, 2}, {3, 2}, {2, 3}, {1, 3}}) {
    auto sp = ChainSpace::enumerate(n, s, 1 << 20);
    REQUIRE(sp);
    for (int round = 0; round < 3; ++round) {
      std::vector<Example> ex;
      for (int k = 0; k < round; ++k) ex.push_back({bits_of(rng() % (1ull << n), n), static_cast<bool>(rng() & 1)});
      ChainEncoding enc = encode_bounded_circuits(n, s, ex);
      auto all = enumerate_projected(enc.cnf, enc.structure, 100000, oracle);
      std::set<std::vector<bool>> distinct(all.begin(), all.end());
      CHECK(distinct.size() == all.size());
      CHECK(all.size() == sp->consistent_count(ex));
      // every decoded chain is consistent and canonical chains decode to distinct descriptors
      std::map<uint64_t, uint64_t> hist;
      for (const auto& bits : all) {
        Assignment a;
        for (std::size_t k = 0; k < bits.size(); ++k) a.set(enc.structure[k], bits[k]);
        Chain ch = decode_chain(enc, a);
        Circuit c = chain_circuit(ch, iota_vars(n));
        uint64_t t = truth_of(c, iota_vars(n));
        hist[t]++;
        for (const auto& e : ex) CHECK(c.eval1(assign(iota_vars(n), bits_value(e.in))) == e.out);
      }
      for (const auto& e : sp->entries())
        if (sp->consistent(e, ex)) CHECK(hist[e.truth] == e.count);
    }
  }
}

TEST_CASE("chain encoding: one example, one gate") {
  Oracle oracle;
  ChainEncoding enc = encode_bounded_circuits(2, 1, {{{true, true}, true}});
  std::set<uint64_t> truths;
  for (const auto& bits : enumerate_projected(enc.cnf, enc.structure, 100, oracle)) {
    Assignment a;
    for (std::size_t k = 0; k < bits.size(); ++k) a.set(enc.structure[k], bits[k]);
    truths.insert(truth_of(chain_circuit(decode_chain(enc, a), {1, 2}), {1, 2}));
  }
  CHECK(truths.count(0b1000));  // AND
  CHECK(truths.count(0b1110));  // OR
  CHECK(truths.count(0b1111));  // CONST 1
  CHECK_FALSE(truths.count(0b0110));  // XOR is 0 on (1,1)
  ChainEncoding bad = encode_bounded_circuits(2, 2, {{{true, false}, true}, {{true, false}, false}});
  CHECK_FALSE(oracle.solve(bad.cnf).sat);
}

TEST_CASE("candidate pools are uniform over consistent chains") {
  Oracle oracle;
  const int draws = 2000;
  auto sp = ChainSpace::enumerate(2, 1, 1000);
  std::vector<Example> ex{{{false, false}, false}};
  std::map<uint64_t, double> want;
  double total = static_cast<double>(sp->consistent_count(ex));
  for (const auto& e : sp->entries())
    if (sp->consistent(e, ex)) want[e.truth] += static_cast<double>(e.count) / total;
  for (bool exact : {true, false}) {
    CandidatePool pool = sample_candidate_pool(2, 1, ex, {1, 2}, draws, 5, oracle, exact ? &*sp : nullptr);
    CHECK(pool.exact == exact);
    REQUIRE(pool.circuits.size() == draws);
    std::map<uint64_t, double> got;
    for (const auto& c : pool.circuits) got[truth_of(c, {1, 2})] += 1.0 / draws;
    double tv = 0;
    for (auto [t, p] : want) tv += std::abs(p - got[t]);
    for (auto [t, p] : got) CHECK(want.count(t));
    CHECK(tv / 2 < 0.15);
  }
}

TEST_CASE("majority hypothesis") {
  Circuit x1;
  x1.add_output(x1.add_input(1));
  Circuit nx1;
  nx1.add_output(nx1.add_not(nx1.add_input(1)));
  CandidatePool same{{x1, x1, x1}};
  CHECK(truth_of(majority_hypothesis(same), {1}) == truth_of(x1, {1}));
  CandidatePool mixed{{x1, nx1, x1}};
  CHECK(truth_of(majority_hypothesis(mixed), {1}) == 0b10);
  CandidatePool even{{x1, nx1}};  // padded with x1
  CHECK(truth_of(majority_hypothesis(even), {1}) == 0b10);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    CandidatePool pool;
    for (int k = 0; k < 5; ++k) pool.circuits.push_back(random_circuit(rng, {1, 2, 3}, 4));
    Circuit h = majority_hypothesis(pool);
    for (uint64_t r = 0; r < 8; ++r) {
      int ones = 0;
      for (const auto& c : pool.circuits) ones += c.eval1(assign({1, 2, 3}, r));
      Assignment a = assign({1, 2, 3}, r);
      CHECK(h.eval1(a) == (ones >= 3));
    }
  }
}

TEST_CASE("unique-bit learner on small functional specs") {
  Oracle oracle;
  SUBCASE("Y1 <-> X1 and X2") {
    Circuit t;
    t.add_output(t.add_binary(GateOp::And, t.add_input(1), t.add_input(2)));
    Specification spec = functional_spec(2, t);
    LearnerResult r = learn_unique_bit(spec, 0, oracle, 1);
    CHECK(truth_of(r.h, {1, 2}) == truth_of(t, {1, 2}));
    CHECK(r.exact_space);
    for (std::size_t k = 1; k < r.consistent_counts.size(); ++k)
      CHECK(r.consistent_counts[k] < r.consistent_counts[k - 1]);
  }
  SUBCASE("Y1 <-> X1 over 20 seeds") {
    Circuit t;
    t.add_output(t.add_input(1));
    Specification spec = functional_spec(1, t);
    for (uint64_t seed = 0; seed < 20; ++seed) {
      LearnerResult r = learn_unique_bit(spec, 0, oracle, seed);
      CHECK(truth_of(r.h, {1}) == 0b10);
      CHECK(r.rounds <= 4);
    }
  }
  SUBCASE("hashed sampling path") {
    Circuit t;
    t.add_output(t.add_binary(GateOp::Xor, t.add_input(1), t.add_input(2)));
    Specification spec = functional_spec(2, t);
    LearnerOptions o;
    o.enumeration_cap = 0;
    o.s0 = 2;
    LearnerResult r = learn_unique_bit(spec, 0, oracle, 3, o);
    CHECK_FALSE(r.exact_space);
    CHECK(truth_of(r.h, {1, 2}) == 0b0110);
  }
  SUBCASE("second output read from the first") {
    // Y1 free, Y2 <-> (Y1 xor X1) and X2
    CircuitBuilder b;
    NodeId tgt = b.land(b.lxor(b.input(3), b.input(1)), b.input(2));
    b.add_output(b.lxnor(b.input(4), tgt));
    Specification spec({1, 2}, {3, 4}, b.finish());
    REQUIRE(check_unique(spec, 1, prefix_vars(spec, 1), oracle));
    LearnerResult r = learn_unique_bit(spec, 1, oracle, 9);
    Circuit ref;
    ref.add_output(ref.add_binary(GateOp::And, ref.add_binary(GateOp::Xor, ref.add_input(3), ref.add_input(1)),
                                  ref.add_input(2)));
    CHECK(truth_of(r.h, {1, 2, 3}) == truth_of(ref, {1, 2, 3}));
  }
}

TEST_CASE("auto dispatch") {
  Oracle oracle;
  SUBCASE("small m takes the lex path") {
    Specification spec = gen_random_spec(3, 3, 10, 2);
    AutoReport rep;
    SkolemVector psi = synth_auto(spec, oracle, 1, {}, &rep);
    CHECK(rep.used == Strategy::Lex);
    CHECK(brute_valid(spec, psi));
  }
  SUBCASE("bPHP(4,2) goes to cover") {
    Bphp f = gen_bphp({4, 2, BphpRegime::Free});
    AutoConfig cfg;
    cfg.lex_limit = 0;
    AutoReport rep;
    SkolemVector psi = synth_auto(f.spec, oracle, 1, cfg, &rep);
    CHECK(rep.used == Strategy::Cover);
    CHECK(brute_valid(f.spec, psi));
  }
  SUBCASE("unique first bit, free second bit") {
    // (Y1 <-> X1 xor X2) and (Y2 or X3)
    CircuitBuilder b;
    b.add_output(b.land(b.lxnor(b.input(4), b.lxor(b.input(1), b.input(2))), b.lor(b.input(5), b.input(3))));
    Specification spec({1, 2, 3}, {4, 5}, b.finish());
    AutoConfig cfg;
    cfg.lex_limit = 0;
    AutoReport rep;
    SkolemVector psi = synth_auto(spec, oracle, 5, cfg, &rep);
    CHECK(rep.used == Strategy::Auto);
    CHECK(rep.unique_bits == std::vector<std::size_t>{0});
    CHECK(rep.cover_bits == std::vector<std::size_t>{1});
    CHECK(brute_valid(spec, psi));
  }
}
