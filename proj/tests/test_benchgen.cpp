#include <random>
#include <set>

#include "doctest.h"
#include "skolem/benchgen.hpp"
#include "skolem/error.hpp"
#include "test_util.hpp"

using namespace skolem;
using namespace testutil;

namespace {

// Hole of each pigeon, read from x (MSB first per pigeon).
std::vector<uint64_t> pigeon_holes(const BphpParams& p, uint64_t x) {
  auto xb = bits_of(x, p.k * p.m);
  std::vector<uint64_t> out;
  for (int i = 0; i < p.k; ++i)
    out.push_back(bits_value(std::vector<bool>(xb.begin() + i * p.m, xb.begin() + (i + 1) * p.m)));
  return out;
}

bool collided(const std::vector<uint64_t>& holes, uint64_t h) {
  int c = 0;
  for (auto v : holes) c += v == h;
  return c >= 2;
}

}  // namespace

TEST_CASE("bPHP semantics and clausal negation, exhaustive") {
  for (auto [k, m] : {std::pair{3, 1}, {4, 1}, {3, 2}, {5, 2}}) {
    BphpParams p{k, m, BphpRegime::Free};
    Bphp f = gen_bphp(p);
    CHECK(f.neg_clauses.size() == (std::size_t{1} << m) * static_cast<std::size_t>(k * (k - 1) / 2));
    CHECK(f.neg_clauses.width() == 3 * m);
    for (uint64_t x = 0; x < (1ull << (k * m)); ++x) {
      auto holes = pigeon_holes(p, x);
      for (uint64_t y = 0; y < (1ull << m); ++y) {
        auto a = f.spec.assignment(bits_of(x, k * m), bits_of(y, m));
        bool expect = collided(holes, y);
        CHECK(f.spec.eval(a) == expect);
        CHECK(a.satisfies(f.neg_clauses) == !expect);
      }
    }
  }
}

TEST_CASE("bPHP regimes") {
  CHECK_NOTHROW(gen_bphp({8, 4, BphpRegime::Paper}));
  CHECK_NOTHROW(gen_bphp({3, 1, BphpRegime::Paper}));
  CHECK_THROWS_AS(gen_bphp({5, 1, BphpRegime::Paper}), InvalidArgument);
  CHECK_NOTHROW(gen_bphp({5, 2, BphpRegime::Interpolation}));
  CHECK_THROWS_AS(gen_bphp({4, 2, BphpRegime::Interpolation}), InvalidArgument);
  CHECK_THROWS_AS(gen_bphp({1, 2, BphpRegime::Free}), InvalidArgument);
}

TEST_CASE("bPHP lexicographically first collided hole, exhaustive") {
  for (auto [k, m] : {std::pair{3, 1}, {4, 1}, {3, 2}, {5, 2}, {4, 3}}) {
    BphpParams p{k, m, BphpRegime::Free};
    Bphp f = gen_bphp(p);
    SkolemVector psi = bphp_lexfirst_skolem(p);
    CHECK(psi.total_size() == bphp_lexfirst_size(p));
    for (uint64_t x = 0; x < (1ull << (k * m)); ++x) {
      auto ys = brute_outputs(f.spec, x);
      uint64_t want = ys.empty() ? 0 : ys.front();
      CHECK(bits_value(psi.eval(bits_of(x, k * m))) == want);
    }
  }
}

TEST_CASE("trap: one completion per first block, small vector valid") {
  TrapParams p{6, 4, 3, 17};
  Trap t = gen_trap(p);
  CHECK(t.s.size() == 2);
  for (uint64_t x = 0; x < (1ull << p.n); ++x) {
    auto xb = bits_of(x, p.n);
    auto ys = brute_outputs(t.spec, x);
    CHECK(ys.size() == 4);
    for (uint64_t y1 = 0; y1 < 4; ++y1) {
      auto y1b = bits_of(y1, 2);
      auto expect = y1b == t.s ? trap_c(t, xb) : trap_h(t, p, xb, y1b);
      auto y = y1b;
      y.insert(y.end(), expect.begin(), expect.end());
      CHECK(t.spec.eval(t.spec.assignment(xb, y)));
    }
  }
  CHECK(brute_valid(t.spec, t.small));
  CHECK_THROWS_AS(gen_trap({6, 5, 3, 0}), InvalidArgument);
}

TEST_CASE("sequential simulation on the trap") {
  TrapParams p{8, 8, 4, 3};
  Trap t = gen_trap(p);
  TrapStats st = simulate_sequential(p, t, 400, 9);
  CHECK(st.trials == 400);
  CHECK(st.second_block_matches_h);
  // chose_s is Binomial(400, 1/16): mean 25, sd < 5
  CHECK(st.chose_s >= 10);
  CHECK(st.chose_s <= 40);
}

TEST_CASE("factorization semantics, exhaustive") {
  for (auto [bits, fb] : {std::pair{4, 4}, {6, 3}, {5, 2}}) {
    Specification spec = gen_factor(FactorParams{bits, fb});
    CHECK(spec.n() == bits);
    CHECK(spec.m() == 2 * fb);
    for (uint64_t x = 0; x < (1ull << bits); ++x)
      for (uint64_t a = 0; a < (1ull << fb); ++a)
        for (uint64_t b = 0; b < (1ull << fb); ++b) {
          auto y = bits_of(a, fb);
          auto yb = bits_of(b, fb);
          y.insert(y.end(), yb.begin(), yb.end());
          bool expect = a * b == x && a != 1 && b != 1;
          CHECK(spec.eval(spec.assignment(bits_of(x, bits), y)) == expect);
        }
  }
}

TEST_CASE("planted cover semantics") {
  PlantedCover pc = gen_planted_cover(6, 4, 3, 2);
  REQUIRE(pc.targets.size() == 3);
  CHECK(std::set<std::vector<bool>>(pc.targets.begin(), pc.targets.end()).size() == 3);
  CHECK(pc.bounds == std::vector<uint64_t>{0, 21, 42, 64});
  for (uint64_t x = 0; x < 64; ++x) {
    auto ys = brute_outputs(pc.spec, x);
    REQUIRE(ys.size() == 1);
    std::size_t cell = 0;
    while (!(pc.bounds[cell] <= x && x < pc.bounds[cell + 1])) ++cell;
    CHECK(ys[0] == bits_value(pc.targets[cell]));
  }
  CHECK_THROWS_AS(gen_planted_cover(2, 4, 5, 0), InvalidArgument);
}

TEST_CASE("random specs are seeded and read every output") {
  Specification a = gen_random_spec(5, 3, 20, 4), b = gen_random_spec(5, 3, 20, 4);
  CHECK(a.cnf().clauses() == b.cnf().clauses());
  auto ins = a.matrix().input_vars();
  for (Var y : a.outputs()) CHECK(std::find(ins.begin(), ins.end(), y) != ins.end());
}

TEST_CASE("bit vector helpers") {
  CHECK(bits_value({true, false, true}) == 5);
  CHECK(value_bits(5, 4) == std::vector<bool>{false, true, false, true});
}
