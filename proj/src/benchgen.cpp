#include "skolem/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "skolem/error.hpp"
#include "skolem/oracle.hpp"

namespace skolem {

uint64_t bits_value(const std::vector<bool>& bits) {
  uint64_t v = 0;
  for (bool b : bits) v = (v << 1) | (b ? 1 : 0);
  return v;
}

std::vector<bool> value_bits(uint64_t v, int width) {
  std::vector<bool> out(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) out[static_cast<std::size_t>(i)] = (v >> (width - 1 - i)) & 1;
  return out;
}

namespace {

std::vector<Var> range_vars(int first, int count) {
  std::vector<Var> v;
  for (int i = 0; i < count; ++i) v.push_back(first + i);
  return v;
}

int ceil_log2(uint64_t n) {
  int r = 0;
  while ((1ull << r) < n) ++r;
  return r;
}

void check_bphp(const BphpParams& p) {
  if (p.k < 2 || p.m < 1) throw InvalidArgument("bPHP needs k >= 2 and m >= 1");
  if (p.m > 12) throw InvalidArgument("bPHP: m too large");
  if (p.regime == BphpRegime::Paper) {
    int n = p.k * p.m;
    if (p.m != ceil_log2(static_cast<uint64_t>(n)) - 1)
      throw InvalidArgument("paper regime needs m = ceil(log2(k*m)) - 1");
  } else if (p.regime == BphpRegime::Interpolation) {
    if (p.k != (1 << p.m) + 1) throw InvalidArgument("interpolation regime needs k = 2^m + 1");
  }
}

}  // namespace

Bphp gen_bphp(const BphpParams& p) {
  check_bphp(p);
  const int k = p.k, m = p.m;
  CircuitBuilder b;
  std::vector<NodeId> holes;
  for (uint32_t h = 0; h < (1u << m); ++h) {
    auto hb = value_bits(h, m);
    std::vector<NodeId> at(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      std::vector<NodeId> lits;
      for (int j = 0; j < m; ++j) lits.push_back(b.input(bphp_x(p, i, j)));
      at[static_cast<std::size_t>(i)] = b.equals_const(lits, hb);
    }
    std::vector<NodeId> pairs;
    for (int i1 = 0; i1 < k; ++i1)
      for (int i2 = i1 + 1; i2 < k; ++i2) pairs.push_back(b.land(at[static_cast<std::size_t>(i1)], at[static_cast<std::size_t>(i2)]));
    std::vector<NodeId> ys;
    for (int j = 0; j < m; ++j) ys.push_back(b.input(bphp_y(p, j)));
    holes.push_back(b.land(b.equals_const(ys, hb), b.lor(pairs)));
  }
  b.add_output(b.lor(holes));
  Bphp out{Specification(range_vars(1, k * m), range_vars(k * m + 1, m), b.finish()), Cnf(k * m + m)};
  for (uint32_t h = 0; h < (1u << m); ++h) {
    auto hb = value_bits(h, m);
    for (int i1 = 0; i1 < k; ++i1)
      for (int i2 = i1 + 1; i2 < k; ++i2) {
        Clause c;
        for (int j = 0; j < m; ++j) {
          c.push_back(Lit(bphp_x(p, i1, j), hb[static_cast<std::size_t>(j)]));
          c.push_back(Lit(bphp_x(p, i2, j), hb[static_cast<std::size_t>(j)]));
          c.push_back(Lit(bphp_y(p, j), hb[static_cast<std::size_t>(j)]));
        }
        out.neg_clauses.add_clause(c);
      }
  }
  return out;
}

SkolemVector bphp_lexfirst_skolem(const BphpParams& p) {
  check_bphp(p);
  const int k = p.k, m = p.m;
  const uint32_t holes = 1u << m;
  std::vector<Circuit> psis;
  for (int bit = 0; bit < m; ++bit) {
    // Built gate by gate so the size matches bphp_lexfirst_size exactly.
    Circuit c;
    std::vector<std::vector<NodeId>> pos_lit(static_cast<std::size_t>(k)), neg_lit(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < m; ++j) {
        NodeId x = c.add_input(bphp_x(p, i, j));
        pos_lit[static_cast<std::size_t>(i)].push_back(x);
        neg_lit[static_cast<std::size_t>(i)].push_back(c.add_not(x));
      }
    std::vector<NodeId> coll(holes);
    for (uint32_t h = 0; h < holes; ++h) {
      auto hb = value_bits(h, m);
      std::vector<NodeId> at;
      for (int i = 0; i < k; ++i) {
        auto lit = [&](int j) {
          return hb[static_cast<std::size_t>(j)] ? pos_lit[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                                 : neg_lit[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        };
        NodeId acc = lit(0);
        for (int j = 1; j < m; ++j) acc = c.add_binary(GateOp::And, acc, lit(j));
        at.push_back(acc);
      }
      NodeId any = 0;
      bool first = true;
      for (int i1 = 0; i1 < k; ++i1)
        for (int i2 = i1 + 1; i2 < k; ++i2) {
          NodeId pr = c.add_binary(GateOp::And, at[static_cast<std::size_t>(i1)], at[static_cast<std::size_t>(i2)]);
          any = first ? pr : c.add_binary(GateOp::Or, any, pr);
          first = false;
        }
      coll[h] = any;
    }
    // term_h = coll(h) ∧ ⋀_{h' < h} ¬coll(h')
    std::vector<NodeId> ncoll(holes);
    for (uint32_t h = 0; h + 1 < holes; ++h) ncoll[h] = c.add_not(coll[h]);
    std::vector<NodeId> term(holes);
    term[0] = coll[0];
    NodeId prefix = ncoll[0];
    for (uint32_t h = 1; h < holes; ++h) {
      if (h >= 2) prefix = c.add_binary(GateOp::And, prefix, ncoll[h - 1]);
      term[h] = c.add_binary(GateOp::And, coll[h], prefix);
    }
    NodeId out = 0;
    bool first = true;
    for (uint32_t h = 0; h < holes; ++h) {
      if (!value_bits(h, m)[static_cast<std::size_t>(bit)]) continue;
      out = first ? term[h] : c.add_binary(GateOp::Or, out, term[h]);
      first = false;
    }
    c.add_output(out);
    psis.push_back(std::move(c));
  }
  return SkolemVector(range_vars(1, k * m), range_vars(k * m + 1, m), std::move(psis));
}

std::size_t bphp_lexfirst_size(const BphpParams& p) {
  const std::size_t k = static_cast<std::size_t>(p.k), m = static_cast<std::size_t>(p.m);
  const std::size_t H = std::size_t{1} << m, pairs = k * (k - 1) / 2;
  std::size_t per = k * m + k * H * (m - 1) + H * pairs + H * (pairs - 1) + (H - 1) + (H - 2) + (H - 1) + (H / 2 - 1);
  return m * per;
}

// ---------------------------------------------------------------------------

namespace {

// Mux tree over `sel` (MSB first) choosing leaf[index].
NodeId mux_tree(CircuitBuilder& b, const std::vector<NodeId>& sel, std::size_t depth, std::vector<NodeId> leaves) {
  while (leaves.size() > 1) {
    NodeId s = sel[depth - 1];
    std::vector<NodeId> next;
    for (std::size_t i = 0; i + 1 < leaves.size(); i += 2) next.push_back(b.mux(s, leaves[i + 1], leaves[i]));
    leaves = std::move(next);
    --depth;
  }
  return leaves[0];
}

}  // namespace

std::vector<bool> trap_c(const Trap& t, const std::vector<bool>& x) {
  std::vector<bool> out;
  for (auto [a, b] : t.c_taps) out.push_back(x[static_cast<std::size_t>(a)] != x[static_cast<std::size_t>(b)]);
  return out;
}

std::vector<bool> trap_h(const Trap& t, const TrapParams& p, const std::vector<bool>& x, const std::vector<bool>& y1) {
  uint64_t row = 0;
  for (int i = 0; i < p.window; ++i) row = (row << 1) | x[static_cast<std::size_t>(i)];
  for (bool b : y1) row = (row << 1) | b;
  return t.h[row];
}

Trap gen_trap(const TrapParams& p) {
  if (p.m < 4 || p.m % 2) throw InvalidArgument("trap needs an even m >= 4");
  if (p.window < 0 || p.window > 12 || p.window > p.n) throw InvalidArgument("trap window must be <= min(12, n)");
  if (p.n < 2) throw InvalidArgument("trap needs n >= 2");
  const int half = p.m / 2;
  auto rng = rng_stream(p.seed, "trap");
  Trap t;
  for (int i = 0; i < half; ++i) t.s.push_back(rng() & 1);
  for (int j = 0; j < half; ++j) {
    int a = static_cast<int>(rng() % static_cast<uint64_t>(p.n));
    int b = static_cast<int>(rng() % static_cast<uint64_t>(p.n - 1));
    if (b >= a) ++b;
    t.c_taps.push_back({a, b});
  }
  const std::size_t rows = std::size_t{1} << (p.window + half);
  t.h.assign(rows, std::vector<bool>(static_cast<std::size_t>(half)));
  for (auto& r : t.h)
    for (int j = 0; j < half; ++j) r[static_cast<std::size_t>(j)] = rng() & 1;

  const int n = p.n;
  CircuitBuilder b;
  std::vector<NodeId> x, y1, y2;
  for (int i = 0; i < n; ++i) x.push_back(b.input(i + 1));
  for (int j = 0; j < half; ++j) y1.push_back(b.input(n + 1 + j));
  for (int j = 0; j < half; ++j) y2.push_back(b.input(n + 1 + half + j));
  std::vector<NodeId> cnodes;
  for (auto [a, c] : t.c_taps) cnodes.push_back(b.lxor(x[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(c)]));
  NodeId is_s = b.equals_const(y1, t.s);
  std::vector<NodeId> match_c, match_h;
  std::vector<NodeId> sel(x.begin(), x.begin() + p.window);
  sel.insert(sel.end(), y1.begin(), y1.end());
  for (int j = 0; j < half; ++j) {
    match_c.push_back(b.lxnor(y2[static_cast<std::size_t>(j)], cnodes[static_cast<std::size_t>(j)]));
    std::vector<NodeId> leaves;
    for (std::size_t r = 0; r < rows; ++r) leaves.push_back(b.constant(t.h[r][static_cast<std::size_t>(j)]));
    NodeId hj = mux_tree(b, sel, sel.size(), leaves);
    match_h.push_back(b.lxnor(y2[static_cast<std::size_t>(j)], hj));
  }
  NodeId f = b.lor(b.land(is_s, b.land(match_c)), b.land(b.lnot(is_s), b.land(match_h)));
  b.add_output(f);
  std::vector<Var> xs = range_vars(1, n), ys = range_vars(n + 1, p.m);
  t.spec = Specification(xs, ys, b.finish());

  std::vector<Circuit> psis;
  for (int j = 0; j < half; ++j) {
    Circuit c;
    c.add_output(c.add_const(t.s[static_cast<std::size_t>(j)]));
    psis.push_back(c);
  }
  for (auto [a, c2] : t.c_taps) {
    Circuit c;
    c.add_output(c.add_binary(GateOp::Xor, c.add_input(a + 1), c.add_input(c2 + 1)));
    psis.push_back(c);
  }
  t.small = SkolemVector(xs, ys, std::move(psis));
  return t;
}

TrapStats simulate_sequential(const TrapParams& p, const Trap& trap, int trials, uint64_t seed, int votes) {
  if (votes < 1 || votes % 2 == 0) throw InvalidArgument("votes must be odd");
  const int half = p.m / 2;
  TrapStats st;
  st.trials = trials;
  const Specification& spec = trap.spec;
  for (int tr = 0; tr < trials; ++tr) {
    auto rng = rng_stream(seed, "trap-trial", static_cast<uint64_t>(tr));
    // Every y1 has a completion, so every sampled assignment is consistent and
    // the majority over sampled y1 vectors is taken bit by bit.
    std::vector<bool> t(static_cast<std::size_t>(half));
    for (int j = 0; j < half; ++j) {
      int ones = 0;
      for (int v = 0; v < votes; ++v) ones += (rng() & 1);
      t[static_cast<std::size_t>(j)] = 2 * ones > votes;
    }
    bool chose_s = t == trap.s;
    st.chose_s += chose_s;
    // Block 2 forced by F: compare with h (or c) on sampled inputs.
    for (int probe = 0; probe < 8; ++probe) {
      std::vector<bool> x(static_cast<std::size_t>(p.n));
      for (auto&& b : x) b = rng() & 1;
      std::vector<bool> forced;
      int completions = 0;
      for (uint64_t y2 = 0; y2 < (1ull << half); ++y2) {
        std::vector<bool> y = t;
        auto yb = value_bits(y2, half);
        y.insert(y.end(), yb.begin(), yb.end());
        if (spec.eval(spec.assignment(x, y))) {
          ++completions;
          forced = yb;
        }
      }
      auto expect = chose_s ? trap_c(trap, x) : trap_h(trap, p, x, t);
      if (completions != 1 || forced != expect) st.second_block_matches_h = false;
    }
  }
  st.fraction_chose_s = trials ? static_cast<double>(st.chose_s) / trials : 0;
  return st;
}

// ---------------------------------------------------------------------------

namespace {

std::pair<NodeId, NodeId> full_adder(CircuitBuilder& b, NodeId x, NodeId y, NodeId z) {
  NodeId t = b.lxor(x, y);
  NodeId sum = b.lxor(t, z);
  NodeId carry = b.lor(b.land(x, y), b.land(t, z));
  return {sum, carry};
}

std::pair<NodeId, NodeId> half_adder(CircuitBuilder& b, NodeId x, NodeId y) { return {b.lxor(x, y), b.land(x, y)}; }

// Product bits, least significant first; a and b are LSB first.
std::vector<NodeId> array_multiplier(CircuitBuilder& b, const std::vector<NodeId>& a, const std::vector<NodeId>& c) {
  const std::size_t w = a.size();
  std::vector<std::optional<NodeId>> S(2 * w), C(2 * w + 1);
  for (std::size_t j = 0; j < w; ++j) S[j] = b.land(a[j], c[0]);
  for (std::size_t i = 1; i < w; ++i) {
    std::vector<std::optional<NodeId>> nextC(2 * w + 1);
    for (std::size_t j = 0; j < w; ++j) {
      std::size_t t = i + j;
      std::vector<NodeId> in{b.land(a[j], c[i])};
      if (S[t]) in.push_back(*S[t]);
      if (C[t]) in.push_back(*C[t]);
      if (in.size() == 3) {
        auto [s, cy] = full_adder(b, in[0], in[1], in[2]);
        S[t] = s;
        nextC[t + 1] = cy;
      } else if (in.size() == 2) {
        auto [s, cy] = half_adder(b, in[0], in[1]);
        S[t] = s;
        nextC[t + 1] = cy;
      } else {
        S[t] = in[0];
      }
    }
    C = nextC;
  }
  // Final ripple-carry stage.
  std::vector<NodeId> out(2 * w);
  std::optional<NodeId> carry;
  for (std::size_t t = 0; t < 2 * w; ++t) {
    std::vector<NodeId> in;
    if (S[t]) in.push_back(*S[t]);
    if (C[t]) in.push_back(*C[t]);
    if (carry) in.push_back(*carry);
    carry.reset();
    if (in.empty()) {
      out[t] = b.constant(false);
    } else if (in.size() == 1) {
      out[t] = in[0];
    } else if (in.size() == 2) {
      auto [s, cy] = half_adder(b, in[0], in[1]);
      out[t] = s;
      carry = cy;
    } else {
      auto [s, cy] = full_adder(b, in[0], in[1], in[2]);
      out[t] = s;
      carry = cy;
    }
  }
  return out;
}

}  // namespace

Specification gen_factor(const FactorParams& p) {
  const int n = p.bits, w = p.factor_bits ? p.factor_bits : p.bits;
  if (n < 1 || w < 1 || n > 32 || w > 16) throw InvalidArgument("factor widths out of range");
  CircuitBuilder b;
  std::vector<NodeId> x, y1, y2;  // MSB first
  for (int i = 0; i < n; ++i) x.push_back(b.input(i + 1));
  for (int j = 0; j < w; ++j) y1.push_back(b.input(n + 1 + j));
  for (int j = 0; j < w; ++j) y2.push_back(b.input(n + 1 + w + j));
  std::vector<NodeId> a(y1.rbegin(), y1.rend()), c(y2.rbegin(), y2.rend());
  std::vector<NodeId> prod = array_multiplier(b, a, c);  // LSB first, 2w bits
  std::vector<NodeId> xl(x.rbegin(), x.rend());
  std::size_t width = std::max(prod.size(), xl.size());
  std::vector<NodeId> eq;
  for (std::size_t t = 0; t < width; ++t) {
    NodeId pt = t < prod.size() ? prod[t] : b.constant(false);
    NodeId xt = t < xl.size() ? xl[t] : b.constant(false);
    eq.push_back(b.lxnor(pt, xt));
  }
  auto one = value_bits(1, w);
  NodeId ok = b.land(b.land(eq), b.land(b.lnot(b.equals_const(y1, one)), b.lnot(b.equals_const(y2, one))));
  b.add_output(ok);
  return Specification(range_vars(1, n), range_vars(n + 1, 2 * w), b.finish());
}

PlantedCover gen_planted_cover(int n, int m, int k, uint64_t seed) {
  if (n < 1 || n > 40 || m < 1 || m > 40) throw InvalidArgument("planted cover: n, m out of range");
  if (k < 1 || static_cast<uint64_t>(k) > (1ull << std::min(m, 40)) || static_cast<uint64_t>(k) > (1ull << n))
    throw InvalidArgument("planted cover needs 1 <= k <= min(2^m, 2^n)");
  auto rng = rng_stream(seed, "planted");
  PlantedCover pc;
  std::set<uint64_t> used;
  while (static_cast<int>(pc.targets.size()) < k) {
    uint64_t t = m >= 64 ? rng() : rng() & ((1ull << m) - 1);
    if (used.insert(t).second) pc.targets.push_back(value_bits(t, m));
  }
  const uint64_t total = 1ull << n;
  for (int j = 0; j <= k; ++j)
    pc.bounds.push_back(static_cast<uint64_t>((static_cast<unsigned __int128>(total) * static_cast<unsigned>(j)) / static_cast<unsigned>(k)));

  CircuitBuilder b;
  std::vector<NodeId> x, y;
  for (int i = 0; i < n; ++i) x.push_back(b.input(i + 1));
  for (int j = 0; j < m; ++j) y.push_back(b.input(n + 1 + j));
  // x >= lo as a circuit, MSB first
  auto geq = [&](uint64_t lo) -> NodeId {
    if (lo == 0) return b.constant(true);
    if (lo >= total) return b.constant(false);
    auto lb = value_bits(lo, n);
    NodeId acc = b.constant(true);  // suffix comparison, built from the LSB up
    for (int i = n - 1; i >= 0; --i) {
      NodeId xi = x[static_cast<std::size_t>(i)];
      if (lb[static_cast<std::size_t>(i)]) acc = b.land(xi, acc);
      else acc = b.lor(xi, acc);
    }
    return acc;
  };
  std::vector<NodeId> terms;
  for (int j = 0; j < k; ++j) {
    NodeId in = b.land(geq(pc.bounds[static_cast<std::size_t>(j)]), b.lnot(geq(pc.bounds[static_cast<std::size_t>(j) + 1])));
    terms.push_back(b.land(b.equals_const(y, pc.targets[static_cast<std::size_t>(j)]), in));
  }
  b.add_output(b.lor(terms));
  pc.spec = Specification(range_vars(1, n), range_vars(n + 1, m), b.finish());
  return pc;
}

Specification gen_random_spec(int n, int m, int gates, uint64_t seed) {
  if (n < 0 || m < 1 || gates < 1) throw InvalidArgument("random spec: bad sizes");
  auto rng = rng_stream(seed, "random-spec");
  CircuitBuilder b;
  std::vector<NodeId> pool;
  for (int v = 1; v <= n + m; ++v) pool.push_back(b.input(v));
  // Every output feeds the matrix through one of the first gates.
  for (int g = 0; g < gates; ++g) {
    auto pick = [&] {
      std::size_t sz = pool.size();
      std::size_t lo = sz > 6 && (rng() & 1) ? sz - 6 : 0;
      return pool[lo + rng() % (sz - lo)];
    };
    NodeId a = g < m ? pool[static_cast<std::size_t>(n + g)] : pick();
    NodeId c = pick();
    if (rng() % 4 == 0) c = b.lnot(c);
    switch (rng() % 3) {
      case 0: pool.push_back(b.land(a, c)); break;
      case 1: pool.push_back(b.lor(a, c)); break;
      default: pool.push_back(b.lxor(a, c)); break;
    }
  }
  NodeId out = pool.back();
  // Fold in any output that fell out of the cone.
  for (int j = 0; j < m; ++j) {
    CircuitBuilder probe = b;
    probe.add_output(out);
    auto used = probe.finish().input_vars();
    if (std::find(used.begin(), used.end(), n + 1 + j) != used.end()) continue;
    NodeId y = b.input(n + 1 + j);
    out = (rng() & 1) ? b.lxor(out, y) : b.lor(b.land(out, y), b.land(b.lnot(y), pool[rng() % pool.size()]));
  }
  b.add_output(out);
  return Specification(range_vars(1, n), range_vars(n + 1, m), b.finish());
}

}  // namespace skolem
