#pragma once

#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "skolem/circuit.hpp"
#include "skolem/spec.hpp"

namespace testutil {

using namespace skolem;

/// Random single-output circuit over `vars` with about `gates` gates.
inline Circuit random_circuit(std::mt19937_64& rng, const std::vector<Var>& vars, int gates) {
  Circuit c;
  std::vector<NodeId> pool;
  for (Var v : vars) pool.push_back(c.add_input(v));
  if (pool.empty()) pool.push_back(c.add_const(rng() & 1));
  for (int g = 0; g < gates; ++g) {
    auto pick = [&] {
      // bias toward recent nodes so the output cone is deep
      std::size_t n = pool.size();
      std::size_t lo = n > 4 && (rng() & 1) ? n - 4 : 0;
      return pool[lo + rng() % (n - lo)];
    };
    int kind = static_cast<int>(rng() % 7);
    if (kind == 0) {
      pool.push_back(c.add_not(pick()));
    } else {
      GateOp op = kind <= 2 ? GateOp::And : kind <= 4 ? GateOp::Or : GateOp::Xor;
      NodeId a = pick(), b = pick();
      pool.push_back(c.add_binary(op, a, b));
    }
  }
  c.add_output(pool.back());
  return c;
}

inline std::vector<bool> bits_of(uint64_t v, int n) {
  std::vector<bool> out(n);
  for (int i = 0; i < n; ++i) out[i] = (v >> (n - 1 - i)) & 1;  // MSB first
  return out;
}

inline Assignment assign(const std::vector<Var>& vars, uint64_t v) {
  Assignment a;
  auto b = bits_of(v, static_cast<int>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i) a.set(vars[i], b[i]);
  return a;
}

/// Brute-force satisfiability of `cnf` with the variables of `fixed` pinned.
inline bool brute_sat(const Cnf& cnf, const Assignment& fixed) {
  std::vector<Var> free;
  for (Var v = 1; v <= cnf.num_vars(); ++v)
    if (!fixed.has(v)) free.push_back(v);
  if (free.size() > 22) throw std::runtime_error("brute_sat: too many free variables");
  Assignment a = fixed;
  for (uint64_t m = 0; m < (1ull << free.size()); ++m) {
    for (std::size_t i = 0; i < free.size(); ++i) a.set(free[i], (m >> i) & 1);
    if (a.satisfies(cnf)) return true;
  }
  return false;
}

/// Random spec: X = 1..n, Y = n+1..n+m, matrix a random circuit.
inline Specification random_spec(std::mt19937_64& rng, int n, int m, int gates) {
  std::vector<Var> xs, ys, all;
  for (int i = 1; i <= n; ++i) xs.push_back(i), all.push_back(i);
  for (int j = 1; j <= m; ++j) ys.push_back(n + j), all.push_back(n + j);
  return Specification(xs, ys, random_circuit(rng, all, gates));
}

}  // namespace testutil

namespace testutil {

inline skolem::Cnf random_kcnf(std::mt19937_64& rng, int n, int clauses, int k = 3) {
  skolem::Cnf f(n);
  for (int c = 0; c < clauses; ++c) {
    skolem::Clause cl;
    while (static_cast<int>(cl.size()) < k) {
      skolem::Var v = 1 + static_cast<int>(rng() % static_cast<uint64_t>(n));
      bool dup = false;
      for (auto l : cl) dup |= l.var() == v;
      if (!dup) cl.push_back(skolem::Lit(v, rng() & 1));
    }
    f.add_clause(cl);
  }
  return f;
}

/// Number of distinct projections onto `proj` of the models of `f` (all vars
/// enumerated; keep n small).
inline uint64_t brute_projected_count(const skolem::Cnf& f, const std::vector<skolem::Var>& proj) {
  int n = f.num_vars();
  std::vector<char> seen(1u << proj.size(), 0);
  skolem::Assignment a(n);
  for (uint64_t m = 0; m < (1ull << n); ++m) {
    for (int v = 1; v <= n; ++v) a.set(v, (m >> (v - 1)) & 1);
    if (!a.satisfies(f)) continue;
    uint64_t key = 0;
    for (std::size_t i = 0; i < proj.size(); ++i) key |= static_cast<uint64_t>(a.get(proj[i])) << i;
    seen[key] = 1;
  }
  uint64_t c = 0;
  for (char s : seen) c += s;
  return c;
}

/// Pigeonhole principle, p pigeons into h holes, direct encoding.
inline skolem::Cnf php(int p, int h) {
  using namespace skolem;
  auto var = [&](int i, int j) { return i * h + j + 1; };
  Cnf f(p * h);
  for (int i = 0; i < p; ++i) {
    Clause c;
    for (int j = 0; j < h; ++j) c.push_back(pos(var(i, j)));
    f.add_clause(c);
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) f.add_clause({neg(var(a, j)), neg(var(b, j))});
  return f;
}

}  // namespace testutil

namespace testutil {

/// All y (MSB-first integers) with F(x, y) = 1, ascending.
inline std::vector<uint64_t> brute_outputs(const skolem::Specification& spec, uint64_t x) {
  std::vector<uint64_t> out;
  auto xb = bits_of(x, spec.n());
  for (uint64_t y = 0; y < (1ull << spec.m()); ++y)
    if (spec.eval(spec.assignment(xb, bits_of(y, spec.m())))) out.push_back(y);
  return out;
}

/// Ψ valid iff F(x, Ψ(x)) wherever x has some witness.
inline bool brute_valid(const skolem::Specification& spec, const skolem::SkolemVector& psi) {
  for (uint64_t x = 0; x < (1ull << spec.n()); ++x) {
    auto xb = bits_of(x, spec.n());
    if (brute_outputs(spec, x).empty()) continue;
    if (!spec.eval(spec.assignment(xb, psi.eval(xb)))) return false;
  }
  return true;
}

/// Y_i (0-based) unique w.r.t. z: no two models of F agree on z and differ on Y_i.
inline bool brute_unique(const skolem::Specification& spec, std::size_t i, const std::vector<skolem::Var>& z) {
  std::unordered_map<uint64_t, int> seen;
  for (uint64_t x = 0; x < (1ull << spec.n()); ++x)
    for (uint64_t y : brute_outputs(spec, x)) {
      auto a = spec.assignment(bits_of(x, spec.n()), bits_of(y, spec.m()));
      uint64_t key = 0;
      for (auto v : z) key = (key << 1) | a.get(v);
      int bit = a.get(spec.outputs()[i]);
      auto [it, fresh] = seen.emplace(key, bit);
      if (!fresh && it->second != bit) return false;
    }
  return true;
}

}  // namespace testutil
