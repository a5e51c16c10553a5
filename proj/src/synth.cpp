#include "skolem/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "skolem/error.hpp"
#include "skolem/tseitin.hpp"
#include "skolem/verify.hpp"

namespace skolem {

std::size_t spec_size(const Specification& spec) { return std::max<std::size_t>(1, spec.matrix().num_nodes()); }

namespace {

std::vector<bool> bits_msb(uint64_t v, int width) {
  std::vector<bool> out(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) out[static_cast<std::size_t>(i)] = (v >> (width - 1 - i)) & 1;
  return out;
}

// ψ_i for every i from candidate outputs in increasing order: the first
// candidate with F(x, y) = 1 wins.
SkolemVector first_satisfying(const Specification& spec, const std::vector<std::vector<bool>>& ordered) {
  std::vector<Circuit> fy;
  for (const auto& y : ordered) fy.push_back(substitute(spec, y));
  std::vector<Circuit> psis;
  for (std::size_t i = 0; i < spec.outputs().size(); ++i) {
    CircuitBuilder b;
    auto bind = [&](Var v) { return b.input(v); };
    NodeId none_before = b.constant(true);
    NodeId acc = b.constant(false);
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      NodeId f = b.import(fy[k], bind)[0];
      if (ordered[k][i]) acc = b.lor(acc, b.land(f, none_before));
      none_before = b.land(none_before, b.lnot(f));
    }
    b.add_output(acc);
    psis.push_back(b.finish());
  }
  return SkolemVector(spec.inputs(), spec.outputs(), std::move(psis));
}

}  // namespace

SkolemVector synth_lex(const Specification& spec, int lex_limit) {
  const int m = spec.m();
  if (m > lex_limit || m > 24)
    throw InvalidArgument("lex synthesis refused: m = " + std::to_string(m) + " exceeds the limit " +
                          std::to_string(std::min(lex_limit, 24)));
  std::vector<std::vector<bool>> all;
  for (uint64_t y = 0; y < (uint64_t{1} << m); ++y) all.push_back(bits_msb(y, m));
  return first_satisfying(spec, all);
}

Cnf uncovered_formula(const Specification& spec, const std::vector<std::vector<bool>>& elements) {
  Cnf q = spec.cnf();
  q.ensure_vars(spec.num_vars());
  for (const auto& y : elements) {
    Circuit f = substitute(spec, y);
    auto lits = encode_circuit(q, f);
    q.add_clause({~lits[f.output()]});
  }
  return q;
}

SkolemVector build_cover_circuit(const Specification& spec, const std::vector<std::vector<bool>>& elements) {
  auto sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return first_satisfying(spec, sorted);
}

std::pair<SkolemVector, CoverSet> synth_cover(const Specification& spec, Oracle& oracle, uint64_t seed,
                                              const CoverOptions& opts) {
  const int n = spec.n(), m = spec.m();
  const uint64_t max_k =
      opts.max_k > 0 ? static_cast<uint64_t>(opts.max_k) : (uint64_t{1} << std::min(m, 20));
  uint64_t k = static_cast<uint64_t>(std::max(1, opts.k0));
  const uint64_t calls0 = oracle.stats().calls;
  CoverSet cs;
  for (;;) {
    const uint64_t budget = 2 * k * static_cast<uint64_t>(n + 2);
    while (cs.elements.size() < budget) {
      Cnf q = uncovered_formula(spec, cs.elements);
      const auto it = static_cast<uint64_t>(cs.iterations);
      CountEstimate est = approx_count_projected(q, spec.inputs(), derive_seed(seed, "cover-count", it), oracle,
                                                 opts.count);
      cs.uncovered.push_back(est.estimate);
      if (est.estimate == 0) {
        OracleResult r = oracle.solve(q);
        if (r.sat) throw Error("cover: count and oracle disagree on the uncovered set");
        cs.certified = true;
        cs.k_final = static_cast<int>(k);
        cs.oracle_calls = oracle.stats().calls - calls0;
        return {build_cover_circuit(spec, cs.elements), cs};
      }
      int hb = 0;
      if (est.estimate > 2 * k)
        hb = static_cast<int>(std::ceil(std::log2(static_cast<double>(est.estimate) / static_cast<double>(2 * k))));
      cs.hash_bits_last = hb;
      OracleResult r = sample_with_retry(q, spec.inputs(), hb, derive_seed(seed, "cover-sample", it), oracle);
      if (!r.sat) r = oracle.solve(q);
      if (!r.sat) throw Error("cover: uncovered set is empty but the estimate was positive");
      cs.elements.push_back(r.model.bits(spec.outputs()));
      ++cs.iterations;
    }
    if (k >= max_k) {
      cs.oracle_calls = oracle.stats().calls - calls0;
      throw ResourceLimit("cover: budget exhausted at k = " + std::to_string(k));
    }
    k *= 2;
  }
}

// ---------------------------------------------------------------------------

SkolemVector synth_auto(const Specification& spec, Oracle& oracle, uint64_t seed, const AutoConfig& cfg,
                        AutoReport* report) {
  AutoReport rep;
  SkolemVector result;
  const std::size_t m = spec.outputs().size();
  if (spec.m() <= cfg.lex_limit) {
    rep.used = Strategy::Lex;
    result = synth_lex(spec, cfg.lex_limit);
  } else {
    std::vector<std::optional<Circuit>> learned(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (check_unique(spec, i, prefix_vars(spec, i), oracle)) {
        LearnerResult lr = learn_unique_bit(spec, i, oracle, derive_seed(seed, "unique", i), cfg.learner);
        rep.learner_rounds += lr.rounds;
        learned[i] = std::move(lr.h);
        rep.unique_bits.push_back(i);
      } else {
        rep.cover_bits.push_back(i);
      }
    }
    std::vector<Circuit> psis(m);
    if (!rep.cover_bits.empty()) {
      // Residual spec over the non-unique outputs: unique bits are replaced
      // by their learned circuits.
      CircuitBuilder b;
      std::unordered_map<Var, NodeId> node;
      for (Var x : spec.inputs()) node[x] = b.input(x);
      for (std::size_t i = 0; i < m; ++i) {
        Var y = spec.outputs()[i];
        node[y] = learned[i] ? b.import(*learned[i], [&](Var v) { return node.at(v); })[0] : b.input(y);
      }
      b.add_output(b.import(spec.matrix(), [&](Var v) { return node.at(v); })[0]);
      std::vector<Var> rest;
      for (std::size_t i : rep.cover_bits) rest.push_back(spec.outputs()[i]);
      Specification residual(spec.inputs(), rest, b.finish());
      auto [sv, cs] = synth_cover(residual, oracle, derive_seed(seed, "residual"), cfg.cover);
      rep.cover = cs;
      for (std::size_t k = 0; k < rep.cover_bits.size(); ++k) psis[rep.cover_bits[k]] = sv.psi(k);
    }
    for (std::size_t i = 0; i < m; ++i)
      if (learned[i]) psis[i] = *learned[i];
    rep.used = rep.cover_bits.empty() ? Strategy::Unique : rep.unique_bits.empty() ? Strategy::Cover : Strategy::Auto;
    result = SkolemVector(spec.inputs(), spec.outputs(), std::move(psis));
  }
  if (!verify_skolem(spec, result, oracle).valid) throw Error("synthesized vector failed verification");
  if (report) *report = std::move(rep);
  return result;
}

}  // namespace skolem
