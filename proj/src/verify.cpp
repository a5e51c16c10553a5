#include "skolem/verify.hpp"

#include <algorithm>

#include "skolem/tseitin.hpp"

namespace skolem {

ErrorFormula build_error_formula(const Specification& spec, const SkolemVector& psi) {
  if (psi.inputs() != spec.inputs() || psi.outputs() != spec.outputs())
    throw InvalidArgument("Skolem vector does not match the specification's variables");
  ErrorFormula e;
  e.cnf = spec.cnf();
  e.cnf.ensure_vars(spec.num_vars());
  for (std::size_t j = 0; j < spec.outputs().size(); ++j) e.y_prime.push_back(e.cnf.new_var());
  auto map = [&](Var v) {
    if (spec.role(v) == Role::Output) return pos(e.y_prime[static_cast<std::size_t>(spec.role_index(v) - 1)]);
    return pos(v);
  };
  // ¬F(X, Y')
  auto lits = encode_circuit(e.cnf, spec.matrix(), map);
  e.cnf.add_clause({~lits[spec.matrix().output()]});
  // Y'_i ↔ ψ_i(X, Y'_{<i})
  for (std::size_t i = 0; i < psi.size(); ++i) {
    auto pl = encode_circuit(e.cnf, psi.psi(i), map);
    Lit o = pl[psi.psi(i).output()];
    Lit y = pos(e.y_prime[i]);
    e.cnf.add_clause({~y, o});
    e.cnf.add_clause({y, ~o});
  }
  return e;
}

Verdict verify_skolem(const Specification& spec, const SkolemVector& psi, Oracle& oracle) {
  ErrorFormula e = build_error_formula(spec, psi);
  OracleResult r = oracle.solve(e.cnf);
  Verdict v;
  v.valid = !r.sat;
  if (r.sat) {
    std::vector<Var> xy = spec.inputs();
    xy.insert(xy.end(), spec.outputs().begin(), spec.outputs().end());
    v.witness = r.model.project(xy);
  }
  return v;
}

Cnf uniqueness_formula(const Specification& spec, std::size_t i, const std::vector<Var>& z) {
  if (i >= spec.outputs().size()) throw InvalidArgument("output index out of range");
  const Var yi = spec.outputs()[i];
  for (Var v : z) {
    if (spec.role(v) == Role::Auxiliary) throw InvalidArgument("Z may only contain X and Y variables");
    if (v == yi) throw InvalidArgument("Z must not contain Y_i itself");
  }
  const int n = spec.num_vars();
  Cnf f = spec.cnf();
  f.ensure_vars(n);
  for (const auto& c : spec.cnf().clauses()) {
    Clause d;
    for (Lit l : c) d.push_back(Lit(l.var() + n, l.negative()));
    f.add_clause(d);
  }
  f.ensure_vars(2 * n);
  for (Var v : z) {
    f.add_clause({neg(v), pos(v + n)});
    f.add_clause({pos(v), neg(v + n)});
  }
  f.add_clause({pos(yi), pos(yi + n)});
  f.add_clause({neg(yi), neg(yi + n)});
  return f;
}

bool check_unique(const Specification& spec, std::size_t i, const std::vector<Var>& z, Oracle& oracle,
                  std::pair<Assignment, Assignment>* witness) {
  Cnf f = uniqueness_formula(spec, i, z);
  OracleResult r = oracle.solve(f);
  if (r.sat && witness) {
    const int n = spec.num_vars();
    Assignment a, b;
    for (Var v : spec.inputs()) a.set(v, r.model.get(v)), b.set(v, r.model.get(v + n));
    for (Var v : spec.outputs()) a.set(v, r.model.get(v)), b.set(v, r.model.get(v + n));
    *witness = {a, b};
  }
  return !r.sat;
}

std::vector<Var> prefix_vars(const Specification& spec, std::size_t i) {
  std::vector<Var> z = spec.inputs();
  z.insert(z.end(), spec.outputs().begin(), spec.outputs().begin() + static_cast<std::ptrdiff_t>(i));
  return z;
}

}  // namespace skolem
