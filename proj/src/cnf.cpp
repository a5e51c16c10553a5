#include "skolem/cnf.hpp"

#include <algorithm>

#include "skolem/error.hpp"

namespace skolem {

bool normalize_clause(Clause& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].var() == c[i - 1].var()) return false;
  return true;
}

bool Cnf::add_clause(Clause c) {
  for (Lit l : c)
    if (l.var() <= 0) throw InvalidArgument("literal with variable 0");
  if (!normalize_clause(c)) return false;
  if (!c.empty()) ensure_vars(c.back().var());
  clauses_.push_back(std::move(c));
  return true;
}

void Cnf::add_clause_unchecked(Clause c) {
  for (Lit l : c) ensure_vars(l.var());
  clauses_.push_back(std::move(c));
}

int Cnf::width() const {
  std::size_t w = 0;
  for (const auto& c : clauses_) w = std::max(w, c.size());
  return static_cast<int>(w);
}

std::size_t Cnf::literal_count() const {
  std::size_t n = 0;
  for (const auto& c : clauses_) n += c.size();
  return n;
}

void Cnf::append(const Cnf& other) {
  ensure_vars(other.num_vars());
  clauses_.insert(clauses_.end(), other.clauses_.begin(), other.clauses_.end());
}

std::optional<Lit> encode_parity(Cnf& cnf, const std::vector<Var>& vars) {
  // Chain t_1 = v_1, t_j = t_{j-1} ^ v_j.
  if (vars.empty()) return std::nullopt;
  Lit acc = pos(vars[0]);
  for (std::size_t j = 1; j < vars.size(); ++j) {
    Lit v = pos(vars[j]);
    Lit t = pos(cnf.new_var());
    cnf.add_clause({~t, acc, v});
    cnf.add_clause({~t, ~acc, ~v});
    cnf.add_clause({t, ~acc, v});
    cnf.add_clause({t, acc, ~v});
    acc = t;
  }
  return acc;
}

void encode_xor(Cnf& cnf, const XorConstraint& x) {
  auto acc = encode_parity(cnf, x.vars);
  if (!acc) {
    if (x.parity) cnf.add_clause(Clause{});
    return;
  }
  cnf.add_clause({*acc ^ !x.parity});
}

}  // namespace skolem
