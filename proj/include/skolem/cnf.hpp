#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace skolem {

/// Variables are DIMACS ids, starting at 1.
using Var = int;

/// A literal in DIMACS convention: +v or -v.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr explicit Lit(int dimacs) : code_(dimacs) {}
  constexpr Lit(Var v, bool negative) : code_(negative ? -v : v) {}

  constexpr Var var() const { return code_ < 0 ? -code_ : code_; }
  constexpr bool negative() const { return code_ < 0; }
  constexpr int dimacs() const { return code_; }
  constexpr Lit operator~() const { return Lit(-code_); }
  /// Negated when `flip` is set.
  constexpr Lit operator^(bool flip) const { return flip ? ~*this : *this; }

  friend constexpr bool operator==(Lit a, Lit b) { return a.code_ == b.code_; }
  friend constexpr bool operator!=(Lit a, Lit b) { return a.code_ != b.code_; }
  /// Orders by variable, negative before positive.
  friend constexpr bool operator<(Lit a, Lit b) {
    return a.var() != b.var() ? a.var() < b.var() : a.code_ < b.code_;
  }

 private:
  int code_ = 0;
};

constexpr Lit pos(Var v) { return Lit(v, false); }
constexpr Lit neg(Var v) { return Lit(v, true); }

using Clause = std::vector<Lit>;

/// Sorts, removes duplicate literals. Returns false when the clause is a tautology.
bool normalize_clause(Clause& c);

/// Clause list plus the size of the variable table.
class Cnf {
 public:
  Cnf() = default;
  explicit Cnf(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  void ensure_vars(int n) {
    if (n > num_vars_) num_vars_ = n;
  }
  Var new_var() { return ++num_vars_; }

  /// Adds a normalized copy. Tautologies are dropped (returns false).
  bool add_clause(Clause c);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(Clause(lits)); }
  /// Adds without normalization; caller guarantees the invariants.
  void add_clause_unchecked(Clause c);

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }

  /// Maximum clause length.
  int width() const;
  std::size_t literal_count() const;

  void append(const Cnf& other);

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
};

/// Hook for the XOR constraints used by hashing: parity over `vars` must equal `parity`.
struct XorConstraint {
  std::vector<Var> vars;
  bool parity = false;
};

/// Appends clauses defining a literal equal to the parity of `vars` (chained,
/// 4 clauses per extra variable). Empty `vars` gives nullopt (parity 0).
std::optional<Lit> encode_parity(Cnf& cnf, const std::vector<Var>& vars);

/// Appends a chained CNF encoding of `x` to `cnf` using fresh auxiliaries.
/// At most 4 clauses per variable; projected model set is preserved.
void encode_xor(Cnf& cnf, const XorConstraint& x);

}  // namespace skolem
