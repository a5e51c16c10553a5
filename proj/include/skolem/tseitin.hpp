#pragma once

#include <functional>
#include <vector>

#include "skolem/circuit.hpp"
#include "skolem/cnf.hpp"

namespace skolem {

/// Appends the Tseitin clauses of `c` to `cnf`. INPUT gates map through
/// `input_lit`; every other gate except NOT gets a fresh auxiliary from `cnf`.
/// Returns the literal standing for each node.
///
/// Clauses per gate: AND/OR 3, XOR 4, CONST 1, NOT 0.
std::vector<Lit> encode_circuit(Cnf& cnf, const Circuit& c,
                                const std::function<Lit(Var)>& input_lit);

/// Same as `encode_circuit` with INPUT v mapped to the literal +v.
std::vector<Lit> encode_circuit(Cnf& cnf, const Circuit& c);

struct TseitinResult {
  Cnf cnf;
  std::vector<Lit> node_lit;  // per gate of the circuit
};

/// CNF of `c` with its (single) output asserted to `value`. Auxiliary numbering
/// starts after max(first_free - 1, largest input var).
TseitinResult tseitin(const Circuit& c, bool value = true, int first_free = 1);

}  // namespace skolem
