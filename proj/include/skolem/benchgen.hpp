#pragma once

#include <cstdint>
#include <vector>

#include "skolem/circuit.hpp"
#include "skolem/spec.hpp"

namespace skolem {

// All generators number X as 1..n and Y as n+1..n+m. Multi-bit quantities
// are most significant bit first.

enum class BphpRegime { Free, Paper, Interpolation };

struct BphpParams {
  int k = 3;  // pigeons
  int m = 1;  // hole-address bits
  BphpRegime regime = BphpRegime::Free;
};

struct Bphp {
  Specification spec;
  /// Natural clausal form of ¬F over X and Y: one clause per (hole, pigeon pair).
  Cnf neg_clauses;
};

/// X_{i,j} (pigeon i, address bit j, both 0-based) is variable i*m + j + 1.
/// Throws InvalidArgument on a regime violation:
///   Paper:         n = k*m and m = ceil(log2 n) - 1
///   Interpolation: k = 2^m + 1
Bphp gen_bphp(const BphpParams& p);
inline Var bphp_x(const BphpParams& p, int pigeon, int bit) { return pigeon * p.m + bit + 1; }
inline Var bphp_y(const BphpParams& p, int bit) { return p.k * p.m + bit + 1; }

/// Lexicographically first collided hole, Y_1 most significant; every ψ_i
/// reads X only. Outputs all zeros when there is no collision.
SkolemVector bphp_lexfirst_skolem(const BphpParams& p);
/// Gate count of `bphp_lexfirst_skolem` from its construction:
/// m * [km + k·2^m(m-1) + 2^m·C(k,2) + 2^m(C(k,2)-1) + (2^m-1) + (2^m-2) + (2^m-1) + (2^(m-1)-1)].
std::size_t bphp_lexfirst_size(const BphpParams& p);

struct TrapParams {
  int n = 10;
  int m = 8;       // even, >= 4
  int window = 4;  // X bits read by h, <= 12
  uint64_t seed = 0;
};

struct Trap {
  Specification spec;
  std::vector<bool> s;               // first-block target, m/2 bits
  std::vector<std::pair<int, int>> c_taps;  // c_j = x[a] XOR x[b] (0-based input positions)
  /// h(window(x), y1): row index = (window bits, then y1 bits) read MSB first.
  std::vector<std::vector<bool>> h;
  /// ψ = constants s, then c(x).
  SkolemVector small;
};

/// F(x,(y1,y2)) = [y1 = s ∧ y2 = c(x)] ∨ [y1 ≠ s ∧ y2 = h(window(x), y1)].
Trap gen_trap(const TrapParams& p);
/// h as a function (reads the table).
std::vector<bool> trap_h(const Trap& t, const TrapParams& p, const std::vector<bool>& x, const std::vector<bool>& y1);
std::vector<bool> trap_c(const Trap& t, const std::vector<bool>& x);

struct TrapStats {
  double fraction_chose_s = 0;
  int trials = 0;
  int chose_s = 0;
  bool second_block_matches_h = true;
};

/// Sequential synthesis on the trap: block 1 is fixed bit by bit by majority
/// over `votes` sampled consistent assignments, then block 2 is read off F.
TrapStats simulate_sequential(const TrapParams& p, const Trap& trap, int trials, uint64_t seed, int votes = 5);

struct FactorParams {
  int bits = 4;         // width of X
  int factor_bits = 0;  // width of each factor; 0 means `bits`
};

/// F := (X = Y1 × Y2) ∧ (Y1 ≠ 1) ∧ (Y2 ≠ 1), with a carry-save array
/// multiplier producing the full 2·factor_bits product; X and the product are
/// zero-extended to a common width.
Specification gen_factor(const FactorParams& p);
inline Specification gen_factor(int bits) { return gen_factor(FactorParams{bits, 0}); }

struct PlantedCover {
  Specification spec;
  std::vector<std::vector<bool>> targets;  // t_1..t_k, distinct
  /// Cell j holds the x (as an integer, MSB first) with bounds[j] <= x < bounds[j+1].
  std::vector<uint64_t> bounds;
};

/// F(x,y) = ⋁_j (y = t_j ∧ x ∈ cell_j) over a balanced partition of {0,1}^n
/// into k consecutive ranges. Requires 1 <= k <= min(2^m, 2^n).
PlantedCover gen_planted_cover(int n, int m, int k, uint64_t seed);

/// Random relational spec: matrix is a seeded random circuit over X ∪ Y.
Specification gen_random_spec(int n, int m, int gates, uint64_t seed);

/// Unsigned value of bits read MSB first, and back.
uint64_t bits_value(const std::vector<bool>& bits);
std::vector<bool> value_bits(uint64_t v, int width);

}  // namespace skolem
