#pragma once

#include <string>
#include <string_view>

#include "skolem/circuit.hpp"
#include "skolem/cnf.hpp"
#include "skolem/spec.hpp"

namespace skolem {

/// Parses a QDIMACS 2QBF document ("a X 0", "e Y 0", optionally a second "e"
/// block of auxiliaries) or an annotated DIMACS document ("c inputs ...",
/// "c outputs ..."). Variables outside X and Y are auxiliaries; the circuit
/// form is rebuilt by recognizing Tseitin gate definitions over them; a few
/// undefined auxiliaries are quantified out by expansion.
/// Throws ParseError with the offending line.
Specification parse_spec(std::string_view text);

/// Plain DIMACS CNF.
Cnf parse_dimacs(std::string_view text);

/// QDIMACS: "a X 0", "e Y 0" and, when auxiliaries exist, a trailing "e" block.
std::string write_qdimacs(const Specification& spec);
std::string write_dimacs(const Cnf& cnf);

enum class SkolemFormat { GateList, AigerAscii };

/// Gate-list document:
///   skolem <m> <n>
///   g<id> = <OP>(<arg>,<arg>)      args: x<i>, y<j>, g<k>, 0, 1
///   y<i> := g<id>
/// NOT takes one argument and CONST(b) one bit. CONST gates used as operands
/// are written inline as 0/1.
std::string emit_skolem(const SkolemVector& psi, SkolemFormat format = SkolemFormat::GateList);
/// Inverse of the gate-list emitter; `spec` supplies the variable ids.
SkolemVector parse_skolem(std::string_view text, const Specification& spec);
SkolemVector parse_skolem(std::string_view text, const std::vector<Var>& inputs,
                          const std::vector<Var>& outputs);

/// Reads an "aag" document. INPUT i (0-based) becomes variable `inputs[i]`.
Circuit parse_aiger_ascii(std::string_view text, const std::vector<Var>& inputs);

/// One "x<i> <bit>" / "y<j> <bit>" line per variable of X then Y.
std::string format_assignment(const Specification& spec, const Assignment& a);

}  // namespace skolem
