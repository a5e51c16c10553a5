#include "skolem/tseitin.hpp"

#include <algorithm>

#include "skolem/error.hpp"

namespace skolem {

std::vector<Lit> encode_circuit(Cnf& cnf, const Circuit& c,
                                const std::function<Lit(Var)>& input_lit) {
  std::vector<Lit> lit(c.num_nodes());
  for (std::size_t i = 0; i < c.num_nodes(); ++i) {
    const Gate& g = c.gate(static_cast<NodeId>(i));
    switch (g.op) {
      case GateOp::Input:
        lit[i] = input_lit(g.var);
        cnf.ensure_vars(lit[i].var());
        break;
      case GateOp::Const: {
        Lit t = pos(cnf.new_var());
        cnf.add_clause({t ^ !g.value});
        lit[i] = t;
        break;
      }
      case GateOp::Not: lit[i] = ~lit[g.a]; break;
      case GateOp::And:
      case GateOp::Or: {
        // OR is AND with complemented operands and output.
        bool is_or = g.op == GateOp::Or;
        Lit a = lit[g.a] ^ is_or, b = lit[g.b] ^ is_or;
        Lit t = pos(cnf.new_var());
        Lit o = t ^ is_or;
        cnf.add_clause({~o, a});
        cnf.add_clause({~o, b});
        cnf.add_clause({o, ~a, ~b});
        lit[i] = t;
        break;
      }
      case GateOp::Xor: {
        Lit a = lit[g.a], b = lit[g.b];
        Lit t = pos(cnf.new_var());
        cnf.add_clause({~t, a, b});
        cnf.add_clause({~t, ~a, ~b});
        cnf.add_clause({t, ~a, b});
        cnf.add_clause({t, a, ~b});
        lit[i] = t;
        break;
      }
    }
  }
  return lit;
}

std::vector<Lit> encode_circuit(Cnf& cnf, const Circuit& c) {
  return encode_circuit(cnf, c, [](Var v) { return pos(v); });
}

TseitinResult tseitin(const Circuit& c, bool value, int first_free) {
  if (c.outputs().size() != 1) throw InvalidArgument("tseitin: circuit must have one output");
  TseitinResult r;
  int top = first_free - 1;
  for (Var v : c.input_vars()) top = std::max(top, v);
  r.cnf = Cnf(top);
  r.node_lit = encode_circuit(r.cnf, c);
  NodeId out = c.output();
  const Gate& g = c.gate(out);
  // A CONST output already carries its unit clause.
  if (!(g.op == GateOp::Const && g.value == value)) r.cnf.add_clause({r.node_lit[out] ^ !value});
  return r;
}

}  // namespace skolem
