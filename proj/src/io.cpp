#include "skolem/io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "skolem/error.hpp"

namespace skolem {

namespace {

struct Line {
  int number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++no;
    std::string_view l = text.substr(pos, end - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back({no, l});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

long long to_int(std::string_view tok, int line) {
  long long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

struct RawCnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<int> clause_line;
  // Quantifier blocks in order: ('a' | 'e', vars, line).
  struct Block {
    char kind;
    std::vector<Var> vars;
    int line;
  };
  std::vector<Block> blocks;
  std::vector<Var> annotated_inputs, annotated_outputs;
  bool annotated = false;
};

RawCnf read_raw(std::string_view text) {
  RawCnf raw;
  bool header = false;
  std::size_t expected = 0;
  Clause cur;
  int cur_line = 0;
  for (const Line& ln : split_lines(text)) {
    auto toks = tokens(ln.text);
    if (toks.empty()) continue;
    if (toks[0] == "c") {
      if (toks.size() >= 2 && (toks[1] == "inputs" || toks[1] == "outputs")) {
        auto& dst = toks[1] == "inputs" ? raw.annotated_inputs : raw.annotated_outputs;
        raw.annotated = true;
        for (std::size_t i = 2; i < toks.size(); ++i) {
          long long v = to_int(toks[i], ln.number);
          if (v == 0) break;
          if (v < 0) throw ParseError(ln.number, "negative variable in declaration");
          dst.push_back(static_cast<Var>(v));
        }
      }
      continue;
    }
    if (toks[0] == "p") {
      if (header) throw ParseError(ln.number, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf") throw ParseError(ln.number, "malformed header, expected 'p cnf V C'");
      long long v = to_int(toks[2], ln.number), c = to_int(toks[3], ln.number);
      if (v < 0 || c < 0) throw ParseError(ln.number, "malformed header: negative count");
      raw.num_vars = static_cast<int>(v);
      expected = static_cast<std::size_t>(c);
      header = true;
      continue;
    }
    if (!header) throw ParseError(ln.number, "missing 'p cnf' header");
    if (toks[0] == "a" || toks[0] == "e") {
      if (!raw.clauses.empty() || !cur.empty())
        throw ParseError(ln.number, "quantifier block after clauses");
      RawCnf::Block b{toks[0][0], {}, ln.number};
      bool closed = false;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        long long v = to_int(toks[i], ln.number);
        if (v == 0) {
          closed = true;
          if (i + 1 != toks.size()) throw ParseError(ln.number, "tokens after block terminator");
          break;
        }
        if (v < 0 || v > raw.num_vars)
          throw ParseError(ln.number, "undeclared variable " + std::to_string(v) + " in quantifier block");
        b.vars.push_back(static_cast<Var>(v));
      }
      if (!closed) throw ParseError(ln.number, "quantifier block not terminated by 0");
      raw.blocks.push_back(std::move(b));
      continue;
    }
    for (auto tok : toks) {
      long long v = to_int(tok, ln.number);
      if (cur.empty()) cur_line = ln.number;
      if (v == 0) {
        raw.clauses.push_back(std::move(cur));
        raw.clause_line.push_back(cur_line ? cur_line : ln.number);
        cur.clear();
        cur_line = 0;
        continue;
      }
      if (std::llabs(v) > raw.num_vars)
        throw ParseError(ln.number, "variable " + std::to_string(std::llabs(v)) +
                                        " exceeds declared count " + std::to_string(raw.num_vars));
      cur.push_back(Lit(static_cast<int>(v)));
    }
  }
  if (!header) throw ParseError(0, "missing 'p cnf' header");
  if (!cur.empty()) throw ParseError(cur_line, "last clause not terminated by 0");
  if (raw.clauses.size() != expected)
    throw ParseError(0, "header declares " + std::to_string(expected) + " clauses, found " +
                            std::to_string(raw.clauses.size()));
  return raw;
}

constexpr std::size_t kMaxFreeAux = 12;

// Rebuilds a circuit from a CNF whose auxiliaries are Tseitin-defined.
Circuit reconstruct(const Cnf& cnf, const std::vector<Var>& inputs, const std::vector<Var>& outputs,
                    const std::vector<int>& clause_line) {
  const int nv = cnf.num_vars();
  std::vector<char> is_io(nv + 1, 0);
  for (Var v : inputs) is_io[v] = 1;
  for (Var v : outputs) is_io[v] = 1;

  const auto& cls = cnf.clauses();
  std::vector<std::vector<std::size_t>> by_max(nv + 1);
  for (std::size_t i = 0; i < cls.size(); ++i)
    if (!cls[i].empty()) by_max[cls[i].back().var()].push_back(i);  // clauses are sorted

  CircuitBuilder b;
  std::vector<NodeId> node(nv + 1, 0);
  std::vector<char> defined(nv + 1, 0);
  for (Var v : inputs) node[v] = b.input(v), defined[v] = 1;
  for (Var v : outputs) node[v] = b.input(v), defined[v] = 1;
  std::vector<char> used(cls.size(), 0);
  std::vector<Var> free;
  int first_free_line = 0;
  auto lit_node = [&](Lit l) { return l.negative() ? b.lnot(node[l.var()]) : node[l.var()]; };

  for (Var g = 1; g <= nv; ++g) {
    if (is_io[g]) continue;
    const auto& cand = by_max[g];
    bool done = false;
    // AND-shaped: (~o | a), (~o | b), (o | ~a | ~b) with o = +-g.
    for (std::size_t ti : cand) {
      if (done) break;
      const Clause& t = cls[ti];
      if (used[ti] || t.size() != 3) continue;
      Lit o = t[2];  // the g literal (largest var)
      Lit na = t[0], nb = t[1];
      if (!defined[na.var()] || !defined[nb.var()]) continue;
      std::size_t ia = cls.size(), ib = cls.size();
      for (std::size_t bi : cand) {
        const Clause& c = cls[bi];
        if (used[bi] || c.size() != 2 || c[1] != ~o) continue;
        if (c[0] == ~na && ia == cls.size()) ia = bi;
        else if (c[0] == ~nb && ib == cls.size()) ib = bi;
      }
      if (ia == cls.size() || ib == cls.size()) continue;
      used[ti] = used[ia] = used[ib] = 1;
      if (!o.negative()) {
        node[g] = b.land(lit_node(~na), lit_node(~nb));
      } else {
        node[g] = b.lor(lit_node(na), lit_node(nb));
      }
      defined[g] = 1;
      done = true;
    }
    // XOR-shaped: four ternary clauses on the same three variables.
    if (!done) {
      std::map<std::pair<Var, Var>, std::vector<std::size_t>> groups;
      for (std::size_t ti : cand) {
        const Clause& t = cls[ti];
        if (used[ti] || t.size() != 3) continue;
        if (!defined[t[0].var()] || !defined[t[1].var()]) continue;
        groups[{t[0].var(), t[1].var()}].push_back(ti);
      }
      for (auto& [ab, idx] : groups) {
        if (idx.size() < 4) continue;
        // Each clause excludes one assignment; all four must share a parity.
        std::set<int> excluded;
        int parity = -1;
        std::vector<std::size_t> take;
        for (std::size_t ti : idx) {
          const Clause& t = cls[ti];
          int bits = (t[0].negative() ? 1 : 0) | (t[1].negative() ? 2 : 0) | (t[2].negative() ? 4 : 0);
          int p = __builtin_popcount(bits) & 1;
          if (excluded.count(bits)) continue;
          if (parity == -1) parity = p;
          if (p != parity) continue;
          excluded.insert(bits);
          take.push_back(ti);
          if (take.size() == 4) break;
        }
        if (take.size() != 4) continue;
        for (std::size_t ti : take) used[ti] = 1;
        NodeId x = b.lxor(node[ab.first], node[ab.second]);
        node[g] = parity ? x : b.lnot(x);
        defined[g] = 1;
        done = true;
        break;
      }
    }
    // Equivalence: (~g | l), (g | ~l).
    for (std::size_t i1 : cand) {
      if (done) break;
      const Clause& c = cls[i1];
      if (used[i1] || c.size() != 2 || !c[1].negative() || !defined[c[0].var()]) continue;
      for (std::size_t i2 : cand) {
        const Clause& d = cls[i2];
        if (used[i2] || d.size() != 2 || d[1] != ~c[1] || d[0] != ~c[0]) continue;
        used[i1] = used[i2] = 1;
        node[g] = lit_node(c[0]);
        defined[g] = 1;
        done = true;
        break;
      }
    }
    if (!done) {
      for (std::size_t ui : cand) {
        if (used[ui] || cls[ui].size() != 1) continue;
        used[ui] = 1;
        node[g] = b.constant(!cls[ui][0].negative());
        defined[g] = 1;
        done = true;
        break;
      }
    }
    if (!done) {
      // Occurs but has no recognizable definition: quantified out below.
      for (std::size_t i = 0; i < cls.size() && !done; ++i)
        for (Lit l : cls[i])
          if (l.var() == g) {
            if (free.empty()) first_free_line = i < clause_line.size() ? clause_line[i] : 0;
            free.push_back(g);
            node[g] = b.input(g);
            defined[g] = 1;
            done = true;
            break;
          }
    }
  }
  std::vector<NodeId> conj;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (used[i]) continue;
    std::vector<NodeId> disj;
    for (Lit l : cls[i]) disj.push_back(lit_node(l));
    conj.push_back(b.lor(disj));
  }
  b.add_output(b.land(conj));
  if (free.empty()) return b.finish();
  if (free.size() > kMaxFreeAux)
    throw ParseError(first_free_line, std::to_string(free.size()) +
                                          " auxiliaries lack Tseitin definitions; cannot rebuild the circuit form");
  // Existential expansion over the undefined auxiliaries.
  Circuit body = b.finish();
  CircuitBuilder e;
  std::vector<NodeId> cases;
  for (uint32_t mask = 0; mask < (1u << free.size()); ++mask) {
    auto out = e.import(body, [&](Var v) {
      auto it = std::find(free.begin(), free.end(), v);
      if (it == free.end()) return e.input(v);
      return e.constant((mask >> (it - free.begin())) & 1);
    });
    cases.push_back(out[0]);
  }
  e.add_output(e.lor(cases));
  return e.finish();
}

}  // namespace

Specification parse_spec(std::string_view text) {
  RawCnf raw = read_raw(text);
  std::vector<Var> xs, ys, aux_block;
  if (!raw.blocks.empty()) {
    std::size_t i = 0;
    if (raw.blocks[i].kind == 'a') xs = raw.blocks[i++].vars;
    if (i < raw.blocks.size()) {
      if (raw.blocks[i].kind != 'e') throw ParseError(raw.blocks[i].line, "expected an existential block");
      ys = raw.blocks[i++].vars;
    }
    if (i < raw.blocks.size()) {
      if (raw.blocks[i].kind != 'e')
        throw ParseError(raw.blocks[i].line, "not a 2QBF: more than one quantifier alternation");
      aux_block = raw.blocks[i++].vars;
    }
    if (i < raw.blocks.size()) throw ParseError(raw.blocks[i].line, "too many quantifier blocks");
  } else if (raw.annotated) {
    xs = raw.annotated_inputs;
    ys = raw.annotated_outputs;
  } else {
    throw ParseError(0, "no quantifier blocks and no 'c inputs'/'c outputs' declarations");
  }
  // Overlap check, reported at the line of the later block.
  std::set<Var> seen;
  auto check = [&](const std::vector<Var>& vs, int line) {
    for (Var v : vs) {
      if (v > raw.num_vars) throw ParseError(line, "undeclared variable " + std::to_string(v));
      if (!seen.insert(v).second)
        throw ParseError(line, "variable " + std::to_string(v) + " appears in two blocks");
    }
  };
  int xline = raw.blocks.empty() ? 0 : raw.blocks[0].line;
  check(xs, xline);
  check(ys, raw.blocks.size() > 1 ? raw.blocks[1].line : xline);
  check(aux_block, raw.blocks.size() > 2 ? raw.blocks[2].line : 0);

  Cnf cnf(raw.num_vars);
  std::vector<int> lines;
  for (std::size_t i = 0; i < raw.clauses.size(); ++i) {
    if (cnf.add_clause(raw.clauses[i])) lines.push_back(raw.clause_line[i]);
  }
  Circuit matrix = reconstruct(cnf, xs, ys, lines);
  return Specification(xs, ys, std::move(matrix), std::move(cnf),
                       raw.blocks.empty() ? SourceFormat::AnnotatedDimacs : SourceFormat::Qdimacs);
}

Cnf parse_dimacs(std::string_view text) {
  RawCnf raw = read_raw(text);
  Cnf cnf(raw.num_vars);
  for (auto& c : raw.clauses) cnf.add_clause(c);
  return cnf;
}

namespace {
void write_clauses(std::ostringstream& os, const Cnf& cnf) {
  for (const auto& c : cnf.clauses()) {
    for (Lit l : c) os << l.dimacs() << ' ';
    os << "0\n";
  }
}
}  // namespace

std::string write_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  os << "p cnf " << cnf.num_vars() << ' ' << cnf.size() << '\n';
  write_clauses(os, cnf);
  return os.str();
}

std::string write_qdimacs(const Specification& spec) {
  std::ostringstream os;
  os << "p cnf " << spec.num_vars() << ' ' << spec.cnf().size() << '\n';
  os << 'a';
  for (Var v : spec.inputs()) os << ' ' << v;
  os << " 0\ne";
  for (Var v : spec.outputs()) os << ' ' << v;
  os << " 0\n";
  auto aux = spec.auxiliaries();
  if (!aux.empty()) {
    os << 'e';
    for (Var v : aux) os << ' ' << v;
    os << " 0\n";
  }
  write_clauses(os, spec.cnf());
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string emit_gatelist(const SkolemVector& psi) {
  std::ostringstream os;
  os << "skolem " << psi.size() << ' ' << psi.inputs().size() << '\n';
  std::unordered_map<Var, std::string> name;
  for (std::size_t i = 0; i < psi.inputs().size(); ++i) name[psi.inputs()[i]] = "x" + std::to_string(i + 1);
  for (std::size_t i = 0; i < psi.outputs().size(); ++i) name[psi.outputs()[i]] = "y" + std::to_string(i + 1);
  std::size_t next = 1;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    Circuit c = prune(psi.psi(i));
    std::vector<std::string> arg(c.num_nodes());
    for (std::size_t k = 0; k < c.num_nodes(); ++k) {
      const Gate& g = c.gate(static_cast<NodeId>(k));
      std::string id;
      switch (g.op) {
        case GateOp::Input: arg[k] = name.at(g.var); continue;
        case GateOp::Const: arg[k] = g.value ? "1" : "0"; continue;
        case GateOp::Not:
          id = "g" + std::to_string(next++);
          os << id << " = NOT(" << arg[g.a] << ")\n";
          break;
        default:
          id = "g" + std::to_string(next++);
          os << id << " = " << to_string(g.op) << '(' << arg[g.a] << ',' << arg[g.b] << ")\n";
          break;
      }
      arg[k] = id;
    }
    const Gate& og = c.gate(c.output());
    std::string out = arg[c.output()];
    if (og.op == GateOp::Const) {
      out = "g" + std::to_string(next++);
      os << out << " = CONST(" << (og.value ? 1 : 0) << ")\n";
    } else if (og.op == GateOp::Input) {
      out = "g" + std::to_string(next++);
      os << out << " = AND(" << arg[c.output()] << ",1)\n";
    }
    os << 'y' << (i + 1) << " := " << out << '\n';
  }
  return os.str();
}

// AIG literal bookkeeping for the ASCII exporter.
std::string emit_aiger(const SkolemVector& psi) {
  Circuit c = compose(psi);
  const std::size_t ni = psi.inputs().size();
  std::unordered_map<Var, std::size_t> input_index;
  for (std::size_t i = 0; i < ni; ++i) input_index[psi.inputs()[i]] = i;
  unsigned next_var = static_cast<unsigned>(ni) + 1;
  std::vector<std::array<unsigned, 3>> ands;
  auto mk_and = [&](unsigned a, unsigned b) {
    if (a == 0 || b == 0) return 0u;
    if (a == 1) return b;
    if (b == 1) return a;
    unsigned lhs = 2 * next_var++;
    ands.push_back({lhs, std::max(a, b), std::min(a, b)});
    return lhs;
  };
  std::vector<unsigned> lit(c.num_nodes());
  for (std::size_t k = 0; k < c.num_nodes(); ++k) {
    const Gate& g = c.gate(static_cast<NodeId>(k));
    unsigned a = g.op >= GateOp::Not ? lit[g.a] : 0, b = g.op >= GateOp::And ? lit[g.b] : 0;
    switch (g.op) {
      case GateOp::Input: lit[k] = 2 * static_cast<unsigned>(input_index.at(g.var) + 1); break;
      case GateOp::Const: lit[k] = g.value ? 1 : 0; break;
      case GateOp::Not: lit[k] = a ^ 1u; break;
      case GateOp::And: lit[k] = mk_and(a, b); break;
      case GateOp::Or: lit[k] = mk_and(a ^ 1u, b ^ 1u) ^ 1u; break;
      case GateOp::Xor: {
        unsigned p = mk_and(a, b ^ 1u), q = mk_and(a ^ 1u, b);
        lit[k] = mk_and(p ^ 1u, q ^ 1u) ^ 1u;
        break;
      }
    }
  }
  std::ostringstream os;
  os << "aag " << (next_var - 1) << ' ' << ni << " 0 " << c.outputs().size() << ' ' << ands.size() << '\n';
  for (std::size_t i = 0; i < ni; ++i) os << 2 * (i + 1) << '\n';
  for (NodeId o : c.outputs()) os << lit[o] << '\n';
  for (const auto& a : ands) os << a[0] << ' ' << a[1] << ' ' << a[2] << '\n';
  for (std::size_t i = 0; i < ni; ++i) os << 'i' << i << " x" << (i + 1) << '\n';
  for (std::size_t i = 0; i < c.outputs().size(); ++i) os << 'o' << i << " y" << (i + 1) << '\n';
  os << "c\nskolemkit\n";
  return os.str();
}

}  // namespace

std::string emit_skolem(const SkolemVector& psi, SkolemFormat format) {
  return format == SkolemFormat::GateList ? emit_gatelist(psi) : emit_aiger(psi);
}

SkolemVector parse_skolem(std::string_view text, const Specification& spec) {
  return parse_skolem(text, spec.inputs(), spec.outputs());
}

SkolemVector parse_skolem(std::string_view text, const std::vector<Var>& inputs,
                          const std::vector<Var>& outputs) {
  auto lines = split_lines(text);
  std::size_t li = 0;
  while (li < lines.size() && tokens(lines[li].text).empty()) ++li;
  if (li == lines.size()) throw ParseError(0, "empty Skolem document");
  {
    auto t = tokens(lines[li].text);
    if (t.size() != 3 || t[0] != "skolem") throw ParseError(lines[li].number, "expected 'skolem <m> <n>'");
    long long m = to_int(t[1], lines[li].number), n = to_int(t[2], lines[li].number);
    if (m != static_cast<long long>(outputs.size()) || n != static_cast<long long>(inputs.size()))
      throw ParseError(lines[li].number, "header dimensions do not match the specification");
    ++li;
  }
  std::vector<Circuit> psis;
  Circuit cur;
  std::unordered_map<std::string, NodeId> local;  // gate name -> node in cur
  std::set<std::string> all_gates;
  std::unordered_map<Var, NodeId> cur_inputs;
  std::optional<NodeId> consts[2];

  auto parse_index = [](std::string_view s, int line) {
    if (s.size() < 2) throw ParseError(line, "bad reference '" + std::string(s) + "'");
    return static_cast<std::size_t>(to_int(s.substr(1), line));
  };
  auto arg_node = [&](std::string_view a, int line) -> NodeId {
    if (a == "0" || a == "1") {
      bool v = a == "1";
      if (!consts[v]) consts[v] = cur.add_const(v);
      return *consts[v];
    }
    if (a.empty()) throw ParseError(line, "empty argument");
    if (a[0] == 'x' || a[0] == 'y') {
      std::size_t i = parse_index(a, line);
      const auto& vs = a[0] == 'x' ? inputs : outputs;
      if (i < 1 || i > vs.size()) throw ParseError(line, "reference out of range: " + std::string(a));
      if (a[0] == 'y' && i > psis.size())
        throw ParseError(line, "y" + std::to_string(i) + " read by y" + std::to_string(psis.size() + 1) +
                                   ": cyclic dependency");
      Var v = vs[i - 1];
      auto it = cur_inputs.find(v);
      if (it != cur_inputs.end()) return it->second;
      NodeId n = cur.add_input(v);
      cur_inputs.emplace(v, n);
      return n;
    }
    if (a[0] == 'g') {
      auto it = local.find(std::string(a));
      if (it == local.end()) {
        if (all_gates.count(std::string(a)))
          throw ParseError(line, std::string(a) + " belongs to another output");
        throw ParseError(line, "undefined gate " + std::string(a));
      }
      return it->second;
    }
    throw ParseError(line, "bad argument '" + std::string(a) + "'");
  };

  for (; li < lines.size(); ++li) {
    const int ln = lines[li].number;
    std::string s;
    for (char ch : lines[li].text)
      if (ch != ' ' && ch != '\t') s.push_back(ch);
    if (s.empty()) continue;
    if (s[0] == 'y') {
      auto p = s.find(":=");
      if (p == std::string::npos) throw ParseError(ln, "expected 'y<i> := g<id>'");
      std::size_t i = parse_index(std::string_view(s).substr(0, p), ln);
      if (i != psis.size() + 1) throw ParseError(ln, "outputs must appear in order y1..ym");
      std::string g = s.substr(p + 2);
      auto it = local.find(g);
      if (it == local.end()) throw ParseError(ln, "undefined gate " + g);
      cur.add_output(it->second);
      psis.push_back(std::move(cur));
      cur = Circuit();
      local.clear();
      cur_inputs.clear();
      consts[0].reset();
      consts[1].reset();
      continue;
    }
    if (s[0] != 'g') throw ParseError(ln, "expected a gate or output line");
    auto eq = s.find('=');
    auto lp = s.find('(');
    if (eq == std::string::npos || lp == std::string::npos || s.back() != ')' || lp < eq)
      throw ParseError(ln, "expected 'g<id> = OP(args)'");
    std::string name = s.substr(0, eq);
    if (all_gates.count(name)) throw ParseError(ln, "gate " + name + " defined twice");
    std::string op = s.substr(eq + 1, lp - eq - 1);
    std::string args = s.substr(lp + 1, s.size() - lp - 2);
    std::vector<std::string> parts;
    {
      std::size_t st = 0;
      while (true) {
        auto c = args.find(',', st);
        parts.push_back(args.substr(st, c == std::string::npos ? std::string::npos : c - st));
        if (c == std::string::npos) break;
        st = c + 1;
      }
    }
    NodeId n;
    if (op == "CONST") {
      if (parts.size() != 1 || (parts[0] != "0" && parts[0] != "1")) throw ParseError(ln, "CONST takes 0 or 1");
      n = cur.add_const(parts[0] == "1");
    } else if (op == "NOT") {
      if (parts.size() != 1) throw ParseError(ln, "NOT takes one argument");
      n = cur.add_not(arg_node(parts[0], ln));
    } else {
      GateOp g;
      if (op == "AND") g = GateOp::And;
      else if (op == "OR") g = GateOp::Or;
      else if (op == "XOR") g = GateOp::Xor;
      else throw ParseError(ln, "unknown operator '" + op + "'");
      if (parts.size() != 2) throw ParseError(ln, op + " takes two arguments");
      NodeId a = arg_node(parts[0], ln);
      NodeId b = arg_node(parts[1], ln);
      n = cur.add_binary(g, a, b);
    }
    local[name] = n;
    all_gates.insert(name);
  }
  if (psis.size() != outputs.size()) throw ParseError(0, "missing output lines");
  return SkolemVector(inputs, outputs, std::move(psis));
}

Circuit parse_aiger_ascii(std::string_view text, const std::vector<Var>& inputs) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(0, "empty AIGER document");
  auto h = tokens(lines[0].text);
  if (h.size() != 6 || h[0] != "aag") throw ParseError(1, "expected 'aag M I L O A'");
  auto M = static_cast<unsigned>(to_int(h[1], 1)), I = static_cast<unsigned>(to_int(h[2], 1));
  long long L = to_int(h[3], 1);
  auto O = static_cast<unsigned>(to_int(h[4], 1)), A = static_cast<unsigned>(to_int(h[5], 1));
  if (L != 0) throw ParseError(1, "latches are not supported");
  if (I != inputs.size()) throw ParseError(1, "input count does not match");
  if (lines.size() < 1 + I + O + A) throw ParseError(0, "truncated AIGER document");
  std::vector<unsigned> in_lit(I), out_lit(O);
  std::vector<std::array<unsigned, 2>> def(M + 1, {0, 0});
  std::vector<int> kind(M + 1, 0);  // 1 input, 2 and
  std::size_t li = 1;
  for (unsigned i = 0; i < I; ++i, ++li) {
    in_lit[i] = static_cast<unsigned>(to_int(tokens(lines[li].text).at(0), lines[li].number));
    kind.at(in_lit[i] / 2) = 1;
  }
  for (unsigned i = 0; i < O; ++i, ++li) out_lit[i] = static_cast<unsigned>(to_int(tokens(lines[li].text).at(0), lines[li].number));
  for (unsigned i = 0; i < A; ++i, ++li) {
    auto t = tokens(lines[li].text);
    if (t.size() != 3) throw ParseError(lines[li].number, "expected 'lhs rhs0 rhs1'");
    unsigned lhs = static_cast<unsigned>(to_int(t[0], lines[li].number));
    kind.at(lhs / 2) = 2;
    def[lhs / 2] = {static_cast<unsigned>(to_int(t[1], lines[li].number)),
                    static_cast<unsigned>(to_int(t[2], lines[li].number))};
  }
  CircuitBuilder b;
  std::vector<std::optional<NodeId>> node(M + 1);
  std::vector<unsigned> input_pos(M + 1, 0);
  for (unsigned i = 0; i < I; ++i) input_pos[in_lit[i] / 2] = i;
  std::function<NodeId(unsigned)> lit_node = [&](unsigned l) -> NodeId {
    unsigned v = l / 2;
    NodeId n;
    if (v == 0) {
      n = b.constant(false);
    } else {
      if (!node[v]) {
        if (kind[v] == 1) node[v] = b.input(inputs[input_pos[v]]);
        else if (kind[v] == 2) node[v] = b.land(lit_node(def[v][0]), lit_node(def[v][1]));
        else throw ParseError(0, "undefined AIG variable " + std::to_string(v));
      }
      n = *node[v];
    }
    return (l & 1) ? b.lnot(n) : n;
  };
  for (unsigned o : out_lit) b.add_output(lit_node(o));
  return b.finish();
}

std::string format_assignment(const Specification& spec, const Assignment& a) {
  std::ostringstream os;
  for (int i = 0; i < spec.n(); ++i) os << 'x' << (i + 1) << ' ' << (a.get(spec.inputs()[i]) ? 1 : 0) << '\n';
  for (int i = 0; i < spec.m(); ++i) os << 'y' << (i + 1) << ' ' << (a.get(spec.outputs()[i]) ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace skolem
