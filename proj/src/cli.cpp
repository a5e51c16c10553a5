#include "skolem/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "skolem/benchgen.hpp"
#include "skolem/error.hpp"
#include "skolem/interplab.hpp"
#include "skolem/io.hpp"
#include "skolem/oracle.hpp"
#include "skolem/synth.hpp"
#include "skolem/verify.hpp"

namespace skolem {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

// Where human-readable output and the report go. "--json -" puts the report on
// stdout and moves everything else to stderr; without --json the report is one
// line on stderr.
struct Sink {
  std::ostream& out;
  std::ostream& err;
  std::string json_path;
  std::ostream& human() const { return json_path == "-" ? err : out; }
  void report(const json& r) const {
    if (json_path == "-")
      out << r.dump(2) << '\n';
    else if (json_path.empty())
      err << r.dump() << '\n';
    else
      write_file(json_path, r.dump(2) + "\n");
  }
};

OracleConfig make_oracle_config(const std::string& solver, double timeout) {
  OracleConfig cfg = oracle_config_from_env();
  if (solver == "internal") {
    cfg.external = false;
  } else if (solver.rfind("exec:", 0) == 0) {
    cfg.external = true;
    cfg.solver.path = solver.substr(5);
    if (cfg.solver.path.empty()) throw InvalidArgument("--solver exec: needs a path");
  } else if (!solver.empty()) {
    throw InvalidArgument("--solver must be 'internal' or 'exec:PATH'");
  }
  if (timeout > 0) {
    cfg.time_limit = timeout;
    cfg.solver.timeout = timeout;
  }
  return cfg;
}

json oracle_json(const Oracle& o) {
  const OracleStats& s = o.stats();
  return {{"calls", s.calls},
          {"maxQueryClauses", s.max_query_clauses},
          {"maxQueryVars", s.max_query_vars},
          {"seconds", s.seconds}};
}

json bits_json(const std::vector<bool>& b) {
  std::string s;
  for (bool v : b) s += v ? '1' : '0';
  return s;
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Lex: return "lex";
    case Strategy::Cover: return "cover";
    case Strategy::Unique: return "unique";
    case Strategy::Auto: return "auto";
  }
  return "auto";
}

std::vector<int> parse_range(const std::string& text) {
  std::vector<int> out;
  std::size_t dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      int lo = std::stoi(text.substr(0, dots)), hi = std::stoi(text.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
  } catch (const std::exception&) {
    throw InvalidArgument("bad range '" + text + "' (use A..B or A,B,C)");
  }
  if (out.empty()) throw InvalidArgument("empty range '" + text + "'");
  return out;
}

std::vector<Var> parse_vars(const std::string& text) {
  std::vector<Var> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidArgument("bad variable list '" + text + "'");
    }
  }
  return out;
}

struct Common {
  std::string json_path;
  std::string solver;
  double timeout = 0;
  uint64_t seed = 1;
};

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string spec_path, out_path = "-", strategy = "auto";
  int k0 = 1, lex_limit = 16, max_k = 0;
};

int cmd_synth(const SynthArgs& a, const Common& c, const Sink& sink, json& rep) {
  Specification spec = parse_spec(read_file(a.spec_path));
  Oracle oracle(make_oracle_config(c.solver, c.timeout));
  auto t0 = std::chrono::steady_clock::now();
  rep["strategy"] = a.strategy;
  rep["seed"] = c.seed;
  rep["n"] = spec.n();
  rep["m"] = spec.m();
  SkolemVector psi;
  int iterations = 0;
  std::optional<std::size_t> cover_size;
  if (a.strategy == "lex") {
    psi = synth_lex(spec, a.lex_limit);
  } else if (a.strategy == "cover") {
    CoverOptions o;
    o.k0 = a.k0;
    o.max_k = a.max_k;
    auto [sv, cs] = synth_cover(spec, oracle, c.seed, o);
    psi = std::move(sv);
    iterations = cs.iterations;
    cover_size = cs.elements.size();
    rep["kFinal"] = cs.k_final;
    rep["certified"] = cs.certified;
  } else if (a.strategy == "unique") {
    std::vector<Circuit> psis;
    json rounds = json::array();
    for (std::size_t i = 0; i < spec.outputs().size(); ++i) {
      if (!check_unique(spec, i, prefix_vars(spec, i), oracle)) {
        rep["verdict"] = "not-unique";
        rep["bit"] = i + 1;
        rep["oracle"] = oracle_json(oracle);
        sink.report(rep);
        sink.err << "Y" << i + 1 << " is not uniquely defined by X and the earlier outputs\n";
        return kExitInvalid;
      }
      LearnerResult lr = learn_unique_bit(spec, i, oracle, derive_seed(c.seed, "unique", i));
      iterations += lr.rounds;
      rounds.push_back(lr.rounds);
      psis.push_back(std::move(lr.h));
    }
    psi = SkolemVector(spec.inputs(), spec.outputs(), std::move(psis));
    rep["learnerRounds"] = rounds;
  } else if (a.strategy == "interp") {
    try {
      SlivovskyResult r = slivovsky_synth(spec, c.timeout);
      psi = std::move(r.psi);
      rep["proofLengths"] = r.proof_lengths;
    } catch (const InterpolationInapplicable& e) {
      rep["verdict"] = "interpolation-inapplicable";
      rep["bit"] = e.bit() + 1;
      sink.err << e.what() << "; both sides satisfiable under:\n";
      json w = json::object();
      auto show = [&](Var v, char tag) {
        if (!e.witness().has(v)) return;
        std::string name = tag + std::to_string(spec.role_index(v));
        sink.err << name << ' ' << e.witness().get(v) << '\n';
        w[name] = e.witness().get(v) ? 1 : 0;
      };
      for (Var v : spec.inputs()) show(v, 'x');
      for (Var v : spec.outputs()) show(v, 'y');
      rep["witness"] = w;
      rep["oracle"] = oracle_json(oracle);
      sink.report(rep);
      return kExitInvalid;
    }
  } else if (a.strategy == "auto") {
    AutoConfig cfg;
    cfg.lex_limit = a.lex_limit;
    cfg.cover.k0 = a.k0;
    cfg.cover.max_k = a.max_k;
    AutoReport ar;
    psi = synth_auto(spec, oracle, c.seed, cfg, &ar);
    rep["used"] = strategy_name(ar.used);
    if (ar.used != Strategy::Lex) {
      json ub = json::array(), cb = json::array();
      for (auto i : ar.unique_bits) ub.push_back(i + 1);
      for (auto i : ar.cover_bits) cb.push_back(i + 1);
      rep["uniqueBits"] = ub;
      rep["coverBits"] = cb;
      if (!ar.cover_bits.empty()) cover_size = ar.cover.elements.size();
      iterations = ar.cover.iterations + ar.learner_rounds;
    }
  } else {
    throw InvalidArgument("unknown strategy '" + a.strategy + "'");
  }
  Verdict v = verify_skolem(spec, psi, oracle);
  if (!v.valid) throw Error("synthesized vector failed verification");
  std::string text = emit_skolem(psi);
  if (a.out_path == "-")
    sink.human() << text;
  else
    write_file(a.out_path, text);
  std::vector<std::size_t> sizes;
  for (const auto& p : psi.psis()) sizes.push_back(p.size());
  rep["iterations"] = iterations;
  rep["oracleCalls"] = oracle.stats().calls;
  rep["circuitSizes"] = sizes;
  rep["totalSize"] = psi.total_size();
  rep["coverSize"] = cover_size ? json(*cover_size) : json(nullptr);
  rep["output"] = a.out_path;
  rep["verified"] = true;
  rep["oracle"] = oracle_json(oracle);
  rep["wallSeconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  sink.report(rep);
  return kExitOk;
}

int cmd_verify(const std::string& spec_path, const std::string& psi_path, const Common& c, const Sink& sink,
               json& rep) {
  Specification spec = parse_spec(read_file(spec_path));
  SkolemVector psi = parse_skolem(read_file(psi_path), spec);
  Oracle oracle(make_oracle_config(c.solver, c.timeout));
  Verdict v = verify_skolem(spec, psi, oracle);
  rep["verdict"] = v.valid ? "valid" : "counterexample";
  if (!v.valid) {
    std::string lines = format_assignment(spec, v.witness);
    sink.human() << lines;
    json w = json::object();
    for (Var x : spec.inputs()) w["x" + std::to_string(spec.role_index(x))] = v.witness.get(x) ? 1 : 0;
    for (Var y : spec.outputs()) w["y" + std::to_string(spec.role_index(y))] = v.witness.get(y) ? 1 : 0;
    rep["witness"] = w;
  } else {
    sink.human() << "valid\n";
  }
  rep["oracle"] = oracle_json(oracle);
  sink.report(rep);
  return v.valid ? kExitOk : kExitInvalid;
}

int cmd_check_unique(const std::string& spec_path, int bit, const std::string& z_text, const Common& c,
                     const Sink& sink, json& rep) {
  Specification spec = parse_spec(read_file(spec_path));
  if (bit < 1 || bit > spec.m()) throw InvalidArgument("--bit must be in 1.." + std::to_string(spec.m()));
  std::size_t i = static_cast<std::size_t>(bit - 1);
  std::vector<Var> z = z_text.empty() ? prefix_vars(spec, i) : parse_vars(z_text);
  Oracle oracle(make_oracle_config(c.solver, c.timeout));
  std::pair<Assignment, Assignment> w;
  bool u = check_unique(spec, i, z, oracle, &w);
  rep["bit"] = bit;
  rep["z"] = z;
  rep["unique"] = u;
  if (u) {
    sink.human() << "unique\n";
  } else {
    sink.human() << "not unique; two models agreeing on Z:\n"
                 << format_assignment(spec, w.first) << "--\n"
                 << format_assignment(spec, w.second);
  }
  rep["oracle"] = oracle_json(oracle);
  sink.report(rep);
  return u ? kExitOk : kExitInvalid;
}

struct GenArgs {
  std::string family, out_path = "-", truth_path, regime = "free";
  int k = 3, m = 1, n = 10, window = 4, bits = 4, factor_bits = 0;
};

int cmd_gen(const GenArgs& a, const Common& c, const Sink& sink, json& rep) {
  Specification spec;
  json truth;
  truth["family"] = a.family;
  if (a.family == "bphp") {
    BphpParams p{a.k, a.m, BphpRegime::Free};
    if (a.regime == "paper") p.regime = BphpRegime::Paper;
    else if (a.regime == "interp") p.regime = BphpRegime::Interpolation;
    else if (a.regime != "free") throw InvalidArgument("--regime must be free, paper or interp");
    spec = gen_bphp(p).spec;
    truth["k"] = a.k;
    truth["m"] = a.m;
    truth["regime"] = a.regime;
    truth["lexFirstSize"] = bphp_lexfirst_size(p);
  } else if (a.family == "trap") {
    TrapParams p{a.n, a.m, a.window, c.seed};
    Trap t = gen_trap(p);
    spec = t.spec;
    truth["n"] = a.n;
    truth["m"] = a.m;
    truth["window"] = a.window;
    truth["seed"] = c.seed;
    truth["s"] = bits_json(t.s);
    json taps = json::array();
    for (auto [x, y] : t.c_taps) taps.push_back({x + 1, y + 1});
    truth["cTaps"] = taps;
    json h = json::array();
    for (const auto& row : t.h) h.push_back(bits_json(row));
    truth["h"] = h;
    truth["small"] = emit_skolem(t.small);
  } else if (a.family == "factor") {
    spec = gen_factor(FactorParams{a.bits, a.factor_bits});
    truth["bits"] = a.bits;
    truth["factorBits"] = a.factor_bits ? a.factor_bits : a.bits;
  } else if (a.family == "planted") {
    PlantedCover pc = gen_planted_cover(a.n, a.m, a.k, c.seed);
    spec = pc.spec;
    truth["n"] = a.n;
    truth["m"] = a.m;
    truth["k"] = a.k;
    truth["seed"] = c.seed;
    json tg = json::array();
    for (const auto& t : pc.targets) tg.push_back(bits_json(t));
    truth["targets"] = tg;
    truth["bounds"] = pc.bounds;
  } else {
    throw InvalidArgument("unknown family '" + a.family + "' (bphp, trap, factor, planted)");
  }
  std::string text = write_qdimacs(spec);
  if (a.out_path == "-")
    sink.human() << text;
  else
    write_file(a.out_path, text);
  if (!a.truth_path.empty()) write_file(a.truth_path, truth.dump(2) + "\n");
  rep["family"] = a.family;
  rep["n"] = spec.n();
  rep["m"] = spec.m();
  rep["clauses"] = spec.cnf().size();
  rep["output"] = a.out_path;
  if (!a.truth_path.empty()) rep["groundTruth"] = a.truth_path;
  sink.report(rep);
  return kExitOk;
}

int cmd_count(const std::string& path, const std::string& proj_text, int trials, const Common& c,
              const Sink& sink, json& rep) {
  std::string text = read_file(path);
  Cnf cnf;
  std::vector<Var> proj;
  bool is_spec = text.find("\na ") != std::string::npos || text.rfind("a ", 0) == 0 ||
                 text.find("c inputs") != std::string::npos;
  if (is_spec) {
    Specification spec = parse_spec(text);
    cnf = spec.cnf();
    proj = spec.inputs();  // inputs with a witness
  } else {
    cnf = parse_dimacs(text);
    for (Var v = 1; v <= cnf.num_vars(); ++v) proj.push_back(v);
  }
  if (!proj_text.empty()) proj = parse_vars(proj_text);
  for (Var v : proj)
    if (v < 1 || v > cnf.num_vars()) throw InvalidArgument("projection variable " + std::to_string(v) + " out of range");
  Oracle oracle(make_oracle_config(c.solver, c.timeout));
  CountOptions o;
  o.trials = trials;
  CountEstimate est = approx_count_projected(cnf, proj, c.seed, oracle, o);
  sink.human() << est.estimate << '\n';
  rep["seed"] = c.seed;
  rep["projection"] = proj.size();
  rep["estimate"] = est.estimate;
  rep["hashBits"] = est.hash_bits;
  rep["trials"] = est.trials;
  rep["oracle"] = oracle_json(oracle);
  sink.report(rep);
  return kExitOk;
}

struct InterpArgs {
  std::string ms = "1..3", out_path = "-", proof_dir;
  int k = 0, width_max = -1;
  std::size_t max_clauses = 200'000;
};

int cmd_interp(const InterpArgs& a, const Common& c, const Sink& sink, json& rep) {
  std::vector<int> ms = parse_range(a.ms);
  for (int m : ms)
    if (m < 1 || m > 6) throw InvalidArgument("--m values must be in 1..6");
  static int fixed_k = 0;
  fixed_k = a.k;
  auto rows = interp_size_experiment(ms, c.timeout, a.k > 0 ? +[](int) { return fixed_k; } : nullptr);
  std::ostringstream csv;
  write_interp_csv(csv, rows);
  if (a.out_path == "-")
    sink.human() << csv.str();
  else
    write_file(a.out_path, csv.str());

  json jrows = json::array();
  bool timed_out = false;
  for (const auto& r : rows) {
    json j = {{"m", r.m}, {"k", r.k}};
    j["proofLength"] = r.proof_length ? json(*r.proof_length) : json(nullptr);
    j["interpolantSize"] = r.interpolant_size ? json(*r.interpolant_size) : json(nullptr);
    j["lexFirstSize"] = r.lex_first_size;
    j["seconds"] = r.seconds;
    BphpParams p{r.k, r.m, BphpRegime::Free};
    if (!r.proof_length) {
      // either a satisfiable pair (k <= 2^m) or a time-out
      bool sat = r.k <= (1 << r.m);
      j["status"] = sat ? "satisfiable" : "timeout";
      timed_out |= !sat;
    } else {
      j["status"] = "refuted";
    }
    if (!a.proof_dir.empty() && r.proof_length) {
      std::filesystem::create_directories(a.proof_dir);
      auto inst = bphp_interpolation_pair(p);
      ProofResult pr = solve_instance(inst, c.timeout);
      std::string path = a.proof_dir + "/bphp_m" + std::to_string(r.m) + "_k" + std::to_string(r.k) + ".proof";
      std::ofstream f(path);
      write_proof(f, pr.proof);
      j["proof"] = path;
    }
    if (a.width_max >= 0) {
      Cnf both = bphp_interpolation_pair(p).conjunction();
      json wj = {{"saturated", json::array()}, {"refutedAt", nullptr}};
      for (int w = 0; w <= a.width_max; ++w) {
        try {
          WidthResult wr = bounded_width_refute(both, w, a.max_clauses);
          if (wr.refuted) {
            wj["refutedAt"] = w;
            break;
          }
          wj["saturated"].push_back(w);
        } catch (const ResourceLimit&) {
          wj["budgetExceededAt"] = w;
          break;
        }
      }
      j["width"] = wj;
    }
    jrows.push_back(j);
  }
  rep["rows"] = jrows;
  sink.report(rep);
  return timed_out ? kExitResource : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skolem function synthesis toolkit", "skolemkit"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub, bool oracle) {
    sub->add_option("--json", c.json_path, "Report path ('-' for stdout)");
    sub->add_option("--seed", c.seed, "Seed");
    sub->add_option("--timeout", c.timeout, "Per-query time limit in seconds");
    if (oracle) sub->add_option("--solver", c.solver, "internal or exec:PATH");
  };

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Synthesize a Skolem vector");
  synth->add_option("spec", sa.spec_path, "Specification (QDIMACS or annotated DIMACS)")->required();
  synth->add_option("--strategy", sa.strategy, "lex, cover, unique, auto or interp");
  synth->add_option("--k0", sa.k0, "Initial image-size guess for cover");
  synth->add_option("--max-k", sa.max_k, "Largest image-size guess (0: 2^m)");
  synth->add_option("--lex-limit", sa.lex_limit, "Largest m for lex");
  synth->add_option("-o,--output", sa.out_path, "Gate-list output ('-' for stdout)");
  common(synth, true);

  std::string spec_path, psi_path;
  auto* verify = app.add_subcommand("verify", "Check a Skolem vector against a specification");
  verify->add_option("spec", spec_path)->required();
  verify->add_option("skolem", psi_path)->required();
  common(verify, true);

  int bit = 1;
  std::string z_text;
  auto* cu = app.add_subcommand("check-unique", "Is Y_i uniquely defined by Z?");
  cu->add_option("spec", spec_path)->required();
  cu->add_option("--bit", bit, "Output index, 1-based")->required();
  cu->add_option("--z", z_text, "Comma-separated variable ids (default: X and earlier outputs)");
  common(cu, true);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a benchmark");
  gen->add_option("family", ga.family, "bphp, trap, factor or planted")->required();
  gen->add_option("--k", ga.k, "Pigeons (bphp) or image size (planted)");
  gen->add_option("--m", ga.m, "Output bits");
  gen->add_option("--n", ga.n, "Input bits (trap, planted)");
  gen->add_option("--window", ga.window, "Window bits of h (trap)");
  gen->add_option("--bits", ga.bits, "Width of X (factor)");
  gen->add_option("--factor-bits", ga.factor_bits, "Width of each factor (factor)");
  gen->add_option("--regime", ga.regime, "free, paper or interp (bphp)");
  gen->add_option("-o,--output", ga.out_path, "QDIMACS output ('-' for stdout)");
  gen->add_option("--ground-truth", ga.truth_path, "JSON ground truth");
  common(gen, false);

  std::string count_path, proj_text;
  int trials = 9;
  auto* count = app.add_subcommand("count", "Approximate projected model count");
  count->add_option("file", count_path, "DIMACS CNF or specification")->required();
  count->add_option("--proj", proj_text, "Comma-separated projection (default: all, or X for a spec)");
  count->add_option("--trials", trials, "Median-of trials");
  common(count, true);

  InterpArgs ia;
  auto* interp = app.add_subcommand("interp-exp", "Interpolant sizes on the bPHP bit-1 pair");
  interp->add_option("--m", ia.ms, "Range A..B or list A,B,C");
  interp->add_option("--k", ia.k, "Pigeons (default 2^m+1)");
  interp->add_option("-o,--output", ia.out_path, "CSV output ('-' for stdout)");
  interp->add_option("--proof-dir", ia.proof_dir, "Write each refutation in proof text format");
  interp->add_option("--width-max", ia.width_max, "Also search refutation width up to this bound");
  interp->add_option("--max-clauses", ia.max_clauses, "Clause budget of the width search");
  common(interp, false);

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  Sink sink{out, err, c.json_path};
  json rep;
  {
    std::string cmd;
    for (std::size_t i = 1; i < args.size(); ++i) cmd += (i > 1 ? " " : "") + args[i];
    rep["command"] = cmd;
  }
  try {
    if (*synth) return cmd_synth(sa, c, sink, rep);
    if (*verify) return cmd_verify(spec_path, psi_path, c, sink, rep);
    if (*cu) return cmd_check_unique(spec_path, bit, z_text, c, sink, rep);
    if (*gen) return cmd_gen(ga, c, sink, rep);
    if (*count) return cmd_count(count_path, proj_text, trials, c, sink, rep);
    if (*interp) return cmd_interp(ia, c, sink, rep);
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const LearnerFailure& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace skolem
