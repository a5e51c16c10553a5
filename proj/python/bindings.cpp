#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "skolem/benchgen.hpp"
#include "skolem/cli.hpp"
#include "skolem/interplab.hpp"
#include "skolem/io.hpp"
#include "skolem/oracle.hpp"
#include "skolem/synth.hpp"
#include "skolem/verify.hpp"

namespace py = pybind11;
using namespace skolem;

namespace {

std::vector<bool> y_bits(const Specification& spec, const Assignment& a) {
  std::vector<bool> y;
  for (Var v : spec.outputs()) y.push_back(a.has(v) && a.get(v));
  return y;
}

SkolemVector synth(const Specification& spec, const std::string& strategy, uint64_t seed) {
  Oracle oracle;
  if (strategy == "lex") return synth_lex(spec);
  if (strategy == "cover") return synth_cover(spec, oracle, seed).first;
  if (strategy == "auto") return synth_auto(spec, oracle, seed);
  if (strategy == "interp") return slivovsky_synth(spec).psi;
  if (strategy == "unique") {
    std::vector<Circuit> psis;
    for (std::size_t i = 0; i < spec.outputs().size(); ++i) {
      if (!check_unique(spec, i, prefix_vars(spec, i), oracle))
        throw InvalidArgument("Y" + std::to_string(i + 1) + " is not unique");
      psis.push_back(learn_unique_bit(spec, i, oracle, derive_seed(seed, "unique", i)).h);
    }
    return SkolemVector(spec.inputs(), spec.outputs(), std::move(psis));
  }
  throw InvalidArgument("unknown strategy '" + strategy + "'");
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  py::register_exception<Error>(mod, "SkolemError", PyExc_RuntimeError);

  py::class_<Specification>(mod, "Specification")
      .def_static("parse", [](const std::string& text) { return parse_spec(text); })
      .def_property_readonly("n", &Specification::n)
      .def_property_readonly("m", &Specification::m)
      .def_property_readonly("inputs", &Specification::inputs)
      .def_property_readonly("outputs", &Specification::outputs)
      .def("eval", [](const Specification& s, const std::vector<bool>& x,
                      const std::vector<bool>& y) { return s.eval(s.assignment(x, y)); })
      .def("to_qdimacs", &write_qdimacs)
      .def("size", &spec_size);

  py::class_<SkolemVector>(mod, "SkolemVector")
      .def_static("parse", [](const std::string& text, const Specification& s) { return parse_skolem(text, s); })
      .def("eval", &SkolemVector::eval, "Output bits for input bits (MSB first).")
      .def_property_readonly("sizes",
                             [](const SkolemVector& v) {
                               std::vector<std::size_t> out;
                               for (const auto& c : v.psis()) out.push_back(c.size());
                               return out;
                             })
      .def_property_readonly("total_size", &SkolemVector::total_size)
      .def("to_text", [](const SkolemVector& v) { return emit_skolem(v); });

  mod.def("synth", &synth, py::arg("spec"), py::arg("strategy") = "auto", py::arg("seed") = 0,
          "strategy: lex, cover, unique, auto or interp");

  mod.def(
      "verify",
      [](const Specification& spec, const SkolemVector& psi) -> py::object {
        Oracle oracle;
        Verdict v = verify_skolem(spec, psi, oracle);
        if (v.valid) return py::none();
        return py::make_tuple(v.witness.bits(spec.inputs()), y_bits(spec, v.witness));
      },
      "None when valid, else a counterexample (x, y) with F(x,y)=1 and F(x,psi(x))=0.");

  mod.def(
      "check_unique",
      [](const Specification& spec, std::size_t bit, std::optional<std::vector<Var>> z) {
        Oracle oracle;
        if (bit >= spec.outputs().size()) throw InvalidArgument("bit out of range");
        return check_unique(spec, bit, z ? *z : prefix_vars(spec, bit), oracle);
      },
      py::arg("spec"), py::arg("bit"), py::arg("z") = py::none(), "bit is 0-based; z defaults to X and Y before bit");

  mod.def(
      "count",
      [](const std::string& dimacs, const std::vector<Var>& proj, int trials, uint64_t seed) {
        return approx_count_projected(parse_dimacs(dimacs), proj, trials, seed).estimate;
      },
      py::arg("dimacs"), py::arg("proj"), py::arg("trials") = 9, py::arg("seed") = 0);

  mod.def("gen_bphp", [](int k, int m) { return gen_bphp(BphpParams{k, m}).spec; }, py::arg("k"), py::arg("m"));
  mod.def("bphp_lexfirst", [](int k, int m) { return bphp_lexfirst_skolem(BphpParams{k, m}); }, py::arg("k"),
          py::arg("m"));
  mod.def("gen_factor", [](int bits, int factor_bits) { return gen_factor(FactorParams{bits, factor_bits}); },
          py::arg("bits"), py::arg("factor_bits") = 0);
  mod.def("gen_planted", [](int n, int m, int k, uint64_t seed) { return gen_planted_cover(n, m, k, seed).spec; },
          py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed") = 0);
  mod.def("gen_random", &gen_random_spec, py::arg("n"), py::arg("m"), py::arg("gates"), py::arg("seed") = 0);

  mod.def(
      "interp_experiment",
      [](const std::vector<int>& ms, double time_limit) {
        std::ostringstream os;
        write_interp_csv(os, interp_size_experiment(ms, time_limit));
        return os.str();
      },
      py::arg("ms"), py::arg("time_limit") = 0, "CSV text with one row per m");

  mod.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "skolemkit");
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs one command line; returns (exit code, stdout, stderr).");
}
