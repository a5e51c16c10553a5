// DIMACS front end for the internal engine, with SAT-competition output.
#include <fstream>
#include <iostream>
#include <sstream>

#include "skolem/error.hpp"
#include "skolem/io.hpp"
#include "skolem/sat.hpp"

int main(int argc, char** argv) {
  using namespace skolem;
  std::string text;
  if (argc > 1 && std::string(argv[argc - 1]) != "-") {
    std::ifstream in(argv[argc - 1]);
    if (!in) {
      std::cerr << "cannot open " << argv[argc - 1] << "\n";
      return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  }
  try {
    Cnf cnf = parse_dimacs(text);
    Solver s;
    s.add_cnf(cnf);
    if (!s.solve()) {
      std::cout << "s UNSATISFIABLE\n";
      return 20;
    }
    std::cout << "s SATISFIABLE\nv";
    for (Var v = 1; v <= cnf.num_vars(); ++v) std::cout << ' ' << (s.model_value(v) ? v : -v);
    std::cout << " 0\n";
    return 10;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
