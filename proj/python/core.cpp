#include "hopfcyc/cli.hpp"
#include "hopfcyc/cyclic.hpp"
#include "hopfcyc/pairing.hpp"
#include "hopfcyc/structures.hpp"
#include "hopfcyc/weil.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hopfcyc;

namespace {

std::string pick(const Bundle& b, const std::optional<std::string>& name, const std::string& role) {
  return name ? *name : b.selected(role);
}

py::list validate(const std::string& text) {
  Bundle b = load_structure(text);
  py::list out;
  for (const auto& r : b.validate_all()) {
    py::dict d;
    d["object"] = r.object;
    d["pass"] = r.pass();
    d["flags"] = r.flags;
    py::list checks;
    for (const auto& c : r.checks) checks.append(py::make_tuple(c.axiom, c.ok, c.witness));
    d["checks"] = checks;
    out.append(d);
  }
  return out;
}

std::vector<std::size_t> cyclic_dims(const std::string& text, std::size_t cap, const std::string& mode,
                                     std::optional<std::string> coalgebra, std::optional<std::string> sayd) {
  Bundle b = load_structure(text);
  auto mod = std::make_shared<const CocyclicModule>(build_coalgebra_cocyclic(
      b.hopf, b.module_coalgebra(pick(b, coalgebra, "coalgebra")), b.sayd(pick(b, sayd, "sayd")), cap + 1));
  CyclicCohomology cc(mod, cap);
  switch (parse_mode(mode)) {
    case HomologyMode::Hochschild:
      return cc.hochschild_dims();
    case HomologyMode::Cyclic:
      return cc.cyclic_dims();
    default:
      throw Error(ErrorCode::NotSupported, "periodic mode: use run('cohomology', ...)");
  }
}

py::dict weil_dims(const std::string& text, std::size_t max_degree, std::size_t n, std::optional<std::string> coalgebra,
                   std::optional<std::string> sayd) {
  Bundle b = load_structure(text);
  WeilAlgebra w(b.hopf, b.module_coalgebra(pick(b, coalgebra, "coalgebra")), b.sayd(pick(b, sayd, "sayd")), max_degree);
  py::dict d;
  d["tower"] = tower_complex(w, n).dims(max_degree - 1);
  d["ideal"] = ideal_complex(w, n + 1).dims(max_degree - 1);
  d["full"] = full_complex(w).dims(max_degree - 1);
  return d;
}

py::list factors(const std::vector<std::pair<std::size_t, std::size_t>>& mn) {
  auto cmp = compare_pairings(mn);
  py::list out;
  for (const auto& f : cmp.factors) {
    py::dict d;
    d["m"] = f.m;
    d["n"] = f.n;
    d["defined"] = f.defined;
    d["measured"] = f.defined ? scalar_str(f.measured) : std::string();
    d["expected"] = scalar_str(f.expected);
    d["matches"] = f.matches;
    d["note"] = f.note;
    out.append(d);
  }
  return out;
}

py::tuple run_cli(const std::string& command, const std::string& input, std::size_t max_degree, std::size_t w_cap,
                  std::size_t m, const std::string& mode, const std::string& complex, bool signed_rel,
                  const std::string& format, std::optional<std::string> cache_dir, bool use_cache) {
  RunConfig c;
  c.command = command;
  c.input = input;
  c.max_degree = max_degree;
  c.w_cap = w_cap;
  c.m = m;
  c.mode = mode;
  c.complex = complex;
  c.signed_rel = signed_rel;
  c.format = parse_format(format);
  c.cache_dir = cache_dir;
  c.use_cache = use_cache;
  if (command == "cache") c.cache_action = input.empty() ? "list" : input;
  std::ostringstream o, e;
  int code = run(c, o, e);
  return py::make_tuple(code, o.str(), e.str());
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "exact Hopf-cyclic cohomology, Weil algebras and pairings";
  mod.attr("__version__") = kToolVersion;

  py::register_exception<Error>(mod, "HopfcycError");

  mod.def("fixture_path", &fixture_path, py::arg("name"));
  mod.def("sha256_hex", &sha256_hex, py::arg("data"));
  mod.def("validate", &validate, py::arg("text"), "validation reports of every object in a structure file");
  mod.def("cyclic_dims", &cyclic_dims, py::arg("text"), py::arg("cap") = 4, py::arg("mode") = "cyclic",
          py::arg("coalgebra") = py::none(), py::arg("sayd") = py::none());
  mod.def("weil_dims", &weil_dims, py::arg("text"), py::arg("max_degree") = 6, py::arg("n") = 0,
          py::arg("coalgebra") = py::none(), py::arg("sayd") = py::none(),
          "cohomology dims of W_n nat, I_{n+1} nat and W nat in degrees 1..D-1");
  mod.def("comparison_factors", &factors, py::arg("mn"));
  mod.def("run", &run_cli, py::arg("command"), py::arg("input") = "", py::arg("max_degree") = 6, py::arg("w_cap") = 1,
          py::arg("m") = 0, py::arg("mode") = "cyclic", py::arg("complex") = "coalgebra", py::arg("signed_rel") = true,
          py::arg("format") = "json", py::arg("cache_dir") = py::none(), py::arg("use_cache") = false,
          "same as the command line tool; returns (exit code, stdout, stderr)");
}
