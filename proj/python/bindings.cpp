#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "qtopos/analysis.hpp"
#include "qtopos/error.hpp"

namespace py = pybind11;
using namespace qtopos;

namespace {

py::object to_python(const ordered_json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Entries may be Python ints or exact literals such as "1/2" or "1-i".
GaussianRational scalar(const py::handle& h) {
  if (py::isinstance<py::bool_>(h) || py::isinstance<py::float_>(h))
    throw ParseError("scalars must be int or an exact string literal, got " + std::string(py::str(h.get_type())));
  if (py::isinstance<py::int_>(h)) return GaussianRational::parse(std::string(py::str(h)));
  return GaussianRational::parse(h.cast<std::string>());
}

Vector vector(const py::sequence& seq) {
  Vector v;
  for (const auto& x : seq) v.push_back(scalar(x));
  return v;
}

Subspace make_subspace(std::size_t n, const py::sequence& vectors) {
  std::vector<Vector> vs;
  for (const auto& v : vectors) {
    vs.push_back(vector(v.cast<py::sequence>()));
    if (vs.back().size() != n) throw DimensionMismatch("vector length differs from the dimension");
  }
  return Subspace::span(n, vs);
}

std::vector<std::vector<std::string>> basis_strings(const Subspace& s) {
  std::vector<std::vector<std::string>> out;
  for (const auto& v : s.basis()) {
    out.emplace_back();
    for (const auto& x : v) out.back().push_back(x.to_string());
  }
  return out;
}

std::unique_ptr<Analysis> build(Scenario sc, const std::optional<std::string>& caps) {
  if (caps) apply_cap_overrides(sc.caps, *caps);
  return std::make_unique<Analysis>(std::move(sc));
}

}  // namespace

PYBIND11_MODULE(qtopos, m) {
  m.doc() = "Exact sieve-valued valuations of quantum propositions";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto validation = py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<CommutantViolation>(m, "CommutantViolation", validation.ptr());
  py::register_exception<OrthogonalityViolation>(m, "OrthogonalityViolation", validation.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());
  py::register_exception<UnknownObject>(m, "UnknownObject", error.ptr());
  py::register_exception<NotSubPresheaf>(m, "NotSubPresheaf", error.ptr());

  py::class_<Subspace>(m, "Subspace")
      .def(py::init(&make_subspace), py::arg("dimension"), py::arg("vectors"))
      .def_static("zero", &Subspace::zero)
      .def_static("whole", &Subspace::whole)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_property_readonly("basis", &basis_strings)
      .def("__eq__", [](const Subspace& a, const Subspace& b) { return a == b; })
      .def("__hash__", [](const Subspace& s) { return py::hash(py::str(s.key())); })
      .def("__le__", [](const Subspace& a, const Subspace& b) { return leq(a, b); })
      .def("__and__", [](const Subspace& a, const Subspace& b) { return meet(a, b); })
      .def("__or__", [](const Subspace& a, const Subspace& b) { return join(a, b); })
      .def("__invert__", [](const Subspace& a) { return ortho(a); })
      .def("__repr__", &Subspace::to_string);

  m.def("meet", &meet);
  m.def("join", &join);
  m.def("ortho", &ortho);
  m.def("leq", py::overload_cast<const Subspace&, const Subspace&>(&leq));
  m.def("project", &project_onto_eigenspace, py::arg("state"), py::arg("eigenspace"),
        "(state v eigenspace-perp) ^ eigenspace");

  py::class_<Analysis, std::unique_ptr<Analysis>>(m, "Scenario")
      .def_static(
          "load", [](const std::string& path, std::optional<std::string> caps) { return build(load_scenario(path), caps); },
          py::arg("path"), py::arg("caps") = py::none())
      .def_static(
          "parse", [](const std::string& text, std::optional<std::string> caps) { return build(parse_scenario(text), caps); },
          py::arg("text"), py::arg("caps") = py::none())
      .def_property_readonly("name", [](const Analysis& a) { return a.scenario().name; })
      .def_property_readonly("runs",
                             [](const Analysis& a) {
                               std::vector<std::string> names;
                               for (const auto& r : a.scenario().runs) names.push_back(r.name);
                               return names;
                             })
      .def("describe", [](const Analysis& a) { return to_python(describe(a)); })
      .def("check", [](const Analysis& a) { return to_python(run_check(a)); })
      .def("check_text", [](const Analysis& a) { return render_check_text(run_check(a)); })
      .def("valuate", [](const Analysis& a, const std::string& run) { return to_python(run_valuate(a, run)); },
           py::arg("run"))
      .def("dump_site", [](const Analysis& a) { return to_python(dump_site(a)); })
      .def("determinate", [](const Analysis& a, const std::string& run) {
        auto idx = a.run_index(run);
        if (!idx) throw UnknownObject("run '" + run + "'");
        return a.determinate(*idx);
      });
}
