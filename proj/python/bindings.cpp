// Python bindings: script execution plus the C(Gamma) value type.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "valint/dsl/runner.hpp"
#include "valint/error.hpp"
#include "valint/gamma_values.hpp"

namespace py = pybind11;
using namespace valint;

namespace {

GaussRat to_gauss(const py::object& c) {
  if (py::isinstance<py::int_>(c)) return GaussRat(mpq_class(py::str(c).cast<std::string>()));
  if (py::hasattr(c, "numerator") && py::hasattr(c, "denominator"))  // fractions.Fraction
    return GaussRat(mpq_class(py::str(c.attr("numerator")).cast<std::string>() + "/" +
                              py::str(c.attr("denominator")).cast<std::string>()));
  throw py::type_error("coefficient must be int or fractions.Fraction");
}

GroupElement to_group(const std::vector<std::int64_t>& e) {
  if (e.empty()) throw py::value_error("exponent vector must be non-empty");
  return GroupElement(e);
}

}  // namespace

PYBIND11_MODULE(_valint, m) {
  m.doc() = "Exact integration on valued fields";

  static py::exception<Error> exc(m, "ValintError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(exc.ptr())(code_string(e.code()) + ": " + e.what());
      err.attr("code") = code_string(e.code());
      PyErr_SetObject(exc.ptr(), err.ptr());
    }
  });

  py::class_<dsl::Diagnostic>(m, "Diagnostic")
      .def_property_readonly("code", [](const dsl::Diagnostic& d) { return code_string(d.code); })
      .def_property_readonly("line", [](const dsl::Diagnostic& d) { return d.span.line; })
      .def_property_readonly("col", [](const dsl::Diagnostic& d) { return d.span.col; })
      .def_readonly("message", &dsl::Diagnostic::message)
      .def("__str__", &dsl::Diagnostic::format)
      .def("__repr__", &dsl::Diagnostic::format);

  py::class_<dsl::RunResult>(m, "RunResult")
      .def_readonly("transcript", &dsl::RunResult::transcript)
      .def_readonly("diagnostics", &dsl::RunResult::diagnostics)
      .def_readonly("exit_code", &dsl::RunResult::exit_code);

  m.def(
      "run",
      [](const std::string& source, int rank, int prec, std::uint64_t depth_limit, std::uint64_t seed) {
        dsl::Options o;
        o.rank = rank;
        o.prec = prec;
        o.depth_limit = depth_limit;
        o.seed = seed;
        py::gil_scoped_release release;
        return dsl::run_source(source, o);
      },
      py::arg("source"), py::kw_only(), py::arg("rank") = 1, py::arg("prec") = 8, py::arg("depth_limit") = 0,
      py::arg("seed") = 0, "Parse, check and execute a script.");
  m.def("format", [](const std::string& source) { return dsl::format_source(source); }, py::arg("source"),
        "Canonical form of a script.");

  py::class_<GammaValue>(m, "GammaValue")
      .def_static("zero", &GammaValue::zero, py::arg("rank") = 1)
      .def_static("one", &GammaValue::one, py::arg("rank") = 1)
      .def_static(
          "constant", [](const py::object& c, int rank) { return GammaValue::constant(rank, to_gauss(c)); },
          py::arg("c"), py::arg("rank") = 1)
      .def_static(
          "monomial",
          [](const std::vector<std::int64_t>& e, const py::object& c) { return GammaValue::monomial(to_gauss(c), to_group(e)); },
          py::arg("exponents"), py::arg("c") = 1, "c * X^exponents")
      .def_property_readonly("rank", &GammaValue::rank)
      .def("is_zero", &GammaValue::is_zero)
      .def("inverse", &GammaValue::inverse)
      .def("__pow__", &GammaValue::pow)
      .def("__neg__", [](const GammaValue& a) { return -a; })
      .def("__add__", [](const GammaValue& a, const GammaValue& b) { return a + b; })
      .def("__sub__", [](const GammaValue& a, const GammaValue& b) { return a - b; })
      .def("__mul__", [](const GammaValue& a, const GammaValue& b) { return a * b; })
      .def("__truediv__", [](const GammaValue& a, const GammaValue& b) { return a / b; })
      .def("__eq__", [](const GammaValue& a, const GammaValue& b) { return a == b; })
      .def("__str__", &GammaValue::to_string)
      .def("__repr__", [](const GammaValue& a) { return "GammaValue(" + a.to_string() + ")"; });
}
