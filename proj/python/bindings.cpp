#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trapkit/principles.hpp"
#include "trapkit/runner.hpp"

namespace py = pybind11;
namespace tr = trapkit::runner;
using trapkit::Point;

namespace {

Point to_point(const std::vector<double>& v) { return Point(v); }

std::vector<double> from_point(const Point& p) {
  std::vector<double> v(static_cast<std::size_t>(p.dim()));
  for (int i = 0; i < p.dim(); ++i) v[static_cast<std::size_t>(i)] = p[i];
  return v;
}

tr::Context context_from(const std::string& context_json) {
  tr::json doc = tr::json::parse(context_json.empty() ? "{}" : context_json);
  doc["schema"] = tr::kSchemaId;
  doc["name"] = "call";
  doc["tasks"] = tr::json::array();
  return tr::parse_scenario(doc.dump()).context;
}

}  // namespace

PYBIND11_MODULE(_trapkit, m) {
  m.doc() = "Native core of trapkit";
  m.attr("__version__") = TRAPKIT_VERSION;

  auto base = py::register_exception<trapkit::Error>(m, "TrapkitError");
  py::register_exception<trapkit::ParseError>(m, "ParseError", base);
  py::register_exception<trapkit::DimensionError>(m, "DimensionError", base);
  py::register_exception<trapkit::DomainError>(m, "DomainError", base);
  auto contract = py::register_exception<trapkit::ContractError>(m, "ContractError", base);
  py::register_exception<trapkit::HypothesisError>(m, "HypothesisError", contract);
  py::register_exception<tr::ScenarioError>(m, "ScenarioError", base);

  py::class_<trapkit::ScalarField>(m, "Field")
      .def(py::init([](const std::string& expr, int dim, const std::string& domain,
                       const std::vector<std::string>& grad) { return trapkit::parse_field(expr, dim, domain, grad); }),
           py::arg("expr"), py::arg("dim"), py::arg("domain") = "", py::arg("grad") = std::vector<std::string>{})
      .def_property_readonly("dim", &trapkit::ScalarField::dim)
      .def_property_readonly("has_analytic_grad", &trapkit::ScalarField::has_analytic_grad)
      .def("__call__", [](const trapkit::ScalarField& f, const std::vector<double>& x) {
        return f.eval(to_point(x)).raw();
      })
      .def("gradient", [](const trapkit::ScalarField& f, const std::vector<double>& x) {
        return from_point(trapkit::gradient(f, to_point(x)));
      })
      .def("fd_gradient", [](const trapkit::ScalarField& f, const std::vector<double>& x) {
        return from_point(trapkit::fd_gradient(f, to_point(x)));
      });

  m.def("catalog_json", [] { return tr::catalog_json().dump(); });

  m.def(
      "call",
      [](const std::string& op, const std::string& args_json, const std::string& context_json) {
        const tr::Context ctx = context_from(context_json);
        const tr::json args = tr::json::parse(args_json);
        tr::validate_args(tr::find_operation(op), args, ctx);
        return tr::dispatch(op, args, ctx).dump();
      },
      py::arg("op"), py::arg("args_json"), py::arg("context_json") = "");

  m.def("smoke", [](const std::string& op) {
    const auto& info = tr::find_operation(op);
    return tr::dispatch(op, info.smoke_args, tr::smoke_context()).dump();
  });

  m.def("run_scenario_text", [](const std::string& text) {
    const auto r = tr::run(tr::parse_scenario(text));
    return py::make_tuple(tr::report_json(r.report), r.all_executed);
  });
}
