// Python bindings for the main verification operations. Matrices cross the
// boundary as nested lists with int or "p/q" string entries; exact rationals
// come back as strings so nothing is lost to floats.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hh3/chain.hpp"
#include "hh3/errors.hpp"
#include "hh3/form_lie.hpp"
#include "hh3/numeric.hpp"
#include "hh3/report.hpp"

namespace py = pybind11;

namespace {

hh3::QMatrix matrix_from_py(const py::sequence& rows) {
  const int r = static_cast<int>(py::len(rows));
  if (r == 0) throw hh3::Error("empty matrix");
  py::sequence first = rows[0].cast<py::sequence>();
  const int c = static_cast<int>(py::len(first));
  hh3::QMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    py::sequence row = rows[i].cast<py::sequence>();
    if (static_cast<int>(py::len(row)) != c) throw hh3::Error("ragged matrix");
    for (int j = 0; j < c; ++j) {
      py::object cell = row[j];
      if (py::isinstance<py::int_>(cell)) {
        m(i, j) = hh3::Rational(cell.cast<long long>());
      } else {
        m(i, j) = hh3::Rational::parse(cell.cast<std::string>());
      }
    }
  }
  return m;
}

std::vector<std::vector<std::string>> matrix_to_py(const hh3::QMatrix& m) {
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    out.push_back(std::move(row));
  }
  return out;
}

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = json_to_py(*it);
      return out;
    }
    default:
      return py::none();
  }
}

py::object report_to_py(const hh3::VerificationReport& r) {
  return json_to_py(r.to_json());
}

hh3::CycleMode cycle_mode_from(const std::string& mode) {
  if (mode == "+1") return hh3::CycleMode::EpsPlus;
  if (mode == "-1") return hh3::CycleMode::EpsMinus;
  if (mode == "generic") return hh3::CycleMode::EpsGeneric;
  if (mode == "generic-E") return hh3::CycleMode::GenericE;
  throw hh3::Error("mode must be '+1', '-1', 'generic' or 'generic-E'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "symbolic and numeric verification of the Hochschild 3-cycle construction "
            "on matrix quantum group algebras";

  // Translators run newest-first: register the base before the subclass.
  py::register_exception<hh3::Error>(m, "VerifierError");
  py::register_exception<hh3::NotSemisimpleError>(m, "NotSemisimpleError");

  m.def(
      "verify_cycle",
      [](const std::string& mode) { return report_to_py(hh3::verify_cycle(cycle_mode_from(mode))); },
      py::arg("mode") = "generic",
      "Check b3(c_V) = 0 symbolically; mode '+1', '-1', 'generic' or 'generic-E'.");

  m.def(
      "selfdual",
      [](const std::string& direction) {
        hh3::SelfdualDirection d = direction == "forward"    ? hh3::SelfdualDirection::Forward
                                   : direction == "backward" ? hh3::SelfdualDirection::Backward
                                                             : hh3::SelfdualDirection::Both;
        return report_to_py(hh3::verify_selfdual_equivalence(d));
      },
      py::arg("direction") = "both", "Replay the self-duality equivalence.");

  m.def(
      "pairing",
      [](const py::sequence& f1, const py::sequence& f2, const py::sequence& f3,
         const py::sequence& e) {
        return hh3::pairing_symbolic(matrix_from_py(f1), matrix_from_py(f2), matrix_from_py(f3),
                                     matrix_from_py(e))
            .str();
      },
      py::arg("f1"), py::arg("f2"), py::arg("f3"), py::arg("e"),
      "Cap pairing of c_V with the cup of three derivations; exact rational string.");

  m.def(
      "trace_triple",
      [](const py::sequence& f1, const py::sequence& f2, const py::sequence& f3) {
        return (matrix_from_py(f1) * matrix_from_py(f2) * matrix_from_py(f3)).trace().str();
      },
      py::arg("f1"), py::arg("f2"), py::arg("f3"),
      "Matrix oracle tr(F1 F2 F3) as an exact rational string.");

  m.def(
      "so_basis",
      [](const py::sequence& e) {
        std::vector<std::vector<std::vector<std::string>>> out;
        for (const auto& f : hh3::so_e_basis(matrix_from_py(e)).basis) out.push_back(matrix_to_py(f));
        return out;
      },
      py::arg("e"), "Exact basis of so(E) = {F : E F + F^T E = 0}.");

  m.def(
      "casimir_pairing",
      [](const py::sequence& e) {
        auto result = hh3::total_pairing(matrix_from_py(e));
        py::dict out;
        out["value"] = result.value.str();
        out["dim_g"] = result.dim_g;
        out["trace_omega"] = result.omega.trace().str();
        out["report"] = report_to_py(result.report);
        return out;
      },
      py::arg("e"), "Total Casimir pairing -tr(Omega)/2 with the HH3 != 0 verdict.");

  m.def(
      "hh0_check",
      [](int samples, uint64_t seed) { return report_to_py(hh3::hh0_commutator_check(samples, seed)); },
      py::arg("samples") = 100, py::arg("seed") = 0x5eedULL,
      "Counit vanishes on commutators and maps 1 to 1.");

  m.def(
      "numeric_zero_check_cycle",
      [](const py::sequence& e, int samples, double tol, uint64_t seed) {
        auto form = hh3::BilinearFormSpec::concrete(matrix_from_py(e));
        return report_to_py(
            hh3::numeric_zero_check(hh3::boundary(hh3::build_cv()), form, samples, tol, seed));
      },
      py::arg("e"), py::arg("samples") = 100, py::arg("tol") = 1e-9, py::arg("seed") = 0x5eedULL,
      "Numeric oracle for b3(c_V) at isometry points of E.");

  m.def(
      "numeric_zero_check_residual",
      [](const py::sequence& e, int samples, double tol, uint64_t seed, const std::string& points) {
        auto form = hh3::BilinearFormSpec::concrete(matrix_from_py(e));
        auto kind = points == "general" ? hh3::PointKind::GeneralLinear : hh3::PointKind::Isometry;
        return report_to_py(hh3::numeric_zero_check(hh3::generic_cycle_residual().full, form,
                                                    samples, tol, seed, kind));
      },
      py::arg("e"), py::arg("samples") = 100, py::arg("tol") = 1e-3, py::arg("seed") = 0x5eedULL,
      py::arg("points") = "general",
      "Numeric oracle for the generic-E boundary residual.");

  m.def(
      "generic_residual",
      []() {
        auto res = hh3::generic_cycle_residual();
        py::dict out;
        out["full"] = hh3::render(res.full);
        out["unit_first_factor"] = hh3::render(res.unit_first_factor);
        out["unit_middle_factor"] = hh3::render(res.unit_middle_factor);
        return out;
      },
      "Canonical generic-E residual of b3(c_V), split into its two families.");

  m.def("build_cv_render", []() { return hh3::render(hh3::build_cv()); },
        "Canonical textual form of the 3-chain c_V.");
  m.def("boundary_cv_render", []() { return hh3::render(hh3::boundary(hh3::build_cv())); },
        "Canonical textual form of b3(c_V) under contraction only.");

  m.attr("__version__") = "0.1.0";
}
