// Python bindings: the main operations with plain-Python argument and return
// types (12-coefficient sequences in the order a20,a11,a02,a10,a01,a00,
// b20,b11,b02,b10,b01,b00; affine maps as (m11,m12,m21,m22,t1,t2)).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadmap/analyze.hpp"
#include "quadmap/critical.hpp"
#include "quadmap/normalize.hpp"
#include "quadmap/report.hpp"
#include "quadmap/selftest.hpp"

namespace py = pybind11;
using namespace quadmap;

namespace {

QuadraticMap to_map(const std::array<double, 12>& c) { return QuadraticMap::from_coeffs(c); }

AffineMap2 to_affine(const std::array<double, 6>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5]};
}

std::array<double, 6> from_affine(const AffineMap2& a) {
  return {a.m11, a.m12, a.m21, a.m22, a.t1, a.t2};
}

ClassLabel to_label(const std::string& s) {
  const auto l = label_from_string(s);
  if (!l) throw py::value_error("unknown class label: " + s);
  return *l;
}

py::dict classify_py(const std::array<double, 12>& coeffs) {
  const ClassificationResult r = classify(to_map(coeffs));
  py::dict d;
  d["label"] = to_string(r.label);
  d["residual"] = r.residual;
  d["h"] = from_affine(r.witness.h);
  d["k"] = from_affine(r.witness.k);
  py::list trace;
  for (const auto& st : r.trace) trace.append(st.name);
  d["trace"] = trace;
  return d;
}

py::dict preimage_count_py(const std::array<double, 12>& coeffs, double x, double y) {
  const PreimageCardinality c = preimage_count(to_map(coeffs), {x, y});
  py::dict d;
  d["infinite"] = c.is_infinite;
  if (c.is_infinite) {
    d["kind"] = to_string(c.kind);
  } else {
    d["count"] = c.count;
    py::list pts;
    for (const Vec2& p : c.points) pts.append(py::make_tuple(p.x, p.y));
    d["points"] = pts;
  }
  return d;
}

py::dict profile_py(const std::array<double, 12>& coeffs, int n, unsigned seed) {
  const PreimageProfile p = preimage_profile(to_map(coeffs), n, seed);
  py::dict d;
  d["finite"] = std::vector<int>(p.finite.begin(), p.finite.end());
  d["has_infinite"] = p.has_infinite;
  py::list kinds;
  for (InfiniteKind k : p.kinds) kinds.append(to_string(k));
  d["kinds"] = kinds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_quadmap, m) {
  m.doc() = "Classification of planar quadratic maps up to affine equivalence";

  py::register_exception<not_quadratic_error>(m, "NotQuadraticError");
  py::register_exception<verification_error>(m, "VerificationError");
  py::register_exception<not_invertible_error>(m, "NotInvertibleError");
  py::register_exception<not_applicable_error>(m, "NotApplicableError");
  py::register_exception<spec_parse_error>(m, "SpecParseError");

  m.def("labels", [] {
    std::vector<std::string> out;
    for (ClassLabel l : kAllLabels) out.push_back(to_string(l));
    return out;
  });
  m.def("normal_form",
        [](const std::string& l) { return normal_form(to_label(l)).coeffs(); });
  m.def("classify", &classify_py, py::arg("coeffs"));
  m.def(
      "verify_witness",
      [](const std::array<double, 12>& coeffs, const std::string& label,
         const std::array<double, 6>& h, const std::array<double, 6>& k) {
        return verify_witness(to_map(coeffs), to_label(label), {to_affine(h), to_affine(k)});
      },
      py::arg("coeffs"), py::arg("label"), py::arg("h"), py::arg("k"));
  m.def(
      "compose",
      [](const std::array<double, 6>& k, const std::array<double, 12>& coeffs,
         const std::array<double, 6>& h) {
        return compose(to_affine(k), to_map(coeffs), to_affine(h)).coeffs();
      },
      py::arg("k"), py::arg("coeffs"), py::arg("h"));
  m.def(
      "evaluate",
      [](const std::array<double, 12>& coeffs, double x, double y) {
        const Vec2 r = evaluate(to_map(coeffs), {x, y});
        return py::make_tuple(r.x, r.y);
      },
      py::arg("coeffs"), py::arg("x"), py::arg("y"));
  m.def("preimage_count", &preimage_count_py, py::arg("coeffs"), py::arg("x"), py::arg("y"));
  m.def("preimage_profile", &profile_py, py::arg("coeffs"), py::arg("n") = 240,
        py::arg("seed") = 1);
  m.def("critical_set_class",
        [](const std::array<double, 12>& coeffs) { return to_string(j0j1_class(to_map(coeffs))); });
  m.def("critical_set_class_of",
        [](const std::string& l) { return to_string(critical_set_class_of(to_label(l))); });
  m.def("smooth_class_of",
        [](const std::string& l) { return to_string(smooth_class_of(to_label(l))); });
  m.def("distinguishing_invariant", [](const std::string& a, const std::string& b) {
    const InvariantReport r = distinguishing_invariant(to_label(a), to_label(b));
    py::dict d;
    d["invariant"] = r.invariant;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    return d;
  });
  m.def("quadratic_inverse",
        [](const std::array<double, 12>& coeffs) { return quadratic_inverse(to_map(coeffs)).coeffs(); });
  m.def("injective_on_critical_set",
        [](const std::array<double, 12>& coeffs) { return injective_on_critical_set(to_map(coeffs)); });
  m.def(
      "report_json",
      [](const std::string& spec_text, unsigned seed, bool exact) {
        const MapSpec spec = parse_map_spec(spec_text);
        ReportOptions opt;
        opt.seed = seed;
        opt.exact = exact;
        return make_report_json(spec, opt);
      },
      py::arg("spec_json"), py::arg("seed") = 0, py::arg("exact") = false);
  m.def(
      "run_acceptance",
      [](unsigned seed) {
        py::list out;
        for (const CriterionResult& r : run_acceptance(seed)) {
          py::dict d;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["seconds"] = r.seconds;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 0);
}
