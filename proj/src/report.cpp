#include "quadmap/report.hpp"

#include <cmath>
#include <thread>

#include <json.hpp>

#include "quadmap/analyze.hpp"
#include "quadmap/critical.hpp"
#include "quadmap/normalize.hpp"

namespace quadmap {

using nlohmann::json;

namespace {

const char* kCoeffKeys[12] = {"a20", "a11", "a02", "a10", "a01", "a00",
                              "b20", "b11", "b02", "b10", "b01", "b00"};

Rational rational_from_string(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      // integer or decimal literal
      if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
          s.find('E') == std::string::npos)
        return Rational(boost::multiprecision::cpp_int(s));
      return Rational(std::stod(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw spec_parse_error("zero denominator in \"" + s + "\"");
    return Rational(num, den);
  } catch (const spec_parse_error&) {
    throw;
  } catch (const std::exception&) {
    throw spec_parse_error("cannot parse coefficient value \"" + s + "\"");
  }
}

json affine_json(const AffineMap2& a) {
  return json{{"m11", a.m11}, {"m12", a.m12}, {"m21", a.m21},
              {"m22", a.m22}, {"t1", a.t1},   {"t2", a.t2}};
}

json map_json(const QuadraticMap& q) {
  json j;
  const auto c = q.coeffs();
  for (int i = 0; i < 12; ++i) j[kCoeffKeys[i]] = c[i];
  return j;
}

json profile_json(const PreimageProfile& p) {
  json kinds = json::array();
  for (InfiniteKind k : p.kinds) kinds.push_back(to_string(k));
  return json{{"finite", std::vector<int>(p.finite.begin(), p.finite.end())},
              {"has_infinite", p.has_infinite},
              {"kinds", kinds}};
}

}  // namespace

MapSpec parse_map_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw spec_parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw spec_parse_error("map spec must be a JSON object");

  MapSpec spec;
  std::array<double, 12> cd{};
  std::array<Rational, 12> cr{};
  for (auto& [key, value] : j.items()) {
    if (key == "label") {
      if (!value.is_string()) throw spec_parse_error("\"label\" must be a string");
      spec.label_hint = value.get<std::string>();
      continue;
    }
    if (key == "mode") {
      if (!value.is_string()) throw spec_parse_error("\"mode\" must be a string");
      spec.mode = value.get<std::string>();
      if (*spec.mode != "float" && *spec.mode != "exact")
        throw spec_parse_error("\"mode\" must be \"float\" or \"exact\"");
      continue;
    }
    int idx = -1;
    for (int i = 0; i < 12; ++i)
      if (key == kCoeffKeys[i]) idx = i;
    if (idx < 0) throw spec_parse_error("unknown key \"" + key + "\" in map spec");
    Rational v;
    if (value.is_number_integer())
      v = Rational(value.get<long long>());
    else if (value.is_number())
      v = Rational(value.get<double>());
    else if (value.is_string())
      v = rational_from_string(value.get<std::string>());
    else
      throw spec_parse_error("coefficient \"" + key + "\" must be a number or string");
    cr[idx] = v;
    cd[idx] = to_double(v);
  }
  spec.map = QuadraticMap::from_coeffs(cd);
  spec.exact_map = QuadraticMapT<Rational>::from_coeffs(cr);
  return spec;
}

std::string map_spec_json(const QuadraticMap& q) { return map_json(q).dump(2); }

std::string make_report_json(const MapSpec& spec, const ReportOptions& opt) {
  const QuadraticMap& q = spec.map;
  json rep;
  rep["input"] = map_json(q);
  rep["seed"] = opt.seed;

  ClassificationResult res = classify(q);
  rep["label"] = to_string(res.label);
  rep["normal_form"] = map_json(normal_form(res.label));
  rep["witness"] = json{{"h", affine_json(res.witness.h)}, {"k", affine_json(res.witness.k)}};
  rep["residual"] = res.residual;
  rep["verified_residual"] = verify_witness(q, res.label, res.witness);

  json trace = json::array();
  for (const ReductionStep& st : res.trace)
    trace.push_back(json{{"name", st.name},
                         {"h", affine_json(st.h_step)},
                         {"k", affine_json(st.k_step)},
                         {"after", map_json(st.after)}});
  rep["trace"] = trace;

  const ConicCoefficients cc = det_jacobian_conic(q);
  rep["jacobian_conic"] = json{{"A", cc.A}, {"B", cc.B}, {"C", cc.C},
                               {"D", cc.D}, {"E", cc.E}, {"F", cc.F},
                               {"tag", to_string(classify_conic_tag(cc))}};
  if (opt.exact) {
    const auto ce = det_jacobian_conic(spec.exact_map);
    rep["jacobian_conic"]["tag_exact"] = to_string(classify_conic_tag_exact(ce));
  }

  rep["critical_set_class"] = to_string(j0j1_class(q));
  rep["critical_set_class_of_label"] = to_string(critical_set_class_of(res.label));
  rep["smooth_class"] = to_string(smooth_class_of(res.label));

  const PreimageProfile prof = preimage_profile(q, opt.profile_targets, opt.seed + 1);
  rep["preimage_profile"] = profile_json(prof);
  rep["reference_profile"] = profile_json(reference_profile(res.label));
  rep["profile_matches_class"] = profiles_match(prof, reference_profile(res.label));

  try {
    rep["injective_on_critical_set"] = injective_on_critical_set(q);
  } catch (const not_applicable_error&) {
    rep["injective_on_critical_set"] = nullptr;
  }

  if (res.label == ClassLabel::DP1) rep["quadratic_inverse"] = map_json(quadratic_inverse(q));

  if (spec.label_hint) {
    rep["label_hint"] = *spec.label_hint;
    rep["label_hint_matches"] = (label_from_string(*spec.label_hint) == res.label);
  }
  return rep.dump(2);
}

ScanResult run_scan(const QuadraticMap& base, const QuadraticMap& dir1,
                    const QuadraticMap& dir2, double min1, double max1, int n1,
                    double min2, double max2, int n2, int threads) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("scan resolution must be positive");
  const auto d1 = dir1.coeffs();
  const auto d2 = dir2.coeffs();
  double s1 = 0, s2 = 0, dot = 0;
  for (int i = 0; i < 12; ++i) {
    s1 += d1[i] * d1[i];
    s2 += d2[i] * d2[i];
    dot += d1[i] * d2[i];
  }
  if (s1 == 0 || s2 == 0) throw std::invalid_argument("scan direction is zero");
  if (s1 * s2 - dot * dot <= 1e-18 * s1 * s2)
    throw std::invalid_argument("scan directions are linearly dependent");

  ScanResult r;
  r.n1 = n1;
  r.n2 = n2;
  for (int i = 0; i < n1; ++i)
    r.s1.push_back(n1 == 1 ? min1 : min1 + i * (max1 - min1) / (n1 - 1));
  for (int j = 0; j < n2; ++j)
    r.s2.push_back(n2 == 1 ? min2 : min2 + j * (max2 - min2) / (n2 - 1));
  r.labels.assign(static_cast<std::size_t>(n1) * n2, "?");

  auto work = [&](int j_begin, int j_end) {
    const auto cb = base.coeffs();
    for (int j = j_begin; j < j_end; ++j)
      for (int i = 0; i < n1; ++i) {
        std::array<double, 12> c;
        for (int t = 0; t < 12; ++t) c[t] = cb[t] + r.s1[i] * d1[t] + r.s2[j] * d2[t];
        try {
          r.labels[static_cast<std::size_t>(j) * n1 + i] =
              to_string(classify(QuadraticMap::from_coeffs(c)).label);
        } catch (const std::exception&) {
          // leave "?"
        }
      }
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, n2));
  if (nthreads == 1) {
    work(0, n2);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      const int b = n2 * t / nthreads, e = n2 * (t + 1) / nthreads;
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return r;
}

std::string scan_csv(const ScanResult& r) {
  std::string out = "s1,s2,label\n";
  char buf[64];
  for (int j = 0; j < r.n2; ++j)
    for (int i = 0; i < r.n1; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", r.s1[i], r.s2[j]);
      out += buf;
      out += r.labels[static_cast<std::size_t>(j) * r.n1 + i];
      out += '\n';
    }
  return out;
}

}  // namespace quadmap
