#pragma once

// JSON surface: MapSpec parsing (12 named coefficients, rational strings
// allowed), the classification Report, and the parameter-scan runner.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadmap/algebra.hpp"

namespace quadmap {

struct spec_parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MapSpec {
  QuadraticMap map;
  QuadraticMapT<Rational> exact_map;  // same coefficients, exact
  std::optional<std::string> label_hint;
  std::optional<std::string> mode;  // "float" (default) or "exact"
};

// Parses {"a20": ..., ..., "b00": ...}; values may be numbers or rational
// strings like "3/7"; missing keys default to 0.
MapSpec parse_map_spec(const std::string& json_text);

std::string map_spec_json(const QuadraticMap& q);

struct ReportOptions {
  unsigned seed = 0;
  bool exact = false;       // also classify the det conic in rational arithmetic
  int profile_targets = 240;
};

// Full classification report as a JSON string (classification, witnesses,
// J0/J1 classes, collapses, preimage profile, reduction trace).
std::string make_report_json(const MapSpec& spec, const ReportOptions& opt);

// Parameter-plane scan: classify base + s*dir1 + t*dir2 on a grid.
struct ScanResult {
  int n1 = 0, n2 = 0;
  std::vector<double> s1, s2;       // grid coordinates
  std::vector<std::string> labels;  // row-major [j*n1 + i]; "?" on failure
};

ScanResult run_scan(const QuadraticMap& base, const QuadraticMap& dir1,
                    const QuadraticMap& dir2, double min1, double max1, int n1,
                    double min2, double max2, int n2, int threads = 0);

std::string scan_csv(const ScanResult& r);

}  // namespace quadmap
