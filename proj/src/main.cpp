#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "quadmap/algebra.hpp"
#include "quadmap/normalize.hpp"
#include "quadmap/report.hpp"
#include "quadmap/selftest.hpp"
#include "quadmap/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerification = 4;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_error(const std::string& type, const std::string& what) {
  std::cout << "{\"error\": {\"type\": \"" << type << "\", \"message\": \"" << what
            << "\"}}\n";
}

quadmap::MapSpec load_spec(const std::string& input, int& exit_code) {
  exit_code = kExitOk;
  try {
    return quadmap::parse_map_spec(read_input(input));
  } catch (const quadmap::spec_parse_error& e) {
    print_error("parse", e.what());
    exit_code = kExitParse;
  } catch (const std::exception& e) {
    print_error("io", e.what());
    exit_code = kExitParse;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of planar quadratic maps up to affine equivalence"};
  app.require_subcommand(1);

  unsigned seed = 0;
  bool exact = false;
  double tol = quadmap::kTol;
  app.add_option("--seed", seed, "random seed for sampling-based analyses");
  app.add_flag("--exact", exact, "also decide the Jacobian conic in exact rational arithmetic");
  app.add_option("--tol", tol, "relative zero tolerance for branch predicates")
      ->check(CLI::PositiveNumber);

  std::string cls_input = "-";
  auto* cmd_classify = app.add_subcommand("classify", "classify a map and print a JSON report");
  cmd_classify->add_option("input", cls_input, "map spec JSON file, or - for stdin");

  std::string plot_input = "-", plot_out = "plot.svg";
  double plot_cx = 0, plot_cy = 0, plot_radius = 2.0;
  int plot_n = 4000;
  auto* cmd_plot = app.add_subcommand("plot", "SVG of the image of a disk with J1 overlaid");
  cmd_plot->add_option("input", plot_input, "map spec JSON file, or - for stdin");
  cmd_plot->add_option("-o,--out", plot_out, "output SVG path");
  cmd_plot->add_option("--cx", plot_cx, "disk center x");
  cmd_plot->add_option("--cy", plot_cy, "disk center y");
  cmd_plot->add_option("--radius", plot_radius, "disk radius")->check(CLI::PositiveNumber);
  cmd_plot->add_option("-n", plot_n, "number of sample points")->check(CLI::PositiveNumber);

  std::string scan_input = "-", scan_dir1, scan_dir2, scan_csv_out = "scan.csv", scan_svg_out;
  double s1min = -1, s1max = 1, s2min = -1, s2max = 1;
  int sn1 = 41, sn2 = 41, scan_threads = 0;
  auto* cmd_scan = app.add_subcommand("scan", "classify a 2-parameter family on a grid");
  cmd_scan->add_option("input", scan_input, "base map spec JSON file, or - for stdin");
  cmd_scan->add_option("--dir1", scan_dir1, "first coefficient direction (JSON)")->required();
  cmd_scan->add_option("--dir2", scan_dir2, "second coefficient direction (JSON)")->required();
  cmd_scan->add_option("--min1", s1min, "first parameter minimum");
  cmd_scan->add_option("--max1", s1max, "first parameter maximum");
  cmd_scan->add_option("--min2", s2min, "second parameter minimum");
  cmd_scan->add_option("--max2", s2max, "second parameter maximum");
  cmd_scan->add_option("--n1", sn1, "grid resolution along dir1")->check(CLI::PositiveNumber);
  cmd_scan->add_option("--n2", sn2, "grid resolution along dir2")->check(CLI::PositiveNumber);
  cmd_scan->add_option("--csv", scan_csv_out, "output CSV path");
  cmd_scan->add_option("--svg", scan_svg_out, "optional output SVG class map");
  cmd_scan->add_option("--threads", scan_threads, "worker threads (0 = hardware)");

  auto* cmd_selftest = app.add_subcommand("selftest", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);
  quadmap::kTol = tol;

  try {
    if (*cmd_classify) {
      int ec;
      const quadmap::MapSpec spec = load_spec(cls_input, ec);
      if (ec) return ec;
      if (!quadmap::is_quadratic(spec.map)) {
        print_error("domain", "map has no quadratic part (affine maps are out of scope)");
        return kExitDomain;
      }
      quadmap::ReportOptions opt;
      opt.seed = seed;
      opt.exact = exact || (spec.mode && *spec.mode == "exact");
      std::cout << quadmap::make_report_json(spec, opt) << "\n";
      return kExitOk;
    }

    if (*cmd_plot) {
      int ec;
      const quadmap::MapSpec spec = load_spec(plot_input, ec);
      if (ec) return ec;
      const std::string svg = quadmap::plot_svg(spec.map, {plot_cx, plot_cy}, plot_radius,
                                                plot_n, seed);
      quadmap::write_text_file(plot_out, svg);
      std::cerr << "wrote " << plot_out << "\n";
      return kExitOk;
    }

    if (*cmd_scan) {
      int ec;
      const quadmap::MapSpec spec = load_spec(scan_input, ec);
      if (ec) return ec;
      quadmap::QuadraticMap d1, d2;
      try {
        d1 = quadmap::parse_map_spec(scan_dir1).map;
        d2 = quadmap::parse_map_spec(scan_dir2).map;
      } catch (const quadmap::spec_parse_error& e) {
        print_error("parse", e.what());
        return kExitParse;
      }
      const quadmap::ScanResult r = quadmap::run_scan(spec.map, d1, d2, s1min, s1max, sn1,
                                                      s2min, s2max, sn2, scan_threads);
      quadmap::write_text_file(scan_csv_out, quadmap::scan_csv(r));
      std::cerr << "wrote " << scan_csv_out << "\n";
      if (!scan_svg_out.empty()) {
        quadmap::write_text_file(scan_svg_out, quadmap::scan_svg(r));
        std::cerr << "wrote " << scan_svg_out << "\n";
      }
      return kExitOk;
    }

    if (*cmd_selftest) {
      const auto results = quadmap::run_acceptance(seed);
      bool all = true;
      for (const auto& r : results) {
        std::printf("[%s] %-55s (%6.2fs)  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.seconds, r.detail.c_str());
        all = all && r.passed;
      }
      std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "FAILURES PRESENT");
      return all ? kExitOk : 1;
    }
  } catch (const quadmap::not_quadratic_error& e) {
    print_error("domain", e.what());
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    print_error("domain", e.what());
    return kExitDomain;
  } catch (const quadmap::verification_error& e) {
    print_error("verification", e.what());
    return kExitVerification;
  } catch (const quadmap::wrong_branch_error& e) {
    print_error("verification", e.what());
    return kExitVerification;
  } catch (const quadmap::invalid_witness_error& e) {
    print_error("verification", e.what());
    return kExitVerification;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return kExitOk;
}
