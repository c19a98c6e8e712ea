#include "quadmap/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "quadmap/critical.hpp"
#include "quadmap/normalize.hpp"

namespace quadmap {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Box {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  void add(const Vec2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  void pad() {
    double dx = xmax - xmin, dy = ymax - ymin;
    const double m = 0.05 * std::max({dx, dy, 1e-6});
    xmin -= m; xmax += m; ymin -= m; ymax += m;
  }
};

// Color per class label, plus gray for unclassified cells.
std::string label_color(const std::string& label) {
  static const char* table[][2] = {
      {"E1", "#1f77b4"},  {"E2", "#aec7e8"},  {"H1", "#ff7f0e"},
      {"H2", "#ffbb78"},  {"H3", "#d62728"},  {"P1", "#2ca02c"},
      {"P2", "#98df8a"},  {"P3", "#9467bd"},  {"DE1", "#c5b0d5"},
      {"DE2", "#8c564b"}, {"DE3", "#c49c94"}, {"DH1", "#e377c2"},
      {"DH2", "#f7b6d2"}, {"DP1", "#bcbd22"}, {"DP2", "#dbdb8d"},
      {"DP3", "#17becf"}, {"DP4", "#9edae5"}, {"DP5", "#7f7f7f"}};
  for (const auto& row : table)
    if (label == row[0]) return row[1];
  return "#cccccc";
}

}  // namespace

std::string plot_svg(const QuadraticMap& q, Vec2 center, double radius, int n,
                     unsigned seed) {
  if (radius <= 0 || n <= 0) throw std::invalid_argument("plot needs radius > 0, n > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  std::vector<Vec2> dots;
  dots.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(dots.size()) < n) {
    const double x = uni(rng), y = uni(rng);
    if (x * x + y * y > 1.0) continue;
    dots.push_back(evaluate(q, Vec2{center.x + radius * x, center.y + radius * y}));
  }

  std::vector<std::vector<Vec2>> j1;
  try {
    for (auto& poly : sample_critical_image(q, 1024).images) j1.push_back(std::move(poly));
  } catch (const empty_set_error&) {
    // no critical set, nothing to overlay
  }

  Box box;
  for (const Vec2& p : dots) box.add(p);
  for (const auto& poly : j1)
    for (const Vec2& p : poly) box.add(p);
  box.pad();

  const double W = 800.0;
  const double sc = W / (box.xmax - box.xmin);
  const double H = (box.ymax - box.ymin) * sc;
  auto px = [&](const Vec2& p) { return (p.x - box.xmin) * sc; };
  auto py = [&](const Vec2& p) { return (box.ymax - p.y) * sc; };  // y up

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" +
       fmt(H) + "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const Vec2& p : dots)
    s += "<circle cx=\"" + fmt(px(p)) + "\" cy=\"" + fmt(py(p)) +
         "\" r=\"1.2\" fill=\"#335\" fill-opacity=\"0.5\"/>\n";
  for (const auto& poly : j1) {
    if (poly.size() < 2) continue;
    s += "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" points=\"";
    for (const Vec2& p : poly) s += fmt(px(p)) + "," + fmt(py(p)) + " ";
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string scan_svg(const ScanResult& r) {
  const double cell = std::max(2.0, std::min(16.0, 800.0 / std::max(r.n1, r.n2)));
  const double W = cell * r.n1, H = cell * r.n2;
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" +
       fmt(H) + "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
  for (int j = 0; j < r.n2; ++j)
    for (int i = 0; i < r.n1; ++i) {
      const std::string& lab = r.labels[static_cast<std::size_t>(j) * r.n1 + i];
      // row j=0 at the bottom
      s += "<rect x=\"" + fmt(i * cell) + "\" y=\"" + fmt((r.n2 - 1 - j) * cell) +
           "\" width=\"" + fmt(cell) + "\" height=\"" + fmt(cell) + "\" fill=\"" +
           label_color(lab) + "\"><title>" + lab + " (" + fmt(r.s1[i]) + ", " +
           fmt(r.s2[j]) + ")</title></rect>\n";
    }
  s += "</svg>\n";
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace quadmap
