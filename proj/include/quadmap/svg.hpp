#pragma once

// Minimal SVG writers for the CLI: the image-of-a-disk plot with the critical
// image overlaid, and the parameter-scan class map.

#include <string>

#include "quadmap/algebra.hpp"
#include "quadmap/report.hpp"

namespace quadmap {

// Image of n random points of the disk |p - center| <= radius (deterministic
// in seed), with the J1 polylines drawn in red on top.
std::string plot_svg(const QuadraticMap& q, Vec2 center, double radius, int n,
                     unsigned seed);

// Class map of a scan: one colored cell per grid point, "?" cells gray.
std::string scan_svg(const ScanResult& r);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace quadmap
