#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wecfarm {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

// Buoy positions (m) inside a square farm [0, side] x [0, side].
struct Layout {
  double side = 0.0;
  std::vector<Point> positions;

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }
  std::span<const Point> points() const noexcept { return positions; }

  friend bool operator==(const Layout&, const Layout&) = default;
};

// Structure-of-arrays copy of the coordinates, as the kernels want them.
struct Coordinates {
  std::vector<double> xs;
  std::vector<double> ys;
};
Coordinates split_coordinates(std::span<const Point> points);

bool all_finite(std::span<const Point> points);

// Layout exchange format: {"farm_size_m": l, "positions": [[x, y], ...]}
std::string layout_to_json(const Layout& layout);
Layout layout_from_json(const std::string& text);
Layout read_layout(const std::filesystem::path& path);
void write_layout(const std::filesystem::path& path, const Layout& layout);

}  // namespace wecfarm
