#include "wecfarm/layout.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wecfarm/error.hpp"

namespace wecfarm {

double distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

Coordinates split_coordinates(std::span<const Point> points) {
  Coordinates c;
  c.xs.reserve(points.size());
  c.ys.reserve(points.size());
  for (const auto& p : points) {
    c.xs.push_back(p.x);
    c.ys.push_back(p.y);
  }
  return c;
}

bool all_finite(std::span<const Point> points) {
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  }
  return true;
}

std::string layout_to_json(const Layout& layout) {
  nlohmann::json j;
  j["farm_size_m"] = layout.side;
  auto positions = nlohmann::json::array();
  for (const auto& p : layout.positions) positions.push_back({p.x, p.y});
  j["positions"] = std::move(positions);
  return j.dump(2) + "\n";
}

Layout layout_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("layout: ") + e.what());
  }
  if (!j.contains("farm_size_m") || !j.contains("positions") || !j["positions"].is_array()) {
    throw Error(ErrorCode::parse_error, "layout: expected fields farm_size_m and positions");
  }
  Layout layout;
  layout.side = j["farm_size_m"].get<double>();
  if (!(layout.side > 0.0)) {
    throw Error(ErrorCode::invalid_layout, "layout: farm_size_m must be positive");
  }
  std::size_t index = 0;
  for (const auto& item : j["positions"]) {
    if (!item.is_array() || item.size() != 2) {
      throw Error(ErrorCode::parse_error,
                  "layout: position " + std::to_string(index) + " is not an [x, y] pair");
    }
    layout.positions.push_back({item[0].get<double>(), item[1].get<double>()});
    ++index;
  }
  return layout;
}

Layout read_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open layout file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return layout_from_json(buffer.str());
}

void write_layout(const std::filesystem::path& path, const Layout& layout) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write layout file " + path.string());
  out << layout_to_json(layout);
}

}  // namespace wecfarm
