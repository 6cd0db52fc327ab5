#pragma once

// Five synthetic risk surfaces built in two parallel representations:
// GeoJSON text for the library and raw vertex lists for the brute-force
// oracle. Covers rect patchworks, holes, overlaps, concave outlines and
// multipolygons, plus flood overlays.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pip_oracle.hpp"

namespace test_surfaces {

using nlohmann::json;
using pip_oracle::Poly;
using pip_oracle::Pt;

struct Surface {
  std::string name;
  std::string evac_geojson;
  std::string flood_geojson;  // empty when the surface has no flood layer
  std::vector<Poly> zones;
  std::vector<Poly> flood;
  double min_lat = 0, max_lat = 0, min_lon = 0, max_lon = 0;
};

namespace detail {

inline json ring_json(const std::vector<Pt>& ring) {
  json arr = json::array();
  for (const auto& [lat, lon] : ring)
    arr.push_back({static_cast<double>(lon), static_cast<double>(lat)});
  arr.push_back(arr.front());
  return arr;
}

inline json feature(const Poly& poly) {
  json f;
  f["type"] = "Feature";
  if (poly.level > 0) f["properties"]["zone_level"] = poly.level;
  f["geometry"]["type"] = "Polygon";
  json coords = json::array();
  for (const auto& ring : poly.rings) coords.push_back(ring_json(ring));
  f["geometry"]["coordinates"] = coords;
  return f;
}

inline std::string collection(const std::vector<Poly>& polys) {
  json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = json::array();
  for (const auto& p : polys) fc["features"].push_back(feature(p));
  return fc.dump();
}

inline std::vector<Pt> rect(double lat0, double lon0, double lat1,
                            double lon1) {
  return {{lat0, lon0}, {lat0, lon1}, {lat1, lon1}, {lat1, lon0}};
}

inline Surface finish(std::string name, std::vector<Poly> zones,
                      std::vector<Poly> flood, double min_lat, double max_lat,
                      double min_lon, double max_lon) {
  Surface s;
  s.name = std::move(name);
  s.evac_geojson = collection(zones);
  if (!flood.empty()) s.flood_geojson = collection(flood);
  s.zones = std::move(zones);
  s.flood = std::move(flood);
  s.min_lat = min_lat;
  s.max_lat = max_lat;
  s.min_lon = min_lon;
  s.max_lon = max_lon;
  return s;
}

}  // namespace detail

// 8x8 patchwork of rects, levels cycling 0..3 (0 = gap), plus a flood
// band across the middle rows.
inline Surface patchwork() {
  using namespace detail;
  std::vector<Poly> zones;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      int level = (r + 2 * c) % 4;
      if (level == 0) continue;
      Poly p;
      p.level = level;
      p.rings = {rect(40.0 + 0.1 * r, -74.0 + 0.1 * c, 40.1 + 0.1 * r,
                      -73.9 + 0.1 * c)};
      zones.push_back(p);
    }
  Poly flood;
  flood.rings = {rect(40.35, -74.05, 40.45, -73.15)};
  return finish("patchwork", zones, {flood}, 39.95, 40.85, -74.05, -73.15);
}

// Large square with a square hole; a diamond sits inside the hole and a
// second zone overlaps the hole's edge.
inline Surface donut() {
  using namespace detail;
  Poly outer;
  outer.level = 1;
  outer.rings = {rect(40.0, -74.0, 41.0, -73.0),
                 rect(40.3, -73.7, 40.7, -73.3)};
  Poly diamond;
  diamond.level = 3;
  diamond.rings = {{{40.5, -73.6}, {40.6, -73.5}, {40.5, -73.4},
                    {40.4, -73.5}}};
  Poly straddle;
  straddle.level = 2;
  straddle.rings = {rect(40.6, -73.8, 40.8, -73.6)};
  Poly flood;
  flood.rings = {rect(40.45, -73.75, 40.55, -73.25)};
  return finish("donut", {outer, diamond, straddle}, {flood}, 39.9, 41.1,
                -74.1, -72.9);
}

// Three heavily overlapping hexagons with ascending levels.
inline Surface hexes() {
  using namespace detail;
  auto hex = [](double clat, double clon, double r) {
    std::vector<Pt> ring;
    const double k[6][2] = {{1, 0},   {0.5, 0.9}, {-0.5, 0.9},
                            {-1, 0},  {-0.5, -0.9}, {0.5, -0.9}};
    for (const auto& f : k)
      ring.push_back({clat + r * f[0], clon + r * f[1]});
    return ring;
  };
  Poly a, b, c;
  a.level = 1;
  a.rings = {hex(40.5, -73.7, 0.30)};
  b.level = 2;
  b.rings = {hex(40.55, -73.6, 0.25)};
  c.level = 3;
  c.rings = {hex(40.45, -73.62, 0.18)};
  return finish("hexes", {a, b, c}, {}, 40.0, 41.0, -74.2, -73.1);
}

// Concave zigzag outline plus thin slivers.
inline Surface zigzag() {
  using namespace detail;
  Poly comb;
  comb.level = 2;
  comb.rings = {{{40.0, -74.0},
                 {40.0, -73.0},
                 {40.5, -73.0},
                 {40.1, -73.2},
                 {40.5, -73.4},
                 {40.1, -73.6},
                 {40.5, -73.8},
                 {40.1, -73.9}}};
  Poly sliver1;
  sliver1.level = 3;
  sliver1.rings = {rect(40.05, -73.55, 40.45, -73.53)};
  Poly sliver2;
  sliver2.level = 1;
  sliver2.rings = {rect(40.02, -73.98, 40.04, -73.02)};
  Poly flood;
  flood.rings = {{{40.3, -74.0}, {40.0, -73.5}, {40.3, -73.0}}};
  return finish("zigzag", {comb, sliver1, sliver2}, {flood}, 39.9, 40.7,
                -74.1, -72.9);
}

// A multipolygon-style pair of disjoint parts (encoded as two features of
// one level) where one part carries a hole, plus two flood patches.
inline Surface twin_islands() {
  using namespace detail;
  Poly west;
  west.level = 3;
  west.rings = {rect(40.2, -74.0, 40.8, -73.7),
                rect(40.4, -73.9, 40.6, -73.8)};
  Poly east;
  east.level = 3;
  east.rings = {rect(40.2, -73.4, 40.8, -73.1)};
  Poly belt;
  belt.level = 1;
  belt.rings = {rect(40.45, -74.05, 40.55, -73.05)};
  Poly flood_a;
  flood_a.rings = {rect(40.3, -73.95, 40.5, -73.75)};
  Poly flood_b;
  flood_b.rings = {rect(40.6, -73.35, 40.75, -73.15)};
  return finish("twin-islands", {west, east, belt}, {flood_a, flood_b}, 40.1,
                40.9, -74.15, -72.95);
}

inline std::vector<Surface> all_surfaces() {
  return {patchwork(), donut(), hexes(), zigzag(), twin_islands()};
}

}  // namespace test_surfaces
