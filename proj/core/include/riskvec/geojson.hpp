#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskvec/geometry.hpp"

namespace riskvec::geojson {

struct PolygonFeature {
  // One entry per polygon (MultiPolygon features contribute several).
  std::vector<geometry::Polygon> polygons;
  nlohmann::json properties;
  std::size_t index = 0;  // position within the FeatureCollection
  std::string label;      // "feature N" or the feature's name property
};

// Parses a GeoJSON FeatureCollection of Polygon/MultiPolygon features.
// Rings must be explicitly closed (first == last vertex); coordinates are
// [lon, lat]. source names the file in error messages.
std::vector<PolygonFeature> parse_polygon_features(const std::string& text,
                                                   const std::string& source);

// Same, flattened to bare polygons (properties discarded).
std::vector<geometry::Polygon> parse_polygons(const std::string& text,
                                              const std::string& source);

}  // namespace riskvec::geojson
