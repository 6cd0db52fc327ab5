#include "riskvec/geojson.hpp"

#include "riskvec/errors.hpp"

namespace riskvec::geojson {

namespace {

using nlohmann::json;

geometry::Ring parse_ring(const json& coords, const std::string& where) {
  if (!coords.is_array() || coords.size() < 4)
    throw validation_error(where + ": ring must be an array of >= 4 positions");
  std::vector<geo::GeoPoint> pts;
  pts.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
        !pos[1].is_number())
      throw validation_error(where + ": position must be [lon, lat]");
    pts.push_back(geo::make_point(pos[1].get<double>(), pos[0].get<double>()));
  }
  const auto& first = pts.front();
  const auto& last = pts.back();
  if (first.lat != last.lat || first.lon != last.lon)
    throw validation_error(where + ": unclosed ring (first vertex must equal last)");
  return geometry::make_ring(std::move(pts));
}

geometry::Polygon parse_polygon_coords(const json& coords,
                                       const std::string& where) {
  if (!coords.is_array() || coords.empty())
    throw validation_error(where + ": polygon needs at least one ring");
  geometry::Ring exterior = parse_ring(coords[0], where);
  std::vector<geometry::Ring> holes;
  for (std::size_t i = 1; i < coords.size(); ++i)
    holes.push_back(parse_ring(coords[i], where));
  return geometry::Polygon(std::move(exterior), std::move(holes));
}

}  // namespace

std::vector<PolygonFeature> parse_polygon_features(const std::string& text,
                                                   const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error(source + ": invalid JSON: " + e.what());
  }
  if (!root.is_object() || root.value("type", "") != "FeatureCollection" ||
      !root.contains("features") || !root["features"].is_array())
    throw validation_error(source + ": expected a GeoJSON FeatureCollection");

  std::vector<PolygonFeature> features;
  std::size_t index = 0;
  for (const auto& f : root["features"]) {
    PolygonFeature out;
    out.index = index;
    out.label = "feature " + std::to_string(index);
    ++index;
    if (f.contains("properties") && f["properties"].is_object()) {
      out.properties = f["properties"];
      if (out.properties.contains("name") &&
          out.properties["name"].is_string())
        out.label += " (\"" + out.properties["name"].get<std::string>() +
                     "\")";
    }
    std::string where = source + " " + out.label;
    if (!f.is_object() || f.value("type", "") != "Feature")
      throw validation_error(where + ": not a GeoJSON Feature");
    if (!f.contains("geometry") || f["geometry"].is_null())
      throw validation_error(where + ": missing geometry");
    const auto& g = f["geometry"];
    std::string gtype = g.value("type", "");
    if (!g.contains("coordinates"))
      throw validation_error(where + ": geometry has no coordinates");
    if (gtype == "Polygon") {
      out.polygons.push_back(parse_polygon_coords(g["coordinates"], where));
    } else if (gtype == "MultiPolygon") {
      for (const auto& poly : g["coordinates"])
        out.polygons.push_back(parse_polygon_coords(poly, where));
    } else {
      throw validation_error(where + ": geometry type \"" + gtype +
                             "\" is not Polygon or MultiPolygon");
    }
    features.push_back(std::move(out));
  }
  return features;
}

std::vector<geometry::Polygon> parse_polygons(const std::string& text,
                                              const std::string& source) {
  std::vector<geometry::Polygon> polygons;
  for (auto& f : parse_polygon_features(text, source))
    for (auto& p : f.polygons) polygons.push_back(std::move(p));
  return polygons;
}

}  // namespace riskvec::geojson
