#include "riskvec/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "riskvec/errors.hpp"

namespace riskvec::geometry {

Ring make_ring(std::vector<geo::GeoPoint> vertices) {
  if (vertices.size() >= 2) {
    const auto& first = vertices.front();
    const auto& last = vertices.back();
    if (first.lat == last.lat && first.lon == last.lon) vertices.pop_back();
  }
  if (vertices.size() < 3)
    throw validation_error("ring needs at least 3 distinct vertices");
  return Ring{std::move(vertices)};
}

bool point_on_segment(const geo::GeoPoint& p, const geo::GeoPoint& a,
                      const geo::GeoPoint& b) {
  double cross = (b.lon - a.lon) * (p.lat - a.lat) -
                 (b.lat - a.lat) * (p.lon - a.lon);
  if (cross != 0.0) return false;
  return p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat) &&
         p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon);
}

bool ring_contains(const Ring& ring, const geo::GeoPoint& p) {
  const auto& v = ring.vertices;
  std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (point_on_segment(p, v[j], v[i])) return true;
    if ((v[i].lat > p.lat) != (v[j].lat > p.lat)) {
      double x = v[j].lon + (p.lat - v[j].lat) / (v[i].lat - v[j].lat) *
                                (v[i].lon - v[j].lon);
      if (x > p.lon) inside = !inside;
    }
  }
  return inside;
}

BoundingBox ring_bbox(const Ring& ring) {
  BoundingBox box;
  box.min_lat = box.max_lat = ring.vertices.front().lat;
  box.min_lon = box.max_lon = ring.vertices.front().lon;
  for (const auto& v : ring.vertices) {
    box.min_lat = std::min(box.min_lat, v.lat);
    box.max_lat = std::max(box.max_lat, v.lat);
    box.min_lon = std::min(box.min_lon, v.lon);
    box.max_lon = std::max(box.max_lon, v.lon);
  }
  return box;
}

Polygon::Polygon(Ring exterior, std::vector<Ring> holes)
    : exterior_(std::move(exterior)), holes_(std::move(holes)) {
  if (exterior_.vertices.size() < 3)
    throw validation_error("polygon exterior needs at least 3 vertices");
  for (const auto& h : holes_)
    if (h.vertices.size() < 3)
      throw validation_error("polygon hole needs at least 3 vertices");
  bbox_ = ring_bbox(exterior_);
}

bool Polygon::contains(const geo::GeoPoint& p) const {
  if (!bbox_.contains(p)) return false;
  if (!ring_contains(exterior_, p)) return false;
  for (const auto& h : holes_) {
    // Hole boundaries still belong to the polygon.
    const auto& v = h.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
      if (point_on_segment(p, v[j], v[i])) return true;
    if (ring_contains(h, p)) return false;
  }
  return true;
}

void PolygonIndex::add(Polygon polygon, std::int64_t payload) {
  entries_.push_back(Entry{std::move(polygon), payload});
  built_ = false;
}

std::size_t PolygonIndex::cell_of(double v, double lo, double span) const {
  if (span <= 0.0) return 0;
  double f = (v - lo) / span;
  auto c = static_cast<std::ptrdiff_t>(f * static_cast<double>(kGridDim));
  if (c < 0) c = 0;
  if (c >= static_cast<std::ptrdiff_t>(kGridDim)) c = kGridDim - 1;
  return static_cast<std::size_t>(c);
}

void PolygonIndex::build() {
  cells_.assign(kGridDim * kGridDim, {});
  if (entries_.empty()) {
    built_ = true;
    return;
  }
  extent_ = entries_.front().polygon.bbox();
  for (const auto& e : entries_) {
    const auto& b = e.polygon.bbox();
    extent_.min_lat = std::min(extent_.min_lat, b.min_lat);
    extent_.max_lat = std::max(extent_.max_lat, b.max_lat);
    extent_.min_lon = std::min(extent_.min_lon, b.min_lon);
    extent_.max_lon = std::max(extent_.max_lon, b.max_lon);
  }
  double lat_span = extent_.max_lat - extent_.min_lat;
  double lon_span = extent_.max_lon - extent_.min_lon;
  for (std::uint32_t idx = 0; idx < entries_.size(); ++idx) {
    const auto& b = entries_[idx].polygon.bbox();
    std::size_t r0 = cell_of(b.min_lat, extent_.min_lat, lat_span);
    std::size_t r1 = cell_of(b.max_lat, extent_.min_lat, lat_span);
    std::size_t c0 = cell_of(b.min_lon, extent_.min_lon, lon_span);
    std::size_t c1 = cell_of(b.max_lon, extent_.min_lon, lon_span);
    for (std::size_t r = r0; r <= r1; ++r)
      for (std::size_t c = c0; c <= c1; ++c)
        cells_[r * kGridDim + c].push_back(idx);
  }
  built_ = true;
}

std::vector<std::int64_t> PolygonIndex::query(const geo::GeoPoint& p) const {
  std::vector<std::int64_t> hits;
  if (entries_.empty()) return hits;
  if (!built_)
    throw runtime_error("PolygonIndex::query called before build()");
  if (!extent_.contains(p)) return hits;
  std::size_t r = cell_of(p.lat, extent_.min_lat, extent_.max_lat - extent_.min_lat);
  std::size_t c = cell_of(p.lon, extent_.min_lon, extent_.max_lon - extent_.min_lon);
  for (std::uint32_t idx : cells_[r * kGridDim + c]) {
    const auto& e = entries_[idx];
    if (e.polygon.contains(p)) hits.push_back(e.payload);
  }
  return hits;
}

}  // namespace riskvec::geometry
