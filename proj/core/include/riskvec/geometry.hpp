#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "riskvec/geo.hpp"

namespace riskvec::geometry {

// A ring is a closed sequence of vertices. Callers may pass the closing
// vertex explicitly (last == first); it is dropped on construction.
struct Ring {
  std::vector<geo::GeoPoint> vertices;
};

struct BoundingBox {
  double min_lat = 0.0;
  double max_lat = 0.0;
  double min_lon = 0.0;
  double max_lon = 0.0;

  bool contains(const geo::GeoPoint& p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
           p.lon <= max_lon;
  }
  bool intersects(const BoundingBox& o) const {
    return !(o.min_lat > max_lat || o.max_lat < min_lat ||
             o.min_lon > max_lon || o.max_lon < min_lon);
  }
};

// Simple polygon with optional holes, flat-earth semantics in lat/lon
// coordinates. Suitable for the city-scale surfaces this library works with.
class Polygon {
 public:
  Polygon(Ring exterior, std::vector<Ring> holes = {});

  // Even-odd containment. Points exactly on any edge (exterior or hole
  // boundary) count as inside.
  bool contains(const geo::GeoPoint& p) const;

  const BoundingBox& bbox() const { return bbox_; }
  const Ring& exterior() const { return exterior_; }
  const std::vector<Ring>& holes() const { return holes_; }

 private:
  Ring exterior_;
  std::vector<Ring> holes_;
  BoundingBox bbox_;
};

// Normalizes a raw vertex list into a Ring: requires >= 3 distinct vertices,
// drops an explicit closing vertex if present.
Ring make_ring(std::vector<geo::GeoPoint> vertices);

// True when p lies on the segment [a, b] (within exact arithmetic on the
// coordinates as given).
bool point_on_segment(const geo::GeoPoint& p, const geo::GeoPoint& a,
                      const geo::GeoPoint& b);

// Even-odd test against a single ring, boundary inclusive.
bool ring_contains(const Ring& ring, const geo::GeoPoint& p);

BoundingBox ring_bbox(const Ring& ring);

// A collection of polygons with an integer payload per polygon, indexed by a
// uniform grid over the combined bounding box so lookups touch only nearby
// polygons.
class PolygonIndex {
 public:
  static constexpr std::size_t kGridDim = 64;

  void add(Polygon polygon, std::int64_t payload);
  void build();

  // Payloads of every polygon containing p, in insertion order.
  std::vector<std::int64_t> query(const geo::GeoPoint& p) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    Polygon polygon;
    std::int64_t payload;
  };

  std::size_t cell_of(double v, double lo, double span) const;

  std::vector<Entry> entries_;
  BoundingBox extent_{};
  bool built_ = false;
  // cells_[row * kGridDim + col] lists entry indices whose bbox overlaps the
  // cell.
  std::vector<std::vector<std::uint32_t>> cells_;
};

}  // namespace riskvec::geometry
