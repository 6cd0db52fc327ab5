#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include <json.hpp>

#include "riskvec/content.hpp"
#include "riskvec/geo.hpp"
#include "riskvec/meanvec.hpp"
#include "riskvec/risk.hpp"
#include "riskvec/rng.hpp"
#include "riskvec/stats.hpp"
#include "riskvec/text.hpp"

namespace {

using namespace riskvec;

std::vector<geo::GeoPoint> random_points(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<geo::GeoPoint> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.push_back(geo::make_point(rng.uniform(40.4, 41.0),
                                  rng.uniform(-74.4, -73.4)));
  return pts;
}

void BM_haversine(benchmark::State& state) {
  auto pts = random_points(1024, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = pts[i % pts.size()];
    const auto& b = pts[(i + 1) % pts.size()];
    benchmark::DoNotOptimize(geo::haversine_distance(a, b));
    ++i;
  }
}
BENCHMARK(BM_haversine);

void BM_mean_vector(benchmark::State& state) {
  Rng rng(11);
  std::vector<vec::PolarVector> segs;
  for (int i = 0; i < state.range(0); ++i)
    segs.push_back({rng.uniform(0.0, 360.0), rng.uniform(0.1, 30.0)});
  for (auto _ : state) benchmark::DoNotOptimize(vec::mean_vector(segs));
}
BENCHMARK(BM_mean_vector)->Arg(8)->Arg(64)->Arg(512);

risk::RiskSurface grid_surface() {
  // 12x12 patchwork of rectangular zones over the sample box.
  nlohmann::json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = nlohmann::json::array();
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) {
      double lat0 = 40.4 + 0.05 * r, lon0 = -74.4 + 0.08 * c;
      nlohmann::json f;
      f["type"] = "Feature";
      f["properties"]["zone_level"] = 1 + (r + c) % 3;
      f["geometry"]["type"] = "Polygon";
      f["geometry"]["coordinates"] = {{{lon0, lat0},
                                       {lon0 + 0.08, lat0},
                                       {lon0 + 0.08, lat0 + 0.05},
                                       {lon0, lat0 + 0.05},
                                       {lon0, lat0}}};
      fc["features"].push_back(f);
    }
  return risk::RiskSurface::from_geojson(fc.dump(), "",
                                         risk::RiskScheme::pilot_0_4);
}

void BM_risk_at(benchmark::State& state) {
  auto surface = grid_surface();
  auto pts = random_points(4096, 13);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(risk_at(surface, pts[i % pts.size()]));
    ++i;
  }
}
BENCHMARK(BM_risk_at);

void BM_sentiment(benchmark::State& state) {
  auto lexicon = content::Lexicon::bundled();
  auto tokens = text::tokenize(
      "terrified of the awful night but grateful for the amazing wonderful "
      "help from everyone out here");
  for (auto _ : state)
    benchmark::DoNotOptimize(content::sentiment_scores(tokens, lexicon));
}
BENCHMARK(BM_sentiment);

void BM_ols_fit(benchmark::State& state) {
  Rng rng(29);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> cols(6, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.4;
    for (auto& col : cols) {
      col[i] = rng.uniform(-2.0, 2.0);
      acc += 0.3 * col[i];
    }
    y[i] = acc + rng.normal();
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < cols.size(); ++j)
    names.push_back("x" + std::to_string(j));
  for (auto _ : state)
    benchmark::DoNotOptimize(stats::ols_fit(y, cols, names));
}
BENCHMARK(BM_ols_fit)->Arg(128)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
