#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "vrulabel/geomath.hpp"
#include "vrulabel/pipeline.hpp"
#include "vrulabel/regions.hpp"
#include "vrulabel/simulator.hpp"
#include "vrulabel/trajectory.hpp"

using namespace vrulabel;

static void BM_RegionContains(benchmark::State& state) {
  MotionEstimate m;
  m.speed_mps = 1.2;
  m.yaw_rate_rps = 0.3;
  m.yaw_rad = 0.7;
  const auto region = regions::region_for(VruKind::Pedestrian, {1.0, 2.0, 0.0}, m);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(-3.0, 5.0);
  std::vector<EnuPoint> pts(1024);
  for (auto& p : pts) p = {d(rng), d(rng), 0.0};
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(regions::contains(region, pts[i++ & 1023]));
  }
}
BENCHMARK(BM_RegionContains);

static void BM_SplineEval(benchmark::State& state) {
  std::vector<trajectory::TimedPoint> pts;
  for (int i = 0; i < 2000; ++i) {
    const double t = i * 0.05;
    pts.push_back({t, {std::sin(0.3 * t), std::cos(0.2 * t), 0.0}});
  }
  const trajectory::TrackSpline sp(pts);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp.position_at(t));
    t += 0.013;
    if (t > 99.0) t = 0.0;
  }
}
BENCHMARK(BM_SplineEval);

static void BM_EstimateMotion(benchmark::State& state) {
  std::vector<trajectory::TimedPoint> pts;
  for (int i = 0; i < 2400; ++i) {
    const double t = i * 0.05;
    pts.push_back({t, {5.0 * std::cos(0.25 * t), 5.0 * std::sin(0.25 * t), 0.0}});
  }
  const trajectory::SmoothedTrack track("b", pts);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(track.estimate_motion(t));
    t += 0.31;
    if (t > 119.0) t = 0.0;
  }
}
BENCHMARK(BM_EstimateMotion);

static void BM_LabelFrame(benchmark::State& state) {
  auto cfg = simulator::default_scenario(VruKind::Pedestrian);
  cfg.duration_s = 2.0;
  const auto truth = simulator::gen_truth(cfg);
  const auto radar = simulator::gen_radar(truth, simulator::default_mounts(), 1);
  const auto& frame = radar.frames.front();
  const SensorMount mount = simulator::default_mounts().at(frame.sensor_id);
  EgoPose ego;
  ego.position = cfg.ego_position;
  ego.yaw_rad = cfg.ego_yaw_rad;
  MotionEstimate m;
  m.speed_mps = 1.4;
  const std::vector<std::pair<std::string, regions::SelectionRegion>> gates = {
      {"vru0", regions::region_for(VruKind::Pedestrian, {0.0, 10.0, 0.0}, m)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipeline::label_frame(frame, ego, gates, mount));
  }
}
BENCHMARK(BM_LabelFrame);

static void BM_GeodeticToEnu(benchmark::State& state) {
  const GeoFix origin{0.0, 48.0, 9.0, 500.0};
  GeoFix fix{0.0, 48.0001, 9.0001, 500.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(geomath::geodetic_to_enu(fix, origin));
  }
}
BENCHMARK(BM_GeodeticToEnu);

BENCHMARK_MAIN();
