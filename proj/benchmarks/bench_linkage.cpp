#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "morphtip/fingertip.hpp"
#include "morphtip/linkage.hpp"

namespace {

using namespace morphtip;

std::vector<double> sample_thetas(std::size_t n) {
  const OperatingRange r;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(r.theta_min, r.theta_max);
  std::vector<double> out(n);
  for (double& t : out) t = u(rng);
  return out;
}

void BM_ForwardFacet(benchmark::State& state) {
  const auto p = LinkageParams::defaults();
  const auto thetas = sample_thetas(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_facet(p, thetas[i++ & 1023]));
  }
}
BENCHMARK(BM_ForwardFacet);

void BM_InverseFacetClosedForm(benchmark::State& state) {
  const auto p = LinkageParams::defaults();
  std::vector<double> phis;
  for (double t : sample_thetas(1024)) phis.push_back(forward_facet(p, t));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_facet(p, phis[i++ & 1023]));
  }
}
BENCHMARK(BM_InverseFacetClosedForm);

void BM_InverseFacetBisection(benchmark::State& state) {
  const auto p = LinkageParams::defaults();
  std::vector<double> phis;
  for (double t : sample_thetas(1024)) phis.push_back(forward_facet(p, t));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_facet_bisection(p, phis[i++ & 1023]));
  }
}
BENCHMARK(BM_InverseFacetBisection);

void BM_PlanarPair(benchmark::State& state) {
  const auto p = LinkageParams::defaults();
  const double limit = max_planar_tilt(p, OperatingRange{});
  std::size_t i = 0;
  for (auto _ : state) {
    const double tilt = limit * (static_cast<double>(i++ % 201) / 100.0 - 1.0);
    benchmark::DoNotOptimize(solve_planar_pair(p, tilt));
  }
}
BENCHMARK(BM_PlanarPair);

void BM_PlanTilted(benchmark::State& state) {
  const FingertipConfig cfg;
  const auto prim = MorphPrimitive::tilted(deg_to_rad(4.0), deg_to_rad(-3.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(plan_primitive(cfg, prim));
  }
}
BENCHMARK(BM_PlanTilted);

void BM_TransitionTrajectory(benchmark::State& state) {
  const FingertipConfig cfg;
  const auto [lo, hi] = facet_range(cfg.linkage, cfg.range);
  const auto from = MorphPrimitive::concave(hi);
  const auto to = MorphPrimitive::convex(lo);
  for (auto _ : state) {
    benchmark::DoNotOptimize(transition_trajectory(cfg, from, to));
  }
}
BENCHMARK(BM_TransitionTrajectory);

}  // namespace

BENCHMARK_MAIN();
