#include <benchmark/benchmark.h>

#include "morphtip/grasp.hpp"

namespace {

using namespace morphtip;

Polyline concave_profile() {
  return plan_primitive(FingertipConfig{}, MorphPrimitive::concave(deg_to_rad(20.0))).profile_x;
}

void BM_SeatCircle(benchmark::State& state) {
  const Polyline cup = concave_profile();
  for (auto _ : state) {
    benchmark::DoNotOptimize(seat_object(cup, cup, Circle{88.0, Vec2::Zero()}, 0.3));
  }
}
BENCHMARK(BM_SeatCircle);

void BM_FindContactsSquare(benchmark::State& state) {
  const Polyline cup = concave_profile();
  const auto scene = seat_object(cup, cup, ConvexPolygon::square(40.0), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_contacts(scene));
  }
}
BENCHMARK(BM_FindContactsSquare);

void BM_ClosureClassify(benchmark::State& state) {
  const Polyline cup = concave_profile();
  const auto contacts = find_contacts(seat_object(cup, cup, Circle{88.0, Vec2::Zero()}, 0.3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(closure_classify(contacts, 0.3));
  }
}
BENCHMARK(BM_ClosureClassify);

void BM_CradleHeight(benchmark::State& state) {
  const Polyline cup = concave_profile();
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cradle_height(cup, cup, 88.0, u));
    u = u > 5.0 ? -5.0 : u + 0.01;
  }
}
BENCHMARK(BM_CradleHeight);

}  // namespace

BENCHMARK_MAIN();
