#include <benchmark/benchmark.h>

#include "gbmr/protocol.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace {

using namespace gbmr;

void BM_Circumcircle(benchmark::State& state) {
  gen::Rng rng(1);
  std::vector<std::array<Vec3, 3>> tris;
  for (int i = 0; i < 1024; ++i) {
    const Vec3 c = gen::vec(rng, -2, 2), n = gen::unit_vec(rng);
    const double r = gen::uniform(rng, 0.05, 1.0);
    const auto a = gen::spread_angles(rng);
    tris.push_back({gen::on_circle(c, n, r, a[0]), gen::on_circle(c, n, r, a[1]), gen::on_circle(c, n, r, a[2])});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& t = tris[i++ & 1023];
    benchmark::DoNotOptimize(circumcircle(t[0], t[1], t[2]));
  }
}
BENCHMARK(BM_Circumcircle);

// One detector step per 90 Hz frame is the hot path of a live session.
void BM_DetectorStep(benchmark::State& state) {
  const GestureLog log = gen::log_halving_session();
  std::vector<HandFrame> frames;
  for (const InputEvent& e : log.events) {
    if (const auto* f = std::get_if<HandFrame>(&e.body)) frames.push_back(*f);
  }
  PinchDetectorConfig cfg;
  cfg.smoothing_window = static_cast<std::size_t>(state.range(0));
  DetectorState s;
  std::size_t i = 0;
  TimestampMs t = 0;
  for (auto _ : state) {
    HandFrame f = frames[i++ % frames.size()];
    f = HandFrame(++t, f.handedness(), f.joints(), f.confidence());
    DetectorStep step = step_detector(s, f, cfg);
    s = std::move(step.state);
    benchmark::DoNotOptimize(step.events);
  }
}
BENCHMARK(BM_DetectorStep)->Arg(1)->Arg(5);

void BM_ValidateCut(benchmark::State& state) {
  gen::Rng rng(3);
  std::vector<gen::CutInstance> cases;
  for (int i = 0; i < 256; ++i) cases.push_back(gen::cut_instance(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    const gen::CutInstance& c = cases[i++ & 255];
    benchmark::DoNotOptimize(validate_cut(c.placement, c.log, c.mounts, c.clearance));
  }
}
BENCHMARK(BM_ValidateCut);

void BM_IdentifyTube(benchmark::State& state) {
  const TubeCatalog c = *catalog_from_json(read_json_file(fixtures::kDir / "tubes_54.json")).tubes;
  const Vec3 p2(c.entries[20].length + 0.004, 0.0, 0.0);
  for (auto _ : state) {
    TubeAssignments used;
    benchmark::DoNotOptimize(identify_tube(Vec3::Zero(), p2, c, used));
  }
}
BENCHMARK(BM_IdentifyTube);

void BM_ReplayFixture(benchmark::State& state) {
  const auto k = static_cast<WorkflowKind>(state.range(0));
  const GestureLog log = load_log(fixtures::log_path(k));
  const SessionConfig cfg = fixtures::config(k);
  for (auto _ : state) benchmark::DoNotOptimize(replay(log, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(log.events.size()));
  state.SetLabel(std::string(to_string(k)));
}
BENCHMARK(BM_ReplayFixture)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
