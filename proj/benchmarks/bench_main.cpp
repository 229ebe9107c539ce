#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "oatb/arch/dba.hpp"
#include "oatb/arch/queues.hpp"
#include "oatb/sim/engine.hpp"
#include "oatb/sim/rng.hpp"
#include "oatb/stats/noninferiority.hpp"
#include "oatb/util/hash.hpp"

namespace {

using namespace oatb;

void BM_engine_schedule_dispatch(benchmark::State& state) {
  const int events = static_cast<int>(state.range(0));
  for (auto _ : state) {
    sim::Engine engine(1);
    std::uint64_t fired = 0;
    for (int i = 0; i < events; ++i) {
      engine.schedule(sim::SimTime::from_picos(i * 1000), "bench", "tick",
                      [&fired] { ++fired; });
    }
    engine.run_until(sim::SimTime::from_seconds(1.0));
    benchmark::DoNotOptimize(fired);
  }
  state.SetItemsProcessed(state.iterations() * events);
}
BENCHMARK(BM_engine_schedule_dispatch)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_rng_stream_draws(benchmark::State& state) {
  sim::RngStream stream(42, "bench/root");
  double acc = 0.0;
  for (auto _ : state) {
    acc += stream.exponential(1.0);
    acc += stream.uniform01();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_rng_stream_draws);

void BM_rng_child_derivation(benchmark::State& state) {
  sim::RngStream root(42, "bench/root");
  int k = 0;
  for (auto _ : state) {
    auto child = root.child("onu/" + std::to_string(k++ & 1023));
    benchmark::DoNotOptimize(child.uniform01());
  }
}
BENCHMARK(BM_rng_child_derivation);

void BM_dba_grant_cycle(benchmark::State& state) {
  const std::size_t onus = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint64_t> reports(onus);
  std::vector<double> rtts(onus, 2e-4);
  sim::RngStream rng(7, "bench/reports");
  for (auto& r : reports) r = rng.uniform_int(40000);
  arch::DbaParams params;
  for (auto _ : state) {
    auto grants = arch::dba_grant_cycle(reports, rtts, sim::SimTime::from_seconds(1.0), params);
    benchmark::DoNotOptimize(grants.data());
  }
  state.SetItemsProcessed(state.iterations() * onus);
}
BENCHMARK(BM_dba_grant_cycle)->Arg(16)->Arg(64)->Arg(256);

void BM_service_queue_drain(benchmark::State& state) {
  const int packets = static_cast<int>(state.range(0));
  for (auto _ : state) {
    sim::Engine engine(1);
    arch::ServiceQueue q(engine, "bench", 1e9, 1ull << 30);
    for (int i = 0; i < packets; ++i) {
      engine.schedule(sim::SimTime::from_picos(i * 500), "bench", "arrival",
                      [&q] { q.enqueue(1500, [](sim::SimTime) {}); });
    }
    engine.run_until(sim::SimTime::from_seconds(1.0));
    benchmark::DoNotOptimize(q.counters().done_packets);
  }
  state.SetItemsProcessed(state.iterations() * packets);
}
BENCHMARK(BM_service_queue_drain)->Arg(1 << 12)->Arg(1 << 15);

void BM_welch_noninferiority(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  sim::RngStream rng(11, "bench/welch");
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (auto& v : x) v = rng.lognormal_mean(1.0, 0.5);
  for (auto& v : y) v = rng.lognormal_mean(1.1, 0.5);
  const stats::MetricSpec spec{"m", stats::Direction::smaller_better, 0.2,
                               stats::TestKind::welch};
  for (auto _ : state) {
    auto r = stats::welch_noninferiority(x, y, spec, 0.05);
    benchmark::DoNotOptimize(r.adverse_bound);
  }
}
BENCHMARK(BM_welch_noninferiority)->Arg(10)->Arg(1000);

void BM_mann_whitney_null_cdf(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto cdf = stats::mann_whitney_null_cdf(n, n);
    benchmark::DoNotOptimize(cdf.data());
  }
}
BENCHMARK(BM_mann_whitney_null_cdf)->Arg(4)->Arg(10)->Arg(20);

void BM_sha256(benchmark::State& state) {
  const std::string blob(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) {
    auto digest = util::sha256_hex(blob);
    benchmark::DoNotOptimize(digest.data());
  }
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sha256)->Arg(1 << 12)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
