#include <benchmark/benchmark.h>

#include "membench/hostbench.hpp"
#include "membench/memmodel.hpp"
#include "membench/patterns.hpp"

using namespace membench;

namespace {

AccessStream stream_1d(std::int64_t blocks, std::int64_t halo, int lanes,
                       ArrayConfig arrays) {
  const Block1D block = block_geometry(1024, halo);
  return gen_1d(block.csize * blocks, block, {}, {lanes, 4}, arrays);
}

void BM_stream_generation(benchmark::State& state) {
  auto s = stream_1d(state.range(0), 16, 16, {1, 1});
  IssueGroup g;
  for (auto _ : state) {
    s.reset();
    while (s.next(g)) benchmark::DoNotOptimize(g.byte_addr);
  }
  state.SetItemsProcessed(state.iterations() * s.total_cycles());
}

void BM_simulate(benchmark::State& state) {
  auto s = stream_1d(state.range(0), 0, 16, {1, 1});
  MemConfig cfg;
  cfg.interleave = false;
  BankAssignment banks;
  banks.bank_of_port = {0, 1};
  for (auto _ : state) {
    auto r = simulate(s, {266.666}, cfg, &banks);
    benchmark::DoNotOptimize(r.gbps_effective);
  }
  state.SetItemsProcessed(state.iterations() * s.total_cycles());
}

void BM_split_access(benchmark::State& state) {
  MemConfig cfg;
  std::int64_t addr = 0;
  for (auto _ : state) {
    auto words = split_access(addr, 64, cfg);
    benchmark::DoNotOptimize(words.data());
    addr = (addr + 28) % 100000;
  }
}

void BM_host_copy(benchmark::State& state) {
  auto s = stream_1d(state.range(0), 0, 16, {1, 1});
  HostRunSpec spec;
  spec.repetitions = 1;
  spec.warmup = 0;
  HostBench bench(s, spec);
  for (auto _ : state) {
    auto r = bench.run();
    benchmark::DoNotOptimize(r.checksum);
  }
  state.SetBytesProcessed(state.iterations() * s.logical_elements() * 4 * 2);
}

}  // namespace

BENCHMARK(BM_stream_generation)->Arg(64)->Arg(512);
BENCHMARK(BM_simulate)->Arg(64)->Arg(512);
BENCHMARK(BM_split_access);
BENCHMARK(BM_host_copy)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
