#include "anchor_checks.hpp"

#include <cmath>

#include "membench/analysis.hpp"
#include "membench/memmodel.hpp"
#include "membench/patterns.hpp"

namespace membench {

namespace {

AccessStream stream_1d(std::int64_t blocks, std::int64_t halo, std::int64_t pad,
                       int lanes, ArrayConfig arrays) {
  const Block1D block = block_geometry(1024, halo);
  return gen_1d(block.csize * blocks, block, {pad, 0, 0}, {lanes, 4}, arrays);
}

SimResult sim_manual(const AccessStream& s, const std::vector<int>& map,
                     double freq = 266.666) {
  MemConfig cfg;
  cfg.interleave = false;
  BankAssignment banks;
  banks.bank_of_port = map;
  return simulate(s, {freq}, cfg, &banks);
}

double aligned_gbps() {
  return sim_manual(stream_1d(1600, 0, 0, 16, {1, 1}), {0, 1}).gbps_effective;
}

double halo_ratio(std::int64_t a, std::int64_t b) {
  const double ga =
      sim_manual(stream_1d(1600, a, 0, 16, {1, 1}), {0, 1}).gbps_effective;
  const double gb =
      sim_manual(stream_1d(1600, b, 0, 16, {1, 1}), {0, 1}).gbps_effective;
  return ga / gb;
}

}  // namespace

bool anchor_passes(AnchorCmp cmp, double measured, double value,
                   double tolerance) {
  switch (cmp) {
    case AnchorCmp::within: return std::abs(measured - value) <= tolerance;
    case AnchorCmp::at_most: return measured <= value + tolerance;
    default: return measured >= value - tolerance;
  }
}

const std::vector<AnchorCheck>& anchor_checks() {
  static const std::vector<AnchorCheck> checks = {
      {"model-peak-vs-board-gbps", AnchorCmp::within,
       [] { return aligned_gbps(); }},
      {"aligned-peak-efficiency", AnchorCmp::at_least,
       [] {
         MemConfig cfg;
         return aligned_gbps() / peak_bandwidth_gbps(cfg);
       }},
      {"misaligned-throughput-ratio", AnchorCmp::within,
       [] {
         const double padded =
             sim_manual(stream_1d(1600, 0, 4, 16, {1, 1}), {0, 1})
                 .gbps_effective;
         return padded / aligned_gbps();
       }},
      {"interleaved-vector-ratio", AnchorCmp::within,
       [] {
         MemConfig cfg;
         const double v16 =
             simulate(stream_1d(1600, 0, 0, 16, {1, 0}), {266.666}, cfg)
                 .gbps_bus;
         const double v32 =
             simulate(stream_1d(1600, 0, 0, 32, {1, 0}), {266.666}, cfg)
                 .gbps_bus;
         return v32 / v16;
       }},
      {"interleaved-ceiling-gbps", AnchorCmp::at_most,
       [] {
         MemConfig cfg;
         return simulate(stream_1d(1600, 0, 0, 32, {1, 0}), {266.666}, cfg)
             .gbps_bus;
       }},
      {"saturation-lanes-1port", AnchorCmp::within,
       [] { return saturation_lanes(MemConfig{}, 1); }},
      {"saturation-lanes-2port", AnchorCmp::within,
       [] { return saturation_lanes(MemConfig{}, 2); }},
      {"saturation-lanes-4port", AnchorCmp::within,
       [] { return saturation_lanes(MemConfig{}, 4); }},
      {"halo-2-vs-6-ratio", AnchorCmp::within, [] { return halo_ratio(2, 6); }},
      {"halo-2-vs-14-ratio", AnchorCmp::within,
       [] { return halo_ratio(2, 14); }},
      {"halo-4-vs-12-ratio", AnchorCmp::within,
       [] { return halo_ratio(4, 12); }},
      {"halo-4-vs-20-ratio", AnchorCmp::within,
       [] { return halo_ratio(4, 20); }},
      {"oversubscribed-efficiency-cap", AnchorCmp::within,
       [] {
         // Demand of two 128-byte ports exceeds peak; the efficiency
         // denominator must cap at peak, not the raw expected rate.
         return sim_manual(stream_1d(800, 0, 0, 32, {1, 1}), {0, 1})
             .efficiency_vs_expected;
       }},
  };
  return checks;
}

}  // namespace membench
