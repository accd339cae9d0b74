#ifndef MEMBENCH_MEMMODEL_HPP
#define MEMBENCH_MEMMODEL_HPP

#include <cstdint>
#include <vector>

#include "membench/patterns.hpp"

namespace membench {

/// Banked external-memory interface description. Defaults model a board with
/// two 64-bit DDR4-2133 banks whose controller runs at 1/8 of the memory
/// clock, delivering one 512-bit bus word per bank per controller cycle.
struct MemConfig {
  int num_banks = 2;
  int bank_data_bits = 64;
  double transfer_rate_mts = 2133.333;  // mega-transfers per second
  int ctrl_divisor = 8;                 // controller clock = memory clock / divisor
  bool interleave = true;
  std::int64_t interleave_granule_bytes = 1024;
  int rw_turnaround_ctrl_cycles = 2;
  int port_queue_depth = 8;

  std::int64_t bus_word_bytes() const {
    return static_cast<std::int64_t>(bank_data_bits) * ctrl_divisor / 8;
  }
  double ctrl_freq_mhz() const { return transfer_rate_mts / ctrl_divisor; }
  void validate() const;  // throws std::invalid_argument
};

struct KernelConfig {
  double f_kernel_mhz = 266.666;
};

/// Manual (non-interleaved) banking: bank index per port ordinal.
struct BankAssignment {
  std::vector<int> bank_of_port;

  static BankAssignment round_robin(const ArrayConfig& arrays,
                                    int num_banks);
};

/// Theoretical peak of all banks combined, in GB/s (1 GB = 1e9 bytes).
double peak_bandwidth_gbps(const MemConfig& cfg);

/// Peak of a single bank, in GB/s.
double single_bank_peak_gbps(const MemConfig& cfg);

struct PortWidth {
  int requested = 0;
  int rounded = 0;  // smallest power of two >= requested
  double masked_fraction = 0.0;
};

PortWidth round_port_width(int lanes);

/// Bus words (word = bus_word_bytes) overlapped by [byte_addr, byte_addr+bytes).
std::vector<std::int64_t> split_access(std::int64_t byte_addr,
                                       std::int64_t access_bytes,
                                       const MemConfig& cfg);

/// port is the global port ordinal (reads first, then writes). In manual mode
/// the assignment decides; in interleaved mode the address granule does.
int map_word_to_bank(std::int64_t word_addr, int port, const MemConfig& cfg,
                     const BankAssignment* manual);

struct SimResult {
  std::int64_t kernel_cycles = 0;
  double wall_ns = 0.0;
  std::int64_t effective_bytes = 0;  // valid issued bytes, all ports
  std::int64_t bus_bytes = 0;        // retired transactions * bus word size
  double gbps_effective = 0.0;
  double gbps_bus = 0.0;
  double efficiency_vs_expected = 0.0;  // denominator capped at peak
  double efficiency_vs_peak = 0.0;
};

/// Discrete-time simulation of the stream against the banked interface.
/// Deterministic; time advances in integer femtosecond ticks.
SimResult simulate(const AccessStream& stream, const KernelConfig& kernel,
                   const MemConfig& mem, const BankAssignment* manual = nullptr);

/// Smallest vector width whose aggregate demand at the controller frequency
/// covers the peak bandwidth.
int saturation_lanes(const MemConfig& cfg, int num_ports, int elem_bytes = 4);

}  // namespace membench

#endif
