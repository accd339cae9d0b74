#include "membench/memmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "membench/analysis.hpp"

namespace membench {

void MemConfig::validate() const {
  if (num_banks < 1 || bank_data_bits < 1 || ctrl_divisor < 1 ||
      transfer_rate_mts <= 0 || interleave_granule_bytes < 1 ||
      rw_turnaround_ctrl_cycles < 0 || port_queue_depth < 1) {
    throw std::invalid_argument("invalid memory config");
  }
  if (bank_data_bits % 8 != 0) {
    throw std::invalid_argument("bank_data_bits must be a multiple of 8");
  }
  if (!std::has_single_bit(static_cast<std::uint64_t>(bus_word_bytes()))) {
    throw std::invalid_argument("bus word size must be a power of two");
  }
}

BankAssignment BankAssignment::round_robin(const ArrayConfig& arrays,
                                           int num_banks) {
  BankAssignment a;
  a.bank_of_port.resize(arrays.ports());
  for (int p = 0; p < arrays.ports(); ++p) a.bank_of_port[p] = p % num_banks;
  return a;
}

double peak_bandwidth_gbps(const MemConfig& cfg) {
  cfg.validate();
  return cfg.num_banks * (cfg.bank_data_bits / 8.0) * cfg.transfer_rate_mts *
         1e6 / 1e9;
}

double single_bank_peak_gbps(const MemConfig& cfg) {
  return peak_bandwidth_gbps(cfg) / cfg.num_banks;
}

PortWidth round_port_width(int lanes) {
  if (lanes < 1) throw std::invalid_argument("lanes must be >= 1");
  const int rounded =
      static_cast<int>(std::bit_ceil(static_cast<unsigned>(lanes)));
  return PortWidth{lanes, rounded, 1.0 - double(lanes) / rounded};
}

std::vector<std::int64_t> split_access(std::int64_t byte_addr,
                                       std::int64_t access_bytes,
                                       const MemConfig& cfg) {
  if (access_bytes < 1) throw std::invalid_argument("access_bytes must be >= 1");
  if (byte_addr < 0) throw std::invalid_argument("byte_addr must be >= 0");
  const std::int64_t w = cfg.bus_word_bytes();
  const std::int64_t first = byte_addr / w;
  const std::int64_t last = (byte_addr + access_bytes - 1) / w;
  std::vector<std::int64_t> words;
  words.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t a = first; a <= last; ++a) words.push_back(a);
  return words;
}

int map_word_to_bank(std::int64_t word_addr, int port, const MemConfig& cfg,
                     const BankAssignment* manual) {
  if (cfg.interleave) {
    const std::int64_t byte = word_addr * cfg.bus_word_bytes();
    return static_cast<int>((byte / cfg.interleave_granule_bytes) %
                            cfg.num_banks);
  }
  if (manual == nullptr ||
      port >= static_cast<int>(manual->bank_of_port.size()) || port < 0) {
    throw std::invalid_argument("manual banking requires a full bank assignment");
  }
  const int bank = manual->bank_of_port[port];
  if (bank < 0 || bank >= cfg.num_banks) {
    throw std::invalid_argument("bank index out of range in assignment");
  }
  return bank;
}

namespace {

struct Txn {
  std::int64_t word;
  int bank;
  Dir dir;
};

constexpr std::int64_t fs_per_us = 1'000'000'000;  // 1 MHz period in fs

std::int64_t period_fs(double freq_mhz) {
  if (freq_mhz <= 0) throw std::invalid_argument("frequency must be > 0");
  return static_cast<std::int64_t>(std::ceil(fs_per_us / freq_mhz));
}

}  // namespace

SimResult simulate(const AccessStream& stream, const KernelConfig& kernel,
                   const MemConfig& mem, const BankAssignment* manual) {
  mem.validate();
  if (stream.total_cycles() == 0) {
    throw std::invalid_argument("zero-length stream");
  }
  const ArrayConfig& arrays = stream.arrays();
  const int ports = arrays.ports();
  if (!mem.interleave) {
    if (manual == nullptr ||
        static_cast<int>(manual->bank_of_port.size()) != ports) {
      throw std::invalid_argument(
          "manual banking requires one bank per stream port");
    }
  }

  const VectorSpec& vec = stream.vector();
  const PortWidth width = round_port_width(vec.lanes);
  const std::int64_t rounded_bytes =
      static_cast<std::int64_t>(width.rounded) * vec.elem_bytes;

  const std::int64_t kp = period_fs(kernel.f_kernel_mhz);
  const std::int64_t cp =
      period_fs(mem.transfer_rate_mts / mem.ctrl_divisor);

  std::vector<std::deque<Txn>> queue(ports);
  std::vector<std::int64_t> bank_ready(mem.num_banks, 0);
  std::vector<int> bank_last_dir(mem.num_banks, -1);
  std::vector<int> bank_rr(mem.num_banks, 0);

  AccessStream s = stream;
  s.reset();
  IssueGroup group;
  bool have_group = s.next(group);
  std::vector<std::int64_t> words;  // word addrs of the pending group

  auto compute_words = [&](const IssueGroup& g) {
    words.clear();
    if (g.valid_mask == 0) return;
    std::int64_t addr, bytes;
    if (g.all_valid()) {
      addr = g.byte_addr;
      bytes = rounded_bytes;  // masked bytes of rounded ports ride the bus
    } else {
      const int fv = g.first_valid_lane();
      const int lv = g.last_valid_lane();
      addr = g.byte_addr + static_cast<std::int64_t>(fv) * vec.elem_bytes;
      bytes = static_cast<std::int64_t>(lv - fv + 1) * vec.elem_bytes;
    }
    const std::int64_t w = mem.bus_word_bytes();
    for (std::int64_t a = addr / w; a <= (addr + bytes - 1) / w; ++a) {
      words.push_back(a);
    }
  };
  compute_words(group);

  std::int64_t total_queued = 0;
  std::int64_t effective_bytes = 0;
  std::int64_t bus_bytes = 0;
  std::int64_t tk = 0, tc = 0;
  std::int64_t last_issue_tick = -1, last_retire_tick = -1;

  while (have_group || total_queued > 0) {
    const std::int64_t issue_time =
        have_group ? tk * kp : std::numeric_limits<std::int64_t>::max();
    if (total_queued == 0) {
      // Banks are idle; let the controller clock catch up with the pipeline.
      tc = std::max(tc, issue_time / cp);
    }
    const std::int64_t ctrl_time = tc * cp;

    if (total_queued > 0 && ctrl_time <= issue_time) {
      // A port feeds the controller one transaction per cycle, even when its
      // queue head moves to an idle bank mid-cycle.
      std::vector<char> port_served(ports, 0);
      for (int b = 0; b < mem.num_banks; ++b) {
        if (tc < bank_ready[b]) continue;
        for (int k = 0; k < ports; ++k) {
          const int p = (bank_rr[b] + k) % ports;
          if (port_served[p] || queue[p].empty() || queue[p].front().bank != b)
            continue;
          port_served[p] = 1;
          const Txn txn = queue[p].front();
          queue[p].pop_front();
          --total_queued;
          bus_bytes += mem.bus_word_bytes();
          last_retire_tick = tc;
          const int dir = static_cast<int>(txn.dir);
          bank_ready[b] = (bank_last_dir[b] >= 0 && bank_last_dir[b] != dir)
                              ? tc + 1 + mem.rw_turnaround_ctrl_cycles
                              : tc + 1;
          bank_last_dir[b] = dir;
          bank_rr[b] = (p + 1) % ports;
          break;
        }
      }
      ++tc;
      continue;
    }

    // Kernel issue slot: all ports enqueue in lockstep, or the whole group
    // stalls while any queue lacks room.
    bool room = true;
    for (int p = 0; p < ports && room; ++p) {
      room = queue[p].size() + words.size() <=
             static_cast<std::size_t>(mem.port_queue_depth);
    }
    if (room) {
      for (int p = 0; p < ports; ++p) {
        for (std::int64_t w : words) {
          const Dir dir = p < arrays.reads ? Dir::read : Dir::write;
          queue[p].push_back(Txn{w, map_word_to_bank(w, p, mem, manual), dir});
          ++total_queued;
        }
      }
      effective_bytes +=
          static_cast<std::int64_t>(group.valid_count()) * vec.elem_bytes * ports;
      last_issue_tick = tk;
      have_group = s.next(group);
      if (have_group) compute_words(group);
    }
    ++tk;
  }

  SimResult r;
  r.kernel_cycles = tk;
  r.effective_bytes = effective_bytes;
  r.bus_bytes = bus_bytes;
  const std::int64_t wall_fs =
      std::max((last_issue_tick + 1) * kp, (last_retire_tick + 1) * cp);
  r.wall_ns = wall_fs * 1e-6;
  if (wall_fs > 0) {
    r.gbps_effective = effective_bytes * 1e6 / wall_fs;  // bytes/fs -> GB/s
    r.gbps_bus = bus_bytes * 1e6 / wall_fs;
  }
  const double peak = peak_bandwidth_gbps(mem);
  const double expected = expected_throughput_gbps(
      ports, vec.lanes, kernel.f_kernel_mhz, vec.elem_bytes);
  r.efficiency_vs_expected = efficiency(r.gbps_effective, expected, peak);
  r.efficiency_vs_peak = peak > 0 ? r.gbps_effective / peak : 0.0;
  return r;
}

int saturation_lanes(const MemConfig& cfg, int num_ports, int elem_bytes) {
  cfg.validate();
  if (num_ports < 1) throw std::invalid_argument("num_ports must be >= 1");
  if (elem_bytes < 1) throw std::invalid_argument("elem_bytes must be >= 1");
  // ports * lanes * elem_bytes * f_ctrl >= peak; the transfer rate cancels,
  // leaving an exact integer ceiling.
  const std::int64_t numer = static_cast<std::int64_t>(cfg.num_banks) *
                             cfg.bank_data_bits * cfg.ctrl_divisor;
  const std::int64_t denom =
      8LL * num_ports * elem_bytes;
  return static_cast<int>((numer + denom - 1) / denom);
}

}  // namespace membench
