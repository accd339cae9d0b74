#ifndef MEMBENCH_HOSTBENCH_HPP
#define MEMBENCH_HOSTBENCH_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "membench/patterns.hpp"

namespace membench {

/// Host-memory measurement run: replays a generated stream against real
/// buffers with wall-clock timing. Element type is float (elem_bytes 4).
struct HostRunSpec {
  int repetitions = 3;
  int warmup = 1;
  std::size_t buffer_alignment = 64;
  bool streaming_stores = false;  // affects absolute numbers only
  int threads = 1;                // >1 partitions blocks, halo-0 1D only
  bool pin_core = false;
};

struct HostResult {
  std::vector<double> rep_wall_ns;
  double best_gbps = 0.0;
  double median_gbps = 0.0;
  std::int64_t effective_bytes_per_rep = 0;
  std::uint64_t checksum = 0;
};

struct VerifyResult {
  bool pass = false;
  std::int64_t first_mismatch = -1;  // logical element index
  int mismatch_port = -1;            // write port ordinal
};

/// Deterministic content of read array `r` at logical element `i`.
float host_read_value(int read_port, std::int64_t elem);

/// Value every write port stores for logical element `i` (sum of the read
/// arrays, or a function of the index for write-only configurations).
float host_write_value(const ArrayConfig& arrays, std::int64_t elem);

class HostBench {
 public:
  HostBench(AccessStream stream, HostRunSpec spec);
  ~HostBench();
  HostBench(HostBench&&) noexcept;
  HostBench& operator=(HostBench&&) noexcept;

  HostResult run();

  /// Scalar lane-by-lane replay of the same logical operation, compared
  /// element-wise against the buffers left behind by run().
  VerifyResult verify() const;

  std::span<float> write_buffer(int write_port);
  std::span<const float> read_buffer(int read_port) const;

  const AccessStream& stream() const { return stream_; }

 private:
  void execute_once();
  void execute_range(std::int64_t first_cycle, std::int64_t last_cycle,
                     std::uint64_t& read_acc);
  std::uint64_t checksum_buffers() const;

  AccessStream stream_;
  HostRunSpec spec_;
  std::int64_t padded_elems_ = 0;
  std::vector<float*> read_bufs_;
  std::vector<float*> write_bufs_;
  std::uint64_t read_acc_ = 0;
};

/// Convenience wrapper: run + verify in one call.
HostResult run_host(const AccessStream& stream, const HostRunSpec& spec);

}  // namespace membench

#endif
