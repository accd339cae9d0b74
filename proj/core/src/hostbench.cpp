#include "membench/hostbench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <thread>

#ifdef __linux__
#include <sched.h>
#endif
#ifdef __SSE2__
#include <emmintrin.h>
#endif

namespace membench {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

float* alloc_aligned(std::size_t elems, std::size_t alignment) {
  std::size_t bytes = elems * sizeof(float);
  bytes = (bytes + alignment - 1) / alignment * alignment;
  void* p = std::aligned_alloc(alignment, bytes);
  if (p == nullptr) throw std::bad_alloc();
  std::memset(p, 0, bytes);
  return static_cast<float*>(p);
}

void maybe_pin_core(bool pin) {
#ifdef __linux__
  if (!pin) return;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(0, &set);
  sched_setaffinity(0, sizeof(set), &set);
#else
  (void)pin;
#endif
}

std::uint32_t float_bits(float v) {
  std::uint32_t b;
  std::memcpy(&b, &v, sizeof(b));
  return b;
}

}  // namespace

float host_read_value(int read_port, std::int64_t elem) {
  return static_cast<float>((elem % 8191) - 4095) * 0.25f +
         static_cast<float>(read_port);
}

float host_write_value(const ArrayConfig& arrays, std::int64_t elem) {
  if (arrays.reads == 0) {
    return static_cast<float>((elem % 8191) - 4095) * 0.5f;
  }
  float v = 0.0f;
  for (int r = 0; r < arrays.reads; ++r) v += host_read_value(r, elem);
  return v;
}

HostBench::HostBench(AccessStream stream, HostRunSpec spec)
    : stream_(std::move(stream)), spec_(spec) {
  if (stream_.vector().elem_bytes != 4) {
    throw std::invalid_argument("host backend handles 4-byte elements only");
  }
  if (spec_.repetitions < 1 || spec_.warmup < 0) {
    throw std::invalid_argument("repetitions must be >= 1, warmup >= 0");
  }
  if (spec_.buffer_alignment == 0 ||
      (spec_.buffer_alignment & (spec_.buffer_alignment - 1)) != 0) {
    throw std::invalid_argument("buffer alignment must be a power of two");
  }
  padded_elems_ = stream_.padded_elements() + stream_.vector().lanes;
  const ArrayConfig& arrays = stream_.arrays();
  read_bufs_.resize(arrays.reads, nullptr);
  write_bufs_.resize(arrays.writes, nullptr);
  for (auto& b : read_bufs_) b = alloc_aligned(padded_elems_, spec_.buffer_alignment);
  for (auto& b : write_bufs_) b = alloc_aligned(padded_elems_, spec_.buffer_alignment);

  // Seed the read arrays through the stream itself: every valid element gets
  // its deterministic content, padding stays zero.
  AccessStream s = stream_;
  s.reset();
  IssueGroup g;
  while (s.next(g)) {
    for (int l = 0; l < g.lanes; ++l) {
      if (((g.valid_mask >> l) & 1) == 0) continue;
      const std::int64_t addr = g.byte_addr / 4 + l;
      const std::int64_t elem = g.elem_index + l;
      for (int r = 0; r < arrays.reads; ++r) {
        read_bufs_[r][addr] = host_read_value(r, elem);
      }
    }
  }
}

HostBench::~HostBench() {
  for (auto* b : read_bufs_) std::free(b);
  for (auto* b : write_bufs_) std::free(b);
}

HostBench::HostBench(HostBench&& other) noexcept
    : stream_(std::move(other.stream_)),
      spec_(other.spec_),
      padded_elems_(other.padded_elems_),
      read_bufs_(std::move(other.read_bufs_)),
      write_bufs_(std::move(other.write_bufs_)),
      read_acc_(other.read_acc_) {
  other.read_bufs_.clear();
  other.write_bufs_.clear();
}

HostBench& HostBench::operator=(HostBench&& other) noexcept {
  if (this != &other) {
    for (auto* b : read_bufs_) std::free(b);
    for (auto* b : write_bufs_) std::free(b);
    stream_ = std::move(other.stream_);
    spec_ = other.spec_;
    padded_elems_ = other.padded_elems_;
    read_bufs_ = std::move(other.read_bufs_);
    write_bufs_ = std::move(other.write_bufs_);
    read_acc_ = other.read_acc_;
    other.read_bufs_.clear();
    other.write_bufs_.clear();
  }
  return *this;
}

std::span<float> HostBench::write_buffer(int write_port) {
  return {write_bufs_.at(write_port), static_cast<std::size_t>(padded_elems_)};
}

std::span<const float> HostBench::read_buffer(int read_port) const {
  return {read_bufs_.at(read_port), static_cast<std::size_t>(padded_elems_)};
}

void HostBench::execute_range(std::int64_t first_cycle, std::int64_t last_cycle,
                              std::uint64_t& read_acc) {
  const ArrayConfig& arrays = stream_.arrays();
  const int nr = arrays.reads;
  const int nw = arrays.writes;
  const bool nt_stores = spec_.streaming_stores;
  auto store = [&](float* dst, float v) {
#ifdef __SSE2__
    if (nt_stores) {
      _mm_stream_si32(reinterpret_cast<int*>(dst),
                      static_cast<int>(float_bits(v)));
      return;
    }
#else
    (void)nt_stores;
#endif
    *dst = v;
  };
  for (std::int64_t t = first_cycle; t < last_cycle; ++t) {
    const IssueGroup g = stream_.group_at(t);
    if (g.valid_mask == 0) continue;
    const std::int64_t addr0 = g.byte_addr / 4;
    if (g.all_valid()) {
      for (int l = 0; l < g.lanes; ++l) {
        float v = 0.0f;
        for (int r = 0; r < nr; ++r) v += read_bufs_[r][addr0 + l];
        if (nw > 0) {
          if (nr == 0) v = host_write_value(arrays, g.elem_index + l);
          for (int w = 0; w < nw; ++w) store(&write_bufs_[w][addr0 + l], v);
        } else {
          read_acc = (read_acc ^ float_bits(v)) * kFnvPrime;
        }
      }
    } else {
      for (int l = 0; l < g.lanes; ++l) {
        if (((g.valid_mask >> l) & 1) == 0) continue;
        float v = 0.0f;
        for (int r = 0; r < nr; ++r) v += read_bufs_[r][addr0 + l];
        if (nw > 0) {
          if (nr == 0) v = host_write_value(arrays, g.elem_index + l);
          for (int w = 0; w < nw; ++w) store(&write_bufs_[w][addr0 + l], v);
        } else {
          read_acc = (read_acc ^ float_bits(v)) * kFnvPrime;
        }
      }
    }
  }
}

void HostBench::execute_once() {
  const std::int64_t cycles = stream_.total_cycles();
  bool threaded = spec_.threads > 1 && stream_.arrays().writes > 0;
  if (threaded) {
    // Disjoint write ranges are only guaranteed without overlap.
    if (auto* s = std::get_if<detail::Shape1D>(&stream_.shape())) {
      threaded = s->block.halo == 0;
    } else {
      threaded = false;
    }
  }
  if (!threaded) {
    std::uint64_t acc = kFnvOffset;
    execute_range(0, cycles, acc);
    read_acc_ = acc;
    return;
  }
  const int nthreads = std::min<std::int64_t>(spec_.threads, cycles);
  std::vector<std::thread> workers;
  std::vector<std::uint64_t> accs(nthreads, kFnvOffset);
  for (int i = 0; i < nthreads; ++i) {
    const std::int64_t first = cycles * i / nthreads;
    const std::int64_t last = cycles * (i + 1) / nthreads;
    workers.emplace_back(
        [this, first, last, &accs, i] { execute_range(first, last, accs[i]); });
  }
  for (auto& w : workers) w.join();
  read_acc_ = kFnvOffset;
}

std::uint64_t HostBench::checksum_buffers() const {
  std::uint64_t h = kFnvOffset;
  for (auto* b : write_bufs_) {
    h = fnv1a(h, b, static_cast<std::size_t>(padded_elems_) * sizeof(float));
  }
  h ^= read_acc_;
  return h;
}

HostResult HostBench::run() {
  maybe_pin_core(spec_.pin_core);
  const StreamTotals totals = redundancy_stats(stream_);
  HostResult result;
  result.effective_bytes_per_rep =
      totals.valid * stream_.vector().elem_bytes * stream_.arrays().ports();

  for (int i = 0; i < spec_.warmup; ++i) execute_once();
  for (int i = 0; i < spec_.repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    execute_once();
    const auto t1 = std::chrono::steady_clock::now();
    result.rep_wall_ns.push_back(
        std::chrono::duration<double, std::nano>(t1 - t0).count());
  }

  std::vector<double> sorted = result.rep_wall_ns;
  std::sort(sorted.begin(), sorted.end());
  const double best_ns = sorted.front();
  const double median_ns = sorted[sorted.size() / 2];
  result.best_gbps = result.effective_bytes_per_rep / best_ns;  // B/ns == GB/s
  result.median_gbps = result.effective_bytes_per_rep / median_ns;
  result.checksum = checksum_buffers();
  return result;
}

VerifyResult HostBench::verify() const {
  const ArrayConfig& arrays = stream_.arrays();
  VerifyResult v;
  AccessStream s = stream_;
  s.reset();
  IssueGroup g;
  if (arrays.writes == 0) {
    // Scalar replay of the read reduction must reproduce the accumulator.
    std::uint64_t acc = kFnvOffset;
    while (s.next(g)) {
      for (int l = 0; l < g.lanes; ++l) {
        if (((g.valid_mask >> l) & 1) == 0) continue;
        float val = 0.0f;
        for (int r = 0; r < arrays.reads; ++r) {
          val += host_read_value(r, g.elem_index + l);
        }
        acc = (acc ^ float_bits(val)) * kFnvPrime;
      }
    }
    v.pass = acc == read_acc_;
    return v;
  }
  while (s.next(g)) {
    for (int l = 0; l < g.lanes; ++l) {
      if (((g.valid_mask >> l) & 1) == 0) continue;
      const std::int64_t elem = g.elem_index + l;
      const std::int64_t addr = g.byte_addr / 4 + l;
      const float expect = host_write_value(arrays, elem);
      for (int w = 0; w < arrays.writes; ++w) {
        if (write_bufs_[w][addr] != expect) {
          v.pass = false;
          v.first_mismatch = elem;
          v.mismatch_port = w;
          return v;
        }
      }
    }
  }
  v.pass = true;
  return v;
}

HostResult run_host(const AccessStream& stream, const HostRunSpec& spec) {
  HostBench bench(stream, spec);
  HostResult r = bench.run();
  const VerifyResult v = bench.verify();
  if (!v.pass) {
    throw std::runtime_error(
        "host run verification failed at element " +
        std::to_string(v.first_mismatch));
  }
  return r;
}

}  // namespace membench
