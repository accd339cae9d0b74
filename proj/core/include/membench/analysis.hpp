#ifndef MEMBENCH_ANALYSIS_HPP
#define MEMBENCH_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "membench/patterns.hpp"

namespace membench {

struct MemConfig;  // memmodel.hpp

/// arrays * lanes * frequency * element size, in GB/s.
double expected_throughput_gbps(int num_arrays, int lanes, double f_mhz,
                                int elem_bytes);

/// measured / min(expected, peak).
double efficiency(double measured_gbps, double expected_gbps, double peak_gbps);

/// Byte alignment every access must satisfy for full-rate transfers:
/// the vector width, capped at the bus word.
std::int64_t alignment_requirement_bytes(int lanes, int elem_bytes,
                                         std::int64_t bus_word_bytes);

/// Largest power-of-two byte alignment guaranteed for all accesses of a
/// configuration. Disengaged granularity means fully aligned (halo 0 class).
struct AlignmentClass {
  std::optional<std::int64_t> granularity_bytes;

  bool fully_aligned() const { return !granularity_bytes.has_value(); }
  bool operator==(const AlignmentClass&) const = default;
};

/// Alignment equivalence class of a halo size: behaviour depends only on the
/// largest power of two dividing the halo.
AlignmentClass halo_class(std::int64_t halo, int elem_bytes);

enum class PredictedClass { full, partial, none };

const char* to_string(PredictedClass cls);

struct MergePlan {
  int read_struct_bytes = 0;   // 0 when no read arrays
  int write_struct_bytes = 0;  // 0 when no write arrays
};

struct AdvisorReport {
  std::int64_t pad = 0;
  PredictedClass predicted_class = PredictedClass::none;
  std::string rule;  // stable identifier, diffable in tests
  std::optional<MergePlan> merge;
  std::string narrative;
  std::int64_t recommended_row_pad = 0;
  std::int64_t recommended_plane_pad = 0;
  AlignmentClass alignment;

  /// JSON with stable field names: pad, class, rule, merge.
  std::string to_json() const;
};

/// Leading-pad recommendation for 1D overlapped blocking.
AdvisorReport padding_advice(std::int64_t halo, int lanes, int elem_bytes,
                             std::int64_t csize);

/// Array-of-structs merge work-around for configurations with more arrays
/// than banks. Only power-of-two group sizes merge cleanly.
AdvisorReport merge_advice(const ArrayConfig& arrays, int elem_bytes);

/// Guaranteed alignment of every access of a generated stream, classified
/// against the requirement for its vector width. Uses gcd arithmetic over the
/// lattice of access-start addresses.
AdvisorReport predict_stream_class(const AccessStream& stream,
                                   const MemConfig& mem);

}  // namespace membench

#endif
