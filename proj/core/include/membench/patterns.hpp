#ifndef MEMBENCH_PATTERNS_HPP
#define MEMBENCH_PATTERNS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

namespace membench {

/// Vector-wide access shape: lanes elements of elem_bytes each per port per cycle.
struct VectorSpec {
  int lanes = 1;
  int elem_bytes = 4;

  std::int64_t access_bytes() const {
    return static_cast<std::int64_t>(lanes) * elem_bytes;
  }
  void validate() const;  // throws std::invalid_argument
};

/// Read/write array port counts. Canonical name "R{reads}W{writes}".
struct ArrayConfig {
  int reads = 1;
  int writes = 1;

  int ports() const { return reads + writes; }
  std::string name() const;
  static ArrayConfig parse(const std::string& name);  // "R2W1" etc.
  void validate() const;
};

enum class Dir : std::uint8_t { read, write };

/// Port ordinals are reads first (r0..), then writes (w0..).
struct PortId {
  int ordinal = 0;
  Dir dir = Dir::read;
  std::string name() const;
};

/// Overlapped-block geometry: consecutive block starts are csize apart and
/// neighbouring blocks overlap by 2*halo elements.
struct Block1D {
  std::int64_t bsize = 0;
  std::int64_t halo = 0;
  std::int64_t csize = 0;
};

Block1D block_geometry(std::int64_t bsize, std::int64_t halo);

/// Nearest multiple of csize to target_bytes/elem_bytes, ties toward smaller.
std::int64_t fit_array_size(std::int64_t target_bytes, std::int64_t csize,
                            int elem_bytes);

struct PaddingSpec {
  std::int64_t pad = 0;        // leading offset in elements, every array base
  std::int64_t row_pad = 0;    // extra elements appended per row (1.5D/2.5D)
  std::int64_t plane_pad = 0;  // extra elements appended per plane (2.5D)
  void validate() const;
};

struct GridSpec {
  std::int64_t dimx = 0;
  std::int64_t dimy = 0;
  std::int64_t dimz = 1;
  Block1D block_x;
  std::optional<Block1D> block_y;  // 2.5D only; defaults to block_x
};

/// One vector access shared by all ports of a kernel cycle. Lane l covers
/// logical element elem_index + l; masks are lane bitmaps (lane 0 = bit 0).
struct IssueGroup {
  std::int64_t cycle = 0;
  std::int64_t elem_index = 0;  // lane 0, may be negative or out of bounds
  std::int64_t byte_addr = 0;   // lane 0 after padding
  std::uint64_t valid_mask = 0;
  std::uint64_t redundant_mask = 0;  // subset of valid_mask
  int lanes = 0;

  int valid_count() const;
  int redundant_count() const;
  bool all_valid() const;
  int first_valid_lane() const;  // -1 when none
  int last_valid_lane() const;
};

namespace detail {

struct Shape1D {
  std::int64_t n = 0;
  Block1D block;
};

struct Shape15D {
  std::int64_t dimx = 0, dimy = 0;
  Block1D block;
};

struct Shape25D {
  std::int64_t dimx = 0, dimy = 0, dimz = 0;
  Block1D bx, by;
};

using ShapeVariant = std::variant<Shape1D, Shape15D, Shape25D>;

}  // namespace detail

/// Deterministic, replayable access stream. Groups are a pure function of the
/// cycle index, so the stream is both lazily iterable and random-access.
class AccessStream {
 public:
  bool next(IssueGroup& out);
  void reset() { cursor_ = 0; }
  IssueGroup group_at(std::int64_t cycle) const;

  std::int64_t total_cycles() const { return cycles_; }
  const VectorSpec& vector() const { return vec_; }
  const ArrayConfig& arrays() const { return arrays_; }
  const PaddingSpec& padding() const { return pad_; }
  const detail::ShapeVariant& shape() const { return shape_; }
  PortId port(int ordinal) const;
  const char* pattern_name() const;  // "1d" | "1.5d" | "2.5d"

  /// Total logical elements of each array (excluding padding).
  std::int64_t logical_elements() const;
  /// Elements an array buffer must hold including all padding.
  std::int64_t padded_elements() const;

 private:
  friend AccessStream gen_1d(std::int64_t, Block1D, PaddingSpec, VectorSpec,
                             ArrayConfig);
  friend AccessStream gen_15d(const GridSpec&, PaddingSpec, VectorSpec,
                              ArrayConfig);
  friend AccessStream gen_25d(const GridSpec&, PaddingSpec, VectorSpec,
                              ArrayConfig);

  detail::ShapeVariant shape_;
  VectorSpec vec_;
  ArrayConfig arrays_;
  PaddingSpec pad_;
  std::int64_t cycles_ = 0;
  std::int64_t cursor_ = 0;
};

AccessStream gen_1d(std::int64_t n, Block1D block, PaddingSpec pad,
                    VectorSpec vec, ArrayConfig arrays);
AccessStream gen_15d(const GridSpec& grid, PaddingSpec pad, VectorSpec vec,
                     ArrayConfig arrays);
AccessStream gen_25d(const GridSpec& grid, PaddingSpec pad, VectorSpec vec,
                     ArrayConfig arrays);

/// Per-port element accounting. issued = valid + skipped, valid = unique + redundant.
struct StreamTotals {
  std::int64_t issued = 0;
  std::int64_t valid = 0;
  std::int64_t unique = 0;
  std::int64_t redundant = 0;
  std::int64_t skipped = 0;
  std::int64_t cycles = 0;
};

StreamTotals redundancy_stats(const AccessStream& stream);

/// Debug trace export: one line per (cycle, port, lane) record.
/// Header: cycle,port,dir,elem_index,byte_addr,valid,redundant
void write_trace(const AccessStream& stream, std::ostream& os,
                 std::int64_t max_cycles = -1);

}  // namespace membench

#endif
