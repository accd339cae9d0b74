#include "membench/patterns.hpp"

#include <bit>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace membench {

namespace {

std::uint64_t lane_mask(int lanes) {
  return lanes >= 64 ? ~0ull : ((1ull << lanes) - 1);
}

void check_lanes_divide(const VectorSpec& vec, std::int64_t bsize) {
  if (bsize % vec.lanes != 0) {
    throw std::invalid_argument("vector lanes must divide bsize (got lanes=" +
                                std::to_string(vec.lanes) +
                                ", bsize=" + std::to_string(bsize) + ")");
  }
}

}  // namespace

void VectorSpec::validate() const {
  if (lanes < 1 || lanes > 64) {
    throw std::invalid_argument("vector lanes must be in [1, 64]");
  }
  if (elem_bytes < 1) {
    throw std::invalid_argument("elem_bytes must be >= 1");
  }
}

void ArrayConfig::validate() const {
  if (reads < 0 || writes < 0 || reads + writes < 1) {
    throw std::invalid_argument("array config needs reads, writes >= 0 and at least one port");
  }
}

std::string ArrayConfig::name() const {
  return "R" + std::to_string(reads) + "W" + std::to_string(writes);
}

ArrayConfig ArrayConfig::parse(const std::string& name) {
  // Canonical form R<reads>W<writes>, case-insensitive.
  auto fail = [&] {
    throw std::invalid_argument("bad array config '" + name + "', expected RxWy");
  };
  if (name.size() < 4 || (name[0] != 'R' && name[0] != 'r')) fail();
  std::size_t wpos = name.find_first_of("Ww", 1);
  if (wpos == std::string::npos || wpos == 1 || wpos + 1 >= name.size()) fail();
  char* end = nullptr;
  long r = std::strtol(name.c_str() + 1, &end, 10);
  if (end != name.c_str() + wpos) fail();
  long w = std::strtol(name.c_str() + wpos + 1, &end, 10);
  if (*end != '\0') fail();
  ArrayConfig cfg{static_cast<int>(r), static_cast<int>(w)};
  cfg.validate();
  return cfg;
}

std::string PortId::name() const {
  return (dir == Dir::read ? "r" : "w") + std::to_string(ordinal);
}

Block1D block_geometry(std::int64_t bsize, std::int64_t halo) {
  if (halo < 0) throw std::invalid_argument("halo must be >= 0");
  if (bsize <= 2 * halo) {
    throw std::invalid_argument("degenerate block: bsize must exceed 2*halo");
  }
  return Block1D{bsize, halo, bsize - 2 * halo};
}

std::int64_t fit_array_size(std::int64_t target_bytes, std::int64_t csize,
                            int elem_bytes) {
  if (csize < 1) throw std::invalid_argument("csize must be >= 1");
  if (elem_bytes < 1) throw std::invalid_argument("elem_bytes must be >= 1");
  const std::int64_t chunk_bytes = csize * elem_bytes;
  if (target_bytes < chunk_bytes) {
    throw std::invalid_argument("target smaller than one csize chunk");
  }
  std::int64_t lo = target_bytes / chunk_bytes;  // floor multiple, >= 1
  std::int64_t hi = lo + 1;
  std::int64_t d_lo = target_bytes - lo * chunk_bytes;
  std::int64_t d_hi = hi * chunk_bytes - target_bytes;
  return (d_lo <= d_hi ? lo : hi) * csize;  // ties toward smaller
}

void PaddingSpec::validate() const {
  if (pad < 0 || row_pad < 0 || plane_pad < 0) {
    throw std::invalid_argument("padding values must be >= 0");
  }
}

int IssueGroup::valid_count() const { return std::popcount(valid_mask); }
int IssueGroup::redundant_count() const { return std::popcount(redundant_mask); }

bool IssueGroup::all_valid() const { return valid_mask == lane_mask(lanes); }

int IssueGroup::first_valid_lane() const {
  return valid_mask == 0 ? -1 : std::countr_zero(valid_mask);
}

int IssueGroup::last_valid_lane() const {
  return valid_mask == 0 ? -1 : 63 - std::countl_zero(valid_mask);
}

PortId AccessStream::port(int ordinal) const {
  if (ordinal < 0 || ordinal >= arrays_.ports()) {
    throw std::out_of_range("port ordinal out of range");
  }
  if (ordinal < arrays_.reads) return PortId{ordinal, Dir::read};
  return PortId{ordinal - arrays_.reads, Dir::write};
}

const char* AccessStream::pattern_name() const {
  switch (shape_.index()) {
    case 0: return "1d";
    case 1: return "1.5d";
    default: return "2.5d";
  }
}

std::int64_t AccessStream::logical_elements() const {
  if (auto* s = std::get_if<detail::Shape1D>(&shape_)) return s->n;
  if (auto* s = std::get_if<detail::Shape15D>(&shape_)) return s->dimx * s->dimy;
  auto& s = std::get<detail::Shape25D>(shape_);
  return s.dimx * s.dimy * s.dimz;
}

std::int64_t AccessStream::padded_elements() const {
  if (auto* s = std::get_if<detail::Shape1D>(&shape_)) return pad_.pad + s->n;
  if (auto* s = std::get_if<detail::Shape15D>(&shape_)) {
    return pad_.pad + s->dimy * (s->dimx + pad_.row_pad);
  }
  auto& s = std::get<detail::Shape25D>(shape_);
  return pad_.pad +
         s.dimz * (s.dimy * (s.dimx + pad_.row_pad) + pad_.plane_pad);
}

bool AccessStream::next(IssueGroup& out) {
  if (cursor_ >= cycles_) return false;
  out = group_at(cursor_++);
  return true;
}

IssueGroup AccessStream::group_at(std::int64_t cycle) const {
  if (cycle < 0 || cycle >= cycles_) {
    throw std::out_of_range("cycle out of range");
  }
  const int lanes = vec_.lanes;
  const int eb = vec_.elem_bytes;
  IssueGroup g;
  g.cycle = cycle;
  g.lanes = lanes;

  if (auto* s = std::get_if<detail::Shape1D>(&shape_)) {
    const auto& b = s->block;
    const std::int64_t vec_per_block = b.bsize / lanes;
    const std::int64_t block = cycle / vec_per_block;
    const std::int64_t off = cycle % vec_per_block;
    const std::int64_t start = block * b.csize - b.halo + off * lanes;
    g.elem_index = start;
    g.byte_addr = (pad_.pad + start) * eb;
    const std::int64_t seam = block * b.csize + b.halo;  // end of prior block
    for (int l = 0; l < lanes; ++l) {
      const std::int64_t e = start + l;
      if (e < 0 || e >= s->n) continue;
      g.valid_mask |= 1ull << l;
      if (block > 0 && e < seam) g.redundant_mask |= 1ull << l;
    }
    return g;
  }

  if (auto* s = std::get_if<detail::Shape15D>(&shape_)) {
    const auto& b = s->block;
    const std::int64_t vec_per_row = b.bsize / lanes;
    const std::int64_t per_block = s->dimy * vec_per_row;
    const std::int64_t kx = cycle / per_block;
    const std::int64_t rem = cycle % per_block;
    const std::int64_t row = rem / vec_per_row;
    const std::int64_t v = rem % vec_per_row;
    const std::int64_t x0 = kx * b.csize - b.halo + v * lanes;
    g.elem_index = row * s->dimx + x0;
    g.byte_addr = (pad_.pad + row * (s->dimx + pad_.row_pad) + x0) * eb;
    const std::int64_t seam = kx * b.csize + b.halo;
    for (int l = 0; l < lanes; ++l) {
      const std::int64_t x = x0 + l;
      if (x < 0 || x >= s->dimx) continue;
      g.valid_mask |= 1ull << l;
      if (kx > 0 && x < seam) g.redundant_mask |= 1ull << l;
    }
    return g;
  }

  const auto& s = std::get<detail::Shape25D>(shape_);
  const std::int64_t vec_per_row = s.bx.bsize / lanes;
  const std::int64_t per_plane = s.by.bsize * vec_per_row;
  const std::int64_t per_tile = s.dimz * per_plane;
  const std::int64_t nby = s.dimy / s.by.csize;
  const std::int64_t tile = cycle / per_tile;
  const std::int64_t kx = tile / nby;
  const std::int64_t ky = tile % nby;
  std::int64_t rem = cycle % per_tile;
  const std::int64_t plane = rem / per_plane;
  rem %= per_plane;
  const std::int64_t ty = rem / vec_per_row;
  const std::int64_t v = rem % vec_per_row;
  const std::int64_t y = ky * s.by.csize - s.by.halo + ty;
  const std::int64_t x0 = kx * s.bx.csize - s.bx.halo + v * lanes;
  const bool row_valid = y >= 0 && y < s.dimy;
  const std::int64_t row_elems = plane * s.dimy + y;
  g.elem_index = row_elems * s.dimx + x0;
  g.byte_addr = (pad_.pad + plane * pad_.plane_pad +
                 row_elems * pad_.row_pad + g.elem_index) *
                eb;
  if (row_valid) {
    const std::int64_t seam_x = kx * s.bx.csize + s.bx.halo;
    const bool y_redundant = ky > 0 && y < ky * s.by.csize + s.by.halo;
    for (int l = 0; l < lanes; ++l) {
      const std::int64_t x = x0 + l;
      if (x < 0 || x >= s.dimx) continue;
      g.valid_mask |= 1ull << l;
      if (y_redundant || (kx > 0 && x < seam_x)) g.redundant_mask |= 1ull << l;
    }
  }
  return g;
}

AccessStream gen_1d(std::int64_t n, Block1D block, PaddingSpec pad,
                    VectorSpec vec, ArrayConfig arrays) {
  vec.validate();
  arrays.validate();
  pad.validate();
  if (block.csize != block.bsize - 2 * block.halo || block.csize <= 0) {
    throw std::invalid_argument("malformed Block1D, use block_geometry()");
  }
  check_lanes_divide(vec, block.bsize);
  if (n <= 0 || n % block.csize != 0) {
    throw std::invalid_argument("array length must be a positive multiple of csize");
  }
  AccessStream s;
  s.shape_ = detail::Shape1D{n, block};
  s.vec_ = vec;
  s.arrays_ = arrays;
  s.pad_ = pad;
  s.cycles_ = (n / block.csize) * (block.bsize / vec.lanes);
  return s;
}

AccessStream gen_15d(const GridSpec& grid, PaddingSpec pad, VectorSpec vec,
                     ArrayConfig arrays) {
  vec.validate();
  arrays.validate();
  pad.validate();
  const Block1D& b = grid.block_x;
  if (b.csize != b.bsize - 2 * b.halo || b.csize <= 0) {
    throw std::invalid_argument("malformed Block1D, use block_geometry()");
  }
  check_lanes_divide(vec, b.bsize);
  if (grid.dimx <= 0 || grid.dimy <= 0) {
    throw std::invalid_argument("grid extents must be >= 1");
  }
  if (grid.dimx % b.csize != 0) {
    throw std::invalid_argument("x extent must be a multiple of csize");
  }
  AccessStream s;
  s.shape_ = detail::Shape15D{grid.dimx, grid.dimy, b};
  s.vec_ = vec;
  s.arrays_ = arrays;
  s.pad_ = pad;
  s.cycles_ = (grid.dimx / b.csize) * grid.dimy * (b.bsize / vec.lanes);
  return s;
}

AccessStream gen_25d(const GridSpec& grid, PaddingSpec pad, VectorSpec vec,
                     ArrayConfig arrays) {
  vec.validate();
  arrays.validate();
  pad.validate();
  const Block1D& bx = grid.block_x;
  const Block1D by = grid.block_y.value_or(bx);
  for (const Block1D* b : {&bx, &by}) {
    if (b->csize != b->bsize - 2 * b->halo || b->csize <= 0) {
      throw std::invalid_argument("malformed Block1D, use block_geometry()");
    }
  }
  check_lanes_divide(vec, bx.bsize);
  if (grid.dimx <= 0 || grid.dimy <= 0 || grid.dimz <= 0) {
    throw std::invalid_argument("grid extents must be >= 1");
  }
  if (grid.dimx % bx.csize != 0 || grid.dimy % by.csize != 0) {
    throw std::invalid_argument("x, y extents must be multiples of csize");
  }
  AccessStream s;
  s.shape_ = detail::Shape25D{grid.dimx, grid.dimy, grid.dimz, bx, by};
  s.vec_ = vec;
  s.arrays_ = arrays;
  s.pad_ = pad;
  s.cycles_ = (grid.dimx / bx.csize) * (grid.dimy / by.csize) * grid.dimz *
              by.bsize * (bx.bsize / vec.lanes);
  return s;
}

StreamTotals redundancy_stats(const AccessStream& stream) {
  StreamTotals t;
  AccessStream s = stream;
  s.reset();
  IssueGroup g;
  while (s.next(g)) {
    ++t.cycles;
    t.issued += g.lanes;
    const int valid = g.valid_count();
    const int redundant = g.redundant_count();
    t.valid += valid;
    t.redundant += redundant;
    t.skipped += g.lanes - valid;
  }
  t.unique = t.valid - t.redundant;
  return t;
}

void write_trace(const AccessStream& stream, std::ostream& os,
                 std::int64_t max_cycles) {
  os << "cycle,port,dir,elem_index,byte_addr,valid,redundant\n";
  AccessStream s = stream;
  s.reset();
  const int ports = s.arrays().ports();
  const int eb = s.vector().elem_bytes;
  IssueGroup g;
  std::int64_t emitted = 0;
  while (s.next(g)) {
    if (max_cycles >= 0 && emitted >= max_cycles) break;
    for (int p = 0; p < ports; ++p) {
      const PortId id = s.port(p);
      for (int l = 0; l < g.lanes; ++l) {
        const bool valid = (g.valid_mask >> l) & 1;
        const bool redundant = (g.redundant_mask >> l) & 1;
        os << g.cycle << ',' << id.name() << ','
           << (id.dir == Dir::read ? 'R' : 'W') << ',' << (g.elem_index + l)
           << ',' << (g.byte_addr + static_cast<std::int64_t>(l) * eb) << ','
           << int(valid) << ',' << int(redundant) << '\n';
      }
    }
    ++emitted;
  }
}

}  // namespace membench
