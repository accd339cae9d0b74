// Scalar lane-by-lane reference generators, written as plain nested loops so
// they stay independent of the closed-form cycle arithmetic in the library.
#ifndef MEMBENCH_TESTS_REFERENCE_GEN_HPP
#define MEMBENCH_TESTS_REFERENCE_GEN_HPP

#include <cstdint>
#include <vector>

namespace refgen {

struct Record {
  std::int64_t cycle;
  std::int64_t elem_index;  // logical element, may be out of bounds
  std::int64_t byte_addr;
  bool valid;
  bool redundant;
};

struct Params1D {
  std::int64_t n, bsize, halo;
  std::int64_t pad;
  int lanes, elem_bytes;
};

inline std::vector<Record> gen_1d(const Params1D& p) {
  std::vector<Record> out;
  const std::int64_t csize = p.bsize - 2 * p.halo;
  std::int64_t cycle = 0;
  for (std::int64_t block = 0; block * csize < p.n; ++block) {
    const std::int64_t begin = block * csize - p.halo;
    for (std::int64_t off = 0; off < p.bsize; off += p.lanes, ++cycle) {
      for (int l = 0; l < p.lanes; ++l) {
        const std::int64_t e = begin + off + l;
        Record r;
        r.cycle = cycle;
        r.elem_index = e;
        r.byte_addr = (p.pad + e) * p.elem_bytes;
        r.valid = e >= 0 && e < p.n;
        // Redundant when a previous block already covered this element.
        r.redundant =
            r.valid && block > 0 && e < (block - 1) * csize + p.bsize - p.halo;
        out.push_back(r);
      }
    }
  }
  return out;
}

struct Params15D {
  std::int64_t dimx, dimy, bsize, halo;
  std::int64_t pad, row_pad;
  int lanes, elem_bytes;
};

inline std::vector<Record> gen_15d(const Params15D& p) {
  std::vector<Record> out;
  const std::int64_t csize = p.bsize - 2 * p.halo;
  std::int64_t cycle = 0;
  for (std::int64_t bx = 0; bx * csize < p.dimx; ++bx) {
    for (std::int64_t row = 0; row < p.dimy; ++row) {
      const std::int64_t xbegin = bx * csize - p.halo;
      for (std::int64_t off = 0; off < p.bsize; off += p.lanes, ++cycle) {
        for (int l = 0; l < p.lanes; ++l) {
          const std::int64_t x = xbegin + off + l;
          Record r;
          r.cycle = cycle;
          r.elem_index = row * p.dimx + x;
          r.byte_addr = (p.pad + row * (p.dimx + p.row_pad) + x) * p.elem_bytes;
          r.valid = x >= 0 && x < p.dimx;
          r.redundant = r.valid && bx > 0 &&
                        x < (bx - 1) * csize + p.bsize - p.halo;
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

struct Params25D {
  std::int64_t dimx, dimy, dimz;
  std::int64_t bsize_x, halo_x, bsize_y, halo_y;
  std::int64_t pad, row_pad, plane_pad;
  int lanes, elem_bytes;
};

inline std::vector<Record> gen_25d(const Params25D& p) {
  std::vector<Record> out;
  const std::int64_t csx = p.bsize_x - 2 * p.halo_x;
  const std::int64_t csy = p.bsize_y - 2 * p.halo_y;
  std::int64_t cycle = 0;
  for (std::int64_t bx = 0; bx * csx < p.dimx; ++bx) {
    for (std::int64_t by = 0; by * csy < p.dimy; ++by) {
      for (std::int64_t z = 0; z < p.dimz; ++z) {
        for (std::int64_t ty = 0; ty < p.bsize_y; ++ty) {
          const std::int64_t y = by * csy - p.halo_y + ty;
          const bool row_ok = y >= 0 && y < p.dimy;
          const bool y_red = by > 0 && y < (by - 1) * csy + p.bsize_y - p.halo_y;
          const std::int64_t xbegin = bx * csx - p.halo_x;
          for (std::int64_t off = 0; off < p.bsize_x; off += p.lanes, ++cycle) {
            for (int l = 0; l < p.lanes; ++l) {
              const std::int64_t x = xbegin + off + l;
              Record r;
              r.cycle = cycle;
              const std::int64_t rows = z * p.dimy + y;
              r.elem_index = rows * p.dimx + x;
              r.byte_addr = (p.pad + z * p.plane_pad + rows * p.row_pad +
                             r.elem_index) *
                            p.elem_bytes;
              r.valid = row_ok && x >= 0 && x < p.dimx;
              const bool x_red =
                  bx > 0 && x < (bx - 1) * csx + p.bsize_x - p.halo_x;
              r.redundant = r.valid && (x_red || (row_ok && y_red));
              out.push_back(r);
            }
          }
        }
      }
    }
  }
  return out;
}

struct Totals {
  std::int64_t issued = 0, valid = 0, unique = 0, redundant = 0, skipped = 0;
};

inline Totals tally(const std::vector<Record>& recs) {
  Totals t;
  for (const Record& r : recs) {
    ++t.issued;
    if (r.valid) {
      ++t.valid;
      if (r.redundant) ++t.redundant;
    } else {
      ++t.skipped;
    }
  }
  t.unique = t.valid - t.redundant;
  return t;
}

}  // namespace refgen

#endif
