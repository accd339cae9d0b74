#include "membench/analysis.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "membench/memmodel.hpp"

namespace membench {

namespace {

bool is_pow2(std::int64_t v) {
  return v > 0 && std::has_single_bit(static_cast<std::uint64_t>(v));
}

std::int64_t pow2_part(std::int64_t v) {
  return v == 0 ? 0 : (v & -v);
}

}  // namespace

double expected_throughput_gbps(int num_arrays, int lanes, double f_mhz,
                                int elem_bytes) {
  if (num_arrays < 1 || lanes < 1 || elem_bytes < 1 || f_mhz <= 0) {
    throw std::invalid_argument("expected_throughput: all inputs must be positive");
  }
  return num_arrays * static_cast<double>(lanes) * f_mhz * 1e6 * elem_bytes /
         1e9;
}

double efficiency(double measured_gbps, double expected_gbps,
                  double peak_gbps) {
  if (measured_gbps < 0 || expected_gbps <= 0 || peak_gbps <= 0) {
    throw std::invalid_argument("efficiency: bad inputs");
  }
  return measured_gbps / std::min(expected_gbps, peak_gbps);
}

std::int64_t alignment_requirement_bytes(int lanes, int elem_bytes,
                                         std::int64_t bus_word_bytes) {
  if (lanes < 1 || elem_bytes < 1 || bus_word_bytes < 1) {
    throw std::invalid_argument("alignment_requirement: bad inputs");
  }
  return std::min(static_cast<std::int64_t>(lanes) * elem_bytes,
                  bus_word_bytes);
}

AlignmentClass halo_class(std::int64_t halo, int elem_bytes) {
  if (halo < 0) throw std::invalid_argument("halo must be >= 0");
  if (halo == 0) return AlignmentClass{std::nullopt};
  return AlignmentClass{pow2_part(halo) * elem_bytes};
}

const char* to_string(PredictedClass cls) {
  switch (cls) {
    case PredictedClass::full: return "full";
    case PredictedClass::partial: return "partial";
    default: return "none";
  }
}

std::string AdvisorReport::to_json() const {
  nlohmann::json j;
  j["pad"] = pad;
  j["class"] = to_string(predicted_class);
  j["rule"] = rule;
  if (merge) {
    j["merge"] = {{"read_struct_bytes", merge->read_struct_bytes},
                  {"write_struct_bytes", merge->write_struct_bytes}};
  } else {
    j["merge"] = nullptr;
  }
  if (recommended_row_pad > 0) j["row_pad"] = recommended_row_pad;
  if (recommended_plane_pad > 0) j["plane_pad"] = recommended_plane_pad;
  if (alignment.granularity_bytes) {
    j["alignment_bytes"] = *alignment.granularity_bytes;
  }
  j["narrative"] = narrative;
  return j.dump();
}

AdvisorReport padding_advice(std::int64_t halo, int lanes, int elem_bytes,
                             std::int64_t csize) {
  if (halo < 0 || lanes < 1 || elem_bytes < 1 || csize < 1) {
    throw std::invalid_argument("padding_advice: bad inputs");
  }
  AdvisorReport r;
  r.alignment = halo_class(halo, elem_bytes);
  const std::int64_t residue = halo % lanes;
  const bool csize_aligned = csize % lanes == 0;
  if (residue == 0) {
    r.pad = 0;
    r.rule = "halo-multiple-of-vector";
    r.predicted_class = PredictedClass::full;
    r.narrative = "halo is a multiple of the vector size; block starts are "
                  "aligned without padding";
  } else if (lanes % 2 == 0 && residue == lanes / 2) {
    r.pad = lanes / 2;
    r.rule = "half-vector-pad";
    r.predicted_class = PredictedClass::full;
    r.narrative = "halo equals half the vector size modulo the vector; a "
                  "half-vector leading pad aligns every block start";
  } else {
    r.pad = residue;
    r.rule = "pad-equal-halo-residue";
    r.predicted_class = PredictedClass::partial;
    r.narrative = "full alignment is unreachable for this halo; padding by the "
                  "halo residue aligns the first block and some successors";
  }
  if (r.predicted_class == PredictedClass::full && !csize_aligned) {
    // Distance between consecutive block starts breaks the alignment again.
    r.predicted_class = PredictedClass::partial;
    r.rule += "+csize-unaligned";
    r.narrative += "; csize is not a multiple of the vector size, so later "
                   "blocks drift off alignment";
  }
  return r;
}

AdvisorReport merge_advice(const ArrayConfig& arrays, int elem_bytes) {
  arrays.validate();
  if (elem_bytes < 1) throw std::invalid_argument("elem_bytes must be >= 1");
  AdvisorReport r;
  auto mergeable = [](int n) { return n == 0 || is_pow2(n); };
  if (arrays.reads <= 1 && arrays.writes <= 1) {
    r.rule = "already-minimal";
    r.predicted_class = PredictedClass::full;
    r.merge = MergePlan{arrays.reads * elem_bytes, arrays.writes * elem_bytes};
    r.narrative = "configuration already uses at most one port per direction";
    return r;
  }
  if (mergeable(arrays.reads) && mergeable(arrays.writes)) {
    r.rule = "aos-merge";
    r.predicted_class = PredictedClass::full;
    r.merge = MergePlan{arrays.reads * elem_bytes, arrays.writes * elem_bytes};
    r.narrative = "merge read arrays into one array of structs and write "
                  "arrays into another, yielding " +
                  std::string("R") + (arrays.reads ? "1" : "0") + "W" +
                  (arrays.writes ? "1" : "0") +
                  " with power-of-two struct sizes";
    return r;
  }
  r.rule = "no-straightforward-merge";
  r.predicted_class = PredictedClass::none;
  r.narrative = "read or write array count is not a power of two; a merged "
                "struct would waste bus bytes through masking";
  return r;
}

AdvisorReport predict_stream_class(const AccessStream& stream,
                                   const MemConfig& mem) {
  const VectorSpec& vec = stream.vector();
  const PaddingSpec& pad = stream.padding();
  const std::int64_t r_elems =
      alignment_requirement_bytes(vec.lanes, vec.elem_bytes,
                                  mem.bus_word_bytes()) /
      vec.elem_bytes;

  // Access-start addresses (in elements, after padding) form
  // base + lattice(generators); alignment follows from gcds.
  std::int64_t base = 0;
  std::vector<std::int64_t> gens;
  gens.push_back(vec.lanes);
  AdvisorReport r;

  if (auto* s = std::get_if<detail::Shape1D>(&stream.shape())) {
    base = pad.pad - s->block.halo;
    gens.push_back(s->block.csize);
  } else if (auto* s = std::get_if<detail::Shape15D>(&stream.shape())) {
    base = pad.pad - s->block.halo;
    gens.push_back(s->block.csize);
    gens.push_back(s->dimx + pad.row_pad);
    if ((s->dimx + pad.row_pad) % vec.lanes != 0) {
      r.recommended_row_pad =
          (vec.lanes - (s->dimx % vec.lanes)) % vec.lanes;
    }
  } else {
    const auto& s25 = std::get<detail::Shape25D>(stream.shape());
    base = pad.pad - s25.bx.halo;
    gens.push_back(s25.bx.csize);
    const std::int64_t row_stride = s25.dimx + pad.row_pad;
    gens.push_back(row_stride);  // y and z marches both step whole rows
    gens.push_back(s25.dimy * row_stride + pad.plane_pad);
    if (row_stride % vec.lanes != 0) {
      r.recommended_row_pad =
          (vec.lanes - (s25.dimx % vec.lanes)) % vec.lanes;
    }
    const std::int64_t plane_stride = s25.dimy * row_stride + pad.plane_pad;
    if (plane_stride % vec.lanes != 0) {
      r.recommended_plane_pad =
          (vec.lanes - (plane_stride - pad.plane_pad) % vec.lanes) % vec.lanes;
    }
  }

  std::int64_t lattice = 0;
  for (std::int64_t g : gens) lattice = std::gcd(lattice, g);
  const std::int64_t all = std::gcd(std::abs(base), lattice);

  r.alignment = all == 0 ? AlignmentClass{std::nullopt}
                         : AlignmentClass{pow2_part(all) * vec.elem_bytes};

  const bool full =
      (base % r_elems == 0) &&
      std::all_of(gens.begin(), gens.end(),
                  [&](std::int64_t g) { return g % r_elems == 0; });
  if (full) {
    r.predicted_class = PredictedClass::full;
    r.rule = "stream-full-aligned";
    r.narrative = "every access start is aligned to the vector requirement";
  } else if (base % std::gcd(r_elems, lattice) == 0) {
    r.predicted_class = PredictedClass::partial;
    r.rule = "stream-partially-aligned";
    r.narrative = "a subset of block starts lands on aligned addresses";
  } else {
    r.predicted_class = PredictedClass::none;
    r.rule = "stream-unaligned";
    r.narrative = "no access start can reach the required alignment";
  }
  if (r.recommended_row_pad > 0) {
    r.narrative += "; row padding would restore row-start alignment";
  }
  r.pad = pad.pad;
  return r;
}

}  // namespace membench
