#ifndef MEMBENCH_REPORT_HPP
#define MEMBENCH_REPORT_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace membench {

/// One result row of the shared CSV/JSON schema. The column order is stable
/// and rows round-trip losslessly through to_csv/parse_csv.
struct ReportRow {
  std::string backend;  // "sim" | "host"
  std::string pattern;  // "1d" | "1.5d" | "2.5d"
  std::string config;   // "R1W1" etc.
  int vector_lanes = 0;
  std::int64_t halo = 0;
  std::int64_t pad = 0;
  bool interleave = false;
  double freq_mhz = 0.0;
  std::int64_t bsize = 0;
  double gbps_effective = 0.0;
  double gbps_bus = 0.0;
  double eff_expected = 0.0;
  double eff_peak = 0.0;
  std::int64_t bytes_effective = 0;
  std::int64_t kernel_cycles = 0;
  std::string checksum = "-";  // hex digest for host runs, "-" otherwise

  static const char* csv_header();
  std::string to_csv() const;
  static ReportRow parse_csv(std::string_view line);
  std::string to_json() const;
};

}  // namespace membench

#endif
