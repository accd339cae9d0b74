#include "membench/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace membench {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

std::int64_t parse_i64(std::string_view s) {
  return std::strtoll(std::string(s).c_str(), nullptr, 10);
}

double parse_f64(std::string_view s) {
  return std::strtod(std::string(s).c_str(), nullptr);
}

}  // namespace

const char* ReportRow::csv_header() {
  return "backend,pattern,config,vector,halo,pad,interleave,freq_mhz,bsize,"
         "gbps_effective,gbps_bus,eff_expected,eff_peak,bytes_effective,"
         "kernel_cycles,checksum";
}

std::string ReportRow::to_csv() const {
  std::string s;
  s.reserve(196);
  s += backend;
  s += ',';
  s += pattern;
  s += ',';
  s += config;
  s += ',';
  s += std::to_string(vector_lanes);
  s += ',';
  s += std::to_string(halo);
  s += ',';
  s += std::to_string(pad);
  s += ',';
  s += interleave ? '1' : '0';
  s += ',';
  s += fmt_double(freq_mhz);
  s += ',';
  s += std::to_string(bsize);
  s += ',';
  s += fmt_double(gbps_effective);
  s += ',';
  s += fmt_double(gbps_bus);
  s += ',';
  s += fmt_double(eff_expected);
  s += ',';
  s += fmt_double(eff_peak);
  s += ',';
  s += std::to_string(bytes_effective);
  s += ',';
  s += std::to_string(kernel_cycles);
  s += ',';
  s += checksum;
  return s;
}

ReportRow ReportRow::parse_csv(std::string_view line) {
  const auto f = split_fields(line);
  if (f.size() != 16) {
    throw std::invalid_argument("expected 16 CSV fields, got " +
                                std::to_string(f.size()));
  }
  ReportRow r;
  r.backend = std::string(f[0]);
  r.pattern = std::string(f[1]);
  r.config = std::string(f[2]);
  r.vector_lanes = static_cast<int>(parse_i64(f[3]));
  r.halo = parse_i64(f[4]);
  r.pad = parse_i64(f[5]);
  r.interleave = f[6] == "1";
  r.freq_mhz = parse_f64(f[7]);
  r.bsize = parse_i64(f[8]);
  r.gbps_effective = parse_f64(f[9]);
  r.gbps_bus = parse_f64(f[10]);
  r.eff_expected = parse_f64(f[11]);
  r.eff_peak = parse_f64(f[12]);
  r.bytes_effective = parse_i64(f[13]);
  r.kernel_cycles = parse_i64(f[14]);
  r.checksum = std::string(f[15]);
  return r;
}

std::string ReportRow::to_json() const {
  nlohmann::json j{{"backend", backend},
                   {"pattern", pattern},
                   {"config", config},
                   {"vector", vector_lanes},
                   {"halo", halo},
                   {"pad", pad},
                   {"interleave", interleave},
                   {"freq_mhz", freq_mhz},
                   {"bsize", bsize},
                   {"gbps_effective", gbps_effective},
                   {"gbps_bus", gbps_bus},
                   {"eff_expected", eff_expected},
                   {"eff_peak", eff_peak},
                   {"bytes_effective", bytes_effective},
                   {"kernel_cycles", kernel_cycles},
                   {"checksum", checksum}};
  return j.dump();
}

}  // namespace membench
