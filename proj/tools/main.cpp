#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "anchor_checks.hpp"
#include "membench/analysis.hpp"
#include "membench/hostbench.hpp"
#include "membench/memmodel.hpp"
#include "membench/patterns.hpp"
#include "membench/report.hpp"
#include "svg.hpp"

using namespace membench;
using nlohmann::json;

namespace {

struct Opts {
  std::string backend = "sim";
  std::string pattern = "1d";
  std::string config = "R1W1";
  int vector_lanes = 16;
  std::int64_t halo = 0, pad = 0, row_pad = 0, plane_pad = 0;
  std::int64_t bsize = 1024, bsize_y = 0, halo_y = -1;
  std::int64_t size_bytes = 64ll << 20;
  std::int64_t dimx = 0, dimy = 0, dimz = 0;
  bool interleave = true;
  std::string bank_map;
  double freq = 266.666;

  int banks = 2, bank_bits = 64, ctrl_div = 8, turnaround = 2, qdepth = 8;
  double rate_mts = 2133.333;
  std::int64_t granule = 1024;

  int reps = 3, warmup = 1, threads = 1;
  bool pin_core = false, streaming_stores = false;
};

void add_common_flags(CLI::App* cmd, Opts& o) {
  cmd->add_option("--backend", o.backend, "sim | host")
      ->check(CLI::IsMember({"sim", "host"}));
  cmd->add_option("--pattern", o.pattern, "1d | 15d | 25d")
      ->check(CLI::IsMember({"1d", "15d", "25d"}));
  cmd->add_option("--config", o.config, "array configuration, e.g. R2W1");
  cmd->add_option("--vector", o.vector_lanes, "vector lanes per access")
      ->check(CLI::Range(1, 64));
  cmd->add_option("--halo", o.halo, "block overlap on each side, elements")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--pad", o.pad, "leading pad, elements")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--row-pad", o.row_pad, "per-row pad, elements (1.5d/2.5d)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--plane-pad", o.plane_pad, "per-plane pad, elements (2.5d)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--bsize", o.bsize, "block size in elements");
  cmd->add_option("--bsize-y", o.bsize_y, "2.5d y block size (default --bsize)");
  cmd->add_option("--halo-y", o.halo_y, "2.5d y halo (default --halo)");
  cmd->add_option("--size-bytes", o.size_bytes,
                  "target array footprint for 1d runs");
  cmd->add_option("--dimx", o.dimx, "grid x extent, elements");
  cmd->add_option("--dimy", o.dimy, "grid y extent, rows");
  cmd->add_option("--dimz", o.dimz, "grid z extent, planes");
  cmd->add_flag("--interleave,!--no-interleave", o.interleave,
                "address-interleaved banking (default on)");
  cmd->add_option("--bank-map", o.bank_map,
                  "manual bank per port, e.g. 0,1 (round robin if empty)");
  cmd->add_option("--freq", o.freq, "kernel frequency, MHz")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--banks", o.banks, "memory bank count");
  cmd->add_option("--bank-bits", o.bank_bits, "data bits per bank");
  cmd->add_option("--rate-mts", o.rate_mts, "transfer rate, MT/s");
  cmd->add_option("--ctrl-div", o.ctrl_div, "controller clock divisor");
  cmd->add_option("--granule", o.granule, "interleave granule, bytes");
  cmd->add_option("--turnaround", o.turnaround,
                  "read/write turnaround, controller cycles");
  cmd->add_option("--queue-depth", o.qdepth, "per-port transaction queue depth");
  cmd->add_option("--reps", o.reps, "host repetitions");
  cmd->add_option("--warmup", o.warmup, "host warmup repetitions");
  cmd->add_option("--threads", o.threads, "host worker threads");
  cmd->add_flag("--pin-core", o.pin_core, "pin the host run to core 0");
  cmd->add_flag("--streaming-stores", o.streaming_stores,
                "use non-temporal stores on the host");
}

MemConfig mem_of(const Opts& o) {
  MemConfig cfg;
  cfg.num_banks = o.banks;
  cfg.bank_data_bits = o.bank_bits;
  cfg.transfer_rate_mts = o.rate_mts;
  cfg.ctrl_divisor = o.ctrl_div;
  cfg.interleave = o.interleave;
  cfg.interleave_granule_bytes = o.granule;
  cfg.rw_turnaround_ctrl_cycles = o.turnaround;
  cfg.port_queue_depth = o.qdepth;
  return cfg;
}

BankAssignment banks_of(const Opts& o, const ArrayConfig& arrays) {
  if (o.bank_map.empty()) {
    return BankAssignment::round_robin(arrays, o.banks);
  }
  BankAssignment a;
  std::stringstream ss(o.bank_map);
  std::string tok;
  while (std::getline(ss, tok, ',')) a.bank_of_port.push_back(std::stoi(tok));
  if (static_cast<int>(a.bank_of_port.size()) != arrays.ports()) {
    throw std::invalid_argument("--bank-map needs one entry per port (" +
                                std::to_string(arrays.ports()) + ")");
  }
  return a;
}

AccessStream stream_of(const Opts& o) {
  const ArrayConfig arrays = ArrayConfig::parse(o.config);
  const VectorSpec vec{o.vector_lanes, 4};
  const Block1D bx = block_geometry(o.bsize, o.halo);
  const PaddingSpec pad{o.pad, o.row_pad, o.plane_pad};
  if (o.pattern == "1d") {
    return gen_1d(fit_array_size(o.size_bytes, bx.csize, 4), bx, pad, vec,
                  arrays);
  }
  if (o.pattern == "15d") {
    GridSpec grid;
    grid.dimx = o.dimx > 0 ? o.dimx : bx.csize * 8;
    grid.dimy = o.dimy > 0 ? o.dimy : 256;
    grid.block_x = bx;
    return gen_15d(grid, pad, vec, arrays);
  }
  const Block1D by = block_geometry(o.bsize_y > 0 ? o.bsize_y : o.bsize,
                                    o.halo_y >= 0 ? o.halo_y : o.halo);
  GridSpec grid;
  grid.dimx = o.dimx > 0 ? o.dimx : bx.csize * 4;
  grid.dimy = o.dimy > 0 ? o.dimy : by.csize * 4;
  grid.dimz = o.dimz > 0 ? o.dimz : 4;
  grid.block_x = bx;
  grid.block_y = by;
  return gen_25d(grid, pad, vec, arrays);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

ReportRow execute(const Opts& o) {
  const AccessStream stream = stream_of(o);
  ReportRow row;
  row.backend = o.backend;
  row.pattern = stream.pattern_name();
  row.config = stream.arrays().name();
  row.vector_lanes = o.vector_lanes;
  row.halo = o.halo;
  row.pad = o.pad;
  row.interleave = o.interleave;
  row.freq_mhz = o.freq;
  row.bsize = o.bsize;
  if (o.backend == "sim") {
    const MemConfig cfg = mem_of(o);
    SimResult r;
    if (cfg.interleave) {
      r = simulate(stream, {o.freq}, cfg);
    } else {
      const BankAssignment banks = banks_of(o, stream.arrays());
      r = simulate(stream, {o.freq}, cfg, &banks);
    }
    row.gbps_effective = r.gbps_effective;
    row.gbps_bus = r.gbps_bus;
    row.eff_expected = r.efficiency_vs_expected;
    row.eff_peak = r.efficiency_vs_peak;
    row.bytes_effective = r.effective_bytes;
    row.kernel_cycles = r.kernel_cycles;
  } else {
    HostRunSpec spec;
    spec.repetitions = o.reps;
    spec.warmup = o.warmup;
    spec.threads = o.threads;
    spec.pin_core = o.pin_core;
    spec.streaming_stores = o.streaming_stores;
    const HostResult r = run_host(stream, spec);
    row.gbps_effective = r.best_gbps;
    row.gbps_bus = r.median_gbps;
    row.bytes_effective = r.effective_bytes_per_rep;
    row.kernel_cycles = stream.total_cycles();
    row.checksum = hex64(r.checksum);
  }
  return row;
}

int cmd_run(const Opts& o, bool as_json, bool no_header) {
  const ReportRow row = execute(o);
  if (as_json) {
    std::cout << row.to_json() << "\n";
  } else {
    if (!no_header) std::cout << ReportRow::csv_header() << "\n";
    std::cout << row.to_csv() << "\n";
  }
  return 0;
}

int cmd_trace(const Opts& o, const std::string& out, std::int64_t max_cycles) {
  const AccessStream stream = stream_of(o);
  if (out.empty() || out == "-") {
    write_trace(stream, std::cout, max_cycles);
    return 0;
  }
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out);
  write_trace(stream, os, max_cycles);
  return 0;
}

void print_advice(const AdvisorReport& r) {
  std::cout << r.narrative << "\n";
  std::cout << r.to_json() << "\n";
}

int cmd_advise(std::int64_t halo, int lanes, int elem_bytes, std::int64_t bsize,
               int reads, int writes) {
  bool printed = false;
  if (halo >= 0) {
    const Block1D block = block_geometry(bsize, halo);
    print_advice(padding_advice(halo, lanes, elem_bytes, block.csize));
    printed = true;
  }
  if (reads >= 0 || writes >= 0) {
    print_advice(merge_advice({std::max(reads, 0), std::max(writes, 0)},
                              elem_bytes));
    printed = true;
  }
  if (!printed) {
    throw std::invalid_argument(
        "advise needs --halo and/or --reads/--writes");
  }
  return 0;
}

int cmd_check(const std::string& anchors_path) {
  std::ifstream is(anchors_path);
  if (!is) throw std::runtime_error("cannot open " + anchors_path);
  json doc = json::parse(is);

  struct Anchor {
    double value;
    double tolerance;
  };
  std::map<std::string, Anchor> anchors;
  for (const json& a : doc.at("anchors")) {
    anchors[a.at("name")] = {a.at("value"), a.at("tolerance")};
  }

  bool all_pass = true;
  std::map<std::string, bool> seen;
  for (const AnchorCheck& check : anchor_checks()) {
    auto it = anchors.find(check.name);
    if (it == anchors.end()) {
      std::cout << "[MISSING] " << check.name << "\n";
      all_pass = false;
      continue;
    }
    seen[check.name] = true;
    const double measured = check.measure();
    const bool pass = anchor_passes(check.cmp, measured, it->second.value,
                                    it->second.tolerance);
    std::printf("[%s] %s measured=%.6g expected=%.6g tol=%.3g\n",
                pass ? "PASS" : "FAIL", check.name.c_str(), measured,
                it->second.value, it->second.tolerance);
    all_pass = all_pass && pass;
  }
  for (const auto& [name, anchor] : anchors) {
    if (!seen.count(name)) {
      std::cout << "[UNKNOWN] " << name << " (no registered check)\n";
      all_pass = false;
    }
  }
  std::cout << (all_pass ? "all checks passed" : "checks failed") << "\n";
  return all_pass ? 0 : 1;
}

Opts opts_from_fixed(const json& fixed) {
  Opts o;
  auto get = [&](const char* key, auto& dst) {
    if (fixed.contains(key)) dst = fixed.at(key).template get<std::decay_t<decltype(dst)>>();
  };
  get("backend", o.backend);
  get("pattern", o.pattern);
  get("config", o.config);
  get("vector", o.vector_lanes);
  get("halo", o.halo);
  get("pad", o.pad);
  get("row_pad", o.row_pad);
  get("plane_pad", o.plane_pad);
  get("bsize", o.bsize);
  get("bsize_y", o.bsize_y);
  get("halo_y", o.halo_y);
  get("size_bytes", o.size_bytes);
  get("dimx", o.dimx);
  get("dimy", o.dimy);
  get("dimz", o.dimz);
  get("interleave", o.interleave);
  get("bank_map", o.bank_map);
  get("freq", o.freq);
  get("banks", o.banks);
  get("bank_bits", o.bank_bits);
  get("rate_mts", o.rate_mts);
  get("ctrl_div", o.ctrl_div);
  get("granule", o.granule);
  get("turnaround", o.turnaround);
  get("queue_depth", o.qdepth);
  get("reps", o.reps);
  get("warmup", o.warmup);
  get("threads", o.threads);
  return o;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path,
              const std::string& svg_path) {
  std::ifstream is(spec_path);
  if (!is) throw std::runtime_error("cannot open " + spec_path);
  json doc = json::parse(is);

  const Opts base = opts_from_fixed(doc.value("fixed", json::object()));
  if (!doc.contains("axes") || !doc.at("axes").is_object() ||
      doc.at("axes").empty()) {
    throw std::invalid_argument("sweep spec needs a non-empty 'axes' object");
  }
  const json& axes = doc.at("axes");
  static const char* kAxisOrder[] = {"vector", "halo",   "pad",
                                     "freq",   "config", "interleave"};
  std::vector<std::pair<std::string, json>> axis_list;
  for (const char* name : kAxisOrder) {
    if (!axes.contains(name)) continue;
    const json& vals = axes.at(name);
    if (!vals.is_array() || vals.empty()) {
      throw std::invalid_argument(std::string("axes.") + name +
                                  " must be a non-empty array");
    }
    axis_list.emplace_back(name, vals);
  }
  for (const auto& [key, unused] : axes.items()) {
    bool known = false;
    for (const char* name : kAxisOrder) known = known || key == name;
    if (!known) {
      throw std::invalid_argument("axes." + key + " is not a sweep axis");
    }
  }

  std::size_t total = 1;
  for (const auto& [name, vals] : axis_list) total *= vals.size();
  std::cerr << "sweep: " << total << " points\n";

  std::vector<ReportRow> rows;
  std::vector<Opts> points;
  std::vector<std::size_t> idx(axis_list.size(), 0);
  for (std::size_t point = 0; point < total; ++point) {
    Opts o = base;
    for (std::size_t a = 0; a < axis_list.size(); ++a) {
      const json& v = axis_list[a].second[idx[a]];
      const std::string& name = axis_list[a].first;
      if (name == "vector") o.vector_lanes = v.get<int>();
      else if (name == "halo") o.halo = v.get<std::int64_t>();
      else if (name == "pad") o.pad = v.get<std::int64_t>();
      else if (name == "freq") o.freq = v.get<double>();
      else if (name == "config") o.config = v.get<std::string>();
      else o.interleave = v.get<bool>();
    }
    points.push_back(o);
    rows.push_back(execute(o));
    for (std::size_t a = axis_list.size(); a-- > 0;) {
      if (++idx[a] < axis_list[a].second.size()) break;
      idx[a] = 0;
    }
  }

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    os = &file;
  }
  *os << ReportRow::csv_header() << "\n";
  for (const ReportRow& row : rows) *os << row.to_csv() << "\n";

  if (!svg_path.empty()) {
    // x axis: first sweep axis; one series per combination of the rest.
    auto x_of = [&](std::size_t i) -> double {
      const std::string& name = axis_list[0].first;
      const Opts& o = points[i];
      if (name == "vector") return o.vector_lanes;
      if (name == "halo") return double(o.halo);
      if (name == "pad") return double(o.pad);
      if (name == "freq") return o.freq;
      return double(i);
    };
    auto label_of = [&](std::size_t i) {
      std::string label;
      const Opts& o = points[i];
      for (std::size_t a = 1; a < axis_list.size(); ++a) {
        const std::string& name = axis_list[a].first;
        if (!label.empty()) label += " ";
        if (name == "vector") label += "V" + std::to_string(o.vector_lanes);
        else if (name == "halo") label += "halo=" + std::to_string(o.halo);
        else if (name == "pad") label += "pad=" + std::to_string(o.pad);
        else if (name == "freq") label += std::to_string(int(o.freq)) + "MHz";
        else if (name == "config") label += o.config;
        else label += o.interleave ? "interleaved" : "manual";
      }
      return label.empty() ? std::string("gbps") : label;
    };
    std::vector<svg::Series> series;
    std::map<std::string, std::size_t> by_label;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string label = label_of(i);
      auto [it, fresh] = by_label.try_emplace(label, series.size());
      if (fresh) series.push_back(svg::Series{label, {}, {}});
      series[it->second].x.push_back(x_of(i));
      series[it->second].y.push_back(rows[i].gbps_effective);
    }
    std::ofstream svg_file(svg_path);
    if (!svg_file) throw std::runtime_error("cannot open " + svg_path);
    svg::write_line_chart(svg_file, doc.value("title", spec_path),
                          axis_list[0].first, "GB/s", series);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memory interface benchmarking lab"};
  app.require_subcommand(1);

  Opts opts;
  int rc = 0;

  CLI::App* run = app.add_subcommand("run", "execute one configuration");
  add_common_flags(run, opts);
  bool as_json = false, no_header = false;
  run->add_flag("--json", as_json, "emit a JSON object instead of CSV");
  run->add_flag("--no-header", no_header, "omit the CSV header line");
  run->callback([&] { rc = cmd_run(opts, as_json, no_header); });

  CLI::App* sweep = app.add_subcommand("sweep", "run a cross-product of points");
  std::string spec_path, out_path = "-", svg_path;
  sweep->add_option("--spec", spec_path, "sweep specification (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "output CSV path, - for stdout");
  sweep->add_option("--svg", svg_path, "also write a line chart");
  sweep->callback([&] { rc = cmd_sweep(spec_path, out_path, svg_path); });

  CLI::App* advise = app.add_subcommand("advise", "padding and merge advice");
  std::int64_t a_halo = -1;
  int a_lanes = 16, a_elem = 4, a_reads = -1, a_writes = -1;
  std::int64_t a_bsize = 1024;
  advise->add_option("--halo", a_halo, "halo size, elements")
      ->check(CLI::NonNegativeNumber);
  advise->add_option("--vector", a_lanes, "vector lanes")
      ->check(CLI::Range(1, 64));
  advise->add_option("--elem-bytes", a_elem, "element size, bytes")
      ->check(CLI::PositiveNumber);
  advise->add_option("--bsize", a_bsize, "block size, elements");
  advise->add_option("--reads", a_reads, "read array count")
      ->check(CLI::NonNegativeNumber);
  advise->add_option("--writes", a_writes, "write array count")
      ->check(CLI::NonNegativeNumber);
  advise->callback(
      [&] { rc = cmd_advise(a_halo, a_lanes, a_elem, a_bsize, a_reads,
                            a_writes); });

  CLI::App* check = app.add_subcommand("check", "compare against the anchor file");
  std::string anchors_path = "data/anchors.json";
  check->add_option("--anchors", anchors_path, "anchor file (JSON)");
  check->callback([&] { rc = cmd_check(anchors_path); });

  CLI::App* trace = app.add_subcommand("trace", "export the access trace");
  add_common_flags(trace, opts);
  std::string trace_out = "-";
  std::int64_t max_cycles = -1;
  trace->add_option("--out", trace_out, "output path, - for stdout");
  trace->add_option("--max-cycles", max_cycles, "cycle limit, -1 for all");
  trace->callback([&] { rc = cmd_trace(opts, trace_out, max_cycles); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "run with --help for usage\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
