#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace clusterkit {

// One experiment run, flattened. The CSV columns are a stable interface:
// header text, column order, and number formatting (shortest round-trip via
// to_chars) must not change, or downstream tooling diffs will light up.
struct MetricsRecord {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint32_t node_count = 0;
  double density = 0.0;
  unsigned k = 0;
  unsigned d = 0;
  double p = 0.0;
  std::uint32_t ch_count = 0;
  double avg_cluster_size = 0.0;
  double coverage_pct = 0.0;
  double overlap_degree = 0.0;
  std::uint32_t orphan_count = 0;
  std::uint64_t rounds = 0;
  std::uint64_t msgs_join_req = 0;
  std::uint64_t msgs_join_acc = 0;
  std::uint64_t msgs_join_deny = 0;
  std::uint64_t msgs_attr = 0;
  std::uint64_t msgs_resume = 0;
  std::uint64_t msgs_convergecast = 0;
  std::uint64_t msgs_hello = 0;

  // Diagnostics that ride along but stay out of the CSV.
  std::uint64_t chd_rounds = 0;
  bool quiesced = true;
  double giant_fraction = 0.0;
  std::uint64_t trace_hash = 0;

  std::uint64_t msgs_total() const {
    return msgs_join_req + msgs_join_acc + msgs_join_deny + msgs_attr +
           msgs_resume + msgs_convergecast + msgs_hello;
  }

  bool operator==(const MetricsRecord& o) const {
    return algorithm == o.algorithm && seed == o.seed &&
           node_count == o.node_count && density == o.density && k == o.k &&
           d == o.d && p == o.p && ch_count == o.ch_count &&
           avg_cluster_size == o.avg_cluster_size &&
           coverage_pct == o.coverage_pct &&
           overlap_degree == o.overlap_degree &&
           orphan_count == o.orphan_count && rounds == o.rounds &&
           msgs_join_req == o.msgs_join_req &&
           msgs_join_acc == o.msgs_join_acc &&
           msgs_join_deny == o.msgs_join_deny && msgs_attr == o.msgs_attr &&
           msgs_resume == o.msgs_resume &&
           msgs_convergecast == o.msgs_convergecast &&
           msgs_hello == o.msgs_hello;
  }
};

inline constexpr const char* kCsvHeader =
    "algorithm,seed,node_count,density,k,d,p,ch_count,avg_cluster_size,"
    "coverage_pct,overlap_degree,orphan_count,rounds,msgs_join_req,"
    "msgs_join_acc,msgs_join_deny,msgs_attr,msgs_resume,msgs_convergecast,"
    "msgs_hello";

namespace detail {

template <typename T>
std::string num_str(T v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T num_parse(const std::string& s, const char* what) {
  T out{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(std::string("csv: bad ") + what + ": " + s);
  }
  return out;
}

}  // namespace detail

inline std::string csv_row(const MetricsRecord& r) {
  using detail::num_str;
  std::string out = r.algorithm;
  out += ',' + num_str(r.seed);
  out += ',' + num_str(r.node_count);
  out += ',' + num_str(r.density);
  out += ',' + num_str(r.k);
  out += ',' + num_str(r.d);
  out += ',' + num_str(r.p);
  out += ',' + num_str(r.ch_count);
  out += ',' + num_str(r.avg_cluster_size);
  out += ',' + num_str(r.coverage_pct);
  out += ',' + num_str(r.overlap_degree);
  out += ',' + num_str(r.orphan_count);
  out += ',' + num_str(r.rounds);
  out += ',' + num_str(r.msgs_join_req);
  out += ',' + num_str(r.msgs_join_acc);
  out += ',' + num_str(r.msgs_join_deny);
  out += ',' + num_str(r.msgs_attr);
  out += ',' + num_str(r.msgs_resume);
  out += ',' + num_str(r.msgs_convergecast);
  out += ',' + num_str(r.msgs_hello);
  return out;
}

inline void emit_csv(const std::vector<MetricsRecord>& records,
                     std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& r : records) out << csv_row(r) << "\n";
}

inline void emit_csv_file(const std::vector<MetricsRecord>& records,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv file: " + path);
  emit_csv(records, out);
}

inline std::vector<MetricsRecord> parse_csv(std::istream& in) {
  using detail::num_parse;
  std::vector<MetricsRecord> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 20) throw std::runtime_error("csv: bad row: " + line);
    MetricsRecord r;
    r.algorithm = cols[0];
    r.seed = num_parse<std::uint64_t>(cols[1], "seed");
    r.node_count = num_parse<std::uint32_t>(cols[2], "node_count");
    r.density = num_parse<double>(cols[3], "density");
    r.k = num_parse<unsigned>(cols[4], "k");
    r.d = num_parse<unsigned>(cols[5], "d");
    r.p = num_parse<double>(cols[6], "p");
    r.ch_count = num_parse<std::uint32_t>(cols[7], "ch_count");
    r.avg_cluster_size = num_parse<double>(cols[8], "avg_cluster_size");
    r.coverage_pct = num_parse<double>(cols[9], "coverage_pct");
    r.overlap_degree = num_parse<double>(cols[10], "overlap_degree");
    r.orphan_count = num_parse<std::uint32_t>(cols[11], "orphan_count");
    r.rounds = num_parse<std::uint64_t>(cols[12], "rounds");
    r.msgs_join_req = num_parse<std::uint64_t>(cols[13], "msgs_join_req");
    r.msgs_join_acc = num_parse<std::uint64_t>(cols[14], "msgs_join_acc");
    r.msgs_join_deny = num_parse<std::uint64_t>(cols[15], "msgs_join_deny");
    r.msgs_attr = num_parse<std::uint64_t>(cols[16], "msgs_attr");
    r.msgs_resume = num_parse<std::uint64_t>(cols[17], "msgs_resume");
    r.msgs_convergecast = num_parse<std::uint64_t>(cols[18], "msgs_convergecast");
    r.msgs_hello = num_parse<std::uint64_t>(cols[19], "msgs_hello");
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<MetricsRecord> parse_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open csv file: " + path);
  return parse_csv(in);
}

}  // namespace clusterkit
