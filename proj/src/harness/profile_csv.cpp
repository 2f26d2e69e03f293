#include "avgbin/harness/profile_csv.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "avgbin/format.hpp"

namespace avgbin::harness {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::runtime_error("bad real in CSV: " + s);
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::runtime_error("bad integer in CSV: " + s);
  return v;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() != '#') return true;
  }
  return false;
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::exact_tv:
      return "exact_tv";
    case ProfileKind::upper:
      return "upper";
    case ProfileKind::lower:
      return "lower";
    case ProfileKind::wasserstein:
      return "wasserstein";
  }
  return "?";
}

ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "exact_tv") return ProfileKind::exact_tv;
  if (s == "upper") return ProfileKind::upper;
  if (s == "lower") return ProfileKind::lower;
  if (s == "wasserstein") return ProfileKind::wasserstein;
  throw std::runtime_error("unknown profile kind: " + s);
}

std::string generated_line() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream out;
  out << "# generated " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRecord>& rows, bool timestamp) {
  if (timestamp) out << generated_line() << '\n';
  out << kProfileHeader << '\n';
  for (const auto& r : rows) {
    if (r.experiment.find(',') != std::string::npos) throw std::invalid_argument("experiment id contains a comma");
    out << r.experiment << ',' << r.k << ',' << format_double(r.t) << ',' << format_double(r.t_normalized) << ','
        << format_double(r.value) << ',' << format_double(r.std_err) << ',' << to_string(r.kind) << '\n';
  }
}

std::vector<ProfileRecord> read_profile_csv(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line) || line != kProfileHeader) throw std::runtime_error("profile CSV: bad header");
  std::vector<ProfileRecord> rows;
  while (next_data_line(in, line)) {
    const auto c = split(line);
    if (c.size() != 7) throw std::runtime_error("profile CSV: expected 7 columns in: " + line);
    rows.push_back({c[0], parse_count(c[1]), parse_real(c[2]), parse_real(c[3]), parse_real(c[4]), parse_real(c[5]),
                    parse_profile_kind(c[6])});
  }
  return rows;
}

void write_table_csv(std::ostream& out, const Table& table, bool timestamp) {
  if (timestamp) out << generated_line() << '\n';
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\n") != std::string::npos)
        throw std::invalid_argument("table cell contains a separator: " + cells[i]);
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw std::invalid_argument("table row width differs from header");
    emit(r);
  }
}

Table read_table_csv(std::istream& in) {
  Table t;
  std::string line;
  if (!next_data_line(in, line)) throw std::runtime_error("table CSV: missing header");
  t.header = split(line);
  while (next_data_line(in, line)) {
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw std::runtime_error("table CSV: ragged row: " + line);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace avgbin::harness
