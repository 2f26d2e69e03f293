#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace avgbin::harness {

enum class ProfileKind { exact_tv, upper, lower, wasserstein };

std::string to_string(ProfileKind kind);
ProfileKind parse_profile_kind(const std::string& s);

struct ProfileRecord {
  std::string experiment;
  std::size_t k = 0;
  double t = 0.0;
  double t_normalized = 0.0;  // t / t_rel
  double value = 0.0;
  double std_err = 0.0;
  ProfileKind kind = ProfileKind::exact_tv;

  bool operator==(const ProfileRecord&) const = default;
};

// Header "experiment,k,t,t_over_trel,value,stderr,kind". Reals use the
// shortest round-trip form, so write followed by read reproduces the records
// exactly. An optional leading "# generated <UTC time>" line is the only part
// of the file that differs between identical runs.
inline constexpr const char* kProfileHeader = "experiment,k,t,t_over_trel,value,stderr,kind";
void write_profile_csv(std::ostream& out, const std::vector<ProfileRecord>& rows, bool timestamp = true);
std::vector<ProfileRecord> read_profile_csv(std::istream& in);

// Plain table for summaries: header plus string cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void write_table_csv(std::ostream& out, const Table& table, bool timestamp = true);
Table read_table_csv(std::istream& in);

std::string generated_line();
// Writes to path, creating parent directories.
void write_file(const std::string& path, const std::string& contents);

}  // namespace avgbin::harness
