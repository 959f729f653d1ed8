#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace psdda {

// One sampled observation: header `t,node,f_err,consensus_err,alpha,bound`.
struct MetricsRecord {
  long t = 0;
  int node = 0;
  double f_err = 0.0;
  double consensus_err = 0.0;
  double alpha = 0.0;
  double bound = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct MetricsTable {
  std::vector<std::string> notes;  // emitted as '#'-prefixed lines before the header
  std::vector<MetricsRecord> records;
};

// Doubles are written with 17 significant digits so a read back is exact.
void write_csv(const MetricsTable& table, std::ostream& os);
void write_csv(const MetricsTable& table, const std::filesystem::path& path);
MetricsTable read_csv(std::istream& is);
MetricsTable read_csv(const std::filesystem::path& path);

std::string format_double(double v);  // shortest round-trip-exact decimal

}  // namespace psdda
