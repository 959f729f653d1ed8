#include "psdda/metrics.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psdda {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const MetricsTable& table, std::ostream& os) {
  for (const auto& note : table.notes) os << "# " << note << '\n';
  os << "t,node,f_err,consensus_err,alpha,bound\n";
  for (const auto& r : table.records) {
    os << r.t << ',' << r.node << ',' << format_double(r.f_err) << ','
       << format_double(r.consensus_err) << ',' << format_double(r.alpha) << ','
       << format_double(r.bound) << '\n';
  }
}

void write_csv(const MetricsTable& table, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(table, os);
}

MetricsTable read_csv(std::istream& is) {
  MetricsTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
      table.notes.push_back(line.substr(start));
      continue;
    }
    if (!header_seen) {
      if (line != "t,node,f_err,consensus_err,alpha,bound") {
        throw std::runtime_error("unexpected CSV header: " + line);
      }
      header_seen = true;
      continue;
    }
    MetricsRecord r;
    const char* p = line.c_str();
    char* end = nullptr;
    r.t = std::strtol(p, &end, 10);
    if (*end != ',') throw std::runtime_error("malformed CSV row: " + line);
    p = end + 1;
    r.node = static_cast<int>(std::strtol(p, &end, 10));
    double* fields[4] = {&r.f_err, &r.consensus_err, &r.alpha, &r.bound};
    for (double* field : fields) {
      if (*end != ',') throw std::runtime_error("malformed CSV row: " + line);
      p = end + 1;
      *field = std::strtod(p, &end);
    }
    if (*end != '\0') throw std::runtime_error("trailing characters in CSV row: " + line);
    table.records.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("CSV has no header line");
  return table;
}

MetricsTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_csv(is);
}

}  // namespace psdda
