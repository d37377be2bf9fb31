#pragma once

#include <map>
#include <string>
#include <vector>

#include "twostage/common.hpp"

namespace twostage::io {

/// Shortest round-trip decimal form of a double (%.17g); parsing it back
/// recovers the exact bits, which the determinism and re-aggregation
/// contracts rely on.
std::string format_double(double v);

/// Record CSV: header `t,y,u`, t = 1..N, u blank for autonomous models.
void write_series_csv(const std::string& path, const ObservationSeries& series);
ObservationSeries read_series_csv(const std::string& path);

/// Minimal CSV table writer with deterministic formatting.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  ~CsvWriter();

private:
  std::string path_;
  std::string buf_;
  std::size_t columns_;
  bool closed_ = false;

public:
  void close();  // flush to disk; called by the destructor if needed
};

std::vector<std::vector<std::string>> read_csv(const std::string& path);

/// Flat key = value document grouped into [section] blocks. `#` and `;`
/// start comments; keys are unique per section.
class IniDoc {
public:
  static IniDoc parse_file(const std::string& path);
  static IniDoc parse(const std::string& text, const std::string& origin);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key) const;

private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;
};

}  // namespace twostage::io
