#include "twostage/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace twostage::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_series_csv(const std::string& path, const ObservationSeries& series) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "t,y,u\n";
  for (std::size_t k = 0; k < series.length(); ++k) {
    f << (k + 1) << ',' << format_double(series.outputs[k]) << ',';
    if (series.has_inputs()) f << format_double(series.inputs[k]);
    f << '\n';
  }
  if (!f) throw IoError("failed writing: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& s, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw IoError("bad numeric field '" + s + "' in " + context);
  return v;
}

}  // namespace

ObservationSeries read_series_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty record file: " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "t" || header[1] != "y")
    throw IoError("record file must start with header t,y,u: " + path);
  const bool has_u_col = header.size() >= 3 && header[2] == "u";

  ObservationSeries s;
  bool any_input = false;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() < 2) throw IoError("short row in " + path);
    s.outputs.push_back(parse_double(cells[1], path));
    if (has_u_col && cells.size() >= 3 && !cells[2].empty()) {
      s.inputs.push_back(parse_double(cells[2], path));
      any_input = true;
    } else {
      s.inputs.push_back(0.0);
    }
  }
  if (!any_input) s.inputs.clear();
  if (any_input && s.inputs.size() != s.outputs.size())
    throw IoError("record file mixes blank and present inputs: " + path);
  s.validate();
  return s;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw IoError("csv row width mismatch for " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream f(path_, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path_);
  f << buf_;
  if (!f) throw IoError("failed writing: " + path_);
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
    // destructor must not throw; an explicit close() reports the failure
  }
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

IniDoc IniDoc::parse_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

IniDoc IniDoc::parse(const std::string& text, const std::string& origin) {
  IniDoc doc;
  doc.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty section name");
      doc.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key outside any [section]");
    auto& sec = doc.sections_[section];
    if (sec.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    sec[key] = val;
  }
  return doc;
}

bool IniDoc::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool IniDoc::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string IniDoc::get(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end())
    throw ConfigError(origin_ + ": missing section [" + section + "]");
  const auto kit = it->second.find(key);
  if (kit == it->second.end())
    throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section +
                      "]");
  return kit->second;
}

std::string IniDoc::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double IniDoc::get_double(const std::string& section,
                          const std::string& key) const {
  const std::string s = get(section, key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not a number: " + s);
  return v;
}

long IniDoc::get_int(const std::string& section, const std::string& key) const {
  const double v = get_double(section, key);
  const long iv = static_cast<long>(v);
  if (static_cast<double>(iv) != v)
    throw ConfigError(origin_ + ": key '" + key + "' in [" + section +
                      "] is not an integer");
  return iv;
}

}  // namespace twostage::io
