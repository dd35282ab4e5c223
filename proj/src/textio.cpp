#include "relspec/textio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "relspec/errors.hpp"

namespace relspec {
namespace {

const char kRecordHeader[] = "# relspec record v1";

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& key) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw io_error("record value for '" + key + "' is not a number: " + text);
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void Record::set_string(const std::string& key, const std::string& value) {
  if (key.empty() || key.find_first_of("=\n") != std::string::npos)
    throw io_error("bad record key: " + key);
  if (value.find('\n') != std::string::npos)
    throw io_error("record value for '" + key + "' must be one line");
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void Record::set_int(const std::string& key, long long value) {
  set_string(key, std::to_string(value));
}

void Record::set_double(const std::string& key, double value) {
  set_string(key, format_double(value));
}

void Record::set_double_list(const std::string& key, const std::vector<double>& values) {
  std::string joined = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ", ";
    joined += format_double(values[i]);
  }
  joined += "]";
  set_string(key, joined);
}

bool Record::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& Record::get_string(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw io_error("record has no key '" + key + "'");
}

long long Record::get_int(const std::string& key) const {
  const std::string& text = get_string(key);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw io_error("record value for '" + key + "' is not an integer: " + text);
  return v;
}

double Record::get_double(const std::string& key) const {
  return parse_double(get_string(key), key);
}

std::vector<double> Record::get_double_list(const std::string& key) const {
  const std::string& text = get_string(key);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw io_error("record value for '" + key + "' is not a list: " + text);
  std::vector<double> out;
  std::string inner = text.substr(1, text.size() - 2);
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, key));
  }
  return out;
}

std::string Record::serialize() const {
  std::string out = kRecordHeader;
  out += '\n';
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

Record Record::parse(const std::string& text) {
  Record record;
  std::stringstream ss(text);
  std::string line;
  bool saw_header = false;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == kRecordHeader) saw_header = true;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw io_error("record line has no '=': " + line);
    record.set_string(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (!saw_header) throw io_error("missing record header line");
  return record;
}

std::string series_csv(const HeatTraceSeries& series) {
  std::string out = "t,value,stderr\n";
  for (std::size_t i = 0; i < series.t_grid.size(); ++i) {
    out += format_double(series.t_grid[i]);
    out += ',';
    out += format_double(series.values[i]);
    out += ',';
    out += format_double(i < series.error_estimates.size() ? series.error_estimates[i] : 0.0);
    out += '\n';
  }
  return out;
}

std::string expansion_csv(const AsymptoticExpansion& expansion) {
  std::string out;
  out += "# fit_window = [" + format_double(expansion.t_min) + ", " +
         format_double(expansion.t_max) + "]\n";
  out += "# condition_number = " + format_double(expansion.condition_number) + "\n";
  out += "# residual_rms = " + format_double(expansion.residual_rms) + "\n";
  out += "order,coefficient,stderr\n";
  for (std::size_t j = 0; j < expansion.exponents.size(); ++j) {
    out += format_double(expansion.exponents[j]);
    out += ',';
    out += format_double(expansion.coefficients[j]);
    out += ',';
    out += format_double(j < expansion.stderrs.size() ? expansion.stderrs[j] : 0.0);
    out += '\n';
  }
  return out;
}

std::string matrix_triplets_csv(const Eigen::MatrixXd& m) {
  std::string out = "i,j,value\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) {
        out += std::to_string(i);
        out += ',';
        out += std::to_string(j);
        out += ',';
        out += format_double(m(i, j));
        out += '\n';
      }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("read failed: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace relspec
