#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relspec/asymptotics.hpp"
#include "relspec/heat.hpp"

namespace relspec {

// Printed with enough digits that parsing returns the identical double.
std::string format_double(double x);

// Flat ordered key/value store behind the .record files. Values are stored as
// text; the typed accessors parse on demand. serialize() and parse() are
// inverse up to the canonical layout, and doubles survive unchanged.
class Record {
public:
  void set_string(const std::string& key, const std::string& value);
  void set_int(const std::string& key, long long value);
  void set_double(const std::string& key, double value);
  void set_double_list(const std::string& key, const std::vector<double>& values);

  bool has(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;
  static Record parse(const std::string& text);

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string series_csv(const HeatTraceSeries& series);
std::string expansion_csv(const AsymptoticExpansion& expansion);
std::string matrix_triplets_csv(const Eigen::MatrixXd& m);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace relspec
