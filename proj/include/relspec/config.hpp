#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relspec/asymptotics.hpp"
#include "relspec/models.hpp"
#include "relspec/quadrature.hpp"

namespace relspec {

// Ordered ini-style sections of ordered key/value lines. serialize() emits a
// canonical layout; serialize(parse(x)) is a fixed point of the two.
class Config {
public:
  using Section = std::vector<std::pair<std::string, std::string>>;

  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  const std::vector<std::pair<std::string, Section>>& sections() const { return sections_; }

  std::string serialize() const;
  static Config parse(const std::string& text);

private:
  std::vector<std::pair<std::string, Section>> sections_;
};

struct TGridSpec {
  double min = 1e-3;
  double max = 1e2;
  int count = 40;
  std::string spacing = "log";  // log or linear

  std::vector<double> points() const;
};

struct QuadratureSpec {
  QuadratureKind kind = QuadratureKind::gauss_legendre;
  int nodes = 64;
};

struct ExpansionSpec {
  int n_dim = 1;
  int terms = 4;
  double window_min = 1e-3;
  double window_max = 1e-1;
  ExponentStep step = ExponentStep::automatic;
};

struct ZetaSpec {
  double split_point = 1.0;
  std::vector<double> s_list;
  double fd_step = 1e-4;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "record"};
};

// Typed view of a parsed config, validated field by field.
struct ExperimentConfig {
  ModelSpec model;
  TGridSpec t_grid;
  QuadratureSpec quadrature;
  ExpansionSpec expansion;
  ZetaSpec zeta;
  OutputSpec outputs;
  std::uint64_t seed = 1;

  static ExperimentConfig from_config(const Config& config);
  Config to_config() const;
};

// Space-separated doubles; throws validation_error on junk.
std::vector<double> parse_number_list(const std::string& text);
std::string format_number_list(const std::vector<double>& values);

// Potential generators for the 1d models: "zero", "values v1 v2 ...",
// "gaussian amp center width", "step amp lo hi" (absolute coordinates),
// sampled at x_i = (i+1) dx.
std::vector<double> expand_potential(const std::string& shorthand, int n, double dx);

}  // namespace relspec
