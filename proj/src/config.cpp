#include "relspec/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "relspec/errors.hpp"
#include "relspec/textio.hpp"

namespace relspec {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw validation_error(where + " is not a number: " + text);
  return v;
}

long long to_int(const std::string& text, const std::string& where) {
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw validation_error(where + " is not an integer: " + text);
  return v;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::stringstream ss(text);
  std::string w;
  while (ss >> w) words.push_back(w);
  return words;
}

// named small complexes usable from config files; general complexes go
// through the library interface
HodgeComplexSpec preset_complex(const std::string& name) {
  HodgeComplexSpec spec;
  if (name == "segment") {
    spec.simplices = {{{0}, {1}}, {{0, 1}}};
  } else if (name == "hollow_triangle") {
    spec.simplices = {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}};
  } else if (name == "triangle") {
    spec.simplices = {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}};
  } else {
    throw validation_error("unknown complex preset: " + name);
  }
  return spec;
}

}  // namespace

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  for (auto& [name, entries] : sections_)
    if (name == section) {
      for (auto& [k, v] : entries)
        if (k == key) {
          v = value;
          return;
        }
      entries.emplace_back(key, value);
      return;
    }
  sections_.push_back({section, {{key, value}}});
}

bool Config::has(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_)
    if (name == section)
      for (const auto& [k, v] : entries)
        if (k == key) return true;
  return false;
}

const std::string& Config::get(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_)
    if (name == section)
      for (const auto& [k, v] : entries)
        if (k == key) return v;
  throw validation_error("config is missing [" + section + "] " + key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [name, entries] : sections_) {
    out += '[';
    out += name;
    out += "]\n";
    for (const auto& [k, v] : entries) {
      out += k;
      out += " = ";
      out += v;
      out += '\n';
    }
  }
  return out;
}

Config Config::parse(const std::string& text) {
  Config config;
  std::stringstream ss(text);
  std::string line, section;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw validation_error("unterminated section header: " + line);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw validation_error("empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw validation_error("config line has no '=': " + line);
    if (section.empty()) throw validation_error("config entry before any section: " + line);
    config.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

std::vector<double> TGridSpec::points() const {
  if (!(min > 0.0) || !(max > min)) throw validation_error("t grid needs 0 < min < max");
  if (count < 2) throw validation_error("t grid needs at least 2 points");
  std::vector<double> grid(count);
  if (spacing == "log") {
    const double la = std::log(min), lb = std::log(max);
    for (int i = 0; i < count; ++i) grid[i] = std::exp(la + (lb - la) * i / (count - 1));
  } else if (spacing == "linear") {
    for (int i = 0; i < count; ++i) grid[i] = min + (max - min) * i / (count - 1);
  } else {
    throw validation_error("unknown t grid spacing: " + spacing);
  }
  return grid;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& w : split_words(text)) out.push_back(to_double(w, "list entry"));
  return out;
}

std::string format_number_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> expand_potential(const std::string& shorthand, int n, double dx) {
  if (n < 1) throw validation_error("potential grid size must be positive");
  if (!(dx > 0.0)) throw validation_error("potential mesh width must be positive");
  auto words = split_words(shorthand);
  if (words.empty()) throw validation_error("empty potential description");
  std::vector<double> v(n, 0.0);
  if (words[0] == "zero") {
    if (words.size() != 1) throw validation_error("zero potential takes no arguments");
  } else if (words[0] == "values") {
    if (static_cast<int>(words.size()) - 1 != n)
      throw validation_error("values potential needs one sample per grid point");
    for (int i = 0; i < n; ++i) v[i] = to_double(words[i + 1], "potential sample");
  } else if (words[0] == "gaussian") {
    if (words.size() != 4) throw validation_error("gaussian potential needs amp center width");
    const double amp = to_double(words[1], "amplitude");
    const double center = to_double(words[2], "center");
    const double width = to_double(words[3], "width");
    if (!(width > 0.0)) throw validation_error("gaussian width must be positive");
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * dx;
      v[i] = amp * std::exp(-0.5 * (x - center) * (x - center) / (width * width));
    }
  } else if (words[0] == "step") {
    if (words.size() != 4) throw validation_error("step potential needs amp lo hi");
    const double amp = to_double(words[1], "amplitude");
    const double lo = to_double(words[2], "step lo");
    const double hi = to_double(words[3], "step hi");
    if (!(hi > lo)) throw validation_error("step needs lo < hi");
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * dx;
      if (x >= lo && x <= hi) v[i] = amp;
    }
  } else {
    throw validation_error("unknown potential generator: " + words[0]);
  }
  return v;
}

ExperimentConfig ExperimentConfig::from_config(const Config& config) {
  ExperimentConfig ec;

  ModelSpec& m = ec.model;
  m.kind = model_kind_from_string(config.get("model", "kind"));
  m.label = config.get_or("model", "label", to_string(m.kind));
  m.n = static_cast<int>(to_int(config.get_or("model", "n", "0"), "model n"));
  m.length = to_double(config.get_or("model", "length", "0"), "model length");
  if (config.has("model", "dx"))
    m.dx = to_double(config.get("model", "dx"), "model dx");
  else if (m.length > 0.0 && m.n > 0)
    m.dx = m.length / (m.n + 1);  // Dirichlet mesh: interior points of (0, length)
  m.support_lo = static_cast<int>(to_int(config.get_or("model", "support_lo", "-1"), "support"));
  m.support_hi = static_cast<int>(to_int(config.get_or("model", "support_hi", "-1"), "support"));
  m.eta_scale = to_double(config.get_or("model", "eta_scale", "0.1"), "eta_scale");
  m.seed = static_cast<std::uint64_t>(to_int(config.get_or("model", "seed", "1"), "model seed"));
  if (config.has("model", "potential_base"))
    m.potential_base = expand_potential(config.get("model", "potential_base"), m.n, m.dx);
  if (config.has("model", "potential_perturbed"))
    m.potential_perturbed =
        expand_potential(config.get("model", "potential_perturbed"), m.n, m.dx);
  if (config.has("model", "weights_base"))
    m.weights_base = parse_number_list(config.get("model", "weights_base"));
  if (config.has("model", "weights_perturbed"))
    m.weights_perturbed = parse_number_list(config.get("model", "weights_perturbed"));
  if (config.has("model", "diag_base"))
    m.diag_base = parse_number_list(config.get("model", "diag_base"));
  if (config.has("model", "diag_perturbed"))
    m.diag_perturbed = parse_number_list(config.get("model", "diag_perturbed"));
  if (m.kind == ModelKind::hodge_complex) {
    m.complex = preset_complex(config.get("model", "complex"));
    const int degrees = static_cast<int>(m.complex.simplices.size());
    m.complex.weights_base.resize(degrees);
    m.complex.weights_perturbed.resize(degrees);
    for (int q = 0; q < degrees; ++q) {
      const std::string kb = "weights_base_q" + std::to_string(q);
      const std::string kp = "weights_perturbed_q" + std::to_string(q);
      if (config.has("model", kb))
        m.complex.weights_base[q] = parse_number_list(config.get("model", kb));
      if (config.has("model", kp))
        m.complex.weights_perturbed[q] = parse_number_list(config.get("model", kp));
    }
  }

  ec.t_grid.min = to_double(config.get_or("t_grid", "min", "1e-3"), "t min");
  ec.t_grid.max = to_double(config.get_or("t_grid", "max", "1e2"), "t max");
  ec.t_grid.count = static_cast<int>(to_int(config.get_or("t_grid", "count", "40"), "t count"));
  ec.t_grid.spacing = config.get_or("t_grid", "spacing", "log");
  ec.t_grid.points();  // validates ranges

  ec.quadrature.kind =
      quadrature_kind_from_string(config.get_or("quadrature", "kind", "gauss_legendre"));
  ec.quadrature.nodes =
      static_cast<int>(to_int(config.get_or("quadrature", "nodes", "64"), "quadrature nodes"));
  if (ec.quadrature.nodes < 1) throw validation_error("quadrature nodes must be positive");

  ec.expansion.n_dim =
      static_cast<int>(to_int(config.get_or("expansion", "n_dim", "1"), "expansion n_dim"));
  ec.expansion.terms =
      static_cast<int>(to_int(config.get_or("expansion", "terms", "4"), "expansion terms"));
  ec.expansion.window_min =
      to_double(config.get_or("expansion", "window_min", "1e-3"), "window_min");
  ec.expansion.window_max =
      to_double(config.get_or("expansion", "window_max", "1e-1"), "window_max");
  ec.expansion.step = exponent_step_from_string(config.get_or("expansion", "step", "auto"));
  if (ec.expansion.n_dim < 0) throw validation_error("expansion n_dim must be nonnegative");
  if (ec.expansion.terms < 1) throw validation_error("expansion needs at least one term");
  if (!(ec.expansion.window_min > 0.0) || !(ec.expansion.window_max > ec.expansion.window_min))
    throw validation_error("expansion window needs 0 < min < max");

  ec.zeta.split_point = to_double(config.get_or("zeta", "split_point", "1"), "split point");
  if (!(ec.zeta.split_point > 0.0)) throw validation_error("split point must be positive");
  ec.zeta.s_list = parse_number_list(config.get_or("zeta", "s_list", ""));
  ec.zeta.fd_step = to_double(config.get_or("zeta", "fd_step", "1e-4"), "fd step");
  if (!(ec.zeta.fd_step > 0.0) || ec.zeta.fd_step > 1e-2)
    throw validation_error("fd step out of range");

  ec.outputs.directory = config.get_or("outputs", "directory", "out");
  if (ec.outputs.directory.empty()) throw validation_error("output directory must be nonempty");
  ec.outputs.formats.clear();
  for (const std::string& f : split_words(config.get_or("outputs", "formats", "csv record"))) {
    if (f != "csv" && f != "record") throw validation_error("unknown output format: " + f);
    ec.outputs.formats.push_back(f);
  }
  if (ec.outputs.formats.empty()) throw validation_error("no output formats selected");

  ec.seed = static_cast<std::uint64_t>(to_int(config.get_or("run", "seed", "1"), "run seed"));
  return ec;
}

Config ExperimentConfig::to_config() const {
  Config c;
  c.set("model", "kind", to_string(model.kind));
  c.set("model", "label", model.label);
  if (model.n > 0) c.set("model", "n", std::to_string(model.n));
  if (model.kind == ModelKind::schrodinger_1d) c.set("model", "dx", format_double(model.dx));
  if (model.length > 0.0) c.set("model", "length", format_double(model.length));
  if (!model.potential_base.empty())
    c.set("model", "potential_base", "values " + format_number_list(model.potential_base));
  if (!model.potential_perturbed.empty())
    c.set("model", "potential_perturbed",
          "values " + format_number_list(model.potential_perturbed));
  if (!model.weights_base.empty())
    c.set("model", "weights_base", format_number_list(model.weights_base));
  if (!model.weights_perturbed.empty())
    c.set("model", "weights_perturbed", format_number_list(model.weights_perturbed));
  if (!model.diag_base.empty())
    c.set("model", "diag_base", format_number_list(model.diag_base));
  if (!model.diag_perturbed.empty())
    c.set("model", "diag_perturbed", format_number_list(model.diag_perturbed));
  if (model.support_lo >= 0) {
    c.set("model", "support_lo", std::to_string(model.support_lo));
    c.set("model", "support_hi", std::to_string(model.support_hi));
  }
  c.set("model", "eta_scale", format_double(model.eta_scale));
  c.set("model", "seed", std::to_string(model.seed));

  c.set("t_grid", "min", format_double(t_grid.min));
  c.set("t_grid", "max", format_double(t_grid.max));
  c.set("t_grid", "count", std::to_string(t_grid.count));
  c.set("t_grid", "spacing", t_grid.spacing);

  c.set("quadrature", "kind", to_string(quadrature.kind));
  c.set("quadrature", "nodes", std::to_string(quadrature.nodes));

  c.set("expansion", "n_dim", std::to_string(expansion.n_dim));
  c.set("expansion", "terms", std::to_string(expansion.terms));
  c.set("expansion", "window_min", format_double(expansion.window_min));
  c.set("expansion", "window_max", format_double(expansion.window_max));
  c.set("expansion", "step", to_string(expansion.step));

  c.set("zeta", "split_point", format_double(zeta.split_point));
  c.set("zeta", "s_list", format_number_list(zeta.s_list));
  c.set("zeta", "fd_step", format_double(zeta.fd_step));

  c.set("outputs", "directory", outputs.directory);
  {
    std::string joined;
    for (std::size_t i = 0; i < outputs.formats.size(); ++i) {
      if (i) joined += ' ';
      joined += outputs.formats[i];
    }
    c.set("outputs", "formats", joined);
  }
  c.set("run", "seed", std::to_string(seed));
  return c;
}

}  // namespace relspec
