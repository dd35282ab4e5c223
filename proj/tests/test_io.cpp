#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

#include "relspec/config.hpp"
#include "relspec/errors.hpp"
#include "relspec/experiment.hpp"
#include "relspec/textio.hpp"

using namespace relspec;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("relspec_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

Config base_config() {
  Config c;
  c.set("model", "kind", "explicit_diag");
  c.set("model", "diag_base", "1 2");
  c.set("model", "diag_perturbed", "1 1");
  c.set("t_grid", "min", "1e-3");
  c.set("t_grid", "max", "1e2");
  c.set("t_grid", "count", "40");
  c.set("t_grid", "spacing", "log");
  c.set("expansion", "n_dim", "0");
  c.set("expansion", "terms", "3");
  c.set("expansion", "window_min", "1e-3");
  c.set("expansion", "window_max", "1e-1");
  c.set("zeta", "split_point", "1");
  c.set("zeta", "s_list", "0.5 1 1.5 2");
  c.set("outputs", "directory", "regression");
  c.set("outputs", "formats", "csv record");
  return c;
}

}  // namespace

TEST_CASE("doubles survive a record round trip unchanged") {
  Record r;
  r.set_double("tiny", 1e-300);
  r.set_double("pi_ish", 3.141592653589793);
  r.set_double("negzero", -0.0);
  r.set_double("big", 1.7976931348623157e308);
  r.set_int("count", -42);
  r.set_string("label", "alpha beta");
  r.set_double_list("grid", {1e-3, 2.5, 1e2});
  Record back = Record::parse(r.serialize());
  CHECK(back.get_double("tiny") == 1e-300);
  CHECK(back.get_double("pi_ish") == 3.141592653589793);
  CHECK(back.get_double("big") == 1.7976931348623157e308);
  CHECK(back.get_int("count") == -42);
  CHECK(back.get_string("label") == "alpha beta");
  REQUIRE(back.get_double_list("grid").size() == 3);
  CHECK(back.get_double_list("grid")[1] == 2.5);
  CHECK(back.serialize() == r.serialize());
  CHECK_THROWS_AS(back.get_double("absent"), io_error);
  CHECK_THROWS_AS(Record::parse("no header\nx = 1\n"), io_error);
}

TEST_CASE("config serialization is a fixed point") {
  Config c = base_config();
  const std::string text = c.serialize();
  Config again = Config::parse(text);
  CHECK(again.serialize() == text);
  CHECK(again.get("model", "kind") == "explicit_diag");
  CHECK(again.get_or("model", "missing", "dflt") == "dflt");
  CHECK_THROWS_AS(again.get("model", "missing"), validation_error);
}

TEST_CASE("config comments and blank lines are skipped") {
  const std::string text =
      "# leading comment\n[model]\nkind = explicit_diag\n\n; alt comment\ndiag_base = 1 2\n"
      "diag_perturbed = 1 1\n";
  Config c = Config::parse(text);
  CHECK(c.get("model", "diag_base") == "1 2");
}

TEST_CASE("typed config view validates fields") {
  Config c = base_config();
  ExperimentConfig ec = ExperimentConfig::from_config(c);
  CHECK(ec.model.kind == ModelKind::explicit_diag);
  CHECK(ec.t_grid.count == 40);
  CHECK(ec.expansion.n_dim == 0);
  CHECK(ec.zeta.s_list.size() == 4);

  Config bad = base_config();
  bad.set("t_grid", "min", "-1");
  CHECK_THROWS_AS(ExperimentConfig::from_config(bad), validation_error);
  Config bad2 = base_config();
  bad2.set("expansion", "terms", "0");
  CHECK_THROWS_AS(ExperimentConfig::from_config(bad2), validation_error);
  Config bad3 = base_config();
  bad3.set("model", "kind", "no_such_model");
  CHECK_THROWS_AS(ExperimentConfig::from_config(bad3), validation_error);

  // canonical round trip through to_config
  Config canon = ec.to_config();
  ExperimentConfig ec2 = ExperimentConfig::from_config(canon);
  CHECK(ec2.to_config().serialize() == canon.serialize());
}

TEST_CASE("number lists reject junk") {
  CHECK(parse_number_list("1 2.5 -3e-2").size() == 3);
  CHECK(parse_number_list("").empty());
  CHECK_THROWS_AS(parse_number_list("1 two 3"), validation_error);
  CHECK(format_number_list({1.0, 0.5}) == "1 0.5");
}

TEST_CASE("potential shorthands expand onto the grid") {
  auto zero = expand_potential("zero", 4, 0.25);
  CHECK(zero == std::vector<double>(4, 0.0));
  auto values = expand_potential("values 1 2 3 4", 4, 0.25);
  CHECK(values[2] == 3.0);
  CHECK_THROWS_AS(expand_potential("values 1 2", 4, 0.25), validation_error);
  auto step = expand_potential("step 2.0 0.4 0.8", 4, 0.25);
  // samples at x = 0.25, 0.5, 0.75, 1.0; window [0.4, 0.8] covers the middle two
  CHECK(step == std::vector<double>({0.0, 2.0, 2.0, 0.0}));
  auto gauss = expand_potential("gaussian 1.0 0.5 0.1", 4, 0.25);
  CHECK(gauss[1] == doctest::Approx(1.0));
  CHECK(gauss[0] < 0.1);
  CHECK_THROWS_AS(expand_potential("wiggle 1 2", 4, 0.25), validation_error);
}

TEST_CASE("series and expansion render to parsable csv") {
  HeatTraceSeries s;
  s.t_grid = {0.1, 1.0};
  s.values = {0.5, -0.25};
  s.error_estimates = {0.0, 0.0};
  const std::string csv = series_csv(s);
  CHECK(csv.find("t,value,stderr") != std::string::npos);
  CHECK(csv.find("0.5") != std::string::npos);

  AsymptoticExpansion e;
  e.exponents = {-0.5, 0.5};
  e.coefficients = {2.0, 1.0};
  e.stderrs = {0.0, 0.0};
  e.t_min = 1e-3;
  e.t_max = 1e-1;
  e.condition_number = 10.0;
  const std::string ecsv = expansion_csv(e);
  CHECK(ecsv.find("order,coefficient,stderr") != std::string::npos);
  CHECK(ecsv.find("fit_window") != std::string::npos);
}

TEST_CASE("hash is the reference fnv1a64") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64_hex("").size() == 16);
}

TEST_CASE("experiment artifacts are byte identical across runs and threads") {
  TempDir tmp;
  Config c = base_config();
  ExperimentResult one = run_experiment(c, (tmp.path / "one").string(), 1);
  ExperimentResult two = run_experiment(c, (tmp.path / "two").string(), 4);
  REQUIRE(one.written == two.written);
  REQUIRE(!one.written.empty());
  for (const auto& name : one.written) {
    const std::string a = read_text_file((fs::path(one.output_directory) / name).string());
    const std::string b = read_text_file((fs::path(two.output_directory) / name).string());
    CHECK(a == b);
  }
  CHECK(one.manifest == two.manifest);
}

TEST_CASE("manifest hashes match the written bytes") {
  TempDir tmp;
  ExperimentResult res = run_experiment(base_config(), tmp.path.string(), 1);
  REQUIRE(res.manifest.rfind("# relspec manifest v1", 0) == 0);
  int checked = 0;
  for (const auto& name : res.written) {
    if (name == "manifest.txt") continue;
    const std::string content =
        read_text_file((fs::path(res.output_directory) / name).string());
    const std::string needle = fnv1a64_hex(content) + "  " + std::to_string(content.size());
    CHECK(res.manifest.find(needle) != std::string::npos);
    CHECK(res.manifest.find(name) != std::string::npos);
    ++checked;
  }
  CHECK(checked >= 4);
}

TEST_CASE("a failing validate stage writes nothing") {
  TempDir tmp;
  Config c = base_config();
  c.set("t_grid", "min", "-2");
  try {
    run_experiment(c, tmp.path.string(), 1);
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("stage validate") != std::string::npos);
  }
  CHECK(fs::is_empty(tmp.path));
}

TEST_CASE("identical operators give the trivial invariant record") {
  TempDir tmp;
  Config c = base_config();
  c.set("model", "diag_perturbed", "1 2");
  ExperimentResult res = run_experiment(c, tmp.path.string(), 1);
  CHECK(res.zeta.h == 0);
  CHECK(std::abs(res.zeta.zeta_prime_at_zero) <= 1e-10);
  CHECK(res.zeta.relative_determinant == doctest::Approx(1.0).epsilon(1e-10));
  const std::string inv =
      read_text_file((fs::path(res.output_directory) / "invariants.record").string());
  Record r = Record::parse(inv);
  CHECK(r.get_int("h") == 0);
  CHECK(r.get_double("relative_determinant") == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("run artifacts parse back to the computed values") {
  TempDir tmp;
  ExperimentResult res = run_experiment(base_config(), tmp.path.string(), 1);
  const std::string zrec =
      read_text_file((fs::path(res.output_directory) / "zeta.record").string());
  Record r = Record::parse(zrec);
  CHECK(r.get_double("zeta_prime_at_zero") == res.zeta.zeta_prime_at_zero);
  CHECK(r.get_double("relative_determinant") == res.zeta.relative_determinant);
  CHECK(r.get_double("split_point") == 1.0);
}
