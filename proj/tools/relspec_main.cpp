#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "relspec/errors.hpp"
#include "relspec/experiment.hpp"
#include "relspec/textio.hpp"
#include "relspec/verify.hpp"

namespace {

// 0 success, 1 validation, 2 numerical failure, 3 I/O
int run_command(const std::string& config_path, int threads) {
  std::string text;
  try {
    text = relspec::read_text_file(config_path);
  } catch (const relspec::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  const char* root = std::getenv("RELSPEC_OUTPUT_ROOT");
  relspec::ExperimentResult result = relspec::run_experiment(
      relspec::Config::parse(text), root ? root : "", threads);
  std::printf("wrote %s\n", result.output_directory.c_str());
  for (const auto& name : result.written) std::printf("  %s\n", name.c_str());
  std::printf("h = %d\n", result.zeta.h);
  std::printf("zeta_prime_at_zero = %s\n",
              relspec::format_double(result.zeta.zeta_prime_at_zero).c_str());
  std::printf("relative_determinant = %s\n",
              relspec::format_double(result.zeta.relative_determinant).c_str());
  return 0;
}

int verify_command(const std::string& level_name, int threads) {
  relspec::VerifyReport report =
      relspec::verify_suite(relspec::verify_level_from_string(level_name), threads);
  std::fputs(report.render().c_str(), stdout);
  return report.all_passed() ? 0 : 2;
}

int inspect_command(const std::string& path) {
  const std::string text = relspec::read_text_file(path);
  if (text.rfind("# relspec manifest v1", 0) == 0) {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  relspec::Record record = relspec::Record::parse(text);
  for (const auto& [key, value] : record.entries())
    std::printf("%-28s %s\n", key.c_str(), value.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relative spectral invariants for operator pairs"};
  app.require_subcommand(1);

  std::string config_path, record_path, level = "fast";
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--threads", threads, "worker threads");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--threads", threads, "worker threads");

  CLI::App* inspect = app.add_subcommand("inspect", "print a record or manifest");
  inspect->add_option("record", record_path, "record file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return run_command(config_path, threads);
    if (verify->parsed()) return verify_command(level, threads);
    if (inspect->parsed()) return inspect_command(record_path);
  } catch (const relspec::validation_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const relspec::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {  // numerical, capability, pole
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
