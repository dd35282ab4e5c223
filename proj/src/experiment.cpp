#include "relspec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "relspec/duhamel.hpp"
#include "relspec/errors.hpp"

namespace relspec {
namespace {

template <class F>
auto run_stage(const char* name, F&& f) -> decltype(f()) {
  const auto tag = [&](const char* what) { return "stage " + std::string(name) + ": " + what; };
  try {
    return f();
  } catch (const pole_error& e) {
    throw pole_error(tag(e.what()), e.location(), e.residue());
  } catch (const validation_error& e) {
    throw validation_error(tag(e.what()));
  } catch (const capability_error& e) {
    throw capability_error(tag(e.what()));
  } catch (const numerical_error& e) {
    throw numerical_error(tag(e.what()));
  } catch (const io_error& e) {
    throw io_error(tag(e.what()));
  }
}

std::string resolve_directory(const std::string& configured, const std::string& output_root) {
  if (output_root.empty() || configured.front() == '/') return configured;
  return output_root + "/" + configured;
}

double duhamel_check_residual(const PerturbationPair& pair, const QuadratureSpec& spec) {
  const double t = 1.0;
  const QuadratureRule rule = QuadratureRule::make(spec.kind, spec.nodes, t);
  const Eigen::MatrixXd approx = pair.weight_change() ? duhamel_difference_metric(pair, t, rule)
                                                      : duhamel_difference(pair, t, rule);
  Eigen::MatrixXd exact;
  if (pair.weight_change()) {
    OperatorHandle sym(symmetrized_perturbed(pair), "", false);
    exact = heat_kernel(pair.base(), t).entries - heat_kernel(sym, t).entries;
  } else {
    exact = heat_kernel(pair.base(), t).entries - heat_kernel(pair.perturbed(), t).entries;
  }
  const double scale = std::max(exact.norm(), 1e-30);
  return (approx - exact).norm() / scale;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> experiment_artifacts(const ExperimentResult& r) {
  std::vector<std::pair<std::string, std::string>> files;
  const auto& formats = r.config.outputs.formats;
  const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
  const bool want_record = std::find(formats.begin(), formats.end(), "record") != formats.end();

  if (want_csv) {
    files.emplace_back("series.csv", series_csv(r.series));
    files.emplace_back("expansion.csv", expansion_csv(r.expansion));
  }
  if (want_record) {
    Record zr;
    zr.set_string("kind", "zeta_result");
    zr.set_string("model", r.config.model.label);
    zr.set_int("h", r.zeta.h);
    zr.set_double("split_point", r.zeta.split_point);
    zr.set_double("zeta_prime_at_zero", r.zeta.zeta_prime_at_zero);
    zr.set_double("relative_determinant", r.zeta.relative_determinant);
    {
      std::vector<double> sre, sim, zre, zim, ploc, pres;
      for (auto s : r.zeta.s_values) {
        sre.push_back(s.real());
        sim.push_back(s.imag());
      }
      for (auto z : r.zeta.zeta_values) {
        zre.push_back(z.real());
        zim.push_back(z.imag());
      }
      for (auto [loc, res] : r.zeta.poles) {
        ploc.push_back(loc);
        pres.push_back(res);
      }
      zr.set_double_list("s_re", sre);
      zr.set_double_list("s_im", sim);
      zr.set_double_list("zeta_re", zre);
      zr.set_double_list("zeta_im", zim);
      zr.set_double_list("pole_locations", ploc);
      zr.set_double_list("pole_residues", pres);
    }
    zr.set_double("fit_residual", r.zeta.diagnostics.fit_residual);
    zr.set_double("tail_bound", r.zeta.diagnostics.tail_bound);
    zr.set_double("spectral_gap", r.zeta.diagnostics.spectral_gap);
    files.emplace_back("zeta.record", zr.serialize());
  }
  return files;
}

ExperimentResult run_experiment(const Config& config, const std::string& output_root,
                                int threads) {
  ExperimentResult result;
  result.config = run_stage("validate", [&] { return ExperimentConfig::from_config(config); });
  const ExperimentConfig& ec = result.config;

  PerturbationPair pair = run_stage("build", [&] { return build_model(ec.model); });

  result.series = run_stage("heat", [&] {
    return relative_heat_trace(pair, ec.t_grid.points(), TraceMethod::dense_spectral, {},
                               threads);
  });

  result.expansion = run_stage("expansion", [&] {
    return fit_expansion(result.series, ec.expansion.n_dim, ec.expansion.terms,
                         ec.expansion.window_min, ec.expansion.window_max, ec.expansion.step);
  });

  run_stage("zeta", [&] {
    ZetaResult& z = result.zeta;
    z.split_point = ec.zeta.split_point;
    z.h = pair.kernel_dim_diff();
    z.poles = expansion_poles(result.expansion);
    z.zeta_prime_at_zero = zeta_prime_at_zero(pair, result.expansion, result.series,
                                              ec.zeta.split_point, ec.zeta.fd_step);
    z.relative_determinant = std::exp(-z.zeta_prime_at_zero);
    for (double s : ec.zeta.s_list) {
      z.s_values.emplace_back(s, 0.0);
      z.zeta_values.push_back(
          zeta_total(pair, {s, 0.0}, result.expansion, result.series, ec.zeta.split_point));
    }
    z.diagnostics.fit_residual = result.expansion.residual_rms;
    z.diagnostics.spectral_gap = pair.spectral_gap();
    std::size_t last = 0;
    for (std::size_t i = 1; i < result.series.t_grid.size(); ++i)
      if (result.series.t_grid[i] > result.series.t_grid[last]) last = i;
    z.diagnostics.tail_bound =
        std::abs(result.series.values[last] - static_cast<double>(z.h));
    return 0;
  });

  Record invariants = run_stage("invariants", [&] {
    Record inv;
    inv.set_string("kind", "invariants");
    inv.set_string("model", ec.model.label);
    inv.set_int("dim", pair.dim());
    inv.set_int("h", pair.kernel_dim_diff());
    inv.set_int("kernel_dim_base", pair.base().kernel_dimension());
    inv.set_int("kernel_dim_perturbed", pair.perturbed().kernel_dimension());
    inv.set_double("spectral_gap", pair.spectral_gap());
    inv.set_int("decay_flagged", pair.decay_profile().flagged ? 1 : 0);
    inv.set_double("zeta_prime_at_zero", result.zeta.zeta_prime_at_zero);
    inv.set_double("relative_determinant", result.zeta.relative_determinant);
    if (pair.dim() < OperatorHandle::kDenseThreshold)
      inv.set_double("duhamel_residual_t1", duhamel_check_residual(pair, ec.quadrature));
    if (ec.model.kind == ModelKind::graded_block) {
      auto [da, db] = build_graded_pair(ec.model);
      const RelativeIndexResult idx = relative_index(da, db, {0.1, 1.0, 10.0});
      inv.set_int("relative_index", idx.nearest_integer);
      inv.set_double("relative_index_mean", idx.mean);
      inv.set_double("relative_index_max_deviation", idx.max_deviation);
    }
    if (ec.model.kind == ModelKind::hodge_complex) {
      inv.set_int("euler_characteristic", ec.model.complex.euler_characteristic());
      auto tower = build_hodge_tower(ec.model.complex);
      ZetaPipelineOptions topt;
      topt.split_point = ec.zeta.split_point;
      topt.fd_step = ec.zeta.fd_step;
      topt.n_dim = ec.expansion.n_dim;
      topt.terms = ec.expansion.terms;
      topt.window_min = ec.expansion.window_min;
      topt.window_max = ec.expansion.window_max;
      topt.step = ec.expansion.step;
      topt.t_grid = ec.t_grid.points();
      topt.threads = threads;
      const TorsionResult torsion = relative_torsion(tower, TorsionConvention::unit_weighted,
                                                     topt);
      inv.set_double("log_torsion", torsion.log_torsion);
      std::vector<double> per_degree;
      for (auto [q, zp] : torsion.per_degree) per_degree.push_back(zp);
      inv.set_double_list("torsion_zeta_prime_per_degree", per_degree);
    }
    return inv;
  });

  return run_stage("write", [&]() -> ExperimentResult {
    auto files = experiment_artifacts(result);
    files.emplace_back("invariants.record", invariants.serialize());

    std::string log = "pipeline relspec v1\n";
    log += "stage validate ok\n";
    log += "stage build ok model=" + ec.model.label + " dim=" + std::to_string(pair.dim()) +
           " h=" + std::to_string(pair.kernel_dim_diff()) + "\n";
    log += "stage heat ok points=" + std::to_string(result.series.t_grid.size()) + "\n";
    log += "stage expansion ok residual_rms=" + format_double(result.expansion.residual_rms) +
           " condition=" + format_double(result.expansion.condition_number) + "\n";
    log += "stage zeta ok det_rel=" + format_double(result.zeta.relative_determinant) +
           " zeta_prime=" + format_double(result.zeta.zeta_prime_at_zero) + "\n";
    log += "stage invariants ok\n";
    files.emplace_back("run.log", log);

    std::string manifest = "# relspec manifest v1\n";
    for (const auto& [name, content] : files)
      manifest += fnv1a64_hex(content) + "  " + std::to_string(content.size()) + "  " + name +
                  "\n";
    manifest += "\n[config]\n";
    manifest += config.serialize();
    result.manifest = manifest;
    files.emplace_back("manifest.txt", manifest);

    result.output_directory = resolve_directory(ec.outputs.directory, output_root);
    std::error_code fs_err;
    std::filesystem::create_directories(result.output_directory, fs_err);
    if (fs_err)
      throw io_error("cannot create output directory " + result.output_directory + ": " +
                     fs_err.message());
    std::vector<std::string> done;
    try {
      for (const auto& [name, content] : files) {
        write_text_file(result.output_directory + "/" + name, content);
        done.push_back(name);
      }
    } catch (...) {
      for (const auto& name : done)
        std::filesystem::remove(result.output_directory + "/" + name, fs_err);
      throw;
    }
    for (const auto& [name, content] : files) result.written.push_back(name);
    return result;
  });
}

}  // namespace relspec
