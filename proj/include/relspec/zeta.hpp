#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "relspec/asymptotics.hpp"
#include "relspec/heat.hpp"
#include "relspec/perturbation.hpp"

namespace relspec {

struct ZetaDiagnostics {
  double fit_residual = 0.0;   // residual_rms of the expansion in use
  double tail_bound = 0.0;     // bound on the neglected large-time tail
  double spectral_gap = 0.0;   // decay rate entering the tail estimate
};

// Relative zeta data for a pair, split into a small-time part continued
// through the short-time expansion and a large-time part continued through
// the kernel-dimension plateau.
struct ZetaResult {
  std::vector<std::complex<double>> s_values;
  std::vector<std::complex<double>> zeta_values;
  double zeta_prime_at_zero = 0.0;
  double relative_determinant = 0.0;
  int h = 0;  // dim ker(base) - dim ker(perturbed)
  std::vector<std::pair<double, double>> poles;  // (location, residue)
  double split_point = 1.0;
  ZetaDiagnostics diagnostics;
};

// Small-time piece: the expansion's basis terms are integrated in closed form
// over (0, split_point] and the remainder numerically. Poles sit at s = -p for
// basis exponents p whose coefficient is above the noise floor; evaluation
// within 1e-10 of one raises pole_error. Domain Re(s) > -1.
std::complex<double> zeta1(const PerturbationPair& pair, std::complex<double> s,
                           const AsymptoticExpansion& expansion, double split_point);

// Large-time piece: the plateau h continues to -h split^s / Gamma(s+1), the
// rest decays exponentially and is integrated directly. The series argument
// must demonstrate plateau convergence at its largest time.
std::complex<double> zeta2(const PerturbationPair& pair, std::complex<double> s,
                           const HeatTraceSeries& series, double split_point);

std::complex<double> zeta_total(const PerturbationPair& pair, std::complex<double> s,
                                const AsymptoticExpansion& expansion,
                                const HeatTraceSeries& series, double split_point);

// Richardson-combined central differences of zeta_total at 0.
double zeta_prime_at_zero(const PerturbationPair& pair, const AsymptoticExpansion& expansion,
                          const HeatTraceSeries& series, double split_point,
                          double fd_step = 1e-4);

// exp(-zeta'(0))
double relative_determinant(const PerturbationPair& pair, const AsymptoticExpansion& expansion,
                            const HeatTraceSeries& series, double split_point,
                            double fd_step = 1e-4);

// Continuum pole locations and residues visible in an expansion (used for the
// result record and the evaluation guard).
std::vector<std::pair<double, double>> expansion_poles(const AsymptoticExpansion& expansion);

struct RelativeIndexResult {
  std::vector<double> t_grid;
  std::vector<double> values;   // tr(tau (exp(-t D^2) - exp(-t D'^2)))
  double mean = 0.0;
  double max_deviation = 0.0;   // from the mean across the grid
  long long nearest_integer = 0;
};

RelativeIndexResult relative_index(const GradedOperator& a, const GradedOperator& b,
                                   const std::vector<double>& t_grid);

enum class TorsionConvention { unit_weighted, q_weighted };

std::string to_string(TorsionConvention convention);
TorsionConvention torsion_convention_from_string(const std::string& name);

struct TorsionResult {
  std::vector<std::pair<int, double>> per_degree;  // (q, zeta'(0) for that degree)
  double log_torsion = 0.0;
  TorsionConvention convention = TorsionConvention::unit_weighted;
};

// Everything the zeta pipeline needs when run end to end.
struct ZetaPipelineOptions {
  double split_point = 1.0;
  double fd_step = 1e-4;
  int n_dim = 2;
  int terms = 4;
  double window_min = 1e-3;
  double window_max = 1e-1;
  ExponentStep step = ExponentStep::automatic;
  std::vector<std::complex<double>> s_values;  // optional extra evaluations
  std::vector<double> t_grid;                  // empty: default grid
  int threads = 1;
};

std::vector<double> default_t_grid();

ZetaResult zeta_pipeline(const PerturbationPair& pair, const ZetaPipelineOptions& options = {});

// Alternating half-sum of per-degree zeta'(0) over a tower of pairs.
TorsionResult relative_torsion(const std::vector<PerturbationPair>& tower,
                               TorsionConvention convention = TorsionConvention::unit_weighted,
                               const ZetaPipelineOptions& options = {});

}  // namespace relspec
