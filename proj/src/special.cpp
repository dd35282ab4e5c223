#include "relspec/special.hpp"

#include <cmath>

#include "relspec/errors.hpp"

namespace relspec {
namespace {

// Lanczos coefficients, g = 7, 9 terms.
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

std::complex<double> gamma_positive(std::complex<double> z) {
  if (z.real() <= 0.0) throw validation_error("gamma argument must have positive real part here");
  const std::complex<double> zm1 = z - 1.0;
  std::complex<double> acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (zm1 + static_cast<double>(i));
  const std::complex<double> t = zm1 + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, zm1 + 0.5) * std::exp(-t) * acc;
}

std::complex<double> recip_gamma(std::complex<double> s) {
  // 1/Gamma(s) = s (s+1) / Gamma(s+2), and s+2 sits in the Lanczos domain
  if (s.real() <= -2.0) throw validation_error("recip_gamma restricted to Re(s) > -2");
  return s * (s + 1.0) / gamma_positive(s + 2.0);
}

double gamma_real(double x) {
  if (x == 0.0 || x == -1.0) throw validation_error("gamma pole");
  if (x > 0.0) return std::tgamma(x);
  return gamma_positive(std::complex<double>(x + 2.0, 0.0)).real() / (x * (x + 1.0));
}

}  // namespace relspec
