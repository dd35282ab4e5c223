#pragma once

#include <complex>

namespace relspec {

// Gamma function for Re(z) > 0 (Lanczos approximation, g = 7).
std::complex<double> gamma_positive(std::complex<double> z);

// 1 / Gamma(s) for Re(s) > -2, entire in that strip; exact zeros at s = 0, -1.
std::complex<double> recip_gamma(std::complex<double> s);

// Gamma(x) for real x > -2 excluding 0 and -1.
double gamma_real(double x);

}  // namespace relspec
