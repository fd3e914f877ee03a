#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace pogit {

/// expit(x) = 1 / (1 + exp(-x)), evaluated without overflow for any finite x.
double expit(double x);

/// log(expit(x)) = -log(1 + exp(-x)); stays finite far into the left tail.
double log_expit(double x);

/// log(1 + exp(x)) without overflow.
double log1pexp(double x);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
/// Series expansion for x < a + 1, continued fraction otherwise.
double gamma_q(double a, double x);

/// Upper tail P(X > x) of a chi-square distribution with df degrees of freedom.
double chi2_sf(double x, int df);

/// Inverse standard normal CDF. Accurate to full double precision via a
/// rational initial guess refined with one Halley step on erfc.
double normal_quantile(double p);

/// Two-sided normal critical value for a confidence level in (0, 1),
/// e.g. 0.90 -> 1.6448536...
double normal_critical(double level);

/// FNV-1a 64-bit hash, used to stamp output files with a config fingerprint.
std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace pogit
