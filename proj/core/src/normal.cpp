#include "aloe/normal.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aloe/error.hpp"

namespace aloe::stat {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kSqrtHalfPi = 1.25331413731550025121;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// exp(-t^2/2) with t split so that the large part of t^2 is exact.
double exp_half_square_neg(double t) {
  const double hi = std::trunc(t * 16.0) / 16.0;
  const double rest = (t - hi) * (t + hi);
  return std::exp(-0.5 * hi * hi) * std::exp(-0.5 * rest);
}

// Acklam's rational approximation to Phi^{-1}, relative error ~1.2e-9.
double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Lower-half quantile (log_p <= log 0.5) refined by Halley steps on
// f(x) = log Phi(x) - log_p, whose derivative g = phi/Phi stays O(|x|).
double lower_quantile_from_log(double log_p) {
  double x;
  if (log_p > -700.0) {
    x = acklam_quantile(std::exp(log_p));
  } else {
    // Phi(-z) ~ phi(z)/z; two fixed-point passes give ~1e-3 relative.
    const double z0 = std::sqrt(-2.0 * log_p);
    const double z1 = std::sqrt(-2.0 * log_p - std::log(2.0 * std::numbers::pi * z0 * z0));
    const double z2 = std::sqrt(-2.0 * log_p - std::log(2.0 * std::numbers::pi * z1 * z1));
    x = -z2;
  }
  for (int iter = 0; iter < 6; ++iter) {
    const double f = log_normal_cdf(x) - log_p;
    // g = phi(x)/Phi(x); for x <= 0 that is 1/mills_ratio(-x).
    const double g = x <= 0.0 ? 1.0 / mills_ratio(-x) : normal_pdf(x) / normal_cdf(x);
    const double step = (f / g) / (1.0 + 0.5 * f * (x + g) / g);
    x -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      break;
  }
  return x;
}

}  // namespace

double scaled_erfc(double x) {
  assert(x >= 0.0);
  if (x < 0.5) return std::exp(x * x) * std::erfc(x);
  if (x < 26.0) {
    const double hi = std::trunc(x * 16.0) / 16.0;
    const double rest = (x - hi) * (x + hi);
    return std::erfc(x) * std::exp(hi * hi) * std::exp(rest);
  }
  // Laplace continued fraction: erfcx(x) = 1/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
  double tail = x;
  for (int k = 60; k >= 1; --k) tail = x + 0.5 * k / tail;
  return 1.0 / (kSqrtPi * tail);
}

double mills_ratio(double x) { return kSqrtHalfPi * scaled_erfc(x * kInvSqrt2); }

double normal_pdf(double t) { return exp_half_square_neg(t) * 0.39894228040143267794; }

double normal_cdf(double t) {
  if (std::isnan(t)) return t;
  if (t > 0.0) return 1.0 - normal_cdf(-t);
  if (t < -40.0) return 0.0;
  // Multiply the O(1) factors first so only the final product can go subnormal.
  const double scaled = 0.5 * scaled_erfc(-t * kInvSqrt2);
  const double hi = std::trunc(t * 16.0) / 16.0;
  const double rest = (t - hi) * (t + hi);
  return (scaled * std::exp(-0.5 * rest)) * std::exp(-0.5 * hi * hi);
}

double log_normal_cdf(double t) {
  if (t > -1.0) {
    return t > 0.0 ? std::log1p(-normal_cdf(-t)) : std::log(normal_cdf(t));
  }
  return std::log(0.5 * scaled_erfc(-t * kInvSqrt2)) - 0.5 * t * t;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kDomain, "normal_quantile requires 0 < p < 1, got " + std::to_string(p));
  }
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -lower_quantile_from_log(std::log1p(-p));
  return lower_quantile_from_log(std::log(p));
}

double normal_quantile_log(double log_p) {
  if (!(log_p < 0.0) || std::isinf(log_p)) {
    throw Error(ErrorCode::kDomain, "normal_quantile_log requires finite log_p < 0");
  }
  if (log_p > -std::numbers::ln2) {
    return -lower_quantile_from_log(std::log(-std::expm1(log_p)));
  }
  return lower_quantile_from_log(log_p);
}

double sample_upper_truncated_normal(double tau, double u) {
  if (!std::isfinite(tau)) throw Error(ErrorCode::kDomain, "truncation point must be finite");
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::kDomain, "uniform variate must lie in (0, 1)");
  if (normal_cdf(-tau) == 0.0) {
    throw Error(ErrorCode::kUnsampleableEvent,
                "Phi(-tau) underflows for tau = " + std::to_string(tau));
  }
  const double log_target = std::log(u) + log_normal_cdf(-tau);
  const double y = -normal_quantile_log(log_target);
  return std::max(y, tau);
}

void sample_halfspace_conditional(std::span<const double> omega, double tau,
                                  RandomStream& stream, std::span<double> out) {
  assert(omega.size() == out.size());
  // Draw the orthogonal part first, then the truncated coordinate, so the
  // consumption order of the stream is fixed.
  stream.fill_normal(out);
  double projection = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i) projection += omega[i] * out[i];
  const double y = sample_upper_truncated_normal(tau, stream.uniform());
  for (std::size_t i = 0; i < omega.size(); ++i) out[i] += omega[i] * (y - projection);
}

}  // namespace aloe::stat
