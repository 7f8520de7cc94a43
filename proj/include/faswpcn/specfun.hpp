// Scalar special functions used by the analytical outage chain.
// All functions are pure and deterministic; domains are enforced with
// std::domain_error.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace faswpcn::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286;
inline constexpr double kInvSqrt2 = 0.70710678118654752;
inline constexpr double kInvSqrt2Pi = 0.39894228040143268;

/// sin(x)/x with the removable singularity at x = 0.
inline double spherical_bessel_j0(double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("spherical_bessel_j0: x must be finite and >= 0");
  if (x < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

namespace detail {

// I1 power series, adequate for |x| < 2 where it is used.
inline double bessel_i1_series(double x) {
  const double t = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= t / (k * (k + 1.0));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return 0.5 * x * sum;
}

inline double bessel_i0_series(double x) {
  const double t = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= t / (double(k) * k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

// Small-argument series, A&S 9.6.13:
//   K0(x) = -(ln(x/2) + gamma) I0(x) + sum_{k>=1} H_k t^k / (k!)^2,  t = x^2/4.
inline double bessel_k0_series(double x) {
  const double t = 0.25 * x * x;
  double coef = 1.0;
  double hk = 0.0;
  double sum = 0.0;
  for (int k = 1; k < 64; ++k) {
    coef *= t / (double(k) * k);
    hk += 1.0 / k;
    const double term = hk * coef;
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * bessel_i0_series(x) + sum;
}

// Small-argument series, A&S 9.6.11 with n = 1:
//   K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] t^k / (k!(k+1)!)
// with t = x^2/4.
inline double bessel_k1_series(double x) {
  const double t = 0.25 * x * x;
  double coef = 1.0;  // t^k / (k! (k+1)!)
  double psi1 = -kEulerGamma;      // psi(1)
  double psi2 = 1.0 - kEulerGamma; // psi(2)
  double sum = psi1 + psi2;
  for (int k = 1; k < 64; ++k) {
    coef *= t / (k * (k + 1.0));
    psi1 += 1.0 / k;
    psi2 += 1.0 / (k + 1.0);
    const double term = (psi1 + psi2) * coef;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-18) break;
  }
  return std::log(0.5 * x) * bessel_i1_series(x) + 1.0 / x - 0.25 * x * sum;
}

// Steed's continued fraction CF2 with Temme normalization (see e.g.
// Thompson & Barnett, J. Comput. Phys. 64 (1986)); near machine accuracy
// for x >= 2.  Returns {K0, K1}.
inline std::pair<double, double> bessel_k0k1_cf2(double x) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double a1 = 0.25;  // 1/4 - nu^2 at nu = 0
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double a = -a1;
  double q = a1;
  double c = a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 10000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= eps) {
      const double k0 = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
      return {k0, k0 * (x + 0.5 - a1 * h) / x};
    }
  }
  throw std::runtime_error("bessel_k0k1: CF2 did not converge");
}

inline double bessel_k1_cf2(double x) { return bessel_k0k1_cf2(x).second; }

}  // namespace detail

/// Modified Bessel function of the second kind, order 1.
/// Series for x < 2, continued fraction for x >= 2; the two branches agree
/// to better than 1e-12 at the seam.  Underflows to 0 for x beyond ~746;
/// overflows to +inf only for x below ~1e-305 (K1 ~ 1/x there).
inline double bessel_k1(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k1: x must be > 0");
  return x < 2.0 ? detail::bessel_k1_series(x) : detail::bessel_k1_cf2(x);
}

/// Modified Bessel function of the second kind, order 0.
inline double bessel_k0(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0: x must be > 0");
  return x < 2.0 ? detail::bessel_k0_series(x) : detail::bessel_k0k1_cf2(x).first;
}

/// Standard normal CDF via the complementary error function.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Standard normal density.
inline double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal quantile, Wichura's AS 241 (PPND16).  Relative accuracy
/// around 1e-15 over the full open interval, including tails down to
/// p ~ 1e-300 where the copula chain needs it.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

}  // namespace faswpcn::specfun
