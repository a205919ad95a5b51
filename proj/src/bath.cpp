#include "sbm/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sbm/quadrature.hpp"
#include "sbm/specfun.hpp"

namespace sbm::bath {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kGammaE = 0.5772156649015328606065121;
const ComplexValue kI{0.0, 1.0};

// Distance from x to the nearest positive multiple of 2 pi. The m = 0
// multiple is excluded: the e^{beta z} - 1 pole there is the physical
// high-temperature divergence, not a removable pinch.
double resonance_distance(double x) {
  double k = std::round(x / (2.0 * kPi));
  if (k < 0.5) return 2.0 * kPi;
  return std::abs(x - k * 2.0 * kPi);
}

// Overdamped finite-beta only: both decay rates gamma -+ sqrt(gamma^2-w0^2)
// are real, and beta * rate on a multiple of 2 pi puts e^{-beta z} exactly
// at 1. Step beta off the resonance; every downstream quantity uses the
// returned value so the coefficients and the thermal sums stay consistent.
double nudged_beta(const BathParameters& p) {
  if (p.zero_temperature() || p.gamma <= p.w0) return p.beta;
  double dt = std::sqrt((p.gamma - p.w0) * (p.gamma + p.w0));
  double beta = p.beta;
  for (int i = 0; i < 3; ++i) {
    double d = std::min(resonance_distance(beta * (p.gamma + dt)),
                        resonance_distance(beta * (p.gamma - dt)));
    if (d > 2.0 * kPi * 1e-7) break;
    beta *= 1.0 + 5e-7;
  }
  return beta;
}

double criticality(const BathParameters& p) {
  return std::abs(p.gamma - p.w0) / p.w0;
}

// e^w E1(w), asymptotic series sum_k (-1)^k k! / w^{k+1}; for |w| beyond the
// exp() range where the product cannot be formed directly
ComplexValue e1_scaled_asym(ComplexValue w) {
  ComplexValue term = 1.0 / w;
  ComplexValue sum{0.0, 0.0};
  double prev = std::abs(term);
  for (int k = 0; k < 48; ++k) {
    sum += term;
    term *= -static_cast<double>(k + 1) / w;
    double a = std::abs(term);
    if (a < 1e-20 * std::abs(sum) || a > prev) break;
    prev = a;
  }
  return sum;
}

// e^{-x} Ei(x) for x > 600, asymptotic sum_k k! / x^{k+1}
double ei_scaled_asym(double x) {
  double term = 1.0 / x;
  double sum = 0.0;
  double prev = term;
  for (int k = 0; k < 48; ++k) {
    sum += term;
    term *= static_cast<double>(k + 1) / x;
    if (term < 1e-20 * sum || term > prev) break;
    prev = term;
  }
  return sum;
}

// E_n(x) = e^{-x}/x * sum_j (-1)^j (n)_j / x^j, usable here for |x| >= 100
// where the recurrence from E_1 is not (e1 quality degrades on the far
// imaginary axis and the per-step digit loss would compound)
ComplexValue en_asymptotic(int n, ComplexValue x) {
  ComplexValue term{1.0, 0.0};
  ComplexValue sum{1.0, 0.0};
  double prev = 1.0;
  for (int j = 1; j < 64; ++j) {
    term *= -static_cast<double>(n + j - 1) / x;
    double a = std::abs(term);
    if (a > prev) break;
    sum += term;
    prev = a;
    if (a < 1e-18 * std::abs(sum)) break;
  }
  return std::exp(-x) / x * sum;
}

// tail of the force autocorrelation spectral integral from the quadrature
// cutoff W outward: J is expanded in inverse powers of omega and each
// int_W^inf omega^{-n} e^{-i omega t} = W^{1-n} E_n(i W t) is exact
ComplexValue analytic_tail(double t, const BathParameters& p, double w) {
  double amp = 8.0 * p.kappa * p.kappa * p.gamma * p.w0;
  double pp = 4.0 * p.gamma * p.gamma - 2.0 * p.w0 * p.w0;
  double qq = p.w0 * p.w0 * p.w0 * p.w0;
  double c5 = -pp;
  double c7 = pp * pp - qq;
  double c9 = -(pp * pp * pp - 2.0 * pp * qq);
  ComplexValue i3, i5, i7, i9;
  if (t == 0.0) {
    i3 = {1.0 / (2.0 * w * w), 0.0};
    i5 = {1.0 / (4.0 * w * w * w * w), 0.0};
    i7 = {1.0 / (6.0 * std::pow(w, 6)), 0.0};
    i9 = {1.0 / (8.0 * std::pow(w, 8)), 0.0};
  } else {
    ComplexValue x = kI * (w * t);
    ComplexValue e3, e5, e7, e9;
    if (w * t < 100.0) {
      ComplexValue en = specfun::e1(x);
      ComplexValue ex = std::exp(-x);
      for (int n = 1; n <= 8; ++n) {
        en = (ex - x * en) / static_cast<double>(n);
        if (n == 2) e3 = en;
        if (n == 4) e5 = en;
        if (n == 6) e7 = en;
        if (n == 8) e9 = en;
      }
    } else {
      e3 = en_asymptotic(3, x);
      e5 = en_asymptotic(5, x);
      e7 = en_asymptotic(7, x);
      e9 = en_asymptotic(9, x);
    }
    i3 = e3 / (w * w);
    i5 = e5 / (w * w * w * w);
    i7 = e7 / std::pow(w, 6);
    i9 = e9 / std::pow(w, 8);
  }
  return amp * (i3 + c5 * i5 + c7 * i7 + c9 * i9);
}

std::vector<double> spectral_breakpoints(const BathParameters& p, double t,
                                         double hi) {
  std::vector<double> bp;
  double w0 = p.w0;
  double g = p.gamma;
  const double marks[] = {0.1 * w0,       0.5 * w0,      w0 - 4.0 * g,
                          w0 - 2.0 * g,   w0 - g,        w0 - 0.5 * g,
                          w0,             w0 + 0.5 * g,  w0 + g,
                          w0 + 2.0 * g,   w0 + 4.0 * g};
  for (double m : marks)
    if (m > 0.0 && m < hi) bp.push_back(m);
  if (t > 0.0) {
    // one panel per oscillation half-period, capped
    double step = kPi / t;
    if (hi / step > 4000.0) step = hi / 4000.0;
    for (double x = step; x < hi; x += step) bp.push_back(x);
  }
  return bp;
}

ComplexValue f3_value(double t, const DerivedCoefficients& d) {
  ComplexValue zs = 2.0 * d.delta - d.z;
  // both exponents have non-positive real part in either damping regime
  ComplexValue ezt = std::exp(kI * d.z * t);
  ComplexValue ezst = std::exp(-kI * zs * t);
  return (d.a + d.b) + d.c * t - d.a * ezt - d.b * ezst;
}

double k1_value(const DerivedCoefficients& d, ComplexValue zs, double w0) {
  ComplexValue ibz = kI * (d.beta_tilde * d.z);
  ComplexValue ibzs = kI * (d.beta_tilde * zs);
  ComplexValue hz = specfun::complex_harmonic(ibz) + specfun::complex_harmonic(-ibz);
  ComplexValue hzs =
      specfun::complex_harmonic(ibzs) + specfun::complex_harmonic(-ibzs);
  ComplexValue val = -(d.er * w0 * w0) / (2.0 * kPi * kI * d.delta) *
                     (hz / (d.z * d.z) - hzs / (zs * zs));
  return val.real();
}

// K3 as a single real series: pairing the e^{+-itz} prefactors with the
// matching x^{-+ i beta_tilde z} power inside the beta-function series
// cancels the growing exponentials exactly, leaving
// sum_m m x^m / (m^2 + (beta_tilde z)^2) which never overflows
double k3_series(double x, const DerivedCoefficients& d, ComplexValue zs,
                 double w0) {
  ComplexValue bz2 = d.beta_tilde * d.z;
  bz2 *= bz2;
  ComplexValue bzs2 = d.beta_tilde * zs;
  bzs2 *= bzs2;
  ComplexValue sa{0.0, 0.0};
  ComplexValue sb{0.0, 0.0};
  double xm = 1.0;
  for (long m = 1; m <= 200000; ++m) {
    xm *= x;
    double md = static_cast<double>(m);
    ComplexValue ta = md * xm / (md * md + bz2);
    ComplexValue tb = md * xm / (md * md + bzs2);
    sa += ta;
    sb += tb;
    if (m > 8 && std::abs(ta) + std::abs(tb) <
                     1e-17 * (std::abs(sa) + std::abs(sb) + 1e-300)) {
      ComplexValue val = kI * (d.er * w0 * w0) / (kPi * d.delta) *
                         (sa / (d.z * d.z) - sb / (zs * zs));
      return val.real();
    }
  }
  throw ConvergenceError("k3 series did not converge");
}

// sum_{m>=1} (1 - x^m) W_m over the thermal poles nu_m = 2 pi m / beta;
// equals K1 + K2 + K3 with the individual t -> 0 divergences cancelled, so
// it is the only safe route for x near 1. Also the term-by-term form of the
// MatsubaraReference thermal part. Stops once the relative contribution
// drops below tol after the last real pole of the summand has been passed.
double joint_thermal_sum(double t, const BathParameters& p, double beta,
                         double tol, long cap) {
  if (t == 0.0 || p.kappa == 0.0) return 0.0;
  double w0 = p.w0;
  double er = p.kappa * p.kappa / w0;
  double bt = beta / (2.0 * kPi);
  double pref = 8.0 * er * p.gamma * w0 * w0 / beta;
  double two_p = 2.0 * (w0 * w0 - 2.0 * p.gamma * p.gamma);
  double q4 = w0 * w0 * w0 * w0;
  long m_min = static_cast<long>(std::ceil(beta * std::max(w0, p.gamma)));
  double acc = 0.0;
  for (long m = 1; m <= cap; ++m) {
    double nu = static_cast<double>(m) / bt;
    double nu2 = nu * nu;
    double wm = pref / (nu * (nu2 * nu2 + two_p * nu2 + q4));
    double term = -std::expm1(-static_cast<double>(m) * t / bt) * wm;
    acc += term;
    if (m > m_min && std::abs(term) < tol * std::abs(acc)) return acc;
  }
  throw ConvergenceError(
      "thermal pole sum: no convergence within " + std::to_string(cap) +
      " terms");
}

KTerms k_terms_with(double t, const BathParameters& p,
                    const DerivedCoefficients& d) {
  if (p.kappa == 0.0) return {0.0, 0.0, 0.0};
  double w0 = p.w0;
  ComplexValue zs = 2.0 * d.delta - d.z;
  double k1 = k1_value(d, zs, w0);
  // log(1 - x) via expm1 keeps small t exact; at t = 0 this is -inf and the
  // k3 complement +inf, the documented divergence of the split terms
  double k2 = 4.0 * d.er * p.gamma / (kPi * w0 * w0) *
              std::log(-std::expm1(-t / d.beta_tilde));
  double x = std::exp(-t / d.beta_tilde);
  double k3;
  if (x > 0.95) {
    double joint =
        joint_thermal_sum(t, p, 2.0 * kPi * d.beta_tilde, 1e-15, 1000000);
    k3 = joint - k1 - k2;
  } else {
    k3 = k3_series(x, d, zs, w0);
  }
  return {k1, k2, k3};
}

double im_g_closed(double t, double er, double w0, ComplexValue delta,
                   ComplexValue z, ComplexValue zs, double g) {
  ComplexValue br =
      (std::exp(kI * z * t) / (z * z) - std::exp(-kI * zs * t) / (zs * zs)) /
      delta;
  return 0.5 * er * w0 * w0 * br.imag() + 2.0 * er * g / (w0 * w0);
}

ComplexValue matsubara_eval(double t, const BathParameters& p, double tol) {
  if (p.zero_temperature())
    throw DomainError("MatsubaraReference requires finite beta");
  if (t == 0.0 || p.kappa == 0.0) return {0.0, 0.0};
  BathParameters q = p;
  // the 1/delta factors below cancel only in exact arithmetic; a relative
  // 1e-9 offset in gamma moves G by about the same amount, far below the
  // reference tolerance, and keeps everything finite
  if (criticality(q) < 1e-12) q.gamma = q.w0 * (1.0 + 1e-9);
  double beta = nudged_beta(q);
  double w0 = q.w0;
  double g = q.gamma;
  double er = q.kappa * q.kappa / w0;
  ComplexValue delta = std::sqrt(ComplexValue{(w0 - g) * (w0 + g), 0.0});
  ComplexValue z = delta + kI * g;
  ComplexValue zs = delta - kI * g;
  double c = 4.0 * er * g / (beta * w0 * w0);
  ComplexValue one_m_ezt = 1.0 - std::exp(kI * z * t);
  ComplexValue one_m_ezst = 1.0 - std::exp(-kI * zs * t);
  ComplexValue i0 = er * w0 * w0 / (beta * delta) *
                    (one_m_ezt / (z * z * z) + one_m_ezst / (zs * zs * zs));
  auto s_weight = [beta](ComplexValue w) {
    // (beta / 4w) coth(beta w / 2) - 1 / 2w^2; Re(beta w) >= 0 here so the
    // coth is formed from e^{-beta w} without overflow
    ComplexValue em = std::exp(-beta * w);
    ComplexValue coth = (1.0 + em) / (1.0 - em);
    return beta / (4.0 * w) * coth - 1.0 / (2.0 * w * w);
  };
  ComplexValue pole = 2.0 * er * w0 * w0 / (beta * delta) *
                      (one_m_ezt / z * s_weight(z) + one_m_ezst / zs * s_weight(zs));
  double wsum = joint_thermal_sum(t, q, beta, tol, 1000000);
  double re = (i0 + pole).real() + c * t + wsum;
  return {re, im_g_closed(t, er, w0, delta, z, zs, g)};
}

// One quarter-combination building block of the zero-temperature principal
// value integrals: A(q, t) = e^{iqt} [E1(iqt) + 2 pi i (Re q > 0, Im q > 0)].
// Imaginary-axis q is the overdamped case; there the E1/Ei real-axis limits
// are taken explicitly and the exponential products are kept in scaled form
// so arbitrarily large t cannot overflow.
ComplexValue a_term(ComplexValue q, double t) {
  if (std::abs(q.real()) <= 1e-12 * std::abs(q)) {
    double y = q.imag();
    double u = std::abs(y) * t;
    if (y > 0.0) {
      double ei = u > 600.0
                      ? ei_scaled_asym(u)
                      : std::exp(-u) *
                            specfun::exponential_integral({u, 0.0}).real();
      double dec = u > 700.0 ? 0.0 : std::exp(-u);
      return {-ei, kPi * dec};
    }
    double e1v = u > 600.0 ? e1_scaled_asym({u, 0.0}).real()
                           : std::exp(u) * specfun::e1({u, 0.0}).real();
    return {e1v, 0.0};
  }
  ComplexValue w = kI * q * t;
  ComplexValue val = std::abs(w.real()) > 600.0 ? e1_scaled_asym(w)
                                                : std::exp(w) * specfun::e1(w);
  if (q.real() > 0.0 && q.imag() > 0.0) {
    // Re w = -t Im q < 0 on this branch, the added term always decays
    if (w.real() > -700.0) val += std::exp(w) * (2.0 * kPi * kI);
  }
  return val;
}

ComplexValue q_average(ComplexValue q, double t) {
  return 0.25 * (a_term(q, t) + a_term(-q, t) +
                 std::conj(a_term(std::conj(q), t)) +
                 std::conj(a_term(-std::conj(q), t)));
}

ComplexValue zero_t_eval(double t, const BathParameters& p) {
  if (!p.zero_temperature())
    throw DomainError("ZeroT requires beta = inf; use Full at finite beta");
  if (criticality(p) < 1e-10)
    throw DomainError("ZeroT at critical damping; use ZeroTCritical");
  if (!(t > 0.0)) throw DomainError("ZeroT requires t > 0");
  if (p.kappa == 0.0) return {0.0, 0.0};
  double w0 = p.w0;
  double g = p.gamma;
  double er = p.kappa * p.kappa / w0;
  ComplexValue delta = std::sqrt(ComplexValue{(w0 - g) * (w0 + g), 0.0});
  ComplexValue z = delta + kI * g;
  ComplexValue zs = delta - kI * g;
  ComplexValue z2 = z * z;
  ComplexValue zs2 = zs * zs;
  ComplexValue pref = er * w0 * w0 / (kPi * kI * delta);
  ComplexValue bracket = -std::log(-z2) / (2.0 * z2) +
                         std::log(-zs2) / (2.0 * zs2) -
                         q_average(z, t) / z2 + q_average(zs, t) / zs2;
  double re = 4.0 * er * g / (kPi * w0 * w0) * (std::log(t) + kGammaE) +
              (pref * bracket).real();
  return {re, im_g_closed(t, er, w0, delta, z, zs, g)};
}

ComplexValue zero_t_critical_eval(double t, const BathParameters& p) {
  if (!p.zero_temperature())
    throw DomainError("ZeroTCritical requires beta = inf");
  if (criticality(p) >= 1e-10)
    throw DomainError("ZeroTCritical requires gamma = w0 within 1e-10");
  if (!(t > 0.0)) throw DomainError("ZeroTCritical requires t > 0");
  if (p.kappa == 0.0) return {0.0, 0.0};
  double w0 = p.w0;
  double er = p.kappa * p.kappa / w0;
  double x = w0 * t;
  // e^x Ei(-x) and e^{-x} Ei(x) as scaled products (asymptotic beyond the
  // exp range); Ei(-x) = -E1(x) for x > 0
  double t1 = x > 600.0
                  ? -e1_scaled_asym({x, 0.0}).real()
                  : -std::exp(x) * specfun::e1({x, 0.0}).real();
  double t2 = x > 600.0
                  ? ei_scaled_asym(x)
                  : std::exp(-x) *
                        specfun::exponential_integral({x, 0.0}).real();
  double dec = x > 700.0 ? 0.0 : std::exp(-x);
  ComplexValue sum = (2.0 - x) * t1 +
                     (x + 2.0) * ComplexValue{t2, kPi * dec} -
                     4.0 * ComplexValue{std::log(x) + kGammaE, kPi / 2.0};
  return -(er / (kPi * w0)) * sum;
}

}  // namespace

double spectral_density(double omega, const BathParameters& p) {
  p.validate();
  double d = omega * omega - p.w0 * p.w0;
  double den = d * d + 4.0 * p.gamma * p.gamma * omega * omega;
  return 8.0 * p.kappa * p.kappa * p.gamma * p.w0 * omega / den;
}

DerivedCoefficients derive(const BathParameters& p) {
  p.validate();
  double w0 = p.w0;
  bool t0 = p.zero_temperature();
  if (criticality(p) < 1e-10 && !t0)
    throw DegenerateParameterError(
        "derive: gamma within 1e-10 of w0 at finite beta; use "
        "MatsubaraReference");

  DerivedCoefficients d;
  d.er = p.kappa * p.kappa / w0;

  if (criticality(p) < 1e-10) {
    // critically damped at T = 0: delta = 0, the thermal weights a and c
    // vanish, and b = (er/delta) e^{2 i theta} -> -er/0 is kept as its
    // formal -inf limit; nothing downstream reads it (ZeroTCritical has a
    // closed form of its own)
    d.delta = {0.0, 0.0};
    d.z = {0.0, p.gamma};
    d.theta = -kI * std::log(d.z / w0);
    d.a = {0.0, 0.0};
    d.b = {-std::numeric_limits<double>::infinity(), 0.0};
    d.c = 0.0;
    d.f0sq = p.kappa > 0.0 ? 2.0 * d.er * w0 / kPi : 0.0;
    d.xi = p.kappa > 0.0 ? d.er / (2.0 * std::sqrt(d.f0sq)) : 0.0;
    d.beta_tilde = infinite_beta;
    return d;
  }

  double beta = nudged_beta(p);
  d.beta_tilde = t0 ? infinite_beta : beta / (2.0 * kPi);
  d.delta = std::sqrt(ComplexValue{(w0 - p.gamma) * (w0 + p.gamma), 0.0});
  d.z = d.delta + kI * p.gamma;
  ComplexValue zs = d.delta - kI * p.gamma;
  d.theta = -kI * std::log(d.z / w0);
  ComplexValue e2it = d.z * d.z / (w0 * w0);
  ComplexValue e2itm = (w0 * w0) / (d.z * d.z);

  if (t0) {
    d.a = {0.0, 0.0};
    d.b = d.er / d.delta * e2it;
    d.c = 0.0;
  } else {
    // e^{-beta z} and e^{-beta zs} lie on or inside the unit circle in both
    // damping regimes, so this form of a and b cannot overflow
    ComplexValue ebz = std::exp(-beta * d.z);
    ComplexValue ebzs = std::exp(-beta * zs);
    d.a = d.er / d.delta * e2itm * ebz / (1.0 - ebz);
    d.b = d.er / d.delta * e2it / (1.0 - ebzs);
    d.c = 4.0 * d.er * p.gamma / (beta * w0 * w0);
  }

  if (p.kappa == 0.0) {
    d.f0sq = 0.0;
    d.xi = 0.0;
    return d;
  }
  ComplexValue r1 = -kI * d.z;  // gamma - i delta
  ComplexValue r2 = kI * zs;    // gamma + i delta
  if (t0) {
    d.f0sq = (d.er * w0 * w0 / (kPi * kI * d.delta) * std::log(r2 / r1)).real();
  } else {
    ComplexValue dpsi = specfun::complex_digamma(1.0 + d.beta_tilde * r2) -
                        specfun::complex_digamma(1.0 + d.beta_tilde * r1);
    d.f0sq =
        2.0 * d.er / beta + (d.er * w0 * w0 / (kPi * kI * d.delta) * dpsi).real();
  }
  d.xi = d.er / (2.0 * std::sqrt(d.f0sq));
  return d;
}

ComplexValue force_autocorrelation(double t, const BathParameters& p,
                                   double tol) {
  p.validate();
  if (t < 0.0) throw DomainError("force_autocorrelation: t must be >= 0");
  if (!(tol > 0.0))
    throw DomainError("force_autocorrelation: tol must be positive");
  if (p.kappa == 0.0) return {0.0, 0.0};

  double scale = std::max(p.w0, p.gamma);
  double w = 40.0 * scale;
  // C(t) = (1/2pi) [ int_0^inf J e^{-iwt} + int_0^inf J cos(wt) 2/(e^{bw}-1) ]
  // (the coth split); the first integral gets the analytic tail beyond W
  double budget = tol * kPi;
  try {
    auto osc = [&](double x) {
      return spectral_density(x, p) * std::exp(ComplexValue{0.0, -x * t});
    };
    auto head = quadrature::integrate(osc, 0.0, w, 0.5 * budget,
                                      spectral_breakpoints(p, t, w));
    ComplexValue total = head.value + analytic_tail(t, p, w);

    if (!p.zero_temperature()) {
      double wth = 55.0 / p.beta + 5.0 * scale;
      double limit0 =
          16.0 * p.kappa * p.kappa * p.gamma / (p.beta * std::pow(p.w0, 3));
      auto thermal = [&](double x) -> ComplexValue {
        if (x <= 0.0) return {limit0, 0.0};
        return {spectral_density(x, p) * std::cos(x * t) * 2.0 /
                    std::expm1(p.beta * x),
                0.0};
      };
      auto th = quadrature::integrate(thermal, 0.0, wth, 0.5 * budget,
                                      spectral_breakpoints(p, t, wth));
      total += th.value;
    }
    return total / (2.0 * kPi);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("force_autocorrelation: ") + e.what());
  }
}

ComplexValue g_oracle(double t, const BathParameters& p, double tol) {
  p.validate();
  if (t < 0.0) throw DomainError("g_oracle: t must be >= 0");
  if (!(tol > 0.0)) throw DomainError("g_oracle: tol must be positive");
  double er = p.kappa * p.kappa / p.w0;
  if (t == 0.0 || p.kappa == 0.0) return {0.0, er * t};
  // int_0^t dt1 int_0^t1 dt2 C(t2) = int_0^t (t - s) C(s) ds; the (t - s)
  // weight bounds the inner tolerance contribution by inner * t^2 / 2
  double inner = std::max(0.45 * tol / (t * t), 1e-15);
  auto f = [&](double s) { return (t - s) * force_autocorrelation(s, p, inner); };
  std::vector<double> bp;
  double step = kPi / (2.0 * std::max(p.w0, p.gamma));
  for (double s = step; s < t && bp.size() < 2000; s += step) bp.push_back(s);
  auto r = quadrature::integrate(f, 0.0, t, 0.5 * tol, bp);
  return r.value + kI * (er * t);
}

KTerms k_terms(double t, const BathParameters& p) {
  p.validate();
  if (t < 0.0) throw DomainError("k_terms: t must be >= 0");
  if (p.zero_temperature()) throw DomainError("k_terms requires finite beta");
  DerivedCoefficients d = derive(p);
  return k_terms_with(t, p, d);
}

ComplexValue g_eval(double t, const BathParameters& p,
                    const CorrelationModel& m) {
  p.validate();
  if (t < 0.0) throw DomainError("g_eval: t must be >= 0");
  using V = CorrelationModel::Variant;
  switch (m.variant) {
    case V::ShortTime: {
      DerivedCoefficients d = derive(p);
      return {d.f0sq * t * t, d.er * t};
    }
    case V::F3:
    case V::F3b: {
      if (p.zero_temperature() && criticality(p) < 1e-10)
        throw DomainError("F3 coefficients diverge at critical damping, T = 0");
      DerivedCoefficients d = derive(p);
      return f3_value(t, d);
    }
    case V::Full: {
      if (p.zero_temperature())
        throw DomainError(
            "Full requires finite beta; use ZeroT / ZeroTCritical");
      if (t == 0.0) return {0.0, 0.0};
      // near-critical 1/delta cancellations are removable but cost ten
      // digits; the thermal-sum reference is exact there
      if (criticality(p) < 1e-6)
        return matsubara_eval(t, p, m.matsubara_tolerance);
      DerivedCoefficients d = derive(p);
      KTerms k = k_terms_with(t, p, d);
      return f3_value(t, d) + ComplexValue{k.k1 + k.k2 + k.k3, 0.0};
    }
    case V::ZeroT:
      return zero_t_eval(t, p);
    case V::ZeroTCritical:
      return zero_t_critical_eval(t, p);
    case V::MatsubaraReference:
      if (t == 0.0) return {0.0, 0.0};
      return matsubara_eval(t, p, m.matsubara_tolerance);
  }
  throw DomainError("g_eval: unknown model variant");
}

}  // namespace sbm::bath
