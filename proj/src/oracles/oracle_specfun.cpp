#include "oracles/oracle_specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace sbm::oracles {
namespace {

constexpr LD kPi = 3.14159265358979323846264338327950288L;
constexpr LD kEulerGamma = 0.57721566490153286060651209008240243L;
constexpr LD kSqrtPi = 1.77245385090551602729816748334114518L;

// adaptive Simpson, long double, complex integrand on a real interval;
// tol is an absolute budget for the subinterval and halves on each split
template <typename F>
CLD simpson_rec(const F& f, LD a, LD b, CLD fa, CLD fm, CLD fb, CLD whole,
                LD tol, int depth, long& evals) {
  if (evals > 60000000L) {
    throw std::runtime_error("oracle quadrature: evaluation budget exhausted");
  }
  LD m = (a + b) / 2;
  LD lm = (a + m) / 2, rm = (m + b) / 2;
  CLD flm = f(lm), frm = f(rm);
  evals += 2;
  CLD left = (m - a) / 6 * (fa + 4.0L * flm + fm);
  CLD right = (b - m) / 6 * (fm + 4.0L * frm + fb);
  CLD delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) {
    return left + right + delta / 15.0L;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, evals) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, evals);
}

// rel_tol is relative to the overall integral scale (or scale_hint when the
// caller knows this piece is a small tail of something larger), so panels
// whose contribution is negligible are accepted immediately
template <typename F>
CLD quad(const F& f, LD a, LD b, LD rel_tol = 1e-17L, LD scale_hint = 0.0L) {
  if (a == b) return 0.0L;
  const int n = 8;
  LD x[n + 1];
  CLD fx[n + 1], fmid[n], w[n];
  for (int i = 0; i <= n; ++i) {
    x[i] = a + (b - a) * i / n;
    fx[i] = f(x[i]);
  }
  LD scale = 0;
  for (int i = 0; i < n; ++i) {
    fmid[i] = f((x[i] + x[i + 1]) / 2);
    w[i] = (x[i + 1] - x[i]) / 6 * (fx[i] + 4.0L * fmid[i] + fx[i + 1]);
    scale += std::abs(w[i]);
  }
  scale = std::max(scale, scale_hint);
  if (scale == 0.0L) scale = 1e-300L;
  long evals = 0;
  CLD total = 0;
  for (int i = 0; i < n; ++i) {
    LD budget = rel_tol * std::max(std::abs(w[i]), scale / n);
    total += simpson_rec(f, x[i], x[i + 1], fx[i], fmid[i], fx[i + 1], w[i],
                         budget, 40, evals);
  }
  return total;
}

CLD cld(std::complex<double> z) { return CLD((LD)z.real(), (LD)z.imag()); }
std::complex<double> cd(CLD z) {
  return {(double)z.real(), (double)z.imag()};
}

}  // namespace

// Binet's second integral after shifting Re z up by recurrence:
// psi(z) = log z - 1/(2z) - 2 int_0^inf t / ((t^2+z^2)(e^{2 pi t}-1)) dt
std::complex<double> digamma_oracle(std::complex<double> zin) {
  CLD z = cld(zin);
  CLD acc = 0;
  int guard = 0;
  while (z.real() < std::abs(z.imag()) + 10 || z.real() < 10) {
    if (std::abs(z) < 1e-13L) throw std::runtime_error("digamma_oracle pole");
    acc -= 1.0L / z;
    z += 1.0L;
    if (++guard > 500) throw std::runtime_error("digamma_oracle shift overflow");
  }
  auto integrand = [&](LD t) -> CLD {
    if (t == 0.0L) return CLD(1.0L / (2 * kPi)) / (z * z);
    return t / ((t * t + z * z) * std::expm1(2 * kPi * t));
  };
  CLD integral = quad(integrand, 0.0L, 30.0L, 3e-17L);
  CLD val = std::log(z) - 0.5L / z - 2.0L * integral;
  return cd(val + acc);
}

// E1 by quadrature for Re z > 0, by the entire series elsewhere (the oracle
// grid keeps |z| moderate there so the cancellation stays harmless in long
// double)
std::complex<double> e1_oracle(std::complex<double> zin) {
  CLD z = cld(zin);
  if (z.real() > 0.0L) {
    // E1(z) = e^{-z} int_0^inf e^{-z t}/(1+t) dt
    LD cut = 60.0L / z.real();
    auto integrand = [&](LD t) -> CLD { return std::exp(-z * t) / (1.0L + t); };
    CLD integral = quad(integrand, 0.0L, cut);
    return cd(std::exp(-z) * integral);
  }
  if (std::abs(z) > 14.0L) {
    throw std::runtime_error("e1_oracle: series region exceeded");
  }
  CLD sum = 0, term = 1;
  for (int k = 1; k < 120; ++k) {
    term *= -z / (LD)k;
    sum -= term / (LD)k;
  }
  CLD val = -kEulerGamma - std::log(z) + sum;
  if (zin.imag() == 0.0 && zin.real() < 0.0) {
    // principal value on the cut, approached from above
    val = CLD(val.real(), -kPi);
  }
  return cd(val);
}

double ei_oracle(double x) {
  if (x == 0.0) throw std::runtime_error("ei_oracle: pole at 0");
  if (x > 0) {
    // all-positive-term series, no cancellation
    LD sum = 0, term = 1;
    for (int k = 1; k < 400; ++k) {
      term *= (LD)x / k;
      LD add = term / k;
      sum += add;
      if (add < 1e-24L * sum && k > 8) break;
    }
    return (double)(kEulerGamma + std::log((LD)x) + sum);
  }
  return -e1_oracle(-x).real();
}

namespace {

// Voigt-type integral, valid for Im z > 0:
// w(z) = (i/pi) int e^{-t^2} / (z - t) dt
CLD faddeeva_integral(CLD z) {
  LD lo = std::min((LD)0, z.real()) - 9.0L;
  LD hi = std::max((LD)0, z.real()) + 9.0L;
  auto integrand = [&](LD t) -> CLD { return std::exp(-t * t) / (z - t); };
  CLD integral = quad(integrand, lo, hi);
  return CLD(0, 1) / kPi * integral;
}

// Maclaurin series w(z) = sum (iz)^n / Gamma(n/2 + 1); usable while the
// e^{|z|^2} cancellation stays below long double resolution
CLD faddeeva_series(CLD z) {
  CLD iz = CLD(0, 1) * z;
  // Gamma(n/2+1) by recurrence, separately for even and odd n
  CLD sum = 0, p = 1;
  LD geven = 1.0L;          // Gamma(1), n=0
  LD godd = kSqrtPi / 2;    // Gamma(3/2), n=1
  for (int n = 0; n < 220; ++n) {
    LD g = (n % 2 == 0) ? geven : godd;
    CLD term = p / g;
    sum += term;
    p *= iz;
    if (n % 2 == 0) {
      geven *= (LD)(n / 2 + 1);  // Gamma(n/2+2) = (n/2+1) Gamma(n/2+1)
    } else {
      godd *= (LD)(n / 2) + 1.5L;
    }
    if (std::abs(term) < 1e-30L * (1.0L + std::abs(sum)) && n > 10) break;
  }
  return sum;
}

}  // namespace

std::complex<double> faddeeva_oracle(std::complex<double> zin) {
  CLD z = cld(zin);
  if (std::abs(z) <= 3.7L) return cd(faddeeva_series(z));
  if (z.imag() >= 0.4L) return cd(faddeeva_integral(z));
  if (z.imag() < -0.4L) {
    throw std::runtime_error("faddeeva_oracle: deep lower half plane not covered");
  }
  // near the real axis: start high where the integral is well conditioned and
  // integrate w' = -2 z w + 2i/sqrt(pi) back down with RK4
  CLD z0(z.real(), 1.5L);
  CLD w = faddeeva_integral(z0);
  auto rhs = [](CLD zz, CLD ww) -> CLD {
    return -2.0L * zz * ww + CLD(0, 2.0L / kSqrtPi);
  };
  int nstep = 20000 * (int)std::max(1.0L, std::abs(z) / 3);
  CLD dz = (z - z0) / (LD)nstep;
  CLD cur = z0;
  for (int i = 0; i < nstep; ++i) {
    CLD k1 = rhs(cur, w);
    CLD k2 = rhs(cur + dz / 2.0L, w + dz / 2.0L * k1);
    CLD k3 = rhs(cur + dz / 2.0L, w + dz / 2.0L * k2);
    CLD k4 = rhs(cur + dz, w + dz * k3);
    w += dz / 6.0L * (k1 + 2.0L * k2 + 2.0L * k3 + k4);
    cur += dz;
  }
  return cd(w);
}

std::complex<double> erfi_oracle(std::complex<double> zin) {
  CLD z = cld(zin);
  // straight-segment quadrature of (2/sqrt(pi)) int_0^z e^{t^2} dt
  auto integrand = [&](LD s) -> CLD { return std::exp(s * s * z * z); };
  CLD integral = z * quad(integrand, 0.0L, 1.0L);
  return cd(2.0L / kSqrtPi * integral);
}

double dawson_oracle(double xin) {
  LD x = std::fabs((LD)xin);
  if (x == 0.0L) return 0.0;
  // e^{-x^2} int_0^x e^{t^2} dt = int_0^x e^{-u(2x-u)} du with u = x - t
  LD cut = std::min(x, 50.0L / (2 * x));
  auto integrand = [&](LD u) -> CLD { return std::exp(-u * (2 * x - u)); };
  LD val = quad(integrand, 0.0L, cut).real();
  return xin < 0 ? -(double)val : (double)val;
}

std::complex<double> gamma_upper_oracle(std::complex<double> sin_,
                                        std::complex<double> xin) {
  CLD s = cld(sin_), x = cld(xin);
  if (x == CLD(0, 0)) throw std::runtime_error("gamma_upper_oracle: use Gamma(s)");
  // straight path from x to a far point R on the positive real axis, then
  // along the real axis; both segments avoid the negative real axis for the
  // oracle's grid (Re x > 0 or Im x != 0 with the elbow at |x|)
  LD R = 60.0L + 4.0L * std::abs(s) * std::abs(s);
  auto term = [&](CLD t) -> CLD {
    return std::exp((s - 1.0L) * std::log(t) - t);
  };
  CLD leg1 = 0;
  if (x != CLD(R, 0)) {
    CLD d = CLD(R, 0) - x;
    auto f1 = [&](LD u) -> CLD { return term(x + u * d) * d; };
    leg1 = quad(f1, 0.0L, 1.0L);
  }
  auto f2 = [&](LD t) -> CLD { return term(CLD(t, 0)); };
  // the far tail is smaller than the elbow value by e^{-R}; the scale hint
  // lets the quadrature accept it cheaply
  CLD leg2 = quad(f2, R, R + 90.0L, 1e-17L, std::abs(leg1));
  return cd(leg1 + leg2);
}

std::complex<double> binc_oracle(double xin, std::complex<double> ain) {
  LD x = (LD)xin;
  CLD a = cld(ain);
  if (!(xin > 0.0 && xin < 1.0)) throw std::runtime_error("binc_oracle: x domain");
  CLD shift = 0;
  int guard = 0;
  while (a.real() <= 0.25L) {
    // one term peeled off: B(x,a) = x^a / a + B(x, a+1)
    shift += std::exp(a * std::log(x)) / a;
    a += 1.0L;
    if (++guard > 64) throw std::runtime_error("binc_oracle shift overflow");
  }
  // u = x e^{-tau}: B(x,a) = x^a int_0^inf e^{-a tau} / (1 - x e^{-tau}) dtau
  LD cut = 60.0L / a.real();
  auto integrand = [&](LD tau) -> CLD {
    return std::exp(-a * tau) / (1.0L - x * std::exp(-tau));
  };
  CLD integral = quad(integrand, 0.0L, cut);
  return cd(shift + std::exp(a * std::log(x)) * integral);
}

}  // namespace sbm::oracles
