#include "oracle_dynamics.hpp"

#include <cmath>
#include <cstddef>

#include "sbm/bath.hpp"
#include "sbm/quadrature.hpp"

namespace sbm::oracles {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Composite quadrature of g_j = kv[i-j] * P_j over j = 0..i on a uniform
// grid: Simpson panels, with a three-eighths block absorbing the odd panel.
// trial stands in for P_i so the implicit corrector can re-evaluate.
double memory_integral(const std::vector<double>& kv,
                       const std::vector<double>& pv, long i, double trial,
                       double h) {
  auto g = [&](long j) { return kv[i - j] * (j == i ? trial : pv[j]); };
  if (i == 0) return 0.0;
  if (i == 1) return h / 2.0 * (g(0) + g(1));
  if (i == 2) return h / 3.0 * (g(0) + 4.0 * g(1) + g(2));
  double acc = 0.0;
  long start = 0;
  if (i % 2 == 1) {
    acc += 3.0 * h / 8.0 * (g(0) + 3.0 * g(1) + 3.0 * g(2) + g(3));
    start = 3;
    if (i == 3) return acc;
  }
  double ends = g(start) + g(i);
  double s4 = 0.0, s2 = 0.0;
  for (long j = start + 1; j < i; j += 2) s4 += g(j);
  for (long j = start + 2; j < i; j += 2) s2 += g(j);
  return acc + h / 3.0 * (ends + 4.0 * s4 + 2.0 * s2);
}

}  // namespace

std::vector<double> volterra_oracle(const std::function<double(double)>& kernel,
                                    double p0, double t_f, double h) {
  if (!(t_f > 0.0) || !(h > 0.0))
    throw DomainError("volterra_oracle: need t_f > 0 and h > 0");
  long n = static_cast<long>(std::ceil(t_f / h - 1e-9));
  if (n < 8) throw DomainError("volterra_oracle: too few steps");

  std::vector<double> kv(n + 1), pv(n + 1), fv(n + 1);
  for (long i = 0; i <= n; ++i) kv[i] = kernel(i * h);
  pv[0] = p0;
  fv[0] = 0.0;

  // Startup: first three coarse steps on a 256x refined trapezoid
  // predictor-corrector grid. Its O((h/256)^2) error sits far below the
  // O(h^4) target of the main loop.
  {
    const int sub = 256;
    const double hs = h / sub;
    const long m = 3 * sub;
    std::vector<double> kf(m + 1), pf(m + 1), ff(m + 1);
    for (long j = 0; j <= m; ++j) kf[j] = kernel(j * hs);
    pf[0] = p0;
    ff[0] = 0.0;
    for (long j = 0; j < m; ++j) {
      auto mem = [&](double trial) {
        double s = 0.5 * kf[j + 1] * pf[0] + 0.5 * kf[0] * trial;
        for (long l = 1; l <= j; ++l) s += kf[j + 1 - l] * pf[l];
        return hs * s;
      };
      double cor = pf[j] + hs * ff[j];
      double fn = 0.0;
      for (int sweep = 0; sweep < 3; ++sweep) {
        fn = -mem(cor);
        cor = pf[j] + 0.5 * hs * (ff[j] + fn);
      }
      pf[j + 1] = cor;
      ff[j + 1] = -mem(cor);
    }
    for (int i = 1; i <= 3; ++i) {
      pv[i] = pf[i * sub];
      fv[i] = ff[i * sub];
    }
  }

  for (long i = 3; i < n; ++i) {
    double pred = pv[i] + h / 24.0 * (55.0 * fv[i] - 59.0 * fv[i - 1] +
                                      37.0 * fv[i - 2] - 9.0 * fv[i - 3]);
    double cor = pred;
    double fn = 0.0;
    for (int sweep = 0; sweep < 2; ++sweep) {
      fn = -memory_integral(kv, pv, i + 1, cor, h);
      cor = pv[i] + h / 24.0 * (9.0 * fn + 19.0 * fv[i] - 5.0 * fv[i - 1] +
                                fv[i - 2]);
    }
    pv[i + 1] = cor;
    fv[i + 1] = -memory_integral(kv, pv, i + 1, cor, h);
  }
  return pv;
}

double markov_kbar_oracle(double t, const BathParameters& p, double tol) {
  p.validate();
  if (t < 0.0) throw DomainError("markov_kbar_oracle: t must be >= 0");
  if (t == 0.0) return 0.0;
  auto d = bath::derive(p);
  const double a = d.f0sq;
  const double er = d.er;
  const double v2 = p.v * p.v;
  auto f = [&](double s) -> ComplexValue {
    return v2 * std::exp(-a * s * s) * std::cos(er * s);
  };
  std::vector<double> marks;
  if (er > 0.0) {
    double step = kPi / er;
    for (double m = step; m < t; m += step) {
      marks.push_back(m);
      if (marks.size() > 3000) break;
    }
  }
  return quadrature::integrate(f, 0.0, t, tol, marks).value.real();
}

std::vector<double> markov_ode_oracle(const std::function<double(double)>& kbar,
                                      double p0, double t_f, double h) {
  if (!(t_f > 0.0) || !(h > 0.0))
    throw DomainError("markov_ode_oracle: need t_f > 0 and h > 0");
  long n = static_cast<long>(std::ceil(t_f / h - 1e-9));
  std::vector<double> pv(n + 1);
  pv[0] = p0;
  auto rhs = [&](double t, double y) { return -kbar(t) * y; };
  for (long i = 0; i < n; ++i) {
    double t = i * h;
    double y = pv[i];
    double k1 = rhs(t, y);
    double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    double k4 = rhs(t + h, y + h * k3);
    pv[i + 1] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return pv;
}

ComplexValue laplace_oracle(const std::function<double(double)>& f,
                            ComplexValue s, double tol) {
  if (!(s.real() > 0.0)) throw DomainError("laplace_oracle: need Re s > 0");
  const double cut = 40.0 / s.real();
  auto g = [&](double t) -> ComplexValue { return f(t) * std::exp(-s * t); };
  std::vector<double> marks;
  if (s.imag() != 0.0) {
    double step = kPi / std::abs(s.imag());
    for (double m = step; m < cut; m += step) {
      marks.push_back(m);
      if (marks.size() > 3000) break;
    }
  }
  return quadrature::integrate(g, 0.0, cut, tol, marks).value;
}

ComplexValue trace_laplace(const std::vector<double>& times,
                           const std::vector<double>& values, ComplexValue s) {
  if (times.size() != values.size() || times.size() < 2)
    throw DomainError("trace_laplace: malformed trace");
  ComplexValue acc = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    double dt = times[i + 1] - times[i];
    ComplexValue g0 = values[i] * std::exp(-s * times[i]);
    ComplexValue g1 = values[i + 1] * std::exp(-s * times[i + 1]);
    acc += 0.5 * dt * (g0 + g1);
  }
  return acc;
}

}  // namespace sbm::oracles
