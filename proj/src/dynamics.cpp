#include "sbm/dynamics.hpp"

#include <cmath>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sbm/bath.hpp"
#include "sbm/specfun.hpp"

namespace sbm::dynamics {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr ComplexValue kI{0.0, 1.0};

double criticality(const BathParameters& p) {
  return std::abs(p.gamma - p.w0) / p.w0;
}

// n = 0 truncation of the thermal exponential series of exp(-G); see the
// header note on the t = 0 normalization.
double f3b_kernel(double t, double v, const BathParameters& p) {
  auto d = bath::derive(p);
  ComplexValue zs = 2.0 * d.delta - d.z;
  ComplexValue r2 = kI * zs;
  ComplexValue arg = -(d.a + d.b) + d.b * std::exp(-r2 * t) - d.c * t;
  if (arg.real() > 700.0)
    throw OverflowError("niba_kernel: blip-linearized exponent overflows");
  return v * v * std::exp(arg).real();
}

}  // namespace

double niba_kernel(double t, const KernelSpec& k, const BathParameters& p) {
  p.validate();
  if (t < 0.0) throw DomainError("niba_kernel: t must be >= 0");
  if (k.model.variant == CorrelationModel::Variant::F3b)
    return f3b_kernel(t, k.v, p);
  double v2 = k.v * k.v;
  // G(0) = 0 for every retained model, so the t = 0 value needs no bath call
  // (and the zero-temperature closed forms only exist for t > 0)
  if (t == 0.0 || p.kappa == 0.0) return v2;
  ComplexValue g = bath::g_eval(t, p, k.model);
  if (g.real() < -700.0)
    throw OverflowError("niba_kernel: exp(-G) overflows, Re G < -700");
  return v2 * std::exp(-g.real()) * std::cos(g.imag());
}

std::vector<double> tabulate_kernel_serial(const KernelSpec& k,
                                           const BathParameters& p, double h,
                                           std::size_t n) {
  if (!(h > 0.0)) throw DomainError("tabulate_kernel: h must be positive");
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = niba_kernel(i * h, k, p);
  return out;
}

std::vector<double> tabulate_kernel(const KernelSpec& k,
                                    const BathParameters& p, double h,
                                    std::size_t n) {
#ifdef _OPENMP
  if (!(h > 0.0)) throw DomainError("tabulate_kernel: h must be positive");
  std::vector<double> out(n + 1);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i <= static_cast<long long>(n); ++i) {
    try {
      out[i] = niba_kernel(i * h, k, p);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
#else
  return tabulate_kernel_serial(k, p, h, n);
#endif
}

double default_step(const BathParameters& p, double t_f) {
  p.validate();
  if (!(t_f > 0.0)) throw DomainError("default_step: t_f must be positive");
  auto d = bath::derive(p);
  double scale = std::min(1.0 / p.w0, 1.0 / p.v);
  if (d.f0sq > 0.0) scale = std::min(scale, 1.0 / std::sqrt(d.f0sq));
  if (!p.zero_temperature()) scale = std::min(scale, d.beta_tilde);
  double h = scale / 40.0;
  // cost floor: never more than 1e5 steps, never fewer than 100
  h = std::max(h, t_f / 100000.0);
  return std::min(h, t_f / 100.0);
}

PopulationTrace solve_volterra(const KernelSpec& k, const BathParameters& p,
                               double t_f, double h) {
  p.validate();
  if (!(t_f > 0.0)) throw DomainError("solve_volterra: t_f must be positive");
  if (!(h > 0.0) || h > t_f / 100.0 * (1.0 + 1e-12))
    throw StepSizeError("solve_volterra: need 0 < h <= t_f / 100");
  const std::size_t n = static_cast<std::size_t>(std::ceil(t_f / h - 1e-9));

  std::vector<double> local;
  const std::vector<double>* kp;
  if (k.tabulation) {
    if (k.tabulation->size() < n + 1)
      throw MismatchError("solve_volterra: tabulation shorter than the grid");
    kp = &*k.tabulation;
  } else {
    local = tabulate_kernel(k, p, h, n);
    kp = &local;
  }
  const std::vector<double>& K = *kp;

  // compact-support detection: 50 consecutive samples below 1e-15 v^2
  const double thresh = 1e-15 * k.v * k.v;
  std::size_t support_n = n + 1;
  double support_t = std::numeric_limits<double>::infinity();
  if (thresh > 0.0) {
    std::size_t run = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (std::abs(K[i]) < thresh) {
        if (++run == 50) {
          support_n = i + 1 - run;
          support_t = support_n * h;
          break;
        }
      } else {
        run = 0;
      }
    }
  }

  std::vector<double> P(n + 1), f(n + 1), times(n + 1);
  P[0] = p.p0;
  f[0] = 0.0;
  times[0] = 0.0;
  const double bound = std::abs(p.p0) + 0.05;

  // trapezoid weights over the clamped window; the j = i endpoint is split
  // out so predictor and corrector share one history pass
  auto conv_base = [&](std::size_t i) {
    std::size_t lo = (support_n <= i) ? i - support_n + 1 : 0;
    double s = 0.0;
    if (lo == 0) {
      s += 0.5 * K[i] * P[0];
      lo = 1;
    }
    for (std::size_t j = lo; j < i; ++j) s += K[i - j] * P[j];
    return s;
  };

  for (std::size_t i = 0; i < n; ++i) {
    double base = conv_base(i + 1);
    double pred = P[i] + h * f[i];
    double fpred = -h * (base + 0.5 * K[0] * pred);
    double next = P[i] + 0.5 * h * (f[i] + fpred);
    P[i + 1] = next;
    f[i + 1] = -h * (base + 0.5 * K[0] * next);
    times[i + 1] = (i + 1) * h;
    if (!(std::abs(next) <= bound))
      throw InstabilityError(
          "solve_volterra: trace left the contraction bound, reduce h");
  }

  PopulationTrace trace;
  trace.times = std::move(times);
  trace.values = std::move(P);
  trace.model = to_string(k.model.variant);
  trace.step = h;
  trace.meta.t_f = n * h;
  trace.meta.h = h;
  trace.meta.n_steps = n;
  trace.meta.kernel_support = support_t;
  trace.meta.store_stride = 1;
  return trace;
}

double markov_kernel_integral(double t, const BathParameters& p) {
  p.validate();
  if (t < 0.0) throw DomainError("markov_kernel_integral: t must be >= 0");
  if (p.kappa == 0.0)
    throw DegenerateParameterError(
        "markov_kernel_integral: kappa must be positive");
  if (t == 0.0) return 0.0;
  auto d = bath::derive(p);
  const double a = d.f0sq;
  const double xi = d.xi;
  const double y = std::sqrt(a) * t;
  // int_0^t v^2 e^{-a s^2} cos(er s) ds
  //   = v^2 sqrt(pi)/(2 sqrt(a)) [e^{-xi^2} - e^{-y^2} Re e^{2 i xi y} w(xi+iy)]
  double exi2 = xi * xi > 700.0 ? 0.0 : std::exp(-xi * xi);
  double ey2 = y * y > 700.0 ? 0.0 : std::exp(-y * y);
  ComplexValue w = specfun::faddeeva({xi, y});
  ComplexValue phase = std::exp(ComplexValue{0.0, 2.0 * xi * y});
  double core = exi2 - ey2 * (phase * w).real();
  return p.v * p.v * std::sqrt(kPi) / (2.0 * std::sqrt(a)) * core;
}

double markov_population(double t, const BathParameters& p) {
  p.validate();
  if (t < 0.0) throw DomainError("markov_population: t must be >= 0");
  if (p.kappa == 0.0)
    throw DegenerateParameterError("markov_population: kappa must be positive");
  auto d = bath::derive(p);
  const double a = d.f0sq;
  const double xi = d.xi;
  const double y = std::sqrt(a) * t;
  double exi2 = xi * xi > 700.0 ? 0.0 : std::exp(-xi * xi);
  double ey2 = y * y > 700.0 ? 0.0 : std::exp(-y * y);
  ComplexValue W{xi, y};
  ComplexValue w = specfun::faddeeva(W);
  ComplexValue phase = std::exp(ComplexValue{0.0, 2.0 * xi * y});
  // sqrt(pi) e^{-xi^2} Re[W erfi(W)] rewritten through w so e^{xi^2} never
  // appears:  e^{-xi^2} Re[W erfi W] = -y e^{-xi^2} - Re[i W e^{-y^2+2i xi y} w(W)]
  double re_werfi = -y * exi2 - (kI * W * (ey2 * phase) * w).real();
  double bracket = 1.0 - 2.0 * xi * specfun::dawson(xi) -
                   ey2 * std::cos(d.er * t) + std::sqrt(kPi) * re_werfi;
  return p.p0 * std::exp(p.v * p.v / (2.0 * a) * bracket);
}

namespace {

// sum_k b^k / (k! (rho + k)); |rho + k| is bounded below by (Re s + c)/|r2|
// for Re s > 0, so no term can blow up. Terms still grow to ~e^{|b|} before
// the factorial wins; peak records the largest one so the caller can judge
// how many digits the alternation burned.
ComplexValue lower_series(ComplexValue rho, ComplexValue b, double* peak_out) {
  ComplexValue term = 1.0;
  ComplexValue acc = 1.0 / rho;
  double peak = std::abs(acc);
  for (int k = 1; k < 100000; ++k) {
    term *= b / static_cast<double>(k);
    ComplexValue contrib = term / (rho + static_cast<double>(k));
    acc += contrib;
    peak = std::max(peak, std::abs(contrib));
    if (static_cast<double>(k) > std::abs(b) &&
        std::abs(contrib) < 1e-18 * (std::abs(acc) + 1e-300)) {
      if (peak_out) *peak_out = peak;
      return acc;
    }
  }
  throw ConvergenceError("laplace_k_f3: inner thermal series stalled");
}

ComplexValue upper_printed(ComplexValue rho, ComplexValue b) {
  ComplexValue mb = -b;
  return std::pow(mb, rho) * specfun::incomplete_gamma_upper(rho, mb);
}

}  // namespace

ComplexValue laplace_k_f3(ComplexValue s, const BathParameters& p, int n_max,
                          GammaConvention convention, double* truncation) {
  p.validate();
  if (!(s.real() > 0.0)) throw DomainError("laplace_k_f3: need Re s > 0");
  if (n_max < 0) throw DomainError("laplace_k_f3: n_max must be >= 0");
  if (p.zero_temperature() && criticality(p) < 1e-10)
    throw DomainError(
        "laplace_k_f3: no thermal-series transform at critical damping, T = 0");
  auto d = bath::derive(p);
  if (std::abs(d.b) > 500.0)
    throw OverflowError("laplace_k_f3: thermal coefficient b too large");
  ComplexValue zs = 2.0 * d.delta - d.z;
  ComplexValue r1 = -kI * d.z;
  ComplexValue r2 = kI * zs;
  ComplexValue pref = -(d.a + d.b);
  if (pref.real() > 700.0)
    throw OverflowError("laplace_k_f3: exp(-(a+b)) overflows");
  const double v2 = p.v * p.v;

  double worst_rel = 0.0;
  auto F = [&](ComplexValue sv) {
    // peak tracks the largest intermediate anywhere in the nested sums,
    // scaled by the outer weight it enters with; peak / |sum| is the
    // condition number of the whole evaluation
    double peak = 0.0;
    auto inner_at = [&](int n, double weight) {
      ComplexValue rho = (sv + d.c + static_cast<double>(n) * r1) / r2;
      ComplexValue in;
      if (convention == GammaConvention::LowerSeries) {
        double ipeak = 0.0;
        in = lower_series(rho, d.b, &ipeak);
        peak = std::max(peak, weight * ipeak / std::abs(r2));
      } else {
        in = upper_printed(rho, d.b);
      }
      return in / r2;
    };
    ComplexValue apow = 1.0;  // a^n / n!
    ComplexValue acc = 0.0;
    double rel = 1.0;
    bool converged = false;
    int n = 0;
    for (;; ++n) {
      ComplexValue term = apow * inner_at(n, std::abs(apow));
      acc += term;
      peak = std::max(peak, std::abs(term));
      rel = std::abs(term) / (std::abs(acc) + 1e-300);
      if (rel < 1e-12) {
        converged = true;
        break;
      }
      if (n == n_max) break;
      apow *= d.a / static_cast<double>(n + 1);
    }
    if (std::abs(acc) < 1e-13 * peak)
      throw ConvergenceError(
          "laplace_k_f3: thermal series cancellation exhausts double "
          "precision");
    if (!converged) {
      // the truncation estimate is the first omitted term; n_max = 0 is the
      // deliberate blip-linearized cut and must not be treated as a failure
      ComplexValue next_w = apow * (d.a / static_cast<double>(n + 1));
      ComplexValue omitted = next_w * inner_at(n + 1, std::abs(next_w));
      rel = std::abs(omitted) / (std::abs(acc) + 1e-300);
      if (n_max > 0 && rel >= 1e-9)
        throw ConvergenceError(
            "laplace_k_f3: thermal series still contributing at n_max");
    }
    worst_rel = std::max(worst_rel, rel);
    return v2 * std::exp(pref) * acc;
  };

  ComplexValue out;
  if (s.imag() == 0.0) {
    out = {F(s).real(), 0.0};
  } else {
    out = 0.5 * (F(s) + std::conj(F(std::conj(s))));
  }
  if (truncation) *truncation = worst_rel;
  return out;
}

ComplexValue laplace_p(ComplexValue s, ComplexValue kernel_transform) {
  ComplexValue den = s + kernel_transform;
  if (den == ComplexValue{0.0, 0.0})
    throw PoleError("laplace_p: s + K(s) vanishes");
  return 1.0 / den;
}

ComplexValue laplace_p_st(ComplexValue s, const BathParameters& p) {
  p.validate();
  if (!(s.real() > 0.0)) throw DomainError("laplace_p_st: need Re s > 0");
  if (p.kappa == 0.0) {
    // Gaussian kernel degenerates to the constant v^2; transform is exact
    return 1.0 / (s + p.v * p.v / s);
  }
  auto d = bath::derive(p);
  const double sa = std::sqrt(d.f0sq);
  ComplexValue kt = p.v * p.v * std::sqrt(kPi) / (4.0 * sa) *
                    (specfun::faddeeva((d.er + kI * s) / (2.0 * sa)) +
                     specfun::faddeeva((-d.er + kI * s) / (2.0 * sa)));
  return laplace_p(s, kt);
}

}  // namespace sbm::dynamics
