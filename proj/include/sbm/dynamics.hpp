#pragma once

#include <cstddef>
#include <vector>

#include "sbm/types.hpp"

namespace sbm::dynamics {

// Memory kernel K(t) = Re[v^2 exp(-G(t))] with G evaluated under the
// spelled model. The blip-linearized model is the exception: there the
// n = 0 truncation of the thermal exponential series is used directly,
//   K(t) = v^2 Re[e^{-(a+b)} exp(b e^{-r2 t} - c t)],  r2 = i (2 delta - z),
// which costs the t = 0 normalization a factor Re e^{-a} but matches the
// closed-form Laplace transform term by term.
double niba_kernel(double t, const KernelSpec& k, const BathParameters& p);

// Kernel samples on the uniform grid i*h, i = 0..n. The default entry point
// parallelizes over grid points with OpenMP when available; the serial
// variant is the reference the parallel one is tested against.
std::vector<double> tabulate_kernel(const KernelSpec& k,
                                    const BathParameters& p, double h,
                                    std::size_t n);
std::vector<double> tabulate_kernel_serial(const KernelSpec& k,
                                           const BathParameters& p, double h,
                                           std::size_t n);

// Step for the Volterra solver: the fastest of the oscillator, tunneling,
// short-time-variance and thermal time scales divided by 40, floored so a
// trace never exceeds 1e5 steps and capped by the t_f/100 precondition.
double default_step(const BathParameters& p, double t_f);

// P'(t) = -int_0^t K(t-s) P(s) ds, P(0) = p0, by composite trapezoidal
// convolution with a single Heun corrector per step (second order). Uses
// k.tabulation when present, otherwise tabulates the kernel itself. Once
// |K| stays below 1e-15 v^2 for 50 consecutive samples the kernel is
// treated as compactly supported and the convolution window is clamped;
// meta.kernel_support records the cut.
PopulationTrace solve_volterra(const KernelSpec& k, const BathParameters& p,
                               double t_f, double h);

// Time-local rate of the Markovian approximation,
//   Kbar(t) = int_0^t v^2 e^{-a s^2} cos(er s) ds,  a = f0sq,
// in closed form through the Faddeeva function (safe for large xi).
double markov_kernel_integral(double t, const BathParameters& p);

// Closed-form solution of P' = -Kbar(t) P.
double markov_population(double t, const BathParameters& p);

// The thermal-sum Laplace transform of the blip kernel admits two spellings
// of its incomplete-gamma resummation. LowerSeries evaluates the lower
// function through its power series, (-b)^{-rho} gamma(rho,-b); the
// frozen transform values fix this as the working convention.
// UpperAsPrinted keeps the widely printed upper-function form with the
// opposite power, (-b)^{+rho} Gamma(rho,-b), and is retained so the two can
// be compared against quadrature directly.
enum class GammaConvention { LowerSeries, UpperAsPrinted };

// Laplace transform of the blip kernel, Re s > 0:
//   F(s) = v^2 e^{-(a+b)} sum_n (a^n / n!) (1/r2) I_n,
//   I_n  = sum_k b^k / (k! (rho_n + k)),  rho_n = (s + c + n r1) / r2,
// returned as (F(s) + conj F(conj s)) / 2 so real s gives real output.
// The n sum stops when a term contributes below 1e-12 relative or at n_max,
// whichever comes first; hitting n_max with a contribution at or above 1e-9
// raises ConvergenceError. n_max = 0 is the deliberate blip-linearized
// truncation and skips that check. truncation, when non-null, receives the
// relative size of the last term.
ComplexValue laplace_k_f3(ComplexValue s, const BathParameters& p, int n_max,
                          GammaConvention convention = GammaConvention::LowerSeries,
                          double* truncation = nullptr);

// Population transform 1/(s + K(s)) given a kernel transform value.
ComplexValue laplace_p(ComplexValue s, ComplexValue kernel_transform);

// Population transform with the short-time (Gaussian) kernel inserted,
//   K_st(s) = v^2 (sqrt(pi) / 4 sqrt(a)) [w((er+is)/2 sqrt(a)) +
//                                          w((-er+is)/2 sqrt(a))],
// normalized so s P(s) -> 1 as Re s -> infinity.
ComplexValue laplace_p_st(ComplexValue s, const BathParameters& p);

}  // namespace sbm::dynamics
