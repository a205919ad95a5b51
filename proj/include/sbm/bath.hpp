#pragma once

#include "sbm/types.hpp"

namespace sbm::bath {

// J(w) = 8 kappa^2 gamma w0 w / ((w^2 - w0^2)^2 + 4 gamma^2 w^2)
double spectral_density(double omega, const BathParameters& p);

// All coefficients entering the closed-form correlation functions. Throws
// DegenerateParameterError when gamma is within 1e-10 of w0 at finite beta
// (the delta -> 0 pole; callers switch to MatsubaraReference or
// ZeroTCritical there). In the overdamped regime at finite beta, a thermal
// resonance can put e^{beta z} exactly at 1; beta is then nudged by a
// relative 5e-7 (at most three times) to step off the removable singularity,
// and the stored beta_tilde reflects the nudge so every downstream power of
// e^{-t/beta_tilde} stays consistent.
DerivedCoefficients derive(const BathParameters& p);

// <F(t)F(0)> by adaptive quadrature of the spectral integral to absolute
// tolerance tol. The slowly decaying high-frequency part is integrated
// analytically from a cutoff outward.
ComplexValue force_autocorrelation(double t, const BathParameters& p,
                                   double tol);

// int_0^t dt1 int_0^t1 dt2 <F(t2)F(0)> + i E_r t, evaluated by quadrature
// (the inner integral reduced exactly so the double integral becomes a single
// weighted one). Ground-truth reference for every closed form below.
ComplexValue g_oracle(double t, const BathParameters& p, double tol);

// The three low-temperature correction terms of the full correlation
// function; all real. k3 switches between a direct power series in
// x = e^{-t/beta_tilde} and a joint thermal-pole sum near x = 1, where the
// direct route loses all significance.
struct KTerms {
  double k1, k2, k3;
};
KTerms k_terms(double t, const BathParameters& p);

// G(t) for the requested model variant. Requires t >= 0 (t > 0 for the
// zero-temperature variants, whose closed forms carry log(w0 t)).
ComplexValue g_eval(double t, const BathParameters& p,
                    const CorrelationModel& m);

}  // namespace sbm::bath
