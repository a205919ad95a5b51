#pragma once

#include <functional>
#include <vector>

#include "sbm/types.hpp"

namespace sbm::oracles {

// Fourth-order reference solver for P'(t) = -int_0^t K(t-s) P(s) ds:
// Adams-Bashforth-Moulton stepping over Simpson / three-eighths memory
// quadrature, with a sub-stepped trapezoid startup. Algorithmically
// independent of the production scheme; run it at a tenth of the production
// step and its error is negligible against an O(h^2) method.
std::vector<double> volterra_oracle(const std::function<double(double)>& kernel,
                                    double p0, double t_f, double h);

// int_0^t v^2 e^{-a s^2} cos(er s) ds by adaptive quadrature, the defining
// integral of the Markovian rate
double markov_kbar_oracle(double t, const BathParameters& p, double tol);

// RK4 on P' = -kbar(t) P
std::vector<double> markov_ode_oracle(const std::function<double(double)>& kbar,
                                      double p0, double t_f, double h);

// int_0^T e^{-s t} f(t) dt with T = 40 / Re s, oscillation-seeded quadrature
ComplexValue laplace_oracle(const std::function<double(double)>& f,
                            ComplexValue s, double tol);

// trapezoid Laplace transform of a sampled trace
ComplexValue trace_laplace(const std::vector<double>& times,
                           const std::vector<double>& values, ComplexValue s);

}  // namespace sbm::oracles
