#pragma once

#include <complex>

// Slow reference implementations, deliberately built on different algorithms
// than the production code (quadrature and plain series instead of continued
// fractions and asymptotics). Only the test suite and the verify command link
// these.
namespace sbm::oracles {

using LD = long double;
using CLD = std::complex<long double>;

std::complex<double> digamma_oracle(std::complex<double> z);
std::complex<double> e1_oracle(std::complex<double> z);
double ei_oracle(double x);
std::complex<double> faddeeva_oracle(std::complex<double> z);
std::complex<double> erfi_oracle(std::complex<double> z);
double dawson_oracle(double x);
std::complex<double> gamma_upper_oracle(std::complex<double> s,
                                        std::complex<double> x);
std::complex<double> binc_oracle(double x, std::complex<double> a);

}  // namespace sbm::oracles
