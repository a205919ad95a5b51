#pragma once

#include "sbm/types.hpp"

namespace sbm::specfun {

// Any argument landing within 1e-12 of a branch cut is recorded here instead
// of being silently continued. Thread-local so concurrent evaluation does not
// need locking; callers that care clear before and inspect after.
std::vector<std::string>& branch_warnings();
void clear_branch_warnings();

// psi(z), principal branch. Throws PoleError within 1e-12 of a non-positive
// integer.
ComplexValue complex_digamma(ComplexValue z);

// H(z) = psi(1 + z) + gamma_E
ComplexValue complex_harmonic(ComplexValue z);

// E1(z) = int_z^inf e^-t / t dt, principal branch (cut along the negative
// real axis; on the cut the value from above is returned and a branch warning
// recorded).
ComplexValue e1(ComplexValue z);

// Ei(z), principal branch; real principal value on the real axis (both signs).
ComplexValue exponential_integral(ComplexValue z);

// Gamma(s, x) = int_x^inf t^{s-1} e^-t dt, principal branch in x.
// Gamma(s, 0) = Gamma(s).
ComplexValue incomplete_gamma_upper(ComplexValue s, ComplexValue x);

// Series sum_{m>=0} x^{a+m} / (a+m), the integral int_0^x u^{a-1}/(1-u) du
// for Re a > 0. Throws ConvergenceError for Re a <= 0 as specified.
ComplexValue incomplete_beta_two_arg(double x, ComplexValue a);

// Same series continued to Re a <= 0 (the terms with a+m in the left half
// plane are kept as-is; the sum still converges for 0 < x < 1 as long as no
// a+m is near zero, which raises PoleError). The overdamped correlation
// function needs this extension.
ComplexValue incomplete_beta_continued(double x, ComplexValue a);

// w(z) = e^{-z^2} erfc(-iz). Throws OverflowError deep in the lower half
// plane where e^{-z^2} overflows.
ComplexValue faddeeva(ComplexValue z);

// erfi(z) = -i erf(iz); throws OverflowError for |Re z| large enough that
// e^{z^2} overflows.
ComplexValue erfi(ComplexValue z);

// Dawson integral D(x) = e^{-x^2} int_0^x e^{t^2} dt
double dawson(double x);

// log Gamma(z), principal branch, needed by the incomplete gamma evaluators.
ComplexValue log_gamma(ComplexValue z);

}  // namespace sbm::specfun
