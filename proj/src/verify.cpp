#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "oracles/oracle_dynamics.hpp"
#include "oracles/oracle_specfun.hpp"
#include "sbm/bath.hpp"
#include "sbm/cli.hpp"
#include "sbm/dynamics.hpp"
#include "sbm/specfun.hpp"

namespace sbm::cli {

namespace {

struct Row {
  std::string name;
  double err;
  double bound;
};

double rel(ComplexValue got, ComplexValue want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

const BathParameters kRef{1.0, 0.25, 0.5, 2.0, 1.0, 1.0};
const BathParameters kAdiabatic{0.1, 1.0, 10.0, 1.0, 1.0, 1.0};

}  // namespace

int verify(std::ostream& out) {
  std::vector<Row> rows;

  {
    double e = 0.0;
    for (ComplexValue z : {ComplexValue(0.3, 0.4), ComplexValue(-1.2, 2.0),
                           ComplexValue(3.5, -0.7)})
      e = std::max(e, rel(specfun::complex_digamma(z),
                          oracles::digamma_oracle(z)));
    rows.push_back({"digamma vs series reference", e, 1e-10});
  }
  {
    double e = 0.0;
    for (ComplexValue z : {ComplexValue(0.5, 0.5), ComplexValue(2.0, -0.3),
                           ComplexValue(-1.5, 2.5)})
      e = std::max(e, rel(specfun::faddeeva(z), oracles::faddeeva_oracle(z)));
    rows.push_back({"faddeeva vs quadrature reference", e, 1e-10});
  }
  {
    double e = 0.0;
    for (ComplexValue z : {ComplexValue(0.7, 0.0), ComplexValue(1.2, 0.4),
                           ComplexValue(-2.0, 1.0)})
      e = std::max(e, rel(specfun::erfi(z), oracles::erfi_oracle(z)));
    rows.push_back({"erfi vs series reference", e, 1e-10});
  }
  {
    double e = 0.0;
    for (double x : {0.3, 2.0, 7.5})
      e = std::max(e, rel(specfun::dawson(x), oracles::dawson_oracle(x)));
    rows.push_back({"dawson vs series reference", e, 1e-10});
  }
  {
    double e = 0.0;
    for (ComplexValue z : {ComplexValue(0.5, 0.0), ComplexValue(2.0, 1.0),
                           ComplexValue(-1.5, 0.5)})
      e = std::max(e, rel(specfun::e1(z), oracles::e1_oracle(z)));
    rows.push_back({"exponential integral vs reference", e, 1e-10});
  }
  {
    double e = 0.0;
    e = std::max(e, rel(specfun::incomplete_gamma_upper(1.5, 2.0),
                        oracles::gamma_upper_oracle(1.5, 2.0)));
    e = std::max(e, rel(specfun::incomplete_gamma_upper({2.0, 1.0}, {1.0, 1.0}),
                        oracles::gamma_upper_oracle({2.0, 1.0}, {1.0, 1.0})));
    e = std::max(e, rel(specfun::incomplete_gamma_upper({0.5, 0.0}, {3.0, -2.0}),
                        oracles::gamma_upper_oracle({0.5, 0.0}, {3.0, -2.0})));
    rows.push_back({"incomplete gamma vs reference", e, 1e-10});
  }
  {
    double e = 0.0;
    e = std::max(e, rel(specfun::incomplete_beta_two_arg(0.3, {1.2, 0.5}),
                        oracles::binc_oracle(0.3, {1.2, 0.5})));
    e = std::max(e, rel(specfun::incomplete_beta_two_arg(0.7, {0.8, -0.3}),
                        oracles::binc_oracle(0.7, {0.8, -0.3})));
    rows.push_back({"incomplete beta vs reference", e, 1e-10});
  }
  {
    CorrelationModel full;
    double e = 0.0;
    for (double t : {0.3, 1.0, 3.0, 10.0}) {
      const ComplexValue want = bath::g_oracle(t, kRef, 1e-12);
      e = std::max(e, std::abs(bath::g_eval(t, kRef, full) - want) /
                          std::abs(want));
    }
    rows.push_back({"correlation function vs quadrature", e, 1e-8});
  }
  {
    CorrelationModel full;
    CorrelationModel mats;
    mats.variant = CorrelationModel::Variant::MatsubaraReference;
    double e = 0.0;
    for (double t : {0.3, 1.0, 3.0, 10.0}) {
      const ComplexValue want = bath::g_eval(t, kRef, full);
      e = std::max(e,
                   std::abs(bath::g_eval(t, kRef, mats) - want) /
                       std::abs(want));
    }
    rows.push_back({"matsubara route vs closed form", e, 1e-10});
  }
  {
    KernelSpec k;
    k.v = kRef.v;
    const double h = 5e-3;
    const PopulationTrace tr = dynamics::solve_volterra(k, kRef, 5.0, h);
    const auto kernel = [&](double t) { return dynamics::niba_kernel(t, k, kRef); };
    const std::vector<double> ref =
        oracles::volterra_oracle(kernel, kRef.p0, 5.0, h / 10.0);
    double e = 0.0;
    for (std::size_t i = 0; i < tr.values.size(); ++i)
      e = std::max(e, std::abs(tr.values[i] - ref[10 * i]));
    rows.push_back({"population solver vs multistep reference", e, 1e-4});
  }
  {
    const double h = 1e-3;
    const auto kbar = [&](double t) {
      return dynamics::markov_kernel_integral(t, kAdiabatic);
    };
    const std::vector<double> ref =
        oracles::markov_ode_oracle(kbar, kAdiabatic.p0, 2.0, h);
    double e = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
      e = std::max(e, std::abs(dynamics::markov_population(
                           static_cast<double>(i) * h, kAdiabatic) -
                       ref[i]));
    rows.push_back({"markov closed form vs rate integration", e, 1e-8});
  }
  {
    KernelSpec k;
    k.model.variant = CorrelationModel::Variant::F3;
    k.v = kRef.v;
    const auto kernel = [&](double t) { return dynamics::niba_kernel(t, k, kRef); };
    const ComplexValue want = oracles::laplace_oracle(kernel, 1.0, 1e-10);
    const ComplexValue got = dynamics::laplace_k_f3(1.0, kRef, 40);
    rows.push_back({"kernel transform vs quadrature", std::abs(got - want), 1e-6});
  }

  bool all_pass = true;
  char line[128];
  std::snprintf(line, sizeof(line), "%-42s %-11s %-11s %s\n", "check",
                "error", "bound", "status");
  out << line;
  for (const Row& r : rows) {
    const bool pass = r.err < r.bound;
    all_pass = all_pass && pass;
    std::snprintf(line, sizeof(line), "%-42s %-11.3e %-11.3e %s\n",
                  r.name.c_str(), r.err, r.bound, pass ? "PASS" : "FAIL");
    out << line;
  }
  std::snprintf(line, sizeof(line), "verify: %s\n",
                all_pass ? "all checks passed" : "FAILURES present");
  out << line;
  return all_pass ? 0 : 3;
}

}  // namespace sbm::cli
