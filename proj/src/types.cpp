#include "sbm/types.hpp"

#include <cmath>

namespace sbm {

const char* to_string(CorrelationModel::Variant v) {
  using V = CorrelationModel::Variant;
  switch (v) {
    case V::Full: return "full";
    case V::F3: return "f3";
    case V::F3b: return "f3b";
    case V::ShortTime: return "st";
    case V::ZeroT: return "zerot";
    case V::ZeroTCritical: return "zerotcrit";
    case V::MatsubaraReference: return "matsubara";
  }
  return "unknown";
}

CorrelationModel parse_model(const std::string& name) {
  using V = CorrelationModel::Variant;
  CorrelationModel m;
  if (name == "full") m.variant = V::Full;
  else if (name == "f3") m.variant = V::F3;
  else if (name == "f3b") m.variant = V::F3b;
  else if (name == "st") m.variant = V::ShortTime;
  else if (name == "zerot") m.variant = V::ZeroT;
  else if (name == "zerotcrit") m.variant = V::ZeroTCritical;
  else if (name == "matsubara") m.variant = V::MatsubaraReference;
  else throw DomainError("unknown correlation model: " + name);
  return m;
}

std::vector<double> log_axis(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw DomainError("log_axis: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  double l0 = std::log(lo);
  double l1 = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                               static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

SweepGrid default_grid(double w0) {
  SweepGrid g;
  g.w0 = w0;
  g.gamma_axis = log_axis(0.01, 100.0, 20);
  g.kappa_axis = log_axis(0.01, 100.0, 20);
  g.beta_axis = log_axis(0.01, 100.0, 20);
  return g;
}

}  // namespace sbm
