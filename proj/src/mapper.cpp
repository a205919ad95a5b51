#include "sbm/mapper.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sbm/dynamics.hpp"

namespace sbm::mapper {

namespace {

constexpr double kLadder[] = {20.0, 40.0, 80.0, 160.0, 320.0, 640.0, 1280.0};
constexpr std::size_t kRungs = sizeof(kLadder) / sizeof(kLadder[0]);

// Variation of the last tenth of the window against the whole window.
bool settled(const PopulationTrace& tr, double threshold) {
  const double t_f = tr.times.back();
  const double tail = 0.9 * t_f * (1.0 - 1e-12);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double tlo = lo, thi = -lo;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double v = tr.values[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (tr.times[i] >= tail) {
      tlo = std::min(tlo, v);
      thi = std::max(thi, v);
    }
  }
  return thi - tlo < threshold * (hi - lo);
}

struct TfDetail {
  TfChoice choice;
  // trace of the chosen rung, reusable by classify_cell
  PopulationTrace trace;
};

TfDetail choose_detail(const BathParameters& p, double threshold,
                       CorrelationModel::Variant variant) {
  p.validate();
  if (!(threshold > 0.0))
    throw DomainError("choose_tf: threshold must be positive");
  KernelSpec k;
  k.model.variant = variant;
  k.v = p.v;
  std::exception_ptr last_error;
  PopulationTrace top_trace;
  for (std::size_t r = 0; r < kRungs; ++r) {
    const double t_f = kLadder[r] / p.v;
    const double h = dynamics::default_step(p, t_f);
    PopulationTrace tr;
    try {
      tr = dynamics::solve_volterra(k, p, t_f, h);
    } catch (const InstabilityError&) {
      // a diverged rung cannot certify settledness; try the next window
      last_error = std::current_exception();
      continue;
    }
    if (settled(tr, threshold)) return {{t_f, false}, std::move(tr)};
    if (r == kRungs - 1) top_trace = std::move(tr);
  }
  // the saturated answer names the ladder top, so it needs a top trace
  if (top_trace.times.empty()) std::rethrow_exception(last_error);
  return {{kLadder[kRungs - 1] / p.v, true}, std::move(top_trace)};
}

void validate_grid(const SweepGrid& g) {
  if (!(g.w0 > 0.0)) throw DomainError("sweep: w0 must be positive");
  for (const auto* axis : {&g.gamma_axis, &g.kappa_axis, &g.beta_axis}) {
    if (axis->empty()) throw DomainError("sweep: empty axis");
    double prev = 0.0;
    for (double x : *axis) {
      if (!(x > prev))
        throw DomainError("sweep: axes must be positive and strictly increasing");
      prev = x;
    }
  }
  if (!(g.eps_fine > 0.0) || !(g.eps_fine < g.eps_coarse))
    throw DomainError("sweep: need 0 < eps_fine < eps_coarse");
  if (g.samples < 2) throw DomainError("sweep: need at least two samples");
}

ValidityCell run_cell(const SweepGrid& grid, std::size_t idx) {
  const std::size_t nk = grid.kappa_axis.size();
  const std::size_t nb = grid.beta_axis.size();
  BathParameters p;
  p.w0 = grid.w0;
  p.gamma = grid.gamma_axis[idx / (nk * nb)];
  p.kappa = grid.kappa_axis[(idx / nb) % nk];
  p.beta = grid.beta_axis[idx % nb];
  try {
    return classify_cell(p, grid);
  } catch (const std::exception& e) {
    ValidityCell cell;
    cell.gamma = p.gamma;
    cell.kappa = p.kappa;
    cell.beta = p.beta;
    cell.label = "FullRequired";
    cell.flags.push_back(std::string("error: ") + e.what());
    return cell;
  }
}

template <typename Body>
ValidityMap sweep_with(const SweepGrid& grid, Body&& body) {
  validate_grid(grid);
  ValidityMap map;
  map.grid = grid;
  const std::size_t total =
      grid.gamma_axis.size() * grid.kappa_axis.size() * grid.beta_axis.size();
  map.cells.resize(total);
  body(map, total);
  return map;
}

}  // namespace

TfChoice choose_tf(const BathParameters& p, double threshold) {
  return choose_detail(p, threshold, CorrelationModel::Variant::Full).choice;
}

double relative_error(const PopulationTrace& app, const PopulationTrace& full,
                      std::size_t samples) {
  if (app.times.size() < 2 || full.times.size() < 2)
    throw MismatchError("relative_error: trace needs at least two points");
  if (samples < 2)
    throw DomainError("relative_error: need at least two samples");
  const double ea = app.times.back();
  const double ef = full.times.back();
  if (std::abs(ea - ef) > 1e-6 * std::max(std::abs(ea), std::abs(ef)))
    throw MismatchError("relative_error: traces cover different intervals");
  const double t_end = std::min(ea, ef);

  auto interp = [](const PopulationTrace& tr, double t) {
    auto it = std::upper_bound(tr.times.begin(), tr.times.end(), t);
    if (it == tr.times.begin()) return tr.values.front();
    if (it == tr.times.end()) return tr.values.back();
    const std::size_t j = static_cast<std::size_t>(it - tr.times.begin());
    const double w = (t - tr.times[j - 1]) / (tr.times[j] - tr.times[j - 1]);
    return tr.values[j - 1] + w * (tr.values[j] - tr.values[j - 1]);
  };

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t_end * static_cast<double>(i) /
                     static_cast<double>(samples - 1);
    const double d = interp(app, t) - interp(full, t);
    const double f = interp(full, t);
    num += d * d;
    den += f * f;
  }
  if (den == 0.0)
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

ValidityCell classify_cell(const BathParameters& p, const SweepGrid& grid) {
  p.validate();
  if (!(grid.eps_fine > 0.0) || !(grid.eps_fine < grid.eps_coarse))
    throw DomainError("classify_cell: need 0 < eps_fine < eps_coarse");
  if (grid.samples < 2)
    throw DomainError("classify_cell: need at least two samples");

  ValidityCell cell;
  cell.gamma = p.gamma;
  cell.kappa = p.kappa;
  cell.beta = p.beta;

  using Variant = CorrelationModel::Variant;
  const bool near_critical = std::abs(p.gamma - p.w0) < 1e-6 * p.w0;
  const Variant reference =
      near_critical ? Variant::MatsubaraReference : Variant::Full;
  if (near_critical)
    cell.flags.push_back("near-critical: matsubara reference used as full");

  TfDetail det = choose_detail(p, 0.01, reference);
  cell.t_f = det.choice.t_f;
  if (det.choice.saturated)
    cell.flags.push_back("t_f saturated at ladder top");
  const PopulationTrace& full = det.trace;
  const double h = dynamics::default_step(p, cell.t_f);

  if (p.kappa == 0.0) {
    cell.eps.st = 0.0;
    cell.eps.f3b = 0.0;
    cell.eps.f3 = 0.0;
  } else {
    try {
      PopulationTrace mk;
      mk.model = "markov";
      const std::size_t n = grid.samples;
      mk.times.resize(n);
      mk.values.resize(n);
      const double end = full.times.back();
      for (std::size_t i = 0; i < n; ++i) {
        mk.times[i] =
            end * static_cast<double>(i) / static_cast<double>(n - 1);
        mk.values[i] = dynamics::markov_population(mk.times[i], p);
      }
      mk.step = end / static_cast<double>(n - 1);
      cell.eps.markov = relative_error(mk, full, grid.samples);
    } catch (const Error& e) {
      cell.flags.push_back(std::string("markov failed: ") + e.what());
    }

    auto try_model = [&](Variant v, std::optional<double>& out,
                         const char* name) {
      try {
        KernelSpec k;
        k.model.variant = v;
        k.v = p.v;
        out = relative_error(dynamics::solve_volterra(k, p, cell.t_f, h), full,
                             grid.samples);
      } catch (const Error& e) {
        cell.flags.push_back(std::string(name) + " failed: " + e.what());
      }
    };
    try_model(Variant::ShortTime, cell.eps.st, "st");
    try_model(Variant::F3b, cell.eps.f3b, "f3b");
    try_model(Variant::F3, cell.eps.f3, "f3");
  }

  auto passes = [&](const std::optional<double>& e) {
    return e.has_value() && *e < grid.eps_fine;
  };
  cell.label = passes(cell.eps.markov) ? "Markov"
             : passes(cell.eps.st)     ? "ShortTime"
             : passes(cell.eps.f3b)    ? "F3b"
             : passes(cell.eps.f3)     ? "F3"
                                       : "FullRequired";
  return cell;
}

ValidityMap sweep(const SweepGrid& grid, const Progress& progress) {
  return sweep_with(grid, [&](ValidityMap& map, std::size_t total) {
    std::atomic<std::size_t> done{0};
    const long long n = static_cast<long long>(total);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long i = 0; i < n; ++i) {
      map.cells[static_cast<std::size_t>(i)] =
          run_cell(grid, static_cast<std::size_t>(i));
      const std::size_t d = ++done;
      if (progress) {
#ifdef _OPENMP
#pragma omp critical(sbm_mapper_progress)
#endif
        progress(d, total);
      }
    }
  });
}

ValidityMap sweep_serial(const SweepGrid& grid, const Progress& progress) {
  return sweep_with(grid, [&](ValidityMap& map, std::size_t total) {
    for (std::size_t i = 0; i < total; ++i) {
      map.cells[i] = run_cell(grid, i);
      if (progress) progress(i + 1, total);
    }
  });
}

}  // namespace sbm::mapper
