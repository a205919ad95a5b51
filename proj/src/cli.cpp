#include "sbm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "sbm/bath.hpp"
#include "sbm/dynamics.hpp"
#include "sbm/map_io.hpp"
#include "sbm/mapper.hpp"

namespace sbm::cli {

namespace {

using ordered_json = nlohmann::ordered_json;
using Variant = CorrelationModel::Variant;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::F3: return "f3";
    case Variant::F3b: return "f3b";
    case Variant::ShortTime: return "st";
    case Variant::ZeroT: return "zerot";
    case Variant::ZeroTCritical: return "zerotcrit";
    case Variant::MatsubaraReference: return "matsubara";
  }
  return "unknown";
}

ordered_json params_json(const BathParameters& p) {
  ordered_json j;
  j["w0"] = p.w0;
  j["gamma"] = p.gamma;
  j["kappa"] = p.kappa;
  if (std::isinf(p.beta))
    j["beta"] = "inf";
  else
    j["beta"] = p.beta;
  j["v"] = p.v;
  j["p0"] = p.p0;
  return j;
}

void emit(const RunConfig& c, const std::string& payload) {
  if (c.output_path.empty()) {
    std::cout << payload;
    std::cout.flush();
  } else {
    map_io::save(payload, c.output_path);
  }
}

int do_gt(const RunConfig& c) {
  c.params.validate();
  if (c.steps < 1) throw DomainError("gt: need at least one step");
  if (!(c.t_max > 0.0)) throw DomainError("gt: tmax must be positive");
  const std::size_t n = c.steps + 1;
  std::vector<double> ts(n), re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t =
        c.t_max * static_cast<double>(i) / static_cast<double>(c.steps);
    ts[i] = t;
    // G(0) = 0 in every variant; the zero-temperature closed forms carry
    // log(w0 t) and cannot be evaluated at the limit directly
    const ComplexValue g =
        t == 0.0 ? ComplexValue(0.0, 0.0) : bath::g_eval(t, c.params, c.model);
    re[i] = g.real();
    im[i] = g.imag();
  }
  if (c.format == RunConfig::Format::Csv) {
    std::ostringstream out;
    out << "t,re_g,im_g\n";
    for (std::size_t i = 0; i < n; ++i)
      out << sci(ts[i]) << ',' << sci(re[i]) << ',' << sci(im[i]) << '\n';
    emit(c, out.str());
  } else {
    ordered_json j;
    j["schema_version"] = map_schema_version;
    j["command"] = "gt";
    j["model"] = variant_name(c.model.variant);
    j["params"] = params_json(c.params);
    j["t"] = ts;
    j["re_g"] = re;
    j["im_g"] = im;
    emit(c, j.dump(2) + "\n");
  }
  return 0;
}

int do_pt(const RunConfig& c) {
  c.params.validate();
  if (!(c.t_max > 0.0)) throw DomainError("pt: tmax must be positive");
  std::vector<double> ts, ps;
  std::string model_name;
  if (c.markov) {
    model_name = "markov";
    if (c.steps < 1) throw DomainError("pt: need at least one step");
    const std::size_t n = c.steps + 1;
    ts.resize(n);
    ps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ts[i] = c.t_max * static_cast<double>(i) / static_cast<double>(c.steps);
      ps[i] = dynamics::markov_population(ts[i], c.params);
    }
  } else {
    model_name = variant_name(c.model.variant);
    KernelSpec k;
    k.model = c.model;
    k.v = c.params.v;
    const double h =
        c.step ? *c.step : dynamics::default_step(c.params, c.t_max);
    PopulationTrace tr = dynamics::solve_volterra(k, c.params, c.t_max, h);
    ts = std::move(tr.times);
    ps = std::move(tr.values);
  }
  if (c.format == RunConfig::Format::Csv) {
    std::ostringstream out;
    out << "t,p\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
      out << sci(ts[i]) << ',' << sci(ps[i]) << '\n';
    emit(c, out.str());
  } else {
    ordered_json j;
    j["schema_version"] = map_schema_version;
    j["command"] = "pt";
    j["model"] = model_name;
    j["params"] = params_json(c.params);
    j["t"] = ts;
    j["p"] = ps;
    emit(c, j.dump(2) + "\n");
  }
  return 0;
}

int do_sweep(const RunConfig& c) {
  if (!c.grid) throw DomainError("sweep: no grid configured");
  mapper::Progress progress;
  if (c.progress)
    progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "cell %zu/%zu\n", done, total);
    };
  const ValidityMap m = mapper::sweep(*c.grid, progress);
  emit(c, c.format == RunConfig::Format::Json ? map_io::to_json(m)
                                              : map_io::to_csv(m));
  if (!c.gnuplot_path.empty())
    map_io::save(map_io::to_gnuplot(m), c.gnuplot_path);
  return 0;
}

int fail(const char* type, int code, const std::string& message) {
  ordered_json j;
  ordered_json err;
  err["type"] = type;
  err["message"] = message;
  err["code"] = code;
  j["error"] = std::move(err);
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

std::optional<Variant> variant_from_name(const std::string& name) {
  for (Variant v : {Variant::Full, Variant::F3, Variant::F3b,
                    Variant::ShortTime, Variant::ZeroT, Variant::ZeroTCritical,
                    Variant::MatsubaraReference})
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

int run(const RunConfig& config) {
  try {
    switch (config.command) {
      case RunConfig::Command::Gt: return do_gt(config);
      case RunConfig::Command::Pt: return do_pt(config);
      case RunConfig::Command::Sweep: return do_sweep(config);
      case RunConfig::Command::Verify: return verify(std::cout);
    }
    throw DomainError("unknown command");
  } catch (const DomainError& e) {
    return fail("invalid-parameter", 2, e.what());
  } catch (const NumericalError& e) {
    return fail("numerical", 3, e.what());
  } catch (const IoError& e) {
    return fail("io", 4, e.what());
  } catch (const std::exception& e) {
    return fail("internal", 3, e.what());
  }
}

}  // namespace sbm::cli
