#include "sbm/map_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sbm::map_io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

ordered_json eps_to_json(const EpsRecord& eps) {
  ordered_json j = ordered_json::object();
  if (eps.markov) j["markov"] = *eps.markov;
  if (eps.st) j["st"] = *eps.st;
  if (eps.f3b) j["f3b"] = *eps.f3b;
  if (eps.f3) j["f3"] = *eps.f3;
  return j;
}

EpsRecord eps_from_json(const ordered_json& j) {
  EpsRecord eps;
  if (j.contains("markov")) eps.markov = j.at("markov").get<double>();
  if (j.contains("st")) eps.st = j.at("st").get<double>();
  if (j.contains("f3b")) eps.f3b = j.at("f3b").get<double>();
  if (j.contains("f3")) eps.f3 = j.at("f3").get<double>();
  return eps;
}

}  // namespace

int label_index(const std::string& label) {
  if (label == "Markov") return 0;
  if (label == "ShortTime") return 1;
  if (label == "F3b") return 2;
  if (label == "F3") return 3;
  if (label == "FullRequired") return 4;
  throw DomainError("label_index: unknown label " + label);
}

std::string to_json(const ValidityMap& m) {
  ordered_json j;
  j["schema_version"] = map_schema_version;
  ordered_json config;
  config["w0"] = m.grid.w0;
  config["gamma_axis"] = m.grid.gamma_axis;
  config["kappa_axis"] = m.grid.kappa_axis;
  config["beta_axis"] = m.grid.beta_axis;
  config["eps_fine"] = m.grid.eps_fine;
  config["eps_coarse"] = m.grid.eps_coarse;
  config["samples"] = m.grid.samples;
  j["config"] = std::move(config);
  ordered_json cells = ordered_json::array();
  for (const auto& c : m.cells) {
    ordered_json jc;
    jc["gamma"] = c.gamma;
    jc["kappa"] = c.kappa;
    jc["beta"] = c.beta;
    jc["label"] = c.label;
    jc["eps"] = eps_to_json(c.eps);
    jc["t_f"] = c.t_f;
    jc["flags"] = c.flags;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

ValidityMap from_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != map_schema_version)
      throw MismatchError("map json: unsupported schema version " +
                          std::to_string(version));
    ValidityMap m;
    const ordered_json& config = j.at("config");
    m.grid.w0 = config.at("w0").get<double>();
    m.grid.gamma_axis = config.at("gamma_axis").get<std::vector<double>>();
    m.grid.kappa_axis = config.at("kappa_axis").get<std::vector<double>>();
    m.grid.beta_axis = config.at("beta_axis").get<std::vector<double>>();
    m.grid.eps_fine = config.at("eps_fine").get<double>();
    m.grid.eps_coarse = config.at("eps_coarse").get<double>();
    m.grid.samples = config.at("samples").get<std::size_t>();
    for (const ordered_json& jc : j.at("cells")) {
      ValidityCell c;
      c.gamma = jc.at("gamma").get<double>();
      c.kappa = jc.at("kappa").get<double>();
      c.beta = jc.at("beta").get<double>();
      c.label = jc.at("label").get<std::string>();
      c.eps = eps_from_json(jc.at("eps"));
      c.t_f = jc.at("t_f").get<double>();
      c.flags = jc.at("flags").get<std::vector<std::string>>();
      m.cells.push_back(std::move(c));
    }
    return m;
  } catch (const ordered_json::exception& e) {
    throw MismatchError(std::string("map json: ") + e.what());
  }
}

std::string to_csv(const ValidityMap& m) {
  std::ostringstream out;
  out << "gamma,kappa,beta,label,eps_markov,eps_st,eps_f3b,eps_f3,t_f,flags\n";
  for (const auto& c : m.cells) {
    out << sci(c.gamma) << ',' << sci(c.kappa) << ',' << sci(c.beta) << ','
        << c.label << ',';
    for (const auto* e : {&c.eps.markov, &c.eps.st, &c.eps.f3b, &c.eps.f3}) {
      if (e->has_value()) out << sci(**e);
      out << ',';
    }
    out << sci(c.t_f) << ",\"";
    for (std::size_t i = 0; i < c.flags.size(); ++i) {
      if (i) out << "; ";
      for (char ch : c.flags[i]) {
        out << ch;
        if (ch == '"') out << '"';
      }
    }
    out << "\"\n";
  }
  return out.str();
}

std::string to_gnuplot(const ValidityMap& m) {
  const std::size_t ng = m.grid.gamma_axis.size();
  const std::size_t nk = m.grid.kappa_axis.size();
  const std::size_t nb = m.grid.beta_axis.size();
  if (m.cells.size() != ng * nk * nb)
    throw MismatchError("to_gnuplot: cell count does not match the grid");
  std::ostringstream out;
  out << "# validity map slices: gamma kappa label-index, one block per beta\n";
  out << "# labels: 0 Markov, 1 ShortTime, 2 F3b, 3 F3, 4 FullRequired\n";
  for (std::size_t ib = 0; ib < nb; ++ib) {
    if (ib) out << "\n\n";
    out << "# beta = " << sci(m.grid.beta_axis[ib]) << "\n";
    for (std::size_t ig = 0; ig < ng; ++ig) {
      if (ig) out << "\n";
      for (std::size_t ik = 0; ik < nk; ++ik) {
        const ValidityCell& c = m.cells[(ig * nk + ik) * nb + ib];
        out << sci(c.gamma) << ' ' << sci(c.kappa) << ' '
            << label_index(c.label) << '\n';
      }
    }
  }
  return out.str();
}

std::string load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path);
  return buf.str();
}

void save(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sbm::map_io
