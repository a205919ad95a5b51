#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbm/bath.hpp"
#include "sbm/cli.hpp"
#include "sbm/map_io.hpp"

using namespace sbm;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::filesystem::path kScratch = [] {
  auto d = std::filesystem::temp_directory_path() /
           ("sbm_io_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d;
}();

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// two cells exercising every serialization corner: full and sparse eps
// records, empty flag lists, and flags with embedded quotes and separators
ValidityMap sample_map() {
  ValidityMap m;
  m.grid.w0 = 0.1;
  m.grid.gamma_axis = {0.5};
  m.grid.kappa_axis = {1.25, 2.0};
  m.grid.beta_axis = {4.0};
  m.grid.eps_fine = 0.01;
  m.grid.eps_coarse = 0.05;
  m.grid.samples = 64;
  ValidityCell c0;
  c0.gamma = 0.5;
  c0.kappa = 1.25;
  c0.beta = 4.0;
  c0.label = "F3";
  c0.eps.markov = 0.375;
  c0.eps.st = 0.062;
  c0.eps.f3b = 0.031;
  c0.eps.f3 = 1.25e-4;
  c0.t_f = 40.0;
  c0.flags = {"say \"hi\", twice", "t_f saturated at ladder top"};
  ValidityCell c1;
  c1.gamma = 0.5;
  c1.kappa = 2.0;
  c1.beta = 4.0;
  c1.label = "ShortTime";
  c1.eps.st = 2.5e-3;
  c1.t_f = 20.0;
  m.cells = {c0, c1};
  return m;
}

struct Capture {
  int code = -1;
  std::string out;
  std::string err;
};

Capture run_cli(const std::string& args) {
  const char* exe = std::getenv("SBM_CLI_PATH");
  REQUIRE_MESSAGE(exe != nullptr, "SBM_CLI_PATH must point at the binary");
  static int seq = 0;
  const auto out = kScratch / ("out" + std::to_string(seq) + ".txt");
  const auto err = kScratch / ("err" + std::to_string(seq) + ".txt");
  ++seq;
  const std::string cmd = "\"" + std::string(exe) + "\" " + args + " > \"" +
                          out.string() + "\" 2> \"" + err.string() + "\"";
  const int rc = std::system(cmd.c_str());
  Capture cap;
  cap.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  cap.out = slurp(out);
  cap.err = slurp(err);
  return cap;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("gnuplot palette index follows classification precedence") {
  CHECK(map_io::label_index("Markov") == 0);
  CHECK(map_io::label_index("ShortTime") == 1);
  CHECK(map_io::label_index("F3b") == 2);
  CHECK(map_io::label_index("F3") == 3);
  CHECK(map_io::label_index("FullRequired") == 4);
  CHECK_THROWS_AS(map_io::label_index("Bogus"), DomainError);
}

TEST_CASE("json serialization is canonical and lossless") {
  const ValidityMap m = sample_map();
  const std::string text = map_io::to_json(m);
  CHECK(text.substr(0, 24) == "{\n  \"schema_version\": 1,");
  CHECK(text.substr(text.size() - 2) == "}\n");

  const ValidityMap r = map_io::from_json(text);
  CHECK(map_io::to_json(r) == text);

  CHECK(r.grid.w0 == m.grid.w0);
  CHECK(r.grid.gamma_axis == m.grid.gamma_axis);
  CHECK(r.grid.kappa_axis == m.grid.kappa_axis);
  CHECK(r.grid.beta_axis == m.grid.beta_axis);
  CHECK(r.grid.eps_fine == m.grid.eps_fine);
  CHECK(r.grid.eps_coarse == m.grid.eps_coarse);
  CHECK(r.grid.samples == m.grid.samples);
  REQUIRE(r.cells.size() == 2);
  CHECK(r.cells[0].label == "F3");
  CHECK(r.cells[0].eps.f3 == 1.25e-4);
  CHECK(r.cells[0].flags == m.cells[0].flags);
  CHECK(r.cells[1].eps.markov.has_value() == false);
  CHECK(r.cells[1].eps.st == 2.5e-3);
  CHECK(r.cells[1].eps.f3b.has_value() == false);
  CHECK(r.cells[1].eps.f3.has_value() == false);
  CHECK(r.cells[1].flags.empty());
}

TEST_CASE("malformed map json is rejected as a mismatch") {
  CHECK_THROWS_AS(map_io::from_json("not json at all"), MismatchError);
  CHECK_THROWS_AS(map_io::from_json("{\"schema_version\": 1}"), MismatchError);

  std::string text = map_io::to_json(sample_map());
  const std::string tag = "\"schema_version\": 1";
  text.replace(text.find(tag), tag.size(), "\"schema_version\": 99");
  CHECK_THROWS_AS(map_io::from_json(text), MismatchError);
}

TEST_CASE("csv export quotes flags and leaves absent errors empty") {
  const ValidityMap m = sample_map();
  std::string expected =
      "gamma,kappa,beta,label,eps_markov,eps_st,eps_f3b,eps_f3,t_f,flags\n";
  expected += sci(0.5) + "," + sci(1.25) + "," + sci(4.0) + ",F3," +
              sci(0.375) + "," + sci(0.062) + "," + sci(0.031) + "," +
              sci(1.25e-4) + "," + sci(40.0) +
              ",\"say \"\"hi\"\", twice; t_f saturated at ladder top\"\n";
  expected += sci(0.5) + "," + sci(2.0) + "," + sci(4.0) + ",ShortTime,," +
              sci(2.5e-3) + ",,," + sci(20.0) + ",\"\"\n";
  CHECK(map_io::to_csv(m) == expected);
}

TEST_CASE("gnuplot export separates beta slices by double blank lines") {
  ValidityMap m;
  m.grid.gamma_axis = {0.7, 1.4};
  m.grid.kappa_axis = {1.3};
  m.grid.beta_axis = {0.9, 9.0};
  m.cells.resize(4);
  const char* labels[] = {"Markov", "FullRequired", "F3b", "F3"};
  for (std::size_t ig = 0; ig < 2; ++ig)
    for (std::size_t ib = 0; ib < 2; ++ib) {
      ValidityCell& c = m.cells[ig * 2 + ib];
      c.gamma = m.grid.gamma_axis[ig];
      c.kappa = m.grid.kappa_axis[0];
      c.beta = m.grid.beta_axis[ib];
      c.label = labels[ig * 2 + ib];
    }
  const std::string g = sci(0.7), g2 = sci(1.4), k = sci(1.3);
  const std::string expected =
      "# validity map slices: gamma kappa label-index, one block per beta\n"
      "# labels: 0 Markov, 1 ShortTime, 2 F3b, 3 F3, 4 FullRequired\n"
      "# beta = " + sci(0.9) + "\n" +
      g + " " + k + " 0\n" +
      "\n" +
      g2 + " " + k + " 2\n" +
      "\n\n"
      "# beta = " + sci(9.0) + "\n" +
      g + " " + k + " 4\n" +
      "\n" +
      g2 + " " + k + " 3\n";
  CHECK(map_io::to_gnuplot(m) == expected);

  m.cells.pop_back();
  CHECK_THROWS_AS(map_io::to_gnuplot(m), MismatchError);
}

TEST_CASE("file helpers round-trip text and report io failures") {
  const auto path = (kScratch / "roundtrip.txt").string();
  const std::string text = "line one\nline two\n";
  map_io::save(text, path);
  CHECK(map_io::load(path) == text);

  CHECK_THROWS_AS(map_io::load((kScratch / "missing.txt").string()), IoError);
  CHECK_THROWS_AS(map_io::save("x", (kScratch / "no_dir" / "x.txt").string()),
                  IoError);
}

TEST_CASE("run maps the error taxonomy onto exit statuses") {
  std::ostringstream trap;
  std::streambuf* old = std::cerr.rdbuf(trap.rdbuf());

  cli::RunConfig bad_request;
  bad_request.params.kappa = -1.0;
  CHECK(cli::run(bad_request) == 2);
  CHECK(trap.str().find("\"type\":\"invalid-parameter\"") != std::string::npos);
  CHECK(trap.str().find("\"code\":2") != std::string::npos);

  trap.str("");
  cli::RunConfig bad_path;
  bad_path.output_path = (kScratch / "no_dir" / "g.csv").string();
  CHECK(cli::run(bad_path) == 4);
  CHECK(trap.str().find("\"type\":\"io\"") != std::string::npos);

  std::cerr.rdbuf(old);

  cli::RunConfig ok;
  ok.params.kappa = 0.5;
  ok.params.beta = 2.0;
  ok.params.gamma = 0.25;
  ok.t_max = 1.0;
  ok.steps = 4;
  ok.output_path = (kScratch / "g.csv").string();
  CHECK(cli::run(ok) == 0);
  CHECK(slurp(kScratch / "g.csv").substr(0, 14) == "t,re_g,im_g\n0.");
}

TEST_CASE("model names cover every correlation variant") {
  using V = CorrelationModel::Variant;
  CHECK(cli::variant_from_name("full") == V::Full);
  CHECK(cli::variant_from_name("f3") == V::F3);
  CHECK(cli::variant_from_name("f3b") == V::F3b);
  CHECK(cli::variant_from_name("st") == V::ShortTime);
  CHECK(cli::variant_from_name("zerot") == V::ZeroT);
  CHECK(cli::variant_from_name("zerotcrit") == V::ZeroTCritical);
  CHECK(cli::variant_from_name("matsubara") == V::MatsubaraReference);
  CHECK(!cli::variant_from_name("bogus").has_value());
}

TEST_CASE("gt subcommand tabulates the library correlation function") {
  Capture cap =
      run_cli("gt --tmax 2 --steps 4 --gamma 0.25 --kappa 0.5 --beta 2");
  REQUIRE(cap.code == 0);
  CHECK(cap.err.empty());
  const auto rows = lines_of(cap.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "t,re_g,im_g");

  BathParameters p;
  p.gamma = 0.25;
  p.kappa = 0.5;
  p.beta = 2.0;
  CorrelationModel full;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double t = 0.0, re = 0.0, im = 0.0;
    REQUIRE(std::sscanf(rows[i].c_str(), "%lf,%lf,%lf", &t, &re, &im) == 3);
    const double want_t = 2.0 * static_cast<double>(i - 1) / 4.0;
    CHECK(t == doctest::Approx(want_t).epsilon(1e-15));
    const ComplexValue g =
        t == 0.0 ? ComplexValue(0, 0) : bath::g_eval(t, p, full);
    CHECK(re == doctest::Approx(g.real()).epsilon(1e-13));
    CHECK(im == doctest::Approx(g.imag()).epsilon(1e-13));
  }
}

TEST_CASE("gt json payload echoes the run configuration") {
  Capture cap = run_cli(
      "gt --format json --model zerot --beta inf --kappa 1 --gamma 0.25 "
      "--tmax 1 --steps 2");
  REQUIRE(cap.code == 0);
  const ordered_json j = ordered_json::parse(cap.out);
  CHECK(j.at("schema_version").get<int>() == 1);
  CHECK(j.at("command").get<std::string>() == "gt");
  CHECK(j.at("model").get<std::string>() == "zerot");
  CHECK(j.at("params").at("beta").get<std::string>() == "inf");
  CHECK(j.at("params").at("kappa").get<double>() == 1.0);
  REQUIRE(j.at("t").size() == 3);
  CHECK(j.at("re_g")[0].get<double>() == 0.0);
  CHECK(j.at("im_g")[0].get<double>() == 0.0);
}

TEST_CASE("pt solver trace starts at the initial population") {
  Capture cap = run_cli(
      "pt --gamma 0.25 --kappa 0.5 --beta 2 --tmax 2 --step 0.02");
  REQUIRE(cap.code == 0);
  const auto rows = lines_of(cap.out);
  REQUIRE(rows.size() >= 3);
  CHECK(rows[0] == "t,p");
  CHECK(rows[1] == sci(0.0) + "," + sci(1.0));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double t = 0.0, pv = 0.0;
    REQUIRE(std::sscanf(rows[i].c_str(), "%lf,%lf", &t, &pv) == 2);
    CHECK(std::abs(pv) <= 1.001);
  }
}

TEST_CASE("pt rejects invalid requests with a machine-readable record") {
  SUBCASE("markov rate needs coupling") {
    Capture cap = run_cli("pt --markov --kappa 0");
    CHECK(cap.code == 2);
    CHECK(cap.out.empty());
    const ordered_json j = ordered_json::parse(cap.err);
    CHECK(j.at("error").at("type").get<std::string>() == "invalid-parameter");
    CHECK(j.at("error").at("code").get<int>() == 2);
  }
  SUBCASE("step gate") {
    Capture cap = run_cli("pt --kappa 0.5 --tmax 2 --step 0.5");
    CHECK(cap.code == 2);
    const ordered_json j = ordered_json::parse(cap.err);
    CHECK(j.at("error").at("type").get<std::string>() == "invalid-parameter");
  }
}

TEST_CASE("sweep subcommand writes a map that round-trips byte for byte") {
  const auto map_path = (kScratch / "map.json").string();
  const auto gp_path = (kScratch / "map.gp").string();
  Capture cap = run_cli("sweep --points 2 --axis-min 0.8 --axis-max 2 --out " +
                        map_path + " --gnuplot " + gp_path);
  REQUIRE(cap.code == 0);

  const std::string text = map_io::load(map_path);
  const ValidityMap m = map_io::from_json(text);
  CHECK(map_io::to_json(m) == text);
  CHECK(m.grid.gamma_axis == std::vector<double>{0.8, 2.0});
  REQUIRE(m.cells.size() == 8);
  for (const auto& c : m.cells) {
    CHECK(map_io::label_index(c.label) >= 0);
    CHECK(c.t_f > 0.0);
  }

  const std::string gp = map_io::load(gp_path);
  CHECK(lines_of(gp)[0] ==
        "# validity map slices: gamma kappa label-index, one block per beta");
}

TEST_CASE("single-point sweep prints one csv row") {
  Capture cap = run_cli("sweep --points 1 --axis-min 0.9 --format csv");
  REQUIRE(cap.code == 0);
  const auto rows = lines_of(cap.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] ==
        "gamma,kappa,beta,label,eps_markov,eps_st,eps_f3b,eps_f3,t_f,flags");
  CHECK(rows[1].substr(0, 23) == sci(0.9) + ",");
}

TEST_CASE("argument errors come back as exit 2 with a json record") {
  Capture unknown_flag = run_cli("gt --nope");
  CHECK(unknown_flag.code == 2);
  CHECK(ordered_json::parse(unknown_flag.err).at("error").at("code") == 2);

  Capture unknown_model = run_cli("gt --model bogus");
  CHECK(unknown_model.code == 2);
  CHECK(unknown_model.err.find("unknown model") != std::string::npos);

  Capture help = run_cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("gt") != std::string::npos);
}

TEST_CASE("verify command cross-checks the numerics and exits cleanly") {
  Capture cap = run_cli("verify");
  CHECK(cap.code == 0);
  CHECK(cap.out.find("PASS") != std::string::npos);
  CHECK(cap.out.find("FAIL") == std::string::npos);
}
