#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "radcav/cli.hpp"
#include "radcav/errors.hpp"

using namespace radcav;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call, removed by the destructor.
struct Scratch {
  fs::path dir;
  Scratch() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("radcav-cli-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t entries(const fs::path& p) {
  if (!fs::exists(p)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(p), fs::directory_iterator()));
}

const char* kRabi =
    "gamma = 1e-3\nomega_a = 1.0\nkappa = 1e-3\nt_max = 2e4\nn_samples = 201\n";

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = cli::parse_config("# header\ngamma = 1e-3   # trailing\n\nalpha_p = 1.0,0.5\npump = cw\n");
  CHECK(cfg.values.at("gamma") == "1e-3");
  CHECK(cfg.lines.at("gamma") == 2);
  CHECK(cfg.values.at("alpha_p") == "1.0,0.5");
  CHECK(cfg.values.size() == 3);

  try {
    cli::parse_config("gamma = 1e-3\ngamme = 1e-3\n");
    FAIL("expected UnknownKey");
  } catch (const UnknownKey& e) {
    CHECK(e.key() == "gamme");
    CHECK(e.line() == 2);
  }
  try {
    cli::parse_config("gamma 1e-3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    cli::parse_config("n_samples = 1.5\n");
    FAIL("expected TypeError");
  } catch (const TypeError& e) {
    CHECK(e.key() == "n_samples");
  }
  CHECK_THROWS_AS(cli::parse_config("alpha_p = 1.0,x\n"), TypeError);
  CHECK_THROWS_AS(cli::parse_config("verify = maybe\n"), TypeError);
  CHECK_THROWS_AS(cli::parse_config("gamma = 1\ngamma = 2\n"), ParseError);
  CHECK_THROWS_AS(cli::parse_config("gamma =\n"), ParseError);
  CHECK_THROWS_AS(cli::load_config("/nonexistent/radcav.cfg"), ConfigError);
}

TEST_CASE("scenario names round-trip") {
  for (const auto& n : cli::scenario_names()) {
    const auto s = cli::parse_scenario(n);
    REQUIRE(s.has_value());
    CHECK(cli::scenario_name(*s) == n);
  }
  CHECK_FALSE(cli::parse_scenario("spectra").has_value());
}

TEST_CASE("coupling scenario prints kappa and writes a summary") {
  Scratch s;
  const auto cfg = s.write("c.cfg", "gamma = 1e-3\nomega_a = 1\neta_max = 1e-3\n");
  std::ostringstream out, err;
  const fs::path od = s.dir / "out";
  CHECK(cli::run_file("coupling", cfg, od.string(), false, out, err) == 0);
  CHECK(out.str().find("kappa = ") != std::string::npos);
  CHECK(out.str().find("G = ") != std::string::npos);
  const std::string summary = slurp(od / "summary.txt");
  CHECK(summary.find("scenario = coupling") != std::string::npos);
  CHECK(summary.find("kappa") != std::string::npos);
}

TEST_CASE("configuration errors exit 1 without artifacts") {
  Scratch s;
  std::ostringstream out, err;
  const fs::path od = s.dir / "out";
  CHECK(cli::run_file("single-photon", (s.dir / "missing.cfg").string(), od.string(), false, out, err) == 1);
  CHECK(entries(od) == 0);
  CHECK(cli::run_file("nonsense", s.write("a.cfg", kRabi), od.string(), false, out, err) == 1);
  CHECK(cli::run_file("single-photon", s.write("b.cfg", "gamma = 0.5\nomega_a = 1\nkappa = 1e-3\nt_max = 10\n"),
                      od.string(), false, out, err) == 1);
  CHECK(cli::run_file("single-photon", s.write("u.cfg", std::string(kRabi) + "gamme = 2\n"), od.string(), false,
                      out, err) == 1);
  CHECK(cli::run_file("pump", s.write("p.cfg", "gamma = 1e-3\nomega_a = 1\nkappa = 1e-3\n"), od.string(), false,
                      out, err) == 1);
  CHECK(entries(od) == 0);
  CHECK(err.str().find("error") != std::string::npos);
}

TEST_CASE("numerical failures exit 2 without artifacts") {
  Scratch s;
  std::ostringstream out, err;
  const fs::path od = s.dir / "out";
  const auto cfg = s.write("t.cfg",
                           "gamma = 1e-3\nomega_a = 1\nkappa = 1e-3\npump = cw\nomega_p = 1.01\ntruncation = 5\n");
  CHECK(cli::run_file("pump", cfg, od.string(), false, out, err) == 2);
  const auto coarse = s.write(
      "s.cfg", "gamma = 1e-3\nomega_a = 1\nkappa = 1e-3\nt_max = 2e4\nn_samples = 3\nstep = 500\n");
  CHECK(cli::run_file("single-photon", coarse, od.string(), false, out, err) == 2);
  CHECK(entries(od) == 0);
}

TEST_CASE("runs are reproducible byte for byte") {
  Scratch s;
  const auto cfg = s.write("r.cfg", kRabi);
  std::ostringstream out, err;
  const fs::path a = s.dir / "a";
  const fs::path b = s.dir / "b";
  const fs::path c = s.dir / "c";
  REQUIRE(cli::run_file("single-photon", cfg, a.string(), false, out, err) == 0);
  REQUIRE(cli::run_file("single-photon", cfg, b.string(), false, out, err) == 0);
  REQUIRE(cli::run_file("single-photon", cfg, c.string(), true, out, err) == 0);
  for (const char* f : {"single_photon.csv", "single_photon_oracle.csv", "summary.txt"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string plain = slurp(a / "single_photon.csv");
  const std::string stamped = slurp(c / "single_photon.csv");
  CHECK(plain.find("# timestamp") == std::string::npos);
  CHECK(stamped.find("# timestamp") != std::string::npos);
  // Only the timestamp line differs.
  std::string stripped;
  std::istringstream lines(stamped);
  for (std::string l; std::getline(lines, l);) {
    if (l.rfind("# timestamp", 0) != 0) stripped += l + "\n";
  }
  CHECK(stripped == plain);
}

TEST_CASE("csv layout") {
  Scratch s;
  const auto cfg = s.write("r.cfg", kRabi);
  std::ostringstream out, err;
  REQUIRE(cli::run_file("single-photon", cfg, s.dir.string(), false, out, err) == 0);
  std::istringstream in(slurp(s.dir / "single_photon.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# radcav ", 0) == 0);
  std::vector<std::string> header;
  while (std::getline(in, line) && line[0] == '#') header.push_back(line);
  CHECK(std::find(header.begin(), header.end(), "# param kappa = 1e-3") != header.end());
  CHECK(line == "t,x,p,y_re,y_im,total");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
    CHECK(line.find('\r') == std::string::npos);
  }
  CHECK(rows == 201);
}
