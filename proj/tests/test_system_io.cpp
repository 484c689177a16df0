#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace invman;
using invman::testing::planar_system;
using invman::testing::random_system;

namespace fs = std::filesystem;

namespace {

const fs::path kData = INVMAN_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("invman_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("parsing the planar file") {
  const auto sys = parse_system_file(slurp(kData / "planar.sys"));
  CHECK(sys == planar_system());
  CHECK_FALSE(sys.analytic.has_value());
}

TEST_CASE("parser normalises and merges monomials") {
  const auto sys = parse_system_file(
      "# comment\n"
      "dim_stable 1   # trailing comment\n"
      "dim_unstable 1\n"
      "mu 2\n"
      "lambda -1\n"
      "F 2 0 3 1\n"
      "F 1 2 0 0.5\n"
      "F 1 2 0 0.25\n"
      "analytic 0.5 3\n");
  REQUIRE(sys.monomials.size() == 2);
  CHECK(sys.monomials[0] == Monomial{0, MultiIndex{2, 0}, 0.75});
  CHECK(sys.monomials[1] == Monomial{1, MultiIndex{0, 3}, 1.0});
  REQUIRE(sys.analytic.has_value());
  CHECK(sys.analytic->radius == 0.5);
  CHECK(sys.analytic->sup_norm == 3.0);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      (void)parse_system_file(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("dim_stable 1\ndim_unstable 1\nlambda x\nmu 1\n") == 3);
  CHECK(line_of("dim_stable 1\nbogus 2\n") == 2);
  CHECK(line_of("dim_stable 1\ndim_unstable 1\nlambda -1\nmu 1\nF 1 2 0\n") == 5);
  CHECK(line_of("F 1 2 0 1\n") == 1);
  CHECK(line_of("dim_stable 1\ndim_unstable 1\nlambda -1\nmu 1\nF 1 -2 0 1\n") == 5);
}

TEST_CASE("semantic validation") {
  const std::string head = "dim_stable 1\ndim_unstable 1\n";
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda -1 -2\nmu 1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda 1\nmu 1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda -1\nmu -1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda -1\nmu 1\nF 3 2 0 1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda -1\nmu 1\nF 1 1 0 1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file("dim_stable 2\ndim_unstable 1\nlambda -1 -2\nmu 1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda -1\n"), ValidationError);
  CHECK_THROWS_AS((void)parse_system_file(head + "lambda -1\nmu 1\nanalytic 0 1\n"), ValidationError);
}

TEST_CASE("format and parse round-trip") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    auto sys = random_system(rng);
    if (trial % 3 == 0) sys.analytic = AnalyticBound{0.1 + trial, 1.0 / (trial + 1)};
    const auto text = format_system(sys);
    const auto back = parse_system_file(text);
    CHECK(back == sys);
    CHECK(format_system(back) == text);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("enclosure samples") {
  const auto vf = invman::testing::planar_field<double>();
  const auto run = certify(vf, 20);
  const auto& cert = run.certificate;

  const auto origin = emit_enclosure_samples(run.stable, cert, 1);
  REQUIRE(origin.size() == 1);
  CHECK(origin[0].parameter == std::vector<double>{0.0});
  CHECK(origin[0].lower == std::vector<double>{0.0, 0.0});
  CHECK(origin[0].remainder == 0.0);

  const auto grid = emit_enclosure_samples(run.unstable, cert, 11);
  REQUIRE(grid.size() == 11);
  for (const auto& s : grid) {
    CHECK(std::abs(s.parameter[0]) < cert.r_theta);
    CHECK(s.remainder == remainder_bound(cert, std::abs(s.parameter[0])));
    CHECK(s.lower[1] == doctest::Approx(s.parameter[0] + invman::evaluate<double>(run.unstable.components[1], std::vector<double>{0.0, s.parameter[0]})));
  }
  CHECK(grid.front().parameter[0] == doctest::Approx(-cert.r_theta * (1 - 1e-3)));

  const auto vi = invman::testing::planar_field<Interval>();
  const auto run_i = certify(vi, 20);
  const auto boxes = emit_enclosure_samples(run_i.stable, run_i.certificate, 5);
  for (std::size_t n = 0; n < boxes.size(); ++n) {
    const std::vector<double> t{boxes[n].parameter[0]};
    const auto point = run.stable.evaluate(t);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(boxes[n].lower[j] <= point[j] + 1e-15);
      CHECK(point[j] - 1e-15 <= boxes[n].upper[j]);
    }
  }
}

TEST_CASE("pipeline writes every artifact") {
  const auto dir = fresh_dir("artifacts");
  RunConfig cfg;
  cfg.input = kData / "planar.sys";
  cfg.order = 10;
  cfg.samples = 7;
  cfg.normal_form_order = 5;
  cfg.out_dir = dir;
  std::ostringstream diag;
  REQUIRE(run_pipeline(cfg, diag) == kSuccess);
  CHECK(diag.str().find("certified (float)") != std::string::npos);

  for (const char* name : {"certificate.json", "coefficients.csv", "enclosure_stable.csv", "enclosure_unstable.csv",
                           "plot_manifolds.py", "normal_form.csv"})
    CHECK(fs::exists(dir / name));

  const auto j = nlohmann::json::parse(slurp(dir / "certificate.json"));
  CHECK(j["n1"] == 10);
  CHECK(j["mode"] == "float");
  CHECK(j["Omega"].get<double>() == doctest::Approx(0.2));
  CHECK(j["r_theta"].get<double>() > 0.0);
  CHECK(j["remainder"]["exponent"] == 11);
  CHECK(j["lambda"] == nlohmann::json::array({-0.4}));

  const auto coeffs = slurp(dir / "coefficients.csv");
  CHECK(coeffs.rfind("side,component,exponents,value\n", 0) == 0);
  CHECK(coeffs.find("stable,1,2 0,-2.5\n") != std::string::npos);
  const auto stable = slurp(dir / "enclosure_stable.csv");
  CHECK(stable.rfind("side,t1,z1,z2,remainder\n", 0) == 0);
  CHECK(line_count(stable) == 8);
  CHECK(slurp(dir / "normal_form.csv").rfind("component,exponents,value\n", 0) == 0);

  cfg.mode = Mode::Interval;
  cfg.out_dir = dir / "interval";
  REQUIRE(run_pipeline(cfg, diag) == kSuccess);
  const auto ji = nlohmann::json::parse(slurp(cfg.out_dir / "certificate.json"));
  CHECK(ji["mode"] == "interval");
  CHECK(ji["Omega"].is_array());
  CHECK(slurp(cfg.out_dir / "enclosure_stable.csv").rfind("side,t1,z1_lo,z1_hi,z2_lo,z2_hi,remainder\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("pipeline output is deterministic") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  RunConfig cfg;
  cfg.input = kData / "planar.sys";
  cfg.order = 15;
  cfg.samples = 9;
  std::ostringstream diag;
  cfg.out_dir = a;
  REQUIRE(run_pipeline(cfg, diag) == kSuccess);
  cfg.out_dir = b;
  REQUIRE(run_pipeline(cfg, diag) == kSuccess);
  for (const char* name : {"certificate.json", "coefficients.csv", "enclosure_stable.csv", "enclosure_unstable.csv"})
    CHECK(slurp(a / name) == slurp(b / name));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("pipeline exit codes") {
  std::ostringstream diag;
  RunConfig cfg;
  const auto dir = fresh_dir("resonant");
  cfg.input = kData / "resonant.sys";
  cfg.out_dir = dir;
  CHECK(run_pipeline(cfg, diag) == kResonance);
  CHECK(diag.str().find("2*lambda_1 = lambda_2") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "certificate.json"));

  const auto bad = fresh_dir("bad_input");
  fs::create_directories(bad);
  {
    std::ofstream(bad / "broken.sys") << "dim_stable 1\nnonsense\n";
  }
  cfg.input = bad / "broken.sys";
  cfg.out_dir = bad / "out";
  CHECK(run_pipeline(cfg, diag) == kParseError);

  cfg.input = kData / "planar.sys";
  cfg.order = 1;
  CHECK(run_pipeline(cfg, diag) == kParseError);
  cfg.order = 10;
  cfg.rho = 2;
  CHECK(run_pipeline(cfg, diag) == kParseError);
  fs::remove_all(bad);
}
