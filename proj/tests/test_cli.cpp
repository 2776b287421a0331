#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ped/serialize.hpp"
#include "ped/simulation.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = PED_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

// Small synthetic regression CSV with one strong predictor.
fs::path make_fit_csv() {
  auto path = tmp("ped_cli_fit.csv");
  ped::NormalSampler rng(42);
  std::ostringstream os;
  os << "y,x1,x2,x3\n";
  for (int i = 0; i < 40; ++i) {
    const double x1 = rng.next(), x2 = rng.next(), x3 = rng.next();
    const double y = 4.0 * x1 + 0.2 * rng.next();
    os << y << "," << x1 << "," << x2 << "," << x3 << "\n";
  }
  write_file(path, os.str());
  return path;
}

}  // namespace

TEST_CASE("fit runs and writes a result file") {
  const auto csv = make_fit_csv();
  const auto out = tmp("ped_cli_fit.out");
  const int rc = run("fit --input " + csv.string() + " --response y --output " +
                     out.string());
  CHECK(rc == 0);
  const std::string body = slurp(out);
  CHECK(body.find("lambda0 = ") != std::string::npos);
  CHECK(body.find("active_set = [x1]") != std::string::npos);
}

TEST_CASE("forced singleton grid echoes the chosen parameters") {
  const auto csv = make_fit_csv();
  const auto out = tmp("ped_cli_forced.out");
  const int rc = run("fit --input " + csv.string() +
                     " --response y --lambda-grid 0.5 --c-grid 0.75 --output " +
                     out.string());
  CHECK(rc == 0);
  const std::string body = slurp(out);
  CHECK(body.find("lambda0 = 0.5\n") != std::string::npos);
  CHECK(body.find("C = 0.75\n") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
  const auto empty = tmp("ped_cli_empty.csv");
  write_file(empty, "");
  CHECK(run("fit --input " + empty.string() + " --response y") == 2);
  CHECK(run("fit --input /nonexistent.csv --response y") == 2);
  CHECK(run("fit --input " + make_fit_csv().string() + " --response zz") == 2);
  CHECK(run("definitely-not-a-subcommand") == 2);
}

TEST_CASE("simulate writes a deterministic per-replicate csv") {
  const auto a = tmp("ped_cli_sim_a.csv");
  const auto b = tmp("ped_cli_sim_b.csv");
  const std::string base =
      "simulate --n 60 --p 120 --rho 0.5 --replicates 3 --seed 7 --csv ";
  CHECK(run(base + a.string()) == 0);
  CHECK(run(base + b.string()) == 0);
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  CHECK(ca.find("replicate,tp,ms,err_l2") != std::string::npos);
}

TEST_CASE("simulate rejects zero replicates") {
  CHECK(run("simulate --n 60 --p 120 --rho 0.5 --replicates 0") == 2);
}

TEST_CASE("verify subset runs and passes") {
  CHECK(run("verify --only norms --only oracle") == 0);
}

TEST_CASE("verify with brutally tightened tolerances fails") {
  CHECK(run("verify --only kkt --tol 1e-9") != 0);
}
