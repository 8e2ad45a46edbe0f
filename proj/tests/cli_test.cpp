// Drives the installed command-line binary end to end.  The binary path
// arrives as the first plain argument (or the NLWIT_BIN environment variable);
// every invocation goes through the shell with stdout/stderr captured.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlwit/covariance.hpp"
#include "nlwit/io.hpp"
#include "nlwit/matcore.hpp"
#include "nlwit/states.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_bin;
fs::path g_dir;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out_file = g_dir / "stdout.txt";
  const fs::path err_file = g_dir / "stderr.txt";
  const std::string cmd = "\"" + g_bin + "\" " + args + " > \"" + out_file.string() +
                          "\" 2> \"" + err_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::string write_state(const char* name, const nlwit::states::DensityOperator& rho) {
  const std::string path = (g_dir / name).string();
  nlwit::io::save_json(path, nlwit::io::state_to_json(rho));
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<double> csv_row(const std::string& line) {
  std::vector<double> vals;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) vals.push_back(std::stod(cell));
  return vals;
}

nlwit::states::DensityOperator singlet() {
  nlwit::Vector v(4);
  v << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  return nlwit::states::DensityOperator(v * v.adjoint(), nlwit::DimPair{2, 2});
}

nlwit::states::DensityOperator mixed() {
  return nlwit::states::DensityOperator(nlwit::Matrix::Identity(4, 4) / 4.0,
                                        nlwit::DimPair{2, 2});
}

}  // namespace

TEST_CASE("detect classifies the reference states") {
  const auto ent = run_cli("detect --state " + write_state("singlet.json", singlet()) +
                           " --samples 120");
  CHECK(ent.code == 1);
  CHECK(ent.out.find("verdict: entangled") != std::string::npos);
  CHECK(ent.out.find("ppt: no") != std::string::npos);
  CHECK(ent.out.find("linear witness value: -0.5") != std::string::npos);
  CHECK(ent.out.find("-> detected") != std::string::npos);

  const auto sep = run_cli("detect --state " + write_state("mixed.json", mixed()) +
                           " --samples 120");
  CHECK(sep.code == 0);
  CHECK(sep.out.find("verdict: separable-consistent") != std::string::npos);
  CHECK(sep.out.find("ppt: yes") != std::string::npos);
  CHECK(sep.out.find("linear witness: none") != std::string::npos);
}

TEST_CASE("detect rejects malformed input with exit code 2") {
  nlwit::io::json bad = nlwit::io::matrix_to_json(nlwit::Matrix::Identity(4, 4) * 0.5);
  bad["dims"] = nlwit::io::json::array({2, 2});
  const std::string path = (g_dir / "bad.json").string();
  nlwit::io::save_json(path, bad);
  const auto r = run_cli("detect --state " + path);
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("trace") != std::string::npos);

  const auto missing = run_cli("detect --state " + (g_dir / "absent.json").string());
  CHECK(missing.code == 2);
}

TEST_CASE("detect emits machine-readable reports") {
  const auto r = run_cli("detect --state " + write_state("singlet.json", singlet()) +
                         " --samples 120 --format json");
  CHECK(r.code == 1);
  const auto j = nlwit::io::json::parse(r.out);
  CHECK(j.at("verdict") == "entangled");
  CHECK(j.at("ppt") == false);
  CHECK(j.at("f1").at("detected") == true);
  CHECK(j.at("f2").at("detected") == true);
  CHECK(std::abs(j.at("linear").at("value").get<double>() + 0.5) <= 1e-9);
  CHECK(std::abs(j.at("f2").at("value").get<double>() + 0.75) <= 1e-9);
  CHECK(j.at("covariance").at("detected") == true);
  // The embedded witness payload loads back.
  const auto w = nlwit::io::witness_from_json(j.at("linear").at("witness"));
  CHECK(w.dims == nlwit::DimPair{2, 2});
}

TEST_CASE("bundled example self-tests pass") {
  const auto first = run_cli("example eq12");
  CHECK(first.code == 0);
  CHECK(first.out.find("match") != std::string::npos);
  CHECK(first.out.find("linear part:") != std::string::npos);

  const auto second = run_cli("example eq13");
  CHECK(second.code == 0);
  CHECK(second.out.find("match") != std::string::npos);

  const auto bogus = run_cli("example eq99");
  CHECK(bogus.code == 2);
}

TEST_CASE("family sweep emits the full grid") {
  const std::string args = "sweep-werner --samples 60 --seed 555";
  const auto r = run_cli(args);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 22);  // header + 21 grid rows
  CHECK(lines[0] == "p,linear,f1,f2,f1_lhs,f1_rhs,f2_lhs,f2_rhs,cov_best");

  const auto top = csv_row(lines[21]);  // p = 1: the maximally entangled end
  REQUIRE(top.size() == 9);
  CHECK(std::abs(top[0] - 1.0) <= 1e-12);
  CHECK(std::abs(top[1] + 0.5) <= 1e-9);        // linear value
  CHECK(std::abs(top[2] + 0.5) <= 1e-9);        // single-correction value
  CHECK(std::abs(top[3] + 33.0 / 64.0) <= 1e-9);  // damped full-family value
  CHECK(std::abs(top[4] + 0.5) <= 1e-9);
  CHECK(std::abs(top[5] - 0.5) <= 1e-9);
  CHECK(std::abs(top[6] + 0.5) <= 1e-9);
  CHECK(std::abs(top[7] - 0.25) <= 1e-9);
  CHECK(top[8] <= -0.5);  // optimized covariance functional

  const auto middle = csv_row(lines[1 + 7]);  // p = 0.35: just past the threshold
  CHECK(std::abs(middle[0] - 0.35) <= 1e-12);
  CHECK(middle[1] < 0.0);

  SUBCASE("byte-identical reruns") {
    const auto again = run_cli(args);
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
  }
}

TEST_CASE("benchmark reports a clean hierarchy") {
  const std::string args = "benchmark --samples 150 --seed 424242";
  const auto r = run_cli(args);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "samples,npt,linear_detected,f2_detected,f1_detected,cov_detected,chain_violations");
  const auto row = csv_row(lines[1]);
  REQUIRE(row.size() == 7);
  CHECK(row[0] == 150.0);
  CHECK(row[1] >= row[4]);  // npt count dominates the first-condition count
  CHECK(row[4] >= row[3]);  // which dominates the second-condition count
  CHECK(row[6] == 0.0);

  SUBCASE("deterministic reruns") {
    const auto again = run_cli(args);
    CHECK(again.out == r.out);
  }

  SUBCASE("text format mirrors the counts") {
    const auto text = run_cli(args + " --format text");
    CHECK(text.code == 0);
    CHECK(text.out.find("hierarchy violations: 0") != std::string::npos);
  }

  SUBCASE("rectangular dims run too") {
    const auto r23 = run_cli("benchmark --samples 40 --seed 99 --dims 2x3");
    CHECK(r23.code == 0);
    CHECK(csv_row(lines_of(r23.out)[1])[6] == 0.0);
  }
}

TEST_CASE("certificates survive the save and validate cycle") {
  const std::string cert_path = (g_dir / "cert.json").string();
  const std::string state_path = write_state("singlet.json", singlet());
  const auto det = run_cli("detect --state " + state_path + " --samples 120 --save-cert " +
                           cert_path);
  REQUIRE(det.code == 1);
  REQUIRE(fs::exists(cert_path));

  const auto ok = run_cli("validate-cert --cert " + cert_path);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("certificate valid") != std::string::npos);

  const auto scored = run_cli("validate-cert --cert " + cert_path + " --state " + state_path);
  CHECK(scored.code == 1);
  CHECK(scored.out.find("-> detected") != std::string::npos);

  const auto neutral = run_cli("validate-cert --cert " + cert_path + " --state " +
                               write_state("mixed.json", mixed()));
  CHECK(neutral.code == 0);
  CHECK(neutral.out.find("-> not detected") != std::string::npos);

  SUBCASE("tampered certificates are rejected") {
    auto j = nlwit::io::load_json(cert_path);
    j["alpha"]["re"][0] = j["alpha"]["re"][0].get<double>() + 0.25;
    const std::string corrupt = (g_dir / "corrupt.json").string();
    nlwit::io::save_json(corrupt, j);
    const auto r = run_cli("validate-cert --cert " + corrupt);
    CHECK(r.code == 2);
    CHECK(r.err.find("reconstruct") != std::string::npos);
  }
}

TEST_CASE("argument handling") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("detect --help").code == 0);
  CHECK(run_cli("").code == 2);                      // subcommand required
  CHECK(run_cli("detect").code == 2);                // --state required
  CHECK(run_cli("frobnicate").code == 2);            // unknown subcommand
  CHECK(run_cli("detect --no-such-flag x").code == 2);
  CHECK(run_cli("sweep-werner --step 0").code == 2);  // out-of-range step
  CHECK(run_cli("benchmark --dims 9x9").code == 2);
}

int main(int argc, char** argv) {
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    if (g_bin.empty() && argv[i][0] != '-') {
      g_bin = argv[i];
      continue;
    }
    pass.push_back(argv[i]);
  }
  if (g_bin.empty()) {
    if (const char* env = std::getenv("NLWIT_BIN")) g_bin = env;
  }
  if (g_bin.empty() || !fs::exists(g_bin)) {
    std::fprintf(stderr, "usage: cli_tests <path-to-cli-binary> [doctest options]\n");
    return 1;
  }
  g_dir = fs::temp_directory_path() / "nlwit_cli_test";
  fs::create_directories(g_dir);
  doctest::Context ctx(static_cast<int>(pass.size()), pass.data());
  const int rc = ctx.run();
  fs::remove_all(g_dir);
  return rc;
}
