// Command-line surface for the witness library: per-state detection reports,
// family-threshold sweeps, bundled-example self-tests, Monte Carlo hierarchy
// benchmarks, and certificate re-validation.
//
// Exit codes: 0 = separable-consistent / success, 1 = entangled-detected (or
// self-test/hierarchy failure), 2 = input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlwit/covariance.hpp"
#include "nlwit/io.hpp"
#include "nlwit/matcore.hpp"
#include "nlwit/multipartite.hpp"
#include "nlwit/nonlinear.hpp"
#include "nlwit/states.hpp"
#include "nlwit/witness.hpp"

namespace {

using namespace nlwit;
using states::DensityOperator;
using states::PureState;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << content;
}

// Maximally entangled direction sum_i |ii>/sqrt(min(dA,dB)), the reference
// detector direction for sweeps and benchmarks.
PureState entangled_direction(DimPair dims) {
  const int m = std::min(dims.dA, dims.dB);
  Vector v = Vector::Zero(dims.total());
  for (int i = 0; i < m; ++i) v(i * dims.dB + i) = 1.0;
  return PureState::normalized(std::move(v), dims);
}

// Eigenvector of the most negative eigenvalue of rho^{T_B}; same tie-break as
// the witness constructor (first column within the detection margin of the
// minimum, scanning in descending eigenvalue order).
PureState min_pt_eigvec(const DensityOperator& rho) {
  const DimPair dims = rho.dim_pair();
  const auto eig = matcore::herm_eig(matcore::partial_transpose(rho.mat(), dims));
  const int n = static_cast<int>(eig.values.size());
  const double lo = eig.values(n - 1);
  for (int i = 0; i < n; ++i)
    if (eig.values(i) <= lo + tol::detection)
      return PureState::normalized(eig.vectors.col(i), dims);
  return PureState::normalized(eig.vectors.col(n - 1), dims);
}

std::vector<PureState> pt_eigenbasis(const DensityOperator& rho) {
  const DimPair dims = rho.dim_pair();
  const auto eig = matcore::herm_eig(matcore::partial_transpose(rho.mat(), dims));
  std::vector<PureState> basis;
  basis.reserve(rho.dim());
  for (int i = 0; i < rho.dim(); ++i)
    basis.push_back(PureState::normalized(eig.vectors.col(i), dims));
  return basis;
}

struct DetectOptions {
  std::string state_path;
  std::string out_path;
  std::string cert_path;  // optional: save the best covariance certificate
  std::string format = "text";
  std::uint64_t seed = 4242;
  int samples = 500;
  double tolerance = 1e-9;
};

int run_detect(const DetectOptions& opt) {
  const auto rho = io::state_from_json(io::load_json(opt.state_path));
  if (!rho.bipartite())
    throw std::invalid_argument("detect requires a bipartite state (dims list of length 2)");
  const DimPair dims = rho.dim_pair();

  const bool ppt = states::is_ppt(rho);
  const PureState phi = min_pt_eigvec(rho);

  std::optional<witness::NptWitness> lin;
  if (!ppt) lin = witness::witness_from_npt(rho);

  const auto f1c = nonlinear::detect_condition_f1(rho, phi);
  const auto f2c = nonlinear::detect_condition_f2(rho, phi);
  const double f1v = nonlinear::evaluate_nl(nonlinear::improve_f1(phi, phi), rho);
  const double f2v = nonlinear::evaluate_nl(nonlinear::improve_f2(phi, pt_eigenbasis(rho)), rho);

  const auto basis = covariance::default_basis(dims);
  const auto cov = covariance::optimize_q(
      rho, phi.projector(), basis,
      covariance::OptimizeOptions{opt.samples, std::max(1, opt.samples / 10)}, opt.seed);
  const bool cov_detected = cov.value < -opt.tolerance;
  if (!opt.cert_path.empty())
    io::save_json(opt.cert_path, io::certificate_to_json(cov.cert, dims));

  const bool entangled = !ppt || f1c.detected || f2c.detected || cov_detected;

  std::string report;
  if (opt.format == "json") {
    io::json j{{"dims", rho.dims()},
               {"ppt", ppt},
               {"f1", {{"value", f1v}, {"lhs", f1c.lhs}, {"rhs", f1c.rhs},
                       {"detected", f1c.detected}}},
               {"f2", {{"value", f2v}, {"lhs", f2c.lhs}, {"rhs", f2c.rhs},
                       {"detected", f2c.detected}}},
               {"covariance", {{"value", cov.value}, {"detected", cov_detected}}},
               {"verdict", entangled ? "entangled" : "separable-consistent"}};
    if (lin) j["linear"] = {{"value", lin->lambda_min},
                            {"witness", io::witness_to_json(lin->witness)}};
    report = j.dump(2) + "\n";
  } else {
    report += "state: " + std::to_string(rho.dim()) + " x " + std::to_string(rho.dim()) +
              ", dims " + std::to_string(dims.dA) + " x " + std::to_string(dims.dB) + "\n";
    report += std::string("ppt: ") + (ppt ? "yes" : "no") + "\n";
    if (lin) {
      report += "linear witness value: " + num(lin->lambda_min) + "\n";
      if (dims.dA == 2 && dims.dB == 2)
        report += "  " + witness::format_pauli(witness::pauli_decompose(lin->witness.W)) + "\n";
    } else {
      report += "linear witness: none (state is ppt)\n";
    }
    report += "single-correction value: " + num(f1v) + "\n";
    report += "full-family value: " + num(f2v) + "\n";
    report += "single-correction condition: lhs " + num(f1c.lhs) + ", rhs " + num(f1c.rhs) +
              (f1c.detected ? " -> detected" : " -> not detected") + "\n";
    report += "full-family condition: lhs " + num(f2c.lhs) + ", rhs " + num(f2c.rhs) +
              (f2c.detected ? " -> detected" : " -> not detected") + "\n";
    report += "covariance best: " + num(cov.value) +
              (cov_detected ? " -> detected" : " -> not detected") + "\n";
    report += std::string("verdict: ") + (entangled ? "entangled" : "separable-consistent") + "\n";
  }
  write_output(opt.out_path, report);
  return entangled ? 1 : 0;
}

struct SweepOptions {
  std::string out_path;
  double step = 0.05;
  std::uint64_t seed = 12345;
  int samples = 300;
};

int run_sweep(const SweepOptions& opt) {
  if (opt.step <= 0 || opt.step > 1)
    throw std::invalid_argument("sweep step must lie in (0, 1]");
  const auto phi = states::bell_states()[0];
  const Matrix P = phi.projector();
  const auto basis = covariance::default_basis(DimPair{2, 2});
  const auto f1w = nonlinear::twoqubit_f1_example();
  const auto f2w = nonlinear::twoqubit_f2_weak();
  const witness::LinearWitness lin(matcore::partial_transpose(P, DimPair{2, 2}),
                                   DimPair{2, 2}, "user");

  std::string csv = "p,linear,f1,f2,f1_lhs,f1_rhs,f2_lhs,f2_rhs,cov_best\n";
  int row = 0;
  for (double p = 0.0; p <= 1.0 + 1e-12; p += opt.step, ++row) {
    const double pc = std::min(p, 1.0);
    const auto rho = states::werner(pc);
    const auto c1 = nonlinear::detect_condition_f1(rho, phi);
    const auto c2 = nonlinear::detect_condition_f2(rho, phi);
    const auto cov = covariance::optimize_q(
        rho, P, basis, covariance::OptimizeOptions{opt.samples, std::max(1, opt.samples / 10)},
        opt.seed + static_cast<std::uint64_t>(row));
    csv += num(pc) + "," + num(witness::evaluate(lin, rho)) + "," +
           num(nonlinear::evaluate_nl(f1w, rho)) + "," + num(nonlinear::evaluate_nl(f2w, rho)) +
           "," + num(c1.lhs) + "," + num(c1.rhs) + "," + num(c2.lhs) + "," + num(c2.rhs) + "," +
           num(cov.value) + "\n";
  }
  write_output(opt.out_path, csv);
  return 0;
}

int run_example(const std::string& which) {
  const bool full = which == "eq13";
  const auto machine = full ? nonlinear::twoqubit_f2_example() : nonlinear::twoqubit_f1_example();
  const auto reference =
      full ? nonlinear::twoqubit_f2_reference() : nonlinear::twoqubit_f1_reference();

  const auto linear_expansion = witness::pauli_decompose(machine.linear.W);
  std::string report = "linear part: " + witness::format_pauli(linear_expansion) + "\n";
  const auto grouped = nonlinear::pauli_square_form(machine);
  for (const auto& sq : grouped.squares)
    report += "  - " + num(sq.prefactor) + " * <" + witness::format_pauli(sq.observable) + ">^2\n";

  const RealMatrix n_machine = nonlinear::quadratic_form_matrix(machine);
  const RealMatrix n_reference = nonlinear::quadratic_form_matrix(reference, 2);
  const double quad_dev = (n_machine - n_reference).cwiseAbs().maxCoeff();

  const Matrix lin_machine = machine.linear.W;
  const Matrix lin_reference = witness::pauli_recompose(reference.linear, 2);
  const double lin_dev = matcore::max_abs_diff(lin_machine, lin_reference);

  const double dev = std::max(quad_dev, lin_dev);
  report += "max coefficient deviation from bundled reference: " + num(dev) + "\n";
  report += (dev <= 1e-12) ? "match\n" : "MISMATCH\n";
  std::cout << report;
  return dev <= 1e-12 ? 0 : 1;
}

struct BenchOptions {
  std::string out_path;
  std::string format = "csv";
  std::string dims_token = "2x2";
  std::uint64_t seed = 20240101;
  int samples = 1000;
  double tolerance = 1e-9;
};

DimPair parse_dims(const std::string& token) {
  const auto x = token.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("dims must look like 2x2 or 2x3");
  const int dA = std::stoi(token.substr(0, x));
  const int dB = std::stoi(token.substr(x + 1));
  if (dA < 2 || dB < 2 || dA > 4 || dB > 4)
    throw std::invalid_argument("dims out of supported range (2..4 per side)");
  return DimPair{dA, dB};
}

int run_benchmark(const BenchOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("samples must be >= 1");
  const DimPair dims = parse_dims(opt.dims_token);
  const PureState phi = entangled_direction(dims);
  const witness::LinearWitness lin(matcore::partial_transpose(phi.projector(), dims), dims,
                                   "user");
  const auto basis = covariance::default_basis(dims);
  const auto cert = covariance::q_from_unitary(
      phi.projector(), Matrix::Identity(dims.total(), dims.total()), basis);

  int npt = 0, linear_detected = 0, f1_detected = 0, f2_detected = 0, cov_detected = 0;
  int chain_violations = 0;
  std::vector<std::uint64_t> offenders;
  for (int i = 0; i < opt.samples; ++i) {
    const std::uint64_t sample_seed = opt.seed + static_cast<std::uint64_t>(i);
    const auto rho = states::random_density(dims, sample_seed);
    const bool is_npt = !states::is_ppt(rho);
    const auto c1 = nonlinear::detect_condition_f1(rho, phi);
    const auto c2 = nonlinear::detect_condition_f2(rho, phi);
    const bool lind = witness::evaluate(lin, rho) < -tol::detection;
    const bool covd = covariance::functional(rho, cert, basis) < -opt.tolerance;
    npt += is_npt;
    linear_detected += lind;
    f1_detected += c1.detected;
    f2_detected += c2.detected;
    cov_detected += covd;
    if ((c2.detected && !c1.detected) || (c1.detected && !is_npt)) {
      ++chain_violations;
      offenders.push_back(sample_seed);
    }
  }

  std::string report;
  if (opt.format == "text") {
    report += "samples: " + std::to_string(opt.samples) + "\n";
    report += "npt: " + std::to_string(npt) + "\n";
    report += "linear detected: " + std::to_string(linear_detected) + "\n";
    report += "f2 detected: " + std::to_string(f2_detected) + "\n";
    report += "f1 detected: " + std::to_string(f1_detected) + "\n";
    report += "covariance detected: " + std::to_string(cov_detected) + "\n";
    report += "hierarchy violations: " + std::to_string(chain_violations) + "\n";
  } else {
    report = "samples,npt,linear_detected,f2_detected,f1_detected,cov_detected,chain_violations\n";
    report += std::to_string(opt.samples) + "," + std::to_string(npt) + "," +
              std::to_string(linear_detected) + "," + std::to_string(f2_detected) + "," +
              std::to_string(f1_detected) + "," + std::to_string(cov_detected) + "," +
              std::to_string(chain_violations) + "\n";
  }
  write_output(opt.out_path, report);
  if (chain_violations > 0) {
    std::cerr << "hierarchy violated; offending seeds:";
    for (const auto s : offenders) std::cerr << " " << s;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

struct CertOptions {
  std::string cert_path;
  std::string state_path;
  double tolerance = 1e-9;
};

int run_validate_cert(const CertOptions& opt) {
  const auto loaded = io::certificate_from_json(io::load_json(opt.cert_path));
  std::cout << "certificate valid: dims " << loaded.dims.dA << " x " << loaded.dims.dB
            << ", coefficients " << loaded.cert.alpha.size() << "\n";
  if (opt.state_path.empty()) return 0;
  const auto rho = io::state_from_json(io::load_json(opt.state_path));
  const auto basis = covariance::default_basis(loaded.dims);
  const double value = covariance::functional(rho, loaded.cert, basis);
  const bool detected = value < -opt.tolerance;
  std::cout << "functional value: " << num(value)
            << (detected ? " -> detected" : " -> not detected") << "\n";
  return detected ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement witness toolkit: linear witnesses, quadratic improvements, "
               "covariance-matrix functionals, and separability checks."};
  app.require_subcommand(1);
  int rc = 0;

  DetectOptions det;
  auto* detect = app.add_subcommand("detect", "Run every implemented criterion on a state file");
  detect->add_option("--state", det.state_path, "state JSON file")->required();
  detect->add_option("--seed", det.seed, "optimizer seed");
  detect->add_option("--samples", det.samples, "covariance optimizer draws");
  detect->add_option("--tol", det.tolerance, "detection threshold");
  detect->add_option("--out", det.out_path, "write the report here instead of stdout");
  detect->add_option("--save-cert", det.cert_path, "save the best covariance certificate");
  detect->add_option("--format", det.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  detect->callback([&] { rc = run_detect(det); });

  SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep-werner",
                                   "CSV sweep of all criteria over the Werner family");
  sweep->add_option("--step", sw.step, "grid step in (0, 1]");
  sweep->add_option("--seed", sw.seed, "optimizer seed");
  sweep->add_option("--samples", sw.samples, "covariance optimizer draws per row");
  sweep->add_option("--out", sw.out_path, "write the CSV here instead of stdout");
  sweep->callback([&] { rc = run_sweep(sw); });

  std::string which;
  auto* example = app.add_subcommand("example",
                                     "Print a bundled two-qubit form and self-test it "
                                     "against its hard-coded expansion");
  example->add_option("token", which, "eq12 (single-correction) | eq13 (full-family)")
      ->required()
      ->check(CLI::IsMember({"eq12", "eq13"}));
  example->callback([&] { rc = run_example(which); });

  BenchOptions bench;
  auto* benchmark = app.add_subcommand("benchmark",
                                       "Monte Carlo detection counts and hierarchy check");
  benchmark->add_option("--samples", bench.samples, "number of random states");
  benchmark->add_option("--seed", bench.seed, "base seed (sample i uses seed + i)");
  benchmark->add_option("--dims", bench.dims_token, "local dimensions, e.g. 2x2");
  benchmark->add_option("--tol", bench.tolerance, "covariance detection threshold");
  benchmark->add_option("--out", bench.out_path, "write the summary here instead of stdout");
  benchmark->add_option("--format", bench.format, "csv | text")
      ->check(CLI::IsMember({"csv", "text"}));
  benchmark->callback([&] { rc = run_benchmark(bench); });

  CertOptions cert;
  auto* validate = app.add_subcommand("validate-cert",
                                      "Re-validate a stored certificate, optionally "
                                      "evaluating it on a state");
  validate->add_option("--cert", cert.cert_path, "certificate JSON file")->required();
  validate->add_option("--state", cert.state_path, "state JSON file");
  validate->add_option("--tol", cert.tolerance, "detection threshold");
  validate->callback([&] { rc = run_validate_cert(cert); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
