#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "nlwit/covariance.hpp"
#include "nlwit/io.hpp"
#include "nlwit/matcore.hpp"
#include "nlwit/nonlinear.hpp"
#include "nlwit/states.hpp"
#include "nlwit/witness.hpp"

using namespace nlwit;
using namespace nlwit::io;
using matcore::max_abs_diff;
using states::DensityOperator;

namespace {

DensityOperator singlet_state() {
  const Vector v = testutil::psi_minus_vec();
  return DensityOperator(v * v.adjoint(), DimPair{2, 2});
}

}  // namespace

TEST_CASE("matrix round trip") {
  Rng rng(90);
  Matrix M(3, 5);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 5; ++c) M(r, c) = rng.complex_gaussian();
  const Matrix back = matrix_from_json(matrix_to_json(M));
  CHECK(max_abs_diff(back, M) == 0.0);  // doubles survive JSON exactly

  SUBCASE("malformed payloads named") {
    CHECK_THROWS_WITH_AS(matrix_from_json(json::array()), doctest::Contains("object"),
                         std::invalid_argument);
    json j = matrix_to_json(M);
    j.erase("im");
    CHECK_THROWS_WITH_AS(matrix_from_json(j), doctest::Contains("im"),
                         std::invalid_argument);
    j = matrix_to_json(M);
    j["re"][1].push_back(0.0);  // ragged row
    CHECK_THROWS_WITH_AS(matrix_from_json(j), doctest::Contains("unequal"),
                         std::invalid_argument);
    j = matrix_to_json(M);
    j["re"][0][0] = "text";
    CHECK_THROWS_WITH_AS(matrix_from_json(j), doctest::Contains("number"),
                         std::invalid_argument);
    j = matrix_to_json(M);
    j["im"] = json::array();
    CHECK_THROWS_AS(matrix_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("state round trip") {
  const auto rho = singlet_state();
  const json j = state_to_json(rho);
  const auto back = state_from_json(j);
  CHECK(max_abs_diff(back.mat(), rho.mat()) == 0.0);
  CHECK(back.dims() == rho.dims());

  SUBCASE("three-party dims preserved") {
    Rng rng(91);
    const auto triple =
        DensityOperator(states::random_density(DimPair{2, 4}, rng).mat(),
                        std::vector<int>{2, 2, 2});
    const auto t_back = state_from_json(state_to_json(triple));
    CHECK(t_back.dims() == std::vector<int>{2, 2, 2});
    CHECK(max_abs_diff(t_back.mat(), triple.mat()) == 0.0);
  }

  SUBCASE("invariant violations named") {
    json bad = state_to_json(rho);
    bad["re"][0][0] = 0.9;  // breaks the unit trace
    CHECK_THROWS_WITH_AS(state_from_json(bad), doctest::Contains("trace"),
                         std::invalid_argument);
    bad = state_to_json(rho);
    bad["im"][0][1] = 0.5;  // breaks hermiticity
    CHECK_THROWS_WITH_AS(state_from_json(bad), doctest::Contains("hermit"),
                         std::invalid_argument);
    bad = state_to_json(rho);
    bad["re"][0][0] = -0.2;
    bad["re"][1][1] = 0.7;  // trace restored, positivity broken
    CHECK_THROWS_WITH_AS(state_from_json(bad), doctest::Contains("positiv"),
                         std::invalid_argument);
    bad = state_to_json(rho);
    bad["dims"] = json::array({2, 3});
    CHECK_THROWS_WITH_AS(state_from_json(bad), doctest::Contains("shape"),
                         std::invalid_argument);
    bad = state_to_json(rho);
    bad["dims"] = json::array({2, 0});
    CHECK_THROWS_AS(state_from_json(bad), std::invalid_argument);
  }
}

TEST_CASE("witness round trip") {
  const auto nw = witness::witness_from_npt(singlet_state());
  const json j = witness_to_json(nw.witness);
  const auto back = witness_from_json(j);
  CHECK(max_abs_diff(back.W, nw.witness.W) == 0.0);
  CHECK(back.provenance == "npt-eigenvector");
  CHECK(back.dims == DimPair{2, 2});

  SUBCASE("invalid payloads rejected") {
    json bad = j;
    bad["provenance"] = "folklore";
    CHECK_THROWS_WITH_AS(witness_from_json(bad), doctest::Contains("provenance"),
                         std::invalid_argument);
    bad = j;
    bad["im"][0][1] = 0.25;  // non-Hermitian matrix
    CHECK_THROWS_WITH_AS(witness_from_json(bad), doctest::Contains("Hermitian"),
                         std::invalid_argument);
    bad = j;
    bad["dims"] = json::array({2, 2, 2});
    CHECK_THROWS_WITH_AS(witness_from_json(bad), doctest::Contains("two"),
                         std::invalid_argument);
  }
}

TEST_CASE("nonlinear witness round trip") {
  for (const auto& fw :
       {nonlinear::twoqubit_f1_example(), nonlinear::twoqubit_f2_example(),
        nonlinear::twoqubit_f2_weak()}) {
    const auto back = nonlinear_from_json(nonlinear_to_json(fw));
    CHECK(back.family == fw.family);
    REQUIRE(back.terms.size() == fw.terms.size());
    CHECK(max_abs_diff(back.linear.W, fw.linear.W) == 0.0);
    for (std::size_t k = 0; k < fw.terms.size(); ++k) {
      CHECK(back.terms[k].weight == fw.terms[k].weight);
      CHECK(max_abs_diff(back.terms[k].herm, fw.terms[k].herm) == 0.0);
      CHECK(max_abs_diff(back.terms[k].anti, fw.terms[k].anti) == 0.0);
      CHECK(max_abs_diff(back.terms[k].xtb, fw.terms[k].xtb) <= 1e-15);
    }
    // Evaluation agrees exactly after the round trip.
    const auto rho = states::werner(0.7);
    CHECK(nonlinear::evaluate_nl(back, rho) == nonlinear::evaluate_nl(fw, rho));
  }

  SUBCASE("term validation") {
    json j = nonlinear_to_json(nonlinear::twoqubit_f1_example());
    j["terms"][0]["weight"] = -1.0;
    CHECK_THROWS_WITH_AS(nonlinear_from_json(j), doctest::Contains("positive"),
                         std::invalid_argument);
    j = nonlinear_to_json(nonlinear::twoqubit_f1_example());
    j["terms"][0]["h"]["im"][0][1] = 0.125;
    CHECK_THROWS_WITH_AS(nonlinear_from_json(j), doctest::Contains("Hermitian"),
                         std::invalid_argument);
    j = nonlinear_to_json(nonlinear::twoqubit_f1_example());
    j["family"] = "f3";
    CHECK_THROWS_WITH_AS(nonlinear_from_json(j), doctest::Contains("family"),
                         std::invalid_argument);
    j = nonlinear_to_json(nonlinear::twoqubit_f1_example());
    j["terms"][0].erase("a");
    CHECK_THROWS_WITH_AS(nonlinear_from_json(j), doctest::Contains("term 0"),
                         std::invalid_argument);
  }
}

TEST_CASE("certificate round trip") {
  const auto basis = covariance::default_basis(DimPair{2, 2});
  const Matrix P = states::bell_states()[0].projector();
  const auto cert = covariance::q_from_unitary(P, matcore::identity(4), basis);
  const json j = certificate_to_json(cert, DimPair{2, 2});
  const auto back = certificate_from_json(j);
  CHECK(back.dims == DimPair{2, 2});
  CHECK(max_abs_diff(Matrix(back.cert.alpha), Matrix(cert.alpha)) == 0.0);
  CHECK(max_abs_diff(back.cert.Q, cert.Q) <= 1e-15);
  CHECK(max_abs_diff(back.cert.target, cert.target) == 0.0);
  CHECK(covariance::functional(singlet_state(), back.cert, basis) ==
        doctest::Approx(-0.75).epsilon(1e-12));

  SUBCASE("tampered coefficients fail the reconstruction contract") {
    json bad = j;
    bad["alpha"]["re"][0] = bad["alpha"]["re"][0].get<double>() + 0.2;
    CHECK_THROWS_WITH_AS(certificate_from_json(bad), doctest::Contains("reconstruct"),
                         std::invalid_argument);
  }

  SUBCASE("schema validation") {
    json bad = j;
    bad["basis"] = "pauli";
    CHECK_THROWS_WITH_AS(certificate_from_json(bad), doctest::Contains("basis"),
                         std::invalid_argument);
    bad = j;
    bad["alpha"]["re"].push_back(0.0);
    CHECK_THROWS_AS(certificate_from_json(bad), std::invalid_argument);
    bad = j;
    bad["target"]["re"][0].erase(3);
    CHECK_THROWS_AS(certificate_from_json(bad), std::invalid_argument);
    bad = j;
    bad.erase("alpha");
    CHECK_THROWS_WITH_AS(certificate_from_json(bad), doctest::Contains("alpha"),
                         std::invalid_argument);
  }
}

TEST_CASE("file transport") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nlwit_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "state.json").string();

  const auto rho = states::werner(0.8);
  save_json(path, state_to_json(rho));
  const auto back = state_from_json(load_json(path));
  CHECK(max_abs_diff(back.mat(), rho.mat()) == 0.0);

  SUBCASE("missing file named in the error") {
    const std::string missing = (dir / "nope.json").string();
    CHECK_THROWS_WITH_AS(load_json(missing), doctest::Contains("nope.json"),
                         std::invalid_argument);
  }

  SUBCASE("parse errors carry the path") {
    const std::string broken = (dir / "broken.json").string();
    std::ofstream(broken) << "{ not json";
    CHECK_THROWS_WITH_AS(load_json(broken), doctest::Contains("broken.json"),
                         std::invalid_argument);
  }

  fs::remove_all(dir);
}
