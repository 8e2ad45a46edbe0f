#include "nlwit/multipartite.hpp"

#include <cmath>
#include <stdexcept>

namespace nlwit::multipartite {

using matcore::herm_eig;
using matcore::max_abs_diff;
using matcore::partial_transpose;
using nonlinear::NonlinearWitness;
using nonlinear::QuadraticTerm;
using states::DensityOperator;
using states::PureState;
using witness::LinearWitness;
using witness::OperatorMap;

std::array<Cut, 3> all_cuts() { return {Cut::A_BC, Cut::AB_C, Cut::AC_B}; }

std::string cut_name(Cut cut) {
  switch (cut) {
    case Cut::A_BC: return "A|BC";
    case Cut::AB_C: return "AB|C";
    case Cut::AC_B: return "AC|B";
  }
  throw std::logic_error("cut_name: unreachable");
}

int lift_index(Cut cut, int idx) {
  if (idx < 0 || idx > 7) throw std::invalid_argument("lift_index: index out of range");
  const int a = (idx >> 2) & 1, b = (idx >> 1) & 1, c = idx & 1;
  switch (cut) {
    case Cut::A_BC: return idx;                    // (a, b, c)
    case Cut::AB_C: return (c << 2) | (b << 1) | a;  // swap slots 1 and 3: (c, b, a)
    case Cut::AC_B: return (b << 2) | (a << 1) | c;  // swap slots 1 and 2: (b, a, c)
  }
  throw std::logic_error("lift_index: unreachable");
}

Matrix lift_matrix(Cut cut, const Matrix& M) {
  if (M.rows() != 8 || M.cols() != 8)
    throw std::invalid_argument("lift_matrix: expected an 8 x 8 operator");
  Matrix out(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) out(lift_index(cut, r), lift_index(cut, c)) = M(r, c);
  return out;
}

DensityOperator lift(const DensityOperator& rho, Cut cut) {
  if (rho.dims() != std::vector<int>{2, 2, 2})
    throw std::invalid_argument("lift: expected a three-qubit state");
  return DensityOperator(lift_matrix(cut, rho.mat()), DimPair{2, 4});
}

DensityOperator unlift(const DensityOperator& rho, Cut cut) {
  if (rho.dims() != std::vector<int>{2, 4})
    throw std::invalid_argument("unlift: expected a lifted 2 x 4 state");
  return DensityOperator(lift_matrix(cut, rho.mat()), std::vector<int>{2, 2, 2});
}

namespace {

Vector qubit_pure(Rng& rng) {
  Vector v(2);
  v << rng.complex_gaussian(), rng.complex_gaussian();
  return v / v.norm();
}

Vector triple_product(Rng& rng) {
  const Vector a = qubit_pure(rng);
  const Vector b = qubit_pure(rng);
  const Vector c = qubit_pure(rng);
  Vector v(8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) v((i << 2) | (j << 1) | k) = a(i) * b(j) * c(k);
  return v;
}

}  // namespace

DensityOperator random_fully_separable(Rng& rng, int terms) {
  if (terms <= 0) terms = 16;
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 1e-12;
    total += x;
  }
  Matrix M = Matrix::Zero(8, 8);
  for (int t = 0; t < terms; ++t) {
    const Vector v = triple_product(rng);
    M += (w[t] / total) * (v * v.adjoint());
  }
  return DensityOperator(std::move(M), std::vector<int>{2, 2, 2});
}

DensityOperator random_fully_separable(std::uint64_t seed, int terms) {
  Rng rng(seed);
  return random_fully_separable(rng, terms);
}

DensityOperator random_biseparable(Rng& rng, int terms) {
  if (terms <= 0) terms = 4;
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 1e-12;
    total += x;
  }
  Matrix M = Matrix::Zero(8, 8);
  const auto cuts = all_cuts();
  for (int t = 0; t < terms; ++t) {
    const Cut cut = cuts[rng.raw() % 3];
    const Vector single = qubit_pure(rng);
    Vector pair(4);
    for (int i = 0; i < 4; ++i) pair(i) = rng.complex_gaussian();
    pair /= pair.norm();
    Vector lifted(8);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 4; ++k) lifted(i * 4 + k) = single(i) * pair(k);
    Vector v(8);
    for (int r = 0; r < 8; ++r) v(r) = lifted(lift_index(cut, r));  // back to (a, b, c) order
    M += (w[t] / total) * (v * v.adjoint());
  }
  return DensityOperator(std::move(M), std::vector<int>{2, 2, 2});
}

DensityOperator random_biseparable(std::uint64_t seed, int terms) {
  Rng rng(seed);
  return random_biseparable(rng, terms);
}

double FullSepWitness::evaluate(const DensityOperator& rho) const {
  double best = 0.0;
  bool first = true;
  for (const auto& ci : cuts) {
    const double value = nonlinear::evaluate_nl(ci.fw, lift(rho, ci.cut));
    if (first || value < best) {
      best = value;
      first = false;
    }
  }
  return best;
}

double FullSepWitness::evaluate_max(const DensityOperator& rho) const {
  double best = 0.0;
  bool first = true;
  for (const auto& ci : cuts) {
    const double value = nonlinear::evaluate_nl(ci.fw, lift(rho, ci.cut));
    if (first || value > best) {
      best = value;
      first = false;
    }
  }
  return best;
}

NonlinearWitness default_cut_improvement(const LinearWitness& lifted, Cut cut) {
  const DimPair dims = lifted.dims;
  const Matrix T = partial_transpose(lifted.W, dims);
  const auto eig = herm_eig(T);
  const double lead = eig.values(0);
  const Vector v0 = eig.vectors.col(0);
  if (lead > tol::positivity &&
      max_abs_diff(T, lead * (v0 * v0.adjoint())) <= tol::hermitian) {
    // W = lead * (|phi><phi|)^{T_B}: scale the single-correction improvement.
    const PureState phi = PureState::normalized(v0, dims);
    const double s = states::max_schmidt_sq(phi);
    Matrix xtb = partial_transpose(phi.vec() * phi.vec().adjoint(), dims);
    NonlinearWitness fw{LinearWitness(lifted.W, dims, "user"), {}, nonlinear::Family::F1};
    fw.terms.push_back(QuadraticTerm::make(std::move(xtb), lead / s));
    return fw;
  }

  // Dual-map route: read W as the operator of eps: B(H_2) -> B(H_4) and
  // correct with Z = (I (x) eps)(|phi+><psi|).  Dividing by the largest
  // eigenvalue of eps(I) keeps every product component's weight at most one,
  // which is what the separable-positivity argument needs.
  const OperatorMap eps(lifted.W, dims.dA);
  const auto norm_eig = herm_eig(eps.apply(matcore::identity(dims.dA)));
  const double c = norm_eig.values(0);
  if (c <= tol::positivity)
    throw std::invalid_argument("default_cut_improvement: cut " + cut_name(cut) +
                                ": map normalisation eps(I) is not positive");
  const double r = 1.0 / std::sqrt(2.0);
  Vector phi_plus(4), psi(4);
  phi_plus << r, 0, 0, r;
  psi << 0, r, r, 0;
  const Matrix X = phi_plus * psi.adjoint();
  Matrix Z = eps.apply_to_second(X, dims.dA);
  const double s = 0.5;  // largest squared Schmidt coefficient of psi
  NonlinearWitness fw{LinearWitness(lifted.W, dims, "user"), {}, nonlinear::Family::Custom};
  fw.terms.push_back(QuadraticTerm::make(std::move(Z), dims.dA / (c * s)));
  return fw;
}

Matrix ghz_projector() {
  Vector v = Vector::Zero(8);
  v(0) = 1.0 / std::sqrt(2.0);
  v(7) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

Matrix ghz_witness() {
  // Transpose the third party's indices only.
  const Matrix P = ghz_projector();
  Matrix W = Matrix::Zero(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      const int r_swapped = (r & ~1) | (c & 1);
      const int c_swapped = (c & ~1) | (r & 1);
      W(r_swapped, c_swapped) = P(r, c);
    }
  return W;
}

FullSepWitness improve_full_sep(const Matrix& W, const CutBuilder& builder) {
  if (W.rows() != 8 || W.cols() != 8)
    throw std::invalid_argument("improve_full_sep: expected an 8 x 8 witness");
  if (max_abs_diff(W, W.adjoint()) > tol::hermitian)
    throw std::invalid_argument("improve_full_sep: witness is not Hermitian");

  // Certify non-negativity on fully separable states before improving.
  Rng oracle(424242);
  for (int t = 0; t < 400; ++t) {
    const auto rho = random_fully_separable(oracle, 16);
    const double value = matcore::trace_inner(W, rho.mat()).real();
    if (value < -tol::positivity)
      throw std::invalid_argument("improve_full_sep: operator is negative on a fully "
                                  "separable state (value " + std::to_string(value) + ")");
  }

  const CutBuilder build = builder ? builder : CutBuilder(default_cut_improvement);
  const auto make = [&](Cut cut) {
    const Matrix lifted = lift_matrix(cut, W);
    NonlinearWitness fw = [&] {
      try {
        return build(LinearWitness(lifted, DimPair{2, 4}, "user"), cut);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("improve_full_sep: cut " + cut_name(cut) + ": " + e.what());
      }
    }();
    if (max_abs_diff(fw.linear.W, lifted) > tol::hermitian)
      throw std::invalid_argument("improve_full_sep: cut " + cut_name(cut) +
                                  ": builder changed the linear part");
    return CutImprovement{cut, std::move(fw)};
  };
  return FullSepWitness{W, {make(Cut::A_BC), make(Cut::AB_C), make(Cut::AC_B)}};
}

std::vector<Matrix> common_quadratic_terms(const FullSepWitness& fsw, double tolerance) {
  // Normalise each correction operator (unit Frobenius norm, first sizeable
  // entry rotated to the positive real axis) in the unlifted ordering.
  const auto canonical = [](Cut cut, const Matrix& Z) {
    Matrix M = lift_matrix(cut, Z);
    const double norm = M.norm();
    if (norm > 0) M /= norm;
    for (int r = 0; r < M.rows(); ++r)
      for (int c = 0; c < M.cols(); ++c)
        if (std::abs(M(r, c)) > 1e-9) {
          M *= std::conj(M(r, c)) / std::abs(M(r, c));
          return M;
        }
    return M;
  };
  std::vector<Matrix> common;
  for (const auto& t0 : fsw.cuts[0].fw.terms) {
    const Matrix z0 = canonical(fsw.cuts[0].cut, t0.xtb);
    bool everywhere = true;
    for (int c = 1; c < 3 && everywhere; ++c) {
      bool found = false;
      for (const auto& tc : fsw.cuts[c].fw.terms)
        if (max_abs_diff(z0, canonical(fsw.cuts[c].cut, tc.xtb)) <= tolerance) {
          found = true;
          break;
        }
      everywhere = found;
    }
    if (everywhere) common.push_back(z0);
  }
  return common;
}

}  // namespace nlwit::multipartite
