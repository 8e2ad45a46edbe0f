#include "nlwit/states.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nlwit::states {

using matcore::herm_eig;
using matcore::kron;
using matcore::partial_transpose;

std::vector<std::string> density_violations(const Matrix& M, const std::vector<int>& dims) {
  std::vector<std::string> bad;
  if (dims.empty()) {
    bad.push_back("dims: empty dimension list");
    return bad;
  }
  long total = 1;
  for (int d : dims) {
    if (d <= 0) {
      bad.push_back("dims: non-positive entry");
      return bad;
    }
    total *= d;
  }
  if (M.rows() != M.cols() || M.rows() != total) {
    bad.push_back("shape: matrix is not " + std::to_string(total) + " x " + std::to_string(total));
    return bad;
  }
  const double herm_dev = matcore::max_abs_diff(M, M.adjoint());
  if (herm_dev > tol::hermitian)
    bad.push_back("hermiticity: max deviation " + std::to_string(herm_dev));
  const double trace_dev = std::abs(M.trace() - Cplx(1.0, 0.0));
  if (trace_dev > tol::hermitian)
    bad.push_back("trace: |Tr - 1| = " + std::to_string(trace_dev));
  if (herm_dev <= tol::hermitian) {
    const auto eig = herm_eig(M);
    const double lam_min = eig.values(eig.values.size() - 1);
    if (lam_min < -tol::positivity)
      bad.push_back("positivity: smallest eigenvalue " + std::to_string(lam_min));
  }
  return bad;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

DensityOperator::DensityOperator(Matrix M, std::vector<int> dims)
    : mat_(std::move(M)), dims_(std::move(dims)) {
  const auto bad = density_violations(mat_, dims_);
  if (!bad.empty())
    throw std::invalid_argument("DensityOperator: " + join(bad));
}

DensityOperator::DensityOperator(Matrix M, DimPair dims)
    : DensityOperator(std::move(M), std::vector<int>{dims.dA, dims.dB}) {}

DimPair DensityOperator::dim_pair() const {
  if (!bipartite())
    throw std::invalid_argument("DensityOperator: not a bipartite state");
  return {dims_[0], dims_[1]};
}

PureState::PureState(Vector v, DimPair dims) : vec_(std::move(v)), dims_(dims) {
  if (dims.dA <= 0 || dims.dB <= 0 || vec_.size() != dims.total())
    throw std::invalid_argument("PureState: vector length does not match dims");
  const double norm_dev = std::abs(vec_.norm() - 1.0);
  if (norm_dev > tol::unit_norm)
    throw std::invalid_argument("PureState: not normalised (|norm - 1| = " +
                                std::to_string(norm_dev) + ")");
}

PureState PureState::normalized(Vector v, DimPair dims) {
  const double n = v.norm();
  if (n <= 0.0)
    throw std::invalid_argument("PureState: cannot normalise the zero vector");
  return PureState(v / n, dims);
}

SchmidtForm schmidt_decompose(const PureState& psi) {
  const DimPair dims = psi.dims();
  Matrix C(dims.dA, dims.dB);
  for (int i = 0; i < dims.dA; ++i)
    for (int k = 0; k < dims.dB; ++k)
      C(i, k) = psi.vec()(i * dims.dB + k);
  const auto s = matcore::svd(C);
  SchmidtForm out;
  out.coefficients = s.singular_values;
  out.left = s.U;
  out.right = s.V.conjugate();  // C = U S V^dag  =>  |b_m> = conj(V col m)
  return out;
}

double max_schmidt_sq(const PureState& psi) {
  const auto schmidt = schmidt_decompose(psi);
  const double s0 = schmidt.coefficients(0);
  return s0 * s0;
}

bool is_ppt(const DensityOperator& rho) {
  const auto eig = herm_eig(partial_transpose(rho.mat(), rho.dim_pair()));
  return eig.values(eig.values.size() - 1) >= -tol::positivity;
}

DensityOperator werner(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("werner: p must lie in [0, 1]");
  const PureState singlet = bell_states()[3];
  Matrix M = p * singlet.projector() + (1.0 - p) * 0.25 * matcore::identity(4);
  return DensityOperator(std::move(M), DimPair{2, 2});
}

std::array<PureState, 4> bell_states() {
  const double r = 1.0 / std::sqrt(2.0);
  Vector phi_p(4), phi_m(4), psi_p(4), psi_m(4);
  phi_p << r, 0, 0, r;
  phi_m << r, 0, 0, -r;
  psi_p << 0, r, r, 0;
  psi_m << 0, r, -r, 0;
  const DimPair d{2, 2};
  return {PureState(phi_p, d), PureState(phi_m, d), PureState(psi_p, d), PureState(psi_m, d)};
}

namespace {

Vector gaussian_vector(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
  return v;
}

}  // namespace

PureState random_pure(DimPair dims, Rng& rng) {
  return PureState::normalized(gaussian_vector(dims.total(), rng), dims);
}

PureState random_product_pure(DimPair dims, Rng& rng) {
  Vector a = gaussian_vector(dims.dA, rng);
  Vector b = gaussian_vector(dims.dB, rng);
  a /= a.norm();
  b /= b.norm();
  Vector v(dims.total());
  for (int i = 0; i < dims.dA; ++i)
    for (int k = 0; k < dims.dB; ++k)
      v(i * dims.dB + k) = a(i) * b(k);
  return PureState::normalized(std::move(v), dims);
}

DensityOperator random_density(DimPair dims, Rng& rng) {
  const int n = dims.total();
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G(i, j) = rng.complex_gaussian();
  Matrix M = G * G.adjoint();
  M /= M.trace().real();
  return DensityOperator(std::move(M), dims);
}

DensityOperator random_separable(DimPair dims, Rng& rng, int terms) {
  if (terms <= 0) terms = 2 * dims.dA * dims.dB;
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 1e-12;
    total += x;
  }
  Matrix M = Matrix::Zero(dims.total(), dims.total());
  for (int t = 0; t < terms; ++t)
    M += (w[t] / total) * random_product_pure(dims, rng).projector();
  return DensityOperator(std::move(M), dims);
}

PureState random_pure(DimPair dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(dims, rng);
}

PureState random_product_pure(DimPair dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_product_pure(dims, rng);
}

DensityOperator random_density(DimPair dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dims, rng);
}

DensityOperator random_separable(DimPair dims, std::uint64_t seed, int terms) {
  Rng rng(seed);
  return random_separable(dims, rng, terms);
}

}  // namespace nlwit::states
