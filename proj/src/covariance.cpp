#include "nlwit/covariance.hpp"

#include <cmath>
#include <stdexcept>

#include "nlwit/rng.hpp"

namespace nlwit::covariance {

using matcore::herm_eig;
using matcore::kron;
using matcore::max_abs_diff;
using matcore::partial_transpose;
using matcore::psd_sqrt;
using matcore::trace_inner;
using states::DensityOperator;

OperatorBasis default_basis(DimPair dims) {
  if (dims.dA < 2 || dims.dB < 2)
    throw std::invalid_argument("default_basis: subsystem dimensions must be >= 2");
  return {matcore::hermitian_basis(dims.dA), matcore::hermitian_basis(dims.dB), dims};
}

OperatorBasis transformed_basis(const OperatorBasis& basis, const RealMatrix& C,
                                const RealMatrix& D) {
  const long nA = static_cast<long>(basis.A.size());
  const long nB = static_cast<long>(basis.B.size());
  if (C.rows() != nA || C.cols() != nA || D.rows() != nB || D.cols() != nB)
    throw std::invalid_argument("transformed_basis: coefficient matrices do not match basis size");
  const auto rank_ok = [](const RealMatrix& M) {
    Eigen::FullPivLU<RealMatrix> lu(M);
    lu.setThreshold(1e-12);
    return lu.rank() == M.rows();
  };
  if (!rank_ok(C) || !rank_ok(D))
    throw std::invalid_argument("transformed_basis: coefficient matrix is singular");
  OperatorBasis out;
  out.dims = basis.dims;
  out.A.reserve(nA);
  out.B.reserve(nB);
  for (long k = 0; k < nA; ++k) {
    Matrix op = Matrix::Zero(basis.dims.dA, basis.dims.dA);
    for (long l = 0; l < nA; ++l) op += C(k, l) * basis.A[l];
    out.A.push_back(std::move(op));
  }
  for (long k = 0; k < nB; ++k) {
    Matrix op = Matrix::Zero(basis.dims.dB, basis.dims.dB);
    for (long l = 0; l < nB; ++l) op += D(k, l) * basis.B[l];
    out.B.push_back(std::move(op));
  }
  return out;
}

bool is_orthonormal(const std::vector<Matrix>& ops, double tolerance) {
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (std::size_t b = a; b < ops.size(); ++b) {
      const Cplx g = trace_inner(ops[a], ops[b]);
      const double target = (a == b) ? 1.0 : 0.0;
      if (std::abs(g - target) > tolerance) return false;
    }
  return true;
}

namespace {

void check_basis(const Matrix& rho, const OperatorBasis& basis, const char* who) {
  if (rho.rows() != rho.cols() || rho.rows() != basis.dims.total())
    throw std::invalid_argument(std::string(who) + ": state does not match basis dims");
  if (basis.A.size() != static_cast<std::size_t>(basis.dims.dA) * basis.dims.dA ||
      basis.B.size() != static_cast<std::size_t>(basis.dims.dB) * basis.dims.dB)
    throw std::invalid_argument(std::string(who) + ": basis does not span the local spaces");
}

// Tr(rho (P (x) Q)) without forming the Kronecker product.
Cplx expect_product(const Matrix& rho, const Matrix& P, const Matrix& Q, DimPair dims) {
  Cplx out(0.0, 0.0);
  for (int i = 0; i < dims.dA; ++i)
    for (int j = 0; j < dims.dA; ++j) {
      const Cplx p = P(j, i);
      if (p == Cplx(0.0, 0.0)) continue;
      Cplx block(0.0, 0.0);
      for (int k = 0; k < dims.dB; ++k)
        for (int l = 0; l < dims.dB; ++l)
          block += rho(i * dims.dB + k, j * dims.dB + l) * Q(l, k);
      out += p * block;
    }
  return out;
}

using ProductTable = std::vector<std::vector<Matrix>>;

ProductTable product_table(const std::vector<Matrix>& ops) {
  const std::size_t n = ops.size();
  ProductTable table(n, std::vector<Matrix>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a][b] = ops[a] * ops[b];
  return table;
}

Matrix moment_matrix(const Matrix& rho, const OperatorBasis& basis, bool swap_b) {
  const long nA = static_cast<long>(basis.A.size());
  const long nB = static_cast<long>(basis.B.size());
  const ProductTable aa = product_table(basis.A);
  const ProductTable bb = product_table(basis.B);
  Matrix out(nA * nB, nA * nB);
  for (long i1 = 0; i1 < nA; ++i1)
    for (long i2 = 0; i2 < nB; ++i2)
      for (long j1 = 0; j1 < nA; ++j1)
        for (long j2 = 0; j2 < nB; ++j2) {
          const Matrix& b_prod = swap_b ? bb[j2][i2] : bb[i2][j2];
          out(i1 * nB + i2, j1 * nB + j2) =
              expect_product(rho, aa[i1][j1], b_prod, basis.dims);
        }
  return out;
}

}  // namespace

Matrix eta(const Matrix& rho, const OperatorBasis& basis) {
  check_basis(rho, basis, "eta");
  return moment_matrix(rho, basis, false);
}

Matrix eta_pt(const Matrix& rho, const OperatorBasis& basis) {
  check_basis(rho, basis, "eta_pt");
  return moment_matrix(rho, basis, true);
}

RealVector mean_vector(const Matrix& rho, const OperatorBasis& basis) {
  check_basis(rho, basis, "mean_vector");
  const long nA = static_cast<long>(basis.A.size());
  const long nB = static_cast<long>(basis.B.size());
  RealVector t(nA * nB);
  for (long i1 = 0; i1 < nA; ++i1)
    for (long i2 = 0; i2 < nB; ++i2)
      t(i1 * nB + i2) = expect_product(rho, basis.A[i1], basis.B[i2], basis.dims).real();
  return t;
}

Matrix chi(const Matrix& rho, const OperatorBasis& basis) {
  const RealVector t = mean_vector(rho, basis);
  return (t * t.transpose()).cast<Cplx>();
}

Matrix gamma(const Matrix& rho, const OperatorBasis& basis) {
  return eta_pt(rho, basis) - chi(rho, basis);
}

Matrix eta(const DensityOperator& rho, const OperatorBasis& basis) {
  return eta(rho.mat(), basis);
}
Matrix eta_pt(const DensityOperator& rho, const OperatorBasis& basis) {
  return eta_pt(rho.mat(), basis);
}
Matrix chi(const DensityOperator& rho, const OperatorBasis& basis) {
  return chi(rho.mat(), basis);
}
Matrix gamma(const DensityOperator& rho, const OperatorBasis& basis) {
  return gamma(rho.mat(), basis);
}

namespace {

// Expansion coefficients of X over the product family {A_i1 (x) B_i2^T}; for
// an orthonormal basis these are plain trace inner products, otherwise the
// Gram system is solved.
Vector product_coefficients(const Matrix& X, const OperatorBasis& basis) {
  const long nA = static_cast<long>(basis.A.size());
  const long nB = static_cast<long>(basis.B.size());
  const long n = nA * nB;
  Vector c(n);
  std::vector<Matrix> prods;
  prods.reserve(n);
  for (long i1 = 0; i1 < nA; ++i1)
    for (long i2 = 0; i2 < nB; ++i2)
      prods.push_back(kron(basis.A[i1], basis.B[i2].transpose()));
  for (long r = 0; r < n; ++r) c(r) = trace_inner(prods[r], X);
  const bool orthonormal = is_orthonormal(basis.A) && is_orthonormal(basis.B);
  if (orthonormal) return c;
  Matrix G(n, n);
  for (long r = 0; r < n; ++r)
    for (long s = 0; s < n; ++s) G(r, s) = trace_inner(prods[r], prods[s]);
  return G.fullPivLu().solve(c);
}

Matrix product_recompose(const Vector& alpha, const OperatorBasis& basis) {
  const long nA = static_cast<long>(basis.A.size());
  const long nB = static_cast<long>(basis.B.size());
  Matrix X = Matrix::Zero(basis.dims.total(), basis.dims.total());
  for (long i1 = 0; i1 < nA; ++i1)
    for (long i2 = 0; i2 < nB; ++i2)
      X += alpha(i1 * nB + i2) * kron(basis.A[i1], basis.B[i2].transpose());
  return X;
}

}  // namespace

QCertificate q_from_unitary(const Matrix& P, const Matrix& V, const OperatorBasis& basis) {
  const int n = basis.dims.total();
  if (P.rows() != n || P.cols() != n || V.rows() != n || V.cols() != n)
    throw std::invalid_argument("q_from_unitary: P or V does not match basis dims");
  const double unitary_dev = max_abs_diff(V.adjoint() * V, matcore::identity(n));
  if (unitary_dev > tol::hermitian)
    throw std::invalid_argument("q_from_unitary: V is not unitary (deviation " +
                                std::to_string(unitary_dev) + ")");
  const Matrix root = psd_sqrt(P);  // rejects non-PSD P
  const Matrix X = V * root;
  Vector alpha = product_coefficients(X, basis);
  const Matrix X_replay = product_recompose(alpha, basis);
  const double residual = max_abs_diff(X_replay.adjoint() * X_replay, P);
  if (residual > tol::reconstruction)
    throw std::invalid_argument("q_from_unitary: certificate does not reconstruct P "
                                "(residual " + std::to_string(residual) + ")");
  Matrix Q = alpha * alpha.adjoint();
  return {std::move(Q), std::move(alpha), P};
}

double functional(const DensityOperator& rho, const QCertificate& cert,
                  const OperatorBasis& basis) {
  const Matrix G = gamma(rho.mat(), basis);
  if (G.rows() != cert.Q.rows())
    throw std::invalid_argument("functional: certificate does not match basis size");
  return (cert.alpha.adjoint() * G * cert.alpha)(0, 0).real();  // Tr(gamma Q)
}

namespace {

Matrix haar_unitary(int n, Rng& rng) {
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    const Cplx d = R(k, k);
    const double a = std::abs(d);
    Q.col(k) *= (a > 0) ? d / a : Cplx(1.0, 0.0);  // fix the phase convention
  }
  return Q;
}

Matrix random_hermitian(int n, Rng& rng) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.complex_gaussian();
  return 0.5 * (M + M.adjoint().eval());
}

// exp(i eps G) for Hermitian G.
Matrix hermitian_exp(const Matrix& G, double eps) {
  const auto eig = herm_eig(G);
  Vector phases(eig.values.size());
  for (long k = 0; k < eig.values.size(); ++k)
    phases(k) = std::exp(Cplx(0.0, eps * eig.values(k)));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

OptimizeResult optimize_q(const DensityOperator& rho, const Matrix& P,
                          const OperatorBasis& basis, const OptimizeOptions& opt,
                          std::uint64_t seed) {
  const int n = basis.dims.total();
  if (rho.dim() != n)
    throw std::invalid_argument("optimize_q: state does not match basis dims");
  const Matrix G = gamma(rho.mat(), basis);
  const Matrix root = psd_sqrt(P);

  // The Gram structure of the product family is fixed, so candidate scoring
  // only needs the coefficient extraction, not a full certificate rebuild.
  const auto score = [&](const Matrix& V, Vector* alpha_out) {
    const Matrix X = V * root;
    Vector alpha = product_coefficients(X, basis);
    const double value = (alpha.adjoint() * G * alpha)(0, 0).real();
    if (alpha_out) *alpha_out = std::move(alpha);
    return value;
  };

  Rng rng(seed);
  Matrix best_V = matcore::identity(n);
  double best_value = score(best_V, nullptr);
  for (int s = 0; s < opt.random_samples; ++s) {
    const Matrix V = haar_unitary(n, rng);
    const double value = score(V, nullptr);
    if (value < best_value) {
      best_value = value;
      best_V = V;
    }
  }
  double step = 0.3;
  for (int s = 0; s < opt.refine_steps; ++s) {
    const Matrix V = best_V * hermitian_exp(random_hermitian(n, rng), step);
    const double value = score(V, nullptr);
    if (value < best_value) {
      best_value = value;
      best_V = V;
    } else {
      step = std::max(step * 0.85, 1e-4);
    }
  }
  Vector alpha;
  const double value = score(best_V, &alpha);
  Matrix Q = alpha * alpha.adjoint();
  return {{std::move(Q), std::move(alpha), P}, value, best_V};
}

BasisCheckReport basis_covariance_check(const DensityOperator& rho, const OperatorBasis& basis,
                                        const RealMatrix& C, const RealMatrix& D,
                                        std::uint64_t seed) {
  const OperatorBasis moved = transformed_basis(basis, C, D);  // rejects singular C, D

  const Matrix lhs = eta(rho.mat(), moved);
  const Matrix CD = kron(C.cast<Cplx>(), D.cast<Cplx>());
  const Matrix rhs = CD * eta(rho.mat(), basis) * CD.transpose();
  BasisCheckReport report;
  report.law_residual = max_abs_diff(lhs, rhs);

  // Detection target: the most negative eigenvector of the partial transpose
  // when there is one, otherwise a fixed projector (nothing to detect).
  const DimPair dims = rho.dim_pair();
  const auto eig = herm_eig(partial_transpose(rho.mat(), dims));
  Vector phi = eig.vectors.col(eig.values.size() - 1);
  Matrix P = phi * phi.adjoint();

  const OptimizeOptions opt{300, 50};
  const auto before = optimize_q(rho, P, basis, opt, seed);
  const auto after = optimize_q(rho, P, moved, opt, seed);
  report.value_original = before.value;
  report.value_transformed = after.value;
  report.detected_original = before.value < -tol::detection;
  report.detected_transformed = after.value < -tol::detection;
  report.verdict_invariant = report.detected_original == report.detected_transformed;
  return report;
}

}  // namespace nlwit::covariance
