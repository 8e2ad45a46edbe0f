#include "nlwit/matcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlwit::matcore {

namespace {

void require_square(const Matrix& M, const char* who) {
  if (M.rows() != M.cols())
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
}

void require_dims(const Matrix& M, DimPair dims, const char* who) {
  require_square(M, who);
  if (dims.dA <= 0 || dims.dB <= 0)
    throw std::invalid_argument(std::string(who) + ": non-positive subsystem dimension");
  if (M.rows() != dims.total())
    throw std::invalid_argument(std::string(who) + ": matrix size " +
                                std::to_string(M.rows()) + " does not match dA*dB = " +
                                std::to_string(dims.total()));
}

}  // namespace

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Matrix partial_transpose(const Matrix& M, DimPair dims) {
  require_dims(M, dims, "partial_transpose");
  const int dA = dims.dA, dB = dims.dB;
  Matrix out(M.rows(), M.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      for (int k = 0; k < dB; ++k)
        for (int l = 0; l < dB; ++l)
          out(i * dB + k, j * dB + l) = M(i * dB + l, j * dB + k);
  return out;
}

Matrix partial_trace(const Matrix& M, DimPair dims, Subsystem keep) {
  require_dims(M, dims, "partial_trace");
  const int dA = dims.dA, dB = dims.dB;
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        for (int k = 0; k < dB; ++k)
          out(i, j) += M(i * dB + k, j * dB + k);
    return out;
  }
  Matrix out = Matrix::Zero(dB, dB);
  for (int k = 0; k < dB; ++k)
    for (int l = 0; l < dB; ++l)
      for (int i = 0; i < dA; ++i)
        out(k, l) += M(i * dB + k, i * dB + l);
  return out;
}

EigSystem herm_eig(const Matrix& M) {
  require_square(M, "herm_eig");
  const double dev = max_abs_diff(M, M.adjoint());
  if (dev > tol::hermitian)
    throw std::invalid_argument("herm_eig: input is not Hermitian (max deviation " +
                                std::to_string(dev) + ")");
  const Matrix H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigendecomposition failed to converge");
  const int n = static_cast<int>(H.rows());
  EigSystem out;
  out.values = RealVector(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {  // Eigen sorts ascending; flip to descending
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Matrix psd_sqrt(const Matrix& M) {
  EigSystem eig = herm_eig(M);
  const int n = static_cast<int>(eig.values.size());
  RealVector roots(n);
  for (int k = 0; k < n; ++k) {
    double lam = eig.values(k);
    if (lam < -tol::positivity)
      throw std::invalid_argument("psd_sqrt: eigenvalue " + std::to_string(lam) +
                                  " below the positivity tolerance");
    roots(k) = std::sqrt(std::max(lam, 0.0));
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

bool is_psd(const Matrix& M, double tolerance) {
  EigSystem eig = herm_eig(M);
  return eig.values(eig.values.size() - 1) >= -tolerance;
}

SvdSystem svd(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> solver(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Cplx trace_inner(const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("trace_inner: shape mismatch");
  return (X.conjugate().cwiseProduct(Y)).sum();
}

double max_abs_diff(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  if (A.size() == 0) return 0.0;
  return (A - B).cwiseAbs().maxCoeff();
}

bool approx_equal(const Matrix& A, const Matrix& B, double tolerance) {
  return max_abs_diff(A, B) <= tolerance;
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

const Matrix& pauli(int w) {
  static const std::vector<Matrix> sigma = [] {
    const Cplx i(0.0, 1.0);
    std::vector<Matrix> s(4, Matrix(2, 2));
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  if (w < 0 || w > 3) throw std::invalid_argument("pauli: index out of range");
  return sigma[w];
}

std::vector<Matrix> hermitian_basis(int d) {
  if (d < 2) throw std::invalid_argument("hermitian_basis: dimension must be >= 2");
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  basis.push_back(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const Cplx i(0.0, 1.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = 1.0 / std::sqrt(2.0);
      sym(k, j) = 1.0 / std::sqrt(2.0);
      basis.push_back(sym);
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = -i / std::sqrt(2.0);
      asym(k, j) = i / std::sqrt(2.0);
      basis.push_back(asym);
    }
  }
  for (int l = 1; l < d; ++l) {
    Matrix diag = Matrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = norm;
    diag(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(diag);
  }
  return basis;
}

}  // namespace nlwit::matcore
