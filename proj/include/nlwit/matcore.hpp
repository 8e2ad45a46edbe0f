#pragma once
// Dense complex matrix kernels for small bipartite quantum systems: Kronecker
// products, partial transpose / partial trace, guarded Hermitian
// eigendecomposition, PSD square root and trace inner products, on top of
// Eigen.  Everything here is a pure function of its arguments.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace nlwit {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Shared tolerances.  Detection verdicts use a strict-inequality margin so a
// tie never counts as a detection.
namespace tol {
inline constexpr double hermitian = 1e-10;      // max-norm distance from M^dag
inline constexpr double positivity = 1e-9;      // eigenvalue floor for "PSD"
inline constexpr double reconstruction = 1e-8;  // factor-and-replay residual
inline constexpr double unit_norm = 1e-12;      // state-vector normalisation
inline constexpr double detection = 1e-12;      // strict-inequality margin
}  // namespace tol

// Subsystem dimensions of a bipartite space.  The composite basis index for
// subsystem indices (i, k) is i * dB + k; this pairing is fixed globally and
// every reshape/flatten below relies on it.
struct DimPair {
  int dA = 0;
  int dB = 0;
  int total() const { return dA * dB; }
  bool operator==(const DimPair&) const = default;
};

enum class Subsystem { A, B };

namespace matcore {

Matrix kron(const Matrix& A, const Matrix& B);

// Transpose on the B factor only: out[(i,k),(j,l)] = M[(i,l),(j,k)].
Matrix partial_transpose(const Matrix& M, DimPair dims);

// Trace out the complement of `keep`.
Matrix partial_trace(const Matrix& M, DimPair dims, Subsystem keep);

struct EigSystem {
  RealVector values;  // descending
  Matrix vectors;     // column k pairs with values[k]
};

// Rejects inputs farther than tol::hermitian from Hermitian, symmetrises the
// rest, and returns the spectrum in descending order.
EigSystem herm_eig(const Matrix& M);

// Spectral square root with eigenvalues in [-tol::positivity, 0) clamped to
// zero; genuinely negative input is rejected.
Matrix psd_sqrt(const Matrix& M);

bool is_psd(const Matrix& M, double tolerance = tol::positivity);

struct SvdSystem {
  Matrix U;
  RealVector singular_values;  // descending
  Matrix V;                    // M = U * diag(singular_values) * V^dag
};
SvdSystem svd(const Matrix& M);

// Hilbert-Schmidt inner product Tr(X^dag Y).
Cplx trace_inner(const Matrix& X, const Matrix& Y);

double max_abs_diff(const Matrix& A, const Matrix& B);
bool approx_equal(const Matrix& A, const Matrix& B, double tolerance);

Matrix identity(int d);

// w in {0: I, 1: sigma_x, 2: sigma_y, 3: sigma_z}.
const Matrix& pauli(int w);

// Hermitian operator basis of the d x d matrices, orthonormal under
// trace_inner: I/sqrt(d) first, then for each pair j < k the symmetric and
// antisymmetric off-diagonal generators, then the diagonal ones.  For d = 2
// this is exactly {I, sigma_x, sigma_y, sigma_z} / sqrt(2).
std::vector<Matrix> hermitian_basis(int d);

}  // namespace matcore
}  // namespace nlwit
