#pragma once
// Second-moment formulation of the separability problem.  For Hermitian
// orthonormal local bases {A_i1} and {B_i2}, the block-moment matrix
//
//   eta[(i1,i2),(j1,j2)] = < A_i1 A_j1 (x) B_i2 B_j2 >
//
// is PSD for every state; the partially transposed variant (B-side index swap)
//
//   eta_pt[(i1,i2),(j1,j2)] = < A_i1 A_j1 (x) B_j2 B_i2 >
//
// is PSD exactly for PPT states.  Subtracting the rank-one product-mean matrix
// chi = t t^T, t[(i1,i2)] = <A_i1 (x) B_i2>, leaves gamma = eta_pt - chi whose
// negativity against a PSD certificate Q detects entanglement:
//
//   Tr(gamma Q) = Tr(P^{T_B} rho) - Tr(chi Q),   P = X^dag X,  Q = alpha alpha^dag,
//
// with alpha the coefficients of X over the product basis {A_i1 (x) B_i2^T}.
// Pair indices flatten as r = i1 * dB^2 + i2 throughout.

#include <cstdint>

#include "nlwit/matcore.hpp"
#include "nlwit/states.hpp"

namespace nlwit::covariance {

struct OperatorBasis {
  std::vector<Matrix> A;  // dA^2 Hermitian operators, orthonormal under trace_inner
  std::vector<Matrix> B;  // dB^2 likewise
  DimPair dims;
};

// hermitian_basis on each side; for qubits this is {I, X, Y, Z}/sqrt(2).
OperatorBasis default_basis(DimPair dims);

// New basis A~_k = sum_l C(k,l) A_l (and likewise D for the B side); real
// coefficients keep the operators Hermitian.  C and D must be invertible.
OperatorBasis transformed_basis(const OperatorBasis& basis, const RealMatrix& C,
                                const RealMatrix& D);

bool is_orthonormal(const std::vector<Matrix>& ops, double tolerance = tol::hermitian);

// Raw-matrix entry points accept any Hermitian argument so identities about
// partially transposed inputs can be checked; the PSD claims above hold when
// rho is a valid state.
Matrix eta(const Matrix& rho, const OperatorBasis& basis);
Matrix eta_pt(const Matrix& rho, const OperatorBasis& basis);
RealVector mean_vector(const Matrix& rho, const OperatorBasis& basis);
Matrix chi(const Matrix& rho, const OperatorBasis& basis);
Matrix gamma(const Matrix& rho, const OperatorBasis& basis);

Matrix eta(const states::DensityOperator& rho, const OperatorBasis& basis);
Matrix eta_pt(const states::DensityOperator& rho, const OperatorBasis& basis);
Matrix chi(const states::DensityOperator& rho, const OperatorBasis& basis);
Matrix gamma(const states::DensityOperator& rho, const OperatorBasis& basis);

struct QCertificate {
  Matrix Q;       // alpha alpha^dag, PSD by construction
  Vector alpha;   // expansion of X over {A_i1 (x) B_i2^T}
  Matrix target;  // P = X^dag X; reconstruction from Q replays P within tol::reconstruction
};

// Extremal rank-one certificate from P >= 0 and a unitary V: X = V sqrt(P),
// alpha from the product-basis expansion of X.  V = I gives X = sqrt(P).
QCertificate q_from_unitary(const Matrix& P, const Matrix& V, const OperatorBasis& basis);

// Tr(gamma(rho) Q).
double functional(const states::DensityOperator& rho, const QCertificate& cert,
                  const OperatorBasis& basis);

struct OptimizeOptions {
  int random_samples = 2000;  // Haar-random V draws (V = I always included)
  int refine_steps = 200;     // local V exp(i eps G) refinement, shrinking step
};

struct OptimizeResult {
  QCertificate cert;
  double value;
  Matrix V;
};

// Stochastic search for the most negative Tr(gamma(rho) Q) over the rank-one
// family above; deterministic for a fixed seed.
OptimizeResult optimize_q(const states::DensityOperator& rho, const Matrix& P,
                          const OperatorBasis& basis, const OptimizeOptions& opt,
                          std::uint64_t seed);

struct BasisCheckReport {
  double law_residual;     // max |eta~ - (C (x) D) eta (C (x) D)^T|
  double value_original;   // optimised functional, original basis
  double value_transformed;
  bool detected_original;
  bool detected_transformed;
  bool verdict_invariant;
};

// Verifies the transformation law of eta under a local change of basis and
// that the optimised detection verdict does not depend on the basis choice.
BasisCheckReport basis_covariance_check(const states::DensityOperator& rho,
                                        const OperatorBasis& basis, const RealMatrix& C,
                                        const RealMatrix& D, std::uint64_t seed);

}  // namespace nlwit::covariance
