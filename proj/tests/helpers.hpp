#pragma once
// Shared fixtures for the test binaries: named vectors, a unitary taking one
// given unit vector to another, and Haar-random unitaries.

#include <cmath>
#include <stdexcept>

#include "nlwit/matcore.hpp"
#include "nlwit/rng.hpp"
#include "nlwit/states.hpp"

namespace testutil {

using nlwit::Cplx;
using nlwit::DimPair;
using nlwit::Matrix;
using nlwit::Rng;
using nlwit::Vector;

inline Vector basis_vec(int d, int i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

inline Vector phi_plus_vec() {
  Vector v(4);
  v << 1, 0, 0, 1;
  return v / std::sqrt(2.0);
}

inline Vector psi_minus_vec() {
  Vector v(4);
  v << 0, 1, -1, 0;
  return v / std::sqrt(2.0);
}

inline Vector psi_plus_vec() {
  Vector v(4);
  v << 0, 1, 1, 0;
  return v / std::sqrt(2.0);
}

// Unitary U with U psi = phi: two-column rotation completed by Householder QR.
inline Matrix unitary_mapping(const Vector& psi, const Vector& phi) {
  const int d = static_cast<int>(psi.size());
  if (phi.size() != d) throw std::invalid_argument("unitary_mapping: size mismatch");
  const Cplx overlap = (phi.adjoint() * psi)(0);
  if (std::abs(std::abs(overlap) - 1.0) < 1e-14) {
    // psi and phi are parallel: a global phase suffices.
    const Cplx phase = std::conj(overlap) / std::abs(overlap);
    return phase * Matrix::Identity(d, d);
  }
  // Unitary = sum_k |q_k><p_k| over matched orthonormal completions of psi, phi.
  auto complete = [d](const Vector& first) {
    Matrix M = Matrix::Identity(d, d);
    M.col(0) = first;
    const Eigen::HouseholderQR<Matrix> qr(M);
    Matrix Q = qr.householderQ();
    // Align the first column with `first` (QR fixes it only up to phase).
    const Cplx ph = (first.adjoint() * Q.col(0))(0);
    Q.col(0) *= std::conj(ph) / std::abs(ph);
    return Q;
  };
  const Matrix P = complete(psi), F = complete(phi);
  return F * P.adjoint();
}

inline Matrix haar_unitary(int d, Rng& rng) {
  Matrix G(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) G(r, c) = rng.complex_gaussian();
  const Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c) {
    const Cplx diag = R(c, c);
    if (std::abs(diag) > 0) Q.col(c) *= diag / std::abs(diag);
  }
  return Q;
}

inline Matrix random_psd(int d, Rng& rng) {
  Matrix G(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) G(r, c) = rng.complex_gaussian();
  return G * G.adjoint() / static_cast<double>(d);
}

inline Matrix random_hermitian(int d, Rng& rng) {
  Matrix G(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) G(r, c) = rng.complex_gaussian();
  return (G + G.adjoint()) / 2.0;
}

}  // namespace testutil
