#pragma once
// Quadratic (nonlinear) improvements of linear witnesses.  A witness built
// from the eigenvector phi stays non-negative on separable states after
// subtracting weighted squares |<X^{T_B}>|^2 for X = |phi><psi|: one term
// with weight 1/s(psi) (largest squared Schmidt coefficient), or a full
// orthonormal family with unit weights.  Expectations of the non-Hermitian
// X^{T_B} are always taken through the split X^{T_B} = H + iA so that only
// Hermitian observables are ever evaluated.

#include <vector>

#include "nlwit/matcore.hpp"
#include "nlwit/states.hpp"
#include "nlwit/witness.hpp"

namespace nlwit::nonlinear {

struct QuadraticTerm {
  Matrix xtb;     // correction operator X^{T_B}
  double weight;  // positive
  Matrix herm;    // (xtb + xtb^dag) / 2
  Matrix anti;    // (xtb - xtb^dag) / (2i)

  static QuadraticTerm make(Matrix xtb, double weight);
};

enum class Family { F1, F2, Covariance, Custom };

struct NonlinearWitness {
  witness::LinearWitness linear;
  std::vector<QuadraticTerm> terms;
  Family family = Family::Custom;
};

// Single-correction improvement of W = (|phi><phi|)^{T_B} with X = |phi><psi|
// and weight 1 / max_schmidt_sq(psi).
NonlinearWitness improve_f1(const states::PureState& phi, const states::PureState& psi);

// Full-family improvement: one unit-weight term per element of an orthonormal
// basis of the bipartite space (exactly dA*dB states, checked).
NonlinearWitness improve_f2(const states::PureState& phi,
                            const std::vector<states::PureState>& basis);

// <W> - sum_i weight_i (<H_i>^2 + <A_i>^2).
double evaluate_nl(const NonlinearWitness& fw, const states::DensityOperator& rho);

struct DetectionCondition {
  bool detected;  // lhs < rhs by more than tol::detection
  double lhs;     // <phi| rho^{T_B} |phi>
  double rhs;
};

// Detection criterion matched by the single-correction family: rhs is the
// squared trace of the PSD square root of
// Tr_A(rho^{T_B} |phi><phi| rho^{T_B}).
DetectionCondition detect_condition_f1(const states::DensityOperator& rho,
                                       const states::PureState& phi);

// Detection criterion matched by the full-family improvement:
// rhs = <phi| (rho^{T_B})^2 |phi>.
DetectionCondition detect_condition_f2(const states::DensityOperator& rho,
                                       const states::PureState& phi);

// ---- Pauli-square view (two-qubit registers) --------------------------------
//
// value(rho) = <linear> - sum_k prefactor_k <observable_k>^2, with each
// observable a small integer-coefficient Pauli sum.  Canonical scaling: the
// largest |coefficient| of each observable is 1 and the first nonzero
// coefficient (in word order) is positive; the prefactor absorbs the rest.

struct PauliSquare {
  double prefactor;
  std::vector<witness::PauliTerm> observable;
};

struct PauliSquareForm {
  std::vector<witness::PauliTerm> linear;
  std::vector<PauliSquare> squares;
};

PauliSquareForm pauli_square_form(const NonlinearWitness& fw);

// Quadratic form N on Pauli-coefficient space: value(rho) = <linear> - b^T N b
// with b_w = <sigma_w>.  Two grouped forms are equal exactly when their linear
// Pauli vectors and their N matrices agree; N is invariant under the sign and
// scale ambiguity of individual squares.
RealMatrix quadratic_form_matrix(const NonlinearWitness& fw);
RealMatrix quadratic_form_matrix(const PauliSquareForm& form, int qubits);
RealVector pauli_coefficient_vector(const Matrix& M);

// ---- Bundled two-qubit reference forms --------------------------------------
//
// All are built around phi = |phi+>; the linear part is the shared two-qubit
// witness (I + XX + YY + ZZ)/4 = (|phi+><phi+|)^{T_B}.

// Machine-built single-correction form, psi = (|01> + |10>)/sqrt(2).
NonlinearWitness twoqubit_f1_example();
// Hard-coded grouped squares of the same form: (1/8)<XI+IX>^2 + (1/8)<YZ-ZY>^2.
PauliSquareForm twoqubit_f1_reference();

// Machine-built full-family form over the Bell basis.
NonlinearWitness twoqubit_f2_example();
// Hard-coded grouped squares of the full-family form: prefactor 1/16 on seven
// bare Pauli-sum squares, the seventh being <II+XX+YY+ZZ>^2.
PauliSquareForm twoqubit_f2_reference();

// Weaker uniform-weight variant: identical except the seventh square uses the
// trace-normalised witness observable itself, (1/16)<W>^2, which subtracts a
// sixteenth of the exact full-family seventh square.  Still a valid nonlinear
// witness (it subtracts less), with value -33/64 on the singlet.
NonlinearWitness twoqubit_f2_weak();

}  // namespace nlwit::nonlinear
