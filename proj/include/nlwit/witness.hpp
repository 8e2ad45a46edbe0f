#pragma once
// Linear entanglement witnesses: construction from the partial transpose of a
// state, evaluation, Pauli decomposition, and the channel-operator duality
// that turns an operator on H_in (x) H_out into a linear map and back —
// including witnesses derived from positive-but-not-completely-positive maps.

#include <functional>
#include <string>
#include <vector>

#include "nlwit/matcore.hpp"
#include "nlwit/states.hpp"

namespace nlwit::witness {

struct LinearWitness {
  Matrix W;                 // Hermitian (checked)
  DimPair dims;
  std::string provenance;   // "npt-eigenvector" | "positive-map" | "user"

  LinearWitness(Matrix W, DimPair dims, std::string provenance);
};

struct NptWitness {
  LinearWitness witness;
  double lambda_min;             // most negative eigenvalue of rho^{T_B}
  states::PureState eigenvector;  // phi with W = (|phi><phi|)^{T_B}
};

// Builds the canonical witness from the most negative eigenvector of the
// partially transposed state; Tr(W rho) equals lambda_min.  PPT input has no
// such witness and is rejected.
NptWitness witness_from_npt(const states::DensityOperator& rho);

// Tr(W rho); the imaginary residue (<= 1e-10 for valid inputs) is discarded.
double evaluate(const LinearWitness& w, const states::DensityOperator& rho);

struct PauliTerm {
  std::string word;     // one letter per qubit from {I, X, Y, Z}
  double coefficient;
};

// Expansion of a Hermitian operator on n qubits over Pauli words,
// coefficient = Tr(M sigma_word) / 2^n; entries below `cutoff` are omitted.
std::vector<PauliTerm> pauli_decompose(const Matrix& M, double cutoff = 1e-12);
Matrix pauli_recompose(const std::vector<PauliTerm>& terms, int qubits);
Matrix pauli_word(const std::string& word);
std::string format_pauli(const std::vector<PauliTerm>& terms);

// A linear map eps: B(H_in) -> B(H_out) stored through its dual operator E on
// H_in (x) H_out, with eps(X) = Tr_in(E (X^T (x) I_out)).  The identity map
// corresponds to the unnormalised maximally entangled projector and
// transposition to the swap operator.
class OperatorMap {
 public:
  OperatorMap(Matrix E, int in_dim);

  Matrix apply(const Matrix& X) const;
  // (I (x) eps) acting block-wise on an operator over H_first (x) H_in.
  Matrix apply_to_second(const Matrix& M, int first_dim) const;

  const Matrix& op() const { return E_; }
  int in_dim() const { return in_; }
  int out_dim() const { return out_; }

 private:
  Matrix E_;
  int in_;
  int out_;
};

OperatorMap map_from_operator(const Matrix& E, int in_dim);
// E[(i,k),(j,l)] = eps(|i><j|)[k,l]; inverse of map_from_operator.
Matrix operator_from_map(const std::function<Matrix(const Matrix&)>& eps, int in_dim);

// Real matrix of the map over the hermitian_basis coordinates of domain and
// codomain; its largest singular value is the map's norm, and its transpose
// gives the adjoint map with respect to Tr(X^dag Y).
RealMatrix map_matrix(const OperatorMap& eps);
double map_norm(const OperatorMap& eps);
OperatorMap adjoint_map(const OperatorMap& eps);

// Witness from a positive non-completely-positive map: rescales eps by its
// norm, requires (I (x) eps)(rho) to have a negative eigenvalue, and returns
// the adjoint image of the corresponding eigenprojector.  Tr(W rho) equals
// that negative eigenvalue.
LinearWitness witness_from_positive_map(const OperatorMap& eps, const states::DensityOperator& rho);

}  // namespace nlwit::witness
