#include "nlwit/nonlinear.hpp"

#include <cmath>
#include <stdexcept>

namespace nlwit::nonlinear {

using matcore::herm_eig;
using matcore::partial_trace;
using matcore::partial_transpose;
using matcore::psd_sqrt;
using matcore::trace_inner;
using states::DensityOperator;
using states::PureState;
using witness::LinearWitness;
using witness::PauliTerm;

QuadraticTerm QuadraticTerm::make(Matrix xtb, double weight) {
  if (xtb.rows() != xtb.cols())
    throw std::invalid_argument("QuadraticTerm: operator is not square");
  if (weight <= 0.0)
    throw std::invalid_argument("QuadraticTerm: weight must be positive");
  const Cplx i(0.0, 1.0);
  Matrix herm = 0.5 * (xtb + xtb.adjoint().eval());
  Matrix anti = (xtb - xtb.adjoint().eval()) / (2.0 * i);
  return {std::move(xtb), weight, std::move(herm), std::move(anti)};
}

NonlinearWitness improve_f1(const PureState& phi, const PureState& psi) {
  if (!(phi.dims() == psi.dims()))
    throw std::invalid_argument("improve_f1: phi and psi live on different spaces");
  const DimPair dims = phi.dims();
  Matrix W = partial_transpose(phi.projector(), dims);
  const double s = states::max_schmidt_sq(psi);
  Matrix xtb = partial_transpose(phi.vec() * psi.vec().adjoint(), dims);
  NonlinearWitness fw{LinearWitness(std::move(W), dims, "user"), {}, Family::F1};
  fw.terms.push_back(QuadraticTerm::make(std::move(xtb), 1.0 / s));
  return fw;
}

NonlinearWitness improve_f2(const PureState& phi, const std::vector<PureState>& basis) {
  const DimPair dims = phi.dims();
  const int n = dims.total();
  if (static_cast<int>(basis.size()) != n)
    throw std::invalid_argument("improve_f2: basis must hold exactly dA*dB states (got " +
                                std::to_string(basis.size()) + ", need " + std::to_string(n) + ")");
  for (const auto& b : basis)
    if (!(b.dims() == dims))
      throw std::invalid_argument("improve_f2: basis state lives on a different space");
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const Cplx g = basis[a].vec().dot(basis[b].vec());
      const double target = (a == b) ? 1.0 : 0.0;
      if (std::abs(g - target) > tol::hermitian)
        throw std::invalid_argument("improve_f2: basis is not orthonormal (Gram deviation " +
                                    std::to_string(std::abs(g - target)) + " at pair " +
                                    std::to_string(a) + "," + std::to_string(b) + ")");
    }
  Matrix W = partial_transpose(phi.projector(), dims);
  NonlinearWitness fw{LinearWitness(std::move(W), dims, "user"), {}, Family::F2};
  for (const auto& psi : basis) {
    Matrix xtb = partial_transpose(phi.vec() * psi.vec().adjoint(), dims);
    fw.terms.push_back(QuadraticTerm::make(std::move(xtb), 1.0));
  }
  return fw;
}

double evaluate_nl(const NonlinearWitness& fw, const DensityOperator& rho) {
  double value = witness::evaluate(fw.linear, rho);
  for (const auto& term : fw.terms) {
    const double h = trace_inner(term.herm, rho.mat()).real();
    const double a = trace_inner(term.anti, rho.mat()).real();
    value -= term.weight * (h * h + a * a);
  }
  return value;
}

DetectionCondition detect_condition_f1(const DensityOperator& rho, const PureState& phi) {
  const DimPair dims = rho.dim_pair();
  if (!(phi.dims() == dims))
    throw std::invalid_argument("detect_condition_f1: phi does not match the state space");
  const Matrix T = partial_transpose(rho.mat(), dims);
  const Vector v = T * phi.vec();
  const double lhs = phi.vec().dot(v).real();
  // Tr_A(rho^{T_B}|phi><phi|rho^{T_B}) is PSD rank-one by construction.
  const Matrix reduced = partial_trace(v * v.adjoint(), dims, Subsystem::B);
  const double root_trace = psd_sqrt(reduced).trace().real();
  const double rhs = root_trace * root_trace;
  return {lhs < rhs - tol::detection, lhs, rhs};
}

DetectionCondition detect_condition_f2(const DensityOperator& rho, const PureState& phi) {
  const DimPair dims = rho.dim_pair();
  if (!(phi.dims() == dims))
    throw std::invalid_argument("detect_condition_f2: phi does not match the state space");
  const Matrix T = partial_transpose(rho.mat(), dims);
  const Vector v = T * phi.vec();
  const double lhs = phi.vec().dot(v).real();
  const double rhs = v.squaredNorm();
  return {lhs < rhs - tol::detection, lhs, rhs};
}

// ---- Pauli-square view ------------------------------------------------------

namespace {

int register_qubits(const Matrix& M) {
  int n = 0;
  long size = 1;
  while (size < M.rows()) {
    size *= 2;
    ++n;
  }
  return n;
}

std::vector<PauliTerm> canonical_observable(const RealVector& coeffs, int qubits,
                                            double* scale_out) {
  double scale = 0.0;
  for (int w = 0; w < coeffs.size(); ++w) scale = std::max(scale, std::abs(coeffs(w)));
  double sign = 1.0;
  for (int w = 0; w < coeffs.size(); ++w) {
    if (std::abs(coeffs(w)) > 1e-12) {
      sign = coeffs(w) > 0 ? 1.0 : -1.0;
      break;
    }
  }
  std::vector<PauliTerm> obs;
  const char letters[] = "IXYZ";
  for (int w = 0; w < coeffs.size(); ++w) {
    const double c = coeffs(w) * sign / scale;
    if (std::abs(c) < 1e-12) continue;
    std::string word(qubits, 'I');
    long rest = w;
    for (int q = qubits - 1; q >= 0; --q) {
      word[q] = letters[rest % 4];
      rest /= 4;
    }
    obs.push_back({word, c});
  }
  *scale_out = scale;
  return obs;
}

}  // namespace

RealVector pauli_coefficient_vector(const Matrix& M) {
  const auto terms = witness::pauli_decompose(M, 0.0);
  RealVector coeffs = RealVector::Zero(M.rows() * M.rows());
  for (const auto& t : terms) {
    long idx = 0;
    for (char c : t.word) {
      int w = (c == 'I') ? 0 : (c == 'X') ? 1 : (c == 'Y') ? 2 : 3;
      idx = idx * 4 + w;
    }
    coeffs(idx) = t.coefficient;
  }
  return coeffs;
}

PauliSquareForm pauli_square_form(const NonlinearWitness& fw) {
  const int qubits = register_qubits(fw.linear.W);
  PauliSquareForm form;
  form.linear = witness::pauli_decompose(fw.linear.W);
  for (const auto& term : fw.terms) {
    for (const Matrix* part : {&term.herm, &term.anti}) {
      const RealVector coeffs = pauli_coefficient_vector(*part);
      if (coeffs.cwiseAbs().maxCoeff() < 1e-12) continue;
      double scale = 0.0;
      auto obs = canonical_observable(coeffs, qubits, &scale);
      form.squares.push_back({term.weight * scale * scale, std::move(obs)});
    }
  }
  return form;
}

RealMatrix quadratic_form_matrix(const NonlinearWitness& fw) {
  const long dim = fw.linear.W.rows() * fw.linear.W.rows();
  RealMatrix N = RealMatrix::Zero(dim, dim);
  for (const auto& term : fw.terms) {
    const RealVector h = pauli_coefficient_vector(term.herm);
    const RealVector a = pauli_coefficient_vector(term.anti);
    N += term.weight * (h * h.transpose() + a * a.transpose());
  }
  return N;
}

RealMatrix quadratic_form_matrix(const PauliSquareForm& form, int qubits) {
  const long dim = 1L << (2 * qubits);
  RealMatrix N = RealMatrix::Zero(dim, dim);
  for (const auto& square : form.squares) {
    RealVector v = RealVector::Zero(dim);
    for (const auto& t : square.observable) {
      long idx = 0;
      for (char c : t.word) {
        int w = (c == 'I') ? 0 : (c == 'X') ? 1 : (c == 'Y') ? 2 : 3;
        idx = idx * 4 + w;
      }
      v(idx) = t.coefficient;
    }
    N += square.prefactor * v * v.transpose();
  }
  return N;
}

// ---- Bundled two-qubit reference forms --------------------------------------

namespace {

PureState symmetric_flip_state() {
  const double r = 1.0 / std::sqrt(2.0);
  Vector v(4);
  v << 0, r, r, 0;
  return PureState(v, DimPair{2, 2});
}

std::vector<PauliTerm> words(std::initializer_list<std::pair<const char*, double>> list) {
  std::vector<PauliTerm> out;
  for (const auto& [w, c] : list) out.push_back({w, c});
  return out;
}

}  // namespace

NonlinearWitness twoqubit_f1_example() {
  return improve_f1(states::bell_states()[0], symmetric_flip_state());
}

PauliSquareForm twoqubit_f1_reference() {
  PauliSquareForm form;
  form.linear = words({{"II", 0.25}, {"XX", 0.25}, {"YY", 0.25}, {"ZZ", 0.25}});
  form.squares.push_back({0.125, words({{"IX", 1.0}, {"XI", 1.0}})});
  form.squares.push_back({0.125, words({{"YZ", 1.0}, {"ZY", -1.0}})});
  return form;
}

NonlinearWitness twoqubit_f2_example() {
  const auto bell = states::bell_states();
  return improve_f2(bell[0], {bell.begin(), bell.end()});
}

PauliSquareForm twoqubit_f2_reference() {
  PauliSquareForm form;
  form.linear = words({{"II", 0.25}, {"XX", 0.25}, {"YY", 0.25}, {"ZZ", 0.25}});
  const double w = 1.0 / 16.0;
  form.squares.push_back({w, words({{"IX", 1.0}, {"XI", 1.0}})});
  form.squares.push_back({w, words({{"YZ", 1.0}, {"ZY", -1.0}})});
  form.squares.push_back({w, words({{"IY", 1.0}, {"YI", 1.0}})});
  form.squares.push_back({w, words({{"XZ", 1.0}, {"ZX", -1.0}})});
  form.squares.push_back({w, words({{"IZ", 1.0}, {"ZI", 1.0}})});
  form.squares.push_back({w, words({{"XY", 1.0}, {"YX", -1.0}})});
  form.squares.push_back({w, words({{"II", 1.0}, {"XX", 1.0}, {"YY", 1.0}, {"ZZ", 1.0}})});
  return form;
}

NonlinearWitness twoqubit_f2_weak() {
  NonlinearWitness fw = twoqubit_f2_example();
  // Replace the witness-square term (the one whose correction operator is the
  // witness itself, from basis element phi) by the damped variant (1/16)<W>^2.
  for (auto& term : fw.terms) {
    if (matcore::max_abs_diff(term.xtb, fw.linear.W) < 1e-12) {
      term = QuadraticTerm::make(fw.linear.W, 1.0 / 16.0);
      fw.family = Family::Custom;
      return fw;
    }
  }
  throw std::logic_error("twoqubit_f2_weak: witness-square term not found");
}

}  // namespace nlwit::nonlinear
