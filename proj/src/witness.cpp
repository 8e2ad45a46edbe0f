#include "nlwit/witness.hpp"

#include <cmath>
#include <stdexcept>

namespace nlwit::witness {

using matcore::herm_eig;
using matcore::max_abs_diff;
using matcore::partial_transpose;
using matcore::trace_inner;

LinearWitness::LinearWitness(Matrix W_in, DimPair dims_in, std::string provenance_in)
    : W(std::move(W_in)), dims(dims_in), provenance(std::move(provenance_in)) {
  if (W.rows() != W.cols() || W.rows() != dims.total())
    throw std::invalid_argument("LinearWitness: matrix size does not match dims");
  const double dev = max_abs_diff(W, W.adjoint());
  if (dev > tol::hermitian)
    throw std::invalid_argument("LinearWitness: not Hermitian (max deviation " +
                                std::to_string(dev) + ")");
  if (provenance != "npt-eigenvector" && provenance != "positive-map" && provenance != "user")
    throw std::invalid_argument("LinearWitness: unknown provenance '" + provenance + "'");
}

namespace {

// Most negative eigenpair; ties within tol::detection resolved by taking the
// first matching column of the descending sort.
std::pair<double, Vector> min_eigenpair(const matcore::EigSystem& eig) {
  const int n = static_cast<int>(eig.values.size());
  const double lam_min = eig.values(n - 1);
  int pick = n - 1;
  for (int k = 0; k < n; ++k) {
    if (eig.values(k) <= lam_min + tol::detection) {
      pick = k;
      break;
    }
  }
  return {lam_min, eig.vectors.col(pick)};
}

}  // namespace

NptWitness witness_from_npt(const states::DensityOperator& rho) {
  const DimPair dims = rho.dim_pair();
  const auto eig = herm_eig(partial_transpose(rho.mat(), dims));
  const auto [lam_min, v] = min_eigenpair(eig);
  if (lam_min >= -tol::positivity)
    throw std::invalid_argument("witness_from_npt: no NPT witness exists for this state "
                                "(partial transpose has no negative eigenvalue)");
  states::PureState phi = states::PureState::normalized(v, dims);
  Matrix W = partial_transpose(phi.projector(), dims);
  return {LinearWitness(std::move(W), dims, "npt-eigenvector"), lam_min, phi};
}

double evaluate(const LinearWitness& w, const states::DensityOperator& rho) {
  if (rho.dim() != w.dims.total())
    throw std::invalid_argument("evaluate: state and witness dimensions differ");
  return trace_inner(w.W, rho.mat()).real();  // W Hermitian: Tr(W rho) = Tr(W^dag rho)
}

namespace {

int qubit_count(const Matrix& M, const char* who) {
  if (M.rows() != M.cols())
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  int n = 0;
  long size = 1;
  while (size < M.rows()) {
    size *= 2;
    ++n;
  }
  if (size != M.rows() || n == 0)
    throw std::invalid_argument(std::string(who) + ": dimension " + std::to_string(M.rows()) +
                                " is not a power of two (qubit registers only)");
  return n;
}

const char kPauliLetters[] = "IXYZ";

}  // namespace

Matrix pauli_word(const std::string& word) {
  Matrix out = Matrix::Identity(1, 1);
  for (char c : word) {
    int w = 0;
    switch (c) {
      case 'I': w = 0; break;
      case 'X': w = 1; break;
      case 'Y': w = 2; break;
      case 'Z': w = 3; break;
      default:
        throw std::invalid_argument("pauli_word: letter '" + std::string(1, c) +
                                    "' is not one of I, X, Y, Z");
    }
    out = matcore::kron(out, matcore::pauli(w));
  }
  return out;
}

std::vector<PauliTerm> pauli_decompose(const Matrix& M, double cutoff) {
  const int n = qubit_count(M, "pauli_decompose");
  const double dim = static_cast<double>(M.rows());
  std::vector<PauliTerm> terms;
  std::string word(n, 'I');
  const long words = M.rows() * M.rows();  // 4^n
  for (long idx = 0; idx < words; ++idx) {
    long rest = idx;
    for (int q = n - 1; q >= 0; --q) {
      word[q] = kPauliLetters[rest % 4];
      rest /= 4;
    }
    const Cplx c = trace_inner(pauli_word(word), M) / dim;  // sigma Hermitian
    if (std::abs(c.imag()) > tol::hermitian)
      throw std::invalid_argument("pauli_decompose: input is not Hermitian "
                                  "(complex coefficient at word " + word + ")");
    if (std::abs(c.real()) >= cutoff)
      terms.push_back({word, c.real()});
  }
  return terms;
}

Matrix pauli_recompose(const std::vector<PauliTerm>& terms, int qubits) {
  const long dim = 1L << qubits;
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& t : terms) {
    if (static_cast<int>(t.word.size()) != qubits)
      throw std::invalid_argument("pauli_recompose: word '" + t.word +
                                  "' does not match qubit count");
    out += t.coefficient * pauli_word(t.word);
  }
  return out;
}

std::string format_pauli(const std::vector<PauliTerm>& terms) {
  std::string out;
  char buf[64];
  for (const auto& t : terms) {
    std::snprintf(buf, sizeof(buf), "%+.6g %s", t.coefficient, t.word.c_str());
    if (!out.empty()) out += " ";
    out += buf;
  }
  return out.empty() ? "0" : out;
}

OperatorMap::OperatorMap(Matrix E, int in_dim) : E_(std::move(E)), in_(in_dim) {
  if (in_ <= 0 || E_.rows() != E_.cols() || E_.rows() % in_ != 0)
    throw std::invalid_argument("OperatorMap: operator size is not a multiple of in_dim");
  out_ = static_cast<int>(E_.rows()) / in_;
}

Matrix OperatorMap::apply(const Matrix& X) const {
  if (X.rows() != in_ || X.cols() != in_)
    throw std::invalid_argument("OperatorMap::apply: argument does not act on the input space");
  // Tr_in(E (X^T (x) I)) block-wise: out(k,l) = sum_{ij} X(i,j) E[(i,k),(j,l)].
  Matrix out = Matrix::Zero(out_, out_);
  for (int i = 0; i < in_; ++i)
    for (int j = 0; j < in_; ++j) {
      const Cplx x = X(i, j);
      if (x == Cplx(0.0, 0.0)) continue;
      out += x * E_.block(i * out_, j * out_, out_, out_);
    }
  return out;
}

Matrix OperatorMap::apply_to_second(const Matrix& M, int first_dim) const {
  if (M.rows() != M.cols() || M.rows() != static_cast<long>(first_dim) * in_)
    throw std::invalid_argument("OperatorMap::apply_to_second: shape mismatch");
  Matrix out(static_cast<long>(first_dim) * out_, static_cast<long>(first_dim) * out_);
  for (int i = 0; i < first_dim; ++i)
    for (int j = 0; j < first_dim; ++j)
      out.block(i * out_, j * out_, out_, out_) =
          apply(M.block(i * in_, j * in_, in_, in_));
  return out;
}

OperatorMap map_from_operator(const Matrix& E, int in_dim) { return OperatorMap(E, in_dim); }

Matrix operator_from_map(const std::function<Matrix(const Matrix&)>& eps, int in_dim) {
  if (in_dim <= 0) throw std::invalid_argument("operator_from_map: in_dim must be positive");
  Matrix probe = Matrix::Zero(in_dim, in_dim);
  probe(0, 0) = 1.0;
  const Matrix first = eps(probe);
  if (first.rows() != first.cols() || first.rows() <= 0)
    throw std::invalid_argument("operator_from_map: map image is not square");
  const int out_dim = static_cast<int>(first.rows());
  Matrix E(static_cast<long>(in_dim) * out_dim, static_cast<long>(in_dim) * out_dim);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      Matrix unit = Matrix::Zero(in_dim, in_dim);
      unit(i, j) = 1.0;
      const Matrix img = (i == 0 && j == 0) ? first : eps(unit);
      if (img.rows() != out_dim || img.cols() != out_dim)
        throw std::invalid_argument("operator_from_map: map image dimension varies");
      E.block(i * out_dim, j * out_dim, out_dim, out_dim) = img;
    }
  return E;
}

RealMatrix map_matrix(const OperatorMap& eps) {
  const auto dom = matcore::hermitian_basis(eps.in_dim());
  const auto cod = matcore::hermitian_basis(eps.out_dim());
  RealMatrix R(cod.size(), dom.size());
  for (std::size_t m = 0; m < dom.size(); ++m) {
    const Matrix img = eps.apply(dom[m]);
    for (std::size_t n = 0; n < cod.size(); ++n) {
      const Cplx r = trace_inner(cod[n], img);
      if (std::abs(r.imag()) > tol::positivity)
        throw std::invalid_argument("map_matrix: map is not hermiticity-preserving");
      R(n, m) = r.real();
    }
  }
  return R;
}

double map_norm(const OperatorMap& eps) {
  const RealMatrix R = map_matrix(eps);
  Eigen::JacobiSVD<RealMatrix> solver(R);
  return solver.singularValues()(0);
}

OperatorMap adjoint_map(const OperatorMap& eps) {
  const RealMatrix R = map_matrix(eps);
  const auto dom = matcore::hermitian_basis(eps.in_dim());
  const auto cod = matcore::hermitian_basis(eps.out_dim());
  // adj(Y) = sum_m (sum_n R(n, m) <G'_n, Y>) G_m; complex coefficients keep it
  // linear over all of B(H_out), not only the Hermitian part.
  const auto adj = [R, dom, cod, in = eps.in_dim()](const Matrix& Y) {
    Matrix out = Matrix::Zero(in, in);
    for (std::size_t m = 0; m < dom.size(); ++m) {
      Cplx coeff(0.0, 0.0);
      for (std::size_t n = 0; n < cod.size(); ++n)
        coeff += R(n, m) * trace_inner(cod[n], Y);
      out += coeff * dom[m];
    }
    return out;
  };
  return OperatorMap(operator_from_map(adj, eps.out_dim()), eps.out_dim());
}

LinearWitness witness_from_positive_map(const OperatorMap& eps, const states::DensityOperator& rho) {
  const DimPair dims = rho.dim_pair();
  if (eps.in_dim() != dims.dB)
    throw std::invalid_argument("witness_from_positive_map: map input space does not match "
                                "the B subsystem");
  const double sigma = map_norm(eps);
  if (sigma <= tol::positivity)
    throw std::invalid_argument("witness_from_positive_map: map norm is zero");
  const OperatorMap scaled(eps.op() / sigma, eps.in_dim());

  const Matrix image = scaled.apply_to_second(rho.mat(), dims.dA);
  const auto eig = herm_eig(image);
  const int n = static_cast<int>(eig.values.size());
  const double lam_min = eig.values(n - 1);
  if (lam_min >= -tol::positivity)
    throw std::invalid_argument("witness_from_positive_map: map does not detect this state");
  int pick = n - 1;
  for (int k = 0; k < n; ++k) {
    if (eig.values(k) <= lam_min + tol::detection) {
      pick = k;
      break;
    }
  }
  const Vector phi = eig.vectors.col(pick);

  const OperatorMap adj = adjoint_map(scaled);
  Matrix W = adj.apply_to_second(phi * phi.adjoint(), dims.dA);
  W = 0.5 * (W + W.adjoint().eval());  // shrink roundoff before the ctor check
  return LinearWitness(std::move(W), dims, "positive-map");
}

}  // namespace nlwit::witness
