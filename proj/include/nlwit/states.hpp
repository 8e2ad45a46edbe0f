#pragma once
// State containers (density operators, pure states, Schmidt data), named
// reference states, and seeded samplers.  Constructors validate the physical
// invariants and name the violated one on failure.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nlwit/matcore.hpp"
#include "nlwit/rng.hpp"

namespace nlwit::states {

// Empty result means M is a valid density operator for `dims`; otherwise one
// message per violated invariant (hermiticity, unit trace, positivity, shape).
std::vector<std::string> density_violations(const Matrix& M, const std::vector<int>& dims);

class DensityOperator {
 public:
  DensityOperator(Matrix M, std::vector<int> dims);
  DensityOperator(Matrix M, DimPair dims);

  const Matrix& mat() const { return mat_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  bool bipartite() const { return dims_.size() == 2; }
  DimPair dim_pair() const;  // throws unless bipartite

 private:
  Matrix mat_;
  std::vector<int> dims_;
};

class PureState {
 public:
  PureState(Vector v, DimPair dims);  // requires unit norm within tol::unit_norm
  static PureState normalized(Vector v, DimPair dims);

  const Vector& vec() const { return vec_; }
  DimPair dims() const { return dims_; }
  Matrix projector() const { return vec_ * vec_.adjoint(); }

 private:
  Vector vec_;
  DimPair dims_;
};

struct SchmidtForm {
  RealVector coefficients;  // descending, sum of squares = 1
  Matrix left;              // column m holds |a_m>
  Matrix right;             // column m holds |b_m>
};

// psi = sum_m coefficients[m] |a_m> (x) |b_m>, via SVD of the dA x dB
// coefficient matrix C(i, k) = psi[i * dB + k].
SchmidtForm schmidt_decompose(const PureState& psi);

// Largest squared Schmidt coefficient.
double max_schmidt_sq(const PureState& psi);

bool is_ppt(const DensityOperator& rho);

// p |psi-><psi-| + (1 - p) I/4 on two qubits, p in [0, 1].
DensityOperator werner(double p);

// |phi+>, |phi->, |psi+>, |psi-> in that order.
std::array<PureState, 4> bell_states();

PureState random_pure(DimPair dims, Rng& rng);
PureState random_product_pure(DimPair dims, Rng& rng);
// Ginibre construction G G^dag / Tr(G G^dag): Hilbert-Schmidt distributed.
DensityOperator random_density(DimPair dims, Rng& rng);
// Convex mixture of `terms` random pure product states; terms = 0 picks the
// default 2 * dA * dB.
DensityOperator random_separable(DimPair dims, Rng& rng, int terms = 0);

PureState random_pure(DimPair dims, std::uint64_t seed);
PureState random_product_pure(DimPair dims, std::uint64_t seed);
DensityOperator random_density(DimPair dims, std::uint64_t seed);
DensityOperator random_separable(DimPair dims, std::uint64_t seed, int terms = 0);

}  // namespace nlwit::states
