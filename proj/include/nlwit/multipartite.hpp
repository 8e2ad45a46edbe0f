#pragma once
// Three-qubit full-separability witnesses improved cut by cut.  Each
// bipartition lifts the system to a 2 x 4 bipartite space (singleton party in
// front); the witness is improved under every cut and the minimum of the three
// corrected values stays non-negative on fully separable states.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlwit/matcore.hpp"
#include "nlwit/nonlinear.hpp"
#include "nlwit/states.hpp"
#include "nlwit/witness.hpp"

namespace nlwit::multipartite {

enum class Cut { A_BC, AB_C, AC_B };

std::array<Cut, 3> all_cuts();
std::string cut_name(Cut cut);  // "A|BC", "AB|C", "AC|B"

// Basis-index reordering that moves the cut's singleton party to the front by
// swapping it with the first slot; the map is its own inverse.  Lifted
// operators carry DimPair{2, 4}.
int lift_index(Cut cut, int idx);
Matrix lift_matrix(Cut cut, const Matrix& M);
states::DensityOperator lift(const states::DensityOperator& rho, Cut cut);
states::DensityOperator unlift(const states::DensityOperator& rho, Cut cut);

// Mixture of `terms` random pure product states |a>|b>|c>.
states::DensityOperator random_fully_separable(Rng& rng, int terms = 16);
states::DensityOperator random_fully_separable(std::uint64_t seed, int terms = 16);

// Mixture of pure states that are product across one (randomly chosen) cut
// each but may be entangled inside the pair; not fully separable in general.
states::DensityOperator random_biseparable(Rng& rng, int terms = 4);
states::DensityOperator random_biseparable(std::uint64_t seed, int terms = 4);

struct CutImprovement {
  Cut cut;
  nonlinear::NonlinearWitness fw;  // on the lifted space; linear part equals the lifted W
};

struct FullSepWitness {
  Matrix W;  // 8 x 8, Hermitian, non-negative on fully separable states
  std::array<CutImprovement, 3> cuts;

  // min over cuts of the corrected value; >= 0 on fully separable states and
  // <= Tr(W rho) everywhere.
  double evaluate(const states::DensityOperator& rho) const;
  // max over cuts: experimental probe with no positivity contract (a mixture
  // of states separable under different cuts can defeat it).
  double evaluate_max(const states::DensityOperator& rho) const;
};

using CutBuilder =
    std::function<nonlinear::NonlinearWitness(const witness::LinearWitness& lifted, Cut cut)>;

// Default per-cut constructor.  If the partial transpose of the lifted W is a
// positive rank-one operator lambda |phi><phi| the single-correction
// improvement applies directly; otherwise W is read as the dual operator of a
// linear map and the correction operator (I (x) eps)(|phi+><psi|) is used,
// with the map rescaled by the largest eigenvalue of eps(I) so that the dual
// construction cannot inflate the weight of any product component.
nonlinear::NonlinearWitness default_cut_improvement(const witness::LinearWitness& lifted, Cut cut);

// Builds the three per-cut improvements of W; the builder's failure for any
// cut is reported with the cut's name.  W itself is certified non-negative on
// a fixed fully-separable sample before any cut is processed.
FullSepWitness improve_full_sep(const Matrix& W, const CutBuilder& builder = {});

// (|000> + |111>)/sqrt(2) projector, and its partial transpose on the third
// party — a full-separability witness with minimal eigenvalue -1/2.
Matrix ghz_projector();
Matrix ghz_witness();

// Experimental search for a correction operator shared by all three per-cut
// improvements (compared in the unlifted ordering, up to phase and scale).
// No positivity statement is attached to the result.
std::vector<Matrix> common_quadratic_terms(const FullSepWitness& fsw, double tolerance = 1e-8);

}  // namespace nlwit::multipartite
