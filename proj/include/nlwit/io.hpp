#pragma once
// JSON serialization for states, witnesses and certificates.
//
// Matrix payloads are two parallel row-major 2-d arrays:
//   {"re": [[...], ...], "im": [[...], ...]}
// States add "dims" (a list of subsystem dimensions), witnesses add
// "provenance", nonlinear witnesses store each quadratic term as the pair of
// Hermitian observables it is measured through plus its weight, and
// certificates store the coefficient vector together with the target operator
// they must reconstruct.  Every loader names the violated invariant in the
// exception it throws.

#include <string>

#include <json.hpp>

#include "nlwit/covariance.hpp"
#include "nlwit/matcore.hpp"
#include "nlwit/nonlinear.hpp"
#include "nlwit/states.hpp"
#include "nlwit/witness.hpp"

namespace nlwit::io {

using json = nlohmann::json;

json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const json& j);

json state_to_json(const states::DensityOperator& rho);
states::DensityOperator state_from_json(const json& j);

json witness_to_json(const witness::LinearWitness& w);
witness::LinearWitness witness_from_json(const json& j);

json nonlinear_to_json(const nonlinear::NonlinearWitness& fw);
nonlinear::NonlinearWitness nonlinear_from_json(const json& j);

// Certificates carry their bipartite dimensions so the operator basis can be
// rebuilt; only the "standard" (orthonormal Hermitian) basis identifier is
// accepted.  Loading revalidates the reconstruction contract.
struct LoadedCertificate {
  covariance::QCertificate cert;
  DimPair dims;
};
json certificate_to_json(const covariance::QCertificate& cert, DimPair dims);
LoadedCertificate certificate_from_json(const json& j);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

}  // namespace nlwit::io
