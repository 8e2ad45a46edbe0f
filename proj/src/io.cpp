#include "nlwit/io.hpp"

#include <fstream>
#include <stdexcept>
#include <utility>

namespace nlwit::io {

namespace {

using matcore::kron;
using matcore::max_abs_diff;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw std::invalid_argument(context + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& context) {
  if (!j.is_object()) fail(context, "expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) fail(context, std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<std::vector<double>> real_grid(const json& j, const char* key,
                                           const std::string& context) {
  const json& g = field(j, key, context);
  if (!g.is_array() || g.empty())
    fail(context, std::string("field \"") + key + "\" must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(g.size());
  for (const auto& row : g) {
    if (!row.is_array()) fail(context, std::string("field \"") + key + "\" rows must be arrays");
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& x : row) {
      if (!x.is_number()) fail(context, std::string("field \"") + key + "\" entries must be numbers");
      r.push_back(x.get<double>());
    }
    if (!rows.empty() && r.size() != rows.front().size())
      fail(context, std::string("field \"") + key + "\" rows have unequal lengths");
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from(const json& j, const std::string& context) {
  const auto re = real_grid(j, "re", context);
  const auto im = real_grid(j, "im", context);
  if (re.size() != im.size() || re.front().size() != im.front().size())
    fail(context, "\"re\" and \"im\" shapes differ");
  Matrix M(static_cast<int>(re.size()), static_cast<int>(re.front().size()));
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c) M(r, c) = Cplx(re[r][c], im[r][c]);
  return M;
}

std::vector<int> dims_from(const json& j, const std::string& context) {
  const json& d = field(j, "dims", context);
  if (!d.is_array() || d.empty()) fail(context, "\"dims\" must be a non-empty array");
  std::vector<int> dims;
  for (const auto& x : d) {
    if (!x.is_number_integer() || x.get<int>() < 1)
      fail(context, "\"dims\" entries must be positive integers");
    dims.push_back(x.get<int>());
  }
  return dims;
}

std::string family_to_string(nonlinear::Family f) {
  switch (f) {
    case nonlinear::Family::F1: return "f1";
    case nonlinear::Family::F2: return "f2";
    case nonlinear::Family::Covariance: return "covariance";
    case nonlinear::Family::Custom: return "custom";
  }
  throw std::logic_error("family_to_string: unreachable");
}

nonlinear::Family family_from_string(const std::string& s, const std::string& context) {
  if (s == "f1") return nonlinear::Family::F1;
  if (s == "f2") return nonlinear::Family::F2;
  if (s == "covariance") return nonlinear::Family::Covariance;
  if (s == "custom") return nonlinear::Family::Custom;
  fail(context, "unknown family \"" + s + "\"");
}

}  // namespace

json matrix_to_json(const Matrix& M) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < M.rows(); ++r) {
    json re_row = json::array(), im_row = json::array();
    for (int c = 0; c < M.cols(); ++c) {
      re_row.push_back(M(r, c).real());
      im_row.push_back(M(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j) { return matrix_from(j, "matrix JSON"); }

json state_to_json(const states::DensityOperator& rho) {
  json j = matrix_to_json(rho.mat());
  j["dims"] = rho.dims();
  return j;
}

states::DensityOperator state_from_json(const json& j) {
  static const std::string context = "state JSON";
  const auto dims = dims_from(j, context);
  Matrix M = matrix_from(j, context);
  const auto violations = states::density_violations(M, dims);
  if (!violations.empty()) {
    std::string msg = "invalid density operator";
    for (const auto& v : violations) msg += "; " + v;
    fail(context, msg);
  }
  return states::DensityOperator(std::move(M), dims);
}

json witness_to_json(const witness::LinearWitness& w) {
  json j = matrix_to_json(w.W);
  j["dims"] = json::array({w.dims.dA, w.dims.dB});
  j["provenance"] = w.provenance;
  return j;
}

witness::LinearWitness witness_from_json(const json& j) {
  static const std::string context = "witness JSON";
  const auto dims = dims_from(j, context);
  if (dims.size() != 2) fail(context, "\"dims\" must have exactly two entries");
  const json& prov = field(j, "provenance", context);
  if (!prov.is_string()) fail(context, "\"provenance\" must be a string");
  Matrix M = matrix_from(j, context);
  try {
    return witness::LinearWitness(std::move(M), DimPair{dims[0], dims[1]},
                                  prov.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(context, e.what());
  }
}

json nonlinear_to_json(const nonlinear::NonlinearWitness& fw) {
  json terms = json::array();
  for (const auto& t : fw.terms)
    terms.push_back(json{{"weight", t.weight},
                         {"h", matrix_to_json(t.herm)},
                         {"a", matrix_to_json(t.anti)}});
  return json{{"linear", witness_to_json(fw.linear)},
              {"family", family_to_string(fw.family)},
              {"terms", std::move(terms)}};
}

nonlinear::NonlinearWitness nonlinear_from_json(const json& j) {
  static const std::string context = "nonlinear witness JSON";
  auto linear = witness_from_json(field(j, "linear", context));
  const json& fam = field(j, "family", context);
  if (!fam.is_string()) fail(context, "\"family\" must be a string");
  const auto family = family_from_string(fam.get<std::string>(), context);
  const json& terms = field(j, "terms", context);
  if (!terms.is_array()) fail(context, "\"terms\" must be an array");
  nonlinear::NonlinearWitness fw{std::move(linear), {}, family};
  int index = 0;
  for (const auto& t : terms) {
    const std::string tctx = context + " term " + std::to_string(index++);
    const json& w = field(t, "weight", tctx);
    if (!w.is_number() || w.get<double>() <= 0.0)
      fail(tctx, "\"weight\" must be a positive number");
    const Matrix h = matrix_from(field(t, "h", tctx), tctx);
    const Matrix a = matrix_from(field(t, "a", tctx), tctx);
    if (max_abs_diff(h, h.adjoint()) > tol::hermitian)
      fail(tctx, "\"h\" is not Hermitian");
    if (max_abs_diff(a, a.adjoint()) > tol::hermitian)
      fail(tctx, "\"a\" is not Hermitian");
    fw.terms.push_back(
        nonlinear::QuadraticTerm::make(h + Cplx(0, 1) * a, w.get<double>()));
  }
  return fw;
}

json certificate_to_json(const covariance::QCertificate& cert, DimPair dims) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < cert.alpha.size(); ++r) {
    re.push_back(cert.alpha(r).real());
    im.push_back(cert.alpha(r).imag());
  }
  return json{{"dims", json::array({dims.dA, dims.dB})},
              {"basis", "standard"},
              {"alpha", json{{"re", std::move(re)}, {"im", std::move(im)}}},
              {"target", matrix_to_json(cert.target)}};
}

LoadedCertificate certificate_from_json(const json& j) {
  static const std::string context = "certificate JSON";
  const auto dims = dims_from(j, context);
  if (dims.size() != 2) fail(context, "\"dims\" must have exactly two entries");
  const DimPair dp{dims[0], dims[1]};
  const json& basis_id = field(j, "basis", context);
  if (!basis_id.is_string() || basis_id.get<std::string>() != "standard")
    fail(context, "unknown basis identifier (only \"standard\" is supported)");
  const json& alpha_j = field(j, "alpha", context);
  const json& re = field(alpha_j, "re", context + " alpha");
  const json& im = field(alpha_j, "im", context + " alpha");
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    fail(context, "\"alpha\" must hold equal-length \"re\" and \"im\" arrays");
  const int n = dp.dA * dp.dA * dp.dB * dp.dB;
  if (static_cast<int>(re.size()) != n)
    fail(context, "\"alpha\" length does not match dims (expected " + std::to_string(n) + ")");
  Vector alpha(n);
  for (int r = 0; r < n; ++r) {
    if (!re[r].is_number() || !im[r].is_number())
      fail(context, "\"alpha\" entries must be numbers");
    alpha(r) = Cplx(re[r].get<double>(), im[r].get<double>());
  }
  Matrix target = matrix_from(field(j, "target", context), context + " target");
  if (target.rows() != dp.total() || target.cols() != dp.total())
    fail(context, "\"target\" shape does not match dims");
  if (max_abs_diff(target, target.adjoint()) > tol::hermitian)
    fail(context, "\"target\" is not Hermitian");

  const auto basis = covariance::default_basis(dp);
  const int nb = dp.dB * dp.dB;
  Matrix X = Matrix::Zero(dp.total(), dp.total());
  for (int r = 0; r < n; ++r)
    X += alpha(r) * kron(basis.A[r / nb], basis.B[r % nb].transpose());
  const double residual = max_abs_diff(X.adjoint() * X, target);
  if (residual > tol::reconstruction)
    fail(context, "certificate does not reconstruct its target (residual " +
                      std::to_string(residual) + ")");
  return LoadedCertificate{
      covariance::QCertificate{alpha * alpha.adjoint(), alpha, std::move(target)}, dp};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::invalid_argument("write failed: " + path);
}

}  // namespace nlwit::io
