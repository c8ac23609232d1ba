#include "fidcoh/io.hpp"

#include <fstream>

namespace fidcoh::io {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("expected a complex number as [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

int read_dim(const Json& j) {
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1) {
    throw ParseError("missing or invalid \"dim\" field");
  }
  return j["dim"].get<int>();
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const PureState& psi) {
  Json data = Json::array();
  for (int i = 0; i < psi.dim(); ++i) data.push_back(complex_to_json(psi[i]));
  return {{"kind", "pure"}, {"dim", psi.dim()}, {"data", std::move(data)}};
}

Json to_json(const DensityMatrix& rho) {
  return {{"kind", "density"}, {"dim", rho.dim()}, {"data", to_json(rho.matrix())}};
}

Json channel_to_json(const std::vector<ComplexMatrix>& kraus) {
  Json ops = Json::array();
  for (const auto& k : kraus) ops.push_back(to_json(k));
  const int dim = kraus.empty() ? 0 : static_cast<int>(kraus.front().rows());
  return {{"dim", dim}, {"kraus", std::move(ops)}};
}

ComplexMatrix matrix_from_json(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ParseError("expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError("row " + std::to_string(i) + " must hold " + std::to_string(dim) + " entries");
    }
    for (int k = 0; k < dim; ++k) m(i, k) = complex_from_json(row[k]);
  }
  return m;
}

State state_from_json(const Json& j, double tol) {
  if (!j.is_object()) throw ParseError("state file must be a JSON object");
  const int dim = read_dim(j);
  if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError("missing \"kind\" field");
  if (!j.contains("data")) throw ParseError("missing \"data\" field");
  const std::string kind = j["kind"].get<std::string>();
  const Json& data = j["data"];
  if (kind == "pure") {
    if (!data.is_array() || static_cast<int>(data.size()) != dim) {
      throw ParseError("pure state data must hold " + std::to_string(dim) + " amplitudes");
    }
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_from_json(data[i]);
    return PureState(std::move(v), tol);
  }
  if (kind == "density") return DensityMatrix(matrix_from_json(data, dim), tol);
  throw ParseError("unknown state kind \"" + kind + "\" (expected pure or density)");
}

std::vector<ComplexMatrix> channel_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("channel file must be a JSON object");
  const int dim = read_dim(j);
  if (!j.contains("kraus") || !j["kraus"].is_array()) throw ParseError("missing \"kraus\" list");
  std::vector<ComplexMatrix> ops;
  for (const auto& k : j["kraus"]) ops.push_back(matrix_from_json(k, dim));
  return ops;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

State read_state(const std::filesystem::path& path, double tol) {
  return state_from_json(read_json(path), tol);
}

std::vector<ComplexMatrix> read_channel(const std::filesystem::path& path) {
  return channel_from_json(read_json(path));
}

DensityMatrix as_density(const State& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return DensityMatrix::from_pure(*psi);
  return std::get<DensityMatrix>(s);
}

}  // namespace fidcoh::io
