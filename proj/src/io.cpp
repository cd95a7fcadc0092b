#include "qpower/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qpower::io {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) config_error(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

Json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return Json::parse(arg);
    } catch (const Json::exception& e) {
      config_error(std::string("invalid inline JSON: ") + e.what());
    }
  }
  std::ifstream in(arg);
  if (!in) config_error("cannot open '" + arg + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    config_error("invalid JSON in '" + arg + "': " + e.what());
  }
}

cplx scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  config_error("scalar must be a number or [re, im]");
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) config_error("matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) config_error("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) config_error("vector must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = scalar_from_json(j[k]);
  return v;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

bool channel_has_lambda(const Json& j) { return j.is_object() && j.contains("lambda"); }

std::string channel_kind(const Json& j) {
  if (!j.is_object()) config_error("channel must be a JSON object");
  for (const char* key : {"kind", "type"})
    if (j.contains(key) && j.at(key).is_string()) return j.at(key).get<std::string>();
  if (j.contains("kraus")) return "kraus";
  config_error("channel needs a \"kind\"");
}

KrausChannel channel_from_json(const Json& j, double lambda) {
  const auto kind = channel_kind(j);
  if (kind == "kraus") {
    if (!j.contains("kraus") || !j.at("kraus").is_array()) config_error("kraus channel needs a \"kraus\" list");
    std::vector<ComplexMatrix> ops;
    for (const auto& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
    if (ops.empty()) config_error("empty Kraus list");
    return KrausChannel(std::move(ops));
  }
  const int dim = j.contains("d") ? j.at("d").get<int>() : j.value("dim", 2);
  if (kind == "identity") return identity_channel(dim);
  if (kind == "depolarizing") return depolarizing(lambda, dim);
  if (kind == "depolarizing_isometry") return depolarizing_isometry_channel(lambda);
  if (kind == "amplitude_damping") return amplitude_damping(lambda);
  if (kind == "pauli") return pauli_channel(number(j, "px"), number(j, "py"), number(j, "pz"));
  if (kind == "beam_splitter") config_error("beam_splitter acts on coherent ensembles, not density matrices");
  config_error("unknown channel kind '" + kind + "'");
}

KrausChannel channel_from_json(const Json& j) {
  const double lambda = channel_has_lambda(j) ? number(j, "lambda") : 0.0;
  return channel_from_json(j, lambda);
}

std::vector<ComplexMatrix> states_from_json(const Json& j) {
  if (!j.is_object()) config_error("ensemble must be a JSON object");
  std::vector<ComplexMatrix> states;
  if (j.contains("states")) {
    for (const auto& s : j.at("states")) states.push_back(matrix_from_json(s));
  } else if (j.contains("kets")) {
    for (const auto& k : j.at("kets")) {
      const ComplexVector v = vector_from_json(k);
      states.push_back(projector(v / v.norm()));
    }
  } else {
    config_error("ensemble needs \"states\" or \"kets\"");
  }
  if (states.empty()) config_error("ensemble has no states");
  return states;
}

EnergySpectrum spectrum_from_json(const Json& j) {
  const Json& levels = j.is_object() ? j.at("levels") : j;
  if (!levels.is_array()) config_error("spectrum must be {\"levels\": [...]}");
  RealVector b(static_cast<Eigen::Index>(levels.size()));
  for (std::size_t k = 0; k < levels.size(); ++k) b(static_cast<Eigen::Index>(k)) = levels[k].get<double>();
  return EnergySpectrum(b);
}

DiscreteChannel discrete_channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("Q") || !j.contains("b")) config_error("discrete channel needs \"Q\" and \"b\"");
  const auto& q = j.at("Q");
  const auto& b = j.at("b");
  if (!q.is_array() || q.empty() || !b.is_array()) config_error("malformed discrete channel");
  RealMatrix t(static_cast<Eigen::Index>(q.size()), static_cast<Eigen::Index>(q[0].size()));
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x].size() != q[0].size()) config_error("ragged transition matrix");
    for (std::size_t y = 0; y < q[x].size(); ++y)
      t(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = q[x][y].get<double>();
  }
  RealVector e(static_cast<Eigen::Index>(b.size()));
  for (std::size_t y = 0; y < b.size(); ++y) e(static_cast<Eigen::Index>(y)) = b[y].get<double>();
  return DiscreteChannel(t, e);
}

ComplexMatrix hamiltonian_from_arg(const std::string& arg, Eigen::Index dim) {
  if (arg == "sigma_z") {
    if (dim != 2) config_error("sigma_z needs a qubit output");
    return pauli::z();
  }
  if (arg == "number_operator") {
    RealVector levels(dim);
    for (Eigen::Index k = 0; k < dim; ++k) levels(k) = static_cast<double>(k);
    return diagonal_operator(levels);
  }
  Json j;
  const auto first = arg.find_first_not_of(" \t");
  if (first != std::string::npos && arg[first] == '[') {
    j = load_json_arg(arg);
  } else {
    j = Json::array();
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        j.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        config_error("unrecognized Hamiltonian '" + arg + "'");
      }
    }
  }
  ComplexMatrix h;
  // Nested arrays are always read as a matrix; a diagonal is a flat list of reals.
  if (!j.empty() && j[0].is_array()) {
    h = matrix_from_json(j);
  } else {
    const ComplexVector levels = vector_from_json(j);
    h = levels.asDiagonal();
  }
  if (h.rows() != dim || h.cols() != dim) config_error("Hamiltonian dimension does not match channel output");
  try {
    require_hermitian(h);
  } catch (const Error& e) {
    config_error(std::string("Hamiltonian: ") + e.what());
  }
  return h;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace qpower::io
