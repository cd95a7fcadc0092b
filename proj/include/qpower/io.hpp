#pragma once

// JSON descriptions of channels, ensembles, spectra and Hamiltonians.
// Complex scalars are written as numbers or [re, im] pairs; matrices are
// arrays of rows.

#include <string>
#include <vector>

#include <json.hpp>

#include "qpower/channels.hpp"
#include "qpower/classical.hpp"
#include "qpower/randstates.hpp"

namespace qpower::io {

using Json = nlohmann::json;

/// Parses inline JSON when the argument starts with '{' or '[', otherwise
/// reads the named file. Failures raise ConfigError.
Json load_json_arg(const std::string& arg);

cplx scalar_from_json(const Json& j);
ComplexMatrix matrix_from_json(const Json& j);
ComplexVector vector_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& m);

/// {"kind": "kraus", "kraus": [...]} or a named family:
///   {"kind": "identity", "d": n}
///   {"kind": "depolarizing", "lambda": x, "d": n}
///   {"kind": "depolarizing_isometry", "lambda": x}
///   {"kind": "amplitude_damping", "lambda": x}
///   {"kind": "pauli", "px": .., "py": .., "pz": ..}
/// "type" and "dim" are accepted as aliases. "lambda" may be omitted when a
/// sweep supplies it. {"kind": "beam_splitter", "p_b": x} is handled by the
/// coherent-state solvers, not here.
std::string channel_kind(const Json& j);
KrausChannel channel_from_json(const Json& j);
KrausChannel channel_from_json(const Json& j, double lambda);
bool channel_has_lambda(const Json& j);

/// {"states": [matrices]} or {"kets": [vectors]}, optional "probs".
std::vector<ComplexMatrix> states_from_json(const Json& j);

EnergySpectrum spectrum_from_json(const Json& j);
DiscreteChannel discrete_channel_from_json(const Json& j);

/// "sigma_z", "number_operator", a JSON matrix, or a list of diagonal levels
/// ("0,1" or "[0,1]").
ComplexMatrix hamiltonian_from_arg(const std::string& arg, Eigen::Index dim);

/// Fixed-precision rendering used by every output writer.
std::string format_real(double v);

}  // namespace qpower::io
