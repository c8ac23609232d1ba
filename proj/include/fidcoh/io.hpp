#pragma once

// State and channel files: JSON documents with complex numbers as [re, im].
//
//   {"kind": "pure",    "dim": 2, "data": [[re, im], [re, im]]}
//   {"kind": "density", "dim": 2, "data": [[[re, im], [re, im]], [[re, im], [re, im]]]}
//   {"dim": 2, "kraus": [ <dim×dim nested list>, ... ]}
//
// Doubles are written in shortest round-trip form, so write→read is bit-exact.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fidcoh/core.hpp"

namespace fidcoh::io {

using Json = nlohmann::json;

/// Malformed or unreadable input (as opposed to a well-formed but invalid state).
class ParseError : public Error {
 public:
  using Error::Error;
};

using State = std::variant<PureState, DensityMatrix>;

Json to_json(const ComplexMatrix& m);
Json to_json(const PureState& psi);
Json to_json(const DensityMatrix& rho);
Json channel_to_json(const std::vector<ComplexMatrix>& kraus);

ComplexMatrix matrix_from_json(const Json& j, int dim);

/// Structure errors raise ParseError; state validation errors propagate as
/// ValidationError.
State state_from_json(const Json& j, double tol = kStructuralTol);
/// Raw Kraus matrices; run validate_channel on the result.
std::vector<ComplexMatrix> channel_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

State read_state(const std::filesystem::path& path, double tol = kStructuralTol);
std::vector<ComplexMatrix> read_channel(const std::filesystem::path& path);

/// Density matrix of either kind of state.
DensityMatrix as_density(const State& s);

}  // namespace fidcoh::io
