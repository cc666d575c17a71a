#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sb/decomposition.hpp"
#include "sb/hall.hpp"
#include "sb/matrix.hpp"
#include "sb/rational.hpp"

namespace sb::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix text format: first line "n m", then one support entry per line as
// "i j v" with 1-based indices and a positive decimal value.
NonnegMatrix read_matrix(std::istream& in);

// Vector format: one decimal (or a/b fraction) per line.
std::vector<Rational> read_rational_vector(std::istream& in);

// Graph edge list: header "n1 n2", then lines "u v" with 1-based indices.
BipartiteGraph read_graph(std::istream& in);

// Reports use 1-based indices and exact fractions rendered as strings.
nlohmann::ordered_json decomposition_report(const PrincipalPartition& pp,
                                            const RefinedDecomposition& rd,
                                            const std::optional<SinkhornLimit>& limit);
nlohmann::ordered_json hall_report(const BipartiteGraph& g, const HallReport& rep);

}  // namespace sb::io
