#pragma once

// JSON model files.
//
//   {"type": "hierarchical", "levels": [2,2,2], "facets": [[1,2],[1,3]],
//    "b": [...] | "table": [...], "y": [...]}
//   {"type": "matrix", "A": [[...], ...], "b": [...], "y": [...]}
//   {"type": "poisson", "m": 5, "b": [288, 120], "y": [...]}
//   {"type": "twoway", "rows": [...], "cols": [...], "z": [[...], ...]}
//   {"type": "non-interaction-binary", "l": 3, "b": [...] | "table": [...]}
//
// Facets are 1-based. Weights are "p/q" strings or integers; omitted
// weights mean y = 1. An optional "family" names the family explicitly.

#include <string>
#include <string_view>
#include <vector>

#include "toric/families.hpp"
#include "toric/model.hpp"

namespace toric {

ToricModel parse_model_json(std::string_view text);
ToricModel load_model_file(const std::string& path);

/// {"moves": [[...], ...]} or a bare array of moves.
std::vector<Move> parse_basis_json(std::string_view text, std::size_t cells);
std::vector<Move> load_basis_file(const std::string& path, std::size_t cells);

std::string read_text_file(const std::string& path);

}  // namespace toric
