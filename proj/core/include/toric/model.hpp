#pragma once

// Toric models, hierarchical log-linear specifications and their
// configuration matrices.
//
// Indexing conventions: vertices, facets, rows and columns are 0-based.
// Cell states carry 1-based level values (1..r_i) so that labels read the
// same as the usual contingency-table notation. Rows and columns are
// ordered lexicographically with level 1 first and the lowest-numbered
// vertex most significant.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toric/exactmath.hpp"
#include "toric/linalg.hpp"

namespace toric {

using Vertex = std::size_t;
using VertexSet = std::vector<Vertex>;  // sorted, 0-based
using State = std::vector<int>;         // 1-based level values

struct SimplicialComplex {
  std::size_t vertex_count = 0;
  std::vector<VertexSet> facets;

  /// Validates: non-empty facet list, facets sorted and inclusion-maximal,
  /// every vertex covered.
  static SimplicialComplex make(std::size_t vertex_count, std::vector<VertexSet> facets);

  /// Parses bracket notation with single-digit 1-based vertices, e.g.
  /// "[123][124]". The vertex count is the largest vertex seen.
  static SimplicialComplex parse(std::string_view brackets);

  std::string to_string() const;
};

struct HierarchicalSpec {
  SimplicialComplex complex;
  std::vector<Count> levels;

  static HierarchicalSpec make(SimplicialComplex complex, std::vector<Count> levels);
  static HierarchicalSpec binary(std::string_view brackets);

  std::size_t cell_count() const;
};

struct MarginLabel {
  std::size_t facet = 0;
  State state;  // values for the facet's vertices, in vertex order
};

struct ConfigMatrix {
  IntMatrix entries;
  std::vector<MarginLabel> row_labels;
  std::vector<State> col_labels;
  std::vector<std::size_t> facet_offsets;  // first row of each facet block
  std::vector<VertexSet> facets;

  /// Renders a row label with '.' for marginalized vertices, e.g. "11.1".
  std::string row_name(std::size_t row, std::size_t vertex_count) const;
  std::string col_name(std::size_t col) const;
};

enum class Family { generic, poisson, twoway, non_interaction_binary };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

struct ToricModel {
  IntMatrix a;
  CountVec b;
  RatVec y;
  std::optional<HierarchicalSpec> spec;
  std::optional<ConfigMatrix> config;
  Family family = Family::generic;

  std::size_t rows() const { return a.rows(); }
  std::size_t cells() const { return a.cols(); }
  bool unit_weights() const;

  /// Validates dimensions, y > 0, b >= 0 for nonnegative A, and that
  /// (1,...,1) lies in the row span of A.
  static ToricModel from_matrix(IntMatrix a, CountVec b, RatVec y = {});
  static ToricModel from_hierarchical(HierarchicalSpec spec, CountVec b, RatVec y = {});
  static ToricModel from_table(HierarchicalSpec spec, const CountVec& table, RatVec y = {});

  /// Same model with a different right-hand side.
  ToricModel with_b(CountVec new_b) const;
};

ConfigMatrix build_configuration(const HierarchicalSpec& spec);

/// 0-based position of a 1-based state under the lexicographic order.
std::size_t pos_of_state(std::span<const Count> levels, std::span<const int> state);
State state_of_pos(std::span<const Count> levels, std::size_t pos);

CountVec marginalize(const IntMatrix& a, const CountVec& u);

/// Certificate c with c^T A = (1,...,1), if one exists.
std::optional<RatVec> has_ones_in_rowspan(const IntMatrix& a);

/// deg(Z_A(b;y)) = c.b. Throws ModelError when the row-span condition
/// fails and InfeasibleError when c.b is negative or not an integer.
Count degree_of(const IntMatrix& a, const CountVec& b);
/// Same, with a precomputed certificate.
Count degree_of(const RatVec& certificate, const CountVec& b);

/// Table of u(i_S) for a vertex subset S contained in facet `facet`,
/// computed from the facet block of b. Indexed by pos_of_state over S.
CountVec subset_margin(const HierarchicalSpec& spec, const ConfigMatrix& config,
                       const CountVec& b, std::size_t facet, const VertexSet& subset);

/// Marginal table u(i_S) of a full table.
CountVec table_margin(const HierarchicalSpec& spec, const CountVec& table, const VertexSet& subset);

struct Graph {
  std::size_t n = 0;
  std::vector<std::vector<bool>> adj;

  explicit Graph(std::size_t vertices = 0) : n(vertices), adj(vertices, std::vector<bool>(vertices)) {}
  void add_edge(Vertex a, Vertex b);
  bool has_edge(Vertex a, Vertex b) const { return adj[a][b]; }
  std::vector<Vertex> neighbors(Vertex v) const;
  std::size_t edge_count() const;
};

Graph interaction_graph(const HierarchicalSpec& spec);
std::vector<VertexSet> maximal_cliques(const Graph& g);
bool is_graphical(const HierarchicalSpec& spec);

std::string format_vertex_set(const VertexSet& s);

}  // namespace toric
