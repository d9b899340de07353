#pragma once

// Chordal graphs, perfect clique sequences and the closed forms they give
// for decomposable models at y = 1.

#include <map>
#include <span>
#include <vector>

#include "toric/exactmath.hpp"
#include "toric/model.hpp"

namespace toric {

struct PerfectSequence {
  std::vector<VertexSet> cliques;
  /// separators[j] = cliques[j] meet (cliques[0] u ... u cliques[j-1]);
  /// separators[0] is unused and left empty.
  std::vector<VertexSet> separators;
  std::map<VertexSet, int> multiplicity;
};

struct ChordalReport {
  bool is_chordal = false;
  std::vector<Vertex> numbering;  // maximum cardinality search visit order
  PerfectSequence sequence;       // filled when chordal
};

/// Maximum cardinality search. Ties go to the vertex appearing first in
/// `priority` (a permutation of the vertices; identity when empty), so
/// different priorities give different valid perfect sequences.
ChordalReport analyze_chordal(const Graph& g, std::span<const Vertex> priority = {});

/// Z at y = 1 for a graphical, chordal model from its facet margins b.
/// Throws ModelError for non-chordal or non-graphical models and for
/// margins that disagree on shared separators.
Rat sundberg_z(const HierarchicalSpec& spec, const CountVec& b);
Rat sundberg_z(const HierarchicalSpec& spec, const CountVec& b, const PerfectSequence& seq);

/// e_j = Z(b - a_j) / Z(b) at y = 1 for every cell j; sums to deg(b).
RatVec chordal_weights(const HierarchicalSpec& spec, const CountVec& b);
RatVec chordal_weights(const HierarchicalSpec& spec, const ConfigMatrix& config, const CountVec& b,
                       const PerfectSequence& seq);

/// Union of the separators of a perfect sequence.
VertexSet separator_union(const PerfectSequence& seq);

struct FactorizationSides {
  Int lhs;
  Int rhs;
};

/// Both sides of
///   sum_{i_V extending i_S} prod_C t(i_C) = prod_C sum_{i_C agreeing with i_S} t(i_C)
/// where S is the union of separators and sep_state assigns 1-based values
/// to the vertices of S. clique_values[c] holds arbitrary t(i_C) for the
/// c-th clique of the perfect sequence, indexed by pos_of_state over C.
FactorizationSides factorization_sides(const HierarchicalSpec& spec, const std::vector<CountVec>& clique_values,
                                       const State& sep_state);
/// Same with t(i_C) the marginals of the cell table t.
FactorizationSides factorization_sides(const HierarchicalSpec& spec, const CountVec& t, const State& sep_state);
bool factorization_identity_check(const HierarchicalSpec& spec, const std::vector<CountVec>& clique_values,
                                  const State& sep_state);
bool factorization_identity_check(const HierarchicalSpec& spec, const CountVec& t, const State& sep_state);

/// Perfect sequence of a graphical model with a chordal interaction graph.
/// Throws ModelError otherwise.
PerfectSequence decomposable_sequence(const HierarchicalSpec& spec);

}  // namespace toric
