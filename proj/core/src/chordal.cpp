#include "toric/chordal.hpp"

#include <algorithm>
#include <numeric>

namespace toric {

ChordalReport analyze_chordal(const Graph& g, std::span<const Vertex> priority) {
  const std::size_t n = g.n;
  std::vector<std::size_t> rank(n);
  if (priority.empty()) {
    std::iota(rank.begin(), rank.end(), std::size_t{0});
  } else {
    if (priority.size() != n) throw ModelError("tie-break priority must list every vertex once");
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (priority[i] >= n || seen[priority[i]]) throw ModelError("tie-break priority is not a permutation");
      seen[priority[i]] = true;
      rank[priority[i]] = i;
    }
  }

  ChordalReport report;
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> weight(n, 0);
  std::vector<std::size_t> visit_index(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    Vertex best = n;
    for (Vertex v = 0; v < n; ++v) {
      if (visited[v]) continue;
      if (best == n || weight[v] > weight[best] || (weight[v] == weight[best] && rank[v] < rank[best])) best = v;
    }
    visited[best] = true;
    visit_index[best] = step;
    report.numbering.push_back(best);
    for (Vertex w = 0; w < n; ++w) {
      if (!visited[w] && g.has_edge(best, w)) ++weight[w];
    }
  }

  // Earlier-visited neighbours of each vertex must be pairwise adjacent.
  std::vector<VertexSet> candidates;
  for (Vertex v : report.numbering) {
    VertexSet earlier;
    for (Vertex w = 0; w < n; ++w) {
      if (g.has_edge(v, w) && visit_index[w] < visit_index[v]) earlier.push_back(w);
    }
    for (std::size_t i = 0; i < earlier.size(); ++i) {
      for (std::size_t k = i + 1; k < earlier.size(); ++k) {
        if (!g.has_edge(earlier[i], earlier[k])) return report;
      }
    }
    earlier.push_back(v);
    std::sort(earlier.begin(), earlier.end());
    candidates.push_back(std::move(earlier));
  }
  report.is_chordal = true;

  PerfectSequence& seq = report.sequence;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool maximal = true;
    for (std::size_t k = 0; k < candidates.size() && maximal; ++k) {
      if (k == i || candidates[k].size() <= candidates[i].size()) continue;
      if (std::includes(candidates[k].begin(), candidates[k].end(), candidates[i].begin(), candidates[i].end())) {
        maximal = false;
      }
    }
    if (maximal) seq.cliques.push_back(candidates[i]);
  }
  VertexSet seen_union;
  for (std::size_t j = 0; j < seq.cliques.size(); ++j) {
    VertexSet sep;
    std::set_intersection(seq.cliques[j].begin(), seq.cliques[j].end(), seen_union.begin(), seen_union.end(),
                          std::back_inserter(sep));
    if (j > 0) ++seq.multiplicity[sep];
    seq.separators.push_back(j == 0 ? VertexSet{} : sep);
    VertexSet merged;
    std::set_union(seen_union.begin(), seen_union.end(), seq.cliques[j].begin(), seq.cliques[j].end(),
                   std::back_inserter(merged));
    seen_union = std::move(merged);
  }
  return report;
}

PerfectSequence decomposable_sequence(const HierarchicalSpec& spec) {
  if (!is_graphical(spec)) throw ModelError("model " + spec.complex.to_string() + " is not graphical");
  auto report = analyze_chordal(interaction_graph(spec));
  if (!report.is_chordal) throw ModelError("interaction graph of " + spec.complex.to_string() + " is not chordal");
  return std::move(report.sequence);
}

namespace {

std::size_t facet_index(const HierarchicalSpec& spec, const VertexSet& clique) {
  const auto& f = spec.complex.facets;
  auto it = std::find(f.begin(), f.end(), clique);
  if (it == f.end()) throw ModelError("clique " + format_vertex_set(clique) + " is not a facet");
  return static_cast<std::size_t>(it - f.begin());
}

std::vector<Count> levels_over(const HierarchicalSpec& spec, const VertexSet& s) {
  std::vector<Count> lv;
  for (Vertex v : s) lv.push_back(spec.levels[v]);
  return lv;
}

std::size_t restricted_pos(const HierarchicalSpec& spec, const State& joint, const VertexSet& s) {
  if (s.empty()) return 0;
  State sub;
  for (Vertex v : s) sub.push_back(joint[v]);
  return pos_of_state(levels_over(spec, s), sub);
}

struct MarginTables {
  std::vector<CountVec> clique;
  std::vector<CountVec> separator;  // per sequence position, from an earlier clique
  Count total = 0;
};

MarginTables margin_tables(const HierarchicalSpec& spec, const ConfigMatrix& config, const CountVec& b,
                           const PerfectSequence& seq) {
  if (b.size() != config.row_labels.size()) throw ModelError("margin vector has wrong length");
  MarginTables t;
  for (std::size_t f = 0; f < spec.complex.facets.size(); ++f) {
    const auto tot = subset_margin(spec, config, b, f, {});
    if (f == 0) t.total = tot[0];
    if (tot[0] != t.total) throw ModelError("facet margins have different totals");
  }
  for (std::size_t j = 0; j < seq.cliques.size(); ++j) {
    const std::size_t f = facet_index(spec, seq.cliques[j]);
    t.clique.push_back(subset_margin(spec, config, b, f, seq.cliques[j]));
    if (j == 0) {
      t.separator.emplace_back();
      continue;
    }
    const VertexSet& s = seq.separators[j];
    // An earlier clique holding the separator.
    std::size_t earlier = j;
    for (std::size_t k = 0; k < j; ++k) {
      if (std::includes(seq.cliques[k].begin(), seq.cliques[k].end(), s.begin(), s.end())) {
        earlier = k;
        break;
      }
    }
    if (earlier == j) throw ModelError("sequence is not perfect");
    auto from_prev = subset_margin(spec, config, b, facet_index(spec, seq.cliques[earlier]), s);
    auto from_here = subset_margin(spec, config, b, f, s);
    if (from_prev != from_here) {
      throw ModelError("margins disagree on separator " + format_vertex_set(s));
    }
    t.separator.push_back(std::move(from_prev));
  }
  return t;
}

}  // namespace

Rat sundberg_z(const HierarchicalSpec& spec, const CountVec& b) {
  return sundberg_z(spec, b, decomposable_sequence(spec));
}

Rat sundberg_z(const HierarchicalSpec& spec, const CountVec& b, const PerfectSequence& seq) {
  const ConfigMatrix config = build_configuration(spec);
  const MarginTables t = margin_tables(spec, config, b, seq);
  Int num(1), den(1);
  for (const auto& table : t.clique) {
    for (Count v : table) {
      if (v < 0) throw InfeasibleError("negative margin");
      den *= factorial(v);
    }
  }
  for (std::size_t j = 1; j < seq.cliques.size(); ++j) {
    for (Count v : t.separator[j]) num *= factorial(v);
  }
  return make_rat(num, den);
}

RatVec chordal_weights(const HierarchicalSpec& spec, const CountVec& b) {
  return chordal_weights(spec, build_configuration(spec), b, decomposable_sequence(spec));
}

RatVec chordal_weights(const HierarchicalSpec& spec, const ConfigMatrix& config, const CountVec& b,
                       const PerfectSequence& seq) {
  const MarginTables t = margin_tables(spec, config, b, seq);
  RatVec w(config.col_labels.size(), Rat(0));
  for (std::size_t j = 0; j < w.size(); ++j) {
    const State& joint = config.col_labels[j];
    Int num(1);
    for (std::size_t c = 0; c < seq.cliques.size() && num != 0; ++c) {
      num *= t.clique[c][restricted_pos(spec, joint, seq.cliques[c])];
    }
    if (num == 0) continue;
    Int den(1);
    for (std::size_t c = 1; c < seq.cliques.size(); ++c) {
      den *= t.separator[c][restricted_pos(spec, joint, seq.separators[c])];
    }
    w[j] = make_rat(num, den);
  }
  return w;
}

VertexSet separator_union(const PerfectSequence& seq) {
  VertexSet out;
  for (const auto& s : seq.separators) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FactorizationSides factorization_sides(const HierarchicalSpec& spec, const std::vector<CountVec>& clique_values,
                                       const State& sep_state) {
  const PerfectSequence seq = decomposable_sequence(spec);
  const VertexSet s = separator_union(seq);
  if (sep_state.size() != s.size()) throw ModelError("separator state has wrong length");
  if (clique_values.size() != seq.cliques.size()) throw ModelError("need one value table per clique");
  for (std::size_t c = 0; c < seq.cliques.size(); ++c) {
    std::size_t cells = 1;
    for (Vertex v : seq.cliques[c]) cells *= static_cast<std::size_t>(spec.levels[v]);
    if (clique_values[c].size() != cells) throw ModelError("clique value table has wrong length");
  }

  auto agrees = [&](const State& joint) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (joint[s[k]] != sep_state[k]) return false;
    }
    return true;
  };

  FactorizationSides out{Int(0), Int(1)};
  for (std::size_t j = 0; j < spec.cell_count(); ++j) {
    const State joint = state_of_pos(spec.levels, j);
    if (!agrees(joint)) continue;
    Int prod(1);
    for (std::size_t c = 0; c < seq.cliques.size(); ++c) {
      prod *= clique_values[c][restricted_pos(spec, joint, seq.cliques[c])];
    }
    out.lhs += prod;
  }
  for (std::size_t c = 0; c < seq.cliques.size(); ++c) {
    const VertexSet& clique = seq.cliques[c];
    const auto lv = levels_over(spec, clique);
    Int sum(0);
    for (std::size_t p = 0; p < clique_values[c].size(); ++p) {
      const State cs = state_of_pos(lv, p);
      bool ok = true;
      for (std::size_t k = 0; k < s.size() && ok; ++k) {
        auto it = std::find(clique.begin(), clique.end(), s[k]);
        if (it != clique.end()) ok = cs[static_cast<std::size_t>(it - clique.begin())] == sep_state[k];
      }
      if (ok) sum += clique_values[c][p];
    }
    out.rhs *= sum;
  }
  return out;
}

FactorizationSides factorization_sides(const HierarchicalSpec& spec, const CountVec& t, const State& sep_state) {
  if (t.size() != spec.cell_count()) throw ModelError("table has wrong length");
  std::vector<CountVec> margins;
  for (const auto& c : decomposable_sequence(spec).cliques) margins.push_back(table_margin(spec, t, c));
  return factorization_sides(spec, margins, sep_state);
}

bool factorization_identity_check(const HierarchicalSpec& spec, const std::vector<CountVec>& clique_values,
                                  const State& sep_state) {
  const auto sides = factorization_sides(spec, clique_values, sep_state);
  return sides.lhs == sides.rhs;
}

bool factorization_identity_check(const HierarchicalSpec& spec, const CountVec& t, const State& sep_state) {
  const auto sides = factorization_sides(spec, t, sep_state);
  return sides.lhs == sides.rhs;
}

}  // namespace toric
