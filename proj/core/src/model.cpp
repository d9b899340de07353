#include "toric/model.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace toric {

SimplicialComplex SimplicialComplex::make(std::size_t vertex_count, std::vector<VertexSet> facets) {
  if (facets.empty()) throw ModelError("simplicial complex needs at least one facet");
  std::vector<bool> covered(vertex_count, false);
  for (auto& f : facets) {
    if (f.empty()) throw ModelError("empty facet");
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw ModelError("repeated vertex in facet");
    for (Vertex v : f) {
      if (v >= vertex_count) throw ModelError("facet vertex out of range");
      covered[v] = true;
    }
  }
  for (std::size_t i = 0; i < facets.size(); ++i) {
    for (std::size_t j = 0; j < facets.size(); ++j) {
      if (i == j) continue;
      if (std::includes(facets[j].begin(), facets[j].end(), facets[i].begin(), facets[i].end())) {
        throw ModelError("facet " + format_vertex_set(facets[i]) + " is contained in " +
                         format_vertex_set(facets[j]));
      }
    }
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!covered[v]) throw ModelError("vertex " + std::to_string(v + 1) + " is in no facet");
  }
  return SimplicialComplex{vertex_count, std::move(facets)};
}

SimplicialComplex SimplicialComplex::parse(std::string_view text) {
  std::vector<VertexSet> facets;
  std::size_t max_vertex = 0;
  bool open = false;
  VertexSet current;
  for (char ch : text) {
    if (ch == '[') {
      if (open) throw ModelError("nested '[' in complex");
      open = true;
      current.clear();
    } else if (ch == ']') {
      if (!open) throw ModelError("unbalanced ']' in complex");
      open = false;
      facets.push_back(current);
    } else if (ch >= '1' && ch <= '9') {
      if (!open) throw ModelError("vertex outside brackets");
      const std::size_t v = static_cast<std::size_t>(ch - '1');
      current.push_back(v);
      max_vertex = std::max(max_vertex, v + 1);
    } else if (ch != ' ') {
      throw ModelError(std::string("unexpected character '") + ch + "' in complex");
    }
  }
  if (open) throw ModelError("unterminated '[' in complex");
  return make(max_vertex, std::move(facets));
}

std::string SimplicialComplex::to_string() const {
  std::string out;
  for (const auto& f : facets) {
    out += '[';
    for (Vertex v : f) out += std::to_string(v + 1);
    out += ']';
  }
  return out;
}

HierarchicalSpec HierarchicalSpec::make(SimplicialComplex complex, std::vector<Count> levels) {
  if (levels.size() != complex.vertex_count) {
    throw ModelError("levels length " + std::to_string(levels.size()) + " does not match " +
                     std::to_string(complex.vertex_count) + " vertices");
  }
  for (Count r : levels) {
    if (r < 2) throw ModelError("every level must be at least 2");
  }
  return HierarchicalSpec{std::move(complex), std::move(levels)};
}

HierarchicalSpec HierarchicalSpec::binary(std::string_view brackets) {
  auto complex = SimplicialComplex::parse(brackets);
  std::vector<Count> levels(complex.vertex_count, 2);
  return make(std::move(complex), std::move(levels));
}

std::size_t HierarchicalSpec::cell_count() const {
  std::size_t m = 1;
  for (Count r : levels) m *= static_cast<std::size_t>(r);
  return m;
}

std::string ConfigMatrix::row_name(std::size_t row, std::size_t vertex_count) const {
  const MarginLabel& label = row_labels.at(row);
  std::string out(vertex_count, '.');
  const VertexSet& f = facets.at(label.facet);
  for (std::size_t i = 0; i < f.size(); ++i) out[f[i]] = static_cast<char>('0' + label.state[i]);
  return out;
}

std::string ConfigMatrix::col_name(std::size_t col) const {
  std::string out;
  for (int v : col_labels.at(col)) out += std::to_string(v);
  return out;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::poisson: return "poisson";
    case Family::twoway: return "twoway";
    case Family::non_interaction_binary: return "non-interaction-binary";
    case Family::generic: break;
  }
  return "generic";
}

Family parse_family(std::string_view name) {
  if (name == "poisson") return Family::poisson;
  if (name == "twoway") return Family::twoway;
  if (name == "non-interaction-binary") return Family::non_interaction_binary;
  if (name == "generic") return Family::generic;
  throw ModelError("unknown family '" + std::string(name) + "'");
}

bool ToricModel::unit_weights() const {
  return std::all_of(y.begin(), y.end(), [](const Rat& v) { return v == 1; });
}

ToricModel ToricModel::from_matrix(IntMatrix a, CountVec b, RatVec y) {
  if (a.rows() == 0 || a.cols() == 0) throw ModelError("configuration matrix is empty");
  if (b.size() != a.rows()) {
    throw ModelError("b has " + std::to_string(b.size()) + " entries but A has " +
                     std::to_string(a.rows()) + " rows");
  }
  if (y.empty()) y.assign(a.cols(), Rat(1));
  if (y.size() != a.cols()) {
    throw ModelError("y has " + std::to_string(y.size()) + " entries but A has " +
                     std::to_string(a.cols()) + " columns");
  }
  for (const Rat& v : y) {
    if (v <= 0) throw ModelError("cell weights y must be positive");
  }
  if (a.nonnegative()) {
    for (Count v : b) {
      if (v < 0) throw ModelError("b must be nonnegative for a nonnegative configuration");
    }
  }
  if (!has_ones_in_rowspan(a)) throw ModelError("(1,...,1) is not in the row span of A");
  ToricModel m;
  m.a = std::move(a);
  m.b = std::move(b);
  m.y = std::move(y);
  return m;
}

ToricModel ToricModel::from_hierarchical(HierarchicalSpec spec, CountVec b, RatVec y) {
  ConfigMatrix config = build_configuration(spec);
  ToricModel m = from_matrix(config.entries, std::move(b), std::move(y));
  m.spec = std::move(spec);
  m.config = std::move(config);
  return m;
}

ToricModel ToricModel::from_table(HierarchicalSpec spec, const CountVec& table, RatVec y) {
  ConfigMatrix config = build_configuration(spec);
  CountVec b = marginalize(config.entries, table);
  return from_hierarchical(std::move(spec), std::move(b), std::move(y));
}

ToricModel ToricModel::with_b(CountVec new_b) const {
  if (new_b.size() != b.size()) throw ModelError("with_b: dimension mismatch");
  ToricModel m = *this;
  m.b = std::move(new_b);
  return m;
}

std::size_t pos_of_state(std::span<const Count> levels, std::span<const int> state) {
  if (levels.size() != state.size()) throw ModelError("state length does not match levels");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (state[i] < 1 || state[i] > levels[i]) {
      throw ModelError("state value " + std::to_string(state[i]) + " out of range 1.." +
                       std::to_string(levels[i]));
    }
    pos = pos * static_cast<std::size_t>(levels[i]) + static_cast<std::size_t>(state[i] - 1);
  }
  return pos;
}

State state_of_pos(std::span<const Count> levels, std::size_t pos) {
  State s(levels.size());
  for (std::size_t i = levels.size(); i-- > 0;) {
    const auto r = static_cast<std::size_t>(levels[i]);
    s[i] = static_cast<int>(pos % r) + 1;
    pos /= r;
  }
  return s;
}

namespace {

std::vector<Count> levels_of(const HierarchicalSpec& spec, const VertexSet& subset) {
  std::vector<Count> out;
  out.reserve(subset.size());
  for (Vertex v : subset) out.push_back(spec.levels[v]);
  return out;
}

State restrict_state(const State& joint, const VertexSet& subset) {
  State out;
  out.reserve(subset.size());
  for (Vertex v : subset) out.push_back(joint[v]);
  return out;
}

}  // namespace

ConfigMatrix build_configuration(const HierarchicalSpec& spec) {
  const auto& facets = spec.complex.facets;
  if (facets.empty()) throw ModelError("empty facet list");
  const std::size_t m = spec.cell_count();
  std::size_t d = 0;
  ConfigMatrix config;
  config.facets = facets;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    config.facet_offsets.push_back(d);
    const auto lv = levels_of(spec, facets[f]);
    std::size_t count = 1;
    for (Count r : lv) count *= static_cast<std::size_t>(r);
    for (std::size_t p = 0; p < count; ++p) config.row_labels.push_back({f, state_of_pos(lv, p)});
    d += count;
  }
  config.entries = IntMatrix(d, m);
  for (std::size_t j = 0; j < m; ++j) {
    State joint = state_of_pos(spec.levels, j);
    for (std::size_t f = 0; f < facets.size(); ++f) {
      const auto lv = levels_of(spec, facets[f]);
      const State sub = restrict_state(joint, facets[f]);
      config.entries(config.facet_offsets[f] + pos_of_state(lv, sub), j) = 1;
    }
    config.col_labels.push_back(std::move(joint));
  }
  return config;
}

CountVec marginalize(const IntMatrix& a, const CountVec& u) { return multiply(a, u); }

std::optional<RatVec> has_ones_in_rowspan(const IntMatrix& a) {
  // Solve A^T c = 1.
  std::vector<RatVec> at(a.cols(), RatVec(a.rows()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) at[j][i] = a(i, j);
  }
  return solve_linear(std::move(at), RatVec(a.cols(), Rat(1)));
}

Count degree_of(const RatVec& certificate, const CountVec& b) {
  if (certificate.size() != b.size()) throw ModelError("degree_of: dimension mismatch");
  Rat n(0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] != 0) n += certificate[i] * Rat(static_cast<long>(b[i]));
  }
  if (n.get_den() != 1) throw InfeasibleError("degree " + n.get_str() + " is not an integer; b is not in N0 A");
  if (n < 0) throw InfeasibleError("degree " + n.get_str() + " is negative; b is not in N0 A");
  if (!n.get_num().fits_slong_p()) throw ModelError("degree too large");
  return n.get_num().get_si();
}

Count degree_of(const IntMatrix& a, const CountVec& b) {
  const auto c = has_ones_in_rowspan(a);
  if (!c) throw ModelError("(1,...,1) is not in the row span of A");
  return degree_of(*c, b);
}

CountVec subset_margin(const HierarchicalSpec& spec, const ConfigMatrix& config, const CountVec& b,
                       std::size_t facet, const VertexSet& subset) {
  const VertexSet& fv = spec.complex.facets.at(facet);
  if (!std::includes(fv.begin(), fv.end(), subset.begin(), subset.end())) {
    throw ModelError("subset " + format_vertex_set(subset) + " not contained in facet " +
                     format_vertex_set(fv));
  }
  const auto sub_levels = levels_of(spec, subset);
  std::size_t size = 1;
  for (Count r : sub_levels) size *= static_cast<std::size_t>(r);
  CountVec out(size, 0);
  // Positions of subset vertices inside the facet.
  std::vector<std::size_t> where;
  for (Vertex v : subset) where.push_back(static_cast<std::size_t>(std::find(fv.begin(), fv.end(), v) - fv.begin()));
  const std::size_t begin = config.facet_offsets[facet];
  const std::size_t end =
      facet + 1 < config.facet_offsets.size() ? config.facet_offsets[facet + 1] : config.row_labels.size();
  for (std::size_t row = begin; row < end; ++row) {
    const State& st = config.row_labels[row].state;
    State sub;
    for (std::size_t w : where) sub.push_back(st[w]);
    out[subset.empty() ? 0 : pos_of_state(sub_levels, sub)] += b[row];
  }
  return out;
}

CountVec table_margin(const HierarchicalSpec& spec, const CountVec& table, const VertexSet& subset) {
  const auto sub_levels = levels_of(spec, subset);
  std::size_t size = 1;
  for (Count r : sub_levels) size *= static_cast<std::size_t>(r);
  CountVec out(size, 0);
  for (std::size_t j = 0; j < table.size(); ++j) {
    const State joint = state_of_pos(spec.levels, j);
    out[subset.empty() ? 0 : pos_of_state(sub_levels, restrict_state(joint, subset))] += table[j];
  }
  return out;
}

void Graph::add_edge(Vertex a, Vertex b) {
  if (a == b) return;
  adj[a][b] = adj[b][a] = true;
}

std::vector<Vertex> Graph::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex w = 0; w < n; ++w) {
    if (adj[v][w]) out.push_back(w);
  }
  return out;
}

std::size_t Graph::edge_count() const {
  std::size_t e = 0;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) e += adj[a][b] ? 1 : 0;
  }
  return e;
}

Graph interaction_graph(const HierarchicalSpec& spec) {
  Graph g(spec.complex.vertex_count);
  for (const auto& f : spec.complex.facets) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) g.add_edge(f[i], f[j]);
    }
  }
  return g;
}

std::vector<VertexSet> maximal_cliques(const Graph& g) {
  // Bron-Kerbosch with pivoting; graphs here have at most a few dozen vertices.
  std::vector<VertexSet> out;
  std::function<void(VertexSet, VertexSet, VertexSet)> expand = [&](VertexSet r, VertexSet p, VertexSet x) {
    if (p.empty() && x.empty()) {
      std::sort(r.begin(), r.end());
      out.push_back(r);
      return;
    }
    Vertex pivot = p.empty() ? x.front() : p.front();
    VertexSet candidates;
    for (Vertex v : p) {
      if (!g.has_edge(pivot, v)) candidates.push_back(v);
    }
    for (Vertex v : candidates) {
      VertexSet r2 = r, p2, x2;
      r2.push_back(v);
      for (Vertex w : p) {
        if (g.has_edge(v, w)) p2.push_back(w);
      }
      for (Vertex w : x) {
        if (g.has_edge(v, w)) x2.push_back(w);
      }
      expand(std::move(r2), std::move(p2), std::move(x2));
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  };
  VertexSet all(g.n);
  for (Vertex v = 0; v < g.n; ++v) all[v] = v;
  expand({}, all, {});
  std::sort(out.begin(), out.end());
  return out;
}

bool is_graphical(const HierarchicalSpec& spec) {
  std::set<VertexSet> facets(spec.complex.facets.begin(), spec.complex.facets.end());
  const auto cliques = maximal_cliques(interaction_graph(spec));
  return std::set<VertexSet>(cliques.begin(), cliques.end()) == facets;
}

std::string format_vertex_set(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

}  // namespace toric
