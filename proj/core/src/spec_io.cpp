#include "toric/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace toric {
namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw ModelError(std::string("model file is missing \"") + key + "\"");
  return j.at(key);
}

Rat rat_of(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long>());
  throw ModelError("weights must be \"p/q\" strings or integers");
}

RatVec rats_of(const json& arr) {
  if (!arr.is_array()) throw ModelError("expected an array of rationals");
  RatVec out;
  for (const auto& v : arr) out.push_back(rat_of(v));
  return out;
}

CountVec counts_of(const json& arr) {
  if (!arr.is_array()) throw ModelError("expected an array of integers");
  CountVec out;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) throw ModelError("expected integer entries");
    out.push_back(v.get<Count>());
  }
  return out;
}

RatVec optional_y(const json& j) { return j.contains("y") ? rats_of(j.at("y")) : RatVec{}; }

ToricModel parse_hierarchical(const json& j) {
  const CountVec levels = counts_of(need(j, "levels"));
  std::vector<VertexSet> facets;
  for (const auto& f : need(j, "facets")) {
    VertexSet s;
    for (Count v : counts_of(f)) {
      if (v < 1) throw ModelError("facet vertices are 1-based");
      s.push_back(static_cast<Vertex>(v - 1));
    }
    facets.push_back(std::move(s));
  }
  auto spec = HierarchicalSpec::make(SimplicialComplex::make(levels.size(), std::move(facets)), levels);
  if (j.contains("table")) return ToricModel::from_table(std::move(spec), counts_of(j.at("table")), optional_y(j));
  return ToricModel::from_hierarchical(std::move(spec), counts_of(need(j, "b")), optional_y(j));
}

ToricModel parse_matrix(const json& j) {
  std::vector<std::vector<Count>> rows;
  for (const auto& r : need(j, "A")) rows.push_back(counts_of(r));
  return ToricModel::from_matrix(IntMatrix::from_rows(rows), counts_of(need(j, "b")), optional_y(j));
}

ToricModel parse_twoway(const json& j) {
  const CountVec rows = counts_of(need(j, "rows"));
  const CountVec cols = counts_of(need(j, "cols"));
  RatVec y = optional_y(j);
  if (j.contains("z")) {
    if (!y.empty()) throw ModelError("give either \"y\" or \"z\", not both");
    RatVec z;
    const auto& zm = j.at("z");
    if (zm.size() != rows.size()) throw ModelError("odds matrix needs one row per table row");
    for (const auto& r : zm) {
      RatVec row = rats_of(r);
      if (row.size() != cols.size()) throw ModelError("odds matrix needs one column per table column");
      z.insert(z.end(), row.begin(), row.end());
    }
    y = twoway_y_from_odds(static_cast<Count>(rows.size()), static_cast<Count>(cols.size()), z);
  }
  return twoway_model(rows, cols, std::move(y));
}

ToricModel parse_nonlway(const json& j) {
  const int l = need(j, "l").get<int>();
  if (j.contains("table")) {
    ToricModel m = ToricModel::from_table(nonlway_spec(l), counts_of(j.at("table")), optional_y(j));
    m.family = Family::non_interaction_binary;
    return m;
  }
  return nonlway_model(l, counts_of(need(j, "b")), optional_y(j));
}

}  // namespace

ToricModel parse_model_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model file must hold a JSON object");
  try {
    const std::string type = need(j, "type").get<std::string>();
    ToricModel model;
    if (type == "hierarchical") {
      model = parse_hierarchical(j);
    } else if (type == "matrix") {
      model = parse_matrix(j);
    } else if (type == "poisson") {
      model = poisson_model(need(j, "m").get<Count>(), counts_of(need(j, "b")).at(0), counts_of(need(j, "b")).at(1),
                            optional_y(j));
    } else if (type == "twoway") {
      model = parse_twoway(j);
    } else if (type == "non-interaction-binary") {
      model = parse_nonlway(j);
    } else {
      throw ModelError("unknown model type '" + type + "'");
    }
    if (j.contains("family")) {
      const Family hint = parse_family(j.at("family").get<std::string>());
      const Family found = detect_family(ToricModel(model));
      if (hint != Family::generic && found != hint) {
        throw ModelError("model does not have the structure of family '" + std::string(family_name(hint)) + "'");
      }
      model.family = hint;
    }
    return model;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  } catch (const std::out_of_range&) {
    throw ModelError("malformed model file: missing entries");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ToricModel load_model_file(const std::string& path) { return parse_model_json(read_text_file(path)); }

std::vector<Move> parse_basis_json(std::string_view text, std::size_t cells) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  const json& arr = j.is_object() ? need(j, "moves") : j;
  if (!arr.is_array()) throw ModelError("basis must be an array of moves");
  std::vector<Move> moves;
  for (const auto& m : arr) {
    Move z = counts_of(m);
    if (z.size() != cells) throw ModelError("basis move has wrong length");
    moves.push_back(std::move(z));
  }
  return moves;
}

std::vector<Move> load_basis_file(const std::string& path, std::size_t cells) {
  return parse_basis_json(read_text_file(path), cells);
}

}  // namespace toric
