#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "finharm/actions.hpp"
#include "finharm/functions.hpp"

namespace finharm::io {

using nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Schema, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, path + ": " + e.what());
  }
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::Schema, "complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace detail {

inline void check_group_field(const json& doc, const GroupPtr& g) {
  if (!doc.is_object() || !doc.contains("group") || !doc["group"].is_string())
    throw Error(ErrorKind::Schema, "document needs a string 'group' field");
  const auto name = doc["group"].get<std::string>();
  if (name != g->name()) throw Error(ErrorKind::GroupMismatch, "document is for '" + name + "', not '" + g->name() + "'");
}

inline const json& array_field(const json& doc, const char* key, std::size_t len) {
  if (!doc.contains(key) || !doc[key].is_array()) throw Error(ErrorKind::Schema, std::string("missing array '") + key + "'");
  if (doc[key].size() != len)
    throw Error(ErrorKind::Dimension, std::string("'") + key + "' has " + std::to_string(doc[key].size()) +
                                          " entries, expected " + std::to_string(len));
  return doc[key];
}

}  // namespace detail

// {"group": str, "values": [[re, im]]}
inline json to_json(const GroupFunction& f) {
  json values = json::array();
  for (Index x = 0; x < f.values.size(); ++x) values.push_back(complex_to_json(f.values(x)));
  return {{"group", f.group->name()}, {"values", values}};
}

inline GroupFunction function_from_json(const json& doc, const GroupPtr& g) {
  detail::check_group_field(doc, g);
  const auto& values = detail::array_field(doc, "values", g->order());
  Vector v(Index(g->order()));
  for (std::size_t x = 0; x < g->order(); ++x) v(Index(x)) = complex_from_json(values[x]);
  return {g, v};
}

// {"group": str, "weights": [num]}
inline json to_json(const Measure& mu) {
  json weights = json::array();
  for (Index x = 0; x < mu.weights.size(); ++x) weights.push_back(mu.weights(x).real());
  return {{"group", mu.group->name()}, {"weights", weights}};
}

inline Measure measure_from_json(const json& doc, const GroupPtr& g) {
  detail::check_group_field(doc, g);
  const auto& weights = detail::array_field(doc, "weights", g->order());
  Vector w(Index(g->order()));
  for (std::size_t x = 0; x < g->order(); ++x) {
    if (!weights[x].is_number()) throw Error(ErrorKind::Schema, "measure weights must be numbers");
    w(Index(x)) = weights[x].get<double>();
  }
  return {g, w};
}

// {"group": str, "matrix": [[[re, im]]]}
inline json to_json(const OperatorMatrix& t) {
  json rows = json::array();
  for (Index a = 0; a < t.n(); ++a) {
    json row = json::array();
    for (Index b = 0; b < t.n(); ++b) row.push_back(complex_to_json(t.matrix(a, b)));
    rows.push_back(std::move(row));
  }
  return {{"group", t.group->name()}, {"matrix", rows}};
}

inline OperatorMatrix operator_from_json(const json& doc, const GroupPtr& g) {
  detail::check_group_field(doc, g);
  const auto& rows = detail::array_field(doc, "matrix", g->order());
  const Index n = Index(g->order());
  Matrix m(n, n);
  for (Index a = 0; a < n; ++a) {
    const auto& row = rows[std::size_t(a)];
    if (!row.is_array() || row.size() != std::size_t(n))
      throw Error(ErrorKind::Dimension, "operator row " + std::to_string(a) + " has the wrong length");
    for (Index b = 0; b < n; ++b) m(a, b) = complex_from_json(row[std::size_t(b)]);
  }
  return {g, m};
}

/// Builtin kind ("S3", "Z2xZ4", ...) or a path to a group JSON file.
inline GroupPtr load_group(const std::string& source) {
  if (source.find('/') != std::string::npos || source.ends_with(".json")) return parse_group(read_json_file(source));
  return make_group(source);
}

}  // namespace finharm::io
