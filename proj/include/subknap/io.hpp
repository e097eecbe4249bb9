/**
 * @file io.hpp
 * @brief Instance file format: parsing with field-addressed errors and a
 * canonical serializer (alphabetical keys, "%.17g" floats) whose output is
 * byte-stable, so parse-then-serialize is idempotent.
 */

#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "subknap/instance.hpp"
#include "subknap/report.hpp"

namespace subknap {

inline constexpr int kInstanceFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw InputError("instance file: missing field " + path);
  return j.at(key);
}

inline double numberAt(const json& j, const std::string& path) {
  if (!j.is_number()) throw InputError("instance file: " + path + " must be a number");
  return j.get<double>();
}

inline long long intAt(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError("instance file: " + path + " must be an integer");
  return j.get<long long>();
}

inline Vec vecAt(const json& j, const std::string& path) {
  if (!j.is_array()) throw InputError("instance file: " + path + " must be an array");
  Vec v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(numberAt(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline OraclePtr parseOracle(const json& j, int n) {
  const std::string kind = field(j, "kind", "oracle.kind").get<std::string>();
  if (kind == "coverage") {
    const json& jsets = field(j, "sets", "oracle.sets");
    if (!jsets.is_array() || static_cast<int>(jsets.size()) != n)
      throw InputError("instance file: oracle.sets must be an array of n adjacency lists");
    std::vector<std::vector<int>> sets(jsets.size());
    for (std::size_t s = 0; s < jsets.size(); ++s) {
      const std::string path = "oracle.sets[" + std::to_string(s) + "]";
      if (!jsets[s].is_array()) throw InputError("instance file: " + path + " must be an array");
      for (std::size_t t = 0; t < jsets[s].size(); ++t)
        sets[s].push_back(static_cast<int>(intAt(jsets[s][t], path + "[" + std::to_string(t) + "]")));
    }
    return std::make_shared<CoverageOracle>(std::move(sets), vecAt(field(j, "profits", "oracle.profits"), "oracle.profits"));
  }
  if (kind == "cut") {
    const json& jedges = field(j, "edges", "oracle.edges");
    if (!jedges.is_array()) throw InputError("instance file: oracle.edges must be an array");
    std::vector<CutOracle::Edge> edges;
    for (std::size_t e = 0; e < jedges.size(); ++e) {
      const std::string path = "oracle.edges[" + std::to_string(e) + "]";
      if (!jedges[e].is_array() || jedges[e].size() != 3)
        throw InputError("instance file: " + path + " must be [u, v, w]");
      edges.push_back({static_cast<int>(intAt(jedges[e][0], path + "[0]")),
                       static_cast<int>(intAt(jedges[e][1], path + "[1]")),
                       numberAt(jedges[e][2], path + "[2]")});
    }
    const json& jdir = field(j, "directed", "oracle.directed");
    if (!jdir.is_boolean()) throw InputError("instance file: oracle.directed must be a boolean");
    return std::make_shared<CutOracle>(n, std::move(edges), jdir.get<bool>());
  }
  if (kind == "modular") {
    Vec w = vecAt(field(j, "weights", "oracle.weights"), "oracle.weights");
    if (static_cast<int>(w.size()) != n) throw InputError("instance file: oracle.weights must have n entries");
    return std::make_shared<ModularOracle>(std::move(w));
  }
  if (kind == "table") {
    Vec values = vecAt(field(j, "values", "oracle.values"), "oracle.values");
    if (n > TableOracle::kMaxUniverse || values.size() != (std::size_t{1} << n))
      throw InputError("instance file: oracle.values must have exactly 2^n entries (n <= 20)");
    const json& jm = field(j, "monotone", "oracle.monotone");
    if (!jm.is_boolean()) throw InputError("instance file: oracle.monotone must be a boolean");
    return std::make_shared<TableOracle>(n, std::move(values), jm.get<bool>());
  }
  throw InputError("instance file: unknown oracle.kind '" + kind + "'");
}

} // namespace detail

namespace detail {

inline Instance parseInstanceChecked(const json& j);

} // namespace detail

/// Parse and fully validate an instance document.
inline Instance parseInstance(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw InputError(std::string("instance file: malformed JSON: ") + e.what());
  }
  try {
    return detail::parseInstanceChecked(j);
  } catch (const detail::json::exception& e) {
    throw InputError(std::string("instance file: ") + e.what());
  }
}

namespace detail {

inline Instance parseInstanceChecked(const json& j) {
  if (!j.is_object()) throw InputError("instance file: top level must be an object");

  const long long version = detail::intAt(detail::field(j, "version", "version"), "version");
  if (version != kInstanceFormatVersion)
    throw InputError("instance file: unsupported version " + std::to_string(version));
  const int n = static_cast<int>(detail::intAt(detail::field(j, "n", "n"), "n"));
  const int d = static_cast<int>(detail::intAt(detail::field(j, "d", "d"), "d"));
  if (n < 0) throw InputError("instance file: n must be >= 0");
  if (d < 1) throw InputError("instance file: d must be >= 1");

  const detail::json& jcosts = detail::field(j, "costs", "costs");
  if (!jcosts.is_array() || static_cast<int>(jcosts.size()) != d)
    throw InputError("instance file: costs must be an array of d rows");
  std::vector<Vec> costs(d);
  for (int r = 0; r < d; ++r) {
    costs[r] = detail::vecAt(jcosts[r], "costs[" + std::to_string(r) + "]");
    if (static_cast<int>(costs[r].size()) != n)
      throw InputError("instance file: costs[" + std::to_string(r) + "] must have n entries");
    for (int i = 0; i < n; ++i)
      if (!(costs[r][i] >= 0.0) || !std::isfinite(costs[r][i]))
        throw InputError("instance file: costs[" + std::to_string(r) + "][" + std::to_string(i) +
                         "] must be a finite non-negative number");
  }
  Vec budgets = detail::vecAt(detail::field(j, "budgets", "budgets"), "budgets");
  if (static_cast<int>(budgets.size()) != d) throw InputError("instance file: budgets must have d entries");
  for (int r = 0; r < d; ++r)
    if (!(budgets[r] > 0.0) || !std::isfinite(budgets[r]))
      throw InputError("instance file: budgets[" + std::to_string(r) + "] must be a finite positive number");

  OraclePtr oracle = detail::parseOracle(detail::field(j, "oracle", "oracle"), n);

  InstanceMeta meta;
  if (j.contains("metadata")) {
    const detail::json& jm = j.at("metadata");
    if (!jm.is_object()) throw InputError("instance file: metadata must be an object");
    if (jm.contains("name")) meta.name = jm.at("name").get<std::string>();
    if (jm.contains("seed")) meta.seed = static_cast<std::uint64_t>(detail::intAt(jm.at("seed"), "metadata.seed"));
    if (jm.contains("generator")) meta.generator = jm.at("generator").get<std::string>();
  }

  return Instance(std::move(costs), std::move(budgets), std::move(oracle), std::move(meta));
}

} // namespace detail

namespace detail {

inline void appendVec(std::string& out, const Vec& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += formatG17(v[i]);
  }
  out += ']';
}

inline void appendJsonString(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
    case '"': out += "\\\""; break;
    case '\\': out += "\\\\"; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case '\t': out += "\\t"; break;
    default: out += c;
    }
  }
  out += '"';
}

} // namespace detail

/**
 * @brief Canonical serialization of an instance built from raw data.
 * Keys are emitted in alphabetical order and floats as "%.17g".
 */
inline std::string serializeInstance(const Instance& inst) {
  const SubmodularOracle& f = inst.oracle();
  if (f.kind() == OracleKind::Remapped)
    throw InputError("serialize: residual views are not serializable");

  std::string out = "{";
  out += "\"budgets\":";
  detail::appendVec(out, inst.rawBudget());
  out += ",\"costs\":[";
  for (int r = 0; r < inst.d(); ++r) {
    if (r) out += ',';
    detail::appendVec(out, inst.rawCost()[r]);
  }
  out += "],\"d\":" + std::to_string(inst.d());

  const InstanceMeta& meta = inst.meta();
  if (!meta.name.empty() || meta.seed || !meta.generator.empty()) {
    out += ",\"metadata\":{";
    bool first = true;
    if (!meta.generator.empty()) {
      out += "\"generator\":";
      detail::appendJsonString(out, meta.generator);
      first = false;
    }
    if (!meta.name.empty()) {
      if (!first) out += ',';
      out += "\"name\":";
      detail::appendJsonString(out, meta.name);
      first = false;
    }
    if (meta.seed) {
      if (!first) out += ',';
      out += "\"seed\":" + std::to_string(*meta.seed);
    }
    out += '}';
  }

  out += ",\"n\":" + std::to_string(inst.n());
  out += ",\"oracle\":{";
  if (const auto* cov = dynamic_cast<const CoverageOracle*>(&f)) {
    out += "\"kind\":\"coverage\",\"profits\":";
    detail::appendVec(out, cov->profits());
    out += ",\"sets\":[";
    for (std::size_t s = 0; s < cov->sets().size(); ++s) {
      if (s) out += ',';
      out += '[';
      for (std::size_t t = 0; t < cov->sets()[s].size(); ++t) {
        if (t) out += ',';
        out += std::to_string(cov->sets()[s][t]);
      }
      out += ']';
    }
    out += ']';
  } else if (const auto* cut = dynamic_cast<const CutOracle*>(&f)) {
    out += "\"directed\":";
    out += cut->directed() ? "true" : "false";
    out += ",\"edges\":[";
    for (std::size_t e = 0; e < cut->edges().size(); ++e) {
      if (e) out += ',';
      const auto& edge = cut->edges()[e];
      out += '[' + std::to_string(edge.u) + ',' + std::to_string(edge.v) + ',' + formatG17(edge.w) + ']';
    }
    out += "],\"kind\":\"cut\"";
  } else if (const auto* mod = dynamic_cast<const ModularOracle*>(&f)) {
    out += "\"kind\":\"modular\",\"weights\":";
    detail::appendVec(out, mod->weights());
  } else if (const auto* tab = dynamic_cast<const TableOracle*>(&f)) {
    out += "\"kind\":\"table\",\"monotone\":";
    out += tab->monotone() ? "true" : "false";
    out += ",\"values\":";
    detail::appendVec(out, tab->values());
  } else {
    throw InputError("serialize: unsupported oracle implementation");
  }
  out += "},\"version\":" + std::to_string(kInstanceFormatVersion);
  out += "}\n";
  return out;
}

} // namespace subknap
