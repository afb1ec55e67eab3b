#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "medbid/instance.hpp"
#include "medbid/numeric.hpp"
#include "medbid/oblivious.hpp"
#include "medbid/solvers.hpp"

namespace medbid {

using json = nlohmann::json;

/// An instance file carries its own numeric mode, so loading yields one of
/// the two concrete instance types.
using AnyInstance = std::variant<MedianInstance<double>, MedianInstance<Rational>>;

/// Shortest round-trip decimal form; keeps CSV output byte-stable.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

namespace detail {

inline json number_to_json(double v) { return json(v); }
inline json number_to_json(const Rational& v) { return json(format_rational(v)); }

template <class Num>
Num number_from_json(const json& j, const std::string& where) {
  if constexpr (numeric_traits<Num>::exact) {
    if (j.is_string()) {
      try {
        return parse_rational(j.get<std::string>());
      } catch (const std::exception& e) {
        throw std::runtime_error(where + ": " + e.what());
      }
    }
    if (j.is_number_integer()) {
      long long v = j.get<long long>();
      if (v < 0) throw std::runtime_error(where + ": negative value");
      return Rational(v);
    }
    throw std::runtime_error(where + ": rational mode expects \"p/q\" strings");
  } else {
    if (!j.is_number()) throw std::runtime_error(where + ": expected a number");
    return j.get<double>();
  }
}

inline const json& require_field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw std::runtime_error(std::string("missing field '") + name + "'");
  return *it;
}

template <class Num>
MedianInstance<Num> instance_from_json_typed(const json& j) {
  MedianInstance<Num> inst;
  for (const auto& c : require_field(j, "customers"))
    inst.customers.push_back(c.is_string() ? c.get<std::string>() : c.dump());
  for (const auto& f : require_field(j, "facilities"))
    inst.facilities.push_back(f.is_string() ? f.get<std::string>() : f.dump());
  const json& rows = require_field(j, "dist");
  if (!rows.is_array()) throw std::runtime_error("field 'dist' must be an array of rows");
  std::size_t u = 0;
  for (const auto& row : rows) {
    std::vector<Num> out;
    std::size_t f = 0;
    for (const auto& cell : row) {
      out.push_back(number_from_json<Num>(
          cell, "dist[" + std::to_string(u) + "][" + std::to_string(f) + "]"));
      ++f;
    }
    inst.dist.push_back(std::move(out));
    ++u;
  }
  if (j.contains("weights")) {
    std::size_t w = 0;
    for (const auto& cell : j.at("weights")) {
      inst.weights.push_back(number_from_json<Num>(cell, "weights[" + std::to_string(w) + "]"));
      ++w;
    }
  } else {
    inst.weights.assign(inst.customers.size(), Num(1));
  }
  try {
    inst.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

}  // namespace detail

template <class Num>
json instance_to_json(const MedianInstance<Num>& inst) {
  json j;
  j["numeric_mode"] = numeric_traits<Num>::mode_name;
  j["customers"] = inst.customers;
  j["facilities"] = inst.facilities;
  json rows = json::array();
  for (const auto& row : inst.dist) {
    json r = json::array();
    for (const Num& v : row) r.push_back(detail::number_to_json(v));
    rows.push_back(std::move(r));
  }
  j["dist"] = std::move(rows);
  bool weighted = false;
  for (const Num& w : inst.weights)
    if (!(w == Num(1))) weighted = true;
  if (weighted) {
    json ws = json::array();
    for (const Num& w : inst.weights) ws.push_back(detail::number_to_json(w));
    j["weights"] = std::move(ws);
  }
  return j;
}

inline AnyInstance instance_from_json(const json& j) {
  const json& mode = detail::require_field(j, "numeric_mode");
  if (mode == "f64") return detail::instance_from_json_typed<double>(j);
  if (mode == "rational") return detail::instance_from_json_typed<Rational>(j);
  throw std::runtime_error("numeric_mode must be \"f64\" or \"rational\"");
}

inline AnyInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

template <class Num>
json offline_to_json(const OfflineSolution<Num>& offline,
                     const MedianInstance<Num>& inst) {
  json j;
  j["solver"] = solver_tag_name(offline.tag);
  json per_k = json::array();
  for (int k = 1; k <= offline.n(); ++k) {
    json row;
    row["k"] = k;
    json ids = json::array();
    for (int f : offline.set_for(k))
      ids.push_back(inst.facilities[static_cast<std::size_t>(f)]);
    row["facilities"] = std::move(ids);
    row["cost"] = detail::number_to_json(offline.cost_for(k));
    per_k.push_back(std::move(row));
  }
  j["per_k"] = std::move(per_k);
  return j;
}

template <class Num>
json chain_to_json(const FacilityChain<Num>& chain, const MedianInstance<Num>& inst) {
  json j;
  j["mode"] = chain.mode == ChainMode::CostCompetitive ? "cost" : "size";
  json sets = json::array();
  for (int k = 1; k <= chain.n(); ++k) {
    json ids = json::array();
    for (int f : chain.set_for(k))
      ids.push_back(inst.facilities[static_cast<std::size_t>(f)]);
    sets.push_back(std::move(ids));
  }
  j["sets"] = std::move(sets);
  json bids = json::array();
  for (const Num& b : chain.bids.bids) bids.push_back(detail::number_to_json(b));
  j["bids"] = std::move(bids);
  if (chain.mode == ChainMode::CostCompetitive) {
    j["index_set"] = chain.index_set;
  } else {
    json paid = json::array();
    for (const auto& per_k : chain.paid_per_k) {
      json row = json::array();
      for (const Num& b : per_k) row.push_back(detail::number_to_json(b));
      paid.push_back(std::move(row));
    }
    j["paid_bids"] = std::move(paid);
  }
  return j;
}

}  // namespace medbid
