// Copyright 2026 The AQI Scheduling Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON instance documents. The schema is described in docs/instance_schema.md.

#include <json.hpp>

#include <string>

#include "aqi/instance.hpp"

namespace aqi {

using Json = nlohmann::json;

/// Integers become JSON integers, everything else a "p/q" string.
inline Json rational_to_json(const Rational& r) {
  if (is_integer(r) && r.get_num().fits_slong_p()) return r.get_num().get_si();
  return to_string(r);
}

inline Rational rational_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
  throw Error(ErrorKind::kParse, path + ": expected a number");
}

namespace io_detail {

inline const Json& field(const Json& obj, const char* key,
                         const std::string& path) {
  if (!obj.is_object())
    throw Error(ErrorKind::kParse, path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(ErrorKind::kParse,
                path + ": missing field '" + std::string(key) + "'");
  return *it;
}

inline long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw Error(ErrorKind::kParse, path + ": expected an integer");
  return j.get<long>();
}

inline long non_negative(const Json& j, const std::string& path) {
  long v = integer(j, path);
  if (v < 0) throw Error(ErrorKind::kParse, path + ": must be non-negative");
  return v;
}

inline std::vector<Rational> rational_list(const Json& j,
                                           const std::string& path) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, path + ": expected a list");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace io_detail

inline Json cost_to_json(const CostFamily& f) {
  Json j = Json::object();
  j["kind"] = to_string(f.kind());
  if (f.kind() == CostKind::kTabulated) {
    j["table"] = Json::array();
    for (const Rational& v : f.table()) j["table"].push_back(rational_to_json(v));
  } else {
    j["params"] = Json::array();
    for (const Rational& v : f.params())
      j["params"].push_back(rational_to_json(v));
  }
  return j;
}

inline CostFamily cost_from_json(const Json& j, const std::string& path) {
  using namespace io_detail;
  const Json& kind = field(j, "kind", path);
  if (!kind.is_string())
    throw Error(ErrorKind::kParse, path + ".kind: expected a string");
  CostKind k;
  try {
    k = parse_cost_kind(kind.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, path + ".kind: " + e.what());
  }
  std::vector<Rational> params;
  std::vector<Rational> table;
  if (k == CostKind::kTabulated) {
    table = rational_list(field(j, "table", path), path + ".table");
  } else {
    params = rational_list(field(j, "params", path), path + ".params");
  }
  try {
    return CostFamily::make(k, std::move(params), std::move(table));
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

inline Json packet_to_json(const Packet& p) {
  Json j = Json::object();
  j["id"] = p.id;
  j["arrival"] = p.arrival;
  j["subpackets"] = p.subpackets;
  j["weight"] = rational_to_json(p.weight);
  j["distortion"] = cost_to_json(p.distortion);
  j["delay_cost"] = cost_to_json(p.delay_cost);
  j["deadline"] = p.deadline ? Json(*p.deadline) : Json(nullptr);
  return j;
}

inline Packet packet_from_json(const Json& j, const std::string& path) {
  using namespace io_detail;
  Packet p;
  p.id = integer(field(j, "id", path), path + ".id");
  p.arrival = non_negative(field(j, "arrival", path), path + ".arrival");
  p.subpackets = integer(field(j, "subpackets", path), path + ".subpackets");
  if (p.subpackets < 1)
    throw Error(ErrorKind::kParse, path + ".subpackets: must be at least 1");
  if (j.contains("weight")) {
    p.weight = rational_from_json(j["weight"], path + ".weight");
    if (p.weight <= 0)
      throw Error(ErrorKind::kParse, path + ".weight: must be positive");
  }
  p.distortion = cost_from_json(field(j, "distortion", path), path + ".distortion");
  p.delay_cost = cost_from_json(field(j, "delay_cost", path), path + ".delay_cost");
  if (j.contains("deadline") && !j["deadline"].is_null()) {
    p.deadline = non_negative(j["deadline"], path + ".deadline");
    if (*p.deadline < p.arrival)
      throw Error(ErrorKind::kParse, path + ": deadline precedes arrival");
  }
  return p;
}

/// Canonical form: sorted keys (nlohmann objects are ordered maps), every
/// optional field written out explicitly.
inline Json instance_to_json(const Instance& inst) {
  Json j = Json::object();
  j["label"] = inst.label;
  j["horizon"] = inst.horizon;
  j["servers"] = inst.servers;
  j["energy"] = Json::array();
  for (const CostFamily& g : inst.energy) j["energy"].push_back(cost_to_json(g));
  j["packets"] = Json::array();
  for (const Packet& p : inst.packets) j["packets"].push_back(packet_to_json(p));
  return j;
}

inline Instance instance_from_json(const Json& j) {
  using namespace io_detail;
  const std::string root = "$";
  Instance inst;
  if (!j.is_object()) throw Error(ErrorKind::kParse, "$: expected an object");
  if (j.contains("label")) {
    if (!j["label"].is_string())
      throw Error(ErrorKind::kParse, "$.label: expected a string");
    inst.label = j["label"].get<std::string>();
  }
  inst.horizon = non_negative(field(j, "horizon", root), "$.horizon");
  inst.servers = j.contains("servers") ? integer(j["servers"], "$.servers") : 1;
  if (inst.servers < 1)
    throw Error(ErrorKind::kParse, "$.servers: must be at least 1");
  const Json& energy = field(j, "energy", root);
  if (!energy.is_array() || energy.empty())
    throw Error(ErrorKind::kParse, "$.energy: expected a non-empty list");
  inst.energy.clear();
  for (std::size_t s = 0; s < energy.size(); ++s)
    inst.energy.push_back(
        cost_from_json(energy[s], "$.energy[" + std::to_string(s) + "]"));
  if (inst.energy.size() != 1 &&
      inst.energy.size() != static_cast<std::size_t>(inst.servers))
    throw Error(ErrorKind::kParse,
                "$.energy: needs one family or one per server");
  const Json& packets = field(j, "packets", root);
  if (!packets.is_array())
    throw Error(ErrorKind::kParse, "$.packets: expected a list");
  for (std::size_t i = 0; i < packets.size(); ++i)
    inst.packets.push_back(
        packet_from_json(packets[i], "$.packets[" + std::to_string(i) + "]"));
  return inst;
}

/// Parses a JSON document into an Instance. Syntax errors carry the byte
/// offset; schema errors carry a JSON path.
inline Instance load_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, "at byte " + std::to_string(e.byte) +
                                       ": " + e.what());
  }
  return instance_from_json(j);
}

inline std::string store_instance(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline Json bin_to_json(const Bin& b) {
  if (b.discard) return "discard";
  return Json{{"slot", b.slot}, {"server", b.server}};
}

inline Json allocation_to_json(const Allocation& alloc) {
  Json out = Json::array();
  for (const auto& [ref, bin] : alloc.entries)
    out.push_back(Json{{"packet", ref.packet}, {"index", ref.index},
                       {"bin", to_string(bin)}});
  return out;
}

}  // namespace aqi
