// Copyright the fidls contributors
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

#include "fidls/search.hpp"
#include "fidls/verify.hpp"

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>

namespace fidls {

/// Round-trippable QASM emission of a CNOT-only circuit.
inline std::string to_qasm(const Circuit& c,
                           const std::string& reg_name = "q") {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg " << reg_name << "[" << c.num_qubits << "];\n";
  for (const Gate& g : c.gates) {
    out << "cx " << reg_name << "[" << g.control << "]," << reg_name << "["
        << g.target << "];\n";
  }
  return out.str();
}

inline std::string filter_name(QFilter f) {
  switch (f) {
    case QFilter::None: return "none";
    case QFilter::Q0: return "q0";
    case QFilter::Q01: return "q01";
    case QFilter::Q01x: return "q01x";
  }
  return "?";
}

inline QFilter parse_filter(const std::string& s) {
  if (s == "none") return QFilter::None;
  if (s == "q0") return QFilter::Q0;
  if (s == "q01") return QFilter::Q01;
  if (s == "q01x") return QFilter::Q01x;
  throw ValidationError("unknown q-filter '" + s + "'");
}

inline std::string dfilter_name(const std::optional<DFilter>& d) {
  if (!d) {
    return "off";
  }
  std::ostringstream out;
  out << "d" << d->s;
  if (d->s > 0) {
    out << ":" << d->gamma;
  }
  return out.str();
}

/// "off", "d0", or "dS:GAMMA" (e.g. "d2:0.8").
inline std::optional<DFilter> parse_dfilter(const std::string& s) {
  if (s == "off") {
    return std::nullopt;
  }
  if (s.size() < 2 || s[0] != 'd') {
    throw ValidationError("unknown d-filter '" + s + "'");
  }
  DFilter d;
  const auto colon = s.find(':');
  d.s = std::stoi(s.substr(1, colon == std::string::npos ? std::string::npos
                                                         : colon - 1));
  if (colon != std::string::npos) {
    d.gamma = std::stod(s.substr(colon + 1));
  }
  if (d.s < 0 || d.gamma < 0.0 || d.gamma > 1.0) {
    throw ValidationError("d-filter out of range: '" + s + "'");
  }
  return d;
}

inline std::string value_name(const ValueFn& v) {
  if (v.kind == ValueFn::Kind::G) {
    return "g";
  }
  std::ostringstream out;
  out << "d" << v.s << ":" << v.gamma;
  return out.str();
}

/// "g" or "dS:GAMMA" (e.g. "d2:0.8").
inline ValueFn parse_value(const std::string& s) {
  ValueFn v;
  if (s == "g") {
    v.kind = ValueFn::Kind::G;
    return v;
  }
  if (s.size() < 2 || s[0] != 'd') {
    throw ValidationError("unknown value function '" + s + "'");
  }
  v.kind = ValueFn::Kind::D;
  const auto colon = s.find(':');
  v.s = std::stoi(s.substr(1, colon == std::string::npos ? std::string::npos
                                                         : colon - 1));
  if (colon != std::string::npos) {
    v.gamma = std::stod(s.substr(colon + 1));
  }
  if (v.s < 0 || v.gamma < 0.0 || v.gamma > 1.0) {
    throw ValidationError("value function out of range: '" + s + "'");
  }
  return v;
}

inline nlohmann::json mapping_to_json(const QubitMapping& tau) {
  nlohmann::json pairs = nlohmann::json::array();
  for (int q = 0; q < tau.num_logical(); ++q) {
    if (tau.is_mapped(q)) {
      pairs.push_back({q, tau.phys_of(q)});
    }
  }
  return pairs;
}

inline QubitMapping mapping_from_json(const nlohmann::json& pairs,
                                      int num_logical, int num_physical) {
  QubitMapping tau(num_logical, num_physical);
  for (const auto& pr : pairs) {
    tau.assign(pr.at(0).get<int>(), pr.at(1).get<int>());
  }
  return tau;
}

/// The machine-readable routing record that accompanies a routed circuit.
/// Contains no wall-clock fields, so identical runs serialize identically.
inline nlohmann::json sidecar_json(const std::string& circuit_name,
                                   const std::string& arch_name,
                                   const nlohmann::json& config_echo,
                                   const Circuit& logical,
                                   const TransformResult& res,
                                   const std::string& physical_file) {
  nlohmann::json j;
  j["circuit"] = circuit_name;
  j["arch"] = arch_name;
  j["config"] = config_echo;
  j["physical_file"] = physical_file;
  j["initial_map"] = mapping_to_json(res.initial_map);
  j["final_map"] = mapping_to_json(res.final_map);
  nlohmann::json allocs = nlohmann::json::array();
  for (const AllocEvent& ev : res.allocations) {
    allocs.push_back({{"t", ev.t}, {"q", ev.logical}, {"v", ev.physical}});
  }
  j["allocations"] = allocs;
  nlohmann::json swaps = nlohmann::json::array();
  for (const SwapEvent& ev : res.swaps) {
    swaps.push_back({{"t", ev.t}, {"u", ev.e.first}, {"v", ev.e.second}});
  }
  j["swaps"] = swaps;
  j["added_cnots"] = res.added_cnots();
  j["input_cnots"] = static_cast<long long>(logical.gates.size());
  if (const auto r = r_cnot(logical, res)) {
    j["r_cnot"] = {r->num, r->den};
  } else {
    j["r_cnot"] = nullptr;
  }
  return j;
}

/// Rebuilds a routing record from its sidecar plus the physical circuit.
inline TransformResult result_from_sidecar(const nlohmann::json& j,
                                           Circuit physical, int num_logical,
                                           int num_physical) {
  TransformResult res;
  res.physical = std::move(physical);
  res.initial_map =
      mapping_from_json(j.at("initial_map"), num_logical, num_physical);
  res.final_map =
      mapping_from_json(j.at("final_map"), num_logical, num_physical);
  for (const auto& ev : j.at("allocations")) {
    res.allocations.push_back({ev.at("t").get<long long>(),
                               ev.at("q").get<int>(), ev.at("v").get<int>()});
  }
  for (const auto& ev : j.at("swaps")) {
    res.swaps.push_back({ev.at("t").get<long long>(),
                         make_edge(ev.at("u").get<int>(),
                                   ev.at("v").get<int>())});
  }
  return res;
}

struct RunReport {
  std::string circuit;
  long long input_cnots = 0;
  long long added_cnots = 0;
  long long swaps = 0;
  std::optional<Rational> ratio;
  std::string init;
  nlohmann::json config_echo;
  double wall_ms = 0.0;
  std::string equivalence = "skipped";
  std::string connectivity = "skipped";
  std::string error;  // non-empty when the circuit failed to route

  bool ok() const { return error.empty(); }
};

inline std::string csv_header() {
  return "circuit,input_cnots,added_cnots,swaps,r_cnot,init,k,filter,dfilter,"
         "value,equivalence,connectivity,error";
}

inline std::string csv_row(const RunReport& r) {
  std::ostringstream out;
  out << r.circuit << ',' << r.input_cnots << ',' << r.added_cnots << ','
      << r.swaps << ',';
  if (r.ratio) {
    out << r.ratio->num << '/' << r.ratio->den;
  } else {
    out << "undefined";
  }
  out << ',' << r.init << ',' << r.config_echo.value("k", 0) << ','
      << r.config_echo.value("filter", std::string{}) << ','
      << r.config_echo.value("dfilter", std::string{}) << ','
      << r.config_echo.value("value", std::string{}) << ',' << r.equivalence
      << ',' << r.connectivity << ',' << r.error;
  return out.str();
}

}  // namespace fidls
