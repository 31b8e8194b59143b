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

// Command-line driver: route one circuit, benchmark a directory, or
// re-verify a routed result against its sidecar.

#include "fidls/fidls.hpp"
#include "fidls/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string arch_spec = "tokyo";
  std::string data_dir = "data";
  std::string init = "topgraph";
  int k = 3;
  std::string filter = "q01";
  std::string dfilter = "d0";
  std::string value = "g";
  long long embed_budget = 10'000'000;
  unsigned seed = 0;  // reserved; routing is deterministic
  bool no_verify = false;
  std::string out_dir;
  std::string format = "csv";
  double timeout_s = 0.0;
};

void add_config_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--arch", o.arch_spec,
                  "tokyo|rochester|sycamore|grid:RxC|file:PATH")
      ->capture_default_str();
  cmd->add_option("--data-dir", o.data_dir, "directory with arch/ data files")
      ->capture_default_str();
  cmd->add_option("--init", o.init,
                  "topgraph|wgtgraph|naive|empty|fixed:q=v,...")
      ->capture_default_str();
  cmd->add_option("--k", o.k, "max swaps per action")->capture_default_str();
  cmd->add_option("--filter", o.filter, "none|q0|q01|q01x")
      ->capture_default_str();
  cmd->add_option("--dfilter", o.dfilter, "off|dS[:GAMMA]")
      ->capture_default_str();
  cmd->add_option("--value", o.value, "g|dS:GAMMA")->capture_default_str();
  cmd->add_option("--embed-budget", o.embed_budget,
                  "backtracking budget for subgraph embedding")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "reserved (runs are deterministic)");
  cmd->add_flag("--no-verify", o.no_verify, "skip output verification");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--format", o.format, "csv|json")->capture_default_str();
  cmd->add_option("--timeout", o.timeout_s,
                  "per-circuit routing time limit in seconds (0 = none)");
}

fidls::ArchGraph resolve_arch(const CommonOpts& o) {
  const std::string& s = o.arch_spec;
  if (s.rfind("file:", 0) == 0) {
    return fidls::load_arch_file(s.substr(5));
  }
  if (s.rfind("grid:", 0) == 0) {
    const auto body = s.substr(5);
    const auto x = body.find('x');
    if (x == std::string::npos) {
      throw fidls::ValidationError("grid spec must look like grid:RxC");
    }
    return fidls::grid_arch(std::stoi(body.substr(0, x)),
                            std::stoi(body.substr(x + 1)));
  }
  return fidls::load_arch_file(o.data_dir + "/arch/" + s + ".edges");
}

fidls::SearchConfig resolve_search_config(const CommonOpts& o) {
  fidls::SearchConfig cfg;
  cfg.k = o.k;
  cfg.q_filter = fidls::parse_filter(o.filter);
  cfg.d_filter = fidls::parse_dfilter(o.dfilter);
  cfg.value = fidls::parse_value(o.value);
  cfg.time_limit_seconds = o.timeout_s;
  return cfg;
}

fidls::QubitMapping resolve_initial(const std::string& spec,
                                    const fidls::Circuit& c,
                                    const fidls::ArchGraph& ag,
                                    long long embed_budget) {
  const fidls::EmbedBudget budget{embed_budget};
  if (spec == "topgraph") {
    return fidls::topgraph_mapping(c, ag, budget, &std::cerr);
  }
  if (spec == "wgtgraph") {
    return fidls::wgtgraph_mapping(c, ag, budget, &std::cerr);
  }
  if (spec == "naive") {
    return fidls::naive_mapping(c, ag);
  }
  if (spec == "empty") {
    return fidls::empty_mapping(c, ag);
  }
  if (spec.rfind("fixed:", 0) == 0) {
    fidls::QubitMapping tau(c.num_qubits, ag.num_nodes());
    std::istringstream in(spec.substr(6));
    std::string pair;
    while (std::getline(in, pair, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) {
        throw fidls::ValidationError(
            "fixed mapping entries must look like q=v");
      }
      tau.assign(std::stoi(pair.substr(0, eq)), std::stoi(pair.substr(eq + 1)));
    }
    return tau;
  }
  throw fidls::ValidationError("unknown initial mapping '" + spec + "'");
}

json config_echo(const CommonOpts& o) {
  return json{{"k", o.k},
              {"filter", o.filter},
              {"dfilter", o.dfilter},
              {"value", o.value},
              {"init", o.init},
              {"embed_budget", o.embed_budget},
              {"arch", o.arch_spec}};
}

fidls::RunReport route_one(const fs::path& circuit_path, const CommonOpts& o,
                           const fidls::ArchGraph& ag,
                           bool write_outputs) {
  fidls::RunReport rep;
  rep.circuit = circuit_path.stem().string();
  rep.init = o.init;
  rep.config_echo = config_echo(o);
  try {
    const fidls::Circuit logical =
        fidls::parse_circuit_file(circuit_path.string());
    rep.input_cnots = static_cast<long long>(logical.gates.size());
    const auto cfg = resolve_search_config(o);
    const auto initial =
        resolve_initial(o.init, logical, ag, o.embed_budget);
    const fidls::TransformResult res =
        fidls::transform(logical, ag, initial, cfg);
    rep.added_cnots = res.added_cnots();
    rep.swaps = res.swap_count();
    rep.ratio = fidls::r_cnot(logical, res);
    rep.wall_ms = res.runtime_seconds * 1000.0;
    if (!o.no_verify) {
      const auto eq = fidls::check_equivalence(logical, res, ag);
      const auto conn = fidls::check_connectivity(res.physical, ag);
      rep.equivalence = eq.pass ? "PASS" : "FAIL: " + eq.detail;
      rep.connectivity = conn.pass ? "PASS" : "FAIL: " + conn.detail;
      if (!eq.pass || !conn.pass) {
        rep.error = "verification failed";
      }
    }
    if (write_outputs && !o.out_dir.empty()) {
      fs::create_directories(o.out_dir);
      const std::string stem = rep.circuit;
      const std::string qasm_name = stem + ".routed.qasm";
      std::ofstream qasm(fs::path(o.out_dir) / qasm_name);
      qasm << fidls::to_qasm(res.physical);
      std::ofstream side(fs::path(o.out_dir) / (stem + ".sidecar.json"));
      side << std::setw(2)
           << fidls::sidecar_json(rep.circuit, o.arch_spec, config_echo(o),
                                  logical, res, qasm_name)
           << '\n';
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

void print_report_line(const fidls::RunReport& rep) {
  std::ostringstream line;
  line << rep.circuit << ": ";
  if (!rep.ok()) {
    line << "ERROR (" << rep.error << ")";
  } else {
    line << "input=" << rep.input_cnots << " added=" << rep.added_cnots
         << " swaps=" << rep.swaps << " r_cnot=";
    if (rep.ratio) {
      line << std::fixed << std::setprecision(4)
           << static_cast<double>(rep.ratio->num) /
                  static_cast<double>(rep.ratio->den);
    } else {
      line << "undefined";
    }
    line << " equivalence=" << rep.equivalence
         << " connectivity=" << rep.connectivity << " time_ms=" << std::fixed
         << std::setprecision(1) << rep.wall_ms;
  }
  std::cout << line.str() << std::endl;
}

int cmd_route(const std::string& circuit, const CommonOpts& o) {
  const fidls::ArchGraph ag = resolve_arch(o);
  const fidls::RunReport rep = route_one(circuit, o, ag, true);
  print_report_line(rep);
  return rep.ok() ? 0 : 1;
}

std::string size_category(long long cnots) {
  if (cnots < 100) {
    return "small";
  }
  if (cnots < 1000) {
    return "medium";
  }
  return "large";
}

int cmd_bench(const std::string& dir, int jobs, const CommonOpts& o) {
  const fidls::ArchGraph ag = resolve_arch(o);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .qasm circuits under " << dir << "\n";
    return 1;
  }

  std::vector<fidls::RunReport> reports(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= files.size()) {
        return;
      }
      reports[i] = route_one(files[i], o, ag, !o.out_dir.empty());
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  // Aggregate: I-index over the whole set and per size category.
  std::map<std::string, std::vector<std::pair<long long, long long>>> groups;
  std::vector<std::pair<long long, long long>> all;
  int failures = 0;
  for (const auto& rep : reports) {
    print_report_line(rep);
    if (!rep.ok()) {
      ++failures;
      continue;
    }
    if (rep.input_cnots == 0) {
      continue;
    }
    const auto in_out = std::pair<long long, long long>{
        rep.input_cnots, rep.input_cnots + rep.added_cnots};
    groups[size_category(rep.input_cnots)].push_back(in_out);
    all.push_back(in_out);
  }

  json summary;
  summary["config"] = config_echo(o);
  summary["circuits"] = static_cast<long long>(files.size());
  summary["failures"] = failures;
  auto emit_group = [&](const std::string& name,
                        const std::vector<std::pair<long long, long long>>&
                            counts) {
    const auto idx = fidls::i_cnot(counts);
    json g;
    g["circuits"] = static_cast<long long>(counts.size());
    if (idx) {
      g["i_index"] = static_cast<double>(idx->num) /
                     static_cast<double>(idx->den);
      g["i_index_exact"] = {idx->num, idx->den};
    } else {
      g["i_index"] = nullptr;
    }
    summary["groups"][name] = g;
    std::cout << "[" << name << "] circuits=" << counts.size() << " i_index=";
    if (idx) {
      std::cout << std::fixed << std::setprecision(4)
                << static_cast<double>(idx->num) /
                       static_cast<double>(idx->den);
    } else {
      std::cout << "undefined";
    }
    std::cout << std::endl;
  };
  for (const auto& [name, counts] : groups) {
    emit_group(name, counts);
  }
  emit_group("all", all);

  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    if (o.format == "json") {
      json rows = json::array();
      for (const auto& rep : reports) {
        json row;
        row["circuit"] = rep.circuit;
        row["input_cnots"] = rep.input_cnots;
        row["added_cnots"] = rep.added_cnots;
        row["swaps"] = rep.swaps;
        if (rep.ratio) {
          row["r_cnot"] = {rep.ratio->num, rep.ratio->den};
        } else {
          row["r_cnot"] = nullptr;
        }
        row["equivalence"] = rep.equivalence;
        row["connectivity"] = rep.connectivity;
        row["error"] = rep.error;
        rows.push_back(row);
      }
      json doc;
      doc["rows"] = rows;
      doc["summary"] = summary;
      std::ofstream out(fs::path(o.out_dir) / "bench.json");
      out << std::setw(2) << doc << '\n';
    } else {
      std::ofstream out(fs::path(o.out_dir) / "bench.csv");
      out << fidls::csv_header() << '\n';
      for (const auto& rep : reports) {
        out << fidls::csv_row(rep) << '\n';
      }
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_verify(const std::string& circuit, const std::string& sidecar,
               const std::string& physical_override, const CommonOpts& o) {
  const fidls::ArchGraph ag = resolve_arch(o);
  const fidls::Circuit logical = fidls::parse_circuit_file(circuit);

  std::ifstream side_in(sidecar);
  if (!side_in) {
    std::cerr << "cannot open sidecar " << sidecar << "\n";
    return 1;
  }
  const json j = json::parse(side_in);

  fs::path physical_path = physical_override.empty()
                               ? fs::path(sidecar).parent_path() /
                                     j.at("physical_file").get<std::string>()
                               : fs::path(physical_override);
  const fidls::Circuit physical =
      fidls::parse_circuit_file(physical_path.string());
  const fidls::TransformResult res = fidls::result_from_sidecar(
      j, physical, logical.num_qubits, ag.num_nodes());

  bool ok = true;
  // Sidecar integrity: the swap trace must match the gate stream.
  const long long added = j.at("added_cnots").get<long long>();
  if (added != 3 * res.swap_count() ||
      added != static_cast<long long>(physical.gates.size()) -
                   static_cast<long long>(logical.gates.size())) {
    std::cout << "sidecar: FAIL (added_cnots disagrees with the swap trace "
                 "or the circuits)\n";
    ok = false;
  }
  for (const fidls::SwapEvent& ev : res.swaps) {
    const auto t = static_cast<std::size_t>(ev.t);
    if (t + 2 >= physical.gates.size() + 1) {
      // fallthrough to the explicit pattern check below
    }
    const bool pattern_ok =
        t + 2 < physical.gates.size() &&
        physical.gates[t] == fidls::Gate{ev.e.first, ev.e.second} &&
        physical.gates[t + 1] == fidls::Gate{ev.e.second, ev.e.first} &&
        physical.gates[t + 2] == fidls::Gate{ev.e.first, ev.e.second};
    if (!pattern_ok) {
      std::cout << "sidecar: FAIL (swap at t=" << ev.t
                << " does not match the gate stream)\n";
      ok = false;
      break;
    }
  }

  const auto conn = fidls::check_connectivity(physical, ag);
  std::cout << "connectivity: " << (conn.pass ? "PASS" : "FAIL " + conn.detail)
            << "\n";
  const auto eq = fidls::check_equivalence(logical, res, ag);
  std::cout << "equivalence: " << (eq.pass ? "PASS" : "FAIL " + eq.detail)
            << "\n";
  return (ok && conn.pass && eq.pass) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNOT-circuit router for constrained qubit connectivity"};
  app.require_subcommand(1);

  CommonOpts route_opts;
  std::string route_circuit;
  auto* route = app.add_subcommand("route", "route one circuit");
  route->add_option("--circuit", route_circuit, "input .qasm file")
      ->required();
  add_config_flags(route, route_opts);

  CommonOpts bench_opts;
  std::string bench_dir;
  int bench_jobs = 1;
  auto* bench = app.add_subcommand("bench", "route a directory of circuits");
  bench->add_option("--circuits", bench_dir, "directory of .qasm files")
      ->required();
  bench->add_option("--jobs", bench_jobs, "parallel workers")
      ->capture_default_str();
  add_config_flags(bench, bench_opts);

  CommonOpts verify_opts;
  std::string verify_circuit;
  std::string verify_sidecar;
  std::string verify_physical;
  auto* verify = app.add_subcommand("verify", "re-check a routed result");
  verify->add_option("--circuit", verify_circuit, "logical .qasm file")
      ->required();
  verify->add_option("--sidecar", verify_sidecar, "sidecar .json file")
      ->required();
  verify->add_option("--physical", verify_physical,
                     "routed .qasm (default: sidecar's physical_file)");
  add_config_flags(verify, verify_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (route->parsed()) {
      return cmd_route(route_circuit, route_opts);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_dir, bench_jobs, bench_opts);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_circuit, verify_sidecar, verify_physical,
                        verify_opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
