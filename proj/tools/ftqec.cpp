// Copyright 2026 The ftqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 success or PASS, 1 FAIL, 2 usage or
// input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ftqec/decoder.hpp"
#include "ftqec/noise.hpp"
#include "ftqec/synth.hpp"
#include "ftqec/verify.hpp"

using namespace ftqec;

namespace {

struct Common {
  std::string report;
  size_t threads = 0;
  uint64_t seed = 1;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

size_t default_threads() {
  if (const char *env = std::getenv("FTQEC_THREADS")) return std::max(1, std::atoi(env));
  return std::max(1u, std::thread::hardware_concurrency());
}

StabilizerCode read_code(const std::string &path) {
  return std::filesystem::path(path).extension() == ".merge" ? load_merge(path) : load_code(path);
}

/// Prints to stdout and, when requested, to the report file.
void emit(const Common &c, const std::string &text) {
  std::cout << text;
  if (!c.report.empty()) {
    std::ofstream f(c.report);
    if (!f) throw UsageError("cannot write report " + c.report);
    f << text;
  }
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

FaultSector sector_arg(const std::string &s) { return parse_fault_sector(s); }

SynthFilter filter_arg(const std::string &s) {
  if (s == "auto") return SynthFilter::AUTO;
  if (s == "agp") return SynthFilter::AGP;
  if (s == "flag-free") return SynthFilter::FLAG_FREE;
  if (s == "detection") return SynthFilter::DETECTION;
  if (s == "none") return SynthFilter::NONE;
  throw UsageError("unknown filter '" + s + "' (auto, agp, flag-free, detection, none)");
}

std::string kind_of(const StabilizerCode &code) {
  if (code.is_self_dual()) return "self-dual CSS";
  return code.is_css() ? "CSS" : "stabilizer";
}

std::string describe_synth(const SynthOutput &out) {
  std::ostringstream s;
  s << "BOUND " << out.stats.bound << "\n";
  s << "STAT candidates=" << out.stats.candidates << " realized=" << out.stats.realized << " valid=" << out.stats.valid
    << " passed=" << out.stats.passed << " distinct=" << out.results.size() << "\n";
  for (size_t i = 0; i < out.results.size(); ++i) {
    const auto &r = out.results[i];
    s << "RESULT " << i << " equivalent=" << r.equivalent << " cnots=" << cnot_count(r.circuit) << " correlated";
    if (r.correlated.empty()) s << " none";
    for (const auto &p : r.correlated) s << " " << p.sparse();
    s << "\n";
  }
  return s.str();
}

void emit_circuits(const SynthOutput &out, const std::string &dir, const std::string &stem) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < out.results.size(); ++i) {
    Circuit c = out.results[i].circuit;
    c.set_name(stem + "_" + std::to_string(i));
    write_file(dir + "/" + c.name() + ".cir", render_circuit(c));
  }
}

int verdict_exit(const VerdictReport &r) { return r.pass ? 0 : 1; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fault-tolerance checks, synthesis and simulation for small-code syndrome extraction"};
  app.set_config("--config", "", "key=value file with default option values");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  common.threads = default_threads();
  app.add_option("--report", common.report, "write the printed report to this file");
  app.add_option("--threads", common.threads, "worker threads (results do not depend on this)");
  app.add_option("--seed", common.seed, "random seed");
  int rc = 0;

  // code check
  auto *code_cmd = app.add_subcommand("code", "code catalog")->require_subcommand(1);
  auto *code_check = code_cmd->add_subcommand("check", "validate a code and find its distance");
  std::string code_file;
  size_t cap = 3;
  std::string expect;
  code_check->add_option("file", code_file, ".code or .merge file")->required();
  code_check->add_option("--distance-cap", cap, "exhaustive distance search up to this weight");
  code_check->add_option("--expect", expect, "expected parameters, e.g. [[7,1,3]]");
  code_check->callback([&] {
    auto code = read_code(code_file);
    auto params = code_parameters(code, cap);
    std::string line = params.str() + " " + kind_of(code) + "\n";
    emit(common, line);
    if (!expect.empty() && expect != params.str()) rc = 1;
  });

  // circuit check
  auto *circ_cmd = app.add_subcommand("circuit", "circuit files")->require_subcommand(1);
  auto *circ_check = circ_cmd->add_subcommand("check", "parse, measure and check locality");
  std::string circ_file, circ_code, circ_layout;
  circ_check->add_option("file", circ_file)->required();
  circ_check->add_option("--code", circ_code)->required();
  circ_check->add_option("--layout", circ_layout);
  circ_check->callback([&] {
    auto c = load_circuit(circ_file);
    auto code = read_code(circ_code);
    c.validate();
    std::ostringstream out;
    auto m = measured_operators(c, code);
    for (const auto &p : m.measured) out << "MEASURES " << p.sparse() << "\n";
    auto prof = round_profile(c);
    out << "STAT cnots=" << cnot_count(c) << " ticks=" << c.num_ticks() << " prep_rounds=" << prof.prep_rounds
        << " cnot_depth=" << prof.cnot_depth << " meas_rounds=" << prof.meas_rounds << "\n";
    if (!circ_layout.empty()) {
      auto v = check_locality(c, load_layout(circ_layout));
      for (const auto &e : v) out << "NONLOCAL location " << e.location + 1 << " " << e.a << " " << e.b << "\n";
      if (!v.empty()) rc = 1;
    }
    out << (rc ? "FAIL\n" : "OK\n");
    emit(common, out.str());
  });

  // faults table
  auto *faults_cmd = app.add_subcommand("faults", "fault enumeration")->require_subcommand(1);
  auto *faults_table = faults_cmd->add_subcommand("table", "TSV of single (or pair) fault outcomes");
  std::string ft_circuit, ft_code, ft_sector = "all";
  size_t ft_order = 1;
  bool ft_idle = false;
  faults_table->add_option("circuit", ft_circuit)->required();
  faults_table->add_option("--code", ft_code)->required();
  faults_table->add_option("--sector", ft_sector, "x, z or all");
  faults_table->add_option("--order", ft_order, "1 or 2")->check(CLI::Range(1, 2));
  faults_table->add_flag("--idle-faults", ft_idle, "insert rest locations for idle qubits");
  faults_table->callback([&] {
    auto c = load_circuit(ft_circuit);
    if (ft_idle) c = with_idle_rests(c);
    auto code = read_code(ft_code);
    auto sector = sector_arg(ft_sector);
    auto rows = full_fault_table(c, sector);
    emit(common, ft_order == 1 ? fault_table_tsv(c, code, rows, sector) : fault_pair_tsv(c, code, rows, sector));
  });

  // verify
  auto *verify_cmd = app.add_subcommand("verify", "fault-tolerance verdicts")->require_subcommand(1);
  auto *v_agp = verify_cmd->add_subcommand("agp", "distance-3 conditions for a circuit family");
  std::vector<std::string> v_circuits;
  std::string v_code;
  bool v_all = false;
  v_agp->add_option("--circuit", v_circuits, "circuits of the family, in order")->required();
  v_agp->add_option("--code", v_code)->required();
  v_agp->add_flag("--all-sectors", v_all, "enumerate every payload together");
  v_agp->callback([&] {
    std::vector<Circuit> fam;
    for (auto &f : v_circuits) fam.push_back(load_circuit(f));
    auto r = verify_agp_distance3(fam, read_code(v_code), {v_all});
    emit(common, r.render());
    rc = verdict_exit(r);
  });

  auto *v_proto = verify_cmd->add_subcommand("protocol", "end-to-end check of a multi-round schedule");
  std::string v_protocol;
  v_proto->add_option("--protocol", v_protocol)->required();
  v_proto->add_flag("--all-sectors", v_all);
  v_proto->callback([&] {
    auto p = load_protocol(v_protocol);
    auto r = verify_protocol(p, load_protocol_code(p), {v_all});
    emit(common, r.render());
    rc = verdict_exit(r);
  });

  auto *v_inv = verify_cmd->add_subcommand("invariant", "two-block induction invariant closure");
  std::string inv_set, inv_circuit, inv_perm, inv_protocol, inv_drop;
  bool inv_dual = false;
  v_inv->add_option("--set", inv_set)->required();
  v_inv->add_option("--protocol", inv_protocol, "takes the circuit, permutation and block code of round 1");
  v_inv->add_option("--circuit", inv_circuit);
  v_inv->add_option("--permutation", inv_perm, "e.g. \"(1 4 2)(3 5 6)(7) swap-blocks\"");
  v_inv->add_option("--code", v_code, "block code");
  v_inv->add_option("--drop", inv_drop, "remove the member with this label first");
  v_inv->add_flag("--dual", inv_dual, "check the Z-error set obtained by exchanging blocks and letters");
  v_inv->callback([&] {
    Circuit c;
    std::vector<size_t> perm;
    std::string code_path = v_code;
    if (!inv_protocol.empty()) {
      auto p = load_protocol(inv_protocol);
      if (p.rounds.empty()) throw UsageError("protocol has no rounds");
      c = p.rounds[0].circuit;
      perm = p.rounds[0].permutation;
      if (code_path.empty()) code_path = p.code_path;
    } else {
      if (inv_circuit.empty()) throw UsageError("give --protocol or --circuit");
      c = load_circuit(inv_circuit);
      if (!inv_perm.empty()) perm = parse_permutation(inv_perm, c.n_data());
    }
    if (code_path.empty()) throw UsageError("give --code");
    auto block = read_code(code_path);
    auto set = load_invariant_set(inv_set);
    if (!inv_drop.empty()) {
      if (!set.contains_label(inv_drop)) throw UsageError("no member labelled " + inv_drop);
      set = set.without(inv_drop);
    }
    auto sector = FaultSector::X_ONLY;
    if (inv_dual) {
      set = dual_invariant_set(set);
      sector = FaultSector::Z_ONLY;
    }
    auto r = verify_invariant_closure(c, perm, set, direct_sum(block, block), sector);
    emit(common, r.render(block.n()));
    rc = verdict_exit(r);
  });

  auto *v_par = verify_cmd->add_subcommand("parity", "two-block syndrome-parity gadget");
  std::string par_table, par_sector = "z";
  v_par->add_option("--circuit", inv_circuit)->required();
  v_par->add_option("--code", v_code, "block code")->required();
  v_par->add_option("--table", par_table, "labelled expected residuals");
  v_par->add_option("--sector", par_sector, "x or z");
  v_par->callback([&] {
    auto c = load_circuit(inv_circuit);
    auto block = read_code(v_code);
    std::vector<std::pair<std::string, PauliOperator>> expected;
    if (!par_table.empty()) expected = load_labeled_table(par_table, block.n());
    auto r = verify_parity_gadget(c, block, expected, sector_arg(par_sector));
    emit(common, r.render(block.n()));
    rc = verdict_exit(r);
  });

  auto *v_o2 = verify_cmd->add_subcommand("order2", "every fault pair is detected or leaves sector weight <= 2");
  v_o2->add_option("--circuit", inv_circuit)->required();
  v_o2->add_option("--code", v_code)->required();
  v_o2->callback([&] {
    auto c = load_circuit(inv_circuit);
    auto r = verify_order2_detection(c, read_code(v_code));
    emit(common, r.render());
    rc = verdict_exit(r);
  });

  // synth
  auto *synth_cmd = app.add_subcommand("synth", "search for extraction circuits")->require_subcommand(1);
  std::string s_code, s_layout, s_emit, s_filter = "auto";
  bool s_keep = false;
  size_t s_max = SIZE_MAX;
  auto add_search = [&](CLI::App *cmd) {
    cmd->add_option("--code", s_code)->required();
    cmd->add_option("--layout", s_layout);
    cmd->add_option("--emit", s_emit, "write each distinct result to this directory");
    cmd->add_option("--filter", s_filter, "auto, agp, flag-free, detection or none");
    cmd->add_option("--max-results", s_max);
    cmd->add_flag("--keep-failing", s_keep, "also list candidates that fail the filter");
  };
  auto fill = [&](SearchOptions &o) {
    if (!s_layout.empty()) o.layout = load_layout(s_layout);
    o.filter = filter_arg(s_filter);
    o.keep_failing = s_keep;
    o.max_results = s_max;
    o.threads = common.threads;
  };

  auto *s_plaq = synth_cmd->add_subcommand("plaquette", "orders of one single-ancilla gadget");
  std::string s_stab;
  size_t s_budget = 1;
  bool s_bracket = false;
  add_search(s_plaq);
  s_plaq->add_option("--stabilizer", s_stab, "e.g. \"Z1 Z2 Z4 Z5\"")->required();
  s_plaq->add_option("--budget", s_budget, "1, or 2 for a dedicated flag");
  s_plaq->add_flag("--bracket-only", s_bracket, "flag gates only after the first and before the last data gate");
  s_plaq->callback([&] {
    auto code = read_code(s_code);
    PlaquetteOptions o;
    fill(o);
    o.ancilla_budget = s_budget;
    o.flag_slots_bracket_only = s_bracket;
    auto out = search_plaquette_orders(code, PauliOperator::parse(s_stab, code.n()), o);
    emit(common, describe_synth(out));
    emit_circuits(out, s_emit, "plaquette");
    rc = out.results.empty() ? 1 : 0;
  });

  auto *s_pair = synth_cmd->add_subcommand("pair", "two mutually flagging syndrome ancillas");
  std::string s_a, s_b;
  add_search(s_pair);
  s_pair->add_option("--a", s_a)->required();
  s_pair->add_option("--b", s_b)->required();
  s_pair->add_flag("--bracket-only", s_bracket, "catch gates only after the first and before the last data gate");
  s_pair->callback([&] {
    auto code = read_code(s_code);
    PairOptions o;
    fill(o);
    o.catch_bracket_only = s_bracket;
    auto out =
        search_mutual_flag_pair(code, PauliOperator::parse(s_a, code.n()), PauliOperator::parse(s_b, code.n()), o);
    emit(common, describe_synth(out));
    emit_circuits(out, s_emit, "pair");
    rc = out.results.empty() ? 1 : 0;
  });

  auto *s_par = synth_cmd->add_subcommand("parallel", "several syndromes at once within a depth bound");
  std::vector<std::string> s_stabs, s_catches;
  size_t s_depth = SIZE_MAX;
  add_search(s_par);
  s_par->add_option("--stabilizer", s_stabs, "repeat once per syndrome ancilla")->required();
  s_par->add_option("--max-depth", s_depth, "two-qubit-gate ticks");
  s_par->add_option("--catch", s_catches, "catch gate between ancillas i,j (0-based); repeat per gate");
  s_par->callback([&] {
    auto code = read_code(s_code);
    ParallelOptions o;
    fill(o);
    o.max_depth = s_depth;
    for (auto &c : s_catches) {
      auto comma = c.find(',');
      if (comma == std::string::npos) throw UsageError("--catch expects i,j");
      o.catches.emplace_back(std::stoul(c.substr(0, comma)), std::stoul(c.substr(comma + 1)));
    }
    std::vector<PauliOperator> stabs;
    for (auto &s : s_stabs) stabs.push_back(PauliOperator::parse(s, code.n()));
    auto out = search_parallel_schedule(code, stabs, o);
    emit(common, describe_synth(out));
    emit_circuits(out, s_emit, "parallel");
    rc = out.results.empty() ? 1 : 0;
  });

  auto *s_ff = synth_cmd->add_subcommand("flag-free", "unflagged one-ancilla-per-generator schedule");
  std::string s_name = "flag_free";
  s_ff->add_option("--code", s_code)->required();
  s_ff->add_option("--emit", s_emit, "write the two rounds to this directory");
  s_ff->add_option("--name", s_name);
  s_ff->callback([&] {
    auto code = read_code(s_code);
    auto out = search_flag_free_schedule(code, s_name);
    std::ostringstream s;
    s << "BOUND " << out.stats.bound << "\n";
    s << "STAT classes_tried=" << out.stats.realized << " found=" << (out.found ? 1 : 0) << "\n";
    for (size_t g = 0; g < out.orders.size(); ++g) {
      s << "ORDER " << code.generators()[g].sparse() << " :";
      for (size_t q : out.orders[g]) s << " " << q + 1;
      s << "\n";
    }
    emit(common, s.str());
    if (out.found && !s_emit.empty()) {
      std::filesystem::create_directories(s_emit);
      for (auto &r : out.protocol.rounds) write_file(s_emit + "/" + r.circuit.name() + ".cir", render_circuit(r.circuit));
    }
    rc = out.found ? 0 : 1;
  });

  auto *s_two = synth_cmd->add_subcommand("two-block", "zero-extra-qubit two-block round");
  size_t tb_n = 0, tb_collector = 0;
  std::vector<size_t> tb_uncompute;
  std::string tb_name = "two_block";
  s_two->add_option("--n", tb_n, "block size")->required();
  s_two->add_option("--collector", tb_collector, "1-based collector qubit")->required();
  s_two->add_option("--uncompute", tb_uncompute, "1-based support qubits in uncompute order")->required()->delimiter(',');
  s_two->add_option("--name", tb_name);
  s_two->add_option("--emit", s_emit, "write the circuit to this directory");
  s_two->callback([&] {
    if (tb_collector == 0) throw UsageError("qubits are 1-based");
    std::vector<size_t> un;
    for (size_t q : tb_uncompute) {
      if (q == 0) throw UsageError("qubits are 1-based");
      un.push_back(q - 1);
    }
    auto c = zero_ancilla_round(tb_n, tb_collector - 1, un, tb_name);
    std::ostringstream s;
    s << "STAT cnots=" << cnot_count(c) << " ticks=" << c.num_ticks() << "\n";
    emit(common, s.str());
    if (!s_emit.empty()) {
      std::filesystem::create_directories(s_emit);
      write_file(s_emit + "/" + tb_name + ".cir", render_circuit(c));
    } else {
      std::cout << render_circuit(c);
    }
  });

  // decoder
  auto *dec_cmd = app.add_subcommand("decoder", "decode tables")->require_subcommand(1);
  std::string d_code, d_protocol, d_out;
  std::vector<std::string> d_circuits;
  auto add_dec = [&](CLI::App *cmd) {
    cmd->add_option("--code", d_code, "code for a flag-free table (or the code of --circuit)");
    cmd->add_option("--circuit", d_circuits, "build from a passing AGP verdict on these circuits");
    cmd->add_option("--protocol", d_protocol, "build from a passing protocol verdict");
    cmd->add_option("--out", d_out, "TSV file");
  };
  auto build_table = [&]() -> std::pair<DecodeTable, StabilizerCode> {
    if (!d_protocol.empty()) {
      auto p = load_protocol(d_protocol);
      auto code = load_protocol_code(p);
      auto r = verify_protocol(p, code);
      if (!r.pass) throw std::runtime_error("protocol verdict failed; no flag table");
      return {build_flag_table(r, code), code};
    }
    if (d_code.empty()) throw UsageError("give --code or --protocol");
    auto code = read_code(d_code);
    if (d_circuits.empty()) return {build_lookup(code), code};
    std::vector<Circuit> fam;
    for (auto &f : d_circuits) fam.push_back(load_circuit(f));
    auto r = verify_agp_distance3(fam, code);
    if (!r.pass) throw std::runtime_error("AGP verdict failed; no flag table");
    return {build_flag_table(r, code), code};
  };
  auto *d_build = dec_cmd->add_subcommand("build", "build a table and summarize it");
  add_dec(d_build);
  d_build->callback([&] {
    auto [t, code] = build_table();
    std::ostringstream s;
    for (const auto &p : t.parts) {
      s << "PART " << (p.sector == Sector::X ? "X" : p.sector == Sector::Z ? "Z" : "FULL")
        << " defaults=" << p.fallback.size() << " flagged_entries=" << p.entries.size() << "\n";
    }
    emit(common, s.str());
    if (!d_out.empty()) write_file(d_out, export_table(t));
  });
  auto *d_export = dec_cmd->add_subcommand("export", "write the table as sorted TSV");
  add_dec(d_export);
  d_export->callback([&] {
    auto [t, code] = build_table();
    auto text = export_table(t);
    if (d_out.empty()) {
      emit(common, text);
    } else {
      write_file(d_out, text);
    }
  });

  // sim
  auto *sim_cmd = app.add_subcommand("sim", "Monte Carlo detection experiments")->require_subcommand(1);
  std::string sim_protocol, sim_out, sim_parallel, sim_sequential, sim_idle_out;
  std::vector<double> sim_p{1e-3}, sim_r{0};
  uint64_t sim_shots = 100000;
  size_t sim_meas_ticks = 1;
  auto add_sim = [&](CLI::App *cmd) {
    cmd->add_option("--p", sim_p, "CNOT error rates")->delimiter(',');
    cmd->add_option("--rest-ratio", sim_r, "idle rate ratios")->delimiter(',');
    cmd->add_option("--shots", sim_shots)->check(CLI::PositiveNumber);
    cmd->add_option("--meas-ticks", sim_meas_ticks, "idle exposure of a measurement tick")->check(CLI::PositiveNumber);
    cmd->add_option("--out", sim_out, "CSV file");
  };
  auto sim_compile = [](const std::string &path) {
    auto p = load_protocol(path);
    return CompiledProtocol(p, load_protocol_code(p));
  };
  auto *sim_run = sim_cmd->add_subcommand("run", "sweep one protocol");
  add_sim(sim_run);
  sim_run->add_option("--protocol", sim_protocol)->required();
  sim_run->callback([&] {
    auto cp = sim_compile(sim_protocol);
    std::string csv = csv_header();
    std::ostringstream s;
    for (double r : sim_r) {
      std::vector<double> rates;
      for (double p : sim_p) {
        auto e = cp.run(NoiseParams::depolarizing(p, r, sim_meas_ticks), sim_shots, common.seed, common.threads);
        csv += csv_row(e);
        rates.push_back(e.logical_rate());
      }
      if (sim_p.size() >= 2) s << "SLOPE protocol=" << cp.name() << " r=" << r << " " << loglog_slope(sim_p, rates) << "\n";
    }
    if (sim_out.empty()) {
      std::cout << csv;
    } else {
      write_file(sim_out, csv);
    }
    emit(common, s.str());
  });
  auto *sim_cmp = sim_cmd->add_subcommand("compare", "parallel against sequential extraction");
  add_sim(sim_cmp);
  sim_cmp->add_option("--parallel", sim_parallel)->required();
  sim_cmp->add_option("--sequential", sim_sequential)->required();
  sim_cmp->callback([&] {
    auto par = sim_compile(sim_parallel), seq = sim_compile(sim_sequential);
    auto cmp = compare_parallel_vs_sequential(par, seq, sim_p, sim_r, sim_shots, common.seed, common.threads,
                                              sim_meas_ticks);
    std::string csv = csv_header();
    for (auto &e : cmp.runs) csv += csv_row(e);
    if (sim_out.empty()) {
      std::cout << csv;
    } else {
      write_file(sim_out, csv);
    }
    std::ostringstream s;
    for (auto &m : cmp.idle) {
      s << "IDLE protocol=" << m.protocol << " r=" << m.r << " syndromes=" << m.syndromes << " ticks=" << m.ticks
        << " idle_locations=" << m.idle_locations << " idle_locations_per_syndrome="
        << m.idle_locations / double(std::max<size_t>(1, m.syndromes)) << " idle_fault_weight=" << m.idle_fault_weight
        << "\n";
    }
    emit(common, s.str());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
