// Copyright 2026 The qutrit-ccphase Authors
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

// Batch front end. Primary output goes to --out (or stdout) and depends only
// on the arguments and the device file; timestamps live in <out>.log.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical check failed.

#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ccphase/ccphase.hpp"

namespace ccphase::cli {

inline constexpr int kOutputSchemaVersion = 1;

using nlohmann::json;

struct Globals {
  std::string device_path;
  std::string chain_text;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<double> modulation;
  std::string modulation_scope = "whole-gate";
  std::string out_path;
};

struct Context {
  Globals g;
  DeviceModel model;
  std::array<int, 3> chain{};
  std::vector<std::string> log;

  NoiseOptions noise() const {
    NoiseOptions o;
    if (g.modulation) {
      o.modulation = ModulationDephasingPolicy{*g.modulation, g.modulation_scope == "active-windows" ? ModulationScope::ActiveWindows
                                                                                                   : ModulationScope::WholeGate};
      o.modulation->validate();
    }
    return o;
  }
};

inline std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

inline std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

inline std::array<int, 3> parse_chain(const std::string& text) {
  std::array<int, 3> c{};
  std::istringstream in(text);
  std::string tok;
  int k = 0;
  while (std::getline(in, tok, ',')) {
    if (k == 3) throw ValidationError("--chain takes three comma-separated qubit ids");
    try {
      std::size_t used = 0;
      c[static_cast<std::size_t>(k)] = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ValidationError("--chain: '" + tok + "' is not a qubit id");
    }
    ++k;
  }
  if (k != 3) throw ValidationError("--chain takes three comma-separated qubit ids");
  return c;
}

inline DeviceModel resolve_device(const std::string& flag) {
  if (!flag.empty()) return load_device(flag);
  if (const char* env = std::getenv("CCPHASE_DEVICE"); env && *env) return load_device(env);
  return DeviceModel::builtin();
}

inline json envelope(const std::string& kind) { return {{"schema", "ccphase." + kind}, {"schema_version", kOutputSchemaVersion}}; }

inline json sequence_json(const PulseSequence& seq) {
  json j;
  j["theta"] = seq.theta;
  j["combo"] = seq.combo.label();
  j["pulses"] = json::array();
  for (const auto& p : seq.pulses)
    j["pulses"].push_back(
        {{"edge", {p.edge[0], p.edge[1]}}, {"interaction", gate_name(p.subspace)}, {"flux_phase", p.flux_phase}, {"duration_ns", p.duration_ns}});
  j["rz_corrections"] = seq.rz_corrections;
  j["conditional_correction"] = seq.conditional_correction();
  return j;
}

inline json fit_json(const PhaseFit& f) { return {{"offset", f.offset}, {"amplitude", f.amplitude}, {"mean", f.mean}, {"rms", f.rms}}; }

inline json report_json(const BenchmarkReport& r) {
  json j;
  j["depths"] = r.depths;
  j["fidelity"] = r.fidelity;
  j["fidelity_se"] = r.fidelity_se;
  j["composite"] = r.composite;
  j["per_gate_bound"] = r.per_gate_bound;
  j["excluded_terms"] = r.excluded_terms;
  j["terms"] = json::array();
  for (const auto& t : r.terms)
    j["terms"].push_back({{"term", t.term},
                          {"mean_expectation", t.mean_expectation},
                          {"amplitude", t.amplitude},
                          {"decay", t.decay},
                          {"decay_se", t.decay_se},
                          {"included", t.included}});
  return j;
}

inline std::string decay_csv(const BenchmarkReport& r) {
  std::ostringstream s;
  s << std::setprecision(10) << "term,depth,mean_expectation,fit\n";
  for (const auto& t : r.terms)
    for (std::size_t d = 0; d < r.depths.size(); ++d)
      s << t.term << ',' << r.depths[d] << ',' << t.mean_expectation[d] << ',' << t.amplitude * std::pow(t.decay, r.depths[d]) << '\n';
  return s.str();
}

inline std::string landscape_csv(const std::vector<LandscapePoint>& pts) {
  std::ostringstream s;
  s << std::setprecision(17) << "beta,gamma,expectation,shots\n";
  for (const auto& p : pts) s << p.beta << ',' << p.gamma << ',' << p.expectation << ',' << p.shots << '\n';
  return s.str();
}

inline std::vector<LandscapePoint> read_landscape_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open landscape file " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("beta,gamma,expectation", 0) != 0)
    throw ValidationError(path + ": expected header beta,gamma,expectation,shots");
  std::vector<LandscapePoint> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f[4];
    for (auto& x : f) std::getline(ls, x, ',');
    try {
      out.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), f[3].empty() ? 0L : std::stol(f[3])});
    } catch (const std::logic_error&) {
      throw ValidationError(path + ": malformed row " + std::to_string(row));
    }
  }
  return out;
}

// Cell text "<re><+/-im>i|ket>" for one truth-table checkpoint.
inline std::string ket_cell(const Checkpoint& c) {
  // Rounded first so that -0.0000 prints as 0.0000.
  auto r4 = [](double v) { return std::round(v * 1e4) / 1e4 + 0.0; };
  const double re = r4(c.amplitude.real()), im = r4(c.amplitude.imag());
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << re << (im < 0 ? "" : "+") << im << "i|" << basis_label(c.basis, 3, 3) << ">";
  return s.str();
}

inline int qubit_index_of(const std::string& bits) {
  if (bits.size() != 3 || bits.find_first_not_of("01") != std::string::npos) throw ValidationError("input '" + bits + "' must be a 3-bit string");
  return 4 * (bits[0] - '0') + 2 * (bits[1] - '0') + (bits[2] - '0');
}

class Emitter {
 public:
  Emitter(const Globals& g, std::ostream& out) : g_(g), out_(out) {}

  void write(const std::string& text) {
    if (g_.out_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(g_.out_path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + g_.out_path);
    f << text;
  }

  void write(const json& j) { write(j.dump(2) + "\n"); }

 private:
  const Globals& g_;
  std::ostream& out_;
};

inline void write_log(const Globals& g, const std::vector<std::string>& args, const std::vector<std::string>& lines,
                      const std::string& started, int code) {
  if (g.out_path.empty()) return;
  std::ofstream f(g.out_path + ".log");
  if (!f) return;
  f << "started " << started << "\n";
  f << "args";
  for (const auto& a : args) f << ' ' << a;
  f << "\n";
  for (const auto& l : lines) f << l << "\n";
  f << "finished " << timestamp() << " exit " << code << "\n";
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string started = timestamp();
  Context ctx;
  CLI::App app{"CCPHASE synthesis, simulation and benchmarking", "ccphase"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_option("--device", ctx.g.device_path, "Device JSON (default: $CCPHASE_DEVICE, then the built-in model)");
  app.add_option("--chain", ctx.g.chain_text, "Three qubit ids q0,q1,q2 (default: the device's first chain)");
  app.add_option("--seed", ctx.g.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", ctx.g.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--modulation-dephasing", ctx.g.modulation, "T2 scale for flux-modulated qubits, e.g. 0.5");
  app.add_option("--modulation-scope", ctx.g.modulation_scope, "whole-gate or active-windows")
      ->check(CLI::IsMember({"whole-gate", "active-windows"}))
      ->capture_default_str();
  app.add_option("--out", ctx.g.out_path, "Primary output file (default stdout)");

  // synth
  double synth_theta = 0.0;
  std::string synth_combo;
  auto* synth = app.add_subcommand("synth", "Synthesize the four-pulse CCPHASE sequence");
  synth->add_option("--theta", synth_theta, "Target phase (rad)")->required();
  synth->add_option("--combo", synth_combo, "Interaction types FIRST,SECOND (default: from the device chain)");

  // truth-table
  double tt_theta = kPi / 2;
  std::string tt_combo = "20,02";
  std::vector<std::string> tt_inputs{"000", "001", "010", "011", "100", "101", "110", "111"};
  auto* tt = app.add_subcommand("truth-table", "Basis-state trajectories through the four pulses (CSV)");
  tt->add_option("--theta", tt_theta, "Target phase (rad)")->capture_default_str();
  tt->add_option("--combo", tt_combo, "Interaction types FIRST,SECOND")->capture_default_str();
  tt->add_option("--inputs", tt_inputs, "Comma-separated 3-bit inputs")->delimiter(',');

  // calibrate
  double cal_theta = kPi;
  std::vector<double> inject;
  double cal_kappa = 0.0;
  bool cal_noisy = false;
  CalibrationOptions cal;
  auto* calc = app.add_subcommand("calibrate", "Ramsey calibration of the phases B, C, D, E");
  calc->add_option("--theta", cal_theta, "Target phase (rad)")->capture_default_str();
  calc->add_option("--inject", inject, "Injected errors B,C,D,E (rad)")->delimiter(',')->expected(4);
  calc->add_option("--cross-coupling", cal_kappa, "Leak of the B offset into the central qubit's phase")->capture_default_str();
  calc->add_option("--shots", cal.shots, "Shots per scan point (0 = exact)")->capture_default_str();
  calc->add_option("--passes", cal.passes, "Calibration passes")->capture_default_str();
  calc->add_option("--points", cal.scan_points, "Scan points per Ramsey curve")->capture_default_str();
  calc->add_flag("--noisy", cal_noisy, "Use the device decoherence model");

  // bench
  auto* bench = app.add_subcommand("bench", "Cycle benchmarking or process tomography");
  bench->require_subcommand(1);
  std::string bench_gate = "native";
  double bench_theta = kPi, bench_p = 0.05;
  CBConfig cb;
  QptConfig qc;
  std::string csv_path;
  auto* cbc = bench->add_subcommand("cb", "Cycle benchmarking");
  auto* qptc = bench->add_subcommand("qpt", "Process tomography");
  for (auto* sc : {cbc, qptc}) {
    sc->add_option("--gate", bench_gate, "native, decomposed or depolarizing")
        ->check(CLI::IsMember({"native", "decomposed", "depolarizing"}))
        ->capture_default_str();
    sc->add_option("--theta", bench_theta, "Target phase (rad)")->capture_default_str();
    sc->add_option("--p", bench_p, "Global depolarizing parameter for --gate depolarizing")->capture_default_str();
  }
  cbc->add_option("--depths", cb.depths, "Cycle depths")->delimiter(',');
  cbc->add_option("--randomizations", cb.randomizations, "Randomizations per depth")->capture_default_str();
  cbc->add_option("--shots", cb.shots, "Shots per sequence (0 = exact)")->capture_default_str();
  cbc->add_flag("--composite", cb.composite, "Benchmark CCPHASE(theta) CCPHASE(2pi - theta) and report the square root");
  cbc->add_option("--csv", csv_path, "Also write the decay table as CSV");
  qptc->add_option("--shots", qc.shots, "Shots per input and setting (0 = exact)")->capture_default_str();

  // decompose
  double dec_theta = kPi;
  int dec_level = 1;
  auto* dec = app.add_subcommand("decompose", "CPHASE/CNOT decomposition of CCPHASE(theta)");
  dec->add_option("--theta", dec_theta, "Target phase (rad)")->capture_default_str();
  dec->add_option("--level", dec_level, "1 = CPHASE+CNOT, 2 = CZ+RX+RZ")->check(CLI::IsMember({1, 2}))->capture_default_str();

  // qaoa
  auto* qaoa = app.add_subcommand("qaoa", "Depth-1 QAOA for one MAX-3-SAT clause");
  qaoa->require_subcommand(1);
  std::string clause_text = "x0|x1|x2", backend_text = "ideal";
  int grid = 101, random_count = 0;
  long qshots = 2500;
  double lo = -kPi, hi = kPi;
  auto* land = qaoa->add_subcommand("landscape", "Sweep <C> over (beta, gamma) (CSV)");
  land->add_option("--clause", clause_text, "Clause such as x0|~x1|x2")->capture_default_str();
  land->add_option("--backend", backend_text, "ideal, native or compiled")
      ->check(CLI::IsMember({"ideal", "native", "compiled"}))
      ->capture_default_str();
  land->add_option("--grid", grid, "Grid points per axis")->capture_default_str();
  land->add_option("--random", random_count, "Random search with this many configurations instead of a grid");
  land->add_option("--shots", qshots, "Shots per configuration (0 = exact)")->capture_default_str();
  land->add_option("--min", lo, "Lower end of both parameter ranges")->capture_default_str();
  land->add_option("--max", hi, "Upper end of both parameter ranges")->capture_default_str();
  std::string land_a, land_b;
  auto* cmp = qaoa->add_subcommand("compare", "Pearson correlation and minima of two landscapes (JSON)");
  cmp->add_option("a", land_a, "Reference landscape CSV")->required();
  cmp->add_option("b", land_b, "Compared landscape CSV")->required();

  // device
  auto* dev = app.add_subcommand("device", "Device model");
  dev->require_subcommand(1);
  auto* show = dev->add_subcommand("show", "Print the device model as JSON");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    // Help requests print to `out` and succeed; every other parse error is a usage error.
    if (app.exit(e, out, err) == 0) return 0;
    err << "\n" << app.help();
    return 1;
  }

  int code = 0;
  try {
    ctx.model = resolve_device(ctx.g.device_path);
    ctx.chain = ctx.g.chain_text.empty() ? ctx.model.default_chain() : parse_chain(ctx.g.chain_text);
    Emitter emit(ctx.g, out);
    const NoiseOptions noise = ctx.noise();
    ctx.log.push_back("device " + ctx.model.name() + " chain " + std::to_string(ctx.chain[0]) + "," + std::to_string(ctx.chain[1]) + "," +
                      std::to_string(ctx.chain[2]));

    if (*synth) {
      PulseSequence seq = synth_combo.empty() ? synthesize_on_chain(synth_theta, ctx.model, ctx.chain)
                                              : synthesize(synth_theta, parse_combo(synth_combo), chain_timings(ctx.model, ctx.chain));
      const auto chk = check_sequence(seq);
      json j = envelope("synth");
      j["sequence"] = sequence_json(seq);
      j["checks"] = {{"max_deviation", chk.max_deviation}, {"leakage", chk.leakage}};
      j["total_time_ns"] = total_ccphase_time(ctx.model, ctx.chain);
      emit.write(j);
    } else if (*tt) {
      const PulseCombo combo = parse_combo(tt_combo);
      const auto rule = combo_allowed(combo);
      const PulseSequence seq = build_sequence(tt_theta, combo, {});
      std::vector<int> inputs;
      for (const auto& b : tt_inputs) inputs.push_back(ComputationalEmbedding(3)[qubit_index_of(b)]);
      const auto rows = truth_table(seq, inputs);
      const Matrix target = ccphase_target(tt_theta);
      std::ostringstream s;
      s << "combo,status,input,t1,t2,t3,t4,result\n";
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const int q = qubit_index_of(tt_inputs[r]);
        const auto& last = rows[r].steps[3];
        const bool ok = last.basis == rows[r].input && std::abs(last.amplitude - target(q, q)) < 1e-9;
        s << '"' << combo.label() << "\"," << (rule.allowed ? "allowed" : "FORBIDDEN") << ",|" << tt_inputs[r] << ">";
        for (const auto& c : rows[r].steps) s << ',' << ket_cell(c);
        s << ',' << (ok ? "ok" : "ERROR") << '\n';
      }
      if (!rule.allowed) ctx.log.push_back("combo " + combo.label() + " forbidden: " + rule.diagnosis);
      emit.write(s.str());
    } else if (*calc) {
      if (!inject.empty() && inject.size() != 4) throw ValidationError("--inject takes four values B,C,D,E");
      PulseImperfection imp;
      if (!inject.empty()) imp = PulseImperfection::from_phases(inject[1], inject[2], inject[3], inject[0]);
      imp.cross_coupling = cal_kappa;
      cal.seed = ctx.g.seed;
      const PulseSequence seq = synthesize_on_chain(cal_theta, ctx.model, ctx.chain);
      const SequenceBackend backend =
          cal_noisy ? SequenceBackend::noisy(ctx.model, ctx.chain, noise, imp) : SequenceBackend::ideal(imp);
      const auto res = calibrate(seq, backend, cal);
      json j = envelope("calibration");
      j["b"] = res.b;
      j["cde"] = res.cde;
      j["residuals"] = {{"B", res.residuals[0]}, {"C", res.residuals[1]}, {"D", res.residuals[2]}, {"E", res.residuals[3]}};
      j["passes"] = res.passes;
      j["history"] = json::array();
      for (const auto& p : res.history)
        j["history"].push_back({{"conditional", fit_json(p.conditional)},
                                {"single", {fit_json(p.single[0]), fit_json(p.single[1]), fit_json(p.single[2])}}});
      j["sequence"] = sequence_json(res.sequence);
      j["corrected_process_fidelity"] =
          process_fidelity(SequenceBackend::ideal(imp).channel(res.sequence), UnitaryMatrix(ccphase_target(cal_theta)));
      emit.write(j);
    } else if (*bench) {
      cb.seed = qc.seed = ctx.g.seed;
      cb.workers = qc.workers = ctx.g.workers;
      const DeviceRealization real{ctx.model, ctx.chain, noise};
      auto native = [&](double th) {
        if (bench_gate == "depolarizing") {
          LayeredChannel ch({3, 2});
          ch.add_unitary(ccphase_target(th, kIndex011));
          ch.add_global_depolarizing(bench_p);
          return ch;
        }
        if (bench_gate == "decomposed") return circuit_channel(lower_to_native(decompose_ccphase(th)), real);
        return noisy_sequence_channel(synthesize_on_chain(th, ctx.model, ctx.chain), ctx.model, ctx.chain, noise);
      };
      const int phased = bench_gate == "decomposed" ? 7 : kIndex011;
      auto target = [&](double th) { return ccphase_target(th, phased); };
      json j;
      if (*cbc) {
        const auto rep = cycle_benchmark(native, target, bench_theta, cb);
        j = envelope("cb");
        j["report"] = report_json(rep);
        if (!csv_path.empty()) {
          std::ofstream f(csv_path, std::ios::binary);
          if (!f) throw ValidationError("cannot write " + csv_path);
          f << decay_csv(rep);
        }
      } else {
        const auto res = qpt(native(bench_theta), target(bench_theta), qc);
        j = envelope("qpt");
        j["fidelity"] = res.fidelity;
        j["residual"] = res.residual;
        j["residual_flagged"] = res.residual_flagged;
        if (res.residual_flagged) ctx.log.push_back("qpt: large CPTP projection residual " + fmt(res.residual));
      }
      j["gate"] = bench_gate;
      j["theta"] = bench_theta;
      j["exact_process_fidelity"] = process_fidelity(native(bench_theta), UnitaryMatrix(target(bench_theta)));
      emit.write(j);
    } else if (*dec) {
      GateList gl = decompose_ccphase(dec_theta);
      if (dec_level == 2) gl = lower_to_native(gl);
      const auto c = count_gates(gl);
      json j = envelope("decomposition");
      j["theta"] = dec_theta;
      j["level"] = dec_level;
      j["gates"] = to_json(gl);
      j["counts"] = {{"cphase", c.cphase}, {"cnot", c.cnot}, {"two_qubit", c.two_qubit}, {"one_qubit", c.one_qubit}, {"virtual_rz", c.virtual_rz}};
      j["estimated_fidelity"] = estimate_fidelity(count_gates(lower_to_native(decompose_ccphase(dec_theta))));
      j["distance_to_target"] = phase_insensitive_distance(circuit_unitary(gl), ccphase_target(dec_theta, 7));
      emit.write(j);
      if (!ctx.g.out_path.empty())
        out << "cphase " << c.cphase << " cnot " << c.cnot << " two_qubit " << c.two_qubit << " one_qubit " << c.one_qubit
            << " virtual_rz " << c.virtual_rz << "\n";
    } else if (*qaoa) {
      if (*land) {
        QaoaSetup setup{SatInstance{3, {parse_clause(clause_text)}}, parse_qaoa_backend(backend_text), std::nullopt, {}};
        if (setup.backend != QaoaBackend::Ideal) setup.device = DeviceRealization{ctx.model, ctx.chain, noise};
        const auto configs = random_count > 0 ? random_configs(random_count, ctx.g.seed, lo, hi) : grid_configs(grid, lo, hi);
        const auto pts = landscape(setup, configs, qshots, ctx.g.seed, ctx.g.workers);
        const auto& m = landscape_minimum(pts);
        ctx.log.push_back("minimum " + fmt(m.expectation) + " at beta " + fmt(m.beta) + " gamma " + fmt(m.gamma));
        emit.write(landscape_csv(pts));
      } else {
        const auto c = compare_landscapes(read_landscape_csv(land_a), read_landscape_csv(land_b));
        json j = envelope("qaoa_comparison");
        j["rho"] = c.rho;
        j["mu_a"] = c.mu_a;
        j["mu_b"] = c.mu_b;
        emit.write(j);
      }
    } else if (*show) {
      emit.write(to_json(ctx.model));
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    code = 1;
  } catch (const NumericalCheckError& e) {
    err << "numerical check failed: " << e.what() << "\n";
    code = 2;
  } catch (const nlohmann::json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    code = 1;
  }
  write_log(ctx.g, args, ctx.log, started, code);
  return code;
}

}  // namespace ccphase::cli
