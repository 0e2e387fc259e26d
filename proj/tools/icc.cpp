#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "icc/serial.hpp"
#include "icc/sos.hpp"

namespace {

constexpr int kExitSoundPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitSamplePass = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

using namespace icc;

ProductSystem make_product(const ProjectConfig& cfg) {
  ProductSystem prod;
  prod.system = cfg.system;
  prod.nba = *cfg.nba;
  prod.labeling = *cfg.labeling;
  prod.validate();
  return prod;
}

// The sampled relaxation assumes labels are constant on grid cells; warn
// when a region edge cuts through cell interiors.
void warn_label_alignment(const ProjectConfig& cfg) {
  if (!cfg.labeling) return;
  double cell = 2.0 * cfg.epsilon;
  for (const auto& [box, letter] : cfg.labeling->regions) {
    for (int j = 0; j < box.dimension(); ++j) {
      for (double edge : {box.lower[j], box.upper[j]}) {
        double offset = (edge - cfg.system.state_set.lower[j]) / cell;
        if (std::abs(offset - std::round(offset)) > 1e-9)
          std::cerr << "warning: region '" << letter << "' boundary " << edge
                    << " on axis " << j << " is not aligned to the sample grid\n";
      }
    }
  }
}

void print_report(const CheckReport& report, const std::string& format) {
  if (format == "structured") {
    std::cout << report_to_json(report).dump(2) << "\n";
    return;
  }
  std::cout << "verdict: " << to_string(report.verdict) << "\n";
  std::printf("%-40s %12s %12s %12s %8s %6s\n", "family", "samples", "min", "lipschitz", "eps",
              "sound");
  for (const auto& f : report.families)
    std::printf("%-40s %12llu %12.6g %12.6g %8.4g %6s\n", f.name.c_str(),
                static_cast<unsigned long long>(f.samples), f.min_value, f.lipschitz,
                f.epsilon_effective, f.sound ? "yes" : "no");
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::sound_pass: return kExitSoundPass;
    case Verdict::sample_pass: return kExitSamplePass;
    case Verdict::fail: return kExitFail;
  }
  return kExitData;
}

std::string solver_command() {
  const char* env = std::getenv("ICC_SOLVER");
  return env ? env : "";
}

int cmd_simulate(const ProjectConfig& cfg, std::vector<double> initial, int horizon, int runs,
                 std::uint64_t seed, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int finite_last_visit = 0, safety_violations = 0, accepting_reached = 0;

  for (int run = 0; run < runs; ++run) {
    std::vector<double> x0 = initial;
    if (x0.empty()) {
      x0.resize(cfg.system.n);
      for (int j = 0; j < cfg.system.n; ++j)
        x0[j] = cfg.system.initial_set.lower[j] +
                unif(rng) * (cfg.system.initial_set.upper[j] - cfg.system.initial_set.lower[j]);
    }
    Trajectory traj = simulate(cfg.system, x0, horizon, seed + run);

    std::ofstream csv(out_dir + "/run" + std::to_string(run) + ".csv");
    csv << "t";
    for (int j = 1; j <= cfg.system.n; ++j) csv << ",x" << j;
    csv << ",label\n";
    csv.precision(17);
    for (size_t t = 0; t < traj.states.size(); ++t) {
      csv << t;
      for (double v : traj.states[t]) csv << "," << v;
      csv << "," << (cfg.labeling ? cfg.labeling->label(traj.states[t]) : "");
      csv << "\n";
    }

    if (cfg.system.finite_visit_set) {
      auto last = monitor_persistence(traj, *cfg.system.finite_visit_set);
      if (!last || *last < static_cast<int>(traj.states.size()) - 1) ++finite_last_visit;
    }
    if (cfg.system.unsafe_set && monitor_safety(traj, *cfg.system.unsafe_set)) ++safety_violations;
    if (cfg.kind == SpecKind::ltl) {
      auto prod = make_product(cfg);
      auto mon = monitor_buchi(prod, traj);
      bool hit = false;
      for (int q : prod.nba.accepting)
        if (mon.ever_reached(q)) hit = true;
      if (hit) ++accepting_reached;
    }
    if (traj.left_state_set)
      std::cerr << "note: run " << run << " left the state set and was truncated\n";
  }

  std::cout << "runs: " << runs << "\n";
  if (cfg.system.finite_visit_set)
    std::cout << "runs with finite last visit to the finite-visit set: " << finite_last_visit
              << "\n";
  if (cfg.system.unsafe_set)
    std::cout << "runs entering the unsafe set: " << safety_violations << "\n";
  if (cfg.kind == SpecKind::ltl)
    std::cout << "runs reaching an accepting automaton state: " << accepting_reached << "\n";
  return 0;
}

int cmd_check(const ProjectConfig& cfg, const std::string& cert_path, double epsilon,
              const std::string& lipschitz, int threads, const std::string& report_path,
              const std::string& format) {
  Certificate cert = certificate_from_json(load_json_file(cert_path));
  if (cert.kind != cfg.kind)
    throw std::runtime_error("certificate kind does not match configuration");
  if (cert.k != cfg.hp.k) throw std::runtime_error("certificate k does not match configuration");
  if (cert.n != cfg.system.n)
    throw std::runtime_error("certificate dimension does not match system");
  warn_label_alignment(cfg);

  ResidualSet rs;
  if (cfg.kind == SpecKind::ltl) {
    auto prod = make_product(cfg);
    rs = ltl_residuals(prod, cert);
  } else {
    rs = residuals_for(cfg.system, nullptr, cert);
  }
  auto mode = lipschitz == "sampled" ? LipschitzMode::sampled : LipschitzMode::interval;
  CheckReport report = check(rs, epsilon, mode, threads);
  print_report(report, format);
  if (!report_path.empty()) save_json_file(report_path, report_to_json(report));
  return verdict_exit(report.verdict);
}

int cmd_synth(const ProjectConfig& cfg, double epsilon, const std::string& out_path,
              const std::string& report_path, const std::string& format) {
  warn_label_alignment(cfg);
  Template tmpl{cfg.template_k, cfg.template_degree, {}};
  Hyperparameters hp = cfg.hp;
  hp.k = cfg.template_k;
  if (static_cast<int>(hp.gamma.size()) != hp.k + 1) hp.gamma.assign(hp.k + 1, 1.0);

  SynthesisResult res;
  if (cfg.kind == SpecKind::ltl) {
    auto prod = make_product(cfg);
    res = synthesize(cfg.system, &prod, cfg.kind, tmpl, hp, epsilon, solver_command());
  } else {
    res = synthesize(cfg.system, nullptr, cfg.kind, tmpl, hp, epsilon, solver_command());
  }

  std::cout << "solver status: " << to_string(res.status) << "\n";
  if (res.status != LpStatus::optimal) {
    if (!res.message.empty()) std::cerr << res.message << "\n";
    return kExitData;
  }
  std::cout << "delta* = " << res.delta_star << ", eta* = " << res.eta_star
            << (res.refined ? " (margin-aware refinement applied)" : "") << "\n";
  save_json_file(out_path, certificate_to_json(*res.certificate));
  std::cout << "certificate written to " << out_path << "\n";
  print_report(res.report, format);
  if (!report_path.empty()) save_json_file(report_path, report_to_json(res.report));
  return verdict_exit(res.report.verdict);
}

int cmd_export_sos(const ProjectConfig& cfg, const std::string& out_path, bool sweep, int k_max,
                   int degree_max) {
  auto run_one = [&](int k, int degree, const std::string& path) {
    Template tmpl{k, degree, {}};
    Hyperparameters hp = cfg.hp;
    hp.k = k;
    if (static_cast<int>(hp.gamma.size()) != k + 1) hp.gamma.assign(k + 1, 1.0);
    SosProgram prog;
    if (cfg.kind == SpecKind::ltl) {
      auto prod = make_product(cfg);
      prog = sos_compile(cfg.kind, cfg.system, &prod, tmpl, hp);
    } else {
      prog = sos_compile(cfg.kind, cfg.system, nullptr, tmpl, hp);
    }
    export_sdp(prog, path);
    std::cout << "wrote " << path << " (" << prog.constraints.size() << " SOS constraints)\n";
  };
  if (sweep) {
    for (int k = 0; k <= k_max; ++k)
      for (int d = 1; d <= degree_max; ++d)
        run_one(k, d, out_path + "_k" + std::to_string(k) + "_d" + std::to_string(d) + ".dat-s");
  } else {
    run_one(cfg.template_k, cfg.template_degree, out_path);
  }
  return 0;
}

int cmd_verify_sos(const ProjectConfig& cfg, const std::string& witness_path) {
  Template tmpl{cfg.template_k, cfg.template_degree, {}};
  Hyperparameters hp = cfg.hp;
  hp.k = cfg.template_k;
  if (static_cast<int>(hp.gamma.size()) != hp.k + 1) hp.gamma.assign(hp.k + 1, 1.0);
  SosProgram prog;
  if (cfg.kind == SpecKind::ltl) {
    auto prod = make_product(cfg);
    prog = sos_compile(cfg.kind, cfg.system, &prod, tmpl, hp);
  } else {
    prog = sos_compile(cfg.kind, cfg.system, nullptr, tmpl, hp);
  }

  json w = load_json_file(witness_path);
  SosWitness witness;
  witness.coefficients = w.at("coefficients").get<std::vector<double>>();
  for (const auto& per_constraint : w.at("grams")) {
    std::vector<std::vector<double>> grams;
    for (const auto& gram : per_constraint) {
      std::vector<double> flat;
      for (const auto& row : gram)
        for (const auto& v : row) flat.push_back(v.get<double>());
      grams.push_back(std::move(flat));
    }
    witness.grams.push_back(std::move(grams));
  }

  WitnessReport report = verify_witness(prog, witness);
  for (const auto& c : report.constraints)
    std::printf("%-40s min_eig=%12.4e identity=%12.4e %s\n", c.name.c_str(), c.min_eigenvalue,
                c.identity_residual, c.pass ? "pass" : "FAIL");
  std::cout << (report.pass ? "witness accepted" : "witness rejected") << "\n";
  return report.pass ? 0 : kExitFail;
}

int cmd_info(const ProjectConfig& cfg) {
  std::cout << "name: " << cfg.name << "\n"
            << "specification: " << to_string(cfg.kind) << "\n"
            << "dimension: " << cfg.system.n << "\n"
            << "transition maps: " << cfg.system.maps.size() << "\n"
            << "k: " << cfg.hp.k << ", eta: " << cfg.hp.eta << ", rho1: " << cfg.hp.rho1
            << ", rho2: " << cfg.hp.rho2 << "\n"
            << "template: k=" << cfg.template_k << " degree=" << cfg.template_degree << "\n"
            << "epsilon: " << cfg.epsilon << "\n";
  if (cfg.nba)
    std::cout << "nba: " << cfg.nba->states << " states, " << cfg.nba->transitions.size()
              << " transitions\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certificate checking and synthesis for discrete-time polynomial systems"};
  app.require_subcommand(1);

  std::string config_path, cert_path, out_path, report_path, witness_path, out_dir = "runs";
  std::string lipschitz = "interval", format = "text";
  std::vector<double> initial;
  int horizon = 100, runs = 1, threads = 1, k_max = 2, degree_max = 4;
  std::uint64_t seed = 0;
  double epsilon = -1.0;
  bool sweep = false;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "project configuration file")->required();
  };

  auto* sim = app.add_subcommand("simulate", "sample trajectories and run monitors");
  add_config(sim);
  sim->add_option("--initial", initial, "initial state (default: sampled from the initial set)");
  sim->add_option("--horizon", horizon, "number of steps");
  sim->add_option("--runs", runs, "number of runs");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--out-dir", out_dir, "directory for trajectory CSVs");

  auto* chk = app.add_subcommand("check", "check a certificate on sample grids");
  add_config(chk);
  chk->add_option("--certificate", cert_path, "certificate file")->required();
  chk->add_option("--epsilon", epsilon, "grid half-width (default: from config)");
  chk->add_option("--lipschitz", lipschitz, "interval|sampled")
      ->check(CLI::IsMember({"interval", "sampled"}));
  chk->add_option("--threads", threads, "worker threads");
  chk->add_option("--report", report_path, "write the report as JSON");
  chk->add_option("--format", format, "text|structured")
      ->check(CLI::IsMember({"text", "structured"}));

  auto* syn = app.add_subcommand("synth", "synthesize a certificate from samples");
  add_config(syn);
  syn->add_option("--epsilon", epsilon, "grid half-width (default: from config)");
  syn->add_option("--out", out_path, "certificate output path");
  syn->add_option("--report", report_path, "write the report as JSON");
  syn->add_option("--format", format, "text|structured")
      ->check(CLI::IsMember({"text", "structured"}));

  auto* exp = app.add_subcommand("export-sos", "compile and export the SOS program");
  add_config(exp);
  exp->add_option("--out", out_path, "output path for the SDP file");
  exp->add_flag("--sweep", sweep, "export a (k, degree) ladder");
  exp->add_option("--k-max", k_max, "sweep upper bound for k");
  exp->add_option("--degree-max", degree_max, "sweep upper bound for the degree");

  auto* ver = app.add_subcommand("verify-sos", "verify an SOS decomposition witness");
  add_config(ver);
  ver->add_option("--witness", witness_path, "witness file")->required();

  auto* inf = app.add_subcommand("info", "print a configuration summary");
  add_config(inf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    ProjectConfig cfg = load_config(config_path);
    if (epsilon <= 0.0) epsilon = cfg.epsilon;
    if (sim->parsed()) return cmd_simulate(cfg, initial, horizon, runs, seed, out_dir);
    if (chk->parsed())
      return cmd_check(cfg, cert_path, epsilon, lipschitz, threads, report_path, format);
    if (syn->parsed()) {
      if (out_path.empty()) out_path = cfg.name + "_certificate.json";
      return cmd_synth(cfg, epsilon, out_path, report_path, format);
    }
    if (exp->parsed()) {
      if (out_path.empty()) out_path = cfg.name + ".dat-s";
      return cmd_export_sos(cfg, out_path, sweep, k_max, degree_max);
    }
    if (ver->parsed()) return cmd_verify_sos(cfg, witness_path);
    if (inf->parsed()) return cmd_info(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
