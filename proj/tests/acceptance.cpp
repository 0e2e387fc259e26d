// End-to-end acceptance checks. Each criterion prints a single line
//   criterion N: PASS|FAIL (detail)
// Run all with no arguments or one with --only N. Exit code is the number
// of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "icc/checker.hpp"
#include "icc/scenario.hpp"
#include "icc/serial.hpp"
#include "icc/sos.hpp"

using namespace icc;

namespace {

std::string fixture(const std::string& name) { return std::string(ICC_FIXTURE_DIR) + "/" + name; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool report(int num, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", num, ok ? "PASS" : "FAIL", detail.c_str());
  return ok;
}

// 1. dynamics fidelity on the two case studies
bool criterion1() {
  auto ht = load_config(fixture("heat_transfer.json"));
  auto lv = load_config(fixture("lotka_volterra.json"));
  auto a = step(ht.system, std::vector<double>{10.0, 8.0}, 0);
  auto b = step(lv.system, std::vector<double>{6.0, 4.0, 1.0}, 0);
  double err = std::max({std::abs(a[0] - 4.1), std::abs(a[1] - 6.75), std::abs(b[0] - 6.0412),
                         std::abs(b[1] - 3.1676), std::abs(b[2] - 1.007)});
  std::ostringstream d;
  d << "max step error " << err;
  return report(1, err < 1e-9, d.str());
}

// 2. persistence evidence: seeded runs leave the finite-visit set for good
bool criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  auto lv = load_config(fixture("lotka_volterra.json"));
  const Box& vf = *lv.system.finite_visit_set;
  std::mt19937_64 rng(2024);
  int ok = 0, visited = 0;
  for (int run = 0; run < 100; ++run) {
    std::vector<double> x0(3);
    for (int j = 0; j < 3; ++j) {
      std::uniform_real_distribution<double> u(lv.system.initial_set.lower[j],
                                               lv.system.initial_set.upper[j]);
      x0[j] = u(rng);
    }
    auto traj = simulate(lv.system, x0, 3000, 1000 + run);
    auto last = monitor_persistence(traj, vf);
    if (last) ++visited;
    // finite last visit with no later re-entry: the run must not still be
    // inside the set at its final recorded state
    bool pass = !last || *last < static_cast<int>(traj.states.size()) - 1;
    if (pass) ++ok;
  }
  double t = seconds_since(t0);
  std::ostringstream d;
  d << ok << "/100 runs settle outside the set, " << visited << " visited it, " << t << " s";
  return report(2, ok == 100 && t < 10.0, d.str());
}

// 3. labeled heat-transfer traces follow the a U G c shape and avoid the trap
bool criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  auto ht = load_config(fixture("heat_transfer.json"));
  ProductSystem prod{ht.system, *ht.nba, *ht.labeling};
  std::mt19937_64 rng(77);
  int ok = 0;
  for (int run = 0; run < 100; ++run) {
    std::vector<double> x0(2);
    for (int j = 0; j < 2; ++j) {
      std::uniform_real_distribution<double> u(ht.system.initial_set.lower[j],
                                               ht.system.initial_set.upper[j]);
      x0[j] = u(rng);
    }
    auto traj = simulate(ht.system, x0, 500, 500 + run);
    auto letters = label_trace(*ht.labeling, traj);
    bool shape = true, seen_c = false;
    for (const auto& l : letters) {
      if (l == "d") shape = false;
      if (l == "c") seen_c = true;
      if (seen_c && l == "a") shape = false;  // once in the suffix, only b/c
    }
    auto mon = monitor_buchi(prod, traj);
    if (shape && !mon.ever_reached(3)) ++ok;
  }
  double t = seconds_since(t0);
  std::ostringstream d;
  d << ok << "/100 traces match with the trap unreached, " << t << " s";
  return report(3, ok == 100 && t < 5.0, d.str());
}

// 4. published persistence certificate: checker minima against the
// committed brute-force oracle (numpy, independent grid evaluation)
bool criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  auto lv = load_config(fixture("lotka_volterra.json"));
  auto cert = certificate_from_json(load_json_file(fixture("cert_persistence_k2_deg4.json")));
  auto rs = persistence_residuals(lv.system, cert);
  auto rep = check(rs, 0.25, LipschitzMode::interval);
  auto oracle = load_json_file(fixture("oracle_persistence_minima.json"));

  bool ok = true;
  double worst = 0.0;
  std::ostringstream d;
  for (const auto& fam : rep.families) {
    if (!oracle["0.25"].contains(fam.name)) {
      ok = false;
      d << fam.name << " missing from oracle; ";
      continue;
    }
    double expect = oracle["0.25"][fam.name]["min"].get<double>();
    double err = std::abs(fam.min_value - expect);
    worst = std::max(worst, err);
    if (err > 5e-3) {
      ok = false;
      d << fam.name << " off by " << err << "; ";
    }
  }
  // the dense reference run shows how far the coarse grid overshoots the
  // near-true minima; printed for the record, not gated (grid minima at
  // different resolutions differ by orders more than the tolerance)
  double coarse = oracle["0.25"]["chain[2]"]["min"].get<double>();
  double dense = oracle["0.05"]["chain[2]"]["min"].get<double>();
  double t = seconds_since(t0);
  d << "max |checker - oracle| = " << worst << " at matching eps=0.25; dense eps=0.05 chain[2] min "
    << dense << " vs coarse " << coarse << "; " << t << " s";
  return report(4, ok && t < 300.0, d.str());
}

// 5. scenario synthesis end-to-end on the toy contraction
bool criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  auto cfg = load_config(fixture("toy_contraction.json"));
  Template tmpl{0, 2, {}};
  auto res = synthesize(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp, 0.01);
  bool ok = res.status == LpStatus::optimal && res.delta_star <= 0.0 &&
            res.report.verdict == Verdict::sound_pass && res.certificate.has_value();
  int violations = 0;
  if (res.certificate) {
    auto fine = check(safety_residuals(cfg.system, *res.certificate), 0.0025,
                      LipschitzMode::interval);
    for (const auto& fam : fine.families) violations += static_cast<int>(fam.violations.size());
    ok = ok && violations == 0;
  }
  double t = seconds_since(t0);
  std::ostringstream d;
  d << to_string(res.status) << ", delta* = " << res.delta_star << ", verdict "
    << to_string(res.report.verdict) << ", fine-grid violations " << violations << ", " << t
    << " s";
  return report(5, ok && t < 30.0, d.str());
}

// 6. inductive barrier chains convert to valid piecewise certificates
bool criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  auto cfg = load_config(fixture("toy_contraction.json"));
  const Box& X = cfg.system.state_set;
  const Box& X0 = cfg.system.initial_set;
  const Box& Xu = *cfg.system.unsafe_set;
  double eta = 0.1;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> pick_k(0, 2);
  std::uniform_real_distribution<double> level(0.21, 0.79), ux(X.lower[0], X.upper[0]),
      u0(X0.lower[0], X0.upper[0]), uu(Xu.lower[0], Xu.upper[0]);

  int valid = 0, bad_pairs = 0;
  while (valid < 20) {
    int kb = pick_k(rng);
    std::vector<Polynomial> ibc;
    std::vector<double> levels;
    for (int l = 0; l <= kb; ++l) levels.push_back(level(rng));
    for (double c : levels)
      ibc.push_back(Polynomial::variable(1, 0) - Polynomial::constant(1, c));

    // sampled validity of the barrier chain itself
    bool chain_ok = true;
    for (int s = 0; s < 200 && chain_ok; ++s) {
      double x = ux(rng), fx = 0.5 * x;
      for (int l = 0; l < kb; ++l)
        if (x - levels[l] <= 0.0 && fx - levels[l + 1] > 0.0) chain_ok = false;
      if (x - levels[kb] <= 0.0 && fx - levels[kb] > 0.0) chain_ok = false;
      double x0 = u0(rng), xu = uu(rng);
      if (x0 - levels[0] > 0.0) chain_ok = false;
      if (xu - levels[kb] <= 0.0) chain_ok = false;
    }
    if (!chain_ok) continue;
    ++valid;

    auto T = ibc_to_icc(ibc, eta);
    for (int s = 0; s < 10000 / 20; ++s) {
      std::vector<double> x{ux(rng)}, y{ux(rng)}, fx{0.5 * x[0]};
      // values land exactly on the two plateau levels
      for (int i = 0; i <= kb; ++i) {
        double v = T[i](x, y);
        if (v != 0.0 && v != -eta) ++bad_pairs;
      }
      // step and chain conditions
      if (T[0](x, fx) < 0.0) ++bad_pairs;
      for (int i = 0; i <= kb; ++i)
        if (T[std::min(kb, i + 1)](x, y) - T[i](fx, y) < 0.0) ++bad_pairs;
      // initial-unsafe exclusion
      std::vector<double> x0{u0(rng)}, xu{uu(rng)};
      for (int i = 0; i <= kb; ++i)
        if (-eta - T[i](x0, xu) < 0.0) ++bad_pairs;
    }
  }
  double t = seconds_since(t0);
  std::ostringstream d;
  d << "20 sampled-valid chains converted, " << bad_pairs << " violating pairs, " << t << " s";
  return report(6, bad_pairs == 0 && t < 10.0, d.str());
}

// 7. SOS round-trip with a hand witness for the constant certificate
bool criterion7() {
  auto cfg = load_config(fixture("toy_contraction.json"));
  Template tmpl{0, 2, {}};
  auto prog = sos_compile(SpecKind::safety, cfg.system, nullptr, tmpl, cfg.hp);
  std::string path = "/tmp/icc_acceptance_sdp.dat-s";
  export_sdp(prog, path);
  bool exported = load_json_file(path + ".map.json").contains("blocks");
  std::remove(path.c_str());
  std::remove((path + ".map.json").c_str());

  // restrict to the step family; T0 = 1 makes its expression the constant 1
  SosProgram step_only;
  step_only.symbols = prog.symbols;
  step_only.constraints.push_back(prog.constraints[0]);
  const auto& c = step_only.constraints[0];

  SosWitness w;
  w.coefficients.assign(prog.symbols.size(), 0.0);
  w.coefficients[0] = 1.0;  // constant monomial leads the graded basis
  std::vector<std::vector<double>> grams;
  int g = c.gram.size();
  std::vector<double> q(static_cast<size_t>(g) * g, 0.0);
  // place the 1 on the constant basis element
  int const_idx = -1;
  for (int i = 0; i < g; ++i) {
    bool all_zero = true;
    for (int e : c.gram.basis[i]) all_zero = all_zero && e == 0;
    if (all_zero) const_idx = i;
  }
  if (const_idx < 0) return report(7, false, "no constant element in the Gram basis");
  q[static_cast<size_t>(const_idx) * g + const_idx] = 1.0;
  grams.push_back(q);
  for (const auto& mult : c.multipliers)
    grams.push_back(std::vector<double>(static_cast<size_t>(mult.size()) * mult.size(), 0.0));
  w.grams.push_back(grams);

  auto rep = verify_witness(step_only, w);
  bool ok = exported && rep.pass && rep.constraints.size() == 1 &&
            rep.constraints[0].identity_residual <= 1e-9 &&
            rep.constraints[0].min_eigenvalue >= -1e-12;

  // the accepted witness corresponds to a residual with no counterexample
  Certificate cert;
  cert.kind = SpecKind::safety;
  cert.k = 0;
  cert.n = 1;
  cert.hp = cfg.hp;
  cert.T = {Polynomial::constant(2, 1.0)};
  auto rs = safety_residuals(cfg.system, cert);
  ResidualSet step_rs;
  step_rs.items.push_back(rs.items[0]);
  auto hits = falsify(step_rs, 10000, 9);
  ok = ok && hits.empty();

  std::ostringstream d;
  d << "identity residual " << (rep.constraints.empty() ? -1.0 : rep.constraints[0].identity_residual)
    << ", min eigenvalue " << (rep.constraints.empty() ? -1.0 : rep.constraints[0].min_eigenvalue)
    << ", falsifier hits " << hits.size();
  return report(7, ok, d.str());
}

// 8. k = 0 collapses to the plain closure-certificate conditions
bool criterion8() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  int agree = 0;
  for (int it = 0; it < 10; ++it) {
    System sys;
    sys.n = 1;
    sys.state_set = Box({-1.0}, {1.0});
    sys.initial_set = Box({-0.2}, {-0.1});
    sys.unsafe_set = Box({0.8}, {1.0});
    // random contraction-like affine map, kept inside the state set
    sys.maps.push_back({Polynomial::variable(1, 0).scaled(0.4 * coef(rng)) +
                        Polynomial::constant(1, 0.2 * coef(rng))});
    sys.validate();

    Certificate cert;
    cert.kind = SpecKind::safety;
    cert.k = 0;
    cert.n = 1;
    cert.hp = {0, 0.01, {1.0}, 1.0, 1.0};
    std::vector<Term> terms;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b) terms.push_back({coef(rng), {a, b}});
    cert.T = {Polynomial(2, terms)};

    auto rs = safety_residuals(sys, cert);

    // closure-certificate residuals written out directly
    std::vector<Polynomial> subs_step{Polynomial::variable(1, 0), sys.maps[0][0]};
    Polynomial cc_step = cert.T[0].compose(subs_step);
    std::vector<Polynomial> subs_chain;
    subs_chain.push_back(sys.maps[0][0].compose({Polynomial::variable(2, 0)}));
    subs_chain.push_back(Polynomial::variable(2, 1));
    Polynomial cc_chain = cert.T[0] - cert.T[0].compose(subs_chain);
    Polynomial cc_init = Polynomial::constant(2, -cert.hp.eta) - cert.T[0];

    bool same = rs.items.size() == 3 && rs.items[0].poly == cc_step &&
                rs.items[1].poly == cc_chain && rs.items[2].poly == cc_init;

    ResidualSet cc;
    cc.items.push_back({"step", cc_step, rs.items[0].factors});
    cc.items.push_back({"chain", cc_chain, rs.items[1].factors});
    cc.items.push_back({"init", cc_init, rs.items[2].factors});
    auto ra = check(rs, 0.05, LipschitzMode::interval);
    auto rb = check(cc, 0.05, LipschitzMode::interval);
    if (same && ra.verdict == rb.verdict) ++agree;
  }
  double t = seconds_since(t0);
  std::ostringstream d;
  d << agree << "/10 systems coefficient-identical with matching verdicts, " << t << " s";
  return report(8, agree == 10 && t < 5.0, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8};
  int failures = 0;
  for (int n = 1; n <= 8; ++n) {
    if (only != 0 && only != n) continue;
    try {
      if (!criteria[n - 1]()) ++failures;
    } catch (const std::exception& e) {
      report(n, false, std::string("exception: ") + e.what());
      ++failures;
    }
  }
  return failures;
}
