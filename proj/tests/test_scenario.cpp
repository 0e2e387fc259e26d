#include <doctest.h>

#include "icc/scenario.hpp"
#include "icc/serial.hpp"

using namespace icc;

namespace {

ProjectConfig toy() { return load_config(std::string(ICC_FIXTURE_DIR) + "/toy_contraction.json"); }

}  // namespace

TEST_CASE("monomial basis generation") {
  auto m0 = monomials_up_to(2, 0);
  REQUIRE(m0.size() == 1);
  CHECK(m0[0] == std::vector<int>{0, 0});

  auto m2 = monomials_up_to(2, 2);
  CHECK(m2.size() == 6);  // 1, x, y, x^2, xy, y^2

  auto m3 = monomials_up_to(6, 4);
  CHECK(m3.size() == 210);
}

TEST_CASE("scenario program shape") {
  auto cfg = toy();
  Template tmpl{0, 2, {}};
  auto sp = build_sp(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp, 0.05);
  CHECK(sp.basis.size() == 6);
  CHECK(sp.functions.size() == 1);
  CHECK(sp.lp.num_vars == 8);  // 6 coefficients + delta + eta
  CHECK(sp.delta_index == 6);
  CHECK(sp.eta_index == 7);
  CHECK(sp.var_names.size() == 8);
  REQUIRE(sp.residuals.size() == 3);
  CHECK(sp.residuals[0].name == "step");
  CHECK(sp.family_beta.size() == 3);
  for (const auto& betas : sp.family_beta) CHECK(betas.size() == 6);
  CHECK(!sp.lp.rows.empty());

  // k = 1 doubles the coefficient block
  Template tmpl1{1, 2, {}};
  auto sp1 = build_sp(cfg.system, nullptr, SpecKind::safety, tmpl1, cfg.hp, 0.05);
  CHECK(sp1.functions.size() == 2);
  CHECK(sp1.lp.num_vars == 14);
}

TEST_CASE("symbolic residuals match assembled certificates") {
  auto cfg = toy();
  Template tmpl{0, 2, {}};
  auto syms = symbolic_residuals(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp);
  REQUIRE(syms.size() == 3);

  std::vector<double> coeffs{0.3, -0.2, 0.1, 0.05, -0.4, 0.25};
  double eta = 0.02;
  auto sp = build_sp(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp, 0.05);
  auto cert = certificate_from_coefficients(sp, coeffs, eta);
  auto rs = safety_residuals(cfg.system, cert);
  REQUIRE(rs.items.size() == syms.size());

  std::vector<double> base{0.15, -0.4, 0.7};
  for (size_t f = 0; f < syms.size(); ++f) {
    int dim = 0;
    for (const auto& box : syms[f].factors) dim += box.dimension();
    for (double shift : {0.0, 0.2, -0.3}) {
      std::vector<double> pt(dim);
      for (int j = 0; j < dim; ++j) pt[j] = base[j % base.size()] + shift;
      double sym = syms[f].constant.evaluate(pt) + syms[f].eta_coeff * eta;
      for (const auto& [s, psi] : syms[f].coeff_terms) sym += coeffs[s] * psi.evaluate(pt);
      CHECK(sym == doctest::Approx(rs.items[f].poly.evaluate(pt)).epsilon(1e-9));
    }
  }
}

TEST_CASE("solve finds a negative-delta optimum for the toy system") {
  auto cfg = toy();
  Template tmpl{0, 2, {}};
  auto sp = build_sp(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp, 0.01);
  auto sol = solve(sp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.delta_star <= 0.0);
  CHECK(sol.eta_star >= sp.eta_min - 1e-9);
  CHECK(sol.coefficients.size() == 6);
  for (double c : sol.coefficients) CHECK(std::abs(c) <= sp.coeff_bound + 1e-6);
}

TEST_CASE("synthesize produces a provably valid toy certificate") {
  auto cfg = toy();
  Template tmpl{0, 2, {}};
  auto res = synthesize(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp, 0.01);
  REQUIRE(res.status == LpStatus::optimal);
  REQUIRE(res.certificate.has_value());
  CHECK(res.report.verdict == Verdict::sound_pass);
  CHECK(res.refined);

  // the synthesized certificate survives independent re-checking on a finer grid
  auto rs = safety_residuals(cfg.system, *res.certificate);
  auto fine = check(rs, 0.0025, LipschitzMode::interval);
  for (const auto& fam : fine.families) CHECK(fam.violations.empty());
}

TEST_CASE("no sound certificate for an unsafe system") {
  // x' = x + 0.4 drives initial states straight into the unsafe region, so
  // a sound pass would prove a false statement
  System sys;
  sys.n = 1;
  sys.state_set = Box({-1.0}, {1.0});
  sys.initial_set = Box({0.1}, {0.2});
  sys.unsafe_set = Box({0.8}, {1.0});
  sys.maps.push_back({Polynomial::variable(1, 0) + Polynomial::constant(1, 0.4)});
  sys.validate();
  Hyperparameters hp{0, 1e-3, {1.0}, 1.0, 1.0};
  Template tmpl{0, 2, {}};
  auto res = synthesize(sys, nullptr, SpecKind::safety, tmpl, hp, 0.01);
  CHECK(res.report.verdict != Verdict::sound_pass);
}

TEST_CASE("reconstruction fidelity") {
  auto cfg = toy();
  Template tmpl{0, 2, {}};
  auto sp = build_sp(cfg.system, nullptr, SpecKind::safety, tmpl, cfg.hp, 0.05);
  std::vector<double> coeffs{1.0, 0.5, -0.25, 0.0, 2.0, -1.5};
  auto cert = certificate_from_coefficients(sp, coeffs, 0.01);
  REQUIRE(cert.T.size() == 1);
  CHECK(cert.kind == SpecKind::safety);
  CHECK(cert.hp.eta == 0.01);
  // evaluate against the explicit expansion
  std::vector<double> pt{0.3, -0.7};
  double expect = 0.0;
  for (size_t m = 0; m < sp.basis.size(); ++m) {
    double term = coeffs[m];
    for (int j = 0; j < 2; ++j)
      for (int e = 0; e < sp.basis[m][j]; ++e) term *= pt[j];
    expect += term;
  }
  CHECK(cert.T[0].evaluate(pt) == doctest::Approx(expect).epsilon(1e-12));
}
