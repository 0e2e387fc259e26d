#include "icc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace icc {

std::vector<std::vector<int>> monomials_up_to(int arity, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(arity, 0);
  // enumerate all exponent vectors with sum <= degree
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == arity) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
    }
    cur[pos] = 0;
  };
  rec(0, degree);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int da = 0, db = 0;
    for (int x : a) da += x;
    for (int x : b) db += x;
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

namespace {

std::vector<FunctionKey> function_keys(SpecKind kind, int k, const Nba* nba) {
  std::vector<FunctionKey> keys;
  if (kind == SpecKind::ltl) {
    for (int i = 0; i <= k; ++i)
      for (int q = 0; q < nba->states; ++q)
        for (int p = 0; p < nba->states; ++p) keys.push_back({i, q, p});
  } else {
    for (int i = 0; i <= k; ++i) keys.push_back({i, -1, -1});
  }
  return keys;
}

Certificate make_cert(SpecKind kind, int k, int n, const Hyperparameters& hp,
                      const std::vector<FunctionKey>& keys) {
  Certificate cert;
  cert.kind = kind;
  cert.k = k;
  cert.n = n;
  cert.hp = hp;
  if (kind == SpecKind::ltl) {
    for (const auto& key : keys) cert.T_pair[{key.i, key.q, key.p}] = Polynomial(2 * n);
  } else {
    cert.T.assign(k + 1, Polynomial(2 * n));
  }
  return cert;
}

Polynomial& cert_function(Certificate& cert, const FunctionKey& key) {
  if (cert.kind == SpecKind::ltl) return cert.T_pair[{key.i, key.q, key.p}];
  return cert.T[key.i];
}

std::string symbol_name(const FunctionKey& key, size_t m) {
  std::ostringstream os;
  os << "c" << key.i;
  if (key.q >= 0) os << "_" << key.q << "_" << key.p;
  os << "_m" << m;
  return os.str();
}

}  // namespace

std::vector<SymbolicResidual> symbolic_residuals(const System& sys, const ProductSystem* prod,
                                                 SpecKind kind, const Template& tmpl,
                                                 const Hyperparameters& hp_fixed) {
  int n = sys.n;
  auto basis = tmpl.basis.empty() ? monomials_up_to(2 * n, tmpl.degree) : tmpl.basis;
  Hyperparameters hp = hp_fixed;
  hp.k = tmpl.k;
  if (static_cast<int>(hp.gamma.size()) != tmpl.k + 1) hp.gamma.assign(tmpl.k + 1, 1.0);
  hp.eta = 1.0;  // unit eta so its row coefficient can be read off

  const Nba* nba = prod ? &prod->nba : nullptr;
  auto keys = function_keys(kind, tmpl.k, nba);

  Certificate zero = make_cert(kind, tmpl.k, n, hp, keys);
  ResidualSet base = residuals_for(sys, prod, zero);

  std::vector<SymbolicResidual> out(base.items.size());
  for (size_t f = 0; f < base.items.size(); ++f) {
    out[f].name = base.items[f].name;
    out[f].factors = base.items[f].factors;
    // with a zero certificate only the -eta constants remain
    double c = 0.0;
    for (const auto& t : base.items[f].poly.terms()) {
      bool constant_term = std::all_of(t.exps.begin(), t.exps.end(), [](int e) { return e == 0; });
      if (!constant_term) throw std::logic_error("unexpected non-constant baseline residual");
      c = t.coeff;
    }
    out[f].eta_coeff = c;
    out[f].constant = Polynomial(base.items[f].poly.arity());
  }

  for (size_t fk = 0; fk < keys.size(); ++fk) {
    for (size_t m = 0; m < basis.size(); ++m) {
      Certificate unit = make_cert(kind, tmpl.k, n, hp, keys);
      cert_function(unit, keys[fk]) = Polynomial(2 * n, {{1.0, basis[m]}});
      ResidualSet rs = residuals_for(sys, prod, unit);
      if (rs.items.size() != out.size()) throw std::logic_error("residual family count changed");
      int symbol = static_cast<int>(fk * basis.size() + m);
      for (size_t f = 0; f < rs.items.size(); ++f) {
        Polynomial psi = rs.items[f].poly - base.items[f].poly;
        if (!psi.is_zero()) out[f].coeff_terms.emplace_back(symbol, std::move(psi));
      }
    }
  }
  return out;
}

ScenarioProgram build_sp(const System& sys, const ProductSystem* prod, SpecKind kind,
                         const Template& tmpl, const Hyperparameters& hp_fixed, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  ScenarioProgram sp;
  sp.kind = kind;
  sp.n = sys.n;
  sp.basis = tmpl.basis.empty() ? monomials_up_to(2 * sys.n, tmpl.degree) : tmpl.basis;
  Template tfull = tmpl;
  tfull.basis = sp.basis;
  sp.hp = hp_fixed;
  sp.hp.k = tmpl.k;
  if (static_cast<int>(sp.hp.gamma.size()) != tmpl.k + 1) sp.hp.gamma.assign(tmpl.k + 1, 1.0);
  sp.epsilon = epsilon;
  sp.functions = function_keys(kind, tmpl.k, prod ? &prod->nba : nullptr);
  sp.residuals = symbolic_residuals(sys, prod, kind, tfull, sp.hp);

  size_t S = sp.functions.size() * sp.basis.size();
  sp.delta_index = static_cast<int>(S);
  sp.eta_index = static_cast<int>(S) + 1;
  sp.lp.num_vars = static_cast<int>(S) + 2;
  sp.lp.objective.assign(sp.lp.num_vars, 0.0);
  sp.lp.objective[sp.delta_index] = 1.0;
  sp.lp.objective[sp.eta_index] = 1.0;
  for (size_t fk = 0; fk < sp.functions.size(); ++fk)
    for (size_t m = 0; m < sp.basis.size(); ++m)
      sp.var_names.push_back(symbol_name(sp.functions[fk], m));
  sp.var_names.push_back("delta");
  sp.var_names.push_back("eta");

  std::map<std::string, bool> seen;
  sp.family_epsilon.resize(sp.residuals.size());
  sp.family_beta.assign(sp.residuals.size(), std::vector<double>(S, 0.0));

  for (size_t f = 0; f < sp.residuals.size(); ++f) {
    const auto& fam = sp.residuals[f];
    std::vector<SampleGrid> grids;
    for (const auto& box : fam.factors) grids.emplace_back(box, epsilon);
    std::vector<const SampleGrid*> ptrs;
    for (const auto& g : grids) ptrs.push_back(&g);
    ProductGrid grid(std::move(ptrs));
    sp.family_epsilon[f] = grid.effective_epsilon();

    std::vector<Interval> domain;
    for (const auto& box : fam.factors) {
      auto iv = box.intervals();
      domain.insert(domain.end(), iv.begin(), iv.end());
    }
    for (const auto& [s, psi] : fam.coeff_terms)
      sp.family_beta[f][s] = psi.lipschitz_bound(domain);

    std::vector<double> pt(grid.dimension());
    for (std::uint64_t idx = 0; idx < grid.size(); ++idx) {
      grid.point(idx, pt);
      LpProblem::Row row;
      for (const auto& [s, psi] : fam.coeff_terms) {
        double v = psi.evaluate(pt);
        if (v != 0.0) row.coeffs.emplace_back(s, v);
      }
      row.coeffs.emplace_back(sp.delta_index, 1.0);
      if (fam.eta_coeff != 0.0) row.coeffs.emplace_back(sp.eta_index, fam.eta_coeff);
      row.rhs = -fam.constant.evaluate(pt);

      std::ostringstream key;
      for (const auto& [v, c] : row.coeffs) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%d:%.12g;", v, c);
        key << buf;
      }
      {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "r%.12g", row.rhs);
        key << buf;
      }
      if (seen.emplace(key.str(), true).second) {
        sp.lp.rows.push_back(std::move(row));
        sp.row_family.push_back(static_cast<int>(f));
      }
    }
  }

  // variable bounds as rows: |c_s| <= coeff_bound, eta >= eta_min
  for (size_t s = 0; s < S; ++s) {
    sp.lp.rows.push_back({{{static_cast<int>(s), 1.0}}, -sp.coeff_bound});
    sp.row_family.push_back(-1);
    sp.lp.rows.push_back({{{static_cast<int>(s), -1.0}}, -sp.coeff_bound});
    sp.row_family.push_back(-1);
  }
  sp.lp.rows.push_back({{{sp.eta_index, 1.0}}, sp.eta_min});
  sp.row_family.push_back(-1);
  // keep delta from running away below any useful magnitude
  sp.lp.rows.push_back({{{sp.delta_index, -1.0}}, -1e6});
  sp.row_family.push_back(-1);
  return sp;
}

LpSolution solve(const ScenarioProgram& sp, const std::string& solver_cmd) {
  LpResult raw = solver_cmd.empty() ? solve_lp(sp.lp)
                                    : solve_lp_external(sp.lp, sp.var_names, solver_cmd);
  LpSolution sol;
  sol.status = raw.status;
  sol.message = raw.message;
  if (raw.status == LpStatus::optimal) {
    sol.coefficients.assign(raw.point.begin(), raw.point.begin() + sp.delta_index);
    sol.delta_star = raw.point[sp.delta_index];
    sol.eta_star = raw.point[sp.eta_index];
    sol.objective = raw.objective;
  }
  return sol;
}

Certificate certificate_from_coefficients(const ScenarioProgram& sp,
                                          const std::vector<double>& coeffs, double eta) {
  Hyperparameters hp = sp.hp;
  hp.eta = eta;
  Certificate cert = make_cert(sp.kind, sp.hp.k, sp.n, hp, sp.functions);
  cert.basis = sp.basis;
  for (size_t fk = 0; fk < sp.functions.size(); ++fk) {
    std::vector<Term> terms;
    for (size_t m = 0; m < sp.basis.size(); ++m) {
      double c = coeffs[fk * sp.basis.size() + m];
      if (c != 0.0) terms.push_back({c, sp.basis[m]});
    }
    cert_function(cert, sp.functions[fk]) = Polynomial(2 * sp.n, std::move(terms));
  }
  return cert;
}

namespace {

// Second stage: keep eta fixed and ask every sampled row to clear its own
// family's Lipschitz margin, with t_s >= |c_s| driving the margin bound.
LpResult solve_margin_stage(const ScenarioProgram& sp, double eta_star) {
  size_t S = sp.functions.size() * sp.basis.size();
  LpProblem lp2;
  lp2.num_vars = static_cast<int>(2 * S);
  lp2.objective.assign(lp2.num_vars, 0.0);
  for (size_t s = 0; s < S; ++s) lp2.objective[S + s] = 1.0;

  for (size_t r = 0; r < sp.lp.rows.size(); ++r) {
    int f = sp.row_family[r];
    if (f < 0) continue;
    LpProblem::Row row;
    double rhs = sp.lp.rows[r].rhs;
    for (const auto& [v, c] : sp.lp.rows[r].coeffs) {
      if (v == sp.delta_index) continue;
      if (v == sp.eta_index) {
        rhs -= c * eta_star;
        continue;
      }
      row.coeffs.emplace_back(v, c);
    }
    // 5% headroom over the required margin so the optimum does not sit on
    // the gate boundary to the last floating-point bit
    double eps = 1.05 * sp.family_epsilon[f];
    for (size_t s = 0; s < S; ++s) {
      double beta = sp.family_beta[f][s];
      if (beta > 0.0) row.coeffs.emplace_back(static_cast<int>(S + s), -eps * beta);
    }
    row.rhs = rhs;
    lp2.rows.push_back(std::move(row));
  }
  for (size_t s = 0; s < S; ++s) {
    int cs = static_cast<int>(s), ts = static_cast<int>(S + s);
    lp2.rows.push_back({{{ts, 1.0}, {cs, -1.0}}, 0.0});
    lp2.rows.push_back({{{ts, 1.0}, {cs, 1.0}}, 0.0});
    lp2.rows.push_back({{{ts, -1.0}}, -sp.coeff_bound});
  }
  return solve_lp(lp2);
}

}  // namespace

SynthesisResult synthesize(const System& sys, const ProductSystem* prod, SpecKind kind,
                           const Template& tmpl, const Hyperparameters& hp_fixed, double epsilon,
                           const std::string& solver_cmd) {
  ScenarioProgram sp = build_sp(sys, prod, kind, tmpl, hp_fixed, epsilon);
  LpSolution sol = solve(sp, solver_cmd);
  SynthesisResult res;
  res.status = sol.status;
  res.message = sol.message;
  if (sol.status != LpStatus::optimal) return res;
  res.delta_star = sol.delta_star;
  res.eta_star = sol.eta_star;

  std::vector<double> coeffs = sol.coefficients;
  LpResult refined = solve_margin_stage(sp, sol.eta_star);
  if (refined.status == LpStatus::optimal) {
    res.refined = true;
    coeffs.assign(refined.point.begin(), refined.point.begin() + sp.delta_index);
  }

  Certificate cert = certificate_from_coefficients(sp, coeffs, sol.eta_star);
  ResidualSet rs = residuals_for(sys, prod, cert);
  res.report = check(rs, epsilon, LipschitzMode::interval);
  res.certificate = std::move(cert);
  return res;
}

}  // namespace icc
