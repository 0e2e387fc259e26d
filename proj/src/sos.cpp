#include "icc/sos.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "icc/serial.hpp"

namespace icc {

namespace {

int even_round_up(int d) { return d % 2 == 0 ? d : d + 1; }

// lift a polynomial over one factor into the constraint's full variable list
Polynomial lift_factor(const Polynomial& p, int out_arity, int offset) {
  std::vector<Polynomial> subs;
  subs.reserve(p.arity());
  for (int j = 0; j < p.arity(); ++j)
    subs.push_back(Polynomial::variable(out_arity, offset + j));
  return p.compose(subs);
}

Polynomial gram_quadratic(const GramBlock& block, const std::vector<double>& Q, int arity) {
  int k = block.size();
  std::vector<Term> terms;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (Q[a * k + b] == 0.0) continue;
      std::vector<int> e(arity);
      for (int j = 0; j < arity; ++j) e[j] = block.basis[a][j] + block.basis[b][j];
      terms.push_back({Q[a * k + b], std::move(e)});
    }
  return Polynomial(arity, std::move(terms));
}

}  // namespace

Polynomial instantiate_expression(const SosConstraint& c, const std::vector<double>& coefficients) {
  Polynomial out = c.expression.constant;
  for (const auto& [s, psi] : c.expression.terms) out = out + psi.scaled(coefficients.at(s));
  return out;
}

SosProgram sos_compile(SpecKind kind, const System& sys, const ProductSystem* prod,
                       const Template& tmpl, const Hyperparameters& hp) {
  Template tfull = tmpl;
  if (tfull.basis.empty()) tfull.basis = monomials_up_to(2 * sys.n, tmpl.degree);
  auto sym = symbolic_residuals(sys, prod, kind, tfull, hp);

  SosProgram prog;
  {
    // symbol names follow the scenario program's flattened order
    std::vector<FunctionKey> keys;
    if (kind == SpecKind::ltl) {
      for (int i = 0; i <= tmpl.k; ++i)
        for (int q = 0; q < prod->nba.states; ++q)
          for (int p = 0; p < prod->nba.states; ++p) keys.push_back({i, q, p});
    } else {
      for (int i = 0; i <= tmpl.k; ++i) keys.push_back({i, -1, -1});
    }
    for (const auto& key : keys)
      for (size_t m = 0; m < tfull.basis.size(); ++m) {
        std::string name = "c" + std::to_string(key.i);
        if (key.q >= 0) name += "_" + std::to_string(key.q) + "_" + std::to_string(key.p);
        prog.symbols.push_back(name + "_m" + std::to_string(m));
      }
  }

  for (const auto& fam : sym) {
    SosConstraint c;
    c.name = fam.name;
    int arity = 0;
    for (const auto& box : fam.factors) arity += box.dimension();
    c.arity = arity;
    c.expression.constant =
        fam.constant + Polynomial::constant(arity, fam.eta_coeff * hp.eta);
    for (const auto& [s, psi] : fam.coeff_terms) c.expression.terms.emplace_back(s, psi);

    int offset = 0;
    for (const auto& box : fam.factors) {
      auto set = box_to_set(box);
      for (const auto& g : set.inequalities) c.domain.push_back(lift_factor(g, arity, offset));
      offset += box.dimension();
    }

    int expr_deg = fam.constant.degree();
    for (const auto& [s, psi] : fam.coeff_terms) expr_deg = std::max(expr_deg, psi.degree());
    int half = even_round_up(expr_deg) / 2;
    c.gram.basis = monomials_up_to(arity, half);
    if (c.gram.size() > kGramBasisCap) throw std::runtime_error("Gram basis too large");
    for (const auto& g : c.domain) {
      int ld = std::max(0, even_round_up(expr_deg - g.degree()));
      GramBlock mb;
      mb.basis = monomials_up_to(arity, ld / 2);
      if (mb.size() > kGramBasisCap) throw std::runtime_error("Gram basis too large");
      c.multipliers.push_back(std::move(mb));
    }
    prog.constraints.push_back(std::move(c));
  }
  return prog;
}

void export_sdp(const SosProgram& program, const std::string& path) {
  // Enumerate scalar equality constraints: one per monomial in the span of
  // each SOS identity. Y blocks: per constraint the expression Gram then the
  // multiplier Grams, plus one trailing diagonal block for the split
  // certificate coefficients c = c+ - c-.
  struct Entry {
    int con;  // 1-based SDP constraint index
    int block;
    int i, j;  // 1-based, i <= j
    double value;
  };
  std::vector<Entry> entries;
  std::vector<double> rhs;
  nlohmann::json map;
  map["format"] = "sdpa-sparse";
  map["blocks"] = nlohmann::json::array();
  map["constraints"] = nlohmann::json::array();

  int nsym = static_cast<int>(program.symbols.size());
  std::vector<int> block_sizes;
  int block_index = 0;
  std::vector<std::pair<int, std::vector<int>>> con_blocks;  // per SosConstraint: first block id

  for (size_t ci = 0; ci < program.constraints.size(); ++ci) {
    const auto& c = program.constraints[ci];
    std::vector<int> ids;
    ids.push_back(block_index);
    map["blocks"].push_back({{"constraint", c.name},
                             {"role", "gram"},
                             {"size", c.gram.size()},
                             {"basis", c.gram.basis}});
    block_sizes.push_back(c.gram.size());
    ++block_index;
    for (size_t j = 0; j < c.multipliers.size(); ++j) {
      ids.push_back(block_index);
      map["blocks"].push_back({{"constraint", c.name},
                               {"role", "multiplier"},
                               {"multiplier_index", j},
                               {"size", c.multipliers[j].size()},
                               {"basis", c.multipliers[j].basis}});
      block_sizes.push_back(c.multipliers[j].size());
      ++block_index;
    }
    con_blocks.emplace_back(static_cast<int>(ci), ids);
  }
  int diag_block = block_index;
  map["blocks"].push_back({{"role", "coefficients"},
                           {"size", 2 * nsym},
                           {"symbols", program.symbols},
                           {"layout", "c_plus then c_minus"}});
  block_sizes.push_back(-2 * nsym);  // negative size marks a diagonal block

  int con_counter = 0;
  for (size_t ci = 0; ci < program.constraints.size(); ++ci) {
    const auto& c = program.constraints[ci];
    const auto& ids = con_blocks[ci].second;

    // collect the monomial span and per-monomial contributions
    std::map<std::vector<int>, std::vector<Entry>> contrib;
    std::map<std::vector<int>, double> consts;

    auto add_poly_monomials = [&](const Polynomial& p) {
      for (const auto& t : p.terms()) (void)contrib[t.exps];
    };
    add_poly_monomials(c.expression.constant);
    for (const auto& t : c.expression.constant.terms()) consts[t.exps] += t.coeff;
    for (const auto& [s, psi] : c.expression.terms) add_poly_monomials(psi);

    // z^T Q z span and entries
    int gk = c.gram.size();
    for (int a = 0; a < gk; ++a)
      for (int b = a; b < gk; ++b) {
        std::vector<int> e(c.arity);
        for (int j = 0; j < c.arity; ++j) e[j] = c.gram.basis[a][j] + c.gram.basis[b][j];
        contrib[e].push_back({0, ids[0], a + 1, b + 1, -1.0});
      }
    // multiplier * g span and entries
    for (size_t mj = 0; mj < c.multipliers.size(); ++mj) {
      const auto& mb = c.multipliers[mj];
      int mk = mb.size();
      for (int a = 0; a < mk; ++a)
        for (int b = a; b < mk; ++b)
          for (const auto& t : c.domain[mj].terms()) {
            std::vector<int> e(c.arity);
            for (int j = 0; j < c.arity; ++j)
              e[j] = mb.basis[a][j] + mb.basis[b][j] + t.exps[j];
            contrib[e].push_back({0, ids[mj + 1], a + 1, b + 1, -t.coeff});
          }
    }

    for (auto& [mono, ents] : contrib) {
      ++con_counter;
      // merge duplicate (block,i,j) cells
      std::map<std::tuple<int, int, int>, double> cells;
      for (auto& e : ents) cells[{e.block, e.i, e.j}] += e.value;
      for (const auto& [s, psi] : c.expression.terms)
        for (const auto& t : psi.terms())
          if (t.exps == mono) {
            cells[{diag_block, s + 1, s + 1}] += t.coeff;
            cells[{diag_block, nsym + s + 1, nsym + s + 1}] -= t.coeff;
          }
      for (const auto& [key, v] : cells) {
        if (v == 0.0) continue;
        auto [blk, i, j] = key;
        entries.push_back({con_counter, blk + 1, i, j, v});
      }
      rhs.push_back(-(consts.count(mono) ? consts[mono] : 0.0));
      map["constraints"].push_back(
          {{"constraint", c.name}, {"monomial", mono}, {"index", con_counter}});
    }
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "* feasibility: find Y >= 0 block-diagonal with tr(F_i Y) = c_i\n";
  out << rhs.size() << " = mDIM\n";
  out << block_sizes.size() << " = nBLOCK\n";
  for (size_t b = 0; b < block_sizes.size(); ++b)
    out << block_sizes[b] << (b + 1 < block_sizes.size() ? " " : "");
  out << "\n";
  for (size_t i = 0; i < rhs.size(); ++i) out << rhs[i] << (i + 1 < rhs.size() ? " " : "");
  out << "\n";
  for (const auto& e : entries)
    out << e.con << " " << e.block << " " << e.i << " " << e.j << " " << e.value << "\n";
  out.close();

  map["num_constraints"] = rhs.size();
  map["block_sizes"] = block_sizes;
  save_json_file(path + ".map.json", map);
}

WitnessReport verify_witness(const SosProgram& program, const SosWitness& witness, double tol_psd,
                             double tol_id) {
  if (witness.grams.size() != program.constraints.size())
    throw std::invalid_argument("witness constraint count mismatch");
  if (witness.coefficients.size() != program.symbols.size())
    throw std::invalid_argument("witness coefficient count mismatch");
  WitnessReport report;
  report.pass = true;
  for (size_t ci = 0; ci < program.constraints.size(); ++ci) {
    const auto& c = program.constraints[ci];
    const auto& grams = witness.grams[ci];
    if (grams.size() != c.multipliers.size() + 1)
      throw std::invalid_argument("witness Gram count mismatch for " + c.name);

    WitnessReport::ConstraintMargin margin;
    margin.name = c.name;
    margin.min_eigenvalue = std::numeric_limits<double>::infinity();

    Polynomial residual = instantiate_expression(c, witness.coefficients);
    auto check_gram = [&](const GramBlock& block, const std::vector<double>& Q) {
      int k = block.size();
      if (static_cast<int>(Q.size()) != k * k)
        throw std::invalid_argument("witness Gram dimension mismatch for " + c.name);
      Eigen::MatrixXd M(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) M(a, b) = Q[a * k + b];
      if (!M.isApprox(M.transpose(), 1e-12) && (M - M.transpose()).norm() > 1e-9)
        throw std::invalid_argument("witness Gram not symmetric for " + c.name);
      double tol = tol_psd >= 0 ? tol_psd : 1e-8 * std::max(1.0, M.norm());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      double mineig = k > 0 ? es.eigenvalues().minCoeff() : 0.0;
      margin.min_eigenvalue = std::min(margin.min_eigenvalue, mineig);
      return mineig >= -tol;
    };

    bool psd_ok = check_gram(c.gram, grams[0]);
    residual = residual - gram_quadratic(c.gram, grams[0], c.arity);
    for (size_t mj = 0; mj < c.multipliers.size(); ++mj) {
      psd_ok = check_gram(c.multipliers[mj], grams[mj + 1]) && psd_ok;
      residual =
          residual - gram_quadratic(c.multipliers[mj], grams[mj + 1], c.arity) * c.domain[mj];
    }
    double max_resid = 0.0;
    for (const auto& t : residual.terms()) max_resid = std::max(max_resid, std::abs(t.coeff));
    margin.identity_residual = max_resid;
    margin.pass = psd_ok && max_resid <= tol_id;
    if (!margin.pass) report.pass = false;
    report.constraints.push_back(std::move(margin));
  }
  return report;
}

}  // namespace icc
