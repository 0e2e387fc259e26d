#include "icc/serial.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace icc {

namespace {

std::string dirname_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

json poly_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms())
    terms.push_back({{"coefficient", t.coeff}, {"exponents", t.exps}});
  return terms;
}

Polynomial poly_from_json(const json& j, int arity) {
  std::vector<Term> terms;
  for (const auto& t : j) {
    Term term;
    term.coeff = t.at("coefficient").get<double>();
    term.exps = t.at("exponents").get<std::vector<int>>();
    if (static_cast<int>(term.exps.size()) != arity)
      throw std::runtime_error("polynomial term has wrong exponent count");
    terms.push_back(std::move(term));
  }
  return Polynomial(arity, std::move(terms));
}

json box_to_json(const Box& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

Box box_from_json(const json& j) {
  return Box(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
}

Nba nba_from_json(const json& j) {
  Nba nba;
  nba.alphabet = j.at("alphabet").get<std::vector<std::string>>();
  nba.states = j.at("states").get<int>();
  nba.initial = j.at("initial").get<std::vector<int>>();
  nba.accepting = j.at("accepting").get<std::vector<int>>();
  for (const auto& t : j.at("transitions"))
    nba.transitions.emplace_back(t.at(0).get<int>(), t.at(1).get<std::string>(),
                                 t.at(2).get<int>());
  nba.validate();
  return nba;
}

json nba_to_json(const Nba& nba) {
  json trans = json::array();
  for (const auto& [q, l, p] : nba.transitions) trans.push_back({q, l, p});
  return {{"alphabet", nba.alphabet},
          {"states", nba.states},
          {"initial", nba.initial},
          {"accepting", nba.accepting},
          {"transitions", trans}};
}

json certificate_to_json(const Certificate& cert) {
  json j;
  j["kind"] = to_string(cert.kind);
  j["k"] = cert.k;
  j["n"] = cert.n;
  j["hyperparameters"] = {{"eta", cert.hp.eta},
                          {"gamma", cert.hp.gamma},
                          {"rho1", cert.hp.rho1},
                          {"rho2", cert.hp.rho2}};
  json basis = json::array();
  for (const auto& e : cert.basis) basis.push_back(e);
  j["basis"] = basis;
  json fns = json::array();
  auto coeffs_of = [&](const Polynomial& poly) {
    // project onto the declared basis
    std::vector<double> c(cert.basis.size(), 0.0);
    for (const auto& t : poly.terms()) {
      auto it = std::find(cert.basis.begin(), cert.basis.end(), t.exps);
      if (it == cert.basis.end()) throw std::runtime_error("certificate term outside basis");
      c[it - cert.basis.begin()] = t.coeff;
    }
    return c;
  };
  if (cert.kind == SpecKind::ltl) {
    for (const auto& [key, poly] : cert.T_pair) {
      auto [i, q, p] = key;
      fns.push_back({{"i", i}, {"q", q}, {"p", p}, {"coefficients", coeffs_of(poly)}});
    }
  } else {
    for (int i = 0; i <= cert.k; ++i)
      fns.push_back({{"i", i}, {"coefficients", coeffs_of(cert.T[i])}});
  }
  j["functions"] = fns;
  return j;
}

Certificate certificate_from_json(const json& j) {
  Certificate cert;
  cert.kind = spec_kind_from_string(j.at("kind").get<std::string>());
  cert.k = j.at("k").get<int>();
  cert.n = j.at("n").get<int>();
  const auto& hp = j.at("hyperparameters");
  cert.hp.k = cert.k;
  cert.hp.eta = hp.at("eta").get<double>();
  cert.hp.gamma = hp.value("gamma", std::vector<double>(cert.k + 1, 1.0));
  cert.hp.rho1 = hp.value("rho1", 1.0);
  cert.hp.rho2 = hp.value("rho2", 1.0);
  for (const auto& e : j.at("basis")) cert.basis.push_back(e.get<std::vector<int>>());
  for (const auto& e : cert.basis)
    if (static_cast<int>(e.size()) != 2 * cert.n)
      throw std::runtime_error("basis exponent vector has wrong length");

  auto poly_of = [&](const std::vector<double>& c) {
    if (c.size() != cert.basis.size())
      throw std::runtime_error("coefficient count does not match basis");
    std::vector<Term> terms;
    for (size_t m = 0; m < c.size(); ++m)
      if (c[m] != 0.0) terms.push_back({c[m], cert.basis[m]});
    return Polynomial(2 * cert.n, std::move(terms));
  };

  if (cert.kind == SpecKind::ltl) {
    for (const auto& f : j.at("functions")) {
      int i = f.at("i").get<int>(), q = f.at("q").get<int>(), p = f.at("p").get<int>();
      cert.T_pair[{i, q, p}] = poly_of(f.at("coefficients").get<std::vector<double>>());
    }
  } else {
    cert.T.assign(cert.k + 1, Polynomial(2 * cert.n));
    for (const auto& f : j.at("functions")) {
      int i = f.at("i").get<int>();
      if (i < 0 || i > cert.k) throw std::runtime_error("function index out of range");
      cert.T[i] = poly_of(f.at("coefficients").get<std::vector<double>>());
    }
  }
  cert.validate();
  return cert;
}

ProjectConfig config_from_json(const json& j, const std::string& base_dir) {
  ProjectConfig cfg;
  cfg.schema = j.value("schema", 1);
  if (cfg.schema != 1) throw std::runtime_error("unsupported config schema version");
  cfg.name = j.value("name", "unnamed");
  const auto& s = j.at("system");
  cfg.system.n = s.at("dimension").get<int>();
  cfg.system.state_set = box_from_json(s.at("state_set"));
  cfg.system.initial_set = box_from_json(s.at("initial_set"));
  if (s.contains("unsafe_set")) cfg.system.unsafe_set = box_from_json(s.at("unsafe_set"));
  if (s.contains("finite_visit_set"))
    cfg.system.finite_visit_set = box_from_json(s.at("finite_visit_set"));
  for (const auto& map : s.at("transitions")) {
    std::vector<Polynomial> f;
    for (const auto& comp : map) f.push_back(poly_from_json(comp, cfg.system.n));
    cfg.system.maps.push_back(std::move(f));
  }
  cfg.system.validate();

  cfg.kind = spec_kind_from_string(j.at("specification").get<std::string>());
  if (j.contains("labeling")) {
    LabelingMap lm;
    for (const auto& r : j.at("labeling").at("regions"))
      lm.regions.emplace_back(box_from_json(r.at("box")), r.at("letter").get<std::string>());
    lm.default_letter = j.at("labeling").at("default").get<std::string>();
    cfg.labeling = std::move(lm);
  }
  if (j.contains("nba")) {
    const auto& ref = j.at("nba");
    if (ref.is_string())
      cfg.nba = nba_from_json(load_json_file(base_dir + "/" + ref.get<std::string>()));
    else
      cfg.nba = nba_from_json(ref);
  }
  if (cfg.kind == SpecKind::ltl && (!cfg.labeling || !cfg.nba))
    throw std::runtime_error("ltl configuration needs labeling and nba");

  const auto& hp = j.at("hyperparameters");
  cfg.hp.k = hp.at("k").get<int>();
  cfg.hp.eta = hp.value("eta", 1e-3);
  cfg.hp.gamma = hp.value("gamma", std::vector<double>(cfg.hp.k + 1, 1.0));
  cfg.hp.rho1 = hp.value("rho1", cfg.kind == SpecKind::ltl ? 0.5 : 1.0);
  cfg.hp.rho2 = hp.value("rho2", 1.0);
  cfg.hp.validate();

  const auto& t = j.at("template");
  cfg.template_k = t.at("k").get<int>();
  cfg.template_degree = t.at("degree").get<int>();
  cfg.epsilon = j.value("epsilon", 0.1);
  return cfg;
}

ProjectConfig load_config(const std::string& path) {
  return config_from_json(load_json_file(path), dirname_of(path));
}

json report_to_json(const CheckReport& report) {
  json fams = json::array();
  for (const auto& f : report.families) {
    json viol = json::array();
    for (const auto& v : f.violations) viol.push_back({{"point", v.point}, {"value", v.value}});
    fams.push_back({{"name", f.name},
                    {"samples", f.samples},
                    {"min_value", f.min_value},
                    {"argmin", f.argmin},
                    {"lipschitz", f.lipschitz},
                    {"epsilon_effective", f.epsilon_effective},
                    {"sound", f.sound},
                    {"violations", viol}});
  }
  return {{"verdict", to_string(report.verdict)}, {"families", fams}};
}

}  // namespace icc
