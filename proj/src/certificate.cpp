#include "icc/certificate.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace icc {

std::string to_string(SpecKind kind) {
  switch (kind) {
    case SpecKind::safety: return "safety";
    case SpecKind::persistence: return "persistence";
    case SpecKind::ltl: return "ltl";
  }
  return "?";
}

SpecKind spec_kind_from_string(const std::string& s) {
  if (s == "safety") return SpecKind::safety;
  if (s == "persistence") return SpecKind::persistence;
  if (s == "ltl") return SpecKind::ltl;
  throw std::invalid_argument("unknown specification kind: " + s);
}

void Hyperparameters::validate() const {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
  if (static_cast<int>(gamma.size()) != k + 1)
    throw std::invalid_argument("gamma must have k+1 entries");
  for (double g : gamma)
    if (g <= 0.0) throw std::invalid_argument("gamma entries must be positive");
  if (rho1 <= 0.0 || rho2 <= 0.0) throw std::invalid_argument("rho must be positive");
}

const Polynomial& Certificate::pair_function(int i, int q, int p) const {
  auto it = T_pair.find({i, q, p});
  if (it != T_pair.end()) return it->second;
  auto key = std::make_tuple(i, q, p);
  if (std::find(warned_.begin(), warned_.end(), key) == warned_.end()) {
    warned_.push_back(key);
    std::cerr << "warning: certificate entry (i=" << i << ", q=" << q << ", p=" << p
              << ") missing, using zero\n";
  }
  if (zero_.arity() != 2 * n) zero_ = Polynomial(2 * n);
  return zero_;
}

void Certificate::validate() const {
  hp.validate();
  if (n <= 0) throw std::invalid_argument("certificate dimension must be positive");
  if (hp.k != k) throw std::invalid_argument("hyperparameter k disagrees with certificate k");
  if (kind == SpecKind::ltl) {
    for (const auto& [key, poly] : T_pair)
      if (poly.arity() != 2 * n) throw std::invalid_argument("pair function has wrong arity");
  } else {
    if (static_cast<int>(T.size()) != k + 1)
      throw std::invalid_argument("certificate must have k+1 functions");
    for (const auto& t : T)
      if (t.arity() != 2 * n) throw std::invalid_argument("certificate function has wrong arity");
  }
}

Polynomial lift_pair(const Polynomial& p, int n, int out_arity, int first_offset,
                     int second_offset) {
  std::vector<Polynomial> subs;
  subs.reserve(2 * n);
  for (int j = 0; j < n; ++j) subs.push_back(Polynomial::variable(out_arity, first_offset + j));
  for (int j = 0; j < n; ++j) subs.push_back(Polynomial::variable(out_arity, second_offset + j));
  return p.compose(subs);
}

namespace {

// T(f(x), y) as an arity-2n polynomial for one transition branch.
Polynomial compose_first_block(const Polynomial& T, const std::vector<Polynomial>& f, int n) {
  std::vector<Polynomial> subs;
  subs.reserve(2 * n);
  for (int j = 0; j < n; ++j) {
    std::vector<Polynomial> lift;
    lift.reserve(n);
    for (int v = 0; v < n; ++v) lift.push_back(Polynomial::variable(2 * n, v));
    subs.push_back(f[j].compose(lift));
  }
  for (int j = 0; j < n; ++j) subs.push_back(Polynomial::variable(2 * n, n + j));
  return T.compose(subs);
}

// T(x, f(x)) as an arity-n polynomial.
Polynomial compose_second_block(const Polynomial& T, const std::vector<Polynomial>& f, int n) {
  std::vector<Polynomial> subs;
  subs.reserve(2 * n);
  for (int j = 0; j < n; ++j) subs.push_back(Polynomial::variable(n, j));
  for (int j = 0; j < n; ++j) subs.push_back(f[j]);
  return T.compose(subs);
}

std::string branch_tag(const System& sys, int b) {
  return sys.maps.size() > 1 ? "[b" + std::to_string(b) + "]" : "";
}

void append_chain(ResidualSet& out, const System& sys, const Certificate& cert) {
  const auto& hp = cert.hp;
  int n = cert.n;
  for (size_t b = 0; b < sys.maps.size(); ++b) {
    const auto& f = sys.maps[b];
    out.items.push_back({"step" + branch_tag(sys, b), compose_second_block(cert.T[0], f, n),
                         {sys.state_set}});
    for (int i = 0; i <= cert.k; ++i) {
      const Polynomial& next = cert.T[std::min(i + 1, cert.k)];
      Polynomial r = next - compose_first_block(cert.T[i], f, n).scaled(hp.gamma[i]);
      out.items.push_back({"chain[" + std::to_string(i) + "]" + branch_tag(sys, b), std::move(r),
                           {sys.state_set, sys.state_set}});
    }
  }
}

}  // namespace

ResidualSet safety_residuals(const System& sys, const Certificate& cert) {
  cert.validate();
  if (!sys.unsafe_set) throw std::invalid_argument("safety check requires an unsafe set");
  ResidualSet out;
  append_chain(out, sys, cert);
  int n = cert.n;
  for (int i = 0; i <= cert.k; ++i) {
    Polynomial r = Polynomial::constant(2 * n, -cert.hp.eta) - cert.T[i];
    out.items.push_back({"init[" + std::to_string(i) + "]", std::move(r),
                         {sys.initial_set, *sys.unsafe_set}});
  }
  return out;
}

ResidualSet persistence_residuals(const System& sys, const Certificate& cert) {
  cert.validate();
  if (!sys.finite_visit_set)
    throw std::invalid_argument("persistence check requires a finite-visit set");
  ResidualSet out;
  append_chain(out, sys, cert);
  int n = cert.n;
  const auto& hp = cert.hp;
  const Polynomial& Tk = cert.T[cert.k];
  Polynomial r = lift_pair(Tk, n, 3 * n, 0, n).scaled(1.0 - hp.rho1) +
                 Polynomial::constant(3 * n, -hp.eta) -
                 lift_pair(Tk, n, 3 * n, 0, 2 * n) -
                 lift_pair(Tk, n, 3 * n, n, 2 * n).scaled(hp.rho2);
  out.items.push_back({"rank", std::move(r),
                       {sys.initial_set, *sys.finite_visit_set, *sys.finite_visit_set}});
  return out;
}

ResidualSet ltl_residuals(const ProductSystem& prod, const Certificate& cert) {
  cert.validate();
  prod.validate();
  const System& sys = prod.system;
  const auto& hp = cert.hp;
  int n = cert.n;
  ResidualSet out;

  auto pieces = prod.labeling.partition(sys.state_set);
  for (size_t pc = 0; pc < pieces.size(); ++pc) {
    const auto& [piece, letter] = pieces[pc];
    std::string piece_tag = "(" + letter + std::to_string(pc) + ")";
    for (const auto& [q, l, qp] : prod.nba.transitions) {
      if (l != letter) continue;
      std::string edge = std::to_string(q) + "->" + std::to_string(qp);
      for (size_t b = 0; b < sys.maps.size(); ++b) {
        const auto& f = sys.maps[b];
        out.items.push_back({"step" + piece_tag + "[" + edge + "]" + branch_tag(sys, b),
                             compose_second_block(cert.pair_function(0, q, qp), f, n),
                             {piece}});
        for (int p = 0; p < prod.nba.states; ++p) {
          for (int i = 0; i <= cert.k; ++i) {
            const Polynomial& next = cert.pair_function(std::min(i + 1, cert.k), q, p);
            Polynomial r =
                next - compose_first_block(cert.pair_function(i, qp, p), f, n).scaled(hp.gamma[i]);
            out.items.push_back({"chain" + piece_tag + "[" + edge + ",p=" + std::to_string(p) +
                                     ",i=" + std::to_string(i) + "]" + branch_tag(sys, b),
                                 std::move(r),
                                 {piece, sys.state_set}});
          }
        }
      }
    }
  }

  for (int q0 : prod.nba.initial)
    for (int r1 : prod.nba.accepting)
      for (int r2 : prod.nba.accepting) {
        Polynomial r =
            lift_pair(cert.pair_function(cert.k, q0, r1), n, 3 * n, 0, n).scaled(1.0 - hp.rho1) +
            Polynomial::constant(3 * n, -hp.eta) -
            lift_pair(cert.pair_function(cert.k, q0, r2), n, 3 * n, 0, 2 * n) -
            lift_pair(cert.pair_function(cert.k, r1, r2), n, 3 * n, n, 2 * n).scaled(hp.rho2);
        out.items.push_back({"rank[q0=" + std::to_string(q0) + ",r=" + std::to_string(r1) +
                                 ",r'=" + std::to_string(r2) + "]",
                             std::move(r),
                             {sys.initial_set, sys.state_set, sys.state_set}});
      }
  return out;
}

ResidualSet residuals_for(const System& sys, const ProductSystem* prod, const Certificate& cert) {
  switch (cert.kind) {
    case SpecKind::safety: return safety_residuals(sys, cert);
    case SpecKind::persistence: return persistence_residuals(sys, cert);
    case SpecKind::ltl:
      if (!prod) throw std::invalid_argument("ltl residuals need a product system");
      return ltl_residuals(*prod, cert);
  }
  throw std::logic_error("unreachable");
}

std::vector<PairFn> ibc_to_icc(const std::vector<Polynomial>& ibc, double eta) {
  if (ibc.empty()) throw std::invalid_argument("empty barrier chain");
  if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
  int kb = static_cast<int>(ibc.size()) - 1;
  std::vector<PairFn> out;
  for (int i = 0; i <= kb; ++i) {
    out.push_back([ibc, eta, kb, i](std::span<const double> x, std::span<const double> y) {
      for (int l = 0; l <= kb; ++l) {
        int m = std::min(kb, l + i + 1);
        if (!(ibc[l].evaluate(x) > 0.0 || ibc[m].evaluate(y) <= 0.0)) return -eta;
      }
      return 0.0;
    });
  }
  return out;
}

}  // namespace icc
