#include "icc/automaton.hpp"

#include <algorithm>
#include <stdexcept>

namespace icc {

namespace {

bool declared(const std::vector<std::string>& alphabet, const std::string& letter) {
  return std::find(alphabet.begin(), alphabet.end(), letter) != alphabet.end();
}

}  // namespace

void Nba::validate() const {
  if (states <= 0) throw std::invalid_argument("automaton needs at least one state");
  auto check_state = [&](int q) {
    if (q < 0 || q >= states) throw std::invalid_argument("undeclared automaton state");
  };
  for (int q : initial) check_state(q);
  for (int q : accepting) check_state(q);
  for (const auto& [q, letter, p] : transitions) {
    check_state(q);
    check_state(p);
    if (!declared(alphabet, letter)) throw std::invalid_argument("undeclared letter: " + letter);
  }
}

bool Nba::is_accepting(int q) const {
  return std::find(accepting.begin(), accepting.end(), q) != accepting.end();
}

std::set<int> Nba::successors(int q, const std::string& letter) const {
  if (q < 0 || q >= states) throw std::invalid_argument("undeclared automaton state");
  if (!declared(alphabet, letter)) throw std::invalid_argument("undeclared letter: " + letter);
  std::set<int> out;
  for (const auto& [from, l, to] : transitions)
    if (from == q && l == letter) out.insert(to);
  return out;
}

void ProductSystem::validate() const {
  system.validate();
  nba.validate();
  for (const auto& [box, letter] : labeling.regions)
    if (!declared(nba.alphabet, letter))
      throw std::invalid_argument("labeling letter not in alphabet: " + letter);
  if (!declared(nba.alphabet, labeling.default_letter))
    throw std::invalid_argument("default letter not in alphabet");
}

std::vector<std::pair<std::vector<double>, int>> product_step(const ProductSystem& prod,
                                                              std::span<const double> x, int q,
                                                              int branch) {
  auto next = step(prod.system, x, branch);
  std::vector<std::pair<std::vector<double>, int>> out;
  for (int p : prod.nba.successors(q, prod.labeling.label(x))) out.emplace_back(next, p);
  return out;
}

bool BuchiMonitorResult::ever_reached(int q) const {
  for (const auto& s : reachable)
    if (s.count(q)) return true;
  return false;
}

BuchiMonitorResult monitor_buchi(const ProductSystem& prod, const Trajectory& traj) {
  BuchiMonitorResult res;
  std::set<int> current(prod.nba.initial.begin(), prod.nba.initial.end());
  auto record = [&](const std::set<int>& s) {
    res.reachable.push_back(s);
    int hits = 0;
    for (int q : s)
      if (prod.nba.is_accepting(q)) ++hits;
    res.accepting_hits.push_back(hits);
  };
  record(current);
  for (size_t t = 0; t + 1 < traj.states.size(); ++t) {
    const std::string& letter = prod.labeling.label(traj.states[t]);
    std::set<int> next;
    for (int q : current) {
      auto succ = prod.nba.successors(q, letter);
      next.insert(succ.begin(), succ.end());
    }
    current = std::move(next);
    record(current);
  }
  return res;
}

}  // namespace icc
