#pragma once

#include <set>
#include <string>
#include <vector>

#include "icc/system.hpp"

namespace icc {

// Nondeterministic Buchi automaton, states indexed 0..states-1.
struct Nba {
  std::vector<std::string> alphabet;
  int states = 0;
  std::vector<int> initial;
  std::vector<int> accepting;
  std::vector<std::tuple<int, std::string, int>> transitions;

  void validate() const;
  bool is_accepting(int q) const;
  std::set<int> successors(int q, const std::string& letter) const;
};

// Synchronous product of the system with the automaton driven by labels.
struct ProductSystem {
  System system;
  Nba nba;
  LabelingMap labeling;

  void validate() const;
};

std::vector<std::pair<std::vector<double>, int>> product_step(const ProductSystem& prod,
                                                              std::span<const double> x, int q,
                                                              int branch);

struct BuchiMonitorResult {
  std::vector<std::set<int>> reachable;  // automaton state set per trace position
  std::vector<int> accepting_hits;      // accepting states inside each set
  bool ever_reached(int q) const;
};

// Subset construction over the labeled trace, starting from the initial
// state set. Finite-horizon evidence only.
BuchiMonitorResult monitor_buchi(const ProductSystem& prod, const Trajectory& traj);

}  // namespace icc
