#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icc/geometry.hpp"
#include "icc/poly.hpp"

namespace icc {

// Discrete-time system over a box state set. Nondeterminism is a finite
// list of polynomial maps; both case studies use a single map.
struct System {
  int n = 0;
  Box state_set;
  Box initial_set;
  std::optional<Box> unsafe_set;
  std::optional<Box> finite_visit_set;
  std::vector<std::vector<Polynomial>> maps;

  void validate() const;
};

struct LabelingMap {
  std::vector<std::pair<Box, std::string>> regions;  // first match wins
  std::string default_letter;

  const std::string& label(std::span<const double> point) const;

  // Disjoint boxes covering `domain`, each carrying one letter.
  std::vector<std::pair<Box, std::string>> partition(const Box& domain) const;
};

struct Trajectory {
  std::vector<std::vector<double>> states;
  std::vector<int> branches;   // branch chosen at each step, size = states-1
  bool left_state_set = false; // truncated because the next state fell outside X
};

std::vector<double> step(const System& sys, std::span<const double> state, int branch);

// Branches are drawn uniformly from a seeded generator; a state leaving X
// truncates the run and sets left_state_set.
Trajectory simulate(const System& sys, std::span<const double> initial, int horizon,
                    std::uint64_t seed);

std::vector<std::string> label_trace(const LabelingMap& labeling, const Trajectory& traj);

// Largest t with x_t in the set, none if never visited. Finite-horizon
// evidence only.
std::optional<int> monitor_persistence(const Trajectory& traj, const Box& set);

// Smallest t >= 1 with x_t in the unsafe set.
std::optional<int> monitor_safety(const Trajectory& traj, const Box& unsafe_set);

}  // namespace icc
