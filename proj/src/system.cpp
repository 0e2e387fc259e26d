#include "icc/system.hpp"

#include <random>
#include <stdexcept>

namespace icc {

void System::validate() const {
  if (n <= 0) throw std::invalid_argument("system dimension must be positive");
  if (state_set.dimension() != n || initial_set.dimension() != n)
    throw std::invalid_argument("box dimension does not match system dimension");
  if (!box_subset(initial_set, state_set))
    throw std::invalid_argument("initial set not contained in state set");
  if (unsafe_set) {
    if (!box_subset(*unsafe_set, state_set))
      throw std::invalid_argument("unsafe set not contained in state set");
    if (box_intersect(initial_set, *unsafe_set))
      throw std::invalid_argument("initial and unsafe sets must be disjoint");
  }
  if (finite_visit_set && !box_subset(*finite_visit_set, state_set))
    throw std::invalid_argument("finite-visit set not contained in state set");
  if (maps.empty()) throw std::invalid_argument("system needs at least one transition map");
  for (const auto& f : maps) {
    if (static_cast<int>(f.size()) != n)
      throw std::invalid_argument("transition map has wrong component count");
    for (const auto& c : f)
      if (c.arity() != n) throw std::invalid_argument("transition component has wrong arity");
  }
}

const std::string& LabelingMap::label(std::span<const double> point) const {
  for (const auto& [box, letter] : regions)
    if (box.contains(point)) return letter;
  return default_letter;
}

std::vector<std::pair<Box, std::string>> LabelingMap::partition(const Box& domain) const {
  std::vector<std::pair<Box, std::string>> out;
  std::vector<Box> unassigned{domain};
  for (const auto& [region, letter] : regions) {
    std::vector<Box> next;
    for (const auto& piece : unassigned) {
      if (auto hit = box_intersect(piece, region)) {
        // boundary-touching slivers have zero volume and would mislabel
        // their midpoints; drop them
        bool degenerate = false;
        for (int j = 0; j < hit->dimension(); ++j)
          if (hit->upper[j] <= hit->lower[j]) degenerate = true;
        if (!degenerate) out.emplace_back(*hit, letter);
      }
      auto rest = box_difference(piece, region);
      next.insert(next.end(), rest.begin(), rest.end());
    }
    unassigned = std::move(next);
  }
  for (const auto& piece : unassigned) out.emplace_back(piece, default_letter);
  return out;
}

std::vector<double> step(const System& sys, std::span<const double> state, int branch) {
  if (branch < 0 || branch >= static_cast<int>(sys.maps.size()))
    throw std::out_of_range("branch index out of range");
  std::vector<double> next(sys.n);
  for (int j = 0; j < sys.n; ++j) next[j] = sys.maps[branch][j].evaluate(state);
  return next;
}

Trajectory simulate(const System& sys, std::span<const double> initial, int horizon,
                    std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!sys.initial_set.contains(initial))
    throw std::invalid_argument("initial state outside the initial set");
  Trajectory traj;
  traj.states.emplace_back(initial.begin(), initial.end());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(sys.maps.size()) - 1);
  for (int t = 0; t < horizon; ++t) {
    int branch = sys.maps.size() == 1 ? 0 : pick(rng);
    auto next = step(sys, traj.states.back(), branch);
    if (!sys.state_set.contains(next)) {
      traj.left_state_set = true;
      break;
    }
    traj.states.push_back(std::move(next));
    traj.branches.push_back(branch);
  }
  return traj;
}

std::vector<std::string> label_trace(const LabelingMap& labeling, const Trajectory& traj) {
  std::vector<std::string> letters;
  letters.reserve(traj.states.size());
  for (const auto& x : traj.states) letters.push_back(labeling.label(x));
  return letters;
}

std::optional<int> monitor_persistence(const Trajectory& traj, const Box& set) {
  std::optional<int> last;
  for (int t = 0; t < static_cast<int>(traj.states.size()); ++t)
    if (set.contains(traj.states[t])) last = t;
  return last;
}

std::optional<int> monitor_safety(const Trajectory& traj, const Box& unsafe_set) {
  for (int t = 1; t < static_cast<int>(traj.states.size()); ++t)
    if (unsafe_set.contains(traj.states[t])) return t;
  return std::nullopt;
}

}  // namespace icc
