#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "icc/poly.hpp"

namespace icc {

// Membership in closed sets is tested with this slack so boundary points
// survive floating-point round-off.
constexpr double kMembershipTol = 1e-12;

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> up);

  int dimension() const { return static_cast<int>(lower.size()); }
  bool contains(std::span<const double> point) const;
  std::vector<Interval> intervals() const;
};

// Intersection, empty when the boxes do not overlap.
std::optional<Box> box_intersect(const Box& a, const Box& b);

// a minus b as a list of disjoint boxes (possibly sharing boundary faces).
std::vector<Box> box_difference(const Box& a, const Box& b);

bool box_subset(const Box& inner, const Box& outer);

// {x | g_i(x) >= 0 for all i}
struct SemiAlgebraicSet {
  int dimension = 0;
  std::vector<Polynomial> inequalities;
  std::optional<Box> bounding_box;
};

SemiAlgebraicSet box_to_set(const Box& box);
bool contains(const SemiAlgebraicSet& set, std::span<const double> point);

// Centers of an axis-aligned cover of the box by hypercubes of side at most
// 2*epsilon. Cell counts round up, so the realized cover radius
// (effective_epsilon) can be smaller than the requested epsilon.
class SampleGrid {
 public:
  SampleGrid(const Box& box, double epsilon);

  std::uint64_t size() const { return total_; }
  double epsilon() const { return epsilon_; }
  double effective_epsilon() const;
  const Box& source() const { return box_; }

  // Row-major: the last axis varies fastest.
  void center(std::uint64_t index, std::span<double> out) const;
  std::vector<std::vector<double>> centers() const;

 private:
  Box box_;
  double epsilon_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> widths_;
  std::uint64_t total_;
};

// Lazy Cartesian product over a list of grids, deterministic order (last
// grid varies fastest).
class ProductGrid {
 public:
  explicit ProductGrid(std::vector<const SampleGrid*> grids);

  std::uint64_t size() const { return total_; }
  int dimension() const { return dim_; }
  void point(std::uint64_t index, std::span<double> out) const;
  double effective_epsilon() const;

 private:
  std::vector<const SampleGrid*> grids_;
  std::uint64_t total_;
  int dim_;
};

}  // namespace icc
