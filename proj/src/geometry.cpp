#include "icc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icc {

Box::Box(std::vector<double> lo, std::vector<double> up) : lower(std::move(lo)), upper(std::move(up)) {
  if (lower.size() != upper.size()) throw std::invalid_argument("box bound lengths differ");
  for (size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j]) throw std::invalid_argument("box has lower > upper");
}

bool Box::contains(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dimension())
    throw std::invalid_argument("point dimension mismatch");
  for (int j = 0; j < dimension(); ++j)
    if (point[j] < lower[j] - kMembershipTol || point[j] > upper[j] + kMembershipTol) return false;
  return true;
}

std::vector<Interval> Box::intervals() const {
  std::vector<Interval> out(dimension());
  for (int j = 0; j < dimension(); ++j) out[j] = {lower[j], upper[j]};
  return out;
}

std::optional<Box> box_intersect(const Box& a, const Box& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> lo(a.dimension()), up(a.dimension());
  for (int j = 0; j < a.dimension(); ++j) {
    lo[j] = std::max(a.lower[j], b.lower[j]);
    up[j] = std::min(a.upper[j], b.upper[j]);
    if (lo[j] > up[j]) return std::nullopt;
  }
  return Box(lo, up);
}

std::vector<Box> box_difference(const Box& a, const Box& b) {
  auto inter = box_intersect(a, b);
  if (!inter) return {a};
  std::vector<Box> pieces;
  Box rest = a;
  // peel off slabs axis by axis; what remains always contains the intersection
  for (int j = 0; j < a.dimension(); ++j) {
    if (rest.lower[j] < inter->lower[j]) {
      Box slab = rest;
      slab.upper[j] = inter->lower[j];
      pieces.push_back(slab);
      rest.lower[j] = inter->lower[j];
    }
    if (inter->upper[j] < rest.upper[j]) {
      Box slab = rest;
      slab.lower[j] = inter->upper[j];
      pieces.push_back(slab);
      rest.upper[j] = inter->upper[j];
    }
  }
  return pieces;
}

bool box_subset(const Box& inner, const Box& outer) {
  if (inner.dimension() != outer.dimension()) return false;
  for (int j = 0; j < inner.dimension(); ++j)
    if (inner.lower[j] < outer.lower[j] - kMembershipTol ||
        inner.upper[j] > outer.upper[j] + kMembershipTol)
      return false;
  return true;
}

SemiAlgebraicSet box_to_set(const Box& box) {
  SemiAlgebraicSet set;
  set.dimension = box.dimension();
  set.bounding_box = box;
  for (int j = 0; j < box.dimension(); ++j) {
    // x_j - lo_j >= 0
    set.inequalities.push_back(Polynomial::variable(box.dimension(), j) -
                               Polynomial::constant(box.dimension(), box.lower[j]));
    // up_j - x_j >= 0
    set.inequalities.push_back(Polynomial::constant(box.dimension(), box.upper[j]) -
                               Polynomial::variable(box.dimension(), j));
  }
  return set;
}

bool contains(const SemiAlgebraicSet& set, std::span<const double> point) {
  if (static_cast<int>(point.size()) != set.dimension)
    throw std::invalid_argument("point dimension mismatch");
  for (const auto& g : set.inequalities)
    if (g.evaluate(point) < -kMembershipTol) return false;
  return true;
}

SampleGrid::SampleGrid(const Box& box, double epsilon) : box_(box), epsilon_(epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  int d = box.dimension();
  counts_.resize(d);
  widths_.resize(d);
  total_ = 1;
  for (int j = 0; j < d; ++j) {
    double len = box.upper[j] - box.lower[j];
    std::uint64_t c = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len / (2.0 * epsilon) - 1e-12)));
    counts_[j] = c;
    widths_[j] = len / static_cast<double>(c);
    total_ *= c;
  }
}

double SampleGrid::effective_epsilon() const {
  double e = 0.0;
  for (double w : widths_) e = std::max(e, w / 2.0);
  return e;
}

void SampleGrid::center(std::uint64_t index, std::span<double> out) const {
  int d = box_.dimension();
  if (static_cast<int>(out.size()) != d) throw std::invalid_argument("output span size mismatch");
  for (int j = d - 1; j >= 0; --j) {
    std::uint64_t i = index % counts_[j];
    index /= counts_[j];
    out[j] = box_.lower[j] + (static_cast<double>(i) + 0.5) * widths_[j];
  }
}

std::vector<std::vector<double>> SampleGrid::centers() const {
  std::vector<std::vector<double>> out;
  out.reserve(total_);
  for (std::uint64_t i = 0; i < total_; ++i) {
    std::vector<double> p(box_.dimension());
    center(i, p);
    out.push_back(std::move(p));
  }
  return out;
}

ProductGrid::ProductGrid(std::vector<const SampleGrid*> grids) : grids_(std::move(grids)) {
  if (grids_.empty()) throw std::invalid_argument("product of zero grids");
  total_ = 1;
  dim_ = 0;
  for (const auto* g : grids_) {
    total_ *= g->size();
    dim_ += g->source().dimension();
  }
}

void ProductGrid::point(std::uint64_t index, std::span<double> out) const {
  if (static_cast<int>(out.size()) != dim_) throw std::invalid_argument("output span size mismatch");
  int offset = dim_;
  for (int g = static_cast<int>(grids_.size()) - 1; g >= 0; --g) {
    const SampleGrid* grid = grids_[g];
    int d = grid->source().dimension();
    offset -= d;
    std::uint64_t i = index % grid->size();
    index /= grid->size();
    grid->center(i, out.subspan(offset, d));
  }
}

double ProductGrid::effective_epsilon() const {
  double e = 0.0;
  for (const auto* g : grids_) e = std::max(e, g->effective_epsilon());
  return e;
}

}  // namespace icc
