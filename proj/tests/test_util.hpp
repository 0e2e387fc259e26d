#pragma once

#include <random>
#include <vector>

#include "icc/poly.hpp"

namespace icc::test {

inline Polynomial random_poly(std::mt19937_64& rng, int arity, int max_degree, int max_terms) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  std::vector<Term> terms;
  int count = nterms(rng);
  for (int t = 0; t < count; ++t) {
    int d = deg(rng);
    std::vector<int> e(arity, 0);
    for (int used = 0; used < d; ++used) {
      std::uniform_int_distribution<int> var(0, arity - 1);
      e[var(rng)] += 1;
    }
    terms.push_back({coeff(rng), std::move(e)});
  }
  return Polynomial(arity, std::move(terms));
}

inline std::vector<double> random_point(std::mt19937_64& rng, const std::vector<Interval>& box) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> p(box.size());
  for (size_t j = 0; j < box.size(); ++j)
    p[j] = box[j].lo + unif(rng) * (box[j].hi - box[j].lo);
  return p;
}

}  // namespace icc::test
