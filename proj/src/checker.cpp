#include "icc/checker.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace icc {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::sound_pass: return "sound-pass";
    case Verdict::sample_pass: return "sample-pass";
    case Verdict::fail: return "fail";
  }
  return "?";
}

namespace {

// Evaluator with per-point power tables; summation in canonical term order.
class FastEval {
 public:
  explicit FastEval(const Polynomial& p) : poly_(p), max_exp_(p.arity(), 0) {
    for (const auto& t : p.terms())
      for (int j = 0; j < p.arity(); ++j) max_exp_[j] = std::max(max_exp_[j], t.exps[j]);
    int total = 0;
    offsets_.resize(p.arity());
    for (int j = 0; j < p.arity(); ++j) {
      offsets_[j] = total;
      total += max_exp_[j] + 1;
    }
    pows_.resize(total);
  }

  double eval(const double* pt) {
    for (int j = 0; j < poly_.arity(); ++j) {
      double* base = pows_.data() + offsets_[j];
      base[0] = 1.0;
      for (int e = 1; e <= max_exp_[j]; ++e) base[e] = base[e - 1] * pt[j];
    }
    double sum = 0.0;
    for (const auto& t : poly_.terms()) {
      double v = t.coeff;
      for (int j = 0; j < poly_.arity(); ++j) v *= pows_[offsets_[j] + t.exps[j]];
      sum += v;
    }
    return sum;
  }

 private:
  const Polynomial& poly_;
  std::vector<int> max_exp_;
  std::vector<int> offsets_;
  std::vector<double> pows_;
};

std::vector<Interval> domain_intervals(const Residual& r) {
  std::vector<Interval> box;
  for (const auto& f : r.factors) {
    auto iv = f.intervals();
    box.insert(box.end(), iv.begin(), iv.end());
  }
  return box;
}

double sampled_lipschitz(const Residual& r, std::uint64_t seed) {
  auto box = domain_intervals(r);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&](std::vector<double>& p) {
    for (size_t j = 0; j < box.size(); ++j)
      p[j] = box[j].lo + unif(rng) * (box[j].hi - box[j].lo);
  };
  std::vector<double> a(box.size()), b(box.size());
  double best = 0.0;
  for (int it = 0; it < 2000; ++it) {
    draw(a);
    draw(b);
    double dist = 0.0;
    for (size_t j = 0; j < box.size(); ++j) dist = std::max(dist, std::abs(a[j] - b[j]));
    if (dist < 1e-12) continue;
    double diff = std::abs(r.poly.evaluate(a) - r.poly.evaluate(b));
    best = std::max(best, diff / dist);
  }
  return best;
}

struct ChunkResult {
  double min_value = std::numeric_limits<double>::infinity();
  std::uint64_t argmin_index = 0;
  std::vector<std::pair<std::uint64_t, Violation>> violations;
};

ChunkResult scan_chunk(const Residual& r, const ProductGrid& grid, std::uint64_t begin,
                       std::uint64_t end) {
  ChunkResult res;
  FastEval eval(r.poly);
  std::vector<double> pt(grid.dimension());
  for (std::uint64_t i = begin; i < end; ++i) {
    grid.point(i, pt);
    double v = eval.eval(pt.data());
    if (v < res.min_value) {
      res.min_value = v;
      res.argmin_index = i;
    }
    if (v < 0.0 && res.violations.size() < kViolationCap)
      res.violations.emplace_back(i, Violation{pt, v});
  }
  return res;
}

}  // namespace

CheckReport check(const ResidualSet& residuals, double epsilon, LipschitzMode mode, int threads) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (threads < 1) threads = 1;
  CheckReport report;
  bool any_violation = false;
  bool all_sound = true;

  for (const auto& r : residuals.items) {
    std::vector<SampleGrid> grids;
    grids.reserve(r.factors.size());
    for (const auto& f : r.factors) grids.emplace_back(f, epsilon);
    std::vector<const SampleGrid*> ptrs;
    for (const auto& g : grids) ptrs.push_back(&g);
    ProductGrid grid(std::move(ptrs));

    FamilyReport fam;
    fam.name = r.name;
    fam.samples = grid.size();
    fam.epsilon_effective = grid.effective_epsilon();
    auto box = domain_intervals(r);
    fam.lipschitz =
        mode == LipschitzMode::interval ? r.poly.lipschitz_bound(box) : sampled_lipschitz(r, 1);

    std::uint64_t total = grid.size();
    int nthreads = static_cast<int>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, total)));
    std::vector<ChunkResult> chunks(nthreads);
    if (nthreads == 1) {
      chunks[0] = scan_chunk(r, grid, 0, total);
    } else {
      std::vector<std::thread> workers;
      std::uint64_t per = (total + nthreads - 1) / nthreads;
      for (int t = 0; t < nthreads; ++t) {
        std::uint64_t b = per * t, e = std::min<std::uint64_t>(total, per * (t + 1));
        workers.emplace_back([&, t, b, e] { chunks[t] = scan_chunk(r, grid, b, e); });
      }
      for (auto& w : workers) w.join();
    }

    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_idx = 0;
    for (const auto& c : chunks) {
      if (c.min_value < best || (c.min_value == best && c.argmin_index < best_idx)) {
        best = c.min_value;
        best_idx = c.argmin_index;
      }
      for (const auto& [idx, v] : c.violations)
        if (fam.violations.size() < kViolationCap) fam.violations.push_back(v);
    }
    fam.min_value = best;
    fam.argmin.resize(grid.dimension());
    if (total > 0) grid.point(best_idx, fam.argmin);
    fam.sound = fam.min_value >= fam.lipschitz * fam.epsilon_effective;

    if (!fam.violations.empty()) any_violation = true;
    if (!fam.sound) all_sound = false;
    report.families.push_back(std::move(fam));
  }

  report.verdict = any_violation ? Verdict::fail
                                 : (all_sound ? Verdict::sound_pass : Verdict::sample_pass);
  return report;
}

std::vector<std::pair<std::string, Violation>> falsify(const ResidualSet& residuals, int budget,
                                                       std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<std::string, Violation>> out;
  for (const auto& r : residuals.items) {
    auto box = domain_intervals(r);
    std::vector<double> pt(box.size());
    for (int i = 0; i < budget; ++i) {
      for (size_t j = 0; j < box.size(); ++j)
        pt[j] = box[j].lo + unif(rng) * (box[j].hi - box[j].lo);
      double v = r.poly.evaluate(pt);
      if (v < 0.0) out.emplace_back(r.name, Violation{pt, v});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second.value < b.second.value; });
  return out;
}

bool check_thm12_gate(double delta_star, double lipschitz_bound, double epsilon_effective) {
  if (epsilon_effective <= 0.0) throw std::invalid_argument("epsilon must be positive");
  return lipschitz_bound * epsilon_effective + delta_star <= 0.0;
}

}  // namespace icc
