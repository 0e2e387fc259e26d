#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icc/certificate.hpp"

namespace icc {

enum class Verdict { sound_pass, sample_pass, fail };
std::string to_string(Verdict v);

enum class LipschitzMode { interval, sampled };

struct Violation {
  std::vector<double> point;
  double value = 0.0;
};

struct FamilyReport {
  std::string name;
  std::uint64_t samples = 0;
  double min_value = 0.0;
  std::vector<double> argmin;
  std::vector<Violation> violations;  // capped
  double lipschitz = 0.0;
  double epsilon_effective = 0.0;
  bool sound = false;  // min_value >= lipschitz * epsilon_effective
};

struct CheckReport {
  std::vector<FamilyReport> families;
  Verdict verdict = Verdict::fail;
  bool gate_passed() const { return verdict == Verdict::sound_pass; }
};

inline constexpr int kViolationCap = 1000;

// Exhaustive evaluation on product grids of half-width epsilon over each
// residual's factor boxes. A family is sound when its sampled minimum
// clears the Lipschitz margin L' * epsilon_effective.
CheckReport check(const ResidualSet& residuals, double epsilon, LipschitzMode mode,
                  int threads = 1);

// Uniform random search for negative residual values, sorted most negative
// first.
std::vector<std::pair<std::string, Violation>> falsify(const ResidualSet& residuals, int budget,
                                                       std::uint64_t seed);

// Sampling soundness gate: L' * epsilon + delta* <= 0.
bool check_thm12_gate(double delta_star, double lipschitz_bound, double epsilon_effective);

}  // namespace icc
