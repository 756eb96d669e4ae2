#pragma once

#include <cstdint>
#include <string>

namespace dtcns::testing {

struct CheckResult {
  bool ok = false;
  std::string detail;
};

/// Empirical infection frequency of a fixed contact pattern against the
/// closed-form probability, within 3 standard errors.
CheckResult infection_probability_monte_carlo(int trials, std::uint64_t seed);

/// Analytic parameter and input gradients against central differences on
/// `nets` random networks; also checks the actor gradient through a critic.
CheckResult gradient_check(int nets, std::uint64_t seed, double step = 1e-4,
                           double tolerance = 1e-4);

/// Exact bond symmetry on every tick of a random-genome run.
CheckResult bond_symmetry_fuzz(int ticks, std::uint64_t seed);

/// Independent recomputation of scores, decisions, intensities, bonds,
/// rewards and infections against the engine, tick by tick, for N = 2..4.
CheckResult brute_force_pipeline(int ticks, std::uint64_t seed);

/// Repeated seeded runs produce byte-identical trace CSVs.
CheckResult trace_determinism(std::uint64_t seed);

}  // namespace dtcns::testing
