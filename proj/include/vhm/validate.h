#pragma once

#include "vhm/types.h"

#include <cstdint>
#include <string>
#include <vector>

namespace vhm {

struct SuiteMetric {
  std::string name;
  double value;
};

struct SuiteResult {
  std::string suite;
  bool passed = false;
  std::vector<SuiteMetric> metrics;
  std::vector<std::string> notes;

  double metric(const std::string& name) const;
};

/// Built-in oracle suites. Each generates its own meshes, compares against
/// the closed-form references, and reports pass/fail plus the measured
/// numbers (including elapsed seconds).

/// Planar transport must be exact: max angle error < 1e-6 rad and relative
/// magnitude error < 1e-8 on square grids of the given resolutions, measured
/// at least 10h away from the four corners.
SuiteResult validateFlatExactness(const std::vector<int>& gridSizes = {40, 80, 160});

/// Mean transport error against the sphere oracle over `levels` icosphere
/// refinements starting at subdivision 2; the log-log slope must lie in
/// [0.8, 1.5] and the finest mean below 0.05 rad.
SuiteResult validateSphereConvergence(int levels = 3);

/// Sweeps the time multiplier m over {1/8 .. 8} on three irregular sphere
/// triangulations; the mean transport error must have an interior minimum
/// with argmin in [0.5, 2].
SuiteResult validateTimeSweep();

/// transportRoundtrip on seeded vertex pairs across three meshes: the round
/// trip must be a positive real scaling to 1e-8.
SuiteResult validateRoundTrips(int pairsPerMesh = 100, uint64_t seed = 7);

/// Heat-method transport against trace-and-unfold references along seeded
/// geodesics; the mean angular discrepancy must stay below 0.05 rad.
SuiteResult validateTraceOracle(int traces = 50, uint64_t seed = 11);

/// Dispatch by suite name: flat-exactness, sphere-convergence, t-sweep,
/// round-trip, trace-oracle. Throws Error for unknown names.
SuiteResult runValidationSuite(const std::string& name, int levels, uint64_t seed);

std::vector<std::string> validationSuiteNames();

} // namespace vhm
