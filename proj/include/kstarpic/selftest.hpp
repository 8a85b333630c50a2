#pragma once

// Randomized property suites shared between the unit tests, the acceptance
// runner, and the command-line `verify` command.  Each suite returns true on
// success and appends human-readable failure descriptions otherwise.

#include <cstdint>
#include <string>
#include <vector>

namespace kstarpic {

// Core integer linear algebra properties (normal forms, kernels, minors,
// exact solving) over random matrices.
bool selftest_exactlin(std::uint64_t seed, int cases, std::vector<std::string>& failures);

// Properties of random valid defining matrices: assembly/validation
// round-trips, fan structure, and agreement of all Picard-index routes.
bool selftest_defining_matrices(std::uint64_t seed, int cases, std::vector<std::string>& failures);

// Properties of random complete two-dimensional fans: chart/glue invariants
// of the Picard computations.
bool selftest_fans2d(std::uint64_t seed, int cases, std::vector<std::string>& failures);

}  // namespace kstarpic
