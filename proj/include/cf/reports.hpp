#pragma once

// Command engines: each produces a self-contained JSON report that, together
// with the echoed configuration and seed, reproduces bit-exactly on re-run.
// Reports never embed wall-clock state.

#include "cf/json_io.hpp"
#include "cf/specfile.hpp"

namespace cf {

inline constexpr const char* kToolVersion = "0.1.0";

json simulate_report(const SpecFile& spec, bool reverse);
json membership_report(const BehaviorTable& behavior, double tol);
json lemmas_report(int samples, std::uint64_t seed, double tol);
json boxworld_report();
json sweep_report(const SpecFile* spec_or_null, int grid, int refine,
                  std::uint64_t seed);
json wigner_demo_report();

}  // namespace cf
