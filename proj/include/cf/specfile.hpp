#pragma once

// Flat key = value scenario files, one key per line, '#' comments.
// Bloch vectors are three comma-separated reals in (x,y,z) order and are
// normalized onto the sphere on input. The input state defaults to the
// maximally mixed qubit; a pure state is given by polar/azimuthal angles in
// radians. Unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cf/wigner.hpp"

namespace cf {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " +
                           message),
        line(line_number) {}
};

struct SpecFile {
  ScenarioConfig config;
  // Echo of the input-state description for reports.
  std::string input_state_kind;           // "maximally_mixed" or "pure"
  double polar = 0.0, azimuthal = 0.0;    // meaningful when pure
  double tol = 1e-9;
  std::uint64_t seed = 0;

  static SpecFile parse(std::string_view text);
  static SpecFile load(const std::string& path);
};

}  // namespace cf
