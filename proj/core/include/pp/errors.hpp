#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace pp {

// Error taxonomy shared by all modules. The CLI maps exceptions onto exit
// codes: identifiability_error -> 2, assumption_error -> 3, everything else
// (data_error, linalg_error, parse failures) -> 1.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent inputs: size/grid mismatches, NaN in sampled
// data, bad configuration values.
struct data_error : error {
  using error::error;
};

// A declared data assumption is violated (coefficient positivity/bounds,
// Dirichlet compatibility of the initial profile).
struct assumption_error : error {
  using error::error;
};

// The measurement cannot determine h: a reconstruction denominator fell
// below its floor (discrete analogue of a vanishing weighted source average).
struct identifiability_error : error {
  identifiability_error(const std::string& what, int step_index = -1,
                        double time_stamp = std::nan(""))
      : error(what), step(step_index), time(time_stamp) {}
  int step;     // 1-based time-step index, -1 when unknown
  double time;  // t at failure, NaN when unknown
};

// Strict diagonal dominance lost; tridiagonal elimination is not safe.
struct linalg_error : error {
  using error::error;
};

}  // namespace pp
