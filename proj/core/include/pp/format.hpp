#pragma once

#include <string>

namespace pp {

// Shortest decimal form that parses back to the identical double
// (std::to_chars round-trip guarantee). NaN/inf render as "nan"/"inf"/"-inf".
// No locale involvement.
std::string format_double(double v);

}  // namespace pp
