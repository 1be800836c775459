#pragma once

#include <string>

#include "walpert/measure.hpp"

namespace walpert {

// Measure spec:
//   {"atoms":[{"x":<num>,"mass":<num>}...],
//    "pieces":[{"a":<num>,"b":<num>,"coeffs":[<num>...]}...],
//    "mode":"exact"|"float"}
// Numbers may be JSON numbers, decimal strings, or {"num":p,"den":q}.
Measure measure_from_json(const std::string& text);
Measure measure_from_json_file(const std::string& path);
std::string measure_to_json(const Measure& m);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace walpert
