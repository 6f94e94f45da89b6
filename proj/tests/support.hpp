#pragma once

#include <string>

#include "logdepth/text.hpp"

namespace test {

inline logdepth::Formula<logdepth::Rationals> q(const std::string& expr) {
  return logdepth::parse_as(expr, logdepth::Rationals{});
}

inline logdepth::Formula<logdepth::Rationals> nc(const std::string& expr) {
  return logdepth::parse_as("mode: noncommutative\n" + expr, logdepth::Rationals{});
}

}  // namespace test
