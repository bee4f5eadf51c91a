#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ktour {

// Unbounded nonnegative tally used wherever counts are aggregated.
using BigCount = boost::multiprecision::cpp_int;

std::string to_decimal(const BigCount& value);

// Accepts only [0-9]+. Throws ParameterError otherwise.
BigCount parse_decimal(std::string_view text);

// Hot-loop counter addition; throws ConsistencyError on wraparound.
void add_checked(std::uint64_t& acc, std::uint64_t delta);

}  // namespace ktour
