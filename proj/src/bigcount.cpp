#include "ktour/bigcount.hpp"

#include <algorithm>

#include "ktour/error.hpp"

namespace ktour {

std::string to_decimal(const BigCount& value) { return value.str(); }

BigCount parse_decimal(std::string_view text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(),
                                    [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParameterError("not a nonnegative decimal integer: '" +
                         std::string(text) + "'");
  }
  return BigCount(std::string(text));
}

void add_checked(std::uint64_t& acc, std::uint64_t delta) {
  if (__builtin_add_overflow(acc, delta, &acc)) {
    throw ConsistencyError("64-bit tour counter overflow");
  }
}

}  // namespace ktour
