// SPDX-License-Identifier: Apache-2.0
#include "sembert/num/rng.hpp"

#include <limits>

#include "sembert/error.hpp"

namespace sembert::num {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw RangeError("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace sembert::num
