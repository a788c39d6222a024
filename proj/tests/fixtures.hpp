#pragma once

// Shared probe objects for the unit tests.

#include <vector>

#include "topos/finset.hpp"

namespace fixtures {

/// {}, {0}, {0,1}, ... up to size n.
inline std::vector<topos::FinSetObject> sets_up_to(std::size_t n) {
  std::vector<topos::FinSetObject> out;
  for (std::size_t k = 0; k <= n; ++k) out.push_back(topos::FinSetObject::range(k));
  return out;
}

}  // namespace fixtures
