#pragma once

#include <utility>
#include <vector>

#include "scj/core.hpp"

namespace scj {

/// Reference join: nested loop with a per-pair subset test, sharing no code
/// with the engine's intersection or traversal paths. Pairs come back sorted
/// by (left oid, right oid).
std::vector<std::pair<Oid, Oid>> brute_force_join(const Collection& left,
                                                  const Collection& right);

}  // namespace scj
