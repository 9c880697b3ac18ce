#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cdyn {

// Row a.x <= b.
struct HalfSpace {
  std::vector<double> a;
  double b;
};

// Seidel's incremental LP for small dimension: maximize c.x over the halfspaces
// intersected with the box lo <= x <= hi. Returns nullopt when infeasible.
// The shuffle seed only affects which optimal vertex is reported.
std::optional<std::vector<double>> seidel_lp(const std::vector<double>& c,
                                             std::vector<HalfSpace> rows,
                                             const std::vector<double>& lo,
                                             const std::vector<double>& hi,
                                             std::uint64_t seed = 1);

} // namespace cdyn
