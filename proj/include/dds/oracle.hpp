#pragma once

#include "dds/graph.hpp"

namespace dds {

class SizeCapExceeded : public Error
{
public:
  SizeCapExceeded(VertexId side_size, VertexId cap);
  [[nodiscard]] VertexId cap() const noexcept { return cap_; }

private:
  VertexId cap_;
};

struct ExactResult
{
  VertexPair pair;
  DensityValue density;
};

inline constexpr VertexId kDefaultOracleCap = 14;

/**
 * Brute-force densest pair over all 2^|S| * 2^|T| non-empty subset pairs.
 *
 * Among maximal pairs the one with the numerically smallest source bitmask,
 * then smallest target bitmask, wins. Densities are compared exactly.
 * Throws SizeCapExceeded when side_size() > cap (caps above 24 are clamped).
 */
[[nodiscard]] ExactResult exact_densest(BipartiteGraph const& g, VertexId cap = kDefaultOracleCap);

} // namespace dds
