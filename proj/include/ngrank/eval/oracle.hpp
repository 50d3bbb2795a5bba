#pragma once

#include <cstddef>

#include "ngrank/fusion.hpp"
#include "ngrank/mfr.hpp"

namespace ngrank::eval {

/// Reference greedy selection for small instances: at every step each
/// remaining candidate's score is recomputed from scratch over the whole
/// selected list. Throws SizeError when the fused graph has more than 50
/// nodes.
FinalRanking oracle_mfr(const FusedGraph& fused, const PairwiseFn& pairwise, std::size_t k);

inline constexpr std::size_t kOracleMaxNodes = 50;

}  // namespace ngrank::eval
