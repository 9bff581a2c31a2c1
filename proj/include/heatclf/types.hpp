#pragma once

#include <cstdint>

namespace heatclf {

using NodeId = std::uint32_t;

/// Class ids are 1..K; 0 marks an unlabeled node.
using Label = std::int32_t;
inline constexpr Label kNoLabel = 0;

}  // namespace heatclf
