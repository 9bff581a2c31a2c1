#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "heatclf/types.hpp"

namespace heatclf {

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

/// Per-class precision/recall/F1 for classes 1..K. Empty denominators count
/// as 0. Predictions outside [1, K] (e.g. kNoLabel for unreached nodes) are
/// misses for the true class and false positives for none.
std::vector<ClassScore> per_class_scores(std::span<const Label> pred,
                                         std::span<const Label> truth, Label classes);

/// Unweighted mean of per-class F1 over classes 1..K.
double macro_f1(std::span<const Label> pred, std::span<const Label> truth, Label classes);

double accuracy(std::span<const Label> pred, std::span<const Label> truth);

}  // namespace heatclf
