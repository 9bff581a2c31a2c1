#include "heatclf/metrics.hpp"

#include <string>

#include "heatclf/error.hpp"

namespace heatclf {

std::vector<ClassScore> per_class_scores(std::span<const Label> pred,
                                         std::span<const Label> truth, Label classes) {
  if (pred.size() != truth.size()) {
    fail("prediction has " + std::to_string(pred.size()) + " entries, truth has " +
         std::to_string(truth.size()));
  }
  if (classes < 1) fail("need at least one class");
  const auto k_count = static_cast<std::size_t>(classes);
  std::vector<std::size_t> tp(k_count, 0), predicted(k_count, 0), actual(k_count, 0);
  const auto in_range = [classes](Label l) { return l >= 1 && l <= classes; };
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!in_range(truth[i])) {
      fail("truth label " + std::to_string(truth[i]) + " at position " + std::to_string(i) +
           " outside [1, " + std::to_string(classes) + "]");
    }
    ++actual[static_cast<std::size_t>(truth[i] - 1)];
    if (in_range(pred[i])) {
      ++predicted[static_cast<std::size_t>(pred[i] - 1)];
      if (pred[i] == truth[i]) ++tp[static_cast<std::size_t>(pred[i] - 1)];
    }
  }
  std::vector<ClassScore> out(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    auto& s = out[k];
    s.support = actual[k];
    s.precision = predicted[k] ? static_cast<double>(tp[k]) / static_cast<double>(predicted[k]) : 0.0;
    s.recall = actual[k] ? static_cast<double>(tp[k]) / static_cast<double>(actual[k]) : 0.0;
    const double sum = s.precision + s.recall;
    s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  }
  return out;
}

double macro_f1(std::span<const Label> pred, std::span<const Label> truth, Label classes) {
  const auto scores = per_class_scores(pred, truth, classes);
  double total = 0.0;
  for (const auto& s : scores) total += s.f1;
  return total / static_cast<double>(scores.size());
}

double accuracy(std::span<const Label> pred, std::span<const Label> truth) {
  if (pred.size() != truth.size()) fail("accuracy: length mismatch");
  if (pred.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace heatclf
