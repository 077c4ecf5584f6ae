#include "eegl/metrics.h"

#include <cmath>

#include "eegl/error.h"

namespace eegl {

Confusion confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                           int num_classes) {
  if (truth.size() != predicted.size())
    throw Error(ErrorCode::kDimensionMismatch, "truth and prediction lengths differ");
  Confusion c(num_classes, std::vector<long>(num_classes, 0));
  for (size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes)
      throw Error(ErrorCode::kLabelOutOfRange, "class id outside 0..num_classes-1");
    ++c[truth[i]][predicted[i]];
  }
  return c;
}

double binary_f1(long tp, long fp, long fn) {
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double weighted_f1(const Confusion& confusion) {
  const int k = static_cast<int>(confusion.size());
  if (k == 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  for (const auto& row : confusion)
    if (static_cast<int>(row.size()) != k)
      throw Error(ErrorCode::kDimensionMismatch, "confusion matrix is not square");
  long total = 0;
  double acc = 0.0;
  for (int c = 0; c < k; ++c) {
    long support = 0, predicted = 0;
    for (int j = 0; j < k; ++j) {
      support += confusion[c][j];
      predicted += confusion[j][c];
    }
    const long tp = confusion[c][c];
    acc += static_cast<double>(support) * binary_f1(tp, predicted - tp, support - tp);
    total += support;
  }
  if (total == 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix has no entries");
  return 100.0 * acc / static_cast<double>(total);
}

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(values.size()));
  return out;
}

}  // namespace eegl
