#ifndef EEGL_METRICS_H_
#define EEGL_METRICS_H_

#include <span>
#include <vector>

namespace eegl {

// confusion[truth][predicted]
using Confusion = std::vector<std::vector<long>>;

Confusion confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                           int num_classes);

// Support-weighted mean of per-class F1, as a percentage. A class with a
// zero denominator scores 0. Throws kEmptyMatrix on a 0x0 or all-zero matrix.
double weighted_f1(const Confusion& confusion);

// Binary F1 in [0, 1], 0 when tp + fp + fn == 0.
double binary_f1(long tp, long fp, long fn);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population SD
};
MeanSd mean_sd(std::span<const double> values);

}  // namespace eegl

#endif  // EEGL_METRICS_H_
