#pragma once

// Brute-force definitional metrics over plain 0/1 matrices. Written without
// any library types so it stays independent of the code under test.

#include <cstddef>
#include <vector>

namespace emoharness::testing::oracle {

using Matrix = std::vector<std::vector<int>>;  // [example][label]

struct Counts {
  long tp = 0, fp = 0, fn = 0, tn = 0;
};

inline Counts tally(const Matrix& gold, const Matrix& pred, std::size_t label) {
  Counts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const int g = gold[i][label];
    const int p = pred[i][label];
    c.tp += g * p;
    c.fp += (1 - g) * p;
    c.fn += g * (1 - p);
    c.tn += (1 - g) * (1 - p);
  }
  return c;
}

// F1 via 2tp / (2tp + fp + fn): algebraically equal to the harmonic mean of
// precision and recall, 0 when there are no positives at all.
inline double f1(long tp, long fp, long fn) {
  const long den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : (2.0 * static_cast<double>(tp)) / static_cast<double>(den);
}

inline double macro(const Matrix& gold, const Matrix& pred, std::size_t labels) {
  double sum = 0.0;
  for (std::size_t k = 0; k < labels; ++k) {
    const auto c = tally(gold, pred, k);
    sum += f1(c.tp, c.fp, c.fn);
  }
  return sum / static_cast<double>(labels);
}

inline double micro(const Matrix& gold, const Matrix& pred, std::size_t labels) {
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < labels; ++k) {
    const auto c = tally(gold, pred, k);
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  return f1(tp, fp, fn);
}

}  // namespace emoharness::testing::oracle
