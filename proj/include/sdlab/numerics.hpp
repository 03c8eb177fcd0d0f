#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sdlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on P_n; accurate to a few ulps for n <= 128.
GaussRule gauss_legendre(int n);

/// Streaming pairwise summation. The reduction tree depends only on the
/// number of terms added, so the result is reproducible bit for bit.
template <class T>
class PairwiseAccumulator {
 public:
  void add(T value) {
    std::size_t level = 0;
    while (level < stack_.size() && filled_[level]) {
      value = stack_[level] + value;
      filled_[level] = false;
      ++level;
    }
    if (level == stack_.size()) {
      stack_.push_back(value);
      filled_.push_back(true);
    } else {
      stack_[level] = value;
      filled_[level] = true;
    }
    ++count_;
  }

  T result() const {
    T total{};
    for (std::size_t level = 0; level < stack_.size(); ++level)
      if (filled_[level]) total = stack_[level] + total;
    return total;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  std::vector<T> stack_;
  std::vector<bool> filled_;
  std::size_t count_ = 0;
};

template <class T>
T pairwise_sum(std::span<const T> values) {
  PairwiseAccumulator<T> acc;
  for (const T& v : values) acc.add(v);
  return acc.result();
}

/// Kahan-compensated complex sum.
class CompensatedSum {
 public:
  void add(cplx value) {
    const cplx y = value - carry_;
    const cplx t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  cplx result() const noexcept { return sum_; }

 private:
  cplx sum_{};
  cplx carry_{};
};

}  // namespace sdlab
