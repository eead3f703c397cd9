#pragma once

// Knuth TwoSum accumulator; branch-free so the SIMD variant can mirror it.

namespace ntlab::kernels::detail {

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double s = sum + x;
    const double bp = s - sum;
    carry += (sum - (s - bp)) + (x - bp);
    sum = s;
  }

  double value() const { return sum + carry; }
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kInvTwoPi = 0.15915494309189533576888376337251;

}  // namespace ntlab::kernels::detail
