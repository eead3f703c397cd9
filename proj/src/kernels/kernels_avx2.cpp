// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; callers reach it through the dispatcher after a CPUID check.

#include <immintrin.h>

#include <array>
#include <cmath>

#include "compensated.hpp"
#include "ntlab/errors.hpp"
#include "ntlab/kernels.hpp"

namespace ntlab::kernels::avx2 {

using detail::CompensatedSum;
using detail::kInvTwoPi;
using detail::kTwoPi;

namespace {

constexpr int kRound = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;

struct VecSum {
  __m256d sum = _mm256_setzero_pd();
  __m256d carry = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d s = _mm256_add_pd(sum, x);
    const __m256d bp = _mm256_sub_pd(s, sum);
    const __m256d err = _mm256_add_pd(_mm256_sub_pd(sum, _mm256_sub_pd(s, bp)), _mm256_sub_pd(x, bp));
    carry = _mm256_add_pd(carry, err);
    sum = s;
  }

  // Lanes folded in a fixed order into the scalar accumulator.
  void drain(CompensatedSum& acc) const {
    alignas(32) std::array<double, 4> s{};
    alignas(32) std::array<double, 4> c{};
    _mm256_store_pd(s.data(), sum);
    _mm256_store_pd(c.data(), carry);
    for (double v : s) acc.add(v);
    for (double v : c) acc.add(v);
  }
};

inline __m256d poly(__m256d x, std::initializer_list<double> coeffs_high_to_low) {
  auto it = coeffs_high_to_low.begin();
  __m256d r = _mm256_set1_pd(*it++);
  for (; it != coeffs_high_to_low.end(); ++it) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(*it));
  return r;
}

// cos(2 pi t) for arbitrary t: drop whole turns, split into quadrants, then
// Taylor polynomials on [-pi/4, pi/4] (truncation error below 1e-17).
inline __m256d cos_turns(__m256d t) {
  const __m256d r = _mm256_sub_pd(t, _mm256_round_pd(t, kRound));
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(r, _mm256_set1_pd(4.0)), kRound);
  const __m256d f = _mm256_fnmadd_pd(q, _mm256_set1_pd(0.25), r);
  const __m256d a = _mm256_mul_pd(f, _mm256_set1_pd(kTwoPi));
  const __m256d a2 = _mm256_mul_pd(a, a);

  const __m256d c = poly(a2, {1.0 / 20922789888000.0, -1.0 / 87178291200.0, 1.0 / 479001600.0,
                              -1.0 / 3628800.0, 1.0 / 40320.0, -1.0 / 720.0, 1.0 / 24.0, -0.5, 1.0});
  const __m256d s = _mm256_mul_pd(
      a, poly(a2, {1.0 / 355687428096000.0, -1.0 / 1307674368000.0, 1.0 / 6227020800.0,
                   -1.0 / 39916800.0, 1.0 / 362880.0, -1.0 / 5040.0, 1.0 / 120.0, -1.0 / 6.0, 1.0}));

  const __m256i q64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(q));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d use_sin = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q64, one), one));
  const __m256d negate =
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q64, one), two), two));
  const __m256d v = _mm256_blendv_pd(c, s, use_sin);
  return _mm256_xor_pd(v, _mm256_and_pd(negate, _mm256_set1_pd(-0.0)));
}

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

template <unsigned Power>
double abs_diff_power_sum_impl(std::span<const double> a, std::span<const double> b) {
  VecSum vacc;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
    __m256d p = d;
    if constexpr (Power == 2) p = _mm256_mul_pd(d, d);
    if constexpr (Power == 3) p = _mm256_mul_pd(_mm256_mul_pd(d, d), d);
    if constexpr (Power == 4) {
      const __m256d sq = _mm256_mul_pd(d, d);
      p = _mm256_mul_pd(sq, sq);
    }
    vacc.add(p);
  }
  CompensatedSum acc;
  vacc.drain(acc);
  if (i < n) acc.add(scalar::abs_diff_power_sum(a.subspan(i), b.subspan(i), Power));
  return acc.value();
}

}  // namespace

double abs_diff_power_sum(std::span<const double> a, std::span<const double> b, unsigned power) {
  require(a.size() == b.size(), ErrorKind::InvalidArgument, "abs_diff_power_sum: span sizes differ");
  switch (power) {
    case 1: return abs_diff_power_sum_impl<1>(a, b);
    case 2: return abs_diff_power_sum_impl<2>(a, b);
    case 3: return abs_diff_power_sum_impl<3>(a, b);
    case 4: return abs_diff_power_sum_impl<4>(a, b);
    default: fail(ErrorKind::InvalidArgument, "abs_diff_power_sum: power must be 1..4");
  }
}

double sqrt_phase_cos_sum(std::span<const double> weights, std::uint64_t first_n, double x,
                          double scale, double phase_turns) {
  VecSum vacc;
  const std::size_t n = weights.size();
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vphase = _mm256_set1_pd(phase_turns);
  const __m256d step = _mm256_set1_pd(4.0);
  const double n0 = static_cast<double>(first_n);
  __m256d vn = _mm256_setr_pd(n0, n0 + 1.0, n0 + 2.0, n0 + 3.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d nx = _mm256_mul_pd(vn, vx);
    const __m256d root = _mm256_sqrt_pd(nx);
    const __m256d root_lo =
        _mm256_div_pd(_mm256_fnmadd_pd(root, root, nx), _mm256_add_pd(root, root));
    const __m256d hi = _mm256_mul_pd(vscale, root);
    const __m256d hi_err = _mm256_fmsub_pd(vscale, root, hi);
    const __m256d frac = _mm256_sub_pd(hi, _mm256_round_pd(hi, kRound));
    const __m256d turns =
        _mm256_add_pd(_mm256_add_pd(frac, _mm256_fmadd_pd(vscale, root_lo, hi_err)), vphase);
    vacc.add(_mm256_mul_pd(_mm256_loadu_pd(weights.data() + i), cos_turns(turns)));
    vn = _mm256_add_pd(vn, step);
  }
  CompensatedSum acc;
  vacc.drain(acc);
  if (i < n) acc.add(scalar::sqrt_phase_cos_sum(weights.subspan(i), first_n + i, x, scale, phase_turns));
  return acc.value();
}

double log_phase_cos_sum(std::span<const double> weights, std::span<const double> log_n, double t,
                         double theta) {
  require(weights.size() == log_n.size(), ErrorKind::InvalidArgument,
          "log_phase_cos_sum: span sizes differ");
  VecSum vacc;
  const std::size_t n = weights.size();
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d vtheta = _mm256_set1_pd(theta);
  const __m256d inv = _mm256_set1_pd(kInvTwoPi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d logs = _mm256_loadu_pd(log_n.data() + i);
    const __m256d y = _mm256_mul_pd(vt, logs);
    const __m256d y_err = _mm256_fmsub_pd(vt, logs, y);
    const __m256d turns = _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(vtheta, y), inv), _mm256_mul_pd(y_err, inv));
    vacc.add(_mm256_mul_pd(_mm256_loadu_pd(weights.data() + i), cos_turns(turns)));
  }
  CompensatedSum acc;
  vacc.drain(acc);
  if (i < n) acc.add(scalar::log_phase_cos_sum(weights.subspan(i), log_n.subspan(i), t, theta));
  return acc.value();
}

}  // namespace ntlab::kernels::avx2
