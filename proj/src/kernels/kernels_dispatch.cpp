#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ntlab/kernels.hpp"

namespace ntlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(NTLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const char* forced = std::getenv("NTLAB_FORCE_SCALAR");
  if (forced != nullptr && std::strcmp(forced, "0") != 0) return Isa::Scalar;
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

Isa active_isa() { return active().load(); }

void set_active_isa(Isa isa) { active().store(isa_available(isa) ? isa : Isa::Scalar); }

double abs_diff_power_sum(std::span<const double> a, std::span<const double> b, unsigned power) {
#if defined(NTLAB_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::abs_diff_power_sum(a, b, power);
#endif
  return scalar::abs_diff_power_sum(a, b, power);
}

double sqrt_phase_cos_sum(std::span<const double> weights, std::uint64_t first_n, double x,
                          double scale, double phase_turns) {
#if defined(NTLAB_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::sqrt_phase_cos_sum(weights, first_n, x, scale, phase_turns);
#endif
  return scalar::sqrt_phase_cos_sum(weights, first_n, x, scale, phase_turns);
}

double log_phase_cos_sum(std::span<const double> weights, std::span<const double> log_n, double t,
                         double theta) {
#if defined(NTLAB_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::log_phase_cos_sum(weights, log_n, t, theta);
#endif
  return scalar::log_phase_cos_sum(weights, log_n, t, theta);
}

}  // namespace ntlab::kernels
