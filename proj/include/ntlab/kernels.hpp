#pragma once

// Data-parallel inner loops shared by the moment sums, the Voronoi series and
// the Riemann–Siegel main sum. Each kernel has a scalar reference version and,
// on x86-64 builds, an AVX2/FMA version; the dispatching entry points pick one
// at runtime. Every kernel accumulates with a compensated (TwoSum) update so
// the two variants agree to a few ulps of the absolute sum.

#include <cstdint>
#include <span>
#include <string_view>

namespace ntlab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True when the variant is compiled in and the CPU supports it.
bool isa_available(Isa isa);

/// The variant used by the dispatching entry points. Defaults to the best
/// available one; NTLAB_FORCE_SCALAR=1 in the environment pins Scalar.
Isa active_isa();
void set_active_isa(Isa isa);

/// sum_i |a[i] - b[i]|^power for power in {1, 2, 3, 4}. Spans must have equal
/// length.
double abs_diff_power_sum(std::span<const double> a, std::span<const double> b, unsigned power);

/// sum_i w[i] * cos(2 pi (scale * sqrt(n_i * x) + phase_turns)), n_i = first_n + i.
/// The square root is carried as a double-double so the phase keeps full
/// precision after the integer number of turns is dropped.
double sqrt_phase_cos_sum(std::span<const double> weights, std::uint64_t first_n, double x,
                          double scale, double phase_turns);

/// sum_i w[i] * cos(theta - t * log_n[i]).
double log_phase_cos_sum(std::span<const double> weights, std::span<const double> log_n, double t,
                         double theta);

namespace scalar {
double abs_diff_power_sum(std::span<const double> a, std::span<const double> b, unsigned power);
double sqrt_phase_cos_sum(std::span<const double> weights, std::uint64_t first_n, double x,
                          double scale, double phase_turns);
double log_phase_cos_sum(std::span<const double> weights, std::span<const double> log_n, double t,
                         double theta);
}  // namespace scalar

#if defined(NTLAB_HAVE_AVX2)
namespace avx2 {
double abs_diff_power_sum(std::span<const double> a, std::span<const double> b, unsigned power);
double sqrt_phase_cos_sum(std::span<const double> weights, std::uint64_t first_n, double x,
                          double scale, double phase_turns);
double log_phase_cos_sum(std::span<const double> weights, std::span<const double> log_n, double t,
                         double theta);
}  // namespace avx2
#endif

}  // namespace ntlab::kernels
