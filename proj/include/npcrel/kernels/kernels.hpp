#pragma once

// Reduction kernels behind the loss integrators.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds,
// an AVX2/FMA variant. The dispatching entry points pick the variant once per
// process from CPUID; tests pin a variant with force_isa() and check the two
// agree. Callers never include the variant namespaces directly.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace npc::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

// Best variant the running CPU supports (and this build contains).
Isa detected_isa();

// Variant the dispatchers currently use: the forced one, else detected_isa().
Isa active_isa();

// Pin the dispatch target; std::nullopt restores CPU detection. Forcing a
// variant the CPU cannot run falls back to scalar.
void force_isa(std::optional<Isa> isa);

// sum_k (r * i_k + v0) * i_k * w_k, the on-state energy accumulation of an
// affine conductor driven by current magnitudes i_k with duty weights w_k.
// Spans must have equal length.
double conduction_sum(std::span<const double> current, std::span<const double> weight, double r,
                      double v0);

// sum_k a_k * b_k
double dot(std::span<const double> a, std::span<const double> b);

// out_k = a * exp(b * x_k) + c * exp(d * x_k). Not a reduction, but it is the
// hot loop of the switching-loss average.
void double_exponential(std::span<const double> x, double a, double b, double c, double d,
                        std::span<double> out);

namespace scalar {
double conduction_sum(const double* current, const double* weight, std::size_t n, double r,
                      double v0) noexcept;
double dot(const double* a, const double* b, std::size_t n) noexcept;
void double_exponential(const double* x, std::size_t n, double a, double b, double c, double d,
                        double* out) noexcept;
}  // namespace scalar

#if defined(NPCREL_HAVE_AVX2)
namespace avx2 {
double conduction_sum(const double* current, const double* weight, std::size_t n, double r,
                      double v0) noexcept;
double dot(const double* a, const double* b, std::size_t n) noexcept;
void double_exponential(const double* x, std::size_t n, double a, double b, double c, double d,
                        double* out) noexcept;
}  // namespace avx2
#endif

}  // namespace npc::kernels
