#include <atomic>
#include <stdexcept>

#include "npcrel/kernels/kernels.hpp"

namespace npc::kernels {
namespace {

// -1: follow CPU detection; otherwise the forced Isa value.
std::atomic<int> g_forced{-1};

bool cpu_has_avx2() noexcept {
#if defined(NPCREL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("kernel operands differ in length");
  }
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced < 0) {
    return detected_isa();
  }
  const auto isa = static_cast<Isa>(forced);
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    return Isa::scalar;
  }
  return isa;
}

void force_isa(std::optional<Isa> isa) {
  g_forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

double conduction_sum(std::span<const double> current, std::span<const double> weight, double r,
                      double v0) {
  require_same_size(current.size(), weight.size());
#if defined(NPCREL_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    return avx2::conduction_sum(current.data(), weight.data(), current.size(), r, v0);
  }
#endif
  return scalar::conduction_sum(current.data(), weight.data(), current.size(), r, v0);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
#if defined(NPCREL_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    return avx2::dot(a.data(), b.data(), a.size());
  }
#endif
  return scalar::dot(a.data(), b.data(), a.size());
}

void double_exponential(std::span<const double> x, double a, double b, double c, double d,
                        std::span<double> out) {
  require_same_size(x.size(), out.size());
#if defined(NPCREL_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    avx2::double_exponential(x.data(), x.size(), a, b, c, d, out.data());
    return;
  }
#endif
  scalar::double_exponential(x.data(), x.size(), a, b, c, d, out.data());
}

}  // namespace npc::kernels
