#include "npcrel/kernels/kernels.hpp"

#include <cmath>

namespace npc::kernels::scalar {

double conduction_sum(const double* current, const double* weight, std::size_t n, double r,
                      double v0) noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += (r * current[k] + v0) * current[k] * weight[k];
  }
  return sum;
}

double dot(const double* a, const double* b, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += a[k] * b[k];
  }
  return sum;
}

void double_exponential(const double* x, std::size_t n, double a, double b, double c, double d,
                        double* out) noexcept {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = a * std::exp(b * x[k]) + c * std::exp(d * x[k]);
  }
}

}  // namespace npc::kernels::scalar
