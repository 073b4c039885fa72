// Double-exponential least squares for datasheet switching-energy curves.
//
// The fit is separable: for fixed exponents (b, d) the amplitudes (a, c)
// follow from a linear solve. A coarse grid over the exponents (variable
// projection) supplies the starting point, Levenberg-Marquardt on the
// projected two-exponent problem moves it into the valley, and a final
// Levenberg-Marquardt pass refines all four parameters with the analytic
// Jacobian. Currents are scaled to [0, 1] internally so the exponents are
// O(1).

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "npcrel/device_models.hpp"
#include "npcrel/errors.hpp"

namespace npc {
namespace {

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXd;

struct Problem {
  VectorXd x;  // scaled currents
  VectorXd y;  // scaled energies
};

// Best amplitudes and residual norm^2 for fixed scaled exponents.
std::pair<Vector2d, double> project(const Problem& p, double beta, double delta) {
  MatrixXd basis(p.x.size(), 2);
  basis.col(0) = (beta * p.x.array()).exp();
  basis.col(1) = (delta * p.x.array()).exp();
  Vector2d amp = basis.colPivHouseholderQr().solve(p.y);
  if (!amp.allFinite()) amp.setZero();
  return {amp, (basis * amp - p.y).squaredNorm()};
}

VectorXd residual(const Problem& p, const Vector4d& q) {
  return (q[0] * (q[1] * p.x.array()).exp() + q[2] * (q[3] * p.x.array()).exp()).matrix() - p.y;
}

MatrixXd jacobian(const Problem& p, const Vector4d& q) {
  MatrixXd j(p.x.size(), 4);
  const Eigen::ArrayXd e1 = (q[1] * p.x.array()).exp();
  const Eigen::ArrayXd e2 = (q[3] * p.x.array()).exp();
  j.col(0) = e1.matrix();
  j.col(1) = (q[0] * p.x.array() * e1).matrix();
  j.col(2) = e2.matrix();
  j.col(3) = (q[2] * p.x.array() * e2).matrix();
  return j;
}

Vector4d initial_guess(const Problem& p) {
  static constexpr double mags[] = {0.01, 0.03, 0.1, 0.3, 1.0, 2.0, 4.0};
  std::vector<double> grid{0.0};
  for (double m : mags) {
    grid.push_back(m);
    grid.push_back(-m);
  }
  Vector4d best(0, 0, 0, 0);
  double best_cost = std::numeric_limits<double>::infinity();
  for (double beta : grid) {
    for (double delta : grid) {
      if (!(beta > delta)) continue;
      auto [amp, cost] = project(p, beta, delta);
      if (cost < best_cost) {
        best_cost = cost;
        best = Vector4d(amp[0], beta, amp[1], delta);
      }
    }
  }
  return best;
}

// Levenberg-Marquardt on the projected problem: only (beta, delta) are free,
// the amplitudes follow from the linear solve. Finite-difference Jacobian.
Vector4d refine_exponents(const Problem& p, Vector4d q, int max_iterations) {
  const auto projected = [&](const Eigen::Vector2d& e) {
    auto [amp, cost] = project(p, e[0], e[1]);
    Vector4d full(amp[0], e[0], amp[1], e[1]);
    return std::pair<Vector4d, VectorXd>{full, residual(p, full)};
  };
  Eigen::Vector2d e(q[1], q[3]);
  auto [full, r] = projected(e);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int iter = 0; iter < max_iterations; ++iter) {
    MatrixXd j(p.x.size(), 2);
    for (int k = 0; k < 2; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(e[k]));
      Eigen::Vector2d ep = e, em = e;
      ep[k] += h;
      em[k] -= h;
      j.col(k) = (projected(ep).second - projected(em).second) / (2.0 * h);
    }
    const Matrix2d jtj = j.transpose() * j;
    const Vector2d g = j.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      Matrix2d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Vector2d step = a.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::Vector2d trial = e + step;
      auto [f_trial, r_trial] = projected(trial);
      const double c_trial = r_trial.squaredNorm();
      if (std::isfinite(c_trial) && c_trial < cost) {
        e = trial;
        full = f_trial;
        r = r_trial;
        cost = c_trial;
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
  }
  return full;
}

}  // namespace

EnergyFitResult fit_energy_curve(std::span<const EnergySample> samples,
                                 const EnergyFitOptions& options) {
  if (samples.size() < 4) {
    throw DomainError("double-exponential fit needs at least 4 samples");
  }
  std::vector<double> currents;
  for (const auto& s : samples) {
    if (!std::isfinite(s.current) || !std::isfinite(s.energy)) {
      throw DomainError("energy samples must be finite");
    }
    currents.push_back(s.current);
  }
  std::sort(currents.begin(), currents.end());
  if (std::adjacent_find(currents.begin(), currents.end()) != currents.end()) {
    throw DomainError("energy samples need distinct currents");
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  double i_scale = 0.0;
  double e_scale = 0.0;
  double e_mean = 0.0;
  for (const auto& s : samples) {
    i_scale = std::max(i_scale, std::abs(s.current));
    e_scale = std::max(e_scale, std::abs(s.energy));
    e_mean += s.energy / static_cast<double>(samples.size());
  }

  // Constant curve: the two exponentials are degenerate, report a e^{0 I}.
  double spread = 0.0;
  for (const auto& s : samples) spread = std::max(spread, std::abs(s.energy - e_mean));
  if (spread <= 1e-14 * std::max(e_scale, std::numeric_limits<double>::min())) {
    return {{e_mean, 0.0, 0.0, 0.0}, 0.0, 0};
  }

  Problem p{VectorXd(n), VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    p.x[k] = samples[static_cast<std::size_t>(k)].current / i_scale;
    p.y[k] = samples[static_cast<std::size_t>(k)].energy / e_scale;
  }

  Vector4d q = refine_exponents(p, initial_guess(p), options.max_iterations);
  VectorXd r = residual(p, q);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const MatrixXd j = jacobian(p, q);
    const Matrix4d jtj = j.transpose() * j;
    const Vector4d g = j.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < 1e-30) {
      converged = true;
      break;
    }
    bool improved = false;
    for (int tries = 0; tries < 40 && !improved; ++tries) {
      Matrix4d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Vector4d step = a.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Vector4d trial = q + step;
      const VectorXd r_trial = residual(p, trial);
      const double c_trial = r_trial.squaredNorm();
      if (std::isfinite(c_trial) && c_trial <= cost) {
        const double rel_step = step.norm() / std::max(q.norm(), 1e-300);
        const double rel_gain = (cost - c_trial) / std::max(cost, 1e-300);
        q = trial;
        r = r_trial;
        cost = c_trial;
        lambda = std::max(lambda / 3.0, 1e-15);
        improved = true;
        if (rel_step < options.step_tolerance || rel_gain < 1e-12 || c_trial < 1e-30) converged = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved || converged) {
      // No downhill step left: a (local) minimum to working precision.
      converged = true;
      break;
    }
  }

  const double rms = std::sqrt(cost / static_cast<double>(n)) * e_scale;
  if (!converged || !q.allFinite()) {
    std::ostringstream os;
    os << "double-exponential fit did not converge after " << iter
       << " iterations (residual rms " << rms << " J, lambda " << lambda << ")";
    throw FittingError(os.str());
  }

  EnergyFit fit{q[0] * e_scale, q[1] / i_scale, q[2] * e_scale, q[3] / i_scale};
  if (fit.b < fit.d) {
    std::swap(fit.a, fit.c);
    std::swap(fit.b, fit.d);
  }
  return {fit, rms, iter};
}

}  // namespace npc
