#pragma once

// Test-only oracle for the minimal horizontal length from the origin to
// (0,0,T) in H^1. A curve reaching (0,0,T) projects to a closed planar loop
// whose signed area satisfies -4 * Area = T, so the value is the least
// perimeter enclosing area |T|/4. The oracle minimizes perimeter directly
// over polygons in polar form and never touches the cc solver.

#include <cmath>
#include <vector>

namespace dido_oracle {

inline double perimeter_over_sqrt_area(const std::vector<double>& r,
                                       const std::vector<double>& cs,
                                       const std::vector<double>& sn) {
  const std::size_t n = r.size();
  double P = 0.0, A2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t k = (j + 1) % n;
    double xj = r[j] * cs[j], yj = r[j] * sn[j];
    double xk = r[k] * cs[k], yk = r[k] * sn[k];
    P += std::hypot(xk - xj, yk - yj);
    A2 += xj * yk - xk * yj;
  }
  double A = 0.5 * std::abs(A2);
  return P / std::sqrt(A);
}

/// Minimal perimeter of a closed loop enclosing the given area.
inline double min_perimeter_for_area(double area, int n = 192, int iters = 300) {
  std::vector<double> r(n, 1.0), cs(n), sn(n);
  for (int j = 0; j < n; ++j) {
    double th = 2.0 * M_PI * j / n;
    cs[j] = std::cos(th);
    sn[j] = std::sin(th);
    r[j] = 1.0 + 0.25 * std::sin(3.0 * th) + 0.15 * std::cos(7.0 * th);
  }
  double step = 1e-2;
  double best = perimeter_over_sqrt_area(r, cs, sn);
  std::vector<double> g(n), rn(n);
  for (int it = 0; it < iters; ++it) {
    const double h = 1e-7;
    for (int j = 0; j < n; ++j) {
      double keep = r[j];
      r[j] = keep + h;
      g[j] = (perimeter_over_sqrt_area(r, cs, sn) - best) / h;
      r[j] = keep;
    }
    for (int j = 0; j < n; ++j) rn[j] = r[j] - step * g[j];
    double cand = perimeter_over_sqrt_area(rn, cs, sn);
    if (cand < best) {
      r.swap(rn);
      best = cand;
      step *= 1.15;
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  return best * std::sqrt(area);  // P/sqrt(A) is scale invariant
}

}  // namespace dido_oracle
