#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <vector>

namespace carnot {

struct LbfgsOptions {
  int max_iters = 200;
  int history = 8;
  double grad_tol = 1e-9;
  double step_tol = 1e-14;
};

/// Minimizes f with gradient callback fg(x, grad) -> value. Two-loop L-BFGS
/// with Armijo backtracking; skips curvature pairs with s.y too small.
inline double minimize_lbfgs(const std::function<double(const std::vector<double>&,
                                                        std::vector<double>&)>& fg,
                             std::vector<double>& x, const LbfgsOptions& opt = {}) {
  const std::size_t n = x.size();
  std::vector<double> g(n), gnew(n), xnew(n), dir(n);
  std::deque<std::vector<double>> ss, ys;
  std::deque<double> rhos;
  double f = fg(x, g);

  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  for (int it = 0; it < opt.max_iters; ++it) {
    double gnorm = std::sqrt(dot(g, g));
    if (gnorm < opt.grad_tol) break;

    // two-loop recursion
    dir = g;
    std::vector<double> alpha(ss.size());
    for (int k = static_cast<int>(ss.size()) - 1; k >= 0; --k) {
      alpha[k] = rhos[k] * dot(ss[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha[k] * ys[k][i];
    }
    if (!ss.empty()) {
      double gamma = dot(ss.back(), ys.back()) / dot(ys.back(), ys.back());
      for (auto& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < ss.size(); ++k) {
      double beta = rhos[k] * dot(ys[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += ss[k][i] * (alpha[k] - beta);
    }
    for (auto& d : dir) d = -d;

    double dg = dot(dir, g);
    if (dg > -1e-18 * gnorm) {  // not a descent direction; restart with -g
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      dg = -gnorm * gnorm;
      ss.clear(); ys.clear(); rhos.clear();
    }

    double step = ss.empty() ? std::min(1.0, 1.0 / std::max(gnorm, 1e-12)) : 1.0;
    double fnew = f;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xnew[i] = x[i] + step * dir[i];
      fnew = fg(xnew, gnew);
      if (fnew <= f + 1e-4 * step * dg) { moved = true; break; }
      step *= 0.5;
      if (step < opt.step_tol) break;
    }
    if (!moved) break;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xnew[i] - x[i];
      y[i] = gnew[i] - g[i];
    }
    double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      rhos.push_back(1.0 / sy);
      if (static_cast<int>(ss.size()) > opt.history) {
        ss.pop_front(); ys.pop_front(); rhos.pop_front();
      }
    }
    x.swap(xnew);
    g.swap(gnew);
    double df = f - fnew;
    f = fnew;
    if (df >= 0 && df < 1e-15 * (std::abs(f) + 1.0)) break;
  }
  return f;
}

}  // namespace carnot
