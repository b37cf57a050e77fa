#include "carnotlab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "carnotlab/lbfgs.hpp"
#include "carnotlab/rng.hpp"

namespace carnot {

namespace {
// Distances below this are snapped to 0 to stabilize hole-fraction ratios.
constexpr double kZeroTie = 1e-14;

double tie(double d) { return d < kZeroTie ? 0.0 : d; }
}  // namespace

double koranyi_norm(const GPoint& p) {
  double h2 = p[0] * p[0] + p[1] * p[1];
  return std::pow(h2 * h2 + p[2] * p[2], 0.25);
}

double koranyi_lower_bound(const GPoint& p) {
  return std::max(std::hypot(p[0], p[1]), std::sqrt(std::abs(p[2])));
}

double quasi_norm(const GroupSpec& spec, const GPoint& p) {
  double s = 0.0;
  for (int i = 0; i < spec.n; ++i)
    s += std::pow(std::abs(p[i]), 1.0 / spec.weights[i]);
  return s;
}

double euclidean_dist(const GPoint& a, const GPoint& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Metric Metric::euclidean() { return Metric{}; }

Metric Metric::koranyi() {
  Metric m;
  m.kind_ = Kind::Koranyi;
  return m;
}

Metric Metric::quasi() {
  Metric m;
  m.kind_ = Kind::QuasiNorm;
  return m;
}

Metric Metric::cc(const CcSettings& cfg) {
  Metric m;
  m.kind_ = Kind::CcEstimate;
  m.cc_ = cfg;
  return m;
}

Metric Metric::snowflake(const Metric& base, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("snowflake: eps must lie in (0,1)");
  Metric m;
  m.kind_ = Kind::Snowflake;
  m.eps_ = eps;
  m.base_ = std::make_shared<Metric>(base);
  return m;
}

Metric::Kind Metric::root_kind() const {
  return kind_ == Kind::Snowflake ? base_->root_kind() : kind_;
}

double Metric::total_eps() const {
  return kind_ == Kind::Snowflake ? eps_ * base_->total_eps() : 1.0;
}

std::string Metric::name() const {
  switch (kind_) {
    case Kind::Euclidean: return "euclidean";
    case Kind::Koranyi: return "koranyi";
    case Kind::QuasiNorm: return "quasi";
    case Kind::CcEstimate: return "cc";
    case Kind::Snowflake:
      return base_->name() + "^" + std::to_string(eps_);
  }
  return "?";
}

double Metric::dist(const GroupSpec& spec, const GPoint& a, const GPoint& b) const {
  switch (kind_) {
    case Kind::Euclidean:
      return tie(euclidean_dist(a, b));
    case Kind::Koranyi:
      if (!spec.is_heisenberg1())
        throw std::invalid_argument("unsupported-metric: koranyi requires H^1");
      return tie(koranyi_norm(group_diff(spec, a, b)));
    case Kind::QuasiNorm:
      return tie(quasi_norm(spec, group_diff(spec, a, b)));
    case Kind::CcEstimate:
      return tie(cc_estimate(spec, a, b, cc_).value);
    case Kind::Snowflake:
      return std::pow(base_->dist(spec, a, b), eps_);
  }
  return 0.0;
}

double Metric::gauge(const GroupSpec& spec, const GPoint& p) const {
  return dist(spec, identity(spec), p);
}

Metric parse_metric(const std::string& text, const CcSettings& cc) {
  std::string base = text;
  double eps = 0.0;
  auto caret = text.find('^');
  if (caret != std::string::npos) {
    base = text.substr(0, caret);
    eps = std::stod(text.substr(caret + 1));
  }
  Metric m;
  if (base == "euclidean")
    m = Metric::euclidean();
  else if (base == "koranyi")
    m = Metric::koranyi();
  else if (base == "quasi" || base == "quasi-norm")
    m = Metric::quasi();
  else if (base == "cc" || base == "cc-estimate")
    m = Metric::cc(cc);
  else
    throw std::invalid_argument("unknown metric: " + base);
  if (caret != std::string::npos) m = Metric::snowflake(m, eps);
  return m;
}

namespace {

// Endpoint of the piecewise-horizontal curve from a driven by K displacement
// vectors v_k (each the integral of one constant control segment).
GPoint cc_endpoint(const GroupSpec& spec, const GPoint& a,
                   const std::vector<double>& v, int K,
                   std::vector<GPoint>* prefix = nullptr) {
  const int m = spec.m;
  GPoint cur = a;
  GPoint seg(spec.n, 0.0);
  if (prefix) {
    prefix->clear();
    prefix->push_back(cur);
  }
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < m; ++i) seg[i] = v[k * m + i];
    cur = mul(spec, cur, seg);
    if (prefix) prefix->push_back(cur);
  }
  return cur;
}

double cc_length(const std::vector<double>& v, int K, int m) {
  double len = 0.0;
  for (int k = 0; k < K; ++k) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += v[k * m + i] * v[k * m + i];
    len += std::sqrt(s);
  }
  return len;
}

// Shifts every segment by the same horizontal correction so the first-layer
// coordinates of the endpoint match b exactly (they are linear in controls).
void project_horizontal_gap(const GroupSpec& spec, const GPoint& a, const GPoint& b,
                            std::vector<double>& v, int K) {
  const int m = spec.m;
  GPoint e = cc_endpoint(spec, a, v, K);
  for (int i = 0; i < m; ++i) {
    double corr = (b[i] - e[i]) / K;
    for (int k = 0; k < K; ++k) v[k * m + i] += corr;
  }
}

double homogeneous_defect(const GroupSpec& spec, const GPoint& achieved, const GPoint& b) {
  GPoint gap = group_diff(spec, achieved, b);
  return spec.is_heisenberg1() ? koranyi_norm(gap) : quasi_norm(spec, gap);
}

}  // namespace

CcResult cc_estimate(const GroupSpec& spec, const GPoint& a, const GPoint& b,
                     const CcSettings& cfg) {
  const int K = std::max(2, cfg.segments);
  const int m = spec.m;
  const int n = spec.n;

  const double scale = std::max(homogeneous_defect(spec, a, b), 1e-9);
  const double eps2 = std::pow(1e-4 * scale / K, 2);  // length smoothing

  // Objective: smoothed length + mu * |endpoint - b|^2, exact gradient via
  // prefix points and right-translation Jacobians.
  std::vector<GPoint> prefix;
  std::vector<double> jac, Gk(n * n), tmp(n * n);
  auto objective = [&](const std::vector<double>& v, std::vector<double>& grad,
                       double mu) {
    GPoint end = cc_endpoint(spec, a, v, K, &prefix);
    double f = 0.0;
    grad.assign(K * m, 0.0);
    for (int k = 0; k < K; ++k) {
      double s2 = eps2;
      for (int i = 0; i < m; ++i) s2 += v[k * m + i] * v[k * m + i];
      double s = std::sqrt(s2);
      f += s;
      for (int i = 0; i < m; ++i) grad[k * m + i] = v[k * m + i] / s;
    }
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
      r[i] = end[i] - b[i];
      f += mu * r[i] * r[i];
    }
    // Backward sweep: Gk = d(end)/d(prefix_k); chain penalty gradient into
    // each segment's horizontal displacement.
    // Gk starts as identity at k = K.
    std::fill(Gk.begin(), Gk.end(), 0.0);
    for (int i = 0; i < n; ++i) Gk[i * n + i] = 1.0;
    GPoint seg(n, 0.0);
    for (int k = K; k >= 1; --k) {
      for (int i = 0; i < m; ++i) seg[i] = v[(k - 1) * m + i];
      for (int i = m; i < n; ++i) seg[i] = 0.0;
      // dE/dv_k = Gk * d(P_{k-1} * seg)/d(seg) restricted to horizontal cols
      mul_jacobian_q(spec, prefix[k - 1], seg, jac);
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          double col = 0.0;  // (Gk * jac)_{i j}
          for (int l = 0; l < n; ++l) col += Gk[i * n + l] * jac[l * n + j];
          acc += 2.0 * mu * r[i] * col;
        }
        grad[(k - 1) * m + j] += acc;
      }
      if (k > 1) {
        mul_jacobian_p(spec, prefix[k - 1], seg, jac);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) acc += Gk[i * n + l] * jac[l * n + j];
            tmp[i * n + j] = acc;
          }
        Gk.swap(tmp);
      }
    }
    return f;
  };

  auto run_from = [&](std::vector<double> v) {
    double mu = cfg.penalty0;
    LbfgsOptions opt;
    opt.max_iters = cfg.iters;
    for (int stage = 0; stage < cfg.stages; ++stage) {
      auto fg = [&](const std::vector<double>& x, std::vector<double>& g) {
        return objective(x, g, mu);
      };
      minimize_lbfgs(fg, v, opt);
      mu *= cfg.penalty_growth;
    }
    project_horizontal_gap(spec, a, b, v, K);
    // one refinement stage at the stiffest penalty, then re-project
    auto fg = [&](const std::vector<double>& x, std::vector<double>& g) {
      return objective(x, g, mu);
    };
    minimize_lbfgs(fg, v, opt);
    project_horizontal_gap(spec, a, b, v, K);
    return v;
  };

  // Multistart: straight-line init plus seeded perturbations.
  std::vector<double> straight(K * m, 0.0);
  for (int i = 0; i < m; ++i) {
    double d = (b[i] - a[i]) / K;
    for (int k = 0; k < K; ++k) straight[k * m + i] = d;
  }
  std::vector<double> best;
  double best_len = 0.0, best_defect = 0.0;
  bool have_best = false;
  for (int start = 0; start < std::max(1, cfg.multistarts); ++start) {
    std::vector<double> v0 = straight;
    if (start > 0) {
      auto rng = make_rng(cfg.seed, start);
      std::normal_distribution<double> jitter(0.0, 2.0 * scale / K);
      for (auto& c : v0) c += jitter(rng);
    }
    std::vector<double> v = run_from(std::move(v0));
    GPoint end = cc_endpoint(spec, a, v, K);
    double defect = homogeneous_defect(spec, end, b);
    double len = cc_length(v, K, m);
    bool ok = defect <= cfg.defect_tol * scale;
    bool best_ok = have_best && best_defect <= cfg.defect_tol * scale;
    bool better = !have_best ||
                  (ok && !best_ok) ||
                  (ok == best_ok && (ok ? len < best_len : defect < best_defect));
    if (better) {
      best = std::move(v);
      best_len = len;
      best_defect = defect;
      have_best = true;
    }
  }

  CcResult res;
  res.controls.resize(K);
  for (int k = 0; k < K; ++k)
    res.controls[k] = std::vector<double>(best.begin() + k * m,
                                          best.begin() + (k + 1) * m);
  res.endpoint = cc_endpoint(spec, a, best, K);
  res.value = best_len;
  res.defect = best_defect;
  res.converged = best_defect <= cfg.defect_tol * scale;
  return res;
}

}  // namespace carnot
