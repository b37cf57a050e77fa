#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "carnotlab/group.hpp"

namespace carnot {

/// Koranyi gauge ((x^2+y^2)^2 + t^2)^(1/4) on H^1 coordinates.
double koranyi_norm(const GPoint& p);
/// max(|(x,y)|, sqrt|t|); never exceeds the Koranyi gauge.
double koranyi_lower_bound(const GPoint& p);
/// Homogeneous gauge sum_i |x_i|^(1/w_i); cheap CC proxy on any spec.
double quasi_norm(const GroupSpec& spec, const GPoint& p);

struct CcSettings {
  int segments = 64;
  int iters = 400;          // L-BFGS budget per penalty stage
  double penalty0 = 1.0;    // first quadratic penalty weight
  double penalty_growth = 10.0;
  int stages = 8;
  int multistarts = 3;
  double defect_tol = 1e-6;  // homogeneous endpoint gap below which we call it converged
  uint64_t seed = 7;
};

struct CcResult {
  double value = 0.0;    // horizontal length of the returned curve
  double defect = 0.0;   // homogeneous distance from achieved endpoint to b
  bool converged = true; // defect <= tol * scale
  std::vector<std::vector<double>> controls;  // K rows of m displacement vectors
  GPoint endpoint;
};

/// Upper estimator of the CC distance: minimizes the horizontal length of a
/// K-segment piecewise-constant-control curve, quadratic endpoint penalty
/// with increasing weight, then exact projection of the horizontal gap.
CcResult cc_estimate(const GroupSpec& spec, const GPoint& a, const GPoint& b,
                     const CcSettings& cfg = {});

/// Distance handle: closed-form kinds are pure; cc-estimate carries solver
/// settings and uses per-call scratch only.
class Metric {
 public:
  enum class Kind { Euclidean, Koranyi, CcEstimate, QuasiNorm, Snowflake };

  static Metric euclidean();
  static Metric koranyi();
  static Metric quasi();
  static Metric cc(const CcSettings& cfg = {});
  static Metric snowflake(const Metric& base, double eps);

  Kind kind() const { return kind_; }
  double snowflake_eps() const { return eps_; }
  const Metric* base() const { return base_.get(); }
  const CcSettings& cc_settings() const { return cc_; }
  std::string name() const;

  /// Underlying non-snowflake kind (itself when not a snowflake).
  Kind root_kind() const;
  /// Total snowflake exponent applied over the base kind (1 when none).
  double total_eps() const;

  double dist(const GroupSpec& spec, const GPoint& a, const GPoint& b) const;
  /// d(0, p); for group kinds this is the homogeneous gauge of p.
  double gauge(const GroupSpec& spec, const GPoint& p) const;

 private:
  Kind kind_ = Kind::Euclidean;
  double eps_ = 1.0;
  std::shared_ptr<Metric> base_;
  CcSettings cc_;
};

double euclidean_dist(const GPoint& a, const GPoint& b);

/// Parses "euclidean", "koranyi", "quasi", "cc" with an optional
/// "^<eps>" snowflake suffix, e.g. "koranyi^0.5".
Metric parse_metric(const std::string& text, const CcSettings& cc = {});

}  // namespace carnot
