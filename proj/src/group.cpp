#include "carnotlab/group.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "carnotlab/rng.hpp"
#include "json.hpp"

namespace carnot {

bool Box::contains(const GPoint& p, double slack) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
  return true;
}

namespace {

void check_dim(const GroupSpec& spec, const GPoint& p, const char* who) {
  if (static_cast<int>(p.size()) != spec.n)
    throw std::invalid_argument(std::string(who) + ": point dimension " +
                                std::to_string(p.size()) + " != spec.n " +
                                std::to_string(spec.n));
}

double eval_monomial(const Monomial& mon, const GPoint& p, const GPoint& q) {
  double v = mon.coef;
  for (int idx : mon.p) v *= p[idx];
  for (int idx : mon.q) v *= q[idx];
  return v;
}

// d/dx_j of a product with possibly repeated factors: sum over occurrences,
// each time skipping that one factor.
double eval_monomial_dp(const Monomial& mon, int j, const GPoint& p, const GPoint& q) {
  double acc = 0.0;
  for (std::size_t skip = 0; skip < mon.p.size(); ++skip) {
    if (mon.p[skip] != j) continue;
    double v = mon.coef;
    for (std::size_t k = 0; k < mon.p.size(); ++k)
      if (k != skip) v *= p[mon.p[k]];
    for (int idx : mon.q) v *= q[idx];
    acc += v;
  }
  return acc;
}

double eval_monomial_dq(const Monomial& mon, int j, const GPoint& p, const GPoint& q) {
  double acc = 0.0;
  for (std::size_t skip = 0; skip < mon.q.size(); ++skip) {
    if (mon.q[skip] != j) continue;
    double v = mon.coef;
    for (int idx : mon.p) v *= p[idx];
    for (std::size_t k = 0; k < mon.q.size(); ++k)
      if (k != skip) v *= q[mon.q[k]];
    acc += v;
  }
  return acc;
}

}  // namespace

double eval_residual(const GroupSpec& spec, int i, const GPoint& p, const GPoint& q) {
  double r = 0.0;
  for (const Monomial& mon : spec.law[i]) r += eval_monomial(mon, p, q);
  return r;
}

GPoint mul(const GroupSpec& spec, const GPoint& p, const GPoint& q) {
  check_dim(spec, p, "mul");
  check_dim(spec, q, "mul");
  GPoint out(spec.n);
  for (int i = 0; i < spec.n; ++i)
    out[i] = p[i] + q[i] + eval_residual(spec, i, p, q);
  return out;
}

GPoint inv(const GroupSpec& spec, const GPoint& p) {
  check_dim(spec, p, "inv");
  GPoint out(spec.n);
  for (int i = 0; i < spec.n; ++i) out[i] = -p[i];
  return out;
}

GPoint dilate(const GroupSpec& spec, double lambda, const GPoint& p) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("dilate: lambda must be positive");
  check_dim(spec, p, "dilate");
  GPoint out(spec.n);
  for (int i = 0; i < spec.n; ++i)
    out[i] = p[i] * std::pow(lambda, spec.weights[i]);
  return out;
}

std::vector<double> project_horizontal(const GroupSpec& spec, const GPoint& p) {
  check_dim(spec, p, "project_horizontal");
  return std::vector<double>(p.begin(), p.begin() + spec.m);
}

GPoint exp_horizontal(const GroupSpec& spec, const GPoint& x, int i, double t) {
  if (i < 1 || i > spec.m)
    throw std::invalid_argument("exp_horizontal: index out of horizontal range");
  GPoint e(spec.n, 0.0);
  e[i - 1] = t;
  return mul(spec, x, e);
}

GPoint identity(const GroupSpec& spec) { return GPoint(spec.n, 0.0); }

GPoint group_diff(const GroupSpec& spec, const GPoint& a, const GPoint& b) {
  return mul(spec, inv(spec, a), b);
}

void mul_jacobian_p(const GroupSpec& spec, const GPoint& p, const GPoint& q,
                    std::vector<double>& jac) {
  const int n = spec.n;
  jac.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    jac[i * n + i] = 1.0;
    for (int j = 0; j < i; ++j) {
      double d = 0.0;
      for (const Monomial& mon : spec.law[i]) d += eval_monomial_dp(mon, j, p, q);
      jac[i * n + j] += d;
    }
  }
}

void mul_jacobian_q(const GroupSpec& spec, const GPoint& p, const GPoint& q,
                    std::vector<double>& jac) {
  const int n = spec.n;
  jac.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    jac[i * n + i] = 1.0;
    for (int j = 0; j < i; ++j) {
      double d = 0.0;
      for (const Monomial& mon : spec.law[i]) d += eval_monomial_dq(mon, j, p, q);
      jac[i * n + j] += d;
    }
  }
}

std::vector<double> puc_tau(const GroupSpec& spec, double t, const GPoint& target) {
  check_dim(spec, target, "puc_tau");
  if (spec.n < 1) throw std::invalid_argument("puc_tau: empty spec");
  // Build w = (t, tau) coordinate by coordinate. R_i only reads k < i, so the
  // not-yet-assigned entries never influence the next step.
  GPoint w(spec.n, 0.0);
  w[0] = t;
  GPoint winv(spec.n, 0.0);
  winv[0] = -t;
  for (int i = 1; i < spec.n; ++i) {
    double tau_i = target[i] + eval_residual(spec, i, winv, target);
    w[i] = tau_i;
    winv[i] = -tau_i;
  }
  GPoint reduced = mul(spec, winv, target);
  for (int i = 1; i < spec.n; ++i)
    if (std::abs(reduced[i]) > 1e-12)
      throw InternalError("puc_tau: reduced point has nonzero tail (law table wrong?)");
  return std::vector<double>(w.begin() + 1, w.end());
}

double GroupLinearMap::eval(const GroupSpec& spec, const GPoint& h) const {
  if (static_cast<int>(v.size()) != spec.m)
    throw std::invalid_argument("GroupLinearMap: coefficient length != m");
  double s = 0.0;
  for (int i = 0; i < spec.m; ++i) s += v[i] * h[i];
  return s;
}

GroupSpec heisenberg_spec() {
  GroupSpec spec;
  spec.n = 3;
  spec.m = 2;
  spec.weights = {1, 1, 2};
  spec.law.resize(3);
  // R_3(p,q) = -2 (p_1 q_2 - p_2 q_1)
  spec.law[2].push_back({-2.0, {0}, {1}});
  spec.law[2].push_back({+2.0, {1}, {0}});
  spec.name = "heisenberg1";
  return spec;
}

GroupSpec line_spec() {
  GroupSpec spec;
  spec.n = 1;
  spec.m = 1;
  spec.weights = {1};
  spec.law.resize(1);
  spec.name = "line";
  return spec;
}

namespace {

void check_structure(const GroupSpec& spec) {
  if (spec.n < 1 || spec.m < 1 || spec.m > spec.n)
    throw std::invalid_argument("spec: need 1 <= m <= n");
  if (static_cast<int>(spec.weights.size()) != spec.n)
    throw std::invalid_argument("spec: weights length != n");
  for (int i = 0; i < spec.n; ++i) {
    if (spec.weights[i] < 1)
      throw std::invalid_argument("spec: weights must be >= 1");
    if (i > 0 && spec.weights[i] < spec.weights[i - 1])
      throw std::invalid_argument("spec: weights must be nondecreasing");
    bool want_one = i < spec.m;
    if ((spec.weights[i] == 1) != want_one)
      throw std::invalid_argument("spec: w_i must be 1 exactly for i <= m");
  }
  if (static_cast<int>(spec.law.size()) != spec.n)
    throw std::invalid_argument("spec: law table length != n");
  for (int i = 0; i < spec.n; ++i) {
    if (i < spec.m && !spec.law[i].empty())
      throw std::invalid_argument("spec: R_i must vanish for horizontal coordinates");
    for (const Monomial& mon : spec.law[i]) {
      for (int idx : mon.p)
        if (idx < 0 || idx >= i)
          throw std::invalid_argument("spec: R_i may only reference coordinates k < i");
      for (int idx : mon.q)
        if (idx < 0 || idx >= i)
          throw std::invalid_argument("spec: R_i may only reference coordinates k < i");
    }
  }
}

}  // namespace

GroupSpec parse_spec_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GroupSpec spec;
  spec.n = j.at("n").get<int>();
  spec.m = j.at("m").get<int>();
  spec.weights = j.at("weights").get<std::vector<int>>();
  spec.law.resize(spec.n > 0 ? spec.n : 0);
  if (j.contains("name")) spec.name = j["name"].get<std::string>();
  if (j.contains("law")) {
    for (const auto& entry : j["law"]) {
      int i = entry.at("i").get<int>();  // 1-based in the file
      if (i < 1 || i > spec.n)
        throw std::invalid_argument("spec json: law coordinate index out of range");
      for (const auto& mj : entry.at("monomials")) {
        Monomial mon;
        mon.coef = mj.at("coef").get<double>();
        for (int idx : mj.at("p").get<std::vector<int>>()) mon.p.push_back(idx - 1);
        for (int idx : mj.at("q").get<std::vector<int>>()) mon.q.push_back(idx - 1);
        spec.law[i - 1].push_back(std::move(mon));
      }
    }
  }
  check_structure(spec);
  return spec;
}

GroupSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_json(ss.str());
}

void validate_spec(const GroupSpec& spec, int triples, uint64_t seed) {
  check_structure(spec);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  auto rand_point = [&] {
    GPoint p(spec.n);
    for (auto& c : p) c = coord(rng);
    return p;
  };
  auto max_abs_diff = [&](const GPoint& a, const GPoint& b) {
    double worst = 0.0;
    for (int i = 0; i < spec.n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
  };
  const GPoint e = identity(spec);
  for (int it = 0; it < triples; ++it) {
    GPoint p = rand_point(), q = rand_point(), r = rand_point();
    if (max_abs_diff(mul(spec, mul(spec, p, q), r), mul(spec, p, mul(spec, q, r))) > 1e-9)
      throw std::invalid_argument("spec validation: associativity failed");
    if (max_abs_diff(mul(spec, p, e), p) > 0.0 || max_abs_diff(mul(spec, e, p), p) > 0.0)
      throw std::invalid_argument("spec validation: identity failed");
    if (max_abs_diff(mul(spec, p, inv(spec, p)), e) > 1e-10)
      throw std::invalid_argument("spec validation: inverse is not negation");
    for (double lam : {0.5, 2.0}) {
      GPoint lhs = dilate(spec, lam, mul(spec, p, q));
      GPoint rhs = mul(spec, dilate(spec, lam, p), dilate(spec, lam, q));
      if (max_abs_diff(lhs, rhs) > 1e-9)
        throw std::invalid_argument("spec validation: dilation is not a homomorphism");
    }
  }
}

}  // namespace carnot
