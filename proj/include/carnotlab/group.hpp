#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace carnot {

/// A point of the group in exponential coordinates of the first kind.
using GPoint = std::vector<double>;

/// Raised when a numerically verified internal identity fails, which
/// indicates a wrong group-law table rather than bad user input.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an experiment's own consistency checks fail (CLI exit 3).
struct ExperimentInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One term of a group-law residual polynomial: coef * prod p[i] * prod q[j].
/// Indices are 0-based coordinate indices; repeated indices mean powers.
struct Monomial {
  double coef = 0.0;
  std::vector<int> p;
  std::vector<int> q;
};

/// A Carnot group in exponential coordinates: (p*q)_i = p_i + q_i + R_i(p,q).
///
/// The residual R_i vanishes for horizontal coordinates (i < m) and may only
/// reference coordinates k < i, which makes inversion coordinate negation and
/// keeps the group law polynomial for any step.
struct GroupSpec {
  int n = 0;                                  // topological dimension
  int m = 0;                                  // horizontal dimension
  std::vector<int> weights;                   // layer of each coordinate
  std::vector<std::vector<Monomial>> law;     // law[i] = monomials of R_i
  std::string name;

  bool is_heisenberg1() const { return n == 3 && m == 2; }
};

/// Axis-aligned box, used as the declared ambient region of set oracles.
struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const GPoint& p, double slack = 0.0) const;
};

double eval_residual(const GroupSpec& spec, int i, const GPoint& p, const GPoint& q);

GPoint mul(const GroupSpec& spec, const GPoint& p, const GPoint& q);
GPoint inv(const GroupSpec& spec, const GPoint& p);
GPoint dilate(const GroupSpec& spec, double lambda, const GPoint& p);
std::vector<double> project_horizontal(const GroupSpec& spec, const GPoint& p);
GPoint exp_horizontal(const GroupSpec& spec, const GPoint& x, int i, double t);
GPoint identity(const GroupSpec& spec);

/// d(a,b) as a group displacement: a^{-1} b.
GPoint group_diff(const GroupSpec& spec, const GPoint& a, const GPoint& b);

/// Jacobian of (p,q) -> p*q with respect to p (n x n, row-major).
void mul_jacobian_p(const GroupSpec& spec, const GPoint& p, const GPoint& q,
                    std::vector<double>& jac);
/// Jacobian of (p,q) -> p*q with respect to q (n x n, row-major).
void mul_jacobian_q(const GroupSpec& spec, const GPoint& p, const GPoint& q,
                    std::vector<double>& jac);

/// Builds tau so that (t, tau)^{-1} * target = (target_1 - t, 0, ..., 0),
/// by the inductive formula tau_i = y_i + R_i((t,tau)^{-1}, target).
/// Verifies the zero tail to 1e-12 and throws InternalError on failure.
std::vector<double> puc_tau(const GroupSpec& spec, double t, const GPoint& target);

/// A group-linear functional h -> <v, p(h)>.
struct GroupLinearMap {
  std::vector<double> v;  // length m
  double eval(const GroupSpec& spec, const GPoint& h) const;
};

GroupSpec heisenberg_spec();
/// The real line as a step-1 group; lets 1-D sets reuse all machinery.
GroupSpec line_spec();

/// Parses a spec from the JSON schema
/// {"n":..,"m":..,"weights":[..],"law":[{"i":..,"monomials":[{"coef":..,"p":[..],"q":[..]}]}]}
/// (1-based coordinate indices). Structural invariants are enforced here;
/// call validate_spec for the stochastic group-axiom checks.
GroupSpec parse_spec_json(const std::string& text);
GroupSpec load_spec_file(const std::string& path);

/// Stochastic load-time validation: associativity, identity, inversion and
/// dilation homomorphism on random triples. Throws std::invalid_argument
/// with a description of the first failed identity.
void validate_spec(const GroupSpec& spec, int triples = 200, uint64_t seed = 0x5eed);

}  // namespace carnot
