#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carnotlab/group.hpp"

namespace carnot {

/// Three-valued membership; "undecided" marks points the declared digit
/// depth cannot separate from the set boundary. Porosity scans treat it
/// as "in" so holes are never fabricated.
enum class Tri { In, Out, Undecided };

/// Membership of x in the middle-third Cantor set, decided by an exact
/// ternary-digit scan of the (dyadic) double to `depth` digits.
Tri cantor_member(double x, int depth = 40);

/// Distance from u to the Cantor set, exact until the recursion depth is
/// exhausted (then truncated downward, so it stays a valid lower bound).
double cantor_distance(double u, int depth = 40);

/// Certified nonempty intersection of [a,b] with the Cantor set: true only
/// when the interval provably contains a point of C at this depth.
bool cantor_hits_interval(double a, double b, int depth = 40);

/// Gaps (maximal open complement intervals within [0,1]) of the Cantor set
/// meeting [lo,hi] with width >= min_width; pairs (left, right).
void cantor_gaps(double lo, double hi, double min_width,
                 std::vector<std::pair<double, double>>& out, int max_count = 256);

/// Index of one translated dilated Cantor set A_{n,k} = offset + 4^{-n} C.
struct LadderIndex {
  int n = 1;
  long long k = 0;
};

struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
};

/// Envelope [2^-n + k 4^-n, 2^-n + (k+1) 4^-n]; for fixed n the envelopes
/// tile [2^-n, 2^-(n-1)].
Interval ank_envelope(const LadderIndex& idx);

struct AnkWitness {
  std::optional<LadderIndex> index;
  bool undecided = false;  // set when only depth-boundary cases remained
};

/// Which A_{n,k} (if any) contains x in (0,1); ties broken by smaller n,
/// then smaller k.
AnkWitness ank_member(double x, int depth = 40);

/// An index whose set provably intersects [t, t+4t^2]; the search mirrors
/// the two-band argument and throws InternalError if nothing certifies
/// (which would contradict the interval-hitting property).
LadderIndex gap_window(double t, int depth = 40);

/// Distance from r to {0} union all A_{n,k}; valid lower bound at any depth.
double ladder_distance(double r, int depth = 40);

/// Certified distance from r to a single A_{n,k} (envelope-rescaled
/// Cantor distance; points outside the envelope measure to its ends).
double ank_distance(double r, const LadderIndex& idx, int depth = 40);

/// Gap midpoints of the radial ladder structure near r within +-span,
/// used as analytic hole-center candidates by the porosity search.
void ladder_gap_midpoints(double r, double span, std::vector<double>& out,
                          int depth = 40, int max_count = 64);

/// Same for one A_{n,k}.
void ank_gap_midpoints(const LadderIndex& idx, double r, double span,
                       std::vector<double>& out, int depth = 40, int max_count = 64);

}  // namespace carnot
