#include "carnotlab/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace carnot {

namespace {

// 192-bit unsigned integer, just enough exact arithmetic to extract ternary
// digits of a dyadic rational x = M / 2^d with d up to ~185.
struct U192 {
  uint64_t w[3] = {0, 0, 0};

  bool is_zero() const { return !(w[0] | w[1] | w[2]); }

  void mul3() {
    // x = (x << 1) + x
    uint64_t c0 = w[0] >> 63, c1 = w[1] >> 63;
    uint64_t s0 = w[0] << 1, s1 = (w[1] << 1) | c0, s2 = (w[2] << 1) | c1;
    uint64_t r0 = s0 + w[0];
    uint64_t carry = r0 < s0 ? 1u : 0u;
    uint64_t r1 = s1 + w[1] + carry;
    carry = (r1 < s1 || (carry && r1 == s1)) ? 1u : 0u;
    uint64_t r2 = s2 + w[2] + carry;
    w[0] = r0; w[1] = r1; w[2] = r2;
  }

  // value >> d for d < 192 (result fits in 64 bits for our use: < 3*2^d / 2^d)
  uint64_t shifted_down(int d) const {
    int word = d / 64, off = d % 64;
    uint64_t lo = word < 3 ? w[word] : 0;
    uint64_t hi = word + 1 < 3 ? w[word + 1] : 0;
    return off == 0 ? lo : (lo >> off) | (hi << (64 - off));
  }

  void mask_low(int d) {  // keep low d bits
    for (int i = 0; i < 3; ++i) {
      int lo = i * 64, hi = lo + 64;
      if (d <= lo)
        w[i] = 0;
      else if (d < hi)
        w[i] &= (uint64_t(1) << (d - lo)) - 1;
    }
  }

  // approximate value / 2^d in double, good enough for boundary-band tests
  double fraction(int d) const {
    double v = 0.0;
    for (int i = 2; i >= 0; --i) v = v * 18446744073709551616.0 + double(w[i]);
    return v * std::pow(2.0, -d);
  }
};

// Ternary digit stream of x in (0,1). Exact while x >= 2^-130; smaller x has
// at least 82 leading zero digits, more than any supported depth.
struct TernaryDigits {
  U192 num;
  int d = 0;        // denominator exponent: remainder = num / 2^d
  bool tiny = false;

  explicit TernaryDigits(double x) {
    int e;
    double frac = std::frexp(x, &e);  // x = frac * 2^e, frac in [0.5, 1)
    if (x > 0 && e < -130) {
      tiny = true;
      return;
    }
    uint64_t mant = static_cast<uint64_t>(std::ldexp(frac, 53));
    d = 53 - e;
    num.w[0] = mant;
  }

  int next() {  // digit in {0,1,2}
    if (tiny) return 0;
    num.mul3();
    int digit = static_cast<int>(num.shifted_down(d));
    num.mask_low(d);
    return digit;
  }

  bool remainder_zero() const { return tiny ? false : num.is_zero(); }
  double remainder_fraction() const { return tiny ? 0.0 : num.fraction(d); }
};

constexpr int kMaxDepth = 80;

int clamp_depth(int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  return std::min(depth, kMaxDepth);
}

}  // namespace

Tri cantor_member(double x, int depth) {
  depth = clamp_depth(depth);
  if (!(x >= 0.0) || x > 1.0) return Tri::Out;
  if (x == 0.0 || x == 1.0) return Tri::In;
  TernaryDigits digits(x);
  for (int j = 1; j <= depth; ++j) {
    int dig = digits.next();
    if (dig != 1) continue;
    if (digits.remainder_zero()) return Tri::In;  // left endpoint 0.d..d1 = 0.d..d0222..
    // Strictly inside the removed interval at level j; call it undecided
    // only when x sits within 3^-depth of the interval's boundary.
    double f = digits.remainder_fraction();
    double band = std::pow(3.0, j - depth);
    if (std::min(f, 1.0 - f) < band) return Tri::Undecided;
    return Tri::Out;
  }
  return Tri::In;  // no digit 1 within depth: x lies in the depth-level cover
}

double cantor_distance(double u, int depth) {
  depth = clamp_depth(depth);
  if (u <= 0.0) return -u;
  if (u >= 1.0) return u - 1.0;
  double scale = 1.0;
  for (int j = 0; j < depth; ++j) {
    if (u < 1.0 / 3.0) {
      u *= 3.0;
      scale /= 3.0;
    } else if (u > 2.0 / 3.0) {
      u = 3.0 * u - 2.0;
      scale /= 3.0;
    } else {
      return scale * std::max(0.0, std::min(u - 1.0 / 3.0, 2.0 / 3.0 - u));
    }
  }
  return 0.0;  // depth exhausted: truncate downward
}

bool cantor_hits_interval(double a, double b, int depth) {
  depth = clamp_depth(depth);
  for (int j = 0; j <= depth; ++j) {
    if (b < 0.0 || a > 1.0 || a > b) return false;
    if (a <= 0.0 || b >= 1.0) return true;          // 0, 1 in C
    if (a <= 1.0 / 3.0 && b >= 1.0 / 3.0) return true;  // 1/3 in C
    if (a <= 2.0 / 3.0 && b >= 2.0 / 3.0) return true;  // 2/3 in C
    if (b < 1.0 / 3.0) {
      a *= 3.0;
      b *= 3.0;
    } else if (a > 2.0 / 3.0) {
      a = 3.0 * a - 2.0;
      b = 3.0 * b - 2.0;
    } else {
      return false;  // interval inside the removed middle third
    }
  }
  return false;  // depth exhausted without a certificate
}

namespace {

void collect_gaps(double lo, double hi, double min_width, double left, double width,
                  std::vector<std::pair<double, double>>& out, int max_count,
                  int depth) {
  if (static_cast<int>(out.size()) >= max_count || depth <= 0) return;
  if (left > hi || left + width < lo) return;  // outside the query window
  double gw = width / 3.0;
  if (gw < min_width) return;
  double g_lo = left + gw, g_hi = left + 2.0 * gw;
  if (g_hi >= lo && g_lo <= hi) out.emplace_back(g_lo, g_hi);
  collect_gaps(lo, hi, min_width, left, gw, out, max_count, depth - 1);
  collect_gaps(lo, hi, min_width, g_hi, gw, out, max_count, depth - 1);
}

}  // namespace

void cantor_gaps(double lo, double hi, double min_width,
                 std::vector<std::pair<double, double>>& out, int max_count) {
  collect_gaps(lo, hi, min_width, 0.0, 1.0, out, max_count, 60);
}

Interval ank_envelope(const LadderIndex& idx) {
  if (idx.n < 1) throw std::invalid_argument("ank_envelope: n must be >= 1");
  long long kmax = (1ll << idx.n) - 1;
  if (idx.k < 0 || idx.k > kmax)
    throw std::invalid_argument("ank_envelope: k out of range 0..2^n-1");
  double base = std::ldexp(1.0, -idx.n);
  double len = std::ldexp(1.0, -2 * idx.n);
  return {base + idx.k * len, base + (idx.k + 1) * len};
}

namespace {

// Band n with 2^-n <= x <= 2^-(n-1); x on a boundary belongs to two bands.
std::vector<int> bands_of(double x) {
  std::vector<int> out;
  int n = static_cast<int>(std::floor(-std::log2(x))) + 1;
  for (int cand = std::max(1, n - 2); cand <= n + 2; ++cand) {
    double lo = std::ldexp(1.0, -cand), hi = std::ldexp(1.0, -(cand - 1));
    if (x >= lo && x <= hi) out.push_back(cand);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LadderIndex> envelopes_containing(double x) {
  std::vector<LadderIndex> out;
  for (int n : bands_of(x)) {
    double base = std::ldexp(1.0, -n);
    double len = std::ldexp(1.0, -2 * n);
    long long kmax = (1ll << n) - 1;
    long long k0 = static_cast<long long>(std::floor((x - base) / len));
    for (long long k = k0 - 1; k <= k0 + 1; ++k) {
      if (k < 0 || k > kmax) continue;
      Interval env = ank_envelope({n, k});
      if (x >= env.lo && x <= env.hi) out.push_back({n, k});
    }
  }
  return out;
}

}  // namespace

AnkWitness ank_member(double x, int depth) {
  AnkWitness w;
  if (x <= 0.0 || x >= 1.0) return w;
  for (const LadderIndex& idx : envelopes_containing(x)) {
    Interval env = ank_envelope(idx);
    double u = (x - env.lo) / env.length();
    Tri t = cantor_member(u, depth);
    if (t == Tri::In) {
      w.index = idx;
      w.undecided = false;
      return w;
    }
    if (t == Tri::Undecided) w.undecided = true;
  }
  return w;
}

LadderIndex gap_window(double t, int depth) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("gap_window: t must lie in (0,1)");
  depth = clamp_depth(depth);
  const double w_hi = t + 4.0 * t * t;
  int n = bands_of(t).front();

  auto certified = [&](const LadderIndex& idx) {
    Interval env = ank_envelope(idx);
    double lo = std::max(t, env.lo), hi = std::min(w_hi, env.hi);
    if (lo > hi) return false;
    double len = env.length();
    return cantor_hits_interval((lo - env.lo) / len, (hi - env.lo) / len, depth);
  };

  auto scan_band = [&](int nu, bool from_start_of_window) -> std::optional<LadderIndex> {
    if (nu < 1) return std::nullopt;
    double base = std::ldexp(1.0, -nu);
    double len = std::ldexp(1.0, -2 * nu);
    long long kmax = (1ll << nu) - 1;
    long long k_lo = static_cast<long long>(std::floor((t - base) / len)) - 1;
    long long k_hi = static_cast<long long>(std::floor((w_hi - base) / len)) + 1;
    k_lo = std::max(0ll, k_lo);
    k_hi = std::min(kmax, k_hi);
    long long k_start =
        std::max(0ll, static_cast<long long>(std::ceil((t - base) / len)));
    if (from_start_of_window) {
      for (long long k = k_start; k <= k_hi; ++k)
        if (certified({nu, k})) return LadderIndex{nu, k};
    } else {
      for (long long k = k_lo; k <= std::min(k_start - 1, k_hi); ++k)
        if (certified({nu, k})) return LadderIndex{nu, k};
    }
    return std::nullopt;
  };

  // Envelopes starting inside the window first (bands n, n+1), then the
  // partial overlaps (bands n, n+1, n-1).
  for (int nu : {n, n + 1})
    if (auto hit = scan_band(nu, true)) return *hit;
  for (int nu : {n, n + 1, n - 1})
    if (auto hit = scan_band(nu, false)) return *hit;
  throw InternalError("gap_window: no ladder set certified in [t, t+4t^2]");
}

double ank_distance(double r, const LadderIndex& idx, int depth) {
  Interval env = ank_envelope(idx);
  if (r <= env.lo) return env.lo - r;  // envelope ends belong to the set
  if (r >= env.hi) return r - env.hi;
  double len = env.length();
  return len * cantor_distance((r - env.lo) / len, depth);
}

double ladder_distance(double r, int depth) {
  if (r <= 0.0) return -r;       // 0 belongs to the structure
  if (r >= 1.0) return r - 1.0;  // 1 is the right end of A_{1,1}
  // The envelopes tile (0,1] and each contains its own endpoints, so the
  // distance is realized inside the envelope(s) containing r.
  double best = r;  // distance to 0 as a fallback for r below all bands
  for (const LadderIndex& idx : envelopes_containing(r))
    best = std::min(best, ank_distance(r, idx, depth));
  return best;
}

void ank_gap_midpoints(const LadderIndex& idx, double r, double span,
                       std::vector<double>& out, int depth, int max_count) {
  (void)depth;
  Interval env = ank_envelope(idx);
  double len = env.length();
  double lo = std::max(0.0, (r - span - env.lo) / len);
  double hi = std::min(1.0, (r + span - env.lo) / len);
  if (lo > hi) return;
  std::vector<std::pair<double, double>> gaps;
  cantor_gaps(lo, hi, std::max(1e-18, span / len * 1e-4), gaps, max_count);
  for (auto& g : gaps)
    out.push_back(env.lo + len * 0.5 * (g.first + g.second));
}

void ladder_gap_midpoints(double r, double span, std::vector<double>& out,
                          int depth, int max_count) {
  if (r <= 0.0) return;
  // Walk envelopes outward from the one containing r until past the span.
  std::vector<LadderIndex> seed = envelopes_containing(std::min(r, 0.999999));
  if (seed.empty()) return;
  LadderIndex cur = seed.front();

  auto step = [&](const LadderIndex& idx, int dir) -> std::optional<LadderIndex> {
    long long kmax = (1ll << idx.n) - 1;
    long long k = idx.k + dir;
    if (k >= 0 && k <= kmax) return LadderIndex{idx.n, k};
    if (dir > 0 && idx.n > 1) return LadderIndex{idx.n - 1, 0};
    if (dir < 0 && idx.n < 50) return LadderIndex{idx.n + 1, (1ll << (idx.n + 1)) - 1};
    return std::nullopt;
  };

  for (int dir : {0, +1, -1}) {
    std::optional<LadderIndex> idx = cur;
    if (dir != 0) idx = step(cur, dir);
    int guard = 0;
    while (idx && static_cast<int>(out.size()) < max_count && guard++ < 256) {
      Interval env = ank_envelope(*idx);
      if (dir > 0 && env.lo > r + span) break;
      if (dir < 0 && env.hi < r - span) break;
      ank_gap_midpoints(*idx, r, span, out, depth, max_count);
      if (dir == 0) break;
      idx = step(*idx, dir);
    }
  }
}

}  // namespace carnot
