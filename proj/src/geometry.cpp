#include "bootperc/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace bootperc {

namespace {

__extension__ typedef __int128 i128;

// 0 for angles in [0, pi), 1 for [pi, 2pi).
int half_of(i128 x, i128 y) { return (y > 0 || (y == 0 && x > 0)) ? 0 : 1; }

// Angle order of two nonzero vectors on [0, 2pi), anchored at the +x axis.
std::strong_ordering compare_angle(i128 x1, i128 y1, i128 x2, i128 y2) {
  const int h1 = half_of(x1, y1);
  const int h2 = half_of(x2, y2);
  if (h1 != h2) return h1 <=> h2;
  const i128 c = x1 * y2 - y1 * x2;
  if (c > 0) return std::strong_ordering::less;
  if (c < 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void require_in_range(std::int64_t v) {
  if (v > kCoordinateLimit || v < -kCoordinateLimit)
    throw ArithmeticOverflow("coordinate " + std::to_string(v) +
                             " exceeds the supported range");
}

}  // namespace

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in addition");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in subtraction");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in multiplication");
  return r;
}

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
  return {checked_add(a.x, b.x), checked_add(a.y, b.y)};
}
LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
  return {checked_sub(a.x, b.x), checked_sub(a.y, b.y)};
}
LatticePoint operator-(const LatticePoint& a) { return {checked_sub(0, a.x), checked_sub(0, a.y)}; }
LatticePoint operator*(std::int64_t k, const LatticePoint& a) {
  return {checked_mul(k, a.x), checked_mul(k, a.y)};
}

std::int64_t dot(const LatticePoint& a, const LatticePoint& b) {
  return checked_add(checked_mul(a.x, b.x), checked_mul(a.y, b.y));
}
std::int64_t cross(const LatticePoint& a, const LatticePoint& b) {
  return checked_sub(checked_mul(a.x, b.y), checked_mul(a.y, b.x));
}
std::int64_t linf_norm(const LatticePoint& a) {
  return std::max(a.x < 0 ? checked_sub(0, a.x) : a.x, a.y < 0 ? checked_sub(0, a.y) : a.y);
}

std::string to_string(const LatticePoint& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}
std::ostream& operator<<(std::ostream& os, const LatticePoint& p) { return os << to_string(p); }

Direction Direction::of(std::int64_t x, std::int64_t y) {
  if (x == 0 && y == 0) throw PreconditionError("direction from the zero vector");
  const std::int64_t g = std::gcd(x, y);
  x /= g;
  y /= g;
  require_in_range(x);
  require_in_range(y);
  return Direction(x, y);
}

std::strong_ordering operator<=>(const Direction& a, const Direction& b) {
  return compare_angle(a.px_, a.py_, b.px_, b.py_);
}

std::strong_ordering ccw_compare(const Direction& a, const Direction& b) { return a <=> b; }

std::strong_ordering ccw_compare_from(const Direction& anchor, const Direction& a,
                                      const Direction& b) {
  const i128 ax = anchor.px(), ay = anchor.py();
  const i128 rax = ax * a.px() + ay * a.py();
  const i128 ray = ax * a.py() - ay * a.px();
  const i128 rbx = ax * b.px() + ay * b.py();
  const i128 rby = ax * b.py() - ay * b.px();
  return compare_angle(rax, ray, rbx, rby);
}

bool strictly_between(const Direction& lo, const Direction& d, const Direction& hi) {
  if (d == lo) return false;
  if (lo == hi) return true;
  return ccw_compare_from(lo, d, hi) == std::strong_ordering::less;
}

std::string to_string(const Direction& d) { return to_string(d.vector()); }
std::ostream& operator<<(std::ostream& os, const Direction& d) { return os << to_string(d); }

// ---------------------------------------------------------------- Arc

Arc Arc::point(const Direction& d) {
  Arc a(Kind::Point);
  a.lo_ = a.hi_ = d;
  return a;
}

Arc Arc::punctured(const Direction& d) {
  Arc a(Kind::Punctured);
  a.lo_ = a.hi_ = d;
  a.lo_open_ = a.hi_open_ = true;
  return a;
}

Arc Arc::make(const Direction& lo, bool lo_open, const Direction& hi, bool hi_open) {
  if (lo == hi) return (lo_open || hi_open) ? empty() : point(lo);
  Arc a(Kind::Proper);
  a.lo_ = lo;
  a.hi_ = hi;
  a.lo_open_ = lo_open;
  a.hi_open_ = hi_open;
  return a;
}

bool Arc::contains(const Direction& d) const {
  switch (kind_) {
    case Kind::Empty: return false;
    case Kind::Full: return true;
    case Kind::Point: return d == lo_;
    case Kind::Punctured: return d != lo_;
    case Kind::Proper:
      if (d == lo_) return !lo_open_;
      if (d == hi_) return !hi_open_;
      return strictly_between(lo_, d, hi_);
  }
  return false;
}

std::string to_string(const Arc& a) {
  switch (a.kind()) {
    case Arc::Kind::Empty: return "empty";
    case Arc::Kind::Full: return "full";
    case Arc::Kind::Point: return "{" + to_string(a.lo()) + "}";
    case Arc::Kind::Punctured: return "full\\{" + to_string(a.lo()) + "}";
    case Arc::Kind::Proper:
      return std::string(a.lo_open() ? "(" : "[") + to_string(a.lo()) + " -> " +
             to_string(a.hi()) + (a.hi_open() ? ")" : "]");
  }
  return "?";
}
std::ostream& operator<<(std::ostream& os, const Arc& a) { return os << to_string(a); }

Arc semicircle(const Direction& endpoint, Orientation side) {
  if (side == Orientation::CounterClockwise) return Arc::open(endpoint, endpoint.antipode());
  return Arc::open(endpoint.antipode(), endpoint);
}

// ---------------------------------------------------------------- ArcSet

ArcSet ArcSet::full() {
  ArcSet s;
  s.all_ = true;
  return s;
}

ArcSet ArcSet::of(const Arc& a) {
  ArcSet s;
  switch (a.kind()) {
    case Arc::Kind::Empty: return s;
    case Arc::Kind::Full: return full();
    case Arc::Kind::Point:
      s.points_ = {a.lo()};
      s.point_in_ = {1};
      s.gap_in_ = {0};
      return s;
    case Arc::Kind::Punctured:
      s.points_ = {a.lo()};
      s.point_in_ = {0};
      s.gap_in_ = {1};
      return s;
    case Arc::Kind::Proper:
      if (a.lo() < a.hi()) {
        s.points_ = {a.lo(), a.hi()};
        s.point_in_ = {char(!a.lo_open()), char(!a.hi_open())};
        s.gap_in_ = {1, 0};
      } else {
        s.points_ = {a.hi(), a.lo()};
        s.point_in_ = {char(!a.hi_open()), char(!a.lo_open())};
        s.gap_in_ = {0, 1};
      }
      s.canonicalize();
      return s;
  }
  return s;
}

bool ArcSet::state_at(const Direction& d) const {
  if (points_.empty()) return all_;
  auto it = std::lower_bound(points_.begin(), points_.end(), d);
  if (it != points_.end() && *it == d) return point_in_[it - points_.begin()];
  if (it == points_.begin()) return gap_in_.back();
  return gap_in_[(it - points_.begin()) - 1];
}

bool ArcSet::state_after(const Direction& d) const {
  if (points_.empty()) return all_;
  auto it = std::upper_bound(points_.begin(), points_.end(), d);
  if (it == points_.begin()) return gap_in_.back();
  return gap_in_[(it - points_.begin()) - 1];
}

void ArcSet::canonicalize() {
  const std::size_t m = points_.size();
  if (m == 0) return;
  std::vector<Direction> pts;
  std::vector<char> pin, gin;
  for (std::size_t i = 0; i < m; ++i) {
    const char prev_gap = gap_in_[(i + m - 1) % m];
    if (point_in_[i] == gap_in_[i] && gap_in_[i] == prev_gap) continue;
    pts.push_back(points_[i]);
    pin.push_back(point_in_[i]);
    gin.push_back(gap_in_[i]);
  }
  if (pts.empty()) {
    all_ = gap_in_[0] != 0;
  } else {
    all_ = false;
  }
  points_ = std::move(pts);
  point_in_ = std::move(pin);
  gap_in_ = std::move(gin);
}

template <class Op>
ArcSet ArcSet::combine(const ArcSet& a, const ArcSet& b, Op op) {
  ArcSet out;
  std::vector<Direction> merged;
  merged.reserve(a.points_.size() + b.points_.size());
  std::merge(a.points_.begin(), a.points_.end(), b.points_.begin(), b.points_.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  if (merged.empty()) {
    out.all_ = op(a.all_, b.all_);
    return out;
  }
  out.points_ = merged;
  for (const auto& q : merged) {
    out.point_in_.push_back(char(op(a.state_at(q), b.state_at(q))));
    out.gap_in_.push_back(char(op(a.state_after(q), b.state_after(q))));
  }
  out.canonicalize();
  return out;
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  return combine(*this, other, [](bool x, bool y) { return x || y; });
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  return combine(*this, other, [](bool x, bool y) { return x && y; });
}

ArcSet ArcSet::complement() const {
  ArcSet out = *this;
  out.all_ = points_.empty() && !all_;
  for (auto& c : out.point_in_) c = !c;
  for (auto& c : out.gap_in_) c = !c;
  return out;
}

bool ArcSet::contains(const Direction& d) const { return state_at(d); }

std::vector<Arc> ArcSet::arcs() const {
  const std::size_t m = points_.size();
  if (m == 0) return all_ ? std::vector<Arc>{Arc::full()} : std::vector<Arc>{};
  const std::size_t n = 2 * m;
  auto member = [&](std::size_t e) -> bool {
    e %= n;
    return (e % 2 == 0) ? point_in_[e / 2] : gap_in_[e / 2];
  };
  std::size_t e0 = 0;
  while (member(e0)) ++e0;  // canonical and not full, so a non-member exists

  std::vector<Arc> out;
  auto emit = [&](std::size_t a, std::size_t b) {
    a %= n;
    b %= n;
    if (a == b && a % 2 == 0) {
      out.push_back(Arc::point(points_[a / 2]));
      return;
    }
    const Direction lo = points_[(a % 2 == 0) ? a / 2 : (a - 1) / 2];
    const bool lo_open = a % 2 == 1;
    const Direction hi = points_[(b % 2 == 0) ? b / 2 : ((b - 1) / 2 + 1) % m];
    const bool hi_open = b % 2 == 1;
    if (lo == hi && lo_open && hi_open) {
      out.push_back(Arc::punctured(lo));
    } else {
      out.push_back(Arc::make(lo, lo_open, hi, hi_open));
    }
  };
  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t e = e0 + step;
    if (member(e)) {
      if (!in_run) {
        in_run = true;
        run_start = e;
      }
    } else if (in_run) {
      in_run = false;
      emit(run_start, e - 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const Arc& x, const Arc& y) { return x.lo() < y.lo(); });
  return out;
}

std::vector<Direction> ArcSet::isolated_points() const {
  std::vector<Direction> out;
  for (const auto& a : arcs())
    if (a.kind() == Arc::Kind::Point) out.push_back(a.lo());
  return out;
}

ArcSet arcset_union(std::span<const Arc> arcs) {
  ArcSet s;
  for (const auto& a : arcs) s = s.unite(ArcSet::of(a));
  return s;
}

ArcSet arcset_complement(const ArcSet& s) { return s.complement(); }

std::string to_string(const ArcSet& s) {
  const auto as = s.arcs();
  if (as.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (i) out += " U ";
    out += to_string(as[i]);
  }
  return out;
}

// ---------------------------------------------------------------- rules

Arc unstable_arc_of_rule(std::span<const LatticePoint> sites) {
  if (sites.empty()) throw InvalidRule("empty rule");
  for (const auto& x : sites) {
    if (x.x == 0 && x.y == 0) throw InvalidRule("rule contains the origin");
    require_in_range(x.x);
    require_in_range(x.y);
  }
  // Angular offsets relative to an anchor site, taken in (-pi, pi]. The rule
  // fits in an open half-plane iff the offsets span less than pi, and the
  // unstable arc then runs from the perpendicular of the most counterclockwise
  // site to the perpendicular of the most clockwise one.
  const LatticePoint x0 = sites.front();
  struct Offset {
    i128 c, d;
  };
  auto offset_of = [&](const LatticePoint& x) {
    return Offset{i128(x0.x) * x.x + i128(x0.y) * x.y, i128(x0.x) * x.y - i128(x0.y) * x.x};
  };
  auto upper = [](const Offset& o) { return o.d > 0 || (o.d == 0 && o.c < 0); };
  auto less = [&](const Offset& a, const Offset& b) {
    const bool ua = upper(a), ub = upper(b);
    if (ua != ub) return !ua;
    return a.c * b.d - a.d * b.c > 0;
  };
  LatticePoint xmin = x0, xmax = x0;
  Offset omin = offset_of(x0), omax = omin;
  for (const auto& x : sites) {
    const Offset o = offset_of(x);
    if (less(o, omin)) {
      omin = o;
      xmin = x;
    }
    if (less(omax, o)) {
      omax = o;
      xmax = x;
    }
  }
  const i128 span_cross = i128(xmin.x) * xmax.y - i128(xmin.y) * xmax.x;
  const bool same_ray = span_cross == 0 && (i128(xmin.x) * xmax.x + i128(xmin.y) * xmax.y) > 0;
  if (!same_ray && span_cross <= 0) return Arc::empty();
  return Arc::open(Direction::of(xmax).rotated_ccw(), Direction::of(xmin).rotated_cw());
}

}  // namespace bootperc
