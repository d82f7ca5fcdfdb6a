#include "lgtk/monodromy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <thread>

namespace lgtk {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

double arg_in(cplx z, double window) {
  double a = std::arg(z);
  while (a < window) a += kTwoPi;
  while (a >= window + kTwoPi) a -= kTwoPi;
  return a;
}

double backward_error(const std::vector<cplx>& a, cplx z, cplx p) {
  double scale = 0, r = 1;
  for (const auto& c : a) {
    scale += std::abs(c) * r;
    r *= std::abs(z);
  }
  return scale > 0 ? std::abs(p) / scale : std::abs(p);
}

// Upper hull of (i, log|a_i|) gives the root moduli at each scale.
std::vector<cplx> newton_polygon_start(const std::vector<cplx>& a) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (std::abs(a[at(i)]) > 0) idx.push_back(i);
  std::vector<int> hull;
  auto lg = [&](int i) { return std::log(std::abs(a[at(i)])); };
  for (int i : idx) {
    while (hull.size() >= 2) {
      const int p = hull[hull.size() - 2], q = hull.back();
      if ((lg(q) - lg(p)) * (i - p) <= (lg(i) - lg(p)) * (q - p)) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  std::vector<cplx> z;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int lo = hull[e], hi = hull[e + 1], k = hi - lo;
    const double r = std::exp((lg(lo) - lg(hi)) / k);
    for (int j = 0; j < k; ++j) z.push_back(std::polar(r, kTwoPi * j / k + 0.4 + 0.7 * static_cast<double>(e)));
  }
  return z;
}

std::vector<cplx> trimmed(std::vector<cplx> a) {
  while (!a.empty() && a.back() == cplx(0)) a.pop_back();
  return a;
}

}  // namespace

cplx evaluate(const std::vector<cplx>& a, cplx z) {
  cplx p = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) p = p * z + *it;
  return p;
}

std::vector<cplx> derivative(const std::vector<cplx>& a) {
  std::vector<cplx> d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<double>(i));
  return d;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  auto a = trimmed(coeffs);
  if (a.size() < 2) throw std::invalid_argument("polynomial_roots: constant polynomial");
  std::vector<cplx> zeros;
  std::size_t low = 0;
  while (a[low] == cplx(0)) ++low;
  zeros.assign(low, cplx(0));
  a.erase(a.begin(), a.begin() + static_cast<long>(low));
  if (a.size() < 2) return zeros;

  const auto d = derivative(a);
  auto z = newton_polygon_start(a);
  const std::size_t n = z.size();
  bool done = false;
  for (int it = 0; it < 500 && !done; ++it) {
    done = true;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx p = evaluate(a, z[k]);
      if (backward_error(a, z[k], p) < 1e-15) continue;
      const cplx ratio = p / evaluate(d, z[k]);
      cplx sum = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      if (std::abs(step) > 1e-15 * std::abs(z[k])) done = false;
    }
  }
  for (const auto& r : z)
    if (backward_error(a, r, evaluate(a, r)) > 1e-12) throw std::runtime_error("polynomial_roots: no convergence");
  zeros.insert(zeros.end(), z.begin(), z.end());
  return zeros;
}

HeightFunction height_from_J(const DegenerationJ& j) {
  HeightFunction h;
  h.n = j.n;
  h.eta.assign(at(j.n + 2), 0);
  for (int i = 1; i <= j.stages(); ++i) {
    h.slopes.push_back(i);
    const int lo = j.k[at(i - 1)], hi = j.k[at(i)];
    for (int x = lo + 1; x <= hi; ++x) h.eta[at(x)] = h.eta[at(lo)] + static_cast<long>(i) * (x - lo) + (x == hi ? 0 : 1);
  }
  return h;
}

std::vector<cplx> RegenerationFamily::coefficients() const {
  std::vector<cplx> a(at(j.n + 2), cplx(0));
  for (int i = 1; i <= j.n + 1; ++i) a[at(i)] = c[at(i)] * std::pow(s, static_cast<double>(height.eta[at(i)]));
  return a;
}

RegenerationFamily regeneration(const DegenerationJ& j, double s, std::uint64_t seed, double spread) {
  if (!(s > 0)) throw std::invalid_argument("regeneration: s must be positive");
  RegenerationFamily f;
  f.j = j;
  f.height = height_from_J(j);
  f.s = s;
  f.c.assign(at(j.n + 2), cplx(1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 1; i <= j.n + 1; ++i)
    if (!std::binary_search(j.k.begin(), j.k.end(), i)) {
      const double x = u(rng), y = u(rng);
      f.c[at(i)] = cplx(1 + spread * x, spread * y);
    }
  return f;
}

std::vector<CriticalPoint> critical_data(const std::vector<cplx>& coeffs) {
  const auto a = trimmed(coeffs);
  if (a.size() < 3) throw std::invalid_argument("critical_data: degree must be at least 2");
  const auto d = trimmed(derivative(a));
  if (d.empty()) throw std::invalid_argument("critical_data: derivative vanishes");
  std::vector<CriticalPoint> out;
  for (const auto& z : polynomial_roots(d)) out.push_back({z, evaluate(a, z)});
  return out;
}

namespace {

using Polyline = std::vector<cplx>;

// Drops repeated points and merges collinear runs of an axis-parallel polyline.
Polyline clean(const Polyline& p) {
  Polyline out;
  for (const auto& x : p) {
    if (!out.empty() && out.back() == x) continue;
    if (out.size() >= 2) {
      const cplx u = out[out.size() - 1] - out[out.size() - 2], v = x - out.back();
      if ((u.imag() == 0 && v.imag() == 0) || (u.real() == 0 && v.real() == 0)) out.pop_back();
    }
    out.push_back(x);
  }
  return out;
}

// Parallel copy at distance eps on the right of the direction of travel.
Polyline offset_right(const Polyline& p, double eps) {
  std::vector<std::pair<cplx, cplx>> lines;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const cplx d = (p[i + 1] - p[i]) / std::abs(p[i + 1] - p[i]);
    const cplx shift = d * cplx(0, -1) * eps;
    lines.push_back({p[i] + shift, p[i + 1] + shift});
  }
  Polyline out{lines.front().first};
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    const auto& [a1, b1] = lines[i];
    const auto& [a2, b2] = lines[i + 1];
    if (a1.imag() == b1.imag()) out.push_back({a2.real(), a1.imag()});
    else out.push_back({a1.real(), a2.imag()});
  }
  out.push_back(lines.back().second);
  return out;
}

bool segments_meet(cplx p1, cplx p2, cplx q1, cplx q2) {
  auto cross = [](cplx o, cplx a, cplx b) { return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real()); };
  auto on = [](cplx a, cplx b, cplx x) {
    return std::min(a.real(), b.real()) <= x.real() && x.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= x.imag() && x.imag() <= std::max(a.imag(), b.imag());
  };
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2), d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return (d1 == 0 && on(q1, q2, p1)) || (d2 == 0 && on(q1, q2, p2)) || (d3 == 0 && on(p1, p2, q1)) ||
         (d4 == 0 && on(p1, p2, q2));
}

}  // namespace

RadarScreen radar_screen(std::vector<cplx> values, const LiftChoice& lift, double epsilon,
                         std::optional<double> floor_depth) {
  if (values.empty()) throw std::invalid_argument("radar_screen: no critical values");
  for (const auto& v : values)
    if (std::abs(v) == 0) throw std::invalid_argument("radar_screen: zero critical value");
  std::sort(values.begin(), values.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  RadarScreen r;
  r.values = values;
  r.epsilon = epsilon;
  const std::size_t n = values.size();
  if (!lift.offsets.empty() && lift.offsets.size() != n) throw std::invalid_argument("radar_screen: one offset per value");
  for (std::size_t i = 0; i < n; ++i) {
    const double im = arg_in(values[i], lift.window) + (lift.offsets.empty() ? 0 : kTwoPi * lift.offsets[i]);
    r.lifts.push_back({std::log(std::abs(values[i])), im});
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (r.lifts[i].real() - r.lifts[i + 1].real() < 1e-9)
      throw std::invalid_argument("radar_screen: two critical values share a modulus");
  const double rend = r.lifts[0].real() + 5;
  r.base = {rend, r.lifts[0].imag()};

  std::vector<Polyline> core{{r.lifts[0], {rend, r.lifts[0].imag()}}};
  auto extend = [&](cplx w, std::size_t j) {
    const cplx prev = r.lifts[j - 1];
    const double eps = epsilon * std::ldexp(1.0, -static_cast<int>(j));
    if (prev.real() - w.real() <= 2 * eps) throw std::invalid_argument("radar_screen: moduli too close for epsilon");
    const auto tail = offset_right(core[j - 1], eps);
    Polyline p{w, {prev.real() - eps, w.imag()}, {prev.real() - eps, tail.front().imag()}};
    p.insert(p.end(), tail.begin(), tail.end());
    return clean(p);
  };
  for (std::size_t j = 1; j < n; ++j) core.push_back(extend(r.lifts[j], j));
  auto finish = [&](Polyline p) {
    p.push_back(r.base);
    return clean(p);
  };
  for (const auto& p : core) r.paths.push_back(finish(p));
  if (floor_depth) {
    core.push_back(extend({r.lifts[n - 1].real() - *floor_depth, lift.window}, n));
    r.floor_path = finish(core.back());
  }
  return r;
}

int radar_crossings(const RadarScreen& r, bool log_plane) {
  const double rend = r.base.real();
  auto segments = [&](const Polyline& p) {
    std::vector<std::pair<cplx, cplx>> s;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) s.push_back({p[i], p[i + 1]});
    return s;
  };
  int count = 0;
  for (std::size_t a = 0; a < r.paths.size(); ++a)
    for (std::size_t b = a + 1; b < r.paths.size(); ++b) {
      bool meet = false;
      const auto sa = segments(r.paths[a]), sb = segments(r.paths[b]);
      const int wrap = log_plane ? 0 : 2;
      for (int k = -wrap; k <= wrap && !meet; ++k)
        for (const auto& [p1, p2] : sa) {
          for (const auto& [q1, q2] : sb) {
            const cplx sh(0, kTwoPi * k);
            // Tails that reach the base column share it; only earlier contact counts.
            if (std::max(p1.real(), p2.real()) >= rend && std::max(q1.real(), q2.real()) >= rend) continue;
            if (segments_meet(p1, p2, q1 + sh, q2 + sh)) meet = true;
          }
          if (meet) break;
        }
      count += meet;
    }
  return count;
}

TrackResult track_fiber(const std::vector<cplx>& a, const std::vector<cplx>& path, const std::vector<cplx>& start,
                        PathSpace space, const TrackOptions& opt) {
  const auto d = derivative(a);
  auto q_of = [&](cplx w) { return space == PathSpace::logarithmic ? std::exp(w) : w; };
  TrackResult res;
  res.fiber = start;
  auto& z = res.fiber;
  const std::size_t n = z.size();
  std::vector<cplx> next(n);
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const cplx w0 = path[seg], w1 = path[seg + 1];
    const double len = std::abs(w1 - w0);
    if (len == 0) continue;
    const double cap = std::min(0.125, 0.1 / len);
    double t = 0, h = cap;
    cplx q0 = q_of(w0);
    while (t < 1) {
      h = std::min(h, 1 - t);
      const cplx q1 = q_of(w0 + (w1 - w0) * (t + h));
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        cplx x = z[i] + (q1 - q0) / evaluate(d, z[i]);
        bool converged = false;
        for (int it = 0; it < 12 && !converged; ++it) {
          const cplx dx = (evaluate(a, x) - q1) / evaluate(d, x);
          x -= dx;
          converged = std::abs(dx) <= 1e-14 * std::abs(x) || std::abs(dx) < 1e-300;
        }
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) ok = false;
        else if (backward_error(a, x, evaluate(a, x) - q1) > opt.tolerance) ok = false;
        next[i] = x;
      }
      for (std::size_t i = 0; i < n && ok; ++i) {
        const double moved = std::abs(next[i] - z[i]);
        for (std::size_t j = 0; j < n && ok; ++j)
          if (j != i && std::abs(next[j] - z[i]) < opt.gap_ratio * moved) ok = false;
      }
      if (!ok) {
        h /= 2;
        if (h < opt.min_step) throw TrackingError("track_fiber: root matching ambiguous at the minimum step");
        continue;
      }
      z.swap(next);
      q0 = q1;
      t += h;
      res.min_step = std::min(res.min_step, h);
      ++res.steps;
      h = std::min(2 * h, cap);
    }
  }
  return res;
}

std::vector<int> loop_permutation(const std::vector<cplx>& a, const std::vector<cplx>& loop, PathSpace space,
                                  const TrackOptions& opt) {
  if (loop.size() < 2 || std::abs(loop.front() - loop.back()) > 1e-12 * (1 + std::abs(loop.front())))
    throw std::invalid_argument("loop_permutation: path is not closed");
  auto shifted = a;
  shifted.resize(std::max<std::size_t>(shifted.size(), 1));
  shifted[0] -= space == PathSpace::logarithmic ? std::exp(loop.front()) : loop.front();
  const auto start = polynomial_roots(shifted);
  const auto end = track_fiber(a, loop, start, space, opt).fiber;
  std::vector<int> perm;
  std::set<int> used;
  for (const auto& x : end) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < start.size(); ++j)
      if (std::abs(start[j] - x) < std::abs(start[best] - x)) best = j;
    perm.push_back(static_cast<int>(best));
    used.insert(static_cast<int>(best));
  }
  if (used.size() != start.size()) throw TrackingError("loop_permutation: end fiber does not match the start");
  return perm;
}

namespace {

struct Sorted {
  std::vector<CriticalPoint> crit;  // decreasing modulus
  std::vector<int> stage;           // stage of crit[i]
};

Sorted sorted_critical(const RegenerationFamily& f) {
  Sorted s;
  s.crit = critical_data(f.coefficients());
  if (s.crit.size() != at(f.j.n)) throw std::logic_error("analyze_monodromy: wrong number of critical points");
  std::sort(s.crit.begin(), s.crit.end(), [](const auto& x, const auto& y) { return std::abs(x.value) > std::abs(y.value); });
  for (int t = f.j.stages(); t >= 1; --t)
    for (int r = 0; r < f.j.k[at(t)] - f.j.k[at(t - 1)]; ++r) s.stage.push_back(t);
  return s;
}

double worst_separation(const Sorted& s) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.crit.size(); ++i)
    if (s.stage[i] != s.stage[i + 1]) worst = std::min(worst, std::abs(s.crit[i].value) / std::abs(s.crit[i + 1].value));
  return worst;
}

// Prefix of a path of non-increasing real part up to Re = x, and the rest.
std::pair<Polyline, Polyline> cut(const Polyline& p, double x) {
  Polyline head{p.front()};
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const cplx a = p[i], b = p[i + 1];
    if (a.real() >= x && b.real() < x) {
      const cplx m = a + (b - a) * ((x - a.real()) / (b.real() - a.real()));
      head.push_back(m);
      Polyline rest{m};
      rest.insert(rest.end(), p.begin() + static_cast<long>(i) + 1, p.end());
      return {head, rest};
    }
    head.push_back(b);
  }
  throw std::logic_error("analyze_monodromy: gap point not on the path");
}

std::vector<std::size_t> by_modulus(const std::vector<cplx>& z) {
  std::vector<std::size_t> o(z.size());
  std::iota(o.begin(), o.end(), std::size_t{0});
  std::sort(o.begin(), o.end(), [&](auto x, auto y) { return std::abs(z[x]) < std::abs(z[y]); });
  return o;
}

void check_gap(const std::vector<cplx>& z, const std::vector<std::size_t>& o, int count) {
  if (count <= 0 || count >= static_cast<int>(z.size())) return;
  if (std::abs(z[o[at(count)]]) < 2 * std::abs(z[o[at(count - 1)]]))
    throw SeparationError("analyze_monodromy: fiber rings not separated; use a smaller s");
}

std::vector<int> ccw(const std::vector<int>& labels, const std::vector<cplx>& z) {
  auto out = labels;
  std::sort(out.begin(), out.end(), [&](int x, int y) { return arg_in(z[at(x - 1)], 0) < arg_in(z[at(y - 1)], 0); });
  return out;
}

}  // namespace

MonodromyReport analyze_monodromy(const RegenerationFamily& f, const MonodromyOptions& opt) {
  MonodromyReport rep;
  rep.family = f;
  const auto& j = f.j;
  const int n = j.n, m = j.stages();
  const auto a = f.coefficients();
  const auto sc = sorted_critical(f);
  if (worst_separation(sc) < opt.separation)
    throw SeparationError("analyze_monodromy: stage clusters closer than the required ratio; use a smaller s");

  std::vector<cplx> values;
  for (const auto& c : sc.crit) values.push_back(c.value);
  // Offsets must fit between neighbouring moduli inside a cluster.
  double eps = opt.epsilon;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    eps = std::min(eps, 0.25 * std::log(std::abs(values[i]) / std::abs(values[i + 1])));
  rep.screen = radar_screen(values, opt.lift, eps, 3.0);
  const auto& scr = rep.screen;

  auto fiber_at = [&](cplx w) {
    auto shifted = a;
    shifted[0] -= std::exp(w);
    return polynomial_roots(shifted);
  };
  rep.base_fiber = fiber_at(scr.base);
  std::sort(rep.base_fiber.begin(), rep.base_fiber.end(), [](cplx x, cplx y) { return arg_in(x, 0) < arg_in(y, 0); });
  auto track = [&](const Polyline& p, const std::vector<cplx>& start) {
    auto r = track_fiber(a, p, start, PathSpace::logarithmic, opt.track);
    rep.min_step = std::min(rep.min_step, r.min_step);
    return r.fiber;
  };

  // Vanishing pair of each path, in base labels.
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < n; ++p) {
    Polyline path = scr.paths[at(p)];
    const cplx dir = path[1] - path[0];
    path[0] += dir * (std::min(0.05, std::abs(dir) / 4) / std::abs(dir));
    std::reverse(path.begin(), path.end());
    const auto z = track(path, rep.base_fiber);
    const cplx c = sc.crit[at(p)].point;
    std::vector<std::size_t> o(z.size());
    std::iota(o.begin(), o.end(), std::size_t{0});
    std::sort(o.begin(), o.end(), [&](auto x, auto y) { return std::abs(z[x] - c) < std::abs(z[y] - c); });
    if (z.size() > 2 && 3 * std::abs(z[o[1]] - c) > std::abs(z[o[2]] - c)) throw TrackingError("analyze_monodromy: vanishing pair ambiguous");
    pairs.push_back({static_cast<int>(o[0]) + 1, static_cast<int>(o[1]) + 1});
  }

  std::vector<CyclicInsertion> insertions;
  bool all_ok = true;
  for (int t = 1; t <= m; ++t) {
    NumericStage st;
    st.stage = t;
    std::vector<int> members;  // path indices (0-based) of stage t, increasing modulus
    for (int p = n - 1; p >= 0; --p)
      if (sc.stage[at(p)] == t) members.push_back(p);
    st.cluster_low = std::abs(sc.crit[at(members.front())].value);
    st.cluster_high = std::abs(sc.crit[at(members.back())].value);

    int below = -1;
    for (int p = 0; p < n && below < 0; ++p)
      if (sc.stage[at(p)] == t - 1) below = p;
    Polyline path = below < 0 ? *scr.floor_path : scr.paths[at(below)];
    std::reverse(path.begin(), path.end());
    const double x_lo = (path.back().real() + scr.lifts[at(members.front())].real()) / 2;
    std::vector<cplx> upper = rep.base_fiber;
    Polyline rest = path;
    if (t < m) {
      int next_low = -1;
      for (int p = n - 1; p >= 0 && next_low < 0; --p)
        if (sc.stage[at(p)] == t + 1) next_low = p;
      const double x_hi = (scr.lifts[at(members.back())].real() + scr.lifts[at(next_low)].real()) / 2;
      auto [head, tail] = cut(path, x_hi);
      upper = track(head, rep.base_fiber);
      rest = tail;
    }
    const auto lower = track(cut(rest, x_lo).first, upper);

    const int b = j.k[at(t - 1)], kt = j.k[at(t)];
    const auto lo = by_modulus(lower), hi = by_modulus(upper);
    check_gap(lower, lo, b);
    check_gap(lower, lo, kt);
    check_gap(upper, hi, kt);
    std::vector<int> s1, s2set, s3;
    for (int i = 0; i < kt; ++i) (i < b ? s1 : s2set).push_back(static_cast<int>(lo[at(i)]) + 1);
    for (int i = 0; i < kt; ++i) s3.push_back(static_cast<int>(hi[at(i)]) + 1);
    st.insertion.s1 = ccw(s1, lower);
    st.insertion.s3 = ccw(s3, upper);

    // Pinch order: the smallest value pinches first; its pair holds the one
    // ring point not yet pinched.
    bool pinched = true;
    for (int p : members) {
      std::vector<int> cand;
      for (int x : {pairs[at(p)].first, pairs[at(p)].second})
        if (std::find(s2set.begin(), s2set.end(), x) != s2set.end() &&
            std::find(st.insertion.s2.begin(), st.insertion.s2.end(), x) == st.insertion.s2.end())
          cand.push_back(x);
      if (cand.size() != 1) {
        pinched = false;
        break;
      }
      st.insertion.s2.push_back(cand[0]);
      st.paths.push_back(p + 1);
    }
    try {
      validate(st.insertion);
      st.cyclic = pinched;
    } catch (const std::invalid_argument&) {
      st.cyclic = false;
    }
    if (st.cyclic) {
      const auto edges = insertion_graph(st.insertion);
      st.edges_match = true;
      for (std::size_t r = 0; r < edges.size(); ++r) {
        const auto pr = pairs[at(st.paths[r] - 1)];
        const std::set<int> e{edges[r].first, edges[r].second}, v{pr.first, pr.second};
        st.edges_match = st.edges_match && e == v;
      }
    }
    all_ok = all_ok && st.cyclic && st.edges_match;
    insertions.push_back(st.insertion);
    rep.stages.push_back(std::move(st));
  }

  rep.numeric.n = n;
  for (const auto& st : rep.stages)
    for (std::size_t r = 0; r < st.paths.size(); ++r) {
      const int p = st.paths[r];
      const auto pr = pairs[at(p - 1)];
      const int s = st.insertion.s2.size() > r ? st.insertion.s2[r] : pr.first;
      rep.numeric.edges.push_back({s, s == pr.first ? pr.second : pr.first, p, st.stage});
    }
  std::sort(rep.numeric.edges.begin(), rep.numeric.edges.end(), [](const auto& x, const auto& y) { return x.label < y.label; });

  if (all_ok) {
    try {
      rep.predicted = vanishing_tree(j, insertions);
    } catch (const std::exception& e) {
      rep.note = e.what();
      all_ok = false;
    }
  } else {
    rep.note = "a stage failed the insertion or edge check";
  }
  if (all_ok) {
    // Same pairs stage by stage, largest modulus first on both sides.
    auto key = [](const VanishingTree& t) {
      std::map<int, std::vector<std::set<int>>> k;
      for (const auto& e : t.edges) k[e.stage].push_back({e.a, e.b});
      return k;
    };
    rep.match = key(*rep.predicted) == key(rep.numeric);
    if (!rep.match) rep.note = "predicted tree differs from the numeric tree";
  }
  return rep;
}

double choose_s(const DegenerationJ& j, std::uint64_t seed, double start, double floor, double spread) {
  for (double s = start; s >= floor; s /= 2)
    if (worst_separation(sorted_critical(regeneration(j, s, seed, spread))) >= 10) return s;
  throw SeparationError("choose_s: clusters never separated above the floor");
}

std::vector<int> insertion_type(const CyclicInsertion& ins) {
  validate(ins);
  if (ins.s1.empty()) throw std::invalid_argument("insertion_type: empty S1");
  const auto start = std::find(ins.s3.begin(), ins.s3.end(), ins.s1[0]);
  std::vector<int> seq(start, ins.s3.end());
  seq.insert(seq.end(), ins.s3.begin(), start);
  std::vector<int> type;
  for (int x : seq) {
    const auto it = std::find(ins.s2.begin(), ins.s2.end(), x);
    type.push_back(it == ins.s2.end() ? 0 : static_cast<int>(it - ins.s2.begin()) + 1);
  }
  return type;
}

unsigned default_threads() {
  if (const char* env = std::getenv("LGTK_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace

TheoremReport verify_theorem(const DegenerationJ& j, int trials, std::uint64_t seed, unsigned threads,
                             std::optional<double> s) {
  if (j.n > 7) throw std::invalid_argument("verify_theorem: n > 7 is out of scope");
  TheoremReport rep;
  rep.j = j;
  rep.trials = trials;
  struct Outcome {
    bool validated = false, matched = false, shuffle = false;
    double s = 0;
    std::string failure;
  };
  std::vector<Outcome> out(at(trials));
  parallel_for(at(trials), threads, [&](std::size_t k) {
    auto& o = out[k];
    const std::uint64_t sd = seed + k;
    try {
      o.s = s ? *s : choose_s(j, sd);
      const auto r = analyze_monodromy(regeneration(j, o.s, sd));
      o.validated = std::all_of(r.stages.begin(), r.stages.end(), [](const auto& st) { return st.cyclic; });
      o.matched = r.match;
      o.shuffle = std::all_of(r.stages.begin(), r.stages.end(), [](const auto& st) {
        return st.insertion.s1.size() != st.insertion.s2.size() || is_perfect_shuffle(st.insertion);
      });
      if (!o.matched) o.failure = "trial " + std::to_string(k) + ": " + r.note;
    } catch (const std::exception& e) {
      o.failure = "trial " + std::to_string(k) + ": " + e.what();
    }
  });
  for (const auto& o : out) {
    rep.validated += o.validated;
    rep.matched += o.matched;
    rep.shuffles += o.shuffle;
    rep.s = std::max(rep.s, o.s);
    if (!o.failure.empty()) rep.failures.push_back(o.failure);
  }
  return rep;
}

SurjectivityReport search_insertions(int n, int draws, int range, std::uint64_t seed, unsigned threads) {
  if (n < 1 || n > 4) throw std::invalid_argument("search_insertions: n must be in 1..4");
  SurjectivityReport rep;
  rep.n = n;
  rep.expected = 1;
  for (int i = 2; i <= n; ++i) rep.expected *= static_cast<std::size_t>(i);
  const auto j = make_degeneration(n, {});
  std::vector<std::vector<int>> offsets;
  std::vector<int> cur(at(n), -range);
  while (true) {
    offsets.push_back(cur);
    int i = 0;
    while (i < n && cur[at(i)] == range) cur[at(i++)] = -range;
    if (i == n) break;
    ++cur[at(i)];
  }
  std::set<std::vector<int>> seen;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0, kTwoPi), mod(0.5, 2);
  for (int d = 0; d < draws && seen.size() < rep.expected; ++d) {
    auto f = regeneration(j, 0.1, seed);
    for (int i = 2; i <= n; ++i) f.c[at(i)] = std::polar(mod(rng), phase(rng));
    std::vector<std::optional<std::vector<int>>> types(offsets.size());
    parallel_for(offsets.size(), threads, [&](std::size_t k) {
      MonodromyOptions opt;
      opt.lift.offsets = offsets[k];
      try {
        const auto r = analyze_monodromy(f, opt);
        if (r.match) types[k] = insertion_type(r.stages[0].insertion);
      } catch (const std::exception&) {
      }
    });
    rep.runs += static_cast<int>(offsets.size());
    for (const auto& t : types)
      if (t) seen.insert(*t);
  }
  rep.realized.assign(seen.begin(), seen.end());
  return rep;
}

int sublevel_components(const std::vector<cplx>& a, double r, double box, int grid) {
  const std::size_t g = at(grid);
  std::vector<char> in(g * g, 0);
  for (std::size_t y = 0; y < g; ++y)
    for (std::size_t x = 0; x < g; ++x) {
      const cplx z(-box + 2 * box * (static_cast<double>(x) + 0.5) / grid, -box + 2 * box * (static_cast<double>(y) + 0.5) / grid);
      in[y * g + x] = std::abs(evaluate(a, z)) < r;
    }
  int comps = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g * g; ++s) {
    if (in[s] != 1) continue;
    ++comps;
    in[s] = 2;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const std::size_t x = c % g, y = c / g;
      const std::size_t nb[4] = {x > 0 ? c - 1 : c, x + 1 < g ? c + 1 : c, y > 0 ? c - g : c, y + 1 < g ? c + g : c};
      for (std::size_t v : nb)
        if (in[v] == 1) {
          in[v] = 2;
          stack.push_back(v);
        }
    }
  }
  return comps;
}

}  // namespace lgtk
