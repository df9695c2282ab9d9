#pragma once

#include <optional>
#include <string>
#include <vector>

#include "addilope/grid.hpp"

namespace addilope {

enum class Verdict { holds, fails };

enum class WitnessKind { pair, quadruple, axis_pair, midpoint, point };

// Concrete violating configuration. `slack` is rhs - lhs of the required
// inequality lhs <= rhs, recomputable from `values`:
//   pair       indices {p, q},       values {a[p], a[q], a[p+q]} for the
//              additivity checks, {a[k], a[k+1]} for the ratio check
//   quadruple  indices {u, v, x, y}, values {a[u], a[v], a[x], a[y]}
//   axis_pair  indices {m, m+e_i},   values {a[m], a[m+e_i]}
//   midpoint   indices {p, q, mid},  values {a[p], a[q], a[mid]}
//   point      indices {m},          values {a[m]}
template <Scalar S>
struct Witness {
  WitnessKind kind;
  std::vector<MultiIndex> indices;
  std::vector<Ext<S>> values;
  S slack;
};

template <Scalar S>
struct CheckReport {
  std::string property;
  bool strict = false;
  Verdict verdict = Verdict::holds;
  std::optional<Witness<S>> witness;
  S tolerance;
  std::optional<S> margin;  // minimal slack seen, present when the check holds
  std::vector<std::string> notes;

  bool holds() const { return verdict == Verdict::holds; }
};

struct Ray {
  enum class Kind { axis, diagonal };
  Kind kind = Kind::axis;
  int axis = 0;  // 0-based, for Kind::axis

  static Ray along_axis(int i) { return Ray{Kind::axis, i}; }
  static Ray diagonal() { return Ray{Kind::diagonal, 0}; }
};

// 1e-9 * (1 + max|a|) on the floating lane, exact zero on the rational lane.
template <Scalar S>
S default_tolerance(const GridFn<S>& a) {
  if constexpr (is_exact_v<S>) {
    return Rat(0);
  } else {
    Ext<double> m = max_finite_value(a);
    return scalar_ops<double>::default_rel_tol() * (1.0 + m.finite());
  }
}

namespace detail {

template <Scalar S>
void require_finite(const GridFn<S>& a) {
  for (const Ext<S>& v : a.values)
    if (v.is_inf())
      throw grid_error("property checkers require finite grid values");
}

// Tracks the running margin and the first violation in scan order.
template <Scalar S>
struct ScanState {
  std::optional<S> margin;
  std::optional<Witness<S>> witness;

  void observe(const S& slack) {
    if (!margin || slack < *margin) margin = slack;
  }
  bool violated() const { return witness.has_value(); }
};

template <Scalar S>
CheckReport<S> finish(std::string property, bool strict, const S& tol,
                      ScanState<S>&& scan, std::vector<std::string> notes = {}) {
  CheckReport<S> r;
  r.property = std::move(property);
  r.strict = strict;
  r.tolerance = tol;
  r.notes = std::move(notes);
  if (scan.witness) {
    r.verdict = Verdict::fails;
    r.witness = std::move(scan.witness);
  } else {
    r.verdict = Verdict::holds;
    r.margin = scan.margin;
  }
  return r;
}

}  // namespace detail

// a[0] = 0 and a non-decreasing along every axis step.
template <Scalar S>
CheckReport<S> check_aggregation(const GridFn<S>& a, std::optional<S> tol = {}) {
  detail::require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  detail::ScanState<S> scan;
  const S zero = scalar_ops<S>::from_int(0);

  S origin_slack = zero - scalar_ops<S>::abs(a.at(0).finite());
  scan.observe(origin_slack);
  if (origin_slack < zero - t) {
    scan.witness = Witness<S>{WitnessKind::point,
                              {MultiIndex(a.spec.step.size(), 0)},
                              {a.at(0)},
                              origin_slack};
    return detail::finish<S>("aggregation", false, t, std::move(scan));
  }

  MultiIndex strides = a.spec.strides();
  MultiIndex midx(a.spec.step.size(), 0);
  std::int64_t flat = 0;
  do {
    for (std::size_t i = 0; i < midx.size() && !scan.violated(); ++i) {
      if (midx[i] >= a.spec.count[i]) continue;
      std::int64_t up = flat + strides[i];
      S slack = a.at(up).finite() - a.at(flat).finite();
      scan.observe(slack);
      if (slack < zero - t) {
        MultiIndex next = midx;
        ++next[i];
        scan.witness = Witness<S>{WitnessKind::axis_pair,
                                  {midx, next},
                                  {a.at(flat), a.at(up)},
                                  slack};
      }
    }
    ++flat;
  } while (!scan.violated() && next_index(midx, a.spec.count));
  return detail::finish<S>("aggregation", false, t, std::move(scan));
}

namespace detail {

// Shared pair scan for super/sub-additivity. For super the required
// inequality is a[p] + a[q] <= a[p+q]; sub reverses it. In strict mode the
// non-strict inequality must hold everywhere and the strict one on every
// pair of nonzero points (except p = q in one dimension).
template <Scalar S>
CheckReport<S> check_additivity(const GridFn<S>& a, bool super, bool strict,
                                std::optional<S> tol) {
  require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  const int n = a.spec.arity();
  MultiIndex strides = a.spec.strides();
  ScanState<S> scan;

  MultiIndex p(a.spec.step.size(), 0);
  std::int64_t p_flat = 0;
  do {
    MultiIndex q_bound(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q_bound[i] = a.spec.count[i] - p[i];
    MultiIndex q(p.size(), 0);
    do {
      std::int64_t q_flat = 0;
      for (std::size_t i = 0; i < q.size(); ++i) q_flat += q[i] * strides[i];
      if (q_flat < p_flat) continue;
      std::int64_t sum_flat = p_flat + q_flat;
      S lo = a.at(p_flat).finite() + a.at(q_flat).finite();
      S hi = a.at(sum_flat).finite();
      S slack = super ? hi - lo : lo - hi;
      bool eligible_strict =
          strict && p_flat != 0 && q_flat != 0 && (n > 1 || p_flat != q_flat);
      if (eligible_strict) scan.observe(slack);
      if (!strict && !eligible_strict) scan.observe(slack);
      bool bad = eligible_strict ? !(slack > t) : slack < zero - t;
      if (bad) {
        MultiIndex sum(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) sum[i] = p[i] + q[i];
        scan.witness = Witness<S>{WitnessKind::pair,
                                  {p, q},
                                  {a.at(p_flat), a.at(q_flat), a.at(sum_flat)},
                                  slack};
        return finish<S>(super ? "superadditive" : "subadditive", strict, t,
                         std::move(scan));
      }
    } while (next_index(q, q_bound));
    ++p_flat;
  } while (next_index(p, a.spec.count));
  return finish<S>(super ? "superadditive" : "subadditive", strict, t,
                   std::move(scan));
}

}  // namespace detail

template <Scalar S>
CheckReport<S> check_superadditive(const GridFn<S>& a, bool strict = false,
                                   std::optional<S> tol = {}) {
  return detail::check_additivity(a, /*super=*/true, strict, tol);
}

template <Scalar S>
CheckReport<S> check_subadditive(const GridFn<S>& a, bool strict = false,
                                 std::optional<S> tol = {}) {
  return detail::check_additivity(a, /*super=*/false, strict, tol);
}

namespace detail {

// Axis second differences; sign = +1 demands convex sections, -1 concave.
template <Scalar S>
CheckReport<S> check_axis_curvature(const GridFn<S>& a, int sign, bool strict,
                                    std::optional<S> tol, const char* property) {
  require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  MultiIndex strides = a.spec.strides();
  ScanState<S> scan;
  std::vector<std::string> notes;
  bool any_axis = false;
  for (std::size_t i = 0; i < a.spec.step.size(); ++i) {
    if (a.spec.count[i] < 2)
      notes.push_back("axis " + std::to_string(i + 1) +
                      " not evaluable: fewer than 2 steps");
    else
      any_axis = true;
  }
  if (!any_axis) {
    notes.push_back("no axis evaluable");
    return finish<S>(property, strict, t, std::move(scan), std::move(notes));
  }

  MultiIndex midx(a.spec.step.size(), 0);
  std::int64_t flat = 0;
  do {
    for (std::size_t i = 0; i < midx.size(); ++i) {
      if (midx[i] + 2 > a.spec.count[i]) continue;
      S d = a.at(flat + 2 * strides[i]).finite() -
            a.at(flat + strides[i]).finite() - a.at(flat + strides[i]).finite() +
            a.at(flat).finite();
      S slack = sign > 0 ? d : zero - d;
      scan.observe(slack);
      if (strict ? !(slack > t) : slack < zero - t) {
        MultiIndex mid = midx, top = midx;
        ++mid[i];
        top[i] += 2;
        scan.witness = Witness<S>{
            WitnessKind::quadruple,
            {midx, top, mid, mid},
            {a.at(flat), a.at(flat + 2 * strides[i]), a.at(flat + strides[i]),
             a.at(flat + strides[i])},
            slack};
        return finish<S>(property, strict, t, std::move(scan), std::move(notes));
      }
    }
    ++flat;
  } while (next_index(midx, a.spec.count));
  return finish<S>(property, strict, t, std::move(scan), std::move(notes));
}

// Mixed second differences over axis pairs; sign as above.
template <Scalar S>
CheckReport<S> check_mixed_curvature(const GridFn<S>& a, int sign, bool strict,
                                     std::optional<S> tol, const char* property) {
  require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  ScanState<S> scan;
  if (a.spec.arity() == 1) {
    return finish<S>(property, strict, t, std::move(scan),
                     {"vacuously holds for arity 1"});
  }
  MultiIndex strides = a.spec.strides();
  MultiIndex midx(a.spec.step.size(), 0);
  std::int64_t flat = 0;
  do {
    for (std::size_t i = 0; i < midx.size(); ++i) {
      if (midx[i] + 1 > a.spec.count[i]) continue;
      for (std::size_t j = i + 1; j < midx.size(); ++j) {
        if (midx[j] + 1 > a.spec.count[j]) continue;
        S d = a.at(flat + strides[i] + strides[j]).finite() -
              a.at(flat + strides[i]).finite() - a.at(flat + strides[j]).finite() +
              a.at(flat).finite();
        S slack = sign > 0 ? d : zero - d;
        scan.observe(slack);
        if (strict ? !(slack > t) : slack < zero - t) {
          MultiIndex x = midx, y = midx, v = midx;
          ++x[i];
          ++y[j];
          ++v[i];
          ++v[j];
          scan.witness = Witness<S>{
              WitnessKind::quadruple,
              {midx, v, x, y},
              {a.at(flat), a.at(flat + strides[i] + strides[j]),
               a.at(flat + strides[i]), a.at(flat + strides[j])},
              slack};
          return finish<S>(property, strict, t, std::move(scan));
        }
      }
    }
    ++flat;
  } while (next_index(midx, a.spec.count));
  return finish<S>(property, strict, t, std::move(scan));
}

}  // namespace detail

template <Scalar S>
CheckReport<S> check_coordinatewise_convex(const GridFn<S>& a, bool strict = false,
                                           std::optional<S> tol = {}) {
  return detail::check_axis_curvature(a, +1, strict, tol, "coordinatewise-convex");
}

template <Scalar S>
CheckReport<S> check_coordinatewise_concave(const GridFn<S>& a, bool strict = false,
                                            std::optional<S> tol = {}) {
  return detail::check_axis_curvature(a, -1, strict, tol, "coordinatewise-concave");
}

template <Scalar S>
CheckReport<S> check_supermodular(const GridFn<S>& a, bool strict = false,
                                  std::optional<S> tol = {}) {
  return detail::check_mixed_curvature(a, +1, strict, tol, "supermodular");
}

template <Scalar S>
CheckReport<S> check_submodular(const GridFn<S>& a, bool strict = false,
                                std::optional<S> tol = {}) {
  return detail::check_mixed_curvature(a, -1, strict, tol, "submodular");
}

// Number of quadruples u <= x,y <= v, u+v = x+y, {x,y} != {u,v}, x/y deduped,
// counted up to `cap` (returns cap+1 once exceeded).
template <Scalar S>
std::int64_t directional_quadruple_count(const GridSpec<S>& spec, std::int64_t cap) {
  std::int64_t count = 0;
  MultiIndex u(spec.step.size(), 0);
  do {
    MultiIndex w_bound(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w_bound[i] = spec.count[i] - u[i];
    MultiIndex w(u.size(), 0);
    do {
      // v = u + w; x runs over [u, v]. The box holds prod(w_i + 1) points;
      // unordered {x, y} pairs number (box+1)/2, minus the {u, v} one.
      __int128 box = 1;
      for (std::size_t i = 0; i < w.size(); ++i) box *= w[i] + 1;
      if (box >= 2) {
        count += static_cast<std::int64_t>((box + 1) / 2) - 1;
        if (count > cap) return cap + 1;
      }
    } while (next_index(w, w_bound));
  } while (next_index(u, spec.count));
  return count;
}

namespace detail {

// Direct scan of the defining quadruple inequality. sign=+1: convex
// (a[x]+a[y] <= a[u]+a[v]); sign=-1: concave.
template <Scalar S>
CheckReport<S> check_directional_quadruple(const GridFn<S>& a, int sign, bool strict,
                                           std::optional<S> tol, const char* property) {
  require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  MultiIndex strides = a.spec.strides();
  ScanState<S> scan;

  MultiIndex u(a.spec.step.size(), 0);
  std::int64_t u_flat = 0;
  do {
    MultiIndex w_bound(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w_bound[i] = a.spec.count[i] - u[i];
    MultiIndex w(u.size(), 0);
    do {
      std::int64_t v_flat = u_flat;
      for (std::size_t i = 0; i < w.size(); ++i) v_flat += w[i] * strides[i];
      if (v_flat == u_flat) continue;
      // x = u + s for s in [0, w]
      MultiIndex s(u.size(), 0);
      do {
        std::int64_t x_flat = u_flat;
        for (std::size_t i = 0; i < s.size(); ++i) x_flat += s[i] * strides[i];
        std::int64_t y_flat = u_flat + v_flat - x_flat;
        if (x_flat > y_flat) continue;
        if (x_flat == u_flat) continue;  // {x,y} == {u,v}
        S pair_uv = a.at(u_flat).finite() + a.at(v_flat).finite();
        S pair_xy = a.at(x_flat).finite() + a.at(y_flat).finite();
        S slack = sign > 0 ? pair_uv - pair_xy : pair_xy - pair_uv;
        scan.observe(slack);
        if (strict ? !(slack > t) : slack < zero - t) {
          MultiIndex v(u.size()), x(u.size()), y(u.size());
          for (std::size_t i = 0; i < u.size(); ++i) {
            v[i] = u[i] + w[i];
            x[i] = u[i] + s[i];
            y[i] = u[i] + v[i] - x[i];
          }
          scan.witness = Witness<S>{
              WitnessKind::quadruple,
              {u, v, x, y},
              {a.at(u_flat), a.at(v_flat), a.at(x_flat), a.at(y_flat)},
              slack};
          return finish<S>(property, strict, t, std::move(scan));
        }
      } while (next_index(s, w));
    } while (next_index(w, w_bound));
    ++u_flat;
  } while (next_index(u, a.spec.count));
  return finish<S>(property, strict, t, std::move(scan));
}

template <Scalar S>
CheckReport<S> check_directional(const GridFn<S>& a, int sign, bool strict,
                                 std::optional<S> tol, const char* property) {
  S t = tol ? *tol : default_tolerance(a);
  CheckReport<S> axis = sign > 0 ? check_coordinatewise_convex(a, strict, t)
                                 : check_coordinatewise_concave(a, strict, t);
  CheckReport<S> mixed = sign > 0 ? check_supermodular(a, strict, t)
                                  : check_submodular(a, strict, t);
  CheckReport<S> r;
  r.property = property;
  r.strict = strict;
  r.tolerance = t;
  r.notes = axis.notes;
  r.notes.insert(r.notes.end(), mixed.notes.begin(), mixed.notes.end());
  if (!axis.holds()) {
    r.verdict = Verdict::fails;
    r.witness = axis.witness;
  } else if (!mixed.holds()) {
    r.verdict = Verdict::fails;
    r.witness = mixed.witness;
  } else {
    r.verdict = Verdict::holds;
    if (axis.margin && mixed.margin)
      r.margin = *axis.margin < *mixed.margin ? axis.margin : mixed.margin;
    else
      r.margin = axis.margin ? axis.margin : mixed.margin;
  }
  // The second-difference route must agree with the defining quadruple scan
  // wherever the latter is affordable.
  constexpr std::int64_t kQuadrupleCap = 5000;
  if (directional_quadruple_count(a.spec, kQuadrupleCap) <= kQuadrupleCap) {
    CheckReport<S> oracle = check_directional_quadruple(a, sign, strict, t, property);
    if (oracle.holds() != r.holds())
      r.notes.push_back("cross-validation mismatch with quadruple scan");
  }
  return r;
}

}  // namespace detail

template <Scalar S>
CheckReport<S> check_directionally_convex(const GridFn<S>& a, bool strict = false,
                                          std::optional<S> tol = {}) {
  return detail::check_directional(a, +1, strict, tol, "directionally-convex");
}

template <Scalar S>
CheckReport<S> check_directionally_concave(const GridFn<S>& a, bool strict = false,
                                           std::optional<S> tol = {}) {
  return detail::check_directional(a, -1, strict, tol, "directionally-concave");
}

// Defining-inequality scans, exposed for cross-checks and the lemma harness.
template <Scalar S>
CheckReport<S> check_directionally_convex_quadruple(const GridFn<S>& a,
                                                    bool strict = false,
                                                    std::optional<S> tol = {}) {
  return detail::check_directional_quadruple(a, +1, strict, tol,
                                             "directionally-convex-quadruple");
}

template <Scalar S>
CheckReport<S> check_directionally_concave_quadruple(const GridFn<S>& a,
                                                     bool strict = false,
                                                     std::optional<S> tol = {}) {
  return detail::check_directional_quadruple(a, -1, strict, tol,
                                             "directionally-concave-quadruple");
}

// Midpoint convexity along arbitrary grid segments: a[(p+q)/2] <= (a[p]+a[q])/2
// whenever the midpoint lies on the grid. Distinguishes joint convexity from
// directional convexity (which only sees axis-aligned second differences).
template <Scalar S>
CheckReport<S> check_midpoint_convex(const GridFn<S>& a, std::optional<S> tol = {}) {
  detail::require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  const S half = scalar_ops<S>::from_int(1) / scalar_ops<S>::from_int(2);
  detail::ScanState<S> scan;
  MultiIndex strides = a.spec.strides();

  MultiIndex p(a.spec.step.size(), 0);
  std::int64_t p_flat = 0;
  do {
    MultiIndex q = p;
    std::int64_t q_flat = p_flat;
    while (next_index(q, a.spec.count)) {
      ++q_flat;
      bool aligned = true;
      for (std::size_t i = 0; i < p.size(); ++i)
        if ((p[i] + q[i]) % 2 != 0) {
          aligned = false;
          break;
        }
      if (!aligned) continue;
      std::int64_t mid_flat = (p_flat + q_flat) / 2;
      S avg = (a.at(p_flat).finite() + a.at(q_flat).finite()) * half;
      S slack = avg - a.at(mid_flat).finite();
      scan.observe(slack);
      if (slack < zero - t) {
        MultiIndex mid(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) mid[i] = (p[i] + q[i]) / 2;
        scan.witness = Witness<S>{WitnessKind::midpoint,
                                  {p, q, mid},
                                  {a.at(p_flat), a.at(q_flat), a.at(mid_flat)},
                                  slack};
        return detail::finish<S>("midpoint-convex", false, t, std::move(scan));
      }
    }
    ++p_flat;
  } while (next_index(p, a.spec.count));
  return detail::finish<S>("midpoint-convex", false, t, std::move(scan));
}

template <Scalar S>
struct LinearCheck {
  CheckReport<S> report;
  std::vector<S> gradient;  // fitted slope a[e_i]/h_i per axis
};

// Fits the gradient from the first step along each axis and measures the
// worst pointwise deviation from the fitted linear function.
template <Scalar S>
LinearCheck<S> check_linear(const GridFn<S>& a, std::optional<S> tol = {}) {
  detail::require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  MultiIndex strides = a.spec.strides();
  LinearCheck<S> out;
  for (std::size_t i = 0; i < a.spec.step.size(); ++i)
    out.gradient.push_back(a.at(strides[i]).finite() / a.spec.step[i]);

  detail::ScanState<S> scan;
  MultiIndex midx(a.spec.step.size(), 0);
  std::int64_t flat = 0;
  do {
    S predicted = zero;
    std::vector<S> pt = a.spec.point(midx);
    for (std::size_t i = 0; i < pt.size(); ++i)
      predicted = predicted + out.gradient[i] * pt[i];
    S slack = zero - scalar_ops<S>::abs(a.at(flat).finite() - predicted);
    scan.observe(slack);
    if (slack < zero - t) {
      scan.witness =
          Witness<S>{WitnessKind::point, {midx}, {a.at(flat)}, slack};
      out.report = detail::finish<S>("linear", false, t, std::move(scan));
      return out;
    }
    ++flat;
  } while (next_index(midx, a.spec.count));
  out.report = detail::finish<S>("linear", false, t, std::move(scan));
  return out;
}

// a[m]/t(m) non-decreasing along an axis ray or the all-ones diagonal.
template <Scalar S>
CheckReport<S> check_ratio_monotone(const GridFn<S>& a, Ray ray,
                                    std::optional<S> tol = {}) {
  detail::require_finite(a);
  S t = tol ? *tol : default_tolerance(a);
  const S zero = scalar_ops<S>::from_int(0);
  if (!(scalar_ops<S>::abs(a.at(0).finite()) <= t))
    throw grid_error("ratio check requires a[0] = 0");

  MultiIndex strides = a.spec.strides();
  std::int64_t k_max = 0;
  std::int64_t ray_stride = 0;
  S h = scalar_ops<S>::from_int(0);
  if (ray.kind == Ray::Kind::axis) {
    if (ray.axis < 0 || ray.axis >= a.spec.arity())
      throw grid_error("ray axis out of range");
    k_max = a.spec.count[static_cast<std::size_t>(ray.axis)];
    ray_stride = strides[static_cast<std::size_t>(ray.axis)];
    h = a.spec.step[static_cast<std::size_t>(ray.axis)];
  } else {
    k_max = a.spec.count[0];
    for (std::size_t i = 0; i < a.spec.step.size(); ++i) {
      if (!(a.spec.step[i] == a.spec.step[0]))
        throw grid_error("diagonal ray requires equal steps on every axis");
      if (a.spec.count[i] < k_max) k_max = a.spec.count[i];
      ray_stride += strides[i];
    }
    h = a.spec.step[0];
  }

  detail::ScanState<S> scan;
  auto index_at = [&](std::int64_t k) {
    MultiIndex m(a.spec.step.size(), 0);
    if (ray.kind == Ray::Kind::axis)
      m[static_cast<std::size_t>(ray.axis)] = k;
    else
      for (auto& c : m) c = k;
    return m;
  };
  std::string prop = ray.kind == Ray::Kind::axis
                         ? "ratio-monotone-axis" + std::to_string(ray.axis + 1)
                         : "ratio-monotone-diagonal";
  for (std::int64_t k = 1; k + 1 <= k_max; ++k) {
    S t0 = scalar_ops<S>::from_int(k) * h;
    S t1 = scalar_ops<S>::from_int(k + 1) * h;
    S r0 = a.at(k * ray_stride).finite() / t0;
    S r1 = a.at((k + 1) * ray_stride).finite() / t1;
    S slack = r1 - r0;
    scan.observe(slack);
    if (slack < zero - t) {
      scan.witness = Witness<S>{
          WitnessKind::pair,
          {index_at(k), index_at(k + 1)},
          {a.at(k * ray_stride), a.at((k + 1) * ray_stride)},
          slack};
      return detail::finish<S>(prop, false, t, std::move(scan));
    }
  }
  return detail::finish<S>(prop, false, t, std::move(scan));
}

}  // namespace addilope
