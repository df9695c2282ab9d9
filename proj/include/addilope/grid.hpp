#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "addilope/extvalue.hpp"
#include "addilope/funcspec.hpp"

namespace addilope {

struct grid_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridLimits {
  std::int64_t max_total_points = 4'000'000;
};

using MultiIndex = std::vector<std::int64_t>;

// Regular grid on [0, M1*h1] x ... x [0, Mn*hn]; axis i has points 0..M_i
// with coordinate index*h_i. Flattening is row-major with axis 0 major, so
// componentwise p <= q implies flat(p) <= flat(q).
template <Scalar S>
struct GridSpec {
  std::vector<S> step;
  std::vector<std::int64_t> count;

  GridSpec() = default;
  GridSpec(std::vector<S> s, std::vector<std::int64_t> c)
      : step(std::move(s)), count(std::move(c)) {
    validate();
  }
  static GridSpec uniform(int n, S h, std::int64_t m) {
    return GridSpec(std::vector<S>(static_cast<std::size_t>(n), h),
                    MultiIndex(static_cast<std::size_t>(n), m));
  }

  int arity() const { return static_cast<int>(step.size()); }

  void validate() const {
    if (step.empty() || step.size() != count.size())
      throw grid_error("grid spec needs matching positive-length step/count lists");
    for (const S& h : step)
      if (!(scalar_ops<S>::from_int(0) < h))
        throw grid_error("grid steps must be positive");
    for (std::int64_t m : count)
      if (m < 1) throw grid_error("grid counts must be >= 1");
  }

  std::int64_t total_points() const {
    __int128 total = 1;
    for (std::int64_t m : count) {
      total *= static_cast<__int128>(m) + 1;
      if (total > (__int128(1) << 62)) throw grid_error("grid too large");
    }
    return static_cast<std::int64_t>(total);
  }

  MultiIndex strides() const {
    MultiIndex st(step.size());
    std::int64_t acc = 1;
    for (std::size_t i = step.size(); i-- > 0;) {
      st[i] = acc;
      acc *= count[i] + 1;
    }
    return st;
  }

  std::int64_t flat(std::span<const std::int64_t> midx) const {
    MultiIndex st = strides();
    std::int64_t f = 0;
    for (std::size_t i = 0; i < st.size(); ++i) f += midx[i] * st[i];
    return f;
  }

  MultiIndex unflat(std::int64_t flat) const {
    MultiIndex midx(step.size());
    for (std::size_t i = step.size(); i-- > 0;) {
      std::int64_t span = count[i] + 1;
      midx[i] = flat % span;
      flat /= span;
    }
    return midx;
  }

  // One multiplication per axis so coinciding points of refined grids get
  // bit-identical coordinates.
  std::vector<S> point(std::span<const std::int64_t> midx) const {
    std::vector<S> pt(step.size());
    for (std::size_t i = 0; i < step.size(); ++i)
      pt[i] = scalar_ops<S>::from_int(midx[i]) * step[i];
    return pt;
  }

  // Halves every step and doubles every count; the input points are a subset
  // of the refined points.
  GridSpec refined(const GridLimits& limits = {}) const {
    GridSpec fine = *this;
    for (S& h : fine.step) h = h / scalar_ops<S>::from_int(2);
    for (std::int64_t& m : fine.count) {
      if (m > (std::int64_t(1) << 60)) throw grid_error("refined grid count overflows");
      m *= 2;
    }
    if (fine.total_points() > limits.max_total_points)
      throw grid_error("refined grid exceeds the configured point budget of " +
                       std::to_string(limits.max_total_points) + " points");
    return fine;
  }

  bool operator==(const GridSpec&) const = default;
};

template <Scalar S>
struct GridFn {
  GridSpec<S> spec;
  std::vector<Ext<S>> values;

  const Ext<S>& at(std::int64_t flat) const {
    return values[static_cast<std::size_t>(flat)];
  }
  Ext<S>& at(std::int64_t flat) { return values[static_cast<std::size_t>(flat)]; }
};

// Advances midx through the box [0, bound] componentwise, row-major (last
// axis fastest, matching flat order). Returns false once past the end.
inline bool next_index(MultiIndex& midx, std::span<const std::int64_t> bound) {
  for (std::size_t i = midx.size(); i-- > 0;) {
    if (midx[i] < bound[i]) {
      ++midx[i];
      for (std::size_t j = i + 1; j < midx.size(); ++j) midx[j] = 0;
      return true;
    }
  }
  return false;
}

template <Scalar S>
GridFn<S> sample(const FuncSpec& fn, const GridSpec<S>& spec,
                 const GridLimits& limits = {}) {
  if (fn.arity() != spec.arity())
    throw grid_error("function arity " + std::to_string(fn.arity()) +
                     " does not match grid arity " + std::to_string(spec.arity()));
  std::int64_t total = spec.total_points();
  if (total > limits.max_total_points)
    throw grid_error("grid exceeds the configured point budget of " +
                     std::to_string(limits.max_total_points) + " points");
  GridFn<S> out;
  out.spec = spec;
  out.values.reserve(static_cast<std::size_t>(total));
  MultiIndex midx(spec.step.size(), 0);
  do {
    out.values.emplace_back(fn.eval<S>(spec.point(midx)));
  } while (next_index(midx, spec.count));
  return out;
}

// Integer per-axis step ratios making every point of `coarse` a point of
// `fine`; throws if the grids do not nest.
template <Scalar S>
MultiIndex axis_ratios(const GridSpec<S>& coarse, const GridSpec<S>& fine) {
  if (coarse.arity() != fine.arity()) throw grid_error("grid arity mismatch");
  MultiIndex ratios(coarse.step.size());
  for (std::size_t i = 0; i < coarse.step.size(); ++i) {
    std::int64_t r = 0;
    if constexpr (is_exact_v<S>) {
      Rat q = coarse.step[i] / fine.step[i];
      if (!q.is_integer() || q < Rat(1)) throw grid_error("grids do not nest");
      r = q.num();
    } else {
      double q = coarse.step[i] / fine.step[i];
      r = std::llround(q);
      if (r < 1 || fine.step[i] * static_cast<double>(r) != coarse.step[i])
        throw grid_error("grids do not nest");
    }
    if (coarse.count[i] * r > fine.count[i])
      throw grid_error("coarse grid extends beyond the fine grid");
    ratios[i] = r;
  }
  return ratios;
}

// Maximum |a - b| over the points of a (which must all be points of b).
template <Scalar S>
Ext<S> max_abs_diff(const GridFn<S>& a, const GridFn<S>& b) {
  MultiIndex ratios = axis_ratios(a.spec, b.spec);
  MultiIndex b_strides = b.spec.strides();
  Ext<S> worst;
  MultiIndex midx(a.spec.step.size(), 0);
  std::int64_t a_flat = 0;
  do {
    std::int64_t b_flat = 0;
    for (std::size_t i = 0; i < midx.size(); ++i)
      b_flat += midx[i] * ratios[i] * b_strides[i];
    worst = ext_max(worst, ext_abs_diff(a.at(a_flat), b.at(b_flat)));
    ++a_flat;
  } while (next_index(midx, a.spec.count));
  return worst;
}

template <Scalar S>
Ext<S> max_finite_value(const GridFn<S>& a) {
  Ext<S> m;
  for (const Ext<S>& v : a.values)
    if (v.is_finite()) m = ext_max(m, v);
  return m;
}

// CSV: header x1..xn,value; one row per point in flat order; "inf" for
// infinite values; 17 significant digits for doubles, num/den for rationals.
template <Scalar S>
void write_csv(std::ostream& os, const GridFn<S>& fn,
               std::string_view value_column = "value") {
  for (int i = 1; i <= fn.spec.arity(); ++i) os << 'x' << i << ',';
  os << value_column << '\n';
  MultiIndex midx(fn.spec.step.size(), 0);
  std::int64_t flat = 0;
  do {
    std::vector<S> pt = fn.spec.point(midx);
    for (const S& c : pt) os << scalar_str(c) << ',';
    os << fn.at(flat).str() << '\n';
    ++flat;
  } while (next_index(midx, fn.spec.count));
}

}  // namespace addilope
