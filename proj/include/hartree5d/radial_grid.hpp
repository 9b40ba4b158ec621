#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hartree5d/tridiagonal.hpp"

namespace hartree5d {

using Complex = std::complex<double>;

/// Surface area of the unit sphere S^4 in R^5.
inline constexpr double kOmega4 = 8.0 * std::numbers::pi * std::numbers::pi / 3.0;

/// Cell-centered radial mesh on (0, r_max) carrying the 5D volume element.
///
/// Node i sits at r_i = (i + 1/2) h, so the mesh never touches r = 0. The
/// quadrature weight of node i is w_i = omega_4 r_i^4 h (midpoint rule).
class RadialGrid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  RadialGrid(std::size_t n_points, double r_max) : n_(n_points), r_max_(r_max) {
    if (n_points < kMinPoints) {
      throw std::invalid_argument("radial grid needs at least 16 points, got " +
                                  std::to_string(n_points));
    }
    if (!(r_max > 0.0) || !std::isfinite(r_max)) {
      throw std::invalid_argument("radial grid needs a positive finite r_max");
    }
    h_ = r_max / static_cast<double>(n_points);
    nodes_.resize(n_);
    weights_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = (static_cast<double>(i) + 0.5) * h_;
      nodes_[i] = r;
      weights_[i] = kOmega4 * r * r * r * r * h_;
    }
  }

  std::size_t size() const { return n_; }
  double r_max() const { return r_max_; }
  double h() const { return h_; }
  double r(std::size_t i) const { return nodes_[i]; }
  double w(std::size_t i) const { return weights_[i]; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Radius of the face between node i-1 and node i (face 0 is the origin).
  double face(std::size_t i) const { return static_cast<double>(i) * h_; }

  /// Flux coefficient a_{i-1/2} = r_{i-1/2}^4 / h of face i.
  double face_coeff(std::size_t i) const {
    const double f = face(i);
    return f * f * f * f / h_;
  }

  bool same_as(const RadialGrid& other) const {
    return n_ == other.n_ && r_max_ == other.r_max_;
  }

 private:
  std::size_t n_;
  double r_max_;
  double h_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(std::size_t n_points, double r_max) {
  return std::make_shared<const RadialGrid>(n_points, r_max);
}

/// Samples of a radial function on a grid. T is double or Complex.
template <typename T>
class Field {
 public:
  using value_type = T;

  Field() = default;

  explicit Field(GridPtr grid) : grid_(std::move(grid)) {
    check_grid();
    values_.assign(grid_->size(), T{});
  }

  Field(GridPtr grid, std::vector<T> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    check_grid();
    if (values_.size() != grid_->size()) {
      throw std::invalid_argument("field length does not match grid");
    }
  }

  /// Samples f(r_i) at every node.
  template <typename F>
  static Field sample(GridPtr grid, F&& f) {
    Field out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = static_cast<T>(f(grid->r(i)));
    return out;
  }

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  bool all_finite() const {
    for (const T& v : values_) {
      if constexpr (std::is_same_v<T, Complex>) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      } else {
        if (!std::isfinite(v)) return false;
      }
    }
    return true;
  }

  Field& operator*=(T c) {
    for (T& v : values_) v *= c;
    return *this;
  }
  friend Field operator*(T c, Field f) { return f *= c; }

 private:
  void check_grid() const {
    if (!grid_) throw std::invalid_argument("field needs a grid");
  }

  GridPtr grid_;
  std::vector<T> values_;
};

using RadialField = Field<Complex>;
using RealField = Field<double>;

template <typename A, typename B>
void require_same_grid(const Field<A>& a, const Field<B>& b) {
  if (!a.grid().same_as(b.grid())) throw std::invalid_argument("fields live on different grids");
}

inline double abs_sq(double v) { return v * v; }
inline double abs_sq(const Complex& v) { return std::norm(v); }

inline RadialField to_complex(const RealField& f) {
  RadialField out(f.grid_ptr());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

/// |u|^2 sampled pointwise.
template <typename T>
RealField density(const Field<T>& u) {
  RealField rho(u.grid_ptr());
  for (std::size_t i = 0; i < u.size(); ++i) rho[i] = abs_sq(u[i]);
  return rho;
}

/// Sum of w_i f_i, the midpoint approximation of the integral over R^5.
inline double integrate(const RealField& f) {
  const RadialGrid& g = f.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += g.w(i) * f[i];
  return sum;
}

/// Weighted inner product sum w_i conj(u_i) v_i.
template <typename T>
T inner(const Field<T>& u, const Field<T>& v) {
  require_same_grid(u, v);
  const RadialGrid& g = u.grid();
  T sum{};
  for (std::size_t i = 0; i < u.size(); ++i) {
    if constexpr (std::is_same_v<T, Complex>) {
      sum += g.w(i) * std::conj(u[i]) * v[i];
    } else {
      sum += g.w(i) * u[i] * v[i];
    }
  }
  return sum;
}

/// Conservative radial Laplacian in d = 5.
///
/// (Lu)_i = [a_{i+1/2}(u_{i+1} - u_i) - a_{i-1/2}(u_i - u_{i-1})] / (r_i^4 h),
/// a_{-1/2} = 0 at the origin and a Dirichlet ghost u_n = 0 at r_max.
template <typename T>
Field<T> laplacian_apply(const Field<T>& u) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  Field<T> out(u.grid_ptr());
  for (std::size_t i = 0; i < n; ++i) {
    const T right = (i + 1 < n ? u[i + 1] : T{}) - u[i];
    const T left = i > 0 ? u[i] - u[i - 1] : T{};
    const double ri = g.r(i);
    out[i] = (g.face_coeff(i + 1) * right - g.face_coeff(i) * left) / (ri * ri * ri * ri * g.h());
  }
  return out;
}

/// Bands of the matrix of laplacian_apply (row i couples i-1, i, i+1).
inline TridiagonalBands<double> laplacian_bands(const RadialGrid& g) {
  const std::size_t n = g.size();
  TridiagonalBands<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = g.r(i);
    const double vol = ri * ri * ri * ri * g.h();
    const double left = g.face_coeff(i) / vol;
    const double right = g.face_coeff(i + 1) / vol;
    m.lower[i] = left;
    m.diag[i] = -(left + right);
    m.upper[i] = i + 1 < n ? right : 0.0;
  }
  m.lower[0] = 0.0;
  return m;
}

template <typename T>
double l2_norm_sq(const Field<T>& u) {
  return integrate(density(u));
}

/// -Re<Lu, u>_w, evaluated in flux form so that it is never negative.
template <typename T>
double grad_norm_sq(const Field<T>& u) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const T diff = (i + 1 < n ? u[i + 1] : T{}) - u[i];
    sum += g.face_coeff(i + 1) * abs_sq(diff);
  }
  return kOmega4 * sum;
}

template <typename T>
double lp_norm(const Field<T>& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  const RadialGrid& g = u.grid();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += g.w(i) * std::pow(std::sqrt(abs_sq(u[i])), p);
  return std::pow(sum, 1.0 / p);
}

template <typename T>
double sup_abs(const Field<T>& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::sqrt(abs_sq(u[i])));
  return m;
}

/// Linear interpolation of u at radius x; even extension below r_0, zero beyond r_max.
template <typename T>
T interpolate(const Field<T>& u, double x) {
  const RadialGrid& g = u.grid();
  const std::size_t n = g.size();
  if (x <= g.r(0)) return u[0];
  if (x >= g.r_max()) return T{};
  const double s = x / g.h() - 0.5;
  const auto i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  const T hi = i + 1 < n ? u[i + 1] : T{};
  return (1.0 - frac) * u[i] + frac * hi;
}

}  // namespace hartree5d
