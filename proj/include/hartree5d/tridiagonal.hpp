#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hartree5d {

/// Row i of the matrix reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1].
/// lower[0] and upper[n-1] are ignored.
template <typename T>
struct TridiagonalBands {
  explicit TridiagonalBands(std::size_t n) : lower(n), diag(n), upper(n) {}

  std::size_t size() const { return diag.size(); }

  template <typename U>
  std::vector<U> apply(std::span<const U> x) const {
    const std::size_t n = size();
    std::vector<U> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      U acc = diag[i] * x[i];
      if (i > 0) acc += lower[i] * x[i - 1];
      if (i + 1 < n) acc += upper[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }

  std::vector<T> lower;
  std::vector<T> diag;
  std::vector<T> upper;
};

/// Thomas elimination without pivoting. Valid for diagonally dominant systems,
/// which covers every matrix built from the radial Laplacian here.
template <typename T, typename U>
std::vector<U> solve_tridiagonal(const TridiagonalBands<T>& m, std::span<const U> rhs) {
  const std::size_t n = m.size();
  if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
  std::vector<T> c(n);
  std::vector<U> d(n);
  T denom = m.diag[0];
  if (denom == T{}) throw std::runtime_error("tridiagonal solve: zero pivot");
  c[0] = n > 1 ? m.upper[0] / denom : T{};
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = m.diag[i] - m.lower[i] * c[i - 1];
    if (denom == T{}) throw std::runtime_error("tridiagonal solve: zero pivot");
    c[i] = i + 1 < n ? m.upper[i] / denom : T{};
    d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

/// LU factorization of a tridiagonal matrix, reusable across right-hand sides.
template <typename T>
class TridiagonalFactor {
 public:
  explicit TridiagonalFactor(const TridiagonalBands<T>& m) : lower_(m.lower), c_(m.size()), inv_(m.size()) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
      const T denom = i == 0 ? m.diag[0] : m.diag[i] - m.lower[i] * c_[i - 1];
      if (denom == T{}) throw std::runtime_error("tridiagonal factor: zero pivot");
      inv_[i] = T(1) / denom;
      c_[i] = i + 1 < n ? m.upper[i] * inv_[i] : T{};
    }
  }

  std::size_t size() const { return c_.size(); }

  template <typename U>
  void solve_in_place(std::span<U> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("tridiagonal factor: size mismatch");
    x[0] *= inv_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) * inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_[i] * x[i + 1];
  }

 private:
  std::vector<T> lower_;
  std::vector<T> c_;
  std::vector<T> inv_;
};

}  // namespace hartree5d
