#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rext/dual.hpp"
#include "rext/errors.hpp"

namespace rext {

template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Coordinates of a point on an n- or 2n-dimensional chart.
using ChartPoint = Vec<double>;

/// Dense rank-3 array indexed [k][i][j]; holds connection coefficients.
template <typename S>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, S(0.0)) {}

  int dim() const { return n_; }
  S& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  const S& operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

 private:
  size_t index(int k, int i, int j) const {
    return (static_cast<size_t>(k) * n_ + i) * n_ + j;
  }
  int n_ = 0;
  std::vector<S> data_;
};

/// Dense rank-4 array indexed [a][b][c][d]; holds curvature components.
template <typename S>
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<size_t>(n) * n * n * n, S(0.0)) {}

  int dim() const { return n_; }
  S& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  const S& operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

 private:
  size_t index(int a, int b, int c, int d) const {
    return ((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<S> data_;
};

/// Lift a double vector to dual scalars with zero derivative parts.
template <typename S>
Vec<S> lift(const Vec<double>& x) {
  Vec<S> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = S(x[i]);
  return out;
}

/// Seed `x` as Dual<S> with derivative direction e_dir.
template <typename S>
Vec<Dual<S>> seed(const Vec<S>& x, Eigen::Index dir) {
  Vec<Dual<S>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Dual<S>(x[i], S(i == dir ? 1.0 : 0.0));
  return out;
}

inline void check_finite(const ChartPoint& p, const char* what) {
  if (!p.allFinite()) throw DomainError(std::string(what) + ": non-finite coordinate");
}

inline void check_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(want) +
                            ", got " + std::to_string(got));
  }
}

/// Gauss-Jordan inverse with partial pivoting on the value part. Works for any
/// dual depth, so derivatives of g^-1 come out exactly.
template <typename S>
Mat<S> inverse(const Mat<S>& m) {
  using std::abs;
  const Eigen::Index n = m.rows();
  Mat<S> a = m;
  Mat<S> inv = Mat<S>::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(piv, col)))) piv = r;
    }
    if (value_of(a(piv, col)) == 0.0) throw SingularMetric("inverse: matrix is singular");
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      inv.row(piv).swap(inv.row(col));
    }
    const S pinv = S(1.0) / a(col, col);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * pinv;
      inv(col, j) = inv(col, j) * pinv;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = a(r, col);
      if (value_of(f) == 0.0 && f == S(0.0)) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace rext
