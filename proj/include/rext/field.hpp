#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <tuple>
#include <utility>

#include "rext/tensor.hpp"

namespace rext {

/// Highest dual nesting depth a field can store an evaluator for.
inline constexpr int kMaxDerivativeOrder = 3;

namespace detail {

/// Type-erased evaluators of one field at scalar depths 0..kMaxDerivativeOrder.
template <template <typename> class Out>
class DepthEvaluators {
 public:
  template <typename S>
  using Fn = std::function<Out<S>(const Vec<S>&)>;

  template <typename F>
  static DepthEvaluators from_generic(F f, int order) {
    DepthEvaluators e;
    if (order >= 0) std::get<0>(e.fns_) = [f](const Vec<double>& x) { return Out<double>(f(x)); };
    if (order >= 1) std::get<1>(e.fns_) = [f](const Vec<D1>& x) { return Out<D1>(f(x)); };
    if (order >= 2) std::get<2>(e.fns_) = [f](const Vec<D2>& x) { return Out<D2>(f(x)); };
    if (order >= 3) std::get<3>(e.fns_) = [f](const Vec<D3>& x) { return Out<D3>(f(x)); };
    e.order_ = std::min(order, kMaxDerivativeOrder);
    return e;
  }

  int order() const { return order_; }

  template <typename S>
  Out<S> operator()(const Vec<S>& x, const std::string& name) const {
    constexpr int k = dual_depth_v<S>;
    if constexpr (k > kMaxDerivativeOrder) {
      throw DerivativeUnsupported(name + ": derivative depth " + std::to_string(k) +
                                  " exceeds the supported maximum");
    } else {
      const auto& fn = std::get<k>(fns_);
      if (!fn) {
        throw DerivativeUnsupported(name + ": exact derivatives of order " + std::to_string(k) +
                                    " are not available (supports " + std::to_string(order_) + ")");
      }
      return fn(x);
    }
  }

 private:
  std::tuple<Fn<double>, Fn<D1>, Fn<D2>, Fn<D3>> fns_;
  int order_ = -1;
};

}  // namespace detail

/// Symmetric metric g_ij(x) on an n-dimensional chart, evaluable at dual
/// scalars so that derivatives up to `derivative_order()` are exact.
///
/// Only the upper triangle of the evaluator output is read; the lower triangle
/// is mirrored from it, so every returned matrix is exactly symmetric.
class MetricField {
 public:
  MetricField() = default;

  /// `f` must be callable with Vec<S> for every dual depth up to `order`
  /// (a generic lambda) and return a dim x dim Mat<S>.
  template <typename F>
  MetricField(int dim, F f, std::string name, int order = kMaxDerivativeOrder)
      : dim_(dim),
        name_(std::move(name)),
        evals_(detail::DepthEvaluators<Mat>::from_generic(std::move(f), order)) {}

  int dim() const { return dim_; }
  int derivative_order() const { return evals_.order(); }
  const std::string& name() const { return name_; }

  template <typename S>
  Mat<S> at(const Vec<S>& x) const {
    check_dim(x.size(), dim_, "MetricField");
    Mat<S> g = evals_(x, name_);
    check_dim(g.rows(), dim_, "MetricField output rows");
    check_dim(g.cols(), dim_, "MetricField output cols");
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
    return g;
  }

  Mat<double> operator()(const ChartPoint& p) const { return at<double>(p); }

 private:
  int dim_ = 0;
  std::string name_;
  detail::DepthEvaluators<Mat> evals_;
};

/// Affine connection Γ^k_ij(x), symmetric in the lower pair.
class ConnectionField {
 public:
  ConnectionField() = default;

  template <typename F>
  ConnectionField(int dim, F f, std::string name, int order = kMaxDerivativeOrder)
      : dim_(dim),
        name_(std::move(name)),
        evals_(detail::DepthEvaluators<Tensor3>::from_generic(std::move(f), order)) {}

  int dim() const { return dim_; }
  int derivative_order() const { return evals_.order(); }
  const std::string& name() const { return name_; }

  template <typename S>
  Tensor3<S> at(const Vec<S>& x) const {
    check_dim(x.size(), dim_, "ConnectionField");
    Tensor3<S> gamma = evals_(x, name_);
    check_dim(gamma.dim(), dim_, "ConnectionField output");
    return gamma;
  }

  Tensor3<double> operator()(const ChartPoint& p) const { return at<double>(p); }

 private:
  int dim_ = 0;
  std::string name_;
  detail::DepthEvaluators<Tensor3> evals_;
};

}  // namespace rext
