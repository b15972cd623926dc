#pragma once

// Pure forward kernels shared by the tape ops and by the tests. Every kernel
// is templated on the scalar type; the library instantiates them with double.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mthccar/error.hpp"

namespace mthccar {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using ColVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = ColVec<double>;

// Probabilities that may reach a log are kept inside [kProbEps, 1 - kProbEps].
inline constexpr double kProbEps = 1e-7;

namespace detail {
inline std::string shape_str(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}
}  // namespace detail

template <typename A, typename B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                        const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape " + detail::shape_str(a.rows(), a.cols()) +
                         " vs " + detail::shape_str(b.rows(), b.cols()));
  }
}

/// out = input * weight + bias (bias broadcast over rows).
template <typename In, typename W, typename B>
Mat<typename In::Scalar> dense_forward(const Eigen::MatrixBase<In>& input,
                                       const Eigen::MatrixBase<W>& weight,
                                       const Eigen::MatrixBase<B>& bias) {
  if (input.cols() != weight.rows() || bias.rows() != 1 || bias.cols() != weight.cols()) {
    throw DimensionError("dense_forward: input " + detail::shape_str(input.rows(), input.cols()) +
                         ", weight " + detail::shape_str(weight.rows(), weight.cols()) +
                         ", bias " + detail::shape_str(bias.rows(), bias.cols()));
  }
  Mat<typename In::Scalar> out = input * weight;
  out.rowwise() += bias.row(0);
  return out;
}

template <typename In>
Mat<typename In::Scalar> relu(const Eigen::MatrixBase<In>& input) {
  return input.cwiseMax(typename In::Scalar(0));
}

/// Logistic function, clamped to [kProbEps, 1 - kProbEps].
template <typename In>
Mat<typename In::Scalar> sigmoid(const Eigen::MatrixBase<In>& input) {
  using S = typename In::Scalar;
  return input.unaryExpr([](S x) {
    const S s = S(1) / (S(1) + std::exp(-x));
    return std::clamp(s, S(kProbEps), S(1) - S(kProbEps));
  });
}

/// Row-wise softmax with per-row max subtraction.
template <typename In>
Mat<typename In::Scalar> softmax_rows(const Eigen::MatrixBase<In>& input) {
  using S = typename In::Scalar;
  Mat<S> out(input.rows(), input.cols());
  for (Eigen::Index i = 0; i < input.rows(); ++i) {
    const S m = input.row(i).maxCoeff();
    out.row(i) = (input.row(i).array() - m).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

/// Residual cross-attention, one pixel per row. With column vectors
/// q = Wq*t2, k = Wk*t1, v = Wv*t1 the attention matrix is the outer product
/// q*k^T (no temperature scaling), softmax is taken per row, and the output
/// row is Wz * softmax(q k^T) v + t1.
template <typename T1, typename T2, typename WQ, typename WK, typename WV, typename WZ>
Mat<typename T1::Scalar> cross_attention(const Eigen::MatrixBase<T1>& theta1,
                                         const Eigen::MatrixBase<T2>& theta2,
                                         const Eigen::MatrixBase<WQ>& wq,
                                         const Eigen::MatrixBase<WK>& wk,
                                         const Eigen::MatrixBase<WV>& wv,
                                         const Eigen::MatrixBase<WZ>& wz) {
  using S = typename T1::Scalar;
  require_same_shape(theta1, theta2, "cross_attention theta");
  const Eigen::Index d = theta1.cols();
  for (const auto* w : {&wq.derived(), &wk.derived(), &wv.derived()}) {
    if (w->rows() != d || w->cols() != d) throw DimensionError("cross_attention: W must be dxd");
  }
  if (wz.rows() != d || wz.cols() != d) throw DimensionError("cross_attention: Wz must be dxd");

  Mat<S> out(theta1.rows(), d);
  ColVec<S> q, k, v;
  Mat<S> scores;
  for (Eigen::Index i = 0; i < theta1.rows(); ++i) {
    q.noalias() = wq * theta2.row(i).transpose();
    k.noalias() = wk * theta1.row(i).transpose();
    v.noalias() = wv * theta1.row(i).transpose();
    scores.noalias() = q * k.transpose();
    const Mat<S> attn = softmax_rows(scores);
    out.row(i) = (wz * (attn * v)).transpose() + theta1.row(i);
  }
  return out;
}

template <typename In>
bool all_finite(const Eigen::MatrixBase<In>& m) {
  return m.allFinite();
}

}  // namespace mthccar
