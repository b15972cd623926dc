#pragma once

// Differentiable ops recorded on a Tape. All inputs of one op must live on
// the same tape.

#include "mthccar/gradcore/tape.hpp"

namespace mthccar::ops {

Var matmul(const Var& a, const Var& b);
/// a (n x d) + bias (1 x d), bias broadcast over rows.
Var add_bias(const Var& a, const Var& bias);
Var dense(const Var& input, const Var& weight, const Var& bias);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
/// Elementwise product.
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);
/// a (n x d) with row i multiplied by gate(i, 0).
Var row_gate(const Var& a, const Var& gate);
/// Column j of a as an (n x 1) matrix.
Var column(const Var& a, Eigen::Index j);
/// 1 - a, elementwise.
Var one_minus(const Var& a);

Var relu(const Var& a);
/// Logistic function clamped to [kProbEps, 1 - kProbEps]; zero gradient
/// where the clamp is active.
Var sigmoid(const Var& a);
Var softmax_rows(const Var& a);
/// Clamp to [lo, hi]; zero gradient outside the open interval.
Var clamp(const Var& a, double lo, double hi);
Var log(const Var& a);
/// |a| with subgradient 0 at exactly 0.
Var abs(const Var& a);
Var square(const Var& a);

/// Sum of all entries as a 1x1 value.
Var sum(const Var& a);
Var mean(const Var& a);

Var cross_attention(const Var& theta1, const Var& theta2, const Var& wq, const Var& wk,
                    const Var& wv, const Var& wz);

}  // namespace mthccar::ops
