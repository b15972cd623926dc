#include "mthccar/gradcore/ops.hpp"

#include <cmath>

namespace mthccar::ops {
namespace {

Tape& same_tape(const Var& a, const Var& b) {
  if (a.tape() == nullptr || a.tape() != b.tape()) throw StateError("ops on Vars from different tapes");
  return *a.tape();
}

Tape& tape_of(const Var& a) {
  if (a.tape() == nullptr) throw StateError("op on an unbound Var");
  return *a.tape();
}

bool any_grad(Tape& t, std::initializer_list<Var> vs) {
  for (const auto& v : vs) {
    if (t.needs_grad(v)) return true;
  }
  return false;
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + detail::shape_str(a.rows(), a.cols()) + " * " +
                         detail::shape_str(b.rows(), b.cols()));
  }
  Matrix out = a.value() * b.value();
  return t.record(std::move(out), any_grad(t, {a, b}), [a, b](Tape& tp, const Matrix& g) {
    if (tp.needs_grad(a)) tp.accumulate(a, g * b.value().transpose());
    if (tp.needs_grad(b)) tp.accumulate(b, a.value().transpose() * g);
  });
}

Var add_bias(const Var& a, const Var& bias) {
  Tape& t = same_tape(a, bias);
  if (bias.rows() != 1 || bias.cols() != a.cols()) throw DimensionError("add_bias: bias must be 1 x cols");
  Matrix out = a.value();
  out.rowwise() += bias.value().row(0);
  return t.record(std::move(out), any_grad(t, {a, bias}), [a, bias](Tape& tp, const Matrix& g) {
    tp.accumulate(a, g);
    tp.accumulate(bias, g.colwise().sum());
  });
}

Var dense(const Var& input, const Var& weight, const Var& bias) {
  Tape& t = same_tape(input, weight);
  Matrix out = dense_forward(input.value(), weight.value(), bias.value());
  return t.record(std::move(out), any_grad(t, {input, weight, bias}),
                  [input, weight, bias](Tape& tp, const Matrix& g) {
                    if (tp.needs_grad(input)) tp.accumulate(input, g * weight.value().transpose());
                    if (tp.needs_grad(weight)) tp.accumulate(weight, input.value().transpose() * g);
                    tp.accumulate(bias, g.colwise().sum());
                  });
}

Var add(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  require_same_shape(a.value(), b.value(), "add");
  return t.record(a.value() + b.value(), any_grad(t, {a, b}), [a, b](Tape& tp, const Matrix& g) {
    tp.accumulate(a, g);
    tp.accumulate(b, g);
  });
}

Var sub(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  require_same_shape(a.value(), b.value(), "sub");
  return t.record(a.value() - b.value(), any_grad(t, {a, b}), [a, b](Tape& tp, const Matrix& g) {
    tp.accumulate(a, g);
    tp.accumulate(b, -g);
  });
}

Var mul(const Var& a, const Var& b) {
  Tape& t = same_tape(a, b);
  require_same_shape(a.value(), b.value(), "mul");
  Matrix out = a.value().cwiseProduct(b.value());
  return t.record(std::move(out), any_grad(t, {a, b}), [a, b](Tape& tp, const Matrix& g) {
    if (tp.needs_grad(a)) tp.accumulate(a, g.cwiseProduct(b.value()));
    if (tp.needs_grad(b)) tp.accumulate(b, g.cwiseProduct(a.value()));
  });
}

Var scale(const Var& a, double s) {
  Tape& t = tape_of(a);
  return t.record(a.value() * s, t.needs_grad(a), [a, s](Tape& tp, const Matrix& g) {
    tp.accumulate(a, g * s);
  });
}

Var row_gate(const Var& a, const Var& gate) {
  Tape& t = same_tape(a, gate);
  if (gate.cols() != 1 || gate.rows() != a.rows()) throw DimensionError("row_gate: gate must be n x 1");
  Matrix out = a.value().array().colwise() * gate.value().col(0).array();
  return t.record(std::move(out), any_grad(t, {a, gate}), [a, gate](Tape& tp, const Matrix& g) {
    if (tp.needs_grad(a)) {
      tp.accumulate(a, Matrix(g.array().colwise() * gate.value().col(0).array()));
    }
    if (tp.needs_grad(gate)) {
      tp.accumulate(gate, Matrix(g.cwiseProduct(a.value()).rowwise().sum()));
    }
  });
}

Var column(const Var& a, Eigen::Index j) {
  Tape& t = tape_of(a);
  if (j < 0 || j >= a.cols()) throw DimensionError("column index out of range");
  Matrix out = a.value().col(j);
  return t.record(std::move(out), t.needs_grad(a), [a, j](Tape& tp, const Matrix& g) {
    Matrix full = Matrix::Zero(a.rows(), a.cols());
    full.col(j) = g.col(0);
    tp.accumulate(a, full);
  });
}

Var one_minus(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = (1.0 - a.value().array()).matrix();
  return t.record(std::move(out), t.needs_grad(a), [a](Tape& tp, const Matrix& g) {
    tp.accumulate(a, -g);
  });
}

Var relu(const Var& a) {
  Tape& t = tape_of(a);
  return t.record(mthccar::relu(a.value()), t.needs_grad(a), [a](Tape& tp, const Matrix& g) {
    tp.accumulate(a, Matrix((a.value().array() > 0.0).select(g.array(), 0.0)));
  });
}

Var sigmoid(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = mthccar::sigmoid(a.value());
  const std::size_t self = t.size();
  return t.record(std::move(out), t.needs_grad(a), [a, self](Tape& tp, const Matrix& g) {
    const Matrix& s = tp.value(self);
    Matrix local = s.unaryExpr([](double v) {
      return (v <= kProbEps || v >= 1.0 - kProbEps) ? 0.0 : v * (1.0 - v);
    });
    tp.accumulate(a, g.cwiseProduct(local));
  });
}

Var softmax_rows(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = mthccar::softmax_rows(a.value());
  const std::size_t self = t.size();
  return t.record(std::move(out), t.needs_grad(a), [a, self](Tape& tp, const Matrix& g) {
    const Matrix& s = tp.value(self);
    const Vector dot = g.cwiseProduct(s).rowwise().sum();
    Matrix ga = s.cwiseProduct(Matrix(g.colwise() - dot));
    tp.accumulate(a, ga);
  });
}

Var clamp(const Var& a, double lo, double hi) {
  Tape& t = tape_of(a);
  Matrix out = a.value().cwiseMax(lo).cwiseMin(hi);
  return t.record(std::move(out), t.needs_grad(a), [a, lo, hi](Tape& tp, const Matrix& g) {
    const auto& x = a.value().array();
    tp.accumulate(a, Matrix((x > lo && x < hi).select(g.array(), 0.0)));
  });
}

Var log(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out = a.value().array().log().matrix();
  return t.record(std::move(out), t.needs_grad(a), [a](Tape& tp, const Matrix& g) {
    tp.accumulate(a, Matrix(g.array() / a.value().array()));
  });
}

Var abs(const Var& a) {
  Tape& t = tape_of(a);
  return t.record(a.value().cwiseAbs(), t.needs_grad(a), [a](Tape& tp, const Matrix& g) {
    const Matrix sign = a.value().unaryExpr([](double v) { return double((v > 0) - (v < 0)); });
    tp.accumulate(a, g.cwiseProduct(sign));
  });
}

Var square(const Var& a) {
  Tape& t = tape_of(a);
  return t.record(a.value().cwiseAbs2(), t.needs_grad(a), [a](Tape& tp, const Matrix& g) {
    tp.accumulate(a, Matrix(2.0 * g.cwiseProduct(a.value())));
  });
}

Var sum(const Var& a) {
  Tape& t = tape_of(a);
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return t.record(std::move(out), t.needs_grad(a), [a](Tape& tp, const Matrix& g) {
    tp.accumulate(a, Matrix::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

Var mean(const Var& a) {
  if (a.value().size() == 0) throw DimensionError("mean of an empty matrix");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var cross_attention(const Var& theta1, const Var& theta2, const Var& wq, const Var& wk,
                    const Var& wv, const Var& wz) {
  Tape& t = same_tape(theta1, theta2);
  Matrix out = mthccar::cross_attention(theta1.value(), theta2.value(), wq.value(), wk.value(),
                                        wv.value(), wz.value());
  const bool ng = any_grad(t, {theta1, theta2, wq, wk, wv, wz});
  return t.record(std::move(out), ng, [=](Tape& tp, const Matrix& g) {
    const Matrix& t1 = theta1.value();
    const Matrix& t2 = theta2.value();
    const Matrix& WQ = wq.value();
    const Matrix& WK = wk.value();
    const Matrix& WV = wv.value();
    const Matrix& WZ = wz.value();
    const Eigen::Index d = t1.cols();

    Matrix g_t1 = g;  // residual path
    Matrix g_t2 = Matrix::Zero(t2.rows(), d);
    Matrix g_wq = Matrix::Zero(d, d), g_wk = Matrix::Zero(d, d);
    Matrix g_wv = Matrix::Zero(d, d), g_wz = Matrix::Zero(d, d);

    Vector q, k, v, y, gy, gv, gq, gk, row_dot;
    Matrix attn, g_attn, g_scores;
    for (Eigen::Index i = 0; i < t1.rows(); ++i) {
      const Vector x1 = t1.row(i).transpose();
      const Vector x2 = t2.row(i).transpose();
      const Vector go = g.row(i).transpose();
      q.noalias() = WQ * x2;
      k.noalias() = WK * x1;
      v.noalias() = WV * x1;
      attn = mthccar::softmax_rows(Matrix(q * k.transpose()));
      y.noalias() = attn * v;

      g_wz.noalias() += go * y.transpose();
      gy.noalias() = WZ.transpose() * go;
      g_attn.noalias() = gy * v.transpose();
      gv.noalias() = attn.transpose() * gy;
      row_dot = g_attn.cwiseProduct(attn).rowwise().sum();
      g_scores = attn.cwiseProduct(Matrix(g_attn.colwise() - row_dot));
      gq.noalias() = g_scores * k;
      gk.noalias() = g_scores.transpose() * q;

      g_wq.noalias() += gq * x2.transpose();
      g_wk.noalias() += gk * x1.transpose();
      g_wv.noalias() += gv * x1.transpose();
      g_t2.row(i) += (WQ.transpose() * gq).transpose();
      g_t1.row(i) += (WK.transpose() * gk + WV.transpose() * gv).transpose();
    }
    tp.accumulate(theta1, g_t1);
    tp.accumulate(theta2, g_t2);
    tp.accumulate(wq, g_wq);
    tp.accumulate(wk, g_wk);
    tp.accumulate(wv, g_wv);
    tp.accumulate(wz, g_wz);
  });
}

}  // namespace mthccar::ops
