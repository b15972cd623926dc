#include "mthccar/gradcore/tape.hpp"

namespace mthccar {

const Matrix& Var::value() const {
  if (tape_ == nullptr) throw StateError("use of an unbound Var");
  return tape_->value(id_);
}

double Var::scalar() const {
  const Matrix& v = value();
  if (v.size() != 1) throw DimensionError("scalar(): value is " + detail::shape_str(v.rows(), v.cols()));
  return v(0, 0);
}

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, nullptr, false});
  return {this, nodes_.size() - 1};
}

Var Tape::parameter(Param& param) {
  nodes_.push_back(Node{param.value, {}, {}, &param, true});
  return {this, nodes_.size() - 1};
}

Var Tape::record(Matrix value, bool needs_grad, Pullback pullback) {
  nodes_.push_back(Node{std::move(value), {}, needs_grad ? std::move(pullback) : Pullback{}, nullptr,
                        needs_grad});
  return {this, nodes_.size() - 1};
}

void Tape::accumulate(const Var& v, const Matrix& grad) {
  Node& node = nodes_[v.id()];
  if (!node.needs_grad) return;
  if (grad.rows() != node.value.rows() || grad.cols() != node.value.cols()) {
    throw DimensionError("gradient shape " + detail::shape_str(grad.rows(), grad.cols()) +
                         " does not match value shape " +
                         detail::shape_str(node.value.rows(), node.value.cols()));
  }
  if (node.grad.size() == 0) {
    node.grad = grad;
  } else {
    node.grad += grad;
  }
}

void Tape::backward(Var root) {
  backward(root, Matrix::Ones(1, 1));
}

void Tape::backward(Var root, const Matrix& upstream) {
  if (nodes_.empty() || root.tape() != this || root.id() >= nodes_.size()) {
    throw StateError("backward called without a recorded forward pass");
  }
  const Matrix& rv = nodes_[root.id()].value;
  if (upstream.rows() != rv.rows() || upstream.cols() != rv.cols()) {
    throw DimensionError("upstream gradient shape does not match the root value");
  }
  for (auto& n : nodes_) n.grad.resize(0, 0);
  accumulate(root, upstream);

  for (std::size_t id = root.id() + 1; id-- > 0;) {
    Node& node = nodes_[id];
    if (!node.needs_grad || node.grad.size() == 0) continue;
    if (node.param != nullptr) {
      node.param->grad += node.grad;
    } else if (node.pullback) {
      // The pullback may append nothing but can touch other nodes' grads;
      // copy the grad so the reference stays valid.
      const Matrix g = node.grad;
      node.pullback(*this, g);
    }
  }
}

}  // namespace mthccar
