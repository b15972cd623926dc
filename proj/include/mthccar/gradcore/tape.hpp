#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mthccar/gradcore/kernels.hpp"
#include "mthccar/gradcore/param_store.hpp"

namespace mthccar {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid as long as the
/// tape is alive and has not been cleared.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  [[nodiscard]] const Matrix& value() const;
  [[nodiscard]] Eigen::Index rows() const { return value().rows(); }
  [[nodiscard]] Eigen::Index cols() const { return value().cols(); }
  [[nodiscard]] double scalar() const;
  [[nodiscard]] Tape* tape() const { return tape_; }
  [[nodiscard]] std::size_t id() const { return id_; }
  [[nodiscard]] bool valid() const { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording of a forward computation over dense matrices.
///
/// Each recorded node owns its forward value and an optional pullback that
/// distributes the node's gradient to its inputs. Leaves created with
/// parameter() are bound to a Param; backward() adds the gradient reaching
/// such a leaf into Param::grad, so repeated backward calls accumulate.
///
/// A tape is single-threaded and single-use: record, call backward once per
/// root, then clear() or drop it.
class Tape {
 public:
  using Pullback = std::function<void(Tape&, const Matrix& grad)>;

  Var constant(Matrix value);
  Var parameter(Param& param);
  /// Records an op result. `needs_grad` should be true iff any input needs a
  /// gradient; when false the pullback is never invoked.
  Var record(Matrix value, bool needs_grad, Pullback pullback);

  /// Seeds d(root)/d(root) = 1; root must be 1x1.
  void backward(Var root);
  /// Seeds the root with an explicit upstream gradient of the root's shape.
  void backward(Var root, const Matrix& upstream);

  void accumulate(const Var& v, const Matrix& grad);
  template <typename Expr>
  void accumulate(const Var& v, const Eigen::MatrixBase<Expr>& grad) {
    accumulate(v, Matrix(grad));
  }

  [[nodiscard]] const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  [[nodiscard]] bool needs_grad(const Var& v) const { return nodes_[v.id()].needs_grad; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Pullback pullback;
    Param* param = nullptr;
    bool needs_grad = false;
  };
  std::vector<Node> nodes_;
};

}  // namespace mthccar
