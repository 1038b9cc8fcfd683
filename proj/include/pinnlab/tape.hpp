#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pinnlab/dual2.hpp"

namespace pinnlab {

/// Closed set of differentiable operations a tape can record.
enum class Op { add, sub, mul, div, neg, scale, tanh, sin, exp };

/// Handle to a node on a specific tape.
struct NodeId {
  std::uint32_t index = 0;
  std::uint64_t tape = 0;
};

/// Recorded computation graph over Dual2 values (forward-over-reverse).
///
/// Every node stores its Dual2 value, computed eagerly in forward mode in
/// (t, x). `backward` then sweeps the nodes in reverse with Dual2-valued
/// adjoints, which yields the exact gradient with respect to every
/// parameter leaf of any scalar built from node components.
///
/// Nodes are appended in evaluation order, so parents always precede
/// children. A tape is single-writer; use one tape per worker.
class Tape {
 public:
  Tape();

  NodeId input(double value, InputAxis axis);
  NodeId constant(double value);

  /// Leaf for parameter `index`. Its Dual2 has zero input derivatives.
  NodeId parameter(std::size_t index, double value);

  /// Binds one leaf per entry of `values` (indices 0..n-1) on first call;
  /// later calls with the same length return the existing leaves.
  std::span<const NodeId> bind_parameters(std::span<const double> values);

  NodeId apply(Op op, std::span<const NodeId> args);
  NodeId apply(Op op, NodeId a);
  NodeId apply(Op op, NodeId a, NodeId b);
  NodeId scale(NodeId a, double factor);

  /// Lifts one component of `a` into the value slot of a new node whose
  /// input derivatives are zero. Used to form scalars such as u_t + u*u_x
  /// from the derivatives of the network output.
  NodeId component(NodeId a, Component c);

  const Dual2& value(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }
  std::size_t parameter_count() const { return parameter_count_; }

  /// Gradient of `output.val` with respect to every parameter leaf.
  /// `param_count` sets the result length (at least the largest bound
  /// index + 1). The tape is left untouched.
  std::vector<double> backward(NodeId output, std::size_t param_count) const;

  /// Same as above but seeds all four adjoint components of `output`,
  /// i.e. differentiates seed.val*out.val + seed.dx*out.dx + ... .
  std::vector<double> backward(NodeId output, const Dual2& seed, std::size_t param_count) const;

 private:
  enum class Kind : std::uint8_t { input, constant, parameter, component, add, sub, mul, div, neg, scale, tanh, sin, exp };

  struct Node {
    Kind kind;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double aux = 0.0;  // scale factor, parameter index or component tag
    Dual2 value;
  };

  NodeId push(Node node);
  std::uint32_t check(NodeId id) const;

  std::uint64_t id_;
  std::vector<Node> nodes_;
  std::vector<NodeId> bound_;
  std::size_t parameter_count_ = 0;
};

}  // namespace pinnlab
