#include "pinnlab/tape.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace pinnlab {
namespace {

std::atomic<std::uint64_t> next_tape_id{1};

// Value and first three derivatives of a unary elementary function.
struct Unary {
  double f1, f2, f3;
};

Unary derivatives(Op op, double u) {
  switch (op) {
    case Op::tanh: {
      const double s = std::tanh(u);
      const double s1 = 1.0 - s * s;
      return {s1, -2.0 * s * s1, -2.0 * s1 * s1 + 4.0 * s * s * s1};
    }
    case Op::sin: {
      const double s = std::sin(u), c = std::cos(u);
      return {c, -s, -c};
    }
    case Op::exp: {
      const double e = std::exp(u);
      return {e, e, e};
    }
    default:
      throw UsageError("not a unary elementary op");
  }
}

// Adjoint of y = f(u) pulled back onto u.
void unary_adjoint(const Dual2& u, const Unary& d, const Dual2& bar_y, Dual2& bar_u) {
  bar_u.val += bar_y.val * d.f1 + (bar_y.dx * u.dx + bar_y.dt * u.dt) * d.f2 +
               bar_y.dxx * (d.f3 * u.dx * u.dx + d.f2 * u.dxx);
  bar_u.dx += bar_y.dx * d.f1 + 2.0 * bar_y.dxx * d.f2 * u.dx;
  bar_u.dt += bar_y.dt * d.f1;
  bar_u.dxx += bar_y.dxx * d.f1;
}

// Adjoint of h = f*g pulled back onto f.
void product_adjoint(const Dual2& g, const Dual2& bar_h, Dual2& bar_f) {
  bar_f.val += bar_h.val * g.val + bar_h.dx * g.dx + bar_h.dt * g.dt + bar_h.dxx * g.dxx;
  bar_f.dx += bar_h.dx * g.val + 2.0 * bar_h.dxx * g.dx;
  bar_f.dt += bar_h.dt * g.val;
  bar_f.dxx += bar_h.dxx * g.val;
}

void axpy(double c, const Dual2& src, Dual2& dst) {
  dst.val += c * src.val;
  dst.dx += c * src.dx;
  dst.dt += c * src.dt;
  dst.dxx += c * src.dxx;
}

}  // namespace

Tape::Tape() : id_(next_tape_id.fetch_add(1)) {}

NodeId Tape::push(Node node) {
  nodes_.push_back(node);
  return {static_cast<std::uint32_t>(nodes_.size() - 1), id_};
}

std::uint32_t Tape::check(NodeId id) const {
  if (id.tape != id_ || id.index >= nodes_.size()) throw UsageError("node is not on this tape");
  return id.index;
}

NodeId Tape::input(double value, InputAxis axis) {
  return push({Kind::input, 0, 0, 0.0, lift_input(value, axis)});
}

NodeId Tape::constant(double value) { return push({Kind::constant, 0, 0, 0.0, lift_const(value)}); }

NodeId Tape::parameter(std::size_t index, double value) {
  if (index + 1 > parameter_count_) parameter_count_ = index + 1;
  return push({Kind::parameter, 0, 0, static_cast<double>(index), lift_const(value)});
}

std::span<const NodeId> Tape::bind_parameters(std::span<const double> values) {
  if (!bound_.empty()) {
    if (bound_.size() != values.size()) throw UsageError("tape already bound to a different parameter vector");
    return bound_;
  }
  bound_.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) bound_.push_back(parameter(i, values[i]));
  return bound_;
}

NodeId Tape::apply(Op op, std::span<const NodeId> args) {
  switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      if (args.size() != 2) throw UsageError("binary op needs exactly two arguments");
      return apply(op, args[0], args[1]);
    case Op::neg:
    case Op::tanh:
    case Op::sin:
    case Op::exp:
      if (args.size() != 1) throw UsageError("unary op needs exactly one argument");
      return apply(op, args[0]);
    case Op::scale:
      throw UsageError("scale takes a factor; use Tape::scale");
  }
  throw UsageError("unknown op");
}

NodeId Tape::apply(Op op, NodeId a) {
  const std::uint32_t ia = check(a);
  const Dual2 u = nodes_[ia].value;
  switch (op) {
    case Op::neg: return push({Kind::neg, ia, 0, 0.0, -u});
    case Op::tanh: return push({Kind::tanh, ia, 0, 0.0, pinnlab::tanh(u)});
    case Op::sin: return push({Kind::sin, ia, 0, 0.0, pinnlab::sin(u)});
    case Op::exp: return push({Kind::exp, ia, 0, 0.0, pinnlab::exp(u)});
    default: throw UsageError("op is not unary");
  }
}

NodeId Tape::apply(Op op, NodeId a, NodeId b) {
  const std::uint32_t ia = check(a), ib = check(b);
  const Dual2 f = nodes_[ia].value, g = nodes_[ib].value;
  switch (op) {
    case Op::add: return push({Kind::add, ia, ib, 0.0, f + g});
    case Op::sub: return push({Kind::sub, ia, ib, 0.0, f - g});
    case Op::mul: return push({Kind::mul, ia, ib, 0.0, f * g});
    case Op::div: return push({Kind::div, ia, ib, 0.0, f / g});
    default: throw UsageError("op is not binary");
  }
}

NodeId Tape::scale(NodeId a, double factor) {
  const std::uint32_t ia = check(a);
  return push({Kind::scale, ia, 0, factor, factor * nodes_[ia].value});
}

NodeId Tape::component(NodeId a, Component c) {
  const std::uint32_t ia = check(a);
  return push({Kind::component, ia, 0, static_cast<double>(c), lift_const(pinnlab::component(nodes_[ia].value, c))});
}

const Dual2& Tape::value(NodeId id) const { return nodes_[check(id)].value; }

std::vector<double> Tape::backward(NodeId output, std::size_t param_count) const {
  return backward(output, Dual2{1.0, 0.0, 0.0, 0.0}, param_count);
}

std::vector<double> Tape::backward(NodeId output, const Dual2& seed, std::size_t param_count) const {
  const std::uint32_t out = check(output);
  if (param_count < parameter_count_) throw UsageError("param_count smaller than bound parameters");

  std::vector<Dual2> bar(out + 1);
  bar[out] = seed;
  std::vector<double> grad(param_count, 0.0);

  for (std::uint32_t i = out + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    const Dual2& g = bar[i];
    if (g == Dual2{}) continue;
    switch (n.kind) {
      case Kind::input:
      case Kind::constant:
        break;
      case Kind::parameter:
        // Parameter leaves have constant zero input derivatives.
        grad[static_cast<std::size_t>(n.aux)] += g.val;
        break;
      case Kind::component: {
        Dual2& t = bar[n.a];
        switch (static_cast<Component>(static_cast<int>(n.aux))) {
          case Component::val: t.val += g.val; break;
          case Component::dx: t.dx += g.val; break;
          case Component::dt: t.dt += g.val; break;
          case Component::dxx: t.dxx += g.val; break;
        }
        break;
      }
      case Kind::add:
        axpy(1.0, g, bar[n.a]);
        axpy(1.0, g, bar[n.b]);
        break;
      case Kind::sub:
        axpy(1.0, g, bar[n.a]);
        axpy(-1.0, g, bar[n.b]);
        break;
      case Kind::neg:
        axpy(-1.0, g, bar[n.a]);
        break;
      case Kind::scale:
        axpy(n.aux, g, bar[n.a]);
        break;
      case Kind::mul:
        product_adjoint(nodes_[n.b].value, g, bar[n.a]);
        product_adjoint(nodes_[n.a].value, g, bar[n.b]);
        break;
      case Kind::div: {
        // h = f * q with q = 1/g.
        const Dual2& den = nodes_[n.b].value;
        const Dual2 q = reciprocal(den);
        product_adjoint(q, g, bar[n.a]);
        Dual2 bar_q{};
        product_adjoint(nodes_[n.a].value, g, bar_q);
        const double r = q.val;
        unary_adjoint(den, {-r * r, 2.0 * r * r * r, -6.0 * r * r * r * r}, bar_q, bar[n.b]);
        break;
      }
      case Kind::tanh:
        unary_adjoint(nodes_[n.a].value, derivatives(Op::tanh, nodes_[n.a].value.val), g, bar[n.a]);
        break;
      case Kind::sin:
        unary_adjoint(nodes_[n.a].value, derivatives(Op::sin, nodes_[n.a].value.val), g, bar[n.a]);
        break;
      case Kind::exp:
        unary_adjoint(nodes_[n.a].value, derivatives(Op::exp, nodes_[n.a].value.val), g, bar[n.a]);
        break;
    }
  }
  return grad;
}

}  // namespace pinnlab
