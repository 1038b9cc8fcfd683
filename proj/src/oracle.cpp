#include "pinnlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pinnlab/errors.hpp"

namespace pinnlab::oracle {

std::string to_string(Method m) { return m == Method::colehopf ? "colehopf" : "crank_nicolson"; }

Method parse_method(const std::string& name) {
  if (name == "colehopf") return Method::colehopf;
  if (name == "crank_nicolson" || name == "cn") return Method::crank_nicolson;
  throw UsageError("unknown oracle method '" + name + "' (expected colehopf or crank_nicolson)");
}

double ReferenceGrid::interpolate(std::size_t row, double x) const {
  if (row >= t_values.size()) throw UsageError("reference row out of range");
  const auto it = std::upper_bound(x_values.begin(), x_values.end(), x);
  std::size_t j = it == x_values.begin() ? 0 : static_cast<std::size_t>(it - x_values.begin()) - 1;
  j = std::min(j, x_values.size() - 2);
  const double x0 = x_values[j], x1 = x_values[j + 1];
  const double w = (x - x0) / (x1 - x0);
  const auto r = static_cast<Eigen::Index>(row);
  const auto c = static_cast<Eigen::Index>(j);
  return (1.0 - w) * u(r, c) + w * u(r, c + 1);
}

// Newton iteration on the orthonormal Hermite recurrence, with the
// classical asymptotic starting guesses for the largest roots.
GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw UsageError("Gauss-Hermite order must be positive");
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
  // Computed largest-first; return ascending.
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return {std::move(x), std::move(w)};
}

double reference_colehopf(double t, double x, double nu, int quad_order) {
  if (quad_order < kMinQuadOrder) throw UsageError("Cole-Hopf quadrature order must be at least 8");
  if (!(nu > 0.0)) throw UsageError("viscosity must be positive");
  const double pi = std::numbers::pi;
  if (t <= 0.0) return -std::sin(pi * x);

  thread_local int cached_order = 0;
  thread_local GaussHermiteRule rule;
  if (cached_order != quad_order) {
    rule = gauss_hermite(quad_order);
    cached_order = quad_order;
  }

  const double s = std::sqrt(4.0 * nu * t);
  const double k = 1.0 / (2.0 * pi * nu);
  const std::size_t n = rule.nodes.size();
  std::vector<double> expo(n);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x - s * rule.nodes[i];
    expo[i] = -k * std::cos(pi * y);
    peak = std::max(peak, expo[i]);
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x - s * rule.nodes[i];
    const double f = rule.weights[i] * std::exp(expo[i] - peak);
    num += std::sin(pi * y) * f;
    den += f;
  }
  if (den < 1e-300) throw NumericError("Cole-Hopf quotient is degenerate");
  return -num / den;
}

namespace {

struct Tridiagonal {
  std::vector<double> c_prime;
  double diag;
  double off;
};

// Thomas solve for a constant-coefficient tridiagonal system, in place.
void solve(const Tridiagonal& tri, std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> d(n);
  d[0] = rhs[0] / tri.diag;
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = tri.diag - tri.off * tri.c_prime[i - 1];
    d[i] = (rhs[i] - tri.off * d[i - 1]) / denom;
  }
  rhs[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = d[i] - tri.c_prime[i] * rhs[i + 1];
}

Tridiagonal factor(std::size_t n, double diag, double off) {
  Tridiagonal tri{std::vector<double>(n), diag, off};
  tri.c_prime[0] = off / diag;
  for (std::size_t i = 1; i < n; ++i) tri.c_prime[i] = off / (diag - off * tri.c_prime[i - 1]);
  return tri;
}

}  // namespace

ReferenceGrid reference_crank_nicolson(int nx, int nt, double nu, std::span<const double> output_times) {
  if (nx < kMinCnSpaceSteps || nt < kMinCnTimeSteps) {
    throw UsageError("Crank-Nicolson needs nx >= 512 and nt >= 1024");
  }
  if (!(nu > 0.0)) throw UsageError("viscosity must be positive");
  for (double t : output_times) {
    if (t < 0.0 || t > 1.0) throw UsageError("output times must lie in [0, 1]");
  }
  const double pi = std::numbers::pi;
  const auto nodes = static_cast<std::size_t>(nx) + 1;
  const double dx = 2.0 / nx;
  const double dt = 1.0 / nt;
  const double r = nu * dt / (dx * dx);

  ReferenceGrid grid;
  grid.method = Method::crank_nicolson;
  grid.x_values.resize(nodes);
  for (std::size_t j = 0; j < nodes; ++j) grid.x_values[j] = -1.0 + static_cast<double>(j) * dx;
  grid.x_values.back() = 1.0;

  std::vector<double> u(nodes);
  for (std::size_t j = 0; j < nodes; ++j) u[j] = -std::sin(pi * grid.x_values[j]);
  u.front() = 0.0;
  u.back() = 0.0;

  const bool all_levels = output_times.empty();
  if (all_levels) {
    grid.t_values.resize(static_cast<std::size_t>(nt) + 1);
    for (int n = 0; n <= nt; ++n) grid.t_values[static_cast<std::size_t>(n)] = n * dt;
  } else {
    grid.t_values.assign(output_times.begin(), output_times.end());
  }
  grid.u.resize(static_cast<Eigen::Index>(grid.t_values.size()), static_cast<Eigen::Index>(nodes));

  // Rows are filled as soon as both enclosing levels are known.
  const auto store = [&](int level, const std::vector<double>& prev, const std::vector<double>& cur) {
    if (all_levels) {
      for (std::size_t j = 0; j < nodes; ++j) grid.u(level, static_cast<Eigen::Index>(j)) = cur[j];
      return;
    }
    for (std::size_t k = 0; k < grid.t_values.size(); ++k) {
      const double pos = grid.t_values[k] * nt;
      const double lo = std::floor(pos);
      const bool exact = pos == static_cast<double>(level);
      const bool inside = level > 0 && lo == level - 1 && pos > lo;
      if (!exact && !inside) continue;
      const double w = exact ? 1.0 : pos - lo;
      for (std::size_t j = 0; j < nodes; ++j) {
        grid.u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = (1.0 - w) * prev[j] + w * cur[j];
      }
    }
  };

  const std::size_t interior = nodes - 2;
  const Tridiagonal tri = factor(interior, 1.0 + r, -0.5 * r);
  std::vector<double> conv(interior), conv_prev(interior), rhs(interior), prev = u;
  store(0, u, u);
  for (int n = 1; n <= nt; ++n) {
    for (std::size_t i = 0; i < interior; ++i) {
      const std::size_t j = i + 1;
      conv[i] = (0.5 * u[j + 1] * u[j + 1] - 0.5 * u[j - 1] * u[j - 1]) / (2.0 * dx);
    }
    for (std::size_t i = 0; i < interior; ++i) {
      const std::size_t j = i + 1;
      const double c = n == 1 ? conv[i] : 1.5 * conv[i] - 0.5 * conv_prev[i];
      rhs[i] = u[j] + 0.5 * r * (u[j + 1] - 2.0 * u[j] + u[j - 1]) - dt * c;
    }
    solve(tri, rhs);
    prev = u;
    double peak = 0.0;
    for (std::size_t i = 0; i < interior; ++i) {
      u[i + 1] = rhs[i];
      peak = std::max(peak, std::abs(rhs[i]));
    }
    if (!(peak <= 10.0)) throw NumericError("Crank-Nicolson became unstable; use a finer grid");
    conv_prev.swap(conv);
    store(n, prev, u);
  }
  return grid;
}

double crank_nicolson_refinement_delta(int nx, int nt, double nu, std::span<const double> times) {
  const ReferenceGrid coarse = reference_crank_nicolson(nx, nt, nu, times);
  const ReferenceGrid fine = reference_crank_nicolson(2 * nx, 2 * nt, nu, times);
  double delta = 0.0;
  for (Eigen::Index k = 0; k < coarse.u.rows(); ++k) {
    for (Eigen::Index j = 0; j < coarse.u.cols(); ++j) delta = std::max(delta, std::abs(coarse.u(k, j) - fine.u(k, 2 * j)));
  }
  return delta;
}

ReferenceGrid reference_on_grid(Method method, std::span<const double> t_values, std::span<const double> x_values,
                                double nu, int nx, int nt, int quad_order) {
  ReferenceGrid out;
  out.method = method;
  out.t_values.assign(t_values.begin(), t_values.end());
  out.x_values.assign(x_values.begin(), x_values.end());
  out.u.resize(static_cast<Eigen::Index>(t_values.size()), static_cast<Eigen::Index>(x_values.size()));
  if (method == Method::colehopf) {
    for (std::size_t i = 0; i < t_values.size(); ++i) {
      for (std::size_t j = 0; j < x_values.size(); ++j) {
        out.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            reference_colehopf(t_values[i], x_values[j], nu, quad_order);
      }
    }
    return out;
  }
  const ReferenceGrid cn = reference_crank_nicolson(nx, nt, nu, t_values);
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    for (std::size_t j = 0; j < x_values.size(); ++j) {
      out.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cn.interpolate(i, x_values[j]);
    }
  }
  return out;
}

double relative_l2_error(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& ref) {
  if (pred.rows() != ref.rows() || pred.cols() != ref.cols()) throw UsageError("prediction and reference shapes differ");
  const double denom = ref.norm();
  if (denom == 0.0) throw UsageError("reference has zero norm");
  return (pred - ref).norm() / denom;
}

}  // namespace pinnlab::oracle
