#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace pinnlab::oracle {

// Reference solutions of the viscous Burgers problem with u(0, x) =
// -sin(pi x) and homogeneous Dirichlet boundaries. Two independent methods
// are provided so that each can check the other.

enum class Method { colehopf, crank_nicolson };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Reference values u(t_values[i], x_values[j]) stored in u(i, j).
struct ReferenceGrid {
  std::vector<double> t_values;
  std::vector<double> x_values;
  Eigen::MatrixXd u;
  Method method = Method::crank_nicolson;

  /// Piecewise-linear interpolation in x along row `row`.
  double interpolate(std::size_t row, double x) const;
};

/// Nodes and weights of the n-point Gauss-Hermite rule for weight
/// exp(-z^2), nodes ascending.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

inline constexpr int kMinQuadOrder = 8;

/// Cole-Hopf closed form evaluated with an n-point Gauss-Hermite rule:
///
///   u = - int sin(pi y) F(y) e^{-z^2} dz / int F(y) e^{-z^2} dz,
///   y = x - sqrt(4 nu t) z,   F(y) = exp(-cos(pi y) / (2 pi nu)).
///
/// Exponents are shifted by their maximum before exponentiation. Returns
/// -sin(pi x) at t = 0. Throws UsageError for quad_order < 8 and
/// NumericError when the denominator falls below 1e-300.
double reference_colehopf(double t, double x, double nu, int quad_order);

inline constexpr int kMinCnSpaceSteps = 512;
inline constexpr int kMinCnTimeSteps = 1024;

/// Crank-Nicolson in the diffusion term, second-order Adams-Bashforth
/// (forward Euler on the first step) for the conservative convective flux
/// (u^2/2)_x with central differences, Dirichlet zero boundaries.
///
/// Grid x_j = -1 + 2 j / nx (j = 0..nx), time step 1/nt on [0, 1]. When
/// `output_times` is empty every time level is returned; otherwise one row
/// per requested time, linearly interpolated between the two enclosing
/// time levels. Throws UsageError below the minimum grid sizes and
/// NumericError if max|u| exceeds 10.
ReferenceGrid reference_crank_nicolson(int nx, int nt, double nu, std::span<const double> output_times = {});

/// Max |difference| at the coarse nodes between the (nx, nt) and
/// (2 nx, 2 nt) solutions at the given times.
double crank_nicolson_refinement_delta(int nx, int nt, double nu, std::span<const double> times);

/// Reference values on the tensor grid t_values x x_values. Crank-Nicolson
/// rows are interpolated linearly in x onto x_values.
ReferenceGrid reference_on_grid(Method method, std::span<const double> t_values, std::span<const double> x_values,
                                double nu, int nx = 2048, int nt = 4096, int quad_order = 128);

/// ||pred - ref||_2 / ||ref||_2 over all entries. Throws UsageError on
/// shape mismatch or when ||ref||_2 is zero.
double relative_l2_error(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& ref);

}  // namespace pinnlab::oracle
