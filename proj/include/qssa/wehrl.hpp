#pragma once

// SU(2) Bloch coherent states, product Gauss-Legendre x uniform-phi sphere
// quadrature, Husimi functions and Wehrl entropy.
//
// The measure is d mu = (2j+1)/(4 pi) d Omega, which makes
// sum_i w_i |Omega_i><Omega_i| = I exact on the grid.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qssa/checks.hpp"
#include "qssa/entropy.hpp"
#include "qssa/linalg.hpp"
#include "qssa/randgen.hpp"
#include "qssa/report.hpp"

namespace qssa {

struct SpinJ {
  int two_j = 0;

  explicit SpinJ(int tj) : two_j(tj) {
    if (tj < 0) throw Error("SpinJ: two_j must be nonnegative");
  }
  std::size_t dim() const { return static_cast<std::size_t>(two_j) + 1; }
  double j() const { return 0.5 * two_j; }
  static SpinJ from_dim(std::size_t dim) { return SpinJ(static_cast<int>(dim) - 1); }

  /// Wehrl entropy of any coherent state, 2j / (2j + 1).
  double coherent_wehrl() const { return static_cast<double>(two_j) / (two_j + 1); }
};

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
inline GaussLegendre gauss_legendre(std::size_t n) {
  if (n == 0) throw Error("gauss_legendre: need at least one node");
  if (n == 1) return {{0.0}, {2.0}};
  GaussLegendre gl{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = detail::legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = detail::legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

/// Amplitude on |j, m> (index k = j - m) is
/// sqrt(C(2j, k)) cos^{2j-k}(theta/2) sin^k(theta/2) e^{-i k phi}.
inline Eigen::VectorXcd bloch_state(SpinJ spin, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw Error("bloch_state: theta out of [0, pi]");
  const int n = spin.two_j;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigen::VectorXcd v(n + 1);
  double log_binom = 0.0;  // ln C(n, k)
  for (int k = 0; k <= n; ++k) {
    if (k > 0) log_binom += std::log(static_cast<double>(n - k + 1)) - std::log(static_cast<double>(k));
    const double mag = std::exp(0.5 * log_binom) * std::pow(c, n - k) * std::pow(s, k);
    v[k] = std::polar(mag, -static_cast<double>(k) * phi);
  }
  return v;
}

struct BlochGrid {
  SpinJ spin{0};
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> weights;
  /// Column i is the coherent state at (theta[i], phi[i]).
  ComplexMatrix states;

  std::size_t size() const { return weights.size(); }
};

inline std::size_t default_n_theta(SpinJ s) { return static_cast<std::size_t>(s.two_j) + 4; }
inline std::size_t default_n_phi(SpinJ s) { return 2 * static_cast<std::size_t>(s.two_j) + 4; }

inline BlochGrid make_grid(SpinJ spin, std::size_t n_theta, std::size_t n_phi) {
  if (n_theta < spin.dim()) throw Error("make_grid: need n_theta >= two_j + 1");
  if (n_phi < 2 * spin.dim()) throw Error("make_grid: need n_phi >= 2 two_j + 2");
  const auto gl = gauss_legendre(n_theta);
  BlochGrid g;
  g.spin = spin;
  g.states.resize(static_cast<Eigen::Index>(spin.dim()),
                  static_cast<Eigen::Index>(n_theta * n_phi));
  const double norm = static_cast<double>(spin.dim()) / (2.0 * static_cast<double>(n_phi));
  Eigen::Index col = 0;
  for (std::size_t t = 0; t < n_theta; ++t) {
    const double theta = std::acos(gl.nodes[t]);
    for (std::size_t p = 0; p < n_phi; ++p, ++col) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n_phi);
      g.theta.push_back(theta);
      g.phi.push_back(phi);
      g.weights.push_back(norm * gl.weights[t]);
      g.states.col(col) = bloch_state(spin, theta, phi);
    }
  }
  return g;
}

/// Smallest grid that resolves the identity exactly, with margin.
inline BlochGrid make_grid(SpinJ spin) {
  return make_grid(spin, default_n_theta(spin), default_n_phi(spin));
}

/// Grid used for Wehrl entropy. h ln h is not polynomial, so this is much
/// finer than the identity-resolving grid.
inline std::size_t entropy_n_theta(SpinJ s) { return 96 + 4 * static_cast<std::size_t>(s.two_j); }
inline std::size_t entropy_n_phi(SpinJ s) { return 2 * entropy_n_theta(s); }

inline BlochGrid entropy_grid(SpinJ spin) {
  return make_grid(spin, entropy_n_theta(spin), entropy_n_phi(spin));
}

/// Coarser entropy grid for two-spin states (the product grid is squared).
inline BlochGrid bipartite_entropy_grid(SpinJ spin) {
  const std::size_t nt = 24 + 2 * static_cast<std::size_t>(spin.two_j);
  return make_grid(spin, nt, 2 * nt);
}

/// max-abs entry of sum_i w_i |Omega_i><Omega_i| - I.
inline double resolution_residual(const BlochGrid& g) {
  const auto n = g.states.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < g.states.cols(); ++i)
    acc += g.weights[static_cast<std::size_t>(i)] * g.states.col(i) * g.states.col(i).adjoint();
  return max_abs_diff(acc, ComplexMatrix::Identity(n, n));
}

/// Husimi values on a (product) grid with their quadrature weights.
struct HusimiField {
  std::vector<double> weights;
  std::vector<double> values;

  double mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
    return s;
  }
  double entropy() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += weights[i] * detail::neg_xlogx(values[i], kProbabilityFloor);
    return s;
  }
};

/// h(Omega) = <Omega| rho |Omega> for a single spin.
inline HusimiField husimi(const ComplexMatrix& rho, const BlochGrid& g) {
  if (rho.rows() != g.states.rows()) throw Error("husimi: dimension mismatch");
  const ComplexMatrix rc = rho * g.states;
  const RealVector h = g.states.conjugate().cwiseProduct(rc).colwise().sum().real().transpose();
  return {g.weights, std::vector<double>(h.data(), h.data() + h.size())};
}

/// h(Omega1, Omega2) = <Omega1, Omega2| rho12 |Omega1, Omega2>, row-major in
/// (node of g1, node of g2).
inline HusimiField husimi(const ComplexMatrix& rho12, const BlochGrid& g1, const BlochGrid& g2) {
  const auto d1 = g1.states.rows();
  const auto d2 = g2.states.rows();
  if (rho12.rows() != d1 * d2) throw Error("husimi: dimension mismatch");
  HusimiField f;
  f.weights.reserve(g1.size() * g2.size());
  f.values.reserve(g1.size() * g2.size());
  const ComplexMatrix c2conj = g2.states.conjugate();
  for (Eigen::Index a = 0; a < g1.states.cols(); ++a) {
    const auto c = g1.states.col(a);
    ComplexMatrix m = ComplexMatrix::Zero(d2, d2);
    for (Eigen::Index k = 0; k < d1; ++k)
      for (Eigen::Index kp = 0; kp < d1; ++kp)
        m += std::conj(c[k]) * c[kp] * rho12.block(k * d2, kp * d2, d2, d2);
    const RealVector h = c2conj.cwiseProduct(m * g2.states).colwise().sum().real().transpose();
    const double wa = g1.weights[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < h.size(); ++b) {
      f.weights.push_back(wa * g2.weights[static_cast<std::size_t>(b)]);
      f.values.push_back(h[b]);
    }
  }
  return f;
}

/// -sum w h ln h for a state on one spin factor.
inline EntropyValue wehrl_entropy(const DensityMatrix& rho, const BlochGrid& g) {
  if (rho.dims().factors() != 1 || rho.dim() != g.spin.dim())
    throw Error("wehrl_entropy: state does not match the grid spin");
  return {husimi(rho.mat(), g).entropy(), true};
}

inline EntropyValue wehrl_entropy(const DensityMatrix& rho) {
  return wehrl_entropy(rho, entropy_grid(SpinJ::from_dim(rho.dim())));
}

/// -sum w1 w2 h ln h for a state on two spin factors.
inline EntropyValue wehrl_entropy(const DensityMatrix& rho12, const BlochGrid& g1,
                                  const BlochGrid& g2) {
  if (rho12.dims().factors() != 2 || rho12.dims()[1] != g1.spin.dim() ||
      rho12.dims()[2] != g2.spin.dim())
    throw Error("wehrl_entropy: state does not match the grid spins");
  return {husimi(rho12.mat(), g1, g2).entropy(), true};
}

/// Wehrl mutual information <= quantum mutual information.
inline InequalityReport check_wehrl_mutual_info(const DensityMatrix& rho12, const BlochGrid& g1,
                                                const BlochGrid& g2,
                                                double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho12, 2, "check_wehrl_mutual_info");
  const DensityMatrix rho1 = partial_trace(rho12, {1});
  const DensityMatrix rho2 = partial_trace(rho12, {2});
  const double wehrl_mi =
      wehrl_entropy(rho1, g1) + wehrl_entropy(rho2, g2) - wehrl_entropy(rho12, g1, g2);
  auto r = make_report("wehrl-mutual-info", wehrl_mi, mutual_information(rho12), Relation::le,
                       rel_tol);
  detail::tag(r, rho12);
  return r;
}

inline InequalityReport check_wehrl_mutual_info(const DensityMatrix& rho12,
                                                double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho12, 2, "check_wehrl_mutual_info");
  return check_wehrl_mutual_info(rho12,
                                 bipartite_entropy_grid(SpinJ::from_dim(rho12.dims()[1])),
                                 bipartite_entropy_grid(SpinJ::from_dim(rho12.dims()[2])),
                                 rel_tol);
}

/// Convexity of rho -> S^W[rho] - S[rho] on one spin.
inline InequalityReport check_wehrl_convexity(const DensityMatrix& a, const DensityMatrix& b,
                                              const BlochGrid& g,
                                              std::span<const double> lambdas = kDefaultLambdas,
                                              double rel_tol = kDefaultRelTol) {
  return check_convexity_of(
      "wehrl-convexity", a, b, lambdas,
      [&](const DensityMatrix& rho) { return wehrl_entropy(rho, g).nats - von_neumann(rho).nats; },
      rel_tol);
}

inline InequalityReport check_wehrl_convexity(const DensityMatrix& a, const DensityMatrix& b,
                                              std::span<const double> lambdas = kDefaultLambdas,
                                              double rel_tol = kDefaultRelTol) {
  return check_wehrl_convexity(a, b, entropy_grid(SpinJ::from_dim(a.dim())), lambdas, rel_tol);
}

struct WehrlScanRow {
  std::size_t trial;
  std::uint64_t seed;
  int two_j;
  double wehrl;
  double entropy;
  double diff;  // S^W - S
};

struct WehrlScan {
  std::vector<WehrlScanRow> rows;
  double min_wehrl = 0.0;
  double coherent_value = 0.0;
  /// min_wehrl - coherent_value; nonnegative when coherent states minimise S^W.
  double margin = 0.0;
  double resolution_residual = 0.0;
};

/// S^W over seeded random pure states. Exploratory: no assertion is made
/// about the minimum.
inline WehrlScan wehrl_min_scan(SpinJ spin, std::size_t trials, Seed seed) {
  if (trials < 1) throw Error("wehrl_min_scan: need at least one trial");
  const BlochGrid g = entropy_grid(spin);
  WehrlScan scan;
  scan.coherent_value = spin.coherent_wehrl();
  scan.resolution_residual = resolution_residual(make_grid(spin));
  scan.min_wehrl = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const Seed s = seed.derive(t);
    const DensityMatrix rho = random_density(HilbertDims{spin.dim()}, 1, s);
    const double sw = wehrl_entropy(rho, g);
    const double sv = von_neumann(rho);
    scan.rows.push_back({t, s.value, spin.two_j, sw, sv, sw - sv});
    scan.min_wehrl = std::min(scan.min_wehrl, sw);
  }
  scan.margin = scan.min_wehrl - scan.coherent_value;
  return scan;
}

}  // namespace qssa
