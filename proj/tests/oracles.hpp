#pragma once

// Brute-force reference implementations used only by the tests. These are
// written as direct index sums and stay independent of the library paths
// they check.

#include <cmath>
#include <vector>

#include "qssa/linalg.hpp"

namespace qssa::oracle {

/// (A (x) B)[(i p + k), (j q + l)] = A[i, j] B[k, l].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto p = b.rows(), q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < p; ++k)
        for (Eigen::Index l = 0; l < q; ++l) out(i * p + k, j * q + l) = a(i, j) * b(k, l);
  return out;
}

/// Explicit triple-index partial traces of a tripartite matrix.
struct Tripartite {
  const ComplexMatrix& m;
  std::size_t d1, d2, d3;

  Complex at(std::size_t i, std::size_t j, std::size_t k, std::size_t ip, std::size_t jp,
             std::size_t kp) const {
    return m(static_cast<Eigen::Index>((i * d2 + j) * d3 + k),
             static_cast<Eigen::Index>((ip * d2 + jp) * d3 + kp));
  }

  ComplexMatrix keep13() const {
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d1 * d3),
                                            static_cast<Eigen::Index>(d1 * d3));
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t k = 0; k < d3; ++k)
        for (std::size_t ip = 0; ip < d1; ++ip)
          for (std::size_t kp = 0; kp < d3; ++kp)
            for (std::size_t j = 0; j < d2; ++j)
              out(static_cast<Eigen::Index>(i * d3 + k), static_cast<Eigen::Index>(ip * d3 + kp)) +=
                  at(i, j, k, ip, j, kp);
    return out;
  }

  ComplexMatrix keep2() const {
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2));
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t jp = 0; jp < d2; ++jp)
        for (std::size_t i = 0; i < d1; ++i)
          for (std::size_t k = 0; k < d3; ++k)
            out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(jp)) += at(i, j, k, i, jp, k);
    return out;
  }

  ComplexMatrix keep23() const {
    ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(d2 * d3),
                                            static_cast<Eigen::Index>(d2 * d3));
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t k = 0; k < d3; ++k)
        for (std::size_t jp = 0; jp < d2; ++jp)
          for (std::size_t kp = 0; kp < d3; ++kp)
            for (std::size_t i = 0; i < d1; ++i)
              out(static_cast<Eigen::Index>(j * d3 + k), static_cast<Eigen::Index>(jp * d3 + kp)) +=
                  at(i, j, k, i, jp, kp);
    return out;
  }
};

/// r(a, b) = sum_{ijkl} P[i,k] Q[j,l] rho[(k,l),(i,j)], flattened as a * |Q| + b.
inline std::vector<double> outcome_table(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& p,
                                         const std::vector<ComplexMatrix>& q) {
  const auto d1 = p.front().rows(), d2 = q.front().rows();
  std::vector<double> out;
  for (const auto& pa : p)
    for (const auto& qb : q) {
      Complex r{0.0, 0.0};
      for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index j = 0; j < d2; ++j)
          for (Eigen::Index k = 0; k < d1; ++k)
            for (Eigen::Index l = 0; l < d2; ++l) r += pa(i, k) * qb(j, l) * rho(k * d2 + l, i * d2 + j);
      out.push_back(r.real());
    }
  return out;
}

/// S^cl as -sum r ln r over the outcome table.
inline double classical_entropy(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& p,
                                const std::vector<ComplexMatrix>& q) {
  double s = 0.0;
  for (double x : outcome_table(rho, p, q))
    if (x > 1e-15) s -= x * std::log(x);
  return s;
}

/// -sum p ln p.
inline double shannon(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

}  // namespace qssa::oracle
