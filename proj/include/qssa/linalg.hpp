#pragma once

// Dense complex linear algebra on finite tensor-product Hilbert spaces.
//
// Tensor factors are labelled 1..N (factor 1 is the most significant digit of
// the row/column index), matching the way states like rho_123 are written.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qssa {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest Hermitian asymmetry (max-abs entry of M - M^dagger) tolerated
/// before an operation refuses its input.
inline constexpr double kHermitianTol = 1e-8;

/// Relative eigenvalue floor for logarithms: eigenvalues below
/// kClampRel * max(1, lambda_max) are treated as zero in x ln x sums and as
/// the floor itself in ln(.).
inline constexpr double kClampRel = 1e-12;

inline double clamp_threshold(double lambda_max) {
  return kClampRel * std::max(1.0, lambda_max);
}

class HilbertDims {
 public:
  HilbertDims() : dims_{1} {}
  HilbertDims(std::initializer_list<std::size_t> dims)
      : HilbertDims(std::vector<std::size_t>(dims)) {}
  explicit HilbertDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw Error("HilbertDims: need at least one factor");
    for (auto d : dims_)
      if (d == 0) throw Error("HilbertDims: factor dimension must be >= 1");
  }

  std::size_t factors() const { return dims_.size(); }
  /// Dimension of factor `label` (1-based).
  std::size_t operator[](std::size_t label) const { return dims_.at(label - 1); }
  const std::vector<std::size_t>& list() const { return dims_; }

  std::size_t total() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                           std::multiplies<>());
  }

  /// Sub-dims of the given labels, in the given order.
  HilbertDims select(const std::vector<std::size_t>& labels) const {
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (auto l : labels) out.push_back((*this)[l]);
    return HilbertDims(std::move(out));
  }

  friend bool operator==(const HilbertDims&, const HilbertDims&) = default;

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(dims_[i]);
    }
    return s;
  }

 private:
  std::vector<std::size_t> dims_;
};

/// Max-abs entry of M - M^dagger.
inline double hermitian_asymmetry(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// (M + M^dagger)/2; throws when the asymmetry exceeds kHermitianTol.
inline ComplexMatrix hermitize(const ComplexMatrix& m, double* asymmetry = nullptr) {
  if (m.rows() != m.cols()) throw Error("hermitize: matrix is not square");
  const double asym = hermitian_asymmetry(m);
  if (asymmetry) *asymmetry = asym;
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (asym > kHermitianTol * scale)
    throw Error("hermitize: asymmetry " + std::to_string(asym) + " exceeds tolerance");
  return (m + m.adjoint()) * 0.5;
}

struct Eigensystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns
};

inline Eigensystem hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error("hermitian_eig: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error("hermitian_eigenvalues: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian_eigenvalues: eigensolver did not converge");
  return solver.eigenvalues();
}

/// V f(Lambda) V^dagger for Hermitian m.
template <typename F>
ComplexMatrix matrix_fn(const ComplexMatrix& m, F&& f) {
  const auto es = hermitian_eig(m);
  RealVector fv(es.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv[i] = f(es.values[i]);
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

enum class LogClamp { on, off };

/// Matrix logarithm of a positive semi-definite matrix. With clamping on,
/// eigenvalues below the clamp threshold are raised to it; with clamping off
/// they are an error.
inline ComplexMatrix matrix_log(const ComplexMatrix& m, LogClamp clamp = LogClamp::off) {
  const auto es = hermitian_eig(m);
  const double floor = clamp_threshold(es.values.size() ? es.values.maxCoeff() : 0.0);
  RealVector fv(es.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    double v = es.values[i];
    if (v < floor) {
      if (clamp == LogClamp::off)
        throw Error("matrix_log: eigenvalue " + std::to_string(v) + " below clamp threshold");
      v = floor;
    }
    fv[i] = std::log(v);
  }
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

inline ComplexMatrix matrix_exp(const ComplexMatrix& m) {
  return matrix_fn(m, [](double x) { return std::exp(x); });
}

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace detail {

// Offsets into the full index contributed by each combined multi-index over
// `labels` (row-major over those factors).
inline std::vector<std::size_t> factor_offsets(const HilbertDims& dims,
                                               const std::vector<std::size_t>& labels) {
  const std::size_t n = dims.factors();
  std::vector<std::size_t> stride(n + 1, 1);
  for (std::size_t f = n; f-- > 0;) stride[f] = stride[f + 1] * dims.list()[f];

  std::vector<std::size_t> offsets{0};
  for (auto l : labels) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[l]);
    for (auto base : offsets)
      for (std::size_t k = 0; k < dims[l]; ++k) next.push_back(base + k * stride[l]);
    offsets = std::move(next);
  }
  return offsets;
}

inline std::vector<std::size_t> validate_keep(const HilbertDims& dims,
                                              std::vector<std::size_t> keep) {
  if (keep.empty()) throw Error("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto l : keep)
    if (l < 1 || l > dims.factors())
      throw Error("partial_trace: factor index " + std::to_string(l) + " out of range");
  return keep;
}

}  // namespace detail

/// Trace out every factor not in `keep` (1-based labels). Kept factors retain
/// their original relative order.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, const HilbertDims& dims,
                                   std::vector<std::size_t> keep) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != dims.total())
    throw Error("partial_trace: matrix does not match dims " + dims.to_string());
  keep = detail::validate_keep(dims, std::move(keep));

  std::vector<std::size_t> traced;
  for (std::size_t l = 1; l <= dims.factors(); ++l)
    if (!std::binary_search(keep.begin(), keep.end(), l)) traced.push_back(l);

  const auto kept_off = detail::factor_offsets(dims, keep);
  const auto traced_off = detail::factor_offsets(dims, traced);
  const auto n = static_cast<Eigen::Index>(kept_off.size());

  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      for (auto t : traced_off)
        acc += m(static_cast<Eigen::Index>(kept_off[r] + t),
                 static_cast<Eigen::Index>(kept_off[c] + t));
      out(r, c) = acc;
    }
  return out;
}

struct DensityOptions {
  double trace_tol = 1e-10;
  double psd_tol = 1e-10;
  /// Accept any positive trace (homogeneous checks scale with Tr rho).
  bool unnormalized = false;
};

/// Positive semi-definite, Hermitian matrix tagged with its tensor factor
/// dims. Construction hermitizes, validates, and caches the spectrum.
class DensityMatrix {
 public:
  DensityMatrix(const ComplexMatrix& m, HilbertDims dims, DensityOptions opts = {})
      : dims_(std::move(dims)), opts_(opts) {
    if (m.rows() != m.cols()) throw Error("DensityMatrix: matrix is not square");
    if (static_cast<std::size_t>(m.rows()) != dims_.total())
      throw Error("DensityMatrix: size " + std::to_string(m.rows()) +
                  " does not match dims " + dims_.to_string());
    mat_ = hermitize(m, &asymmetry_);
    spectrum_ = hermitian_eigenvalues(mat_);
    const double tr = mat_.trace().real();
    if (opts_.unnormalized) {
      if (!(tr > 0.0)) throw Error("DensityMatrix: trace must be positive");
    } else if (std::abs(tr - 1.0) > opts_.trace_tol) {
      throw Error("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }
    if (spectrum_.size() && spectrum_[0] < -opts_.psd_tol * std::max(1.0, tr))
      throw Error("DensityMatrix: negative eigenvalue " + std::to_string(spectrum_[0]));
  }

  DensityMatrix(const ComplexMatrix& m, std::size_t dim, DensityOptions opts = {})
      : DensityMatrix(m, HilbertDims{dim}, opts) {}

  const ComplexMatrix& mat() const { return mat_; }
  const HilbertDims& dims() const { return dims_; }
  const RealVector& spectrum() const { return spectrum_; }
  double trace() const { return mat_.trace().real(); }
  double asymmetry() const { return asymmetry_; }
  const DensityOptions& options() const { return opts_; }
  std::size_t dim() const { return dims_.total(); }

  /// Same matrix, reinterpreted with a different factorisation of the same
  /// total dimension.
  DensityMatrix with_dims(HilbertDims dims) const {
    if (dims.total() != dims_.total()) throw Error("with_dims: total dimension mismatch");
    DensityMatrix out = *this;
    out.dims_ = std::move(dims);
    return out;
  }

 private:
  ComplexMatrix mat_;
  HilbertDims dims_;
  DensityOptions opts_;
  RealVector spectrum_;
  double asymmetry_ = 0.0;
};

/// Reduced state on the kept factors; trace is preserved.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
  keep = detail::validate_keep(rho.dims(), std::move(keep));
  DensityOptions opts = rho.options();
  opts.unnormalized = opts.unnormalized || std::abs(rho.trace() - 1.0) > opts.trace_tol;
  return DensityMatrix(partial_trace(rho.mat(), rho.dims(), keep), rho.dims().select(keep), opts);
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<std::size_t> dims = a.dims().list();
  dims.insert(dims.end(), b.dims().list().begin(), b.dims().list().end());
  DensityOptions opts;
  opts.unnormalized = a.options().unnormalized || b.options().unnormalized;
  return DensityMatrix(kron(a.mat(), b.mat()), HilbertDims(std::move(dims)), opts);
}

/// lambda*a + (1-lambda)*b.
inline DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double lambda) {
  if (a.dims() != b.dims()) throw Error("mix: dimension mismatch");
  return DensityMatrix(lambda * a.mat() + (1.0 - lambda) * b.mat(), a.dims(), a.options());
}

inline DensityMatrix maximally_mixed(const HilbertDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dims);
}

/// |psi><psi| for a unit vector psi.
inline DensityMatrix pure_state(const Eigen::VectorXcd& psi, HilbertDims dims) {
  return DensityMatrix(psi * psi.adjoint(), std::move(dims));
}

inline Eigen::VectorXcd basis_vector(std::size_t dim, std::size_t k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(k)] = 1.0;
  return v;
}

/// 1/2 sum |eig(a - b)|.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims() != b.dims()) throw Error("trace_distance: dimension mismatch");
  return 0.5 * hermitian_eigenvalues(a.mat() - b.mat()).cwiseAbs().sum();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("max_abs_diff: shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qssa
