#pragma once

// Entropy inequalities, equality cases and convexity statements, each
// evaluated on a concrete instance and returned as an InequalityReport.

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "qssa/entropy.hpp"
#include "qssa/linalg.hpp"
#include "qssa/measurement.hpp"
#include "qssa/operators.hpp"
#include "qssa/randgen.hpp"
#include "qssa/report.hpp"

namespace qssa {

inline const std::vector<double> kDefaultLambdas{0.25, 0.5, 0.75};

struct ReportPair {
  InequalityReport left;
  InequalityReport right;
};

namespace detail {

inline void require_factors(const DensityMatrix& rho, std::size_t n, const char* what) {
  if (rho.dims().factors() != n)
    throw Error(std::string(what) + ": need exactly " + std::to_string(n) + " factors");
}

inline void tag(InequalityReport& r, const DensityMatrix& rho) { r.dims = rho.dims().list(); }

// Sum of n^a (S[rho23^a] - S[rho2^a]) over an ensemble.
inline double conditional_average(const MeasurementEnsemble& ens) {
  double s = 0.0;
  for (const auto& e : ens.entries) s += e.weight * (von_neumann(e.rho23) - von_neumann(e.rho2));
  return s;
}

inline void tag_ensemble(InequalityReport& r, const MeasurementEnsemble& ens, std::size_t ops) {
  r.meta["kraus_count"] = static_cast<std::int64_t>(ops);
  r.meta["completeness_residual"] = ens.completeness_residual;
  r.meta["skipped_terms"] = static_cast<std::int64_t>(ens.skipped);
  r.meta["skipped_mass"] = ens.skipped_mass;
}

// Bipartite rho12 viewed as a tripartite state with trivial third factor.
inline DensityMatrix lift_bipartite(const DensityMatrix& rho12) {
  return rho12.with_dims(HilbertDims{rho12.dims()[1], rho12.dims()[2], 1});
}

}  // namespace detail

/// S123 - S12 <= S23 - S2.
inline InequalityReport check_ssa(const DensityMatrix& rho123, double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho123, 3, "check_ssa");
  const double s123 = von_neumann(rho123);
  const double s12 = von_neumann(partial_trace(rho123, {1, 2}));
  const double s23 = von_neumann(partial_trace(rho123, {2, 3}));
  const double s2 = von_neumann(partial_trace(rho123, {2}));
  auto r = make_report("ssa", s123 - s12, s23 - s2, Relation::le, rel_tol);
  detail::tag(r, rho123);
  return r;
}

/// S123 - S12 <= sum_a n^a (S[rho23^a] - S[rho2^a]) for a complete Kraus set.
inline InequalityReport check_stronger_ssa(const DensityMatrix& rho123, const KrausSet& k,
                                           double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho123, 3, "check_stronger_ssa");
  const auto ens = measurement_ensemble(rho123, k);
  const double lhs = von_neumann(rho123) - von_neumann(partial_trace(rho123, {1, 2}));
  auto r = make_report("stronger-ssa", lhs, detail::conditional_average(ens), Relation::le,
                       rel_tol);
  detail::tag(r, rho123);
  detail::tag_ensemble(r, ens, k.size());
  return r;
}

/// The chain S123 - S12 <= middle <= S23 - S2 for a Kraus set on factor 1.
inline ReportPair check_sandwich(const DensityMatrix& rho123, const KrausSet& k,
                                 double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho123, 3, "check_sandwich");
  if (k.acts_on != std::vector<std::size_t>{1})
    throw Error("check_sandwich: Kraus set must act on factor 1 only");
  const auto ens = measurement_ensemble(rho123, k);
  const double lhs = von_neumann(rho123) - von_neumann(partial_trace(rho123, {1, 2}));
  const double middle = detail::conditional_average(ens);
  const double rhs =
      von_neumann(partial_trace(rho123, {2, 3})) - von_neumann(partial_trace(rho123, {2}));
  ReportPair out{make_report("sandwich-left", lhs, middle, Relation::le, rel_tol),
                 make_report("sandwich-right", middle, rhs, Relation::le, rel_tol)};
  for (auto* r : {&out.left, &out.right}) {
    detail::tag(*r, rho123);
    detail::tag_ensemble(*r, ens, k.size());
  }
  return out;
}

/// (L, {K^a}, {A^a}) for the map (A^1..A^M) -> Tr exp(L + sum K^a* ln(A^a) K^a).
/// The Kraus set may be sub-complete: I - sum K^a* K^a >= 0.
struct ConcavityInstance {
  ComplexMatrix l_op;
  KrausSet kraus;
  std::vector<ComplexMatrix> a_ops;

  void validate() const {
    const auto n = l_op.rows();
    if (l_op.cols() != n) throw Error("ConcavityInstance: L is not square");
    hermitize(l_op);
    if (a_ops.size() != kraus.size())
      throw Error("ConcavityInstance: need one A per Kraus operator");
    if (static_cast<Eigen::Index>(kraus.dim()) != n)
      throw Error("ConcavityInstance: Kraus dimension mismatch");
    const RealVector gap =
        hermitian_eigenvalues(ComplexMatrix::Identity(n, n) - kraus.gram());
    if (gap[0] < -kraus.tol) throw Error("ConcavityInstance: sum K*K exceeds the identity");
    for (const auto& a : a_ops) {
      if (a.rows() != n || a.cols() != n) throw Error("ConcavityInstance: A dimension mismatch");
      if (!(hermitian_eigenvalues(a)[0] > 0.0))
        throw Error("ConcavityInstance: A is not positive definite");
    }
  }
};

/// Tr exp(L + sum_a K^a* (ln A^a) K^a).
inline double trace_exp_map(const ConcavityInstance& inst) {
  inst.validate();
  ComplexMatrix exponent = hermitize(inst.l_op);
  for (std::size_t a = 0; a < inst.a_ops.size(); ++a) {
    const auto& k = inst.kraus.ops[a];
    exponent += k.adjoint() * matrix_log(inst.a_ops[a]) * k;
  }
  const RealVector ev = hermitian_eigenvalues(exponent);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += std::exp(ev[i]);
  return s;
}

/// Pair of instances sharing L and the Kraus set. A^a has spectrum in
/// [0.1, 10]; the Kraus set is a Haar isometry scaled by sqrt(c), c in [0.5, 1].
inline std::pair<ConcavityInstance, ConcavityInstance> random_concavity_pair(std::size_t dim,
                                                                             std::size_t m,
                                                                             Seed seed) {
  Rng rng(seed.derive(0));
  const double scale = std::sqrt(0.5 + 0.5 * rng.uniform());
  KrausSet k = random_kraus(dim, m, seed.derive(1), {1});
  for (auto& op : k.ops) op *= scale;
  const ComplexMatrix l = 0.5 * random_hermitian(dim, seed.derive(2));

  std::uint64_t stream = 3;
  auto draw = [&] {
    std::vector<ComplexMatrix> as;
    for (std::size_t a = 0; a < m; ++a) {
      const ComplexMatrix u = random_unitary(dim, seed.derive(stream++));
      RealVector spectrum(static_cast<Eigen::Index>(dim));
      Rng srng(seed.derive(stream++));
      for (Eigen::Index i = 0; i < spectrum.size(); ++i) spectrum[i] = 0.1 + 9.9 * srng.uniform();
      as.push_back(u * spectrum.asDiagonal() * u.adjoint());
    }
    return as;
  };
  ConcavityInstance a{l, k, draw()};
  ConcavityInstance b{l, k, draw()};
  return {std::move(a), std::move(b)};
}

/// Joint concavity of the trace-exp map along the segment between two
/// instances. Reports the smallest F(mix) - [lambda F(A) + (1 - lambda) F(B)].
inline InequalityReport check_concave_map(const ConcavityInstance& a, const ConcavityInstance& b,
                                          std::span<const double> lambdas = kDefaultLambdas,
                                          double rel_tol = kDefaultRelTol) {
  if (a.a_ops.size() != b.a_ops.size() || a.kraus.size() != b.kraus.size() ||
      a.l_op.rows() != b.l_op.rows())
    throw Error("check_concave_map: instances do not align");
  if (max_abs_diff(a.l_op, b.l_op) > 0.0) throw Error("check_concave_map: L differs");
  for (std::size_t i = 0; i < a.kraus.size(); ++i)
    if (max_abs_diff(a.kraus.ops[i], b.kraus.ops[i]) > 0.0)
      throw Error("check_concave_map: Kraus sets differ");
  if (lambdas.empty()) throw Error("check_concave_map: no lambdas");

  const double fa = trace_exp_map(a);
  const double fb = trace_exp_map(b);
  double best = std::numeric_limits<double>::infinity();
  double best_lhs = 0.0, best_rhs = 0.0, best_lambda = 0.0;
  for (double lambda : lambdas) {
    ConcavityInstance m = a;
    for (std::size_t i = 0; i < m.a_ops.size(); ++i)
      m.a_ops[i] = lambda * a.a_ops[i] + (1.0 - lambda) * b.a_ops[i];
    const double chord = lambda * fa + (1.0 - lambda) * fb;
    const double value = trace_exp_map(m);
    if (value - chord < best) {
      best = value - chord;
      best_lhs = chord;
      best_rhs = value;
      best_lambda = lambda;
    }
  }
  auto r = make_report("concavity", best_lhs, best_rhs, Relation::le, rel_tol);
  r.dims = {static_cast<std::size_t>(a.l_op.rows())};
  r.meta["lambda"] = best_lambda;
  r.meta["M"] = static_cast<std::int64_t>(a.a_ops.size());
  return r;
}

/// S[rho] + Tr rho H <= ln Tr e^H.
inline InequalityReport check_gibbs_variational(const DensityMatrix& rho, const ComplexMatrix& h,
                                                double rel_tol = kDefaultRelTol) {
  if (h.rows() != h.cols() || static_cast<std::size_t>(h.rows()) != rho.dim())
    throw Error("check_gibbs_variational: dimension mismatch");
  const ComplexMatrix hh = hermitize(h);
  const RealVector ev = hermitian_eigenvalues(hh);
  const double top = ev.maxCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) z += std::exp(ev[i] - top);
  const double energy = hh.transpose().cwiseProduct(rho.mat()).sum().real();
  auto r = make_report("gibbs", von_neumann(rho) + energy, top + std::log(z), Relation::le,
                       rel_tol);
  detail::tag(r, rho);
  return r;
}

/// H(rho123, rho12 (x) rho3) >= H(Phi(rho123), Phi(rho12 (x) rho3)); `meta`
/// carries the residual of rhs against sum_a n^a (S[rho2^a] - S[rho23^a] + S3).
inline InequalityReport check_cpt_monotonicity(const DensityMatrix& rho123, const KrausSet& k,
                                               double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho123, 3, "check_cpt_monotonicity");
  const DensityMatrix rho12 = partial_trace(rho123, {1, 2});
  const DensityMatrix rho3 = partial_trace(rho123, {3});
  const DensityMatrix product = tensor(rho12, rho3);

  const auto lhs = relative_entropy(rho123, product);
  const auto rhs = relative_entropy(cpt_phi(rho123, k), cpt_phi(product, k));
  auto r = make_report("cpt", lhs.nats, rhs.nats, Relation::ge, rel_tol);
  detail::tag(r, rho123);

  const auto ens = measurement_ensemble(rho123, k);
  detail::tag_ensemble(r, ens, k.size());
  if (r.status == Status::ok) {
    const double s3 = von_neumann(rho3);
    double identity = 0.0;
    for (const auto& e : ens.entries)
      identity += e.weight * (von_neumann(e.rho2) - von_neumann(e.rho23) + s3);
    r.meta["identity_value"] = identity;
    r.meta["identity_residual"] = std::abs(rhs.nats - identity);
  }
  return r;
}

/// S12 <= S1 + sum_a n^a S[rho2^a] <= S1 + S2 for a POVM on factor 1.
inline ReportPair check_improved_subadd(const DensityMatrix& rho12, const Povm& p,
                                        double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho12, 2, "check_improved_subadd");
  if (p.dim() != rho12.dims()[1]) throw Error("check_improved_subadd: POVM dimension mismatch");
  const auto ens = measurement_ensemble(detail::lift_bipartite(rho12), povm_to_kraus(p, {1}));
  const double s1 = von_neumann(partial_trace(rho12, {1}));
  const double s2 = von_neumann(partial_trace(rho12, {2}));
  double middle = s1;
  for (const auto& e : ens.entries) middle += e.weight * von_neumann(e.rho23);
  ReportPair out{make_report("improved-subadd-left", von_neumann(rho12), middle, Relation::le,
                             rel_tol),
                 make_report("improved-subadd-right", middle, s1 + s2, Relation::le, rel_tol)};
  for (auto* r : {&out.left, &out.right}) {
    detail::tag(*r, rho12);
    detail::tag_ensemble(*r, ens, p.size());
  }
  return out;
}

struct TwoSidedCounterexample {
  double lhs;  // S[rho12] = ln d
  double rhs;  // sum_a n^a (S[rho1^a] + S[rho2^a]) = 0
};

/// rho12 = d^{-1} sum_a Pi^a (x) Pi^a split on both sides by P^a = Pi^a: the
/// two-sided analogue of improved subadditivity fails by ln d.
inline TwoSidedCounterexample counterexample_two_sided(std::size_t d) {
  if (d < 2) throw Error("counterexample_two_sided: need d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) m(a * n + a, a * n + a) = 1.0 / static_cast<double>(d);
  const DensityMatrix rho12(m, HilbertDims{d, d});
  const Povm pi = basis_povm(d);

  const double lhs = von_neumann(rho12);
  double rhs = 0.0;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (const auto& proj : pi.elements) {
    const ComplexMatrix on1 = kron(proj, id) * rho12.mat();  // split factor 1
    const ComplexMatrix on2 = kron(id, proj) * rho12.mat();  // split factor 2
    const double weight = on1.trace().real();
    if (weight < kWeightThreshold) continue;
    const ComplexMatrix rho2 = partial_trace(on1, rho12.dims(), {2}) / weight;
    const ComplexMatrix rho1 = partial_trace(on2, rho12.dims(), {1}) / weight;
    rhs += weight * (von_neumann(DensityMatrix(rho1, d)) + von_neumann(DensityMatrix(rho2, d)));
  }
  return {lhs, rhs};
}

/// Quantum mutual information >= classical mutual information of the outcome
/// table r(a, b) = Tr (P^a (x) Q^b) rho12.
inline InequalityReport check_classical_mutual_info(const DensityMatrix& rho12, const Povm& p,
                                                    const Povm& q,
                                                    double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho12, 2, "check_classical_mutual_info");
  const DensityMatrix rho1 = partial_trace(rho12, {1});
  const DensityMatrix rho2 = partial_trace(rho12, {2});
  const auto joint = outcome_distribution(rho12, p, q);
  const auto r1 = outcome_distribution(rho1.mat(), p);
  const auto r2 = outcome_distribution(rho2.mat(), q);

  double marginal_residual = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < q.size(); ++b) s += joint[a * q.size() + b];
    marginal_residual = std::max(marginal_residual, std::abs(s - r1[a]));
  }
  for (std::size_t b = 0; b < q.size(); ++b) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) s += joint[a * q.size() + b];
    marginal_residual = std::max(marginal_residual, std::abs(s - r2[b]));
  }

  const double classical = shannon(r1) + shannon(r2) - shannon(joint);
  auto r = make_report("mutual-info", mutual_information(rho12), classical, Relation::ge,
                       rel_tol);
  detail::tag(r, rho12);
  r.meta["marginal_residual"] = marginal_residual;
  return r;
}

/// S12 - S1 - S2 <= S^{cl,Q}[rho12] - S^cl[rho1] - S2
///               <= S^cl[rho12] - S^cl[rho1] - S^cl[rho2].
inline ReportPair check_cq_chain(const DensityMatrix& rho12, const Povm& p, const Povm& q,
                                 double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho12, 2, "check_cq_chain");
  const DensityMatrix rho1 = partial_trace(rho12, {1});
  const DensityMatrix rho2 = partial_trace(rho12, {2});
  const double s2 = von_neumann(rho2);
  const double scl1 = classical_entropy(rho1, p);
  const double quantum = von_neumann(rho12) - von_neumann(rho1) - s2;
  const double hybrid = classical_quantum_entropy(rho12, p) - scl1 - s2;
  const double classical = classical_entropy(rho12, p, q) - scl1 - classical_entropy(rho2, q);
  ReportPair out{make_report("cq-chain-left", quantum, hybrid, Relation::le, rel_tol),
                 make_report("cq-chain-right", hybrid, classical, Relation::le, rel_tol)};
  detail::tag(out.left, rho12);
  detail::tag(out.right, rho12);
  return out;
}

/// S123 - S12 <= S^{cl,Q,Q}[rho123] - S^{cl,Q}[rho12] for a POVM on factor 1,
/// evaluated from the blocks Tr_1 P^a rho directly.
inline InequalityReport check_cqq(const DensityMatrix& rho123, const Povm& p,
                                  double rel_tol = kDefaultRelTol) {
  detail::require_factors(rho123, 3, "check_cqq");
  const auto& dims = rho123.dims();
  if (p.dim() != dims[1]) throw Error("check_cqq: POVM dimension mismatch");
  const DensityMatrix rho12 = partial_trace(rho123, {1, 2});
  const double lhs = von_neumann(rho123) - von_neumann(rho12);
  const double sclqq =
      classical_quantum_entropy(rho123.with_dims(HilbertDims{dims[1], dims[2] * dims[3]}), p);
  const double sclq = classical_quantum_entropy(rho12, p);
  auto r = make_report("cqq", lhs, sclqq - sclq, Relation::le, rel_tol);
  detail::tag(r, rho123);
  return r;
}

/// Convexity of G along a segment: smallest lambda G(A) + (1-lambda) G(B) - G(mix).
template <typename G>
InequalityReport check_convexity_of(std::string name, const DensityMatrix& a,
                                    const DensityMatrix& b, std::span<const double> lambdas,
                                    G&& g, double rel_tol) {
  if (a.dims() != b.dims()) throw Error(name + ": dimension mismatch");
  if (lambdas.empty()) throw Error(name + ": no lambdas");
  const double ga = g(a);
  const double gb = g(b);
  double best = std::numeric_limits<double>::infinity();
  double best_lhs = 0.0, best_rhs = 0.0, best_lambda = 0.0;
  for (double lambda : lambdas) {
    const double value = g(mix(a, b, lambda));
    const double chord = lambda * ga + (1.0 - lambda) * gb;
    if (chord - value < best) {
      best = chord - value;
      best_lhs = value;
      best_rhs = chord;
      best_lambda = lambda;
    }
  }
  auto r = make_report(std::move(name), best_lhs, best_rhs, Relation::le, rel_tol);
  detail::tag(r, a);
  r.meta["lambda"] = best_lambda;
  return r;
}

/// Convexity of rho12 -> S^{cl,Q}[rho12] - S[rho12].
inline InequalityReport check_convexity_cl_minus_q(const DensityMatrix& a12,
                                                   const DensityMatrix& b12, const Povm& p,
                                                   std::span<const double> lambdas = kDefaultLambdas,
                                                   double rel_tol = kDefaultRelTol) {
  detail::require_factors(a12, 2, "check_convexity_cl_minus_q");
  return check_convexity_of(
      "convexity", a12, b12, lambdas,
      [&](const DensityMatrix& rho) {
        return classical_quantum_entropy(rho, p).nats - von_neumann(rho).nats;
      },
      rel_tol);
}

/// I(preparation; outcome) <= chi = S[sum w_i rho_i] - sum w_i S[rho_i].
inline InequalityReport check_holevo(std::span<const double> weights,
                                     std::span<const DensityMatrix> states, const Povm& q,
                                     double rel_tol = kDefaultRelTol) {
  if (weights.size() != states.size() || states.empty())
    throw Error("check_holevo: need one weight per state");
  const auto& dims = states.front().dims();
  ComplexMatrix avg = ComplexMatrix::Zero(static_cast<Eigen::Index>(dims.total()),
                                          static_cast<Eigen::Index>(dims.total()));
  double mean_entropy = 0.0;
  std::vector<double> joint;
  std::vector<double> outcome(q.size(), 0.0);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dims() != dims) throw Error("check_holevo: dimension mismatch");
    avg += weights[i] * states[i].mat();
    mean_entropy += weights[i] * von_neumann(states[i]);
    const auto r = outcome_distribution(states[i].mat(), q);
    for (std::size_t b = 0; b < r.size(); ++b) {
      joint.push_back(weights[i] * r[b]);
      outcome[b] += weights[i] * r[b];
    }
  }
  const double accessible = shannon(weights) + shannon(outcome) - shannon(joint);
  const double chi = von_neumann(DensityMatrix(avg, dims)) - mean_entropy;
  auto r = make_report("holevo", accessible, chi, Relation::le, rel_tol);
  r.dims = dims.list();
  r.meta["ensemble_size"] = static_cast<std::int64_t>(states.size());
  return r;
}

}  // namespace qssa
