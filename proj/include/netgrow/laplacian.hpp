#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "netgrow/error.hpp"
#include "netgrow/graph.hpp"

namespace netgrow {

/// Laplacian eigenpairs; values ascending with values[0] forced to exactly 0.
/// Internally index 0 holds the kernel eigenvalue, so the 1-based λ_k lives at values[k-1].
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  double algebraic_connectivity() const { return values(1); }
  /// λ_2 … λ_n as a contiguous copy.
  Eigen::VectorXd nonzero() const { return values.tail(values.size() - 1); }
};

/// Effective resistances of one edge in L, L², L³.
struct EdgeResistanceView {
  Edge edge;
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

/// Zero threshold for the kernel eigenvalue: n · ε · λ_max.
inline double connectivity_tolerance(std::size_t n, double lambda_max) {
  return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lambda_max;
}

/// Dense eigendecomposition of a Laplacian. Throws not_connected when λ_2 ≤ τ_conn.
inline Spectrum compute_spectrum(const Eigen::MatrixXd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw error(errc::invalid_parameter, "symmetric eigensolver did not converge");
  }
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  const auto n = static_cast<std::size_t>(L.rows());
  const double tol = connectivity_tolerance(n, s.values(s.values.size() - 1));
  if (!(s.values(1) > tol)) {
    throw error(errc::not_connected, "λ_2 = " + std::to_string(s.values(1)) +
                                         " is below the connectivity tolerance");
  }
  s.values(0) = 0.0;
  return s;
}

/// Eigenvalues only; same connectivity rule as compute_spectrum.
inline Eigen::VectorXd compute_eigenvalues(const Eigen::MatrixXd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, Eigen::EigenvaluesOnly);
  Eigen::VectorXd values = solver.eigenvalues();
  const double tol = connectivity_tolerance(static_cast<std::size_t>(L.rows()),
                                            values(values.size() - 1));
  if (!(values(1) > tol)) throw error(errc::not_connected, "λ_2 below connectivity tolerance");
  values(0) = 0.0;
  return values;
}

/// Resistance matrix R = 1·diag(A)ᵀ + diag(A)·1ᵀ − 2A for a doubly centred A.
inline Eigen::MatrixXd resistance_from_pinv(const Eigen::MatrixXd& A) {
  const Eigen::VectorXd d = A.diagonal();
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) R(i, j) = d(i) + d(j) - 2.0 * A(i, j);
    R(j, j) = 0.0;
  }
  return R;
}

/// Laplacian, pseudo-inverse powers L^{†,m} (m = 1,2,3) and their resistance matrices.
/// Immutable once built; rank_one_augment produces a fresh state.
class LaplacianState {
 public:
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(L_.rows()); }
  const Eigen::MatrixXd& laplacian() const noexcept { return L_; }

  const Eigen::MatrixXd& pinv(int m) const { return pinv_[index(m)]; }
  const Eigen::MatrixXd& resistance(int m) const { return res_[index(m)]; }

  bool has_spectrum() const noexcept { return spectrum_ != nullptr; }
  /// Cached spectrum; null after a rank-one augmentation until with_spectrum() is applied.
  const std::shared_ptr<const Spectrum>& cached_spectrum() const noexcept { return spectrum_; }

 private:
  static std::size_t index(int m) {
    if (m < 1 || m > 3) throw error(errc::invalid_parameter, "power m must be 1, 2 or 3");
    return static_cast<std::size_t>(m - 1);
  }

  Eigen::MatrixXd L_;
  std::array<Eigen::MatrixXd, 3> pinv_;
  std::array<Eigen::MatrixXd, 3> res_;
  std::shared_ptr<const Spectrum> spectrum_;

  friend LaplacianState build_laplacian(const Eigen::MatrixXd& L);
  friend LaplacianState rank_one_augment(const LaplacianState& s, const Edge& e, double w);
  friend LaplacianState with_spectrum(LaplacianState s);
};

/// Builds a state from a Laplacian matrix (symmetric, zero row sums, nonpositive off-diagonals).
inline LaplacianState build_laplacian(const Eigen::MatrixXd& L) {
  const Eigen::Index n = L.rows();
  if (n < 2 || L.cols() != n) throw error(errc::invalid_graph, "Laplacian must be square with n ≥ 2");
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale * static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(L.row(i).sum()) > tol) throw error(errc::invalid_graph, "Laplacian row sums must vanish");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(L(i, j) - L(j, i)) > tol) throw error(errc::invalid_graph, "Laplacian must be symmetric");
      if (i != j && L(i, j) > tol) throw error(errc::invalid_graph, "off-diagonal entries must be ≤ 0");
    }
  }

  LaplacianState s;
  s.L_ = L;
  auto spec = std::make_shared<Spectrum>(compute_spectrum(L));
  const Eigen::MatrixXd& U = spec->vectors;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  inv.tail(n - 1) = spec->values.tail(n - 1).cwiseInverse();
  Eigen::VectorXd scaled = inv;
  for (std::size_t m = 0; m < 3; ++m) {
    s.pinv_[m].noalias() = U * scaled.asDiagonal() * U.transpose();
    s.pinv_[m] = 0.5 * (s.pinv_[m] + s.pinv_[m].transpose()).eval();
    s.res_[m] = resistance_from_pinv(s.pinv_[m]);
    scaled = scaled.cwiseProduct(inv);
  }
  s.spectrum_ = std::move(spec);
  return s;
}

inline LaplacianState build_laplacian(const WeightedGraph& g) {
  if (g.node_count() < 2) throw error(errc::invalid_graph, "graph needs at least two nodes");
  return build_laplacian(g.laplacian());
}

/// Returns the state with its spectrum populated (recomputed from L if absent).
inline LaplacianState with_spectrum(LaplacianState s) {
  if (!s.spectrum_) s.spectrum_ = std::make_shared<Spectrum>(compute_spectrum(s.L_));
  return s;
}

/// Cached spectrum if present, otherwise a freshly computed one (the state is not modified).
inline std::shared_ptr<const Spectrum> spectrum_of(const LaplacianState& s) {
  if (s.has_spectrum()) return s.cached_spectrum();
  return std::make_shared<Spectrum>(compute_spectrum(s.laplacian()));
}

inline Eigen::MatrixXd pseudo_inverse_power(const LaplacianState& s, int m) { return s.pinv(m); }

inline Eigen::MatrixXd resistance_matrix(const LaplacianState& s, int m) { return s.resistance(m); }

/// r_{ij}(L^m) = l^{†,m}_ii + l^{†,m}_jj − 2 l^{†,m}_ij.
inline double effective_resistance(const LaplacianState& s, int m, node_t i, node_t j) {
  const auto n = s.node_count();
  if (i >= n || j >= n) throw error(errc::invalid_parameter, "node index out of range");
  if (i == j) throw error(errc::self_loop_edge, "effective resistance needs distinct endpoints");
  const auto& A = s.pinv(m);
  const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
  return std::max(0.0, A(a, a) + A(b, b) - 2.0 * A(a, b));
}

inline double effective_resistance(const LaplacianState& s, int m, const Edge& e) {
  return effective_resistance(s, m, e.u, e.v);
}

inline EdgeResistanceView edge_resistances(const LaplacianState& s, const Edge& e) {
  return {e, effective_resistance(s, 1, e), effective_resistance(s, 2, e), effective_resistance(s, 3, e)};
}

/// State for L + w·L_e via Sherman–Morrison on L^† and O(n²) updates of L^{†,2}, L^{†,3}.
/// The spectrum is not carried over.
inline LaplacianState rank_one_augment(const LaplacianState& s, const Edge& e, double w) {
  const auto n = s.node_count();
  if (e.u >= n || e.v >= n || e.u == e.v) throw error(errc::invalid_parameter, "edge out of range");
  if (!(w > 0.0) || !std::isfinite(w)) throw error(errc::invalid_parameter, "link weight must be positive");

  const auto i = static_cast<Eigen::Index>(e.u), j = static_cast<Eigen::Index>(e.v);
  const Eigen::MatrixXd& A1 = s.pinv_[0];
  const Eigen::MatrixXd& A2 = s.pinv_[1];
  const Eigen::MatrixXd& A3 = s.pinv_[2];

  // u = L†(e_i − e_j), a = L†u, b = L†²u; all are column differences of cached powers.
  const Eigen::VectorXd u = A1.col(i) - A1.col(j);
  const Eigen::VectorXd a = A2.col(i) - A2.col(j);
  const Eigen::VectorXd b = A3.col(i) - A3.col(j);
  const double r1 = std::max(0.0, u(i) - u(j));
  const double uu = u.squaredNorm();
  const double ua = u.dot(a);
  const double c = w / (1.0 + w * r1);

  LaplacianState out;
  out.L_ = s.L_;
  add_edge_laplacian(out.L_, e, w);

  out.pinv_[0] = A1;
  out.pinv_[0].noalias() -= c * u * u.transpose();

  out.pinv_[1] = A2;
  out.pinv_[1].noalias() -= c * (a * u.transpose() + u * a.transpose());
  out.pinv_[1].noalias() += (c * c * uu) * u * u.transpose();

  out.pinv_[2] = A3;
  out.pinv_[2].noalias() -= c * (b * u.transpose() + u * b.transpose() + a * a.transpose());
  out.pinv_[2].noalias() += (c * c * uu) * (a * u.transpose() + u * a.transpose());
  out.pinv_[2].noalias() += (c * c * ua - c * c * c * uu * uu) * u * u.transpose();

  for (std::size_t m = 0; m < 3; ++m) out.res_[m] = resistance_from_pinv(out.pinv_[m]);
  return out;
}

}  // namespace netgrow
