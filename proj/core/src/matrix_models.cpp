#include "twistdh/matrix_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace twistdh {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

bool is_reversal(const std::vector<int>& perm) {
  const int r = static_cast<int>(perm.size());
  for (int i = 0; i < r; ++i)
    if (perm[i] != r - 1 - i) return false;
  return r >= 2;
}

void require_unitary(const Eigen::MatrixXcd& g) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n)
    throw std::invalid_argument("class projection: matrix must be square");
  const double defect =
      (g.adjoint() * g - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(defect < 1e-8))
    throw std::invalid_argument("class projection: matrix is not unitary");
}

// Eigenphases in (-1/2, 1/2], one per eigenvalue.
std::vector<double> eigenphases(const Eigen::MatrixXcd& g) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("class projection: eigenvalue solve failed");
  std::vector<double> phases(g.rows());
  for (int k = 0; k < g.rows(); ++k) {
    double p = std::arg(es.eigenvalues()[k]) / (2.0 * kPi);
    if (p <= -0.5) p += 1.0;  // pin the branch cut to the +1/2 side
    phases[static_cast<size_t>(k)] = p;
  }
  return phases;
}

}  // namespace

SuModel::SuModel(const RootSystem& rs) : rs_(&rs), n_(rs.rank + 1) {
  if (rs.series != Series::A)
    throw std::invalid_argument(
        "matrix model: only series A has a special-unitary model");
  J_ = Eigen::MatrixXcd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) J_(i, n_ - 1 - i) = (i % 2 == 0) ? 1.0 : -1.0;
  Jinv_ = J_.inverse();
  flip_perm_.resize(rs.rank);
  for (int i = 0; i < rs.rank; ++i) flip_perm_[i] = rs.rank - 1 - i;
}

Eigen::MatrixXcd SuModel::haar(PhiloxStream& rng) const {
  Eigen::MatrixXcd z(n_, n_);
  const double s = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c)
      z(r, c) = cplx(rng.gaussian() * s, rng.gaussian() * s);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int c = 0; c < n_; ++c) {
    const cplx d = r(c, c);
    q.col(c) *= d / std::abs(d);
  }
  const cplx det = q.determinant();
  q *= std::pow(det, -1.0 / n_);
  return q;
}

Eigen::MatrixXcd SuModel::torus_element(const TorusPoint& xi) const {
  if (static_cast<int>(xi.size()) != n_)
    throw std::invalid_argument(
        "torus element: expected ambient coordinates of length n");
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n_, n_);
  for (int k = 0; k < n_; ++k)
    t(k, k) = std::polar(1.0, 2.0 * kPi * xi[static_cast<size_t>(k)]);
  return t;
}

bool SuModel::has_model(const Twist& tw) const {
  return tw.is_identity() || is_reversal(tw.simple_perm);
}

Eigen::MatrixXcd SuModel::apply_twist(const Twist& tw,
                                      const Eigen::MatrixXcd& g) const {
  if (tw.is_identity()) return g;
  if (is_reversal(tw.simple_perm)) return J_ * g.conjugate() * Jinv_;
  throw std::invalid_argument("no matrix model for twist '" + tw.name +
                              "' on " + series_name(rs_->series) + "_" +
                              std::to_string(rs_->rank));
}

TorusPoint SuModel::class_projection(const Twist& tw,
                                     const Eigen::MatrixXcd& g) const {
  require_unitary(g);
  if (g.rows() != n_)
    throw std::invalid_argument("class projection: wrong matrix size");

  if (tw.is_identity()) {
    std::vector<double> phases = eigenphases(g);
    // The phases sum to an integer m (det = 1); spreading the branch fix
    // over the m extreme phases keeps every coordinate in (-3/2, 3/2).
    std::sort(phases.begin(), phases.end(), std::greater<>());
    const long m = std::lround(
        std::accumulate(phases.begin(), phases.end(), 0.0));
    for (long k = 0; k < m; ++k) phases[static_cast<size_t>(k)] -= 1.0;
    for (long k = 0; k < -m; ++k)
      phases[phases.size() - 1 - static_cast<size_t>(k)] += 1.0;
    const double mean =
        std::accumulate(phases.begin(), phases.end(), 0.0) / n_;
    for (double& p : phases) p -= mean;  // exact sum-zero traceless log
    return tw.reduce_to_alcove(phases);
  }

  if (!is_reversal(tw.simple_perm))
    throw std::invalid_argument("no matrix model for twist '" + tw.name +
                                "' on " + series_name(rs_->series) + "_" +
                                std::to_string(rs_->rank));
  // g * flip(g) is twisted-conjugation equivariant for ordinary conjugation,
  // and its (reversal-symmetric) eigenphases are twice the class point.
  const Eigen::MatrixXcd q = g * apply_twist(tw, g);
  std::vector<double> phases = eigenphases(q);
  std::sort(phases.begin(), phases.end(), std::greater<>());
  TorusPoint xi(static_cast<size_t>(n_));
  for (int k = 0; k < n_; ++k)
    xi[static_cast<size_t>(k)] =
        (phases[static_cast<size_t>(k)] -
         phases[static_cast<size_t>(n_ - 1 - k)]) /
        4.0;  // symmetrized halving; the middle phase of odd n maps to 0
  return tw.reduce_to_alcove(xi);
}

std::vector<double> alcove_coordinates(const Twist& tw,
                                       const TorusPoint& xi_ambient) {
  const TorusPoint xi = tw.reduce_to_alcove(xi_ambient);
  const int d = tw.fixed_dim();
  const int m = static_cast<int>(xi.size());
  Eigen::MatrixXd v(m, d);
  for (int c = 0; c < d; ++c) {
    const RVec& vert = tw.alcove_vertices[static_cast<size_t>(c + 1)];
    for (int r = 0; r < m; ++r) v(r, c) = to_double(vert[static_cast<size_t>(r)]);
  }
  Eigen::VectorXd rhs(m);
  for (int r = 0; r < m; ++r) rhs(r) = xi[static_cast<size_t>(r)];
  const Eigen::VectorXd u = v.colPivHouseholderQr().solve(rhs);
  return std::vector<double>(u.data(), u.data() + d);
}

}  // namespace twistdh
