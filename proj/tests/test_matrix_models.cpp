#include "doctest.h"
#include "twistdh/matrix_models.hpp"

#include "twistdh/rng.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace twistdh;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double dist(const TorusPoint& a, const TorusPoint& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// strictly interior alcove coefficients, bounded away from every wall
std::vector<double> interior_coeffs(int d, PhiloxStream& rng) {
  std::vector<double> c(static_cast<size_t>(d));
  for (double& x : c) x = (0.1 + 0.8 * rng.uniform()) * 0.9 / d;
  return c;
}

}  // namespace

TEST_CASE("haar samples are special unitary to machine precision") {
  for (int n : {2, 3, 4}) {
    const RootSystem rs = build_root_system(Series::A, n - 1);
    SuModel model(rs);
    CHECK(model.n() == n);
    PhiloxStream rng(7, 0);
    for (int i = 0; i < 40; ++i) {
      const Eigen::MatrixXcd g = model.haar(rng);
      CHECK((g.adjoint() * g - Eigen::MatrixXcd::Identity(n, n)).norm() <
            1e-12);
      CHECK(std::abs(g.determinant() - cplx(1.0)) < 1e-12);
    }
  }
}

TEST_CASE("haar moments match translation invariance") {
  const RootSystem rs = build_root_system(Series::A, 2);
  SuModel model(rs);
  const long n_samples = 100000;
  cplx mean_tr = 0.0;
  double mean_tr2 = 0.0;
  for (int s = 0; s < 16; ++s) {
    PhiloxStream rng(123, static_cast<std::uint64_t>(s));
    for (long i = 0; i < n_samples / 16; ++i) {
      const cplx t = model.haar(rng).trace();
      mean_tr += t;
      mean_tr2 += std::norm(t);
    }
  }
  mean_tr /= static_cast<double>(n_samples);
  mean_tr2 /= static_cast<double>(n_samples);
  // E tr g = 0 and E |tr g|^2 = 1 for any irreducible nontrivial factor;
  // generous 5 sigma windows with sigma ~ N^{-1/2}
  CHECK(std::abs(mean_tr) < 5.0 / std::sqrt(static_cast<double>(n_samples)));
  CHECK(std::abs(mean_tr2 - 1.0) <
        10.0 / std::sqrt(static_cast<double>(n_samples)));
}

TEST_CASE("su(2) eigenphase histogram follows the sine-squared law") {
  const RootSystem rs = build_root_system(Series::A, 1);
  SuModel model(rs);
  const Twist id = identity_twist(rs);
  const long n_samples = 20000;
  const int bins = 16;
  std::vector<long> counts(bins, 0);
  PhiloxStream rng(99, 0);
  for (long i = 0; i < n_samples; ++i) {
    const TorusPoint xi = model.class_projection(id, model.haar(rng));
    const std::vector<double> u = alcove_coordinates(id, xi);
    REQUIRE(u.size() == 1);
    int b = static_cast<int>(std::floor(u[0] * bins));
    b = std::min(std::max(b, 0), bins - 1);
    ++counts[static_cast<size_t>(b)];
  }
  auto cdf = [](double u) { return u - std::sin(2.0 * kPi * u) / (2.0 * kPi); };
  for (int b = 0; b < bins; ++b) {
    const double p = cdf((b + 1.0) / bins) - cdf(static_cast<double>(b) / bins);
    const double got = static_cast<double>(counts[static_cast<size_t>(b)]) /
                       static_cast<double>(n_samples);
    const double sigma = std::sqrt(p * (1.0 - p) / n_samples);
    CHECK(std::abs(got - p) < 5.0 * sigma);
  }
}

TEST_CASE("class projection is invariant under twisted conjugation") {
  for (const auto& [rank, name] : std::vector<std::pair<int, std::string>>{
           {1, "identity"}, {2, "identity"}, {2, "flip"}, {3, "identity"},
           {3, "flip"}, {4, "flip"}}) {
    const RootSystem rs = build_root_system(Series::A, rank);
    SuModel model(rs);
    const Twist tw = twist_by_name(rs, name);
    PhiloxStream rng(2024, static_cast<std::uint64_t>(rank));
    for (int i = 0; i < 15; ++i) {
      const Eigen::MatrixXcd h = model.haar(rng), g = model.haar(rng);
      const Eigen::MatrixXcd moved =
          g * h * model.apply_twist(tw, Eigen::MatrixXcd(g.adjoint()));
      CHECK(dist(model.class_projection(tw, h),
                 model.class_projection(tw, moved)) < 1e-9);
    }
  }
}

TEST_CASE("projection round-trips interior alcove classes") {
  // Ordinary conjugation for ranks 1..4; the flip only for su(3), where the
  // projected coweight lattice has no 2-torsion ambiguity (for n >= 4 the
  // flip projection is defined up to a half-lattice shift, which the
  // statistical suites handle instead).
  for (const auto& [rank, name] : std::vector<std::pair<int, std::string>>{
           {1, "identity"}, {2, "identity"}, {3, "identity"}, {4, "identity"},
           {2, "flip"}}) {
    const RootSystem rs = build_root_system(Series::A, rank);
    SuModel model(rs);
    const Twist tw = twist_by_name(rs, name);
    PhiloxStream rng(5, static_cast<std::uint64_t>(10 * rank));
    for (int i = 0; i < 25; ++i) {
      const TorusPoint a = tw.alcove_point(interior_coeffs(tw.fixed_dim(), rng));
      const TorusPoint back =
          model.class_projection(tw, model.torus_element(a));
      CHECK(dist(back, a) < 1e-9);
    }
  }
}

TEST_CASE("flip model: involution, torus action, and determinant one") {
  for (int rank : {2, 3, 4}) {
    const RootSystem rs = build_root_system(Series::A, rank);
    SuModel model(rs);
    const Twist flip = twist_by_name(rs, "flip");
    CHECK(model.has_model(flip));
    CHECK(std::abs(model.flip_matrix().determinant() - cplx(1.0)) < 1e-14);
    PhiloxStream rng(31, 0);
    const Eigen::MatrixXcd g = model.haar(rng);
    const Eigen::MatrixXcd gg = model.apply_twist(flip, g);
    // involution and group homomorphism onto special unitaries
    CHECK((model.apply_twist(flip, gg) - g).norm() < 1e-12);
    CHECK(std::abs(gg.determinant() - cplx(1.0)) < 1e-12);
    const Eigen::MatrixXcd h = model.haar(rng);
    CHECK((model.apply_twist(flip, Eigen::MatrixXcd(g * h)) - gg * model.apply_twist(flip, h))
              .norm() < 1e-12);
    // on the torus the flip acts by negated reversal of the phases
    TorusPoint xi(static_cast<size_t>(rank) + 1);
    double sum = 0.0;
    for (size_t i = 0; i + 1 < xi.size(); ++i) {
      xi[i] = 0.01 * static_cast<double>(i + 1);
      sum += xi[i];
    }
    xi.back() = -sum;
    TorusPoint rev(xi.rbegin(), xi.rend());
    for (double& v : rev) v = -v;
    CHECK((model.apply_twist(flip, model.torus_element(xi)) -
           model.torus_element(rev))
              .norm() < 1e-12);
  }
}

TEST_CASE("alcove coordinates invert the vertex expansion") {
  for (const auto& [rank, name] : std::vector<std::pair<int, std::string>>{
           {2, "identity"}, {2, "flip"}, {3, "flip"}, {4, "identity"}}) {
    const RootSystem rs = build_root_system(Series::A, rank);
    const Twist tw = twist_by_name(rs, name);
    PhiloxStream rng(77, 0);
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> u = interior_coeffs(tw.fixed_dim(), rng);
      const std::vector<double> back =
          alcove_coordinates(tw, tw.alcove_point(u));
      REQUIRE(back.size() == u.size());
      for (size_t k = 0; k < u.size(); ++k)
        CHECK(back[k] == doctest::Approx(u[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("matrix models exist only for the unitary series") {
  const RootSystem d4 = build_root_system(Series::D, 4);
  SuModel* ignored = nullptr;
  CHECK_THROWS_AS(ignored = new SuModel(d4), std::invalid_argument);
  (void)ignored;
}

TEST_CASE("independent haar factors multiply to a haar product") {
  // the class of x y for independent Haar x, y is again Haar-distributed
  const RootSystem rs = build_root_system(Series::A, 1);
  SuModel model(rs);
  const Twist id = identity_twist(rs);
  const long n_samples = 20000;
  const int bins = 12;
  std::vector<long> counts(bins, 0);
  PhiloxStream rng(4242, 3);
  for (long i = 0; i < n_samples; ++i) {
    const Eigen::MatrixXcd x = model.haar(rng), y = model.haar(rng);
    const std::vector<double> u =
        alcove_coordinates(id, model.class_projection(id, Eigen::MatrixXcd(x * y)));
    int b = static_cast<int>(std::floor(u[0] * bins));
    b = std::min(std::max(b, 0), bins - 1);
    ++counts[static_cast<size_t>(b)];
  }
  auto cdf = [](double u) { return u - std::sin(2.0 * kPi * u) / (2.0 * kPi); };
  for (int b = 0; b < bins; ++b) {
    const double p = cdf((b + 1.0) / bins) - cdf(static_cast<double>(b) / bins);
    const double got = static_cast<double>(counts[static_cast<size_t>(b)]) /
                       static_cast<double>(n_samples);
    CHECK(std::abs(got - p) < 5.0 * std::sqrt(p * (1.0 - p) / n_samples));
  }
}
