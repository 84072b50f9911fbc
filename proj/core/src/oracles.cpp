#include "twistdh/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace twistdh {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

long ipow(long b, long e) {
  long r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

// digit of index I at tensor slot s (slot 0 most significant)
int slot_digit(long index, long slot, long n_slots) {
  return static_cast<int>((index / ipow(3, n_slots - 1 - slot)) % 3);
}

// sign and digit image of the flip conjugator J on C^3:
// J e0 = +e2, J e1 = -e1, J e2 = +e0.
int j_digit(int d) { return 2 - d; }
double j_sign(int d) { return d == 1 ? -1.0 : 1.0; }

}  // namespace

Sl3Oracle::Sl3Oracle(long a) : a_(a) {
  if (a < 0 || a > 3)
    throw std::invalid_argument(
        "sl3 oracle: supported highest weights are (a,a) with a in 0..3");
  dim_ = (a + 1) * (a + 1) * (a + 1);
  ambient_ = ipow(3, 2 * a);

  // Lowering operators as 3x3 blocks: covariant slots act by E_{i+1,i},
  // dual slots by the negative transpose.
  Eigen::Matrix3cd f1 = Eigen::Matrix3cd::Zero(), f2 = Eigen::Matrix3cd::Zero();
  f1(1, 0) = 1.0;
  f2(2, 1) = 1.0;

  // Highest-weight vector: covariant digits all 0 (e1 factors), dual digits
  // all 2 (e3* factors).
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(ambient_);
  v0[ipow(3, a) - 1] = 1.0;

  std::vector<Eigen::VectorXcd> basis{v0};
  for (size_t k = 0; k < basis.size(); ++k) {
    for (const Eigen::Matrix3cd& f : {f1, f2}) {
      Eigen::VectorXcd w = apply_slotwise(f, -f.transpose(), basis[k], true);
      for (int pass = 0; pass < 2; ++pass)
        for (const Eigen::VectorXcd& b : basis) w -= b.dot(w) * b;
      const double nrm = w.norm();
      if (nrm > 1e-8) basis.push_back(w / nrm);
    }
  }
  if (static_cast<long>(basis.size()) != dim_)
    throw std::logic_error("sl3 oracle: cyclic span has unexpected dimension");
  basis_.resize(ambient_, dim_);
  for (long k = 0; k < dim_; ++k) basis_.col(k) = basis[static_cast<size_t>(k)];

  // Twist lift: K(x (x) y) = (J^a y) (x) (J^a x) intertwines the
  // representation with its flip composition and preserves the invariant
  // subspace; restrict to the basis and normalize on the highest-weight
  // vector.
  const long half = ipow(3, a);
  Eigen::MatrixXcd kbasis(ambient_, dim_);
  for (long k = 0; k < dim_; ++k) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ambient_);
    for (long idx = 0; idx < ambient_; ++idx) {
      const long cov = idx / half, dual = idx % half;
      long cov_src = 0, dual_src = 0;  // source index (J^a dual', J^a cov')
      double sign = 1.0;
      for (long s = 0; s < a; ++s) {
        const int dc = slot_digit(cov, s, a), dd = slot_digit(dual, s, a);
        sign *= j_sign(dc) * j_sign(dd);
        cov_src = cov_src * 3 + j_digit(dd);
        dual_src = dual_src * 3 + j_digit(dc);
      }
      out[idx] = sign * basis_(cov_src * half + dual_src, k);
    }
    kbasis.col(k) = out;
  }
  kappa_ = basis_.adjoint() * kbasis;
  kappa_ /= kappa_(0, 0);  // fix the highest-weight vector
}

Eigen::VectorXcd Sl3Oracle::apply_slotwise(const Eigen::Matrix3cd& cov,
                                           const Eigen::Matrix3cd& dual,
                                           const Eigen::VectorXcd& v,
                                           bool sum) const {
  const long slots = 2 * a_;
  auto apply_slot = [&](const Eigen::Matrix3cd& m, long s,
                        const Eigen::VectorXcd& in) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ambient_);
    const long stride = ipow(3, slots - 1 - s);
    for (long idx = 0; idx < ambient_; ++idx) {
      const int d = static_cast<int>((idx / stride) % 3);
      const long base = idx - d * stride;
      cplx acc = 0.0;
      for (int e = 0; e < 3; ++e) acc += m(d, e) * in[base + e * stride];
      out[idx] = acc;
    }
    return out;
  };
  if (sum) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ambient_);
    for (long s = 0; s < slots; ++s)
      out += apply_slot(s < a_ ? cov : dual, s, v);
    return out;
  }
  Eigen::VectorXcd out = v;
  for (long s = 0; s < slots; ++s) out = apply_slot(s < a_ ? cov : dual, s, out);
  return out;
}

cplx Sl3Oracle::character(const TorusPoint& xi) const {
  if (xi.size() != 3)
    throw std::invalid_argument("sl3 oracle: ambient points have length 3");
  const long half = ipow(3, a_);
  cplx tr = 0.0;
  for (long idx = 0; idx < ambient_; ++idx) {
    double phase = 0.0;
    for (long s = 0; s < a_; ++s) {
      phase += xi[static_cast<size_t>(slot_digit(idx / half, s, a_))];
      phase -= xi[static_cast<size_t>(slot_digit(idx % half, s, a_))];
    }
    tr += std::polar(1.0, 2.0 * kPi * phase) * basis_.row(idx).squaredNorm();
  }
  return tr;
}

cplx Sl3Oracle::twining_trace(const TorusPoint& xi) const {
  if (xi.size() != 3)
    throw std::invalid_argument("sl3 oracle: ambient points have length 3");
  const long half = ipow(3, a_);
  const Eigen::MatrixXcd bk = basis_ * kappa_;
  cplx tr = 0.0;
  for (long idx = 0; idx < ambient_; ++idx) {
    double phase = 0.0;
    for (long s = 0; s < a_; ++s) {
      phase += xi[static_cast<size_t>(slot_digit(idx / half, s, a_))];
      phase -= xi[static_cast<size_t>(slot_digit(idx % half, s, a_))];
    }
    tr += std::polar(1.0, 2.0 * kPi * phase) *
          (bk.row(idx) * basis_.row(idx).adjoint())(0, 0);
  }
  return tr;
}

Eigen::MatrixXcd Sl3Oracle::rep(const Eigen::MatrixXcd& g) const {
  if (g.rows() != 3 || g.cols() != 3)
    throw std::invalid_argument("sl3 oracle: expected a 3x3 group element");
  Eigen::MatrixXcd moved(ambient_, dim_);
  const Eigen::Matrix3cd cov = g, dual = g.conjugate();
  for (long k = 0; k < dim_; ++k)
    moved.col(k) = apply_slotwise(cov, dual, basis_.col(k), false);
  return basis_.adjoint() * moved;
}

Eigen::MatrixXcd Sl3Oracle::rep_algebra(const Eigen::Matrix3cd& x) const {
  Eigen::MatrixXcd moved(ambient_, dim_);
  const Eigen::Matrix3cd dual = -x.transpose();
  for (long k = 0; k < dim_; ++k)
    moved.col(k) = apply_slotwise(x, dual, basis_.col(k), true);
  return basis_.adjoint() * moved;
}

cplx sl3_twining_oracle(const WeightCoords& lambda, const TorusPoint& xi) {
  if (lambda.size() != 2 || lambda[0] != lambda[1])
    throw std::invalid_argument(
        "sl3 oracle: only flip-fixed weights (a,a) are supported");
  const Sl3Oracle oracle(lambda[0]);
  return oracle.twining_trace(xi);
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Projector onto the invariants of conj(rho_left) (x) rho_right, i.e. the
// Haar integral of that representation, computed as the kernel of the
// summed squared Lie-algebra action.
Eigen::MatrixXcd invariant_projector(const Sl3Oracle& left,
                                     const Sl3Oracle& right) {
  const long d1 = left.dimension(), d2 = right.dimension();
  Eigen::Matrix3cd e1 = Eigen::Matrix3cd::Zero(), e2 = Eigen::Matrix3cd::Zero();
  e1(0, 1) = 1.0;
  e2(1, 2) = 1.0;
  const Eigen::MatrixXcd id1 = Eigen::MatrixXcd::Identity(d1, d1);
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(d2, d2);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d1 * d2, d1 * d2);
  for (const Eigen::Matrix3cd& x :
       {e1, Eigen::Matrix3cd(e1.transpose()), e2,
        Eigen::Matrix3cd(e2.transpose())}) {
    const Eigen::MatrixXcd act =
        kron(left.rep_algebra(x).conjugate(), id2) +
        kron(id1, right.rep_algebra(x));
    h += act.adjoint() * act;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const double tol = 1e-8 * std::max(1.0, es.eigenvalues().maxCoeff());
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(d1 * d2, d1 * d2);
  for (long k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()[k] < tol)
      proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return proj;
}

}  // namespace

cplx sl3_convolution_lhs(const Sl3Oracle& left, bool kappa_flip,
                         const Sl3Oracle& right, bool tau_flip,
                         const Eigen::MatrixXcd& x) {
  const long d1 = left.dimension(), d2 = right.dimension();
  const Eigen::MatrixXcd proj = invariant_projector(left, right);
  const Eigen::MatrixXcd a =
      (kappa_flip ? Eigen::MatrixXcd(left.twist_lift() * left.rep(x))
                  : left.rep(x));
  const Eigen::MatrixXcd tau =
      tau_flip ? right.twist_lift()
               : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(d2, d2));
  // integral of tr(kappa~ rho_l(x) rho_l(g)^dagger) tr(tau~ rho_r(g)) dg
  cplx out = 0.0;
  for (long p = 0; p < d1; ++p)
    for (long q = 0; q < d1; ++q)
      for (long k = 0; k < d2; ++k)
        for (long l = 0; l < d2; ++l)
          out += a(p, q) * tau(k, l) * proj(p * d2 + l, q * d2 + k);
  return out;
}

cplx sl3_convolution_rhs(const Sl3Oracle& left, bool kappa_flip,
                         const Sl3Oracle& right, bool tau_flip,
                         const Eigen::MatrixXcd& x) {
  if (left.label() != right.label()) return 0.0;
  Eigen::MatrixXcd lift =
      Eigen::MatrixXcd::Identity(left.dimension(), left.dimension());
  if (kappa_flip) lift = left.twist_lift() * lift;
  if (tau_flip) lift = left.twist_lift() * lift;  // tau~ kappa~ composed
  return (lift * left.rep(x)).trace() / static_cast<double>(left.dimension());
}

double haar_class_density(const MeasureContext& mctx,
                          const std::vector<double>& u) {
  const Twist& tw = mctx.twist();
  const int d = tw.fixed_dim();
  if (static_cast<int>(u.size()) != d)
    throw std::invalid_argument("haar_class_density: wrong coordinate count");
  std::vector<RVec> verts(tw.alcove_vertices.begin() + 1,
                          tw.alcove_vertices.end());
  const double jac = lattice_covolume(tw.group, verts);
  return mctx.det_factor(tw.alcove_point(u)) * jac /
         mctx.fixed_torus_covolume();
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

// Twists applied inside one moment-map word, materialized once.
struct WordPlan {
  struct Handle {
    const Twist* tau;
    const Twist* on_b;       // tau
    const Twist* on_a_inv;   // tau kappa tau^{-1}
    const Twist* on_b_inv;   // [tau, kappa]
  };
  struct Boundary {
    const Twist* twist;
    Eigen::MatrixXcd rep;  // torus element of the class point
  };
  std::vector<Handle> handles;
  std::vector<Boundary> boundaries;
  std::vector<const Twist*> prefix;  // fusion twist before each piece
  std::map<std::vector<int>, std::unique_ptr<Twist>> pool;

  const Twist* intern(const RootSystem& rs, const std::vector<int>& perm) {
    auto it = pool.find(perm);
    if (it == pool.end())
      it = pool.emplace(perm, std::make_unique<Twist>(make_twist(rs, perm)))
               .first;
    return it->second.get();
  }
};

std::vector<int> perm_mul(const std::vector<int>& a,
                          const std::vector<int>& b) {
  std::vector<int> out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

std::vector<int> perm_inv(const std::vector<int>& a) {
  std::vector<int> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[a[i]] = static_cast<int>(i);
  return out;
}

WordPlan build_plan(const ModuliContext& ctx, const SuModel& model) {
  const SurfaceAssembly& spec = ctx.assembly();
  const RootSystem& rs = *spec.group;
  WordPlan plan;
  std::vector<std::vector<int>> targets;
  for (const HandleTwists& ht : spec.handles) {
    const std::vector<int>&t = ht.tau->simple_perm, &k = ht.kappa->simple_perm;
    const std::vector<int> comm =
        perm_mul(perm_mul(t, k), perm_mul(perm_inv(t), perm_inv(k)));
    WordPlan::Handle h;
    h.tau = ht.tau;
    h.on_b = ht.tau;
    h.on_a_inv = plan.intern(rs, perm_mul(perm_mul(t, k), perm_inv(t)));
    h.on_b_inv = plan.intern(rs, comm);
    plan.handles.push_back(h);
    targets.push_back(comm);
  }
  for (const BoundaryClass& bc : spec.boundaries) {
    WordPlan::Boundary b;
    b.twist = bc.twist;
    b.rep = model.torus_element(bc.twist->reduce_to_alcove(bc.xi));
    plan.boundaries.push_back(b);
    targets.push_back(bc.twist->simple_perm);
  }
  std::vector<int> run(static_cast<size_t>(rs.rank));
  std::iota(run.begin(), run.end(), 0);
  for (const std::vector<int>& t : targets) {
    plan.prefix.push_back(plan.intern(rs, run));
    run = perm_mul(run, t);
  }
  return plan;
}

Eigen::MatrixXcd sample_word(const WordPlan& plan, const SuModel& model,
                             PhiloxStream& rng) {
  Eigen::MatrixXcd acc;
  size_t piece = 0;
  auto fuse = [&](const Eigen::MatrixXcd& phi) {
    if (piece == 0)
      acc = phi;
    else
      acc = acc * model.apply_twist(*plan.prefix[piece], phi);
    ++piece;
  };
  for (const WordPlan::Handle& h : plan.handles) {
    const Eigen::MatrixXcd a = model.haar(rng), b = model.haar(rng);
    fuse(a * model.apply_twist(*h.on_b, b) *
         model.apply_twist(*h.on_a_inv, Eigen::MatrixXcd(a.adjoint())) *
         model.apply_twist(*h.on_b_inv, Eigen::MatrixXcd(b.adjoint())));
  }
  for (const WordPlan::Boundary& b : plan.boundaries) {
    const Eigen::MatrixXcd c = model.haar(rng);
    fuse(c * b.rep *
         model.apply_twist(*b.twist, Eigen::MatrixXcd(c.adjoint())));
  }
  return acc;
}

// Least-squares alcove-coordinate solver with a prefactored system.
struct CoordSolver {
  explicit CoordSolver(const Twist& tw) {
    const int d = tw.fixed_dim();
    const int m = static_cast<int>(tw.alcove_vertices.front().size());
    Eigen::MatrixXd v(m, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < m; ++r)
        v(r, c) = to_double(
            tw.alcove_vertices[static_cast<size_t>(c + 1)][static_cast<size_t>(
                r)]);
    qr.compute(v);
    rows = m;
    cols = d;
  }
  std::vector<double> solve(const TorusPoint& xi) const {
    Eigen::VectorXd rhs(rows);
    for (int r = 0; r < rows; ++r) rhs(r) = xi[static_cast<size_t>(r)];
    const Eigen::VectorXd u = qr.solve(rhs);
    return std::vector<double>(u.data(), u.data() + cols);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  int rows = 0, cols = 0;
};

// Heat-damped Fourier series of the DH probability density (with respect to
// the Riemannian probability measure of the group) at an alcove point.
double probability_series(const ModuliContext& ctx,
                          const std::vector<WeightCoords>& weights,
                          const std::vector<cplx>& coeffs,
                          const std::vector<double>& damps,
                          const TorusPoint& xi) {
  cplx sum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i)
    sum += damps[i] * coeffs[i] *
           std::conj(ctx.target_characters().twining_character(weights[i], xi));
  return std::real(sum);
}

long stream_quota(long n_samples, int stream, int n_streams) {
  return n_samples / n_streams + (stream < n_samples % n_streams ? 1 : 0);
}

constexpr int kStreams = 64;

}  // namespace

McComparison mc_compare(const ModuliContext& ctx, long n_samples,
                        int bins_per_axis, double heat_t, long level_cutoff,
                        std::uint64_t seed) {
  if (n_samples < 1 || bins_per_axis < 1)
    throw std::invalid_argument("mc_compare: need samples and bins");
  const SurfaceAssembly& spec = ctx.assembly();
  const SuModel model(*spec.group);
  for (const HandleTwists& ht : spec.handles) {
    if (!model.has_model(*ht.tau) || !model.has_model(*ht.kappa))
      throw std::invalid_argument("no matrix model for a handle twist");
  }
  for (const BoundaryClass& bc : spec.boundaries)
    if (!model.has_model(*bc.twist))
      throw std::invalid_argument("no matrix model for a boundary twist");
  const Twist& target = ctx.target_twist();
  if (!model.has_model(target))
    throw std::invalid_argument("no matrix model for the composed target twist");

  WordPlan plan = build_plan(ctx, model);
  const CoordSolver solver(target);
  const int d = target.fixed_dim();
  const int m = bins_per_axis;
  long cells = 1;
  for (int i = 0; i < d; ++i) cells *= m;

  // Monte Carlo pass.
  std::vector<long> counts(static_cast<size_t>(cells), 0);
  for (int s = 0; s < kStreams; ++s) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(s));
    const long quota = stream_quota(n_samples, s, kStreams);
    for (long i = 0; i < quota; ++i) {
      const Eigen::MatrixXcd g = sample_word(plan, model, rng);
      const std::vector<double> u =
          solver.solve(model.class_projection(target, g));
      long idx = 0;
      for (int c = 0; c < d; ++c) {
        long bi = static_cast<long>(std::floor(u[static_cast<size_t>(c)] * m));
        bi = std::min<long>(std::max<long>(bi, 0), m - 1);
        idx = idx * m + bi;
      }
      ++counts[static_cast<size_t>(idx)];
    }
  }

  // Series pass: integrate the probability density over each cell by
  // midpoint subsampling (alcove-density weight times the character series).
  const std::vector<WeightCoords> weights = ctx.admissible_weights(level_cutoff);
  std::vector<cplx> coeffs;
  std::vector<double> damps;
  for (const WeightCoords& lam : weights) {
    coeffs.push_back(ctx.probability_coefficient(lam));
    damps.push_back(std::exp(
        -heat_t * to_double(ctx.target_characters().heat_eigenvalue(lam))));
  }
  const MeasureContext& tm = ctx.target_measures();
  const int q = 8;  // subsamples per axis per cell
  McComparison out;
  out.n_samples = n_samples;
  out.bins_per_axis = m;
  out.dim = d;
  for (long idx = 0; idx < cells; ++idx) {
    McBin bin;
    long rem = idx;
    std::vector<long> ci(static_cast<size_t>(d));
    for (int c = d - 1; c >= 0; --c) {
      ci[static_cast<size_t>(c)] = rem % m;
      rem /= m;
    }
    for (int c = 0; c < d; ++c)
      bin.center.push_back((ci[static_cast<size_t>(c)] + 0.5) / m);

    double mass = 0.0;
    std::vector<double> u(static_cast<size_t>(d));
    std::vector<long> si(static_cast<size_t>(d), 0);
    const double subvol = std::pow(1.0 / (m * q), d);
    while (true) {
      for (int c = 0; c < d; ++c)
        u[static_cast<size_t>(c)] =
            (ci[static_cast<size_t>(c)] +
             (si[static_cast<size_t>(c)] + 0.5) / q) /
            m;
      const TorusPoint xi = target.alcove_point(u);
      if (target.in_alcove(xi))
        mass += probability_series(ctx, weights, coeffs, damps, xi) *
                haar_class_density(tm, u) * subvol;
      int c = d - 1;
      while (c >= 0 && ++si[static_cast<size_t>(c)] == q) {
        si[static_cast<size_t>(c)] = 0;
        --c;
      }
      if (c < 0) break;
    }
    bin.series_mass = mass;
    bin.mc_mass =
        static_cast<double>(counts[static_cast<size_t>(idx)]) / n_samples;
    bin.mc_stderr =
        std::sqrt(std::max(bin.mc_mass * (1.0 - bin.mc_mass), 0.0) /
                  static_cast<double>(n_samples));
    if (bin.mc_mass == 0.0 && bin.series_mass <= 0.0) {
      bin.z = 0.0;
    } else {
      // null standard error from the series mass, floored at one count
      const double p =
          std::max(std::min(std::max(bin.series_mass, 0.0), 1.0),
                   1.0 / static_cast<double>(n_samples));
      const double se = std::sqrt(p * (1.0 - p) / n_samples);
      bin.z = (bin.mc_mass - bin.series_mass) / se;
    }
    if (bin.mc_mass > 0.0 || bin.series_mass > 1e-14 ||
        target.in_alcove(target.alcove_point(bin.center), 1e-9))
      out.bins.push_back(bin);
  }
  return out;
}

KdeComparison mc_kde_compare(const ModuliContext& ctx, long n_samples,
                             int n_eval, double bandwidth, double heat_t,
                             long level_cutoff, std::uint64_t seed) {
  const Twist& target = ctx.target_twist();
  if (target.fixed_dim() != 1)
    throw std::invalid_argument(
        "mc_kde_compare: kernel-density curves are for rank-1 alcoves; use "
        "the binned comparison instead");
  if (n_samples < 2 || n_eval < 2)
    throw std::invalid_argument("mc_kde_compare: need samples and points");
  const SuModel model(*ctx.assembly().group);
  WordPlan plan = build_plan(ctx, model);
  const CoordSolver solver(target);

  std::vector<double> samples;
  samples.reserve(static_cast<size_t>(n_samples));
  for (int s = 0; s < kStreams; ++s) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(s));
    const long quota = stream_quota(n_samples, s, kStreams);
    for (long i = 0; i < quota; ++i) {
      const Eigen::MatrixXcd g = sample_word(plan, model, rng);
      samples.push_back(
          solver.solve(model.class_projection(target, g)).front());
    }
  }

  KdeComparison out;
  out.n_samples = n_samples;
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples.size() - 1);
  out.bandwidth = bandwidth > 0.0
                      ? bandwidth
                      : 1.06 * std::sqrt(var) *
                            std::pow(static_cast<double>(n_samples), -0.2);
  const double b = out.bandwidth;

  // Reflected periodic kernel: even images across both alcove endpoints,
  // period 2; images beyond eight bandwidths are dropped.
  auto kernel = [&](double x, double s) {
    double k = 0.0;
    for (int mm = -3; mm <= 3; ++mm) {
      for (double arg : {x - s + 2.0 * mm, x + s + 2.0 * mm}) {
        if (std::abs(arg) > 8.0 * b) continue;
        k += std::exp(-0.5 * arg * arg / (b * b)) /
             (b * std::sqrt(2.0 * kPi));
      }
    }
    return k;
  };

  for (int j = 0; j < n_eval; ++j)
    out.u.push_back(static_cast<double>(j) / (n_eval - 1));
  out.mc_density.assign(static_cast<size_t>(n_eval), 0.0);
  out.mc_stderr.assign(static_cast<size_t>(n_eval), 0.0);
  std::vector<double> sumsq(static_cast<size_t>(n_eval), 0.0);
  for (double s : samples)
    for (int j = 0; j < n_eval; ++j) {
      const double k = kernel(out.u[static_cast<size_t>(j)], s);
      out.mc_density[static_cast<size_t>(j)] += k;
      sumsq[static_cast<size_t>(j)] += k * k;
    }
  for (int j = 0; j < n_eval; ++j) {
    const double m1 =
        out.mc_density[static_cast<size_t>(j)] / static_cast<double>(n_samples);
    const double m2 =
        sumsq[static_cast<size_t>(j)] / static_cast<double>(n_samples);
    out.mc_density[static_cast<size_t>(j)] = m1;
    out.mc_stderr[static_cast<size_t>(j)] =
        std::sqrt(std::max(m2 - m1 * m1, 0.0) / static_cast<double>(n_samples));
  }

  // Series side convolved with the same kernel, so both curves carry the
  // same smoothing.
  const std::vector<WeightCoords> weights = ctx.admissible_weights(level_cutoff);
  std::vector<cplx> coeffs;
  std::vector<double> damps;
  for (const WeightCoords& lam : weights) {
    coeffs.push_back(ctx.probability_coefficient(lam));
    damps.push_back(std::exp(
        -heat_t * to_double(ctx.target_characters().heat_eigenvalue(lam))));
  }
  const MeasureContext& tm = ctx.target_measures();
  const int grid = 2048;
  std::vector<double> rho(grid);
  for (int i = 0; i < grid; ++i) {
    const double ug = (i + 0.5) / grid;
    rho[static_cast<size_t>(i)] =
        probability_series(ctx, weights, coeffs, damps,
                           target.alcove_point({ug})) *
        haar_class_density(tm, {ug});
  }
  for (int j = 0; j < n_eval; ++j) {
    double conv = 0.0;
    for (int i = 0; i < grid; ++i)
      conv += kernel(out.u[static_cast<size_t>(j)], (i + 0.5) / grid) *
              rho[static_cast<size_t>(i)];
    out.series_density.push_back(conv / grid);
  }
  return out;
}

}  // namespace twistdh
