// Homogeneous self-dual interior point method for
//
//   min c'x + c0   s.t.  A x = b,   G x + s = h,   s in K,
//
// where K is a product of a nonnegative orthant and PSD cones. Inequality
// rows a'x + a0 >= 0 map to G = -a, h = a0; a PSD block F0 + sum x_k F_k
// maps to G_k = -F_k, h = F0.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "prelax/conic.hpp"

namespace prelax {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConeVec {
  VectorXd lp;
  std::vector<MatrixXd> m;
};

double dot(const ConeVec& a, const ConeVec& b) {
  double s = a.lp.dot(b.lp);
  for (std::size_t j = 0; j < a.m.size(); ++j) s += a.m[j].cwiseProduct(b.m[j]).sum();
  return s;
}

double norm(const ConeVec& a) { return std::sqrt(dot(a, a)); }

ConeVec axpy(double alpha, const ConeVec& x, const ConeVec& y) {
  ConeVec r{y.lp + alpha * x.lp, y.m};
  for (std::size_t j = 0; j < r.m.size(); ++j) r.m[j] += alpha * x.m[j];
  return r;
}

ConeVec scaled(double alpha, const ConeVec& x) {
  ConeVec r{alpha * x.lp, x.m};
  for (auto& m : r.m) m *= alpha;
  return r;
}

struct BlockData {
  int size = 0;
  MatrixXd f0;
  std::vector<std::pair<int, MatrixXd>> fk;
};

struct Data {
  int n = 0;
  VectorXd c;
  double c0 = 0.0;
  MatrixXd a;
  VectorXd b;
  MatrixXd glp;
  VectorXd hlp;
  std::vector<BlockData> blocks;
  ConeVec h;
  int degree = 0;
};

Data build_data(const ConicProgram& prog) {
  Data d;
  d.n = prog.num_vars();
  d.c = VectorXd::Zero(d.n);
  for (const auto& [k, v] : prog.objective.coeffs) d.c(k) += v;
  d.c0 = prog.objective.constant;

  const int pe = static_cast<int>(prog.equalities.size());
  d.a = MatrixXd::Zero(pe, d.n);
  d.b = VectorXd::Zero(pe);
  for (int r = 0; r < pe; ++r) {
    for (const auto& [k, v] : prog.equalities[r].expr.coeffs) d.a(r, k) += v;
    d.b(r) = -prog.equalities[r].expr.constant;
  }
  const int pl = static_cast<int>(prog.inequalities.size());
  d.glp = MatrixXd::Zero(pl, d.n);
  d.hlp = VectorXd::Zero(pl);
  for (int r = 0; r < pl; ++r) {
    for (const auto& [k, v] : prog.inequalities[r].expr.coeffs) d.glp(r, k) -= v;
    d.hlp(r) = prog.inequalities[r].expr.constant;
  }
  d.h.lp = d.hlp;
  d.degree = pl;
  for (const auto& blk : prog.blocks) {
    BlockData bd;
    bd.size = blk.size;
    bd.f0 = MatrixXd::Zero(blk.size, blk.size);
    std::map<int, MatrixXd> fk;
    for (const auto& e : blk.entries) {
      bd.f0(e.i, e.j) += e.expr.constant;
      if (e.i != e.j) bd.f0(e.j, e.i) += e.expr.constant;
      for (const auto& [k, v] : e.expr.coeffs) {
        auto [it, fresh] = fk.try_emplace(k, MatrixXd::Zero(blk.size, blk.size));
        it->second(e.i, e.j) += v;
        if (e.i != e.j) it->second(e.j, e.i) += v;
      }
    }
    for (auto& [k, m] : fk) bd.fk.emplace_back(k, std::move(m));
    d.h.m.push_back(bd.f0);
    d.degree += blk.size;
    d.blocks.push_back(std::move(bd));
  }
  return d;
}

ConeVec apply_g(const Data& d, const VectorXd& x) {
  ConeVec r;
  r.lp = d.glp * x;
  for (const auto& bd : d.blocks) {
    MatrixXd m = MatrixXd::Zero(bd.size, bd.size);
    for (const auto& [k, f] : bd.fk) m -= x(k) * f;
    r.m.push_back(std::move(m));
  }
  return r;
}

VectorXd apply_gt(const Data& d, const ConeVec& z) {
  VectorXd r = d.glp.transpose() * z.lp;
  for (std::size_t j = 0; j < d.blocks.size(); ++j) {
    for (const auto& [k, f] : d.blocks[j].fk) r(k) -= f.cwiseProduct(z.m[j]).sum();
  }
  return r;
}

ConeVec identity(const Data& d) {
  ConeVec e;
  e.lp = VectorXd::Ones(d.glp.rows());
  for (const auto& bd : d.blocks) e.m.push_back(MatrixXd::Identity(bd.size, bd.size));
  return e;
}

/// Smallest alpha such that x + alpha e is in the cone, i.e. -min eigenvalue.
double cone_shift(const ConeVec& x) {
  double t = -kInf;
  if (x.lp.size()) t = std::max(t, -x.lp.minCoeff());
  for (const auto& m : x.m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    t = std::max(t, -es.eigenvalues().minCoeff());
  }
  return t;
}

/// Nesterov-Todd scaling W with W z = W^{-T} s = lambda.
struct Scaling {
  VectorXd w;       // LP: sqrt(s / z)
  VectorXd lam_lp;  // LP: sqrt(s z)
  std::vector<MatrixXd> r, rinv;
  std::vector<VectorXd> lam;
  bool ok = true;
};

Scaling identity_scaling(const Data& d) {
  Scaling sc;
  sc.w = VectorXd::Ones(d.glp.rows());
  sc.lam_lp = VectorXd::Ones(d.glp.rows());
  for (const auto& bd : d.blocks) {
    sc.r.push_back(MatrixXd::Identity(bd.size, bd.size));
    sc.rinv.push_back(MatrixXd::Identity(bd.size, bd.size));
    sc.lam.push_back(VectorXd::Ones(bd.size));
  }
  return sc;
}

Scaling compute_scaling(const ConeVec& s, const ConeVec& z) {
  Scaling sc;
  sc.w = (s.lp.array() / z.lp.array()).sqrt();
  sc.lam_lp = (s.lp.array() * z.lp.array()).sqrt();
  if (s.lp.size() && !(sc.w.allFinite() && sc.lam_lp.allFinite() && sc.w.minCoeff() > 0)) sc.ok = false;
  for (std::size_t j = 0; j < s.m.size(); ++j) {
    Eigen::LLT<MatrixXd> ls(s.m[j]);
    Eigen::LLT<MatrixXd> lz(z.m[j]);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
      sc.ok = false;
      return sc;
    }
    const MatrixXd lsm = ls.matrixL();
    const MatrixXd lzm = lz.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(lzm.transpose() * lsm, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd sig = svd.singularValues();
    if (sig.minCoeff() <= 0.0 || !sig.allFinite()) {
      sc.ok = false;
      return sc;
    }
    const MatrixXd& v = svd.matrixV();
    MatrixXd r = lsm * v * sig.cwiseSqrt().cwiseInverse().asDiagonal();
    MatrixXd lsinv = lsm.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(lsm.rows(), lsm.cols()));
    MatrixXd rinv = sig.cwiseSqrt().asDiagonal() * v.transpose() * lsinv;
    sc.r.push_back(std::move(r));
    sc.rinv.push_back(std::move(rinv));
    sc.lam.push_back(sig);
  }
  return sc;
}

// W z
ConeVec apply_w(const Scaling& sc, const ConeVec& u) {
  ConeVec r{sc.w.cwiseProduct(u.lp), {}};
  for (std::size_t j = 0; j < u.m.size(); ++j) r.m.push_back(sc.r[j].transpose() * u.m[j] * sc.r[j]);
  return r;
}

// W^{-T} s
ConeVec apply_winv_t(const Scaling& sc, const ConeVec& u) {
  ConeVec r{u.lp.cwiseQuotient(sc.w), {}};
  for (std::size_t j = 0; j < u.m.size(); ++j) r.m.push_back(sc.rinv[j] * u.m[j] * sc.rinv[j].transpose());
  return r;
}

// W^T u
ConeVec apply_wt(const Scaling& sc, const ConeVec& u) {
  ConeVec r{sc.w.cwiseProduct(u.lp), {}};
  for (std::size_t j = 0; j < u.m.size(); ++j) r.m.push_back(sc.r[j] * u.m[j] * sc.r[j].transpose());
  return r;
}

// (W^T W)^{-1} u
ConeVec apply_wtw_inv(const Scaling& sc, const ConeVec& u) {
  ConeVec r{u.lp.cwiseQuotient(sc.w.cwiseProduct(sc.w)), {}};
  for (std::size_t j = 0; j < u.m.size(); ++j) {
    const MatrixXd t = sc.rinv[j].transpose() * sc.rinv[j];
    r.m.push_back(t * u.m[j] * t);
  }
  return r;
}

// Solves lambda o v = u for v.
ConeVec lambda_solve(const Scaling& sc, const ConeVec& u) {
  ConeVec r{u.lp.cwiseQuotient(sc.lam_lp), {}};
  for (std::size_t j = 0; j < u.m.size(); ++j) {
    const VectorXd& l = sc.lam[j];
    MatrixXd v = u.m[j];
    for (int a = 0; a < v.rows(); ++a) {
      for (int b = 0; b < v.cols(); ++b) v(a, b) *= 2.0 / (l(a) + l(b));
    }
    r.m.push_back(std::move(v));
  }
  return r;
}

ConeVec circ(const ConeVec& a, const ConeVec& b) {
  ConeVec r{a.lp.cwiseProduct(b.lp), {}};
  for (std::size_t j = 0; j < a.m.size(); ++j) r.m.push_back(0.5 * (a.m[j] * b.m[j] + b.m[j] * a.m[j]));
  return r;
}

ConeVec lambda_vec(const Scaling& sc) {
  ConeVec r{sc.lam_lp, {}};
  for (const auto& l : sc.lam) r.m.push_back(l.asDiagonal().toDenseMatrix());
  return r;
}

/// Largest step alpha with lambda + alpha * d in the cone (lambda is the
/// scaled point, diagonal in every PSD block).
double max_step(const Scaling& sc, const ConeVec& d) {
  double alpha = kInf;
  for (int i = 0; i < d.lp.size(); ++i) {
    if (d.lp(i) < 0) alpha = std::min(alpha, -sc.lam_lp(i) / d.lp(i));
  }
  for (std::size_t j = 0; j < d.m.size(); ++j) {
    const VectorXd isq = sc.lam[j].cwiseSqrt().cwiseInverse();
    const MatrixXd m = isq.asDiagonal() * d.m[j] * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues().minCoeff();
    if (emin < 0) alpha = std::min(alpha, -1.0 / emin);
  }
  return alpha;
}

/// Factorization of [H A'; A 0] with H = G' (W'W)^{-1} G.
class KktSolver {
 public:
  KktSolver(const Data& d, const Scaling& sc) : d_(d), sc_(sc) {
    const int n = d.n;
    const int p = static_cast<int>(d.a.rows());
    MatrixXd hm = MatrixXd::Zero(n, n);
    if (d.glp.rows()) {
      const VectorXd wi = sc.w.cwiseProduct(sc.w).cwiseInverse();
      hm.noalias() += d.glp.transpose() * wi.asDiagonal() * d.glp;
    }
    for (std::size_t j = 0; j < d.blocks.size(); ++j) {
      const auto& bd = d.blocks[j];
      const int m = bd.size;
      const int nk = static_cast<int>(bd.fk.size());
      if (!nk) continue;
      MatrixXd cols(m * m, nk);
      for (int t = 0; t < nk; ++t) {
        MatrixXd pk = sc.rinv[j] * bd.fk[t].second * sc.rinv[j].transpose();
        cols.col(t) = Eigen::Map<VectorXd>(pk.data(), m * m);
      }
      const MatrixXd g = cols.transpose() * cols;
      for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) hm(bd.fk[a].first, bd.fk[b].first) += g(a, b);
      }
    }
    kkt_ = MatrixXd::Zero(n + p, n + p);
    kkt_.topLeftCorner(n, n) = hm;
    kkt_.topRightCorner(n, p) = d.a.transpose();
    kkt_.bottomLeftCorner(p, n) = d.a;
    const double scale = 1.0 + (n ? hm.diagonal().cwiseAbs().maxCoeff() : 0.0);
    const double delta = 1e-13 * scale;
    MatrixXd reg = kkt_;
    reg.topLeftCorner(n, n).diagonal().array() += delta;
    reg.bottomRightCorner(p, p).diagonal().array() -= delta;
    lu_.compute(reg);
  }

  /// Solves A'uy + G'uz = bx, A ux = by, G ux - W'W uz = bz.
  void solve(const VectorXd& bx, const VectorXd& by, const ConeVec& bz, VectorXd& ux, VectorXd& uy,
             ConeVec& uz) const {
    reduced(bx, by, bz, ux, uy, uz);
    // Refinement against the unreduced system.
    for (int it = 0; it < 3; ++it) {
      const VectorXd r1 = bx - d_.a.transpose() * uy - apply_gt(d_, uz);
      const VectorXd r2 = by - d_.a * ux;
      const ConeVec r3 = axpy(1.0, apply_wt(sc_, apply_w(sc_, uz)), axpy(-1.0, apply_g(d_, ux), bz));
      const double scale = 1.0 + std::max({bx.lpNorm<Eigen::Infinity>(), by.size() ? by.lpNorm<Eigen::Infinity>() : 0.0,
                                           norm(bz)});
      const double err = std::max({r1.size() ? r1.lpNorm<Eigen::Infinity>() : 0.0,
                                   r2.size() ? r2.lpNorm<Eigen::Infinity>() : 0.0, norm(r3)});
      if (err <= 1e-14 * scale) break;
      VectorXd cx, cy;
      ConeVec cz;
      reduced(r1, r2, r3, cx, cy, cz);
      ux += cx;
      uy += cy;
      uz = axpy(1.0, cz, uz);
    }
  }

 private:
  void reduced(const VectorXd& bx, const VectorXd& by, const ConeVec& bz, VectorXd& ux, VectorXd& uy,
               ConeVec& uz) const {
    const int n = d_.n;
    const int p = static_cast<int>(d_.a.rows());
    VectorXd rhs(n + p);
    rhs.head(n) = bx + apply_gt(d_, apply_wtw_inv(sc_, bz));
    rhs.tail(p) = by;
    VectorXd sol = lu_.solve(rhs);
    sol += lu_.solve(rhs - kkt_ * sol);
    ux = sol.head(n);
    uy = sol.tail(p);
    uz = apply_wtw_inv(sc_, axpy(-1.0, bz, apply_g(d_, ux)));
  }

  const Data& d_;
  const Scaling& sc_;
  MatrixXd kkt_;
  Eigen::PartialPivLU<MatrixXd> lu_;
};

}  // namespace

SolveResult solve(const ConicProgram& prog, const SolverConfig& cfg) { return ConicSolver(cfg).solve(prog); }

SolveResult ConicSolver::solve(const ConicProgram& prog) {
  if (!prog.lowered()) throw InvalidArgument("solve: program still contains geometric-mean cones");
  if (prog.num_vars() == 0) throw InvalidArgument("solve: program has no variables");
  prog.validate();

  const Data d = build_data(prog);
  const int n = d.n;
  const int p = static_cast<int>(d.a.rows());
  SolveResult res;

  const double resx0 = std::max(1.0, d.c.norm());
  const double resy0 = std::max(1.0, d.b.norm());
  const double resz0 = std::max(1.0, norm(d.h));

  // Starting point.
  VectorXd x, y;
  ConeVec s, z;
  {
    const Scaling sc = identity_scaling(d);
    const KktSolver kkt(d, sc);
    ConeVec uz;
    VectorXd uy;
    kkt.solve(VectorXd::Zero(n), d.b, d.h, x, uy, uz);
    s = scaled(-1.0, uz);
    VectorXd ux;
    kkt.solve(-d.c, VectorXd::Zero(p), scaled(0.0, d.h), ux, y, z);
  }
  const ConeVec e = identity(d);
  {
    const double ts = cone_shift(s);
    if (ts >= -1e-8 * std::max(1.0, norm(s))) s = axpy(1.0 + ts, e, s);
    const double tz = cone_shift(z);
    if (tz >= -1e-8 * std::max(1.0, norm(z))) z = axpy(1.0 + tz, e, z);
  }
  double tau = 1.0;
  double kappa = 1.0;
  const double nu = d.degree + 1.0;

  auto finish = [&](SolveStatus st, int iters) {
    res.status = st;
    res.iterations = iters;
    const double scale = (st == SolveStatus::optimal || st == SolveStatus::max_iter ||
                          st == SolveStatus::numerical_failure)
                             ? 1.0 / tau
                             : 1.0;
    res.x = x * scale;
    res.equality_duals = -y * scale;
    res.inequality_duals = z.lp * scale;
    res.block_duals.clear();
    for (const auto& m : z.m) res.block_duals.push_back(m * scale);
    return res;
  };

  for (int iter = 0; iter <= cfg_.max_iterations; ++iter) {
    const VectorXd gtz = apply_gt(d, z);
    const VectorXd hrx = -(d.a.transpose() * y) - gtz;  // -A'y - G'z
    const VectorXd rx = -hrx + d.c * tau;
    const VectorXd hry = d.a * x;
    const VectorXd ry = hry - d.b * tau;
    const ConeVec gx = apply_g(d, x);
    const ConeVec hrz = axpy(1.0, s, gx);
    const ConeVec rz = axpy(-tau, d.h, hrz);
    const double cx = d.c.dot(x);
    const double by = d.b.dot(y);
    const double hz = dot(d.h, z);
    const double rt = kappa + cx + by + hz;
    const double gap = dot(s, z);

    const double pcost = cx / tau + d.c0;
    const double dcost = -(by + hz) / tau + d.c0;
    const double pres = std::max(ry.norm() / resy0, norm(rz) / resz0) / tau;
    const double dres = rx.norm() / resx0 / tau;
    const double relgap = std::abs(pcost - dcost) / (1.0 + std::abs(pcost));
    const double compgap = gap / (tau * tau) / (1.0 + std::abs(pcost));

    res.primal_value = pcost;
    res.dual_value = dcost;
    res.primal_residual = pres;
    res.dual_residual = dres;
    res.relative_gap = relgap;
    if (cfg_.verbose) {
      std::fprintf(stderr, "%3d  pcost % .8e  dcost % .8e  gap %.2e  pres %.2e  dres %.2e  tau %.2e  kappa %.2e\n", iter,
                   pcost, dcost, gap, pres, dres, tau, kappa);
    }

    if (pres <= cfg_.feasibility_tol && dres <= cfg_.feasibility_tol && relgap <= cfg_.gap_tol &&
        compgap <= cfg_.gap_tol) {
      return finish(SolveStatus::optimal, iter);
    }
    const bool stalled = iter == cfg_.max_iterations || tau <= 1e-12 * std::max(1.0, x.norm());
    const double cert_tol = stalled ? std::sqrt(cfg_.feasibility_tol) : cfg_.feasibility_tol;
    if (by + hz < 0.0) {
      const double pinf = hrx.norm() / resx0 / -(by + hz);
      if (pinf <= cert_tol) {
        const double sc = 1.0 / -(by + hz);
        y *= sc;
        z = scaled(sc, z);
        res.primal_value = kInf;
        res.dual_value = kInf;
        return finish(SolveStatus::infeasible, iter);
      }
    }
    if (cx < 0.0) {
      const double dinf = std::max(hry.norm() / resy0, norm(hrz) / resz0) / -cx;
      if (dinf <= cert_tol) {
        const double sc = 1.0 / -cx;
        x *= sc;
        s = scaled(sc, s);
        res.primal_value = -kInf;
        res.dual_value = -kInf;
        return finish(SolveStatus::unbounded, iter);
      }
    }
    if (iter == cfg_.max_iterations) break;

    const Scaling sc = compute_scaling(s, z);
    if (!sc.ok) return finish(SolveStatus::numerical_failure, iter);
    const KktSolver kkt(d, sc);

    VectorXd x1, y1;
    ConeVec z1;
    kkt.solve(-d.c, d.b, d.h, x1, y1, z1);
    const double c1 = d.c.dot(x1) + d.b.dot(y1) + dot(d.h, z1);

    const double mu = (gap + tau * kappa) / nu;
    const ConeVec lam = lambda_vec(sc);
    const ConeVec lamsq = circ(lam, lam);

    struct Direction {
      VectorXd dx, dy;
      ConeVec dz, ds, dzs, dss;  // dzs = W dz, dss = W^{-T} ds
      double dtau = 0.0, dkappa = 0.0;
    };
    auto direction = [&](double rho, const ConeVec& rhs_s, double rhs_tau) {
      Direction dir;
      const ConeVec v = lambda_solve(sc, rhs_s);
      const ConeVec bz = axpy(-1.0, apply_wt(sc, v), scaled(-rho, rz));
      VectorXd ux, uy;
      ConeVec uz;
      kkt.solve(-rho * rx, -rho * ry, bz, ux, uy, uz);
      const double c0 = d.c.dot(ux) + d.b.dot(uy) + dot(d.h, uz);
      dir.dtau = (-rho * rt - c0 - rhs_tau / tau) / (c1 - kappa / tau);
      dir.dx = ux + dir.dtau * x1;
      dir.dy = uy + dir.dtau * y1;
      dir.dz = axpy(dir.dtau, z1, uz);
      dir.dzs = apply_w(sc, dir.dz);
      // From the linearized residual equation rather than W^T(v - W dz),
      // which loses accuracy once W is badly conditioned.
      dir.ds = axpy(dir.dtau, d.h, axpy(-1.0, apply_g(d, dir.dx), scaled(-rho, rz)));
      dir.dss = apply_winv_t(sc, dir.ds);
      dir.dkappa = (rhs_tau - kappa * dir.dtau) / tau;
      return dir;
    };
    auto step_length = [&](const Direction& dir) {
      double a = std::min(max_step(sc, dir.dss), max_step(sc, dir.dzs));
      if (dir.dtau < 0) a = std::min(a, -tau / dir.dtau);
      if (dir.dkappa < 0) a = std::min(a, -kappa / dir.dkappa);
      return a;
    };

    const Direction aff = direction(1.0, scaled(-1.0, lamsq), -tau * kappa);
    const double alpha_aff = std::min(1.0, step_length(aff));
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    ConeVec rhs_s = axpy(-1.0, circ(aff.dss, aff.dzs), scaled(-1.0, lamsq));
    rhs_s = axpy(sigma * mu, e, rhs_s);
    const double rhs_tau = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
    const Direction dir = direction(1.0 - sigma, rhs_s, rhs_tau);
    const double alpha = std::min(1.0, cfg_.step_fraction * step_length(dir));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) return finish(SolveStatus::numerical_failure, iter);

    x += alpha * dir.dx;
    y += alpha * dir.dy;
    s = axpy(alpha, dir.ds, s);
    z = axpy(alpha, dir.dz, z);
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
    for (auto* cv : {&s, &z}) {
      for (auto& m : cv->m) m = 0.5 * (m + m.transpose()).eval();
    }
    if (!x.allFinite() || !(tau > 0.0)) return finish(SolveStatus::numerical_failure, iter);
  }
  return finish(SolveStatus::max_iter, cfg_.max_iterations);
}

}  // namespace prelax
