// Constrained least-squares fit of a null curve to sampled target data.
//
// Split coordinates P = Phi1 - i Phi2, q = Phi3, S = -(Phi1 + i Phi2) turn
// the data residuals into three decoupled linear systems tied together only
// by the product constraint P*S = q^2.  The fit alternates penalized linear
// solves over the three blocks, recovers a derivative pair z = P, w ~ q/z,
// and polishes the pair with Levenberg-Marquardt (residuals are holomorphic
// in the coefficients, so the complex normal equations apply directly).
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ncg/nullcurve.hpp"

namespace ncg {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct Samples {
  std::vector<cplx> zeta;
  std::vector<double> wt;
  std::vector<CVec3> values, derivs;   // original coordinates
  std::vector<cplx> dP, dq, dS;        // split derivative targets
  std::vector<cplx> vP, vq, vS;        // split value targets
  double scale = 1.0;                  // normalization applied to targets
};

Samples collect(const GeneralizedTarget& target) {
  Samples s;
  for (const TargetPiece& piece : target.pieces) {
    for (size_t k = 0; k < piece.zeta.size(); ++k) {
      s.zeta.push_back(piece.zeta[k]);
      s.wt.push_back(piece.weight);
      s.values.push_back(piece.values[k]);
      s.derivs.push_back(piece.derivs[k]);
    }
  }
  double t = 1.0;
  for (size_t k = 0; k < s.zeta.size(); ++k) {
    t = std::max(t, s.values[k].cwiseAbs().maxCoeff());
    t = std::max(t, s.derivs[k].cwiseAbs().maxCoeff());
  }
  s.scale = t;
  for (size_t k = 0; k < s.zeta.size(); ++k) {
    const CVec3 v = s.values[k] / t, d = s.derivs[k] / t;
    s.dP.push_back(d(0) - cplx(0, 1) * d(1));
    s.dq.push_back(d(2));
    s.dS.push_back(-(d(0) + cplx(0, 1) * d(1)));
    s.vP.push_back(v(0) - cplx(0, 1) * v(1));
    s.vq.push_back(v(2));
    s.vS.push_back(-(v(0) + cplx(0, 1) * v(1)));
  }
  return s;
}

std::vector<int> power_list(int lo, int hi, bool drop_minus_one) {
  std::vector<int> pw;
  for (int k = lo; k <= hi; ++k)
    if (!(drop_minus_one && k == -1)) pw.push_back(k);
  return pw;
}

VectorXcd ridge_solve(MatrixXcd g, const VectorXcd& rhs, double ridge_rel) {
  const double tr = std::max(g.trace().real(), 1e-300);
  g.diagonal().array() += ridge_rel * tr / double(g.rows());
  return g.ldlt().solve(rhs);
}

// One split-coordinate block: data rows and cached normal-equation pieces.
// Columns are the basis powers plus one trailing integration constant.
struct LinBlock {
  std::vector<int> pw;
  MatrixXcd ad, av;
  VectorXcd bd, bv;
  VectorXcd col_scale;
  MatrixXcd gdata;
  VectorXcd rdata;

  int ncols() const { return int(pw.size()) + 1; }

  void build(const Samples& s, const std::vector<cplx>& dtar,
             const std::vector<cplx>& vtar, double wd, double wv) {
    const int nk = int(s.zeta.size()), nc = ncols();
    ad = MatrixXcd::Zero(nk, nc);
    av = MatrixXcd::Zero(nk, nc);
    bd = VectorXcd::Zero(nk);
    bv = VectorXcd::Zero(nk);
    for (int k = 0; k < nk; ++k) {
      const cplx z = s.zeta[size_t(k)];
      const double swd = std::sqrt(s.wt[size_t(k)] * wd);
      const double swv = std::sqrt(s.wt[size_t(k)] * wv);
      for (size_t c = 0; c < pw.size(); ++c) {
        const int p = pw[c];
        const cplx zp = std::pow(z, p);
        ad(k, int(c)) = swd * zp;
        av(k, int(c)) = swv * zp * z / double(p + 1);
      }
      av(k, nc - 1) = swv;
      bd(k) = swd * dtar[size_t(k)];
      bv(k) = swv * vtar[size_t(k)];
    }
    col_scale = VectorXcd::Ones(nc);
    for (int c = 0; c < nc; ++c) {
      const double n = std::max(ad.col(c).cwiseAbs().maxCoeff(),
                                av.col(c).cwiseAbs().maxCoeff());
      col_scale(c) = n > 1e-300 ? n : 1.0;
      ad.col(c) /= col_scale(c);
      av.col(c) /= col_scale(c);
    }
    gdata = ad.adjoint() * ad + av.adjoint() * av;
    rdata = ad.adjoint() * bd + av.adjoint() * bv;
  }

  // Solve with the product-constraint penalty rows lambda*(conv(x, other) -
  // rhs_poly) added in.  other == nullptr solves the data-only problem.
  void solve(const LaurentPoly* other, const LaurentPoly& rhs_poly, double lambda,
             LaurentPoly& out_poly, cplx& out_const) const {
    MatrixXcd g = gdata;
    VectorXcd r = rdata;
    if (other && lambda > 0 && !other->empty()) {
      const int mlo = pw.front() + other->kmin();
      const int mhi = pw.back() + other->kmax();
      const int nm = mhi - mlo + 1, nc = ncols();
      MatrixXcd c = MatrixXcd::Zero(nm, nc);
      VectorXcd t = VectorXcd::Zero(nm);
      for (int m = mlo; m <= mhi; ++m) {
        for (size_t a = 0; a < pw.size(); ++a)
          c(m - mlo, int(a)) = other->coeff(m - pw[a]) / col_scale(int(a));
        t(m - mlo) = rhs_poly.coeff(m);
      }
      g.noalias() += lambda * (c.adjoint() * c);
      r.noalias() += lambda * (c.adjoint() * t);
    }
    const VectorXcd x = ridge_solve(std::move(g), r, 1e-13);
    out_poly = LaurentPoly();
    for (size_t a = 0; a < pw.size(); ++a)
      out_poly.set_coeff(pw[a], x(int(a)) / col_scale(int(a)));
    out_poly = out_poly.truncated(1e-300);
    out_const = x(ncols() - 1) / col_scale(ncols() - 1);
  }
};

// Least-squares w with z*w ~ q on the sample points plus a stabilizer ring.
LaurentPoly recover_w(const LaurentPoly& z, const LaurentPoly& q,
                      const std::vector<cplx>& pts, const std::vector<int>& pww) {
  std::vector<cplx> all = pts;
  double rsum = 0.0;
  for (cplx p : pts) rsum += std::abs(p);
  const double ring = pts.empty() ? 0.9 : rsum / double(pts.size());
  for (int j = 0; j < 64; ++j)
    all.push_back(std::polar(ring, 2.0 * M_PI * j / 64.0));
  const int nk = int(all.size()), nc = int(pww.size());
  MatrixXcd a(nk, nc);
  VectorXcd b(nk);
  for (int k = 0; k < nk; ++k) {
    const cplx zeta = all[size_t(k)];
    const cplx zv = z.eval(zeta);
    for (int c = 0; c < nc; ++c) a(k, c) = zv * std::pow(zeta, pww[size_t(c)]);
    b(k) = q.eval(zeta);
  }
  VectorXcd scale = VectorXcd::Ones(nc);
  for (int c = 0; c < nc; ++c) {
    const double n = a.col(c).cwiseAbs().maxCoeff();
    scale(c) = n > 1e-300 ? n : 1.0;
    a.col(c) /= scale(c);
  }
  const VectorXcd x = ridge_solve(a.adjoint() * a, a.adjoint() * b, 1e-12);
  LaurentPoly w;
  for (int c = 0; c < nc; ++c) w.set_coeff(pww[size_t(c)], x(c) / scale(c));
  return w.truncated(1e-300);
}

std::array<LaurentPoly, 3> weier_triple(const LaurentPoly& z, const LaurentPoly& w) {
  const LaurentPoly zw2 = z * (w * w);
  return {0.5 * (z - zw2), cplx(0, 0.5) * (z + zw2), z * w};
}

// Remove the zeta^{-1} coefficients of the triple by a minimum-norm Newton
// correction of the pair coefficients.
void project_periods(LaurentPoly& z, LaurentPoly& w, const std::vector<int>& pwz,
                     const std::vector<int>& pww) {
  for (int pass = 0; pass < 4; ++pass) {
    const std::array<LaurentPoly, 3> phi = weier_triple(z, w);
    Eigen::Vector3cd g(phi[0].coeff(-1), phi[1].coeff(-1), phi[2].coeff(-1));
    double scale = 0.0;
    for (const LaurentPoly& p : phi) scale = std::max(scale, p.max_abs_coeff());
    if (g.cwiseAbs().maxCoeff() <= 1e-15 * std::max(scale, 1e-300)) return;
    const LaurentPoly w2 = w * w, zw = z * w;
    const int nz = int(pwz.size()), nw = int(pww.size());
    MatrixXcd jac(3, nz + nw);
    for (int a = 0; a < nz; ++a) {
      const int m = pwz[size_t(a)];
      jac(0, a) = 0.5 * ((m == -1 ? 1.0 : 0.0) - w2.coeff(-1 - m));
      jac(1, a) = cplx(0, 0.5) * ((m == -1 ? 1.0 : 0.0) + w2.coeff(-1 - m));
      jac(2, a) = w.coeff(-1 - m);
    }
    for (int b = 0; b < nw; ++b) {
      const int n = pww[size_t(b)];
      jac(0, nz + b) = -zw.coeff(-1 - n);
      jac(1, nz + b) = cplx(0, 1) * zw.coeff(-1 - n);
      jac(2, nz + b) = z.coeff(-1 - n);
    }
    Eigen::Matrix3cd gram = jac * jac.adjoint();
    gram.diagonal().array() += 1e-14 * std::max(gram.trace().real(), 1e-300);
    const VectorXcd delta = -jac.adjoint() * gram.ldlt().solve(g);
    for (int a = 0; a < nz; ++a)
      z.set_coeff(pwz[size_t(a)], z.coeff(pwz[size_t(a)]) + delta(a));
    for (int b = 0; b < nw; ++b)
      w.set_coeff(pww[size_t(b)], w.coeff(pww[size_t(b)]) + delta(nz + b));
  }
}

struct LmProblem {
  const Samples* s = nullptr;
  std::vector<int> pwz, pww;
  double wv = 1.0, wd = 1.0;
  double period_weight = 0.0;  // annulus only

  int n_params() const { return int(pwz.size() + pww.size()) + 3; }
  int n_resid() const { return 6 * int(s->zeta.size()) + (period_weight > 0 ? 3 : 0); }

  void unpack(const VectorXcd& x, LaurentPoly& z, LaurentPoly& w, CVec3& c) const {
    z = LaurentPoly();
    w = LaurentPoly();
    const int nz = int(pwz.size()), nw = int(pww.size());
    for (int a = 0; a < nz; ++a) z.set_coeff(pwz[size_t(a)], x(a));
    for (int b = 0; b < nw; ++b) w.set_coeff(pww[size_t(b)], x(nz + b));
    c = CVec3(x(nz + nw), x(nz + nw + 1), x(nz + nw + 2));
  }

  VectorXcd pack(const LaurentPoly& z, const LaurentPoly& w, const CVec3& c) const {
    VectorXcd x(n_params());
    const int nz = int(pwz.size()), nw = int(pww.size());
    for (int a = 0; a < nz; ++a) x(a) = z.coeff(pwz[size_t(a)]);
    for (int b = 0; b < nw; ++b) x(nz + b) = w.coeff(pww[size_t(b)]);
    x(nz + nw) = c(0);
    x(nz + nw + 1) = c(1);
    x(nz + nw + 2) = c(2);
    return x;
  }

  VectorXcd residual(const VectorXcd& x) const {
    LaurentPoly z, w;
    CVec3 c;
    unpack(x, z, w, c);
    const std::array<LaurentPoly, 3> phi = weier_triple(z, w);
    std::array<LaurentPoly, 3> prim;
    std::array<cplx, 3> pcoef{phi[0].coeff(-1), phi[1].coeff(-1), phi[2].coeff(-1)};
    for (int j = 0; j < 3; ++j) {
      LaurentPoly p = phi[size_t(j)];
      p.set_coeff(-1, 0);  // integrate the exact part; the rest is penalized
      prim[size_t(j)] = p.antiderivative();
    }
    VectorXcd r(n_resid());
    const int nk = int(s->zeta.size());
    for (int k = 0; k < nk; ++k) {
      const cplx zeta = s->zeta[size_t(k)];
      const double swv = std::sqrt(s->wt[size_t(k)] * wv);
      const double swd = std::sqrt(s->wt[size_t(k)] * wd);
      for (int j = 0; j < 3; ++j) {
        const cplx fj = c(j) + prim[size_t(j)].eval(zeta);
        r(6 * k + j) = swv * (fj - s->values[size_t(k)](j) / s->scale);
        r(6 * k + 3 + j) =
            swd * (phi[size_t(j)].eval(zeta) - s->derivs[size_t(k)](j) / s->scale);
      }
    }
    if (period_weight > 0)
      for (int j = 0; j < 3; ++j) r(6 * nk + j) = period_weight * pcoef[size_t(j)];
    return r;
  }

  MatrixXcd jacobian(const VectorXcd& x) const {
    LaurentPoly z, w;
    CVec3 c;
    unpack(x, z, w, c);
    const LaurentPoly one = LaurentPoly::constant(1.0);
    const LaurentPoly w2 = w * w, zw = z * w;
    // dPhi/dz_m = hz * zeta^m, dPhi/dw_n = hw * zeta^n, componentwise.
    const std::array<LaurentPoly, 3> hz = {0.5 * (one - w2), cplx(0, 0.5) * (one + w2),
                                           w};
    const std::array<LaurentPoly, 3> hw = {-1.0 * zw, cplx(0, 1) * zw, z};
    const int nz = int(pwz.size()), nw = int(pww.size()), nk = int(s->zeta.size());
    MatrixXcd jac = MatrixXcd::Zero(n_resid(), n_params());

    // Per-sample power table zeta^e covering every exponent the rows touch.
    int elo = 0, ehi = 0;
    for (const auto* h : {&hz, &hw})
      for (const LaurentPoly& p : *h)
        if (!p.empty()) {
          elo = std::min(elo, p.kmin() + std::min(pwz.front(), pww.front()) - 1);
          ehi = std::max(ehi, p.kmax() + std::max(pwz.back(), pww.back()) + 1);
        }
    std::vector<std::vector<cplx>> pow_tab(static_cast<size_t>(nk));
    for (int k = 0; k < nk; ++k) {
      std::vector<cplx>& t = pow_tab[size_t(k)];
      t.resize(size_t(ehi - elo + 1));
      const cplx zeta = s->zeta[size_t(k)];
      t[size_t(-elo)] = 1.0;
      for (int e = 1; e <= ehi; ++e) t[size_t(e - elo)] = t[size_t(e - 1 - elo)] * zeta;
      for (int e = -1; e >= elo; --e) t[size_t(e - elo)] = t[size_t(e + 1 - elo)] / zeta;
    }

    auto fill_cols = [&](int col0, const std::vector<int>& pw,
                         const std::array<LaurentPoly, 3>& h) {
      for (int j = 0; j < 3; ++j) {
        const LaurentPoly& hj = h[size_t(j)];
        if (hj.empty()) continue;
        for (int k = 0; k < nk; ++k) {
          const std::vector<cplx>& t = pow_tab[size_t(k)];
          const double swv = std::sqrt(s->wt[size_t(k)] * wv);
          const double swd = std::sqrt(s->wt[size_t(k)] * wd);
          for (size_t a = 0; a < pw.size(); ++a) {
            const int m = pw[a];
            cplx dacc = 0, vacc = 0;
            for (int b = hj.kmin(); b <= hj.kmax(); ++b) {
              const int e = b + m;
              dacc += hj.coeff(b) * t[size_t(e - elo)];
              if (e != -1)  // the zeta^{-1} part is penalized separately
                vacc += hj.coeff(b) / double(e + 1) * t[size_t(e + 1 - elo)];
            }
            jac(6 * k + 3 + j, col0 + int(a)) = swd * dacc;
            jac(6 * k + j, col0 + int(a)) = swv * vacc;
          }
        }
        if (period_weight > 0)
          for (size_t a = 0; a < pw.size(); ++a)
            jac(6 * nk + j, col0 + int(a)) = period_weight * hj.coeff(-1 - pw[a]);
      }
    };
    fill_cols(0, pwz, hz);
    fill_cols(nz, pww, hw);
    for (int k = 0; k < nk; ++k) {
      const double swv = std::sqrt(s->wt[size_t(k)] * wv);
      for (int j = 0; j < 3; ++j) jac(6 * k + j, nz + nw + j) = swv;
    }
    return jac;
  }
};

}  // namespace

NullCurveRep runge_fit(const GeneralizedTarget& target, int degree,
                       const DomainSpec& dom, const FitOptions& opts,
                       FitReport* report) {
  if (degree < 0) throw std::invalid_argument("fit degree must be nonnegative");
  target.validate();
  const Samples s = collect(target);
  for (cplx z : s.zeta)
    if (!dom.contains(z, 1e-6))
      throw std::invalid_argument("target sample outside the fit domain");

  const bool annulus = !dom.is_disc();
  const int dz = degree;
  const int dw = opts.degree_w >= 0 ? opts.degree_w : degree;
  const int kz = annulus ? opts.kmin : std::max(opts.kmin, 0);
  const int kw = annulus ? opts.kmin : std::max(opts.kmin, 0);
  if (kz > dz || kw > dw) throw std::invalid_argument("empty coefficient span");

  const std::vector<int> pwz = power_list(kz, dz, annulus);
  const std::vector<int> pww = power_list(kw, dw, annulus);
  const std::vector<int> pwq = power_list(kz + kw, dz + dw, annulus);
  const std::vector<int> pws = power_list(kz + 2 * kw, dz + 2 * dw, annulus);

  // The pair chart misses derivative directions with Phi1 = i*Phi2; when the
  // data sits near that ray, fit the mirrored target (swap the roles of P and
  // S) and flip back at the end.
  double np = 0, ns = 0;
  for (size_t k = 0; k < s.zeta.size(); ++k) {
    np += std::norm(s.dP[k]) + std::norm(s.vP[k]);
    ns += std::norm(s.dS[k]) + std::norm(s.vS[k]);
  }
  const bool flipped = ns > 100.0 * np;
  Samples sf = s;
  if (flipped) {
    std::swap(sf.dP, sf.dS);
    std::swap(sf.vP, sf.vS);
    for (size_t k = 0; k < sf.zeta.size(); ++k) {
      sf.values[k](0) = -sf.values[k](0);
      sf.derivs[k](0) = -sf.derivs[k](0);
    }
  }

  LinBlock bp, bq, bs;
  bp.pw = pwz;
  bq.pw = pwq;
  bs.pw = pws;
  bp.build(sf, sf.dP, sf.vP, opts.deriv_weight, opts.value_weight);
  bq.build(sf, sf.dq, sf.vq, opts.deriv_weight, opts.value_weight);
  bs.build(sf, sf.dS, sf.vS, opts.deriv_weight, opts.value_weight);

  LaurentPoly P, q, S;
  cplx cP{}, cq{}, cS{};
  const bool q_fixed = opts.fixed_phi3.has_value();
  bp.solve(nullptr, {}, 0, P, cP);
  bs.solve(nullptr, {}, 0, S, cS);
  if (q_fixed) {
    q = (1.0 / s.scale) * *opts.fixed_phi3;
    if (flipped) throw std::invalid_argument("fixed third component with mirrored data");
    if (annulus && std::abs(q.coeff(-1)) > 1e-12 * std::max(q.max_abs_coeff(), 1e-300))
      throw std::invalid_argument("fixed third component has a period");
    double wsum = 0;
    cq = 0;
    LaurentPoly qp = q;
    qp.set_coeff(-1, 0);
    const LaurentPoly iq = qp.antiderivative();
    for (size_t k = 0; k < sf.zeta.size(); ++k) {
      cq += sf.wt[k] * (sf.vq[k] - iq.eval(sf.zeta[k]));
      wsum += sf.wt[k];
    }
    cq /= wsum;
  } else {
    bq.solve(nullptr, {}, 0, q, cq);
  }

  for (int sweep = 0; sweep < opts.als_sweeps; ++sweep) {
    const double lambda = opts.penalty_start * std::pow(opts.penalty_growth, sweep);
    const LaurentPoly qq = q * q;
    bp.solve(&S, qq, lambda, P, cP);
    bs.solve(&P, qq, lambda, S, cS);
    if (!q_fixed) {
      // Linearized rows: 2 q_cur * q ~ conv(P,S) + q_cur^2.
      const LaurentPoly lin_rhs = P * S + qq;
      const LaurentPoly two_q = 2.0 * q;
      bq.solve(&two_q, lin_rhs, lambda, q, cq);
    }
  }

  LaurentPoly z = s.scale * P;
  LaurentPoly w = recover_w(z, s.scale * q, sf.zeta, pww);
  if (annulus) project_periods(z, w, pwz, pww);

  LmProblem lm;
  lm.s = &sf;
  lm.pwz = pwz;
  lm.pww = pww;
  lm.wv = opts.value_weight;
  lm.wd = opts.deriv_weight;
  lm.period_weight = annulus ? 1e3 : 0.0;

  CVec3 cc;
  {
    // Integration constants from a linear refit against the recovered pair.
    const std::array<LaurentPoly, 3> phi = weier_triple(z, w);
    for (int j = 0; j < 3; ++j) {
      LaurentPoly p = phi[size_t(j)];
      p.set_coeff(-1, 0);
      const LaurentPoly prim = p.antiderivative();
      cplx acc = 0;
      double wsum = 0;
      for (size_t k = 0; k < sf.zeta.size(); ++k) {
        acc += sf.wt[k] * (sf.values[k](j) / s.scale - prim.eval(sf.zeta[k]));
        wsum += sf.wt[k];
      }
      cc(j) = acc / wsum;
    }
  }

  VectorXcd x = lm.pack((1.0 / s.scale) * z, w, cc);
  VectorXcd r = lm.residual(x);
  double res2 = r.squaredNorm();
  int iters = 0;
  bool converged = false;
  if (opts.polish) {
    double mu = 1e-4;
    for (; iters < opts.max_iter; ++iters) {
      const MatrixXcd jac = lm.jacobian(x);
      MatrixXcd g = jac.adjoint() * jac;
      const VectorXcd grad = jac.adjoint() * r;
      bool stepped = false;
      for (int tries = 0; tries < 12; ++tries) {
        MatrixXcd gm = g;
        for (int i = 0; i < gm.rows(); ++i)
          gm(i, i) += mu * (std::abs(g(i, i)) + 1e-12);
        const VectorXcd dx = gm.ldlt().solve(-grad);
        const VectorXcd xn = x + dx;
        const VectorXcd rn = lm.residual(xn);
        const double rn2 = rn.squaredNorm();
        if (rn2 < res2) {
          const double rel = (res2 - rn2) / std::max(res2, 1e-300);
          x = xn;
          r = rn;
          res2 = rn2;
          mu = std::max(mu * 0.3, 1e-12);
          stepped = true;
          if (rel < opts.tol_rel) converged = true;
          break;
        }
        mu *= 4.0;
      }
      if (!stepped) {
        converged = res2 < 1e-24;
        break;
      }
      if (converged) break;
    }
  }

  LaurentPoly zf, wf;
  CVec3 cf;
  lm.unpack(x, zf, wf, cf);
  zf = s.scale * zf;
  if (annulus) project_periods(zf, wf, pwz, pww);
  if (zf.empty())
    throw std::runtime_error("fit collapsed to an identically zero derivative");

  std::array<LaurentPoly, 3> phi = weier_triple(zf, wf);
  for (int j = 0; j < 3; ++j) phi[size_t(j)].set_coeff(-1, 0);
  if (flipped) phi[0] = -phi[0];

  // Re-fit the integration constants in original units.
  std::array<LaurentPoly, 3> prim;
  for (int j = 0; j < 3; ++j) prim[size_t(j)] = phi[size_t(j)].antiderivative();
  CVec3 cbest;
  {
    double wsum = 0;
    CVec3 acc = CVec3::Zero();
    for (size_t k = 0; k < s.zeta.size(); ++k) {
      for (int j = 0; j < 3; ++j)
        acc(j) += s.wt[k] * (s.values[k](j) - prim[size_t(j)].eval(s.zeta[k]));
      wsum += s.wt[k];
    }
    cbest = acc / wsum;
  }

  const cplx zeta0 = dom.is_disc() ? cplx(0, 0) : cplx(0.5 * (1.0 + dom.r_in), 0.0);
  CVec3 f0;
  for (int j = 0; j < 3; ++j) f0(j) = cbest(j) + prim[size_t(j)].eval(zeta0);
  NullCurveRep rep = NullCurveRep::checked(dom, phi, zeta0, f0);

  if (report) {
    double sup_v = 0, sup_d = 0;
    for (size_t k = 0; k < s.zeta.size(); ++k) {
      CVec3 fv, dv;
      for (int j = 0; j < 3; ++j) {
        fv(j) = cbest(j) + prim[size_t(j)].eval(s.zeta[k]);
        dv(j) = phi[size_t(j)].eval(s.zeta[k]);
      }
      sup_v = std::max(sup_v, std::sqrt((fv - s.values[k]).squaredNorm()));
      sup_d = std::max(sup_d, std::sqrt((dv - s.derivs[k]).squaredNorm()));
    }
    report->sup_value_dev = sup_v;
    report->sup_deriv_dev = sup_d;
    report->rms_residual = std::sqrt(res2 / std::max(1, lm.n_resid())) * s.scale;
    report->nullity_residual = rep.nullity_residual();
    report->lm_iterations = iters;
    report->converged = converged || !opts.polish;
    if (!report->converged) report->note = "optimizer stagnation; best residual kept";
  }
  return rep;
}

}  // namespace ncg
