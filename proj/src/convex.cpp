#include "ncg/convex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncg {
namespace {

// Orthonormal basis of the tangent space at unit u (columns).
MatXd tangent_basis(const VecXd& u) {
  const int n = int(u.size());
  Eigen::HouseholderQR<MatXd> qr(u);
  MatXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

// Pattern search on the unit sphere; linear convergence is plenty because the
// probe step goes all the way down to 1e-13.
template <class F>
VecXd pattern_opt_sphere(const F& f, VecXd u, bool minimize, double step = 0.25) {
  const int n = int(u.size());
  u.normalize();
  double best = f(u);
  const double sgn = minimize ? 1.0 : -1.0;
  while (step > 1e-13) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      for (double s : {step, -step}) {
        VecXd cand = u;
        cand(i) += s;
        cand.normalize();
        const double val = f(cand);
        if (sgn * (val - best) < 0) {
          best = val;
          u = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return u;
}

// Coarse sphere sweep plus refinement from the leading candidates.
template <class F>
double sweep_extremum(const F& f, int dim, bool minimize, uint64_t seed,
                      const std::vector<VecXd>& extra_seeds = {}) {
  const int coarse = std::max(512, 128 * dim);
  std::vector<VecXd> pts = sphere_samples(dim, coarse, seed);
  for (const VecXd& e : extra_seeds) pts.push_back(e.normalized());
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(pts.size());
  for (int i = 0; i < int(pts.size()); ++i) ranked.push_back({f(pts[i]), i});
  std::sort(ranked.begin(), ranked.end());
  if (!minimize) std::reverse(ranked.begin(), ranked.end());
  double best = ranked.front().first;
  const int tops = std::min<int>(8, int(ranked.size()));
  for (int k = 0; k < tops; ++k) {
    VecXd u = pattern_opt_sphere(f, pts[ranked[k].second], minimize);
    const double val = f(u);
    if (minimize ? val < best : val > best) best = val;
  }
  return best;
}

}  // namespace

WideSeq WideSeq::of_one_based(std::vector<int> one_based) {
  std::sort(one_based.begin(), one_based.end());
  WideSeq out;
  int prev = 0;
  for (int v : one_based) {
    if (v < 1 || v > 6) throw std::invalid_argument("coordinate index out of 1..6");
    if (v == prev) throw std::invalid_argument("repeated coordinate index");
    prev = v;
    out.idx.push_back(v - 1);
  }
  return out;
}

bool WideSeq::wide() const {
  if (idx.size() < 2) return false;
  if (idx.size() != 2) return true;
  const int a = idx[0], b = idx[1];
  return !((a == 0 && b == 1) || (a == 2 && b == 3) || (a == 4 && b == 5));
}

VecXd project_coords(const VecXd& x, const WideSeq& rho) {
  VecXd out(rho.size());
  for (int i = 0; i < rho.size(); ++i) {
    if (rho.idx[i] >= x.size()) throw std::invalid_argument("projection index out of range");
    out(i) = x(rho.idx[i]);
  }
  return out;
}

SupportBody SupportBody::ball(const VecXd& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
  SupportBody b;
  b.kind_ = Kind::Ball;
  b.center_ = center;
  b.radius_ = radius;
  return b;
}

SupportBody SupportBody::ellipsoid(const VecXd& center, const MatXd& shape) {
  const int n = int(center.size());
  if (shape.rows() != n || shape.cols() != n)
    throw std::invalid_argument("shape matrix size mismatch");
  if ((shape - shape.transpose()).norm() > 1e-12 * (1.0 + shape.norm()))
    throw std::invalid_argument("shape matrix must be symmetric");
  Eigen::LLT<MatXd> llt(shape);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("shape matrix must be positive definite");
  SupportBody b;
  b.kind_ = Kind::Ellipsoid;
  b.center_ = center;
  b.shape_ = 0.5 * (shape + shape.transpose());
  return b;
}

double SupportBody::ball_radius() const {
  if (kind_ != Kind::Ball) throw std::logic_error("not a ball");
  return radius_;
}

double SupportBody::h(const VecXd& u) const {
  const double nu = u.norm();
  if (kind_ == Kind::Ball) return center_.dot(u) + radius_ * nu;
  const double q = std::sqrt(u.dot(shape_ * u));
  return center_.dot(u) + q + t_off_ * nu;
}

VecXd SupportBody::grad(const VecXd& u) const {
  const double nu = u.norm();
  if (nu == 0) throw std::invalid_argument("support gradient at zero direction");
  if (kind_ == Kind::Ball) return center_ + radius_ * u / nu;
  const VecXd su = shape_ * u;
  const double q = std::sqrt(u.dot(su));
  return center_ + su / q + t_off_ * u / nu;
}

MatXd SupportBody::hess(const VecXd& u) const {
  const int n = dim();
  const double nu = u.norm();
  if (nu == 0) throw std::invalid_argument("support Hessian at zero direction");
  const MatXd sphere_part =
      (MatXd::Identity(n, n) - (u / nu) * (u / nu).transpose()) / nu;
  if (kind_ == Kind::Ball) return radius_ * sphere_part;
  const VecXd su = shape_ * u;
  const double q = std::sqrt(u.dot(su));
  return shape_ / q - su * su.transpose() / (q * q * q) + t_off_ * sphere_part;
}

VecXd SupportBody::boundary_point(const VecXd& unit_u) const { return grad(unit_u); }

VecXd SupportBody::curvature_radii(const VecXd& unit_u) const {
  const VecXd u = unit_u.normalized();
  const MatXd q = tangent_basis(u);
  const MatXd restricted = q.transpose() * hess(u) * q;
  Eigen::SelfAdjointEigenSolver<MatXd> es(restricted);
  return es.eigenvalues();
}

double SupportBody::max_curvature() const {
  if (kappa_cache_ > 0) return kappa_cache_;
  double min_radius;
  if (kind_ == Kind::Ball) {
    min_radius = radius_;
  } else {
    Eigen::SelfAdjointEigenSolver<MatXd> es(shape_);
    std::vector<VecXd> seeds;
    for (int i = 0; i < dim(); ++i) seeds.push_back(es.eigenvectors().col(i));
    auto f = [this](const VecXd& u) { return curvature_radii(u).minCoeff(); };
    min_radius = sweep_extremum(f, dim(), /*minimize=*/true, 99, seeds);
  }
  if (!(min_radius > 0)) throw std::runtime_error("degenerate boundary curvature");
  kappa_cache_ = 1.0 / min_radius;
  return kappa_cache_;
}

SupportBody SupportBody::offset(double t) const {
  const double kap = max_curvature();
  if (t <= -1.0 / kap + 1e-15)
    throw std::invalid_argument("offset collapses the body: t <= -1/max_curvature");
  SupportBody b = *this;
  b.kappa_cache_ = -1.0;
  if (kind_ == Kind::Ball) {
    b.radius_ += t;
  } else {
    b.t_off_ += t;
  }
  return b;
}

NormalProjection normal_projection(const SupportBody& body, const VecXd& p,
                                   int restarts, uint64_t seed) {
  const int n = body.dim();
  if (p.size() != n) throw std::invalid_argument("point dimension mismatch");
  if (body.kind() == SupportBody::Kind::Ball) {
    const VecXd d = p - body.center();
    const double dist = d.norm();
    if (dist < 1e-14 * (1.0 + body.ball_radius()))
      throw std::domain_error("projection undefined at the ball center");
    NormalProjection np;
    np.unit_normal = d / dist;
    np.foot = body.center() + body.ball_radius() * np.unit_normal;
    np.t = dist - body.ball_radius();
    return np;
  }

  const double scale = std::max(1.0, p.norm());
  auto fval = [&](const VecXd& u) { return body.h(u) - p.dot(u); };

  std::vector<VecXd> seeds;
  {
    VecXd d = p - body.center();
    if (d.norm() > 1e-12) seeds.push_back(d.normalized());
  }
  for (const VecXd& s : sphere_samples(n, std::max(restarts - 1, 0), seed))
    seeds.push_back(s);

  struct Candidate {
    VecXd u;
    double f;
  };
  std::vector<Candidate> found;
  for (VecXd u : seeds) {
    double f = fval(u);
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
      const VecXd g = body.grad(u) - p;
      const VecXd gt = g - g.dot(u) * u;
      if (gt.norm() <= 1e-11 * scale) {
        converged = true;
        break;
      }
      const MatXd q = tangent_basis(u);
      const MatXd hr =
          q.transpose() * body.hess(u) * q - g.dot(u) * MatXd::Identity(n - 1, n - 1);
      VecXd step;
      bool have_newton = false;
      Eigen::LDLT<MatXd> ldlt(hr);
      if (ldlt.info() == Eigen::Success) {
        const VecXd s = ldlt.solve(-q.transpose() * g);
        if (s.allFinite()) {
          step = q * s;
          have_newton = true;
        }
      }
      if (!have_newton) step = -gt;
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        VecXd cand = (u + alpha * step).normalized();
        const double fc = fval(cand);
        if (fc < f) {
          u = cand;
          f = fc;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) {
        converged = gt.norm() <= 1e-8 * scale;
        break;
      }
    }
    if (converged) found.push_back({u, f});
  }
  if (found.empty()) throw std::runtime_error("normal projection did not converge");

  const auto best =
      std::min_element(found.begin(), found.end(),
                       [](const Candidate& a, const Candidate& b) { return a.f < b.f; });
  for (const Candidate& c : found) {
    if (c.f <= best->f + 1e-8 * scale && (c.u - best->u).norm() > 1e-5 &&
        (c.u + best->u).norm() > 1e-5)
      throw std::runtime_error("ambiguous normal projection");
  }

  NormalProjection np;
  np.unit_normal = best->u;
  np.foot = body.grad(best->u);
  np.t = -best->f;
  if (np.t <= -1.0 / body.max_curvature() + 1e-12)
    throw std::domain_error("point lies at or below the focal core");
  if ((np.foot + np.t * np.unit_normal - p).norm() > 1e-7 * scale)
    throw std::runtime_error("normal projection residual too large");
  return np;
}

double signed_distance(const SupportBody& body, const VecXd& p) {
  if (body.kind() == SupportBody::Kind::Ball)
    return (p - body.center()).norm() - body.ball_radius();
  return normal_projection(body, p).t;
}

double nesting_gap(const SupportBody& inner, const SupportBody& outer) {
  if (inner.dim() != outer.dim()) throw std::invalid_argument("dimension mismatch");
  auto f = [&](const VecXd& u) { return outer.h(u) - inner.h(u); };
  std::vector<VecXd> seeds;
  VecXd d = inner.center() - outer.center();
  if (d.norm() > 1e-12) seeds.push_back(d.normalized());
  return sweep_extremum(f, inner.dim(), /*minimize=*/true, 123, seeds);
}

double hausdorff_distance(const SupportBody& a, const SupportBody& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  auto f = [&](const VecXd& u) { return std::abs(a.h(u) - b.h(u)); };
  std::vector<VecXd> seeds;
  VecXd d = a.center() - b.center();
  if (d.norm() > 1e-12) {
    seeds.push_back(d.normalized());
    seeds.push_back(-d.normalized());
  }
  return sweep_extremum(f, a.dim(), /*minimize=*/false, 321, seeds);
}

double chord_clearance_bound(const SupportBody& inner, const SupportBody& outer) {
  const double d0 = nesting_gap(inner, outer);
  if (!(d0 > 0)) throw std::invalid_argument("bodies are not strictly nested");
  return std::sqrt(d0 * d0 + 2.0 * d0 / inner.max_curvature());
}

CylinderBody CylinderBody::over(const WideSeq& rho, const SupportBody& cross_section) {
  if (!rho.wide())
    throw std::invalid_argument(
        "cylinder base is not wide: need >= 2 coordinates, not a single complex axis");
  if (cross_section.dim() != rho.size())
    throw std::invalid_argument("cross-section dimension must match the index set");
  CylinderBody c;
  c.rho_ = rho;
  c.cross_ = cross_section;
  return c;
}

VecXd CylinderBody::lift_normal(const VecXd& cross_unit_normal) const {
  if (cross_unit_normal.size() != rho_.size())
    throw std::invalid_argument("cross-section normal dimension mismatch");
  VecXd out = VecXd::Zero(6);
  for (int i = 0; i < rho_.size(); ++i) out(rho_.idx[i]) = cross_unit_normal(i);
  return out;
}

VecXd CylinderBody::boundary_point(const VecXd& cross_unit_normal,
                                   const VecXd& free_part) const {
  if (free_part.size() != 6 - rho_.size())
    throw std::invalid_argument("free part dimension mismatch");
  const VecXd bp = cross_.boundary_point(cross_unit_normal);
  VecXd out(6);
  std::vector<bool> used(6, false);
  for (int i = 0; i < rho_.size(); ++i) {
    out(rho_.idx[i]) = bp(i);
    used[rho_.idx[i]] = true;
  }
  int j = 0;
  for (int i = 0; i < 6; ++i)
    if (!used[i]) out(i) = free_part(j++);
  return out;
}

bool is_escaping(const WideSeq& rho, const R6& v, double tol) {
  const double nv = v.norm();
  if (nv == 0) throw std::invalid_argument("escaping test on zero vector");
  VecXd proj = project_coords(VecXd(v), rho);
  return proj.norm() > tol * nv;
}

ThetaPlane theta_plane(const CVec3& nu) {
  const double n2 = norm2(nu);
  if (n2 == 0) throw std::invalid_argument("zero normal");
  ThetaPlane tp;
  tp.nu = nu;
  if (std::abs(bilinear(nu, nu)) <= 1e-8 * n2) {
    tp.nu_null = true;
    tp.null_reps.push_back(nu.conjugate() / std::sqrt(n2));
    return tp;
  }
  const ConjugateFrame fr = conjugate_frame(nu);
  tp.basis_u = fr.u;
  tp.basis_v = fr.v;
  const CVec3 a = fr.u + cplx(0, 1) * fr.v;
  const CVec3 b = fr.u - cplx(0, 1) * fr.v;
  tp.null_reps.push_back(a / std::sqrt(norm2(a)));
  tp.null_reps.push_back(b / std::sqrt(norm2(b)));
  return tp;
}

namespace {

// Largest rho-projection over the phase circle of a null ray.
double best_phase_projection(const WideSeq& rho, const CVec3& rep) {
  const R6 x = to_r6(rep);
  const R6 y = to_r6(cplx(0, 1) * rep);
  double best = 0.0;
  const int grid = 64;
  for (int k = 0; k < grid; ++k) {
    const double phi = 2.0 * M_PI * k / grid;
    const R6 v = std::cos(phi) * x + std::sin(phi) * y;
    best = std::max(best, project_coords(VecXd(v), rho).norm());
  }
  return best;
}

ConvexityCertificate certify(const std::vector<CVec3>& normals, const WideSeq* rho) {
  ConvexityCertificate cert;
  cert.samples = int(normals.size());
  cert.min_witness_projection = 1e300;
  for (const CVec3& nu : normals) {
    ThetaPlane tp;
    try {
      tp = theta_plane(nu);
    } catch (const std::exception&) {
      ++cert.failures;
      continue;
    }
    double best = 0.0;
    for (const CVec3& rep : tp.null_reps) {
      if (!is_null(rep, 1e-8)) continue;
      best = std::max(best, rho ? best_phase_projection(*rho, rep) : 1.0);
    }
    if (best > 1e-8) {
      cert.min_witness_projection = std::min(cert.min_witness_projection, best);
    } else {
      ++cert.failures;
    }
  }
  cert.pass = cert.failures == 0 && cert.samples > 0;
  if (cert.samples == 0) cert.note = "no samples";
  else if (!cert.pass) cert.note = "tangent null plane without escaping direction";
  if (cert.min_witness_projection == 1e300) cert.min_witness_projection = 0.0;
  return cert;
}

}  // namespace

ConvexityCertificate null_convexity_certificate(const CylinderBody& cyl, int samples,
                                                uint64_t seed) {
  std::vector<CVec3> normals;
  for (const VecXd& s : sphere_samples(cyl.rho().size(), samples, seed)) {
    const VecXd lifted = cyl.lift_normal(s);
    normals.push_back(from_r6(R6(lifted)));
  }
  WideSeq rho = cyl.rho();
  return certify(normals, &rho);
}

ConvexityCertificate null_convexity_certificate(const SupportBody& body, int samples,
                                                uint64_t seed) {
  if (body.dim() != 6)
    throw std::invalid_argument("certificate needs a body in the six real coordinates");
  std::vector<CVec3> normals;
  for (const VecXd& s : sphere_samples(6, samples, seed)) normals.push_back(from_r6(R6(s)));
  return certify(normals, nullptr);
}

double form_regularity_fraction(const SupportBody& body, int samples, uint64_t seed) {
  if (body.dim() != 6)
    throw std::invalid_argument("regularity fraction needs a body in six coordinates");
  std::vector<CVec3> normals;
  for (const VecXd& s : sphere_samples(6, samples, seed)) normals.push_back(from_r6(R6(s)));
  return form_regularity_fraction(normals);
}

double form_regularity_fraction(const std::vector<CVec3>& normals) {
  if (normals.empty()) throw std::invalid_argument("no normals given");
  int good = 0;
  for (const CVec3& nu : normals) {
    const double n2 = norm2(nu);
    if (n2 > 0 && std::abs(bilinear(nu, nu)) > 1e-8 * n2) ++good;
  }
  return double(good) / double(normals.size());
}

std::vector<VecXd> sphere_samples(int dim, int count, uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<VecXd> out;
  out.reserve(std::max(count, 0));
  while (int(out.size()) < count) {
    VecXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    const double n = v.norm();
    if (n > 1e-6) out.push_back(v / n);
  }
  return out;
}

}  // namespace ncg
