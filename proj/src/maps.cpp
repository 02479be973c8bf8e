#include "ncg/maps.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ncg/cx3.hpp"

namespace ncg {

Eigen::Vector3d H3Point::poincare() const {
  return Eigen::Vector3d(x1, x2, x3) / (1.0 + x0);
}

VecXd project_rho(const CVec3& p, const WideSeq& rho) {
  return project_coords(to_r6(p), rho);
}

std::vector<VecXd> project_rho(const std::vector<CVec3>& pts, const WideSeq& rho) {
  std::vector<VecXd> out;
  out.reserve(pts.size());
  for (const CVec3& p : pts) out.push_back(project_rho(p, rho));
  return out;
}

SL2Point sl2_transform(const CVec3& p) {
  const cplx z1 = p(0), z2 = p(1), z3 = p(2);
  if (z3 == cplx{}) throw std::domain_error("third coordinate vanishes");
  SL2Point z;
  z.m(0, 0) = 1.0 / z3;
  z.m(0, 1) = (z1 + cplx(0, 1) * z2) / z3;
  z.m(1, 0) = (z1 - cplx(0, 1) * z2) / z3;
  z.m(1, 1) = (z1 * z1 + z2 * z2 + z3 * z3) / z3;
  const double scale = z.m.cwiseAbs().maxCoeff();
  if (std::abs(z.det() - 1.0) > 1e-8 * std::max(1.0, scale * scale))
    throw std::runtime_error("transform lost unimodularity");
  return z;
}

H3Point bryant(const SL2Point& z) {
  const double scale = z.m.cwiseAbs().maxCoeff();
  if (std::abs(z.det() - 1.0) > 1e-8 * std::max(1.0, scale * scale))
    throw std::invalid_argument("bryant projection needs a unimodular matrix");
  const Eigen::Matrix2cd p = z.m * z.m.adjoint();
  H3Point h;
  h.x0 = 0.5 * (p(0, 0).real() + p(1, 1).real());
  h.x3 = 0.5 * (p(0, 0).real() - p(1, 1).real());
  h.x1 = p(0, 1).real();
  h.x2 = p(0, 1).imag();
  if (h.x0 <= 0 || std::abs(h.lorentz_norm() - 1.0) > 1e-8 * std::max(1.0, h.x0 * h.x0))
    throw std::runtime_error("projected point left the hyperboloid");
  return h;
}

MetricCheckReport bryant_metric_check(const std::function<SL2Point(double)>& curve,
                                      double u0, double u1, int samples, double h) {
  if (!(u1 > u0) || samples < 1 || !(h > 0))
    throw std::invalid_argument("bad metric check parameters");
  if (h >= 0.1 * (u1 - u0))
    throw std::invalid_argument("difference step too coarse for the interval");
  MetricCheckReport rep;
  rep.h = h;
  rep.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const double u =
        samples == 1 ? 0.5 * (u0 + u1) : u0 + (u1 - u0) * i / (samples - 1);
    const SL2Point zp = curve(u + h), zm = curve(u - h);
    const H3Point bp = bryant(zp), bm = bryant(zm);
    const double d0 = (bp.x0 - bm.x0) / (2 * h), d1 = (bp.x1 - bm.x1) / (2 * h);
    const double d2 = (bp.x2 - bm.x2) / (2 * h), d3 = (bp.x3 - bm.x3) / (2 * h);
    const double pullback = -d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
    const Eigen::Matrix2cd dz = (zp.m - zm.m) / (2 * h);
    const Eigen::Matrix2cd zc = curve(u).m;
    Eigen::Matrix2cd inv;  // adjugate; the determinant is 1
    inv << zc(1, 1), -zc(0, 1), -zc(1, 0), zc(0, 0);
    const double density = (inv * dz).squaredNorm();
    const double denom = std::max(density, std::abs(pullback));
    const double floor_ = 1e-18 * (1.0 + zc.squaredNorm());
    const double rel = denom < floor_ ? 0.0 : std::abs(pullback - density) / denom;
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
  }
  return rep;
}

namespace {

struct MeshGrid {
  bool disc;
  int n_r, n_theta;
  std::vector<cplx> vertices;          // grid order; center first on the disc
  std::vector<std::array<int, 4>> tris;  // (a, b, c, cell = ring*n_theta+sector)
};

MeshGrid build_grid(const DomainSpec& dom, int n_r, int n_theta) {
  MeshGrid g;
  g.disc = dom.is_disc();
  g.n_r = n_r;
  g.n_theta = n_theta;
  const double r_lo = g.disc ? 0.0 : dom.r_in;
  auto node = [&](int ring, int j) {
    // rings are 1-based on the disc (0 is the center), 0-based on the annulus
    return g.disc ? 1 + (ring - 1) * n_theta + j : ring * n_theta + j;
  };
  if (g.disc) g.vertices.push_back(cplx(0, 0));
  const int ring0 = g.disc ? 1 : 0;
  for (int i = ring0; i <= n_r; ++i) {
    const double r = g.disc ? double(i) / n_r : r_lo + (1.0 - r_lo) * i / n_r;
    for (int j = 0; j < n_theta; ++j)
      g.vertices.push_back(std::polar(r, 2.0 * M_PI * j / n_theta));
  }
  if (g.disc)
    for (int j = 0; j < n_theta; ++j)
      g.tris.push_back({0, node(1, j), node(1, (j + 1) % n_theta), j});
  for (int i = ring0; i < n_r; ++i)
    for (int j = 0; j < n_theta; ++j) {
      const int jn = (j + 1) % n_theta;
      const int cell = i * n_theta + j;
      g.tris.push_back({node(i, j), node(i + 1, j), node(i + 1, jn), cell});
      g.tris.push_back({node(i, j), node(i + 1, jn), node(i, jn), cell});
    }
  return g;
}

}  // namespace

ExportReport export_mesh(const NullCurveRep& rep, ProjectionMode mode,
                         const std::string& path, int n_r, int n_theta) {
  if (n_r < 1 || n_theta < 3) throw std::invalid_argument("mesh grid too small");
  const MeshGrid grid = build_grid(rep.domain(), n_r, n_theta);

  std::vector<CVec3> values;
  values.reserve(grid.vertices.size());
  double sup3 = 0.0;
  for (cplx zeta : grid.vertices) {
    values.push_back(evaluate(rep, zeta));
    sup3 = std::max(sup3, std::abs(values.back()(2)));
  }

  const bool hyper = mode == ProjectionMode::BryantPoincare;
  const double z3_floor = 1e-9 * std::max(1.0, sup3);
  std::vector<char> ok(values.size(), 1);
  std::vector<Eigen::Vector3d> pos(values.size(), Eigen::Vector3d::Zero());
  for (size_t k = 0; k < values.size(); ++k) {
    if (hyper) {
      if (std::abs(values[k](2)) < z3_floor) {
        ok[k] = 0;
        continue;
      }
      pos[k] = bryant(sl2_transform(values[k])).poincare();
    } else {
      pos[k] = Eigen::Vector3d(values[k](0).real(), values[k](1).real(),
                               values[k](2).real());
    }
  }

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open mesh output: " + path);
  std::fputs("# polar-grid null curve mesh\n", f);
  for (const Eigen::Vector3d& p : pos)
    std::fprintf(f, "v %.17g %.17g %.17g\n", p(0), p(1), p(2));

  ExportReport report;
  report.n_vertices = int(pos.size());
  std::vector<char> cell_bad;
  for (const std::array<int, 4>& t : grid.tris) {
    if (ok[size_t(t[0])] && ok[size_t(t[1])] && ok[size_t(t[2])]) {
      std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
      ++report.n_triangles;
    } else {
      if (cell_bad.empty()) cell_bad.assign(size_t(n_r + 1) * size_t(n_theta), 0);
      if (!cell_bad[size_t(t[3])]) {
        cell_bad[size_t(t[3])] = 1;
        report.skipped_cells.push_back({t[3] / n_theta, t[3] % n_theta});
      }
    }
  }
  std::fclose(f);
  return report;
}

}  // namespace ncg
