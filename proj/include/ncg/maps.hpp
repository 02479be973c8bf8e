// Projections out of C^3: real coordinate selections, the unimodular
// transform into SL(2,C), the Bryant projection to the hyperboloid, and the
// polar-grid mesh exporter.
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncg/convex.hpp"
#include "ncg/nullcurve.hpp"

namespace ncg {

struct SL2Point {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  cplx det() const { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }
};

// Hyperboloid coordinates: x1^2 + x2^2 + x3^2 + 1 = x0^2, x0 > 0.
struct H3Point {
  double x0 = 1, x1 = 0, x2 = 0, x3 = 0;
  double lorentz_norm() const { return x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3; }
  // Poincare-ball chart (x1,x2,x3)/(1+x0); strictly inside the unit ball.
  Eigen::Vector3d poincare() const;
};

// Euclidean orthogonal projection of the real identification onto the rho
// coordinates; equals selecting entries of to_r6.
VecXd project_rho(const CVec3& p, const WideSeq& rho);
std::vector<VecXd> project_rho(const std::vector<CVec3>& pts, const WideSeq& rho);

// (1/z3) [[1, z1+iz2], [z1-iz2, z1^2+z2^2+z3^2]]; lands in the unimodular
// matrices with nonzero upper-left entry.
SL2Point sl2_transform(const CVec3& p);

// Z Z-bar^T decoded through [[x0+x3, x1+ix2], [x1-ix2, x0-x3]].
H3Point bryant(const SL2Point& z);

struct MetricCheckReport {
  double max_rel_err = 0.0;
  double h = 0.0;
  int samples = 0;
};

// Central-difference comparison along u of the Lorentzian pull-back through
// the Bryant projection against the left-invariant trace-metric density
// |Z^{-1} dZ/du|_F^2 of the curve; the two agree on null curves.
MetricCheckReport bryant_metric_check(const std::function<SL2Point(double)>& curve,
                                      double u0, double u1, int samples, double h);

enum class ProjectionMode { MinimalR3, BryantPoincare };

struct ExportReport {
  int n_vertices = 0;
  int n_triangles = 0;
  // Grid cells dropped because the third component vanishes there (Bryant
  // mode only); (ring, sector) indices.
  std::vector<std::pair<int, int>> skipped_cells;
};

// Triangulated polar-grid mesh of the projected surface as an OBJ file;
// bytes are deterministic for a fixed rep and grid.
ExportReport export_mesh(const NullCurveRep& rep, ProjectionMode mode,
                         const std::string& path, int n_r = 64, int n_theta = 64);

}  // namespace ncg
