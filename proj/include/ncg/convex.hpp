// Convex bodies given by smooth support functions, cylinders over coordinate
// subsets, and the boundary-geometry queries used by the deformation stage.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ncg/cx3.hpp"

namespace ncg {

using VecXd = Eigen::VectorXd;
using MatXd = Eigen::MatrixXd;

// Subset of the six real coordinates (stored 0-based, strictly increasing).
// "Wide" excludes the three pairs that correspond to single complex axes.
struct WideSeq {
  std::vector<int> idx;

  static WideSeq of_one_based(std::vector<int> one_based);
  bool wide() const;
  int size() const { return int(idx.size()); }
};

VecXd project_coords(const VecXd& x, const WideSeq& rho);

// Body with support function h; kinds: ball, ellipsoid, and parallel bodies
// of those.  Offsets collapse exactly at the support-function level.
class SupportBody {
 public:
  enum class Kind { Ball, Ellipsoid };

  static SupportBody ball(const VecXd& center, double radius);
  // Shape matrix S is SPD with semiaxes^2 as eigenvalues: h = <c,u> + sqrt(u'Su).
  static SupportBody ellipsoid(const VecXd& center, const MatXd& shape);

  int dim() const { return int(center_.size()); }
  Kind kind() const { return kind_; }
  const VecXd& center() const { return center_; }
  double ball_radius() const;
  double offset_total() const { return t_off_; }

  double h(const VecXd& u) const;        // 1-homogeneous support function
  VecXd grad(const VecXd& u) const;      // boundary point when |u| = 1
  MatXd hess(const VecXd& u) const;

  VecXd boundary_point(const VecXd& unit_u) const;
  // Principal radii of curvature at outward unit normal u (dim-1 values).
  VecXd curvature_radii(const VecXd& unit_u) const;
  // Supremum of the largest principal curvature over the boundary.
  double max_curvature() const;
  // Parallel body at signed distance t; t <= -1/max_curvature is rejected.
  SupportBody offset(double t) const;

 private:
  Kind kind_ = Kind::Ball;
  VecXd center_;
  double radius_ = 1.0;  // ball
  MatXd shape_;          // ellipsoid
  double t_off_ = 0.0;   // accumulated offset (ellipsoid only; balls fold it)
  mutable double kappa_cache_ = -1.0;
};

struct NormalProjection {
  VecXd unit_normal;
  VecXd foot;   // boundary point hit by the outward normal ray through p
  double t;     // signed distance along the normal: p = foot + t * unit_normal
};

// Outward-normal decomposition of p; defined above the focal core of the body.
// Newton on the sphere with seeded restarts; ambiguity and core points throw.
NormalProjection normal_projection(const SupportBody& body, const VecXd& p,
                                   int restarts = 20, uint64_t seed = 77);

// Signed distance of p to the boundary (positive outside).
double signed_distance(const SupportBody& body, const VecXd& p);

// min over unit directions of h_outer - h_inner: how far the inner body can be
// inflated while staying inside; requires strict nesting (positive value).
double nesting_gap(const SupportBody& inner, const SupportBody& outer);

double hausdorff_distance(const SupportBody& a, const SupportBody& b);

// sqrt(d0^2 + 2 d0 / kappa): lower bound for the chord from a boundary point
// of the inner body along its tangent plane out to the outer boundary.
double chord_clearance_bound(const SupportBody& inner, const SupportBody& outer);

// Unbounded convex cylinder over a wide coordinate subset; construction over a
// non-wide subset is rejected.
class CylinderBody {
 public:
  static CylinderBody over(const WideSeq& rho, const SupportBody& cross_section);
  const WideSeq& rho() const { return rho_; }
  const SupportBody& cross_section() const { return cross_; }
  double max_curvature() const { return cross_.max_curvature(); }
  // Outward unit normal (in R^6) at a boundary point.
  VecXd lift_normal(const VecXd& cross_unit_normal) const;
  VecXd boundary_point(const VecXd& cross_unit_normal, const VecXd& free_part) const;

 private:
  WideSeq rho_;
  SupportBody cross_;
};

// A direction escapes a cylinder iff its rho-projection is nonzero (every
// nonzero direction escapes a bounded body).
bool is_escaping(const WideSeq& rho, const R6& v, double tol = 1e-10);

// Null directions inside the complex tangent plane at a boundary normal.
struct ThetaPlane {
  CVec3 nu;                     // complex form of the outward normal
  bool nu_null = false;
  CVec3 basis_u, basis_v;       // bilinear-orthonormal basis when nu is not null
  std::vector<CVec3> null_reps; // one ray representative per null direction
};

ThetaPlane theta_plane(const CVec3& nu);

struct ConvexityCertificate {
  bool pass = false;
  int samples = 0;
  int failures = 0;
  double min_witness_projection = 0.0;  // smallest |rho-projection| among witnesses
  std::string note;
};

// Boundary sampling certificate: every sampled tangent null plane contains an
// escaping direction (cylinder case tests the rho-projection over the phase
// circles of the two null rays).
ConvexityCertificate null_convexity_certificate(const CylinderBody& cyl,
                                                int samples, uint64_t seed = 2024);
ConvexityCertificate null_convexity_certificate(const SupportBody& body,
                                                int samples, uint64_t seed = 2024);

// Fraction of sampled boundary normals that are not null (relative test at
// 1e-8); the overload with explicit normals backs synthetic probes.
double form_regularity_fraction(const SupportBody& body, int samples,
                                uint64_t seed = 4242);
double form_regularity_fraction(const std::vector<CVec3>& normals);

// Deterministic unit-sphere sample sequence with the prefix property: the
// first n entries for a given seed do not depend on the total count.
std::vector<VecXd> sphere_samples(int dim, int count, uint64_t seed);

}  // namespace ncg
