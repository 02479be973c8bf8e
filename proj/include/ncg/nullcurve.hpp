// Null curves over disc and annulus domains: derivative triples with the
// quadratic form identically zero, induced metric, distances, transforms,
// flux, and the constrained least-squares fit to sampled target data.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ncg/cx3.hpp"
#include "ncg/holo.hpp"

namespace ncg {

struct ImmersionReport {
  double min_density2 = 0.0;  // min of sum |phi_j|^2 over the check grid
  cplx argmin;
  int n_r = 0, n_theta = 0;
};

// F(zeta) = F(zeta0) + int Phi dzeta with <<Phi,Phi>> = 0 coefficientwise.
class NullCurveRep {
 public:
  // Verifies nullity (1e-12 relative, coefficientwise) and single-valuedness
  // (vanishing zeta^{-1} coefficients on annuli); the immersion minimum is
  // computed and reported, not asserted.
  static NullCurveRep checked(DomainSpec dom, std::array<LaurentPoly, 3> phi,
                              cplx base_point, CVec3 base_value);
  // No invariant checks; for period and flux witnesses.
  static NullCurveRep raw(DomainSpec dom, std::array<LaurentPoly, 3> phi,
                          cplx base_point, CVec3 base_value);
  // Phi = (z(1-w^2)/2, i z(1+w^2)/2, z w); null by coefficient identity.
  static NullCurveRep from_weierstrass(DomainSpec dom, const LaurentPoly& z,
                                       const LaurentPoly& w, cplx base_point,
                                       CVec3 base_value);

  const DomainSpec& domain() const { return dom_; }
  const LaurentPoly& phi(int j) const { return phi_.at(size_t(j)); }
  const std::array<LaurentPoly, 3>& phi() const { return phi_; }
  cplx base_point() const { return zeta0_; }
  const CVec3& base_value() const { return f0_; }
  bool invariants_checked() const { return checked_; }

  CVec3 derivative(cplx zeta) const;
  // Largest coefficient magnitude of <<Phi,Phi>> relative to the largest
  // squared coefficient magnitude of Phi.
  double nullity_residual() const;
  std::array<cplx, 3> periods() const;
  ImmersionReport immersion_report(int n_r = 128, int n_theta = 128) const;

  std::string to_text() const;
  static NullCurveRep from_text(const std::string& text);

 private:
  DomainSpec dom_ = DomainSpec::disc();
  std::array<LaurentPoly, 3> phi_;
  cplx zeta0_;
  CVec3 f0_ = CVec3::Zero();
  bool checked_ = false;
};

enum class EvalPath { RadialThenCircular, CircularThenRadial };

// Antiderivative evaluation; requires vanishing periods.
CVec3 evaluate(const NullCurveRep& rep, cplx zeta);
// Explicit quadrature along the chosen basepoint-to-point path.
CVec3 evaluate_via(const NullCurveRep& rep, cplx zeta, EvalPath path);

double metric_density(const NullCurveRep& rep, cplx zeta);

// A must satisfy A^T A = I (1e-10); acts linearly on the derivative triple.
NullCurveRep transform(const NullCurveRep& rep, const CMat3& a);

// Im of the period vector of Phi; the flux of Re F around the annulus core.
Eigen::Vector3d flux(const NullCurveRep& rep);

// Shortest path between the snapped point sets on a polar grid graph
// (8-neighbor, edge weight = metric density at the chord midpoint times the
// chord length).
double intrinsic_distance(const NullCurveRep& rep, const std::vector<cplx>& from,
                          const std::vector<cplx>& to, int n_r = 256,
                          int n_theta = 256);

// Discrete metric engine shared with the deformation stage: nodes on the
// polar grid that pass the mask; endpoint sets snap to their nearest kept
// nodes.
struct GridMetricProblem {
  double r_min = 0.0, r_max = 1.0;
  int n_r = 256, n_theta = 256;
  std::function<bool(cplx)> mask;            // empty: whole annulus/disc
  std::function<double(cplx)> density;       // conformal metric factor
  std::vector<cplx> from, to;
};
double grid_shortest_path(const GridMetricProblem& prob);

// Sampled approximation data: locations in the closed domain, target values
// of F, and target derivative densities (null to 1e-8 relative).
struct TargetPiece {
  std::vector<cplx> zeta;
  std::vector<CVec3> values;
  std::vector<CVec3> derivs;
  double weight = 1.0;
  std::string label;
};

struct GeneralizedTarget {
  std::vector<TargetPiece> pieces;
  void validate(double tol = 1e-8) const;
  int total_samples() const;
};

struct FitOptions {
  int degree_w = -1;      // top degree of w; defaults to the fit degree
  int kmin = 0;           // lowest power in z and w (negative on annuli)
  double value_weight = 1.0;
  double deriv_weight = 1.0;
  int als_sweeps = 24;
  double penalty_start = 1e-2;
  double penalty_growth = 2.5;
  int max_iter = 500;     // Levenberg-Marquardt polish cap
  double tol_rel = 1e-10; // relative residual-change convergence threshold
  bool polish = true;
  // Pin the third derivative component during the alternating stage; the
  // recovered pair keeps it only to fit accuracy.
  std::optional<LaurentPoly> fixed_phi3;
};

struct FitReport {
  double sup_value_dev = 0.0;
  double sup_deriv_dev = 0.0;
  double rms_residual = 0.0;
  double nullity_residual = 0.0;
  int lm_iterations = 0;
  bool converged = false;
  std::string note;
};

// Least-squares null curve fit: linear initialization in the split
// coordinates (Phi1 - i Phi2, Phi3, -(Phi1 + i Phi2)), alternating penalized
// sweeps for the product constraint, recovery of a derivative pair (z, w),
// then Levenberg-Marquardt on the pair coefficients.  The result is null by
// construction; on annuli the periods are projected out.
NullCurveRep runge_fit(const GeneralizedTarget& target, int degree,
                       const DomainSpec& dom, const FitOptions& opts = {},
                       FitReport* report = nullptr);

}  // namespace ncg
