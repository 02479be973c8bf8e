// Laurent polynomials on the unit disc / annulus, paths, and contour quadrature.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncg/cx3.hpp"

namespace ncg {

// Parameter domain, always normalized to outer radius 1.
struct DomainSpec {
  enum class Kind { Disc, Annulus };
  Kind kind = Kind::Disc;
  double r_in = 0.0;

  static DomainSpec disc() { return DomainSpec{}; }
  static DomainSpec annulus(double r_in) {
    if (!(r_in > 0.0 && r_in < 1.0))
      throw std::invalid_argument("DomainSpec: annulus needs 0 < r_in < 1");
    return DomainSpec{Kind::Annulus, r_in};
  }
  bool is_disc() const { return kind == Kind::Disc; }
  bool contains(cplx z, double slack = 1e-12) const {
    const double r = std::abs(z);
    return r <= 1.0 + slack && r >= r_in - slack;
  }
  bool operator==(const DomainSpec& o) const {
    return kind == o.kind && r_in == o.r_in;
  }
};

// Finite Laurent series sum c_k zeta^k, k in [kmin, kmax].
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly constant(cplx c) { return monomial(0, c); }
  static LaurentPoly monomial(int k, cplx c);

  bool empty() const { return c_.empty(); }
  int kmin() const { return c_.empty() ? 0 : kmin_; }
  int kmax() const { return c_.empty() ? -1 : kmin_ + int(c_.size()) - 1; }
  cplx coeff(int k) const {
    if (c_.empty() || k < kmin_ || k > kmax()) return {};
    return c_[size_t(k - kmin_)];
  }
  void set_coeff(int k, cplx v);
  double max_abs_coeff() const;

  cplx eval(cplx z) const;
  LaurentPoly derivative() const;
  // Termwise primitive; requires a vanishing zeta^{-1} coefficient.
  LaurentPoly antiderivative() const;
  // Drop coefficients below rel_eps times the largest magnitude.
  LaurentPoly truncated(double rel_eps = 1e-14) const;
  // Coefficients of zeta -> s*zeta composition: c_k -> c_k s^k.
  LaurentPoly scaled_argument(cplx s) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(cplx s, LaurentPoly p);
  LaurentPoly operator-() const { return cplx(-1.0, 0.0) * (*this); }

  std::string to_text() const;
  static LaurentPoly from_text(const std::string& text);

 private:
  void trim();
  int kmin_ = 0;
  std::vector<cplx> c_;  // c_[i] = coefficient of zeta^{kmin_ + i}
};

// Piecewise path made of line segments and circular arcs, each on t in [0,1].
struct PathSeg {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  cplx a, b;                                 // line
  cplx center;                               // arc
  double radius = 0.0, phi0 = 0.0, phi1 = 0.0;

  cplx at(double t) const;
  cplx deriv(double t) const;
};

struct ParamPath {
  std::vector<PathSeg> segs;
  bool closed = false;

  static ParamPath line(cplx a, cplx b);
  static ParamPath arc(cplx center, double radius, double phi0, double phi1);
  static ParamPath circle(cplx center, double radius);
  static ParamPath polyline(const std::vector<cplx>& nodes, bool closed = false);
  cplx start() const;
  cplx end() const;
};

// Contour integral of f over the path: adaptive composite 16-point
// Gauss-Legendre, panels split until their estimates agree to 1e-13 relative
// (absolute target 1e-12).
cplx path_integral(const std::function<cplx(cplx)>& f, const ParamPath& path);

// Residue-type period over the positively oriented unit circle.
inline cplx period(const LaurentPoly& f) {
  return cplx(0.0, 2.0 * M_PI) * f.coeff(-1);
}

double sup_norm_on_circle(const std::function<cplx(cplx)>& f, double radius,
                          int samples);

// Max of |f| over the boundary circles of the domain; at least 64 samples,
// uniformly spaced so refinement by doubling is monotone.
double boundary_sup_norm(const std::function<cplx(cplx)>& f, const DomainSpec& dom,
                         int samples);

}  // namespace ncg
