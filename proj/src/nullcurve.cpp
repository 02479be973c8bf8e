#include "ncg/nullcurve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace ncg {
namespace {

LaurentPoly quadratic_form(const std::array<LaurentPoly, 3>& phi) {
  return phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2];
}

double coeff_scale(const std::array<LaurentPoly, 3>& phi) {
  double m = 0.0;
  for (const LaurentPoly& p : phi) m = std::max(m, p.max_abs_coeff());
  return m;
}

}  // namespace

NullCurveRep NullCurveRep::raw(DomainSpec dom, std::array<LaurentPoly, 3> phi,
                               cplx base_point, CVec3 base_value) {
  if (!dom.contains(base_point, 1e-9))
    throw std::invalid_argument("basepoint outside the domain");
  NullCurveRep rep;
  rep.dom_ = dom;
  rep.phi_ = std::move(phi);
  rep.zeta0_ = base_point;
  rep.f0_ = base_value;
  rep.checked_ = false;
  return rep;
}

NullCurveRep NullCurveRep::checked(DomainSpec dom, std::array<LaurentPoly, 3> phi,
                                   cplx base_point, CVec3 base_value) {
  NullCurveRep rep = raw(dom, std::move(phi), base_point, base_value);
  const double nres = rep.nullity_residual();
  if (nres > 1e-12)
    throw std::invalid_argument("derivative triple is not null: residual " +
                                std::to_string(nres));
  if (!dom.is_disc()) {
    const double scale = std::max(coeff_scale(rep.phi_), 1e-300);
    for (int j = 0; j < 3; ++j)
      if (std::abs(rep.phi_[j].coeff(-1)) > 1e-10 * scale)
        throw std::invalid_argument("derivative has a period: component " +
                                    std::to_string(j + 1));
  } else {
    for (int j = 0; j < 3; ++j)
      if (!rep.phi_[j].empty() && rep.phi_[j].kmin() < 0)
        throw std::invalid_argument("negative powers on the disc domain");
  }
  rep.checked_ = true;
  return rep;
}

NullCurveRep NullCurveRep::from_weierstrass(DomainSpec dom, const LaurentPoly& z,
                                            const LaurentPoly& w, cplx base_point,
                                            CVec3 base_value) {
  if (z.empty()) throw std::invalid_argument("weierstrass z must not vanish identically");
  const LaurentPoly w2 = w * w;
  const LaurentPoly zw2 = z * w2;
  std::array<LaurentPoly, 3> phi;
  phi[0] = 0.5 * (z - zw2);
  phi[1] = cplx(0, 0.5) * (z + zw2);
  phi[2] = z * w;
  return checked(dom, std::move(phi), base_point, base_value);
}

CVec3 NullCurveRep::derivative(cplx zeta) const {
  return CVec3(phi_[0].eval(zeta), phi_[1].eval(zeta), phi_[2].eval(zeta));
}

double NullCurveRep::nullity_residual() const {
  const LaurentPoly q = quadratic_form(phi_);
  const double scale = coeff_scale(phi_);
  if (scale == 0.0) return q.max_abs_coeff() == 0.0 ? 0.0 : 1e300;
  return q.max_abs_coeff() / (scale * scale);
}

std::array<cplx, 3> NullCurveRep::periods() const {
  return {period(phi_[0]), period(phi_[1]), period(phi_[2])};
}

ImmersionReport NullCurveRep::immersion_report(int n_r, int n_theta) const {
  if (n_r < 2 || n_theta < 2) throw std::invalid_argument("grid too small");
  ImmersionReport rep;
  rep.n_r = n_r;
  rep.n_theta = n_theta;
  rep.min_density2 = std::numeric_limits<double>::infinity();
  const double r_lo = dom_.is_disc() ? 0.0 : dom_.r_in;
  for (int i = 1; i <= n_r; ++i) {
    const double r = r_lo + (1.0 - r_lo) * i / n_r;
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * M_PI * j / n_theta;
      const cplx zeta = std::polar(r, th);
      const CVec3 d = derivative(zeta);
      const double den = d.squaredNorm();
      if (den < rep.min_density2) {
        rep.min_density2 = den;
        rep.argmin = zeta;
      }
    }
  }
  return rep;
}

std::string NullCurveRep::to_text() const {
  std::string out = "nullcurve\n";
  if (dom_.is_disc()) {
    out += "domain disc\n";
  } else {
    char buf[48];
    std::snprintf(buf, sizeof buf, "domain annulus %.17g\n", dom_.r_in);
    out += buf;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "base %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                zeta0_.real(), zeta0_.imag(), f0_(0).real(), f0_(0).imag(),
                f0_(1).real(), f0_(1).imag(), f0_(2).real(), f0_(2).imag());
  out += buf;
  out += checked_ ? "checked 1\n" : "checked 0\n";
  for (int j = 0; j < 3; ++j) {
    out += "phi\n";
    out += phi_[j].to_text();
    out += "endphi\n";
  }
  return out;
}

NullCurveRep NullCurveRep::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "nullcurve")
    throw std::invalid_argument("missing nullcurve header");
  if (!std::getline(in, line) || line.rfind("domain ", 0) != 0)
    throw std::invalid_argument("missing domain line");
  DomainSpec dom = DomainSpec::disc();
  if (line != "domain disc") {
    double r_in = 0;
    if (std::sscanf(line.c_str(), "domain annulus %lg", &r_in) != 1)
      throw std::invalid_argument("bad domain line");
    dom = DomainSpec::annulus(r_in);
  }
  double b[8];
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "base %lg %lg %lg %lg %lg %lg %lg %lg", &b[0], &b[1],
                  &b[2], &b[3], &b[4], &b[5], &b[6], &b[7]) != 8)
    throw std::invalid_argument("bad base line");
  if (!std::getline(in, line) || line.rfind("checked ", 0) != 0)
    throw std::invalid_argument("bad checked line");
  const bool was_checked = line == "checked 1";
  std::array<LaurentPoly, 3> phi;
  for (int j = 0; j < 3; ++j) {
    if (!std::getline(in, line) || line != "phi")
      throw std::invalid_argument("missing phi block");
    std::string body;
    while (std::getline(in, line) && line != "endphi") body += line + "\n";
    phi[j] = LaurentPoly::from_text(body);
  }
  const cplx zeta0(b[0], b[1]);
  CVec3 f0(cplx(b[2], b[3]), cplx(b[4], b[5]), cplx(b[6], b[7]));
  return was_checked ? checked(dom, std::move(phi), zeta0, f0)
                     : raw(dom, std::move(phi), zeta0, f0);
}

namespace {

std::array<LaurentPoly, 3> antiderivatives(const NullCurveRep& rep) {
  return {rep.phi(0).antiderivative(), rep.phi(1).antiderivative(),
          rep.phi(2).antiderivative()};
}

}  // namespace

CVec3 evaluate(const NullCurveRep& rep, cplx zeta) {
  if (!rep.domain().contains(zeta, 1e-9))
    throw std::invalid_argument("evaluation point outside the domain");
  const std::array<LaurentPoly, 3> prim = antiderivatives(rep);
  CVec3 out;
  for (int j = 0; j < 3; ++j)
    out(j) = rep.base_value()(j) + prim[size_t(j)].eval(zeta) -
             prim[size_t(j)].eval(rep.base_point());
  return out;
}

CVec3 evaluate_via(const NullCurveRep& rep, cplx zeta, EvalPath path) {
  if (!rep.domain().contains(zeta, 1e-9))
    throw std::invalid_argument("evaluation point outside the domain");
  const cplx z0 = rep.base_point();
  const double r0 = std::abs(z0), r1 = std::abs(zeta);
  double a0 = std::arg(z0), a1 = std::arg(zeta);
  double da = a1 - a0;
  while (da > M_PI) da -= 2.0 * M_PI;
  while (da < -M_PI) da += 2.0 * M_PI;

  ParamPath pp;
  if (r0 < 1e-14 || r1 < 1e-14) {
    pp = ParamPath::line(z0, zeta);
  } else if (path == EvalPath::RadialThenCircular) {
    const cplx mid = std::polar(r1, a0);
    pp = ParamPath::line(z0, mid);
    const ParamPath arc = ParamPath::arc(cplx(0, 0), r1, a0, a0 + da);
    pp.segs.insert(pp.segs.end(), arc.segs.begin(), arc.segs.end());
  } else {
    const cplx mid = std::polar(r0, a0 + da);
    pp = ParamPath::arc(cplx(0, 0), r0, a0, a0 + da);
    const ParamPath tail = ParamPath::line(mid, zeta);
    pp.segs.insert(pp.segs.end(), tail.segs.begin(), tail.segs.end());
  }
  CVec3 out;
  for (int j = 0; j < 3; ++j) {
    const LaurentPoly& p = rep.phi(j);
    out(j) = rep.base_value()(j) +
             path_integral([&](cplx s) { return p.eval(s); }, pp);
  }
  return out;
}

double metric_density(const NullCurveRep& rep, cplx zeta) {
  if (!rep.domain().contains(zeta, 1e-9))
    throw std::invalid_argument("evaluation point outside the domain");
  return std::sqrt(rep.derivative(zeta).squaredNorm());
}

NullCurveRep transform(const NullCurveRep& rep, const CMat3& a) {
  if (!is_orthogonal(a, 1e-10))
    throw std::invalid_argument("transform matrix is not complex-orthogonal");
  std::array<LaurentPoly, 3> phi;
  for (int i = 0; i < 3; ++i) {
    LaurentPoly acc;
    for (int j = 0; j < 3; ++j) acc += a(i, j) * rep.phi(j);
    phi[size_t(i)] = acc;
  }
  const CVec3 f0 = a * rep.base_value();
  NullCurveRep out = rep.invariants_checked()
                         ? NullCurveRep::checked(rep.domain(), std::move(phi),
                                                 rep.base_point(), f0)
                         : NullCurveRep::raw(rep.domain(), std::move(phi),
                                             rep.base_point(), f0);
  // |A phi|^2 <= |A|_F^2 |phi|^2 pointwise; a violation means the transform
  // was assembled wrong.
  const double bound = matrix_norm(a) * matrix_norm(a);
  const double r_lo = rep.domain().is_disc() ? 0.2 : rep.domain().r_in;
  for (int i = 1; i <= 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const cplx zeta = std::polar(r_lo + (1.0 - r_lo) * i / 16.0, 2.0 * M_PI * j / 16.0);
      const double before = rep.derivative(zeta).squaredNorm();
      const double after = out.derivative(zeta).squaredNorm();
      if (after > bound * before * (1.0 + 1e-9) + 1e-300)
        throw std::logic_error("transformed metric exceeds the norm bound");
    }
  }
  return out;
}

Eigen::Vector3d flux(const NullCurveRep& rep) {
  const std::array<cplx, 3> per = rep.periods();
  return Eigen::Vector3d(per[0].imag(), per[1].imag(), per[2].imag());
}

double grid_shortest_path(const GridMetricProblem& prob) {
  if (prob.from.empty() || prob.to.empty())
    throw std::invalid_argument("shortest path needs nonempty endpoint sets");
  if (prob.n_r < 2 || prob.n_theta < 4) throw std::invalid_argument("grid too small");
  if (!(prob.r_max > prob.r_min) || prob.r_min < 0)
    throw std::invalid_argument("bad radial range");

  // Node layout: optional center node (index 0 when r_min == 0), then rings.
  const bool with_center =
      prob.r_min == 0.0 && (!prob.mask || prob.mask(cplx(0, 0)));
  std::vector<double> rings;
  if (prob.r_min == 0.0) {
    for (int i = 1; i <= prob.n_r; ++i)
      rings.push_back(prob.r_max * double(i) / prob.n_r);
  } else {
    for (int i = 0; i < prob.n_r; ++i)
      rings.push_back(prob.r_min + (prob.r_max - prob.r_min) * double(i) /
                                        (prob.n_r - 1));
  }
  const int nr = int(rings.size()), nt = prob.n_theta;
  const int ncell = nr * nt;
  const int n_nodes = ncell + (with_center ? 1 : 0);
  const int center_id = ncell;

  auto pos_of = [&](int id) -> cplx {
    if (id == center_id) return {};
    const int i = id / nt, j = id % nt;
    return std::polar(rings[size_t(i)], 2.0 * M_PI * j / nt);
  };
  std::vector<char> alive(size_t(n_nodes), 0);
  for (int id = 0; id < n_nodes; ++id) {
    const cplx p = pos_of(id);
    alive[size_t(id)] = (!prob.mask || prob.mask(p)) ? 1 : 0;
  }

  auto edge_ok = [&](int a, int b, double& weight) {
    if (!alive[size_t(a)] || !alive[size_t(b)]) return false;
    const cplx pa = pos_of(a), pb = pos_of(b);
    const cplx mid = 0.5 * (pa + pb);
    if (prob.mask && !prob.mask(mid)) return false;
    weight = prob.density(mid) * std::abs(pb - pa);
    return true;
  };

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(n_nodes));
  auto add_edge = [&](int a, int b) {
    double w;
    if (edge_ok(a, b, w)) {
      adj[size_t(a)].push_back({b, w});
      adj[size_t(b)].push_back({a, w});
    }
  };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int id = i * nt + j;
      const int jn = (j + 1) % nt;
      add_edge(id, i * nt + jn);
      if (i + 1 < nr) {
        add_edge(id, (i + 1) * nt + j);
        add_edge(id, (i + 1) * nt + jn);
        add_edge(i * nt + jn, (i + 1) * nt + j);
      }
    }
  }
  if (with_center)
    for (int j = 0; j < nt; ++j) add_edge(center_id, j);

  auto snap = [&](cplx p) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (int id = 0; id < n_nodes; ++id) {
      if (!alive[size_t(id)]) continue;
      const double d = std::abs(pos_of(id) - p);
      if (d < bd) {
        bd = d;
        best = id;
      }
    }
    if (best < 0) throw std::runtime_error("endpoint snaps to no grid node");
    return best;
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(size_t(n_nodes), inf);
  std::vector<char> to_mark(size_t(n_nodes), 0);
  for (cplx p : prob.to) to_mark[size_t(snap(p))] = 1;

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (cplx p : prob.from) {
    const int id = snap(p);
    if (dist[size_t(id)] > 0) {
      dist[size_t(id)] = 0;
      heap.push({0.0, id});
    }
  }
  while (!heap.empty()) {
    auto [d, id] = heap.top();
    heap.pop();
    if (d > dist[size_t(id)]) continue;
    if (to_mark[size_t(id)]) return d;
    for (auto [nb, w] : adj[size_t(id)]) {
      const double nd = d + w;
      if (nd < dist[size_t(nb)]) {
        dist[size_t(nb)] = nd;
        heap.push({nd, nb});
      }
    }
  }
  return inf;
}

double intrinsic_distance(const NullCurveRep& rep, const std::vector<cplx>& from,
                          const std::vector<cplx>& to, int n_r, int n_theta) {
  if (from.empty() || to.empty())
    throw std::invalid_argument("intrinsic distance needs nonempty point sets");
  for (const auto& pts : {from, to})
    for (cplx p : pts)
      if (!rep.domain().contains(p, 1e-9))
        throw std::invalid_argument("distance endpoint outside the domain");
  int kmin = 0;
  for (int j = 0; j < 3; ++j)
    if (!rep.phi(j).empty()) kmin = std::min(kmin, rep.phi(j).kmin());
  GridMetricProblem prob;
  prob.r_min = rep.domain().is_disc() ? (kmin < 0 ? 1e-6 : 0.0) : rep.domain().r_in;
  prob.r_max = 1.0;
  prob.n_r = n_r;
  prob.n_theta = n_theta;
  prob.density = [&rep](cplx z) { return std::sqrt(rep.derivative(z).squaredNorm()); };
  prob.from = from;
  prob.to = to;
  return grid_shortest_path(prob);
}

void GeneralizedTarget::validate(double tol) const {
  if (pieces.empty()) throw std::invalid_argument("target has no pieces");
  for (size_t i = 0; i < pieces.size(); ++i) {
    const TargetPiece& p = pieces[i];
    const std::string tag = p.label.empty() ? std::to_string(i) : p.label;
    if (p.zeta.empty() || p.zeta.size() != p.values.size() ||
        p.zeta.size() != p.derivs.size())
      throw std::invalid_argument("target piece " + tag + " has mismatched samples");
    if (!(p.weight > 0))
      throw std::invalid_argument("target piece " + tag + " has nonpositive weight");
    for (const CVec3& d : p.derivs) {
      if (d.squaredNorm() == 0.0 || !is_null(d, tol))
        throw std::invalid_argument("target piece " + tag +
                                    " has a non-null derivative sample");
    }
  }
}

int GeneralizedTarget::total_samples() const {
  int n = 0;
  for (const TargetPiece& p : pieces) n += int(p.zeta.size());
  return n;
}

}  // namespace ncg
