#include "ncg/holo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ncg {

LaurentPoly LaurentPoly::monomial(int k, cplx c) {
  LaurentPoly p;
  if (c != cplx{}) {
    p.kmin_ = k;
    p.c_ = {c};
  }
  return p;
}

void LaurentPoly::set_coeff(int k, cplx v) {
  if (c_.empty()) {
    if (v != cplx{}) {
      kmin_ = k;
      c_ = {v};
    }
    return;
  }
  if (k < kmin_) {
    c_.insert(c_.begin(), size_t(kmin_ - k), cplx{});
    kmin_ = k;
  } else if (k > kmax()) {
    c_.resize(size_t(k - kmin_) + 1, cplx{});
  }
  c_[size_t(k - kmin_)] = v;
  trim();
}

double LaurentPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& c : c_) m = std::max(m, std::abs(c));
  return m;
}

void LaurentPoly::trim() {
  size_t lo = 0, hi = c_.size();
  while (hi > lo && c_[hi - 1] == cplx{}) --hi;
  while (lo < hi && c_[lo] == cplx{}) ++lo;
  if (lo == hi) {
    c_.clear();
    kmin_ = 0;
    return;
  }
  if (lo > 0 || hi < c_.size()) {
    c_ = std::vector<cplx>(c_.begin() + long(lo), c_.begin() + long(hi));
    kmin_ += int(lo);
  }
}

cplx LaurentPoly::eval(cplx z) const {
  if (c_.empty()) return {};
  const int k0 = kmin_, k1 = kmax();
  // Horner over the nonnegative part in z, over the negative part in 1/z.
  cplx pos{};
  if (k1 >= 0) {
    const int lo = std::max(0, k0);
    for (int k = k1; k >= lo; --k) pos = pos * z + coeff(k);
    if (lo > 0) pos *= std::pow(z, lo);
  }
  cplx neg{};
  if (k0 < 0) {
    if (z == cplx{}) throw std::domain_error("LaurentPoly::eval: pole at zero");
    const cplx zi = 1.0 / z;
    const int hi = std::min(-1, k1);
    cplx acc = coeff(k0);
    for (int k = k0 + 1; k <= hi; ++k) acc = acc * zi + coeff(k);
    neg = acc * std::pow(zi, -hi);
  }
  return pos + neg;
}

LaurentPoly LaurentPoly::derivative() const {
  LaurentPoly d;
  if (c_.empty()) return d;
  d.kmin_ = kmin_ - 1;
  d.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i)
    d.c_[i] = double(kmin_ + int(i)) * c_[i];
  d.trim();
  return d;
}

LaurentPoly LaurentPoly::antiderivative() const {
  if (coeff(-1) != cplx{})
    throw std::domain_error("LaurentPoly::antiderivative: zeta^{-1} term present");
  LaurentPoly a;
  if (c_.empty()) return a;
  a.kmin_ = kmin_ + 1;
  a.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) {
    const int k = kmin_ + int(i);
    a.c_[i] = (k == -1) ? cplx{} : c_[i] / double(k + 1);
  }
  a.trim();
  return a;
}

LaurentPoly LaurentPoly::truncated(double rel_eps) const {
  const double floor_ = rel_eps * max_abs_coeff();
  LaurentPoly t;
  t.kmin_ = kmin_;
  t.c_ = c_;
  for (cplx& c : t.c_)
    if (std::abs(c) <= floor_) c = {};
  t.trim();
  return t;
}

LaurentPoly LaurentPoly::scaled_argument(cplx s) const {
  LaurentPoly r;
  r.kmin_ = kmin_;
  r.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i)
    r.c_[i] = c_[i] * std::pow(s, kmin_ + int(i));
  r.trim();
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.c_.empty()) return *this;
  if (c_.empty()) {
    *this = o;
    return *this;
  }
  const int lo = std::min(kmin_, o.kmin_), hi = std::max(kmax(), o.kmax());
  std::vector<cplx> out(size_t(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) out[size_t(k - lo)] = coeff(k) + o.coeff(k);
  kmin_ = lo;
  c_ = std::move(out);
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  return *this += cplx(-1.0, 0.0) * o;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  if (a.c_.empty() || b.c_.empty()) return r;
  r.kmin_ = a.kmin_ + b.kmin_;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, cplx{});
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  r.trim();
  return r.truncated(1e-14);
}

LaurentPoly operator*(cplx s, LaurentPoly p) {
  for (cplx& c : p.c_) c *= s;
  p.trim();
  return p;
}

std::string LaurentPoly::to_text() const {
  std::string out;
  char line[96];
  for (int k = kmin(); k <= kmax(); ++k) {
    const cplx c = coeff(k);
    if (c == cplx{}) continue;
    std::snprintf(line, sizeof(line), "%d %.17g %.17g\n", k, c.real(), c.imag());
    out += line;
  }
  return out;
}

LaurentPoly LaurentPoly::from_text(const std::string& text) {
  LaurentPoly p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    int k;
    double re, im;
    if (std::sscanf(line.c_str(), "%d %lf %lf", &k, &re, &im) != 3)
      throw std::invalid_argument("LaurentPoly::from_text: parse error at line " +
                               std::to_string(lineno));
    p.set_coeff(k, cplx(re, im));
  }
  return p;
}

cplx PathSeg::at(double t) const {
  if (kind == Kind::Line) return a + t * (b - a);
  const double phi = phi0 + t * (phi1 - phi0);
  return center + radius * cplx(std::cos(phi), std::sin(phi));
}

cplx PathSeg::deriv(double t) const {
  if (kind == Kind::Line) return b - a;
  const double phi = phi0 + t * (phi1 - phi0);
  return radius * (phi1 - phi0) * cplx(-std::sin(phi), std::cos(phi));
}

ParamPath ParamPath::line(cplx a, cplx b) {
  ParamPath p;
  p.segs.push_back({PathSeg::Kind::Line, a, b, {}, 0, 0, 0});
  return p;
}

ParamPath ParamPath::arc(cplx center, double radius, double phi0, double phi1) {
  ParamPath p;
  PathSeg s;
  s.kind = PathSeg::Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.phi0 = phi0;
  s.phi1 = phi1;
  p.segs.push_back(s);
  return p;
}

ParamPath ParamPath::circle(cplx center, double radius) {
  ParamPath p = arc(center, radius, 0.0, 2.0 * M_PI);
  p.closed = true;
  return p;
}

ParamPath ParamPath::polyline(const std::vector<cplx>& nodes, bool closed) {
  if (nodes.size() < 2)
    throw std::invalid_argument("ParamPath::polyline: need at least two nodes");
  ParamPath p;
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    p.segs.push_back({PathSeg::Kind::Line, nodes[i], nodes[i + 1], {}, 0, 0, 0});
  if (closed)
    p.segs.push_back({PathSeg::Kind::Line, nodes.back(), nodes.front(), {}, 0, 0, 0});
  p.closed = closed;
  return p;
}

cplx ParamPath::start() const {
  if (segs.empty()) throw std::logic_error("ParamPath::start: empty path");
  return segs.front().at(0.0);
}

cplx ParamPath::end() const {
  if (segs.empty()) throw std::logic_error("ParamPath::end: empty path");
  return segs.back().at(1.0);
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1], positive half.
constexpr double kGxL[8] = {0.0950125098376374, 0.2816035507792589,
                            0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGwL[8] = {0.1894506104550685, 0.1826034150449236,
                            0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

cplx gl16(const std::function<cplx(cplx)>& f, const PathSeg& s, double t0, double t1) {
  const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  cplx acc{};
  for (int i = 0; i < 8; ++i) {
    const double tp = mid + half * kGxL[i], tm = mid - half * kGxL[i];
    acc += kGwL[i] * (f(s.at(tp)) * s.deriv(tp) + f(s.at(tm)) * s.deriv(tm));
  }
  return acc * half;
}

cplx adapt(const std::function<cplx(cplx)>& f, const PathSeg& s, double t0, double t1,
           cplx whole, int depth) {
  const double tm = 0.5 * (t0 + t1);
  const cplx left = gl16(f, s, t0, tm), right = gl16(f, s, tm, t1);
  const cplx split = left + right;
  const double diff = std::abs(split - whole);
  if (diff <= std::max(1e-13 * std::abs(split), 1e-15) || depth >= 24) return split;
  return adapt(f, s, t0, tm, left, depth + 1) + adapt(f, s, tm, t1, right, depth + 1);
}

}  // namespace

cplx path_integral(const std::function<cplx(cplx)>& f, const ParamPath& path) {
  cplx acc{};
  for (const PathSeg& s : path.segs)
    acc += adapt(f, s, 0.0, 1.0, gl16(f, s, 0.0, 1.0), 0);
  return acc;
}

double sup_norm_on_circle(const std::function<cplx(cplx)>& f, double radius,
                          int samples) {
  double m = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * M_PI * double(k) / double(samples);
    m = std::max(m, std::abs(f(radius * cplx(std::cos(phi), std::sin(phi)))));
  }
  return m;
}

double boundary_sup_norm(const std::function<cplx(cplx)>& f, const DomainSpec& dom,
                         int samples) {
  if (samples < 64)
    throw std::invalid_argument("boundary_sup_norm: need at least 64 samples");
  double m = sup_norm_on_circle(f, 1.0, samples);
  if (!dom.is_disc()) m = std::max(m, sup_norm_on_circle(f, dom.r_in, samples));
  return m;
}

}  // namespace ncg
