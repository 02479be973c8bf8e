// Complex-bilinear and Hermitian algebra on C^3, identified with R^6.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace ncg {

using cplx = std::complex<double>;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;
using R6 = Eigen::Matrix<double, 6, 1>;

// u^T v, no conjugation.
inline cplx bilinear(const CVec3& u, const CVec3& v) {
  return u(0) * v(0) + u(1) * v(1) + u(2) * v(2);
}

// conj(u)^T v; conjugate on the first argument.
inline cplx hermitian(const CVec3& u, const CVec3& v) {
  return std::conj(u(0)) * v(0) + std::conj(u(1)) * v(1) + std::conj(u(2)) * v(2);
}

// Euclidean pairing of the R^6 views.
inline double euclid(const CVec3& u, const CVec3& v) {
  return hermitian(u, v).real();
}

inline double norm2(const CVec3& u) { return hermitian(u, u).real(); }

inline R6 to_r6(const CVec3& z) {
  R6 x;
  for (int j = 0; j < 3; ++j) {
    x(2 * j) = z(j).real();
    x(2 * j + 1) = z(j).imag();
  }
  return x;
}

inline CVec3 from_r6(const R6& x) {
  return CVec3(cplx(x(0), x(1)), cplx(x(2), x(3)), cplx(x(4), x(5)));
}

// Point of the null cone with parameters (z, w); z = 0 is not allowed.
inline CVec3 null_vector(cplx z, cplx w) {
  if (z == cplx(0.0, 0.0))
    throw std::invalid_argument("null_vector: z must be nonzero");
  const cplx w2 = w * w;
  return CVec3(0.5 * z * (1.0 - w2), cplx(0, 0.5) * z * (1.0 + w2), z * w);
}

// |<<u,u>>| <= tol * |u|^2, relative to the Hermitian square.
inline bool is_null(const CVec3& u, double tol = 1e-10) {
  const double n2 = norm2(u);
  if (n2 == 0.0) throw std::invalid_argument("is_null: zero vector");
  return std::abs(bilinear(u, u)) <= tol * n2;
}

// The hyperplane <<nu>>-orthogonal to nu degenerates exactly when nu is null.
inline bool hyperplane_degenerate(const CVec3& nu, double tol = 1e-10) {
  return is_null(nu, tol);
}

inline double matrix_norm(const CMat3& A) { return A.norm(); }

inline bool is_orthogonal(const CMat3& A, double tol = 1e-10) {
  return (A.transpose() * A - CMat3::Identity()).norm() <= tol;
}

// Bilinear-orthonormal triple {u, v, w} with w along conj(nu); A = (u v w)^{-1}
// carries the Hermitian orthogonal complement of nu onto {z3 = 0}.
struct ConjugateFrame {
  CVec3 u, v, w;
  CMat3 A;
};

ConjugateFrame conjugate_frame(const CVec3& nu);

// A null vector spanning one of the two null directions inside the Hermitian
// orthogonal complement of a non-null nu.
CVec3 null_in_hyperplane(const CVec3& nu);

}  // namespace ncg
