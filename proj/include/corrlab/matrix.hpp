#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace corrlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Numerical cutoffs used by every rank / kernel / membership decision.
// A singular value sigma is significant iff sigma > abs_eps + rel_eps * sigma_max.
struct Tolerance {
  double abs_eps = 1e-9;
  double rel_eps = 1e-8;

  Tolerance() = default;
  Tolerance(double abs, double rel) : abs_eps(abs), rel_eps(rel) {
    if (abs_eps < 0 || rel_eps < 0 || abs_eps >= 1.0 || rel_eps >= 1.0)
      throw std::invalid_argument("Tolerance: eps values must lie in [0, 1)");
  }

  double cutoff(double scale) const { return abs_eps + rel_eps * scale; }
};

inline bool is_finite(const CMatrix& m) { return m.allFinite(); }

// Hilbert-Schmidt pairing <a,b> = trace(a^* b), conjugate-linear in the first slot.
inline Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  return (a.adjoint() * b).trace();
}

inline double frob(const CMatrix& a) { return a.norm(); }

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Column-major vectorization; vec(A X B) = kron(B^T, A) vec(X).
inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, Index rows, Index cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

// Deterministic random source. std::normal_distribution is not pinned by the
// standard, so gaussians are produced by an explicit Box-Muller over the raw
// mt19937_64 stream; identical seeds give identical matrices on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(state_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Complex cgaussian() {
    const double re = gaussian();
    return {re, gaussian()};
  }

  CMatrix matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = cgaussian();
    return m;
  }

  CVector vector(Index n) {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

  // Haar-ish unitary via QR of a gaussian matrix with phase fixing.
  CMatrix unitary(Index n) {
    const CMatrix g = matrix(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
      const Complex d = r(i, i);
      if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
  }

  std::uint64_t raw() { return state_(); }

 private:
  std::mt19937_64 state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace corrlab
