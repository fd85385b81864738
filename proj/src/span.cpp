#include "corrlab/span.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrlab {

namespace {

// Phase-fix a vectorized operator: the largest entry (first among near-ties)
// is rotated to the positive real axis.  Keeps SVD output reproducible.
void canonical_phase(CVector& v) {
  Index pivot = 0;
  double best = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best * (1.0 + 1e-12)) {
      best = a;
      pivot = i;
    }
  }
  if (best > 0) {
    const Complex phase = std::conj(v(pivot)) / best;
    v *= phase;
  }
}

// Deterministic order among basis vectors of equal weight: lexicographic on
// entries rounded to 1e-9.
bool lex_less(const CVector& a, const CVector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    const double ar = std::round(a(i).real() * 1e9), br = std::round(b(i).real() * 1e9);
    if (ar != br) return ar < br;
    const double ai = std::round(a(i).imag() * 1e9), bi = std::round(b(i).imag() * 1e9);
    if (ai != bi) return ai < bi;
  }
  return false;
}

}  // namespace

Svd robust_svd(const CMatrix& m, unsigned flags) {
  // BDCSVD in Eigen 3.4 returns wrong factors (not just NaNs) for some
  // structured complex inputs, so every decomposition goes through the
  // Jacobi kernel.  Desk-scale sizes keep this affordable.
  Eigen::JacobiSVD<CMatrix> svd(m, flags);
  Svd out;
  out.sv = svd.singularValues();
  if (flags & (Eigen::ComputeThinU | Eigen::ComputeFullU)) out.u = svd.matrixU();
  if (flags & (Eigen::ComputeThinV | Eigen::ComputeFullV)) out.v = svd.matrixV();
  return out;
}

OperatorSpan::OperatorSpan(Index ambient_rows, Index ambient_cols,
                           std::vector<CMatrix> basis)
    : rows_(ambient_rows), cols_(ambient_cols), basis_(std::move(basis)) {
  for (const auto& b : basis_) {
    if (b.rows() != rows_ || b.cols() != cols_)
      throw std::invalid_argument("OperatorSpan: basis shape mismatch");
    if (!is_finite(b))
      throw std::invalid_argument("OperatorSpan: non-finite entries");
  }
}

CVector OperatorSpan::coefficients(const CMatrix& x) const {
  CVector c(dim());
  for (Index i = 0; i < dim(); ++i) c(i) = hs_inner(basis_[static_cast<std::size_t>(i)], x);
  return c;
}

CMatrix OperatorSpan::project(const CMatrix& x) const {
  CMatrix p = CMatrix::Zero(rows_, cols_);
  for (const auto& b : basis_) p += hs_inner(b, x) * b;
  return p;
}

double OperatorSpan::residual(const CMatrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_)
    throw std::invalid_argument("OperatorSpan::residual: shape mismatch");
  return frob(x - project(x));
}

CMatrix OperatorSpan::stacked() const {
  CMatrix m(rows_ * cols_, dim());
  for (Index j = 0; j < dim(); ++j) m.col(j) = vec(basis_[static_cast<std::size_t>(j)]);
  return m;
}

double OperatorSpan::orthonormality_defect() const {
  double worst = 0.0;
  for (Index i = 0; i < dim(); ++i)
    for (Index j = 0; j < dim(); ++j) {
      const Complex g = hs_inner(basis_[static_cast<std::size_t>(i)], basis_[static_cast<std::size_t>(j)]);
      worst = std::max(worst, std::abs(g - (i == j ? Complex(1) : Complex(0))));
    }
  return worst;
}

OperatorSpan hs_orthonormalize(const std::vector<CMatrix>& vectors,
                               const Tolerance& tol) {
  if (vectors.empty()) return {};
  const Index rows = vectors.front().rows(), cols = vectors.front().cols();
  for (const auto& v : vectors)
    if (v.rows() != rows || v.cols() != cols)
      throw std::invalid_argument("hs_orthonormalize: shape mismatch");
  if (rows * cols == 0) return OperatorSpan(rows, cols, {});

  CMatrix stack(rows * cols, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) stack.col(static_cast<Index>(j)) = vec(vectors[j]);

  const Svd svd = robust_svd(stack, Eigen::ComputeThinU);
  const auto& sv = svd.sv;
  const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);

  std::vector<CVector> kept;
  std::vector<double> weights;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) {
      CVector v = svd.u.col(i);
      canonical_phase(v);
      kept.push_back(std::move(v));
      weights.push_back(sv(i));
    }
  }
  // Stable order: descending singular value, lex tiebreak among near-equal.
  std::vector<std::size_t> order(kept.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(weights[a] - weights[b]) > 1e-9 * (weights[a] + weights[b]))
      return weights[a] > weights[b];
    return lex_less(kept[a], kept[b]);
  });

  std::vector<CMatrix> basis;
  basis.reserve(kept.size());
  for (std::size_t i : order) basis.push_back(unvec(kept[i], rows, cols));
  return OperatorSpan(rows, cols, std::move(basis));
}

OperatorSpan solve_intertwiners(const std::vector<CMatrix>& left_ops,
                                const std::vector<CMatrix>& right_ops,
                                Index rows, Index cols, const Tolerance& tol) {
  if (left_ops.size() != right_ops.size())
    throw std::invalid_argument("solve_intertwiners: op count mismatch");
  for (const auto& l : left_ops)
    if (l.rows() != rows || l.cols() != rows)
      throw std::invalid_argument("solve_intertwiners: left op must be square of size rows");
  for (const auto& r : right_ops)
    if (r.rows() != cols || r.cols() != cols)
      throw std::invalid_argument("solve_intertwiners: right op must be square of size cols");

  const Index n = rows * cols;
  const Index k = static_cast<Index>(left_ops.size());
  if (k == 0) {
    // No constraints: whole space.
    std::vector<CMatrix> full;
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) {
        CMatrix e = CMatrix::Zero(rows, cols);
        e(i, j) = 1.0;
        full.push_back(std::move(e));
      }
    return OperatorSpan(rows, cols, std::move(full));
  }

  // vec(L x - x R) = (I (x) L - R^T (x) I) vec(x)
  CMatrix big(k * n, n);
  const CMatrix idr = CMatrix::Identity(rows, rows);
  const CMatrix idc = CMatrix::Identity(cols, cols);
  for (Index i = 0; i < k; ++i) {
    big.middleRows(i * n, n) =
        kron(idc, left_ops[static_cast<std::size_t>(i)]) -
        kron(right_ops[static_cast<std::size_t>(i)].transpose(), idr);
  }

  const Svd svd = robust_svd(big, Eigen::ComputeThinV);
  const auto& sv = svd.sv;
  const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);

  std::vector<CVector> kernel;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cut) {
      CVector v = svd.v.col(i);
      canonical_phase(v);
      kernel.push_back(std::move(v));
    }
  // The thin SVD of a tall matrix yields min(rows, cols) singular values;
  // directions beyond that are also kernel when the system is wide. Here
  // big has k*n >= n rows, so all n directions are covered.

  std::stable_sort(kernel.begin(), kernel.end(), lex_less);
  std::vector<CMatrix> basis;
  basis.reserve(kernel.size());
  for (const auto& v : kernel) basis.push_back(unvec(v, rows, cols));
  return OperatorSpan(rows, cols, std::move(basis));
}

GramQuotient gram_quotient(const CMatrix& gram, const Tolerance& tol) {
  if (gram.rows() != gram.cols())
    throw std::invalid_argument("gram_quotient: matrix not square");
  const double scale = std::max(1.0, frob(gram));
  if (frob(gram - gram.adjoint()) > tol.cutoff(scale))
    throw std::invalid_argument("gram_quotient: matrix not Hermitian");

  Eigen::SelfAdjointEigenSolver<CMatrix> eig((gram + gram.adjoint()) * 0.5);
  const auto& vals = eig.eigenvalues();
  const double top = vals.size() ? vals(vals.size() - 1) : 0.0;
  const double cut = tol.cutoff(std::max(0.0, top));
  if (vals.size() && vals(0) < -cut)
    throw std::invalid_argument(
        "gram_quotient: significantly negative eigenvalue (" +
        std::to_string(vals(0)) + "); semi-inner product invalid");

  GramQuotient q;
  std::vector<Index> keep;
  for (Index i = vals.size() - 1; i >= 0; --i)
    if (vals(i) > cut) keep.push_back(i);  // descending order
  q.dimension = static_cast<Index>(keep.size());
  q.factor = CMatrix(q.dimension, gram.cols());
  for (Index r = 0; r < q.dimension; ++r) {
    CVector u = eig.eigenvectors().col(keep[static_cast<std::size_t>(r)]);
    canonical_phase(u);
    q.factor.row(r) = std::sqrt(vals(keep[static_cast<std::size_t>(r)])) * u.adjoint();
  }
  return q;
}

double span_distance(const OperatorSpan& a, const OperatorSpan& b) {
  if (a.dim() == 0 && b.dim() == 0) return 0.0;
  const Index na = a.ambient_rows() * a.ambient_cols();
  const Index nb = b.ambient_rows() * b.ambient_cols();
  const Index n = std::max<Index>(1, std::max(na, nb));
  if (a.dim() && b.dim() && na != nb) return 1.0;
  CMatrix pa = CMatrix::Zero(n, n), pb = CMatrix::Zero(n, n);
  if (a.dim()) {
    const CMatrix sa = a.stacked();
    pa = sa * sa.adjoint();
  }
  if (b.dim()) {
    const CMatrix sb = b.stacked();
    pb = sb * sb.adjoint();
  }
  return (pa - pb).operatorNorm();
}

bool same_span(const OperatorSpan& a, const OperatorSpan& b,
               const Tolerance& tol) {
  if (a.dim() != b.dim()) return false;
  if (a.dim() == 0) return true;
  if (a.ambient_rows() != b.ambient_rows() || a.ambient_cols() != b.ambient_cols())
    return false;
  return span_distance(a, b) <= tol.cutoff(1.0) * 100;
}

OperatorSpan span_intersection(const OperatorSpan& a, const OperatorSpan& b,
                               const Tolerance& tol) {
  if (a.dim() == 0 || b.dim() == 0)
    return OperatorSpan(a.ambient_rows(), a.ambient_cols(), {});
  // x in both spans: x = Sa u = Sb v; kernel of [Sa, -Sb].
  const CMatrix sa = a.stacked(), sb = b.stacked();
  CMatrix joint(sa.rows(), sa.cols() + sb.cols());
  joint.leftCols(sa.cols()) = sa;
  joint.rightCols(sb.cols()) = -sb;
  // Full V: when the stack is wide, kernel directions live beyond the thin
  // factor.
  const Svd svd = robust_svd(joint, Eigen::ComputeFullV);
  const auto& sv = svd.sv;
  const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);
  std::vector<CMatrix> members;
  for (Index i = 0; i < joint.cols(); ++i) {
    const double sigma = (i < sv.size()) ? sv(i) : 0.0;
    if (sigma <= cut) {
      const CVector u = svd.v.col(i).head(sa.cols());
      members.push_back(unvec(sa * u, a.ambient_rows(), a.ambient_cols()));
    }
  }
  return hs_orthonormalize(members, tol);
}

OperatorSpan span_complement(const OperatorSpan& a, const OperatorSpan& b,
                             const Tolerance& tol) {
  std::vector<CMatrix> residuals;
  for (const auto& x : a.basis()) {
    CMatrix r = x;
    if (b.dim()) r -= b.project(x);
    residuals.push_back(std::move(r));
  }
  return hs_orthonormalize(residuals, tol);
}

CMatrix column_space(const std::vector<CMatrix>& mats, const Tolerance& tol) {
  if (mats.empty()) return {};
  const Index rows = mats.front().rows();
  Index total = 0;
  for (const auto& m : mats) total += m.cols();
  if (rows == 0 || total == 0) return CMatrix(rows, 0);
  CMatrix stack(rows, total);
  Index at = 0;
  for (const auto& m : mats) {
    stack.middleCols(at, m.cols()) = m;
    at += m.cols();
  }
  const Svd svd = robust_svd(stack, Eigen::ComputeThinU);
  const auto& sv = svd.sv;
  const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.u.leftCols(rank);
}

Index tolerant_rank(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  const Svd svd = robust_svd(m, 0);
  const auto& sv = svd.sv;
  const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return rank;
}

CMatrix solve_left(const CMatrix& a, const CMatrix& b) {
  // X a = b  <=>  a^T X^T = b^T
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(a.transpose());
  return cod.solve(b.transpose()).transpose();
}

}  // namespace corrlab
