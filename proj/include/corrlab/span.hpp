#pragma once

#include "corrlab/matrix.hpp"

#include <utility>
#include <vector>

namespace corrlab {

// An orthonormal family of operators of a common shape, orthonormal under the
// Hilbert-Schmidt pairing.  Spans stand in for the strongly closed subspaces
// of B(G,H); in finite dimension strong closure is plain linear span.
class OperatorSpan {
 public:
  OperatorSpan() = default;
  OperatorSpan(Index ambient_rows, Index ambient_cols,
               std::vector<CMatrix> basis);

  Index ambient_rows() const { return rows_; }
  Index ambient_cols() const { return cols_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<CMatrix>& basis() const { return basis_; }
  const CMatrix& operator[](std::size_t i) const { return basis_[i]; }

  // Coefficients of x against the orthonormal basis.
  CVector coefficients(const CMatrix& x) const;

  // Orthogonal projection of x onto the span.
  CMatrix project(const CMatrix& x) const;

  // Frobenius distance from x to the span.
  double residual(const CMatrix& x) const;

  bool contains(const CMatrix& x, const Tolerance& tol) const {
    return residual(x) <= tol.cutoff(1.0 + frob(x));
  }

  // Stacked vectorizations, one column per basis element.
  CMatrix stacked() const;

  // Max HS-Gram deviation from the identity.
  double orthonormality_defect() const;

 private:
  Index rows_ = 0, cols_ = 0;
  std::vector<CMatrix> basis_;
};

// Orthonormal basis of the span of the inputs; dimension is the tolerant rank
// of the stacked vectorizations.  Basis order and phases are canonicalized so
// identical inputs give identical output.
OperatorSpan hs_orthonormalize(const std::vector<CMatrix>& vectors,
                               const Tolerance& tol);

// Orthonormal basis of {x : left_ops[i] * x == x * right_ops[i] for all i},
// found as the kernel of the stacked Sylvester system.
OperatorSpan solve_intertwiners(const std::vector<CMatrix>& left_ops,
                                const std::vector<CMatrix>& right_ops,
                                Index rows, Index cols, const Tolerance& tol);

// Rank and coordinate factor of a Hermitian PSD Gram matrix.  The factor F
// satisfies F^* F ~= gram on the retained eigenspace; column j of F holds the
// coordinates of input vector j in an orthonormal frame of the quotient.
struct GramQuotient {
  Index dimension = 0;
  CMatrix factor;  // dimension x gram.cols()
};

GramQuotient gram_quotient(const CMatrix& gram, const Tolerance& tol);

// ---- span utilities ------------------------------------------------------

// Operator 2-norm distance between the orthogonal projections onto two spans.
double span_distance(const OperatorSpan& a, const OperatorSpan& b);

bool same_span(const OperatorSpan& a, const OperatorSpan& b,
               const Tolerance& tol);

// Orthonormal basis of the intersection of two spans.
OperatorSpan span_intersection(const OperatorSpan& a, const OperatorSpan& b,
                               const Tolerance& tol);

// Orthonormal basis of (span of a) ominus (span of b), inside a.
OperatorSpan span_complement(const OperatorSpan& a, const OperatorSpan& b,
                             const Tolerance& tol);

// Column space of a set of matrices (their joint range), as an isometry whose
// columns form an orthonormal basis.
CMatrix column_space(const std::vector<CMatrix>& mats, const Tolerance& tol);

// Tolerant rank of a general matrix.
Index tolerant_rank(const CMatrix& m, const Tolerance& tol);

// Least squares solve X * A = B (minimizing over X), via complete
// orthogonal decomposition of A^T.
CMatrix solve_left(const CMatrix& a, const CMatrix& b);

// SVD with a Jacobi fallback: BDCSVD in Eigen 3.4 occasionally emits NaNs on
// structured complex inputs.  Fields are populated per the requested flags.
struct Svd {
  Eigen::VectorXd sv;
  CMatrix u, v;
};
Svd robust_svd(const CMatrix& m, unsigned flags);

}  // namespace corrlab
