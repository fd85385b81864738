#include "corrlab/module.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrlab {

namespace {

// Move the multiplicity index of a block to the row side:  x restricted to a
// block with frame W (size n, multiplicity m) becomes a (d*m) x n matrix.
// The right action of the block algebra is then plain right multiplication.
CMatrix tilde(const CMatrix& x, const AlgebraBlock& blk) {
  const Index d = x.rows();
  const CMatrix xw = x * blk.frame;  // d x (n*m)
  CMatrix t(d * blk.multiplicity, blk.size);
  for (Index i = 0; i < blk.size; ++i)
    for (Index j = 0; j < blk.multiplicity; ++j)
      t.block(d * j, i, d, 1) = xw.col(i * blk.multiplicity + j);
  return t;
}

CMatrix untilde(const CMatrix& t, const AlgebraBlock& blk, Index target_dim,
                Index rep_dim) {
  CMatrix xw(target_dim, blk.size * blk.multiplicity);
  for (Index i = 0; i < blk.size; ++i)
    for (Index j = 0; j < blk.multiplicity; ++j)
      xw.col(i * blk.multiplicity + j) = t.block(target_dim * j, i, target_dim, 1);
  CMatrix x = CMatrix::Zero(target_dim, rep_dim);
  x += xw * blk.frame.adjoint();
  return x;
}

void check_shapes(const AlgebraPtr& b, Index target_dim,
                  const std::vector<CMatrix>& elements) {
  for (const auto& x : elements)
    if (x.rows() != target_dim || x.cols() != b->rep_dim())
      throw std::invalid_argument("module element has wrong shape");
}

void validate_inner_products(const ConcreteModule& e, const Tolerance& tol) {
  const Index g = e.algebra->rep_dim();
  if (e.algebra->dim() == g * g) return;  // full algebra absorbs everything
  const auto& basis = e.span.basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      const CMatrix p = basis[i].adjoint() * basis[j];
      if (!e.algebra->contains(p, tol))
        throw std::invalid_argument(
            "module inner product escapes the algebra (not a B-module)");
    }
}

}  // namespace

std::vector<BlockColumns> block_columns(const AlgebraPtr& b, Index target_dim,
                                        const std::vector<CMatrix>& elements,
                                        const Tolerance& tol) {
  std::vector<BlockColumns> out;
  for (Index k = 0; k < b->block_count(); ++k) {
    const auto& blk = b->blocks()[static_cast<std::size_t>(k)];
    BlockColumns bc;
    bc.block = k;
    if (elements.empty()) {
      bc.basis = CMatrix(target_dim * blk.multiplicity, 0);
      out.push_back(std::move(bc));
      continue;
    }
    std::vector<CMatrix> tildes;
    tildes.reserve(elements.size());
    for (const auto& x : elements) tildes.push_back(tilde(x, blk));

    Index total = 0;
    for (const auto& t : tildes) total += t.cols();
    CMatrix stack(target_dim * blk.multiplicity, total);
    Index at = 0;
    for (const auto& t : tildes) {
      stack.middleCols(at, t.cols()) = t;
      at += t.cols();
    }
    const Svd svd = robust_svd(stack, Eigen::ComputeThinU);
    const auto& sv = svd.sv;
    const double cut = tol.cutoff(sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) ++rank;
      if (cut > 0 && sv(i) > cut * 1e-2 && sv(i) < cut * 1e2)
        bc.rank_ambiguous = true;
    }
    bc.basis = svd.u.leftCols(rank);
    out.push_back(std::move(bc));
  }
  return out;
}

ConcreteModule make_module(const AlgebraPtr& b, Index target_dim,
                           const std::vector<CMatrix>& generators,
                           const Tolerance& tol) {
  check_shapes(b, target_dim, generators);

  // Closed-form right closure: per block, the closure of the tilde picture is
  // all of B(C^n, column space), so an orthonormal basis of the closure is
  // kappa_alpha (x) row_i over column-space basis kappa and 1 <= i <= n.
  const auto cols = block_columns(b, target_dim, generators, tol);
  std::vector<CMatrix> basis;
  for (Index k = 0; k < b->block_count(); ++k) {
    const auto& blk = b->blocks()[static_cast<std::size_t>(k)];
    const auto& bc = cols[static_cast<std::size_t>(k)];
    for (Index a = 0; a < bc.basis.cols(); ++a)
      for (Index i = 0; i < blk.size; ++i) {
        CMatrix t = CMatrix::Zero(target_dim * blk.multiplicity, blk.size);
        t.col(i) = bc.basis.col(a);
        basis.push_back(untilde(t, blk, target_dim, b->rep_dim()));
      }
  }

  ConcreteModule e;
  e.algebra = b;
  e.target_dim = target_dim;
  e.span = OperatorSpan(target_dim, b->rep_dim(), std::move(basis));
  validate_inner_products(e, tol);
  return e;
}

ConcreteModule module_from_span(const AlgebraPtr& b, Index target_dim,
                                OperatorSpan span, const Tolerance& tol) {
  ConcreteModule e;
  e.algebra = b;
  e.target_dim = target_dim;
  e.span = std::move(span);
  // Right invariance.
  for (const auto& x : e.span.basis())
    for (const auto& u : b->units())
      if (e.span.residual(x * u) > tol.cutoff(1.0 + frob(x * u)) * 10)
        throw std::invalid_argument("module_from_span: span is not right-invariant");
  validate_inner_products(e, tol);
  return e;
}

OperatorSpan star_algebra_closure(const std::vector<CMatrix>& generators,
                                  const Tolerance& tol) {
  OperatorSpan s = hs_orthonormalize(generators, tol);
  for (int round = 0; round < 16; ++round) {
    std::vector<CMatrix> family = s.basis();
    for (const auto& x : s.basis()) family.push_back(x.adjoint());
    for (const auto& x : s.basis())
      for (const auto& y : s.basis()) family.push_back(x * y);
    OperatorSpan next = hs_orthonormalize(family, tol);
    const bool stable = next.dim() == s.dim();
    s = std::move(next);
    if (stable) return s;
  }
  throw std::runtime_error("star_algebra_closure: span failed to stabilize");
}

OperatorSpan product_span(const ConcreteModule& e, const Tolerance& tol) {
  std::vector<CMatrix> prods;
  const auto& basis = e.span.basis();
  for (const auto& x : basis)
    for (const auto& y : basis) prods.push_back(x.adjoint() * y);
  if (prods.empty()) return OperatorSpan(e.algebra->rep_dim(), e.algebra->rep_dim(), {});
  return star_algebra_closure(prods, tol);
}

bool is_full(const ConcreteModule& e, const Tolerance& tol) {
  return product_span(e, tol).dim() == e.algebra->dim();
}

UnitCertificate unit_vector_certificate(const ConcreteModule& e,
                                        const Tolerance& tol) {
  UnitCertificate cert;
  const auto cols = block_columns(e.algebra, e.target_dim, e.span.basis(), tol);
  bool ambiguous = false, feasible = true;
  for (Index k = 0; k < e.algebra->block_count(); ++k) {
    const auto& blk = e.algebra->blocks()[static_cast<std::size_t>(k)];
    const auto& bc = cols[static_cast<std::size_t>(k)];
    UnitCertificate::BlockRank r;
    r.block = k;
    r.needed = blk.size;
    r.available = bc.basis.cols();
    cert.ranks.push_back(r);
    if (bc.rank_ambiguous) ambiguous = true;
    if (r.available < r.needed) feasible = false;
  }
  if (ambiguous) {
    cert.verdict = UnitCertificate::Verdict::unknown;
    return cert;
  }
  if (!feasible) {
    cert.verdict = UnitCertificate::Verdict::impossible;
    return cert;
  }

  // Blockwise isometry completion: xi-tilde = sqrt(m) * [kappa_1 .. kappa_n].
  CMatrix xi = CMatrix::Zero(e.target_dim, e.algebra->rep_dim());
  for (Index k = 0; k < e.algebra->block_count(); ++k) {
    const auto& blk = e.algebra->blocks()[static_cast<std::size_t>(k)];
    const auto& bc = cols[static_cast<std::size_t>(k)];
    CMatrix t(e.target_dim * blk.multiplicity, blk.size);
    for (Index i = 0; i < blk.size; ++i)
      t.col(i) = std::sqrt(static_cast<double>(blk.multiplicity)) * bc.basis.col(i);
    xi += untilde(t, blk, e.target_dim, e.algebra->rep_dim());
  }
  const CMatrix gram = xi.adjoint() * xi;
  if (frob(gram - CMatrix::Identity(e.algebra->rep_dim(), e.algebra->rep_dim())) >
          tol.cutoff(1.0) * 100 ||
      e.span.residual(xi) > tol.cutoff(1.0 + frob(xi)) * 100) {
    cert.verdict = UnitCertificate::Verdict::unknown;
    return cert;
  }
  cert.verdict = UnitCertificate::Verdict::found;
  cert.witness = xi;
  return cert;
}

InducedRep induced_rep(const ConcreteModule& e, const Tolerance& tol,
                       AlgebraPtr precomputed_commutant, bool with_ba) {
  InducedRep out;
  if (e.dim() == 0)
    throw std::invalid_argument("induced_rep: refusing an empty module");
  out.isometry = column_space(e.span.basis(), tol);
  out.h = out.isometry.cols();
  // When the module already reaches everything, the canonical identification
  // of H with the reach is the identity.
  if (out.h == e.target_dim) out.isometry = CMatrix::Identity(out.h, out.h);

  std::vector<CMatrix> reduced;
  for (const auto& x : e.span.basis()) reduced.push_back(out.isometry.adjoint() * x);
  out.reduced.algebra = e.algebra;
  out.reduced.target_dim = out.h;
  out.reduced.span = OperatorSpan(out.h, e.algebra->rep_dim(), reduced);

  if (with_ba) {
    // pi(B^a(E)): the *-algebra generated by the rank-one products x y^*
    // together with the identity (reachable units).
    std::vector<CMatrix> prods;
    prods.push_back(CMatrix::Identity(out.h, out.h));
    for (const auto& x : reduced)
      for (const auto& y : reduced) prods.push_back(x * y.adjoint());
    out.ba = structure_algebra(star_algebra_closure(prods, tol), tol);
  }

  out.commutant = precomputed_commutant ? std::move(precomputed_commutant)
                                        : commutant_algebra(*e.algebra, tol);

  // rho'(b'): x g -> x b' g, assembled column-block-wise and solved in least
  // squares over the spanning vectors x_s e_u.
  const Index g = e.algebra->rep_dim();
  const Index s = out.reduced.dim();
  CMatrix m(out.h, s * g), n(out.h, s * g);
  out.rho_prime.algebra = out.commutant;
  out.rho_prime.space_dim = out.h;
  for (Index i = 0; i < s; ++i)
    m.middleCols(i * g, g) = out.reduced.span[static_cast<std::size_t>(i)];
  for (const auto& eprime : out.commutant->units()) {
    for (Index i = 0; i < s; ++i)
      n.middleCols(i * g, g) = out.reduced.span[static_cast<std::size_t>(i)] * eprime;
    CMatrix img = solve_left(m, n);
    if (frob(img * m - n) > tol.cutoff(1.0 + frob(n)) * 100)
      throw std::runtime_error("induced_rep: rho' is not well defined on the reach");
    out.rho_prime.images.push_back(std::move(img));
  }
  if (out.rho_prime.hom_defect() > tol.cutoff(1.0) * 100)
    throw std::runtime_error("induced_rep: rho' fails the *-homomorphism audit");
  return out;
}

ConcreteModule intertwiner_module(const AlgebraPtr& b,
                                  const Representation& rho_prime,
                                  const Tolerance& tol) {
  const auto bp = rho_prime.algebra;
  std::vector<CMatrix> left, right;
  for (Index i : bp->generator_indices()) {
    left.push_back(rho_prime.images[static_cast<std::size_t>(i)]);
    right.push_back(bp->unit_image(i));
  }
  const OperatorSpan sol =
      solve_intertwiners(left, right, rho_prime.space_dim, b->rep_dim(), tol);
  ConcreteModule e;
  e.algebra = b;
  e.target_dim = rho_prime.space_dim;
  e.span = sol;
  validate_inner_products(e, tol);
  return e;
}

bool check_totality(const ConcreteModule& e, const Tolerance& tol) {
  if (e.dim() == 0) return e.target_dim == 0;
  return column_space(e.span.basis(), tol).cols() == e.target_dim;
}

ModuleRestriction restrict_to_range(const ConcreteModule& e, const Tolerance& tol) {
  const OperatorSpan be = product_span(e, tol);
  std::vector<Index> kept;
  for (Index k = 0; k < e.algebra->block_count(); ++k) {
    const auto& blk = e.algebra->blocks()[static_cast<std::size_t>(k)];
    double mass = 0;
    for (const auto& p : be.basis()) mass += frob(blk.projection * p * blk.projection);
    if (mass > tol.cutoff(1.0) * 10) kept.push_back(k);
  }
  if (kept.empty())
    throw std::invalid_argument("restrict_to_range: module has zero inner products");

  const AlgebraRestriction ar = restrict_to_blocks(*e.algebra, kept);
  std::vector<CMatrix> moved;
  for (const auto& x : e.span.basis()) moved.push_back(x * ar.embedding);

  ModuleRestriction out;
  out.restricted = ar.algebra;
  out.embedding = ar.embedding;
  out.kept_blocks = kept;
  out.module.algebra = ar.algebra;
  out.module.target_dim = e.target_dim;
  out.module.span = hs_orthonormalize(moved, tol);
  validate_inner_products(out.module, tol);
  return out;
}

}  // namespace corrlab
