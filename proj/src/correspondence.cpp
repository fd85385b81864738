#include "corrlab/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrlab {

namespace {

double scaled(double base, const Tolerance& tol) { return tol.cutoff(1.0 + base) * 10; }

CMatrix images_apply(const std::vector<CMatrix>& images, const Algebra& alg,
                     const CMatrix& x) {
  const CVector c = alg.coefficients(x);
  CMatrix out = CMatrix::Zero(images.front().rows(), images.front().cols());
  for (Index i = 0; i < c.size(); ++i) out += c(i) * images[static_cast<std::size_t>(i)];
  return out;
}

// Least-squares construction of an operator on H from its action on a
// spanning family: find R with R * from == to, and report the residual.
CMatrix operator_from_spanning(const CMatrix& from, const CMatrix& to,
                               double* residual) {
  CMatrix r = solve_left(from, to);
  if (residual) *residual = frob(r * from - to);
  return r;
}

void validate_left_action(const Correspondence& e, const Tolerance& tol) {
  Representation rep;
  rep.algebra = e.left;
  rep.space_dim = e.h();
  rep.images = e.left_images;
  if (rep.hom_defect() > scaled(1.0, tol) * 10)
    throw std::invalid_argument("correspondence: left action is not a unital *-homomorphism");
  for (const auto& l : e.left_images)
    for (const auto& r : e.rho_prime_images)
      if (frob(l * r - r * l) > scaled(frob(l), tol))
        throw std::invalid_argument("correspondence: left action fails to commute with rho'");
  // Module preservation, batched: || (1 - P_span) l X || over the stacked
  // basis.
  const Index s = e.dim();
  const CMatrix mstack = e.module.span.stacked();  // (h g) x s
  for (const auto& l : e.left_images) {
    CMatrix lx(mstack.rows(), s);
    for (Index i = 0; i < s; ++i)
      lx.col(i) = vec(l * e.module.span[static_cast<std::size_t>(i)]);
    const CMatrix coeff = mstack.adjoint() * lx;
    const double resid = (lx - mstack * coeff).norm();
    if (resid > scaled(frob(l) * std::sqrt(static_cast<double>(std::max<Index>(s, 1))), tol))
      throw std::invalid_argument("correspondence: left action does not preserve the module");
  }
  // Spot checks of the module laws (full validation happens in make_module).
  const auto& basis = e.module.span.basis();
  const std::size_t probe = std::min<std::size_t>(basis.size(), 3);
  for (std::size_t i = 0; i < probe; ++i) {
    for (const auto& u : e.right->units())
      if (e.module.span.residual(basis[i] * u) > scaled(frob(basis[i] * u), tol))
        throw std::invalid_argument("correspondence: module span is not right-invariant");
    for (std::size_t j = 0; j < probe; ++j)
      if (!e.right->contains(basis[i].adjoint() * basis[j], tol))
        throw std::invalid_argument("correspondence: inner product escapes the right algebra");
  }
}

}  // namespace

CMatrix Correspondence::apply_left(const CMatrix& a) const {
  return images_apply(left_images, *left, a);
}

CMatrix Correspondence::apply_rho_prime(const CMatrix& bp) const {
  return images_apply(rho_prime_images, *right_commutant, bp);
}

CMatrix CPMap::apply(const CMatrix& a) const {
  return images_apply(action, *source, a);
}

CPMap cp_from_kraus(const AlgebraPtr& source, const AlgebraPtr& target,
                    std::vector<CMatrix> kraus, const Tolerance& tol) {
  CPMap t;
  t.source = source;
  t.target = target;
  for (const auto& v : kraus)
    if (v.rows() != target->rep_dim() || v.cols() != source->rep_dim())
      throw std::invalid_argument("cp_from_kraus: Kraus piece has wrong shape");
  t.kraus = std::move(kraus);
  for (const auto& e : source->units()) {
    CMatrix img = CMatrix::Zero(target->rep_dim(), target->rep_dim());
    for (const auto& v : t.kraus) img += v * e * v.adjoint();
    if (!target->contains(img, tol))
      throw std::invalid_argument("cp_from_kraus: image escapes the target algebra");
    t.action.push_back(std::move(img));
  }
  return t;
}

CPMap cp_from_action(const AlgebraPtr& source, const AlgebraPtr& target,
                     std::vector<CMatrix> action, const Tolerance& tol) {
  if (static_cast<Index>(action.size()) != source->dim())
    throw std::invalid_argument("cp_from_action: one image per source matrix unit");
  CPMap t;
  t.source = source;
  t.target = target;
  for (const auto& img : action) {
    if (!target->contains(img, tol))
      throw std::invalid_argument("cp_from_action: image escapes the target algebra");
  }
  t.action = std::move(action);
  return t;
}

CPMap compose(const CPMap& outer, const CPMap& inner, const Tolerance& tol) {
  if (!same_algebra_span(*outer.source, *inner.target, tol))
    throw std::invalid_argument("compose: algebra mismatch");
  std::vector<CMatrix> action;
  for (const auto& img : inner.action) action.push_back(outer.apply(img));
  return cp_from_action(inner.source, outer.target, std::move(action), tol);
}

double cp_kernel_min_eigenvalue(const CPMap& t) {
  const Index d = t.source->dim();
  const Index g = t.target->rep_dim();
  CMatrix kernel(d * g, d * g);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const Index prod = t.source->unit_product_index(t.source->unit_adjoint_index(i), j);
      const CMatrix block = (prod >= 0) ? t.apply_unit(prod) : CMatrix::Zero(g, g);
      kernel.block(i * g, j * g, g, g) = block;
    }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig((kernel + kernel.adjoint()) * 0.5);
  return eig.eigenvalues()(0);
}

bool is_completely_positive(const CPMap& t, const Tolerance& tol) {
  return cp_kernel_min_eigenvalue(t) >= -tol.cutoff(1.0);
}

bool is_unital(const CPMap& t, const Tolerance& tol) {
  const CMatrix img = t.apply(t.source->identity());
  return frob(img - CMatrix::Identity(img.rows(), img.cols())) <= scaled(1.0, tol);
}

Correspondence make_correspondence(const AlgebraPtr& a, const ConcreteModule& e,
                                   const std::vector<CMatrix>& left_images,
                                   const Tolerance& tol) {
  if (static_cast<Index>(left_images.size()) != a->dim())
    throw std::invalid_argument("make_correspondence: one image per matrix unit of A");
  const InducedRep ir = induced_rep(e, tol, nullptr, /*with_ba=*/false);

  Correspondence c;
  c.left = a;
  c.right = e.algebra;
  c.module = ir.reduced;
  c.right_commutant = ir.commutant;
  c.rho_prime_images = ir.rho_prime.images;
  c.embedding = ir.isometry;
  for (const auto& img : left_images) {
    if (img.rows() != e.target_dim || img.cols() != e.target_dim)
      throw std::invalid_argument("make_correspondence: left image has wrong shape");
    // Images must leave the reach invariant; compress.
    const CMatrix moved = img * ir.isometry;
    if (frob(moved - ir.isometry * CMatrix(ir.isometry.adjoint() * moved)) >
        scaled(frob(img), tol))
      throw std::invalid_argument("make_correspondence: left action leaks off the reach");
    c.left_images.push_back(ir.isometry.adjoint() * moved);
  }
  validate_left_action(c, tol);
  return c;
}

Correspondence identity_correspondence(const AlgebraPtr& b, const Tolerance& tol) {
  const auto e = make_module(b, b->rep_dim(), {CMatrix::Identity(b->rep_dim(), b->rep_dim())}, tol);
  return make_correspondence(b, e, b->units(), tol);
}

Correspondence direct_sum(const Correspondence& e1, const Correspondence& e2,
                          const Tolerance& tol) {
  if (!same_algebra_span(*e1.left, *e2.left, tol) ||
      !same_algebra_span(*e1.right, *e2.right, tol))
    throw std::invalid_argument("direct_sum: algebra mismatch");
  const Index h1 = e1.h(), h2 = e2.h(), g = e1.right->rep_dim();
  std::vector<CMatrix> basis;
  for (const auto& x : e1.module.span.basis()) {
    CMatrix z = CMatrix::Zero(h1 + h2, g);
    z.topRows(h1) = x;
    basis.push_back(std::move(z));
  }
  for (const auto& y : e2.module.span.basis()) {
    CMatrix z = CMatrix::Zero(h1 + h2, g);
    z.bottomRows(h2) = y;
    basis.push_back(std::move(z));
  }
  ConcreteModule m;
  m.algebra = e1.right;
  m.target_dim = h1 + h2;
  m.span = OperatorSpan(h1 + h2, g, std::move(basis));

  std::vector<CMatrix> left;
  for (std::size_t i = 0; i < e1.left_images.size(); ++i) {
    CMatrix l = CMatrix::Zero(h1 + h2, h1 + h2);
    l.topLeftCorner(h1, h1) = e1.left_images[i];
    l.bottomRightCorner(h2, h2) = e2.apply_left(e1.left->unit_image(static_cast<Index>(i)));
    left.push_back(std::move(l));
  }
  return make_correspondence(e1.left, m, left, tol);
}

Correspondence reexpress(const Correspondence& e, const AlgebraPtr& new_left,
                         const AlgebraPtr& new_right, const Tolerance& tol) {
  if (!same_algebra_span(*e.left, *new_left, tol) ||
      !same_algebra_span(*e.right, *new_right, tol))
    throw std::invalid_argument("reexpress: replacement algebras have different spans");
  ConcreteModule m = e.module;
  m.algebra = new_right;
  std::vector<CMatrix> left;
  for (const auto& u : new_left->units()) left.push_back(e.apply_left(u));
  return make_correspondence(new_left, m, left, tol);
}

ModuleTensor module_tensor(const ConcreteModule& e, const Correspondence& f,
                           const Tolerance& tol) {
  if (!same_algebra_span(*e.algebra, *f.left, tol))
    throw std::invalid_argument("module_tensor: middle algebras do not match");
  const Index s1 = e.dim(), h2 = f.h();
  CMatrix gram(s1 * h2, s1 * h2);
  const auto& b1 = e.span.basis();
  for (Index s = 0; s < s1; ++s)
    for (Index r = 0; r < s1; ++r) {
      const CMatrix ip = b1[static_cast<std::size_t>(s)].adjoint() * b1[static_cast<std::size_t>(r)];
      gram.block(s * h2, r * h2, h2, h2) = f.apply_left(ip);
    }
  const GramQuotient q = gram_quotient(gram, tol);
  ModuleTensor out;
  out.h = q.dimension;
  out.phi.reserve(static_cast<std::size_t>(s1));
  for (Index s = 0; s < s1; ++s) out.phi.push_back(q.factor.middleCols(s * h2, h2));
  return out;
}

TensorResult tensor(const Correspondence& e1, const Correspondence& e2,
                    const Tolerance& tol) {
  if (!same_algebra_span(*e1.right, *e2.left, tol))
    throw std::invalid_argument("tensor: middle algebras do not match");
  const Index s1 = e1.dim(), h2 = e2.h();
  const auto& b1 = e1.module.span.basis();

  ModuleTensor mt = module_tensor(e1.module, e2, tol);
  const Index h12 = mt.h;

  TensorResult out;
  out.phi = std::move(mt.phi);
  if (h12 == 0) {
    // Zero correspondence: legal, arises when the factors have disjoint
    // block support through the middle algebra.
    out.product.left = e1.left;
    out.product.right = e2.right;
    out.product.module.algebra = e2.right;
    out.product.module.target_dim = 0;
    out.product.module.span = OperatorSpan(0, e2.right->rep_dim(), {});
    out.product.right_commutant = commutant_algebra(*e2.right, tol);
    out.product.embedding = CMatrix(0, 0);
    for (Index i = 0; i < e1.left->dim(); ++i)
      out.product.left_images.push_back(CMatrix(0, 0));
    for (Index i = 0; i < out.product.right_commutant->dim(); ++i)
      out.product.rho_prime_images.push_back(CMatrix(0, 0));
    return out;
  }

  // Module elements phi_s . y_t; their span is the whole product module.
  std::vector<CMatrix> elems;
  for (Index s = 0; s < s1; ++s)
    for (const auto& y : e2.module.span.basis())
      elems.push_back(out.phi[static_cast<std::size_t>(s)] * y);
  ConcreteModule m;
  m.algebra = e2.right;
  m.target_dim = h12;
  m.span = hs_orthonormalize(elems, tol);

  // Left action: class(x_s (x) h) -> class((a x_s) (x) h), solved against the
  // (full row rank) frame.
  CMatrix frame(h12, s1 * h2);
  for (Index s = 0; s < s1; ++s) frame.middleCols(s * h2, h2) = out.phi[static_cast<std::size_t>(s)];
  std::vector<CMatrix> left;
  for (const auto& unit : e1.left->units()) {
    const CMatrix lu = e1.apply_left(unit);
    CMatrix target(h12, s1 * h2);
    for (Index s = 0; s < s1; ++s) {
      const CVector coeff = e1.module.span.coefficients(lu * b1[static_cast<std::size_t>(s)]);
      CMatrix col = CMatrix::Zero(h12, h2);
      for (Index r = 0; r < s1; ++r) col += coeff(r) * out.phi[static_cast<std::size_t>(r)];
      target.middleCols(s * h2, h2) = col;
    }
    double res = 0;
    left.push_back(operator_from_spanning(frame, target, &res));
    if (res > scaled(1.0, tol) * 10)
      throw std::runtime_error("tensor: left action ill-defined on the quotient");
  }
  out.product = make_correspondence(e1.left, m, left, tol);
  return out;
}

GnsResult gns(const CPMap& t, const Tolerance& tol) {
  const auto& a = t.source;
  const auto& b = t.target;
  const Index da = a->dim(), g = b->rep_dim();

  // Stinespring-reduced frame: classes of a_i (x) g_u with
  // <a (x) g, a' (x) g'> = <g, T(a^* a') g'>.  Same quotient as the classes
  // of a (x) b (x) g with b absorbed into the vector.
  CMatrix gram(da * g, da * g);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j) {
      const Index prod = a->unit_product_index(a->unit_adjoint_index(i), j);
      gram.block(i * g, j * g, g, g) =
          (prod >= 0) ? t.apply_unit(prod) : CMatrix::Zero(g, g);
    }
  GramQuotient q;
  try {
    q = gram_quotient(gram, tol);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("gns: positivity kernel has a negative eigenvalue (map is not CP)");
  }
  const Index h = q.dimension;

  std::vector<CMatrix> phi;
  for (Index i = 0; i < da; ++i) phi.push_back(q.factor.middleCols(i * g, g));

  // pi(a_j) moves classes by the exact unit products.
  CMatrix frame(h, da * g);
  for (Index i = 0; i < da; ++i) frame.middleCols(i * g, g) = phi[static_cast<std::size_t>(i)];
  std::vector<CMatrix> left;
  for (Index j = 0; j < da; ++j) {
    CMatrix target = CMatrix::Zero(h, da * g);
    for (Index i = 0; i < da; ++i) {
      const Index prod = a->unit_product_index(j, i);
      if (prod >= 0) target.middleCols(i * g, g) = phi[static_cast<std::size_t>(prod)];
    }
    double res = 0;
    left.push_back(operator_from_spanning(frame, target, &res));
    if (res > scaled(1.0, tol) * 10)
      throw std::runtime_error("gns: left action ill-defined on the quotient");
  }

  // The module is the right closure of the classes of a_i (x) . over B.
  const auto m = make_module(b, h, phi, tol);

  GnsResult out;
  out.corr = make_correspondence(a, m, left, tol);

  // xi = class of 1_A (x) . ; reproduction <xi, a xi> = T(a).
  CMatrix xi = CMatrix::Zero(h, g);
  const CVector one = a->coefficients(a->identity());
  for (Index i = 0; i < da; ++i) xi += one(i) * phi[static_cast<std::size_t>(i)];
  out.cyclic = xi;
  for (Index j = 0; j < da; ++j) {
    const CMatrix lhs = xi.adjoint() * left[static_cast<std::size_t>(j)] * xi;
    out.reproduction_defect =
        std::max(out.reproduction_defect, frob(lhs - t.apply_unit(j)));
  }
  return out;
}

Correspondence commutant(const Correspondence& e, const Tolerance& tol) {
  const auto aprime = commutant_algebra(*e.left, tol);
  std::vector<CMatrix> left, right;
  for (Index i : e.left->generator_indices()) {
    left.push_back(e.left_images[static_cast<std::size_t>(i)]);
    right.push_back(e.left->unit_image(i));
  }
  const OperatorSpan sol =
      solve_intertwiners(left, right, e.h(), e.left->rep_dim(), tol);
  ConcreteModule m;
  m.algebra = aprime;
  m.target_dim = e.h();
  m.span = sol;
  // The intertwiner span of a representation always reaches all of H, so no
  // re-coordinatization happens inside make_correspondence.
  if (!check_totality(m, tol))
    throw std::runtime_error("commutant: intertwiner span fails totality");
  return make_correspondence(e.right_commutant, m, e.rho_prime_images, tol);
}

MultiplicityMatrix multiplicity_matrix(const Correspondence& e, const Tolerance& tol) {
  return multiplicity_matrix_wrt(e, *e.left, *e.right, tol);
}

MultiplicityMatrix multiplicity_matrix_wrt(const Correspondence& e,
                                           const Algebra& left,
                                           const Algebra& right,
                                           const Tolerance& tol) {
  const Index ka = left.block_count(), kb = right.block_count();
  MultiplicityMatrix mm;
  mm.entries = Eigen::MatrixXi::Zero(ka, kb);
  for (Index k = 0; k < ka; ++k) {
    const CMatrix pk = e.apply_left(left.unit_image(left.unit_index(k, 0, 0)));
    const CMatrix big_pk = e.apply_left(left.blocks()[static_cast<std::size_t>(k)].projection);
    for (Index l = 0; l < kb; ++l) {
      const CMatrix& ql = right.unit_image(right.unit_index(l, 0, 0));
      const CMatrix& big_ql = right.blocks()[static_cast<std::size_t>(l)].projection;
      std::vector<CMatrix> corner, full;
      for (const auto& x : e.module.span.basis()) {
        corner.push_back(pk * x * ql);
        full.push_back(big_pk * x * big_ql);
      }
      const Index c = hs_orthonormalize(corner, tol).dim();
      const Index d = hs_orthonormalize(full, tol).dim();
      const Index nk = left.blocks()[static_cast<std::size_t>(k)].size;
      const Index nl = right.blocks()[static_cast<std::size_t>(l)].size;
      if (d != nk * c * nl)
        throw std::runtime_error("multiplicity_matrix: non-integral block dimension");
      mm.entries(k, l) = static_cast<int>(c);
    }
  }
  return mm;
}

namespace {

// Inner-product coefficient on a corner space: x^* y = lambda * e_l00.
Complex corner_lambda(const CMatrix& x, const CMatrix& y, const CMatrix& el00) {
  return hs_inner(el00, x.adjoint() * y) / hs_inner(el00, el00);
}

// Orthonormal basis of the (k,l) corner multiplicity space of a
// correspondence, with respect to the corner inner product.
std::vector<CMatrix> corner_multiplicity_basis(const Correspondence& e,
                                               const CMatrix& pk00,
                                               const CMatrix& ql00,
                                               const Tolerance& tol) {
  std::vector<CMatrix> corner;
  const CMatrix rho_p = e.apply_left(pk00);
  for (const auto& x : e.module.span.basis()) corner.push_back(rho_p * x * ql00);
  const OperatorSpan hs_basis = hs_orthonormalize(corner, tol);
  if (hs_basis.dim() == 0) return {};
  // Re-orthonormalize against the corner lambda inner product.
  CMatrix gram(hs_basis.dim(), hs_basis.dim());
  for (Index i = 0; i < hs_basis.dim(); ++i)
    for (Index j = 0; j < hs_basis.dim(); ++j)
      gram(i, j) = corner_lambda(hs_basis[static_cast<std::size_t>(i)],
                                 hs_basis[static_cast<std::size_t>(j)], ql00);
  const GramQuotient q = gram_quotient(gram, tol);
  if (q.dimension != hs_basis.dim())
    throw std::runtime_error("iso_check: corner inner product is degenerate");
  // Rows of pinv(factor) give the orthonormal combinations.
  const CMatrix f = q.factor;  // dim x dim, invertible
  const CMatrix finv = f.inverse();
  std::vector<CMatrix> out;
  for (Index a = 0; a < q.dimension; ++a) {
    CMatrix v = CMatrix::Zero(e.h(), e.right->rep_dim());
    for (Index i = 0; i < hs_basis.dim(); ++i)
      v += finv(i, a) * hs_basis[static_cast<std::size_t>(i)];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

IsoResult iso_check(const Correspondence& e, const Correspondence& f,
                    const Tolerance& tol) {
  IsoResult out;
  if (!same_algebra_span(*e.left, *f.left, tol) ||
      !same_algebra_span(*e.right, *f.right, tol))
    throw std::invalid_argument("iso_check: correspondences over different algebras");
  const Algebra& la = *e.left;
  const Algebra& ra = *e.right;
  out.left_mult = multiplicity_matrix_wrt(e, la, ra, tol);
  out.right_mult = multiplicity_matrix_wrt(f, la, ra, tol);
  out.isomorphic = (out.left_mult.entries == out.right_mult.entries);
  if (!out.isomorphic) return out;
  if (e.dim() == 0) {
    out.map = CMatrix(0, 0);
    out.unitary_defect = out.inner_product_defect = out.bilinearity_defect = 0.0;
    return out;
  }

  // Standard frames rho(e^k_i0) v_alpha e^l_0j on both sides, matched
  // alpha-for-alpha; the induced linear map is the certifying unitary.
  std::vector<CMatrix> frame_e, frame_f;
  for (Index k = 0; k < la.block_count(); ++k) {
    const Index nk = la.blocks()[static_cast<std::size_t>(k)].size;
    for (Index l = 0; l < ra.block_count(); ++l) {
      const Index nl = ra.blocks()[static_cast<std::size_t>(l)].size;
      const CMatrix pk00 = la.unit_image(la.unit_index(k, 0, 0));
      const CMatrix ql00 = ra.unit_image(ra.unit_index(l, 0, 0));
      const auto ve = corner_multiplicity_basis(e, pk00, ql00, tol);
      const auto vf = corner_multiplicity_basis(f, pk00, ql00, tol);
      if (ve.size() != vf.size())
        throw std::runtime_error("iso_check: corner dimensions diverge from multiplicities");
      for (std::size_t alpha = 0; alpha < ve.size(); ++alpha)
        for (Index i = 0; i < nk; ++i)
          for (Index j = 0; j < nl; ++j) {
            const CMatrix& ei0 = la.unit_image(la.unit_index(k, i, 0));
            const CMatrix& e0j = ra.unit_image(ra.unit_index(l, 0, j));
            frame_e.push_back(e.apply_left(ei0) * ve[alpha] * e0j);
            frame_f.push_back(f.apply_left(ei0) * vf[alpha] * e0j);
          }
    }
  }

  // Coordinates of the frames in the module bases.
  const Index de = e.dim(), df = f.dim();
  CMatrix ce(de, static_cast<Index>(frame_e.size())), cf(df, static_cast<Index>(frame_f.size()));
  for (std::size_t t = 0; t < frame_e.size(); ++t) {
    ce.col(static_cast<Index>(t)) = e.module.span.coefficients(frame_e[t]);
    cf.col(static_cast<Index>(t)) = f.module.span.coefficients(frame_f[t]);
  }
  double res = 0;
  out.map = operator_from_spanning(ce, cf, &res);

  out.unitary_defect = frob(CMatrix(out.map.adjoint() * out.map) - CMatrix::Identity(de, de)) +
                       frob(CMatrix(out.map * out.map.adjoint()) - CMatrix::Identity(df, df)) + res;

  // Certify: algebra-valued inner products and bilinearity.
  std::vector<CMatrix> mapped;
  for (Index s = 0; s < de; ++s) {
    CMatrix y = CMatrix::Zero(f.h(), ra.rep_dim());
    for (Index r = 0; r < df; ++r) y += out.map(r, s) * f.module.span[static_cast<std::size_t>(r)];
    mapped.push_back(std::move(y));
  }
  double ip = 0, bil = 0;
  for (Index s = 0; s < de; ++s)
    for (Index r = 0; r < de; ++r)
      ip = std::max(ip, frob(CMatrix(mapped[static_cast<std::size_t>(s)].adjoint() *
                                     mapped[static_cast<std::size_t>(r)]) -
                             CMatrix(e.module.span[static_cast<std::size_t>(s)].adjoint() *
                                     e.module.span[static_cast<std::size_t>(r)])));
  for (Index s = 0; s < de; ++s) {
    const CMatrix& x = e.module.span[static_cast<std::size_t>(s)];
    for (const auto& u : la.units()) {
      // U(a x) = a U(x)
      const CVector c = e.module.span.coefficients(e.apply_left(u) * x);
      CMatrix lhs = CMatrix::Zero(f.h(), ra.rep_dim());
      for (Index r = 0; r < de; ++r) lhs += c(r) * mapped[static_cast<std::size_t>(r)];
      bil = std::max(bil, frob(lhs - f.apply_left(u) * mapped[static_cast<std::size_t>(s)]));
    }
    for (const auto& u : ra.units()) {
      // U(x b) = U(x) b
      const CVector c = e.module.span.coefficients(x * u);
      CMatrix lhs = CMatrix::Zero(f.h(), ra.rep_dim());
      for (Index r = 0; r < de; ++r) lhs += c(r) * mapped[static_cast<std::size_t>(r)];
      bil = std::max(bil, frob(lhs - mapped[static_cast<std::size_t>(s)] * u));
    }
  }
  out.inner_product_defect = ip;
  out.bilinearity_defect = bil;
  return out;
}

FlipReport flip_check(const Correspondence& e1, const Correspondence& e2,
                      const Tolerance& tol) {
  if (!same_algebra_span(*e1.left, *e1.right, tol) ||
      !same_algebra_span(*e2.left, *e2.right, tol) ||
      !same_algebra_span(*e1.right, *e2.right, tol))
    throw std::invalid_argument("flip_check: both factors must be B-B over the same B");

  FlipReport rep;
  const TensorResult t12 = tensor(e1, e2, tol);
  const Correspondence lhs = commutant(t12.product, tol);
  const Correspondence c1 = commutant(e1, tol);
  const Correspondence c2 = commutant(e2, tol);
  const TensorResult trhs = tensor(c2, c1, tol);
  const Correspondence& rhs = trhs.product;

  rep.lhs_mult = multiplicity_matrix(lhs, tol);
  rep.rhs_mult = multiplicity_matrix_wrt(rhs, *lhs.left, *lhs.right, tol);
  rep.iso = iso_check(lhs, rhs, tol);

  // Explicit flip unitary W: H(E2' (.) E1') -> H(E1 (.) E2),
  // class(x'2 (x) h1) -> class(y1 (x) x'2 g) summed over h1 = sum y1 g.
  const Index h1 = e1.h(), h12 = t12.product.h();
  const Index s2p = c2.dim();
  const auto& y1 = e1.module.span.basis();
  const Index s1 = e1.dim();
  const Index g = e1.right->rep_dim();

  // Decompose the H1 basis through the spanning vectors y1_t g_v.
  CMatrix m1(h1, s1 * g);
  for (Index t = 0; t < s1; ++t) m1.middleCols(t * g, g) = y1[static_cast<std::size_t>(t)];
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(m1);
  const CMatrix gamma = cod.pseudoInverse();  // (s1*g) x h1

  CMatrix from(trhs.product.h(), s2p * h1), to(h12, s2p * h1);
  for (Index s = 0; s < s2p; ++s) {
    from.middleCols(s * h1, h1) = trhs.phi[static_cast<std::size_t>(s)];
    CMatrix target = CMatrix::Zero(h12, h1);
    const CMatrix& x2p = c2.module.span[static_cast<std::size_t>(s)];
    for (Index t = 0; t < s1; ++t)
      target += t12.phi[static_cast<std::size_t>(t)] * x2p * gamma.middleRows(t * g, g);
    to.middleCols(s * h1, h1) = target;
  }
  double res = 0;
  const CMatrix w = operator_from_spanning(from, to, &res);
  rep.flip_unitary_defect =
      frob(CMatrix(w.adjoint() * w) - CMatrix::Identity(w.cols(), w.cols())) +
      frob(CMatrix(w * w.adjoint()) - CMatrix::Identity(w.rows(), w.rows())) + res;

  // W intertwines the left B'-actions and maps the module into the commutant.
  double inter = 0, mod = 0;
  for (std::size_t i = 0; i < lhs.left_images.size(); ++i) {
    const CMatrix lhs_act = t12.product.apply_rho_prime(lhs.left->unit_image(static_cast<Index>(i)));
    const CMatrix rhs_act = rhs.apply_left(lhs.left->unit_image(static_cast<Index>(i)));
    inter = std::max(inter, frob(lhs_act * w - w * rhs_act));
  }
  for (const auto& z : rhs.module.span.basis())
    mod = std::max(mod, lhs.module.span.residual(w * z));
  rep.flip_intertwines_defect = inter;
  rep.flip_module_defect = mod;

  rep.verdict = rep.iso.certified(tol) &&
                rep.lhs_mult.entries == rep.rhs_mult.entries &&
                rep.flip_unitary_defect <= scaled(1.0, tol) * 10 &&
                rep.flip_intertwines_defect <= scaled(1.0, tol) * 10 &&
                rep.flip_module_defect <= scaled(1.0, tol) * 10;
  return rep;
}

Correspondence generated_subcorrespondence(const Correspondence& e,
                                           const CMatrix& element,
                                           const Tolerance& tol) {
  // Close the single element under both actions.
  std::vector<CMatrix> gens;
  for (const auto& u : e.left->units()) gens.push_back(e.apply_left(u) * element);
  const auto m = make_module(e.right, e.h(), gens, tol);
  // Left closure is already granted: a * (span) stays inside by construction
  // of the generators plus right-invariance of the closure.
  std::vector<CMatrix> left;
  for (const auto& u : e.left->units()) left.push_back(e.apply_left(u));
  return make_correspondence(e.left, m, left, tol);
}

CPMap random_cp_map(const AlgebraPtr& a, const AlgebraPtr& b,
                    std::uint64_t seed, const Tolerance& tol, Index richness) {
  // x in B(G_B, G_A (x) G_B) intertwining 1 (x) B' with B' gives the
  // completely positive map T(alpha) = x^* (alpha (x) 1) x with values in
  // B'' = B.  `richness` caps how many intertwiner directions mix into x,
  // which caps the rank of the resulting map; 0 uses all of them.
  const Index ga = a->rep_dim(), gb = b->rep_dim();
  Rng rng(seed);
  const auto bp = commutant_algebra(*b, tol);

  std::vector<CMatrix> left, right;
  for (const auto& u : bp->units()) {
    left.push_back(kron(CMatrix::Identity(ga, ga), u));
    right.push_back(u);
  }
  const OperatorSpan inter = solve_intertwiners(left, right, ga * gb, gb, tol);
  CMatrix x = CMatrix::Zero(ga * gb, gb);
  if (richness <= 0 || richness >= inter.dim()) {
    for (const auto& v : inter.basis()) x += rng.cgaussian() * v;
  } else {
    for (Index pick = 0; pick < richness; ++pick) {
      const auto idx = static_cast<std::size_t>(rng.raw() % static_cast<std::uint64_t>(inter.dim()));
      x += rng.cgaussian() * inter[idx];
    }
  }

  std::vector<CMatrix> action;
  for (const auto& u : a->units())
    action.push_back(x.adjoint() * kron(u, CMatrix::Identity(gb, gb)) * x);
  return cp_from_action(a, b, std::move(action), tol);
}

CPMap random_cp_map_unital(const AlgebraPtr& b, Index kraus_count,
                           std::uint64_t seed, const Tolerance& tol) {
  Rng rng(seed);
  const Index g = b->rep_dim();
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<CMatrix> kraus;
    CMatrix s = CMatrix::Zero(g, g);
    for (Index i = 0; i < kraus_count; ++i) {
      CMatrix v = CMatrix::Zero(g, g);
      for (const auto& u : b->units()) v += rng.cgaussian() * u;
      s += v * v.adjoint();
      kraus.push_back(std::move(v));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(s);
    if (eig.eigenvalues()(0) < 1e-6) continue;
    // s^{-1/2} stays in B (functional calculus inside a *-subalgebra).
    const CMatrix root_inv = eig.operatorInverseSqrt();
    for (auto& v : kraus) v = root_inv * v;
    return cp_from_kraus(b, b, std::move(kraus), tol);
  }
  throw std::runtime_error("random_cp_map_unital: could not normalize");
}

Correspondence random_correspondence(const AlgebraPtr& b, Index dim_cap,
                                     std::uint64_t seed, const Tolerance& tol) {
  for (int attempt = 0; attempt < 48; ++attempt) {
    // The intertwiner-based map mixes blocks, so all multiplicity patterns
    // show up in the corpus; richer intertwiners are tried first and the
    // richness decays until the dimension cap is met.
    const Index richness = (attempt % 5 == 0) ? 0 : 5 - (attempt % 5);
    const CPMap t = random_cp_map(
        b, b, seed + 1000 * static_cast<std::uint64_t>(attempt), tol, richness);
    GnsResult g = gns(t, tol);
    if (g.corr.dim() > 0 && g.corr.dim() <= dim_cap) return std::move(g.corr);
  }
  throw std::runtime_error("random_correspondence: dimension cap never met");
}

}  // namespace corrlab
