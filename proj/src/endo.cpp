#include "corrlab/endo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrlab {

namespace {

double scaled(double base, const Tolerance& tol) { return tol.cutoff(1.0 + base) * 10; }

CVector ba_coefficients(const Algebra& ba, const CMatrix& x) {
  return ba.coefficients(x);
}

}  // namespace

CMatrix Endomorphism::apply(const CMatrix& a_on_h) const {
  const CVector c = ba_coefficients(*rep.ba, a_on_h);
  CMatrix out = CMatrix::Zero(rep.h, rep.h);
  for (Index i = 0; i < c.size(); ++i) out += c(i) * images[static_cast<std::size_t>(i)];
  return out;
}

Endomorphism make_endomorphism(const ConcreteModule& e,
                               const std::vector<CMatrix>& images,
                               const Tolerance& tol) {
  Endomorphism theta;
  theta.base = e;
  theta.rep = induced_rep(e, tol);
  if (static_cast<Index>(images.size()) != theta.rep.ba->dim())
    throw std::invalid_argument("make_endomorphism: one image per matrix unit of B^a(E)");
  for (const auto& img : images)
    if (!theta.rep.ba->contains(img, tol))
      throw std::invalid_argument("make_endomorphism: image escapes pi(B^a(E))");
  Representation check;
  check.algebra = theta.rep.ba;
  check.space_dim = theta.rep.h;
  check.images = images;
  if (check.hom_defect() > scaled(1.0, tol) * 10)
    throw std::invalid_argument("make_endomorphism: images fail the unital *-endomorphism audit");
  theta.images = images;
  return theta;
}

Endomorphism identity_endomorphism(const ConcreteModule& e, const Tolerance& tol) {
  Endomorphism theta;
  theta.base = e;
  theta.rep = induced_rep(e, tol);
  theta.images = theta.rep.ba->units();
  return theta;
}

Endomorphism inner_endomorphism(const ConcreteModule& e, const CMatrix& u,
                                const Tolerance& tol) {
  Endomorphism base = identity_endomorphism(e, tol);
  if (!base.rep.ba->contains(u, tol))
    throw std::invalid_argument("inner_endomorphism: conjugator is not in pi(B^a(E))");
  if (frob(CMatrix(u.adjoint() * u) - CMatrix::Identity(u.rows(), u.cols())) > scaled(1.0, tol))
    throw std::invalid_argument("inner_endomorphism: conjugator is not unitary");
  std::vector<CMatrix> images;
  for (const auto& unit : base.rep.ba->units()) images.push_back(u * unit * u.adjoint());
  return make_endomorphism(e, images, tol);
}

Endomorphism block_swap_endomorphism(const ConcreteModule& e, Index block_a,
                                     Index block_b, const Tolerance& tol) {
  Endomorphism base = identity_endomorphism(e, tol);
  const auto& ba = *base.rep.ba;
  const auto& blocks = ba.blocks();
  if (block_a >= ba.block_count() || block_b >= ba.block_count())
    throw std::invalid_argument("block_swap_endomorphism: block index out of range");
  if (blocks[static_cast<std::size_t>(block_a)].size != blocks[static_cast<std::size_t>(block_b)].size ||
      blocks[static_cast<std::size_t>(block_a)].multiplicity !=
          blocks[static_cast<std::size_t>(block_b)].multiplicity)
    throw std::invalid_argument("block_swap_endomorphism: blocks are not interchangeable");
  std::vector<CMatrix> images = ba.units();
  const Index n = blocks[static_cast<std::size_t>(block_a)].size;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      std::swap(images[static_cast<std::size_t>(ba.unit_index(block_a, i, j))],
                images[static_cast<std::size_t>(ba.unit_index(block_b, i, j))]);
  return make_endomorphism(e, images, tol);
}

Endomorphism iterate(const Endomorphism& theta, const Tolerance& tol) {
  std::vector<CMatrix> images;
  for (const auto& img : theta.images) images.push_back(theta.apply(img));
  return make_endomorphism(theta.base, images, tol);
}

UnitFiberResult construct_via_unit(const Endomorphism& theta, const CMatrix& xi_ambient,
                                   const Tolerance& tol) {
  UnitFiberResult out;
  const auto& b = theta.base.algebra;
  const Index g = b->rep_dim();
  // Reduce the unit vector to H.
  if (theta.base.span.residual(xi_ambient) > scaled(frob(xi_ambient), tol))
    throw std::invalid_argument("construct_via_unit: xi is not in the module");
  out.xi = theta.rep.isometry.adjoint() * xi_ambient;
  if (frob(CMatrix(out.xi.adjoint() * out.xi) - CMatrix::Identity(g, g)) > scaled(1.0, tol))
    throw std::invalid_argument("construct_via_unit: xi is not a unit vector");

  const Index h = theta.h();
  out.p1 = theta.apply(out.xi * out.xi.adjoint());

  // Fiber module p_1 E with left action b . x = theta(xi b xi^*) x.
  std::vector<CMatrix> fiber_elems;
  for (const auto& x : theta.rep.reduced.span.basis()) fiber_elems.push_back(out.p1 * x);
  ConcreteModule m;
  m.algebra = b;
  m.target_dim = h;
  m.span = hs_orthonormalize(fiber_elems, tol);
  std::vector<CMatrix> left;
  for (const auto& unit : b->units())
    left.push_back(theta.apply(out.xi * unit * out.xi.adjoint()));
  out.fiber = make_correspondence(b, m, left, tol);

  // u: x (.) y -> theta(x xi^*) y, built on H(E (.) fiber).
  const ModuleTensor mt = module_tensor(theta.rep.reduced, out.fiber, tol);
  const Index s = theta.rep.reduced.dim();
  const Index hf = out.fiber.h();
  CMatrix from(mt.h, s * hf), to(h, s * hf);
  for (Index r = 0; r < s; ++r) {
    from.middleCols(r * hf, hf) = mt.phi[static_cast<std::size_t>(r)];
    to.middleCols(r * hf, hf) =
        theta.apply(theta.rep.reduced.span[static_cast<std::size_t>(r)] * out.xi.adjoint()) *
        out.fiber.embedding;
  }
  out.u_map = solve_left(from, to);
  const double res = frob(out.u_map * from - to);
  out.unitary_defect =
      frob(CMatrix(out.u_map.adjoint() * out.u_map) - CMatrix::Identity(mt.h, mt.h)) +
      frob(CMatrix(out.u_map * out.u_map.adjoint()) - CMatrix::Identity(h, h)) + res;

  // Recovery: theta(a) = u (a (.) id) u^*.
  double recover = 0;
  CMatrix frame(mt.h, s * hf);
  for (Index r = 0; r < s; ++r) frame.middleCols(r * hf, hf) = mt.phi[static_cast<std::size_t>(r)];
  for (const auto& a : theta.rep.ba->units()) {
    CMatrix target(mt.h, s * hf);
    for (Index r = 0; r < s; ++r) {
      const CVector c = theta.rep.reduced.span.coefficients(
          a * theta.rep.reduced.span[static_cast<std::size_t>(r)]);
      CMatrix col = CMatrix::Zero(mt.h, hf);
      for (Index q = 0; q < s; ++q) col += c(q) * mt.phi[static_cast<std::size_t>(q)];
      target.middleCols(r * hf, hf) = col;
    }
    const CMatrix a_tensor_id = solve_left(frame, target);
    recover = std::max(recover, frob(theta.apply(a) -
                                     out.u_map * a_tensor_id * out.u_map.adjoint()));
  }
  out.recover_defect = recover;
  return out;
}

CommutantFiberResult construct_via_commutant(const Endomorphism& theta,
                                             const Tolerance& tol) {
  CommutantFiberResult out;
  const auto& b = theta.base.algebra;
  if (!is_full(theta.base, tol))
    throw std::invalid_argument(
        "construct_via_commutant: module is not strongly full (rho' not faithful); "
        "restrict to the range algebra first");
  const Index h = theta.h();
  const Index g = b->rep_dim();

  // E'_t = {x' in B(H) : theta(a) x' = x' a}.
  std::vector<CMatrix> gen_imgs, gen_units;
  for (Index i : theta.rep.ba->generator_indices()) {
    gen_imgs.push_back(theta.images[static_cast<std::size_t>(i)]);
    gen_units.push_back(theta.rep.ba->unit_image(i));
  }
  const OperatorSpan inter = solve_intertwiners(gen_imgs, gen_units, h, h, tol);
  out.intertwiners = inter.basis();
  const Index sp = inter.dim();
  if (sp == 0) throw std::runtime_error("construct_via_commutant: empty intertwiner space");

  // Re-realize as a B'-B' correspondence: H_t = E'_t (.) G with
  // <x' (x) g, y' (x) g'> = <g, rho'^{-1}(x'^* y') g'>.
  const auto bp = theta.rep.commutant;
  const auto& rho_im = theta.rep.rho_prime.images;
  // Decompose rho'(B') elements: stack images once.
  CMatrix stack(h * h, bp->dim());
  for (Index i = 0; i < bp->dim(); ++i) stack.col(i) = vec(rho_im[static_cast<std::size_t>(i)]);
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(stack);
  const auto rho_inverse = [&](const CMatrix& y) -> CMatrix {
    const CVector c = cod.solve(vec(y));
    if ((stack * c - vec(y)).norm() > scaled(frob(y), tol))
      throw std::runtime_error("construct_via_commutant: inner product escapes rho'(B')");
    CMatrix bprime = CMatrix::Zero(g, g);
    for (Index i = 0; i < bp->dim(); ++i) bprime += c(i) * bp->unit_image(i);
    return bprime;
  };

  CMatrix gram(sp * g, sp * g);
  for (Index s = 0; s < sp; ++s)
    for (Index r = 0; r < sp; ++r)
      gram.block(s * g, r * g, g, g) = rho_inverse(
          inter[static_cast<std::size_t>(s)].adjoint() * inter[static_cast<std::size_t>(r)]);
  const GramQuotient q = gram_quotient(gram, tol);
  const Index ht = q.dimension;
  std::vector<CMatrix> phi;
  for (Index s = 0; s < sp; ++s) phi.push_back(q.factor.middleCols(s * g, g));

  ConcreteModule mprime;
  mprime.algebra = bp;
  mprime.target_dim = ht;
  mprime.span = hs_orthonormalize(phi, tol);

  // Left action of B': class(x' (x) g) -> class((rho'(b') x') (x) g).
  CMatrix frame(ht, sp * g);
  for (Index s = 0; s < sp; ++s) frame.middleCols(s * g, g) = phi[static_cast<std::size_t>(s)];
  std::vector<CMatrix> left;
  for (Index i = 0; i < bp->dim(); ++i) {
    CMatrix target(ht, sp * g);
    for (Index s = 0; s < sp; ++s) {
      const CVector c = inter.coefficients(rho_im[static_cast<std::size_t>(i)] *
                                           inter[static_cast<std::size_t>(s)]);
      CMatrix col = CMatrix::Zero(ht, g);
      for (Index r = 0; r < sp; ++r) col += c(r) * phi[static_cast<std::size_t>(r)];
      target.middleCols(s * g, g) = col;
    }
    double res = 0;
    CMatrix img = solve_left(frame, target);
    res = frob(img * frame - target);
    if (res > scaled(1.0, tol) * 10)
      throw std::runtime_error("construct_via_commutant: left action ill-defined");
    left.push_back(std::move(img));
  }
  out.fiber_prime = make_correspondence(bp, mprime, left, tol);
  out.fiber = reexpress(commutant(out.fiber_prime, tol), b, b, tol);

  // Identification w: E (.) fiber (.) G -> H by x (.) y' (.) g -> y'(x g).
  // The fiber element aligned with intertwiner y'_s is the class map phi_s.
  const ModuleTensor mt = module_tensor(theta.rep.reduced, out.fiber, tol);
  const Index se = theta.rep.reduced.dim();
  const Index hf = out.fiber.h();

  // Decompose the standard basis of H(fiber) through the module elements of
  // fiber (z_s = embedding^* phi_s), to re-expand classes through
  // intertwiners.
  CMatrix mz(hf, sp * g);
  for (Index s = 0; s < sp; ++s)
    mz.middleCols(s * g, g) = out.fiber.embedding.adjoint() * phi[static_cast<std::size_t>(s)];
  Eigen::CompleteOrthogonalDecomposition<CMatrix> codz(mz);
  const CMatrix gamma = codz.pseudoInverse();  // (sp*g) x hf

  CMatrix from(mt.h, se * hf), to(h, se * hf);
  for (Index r = 0; r < se; ++r) {
    from.middleCols(r * hf, hf) = mt.phi[static_cast<std::size_t>(r)];
    CMatrix target = CMatrix::Zero(h, hf);
    for (Index s = 0; s < sp; ++s)
      target += inter[static_cast<std::size_t>(s)] *
                theta.rep.reduced.span[static_cast<std::size_t>(r)] * gamma.middleRows(s * g, g);
    to.middleCols(r * hf, hf) = target;
  }
  out.w_map = solve_left(from, to);
  const double res = frob(out.w_map * from - to);
  out.unitary_defect =
      frob(CMatrix(out.w_map.adjoint() * out.w_map) - CMatrix::Identity(mt.h, mt.h)) +
      frob(CMatrix(out.w_map * out.w_map.adjoint()) - CMatrix::Identity(h, h)) + res;

  // w conjugates the rho' actions.
  const InducedRep tensored = [&] {
    ConcreteModule tm;
    tm.algebra = b;
    tm.target_dim = mt.h;
    std::vector<CMatrix> elems;
    for (Index r = 0; r < se; ++r)
      for (const auto& z : out.fiber.module.span.basis())
        elems.push_back(mt.phi[static_cast<std::size_t>(r)] * z);
    tm.span = hs_orthonormalize(elems, tol);
    return induced_rep(tm, tol, theta.rep.commutant, /*with_ba=*/false);
  }();
  double inter_defect = 0;
  for (Index i = 0; i < bp->dim(); ++i)
    inter_defect = std::max(
        inter_defect, frob(theta.rep.rho_prime.images[static_cast<std::size_t>(i)] * out.w_map -
                           out.w_map * tensored.rho_prime.images[static_cast<std::size_t>(i)]));
  out.intertwine_defect = inter_defect;

  // w carries the module E (.) fiber onto E.
  std::vector<CMatrix> moved;
  for (const auto& z : tensored.reduced.span.basis()) moved.push_back(out.w_map * z);
  out.module_match_defect =
      span_distance(hs_orthonormalize(moved, tol), theta.rep.reduced.span);

  // Recovery theta(a) = a (.) id under w.
  double recover = 0;
  CMatrix frame2(mt.h, se * hf);
  for (Index r = 0; r < se; ++r) frame2.middleCols(r * hf, hf) = mt.phi[static_cast<std::size_t>(r)];
  for (const auto& a : theta.rep.ba->units()) {
    CMatrix target(mt.h, se * hf);
    for (Index r = 0; r < se; ++r) {
      const CVector c = theta.rep.reduced.span.coefficients(
          a * theta.rep.reduced.span[static_cast<std::size_t>(r)]);
      CMatrix col = CMatrix::Zero(mt.h, hf);
      for (Index p = 0; p < se; ++p) col += c(p) * mt.phi[static_cast<std::size_t>(p)];
      target.middleCols(r * hf, hf) = col;
    }
    const CMatrix a_tensor_id = solve_left(frame2, target);
    recover = std::max(recover,
                       frob(theta.apply(a) - out.w_map * a_tensor_id * out.w_map.adjoint()));
  }
  out.recover_defect = recover;
  return out;
}

DualityReport duality_check(const Endomorphism& theta, const CMatrix& xi_ambient,
                            const Tolerance& tol) {
  DualityReport rep;
  const auto unit_route = construct_via_unit(theta, xi_ambient, tol);
  const auto comm_route = construct_via_commutant(theta, tol);
  rep.commutant_match =
      iso_check(commutant(unit_route.fiber, tol), comm_route.fiber_prime, tol);

  const auto theta2 = iterate(theta, tol);
  const auto unit2 = construct_via_unit(theta2, xi_ambient, tol);
  const auto comm2 = construct_via_commutant(theta2, tol);
  rep.square_unit = iso_check(
      unit2.fiber, tensor(unit_route.fiber, unit_route.fiber, tol).product, tol);
  rep.square_commutant = iso_check(
      comm2.fiber_prime,
      tensor(comm_route.fiber_prime, comm_route.fiber_prime, tol).product, tol);
  rep.ok = rep.commutant_match.certified(tol) && rep.square_unit.certified(tol) &&
           rep.square_commutant.certified(tol);
  return rep;
}

DilationReport dilation_check(const Endomorphism& theta, const CMatrix& xi_ambient,
                              const Tolerance& tol) {
  DilationReport rep;
  const auto& b = theta.base.algebra;
  const Index g = b->rep_dim();
  const CMatrix xi = theta.rep.isometry.adjoint() * xi_ambient;
  if (frob(CMatrix(xi.adjoint() * xi) - CMatrix::Identity(g, g)) > scaled(1.0, tol))
    throw std::invalid_argument("dilation_check: xi is not a unit vector");
  rep.p0 = xi * xi.adjoint();
  rep.p1 = theta.apply(rep.p0);
  rep.order_residual = frob(rep.p1 * xi - xi);
  rep.order_holds = rep.order_residual <= scaled(1.0, tol);

  std::vector<CMatrix> action;
  for (const auto& unit : b->units())
    action.push_back(xi.adjoint() * theta.apply(xi * unit * xi.adjoint()) * xi);
  rep.extracted = cp_from_action(b, b, std::move(action), tol);
  rep.cp_valid = is_completely_positive(rep.extracted, tol);
  rep.cp_unital = is_unital(rep.extracted, tol);

  if (rep.order_holds) {
    // xi is a unit of the fiber system; <xi_n, b xi_n> = T^n(b) for n <= 3.
    const auto unit_route = construct_via_unit(theta, xi_ambient, tol);
    FiberSystem s(unit_route.fiber, tol);
    const CMatrix xi_fiber = unit_route.fiber.embedding.adjoint() * xi;
    const Unit u = make_unit(s, xi_fiber, tol);
    double defect = 0;
    CPMap power = rep.extracted;
    for (Index n = 1; n <= 3; ++n) {
      const CPMap tn = cp_from_unit(s, u, n, tol);
      for (Index i = 0; i < b->dim(); ++i)
        defect = std::max(defect, frob(tn.apply_unit(i) - power.apply_unit(i)));
      if (n < 3) power = compose(rep.extracted, power, tol);
    }
    rep.unit_power_defect = defect;
  }
  return rep;
}

}  // namespace corrlab
