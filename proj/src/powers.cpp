#include "corrlab/powers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrlab {

namespace {

double scaled(double base, const Tolerance& tol) { return tol.cutoff(1.0 + base) * 10; }

void check_datum(const SpatialDatum& d) {
  if (d.k < 1) throw std::invalid_argument("SpatialDatum: k >= 1 required");
  if (d.omega.size() != d.k || std::abs(d.omega.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("SpatialDatum: omega must be a unit vector in C^k");
}

CVector kron_power(const CVector& v, Index n) {
  CVector out = CVector::Ones(1);
  for (Index i = 0; i < n; ++i) {
    CVector next(out.size() * v.size());
    for (Index a = 0; a < out.size(); ++a)
      for (Index b = 0; b < v.size(); ++b) next(a * v.size() + b) = out(a) * v(b);
    out = std::move(next);
  }
  return out;
}

}  // namespace

CMatrix complete_to_unitary(const CVector& first) {
  const Index k = first.size();
  CMatrix q(k, k);
  q.col(0) = first / first.norm();
  Index got = 1;
  for (Index j = 0; j < k && got < k; ++j) {
    CVector cand = CVector::Zero(k);
    cand(j) = 1.0;
    for (Index c = 0; c < got; ++c) cand -= q.col(c) * (q.col(c).adjoint() * cand);
    const double nrm = cand.norm();
    if (nrm > 0.5 / std::sqrt(static_cast<double>(k))) q.col(got++) = cand / nrm;
  }
  if (got != k) throw std::runtime_error("complete_to_unitary: completion failed");
  return q;
}

FiberSystem scalar_fiber_system(Index k, const Tolerance& tol) {
  const auto c = make_multimatrix({{1, 1}});
  std::vector<CMatrix> gens;
  for (Index i = 0; i < k; ++i) {
    CMatrix g = CMatrix::Zero(k, 1);
    g(i, 0) = 1.0;
    gens.push_back(std::move(g));
  }
  const auto e = make_module(c, k, gens, tol);
  std::vector<CMatrix> left = {CMatrix::Identity(k, k)};
  return FiberSystem(make_correspondence(c, e, left, tol), tol);
}

CentralUnit scalar_central_unit(const FiberSystem& s, const CVector& omega,
                                const Tolerance& tol) {
  CMatrix xi(omega.size(), 1);
  xi.col(0) = omega;
  return make_central_unit(s, xi, tol);
}

PowersMap build_powers_map(Index g_dim, SpatialDatum d1, SpatialDatum d2,
                           const Tolerance& tol) {
  if (g_dim < 1) throw std::invalid_argument("build_powers_map: g_dim >= 1");
  check_datum(d1);
  check_datum(d2);
  PowersMap p;
  p.g_dim = g_dim;
  p.d1 = std::move(d1);
  p.d2 = std::move(d2);
  const Index k1 = p.d1.k, k2 = p.d2.k;
  p.source = make_multimatrix({{2 * g_dim, 1}});
  p.target = make_multimatrix({{g_dim * (k1 + k2), 1}});

  const CMatrix idg = CMatrix::Identity(g_dim, g_dim);
  CMatrix iw1(p.d1.omega.size(), 1), iw2(p.d2.omega.size(), 1);
  iw1.col(0) = p.d1.omega;
  iw2.col(0) = p.d2.omega;
  const CMatrix emb1 = kron(idg, iw1);  // G -> G (x) h1
  const CMatrix emb2 = kron(idg, iw2);
  const CMatrix idk1 = CMatrix::Identity(k1, k1);
  const CMatrix idk2 = CMatrix::Identity(k2, k2);
  const Index rows1 = g_dim * k1;

  std::vector<CMatrix> action;
  for (const auto& unit : p.source->units()) {
    const CMatrix a11 = unit.topLeftCorner(g_dim, g_dim);
    const CMatrix a12 = unit.topRightCorner(g_dim, g_dim);
    const CMatrix a21 = unit.bottomLeftCorner(g_dim, g_dim);
    const CMatrix a22 = unit.bottomRightCorner(g_dim, g_dim);
    CMatrix out = CMatrix::Zero(g_dim * (k1 + k2), g_dim * (k1 + k2));
    out.topLeftCorner(rows1, rows1) = kron(a11, idk1);
    out.bottomRightCorner(g_dim * k2, g_dim * k2) = kron(a22, idk2);
    out.topRightCorner(rows1, g_dim * k2) = emb1 * a12 * emb2.adjoint();
    out.bottomLeftCorner(g_dim * k2, rows1) = emb2 * a21 * emb1.adjoint();
    action.push_back(std::move(out));
  }
  p.cp = cp_from_action(p.source, p.target, std::move(action), tol);
  if (!is_completely_positive(p.cp, tol))
    throw std::runtime_error("build_powers_map: positivity certificate failed");
  if (!is_unital(p.cp, tol))
    throw std::runtime_error("build_powers_map: map is not unital");
  return p;
}

PowersModel predicted_gns(const PowersMap& p, const Tolerance& tol) {
  PowersModel model;
  const Index k1 = p.d1.k, k2 = p.d2.k, g = p.g_dim;
  model.h_dim = k1 + k2 - 1;
  model.basis1 = complete_to_unitary(p.d1.omega);
  model.basis2 = complete_to_unitary(p.d2.omega);

  // m_i : h_i -> H_model = C omega (+) (h1 - omega1) (+) (h2 - omega2).
  model.m1 = CMatrix::Zero(model.h_dim, k1);
  model.m2 = CMatrix::Zero(model.h_dim, k2);
  model.m1.row(0) = p.d1.omega.adjoint();
  model.m2.row(0) = p.d2.omega.adjoint();
  if (k1 > 1)
    model.m1.middleRows(1, k1 - 1) = model.basis1.rightCols(k1 - 1).adjoint();
  if (k2 > 1)
    model.m2.middleRows(k1, k2 - 1) = model.basis2.rightCols(k2 - 1).adjoint();

  // xi: (G (x) h1) (+) (G (x) h2) -> (G (+) G) (x) H_model, blockwise
  // emb_i (x) m_i.
  CMatrix top = CMatrix::Zero(2 * g, g), bottom = CMatrix::Zero(2 * g, g);
  top.topRows(g) = CMatrix::Identity(g, g);
  bottom.bottomRows(g) = CMatrix::Identity(g, g);
  const CMatrix x1 = kron(top, model.m1);
  const CMatrix x2 = kron(bottom, model.m2);
  model.xi = CMatrix(2 * g * model.h_dim, g * (k1 + k2));
  model.xi.leftCols(g * k1) = x1;
  model.xi.rightCols(g * k2) = x2;

  double defect = 0;
  const CMatrix idh = CMatrix::Identity(model.h_dim, model.h_dim);
  for (Index i = 0; i < p.source->dim(); ++i) {
    const CMatrix lhs =
        model.xi.adjoint() * kron(p.source->unit_image(i), idh) * model.xi;
    defect = std::max(defect, frob(lhs - p.cp.apply_unit(i)));
  }
  model.reproduction_defect = defect;
  if (defect > scaled(1.0, tol) * 10)
    throw std::runtime_error("predicted_gns: model cyclic vector fails to reproduce the map");
  return model;
}

PowersGnsReport verify_powers_gns(const PowersMap& p, const Tolerance& tol) {
  PowersGnsReport rep;
  rep.model = predicted_gns(p, tol);
  rep.gns = gns(p.cp, tol);
  const Index k1 = p.d1.k, k2 = p.d2.k, g = p.g_dim;

  const auto mm = multiplicity_matrix(rep.gns.corr, tol);
  rep.multiplicity = mm.entries(0, 0);
  rep.multiplicity_matches = (rep.multiplicity == k1 + k2 - 1);

  // Frame relation: u . pi(a_i) xi = (a_i (x) 1) xi_model, over all units.
  const Index hg = rep.gns.corr.h();
  const Index gb = p.target->rep_dim();
  const Index da = p.source->dim();
  const Index hm = 2 * g * rep.model.h_dim;
  CMatrix from(hg, da * gb), to(hm, da * gb);
  const CMatrix idh = CMatrix::Identity(rep.model.h_dim, rep.model.h_dim);
  for (Index i = 0; i < da; ++i) {
    from.middleCols(i * gb, gb) =
        rep.gns.corr.left_images[static_cast<std::size_t>(i)] * rep.gns.cyclic;
    to.middleCols(i * gb, gb) = kron(p.source->unit_image(i), idh) * rep.model.xi;
  }
  rep.u = solve_left(from, to);
  const double res = frob(rep.u * from - to);
  rep.unitary_defect =
      frob(CMatrix(rep.u.adjoint() * rep.u) - CMatrix::Identity(hg, hg)) +
      frob(CMatrix(rep.u * rep.u.adjoint()) - CMatrix::Identity(hm, hm)) + res;

  double inter = 0;
  for (Index i = 0; i < da; ++i)
    inter = std::max(
        inter, frob(rep.u * rep.gns.corr.left_images[static_cast<std::size_t>(i)] -
                    kron(p.source->unit_image(i), idh) * rep.u));
  rep.intertwine_defect = inter;
  rep.cyclic_defect = frob(rep.u * rep.gns.cyclic - rep.model.xi);
  return rep;
}

SpatialComparisonReport compare_with_spatial_product(const PowersMap& p,
                                                     const PowersGnsReport& rep,
                                                     const Tolerance& tol) {
  SpatialComparisonReport out;
  const Index k1 = p.d1.k, k2 = p.d2.k;
  out.fiber_dim = k1 + k2 - 1;
  out.tensor_dim = k1 * k2;
  out.proper_factors = (k1 >= 2 && k2 >= 2);
  out.not_tensor_product = out.proper_factors && (out.fiber_dim < out.tensor_dim);

  FiberSystem s1 = scalar_fiber_system(k1, tol);
  FiberSystem s2 = scalar_fiber_system(k2, tol);
  const auto w1 = scalar_central_unit(s1, p.d1.omega, tol);
  const auto w2 = scalar_central_unit(s2, p.d2.omega, tol);
  const auto sp = spatial_product(s1, w1, s2, w2, tol);
  const auto& f = sp.system.generator();
  if (f.dim() != out.fiber_dim)
    throw std::runtime_error("compare_with_spatial_product: fiber dimension mismatch");

  // Class vectors of the factor symbols inside H_F.
  const Index hf = f.h();
  auto embedded = [&](const CMatrix& emb, Index i) {
    CMatrix v = CMatrix::Zero(hf, 1);
    for (Index q = 0; q < f.dim(); ++q)
      v += emb(q, i) * f.module.span[static_cast<std::size_t>(q)];
    return v;
  };

  // V: H_F -> H_model matching class(e_t in h_i) with m_i e_t.
  CMatrix from(hf, k1 + k2), to(rep.model.h_dim, k1 + k2);
  for (Index t = 0; t < k1; ++t) {
    from.col(t) = embedded(sp.embed1, t);
    to.col(t) = rep.model.m1.col(t);
  }
  for (Index t = 0; t < k2; ++t) {
    from.col(k1 + t) = embedded(sp.embed2, t);
    to.col(k1 + t) = rep.model.m2.col(t);
  }
  const CMatrix v = solve_left(from, to);
  out.fiber_unitary_defect =
      frob(CMatrix(v.adjoint() * v) - CMatrix::Identity(hf, hf)) +
      frob(CMatrix(v * v.adjoint()) -
           CMatrix::Identity(rep.model.h_dim, rep.model.h_dim)) +
      frob(v * from - to);

  // omega class lands on the omega coordinate.
  CVector e0 = CVector::Zero(rep.model.h_dim);
  e0(0) = 1.0;
  out.omega_defect = (v * sp.omega.xi1.col(0) - e0).norm();

  // Complements of the factors land inside the respective model complements.
  double comp = 0;
  for (Index t = 0; t < k1; ++t) {
    CVector x = CVector::Zero(k1);
    x(t) = 1.0;
    x -= p.d1.omega * (p.d1.omega.adjoint() * x);
    // class of the complement part
    CMatrix cls = CMatrix::Zero(hf, 1);
    for (Index q = 0; q < k1; ++q) cls += x(q) * embedded(sp.embed1, q);
    const CVector img = v * cls.col(0);
    comp = std::max(comp, std::abs(img(0)));  // no omega coordinate
    if (k2 > 1)
      comp = std::max(comp, img.tail(k2 - 1).norm());  // no h2 block
  }
  for (Index t = 0; t < k2; ++t) {
    CVector x = CVector::Zero(k2);
    x(t) = 1.0;
    x -= p.d2.omega * (p.d2.omega.adjoint() * x);
    CMatrix cls = CMatrix::Zero(hf, 1);
    for (Index q = 0; q < k2; ++q) cls += x(q) * embedded(sp.embed2, q);
    const CVector img = v * cls.col(0);
    comp = std::max(comp, std::abs(img(0)));
    if (k1 > 1) comp = std::max(comp, img.segment(1, k1 - 1).norm());
  }
  out.complement_defect = comp;

  // Full tipdef table, transported into the GNS by u^*(e_0 (x) .).
  const Index g = p.g_dim;
  CMatrix e0ga = CMatrix::Zero(2 * g, 1);
  e0ga(0, 0) = 1.0;
  auto to_gns = [&](const CVector& model_vec) {
    return CMatrix(rep.u.adjoint() * kron(e0ga, CMatrix(model_vec)).eval());
  };
  double table = 0, transported = 0;
  for (Index i = 0; i < k1 + k2; ++i)
    for (Index j = 0; j < k1 + k2; ++j) {
      Complex expect;
      const bool i1 = i < k1, j1 = j < k1;
      if (i1 == j1) {
        expect = (i == j) ? Complex(1.0) : Complex(0.0);
      } else if (i1) {
        // <e_i, omega1><omega2, e_j> = omega1(i) conj(omega2(j)).
        expect = p.d1.omega(i) * std::conj(p.d2.omega(j - k1));
      } else {
        expect = p.d2.omega(i - k1) * std::conj(p.d1.omega(j));
      }
      const CVector vi = v * (i1 ? embedded(sp.embed1, i) : embedded(sp.embed2, i - k1)).col(0);
      const CVector vj = v * (j1 ? embedded(sp.embed1, j) : embedded(sp.embed2, j - k1)).col(0);
      table = std::max(table, std::abs((vi.adjoint() * vj)(0) - expect));
      const CMatrix gi = to_gns(vi), gj = to_gns(vj);
      transported = std::max(transported, std::abs(hs_inner(gi, gj) - expect));
    }
  out.tipdef_defect = table;
  out.gns_transport_defect = transported;
  return out;
}

NStepReport powers_nstep_check(Index g_dim, const SpatialDatum& d1,
                               const SpatialDatum& d2, Index n,
                               const Tolerance& tol) {
  NStepReport rep;
  rep.n = n;
  const Index k1 = d1.k, k2 = d2.k;
  Index k1n = 1, k2n = 1, fn = 1;
  for (Index i = 0; i < n; ++i) {
    k1n *= k1;
    k2n *= k2;
    fn *= (k1 + k2 - 1);
  }

  SpatialDatum dn1{k1n, kron_power(d1.omega, n)};
  SpatialDatum dn2{k2n, kron_power(d2.omega, n)};
  const auto pn = build_powers_map(g_dim, dn1, dn2, tol);
  const auto gn = verify_powers_gns(pn, tol);
  rep.gns_multiplicity = gn.multiplicity;
  rep.multiplicity_matches = (rep.gns_multiplicity == k1n + k2n - 1);

  // n-th fiber of the spatial product.
  FiberSystem s1 = scalar_fiber_system(k1, tol);
  FiberSystem s2 = scalar_fiber_system(k2, tol);
  const auto w1 = scalar_central_unit(s1, d1.omega, tol);
  const auto w2 = scalar_central_unit(s2, d2.omega, tol);
  const auto sp = spatial_product(s1, w1, s2, w2, tol);
  rep.product_fiber_dim = sp.system.power(n).dim();
  rep.fiber_dim_matches = (rep.product_fiber_dim == fn);

  const auto& f = sp.system.generator();
  const Index hf = f.h();
  auto embedded = [&](bool first, Index i) {
    const CMatrix& emb = first ? sp.embed1 : sp.embed2;
    CMatrix v = CMatrix::Zero(hf, 1);
    for (Index q = 0; q < f.dim(); ++q)
      v += emb(q, i) * f.module.span[static_cast<std::size_t>(q)];
    return v;
  };

  // Word embeddings of the n-fold factor spaces.
  auto factor_word = [&](bool first, const std::vector<Index>& digits) {
    std::vector<CMatrix> letters;
    for (Index d : digits) letters.push_back(embedded(first, d));
    return sp.system.word(letters);
  };
  const Index hn = sp.system.power(n).h();
  auto all_words = [&](bool first, Index k) {
    std::vector<CMatrix> words;
    std::vector<Index> digits(static_cast<std::size_t>(n), 0);
    while (true) {
      words.push_back(factor_word(first, digits));
      Index pos = n - 1;
      while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == k) {
        digits[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
    return words;  // lexicographic, most-significant digit first
  };
  const auto words1 = all_words(true, k1);
  const auto words2 = all_words(false, k2);

  // The unit class: omega-words from both factors agree with the product
  // unit.
  const CMatrix omega_n = unit_power(sp.system, sp.omega, n);
  const CVector o1n = kron_power(d1.omega, n);
  const CVector o2n = kron_power(d2.omega, n);
  CMatrix w1n = CMatrix::Zero(hn, 1), w2n = CMatrix::Zero(hn, 1);
  for (Index t = 0; t < k1n; ++t) w1n += o1n(t) * words1[static_cast<std::size_t>(t)];
  for (Index t = 0; t < k2n; ++t) w2n += o2n(t) * words2[static_cast<std::size_t>(t)];
  rep.unit_class_defect = std::max(frob(w1n - omega_n), frob(w2n - omega_n));

  // The embedding Phi of H_model(P_n) = C (+) (h1n - o1n) (+) (h2n - o2n)
  // spans unit class plus the two complements; it must be an isometry.
  const CMatrix q1 = complete_to_unitary(o1n);
  const CMatrix q2 = complete_to_unitary(o2n);
  CMatrix phi(hn, 1 + (k1n - 1) + (k2n - 1));
  phi.col(0) = omega_n.col(0);
  for (Index c = 1; c < k1n; ++c) {
    CMatrix acc = CMatrix::Zero(hn, 1);
    for (Index t = 0; t < k1n; ++t) acc += q1(t, c) * words1[static_cast<std::size_t>(t)];
    phi.col(c) = acc.col(0);
  }
  for (Index c = 1; c < k2n; ++c) {
    CMatrix acc = CMatrix::Zero(hn, 1);
    for (Index t = 0; t < k2n; ++t) acc += q2(t, c) * words2[static_cast<std::size_t>(t)];
    phi.col(k1n - 1 + c) = acc.col(0);
  }
  rep.embedding_defect = frob(CMatrix(phi.adjoint() * phi) -
                              CMatrix::Identity(phi.cols(), phi.cols()));
  return rep;
}

}  // namespace corrlab
