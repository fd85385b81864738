// Acceptance suite: one criterion per section, one pass/fail line each.
// Thresholds are pinned here and are not configurable.

#include "corrlab/endo.hpp"
#include "corrlab/powers.hpp"
#include "corrlab/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace corrlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string note;
};

int failures = 0;

void run(int id, const std::string& label, double time_budget_s,
         const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.note = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_budget_s > 0 && secs > time_budget_s) {
    out.pass = false;
    out.note += (out.note.empty() ? "" : "; ") + std::string("time budget exceeded");
  }
  std::printf("%s criterion %2d: %s (%s) [%.2fs]\n", out.pass ? "PASS" : "FAIL", id,
              label.c_str(), out.note.c_str(), secs);
  std::fflush(stdout);
  if (!out.pass) ++failures;
}

// Deterministic small multimatrix algebra: <= 3 blocks of size <= 3.
AlgebraPtr random_small_algebra(Rng& rng, Index max_blocks = 3, Index max_size = 3) {
  const Index blocks = 1 + static_cast<Index>(rng.raw() % static_cast<std::uint64_t>(max_blocks));
  std::vector<BlockSpec> specs;
  for (Index i = 0; i < blocks; ++i)
    specs.push_back({1 + static_cast<Index>(rng.raw() % static_cast<std::uint64_t>(max_size)),
                     1 + static_cast<Index>(rng.raw() % 2)});
  return make_multimatrix(specs);
}

std::vector<Index> random_multiplicities(Rng& rng, Index count, Index cap) {
  std::vector<Index> out;
  Index total = 0;
  for (Index i = 0; i < count; ++i) {
    const Index r = static_cast<Index>(rng.raw() % static_cast<std::uint64_t>(cap + 1));
    total += r;
    out.push_back(r);
  }
  if (total == 0) out[static_cast<std::size_t>(rng.raw() % static_cast<std::uint64_t>(count))] = 1;
  return out;
}

Outcome criterion_lemma() {
  Tolerance tol;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed * 7919);
    const auto b = random_small_algebra(rng);
    const auto bp = commutant_algebra(*b, tol);
    const auto mults = random_multiplicities(rng, bp->block_count(), 3);
    const auto rho = random_representation(bp, mults, seed * 13 + 5, tol);
    const auto e = intertwiner_module(b, rho, tol);
    if (!check_totality(e, tol))
      return {false, "totality failed at seed " + std::to_string(seed)};
    for (const auto& x : e.span.basis())
      for (Index i = 0; i < bp->dim(); ++i)
        worst = std::max(worst, frob(rho.images[static_cast<std::size_t>(i)] * x -
                                     x * bp->unit_image(i)));
  }
  if (worst > 1e-8) return {false, "residual " + std::to_string(worst)};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "100 instances, max residual %.2e", worst);
  return {true, buf};
}

Outcome criterion_bijection() {
  Tolerance tol;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed * 104729);
    const auto b = random_small_algebra(rng, 2, 3);
    const auto bp = commutant_algebra(*b, tol);
    const auto mults = random_multiplicities(rng, bp->block_count(), 2);
    const auto rho = random_representation(bp, mults, seed * 31 + 1, tol);

    // Representation -> module -> representation.
    const auto e = intertwiner_module(b, rho, tol);
    const auto ir = induced_rep(e, tol, bp, /*with_ba=*/false);
    if (ir.h != rho.space_dim) return {false, "reach mismatch at seed " + std::to_string(seed)};
    for (std::size_t i = 0; i < rho.images.size(); ++i)
      worst = std::max(worst, frob(ir.rho_prime.images[i] - rho.images[i]));

    // Module -> representation -> module, on a random right-closed submodule.
    CMatrix combo = CMatrix::Zero(e.target_dim, b->rep_dim());
    for (const auto& x : e.span.basis()) combo += rng.cgaussian() * x;
    const auto sub = make_module(b, e.target_dim, {combo}, tol);
    const auto ir2 = induced_rep(sub, tol, bp, /*with_ba=*/false);
    const auto back = intertwiner_module(b, ir2.rho_prime, tol);
    worst = std::max(worst, span_distance(back.span, ir2.reduced.span));
  }
  if (worst > 1e-8) return {false, "distance " + std::to_string(worst)};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "50 instances, max defect %.2e", worst);
  return {true, buf};
}

struct FlipCorpus {
  std::vector<Correspondence> e1, e2;
};

FlipCorpus flip_corpus() {
  Tolerance tol;
  FlipCorpus out;
  const auto b1 = make_multimatrix({{1, 1}, {1, 1}});
  const auto b2 = make_multimatrix({{1, 1}, {2, 1}});
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    out.e1.push_back(random_correspondence(b1, 12, seed * 3 + 1, tol));
    out.e2.push_back(random_correspondence(b1, 12, seed * 3 + 2, tol));
  }
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    out.e1.push_back(random_correspondence(b2, 12, seed * 5 + 1, tol));
    out.e2.push_back(random_correspondence(b2, 12, seed * 5 + 2, tol));
  }
  return out;
}

Outcome criterion_flip(const FlipCorpus& corpus) {
  Tolerance tol;
  double worst = 0;
  for (std::size_t i = 0; i < corpus.e1.size(); ++i) {
    const auto& e1 = corpus.e1[i];
    const auto& e2 = corpus.e2[i];
    const auto rep = flip_check(e1, reexpress(e2, e1.left, e1.right, tol), tol);
    const auto c1 = multiplicity_matrix(e1, tol);
    const auto c2 = multiplicity_matrix_wrt(e2, *e1.left, *e1.right, tol);
    if (rep.lhs_mult.entries != (c1.entries * c2.entries).transpose().eval() ||
        rep.rhs_mult.entries != (c2.entries.transpose() * c1.entries.transpose()).eval())
      return {false, "multiplicity law failed at pair " + std::to_string(i)};
    const double defect = std::max(
        {rep.iso.unitary_defect, rep.iso.inner_product_defect, rep.iso.bilinearity_defect,
         rep.flip_unitary_defect, rep.flip_intertwines_defect, rep.flip_module_defect});
    worst = std::max(worst, defect);
    if (!rep.verdict || defect > 1e-8)
      return {false, "certificate failed at pair " + std::to_string(i)};
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "50 pairs, max residual %.2e", worst);
  return {true, buf};
}

Outcome criterion_double_commutant(const FlipCorpus& corpus) {
  Tolerance tol;
  double worst = 0;
  for (std::size_t i = 0; i < corpus.e1.size(); ++i) {
    const auto& e = corpus.e1[i];
    const auto cc = commutant(commutant(e, tol), tol);
    const auto back = reexpress(cc, e.left, e.right, tol);
    const auto check = iso_check(back, e, tol);
    if (!check.isomorphic ||
        check.left_mult.entries != multiplicity_matrix(e, tol).entries)
      return {false, "multiplicity mismatch at " + std::to_string(i)};
    worst = std::max({worst, check.unitary_defect, check.inner_product_defect,
                      check.bilinearity_defect});
  }
  if (worst > 1e-8) return {false, "certificate residual " + std::to_string(worst)};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "50 instances, max residual %.2e", worst);
  return {true, buf};
}

// Independent oracle for the GNS multiplicity: blockwise Choi ranks.
Eigen::MatrixXi choi_ranks(const CPMap& t, double threshold) {
  const auto& a = *t.source;
  const auto& b = *t.target;
  Eigen::MatrixXi out(a.block_count(), b.block_count());
  for (Index k = 0; k < a.block_count(); ++k) {
    const Index nk = a.blocks()[static_cast<std::size_t>(k)].size;
    for (Index l = 0; l < b.block_count(); ++l) {
      const auto& blk = b.blocks()[static_cast<std::size_t>(l)];
      const Index nl = blk.size;
      CMatrix choi = CMatrix::Zero(nk * nl, nk * nl);
      for (Index i = 0; i < nk; ++i)
        for (Index j = 0; j < nk; ++j) {
          const CMatrix img = t.apply_unit(a.unit_index(k, i, j));
          // Compress to the l-block, averaging out the multiplicity.
          const CMatrix corner = blk.frame.adjoint() * img * blk.frame;
          CMatrix c = CMatrix::Zero(nl, nl);
          for (Index p = 0; p < nl; ++p)
            for (Index q = 0; q < nl; ++q) {
              Complex acc = 0;
              for (Index m = 0; m < blk.multiplicity; ++m)
                acc += corner(p * blk.multiplicity + m, q * blk.multiplicity + m);
              c(p, q) = acc / static_cast<double>(blk.multiplicity);
            }
          CMatrix unit = CMatrix::Zero(nk, nk);
          unit(i, j) = 1.0;
          choi += kron(unit, c);
        }
      Eigen::SelfAdjointEigenSolver<CMatrix> eig((choi + choi.adjoint()) * 0.5);
      Index rank = 0;
      const double top = std::max(1.0, std::abs(eig.eigenvalues()(nk * nl - 1)));
      for (Index r = 0; r < nk * nl; ++r)
        if (eig.eigenvalues()(r) > threshold * top) ++rank;
      out(k, l) = static_cast<int>(rank);
    }
  }
  return out;
}

Outcome criterion_gns() {
  Tolerance tol;
  double worst = 0;
  const std::vector<AlgebraPtr> algebras = {make_multimatrix({{2, 1}}),
                                            make_multimatrix({{3, 1}}),
                                            make_multimatrix({{1, 1}, {2, 1}})};
  int count = 0;
  for (std::size_t ai = 0; ai < algebras.size(); ++ai) {
    const auto& b = algebras[ai];
    for (std::uint64_t seed = 1; count < 20 && seed <= 7; ++seed, ++count) {
      const Index kraus = 1 + static_cast<Index>(seed % 4);  // rank cap 4
      const auto t = random_cp_map_unital(b, kraus, seed * 37 + ai, tol);
      const auto g = gns(t, tol);
      worst = std::max(worst, g.reproduction_defect);
      const auto mm = multiplicity_matrix(g.corr, tol);
      if (mm.entries != choi_ranks(t, 1e-10))
        return {false, "multiplicity differs from the Choi rank"};
    }
  }
  if (worst > 1e-9) return {false, "reproduction residual " + std::to_string(worst)};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "20 maps, max reproduction %.2e", worst);
  return {true, buf};
}

struct EndoCase {
  std::string name;
  ConcreteModule module;
  Endomorphism theta;
  CMatrix xi;
};

std::vector<EndoCase> endo_corpus() {
  Tolerance tol;
  std::vector<EndoCase> cases;
  // Identity endomorphisms on B over itself.
  for (const auto& specs : {std::vector<BlockSpec>{{1, 1}, {1, 1}},
                            std::vector<BlockSpec>{{1, 1}, {2, 1}}}) {
    const auto b = make_multimatrix(specs);
    const Index g = b->rep_dim();
    EndoCase c;
    c.name = "identity/" + std::to_string(g);
    c.module = make_module(b, g, {CMatrix::Identity(g, g)}, tol);
    c.theta = identity_endomorphism(c.module, tol);
    c.xi = CMatrix::Identity(g, g);
    cases.push_back(std::move(c));
  }
  // Inner endomorphisms on C^d over C, d <= 5.
  const auto scalars = make_multimatrix({{1, 1}});
  for (Index d = 2; d <= 5; ++d) {
    std::vector<CMatrix> gens;
    for (Index i = 0; i < d; ++i) {
      CMatrix g = CMatrix::Zero(d, 1);
      g(i, 0) = 1.0;
      gens.push_back(std::move(g));
    }
    EndoCase c;
    c.name = "ad-unitary/" + std::to_string(d);
    c.module = make_module(scalars, d, gens, tol);
    Rng rng(400 + static_cast<std::uint64_t>(d));
    const CMatrix u = rng.unitary(d);
    c.theta = inner_endomorphism(c.module, u, tol);
    // xi must be fixed by U so that the order holds for the duality corpus:
    // use an eigenvector of U (unit norm).
    Eigen::ComplexEigenSolver<CMatrix> eig(u);
    CMatrix xi(d, 1);
    xi.col(0) = eig.eigenvectors().col(0);
    c.xi = xi;
    cases.push_back(std::move(c));
  }
  // Block swap over C (+) C.
  {
    const auto b2 = make_multimatrix({{1, 1}, {1, 1}});
    EndoCase c;
    c.name = "block-swap";
    c.module = make_module(b2, 2, {CMatrix::Identity(2, 2)}, tol);
    c.theta = block_swap_endomorphism(c.module, 0, 1, tol);
    c.xi = CMatrix::Identity(2, 2);
    cases.push_back(std::move(c));
  }
  return cases;
}

Outcome criterion_unit_construction(const std::vector<EndoCase>& corpus) {
  Tolerance tol;
  double worst = 0;
  for (const auto& c : corpus) {
    const auto res = construct_via_unit(c.theta, c.xi, tol);
    worst = std::max({worst, res.unitary_defect, res.recover_defect});
    if (res.unitary_defect > 1e-9 || res.recover_defect > 1e-9)
      return {false, c.name + ": unit-route certificates exceed 1e-9"};
    const auto theta2 = iterate(c.theta, tol);
    const auto res2 = construct_via_unit(theta2, c.xi, tol);
    const auto sq = iso_check(res2.fiber, tensor(res.fiber, res.fiber, tol).product, tol);
    if (!sq.certified(tol)) return {false, c.name + ": fiber(theta^2) != fiber^2"};
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d endomorphisms, max residual %.2e", 7, worst);
  return {true, buf};
}

Outcome criterion_duality(const std::vector<EndoCase>& corpus) {
  Tolerance tol;
  for (const auto& c : corpus) {
    if (!is_full(c.module, tol)) continue;
    const auto cert = unit_vector_certificate(c.module, tol);
    if (cert.verdict != UnitCertificate::Verdict::found) continue;
    const auto rep = duality_check(c.theta, c.xi, tol);
    if (!rep.ok) return {false, c.name + ": duality failed"};
  }
  return {true, "all unital full corpus endomorphisms"};
}

Outcome criterion_non1ex() {
  Tolerance tol;
  const auto b = make_multimatrix({{1, 1}, {2, 1}});
  CMatrix g1 = CMatrix::Zero(3, 3), g2 = CMatrix::Zero(3, 3);
  g1(0, 1) = 1.0;
  g1(1, 0) = 1.0;
  g2(2, 0) = 1.0;
  const auto e = make_module(b, 3, {g1, g2}, tol);
  if (!is_full(e, tol)) return {false, "module not recognized as full"};
  const auto cert = unit_vector_certificate(e, tol);
  if (cert.verdict != UnitCertificate::Verdict::impossible)
    return {false, "unit certificate not impossible"};
  bool obstruction = false;
  for (const auto& r : cert.ranks)
    if (r.needed == 2 && r.available == 1) obstruction = true;
  if (!obstruction) return {false, "missing rank-1 obstruction on the M2 block"};
  const auto theta = identity_endomorphism(e, tol);
  const auto res = construct_via_commutant(theta, tol);
  const double defect = std::max({res.unitary_defect, res.intertwine_defect,
                                  res.module_match_defect, res.recover_defect});
  if (defect > 1e-8) return {false, "commutant construction residual too large"};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "full, unitless, commutant route residual %.2e", defect);
  return {true, buf};
}

Outcome criterion_dilation() {
  Tolerance tol;
  const auto scalars = make_multimatrix({{1, 1}});
  std::vector<CMatrix> gens;
  for (Index i = 0; i < 3; ++i) {
    CMatrix g = CMatrix::Zero(3, 1);
    g(i, 0) = 1.0;
    gens.push_back(std::move(g));
  }
  const auto e = make_module(scalars, 3, gens, tol);
  CMatrix xi = CMatrix::Zero(3, 1);
  xi(0, 0) = 1.0;

  // Positive and negative conjugations plus the identity.
  std::vector<std::pair<bool, CMatrix>> cases;
  cases.push_back({true, CMatrix::Identity(3, 3)});
  CMatrix fix = CMatrix::Identity(3, 3);
  fix(1, 1) = Complex(0, 1);
  cases.push_back({true, fix});
  CMatrix move = CMatrix::Zero(3, 3);
  move(0, 1) = move(1, 0) = 1.0;
  move(2, 2) = 1.0;
  cases.push_back({false, move});

  for (const auto& [expect_order, u] : cases) {
    const auto theta = inner_endomorphism(e, u, tol);
    const auto rep = dilation_check(theta, xi, tol);
    // Independent reading of p1 >= p0.
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(
        CMatrix((rep.p1 - rep.p0 + (rep.p1 - rep.p0).adjoint()) * 0.5));
    const bool order_oracle = eig.eigenvalues()(0) >= -1e-9;
    if (rep.order_holds != expect_order || rep.order_holds != order_oracle)
      return {false, "order criterion mismatch"};
    if (rep.order_holds && rep.unit_power_defect > 1e-8)
      return {false, "unit powers fail to reproduce T^n"};
  }

  // Depolarizing composition: p = 1/2 squared gives p' = 3/4, at 1e-10.
  const auto m2 = make_multimatrix({{2, 1}});
  std::vector<CMatrix> action;
  for (const auto& u : m2->units())
    action.push_back(0.5 * u + 0.25 * u.trace() * CMatrix::Identity(2, 2));
  const auto t = cp_from_action(m2, m2, std::move(action), tol);
  const auto g = gns(t, tol);
  FiberSystem s(g.corr, tol);
  const auto unit = make_unit(s, g.cyclic, tol);
  const auto t2 = cp_from_unit(s, unit, 2, tol);
  double defect = 0;
  for (const auto& u : m2->units()) {
    const CMatrix expect = 0.25 * u + 0.375 * u.trace() * CMatrix::Identity(2, 2);
    defect = std::max(defect, frob(t2.apply(u) - expect));
  }
  if (defect > 1e-10) return {false, "depolarizing composition residual too large"};
  char buf[96];
  std::snprintf(buf, sizeof(buf), "iff + powers verified, depolarizing residual %.2e", defect);
  return {true, buf};
}

Outcome criterion_powers() {
  Tolerance tol;
  double worst_model = 0, worst_cert = 0;
  for (Index g = 1; g <= 2; ++g)
    for (Index k1 = 1; k1 <= 3; ++k1)
      for (Index k2 = 1; k2 <= 3; ++k2) {
        Rng rng(static_cast<std::uint64_t>(g * 100 + k1 * 10 + k2));
        SpatialDatum d1, d2;
        d1.k = k1;
        d1.omega = rng.vector(k1);
        d1.omega /= d1.omega.norm();
        d2.k = k2;
        d2.omega = rng.vector(k2);
        d2.omega /= d2.omega.norm();
        const auto p = build_powers_map(g, d1, d2, tol);
        const auto rep = verify_powers_gns(p, tol);
        if (!rep.multiplicity_matches)
          return {false, "multiplicity mismatch at g=" + std::to_string(g) + " k=(" +
                             std::to_string(k1) + "," + std::to_string(k2) + ")"};
        worst_model = std::max(worst_model, rep.model.reproduction_defect);
        if (rep.model.reproduction_defect > 1e-10)
          return {false, "model reproduction exceeds 1e-10"};
        const auto cmp = compare_with_spatial_product(p, rep, tol);
        if (cmp.not_tensor_product != (k1 >= 2 && k2 >= 2))
          return {false, "tensor-product verdict wrong"};
        worst_cert = std::max({worst_cert, rep.unitary_defect, rep.intertwine_defect,
                               rep.cyclic_defect, cmp.fiber_unitary_defect,
                               cmp.omega_defect, cmp.complement_defect,
                               cmp.tipdef_defect, cmp.gns_transport_defect});
      }
  // Discrete n-step embedding at k = 2.
  SpatialDatum d2k{2, CVector::Zero(2)};
  d2k.omega(0) = 1.0;
  for (Index n = 1; n <= 3; ++n) {
    const auto ns = powers_nstep_check(1, d2k, d2k, n, tol);
    if (!ns.multiplicity_matches || !ns.fiber_dim_matches)
      return {false, "n-step dimensions diverge at n=" + std::to_string(n)};
    worst_cert = std::max({worst_cert, ns.embedding_defect, ns.unit_class_defect});
  }
  if (worst_cert > 1e-8) return {false, "certificates exceed tolerance"};
  char buf[128];
  std::snprintf(buf, sizeof(buf), "18 maps + 3 steps, model %.2e, certificates %.2e",
                worst_model, worst_cert);
  return {true, buf};
}

Outcome criterion_spatial() {
  Tolerance tol;
  // Over C: dimensions add as k1 + k2 - 1.
  for (Index k1 = 2; k1 <= 3; ++k1)
    for (Index k2 = 2; k2 <= 3; ++k2) {
      FiberSystem s1 = scalar_fiber_system(k1, tol);
      FiberSystem s2 = scalar_fiber_system(k2, tol);
      CVector o1 = CVector::Zero(k1), o2 = CVector::Zero(k2);
      o1(0) = o2(0) = 1.0;
      const auto w1 = scalar_central_unit(s1, o1, tol);
      const auto w2 = scalar_central_unit(s2, o2, tol);
      const auto sp = spatial_product(s1, w1, s2, w2, tol);
      if (sp.system.generator().dim() != k1 + k2 - 1)
        return {false, "fiber dimension is not k1 + k2 - 1"};
      if (sp.embedding_defect > 1e-9 || sp.cross_orthogonality > 1e-9)
        return {false, "embedding certificates failed over C"};
      const auto c1 = complement_multiplicity(s1, w1, tol);
      const auto c2 = complement_multiplicity(s2, w2, tol);
      const auto cp = complement_multiplicity(sp.system, sp.omega, tol);
      if (cp.entries != (c1.entries + c2.entries).eval())
        return {false, "complement multiplicities not additive over C"};
    }

  // Over C (+) C with a nontrivial padded system; intersection exactly
  // omega B.
  const auto b = make_multimatrix({{1, 1}, {1, 1}});
  const auto id = identity_correspondence(b, tol);
  for (std::uint64_t seed : {201u, 202u}) {
    const auto d1 = random_correspondence(b, 6, seed, tol);
    const auto d2 = random_correspondence(b, 6, seed + 40, tol);
    const auto sum1 = direct_sum(id, reexpress(d1, id.left, id.right, tol), tol);
    const auto sum2 = direct_sum(id, reexpress(d2, id.left, id.right, tol), tol);
    FiberSystem s1(sum1, tol), s2(sum2, tol);
    const CVector one_coeff = id.module.span.coefficients(CMatrix::Identity(2, 2));
    auto embed_unit = [&](const FiberSystem& s) {
      CMatrix xi = CMatrix::Zero(s.generator().h(), 2);
      for (Index r = 0; r < id.dim(); ++r)
        xi += one_coeff(r) * s.generator().module.span[static_cast<std::size_t>(r)];
      return make_central_unit(s, xi, tol);
    };
    const auto w1 = embed_unit(s1);
    const auto w2 = embed_unit(s2);
    const auto sp = spatial_product(s1, w1, s2, w2, tol);
    const auto c1 = complement_multiplicity(s1, w1, tol);
    const auto c2 = complement_multiplicity(s2, w2, tol);
    const auto cp = complement_multiplicity(sp.system, sp.omega, tol);
    if (cp.entries != (c1.entries + c2.entries).eval())
      return {false, "complement multiplicities not additive over C+C"};
    if (sp.embedding_defect > 1e-9 || sp.cross_orthogonality > 1e-9)
      return {false, "embedding certificates failed over C+C"};

    // Intersection of the embedded fibers is exactly omega B.
    const auto& f = sp.system.generator();
    std::vector<CMatrix> im1, im2, ob;
    for (Index i = 0; i < sum1.dim(); ++i) {
      CMatrix v = CMatrix::Zero(f.h(), 2);
      for (Index q = 0; q < f.dim(); ++q)
        v += sp.embed1(q, i) * f.module.span[static_cast<std::size_t>(q)];
      im1.push_back(std::move(v));
    }
    for (Index i = 0; i < sum2.dim(); ++i) {
      CMatrix v = CMatrix::Zero(f.h(), 2);
      for (Index q = 0; q < f.dim(); ++q)
        v += sp.embed2(q, i) * f.module.span[static_cast<std::size_t>(q)];
      im2.push_back(std::move(v));
    }
    for (const auto& u : b->units()) ob.push_back(sp.omega.xi1 * u);
    const auto inter = span_intersection(hs_orthonormalize(im1, tol),
                                         hs_orthonormalize(im2, tol), tol);
    const auto omega_b = hs_orthonormalize(ob, tol);
    if (!same_span(inter, omega_b, tol))
      return {false, "fibers do not intersect exactly in omega B"};
  }
  return {true, "dimensions, additivity, embeddings, intersection"};
}

}  // namespace

int main() {
  std::printf("acceptance suite, library %s\n", kLibraryVersion);
  run(1, "intertwiner totality on random representations", 10.0, criterion_lemma);
  run(2, "module/representation bijection round trips", 0.0, criterion_bijection);
  const FlipCorpus corpus = flip_corpus();
  run(3, "flip theorem with certified unitaries", 30.0,
      [&] { return criterion_flip(corpus); });
  run(4, "double commutant of correspondences", 0.0,
      [&] { return criterion_double_commutant(corpus); });
  run(5, "GNS reproduction and Choi-rank multiplicities", 0.0, criterion_gns);
  const auto endos = endo_corpus();
  run(6, "unit-vector construction recovers the endomorphism", 0.0,
      [&] { return criterion_unit_construction(endos); });
  run(7, "duality of the unit and commutant constructions", 0.0,
      [&] { return criterion_duality(endos); });
  run(8, "full unitless module passes the commutant route", 1.0, criterion_non1ex);
  run(9, "weak dilation criterion and unit powers", 0.0, criterion_dilation);
  run(10, "Powers map GNS equals the spatial product", 60.0, criterion_powers);
  run(11, "spatial product dimensions and embeddings", 0.0, criterion_spatial);
  if (failures == 0) {
    std::printf("all 11 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", failures);
  return 1;
}
