#include "corrlab/product_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrlab {

namespace {

double scaled(double base, const Tolerance& tol) { return tol.cutoff(1.0 + base) * 10; }

}  // namespace

FiberSystem::FiberSystem(Correspondence generator, Tolerance tol)
    : base_(generator.right),
      generator_(std::move(generator)),
      tol_(tol),
      cache_(std::make_shared<Cache>()) {
  if (!same_algebra_span(*generator_.left, *generator_.right, tol_))
    throw std::invalid_argument("FiberSystem: generator must be a B-B correspondence");
}

const FiberSystem::Entry& FiberSystem::entry(Index n) const {
  if (!cache_) throw std::logic_error("FiberSystem: empty system");
  if (n < 0) throw std::invalid_argument("FiberSystem: negative power");
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->map.find(n);
    if (it != cache_->map.end()) return it->second;
  }
  Entry e;
  if (n == 0) {
    e.corr = identity_correspondence(base_, tol_);
  } else if (n == 1) {
    e.corr = generator_;
  } else {
    const Entry& prev = entry(n - 1);
    TensorResult t = tensor(prev.corr, generator_, tol_);
    e.corr = std::move(t.product);
    e.phi = std::move(t.phi);
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->map.emplace(n, std::move(e));
  return it->second;
}

const Correspondence& FiberSystem::power(Index n) const { return entry(n).corr; }

const std::vector<CMatrix>& FiberSystem::step_phi(Index n) const {
  if (n < 2) throw std::invalid_argument("FiberSystem::step_phi: defined for n >= 2");
  return entry(n).phi;
}

CMatrix FiberSystem::word(const std::vector<CMatrix>& letters) const {
  if (letters.empty())
    throw std::invalid_argument("FiberSystem::word: empty word");
  CMatrix acc = letters.front();
  for (std::size_t pos = 1; pos < letters.size(); ++pos) {
    const Index n = static_cast<Index>(pos) + 1;
    const Entry& en = entry(n);
    const Correspondence& prev = power(n - 1);
    const CVector coeff = prev.module.span.coefficients(acc);
    CMatrix phi_acc = CMatrix::Zero(en.corr.h(), generator_.h());
    for (Index s = 0; s < coeff.size(); ++s)
      phi_acc += coeff(s) * en.phi[static_cast<std::size_t>(s)];
    acc = phi_acc * letters[pos];
  }
  return acc;
}

Unit make_unit(const FiberSystem& s, const CMatrix& xi1, const Tolerance& tol) {
  const Correspondence& e1 = s.generator();
  if (e1.module.span.residual(xi1) > scaled(frob(xi1), tol))
    throw std::invalid_argument("make_unit: element is not in the fiber");
  Unit u;
  u.xi1 = xi1;
  const CMatrix ip = xi1.adjoint() * xi1;
  u.unital = frob(ip - CMatrix::Identity(ip.rows(), ip.cols())) <= scaled(1.0, tol);
  return u;
}

CentralityReport is_central(const FiberSystem& s, const Unit& u, const Tolerance& tol) {
  CentralityReport rep;
  const Correspondence& e1 = s.generator();
  for (const auto& unit : s.base()->units())
    rep.max_commutator = std::max(
        rep.max_commutator, frob(e1.apply_left(unit) * u.xi1 - u.xi1 * unit));
  rep.central = rep.max_commutator <= scaled(frob(u.xi1), tol);
  return rep;
}

CentralUnit make_central_unit(const FiberSystem& s, const CMatrix& xi1,
                              const Tolerance& tol) {
  const Unit u = make_unit(s, xi1, tol);
  const auto rep = is_central(s, u, tol);
  if (!rep.central)
    throw std::invalid_argument("make_central_unit: candidate is not central");
  if (!u.unital)
    throw std::invalid_argument("make_central_unit: candidate is not unital");
  CentralUnit c;
  c.xi1 = u.xi1;
  c.unital = true;
  c.centrality_residual = rep.max_commutator;
  return c;
}

CMatrix unit_power(const FiberSystem& s, const Unit& u, Index n) {
  if (n < 0) throw std::invalid_argument("unit_power: negative step");
  if (n == 0) {
    // xi_0 = 1 in the identity correspondence.
    return CMatrix::Identity(s.base()->rep_dim(), s.base()->rep_dim());
  }
  CMatrix acc = u.xi1;
  for (Index k = 2; k <= n; ++k) {
    const auto& phi = s.step_phi(k);
    const CVector coeff = s.power(k - 1).module.span.coefficients(acc);
    CMatrix phi_acc = CMatrix::Zero(s.power(k).h(), s.generator().h());
    for (Index r = 0; r < coeff.size(); ++r)
      phi_acc += coeff(r) * phi[static_cast<std::size_t>(r)];
    acc = phi_acc * u.xi1;
  }
  return acc;
}

CPMap cp_from_unit(const FiberSystem& s, const Unit& u, Index n, const Tolerance& tol) {
  const CMatrix xi = unit_power(s, u, n);
  const Correspondence& en = s.power(n);
  std::vector<CMatrix> action;
  for (const auto& unit : s.base()->units())
    action.push_back(xi.adjoint() * en.apply_left(unit) * xi);
  CPMap t = cp_from_action(s.base(), s.base(), std::move(action), tol);
  if (!is_completely_positive(t, tol))
    throw std::runtime_error("cp_from_unit: resulting map fails complete positivity");
  return t;
}

namespace {

// All words of a given length over the module basis of E_1, as operators.
void enumerate_words(const FiberSystem& s, Index length,
                     std::vector<CMatrix>& out) {
  const auto& basis = s.generator().module.span.basis();
  const Index b = static_cast<Index>(basis.size());
  std::vector<Index> idx(static_cast<std::size_t>(length), 0);
  while (true) {
    std::vector<CMatrix> letters;
    for (Index i : idx) letters.push_back(basis[static_cast<std::size_t>(i)]);
    out.push_back(s.word(letters));
    Index pos = length - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == b) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

}  // namespace

AssociatorReport associator_check(const FiberSystem& s, Index m, Index n) {
  if (m < 1 || n < 1)
    throw std::invalid_argument("associator_check: m, n >= 1 required");
  const Tolerance& tol = s.tolerance();
  const Correspondence& em = s.power(m);
  const Correspondence& en = s.power(n);
  const Correspondence& emn = s.power(m + n);
  const TensorResult t = tensor(em, en, tol);

  AssociatorReport rep;
  rep.iso = iso_check(t.product, emn, tol);

  // Match the word frames: class(word_m (x) word_n g) -> word_{m+n} g.
  std::vector<CMatrix> words_m, words_n;
  enumerate_words(s, m, words_m);
  enumerate_words(s, n, words_n);
  const Index g = s.base()->rep_dim();
  const Index cols = static_cast<Index>(words_m.size() * words_n.size()) * g;
  CMatrix from(t.product.h(), cols), to(emn.h(), cols);
  Index at = 0;
  const auto& base1 = s.generator().module.span.basis();
  const Index b = static_cast<Index>(base1.size());
  for (std::size_t i = 0; i < words_m.size(); ++i) {
    const CVector ci = em.module.span.coefficients(words_m[i]);
    CMatrix phi_i = CMatrix::Zero(t.product.h(), en.h());
    for (Index r = 0; r < ci.size(); ++r) phi_i += ci(r) * t.phi[static_cast<std::size_t>(r)];
    for (std::size_t j = 0; j < words_n.size(); ++j) {
      from.middleCols(at, g) = phi_i * words_n[j];
      // Concatenated word in E_{m+n}: fold the full letter sequence.
      std::vector<CMatrix> letters;
      std::size_t ii = i, jj = j;
      std::vector<Index> li(static_cast<std::size_t>(m)), lj(static_cast<std::size_t>(n));
      for (Index p = m - 1; p >= 0; --p) {
        li[static_cast<std::size_t>(p)] = static_cast<Index>(ii % static_cast<std::size_t>(b));
        ii /= static_cast<std::size_t>(b);
      }
      for (Index p = n - 1; p >= 0; --p) {
        lj[static_cast<std::size_t>(p)] = static_cast<Index>(jj % static_cast<std::size_t>(b));
        jj /= static_cast<std::size_t>(b);
      }
      for (Index p : li) letters.push_back(base1[static_cast<std::size_t>(p)]);
      for (Index p : lj) letters.push_back(base1[static_cast<std::size_t>(p)]);
      to.middleCols(at, g) = s.word(letters);
      at += g;
    }
  }
  rep.map = solve_left(from, to);
  rep.word_match_defect = frob(rep.map * from - to);
  rep.unitary_defect =
      frob(CMatrix(rep.map.adjoint() * rep.map) - CMatrix::Identity(t.product.h(), t.product.h())) +
      frob(CMatrix(rep.map * rep.map.adjoint()) - CMatrix::Identity(emn.h(), emn.h()));
  return rep;
}

double unit_consistency_defect(const FiberSystem& s, const Unit& u, Index m, Index n) {
  const Tolerance& tol = s.tolerance();
  const CMatrix xi_m = unit_power(s, u, m);
  const CMatrix xi_n = unit_power(s, u, n);
  const CMatrix xi_mn = unit_power(s, u, m + n);
  const TensorResult t = tensor(s.power(m), s.power(n), tol);
  const CVector cm = s.power(m).module.span.coefficients(xi_m);
  CMatrix phi_m = CMatrix::Zero(t.product.h(), s.power(n).h());
  for (Index r = 0; r < cm.size(); ++r) phi_m += cm(r) * t.phi[static_cast<std::size_t>(r)];
  const CMatrix tensored = phi_m * xi_n;
  const auto rep = associator_check(s, m, n);
  return frob(rep.map * tensored - xi_mn);
}

SpatialProduct spatial_product(const FiberSystem& s1, const CentralUnit& w1,
                               const FiberSystem& s2, const CentralUnit& w2,
                               const Tolerance& tol) {
  if (!same_algebra_span(*s1.base(), *s2.base(), tol))
    throw std::invalid_argument("spatial_product: systems over different algebras");
  if (!w1.unital || !w2.unital)
    throw std::invalid_argument("spatial_product: reference units must be unital");
  const Correspondence& e1 = s1.generator();
  const Correspondence& e2 = s2.generator();
  const AlgebraPtr b = s1.base();
  const Index g = b->rep_dim();
  const Index n1 = e1.dim(), n2 = e2.dim();

  // Amalgamated semi-inner product on the symbols (basis of E1) + (basis of
  // E2): same-factor pairs keep their inner product, cross pairs contract
  // through the reference units.
  const auto ip = [&](Index i, Index j) -> CMatrix {
    const bool i1 = i < n1, j1 = j < n1;
    if (i1 && j1)
      return e1.module.span[static_cast<std::size_t>(i)].adjoint() *
             e1.module.span[static_cast<std::size_t>(j)];
    if (!i1 && !j1)
      return e2.module.span[static_cast<std::size_t>(i - n1)].adjoint() *
             e2.module.span[static_cast<std::size_t>(j - n1)];
    if (i1 && !j1)
      return (e1.module.span[static_cast<std::size_t>(i)].adjoint() * w1.xi1) *
             (w2.xi1.adjoint() * e2.module.span[static_cast<std::size_t>(j - n1)]);
    return (e2.module.span[static_cast<std::size_t>(i - n1)].adjoint() * w2.xi1) *
           (w1.xi1.adjoint() * e1.module.span[static_cast<std::size_t>(j)]);
  };

  const Index total = n1 + n2;
  CMatrix gram(total * g, total * g);
  for (Index i = 0; i < total; ++i)
    for (Index j = 0; j < total; ++j) gram.block(i * g, j * g, g, g) = ip(i, j);
  const GramQuotient q = gram_quotient(gram, tol);
  const Index hf = q.dimension;

  std::vector<CMatrix> phi;
  for (Index i = 0; i < total; ++i) phi.push_back(q.factor.middleCols(i * g, g));

  ConcreteModule m;
  m.algebra = b;
  m.target_dim = hf;
  m.span = hs_orthonormalize(phi, tol);

  // Left action through the factors.
  CMatrix frame(hf, total * g);
  for (Index i = 0; i < total; ++i) frame.middleCols(i * g, g) = phi[static_cast<std::size_t>(i)];
  std::vector<CMatrix> left;
  for (const auto& unit : b->units()) {
    CMatrix target(hf, total * g);
    for (Index i = 0; i < total; ++i) {
      CMatrix moved;
      CVector coeff;
      if (i < n1) {
        moved = e1.apply_left(unit) * e1.module.span[static_cast<std::size_t>(i)];
        coeff = e1.module.span.coefficients(moved);
        CMatrix col = CMatrix::Zero(hf, g);
        for (Index r = 0; r < n1; ++r) col += coeff(r) * phi[static_cast<std::size_t>(r)];
        target.middleCols(i * g, g) = col;
      } else {
        moved = e2.apply_left(unit) * e2.module.span[static_cast<std::size_t>(i - n1)];
        coeff = e2.module.span.coefficients(moved);
        CMatrix col = CMatrix::Zero(hf, g);
        for (Index r = 0; r < n2; ++r) col += coeff(r) * phi[static_cast<std::size_t>(n1 + r)];
        target.middleCols(i * g, g) = col;
      }
    }
    double res = 0;
    CMatrix img = solve_left(frame, target);
    res = frob(img * frame - target);
    if (res > scaled(1.0, tol) * 10)
      throw std::runtime_error("spatial_product: left action ill-defined on the quotient");
    left.push_back(std::move(img));
  }

  SpatialProduct out;
  Correspondence fiber = make_correspondence(b, m, left, tol);

  // Classes of the two reference units must coincide (amalgamation).
  const CVector c1 = e1.module.span.coefficients(w1.xi1);
  const CVector c2 = e2.module.span.coefficients(w2.xi1);
  CMatrix omega1 = CMatrix::Zero(hf, g), omega2 = CMatrix::Zero(hf, g);
  for (Index r = 0; r < n1; ++r) omega1 += c1(r) * phi[static_cast<std::size_t>(r)];
  for (Index r = 0; r < n2; ++r) omega2 += c2(r) * phi[static_cast<std::size_t>(n1 + r)];
  out.amalgamation_defect = frob(omega1 - omega2);

  FiberSystem system(std::move(fiber), tol);
  out.omega = make_central_unit(system, omega1, tol);

  // Embedding data and certificates.
  const Correspondence& f = system.generator();
  out.embed1 = CMatrix(f.dim(), n1);
  out.embed2 = CMatrix(f.dim(), n2);
  double defect = out.amalgamation_defect;
  for (Index i = 0; i < n1; ++i)
    out.embed1.col(i) = f.module.span.coefficients(phi[static_cast<std::size_t>(i)]);
  for (Index i = 0; i < n2; ++i)
    out.embed2.col(i) = f.module.span.coefficients(phi[static_cast<std::size_t>(n1 + i)]);
  // Isometry: <phi_i, phi_j> = <x_i, x_j> within each factor.
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n1; ++j)
      defect = std::max(defect, frob(CMatrix(phi[static_cast<std::size_t>(i)].adjoint() *
                                             phi[static_cast<std::size_t>(j)]) -
                                     ip(i, j)));
  for (Index i = 0; i < n2; ++i)
    for (Index j = 0; j < n2; ++j)
      defect = std::max(defect,
                        frob(CMatrix(phi[static_cast<std::size_t>(n1 + i)].adjoint() *
                                     phi[static_cast<std::size_t>(n1 + j)]) -
                             ip(n1 + i, n1 + j)));
  // Bimodule linearity of the embeddings.
  for (const auto& unit : b->units()) {
    const CMatrix lf = f.apply_left(unit);
    for (Index i = 0; i < n1; ++i) {
      const CVector coeff =
          e1.module.span.coefficients(e1.apply_left(unit) * e1.module.span[static_cast<std::size_t>(i)]);
      CMatrix expect = CMatrix::Zero(hf, g);
      for (Index r = 0; r < n1; ++r) expect += coeff(r) * phi[static_cast<std::size_t>(r)];
      defect = std::max(defect, frob(lf * phi[static_cast<std::size_t>(i)] - expect));
    }
  }
  out.embedding_defect = defect;

  // Cross-factor complements are orthogonal.
  double cross = 0;
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j) {
      // components orthogonal to omega: x - omega <omega, x>
      const CMatrix x = e1.module.span[static_cast<std::size_t>(i)];
      const CMatrix y = e2.module.span[static_cast<std::size_t>(j)];
      const CMatrix xc = x - w1.xi1 * (w1.xi1.adjoint() * x);
      const CMatrix yc = y - w2.xi1 * (w2.xi1.adjoint() * y);
      // their classes:
      const CVector cx = e1.module.span.coefficients(xc);
      const CVector cy = e2.module.span.coefficients(yc);
      CMatrix clx = CMatrix::Zero(hf, g), cly = CMatrix::Zero(hf, g);
      for (Index r = 0; r < n1; ++r) clx += cx(r) * phi[static_cast<std::size_t>(r)];
      for (Index r = 0; r < n2; ++r) cly += cy(r) * phi[static_cast<std::size_t>(n1 + r)];
      cross = std::max(cross, frob(CMatrix(clx.adjoint() * cly)));
    }
  out.cross_orthogonality = cross;
  out.system = std::move(system);
  return out;
}

FiberComplement fiber_complement(const FiberSystem& s, const CentralUnit& w,
                                 const Tolerance& tol) {
  const Correspondence& e1 = s.generator();
  std::vector<CMatrix> omega_b;
  for (const auto& unit : s.base()->units()) omega_b.push_back(w.xi1 * unit);
  const OperatorSpan ob = hs_orthonormalize(omega_b, tol);
  const OperatorSpan comp = span_complement(e1.module.span, ob, tol);
  FiberComplement out;
  if (comp.dim() == 0) {
    out.empty = true;
    return out;
  }
  ConcreteModule m;
  m.algebra = s.base();
  m.target_dim = e1.h();
  m.span = comp;
  out.corr = make_correspondence(e1.left, m, e1.left_images, tol);
  return out;
}

MultiplicityMatrix complement_multiplicity(const FiberSystem& s,
                                           const CentralUnit& w,
                                           const Tolerance& tol) {
  const auto comp = fiber_complement(s, w, tol);
  if (comp.empty) {
    MultiplicityMatrix mm;
    mm.entries = Eigen::MatrixXi::Zero(s.base()->block_count(), s.base()->block_count());
    return mm;
  }
  return multiplicity_matrix_wrt(comp.corr, *s.base(), *s.base(), tol);
}

}  // namespace corrlab
