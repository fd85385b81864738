#include "corrlab/scenario.hpp"

#include "corrlab/endo.hpp"
#include "corrlab/powers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace corrlab {

namespace {

double pass_cut(const Tolerance& tol) { return tol.cutoff(1.0) * 100; }

Endomorphism endo_from_json(const Json& j, const ConcreteModule& e, const Tolerance& tol) {
  if (j.is_array()) {
    std::vector<CMatrix> images;
    for (const auto& m : j) images.push_back(matrix_from_json(m));
    return make_endomorphism(e, images, tol);
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return identity_endomorphism(e, tol);
  if (kind == "ad_unitary")
    return inner_endomorphism(e, matrix_from_json(j.at("unitary")), tol);
  if (kind == "block_swap")
    return block_swap_endomorphism(e, j.at("blocks").at(0).get<Index>(),
                                   j.at("blocks").at(1).get<Index>(), tol);
  throw ScenarioError("unknown endomorphism kind: " + kind);
}

struct SystemInput {
  FiberSystem system;
  CentralUnit omega;
};

SystemInput system_from_json(const Json& j, const Tolerance& tol) {
  SystemInput out;
  out.system = FiberSystem(correspondence_from_json(j.at("generator"), tol), tol);
  if (j.contains("units")) {
    // List form: the reference is the first unit flagged central.
    for (const auto& u : j["units"]) {
      if (!u.value("central", false)) continue;
      out.omega = make_central_unit(out.system, matrix_from_json(u.at("xi1")), tol);
      return out;
    }
    throw std::invalid_argument("spatial product: no central reference unit supplied");
  }
  out.omega = make_central_unit(out.system, matrix_from_json(j.at("unit")), tol);
  return out;
}

void check_expect_int(const Json& expect, const char* key, Index actual,
                      std::string& failure) {
  if (expect.contains(key) && expect[key].get<Index>() != actual) {
    failure = std::string(key) + " expected " + expect[key].dump() + ", got " +
              std::to_string(actual);
  }
}

void check_expect_bool(const Json& expect, const char* key, bool actual,
                       std::string& failure) {
  if (expect.contains(key) && expect[key].get<bool>() != actual) {
    failure = std::string(key) + " expected " + expect[key].dump() + ", got " +
              (actual ? "true" : "false");
  }
}

void check_expect_mult(const Json& expect, const char* key,
                       const MultiplicityMatrix& actual, std::string& failure) {
  if (!expect.contains(key)) return;
  if (expect[key] != multiplicity_to_json(actual))
    failure = std::string(key) + " expected " + expect[key].dump() + ", got " +
              multiplicity_to_json(actual).dump();
}

// ---- per-kind runners ------------------------------------------------------

void run_commutant(const Scenario& s, Report& rep) {
  const auto a = algebra_from_json(s.inputs.at("algebra"));
  const auto c = commutant_algebra(*a, s.tol);
  double comm = 0;
  for (const auto& x : a->span().basis())
    for (const auto& y : c->span().basis()) comm = std::max(comm, frob(x * y - y * x));
  const auto cc = commutant_algebra(*c, s.tol);
  const bool double_comm = same_algebra_span(*a, *cc, s.tol);
  rep.residuals["max_commutator"] = comm;
  rep.dimensions["algebra"] = a->dim();
  rep.dimensions["commutant"] = c->dim();
  rep.dimensions["double_commutant"] = cc->dim();
  Json blocks = Json::array();
  for (const auto& blk : c->blocks())
    blocks.push_back(Json{{"size", blk.size}, {"multiplicity", blk.multiplicity}});
  rep.dimensions["commutant_blocks"] = std::move(blocks);
  std::string failure;
  check_expect_int(s.expect, "commutant_dim", c->dim(), failure);
  if (comm > pass_cut(s.tol)) failure = "commutant fails to commute";
  if (!double_comm) failure = "double commutant differs from the algebra";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_gns(const Scenario& s, Report& rep) {
  const auto t = cp_map_from_json(s.inputs.at("cp_map"), s.tol);
  rep.residuals["cp_kernel_min_eigenvalue"] = cp_kernel_min_eigenvalue(t);
  if (!is_completely_positive(t, s.tol)) {
    rep.verdict = "fail";
    rep.detail = "map is not completely positive";
    return;
  }
  const auto g = gns(t, s.tol);
  rep.residuals["reproduction"] = g.reproduction_defect;
  rep.dimensions["module"] = g.corr.dim();
  rep.dimensions["gns_space"] = g.corr.h();
  const auto mm = multiplicity_matrix(g.corr, s.tol);
  rep.mult_matrices["gns"] = multiplicity_to_json(mm);
  std::string failure;
  check_expect_mult(s.expect, "multiplicity_matrix", mm, failure);
  if (g.reproduction_defect > pass_cut(s.tol)) failure = "<xi, a xi> fails to reproduce T";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_tensor(const Scenario& s, Report& rep) {
  const auto e1 = correspondence_from_json(s.inputs.at("e1"), s.tol);
  const auto e2 = correspondence_from_json(s.inputs.at("e2"), s.tol);
  const auto prod = tensor(e1, e2, s.tol);
  const auto m1 = multiplicity_matrix(e1, s.tol);
  const auto m2 = multiplicity_matrix_wrt(e2, *e1.left, *e1.right, s.tol);
  const auto mp = multiplicity_matrix_wrt(prod.product, *e1.left, *e2.right, s.tol);
  rep.dimensions["e1"] = e1.dim();
  rep.dimensions["e2"] = e2.dim();
  rep.dimensions["product"] = prod.product.dim();
  rep.mult_matrices["e1"] = multiplicity_to_json(m1);
  rep.mult_matrices["e2"] = multiplicity_to_json(m2);
  rep.mult_matrices["product"] = multiplicity_to_json(mp);
  std::string failure;
  if (mp.entries != (m1.entries * m2.entries).eval())
    failure = "multiplicity matrices fail the product law";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_flip(const Scenario& s, Report& rep) {
  const auto e1 = correspondence_from_json(s.inputs.at("e1"), s.tol);
  const auto e2 = correspondence_from_json(s.inputs.at("e2"), s.tol);
  const auto f = flip_check(e1, e2, s.tol);
  rep.residuals["iso_unitary"] = f.iso.unitary_defect;
  rep.residuals["iso_inner_products"] = f.iso.inner_product_defect;
  rep.residuals["iso_bilinearity"] = f.iso.bilinearity_defect;
  rep.residuals["flip_unitary"] = f.flip_unitary_defect;
  rep.residuals["flip_intertwines"] = f.flip_intertwines_defect;
  rep.residuals["flip_module"] = f.flip_module_defect;
  rep.mult_matrices["lhs"] = multiplicity_to_json(f.lhs_mult);
  rep.mult_matrices["rhs"] = multiplicity_to_json(f.rhs_mult);
  rep.verdict = f.verdict ? "pass" : "fail";
  if (!f.verdict) rep.detail = "flip theorem certificates failed";
}

void run_lemma(const Scenario& s, Report& rep) {
  const auto b = algebra_from_json(s.inputs.at("algebra"));
  const auto bp = commutant_algebra(*b, s.tol);
  Representation rho;
  if (s.inputs.contains("images")) {
    rho.algebra = bp;
    for (const auto& m : s.inputs["images"]) rho.images.push_back(matrix_from_json(m));
    if (rho.images.empty()) throw ScenarioError("lemma: empty image list");
    rho.space_dim = rho.images.front().rows();
    if (rho.hom_defect() > pass_cut(s.tol))
      throw ScenarioError("lemma: images are not a representation of B'");
  } else {
    std::vector<Index> mults;
    for (const auto& m : s.inputs.at("rep_multiplicities")) mults.push_back(m.get<Index>());
    rho = random_representation(bp, mults, s.seed, s.tol);
  }
  const auto e = intertwiner_module(b, rho, s.tol);
  const bool total = check_totality(e, s.tol);
  double worst = 0;
  for (const auto& x : e.span.basis())
    for (Index i = 0; i < bp->dim(); ++i)
      worst = std::max(worst, frob(rho.images[static_cast<std::size_t>(i)] * x -
                                   x * bp->unit_image(i)));
  rep.dimensions["intertwiner_module"] = e.dim();
  rep.dimensions["representation_space"] = rho.space_dim;
  rep.residuals["intertwining"] = worst;
  rep.verdict = (total && worst <= pass_cut(s.tol)) ? "pass" : "fail";
  if (!total) rep.detail = "intertwiners fail to reach the representation space";
}

void run_endo_unit(const Scenario& s, Report& rep) {
  const auto e = module_from_json(s.inputs.at("module"), s.tol);
  const auto theta = endo_from_json(s.inputs.at("endomorphism"), e, s.tol);
  const auto res = construct_via_unit(theta, matrix_from_json(s.inputs.at("unit_vector")), s.tol);
  rep.dimensions["fiber"] = res.fiber.dim();
  rep.mult_matrices["fiber"] = multiplicity_to_json(multiplicity_matrix(res.fiber, s.tol));
  rep.residuals["unitary"] = res.unitary_defect;
  rep.residuals["recover"] = res.recover_defect;
  rep.dimensions["surjectivity"] =
      "dimension count (finite dimension replaces the strictness argument)";
  std::string failure;
  check_expect_int(s.expect, "fiber_dim", res.fiber.dim(), failure);
  if (res.unitary_defect > pass_cut(s.tol)) failure = "u is not unitary";
  if (res.recover_defect > pass_cut(s.tol)) failure = "theta(a) != a (.) id";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_endo_commutant(const Scenario& s, Report& rep) {
  const auto e = module_from_json(s.inputs.at("module"), s.tol);
  const auto cert = unit_vector_certificate(e, s.tol);
  const char* verdict_name =
      cert.verdict == UnitCertificate::Verdict::found
          ? "found"
          : (cert.verdict == UnitCertificate::Verdict::impossible ? "impossible" : "unknown");
  rep.dimensions["module"] = e.dim();
  rep.dimensions["is_full"] = is_full(e, s.tol);
  rep.dimensions["unit_vector"] = verdict_name;
  Json ranks = Json::array();
  for (const auto& r : cert.ranks)
    ranks.push_back(Json{{"block", r.block}, {"needed", r.needed}, {"available", r.available}});
  rep.dimensions["unit_vector_ranks"] = std::move(ranks);

  const auto theta = endo_from_json(s.inputs.at("endomorphism"), e, s.tol);
  const auto res = construct_via_commutant(theta, s.tol);
  rep.dimensions["fiber_prime"] = res.fiber_prime.dim();
  rep.dimensions["fiber"] = res.fiber.dim();
  rep.mult_matrices["fiber"] = multiplicity_to_json(multiplicity_matrix(res.fiber, s.tol));
  rep.residuals["unitary"] = res.unitary_defect;
  rep.residuals["intertwine"] = res.intertwine_defect;
  rep.residuals["module_match"] = res.module_match_defect;
  rep.residuals["recover"] = res.recover_defect;
  std::string failure;
  if (s.expect.contains("unit_vector") &&
      s.expect["unit_vector"].get<std::string>() != verdict_name)
    failure = std::string("unit_vector expected ") + s.expect["unit_vector"].dump() +
              ", got " + verdict_name;
  const double worst = std::max(std::max(res.unitary_defect, res.intertwine_defect),
                                std::max(res.module_match_defect, res.recover_defect));
  if (worst > pass_cut(s.tol)) failure = "identification certificates failed";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_duality(const Scenario& s, Report& rep) {
  const auto e = module_from_json(s.inputs.at("module"), s.tol);
  const auto theta = endo_from_json(s.inputs.at("endomorphism"), e, s.tol);
  const auto d = duality_check(theta, matrix_from_json(s.inputs.at("unit_vector")), s.tol);
  rep.residuals["commutant_match_unitary"] = d.commutant_match.unitary_defect;
  rep.residuals["square_unit_unitary"] = d.square_unit.unitary_defect;
  rep.residuals["square_commutant_unitary"] = d.square_commutant.unitary_defect;
  rep.mult_matrices["commutant_fiber"] = multiplicity_to_json(d.commutant_match.left_mult);
  rep.verdict = d.ok ? "pass" : "fail";
  if (!d.ok) rep.detail = "duality certificates failed";
}

void run_dilation(const Scenario& s, Report& rep) {
  const auto e = module_from_json(s.inputs.at("module"), s.tol);
  const auto theta = endo_from_json(s.inputs.at("endomorphism"), e, s.tol);
  const auto d = dilation_check(theta, matrix_from_json(s.inputs.at("unit_vector")), s.tol);
  rep.dimensions["order_holds"] = d.order_holds;
  rep.residuals["order"] = d.order_residual;
  rep.residuals["cp_kernel_min_eigenvalue"] = cp_kernel_min_eigenvalue(d.extracted);
  rep.residuals["unit_powers"] = d.unit_power_defect;
  std::string failure;
  check_expect_bool(s.expect, "order_holds", d.order_holds, failure);
  if (!d.cp_valid) failure = "extracted map is not completely positive";
  if (d.order_holds && !d.cp_unital) failure = "extracted map is not unital";
  if (d.order_holds && d.unit_power_defect > pass_cut(s.tol))
    failure = "<xi_n, b xi_n> != T^n(b)";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_spatial_product(const Scenario& s, Report& rep) {
  auto s1 = system_from_json(s.inputs.at("system1"), s.tol);
  auto s2 = system_from_json(s.inputs.at("system2"), s.tol);
  const auto sp = spatial_product(s1.system, s1.omega, s2.system, s2.omega, s.tol);
  const auto c1 = complement_multiplicity(s1.system, s1.omega, s.tol);
  const auto c2 = complement_multiplicity(s2.system, s2.omega, s.tol);
  const auto cp = complement_multiplicity(sp.system, sp.omega, s.tol);
  rep.dimensions["fiber1"] = s1.system.generator().dim();
  rep.dimensions["fiber2"] = s2.system.generator().dim();
  rep.dimensions["product_fiber"] = sp.system.generator().dim();
  rep.mult_matrices["complement1"] = multiplicity_to_json(c1);
  rep.mult_matrices["complement2"] = multiplicity_to_json(c2);
  rep.mult_matrices["product_complement"] = multiplicity_to_json(cp);
  rep.residuals["amalgamation"] = sp.amalgamation_defect;
  rep.residuals["embedding"] = sp.embedding_defect;
  rep.residuals["cross_orthogonality"] = sp.cross_orthogonality;
  std::string failure;
  check_expect_int(s.expect, "product_fiber_dim", sp.system.generator().dim(), failure);
  if (cp.entries != (c1.entries + c2.entries).eval())
    failure = "complement multiplicities are not additive";
  const double worst = std::max(std::max(sp.amalgamation_defect, sp.embedding_defect),
                                sp.cross_orthogonality);
  if (worst > pass_cut(s.tol)) failure = "embedding certificates failed";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

void run_powers(const Scenario& s, Report& rep) {
  const auto p = powers_from_json(s.inputs, s.tol);
  const auto g = verify_powers_gns(p, s.tol);
  const auto cmp = compare_with_spatial_product(p, g, s.tol);
  rep.dimensions["H"] = g.model.h_dim;
  rep.dimensions["gns_multiplicity"] = g.multiplicity;
  rep.dimensions["tensor"] = cmp.tensor_dim;
  rep.dimensions["not_tensor_product"] = cmp.not_tensor_product;
  rep.residuals["model_reproduction"] = g.model.reproduction_defect;
  rep.residuals["gns_unitary"] = g.unitary_defect;
  rep.residuals["gns_intertwine"] = g.intertwine_defect;
  rep.residuals["gns_cyclic"] = g.cyclic_defect;
  rep.residuals["fiber_unitary"] = cmp.fiber_unitary_defect;
  rep.residuals["tipdef_table"] = cmp.tipdef_defect;
  rep.residuals["gns_transport"] = cmp.gns_transport_defect;
  std::string failure;
  if (!g.multiplicity_matches) failure = "GNS multiplicity differs from k1 + k2 - 1";
  check_expect_bool(s.expect, "not_tensor_product", cmp.not_tensor_product, failure);
  double worst = std::max({g.model.reproduction_defect, g.unitary_defect,
                           g.intertwine_defect, g.cyclic_defect,
                           cmp.fiber_unitary_defect, cmp.omega_defect,
                           cmp.complement_defect, cmp.tipdef_defect,
                           cmp.gns_transport_defect});
  if (s.inputs.contains("nstep")) {
    const Index n = s.inputs["nstep"].get<Index>();
    for (Index step = 1; step <= n; ++step) {
      const auto ns = powers_nstep_check(p.g_dim, p.d1, p.d2, step, s.tol);
      if (!ns.multiplicity_matches || !ns.fiber_dim_matches)
        failure = "n-step dimensions diverge at n = " + std::to_string(step);
      worst = std::max({worst, ns.embedding_defect, ns.unit_class_defect});
    }
    rep.residuals["nstep_worst"] = worst;
  }
  if (worst > pass_cut(s.tol)) failure = "powers certificates exceed tolerance";
  rep.verdict = failure.empty() ? "pass" : "fail";
  rep.detail = failure;
}

}  // namespace

Json Report::to_json(bool with_timing) const {
  Json j{{"scenario", scenario}, {"kind", kind},           {"verdict", verdict},
         {"detail", detail},     {"residuals", residuals}, {"dimensions", dimensions},
         {"multiplicity_matrices", mult_matrices},         {"seed", seed},
         {"library_version", kLibraryVersion}};
  if (with_timing) j["duration_ms"] = duration_ms;
  return j;
}

std::string Report::to_text(bool with_timing) const {
  const Json j = to_json(with_timing);
  std::ostringstream os;
  os << j["scenario"].get<std::string>() << " [" << j["kind"].get<std::string>()
     << "]: " << j["verdict"].get<std::string>();
  if (!detail.empty()) os << " (" << detail << ")";
  os << "\n";
  if (!j["dimensions"].empty()) os << "  dimensions: " << j["dimensions"].dump() << "\n";
  if (!j["residuals"].empty()) os << "  residuals: " << j["residuals"].dump() << "\n";
  if (!j["multiplicity_matrices"].empty())
    os << "  multiplicity: " << j["multiplicity_matrices"].dump() << "\n";
  if (with_timing) os << "  duration_ms: " << duration_ms << "\n";
  return os.str();
}

int Report::exit_code() const {
  if (verdict == "pass") return 0;
  if (verdict == "refused") return 3;
  return 1;
}

std::vector<std::string> scenario_kinds() {
  return {"commutant", "gns",        "tensor",          "flip",   "lemma", "endo-unit",
          "endo-commutant", "duality", "dilation", "spatial-product", "powers"};
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.kind = j.at("kind").get<std::string>();
    s.inputs = j.at("inputs");
  } catch (const Json::exception& e) {
    throw ScenarioError(std::string("scenario schema: ") + e.what());
  }
  const auto kinds = scenario_kinds();
  if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
    throw ScenarioError("unknown scenario kind: " + s.kind);
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    s.tol = Tolerance(t.value("abs", 1e-9), t.value("rel", 1e-8));
  }
  s.seed = j.value("seed", 0ULL);
  if (j.contains("expect")) s.expect = j["expect"];
  else s.expect = Json::object();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ScenarioError(std::string("parse error in ") + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

Report run_scenario(const Scenario& s) {
  Report rep;
  rep.scenario = s.name;
  rep.kind = s.kind;
  rep.seed = s.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (s.kind == "commutant") run_commutant(s, rep);
    else if (s.kind == "gns") run_gns(s, rep);
    else if (s.kind == "tensor") run_tensor(s, rep);
    else if (s.kind == "flip") run_flip(s, rep);
    else if (s.kind == "lemma") run_lemma(s, rep);
    else if (s.kind == "endo-unit") run_endo_unit(s, rep);
    else if (s.kind == "endo-commutant") run_endo_commutant(s, rep);
    else if (s.kind == "duality") run_duality(s, rep);
    else if (s.kind == "dilation") run_dilation(s, rep);
    else if (s.kind == "spatial-product") run_spatial_product(s, rep);
    else if (s.kind == "powers") run_powers(s, rep);
    else throw ScenarioError("unknown scenario kind: " + s.kind);
  } catch (const ScenarioError&) {
    throw;
  } catch (const JsonError& e) {
    throw ScenarioError(std::string("scenario schema: ") + e.what());
  } catch (const Json::exception& e) {
    throw ScenarioError(std::string("scenario schema: ") + e.what());
  } catch (const std::invalid_argument& e) {
    // Precondition violations are refusals: the inputs fail the contract of
    // the requested check (non-full module, non-central reference, ...).
    rep.verdict = "refused";
    rep.detail = e.what();
  } catch (const std::exception& e) {
    rep.verdict = "fail";
    rep.detail = e.what();
  }
  rep.duration_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return rep;
}

SuiteResult run_suite(const std::string& directory, int jobs,
                      const ProgressFn& progress) {
  namespace fs = std::filesystem;
  SuiteResult out;
  std::vector<std::string> files;
  if (!fs::is_directory(directory))
    throw ScenarioError("not a directory: " + directory);
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  out.scenario_count = static_cast<Index>(files.size());

  const auto start = std::chrono::steady_clock::now();
  std::vector<Report> reports(files.size());
  std::atomic<std::size_t> next{0};
  std::atomic<Index> done{0};
  bool parse_error = false;
  std::mutex flag_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= files.size()) break;
      Report rep;
      try {
        rep = run_scenario(load_scenario(files[i]));
      } catch (const ScenarioError& e) {
        rep.scenario = fs::path(files[i]).stem().string();
        rep.kind = "unknown";
        rep.verdict = "fail";
        rep.detail = e.what();
        std::lock_guard<std::mutex> lock(flag_mutex);
        parse_error = true;
      }
      if (progress) {
        SuiteProgress p;
        p.completed = done.fetch_add(1) + 1;
        p.total = static_cast<Index>(files.size());
        p.scenario = rep.scenario;
        p.verdict = rep.verdict;
        progress(p);
      } else {
        done.fetch_add(1);
      }
      reports[i] = std::move(rep);
    }
  };
  const int n = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(reports.begin(), reports.end(),
            [](const Report& a, const Report& b) { return a.scenario < b.scenario; });
  bool any_fail = false, any_refused = false;
  for (const auto& r : reports) {
    if (r.verdict == "pass") ++out.pass_count;
    if (r.verdict == "fail") any_fail = true;
    if (r.verdict == "refused") any_refused = true;
  }
  out.reports = std::move(reports);
  out.exit_code = parse_error ? 2 : (any_fail ? 1 : (any_refused ? 3 : 0));
  out.duration_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return out;
}

Json schema_for(const std::string& kind) {
  const Json matrix = "matrix: [[[re, im], ...], ...] (rows of entries)";
  const Json algebra = Json{{"blocks", Json::array({Json{{"size", 2}, {"multiplicity", 1}}})}};
  Json inputs;
  if (kind == "commutant") {
    inputs = Json{{"algebra", algebra}};
  } else if (kind == "gns") {
    inputs = Json{{"cp_map", Json{{"source", algebra},
                                  {"target", algebra},
                                  {"kraus | action", Json::array({matrix})}}}};
  } else if (kind == "tensor" || kind == "flip") {
    const Json corr = Json{{"left", algebra},        {"right", algebra},
                           {"target_dim", 2},        {"generators", Json::array({matrix})},
                           {"left_action", Json::array({matrix})}};
    inputs = Json{{"e1", corr}, {"e2", corr}};
  } else if (kind == "lemma") {
    inputs = Json{{"algebra", algebra},
                  {"rep_multiplicities", Json::array({1, 2})},
                  {"images (alternative)", Json::array({matrix})}};
  } else if (kind == "endo-unit" || kind == "duality" || kind == "dilation") {
    inputs = Json{{"module", Json{{"algebra", algebra},
                                  {"target_dim", 2},
                                  {"generators", Json::array({matrix})}}},
                  {"endomorphism",
                   "matrix list | {\"kind\": \"identity\" | \"ad_unitary\" | \"block_swap\", ...}"},
                  {"unit_vector", matrix}};
  } else if (kind == "endo-commutant") {
    inputs = Json{{"module", Json{{"algebra", algebra},
                                  {"target_dim", 2},
                                  {"generators", Json::array({matrix})}}},
                  {"endomorphism", "as in endo-unit"}};
  } else if (kind == "spatial-product") {
    const Json system = Json{
        {"generator", "correspondence"},
        {"units", Json::array({Json{{"xi1", matrix}, {"central", true}}})}};
    inputs = Json{{"system1", system}, {"system2", system}};
  } else if (kind == "powers") {
    inputs = Json{{"g_dim", 1},
                  {"factor1", Json{{"k", 2}, {"omega", Json::array({Json::array({1.0, 0.0})})}}},
                  {"factor2", Json{{"k", 2}, {"omega", Json::array({Json::array({1.0, 0.0})})}}},
                  {"nstep", "optional n for the discrete consistency check"}};
  } else {
    throw ScenarioError("unknown scenario kind: " + kind);
  }
  return Json{{"name", "example"},
              {"kind", kind},
              {"inputs", inputs},
              {"tolerance", Json{{"abs", 1e-9}, {"rel", 1e-8}}},
              {"seed", 0},
              {"expect", "optional pinned expectations"}};
}

}  // namespace corrlab
