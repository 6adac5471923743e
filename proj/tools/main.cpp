// dirdef command line front end
#include <CLI11.hpp>
#include <iostream>
#include <random>
#include <sstream>

#include "dirdef/brackets.hpp"
#include "dirdef/courant.hpp"
#include "dirdef/error.hpp"
#include "dirdef/ihs.hpp"
#include "dirdef/io.hpp"
#include "dirdef/lie_deform.hpp"
#include "report.hpp"

using namespace dirdef;
using namespace dirdef::cli;
using nlohmann::json;

namespace {

struct Outcome {
  json result;
  Exit code = Pass;
};

Exit classify(Errc e) {
  switch (e) {
    case Errc::Order0NotLie:
    case Errc::NotLie:
    case Errc::NotIsotropic:
    case Errc::AxiomViolation:
    case Errc::LeftAdmissibleSet:
    case Errc::NotAdmissible:
      return Fail;
    default:
      return InputError;
  }
}

json parse_json(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, path + ": " + e.what());
  }
}

std::size_t terms(const SuperElement& f) { return f.terms().size(); }

VecQ unit(std::size_t n, std::size_t i) {
  VecQ v(n);
  v[i] = 1;
  return v;
}

// ---- Lie side ----

Outcome check_jacobi(const json& in) {
  MultiMap mu = io::read_structure(in);
  Outcome out;
  const bool zero = nr_bracket(mu, mu).is_zero();
  out.result = {{"dim", mu.dim()}, {"nr_square_zero", zero}};
  const std::size_t n = mu.dim();
  for (std::size_t a = 0; a < n && !zero; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        auto x = unit(n, a), y = unit(n, b), z = unit(n, c);
        VecQ j = mu.eval({mu.eval({x, y}), z});
        VecQ j2 = mu.eval({mu.eval({y, z}), x}), j3 = mu.eval({mu.eval({z, x}), y});
        bool nonzero = false;
        for (std::size_t g = 0; g < n; ++g) {
          j[g] += j2[g] + j3[g];
          nonzero |= j[g] != 0;
        }
        if (nonzero && !out.result.contains("first_failing_triple")) {
          out.result["first_failing_triple"] = {a, b, c};
          out.result["jacobiator"] = io::write(j);
        }
      }
  out.code = zero ? Pass : Fail;
  return out;
}

Outcome ce_cohomology(const json& in, int degree) {
  MultiMap mu = io::read_structure(in);
  if (!is_lie(mu)) throw Error(Errc::NotLie, "structure violates the Jacobi identity");
  Outcome out;
  json rows = json::array();
  for (std::size_t k = 0; k <= mu.dim() + 1; ++k) {
    if (degree >= 0 && k != std::size_t(degree)) continue;
    Cohomology h = cohomology(mu, k);
    json reps = json::array();
    for (const auto& r : h.representatives) reps.push_back(io::write_entries(r));
    rows.push_back({{"degree", k}, {"dim", h.dim}, {"cocycles", h.cocycles}, {"coboundaries", h.coboundaries}});
    if (k >= 1 && k <= mu.dim()) rows.back()["representatives"] = reps;
  }
  out.result = {{"dim", mu.dim()}, {"cohomology", rows}};
  return out;
}

json lie_certificate(const ObstructionCertificate& c) {
  json j = {{"order", c.order},
            {"extends", c.extends()},
            {"cocycle_dim", c.cocycle_dim},
            {"R", io::write_entries(c.R)},
            {"delta_R_zero", c.delta_R.is_zero()}};
  if (c.solution) j["solution"] = io::write_entries(*c.solution);
  if (c.witness) j["witness"] = io::write(*c.witness);
  return j;
}

json lie_run(const MultiMap& mu0, const MultiMap& mu1, std::size_t N, bool& obstructed) {
  LieDeformReport rep = deform_lie(mu0, mu1, N);
  json orders = json::array();
  for (const auto& c : rep.orders) orders.push_back(lie_certificate(c));
  obstructed |= rep.obstructed;
  return {{"mu1", io::write_entries(mu1)},
          {"mu1_exact", rep.mu1_exact},
          {"reached", rep.reached},
          {"obstructed", rep.obstructed},
          {"orders", orders}};
}

Outcome deform_lie_cmd(const json& in, std::size_t N) {
  MultiMap mu0 = io::read_structure(in);
  if (!is_lie(mu0)) throw Error(Errc::Order0NotLie, "mu_0 violates the Jacobi identity");
  Outcome out;
  bool obstructed = false;
  RigidityVerdict rig = rigidity_check(mu0);
  out.result = {{"dim", mu0.dim()}, {"h2", rig.h2}, {"rigid", rig.rigid}};
  if (in.contains("mu1")) {
    MultiMap mu1 = io::read_constants(in.at("mu1"), mu0.dim(), "/mu1");
    out.result["runs"] = json::array({lie_run(mu0, mu1, N, obstructed)});
  } else {
    // every basis cocycle of Z^2, then one run per H^2 representative
    const MatrixQ d2 = ce_matrix(mu0, 2);
    const SubspaceQ Z = kernel_basis(d2), B = image(ce_matrix(mu0, 1));
    json cocycles = json::array();
    for (const auto& v : Z.basis())
      cocycles.push_back(
          {{"cocycle", io::write_entries(MultiMap::from_flat(2, mu0.dim(), v))}, {"coboundary", B.contains(v)}});
    out.result["order1_cocycles"] = cocycles;
    json runs = json::array();
    for (const auto& r : cohomology(mu0, 2).representatives) runs.push_back(lie_run(mu0, r, N, obstructed));
    out.result["runs"] = runs;
  }
  out.code = obstructed ? Fail : Pass;
  return out;
}

// ---- linear Dirac ----

Outcome dirac_linear_cmd(const json& in) {
  LinearDirac L = io::read_dirac(in);
  Representation rep = represent(L);
  Outcome out;
  out.result = {{"n", L.n()},
                {"dim", L.subspace().dim()},
                {"basis", io::write(L.subspace())},
                {"range", {{"R", io::write(rep.range.R)}, {"omega", io::write(rep.range.omega)}}},
                {"kernel", {{"K", io::write(rep.kernel.K)}, {"pi", io::write(rep.kernel.pi)}}},
                {"dims",
                 {{"rho", rho(L).dim()},
                  {"rho_star", rho_star(L).dim()},
                  {"L_cap_V", in_V(L).dim()},
                  {"L_cap_V_star", in_V_star(L).dim()}}},
                {"round_trip", from_R_Omega(rep.range) == L && from_K_pi(rep.kernel) == L}};
  out.code = out.result["round_trip"].get<bool>() ? Pass : Fail;
  return out;
}

// ---- Courant side ----

json master_json(const MasterResiduals& m) {
  auto part = [](const SuperElement& f) { return json{{"zero", f.is_zero()}, {"terms", terms(f)}}; };
  return {{"total", part(m.total)}, {"r13", part(m.r13)}, {"r31", part(m.r31)},
          {"r22", part(m.r22)},     {"r04", part(m.r04)}, {"r40", part(m.r40)}};
}

json identities_json(const CourantReport& rep) {
  json ids = json::array();
  for (const auto& c : rep.identities) {
    json j = {{"name", c.name}, {"checked", c.checked}, {"failures", c.failures}, {"ok", c.ok()}};
    if (!c.ok()) j["first_failure"] = c.first_failure, j["max_terms"] = c.max_terms;
    ids.push_back(j);
  }
  return ids;
}

Outcome courant_verify(const json& in, const RunConfig& cfg) {
  ThetaStructure T = build_theta(io::read_courant(in));
  SectionSampling s;
  s.degree = cfg.degree_cap;
  s.seed = cfg.seed;
  CourantReport rep = verify_courant(T, s);
  CourantReport quasi = quasi_lemma_check(T, s);
  Outcome out;
  out.result = {{"m", T.m},
                {"k", T.k},
                {"master", master_json(rep.master)},
                {"identities", identities_json(rep)},
                {"quasi_bialgebroid", identities_json(quasi)}};
  out.code = rep.ok() && quasi.ok() ? Pass : Fail;
  return out;
}

Outcome theta_master(const json& in) {
  ThetaStructure T = build_theta(io::read_courant(in));
  MasterResiduals m = master_residuals(T.ctx, T.theta);
  Outcome out;
  out.result = {{"theta", io::write(T.theta)},
                {"parts",
                 {{"phi", io::write(T.phi)}, {"mu", io::write(T.mu)}, {"gamma", io::write(T.gamma)},
                  {"psi", io::write(T.psi)}}},
                {"residuals", master_json(m)},
                {"theta_theta", io::write(m.total)}};
  out.code = m.all_zero() ? Pass : Fail;
  return out;
}

Outcome deform_dirac_cmd(const json& in, const RunConfig& cfg) {
  ThetaStructure T = build_theta(io::read_courant(in));
  if (!in.contains("omega1")) io::fail("/omega1", "missing");
  SuperElement w1 = io::read_form(T, in.at("omega1"), "/omega1");
  Outcome out;
  MasterResiduals m = master_residuals(T.ctx, T.theta);
  if (!m.all_zero()) {
    out.result = {{"master", master_json(m)}, {"error", "Theta does not satisfy the master equation"}};
    out.code = Fail;
    return out;
  }
  DiracDeformReport rep = deform_dirac(T, w1, cfg.order, cfg.degree_cap);
  json orders = json::array();
  for (const auto& c : rep.orders) {
    json j = {{"order", c.order},
              {"verdict", verdict_name(c.verdict)},
              {"constant_case", c.constant_case},
              {"R", io::write(c.R)},
              {"d_R_zero", c.d_R.is_zero()}};
    if (c.constant_case) j["h3_dim"] = c.h3_dim;
    if (c.solution) j["solution"] = io::write(*c.solution);
    if (!c.witness.empty()) j["witness"] = io::write(c.witness);
    orders.push_back(j);
  }
  json omega = json::array();
  for (const auto& w : rep.omega) omega.push_back(io::write(w));
  out.result = {{"omega", omega}, {"orders", orders}, {"reached", rep.reached}, {"obstructed", rep.obstructed}};
  out.code = rep.reached >= cfg.order && !rep.obstructed ? Pass : Fail;
  return out;
}

// ---- super-Darboux table ----

ConnectionData random_connection(const GenPtr& g, std::uint64_t seed, int degree) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-2, 2);
  const std::size_t m = g->base_dim(), k = g->pairs();
  std::vector<std::vector<int>> exps{{}};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& e : exps)
      for (int p = 0; p <= degree; ++p) {
        int tot = p;
        for (int x : e) tot += x;
        if (tot > degree) break;
        auto f = e;
        f.push_back(p);
        next.push_back(f);
      }
    exps = next;
  }
  ConnectionData c(g);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (const auto& e : exps) {
          int v = coef(rng);
          if (v == 0) continue;
          std::string s = std::to_string(v);
          for (std::size_t j = 0; j < m; ++j)
            if (e[j]) s += " q" + std::to_string(j + 1) + "^" + std::to_string(e[j]);
          c.gamma(i, a, b) += SuperElement::parse(g, s);
        }
  return c;
}

Outcome rothstein_check(std::size_t m, std::size_t k, const std::string& gamma, int degree, std::uint64_t seed) {
  auto g = GeneratorSet::rothstein(m, k);
  std::uint64_t s = seed;
  bool flat = gamma == "flat";
  if (!flat) {
    const std::string pre = "random-seed=";
    if (gamma.rfind(pre, 0) == 0) {
      try {
        s = std::stoull(gamma.substr(pre.size()));
      } catch (const std::exception&) {
        throw Error(Errc::Parse, "--gamma: bad seed in \"" + gamma + "\"");
      }
    } else if (gamma != "random") {
      throw Error(Errc::Parse, "--gamma: expected flat, random or random-seed=N");
    }
  }
  ConnectionData conn = flat ? ConnectionData::flat(g) : random_connection(g, s, degree);
  auto ctx = BracketContext::rothstein(conn);
  auto r = darboux_momenta(ctx);
  auto q = [&](std::size_t i) { return SuperElement::even_gen(g, g->q(i)); };
  auto lo = [&](std::size_t a) { return SuperElement::odd_gen(g, g->lower(a)); };
  auto up = [&](std::size_t a) { return SuperElement::odd_gen(g, g->upper(a)); };
  json table = json::array();
  bool all_zero = true;
  auto row = [&](const std::string& name, std::size_t i, std::size_t j, const SuperElement& residual) {
    all_zero &= residual.is_zero();
    table.push_back({{"pair", name}, {"i", i}, {"j", j}, {"residual_terms", terms(residual)}});
  };
  const SuperElement one = SuperElement::constant(g, 1), zero(g);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      row("{q,r}-delta", i, j, rothstein(ctx, q(i), r[j]) - (i == j ? one : zero));
      row("{q,q}", i, j, rothstein(ctx, q(i), q(j)));
      row("{r,r}", i, j, rothstein(ctx, r[i], r[j]));
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < k; ++a) {
      row("{r,a_lower}", i, a, rothstein(ctx, r[i], lo(a)));
      row("{r,a_upper}", i, a, rothstein(ctx, r[i], up(a)));
    }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      row("{a_lower,a_upper}-delta", a, b, rothstein(ctx, lo(a), up(b)) - (a == b ? one : zero));
      row("{a_lower,a_lower}", a, b, rothstein(ctx, lo(a), lo(b)));
      row("{a_upper,a_upper}", a, b, rothstein(ctx, up(a), up(b)));
    }
  json gam = json::array();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        if (!conn.gamma(i, a, b).is_zero()) gam.push_back({i, a, b, io::write(conn.gamma(i, a, b))});
  json mom = json::array();
  for (const auto& x : r) mom.push_back(io::write(x));
  Outcome out;
  out.result = {{"m", m},          {"k", k},          {"gamma", flat ? "flat" : "random"},
                {"gamma_seed", s}, {"connection", gam}, {"flat_connection", conn.is_flat()},
                {"momenta", mom},  {"table", table},  {"all_zero", all_zero}};
  out.code = all_zero ? Pass : Fail;
  return out;
}

// ---- implicit Hamiltonian systems ----

std::vector<double> parse_point(const std::string& s) {
  std::vector<double> x;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      x.push_back(std::stod(tok, &used));
      while (used < tok.size() && tok[used] == ' ') ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(Errc::Parse, "--x0: not a number: \"" + tok + "\"");
    }
  }
  return x;
}

int ihs_run(const json& in, const RunConfig& cfg, const std::string& x0s, std::size_t steps, double h,
            const std::string& hash) {
  io::IHSInput sys = io::read_ihs(in);
  VecD x0 = parse_point(x0s);
  if (x0.size() != sys.L.n()) throw Error(Errc::Parse, "--x0: expected " + std::to_string(sys.L.n()) + " coordinates");
  IHSystem s(sys.L, sys.H, h, sys.tol);
  Trajectory tr = integrate(s, x0, steps);
  if (cfg.format == "json") {
    json result = {{"steps", steps}, {"h", h}, {"max_drift", tr.max_drift}, {"max_gap", tr.max_gap},
                   {"final", tr.x.back()}, {"max_constraint", *std::max_element(tr.constraint.begin(), tr.constraint.end())}};
    render(std::cout, envelope(cfg, hash, result, Pass), "json");
    return Pass;
  }
  std::cout << "# dirdef " << DIRDEF_VERSION << " ihs-run input_sha256=" << hash << '\n';
  std::cout << 't';
  for (std::size_t i = 0; i < s.n(); ++i) std::cout << ",x" << i + 1;
  std::cout << ",H,constraint\n";
  std::cout.precision(17);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    std::cout << tr.t[k];
    for (double v : tr.x[k]) std::cout << ',' << v;
    std::cout << ',' << tr.H[k] << ',' << tr.constraint[k] << '\n';
  }
  std::cerr << "max |H - H0| = " << tr.max_drift << '\n';
  return Pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirdef: deformations of Lie and Dirac structures"};
  app.set_version_flag("--version", std::string("dirdef ") + DIRDEF_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--seed", cfg.seed, "seed for randomized sampling");
  app.add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);

  auto file_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "input JSON")->required();
    return sub;
  };
  auto* jac = file_cmd("check-jacobi", "check [mu,mu]_NR = 0 for structure constants");
  int degree = -1;
  auto* ce = file_cmd("ce-cohomology", "Chevalley-Eilenberg cohomology with adjoint coefficients");
  ce->add_option("--degree", degree, "single degree");
  auto* dl = file_cmd("deform-lie", "order-by-order Lie deformation");
  dl->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);
  auto* dir = file_cmd("dirac-linear", "linear Dirac structure summary");
  auto* cv = file_cmd("courant-verify", "Courant axioms via derived brackets");
  cv->add_option("--degree", cfg.degree_cap, "section degree in q");
  auto* tm = file_cmd("theta-master", "Theta and its master equation components");
  auto* dd = file_cmd("deform-dirac", "order-by-order Dirac deformation");
  dd->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);
  dd->add_option("--degree-cap", cfg.degree_cap, "polynomial degree cap");
  std::size_t m = 2, k = 2;
  std::string gamma = "flat";
  auto* rc = app.add_subcommand("rothstein-check", "super-Darboux bracket table");
  rc->add_option("--m", m, "base dimension")->check(CLI::Range(0, 6));
  rc->add_option("--k", k, "fiber rank")->check(CLI::Range(0, 6));
  rc->add_option("--gamma", gamma, "flat | random | random-seed=N");
  rc->add_option("--degree", cfg.degree_cap, "polynomial degree of the random connection");
  std::string x0;
  std::size_t steps = 1000;
  double h = 1e-3;
  auto* ih = app.add_subcommand("ihs-run", "integrate an implicit Hamiltonian system (CSV)");
  ih->set_help_flag("--help", "print this help message and exit");
  ih->add_option("--system", cfg.input, "system JSON")->required();
  ih->add_option("--x0", x0, "initial point, comma separated")->required();
  ih->add_option("--steps", steps, "number of RK4 steps");
  ih->add_option("--h", h, "step size")->check(CLI::PositiveNumber);
  ih->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc_ = app.exit(e);
    return rc_ == 0 ? 0 : InputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub == ih && cfg.format == "json" && ih->count("--format") == 0) cfg.format = "csv";
  std::string hash;
  try {
    json in;
    if (sub != rc) {
      std::string text = read_file(cfg.input);
      hash = sha256_hex(text);
      in = parse_json(text, cfg.input);
    } else {
      hash = sha256_hex("rothstein-check m=" + std::to_string(m) + " k=" + std::to_string(k) + " gamma=" + gamma +
                        " degree=" + std::to_string(cfg.degree_cap) + " seed=" + std::to_string(cfg.seed));
    }
    if (sub == ih) return ihs_run(in, cfg, x0, steps, h, hash);
    Outcome out;
    if (sub == jac) out = check_jacobi(in);
    else if (sub == ce) out = ce_cohomology(in, degree);
    else if (sub == dl) out = deform_lie_cmd(in, cfg.order);
    else if (sub == dir) out = dirac_linear_cmd(in);
    else if (sub == cv) out = courant_verify(in, cfg);
    else if (sub == tm) out = theta_master(in);
    else if (sub == dd) out = deform_dirac_cmd(in, cfg);
    else out = rothstein_check(m, k, gamma, cfg.degree_cap, cfg.seed);
    render(std::cout, envelope(cfg, hash, out.result, out.code), cfg.format);
    return out.code;
  } catch (const Error& e) {
    const Exit code = classify(e.code());
    std::cerr << "dirdef " << cfg.command << ": " << e.what() << '\n';
    if (cfg.format != "csv" && !hash.empty())
      render(std::cout, envelope(cfg, hash, json{{"error", e.what()}}, code), cfg.format);
    return code;
  }
}
