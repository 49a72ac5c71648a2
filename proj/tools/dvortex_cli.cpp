// dvortex command-line front end.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dvortex/disk_model.hpp"
#include "dvortex/flat_model.hpp"
#include "dvortex/kernel_ff.hpp"
#include "dvortex/painleve.hpp"
#include "dvortex/parallel.hpp"
#include "dvortex/strip_model.hpp"
#include "dvortex/tau_engine.hpp"
#include "dvortex/version.hpp"

using namespace dvx;
using nlohmann::json;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_angle(const std::string& text) {
  static const std::regex re(R"(^\s*([+-]?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, re)) {
    double v = kPi;
    if (m[2].length() > 0) v *= std::stod(m[2]);
    if (m[3].length() > 0) v /= std::stod(m[3]);
    return m[1] == "-" ? -v : v;
  }
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse angle '" + text + "'");
  }
  if (pos != text.size()) throw ValidationError("cannot parse angle '" + text + "'");
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ValidationError("grid must be a:b:n, got '" + text + "'");
  double a, b;
  int n;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse grid '" + text + "'");
  }
  if (n < 1) throw ValidationError("grid needs at least one point");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return g;
}

cplx parse_point(const std::string& text) {
  auto c = text.find(',');
  try {
    if (c == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, c)), std::stod(text.substr(c + 1))};
  } catch (const std::exception&) {
    throw ValidationError("cannot parse point '" + text + "' (expected re,im)");
  }
}

// "m=1,E=0" -> mu = sqrt((m^2 - E^2) R^2 + 4 b^2) / 2
double mu_from(const std::string& text, double R, double b) {
  double m = NAN, E = 0.0;
  std::stringstream ss(text);
  std::string kv;
  while (std::getline(ss, kv, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--mu-from expects key=value pairs");
    std::string k = kv.substr(0, eq);
    double v = std::stod(kv.substr(eq + 1));
    if (k == "m")
      m = v;
    else if (k == "E")
      E = v;
    else
      throw ValidationError("--mu-from: unknown key '" + k + "'");
  }
  if (!(m > 0.0) || !(std::abs(E) < m)) throw ValidationError("--mu-from: need m > 0 and |E| < m");
  return 0.5 * std::sqrt((m * m - E * E) * R * R + 4.0 * b * b);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  void open(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw ValidationError("cannot open output '" + path + "'");
    os = &file;
  }
  std::ostream& operator()() { return *os; }
};

void header(std::ostream& os, const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
  os << "# dvortex " << DVORTEX_VERSION << "\n# command: " << cmd << "\n";
  for (auto& [k, v] : kv) os << "# " << k << " = " << v << "\n";
}

struct Common {
  double R = 1.0, m = 1.0, E = 0.0, b = 0.25, nu = -0.5, nu1 = -0.5, nu2 = -0.5, B = 0.0, mu = NAN;
  std::string theta = "-pi/2", mu_from_s, out, grid, s_grid, d_grid, z, zp, format = "csv";
  double d_seed = 9.0;
  unsigned threads = 0;
};

FFParams ff_params(const Common& c, double nu) {
  FFParams f;
  f.nu = nu;
  f.b = c.b;
  if (!c.mu_from_s.empty())
    f.mu = mu_from(c.mu_from_s, c.R, c.b);
  else if (std::isfinite(c.mu))
    f.mu = c.mu;
  else
    f.mu = 0.5 * std::sqrt((c.m * c.m - c.E * c.E) * c.R * c.R + 4.0 * c.b * c.b);
  f.theta = parse_angle(c.theta);
  try {
    f.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  return f;
}

ModelParams model_params(const Common& c) {
  ModelParams p{c.R, c.m, c.E, c.b, c.nu, parse_angle(c.theta)};
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  return p;
}

PlaneParams plane_params(const Common& c, double nu) {
  PlaneParams p{c.m, c.E, c.B, nu, parse_angle(c.theta)};
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  return p;
}

json mat_json(const Mat2& M) {
  json a = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j) row.push_back({{"re", M(i, j).real()}, {"im", M(i, j).imag()}});
    a.push_back(row);
  }
  return a;
}

constexpr double kTauTol = 1e-7;

int run_tau_scan(const Common& c) {
  FFParams f1 = ff_params(c, c.nu1), f2 = ff_params(c, c.nu2);
  std::vector<double> s = parse_grid(c.s_grid.empty() ? "0.9:0.998:25" : c.s_grid);
  for (double x : s)
    if (!(x > 0.0 && x < 1.0)) throw ValidationError("s must lie in (0, 1)");
  Output out;
  out.open(c.out);
  header(out(), "tau-scan", {{"nu1", fmt(f1.nu)}, {"nu2", fmt(f2.nu)}, {"b", fmt(f1.b)}, {"mu", fmt(f1.mu)},
                             {"theta", fmt(f1.theta)}, {"s", c.s_grid}, {"method", "pole-lattice determinant"},
                             {"n_nodes", "pole levels per side"}, {"cutoff", "height of the top pole level"}});
  out() << "s,l_s,tau,one_minus_tau,dlntau_ds,trace1,n_nodes,cutoff,est_err\n";
  TauEngine eng(f1, f2);
  TauCurve cv = eng.curve(s);
  std::string bad;
  for (auto& p : cv.points) {
    out() << fmt(p.s) << "," << fmt(p.l_s) << "," << fmt(p.tau) << "," << fmt(1.0 - p.tau) << "," << fmt(p.dlntau_ds)
          << "," << fmt(p.trace1) << "," << p.n_levels << "," << fmt(p.cutoff) << "," << fmt(p.est_err) << "\n";
    if (!(p.est_err <= kTauTol)) bad += (bad.empty() ? "" : " ") + fmt(p.s);
  }
  if (!bad.empty()) {
    out() << "# INCOMPLETE: level truncation error above " << fmt(kTauTol) << " at s = " << bad << "\n";
    std::cerr << "non-convergence: tau-scan truncation error above tolerance\n";
    return 3;
  }
  return 0;
}

int run_tau_plane(const Common& c) {
  PlaneParams p1 = plane_params(c, c.nu1), p2 = plane_params(c, c.nu2);
  std::vector<double> d = parse_grid(c.d_grid.empty() ? "0.5:4:8" : c.d_grid);
  Output out;
  out.open(c.out);
  header(out(), "tau-plane", {{"nu1", fmt(p1.nu)}, {"nu2", fmt(p2.nu)}, {"m", fmt(p1.m)}, {"E", fmt(p1.E)},
                              {"B", fmt(p1.B)}, {"theta", fmt(p1.theta)}, {"t", c.d_grid},
                              {"t_meaning", "distance between the vortices"}});
  out() << "t,tau,one_minus_tau,dlntau_dt\n";
  std::vector<PlaneTauPoint> pts(d.size());
  parallel_for(d.size(), [&](std::size_t i) { pts[i] = tau_plane(d[i], p1, p2); });
  for (auto& p : pts)
    out() << fmt(p.d) << "," << fmt(p.tau) << "," << fmt(1.0 - p.tau) << "," << fmt(p.dlntau_dd) << "\n";
  return 0;
}

int run_kernel_check(const Common& c) {
  FFParams f = ff_params(c, c.nu);
  std::vector<double> g = parse_grid(c.grid.empty() ? "-2:2:5" : c.grid);
  Output out;
  out.open(c.out);
  header(out(), "kernel-check", {{"nu", fmt(f.nu)}, {"b", fmt(f.b)}, {"mu", fmt(f.mu)}, {"grid", c.grid}});
  out() << "p,q,f_triple,f_series,abs_diff,rel_diff\n";
  const std::size_t n = g.size();
  std::vector<double> tr(n * n), se(n * n);
  parallel_for(n * n, [&](std::size_t k) {
    double p = g[k / n], q = g[k % n];
    tr[k] = f_nu_triple(p, q, f).value;
    se[k] = f_nu_series(p, q, f);
  });
  double mabs = 0, mrel = 0;
  for (std::size_t k = 0; k < n * n; ++k) {
    double a = std::abs(tr[k] - se[k]), r = a / std::abs(se[k]);
    mabs = std::max(mabs, a);
    mrel = std::max(mrel, r);
    out() << fmt(g[k / n]) << "," << fmt(g[k % n]) << "," << fmt(tr[k]) << "," << fmt(se[k]) << "," << fmt(a) << ","
          << fmt(r) << "\n";
  }
  out() << "# max_abs_diff = " << fmt(mabs) << "\n# max_rel_diff = " << fmt(mrel) << "\n";
  return 0;
}

int run_pvi_verify(const Common& c) {
  FFParams f1 = ff_params(c, c.nu1), f2 = ff_params(c, c.nu2);
  std::vector<double> s = parse_grid(c.s_grid.empty() ? "0.9:0.99:10" : c.s_grid);
  Output out;
  out.open(c.out);
  header(out(), "pvi-verify", {{"nu1", fmt(f1.nu)}, {"nu2", fmt(f2.nu)}, {"b", fmt(f1.b)}, {"mu", fmt(f1.mu)},
                               {"theta", fmt(f1.theta)}, {"s", c.s_grid}, {"s0", "1 - 1e-3"}});
  try {
    PVICheck chk = pvi_sigma_check(f1, f2, s);
    out() << "# A = " << fmt(chk.A) << "\n";
    out() << "s,w,wprime,sigma,dlntau_ds,rel_err\n";
    double mx = 0;
    for (auto& r : chk.rows) {
      out() << fmt(r.s) << "," << fmt(r.w) << "," << fmt(r.wprime) << "," << fmt(r.sigma) << "," << fmt(r.dlntau_ds)
            << "," << fmt(r.rel_err) << "\n";
      mx = std::max(mx, std::abs(r.rel_err));
    }
    out() << "# max_rel_err = " << fmt(mx) << "\n";
  } catch (const SingularityError& e) {
    out() << "# INCOMPLETE: " << e.what() << " at s = " << fmt(e.last.s) << ", w = " << fmt(e.last.w) << "\n";
    return 3;
  }
  return 0;
}

int run_pv_verify(const Common& c) {
  PlaneParams p1 = plane_params(c, c.nu1), p2 = plane_params(c, c.nu2);
  std::vector<double> d = parse_grid(c.d_grid.empty() ? "1.4142135623730951:4:12" : c.d_grid);
  Output out;
  out.open(c.out);
  header(out(), "pv-verify", {{"nu1", fmt(p1.nu)}, {"nu2", fmt(p2.nu)}, {"m", fmt(p1.m)}, {"E", fmt(p1.E)},
                              {"theta", fmt(p1.theta)}, {"d", c.d_grid}, {"d_seed", fmt(c.d_seed)}});
  try {
    PVCheck chk = pv_sigma_check(p1, p2, d, c.d_seed);
    out() << "# C2 = " << fmt(chk.C2) << "\n";
    out() << "d,t,y,yprime,sigma,t_dlntau_dt,rel_err\n";
    double mx = 0;
    for (auto& r : chk.rows) {
      out() << fmt(r.d) << "," << fmt(r.t) << "," << fmt(r.y) << "," << fmt(r.yprime) << "," << fmt(r.sigma) << ","
            << fmt(r.t_dlntau_dt) << "," << fmt(r.rel_err) << "\n";
      mx = std::max(mx, r.rel_err);
    }
    out() << "# max_rel_err = " << fmt(mx) << "\n";
  } catch (const SingularityError& e) {
    out() << "# INCOMPLETE: " << e.what() << " at t = " << fmt(e.last.s) << "\n";
    return 3;
  }
  return 0;
}

int run_spectrum(const Common& c) {
  ModelParams p = model_params(c);
  SpectrumReport r = spectrum(p);
  json j;
  j["version"] = DVORTEX_VERSION;
  j["params"] = {{"R", p.R}, {"m", p.m}, {"E", p.E}, {"b", p.b}, {"nu", p.nu}, {"theta", p.theta}};
  j["continuum_edge"] = r.continuum_edge;
  j["landau"] = json::array();
  for (auto& l : r.landau) j["landau"].push_back({{"n", l.n}, {"E2", l.E2}, {"l0", l.l0}});
  j["vortex_levels"] = json::array();
  for (auto& v : r.vortex_levels)
    j["vortex_levels"].push_back({{"n", v.n}, {"E2", v.E2}, {"b_sign", v.b_sign}, {"l0", v.l0}});
  j["l0_roots"] = json::array();
  for (auto& x : r.l0_roots) j["l0_roots"].push_back({{"E", x.E}, {"residual", x.residual}});
  Output out;
  out.open(c.out);
  out() << j.dump(2) << "\n";
  return 0;
}

int run_green_eval(const Common& c) {
  ModelParams p = model_params(c);
  if (c.z.empty() || c.zp.empty()) throw ValidationError("green-eval needs --z and --zp");
  cplx z = parse_point(c.z), zp = parse_point(c.zp);
  if (!(std::abs(z) > 0 && std::abs(z) < 1 && std::abs(zp) > 0 && std::abs(zp) < 1))
    throw ValidationError("points must satisfy 0 < |z| < 1");
  DerivedParams d = derive(p);
  json j;
  j["version"] = DVORTEX_VERSION;
  j["params"] = {{"R", p.R}, {"m", p.m}, {"E", p.E}, {"b", p.b}, {"nu", p.nu}, {"theta", p.theta}};
  j["z"] = {z.real(), z.imag()};
  j["zp"] = {zp.real(), zp.imag()};
  j["mu"] = d.mu;
  j["G"] = mat_json(green_disk(z, zp, p));
  const cplx ph = vortex_phase(z, zp, p.nu);
  j["vortex_phase"] = {{"re", ph.real()}, {"im", ph.imag()}};
  j["G0"] = mat_json(green_disk_free(z, zp, d));
  j["Delta"] = mat_json(green_disk_delta(z, zp, p));
  Output out;
  out.open(c.out);
  out() << j.dump(2) << "\n";
  return 0;
}

int run_selftest(const Common& c) {
  Output out;
  out.open(c.out);
  int fails = 0;
  auto report = [&](const char* name, double err, double tol) {
    bool ok = err <= tol;
    if (!ok) ++fails;
    out() << (ok ? "PASS " : "FAIL ") << name << " err=" << fmt(err) << " tol=" << fmt(tol) << "\n";
  };
  ModelParams mp;
  DerivedParams d = derive(mp);
  {
    auto w = radial_basis(0.3, 0.5, d);
    report("disk wronskian", std::abs(det2(w.wI, *w.wII_plus) / radial_wronskian(0.5, d) - 1.0), 1e-9);
  }
  {
    Spinor a = phi(1, 0.7, 0.2, d), b = phi(-1, 0.7, 0.2, d);
    report("strip determinant", std::abs(det2(a, b) + kI * std::cos(0.4)), 1e-8);
  }
  {
    PlaneParams pp{1.0, 0.0, 0.5, -0.5, -kPi / 2};
    report("plane partial-wave determinant",
           std::abs(det2(flat_partial_wave(1, 0.7, 0.3, pp), flat_partial_wave(-1, 0.7, 0.3, pp)) + kI), 1e-8);
  }
  {
    cplx z = 0.4, zp = std::polar(0.2, 0.3);
    report("G0 closed form vs contour",
           (green_disk_free(z, zp, d) - green_disk_free_contour(z, zp, d, 1)).cwiseAbs().maxCoeff(), 1e-7);
  }
  {
    FFParams f;
    report("rho(0)", std::abs(rho(0.0, f.mu) - std::exp(2 * f.mu * std::log(2.0) + std::lgamma(1 + 2 * f.mu) -
                                                           2 * std::lgamma(f.mu + 0.5))),
           1e-10);
  }
  return fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  // "--theta -pi/2" would otherwise be read as a short flag
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i + 1 < args.size(); ++i)
    if (args[i] == "--theta" && !args[i + 1].empty() && args[i + 1][0] == '-') {
      args[i] += "=" + args[i + 1];
      args.erase(args.begin() + i + 1);
    }
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  argc = int(cargs.size());
  argv = cargs.data();
  CLI::App app{"dvortex: two-vortex Dirac tau functions on the Poincare disk"};
  app.set_version_flag("--version", std::string("dvortex ") + DVORTEX_VERSION);
  app.set_config("--config", "", "TOML/INI configuration file (flags override file values)");
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--threads", c.threads, "worker threads (0: hardware concurrency)");

  auto add_model = [&](CLI::App* s) {
    s->add_option("--R", c.R, "disk radius");
    s->add_option("--m", c.m, "mass");
    s->add_option("--E", c.E, "energy");
    s->add_option("--b", c.b, "dimensionless field B R^2 / 4");
    s->add_option("--theta", c.theta, "self-adjoint extension angle (e.g. -pi/2)");
    s->add_option("-o,--out", c.out, "output file (default stdout)");
  };
  auto add_mu = [&](CLI::App* s) {
    s->add_option("--mu", c.mu, "mu directly");
    s->add_option("--mu-from", c.mu_from_s, "mu from m=..,E=.. (uses --R and --b)");
  };

  auto* scan = app.add_subcommand("tau-scan", "tau(s) on the disk");
  add_model(scan);
  add_mu(scan);
  scan->add_option("--nu1", c.nu1);
  scan->add_option("--nu2", c.nu2);
  scan->add_option("--s", c.s_grid, "grid a:b:n");

  auto* plane = app.add_subcommand("tau-plane", "flat-space tau(t), B = 0");
  add_model(plane);
  plane->add_option("--B", c.B, "magnetic field");
  plane->add_option("--nu1", c.nu1);
  plane->add_option("--nu2", c.nu2);
  plane->add_option("--t", c.d_grid, "distance grid a:b:n");

  auto* kc = app.add_subcommand("kernel-check", "triple integral vs series for F_nu");
  add_model(kc);
  add_mu(kc);
  kc->add_option("--nu", c.nu);
  kc->add_option("--grid", c.grid, "p, q grid a:b:n");

  auto* pvi = app.add_subcommand("pvi-verify", "PVI sigma form vs d ln tau/ds");
  add_model(pvi);
  add_mu(pvi);
  pvi->add_option("--nu1", c.nu1);
  pvi->add_option("--nu2", c.nu2);
  pvi->add_option("--s", c.s_grid, "grid a:b:n");

  auto* pv = app.add_subcommand("pv-verify", "PV sigma form vs t d ln tau_plane/dt");
  add_model(pv);
  pv->add_option("--nu1", c.nu1);
  pv->add_option("--nu2", c.nu2);
  pv->add_option("--t", c.d_grid, "distance grid a:b:n");
  pv->add_option("--seed-distance", c.d_seed, "distance where the Bessel seed is matched");

  auto* spec = app.add_subcommand("spectrum", "bound-state spectrum (JSON)");
  add_model(spec);
  spec->add_option("--nu", c.nu);

  auto* ge = app.add_subcommand("green-eval", "one-vortex Green function at a point pair (JSON)");
  add_model(ge);
  ge->add_option("--nu", c.nu);
  ge->add_option("--z", c.z, "re,im");
  ge->add_option("--zp", c.zp, "re,im");

  auto* st = app.add_subcommand("selftest", "quick identity checks");
  st->add_option("-o,--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  set_num_threads(c.threads);
  try {
    if (*scan) return run_tau_scan(c);
    if (*plane) return run_tau_plane(c);
    if (*kc) return run_kernel_check(c);
    if (*pvi) return run_pvi_verify(c);
    if (*pv) return run_pv_verify(c);
    if (*spec) return run_spectrum(c);
    if (*ge) return run_green_eval(c);
    if (*st) return run_selftest(c);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const SingularityError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
