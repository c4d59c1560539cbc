#include <algorithm>
#include <cmath>
#include <sstream>

#include "openq/cli.hpp"
#include "openq/io.hpp"
#include "openq/kernels.hpp"
#include "openq/propagator.hpp"
#include "openq/rotations.hpp"
#include "openq/states.hpp"
#include "openq/symmetry.hpp"

namespace openq::cli {
namespace {

using nlohmann::json;

struct Context {
  const Config& config;
  const Options& opts;
  Outcome& out;
  json results = json::object();
  json checks = json::array();

  void check(const std::string& name, double value, double tolerance, bool pass) {
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}});
  }
};

std::string table(const std::vector<std::string>& columns,
                  const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  CsvWriter csv(os, columns);
  for (const auto& r : rows) csv.row(r);
  return os.str();
}

std::vector<double> with_origin(const std::vector<double>& schedule) {
  std::vector<double> t{0.0};
  for (double v : schedule)
    if (v > 0.0) t.push_back(v);
  return t;
}

Provenance provenance_of(const Config& c) {
  const auto& v = c.get("propagator", "provenance");
  if (v == "rederived") return Provenance::rederived;
  if (v == "paper_printed") return Provenance::paper_printed;
  throw Error(ErrorCode::config_parse, "propagator.provenance must be rederived or paper_printed");
}

AnalyticComponent component_of(const Config& c) {
  const cplx q(c.number("state", "q_re"), c.number("state", "q_im"));
  const double sigma = c.number("state", "sigma");
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "state.sigma must be > 0");
  return {WaveVector(q), GaussianPolynomial::gaussian(sigma, c.number("state", "center"),
                                                      c.number("state", "carrier"))};
}

// Least-squares slope of y against t.
double slope(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

double observed_order(double coarse, double fine) {
  return (coarse > 0.0 && fine > 0.0) ? std::log2(coarse / fine) : 0.0;
}

void evolve_component_pipeline(Context& ctx) {
  const auto p = params_of(ctx.config);
  const auto grid = xd_grid_of(ctx.config);
  const auto comp = component_of(ctx.config);
  const auto prov = provenance_of(ctx.config);
  const auto times = with_origin(parse_schedule(ctx.config.get("scenario", "schedule")));

  std::vector<std::vector<double>> rows;
  std::vector<double> fit_t, fit_w, fit_l2;
  for (double t : times) {
    const auto co = coefficients(p, comp.q, t, prov);
    const auto ev = evolve_component(comp, p, t, prov);
    const auto s = ev.chi.sample(grid);
    const cplx c0 = s[grid.origin_index()];
    const double l2 = kernels::squared_norm(s) * grid.spacing();
    rows.push_back({t, c0.real(), c0.imag(), std::abs(c0), l2, co.a.real(), co.a.imag(),
                    co.k.real(), co.k.imag(), co.width, co.shift.real(), co.shift.imag()});
    if (p.nu * t >= 10.0 && std::abs(c0) > 0.0 && l2 > 0.0) {
      fit_t.push_back(t);
      fit_w.push_back(std::log(std::abs(c0)));
      fit_l2.push_back(std::log(l2));
    }
  }
  ctx.out.files["component.csv"] =
      table({"t", "re_chi0", "im_chi0", "abs_chi0", "l2sq", "re_a", "im_a", "re_k", "im_k",
             "width", "re_shift", "im_shift"},
            rows);
  ctx.out.primary_csv = "component.csv";
  ctx.results["q"] = {comp.q.q.real(), comp.q.q.imag()};
  ctx.results["samples"] = rows.size();

  if (fit_t.size() >= 2 && p.nu > 0.0) {
    const double expect = longtime_weight_rate(p, comp.q).real();
    const double fitted = slope(fit_t, fit_w);
    const double fitted_l2 = slope(fit_t, fit_l2);
    ctx.results["expected_rate"] = expect;
    ctx.results["fitted_rate"] = fitted;
    ctx.results["fitted_l2_rate"] = fitted_l2;
    const double rel = std::abs(fitted - expect) / std::abs(expect);
    const double rel_l2 = std::abs(fitted_l2 - 2.0 * expect) / std::abs(2.0 * expect);
    ctx.check("weight_rate_rel_error", rel, 1e-2, rel < 1e-2);
    ctx.check("l2_rate_rel_error", rel_l2, 1e-2, rel_l2 < 1e-2);
  }
}

void oracle_pipeline(Context& ctx) {
  const auto p = params_of(ctx.config);
  const auto grid = xd_grid_of(ctx.config);
  const auto comp = component_of(ctx.config);
  const auto cfg = integrator_of(ctx.config);
  const auto times = with_origin(parse_schedule(ctx.config.get("scenario", "schedule")));
  const auto contour = oracle_contour(p, comp.q, grid);

  auto y = comp.sample_on(grid, contour.imag_offset);
  double t_prev = 0.0, worst = 0.0;
  std::vector<std::vector<double>> rows;
  for (double t : times) {
    if (t > t_prev) y = evolve_chi_numeric(y, p, comp.q, t - t_prev, contour, cfg);
    t_prev = t;
    const auto exact = evolve_component(comp, p, t).sample_on(grid, contour.imag_offset);
    const double ref = kernels::squared_norm(exact);
    const double rel = ref > 0.0 ? std::sqrt(kernels::squared_distance(y, exact) / ref) : 0.0;
    worst = std::max(worst, rel);
    rows.push_back({t, rel, edge_magnitude(y)});
  }
  ctx.out.files["oracle.csv"] = table({"t", "rel_l2", "edge_magnitude"}, rows);
  ctx.out.primary_csv = "oracle.csv";
  ctx.results["contour_imag_offset"] = contour.imag_offset;
  ctx.results["max_rel_l2"] = worst;
  ctx.check("max_rel_l2", worst, 1e-6, worst < 1e-6);
}

void residual_pipeline(Context& ctx) {
  const auto p = params_of(ctx.config);
  const auto base = xd_grid_of(ctx.config);
  const auto comp = component_of(ctx.config);
  auto cfg = integrator_of(ctx.config);
  const auto samples = parse_list("residual", "t_samples", ctx.config.get("residual", "t_samples"));
  const double h0 = ctx.config.number("residual", "h_t");
  const long levels = ctx.config.integer("residual", "levels");
  if (levels < 2) throw Error(ErrorCode::invalid_argument, "residual.levels must be >= 2");
  const bool with_printed = p.nu > 0.0;

  auto residual = [&](Provenance prov, const Grid& g, double h_t) {
    const AnalyticEvaluator chi = [&](double t, cplx z) {
      return evolve_component(comp, p, t, prov).chi(z);
    };
    return pde_residual(p, comp.q, chi, samples, oracle_contour(p, comp.q, g), cfg, h_t);
  };

  std::vector<std::vector<double>> rows;
  std::vector<double> time_res, space_res;
  const Grid fine(base.size() * 8, base.length());
  for (long l = 0; l < levels; ++l) {
    const double h_t = h0 / std::pow(2.0, static_cast<double>(l));
    const double r = residual(Provenance::rederived, fine, h_t);
    const double rp = with_printed ? residual(Provenance::paper_printed, fine, h_t) : NAN;
    time_res.push_back(r);
    rows.push_back({0.0, h_t, fine.spacing(), r, rp});
  }
  const double h_small = 1e-4;
  for (long l = 0; l < levels; ++l) {
    const std::size_t n = std::max<std::size_t>(16, (base.size() << l) / 4);
    const Grid g(n, base.length());
    const double r = residual(Provenance::rederived, g, h_small);
    const double rp = with_printed ? residual(Provenance::paper_printed, g, h_small) : NAN;
    space_res.push_back(r);
    rows.push_back({1.0, h_small, g.spacing(), r, rp});
  }
  ctx.out.files["residual.csv"] =
      table({"sweep", "h_t", "spacing", "residual", "residual_printed"}, rows);
  ctx.out.primary_csv = "residual.csv";
  const double ot = observed_order(time_res[time_res.size() - 2], time_res.back());
  const double os = observed_order(space_res[space_res.size() - 2], space_res.back());
  ctx.results["time_order"] = ot;
  ctx.results["space_order"] = os;
  ctx.check("time_order", ot, 2.0, ot >= 1.9);
  ctx.check("space_order", os, 4.0, os >= 3.8);
}

std::vector<TwoSidedShift> parse_shifts(const std::string& text) {
  std::vector<TwoSidedShift> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::config_parse, "symmetry.shifts entries are a_plus:a_minus");
    }
    const auto a = parse_list("symmetry", "shifts", item.substr(0, colon));
    const auto b = parse_list("symmetry", "shifts", item.substr(colon + 1));
    if (a.size() != 1 || b.size() != 1) {
      throw Error(ErrorCode::config_parse, "symmetry.shifts entries are a_plus:a_minus");
    }
    out.push_back({a[0], b[0]});
  }
  return out;
}

void symmetry_pipeline(Context& ctx) {
  const auto p = params_of(ctx.config);
  const auto x = x_grid_of(ctx.config);
  const auto xd = xd_grid_of(ctx.config);
  const auto times = parse_schedule(ctx.config.get("scenario", "schedule"));
  const auto shifts = parse_shifts(ctx.config.get("symmetry", "shifts"));
  const auto rho = gaussian_packet(x, xd, ctx.config.number("symmetry", "sigma"));
  const auto cfg = symmetry_integrator_config(ctx.config.number("symmetry", "dt"));
  const auto rep = scan_symmetry(p, rho, shifts, times, cfg, ctx.opts.threads);

  std::vector<std::vector<double>> rows;
  for (const auto& d : rep.defects) rows.push_back({d.a_plus, d.a_minus, d.t, d.value});
  ctx.out.files["symmetry.csv"] = table({"a_plus", "a_minus", "t", "value"}, rows);
  ctx.out.files["symmetry.json"] = rep.to_json(2) + "\n";
  ctx.out.primary_csv = "symmetry.csv";
  ctx.results["symmetry"] = json::parse(rep.to_json());
  ctx.check("classification_consistent", rep.consistent ? 1.0 : 0.0, rep.noise_floor,
            rep.consistent);
}

void rotations_pipeline(Context& ctx) {
  const double lmax = ctx.opts.lmax ? *ctx.opts.lmax : ctx.config.number("rotations", "lmax");
  const double two = 2.0 * lmax;
  if (!(lmax >= 0.0) || two != std::round(two) || two > 40.0) {
    throw Error(ErrorCode::invalid_label, "lmax must be a non-negative multiple of 1/2, at most 20");
  }
  const int two_lmax = static_cast<int>(two);
  std::ostringstream cg;
  write_cg_table(cg, two_lmax);
  ctx.out.files["cg_table.csv"] = cg.str();
  ctx.out.primary_csv = "cg_table.csv";

  const double orth = cg_orthogonality_defect(two_lmax);
  double basis_defect = 0.0;
  bool complete = true;
  json bases = json::array();
  for (int a = 0; a <= two_lmax; ++a) {
    for (int b = 0; b <= two_lmax; ++b) {
      const auto basis = tensor_operator_basis(a, b);
      basis_defect = std::max(basis_defect, basis.orthonormality_defect());
      complete = complete && basis.size() == static_cast<std::size_t>((a + 1) * (b + 1));
      bases.push_back(json::parse(basis_to_json(basis)));
    }
  }
  ctx.out.files["bases.json"] = bases.dump() + "\n";
  ctx.results["two_lmax"] = two_lmax;
  ctx.results["cg_orthogonality_defect"] = orth;
  ctx.results["basis_orthonormality_defect"] = basis_defect;
  ctx.check("cg_orthogonality", orth, 1e-12, orth < 1e-12);
  ctx.check("basis_orthonormality", basis_defect, 1e-12, basis_defect < 1e-12);
  ctx.check("basis_completeness", complete ? 0.0 : 1.0, 0.0, complete);
}

void evolve_state_pipeline(Context& ctx) {
  const auto p = params_of(ctx.config);
  const auto x = x_grid_of(ctx.config);
  const auto xd = xd_grid_of(ctx.config);
  const auto times = with_origin(parse_schedule(ctx.config.get("scenario", "schedule")));
  GaussianStateSpec spec;
  spec.delta_q = ctx.config.number("state", "delta_q");
  spec.coherence = ctx.config.number("state", "coherence");
  spec.carrier = ctx.config.number("state", "carrier");
  const auto s0 = gaussian_spectral_state(x, xd, spec);

  std::vector<std::vector<double>> rows;
  std::vector<DiagnosticsRow> diag;
  std::string snapshot;
  for (double t : times) {
    const auto rho = synthesize(evolve_state(s0, p, t, ctx.opts.threads));
    const cplx n = norm(rho);
    double width = NAN, mom = NAN;
    try {
      width = coherence_width(rho, 0.0);
    } catch (const Error&) {
    }
    try {
      mom = momentum_expectation(rho, p.hbar);
    } catch (const Error&) {
    }
    double edge = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      edge = std::max(edge, edge_magnitude({rho.values.data() + i * xd.size(), xd.size()}));
    }
    const double herm = rho.hermiticity_defect();
    rows.push_back({t, n.real(), n.imag(), mom, purity(rho), width, herm, edge});
    diag.push_back({t, n.real(), herm, edge});
    if (t == times.back()) {
      std::ostringstream os;
      write_snapshot(os, rho, p);
      snapshot = os.str();
    }
  }
  ctx.out.files["state.csv"] = table(
      {"t", "re_norm", "im_norm", "momentum", "purity", "coherence_width", "hermiticity", "edge"},
      rows);
  std::ostringstream d;
  write_diagnostics(d, diag);
  ctx.out.files["diagnostics.csv"] = d.str();
  ctx.out.files["snapshot.txt"] = snapshot;
  ctx.out.primary_csv = "state.csv";
  ctx.results["final_norm"] = {rows.back()[1], rows.back()[2]};
}

const std::map<std::string, void (*)(Context&)>& pipelines() {
  static const std::map<std::string, void (*)(Context&)> m{
      {"evolve-component", evolve_component_pipeline},
      {"component-decay", evolve_component_pipeline},
      {"oracle-compare", oracle_pipeline},
      {"oracle-diff", oracle_pipeline},
      {"residual-check", residual_pipeline},
      {"symmetry-scan", symmetry_pipeline},
      {"rotations-table", rotations_pipeline},
      {"evolve-state", evolve_state_pipeline},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"run",           "evolve-component", "evolve-state",
                                          "oracle-compare", "symmetry-scan",   "rotations-table",
                                          "residual-check"};
  return c;
}

Outcome execute(const std::string& command, const Config& config, const Options& opts) {
  Outcome out;
  Context ctx{config, opts, out};
  const std::string scenario = config.get("scenario", "name");
  const std::string pipeline = command == "run" ? scenario : command;
  out.report = {{"schema", kReportSchema}, {"version", kVersion},  {"command", command},
                {"scenario", scenario},    {"pipeline", pipeline}, {"config", config.to_json()}};
  try {
    const auto it = pipelines().find(pipeline);
    if (it == pipelines().end()) {
      throw Error(ErrorCode::config_parse, "unknown scenario '" + pipeline + "'");
    }
    it->second(ctx);
    out.report["results"] = ctx.results;
    out.report["checks"] = ctx.checks;
    bool pass = true;
    for (const auto& c : ctx.checks) pass = pass && c["pass"].get<bool>();
    out.report["status"] = pass ? "pass" : "fail";
    if (!pass) {
      out.exit_code = ExitCode::runtime_error;
      out.error = "one or more checks failed";
    }
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.code());
    out.error = e.what();
    out.report["status"] = "error";
    out.report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out.exit_code = ExitCode::runtime_error;
    out.error = e.what();
    out.report["status"] = "error";
    out.report["error"] = {{"code", "runtime"}, {"message", e.what()}};
  }
  json names = json::array();
  for (const auto& [name, body] : out.files) names.push_back(name);
  out.report["files"] = names;
  return out;
}

}  // namespace openq::cli
