#include "lelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lelab/classifier.hpp"
#include "lelab/error.hpp"
#include "lelab/radial.hpp"
#include "lelab/serialize.hpp"
#include "lelab/verify.hpp"

namespace lelab::cli {

namespace {

enum class Format { Human, Json, Csv };

struct Output {
  bool json = false;
  bool csv = false;
  std::string path;
  bool force = false;

  Format format(Format fallback) const {
    if (json) return Format::Json;
    if (csv) return Format::Csv;
    return fallback;
  }
};

void add_output(CLI::App* cmd, Output& o, bool csv_allowed) {
  auto* j = cmd->add_flag("--json", o.json, "JSON output");
  if (csv_allowed) {
    auto* c = cmd->add_flag("--csv", o.csv, "CSV output");
    j->excludes(c);
  }
  cmd->add_option("-o,--out", o.path, "write output to this file instead of stdout");
  cmd->add_flag("--force", o.force, "overwrite an existing output file");
}

struct Triple {
  double p = 0, q = 0, d = 0;
  SystemParams params() const { return SystemParams(p, q, d); }
};

void add_triple(CLI::App* cmd, Triple& t) {
  cmd->add_option("-p", t.p, "exponent p (p >= q)")->required();
  cmd->add_option("-q", t.q, "exponent q (q >= 1)")->required();
  cmd->add_option("-d", t.d, "dimension d (d >= 3)")->required();
}

// How a verification obtains its trajectory: a fixed v0 or a shooting bracket.
struct Trajectory {
  std::optional<double> v0;
  std::vector<double> bracket;
  double rel_tol = 1e-12;
};

void add_trajectory(CLI::App* cmd, Trajectory& t) {
  auto* v = cmd->add_option("--v0", t.v0, "v(0) with u(0) = 1");
  auto* b = cmd->add_option("--bracket", t.bracket, "v0 bracket for separatrix shooting")->expected(2);
  v->excludes(b);
  cmd->add_option("--rel-tol", t.rel_tol, "integrator relative tolerance")->capture_default_str();
}

RadialSolution trajectory(const SystemParams& params, const Trajectory& t, double r_max) {
  if (!t.bracket.empty()) {
    ShootOptions opt;
    opt.rel_tol = t.rel_tol;
    opt.r_output = r_max;
    return shoot_separatrix(params, {t.bracket[0], t.bracket[1]}, opt).solution;
  }
  if (!t.v0) throw Error(ErrorCode::InvalidInput, "one of --v0 or --bracket is required");
  return integrate(params, *t.v0, r_max, t.rel_tol);
}

void emit(const std::string& text, const Output& o, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  if (std::filesystem::exists(o.path) && !o.force) {
    throw Error(ErrorCode::OutputExists, "refusing to overwrite " + o.path + " (use --force)");
  }
  std::ofstream f(o.path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot open " + o.path + " for writing");
  f << text;
  if (!f) throw Error(ErrorCode::InvalidInput, "failed writing " + o.path);
}

std::string flag_text(const std::optional<bool>& b) {
  if (!b) return "n/a";
  return *b ? "true" : "false";
}

std::string human(const RegimeReport& r) {
  std::ostringstream s;
  const auto& c = r.constants;
  s << "params: p=" << format_number(r.params.p()) << " q=" << format_number(r.params.q())
    << " d=" << format_number(r.params.d()) << '\n';
  s << "criticality: " << to_string(r.criticality) << '\n';
  s << "alpha: " << format_number(c.alpha) << "\nbeta: " << format_number(c.beta) << "\ngamma: " << format_number(c.gamma)
    << "\nH: " << format_number(c.H) << "\nlambda: " << format_number(c.lambda) << "\nmu: " << format_number(c.mu) << '\n';
  s << "a_coef: " << (c.a_coef ? format_number(*c.a_coef) : "undefined") << '\n';
  s << "b_coef: " << (c.b_coef ? format_number(*c.b_coef) : "undefined") << '\n';
  s << "jl_margin: " << format_number(r.jl_margin) << "\nx0_plain: " << format_number(r.x0_plain)
    << "\nx0_jl: " << format_number(r.x0_jl) << '\n';
  s << "on_or_above_jl: " << (r.on_or_above_jl ? "true" : "false") << '\n';
  s << "thm_d_le_10_applies: " << flag_text(r.thm_d_le_10_applies) << '\n';
  s << "thm_below_jl_applies: " << flag_text(r.thm_below_jl_applies) << '\n';
  s << "thm_quartic_applies: " << flag_text(r.thm_quartic_applies) << '\n';
  s << "thm_stable_radial_exists: " << flag_text(r.thm_stable_radial_exists) << '\n';
  for (const auto& n : r.notes) s << "note: " << n << '\n';
  return s.str();
}

std::string human(const VerificationReport& r) {
  std::ostringstream s;
  s << "check: " << r.check << '\n';
  s << "params: p=" << format_number(r.params.p()) << " q=" << format_number(r.params.q())
    << " d=" << format_number(r.params.d()) << '\n';
  s << "lhs: " << format_number(r.lhs) << "\nrhs: " << format_number(r.rhs) << "\nresidual: " << format_number(r.residual)
    << "\ntolerance: " << format_number(r.tolerance) << "\npassed: " << (r.passed ? "true" : "false")
    << "\ndetails: " << r.details << '\n';
  return s.str();
}

void write_fit(JsonWriter& w, const DecayFit& f) {
  w.begin_object();
  w.key("exponent").value(f.exponent).key("amplitude").value(f.amplitude);
  w.key("r_lo").value(f.r_lo).key("r_hi").value(f.r_hi).key("residual").value(f.residual);
  w.key("classification").value(to_string(f.classification));
  w.end_object();
}

std::optional<std::pair<DecayFit, DecayFit>> try_fit(const RadialSolution& sol, double lo, double hi) {
  if (sol.status().kind != TerminationKind::Completed || !sol.covers(lo, hi) || !(hi >= 4.0 * lo)) return std::nullopt;
  return fit_decay(sol, lo, hi);
}

std::string trajectory_text(const RadialSolution& sol, std::optional<int> iterations, Format fmt, double fit_lo,
                            double fit_hi) {
  if (fmt == Format::Csv) {
    std::ostringstream s;
    write_radial_csv(s, sol);
    return s.str();
  }
  const auto fit = try_fit(sol, fit_lo, fit_hi);
  if (fmt == Format::Json) {
    JsonWriter w;
    w.begin_object();
    w.key("params");
    write_params(w, sol.params());
    w.key("u0").value(sol.u0()).key("v0").value(sol.v0());
    w.key("status").value(to_string(sol.status().kind)).key("r_end").value(sol.status().r);
    w.key("samples").integer(static_cast<long long>(sol.samples().size()));
    if (iterations) w.key("iterations").integer(*iterations);
    if (fit) {
      w.key("decay_u");
      write_fit(w, fit->first);
      w.key("decay_v");
      write_fit(w, fit->second);
    }
    w.end_object();
    return w.str() + "\n";
  }
  std::ostringstream s;
  s << "params: p=" << format_number(sol.params().p()) << " q=" << format_number(sol.params().q())
    << " d=" << format_number(sol.params().d()) << '\n';
  s << "u0: " << format_number(sol.u0()) << "\nv0: " << format_number(sol.v0()) << '\n';
  s << "status: " << to_string(sol.status().kind) << " at r=" << format_number(sol.status().r) << '\n';
  s << "samples: " << sol.samples().size() << '\n';
  if (iterations) s << "iterations: " << *iterations << '\n';
  if (fit) {
    s << "decay_u: exponent=" << format_number(fit->first.exponent) << " " << to_string(fit->first.classification) << '\n';
    s << "decay_v: exponent=" << format_number(fit->second.exponent) << " " << to_string(fit->second.classification)
      << '\n';
  }
  return s.str();
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw Error(ErrorCode::InvalidInput, "need 0 < r_lo < r_hi and n >= 2");
  std::vector<double> out;
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo * std::exp(step * i));
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Lane-Emden system numerical lab", "lelab"};
  app.require_subcommand(1);

  Triple t;
  Output o;
  Trajectory traj;

  auto* classify_cmd = app.add_subcommand("classify", "regime report for one (p, q, d)");
  add_triple(classify_cmd, t);
  add_output(classify_cmd, o, true);

  std::string curve_kind = "jl";
  double curve_d = 0, p_min = 1.0, p_max = 10.0, q_min = 1.0, q_max = 10.0;
  int n = 50;
  auto* curve_cmd = app.add_subcommand("curve", "trace the Joseph-Lundgren curve or the critical hyperbola");
  curve_cmd->add_option("--curve", curve_kind, "jl or hyperbola")
      ->check(CLI::IsMember({"jl", "hyperbola"}))
      ->capture_default_str();
  curve_cmd->add_option("-d", curve_d, "dimension")->required();
  curve_cmd->add_option("--p-min", p_min)->capture_default_str();
  curve_cmd->add_option("--p-max", p_max)->capture_default_str();
  curve_cmd->add_option("-n", n, "number of p samples")->capture_default_str();
  add_output(curve_cmd, o, true);

  int resolution = 50;
  auto* grid_cmd = app.add_subcommand("grid", "classify a (p, q) lattice at fixed d");
  grid_cmd->add_option("-d", curve_d, "dimension")->required();
  grid_cmd->add_option("--p-min", p_min)->capture_default_str();
  grid_cmd->add_option("--p-max", p_max)->capture_default_str();
  grid_cmd->add_option("--q-min", q_min)->capture_default_str();
  grid_cmd->add_option("--q-max", q_max)->capture_default_str();
  grid_cmd->add_option("--resolution", resolution, "lattice points per axis")->capture_default_str();
  add_output(grid_cmd, o, true);

  double r_max = 1e3, fit_lo = 10.0, fit_hi = 100.0;
  auto* shoot_cmd = app.add_subcommand("shoot", "integrate one radial trajectory");
  add_triple(shoot_cmd, t);
  add_trajectory(shoot_cmd, traj);
  shoot_cmd->add_option("--r-max", r_max)->capture_default_str();
  shoot_cmd->add_option("--fit-lo", fit_lo, "decay fit window start")->capture_default_str();
  shoot_cmd->add_option("--fit-hi", fit_hi, "decay fit window end")->capture_default_str();
  add_output(shoot_cmd, o, true);

  std::vector<double> gs_bracket{0.5, 2.0};
  auto* gs_cmd = app.add_subcommand("ground-state", "shoot the ground state on the critical hyperbola");
  add_triple(gs_cmd, t);
  gs_cmd->add_option("--bracket", gs_bracket, "v0 bracket")->expected(2)->capture_default_str();
  gs_cmd->add_option("--rel-tol", traj.rel_tol)->capture_default_str();
  gs_cmd->add_option("--r-max", r_max)->capture_default_str();
  gs_cmd->add_option("--fit-lo", fit_lo)->capture_default_str();
  gs_cmd->add_option("--fit-hi", fit_hi)->capture_default_str();
  add_output(gs_cmd, o, true);

  auto* verify_cmd = app.add_subcommand("verify", "numerical checks");
  verify_cmd->require_subcommand(1);

  std::vector<double> radii{0.5, 1.0, 2.0};
  double a_scale = 1.0;
  auto* v_singular = verify_cmd->add_subcommand("singular", "PDE residual of the singular pair");
  add_triple(v_singular, t);
  v_singular->add_option("--radii", radii)->capture_default_str();
  v_singular->add_option("--a-scale", a_scale, "multiply the amplitude a")->capture_default_str();
  add_output(v_singular, o, false);

  auto* v_comparison = verify_cmd->add_subcommand("comparison", "v^{p+1}/(p+1) <= u^{q+1}/(q+1) along a trajectory");
  add_triple(v_comparison, t);
  add_trajectory(v_comparison, traj);
  v_comparison->add_option("--r-max", r_max)->capture_default_str();
  add_output(v_comparison, o, false);

  double R = 0;
  std::optional<double> a1;
  auto* v_pohozaev = verify_cmd->add_subcommand("pohozaev", "Pohozaev identity on [0, R]");
  add_triple(v_pohozaev, t);
  add_trajectory(v_pohozaev, traj);
  v_pohozaev->add_option("--R", R, "ball radius")->required();
  v_pohozaev->add_option("--a1", a1, "weight a1 (default d/(p+1)); a2 = d - 2 - a1");
  add_output(v_pohozaev, o, false);

  std::optional<double> s_exp;
  double r_lo = 10.0, r_hi = 1e3;
  int n_radii = 8;
  auto* v_energy = verify_cmd->add_subcommand("energy", "growth rate of the ball integral of u^s");
  add_triple(v_energy, t);
  add_trajectory(v_energy, traj);
  v_energy->add_option("--s", s_exp, "moment exponent (default q)");
  v_energy->add_option("--r-lo", r_lo)->capture_default_str();
  v_energy->add_option("--r-hi", r_hi)->capture_default_str();
  v_energy->add_option("--n-radii", n_radii)->capture_default_str();
  add_output(v_energy, o, false);

  int n_cutoffs = 20;
  auto* v_rayleigh = verify_cmd->add_subcommand("rayleigh", "stability quotient of the singular pair");
  add_triple(v_rayleigh, t);
  v_rayleigh->add_option("--n-cutoffs", n_cutoffs)->capture_default_str();
  add_output(v_rayleigh, o, false);

  int l_max = 10;
  auto* v_spherical = verify_cmd->add_subcommand("spherical", "spherical-mode stability margins");
  add_triple(v_spherical, t);
  v_spherical->add_option("--l-max", l_max)->capture_default_str();
  add_output(v_spherical, o, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  }

  auto finish_report = [&](const VerificationReport& rep) {
    emit(o.format(Format::Human) == Format::Json ? to_json(rep) + "\n" : human(rep), o, out);
    return rep.passed ? kExitOk : kExitFailedCheck;
  };

  if (*classify_cmd) {
    const auto rep = classify(t.params());
    switch (o.format(Format::Human)) {
      case Format::Json: emit(to_json(rep) + "\n", o, out); break;
      case Format::Csv: {
        std::ostringstream s;
        write_grid_csv(s, std::span<const RegimeReport>(&rep, 1));
        emit(s.str(), o, out);
        break;
      }
      case Format::Human: emit(human(rep), o, out); break;
    }
    return kExitOk;
  }
  if (*curve_cmd) {
    const auto trace = curve_kind == "jl" ? trace_jl_curve(curve_d, p_min, p_max, n)
                                          : trace_hyperbola(curve_d, p_min, p_max, n);
    if (o.format(Format::Csv) == Format::Json) {
      emit(to_json(trace) + "\n", o, out);
    } else {
      std::ostringstream s;
      write_curve_csv(s, trace);
      emit(s.str(), o, out);
    }
    return kExitOk;
  }
  if (*grid_cmd) {
    const auto rows = grid_classify(curve_d, {p_min, p_max}, {q_min, q_max}, resolution);
    if (o.format(Format::Csv) == Format::Json) {
      std::string text = "[";
      for (std::size_t i = 0; i < rows.size(); ++i) text += (i ? "," : "") + to_json(rows[i]);
      emit(text + "]\n", o, out);
    } else {
      std::ostringstream s;
      write_grid_csv(s, rows);
      emit(s.str(), o, out);
    }
    return kExitOk;
  }
  if (*shoot_cmd) {
    const auto sol = trajectory(t.params(), traj, r_max);
    emit(trajectory_text(sol, std::nullopt, o.format(Format::Human), fit_lo, fit_hi), o, out);
    return kExitOk;
  }
  if (*gs_cmd) {
    ShootOptions opt;
    opt.rel_tol = traj.rel_tol;
    opt.r_output = r_max;
    const auto res = shoot_ground_state(t.params(), {gs_bracket[0], gs_bracket[1]}, opt);
    emit(trajectory_text(res.solution, res.iterations, o.format(Format::Human), fit_lo, fit_hi), o, out);
    return kExitOk;
  }
  if (*v_singular) {
    const auto params = t.params();
    auto amp = singular_amplitudes(params);
    amp.a *= a_scale;
    return finish_report(check_singular_residual(params, amp, radii));
  }
  if (*v_comparison) {
    return finish_report(check_comparison(trajectory(t.params(), traj, r_max)));
  }
  if (*v_pohozaev) {
    const auto params = t.params();
    const auto w = PohozaevWeights::from_a1(params, a1.value_or(params.d() / (params.p() + 1.0)));
    return finish_report(check_pohozaev(trajectory(params, traj, R), R, w));
  }
  if (*v_energy) {
    const auto params = t.params();
    const auto grid = log_spaced(r_lo, r_hi, n_radii);
    return finish_report(check_energy_growth(trajectory(params, traj, r_hi), s_exp.value_or(params.q()), grid));
  }
  if (*v_rayleigh) return finish_report(rayleigh_stability_margin(t.params(), n_cutoffs));
  if (*v_spherical) return finish_report(spherical_mode_margins(t.params(), l_max));
  throw Error(ErrorCode::InvalidInput, "no command given");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out);
  } catch (const CLI::ParseError& e) {
    err << "lelab: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "lelab: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "lelab: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace lelab::cli
