#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revsurf/periodicity.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/runconfig.hpp"
#include "revsurf/singularity.hpp"
#include "revsurf/surface.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace revsurf;

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Options {
  std::string config_path;
  std::string out_override;
  int samples_override = 0;
  int theta_override = 0;
  double tol_override = 0.0;
};

RunConfig load_config(const Options& opt) {
  RunConfig cfg = RunConfig::load(opt.config_path);
  if (!opt.out_override.empty()) cfg.out = opt.out_override;
  if (opt.samples_override > 0) cfg.samples = opt.samples_override;
  if (opt.theta_override > 0) cfg.n_theta = opt.theta_override;
  if (opt.tol_override > 0.0) cfg.tol = opt.tol_override;
  return cfg;
}

// Streams the document to cfg.out when set, to stdout otherwise.
void emit(const RunConfig& cfg,
          const std::function<void(std::ostream&)>& writer) {
  if (cfg.out) {
    std::ofstream f(*cfg.out, std::ios::binary);
    if (!f) throw IoError("cannot open output file " + *cfg.out);
    writer(f);
    f.flush();
    if (!f) throw IoError("failed writing output file " + *cfg.out);
  } else {
    writer(std::cout);
  }
}

Expr parse_field(const std::string& text, const char* key) {
  try {
    return parse_expression(text);
  } catch (const revsurf::ParseError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void cmd_trace(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const auto samples = trace(cfg.to_spec(), cfg.samples);
  emit(cfg, [&](std::ostream& out) { write_csv(out, samples); });
}

std::string describe(const SingularPointReport& r) {
  std::string s = "t = " + format_double(r.p) + ": " + cusp_name(r.cusp_class);
  s += r.is_front ? ", front" : ", frontal not front";
  s += ", " + r.surface_label;
  if (!r.warning.empty()) s += " (warning: " + r.warning + ")";
  return s;
}

void cmd_singularities(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const ProblemSpec spec = cfg.to_spec();
  const auto points = find_singular_points(spec);

  json doc;
  doc["singular_points"] = json::array();
  if (points.empty()) std::cout << "no singular points\n";
  for (double p : points) {
    const SingularPointReport r = classify(spec, p);
    std::optional<bool> agrees;
    try {
      agrees = cross_check(spec, p);
    } catch (const Error&) {
      // The sampling window does not fit inside the domain; the jet
      // check is skipped for this point.
    }
    std::string line = describe(r);
    if (agrees)
      line += *agrees ? " [jet check agrees]" : " [jet check DISAGREES]";
    std::cout << line << "\n";

    json jp;
    jp["t"] = r.p;
    jp["cusp"] = cusp_name(r.cusp_class);
    jp["front"] = r.is_front;
    jp["surface"] = r.surface_label;
    jp["jet"] = {{"l1", r.l1},
                 {"l2", r.l2},
                 {"eta1", r.eta1},
                 {"eta2", r.eta2},
                 {"eta3", r.eta3}};
    jp["warning"] = r.warning;
    if (agrees)
      jp["jet_check_agrees"] = *agrees;
    else
      jp["jet_check_agrees"] = nullptr;
    doc["singular_points"].push_back(jp);
  }
  if (cfg.out)
    emit(cfg, [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
}

void cmd_periodicity(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  if (!cfg.L) throw ConfigError("periodicity needs the key L");
  const PeriodicityReport r = check(cfg.to_spec(), *cfg.L);

  std::cout << "branch: "
            << (r.branch == PeriodBranch::Resonant ? "resonant" : "generic")
            << "\n";
  std::cout << "eta(L) = " << format_double(r.eta_L) << "\n";
  std::cout << "F(L) = " << format_double(r.F_L) << "\n";
  std::cout << "G(L) = " << format_double(r.G_L) << "\n";
  std::cout << "phi0 = " << format_double(r.phi0)
            << (r.phi0_limit_direction ? " (limit direction of the tangent)"
                                       : "")
            << "\n";
  std::cout << "residual = " << format_double(r.residual) << "\n";
  std::cout << "periodic: " << (r.periodic ? "yes" : "no") << "\n";
  if (r.ambiguous)
    std::cout << "ambiguous: the branch criteria disagree near the resonance "
                 "threshold\n";
  if (r.T) std::cout << "T = " << format_double(*r.T) << "\n";

  if (cfg.out) {
    json doc;
    doc["L"] = r.L;
    doc["branch"] = r.branch == PeriodBranch::Resonant ? "resonant" : "generic";
    doc["eta_L"] = r.eta_L;
    doc["F_L"] = r.F_L;
    doc["G_L"] = r.G_L;
    doc["phi0"] = r.phi0;
    doc["phi0_limit_direction"] = r.phi0_limit_direction;
    doc["residual"] = r.residual;
    doc["periodic"] = r.periodic;
    doc["ambiguous"] = r.ambiguous;
    if (r.T)
      doc["T"] = *r.T;
    else
      doc["T"] = nullptr;
    emit(cfg, [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
  }
}

void cmd_solve_constants(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  if (!cfg.L) throw ConfigError("solve-constants needs the key L");
  const Expr l = parse_field(cfg.l, "l");
  const Expr m = parse_field(cfg.m, "m");
  const auto pc = periodic_constants(l, m, *cfg.L, cfg.tol);

  json doc;
  if (!pc) {
    std::cout << "resonant turning: no distinguished constants\n";
    doc["resonant"] = true;
  } else {
    std::cout << "c1 = " << format_double(pc->c1) << "\n";
    std::cout << "c2 = " << format_double(pc->c2) << "\n";
    if (pc->collapse_t)
      std::cout << "warning: radius collapses at t = "
                << format_double(*pc->collapse_t) << "\n";
    doc["resonant"] = false;
    doc["c1"] = pc->c1;
    doc["c2"] = pc->c2;
    if (pc->collapse_t)
      doc["collapse_t"] = *pc->collapse_t;
    else
      doc["collapse_t"] = nullptr;
  }
  if (cfg.out)
    emit(cfg, [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
}

void cmd_plot(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const ProblemSpec spec = cfg.to_spec();
  const auto samples = trace(spec, cfg.samples);
  std::vector<SingularPointReport> marks;
  for (double p : find_singular_points(spec)) marks.push_back(classify(spec, p));
  emit(cfg, [&](std::ostream& out) { write_svg(out, samples, marks); });
}

void cmd_mesh(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  const ProblemSpec spec = cfg.to_spec();
  const auto samples = trace(spec, cfg.samples);
  Mesh mesh = revolve(samples, cfg.n_theta);
  std::vector<SingularPointReport> reports;
  for (double p : find_singular_points(spec))
    reports.push_back(classify(spec, p));
  mesh.annotations = label_surface_singularities(reports);
  emit(cfg, [&](std::ostream& out) { write_obj(out, mesh); });
}

int fail(const char* code, const std::exception& e, int rc) {
  std::string msg = e.what();
  for (char& ch : msg)
    if (ch == '\n') ch = ' ';
  std::cerr << "error: " << code << " " << msg << "\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface of revolution toolkit: traces profile curves from "
               "(l, m) data, classifies their singular points, tests "
               "periodicity and exports CSV/SVG/OBJ documents"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub, bool with_theta) {
    sub->add_option("--config", opt.config_path, "run configuration file")
        ->required();
    sub->add_option("--out", opt.out_override,
                    "output path (overrides the config's out)");
    sub->add_option("--samples", opt.samples_override, "trace sample count")
        ->check(CLI::Range(2, 100000000));
    if (with_theta)
      sub->add_option("--theta", opt.theta_override, "mesh columns")
          ->check(CLI::Range(3, 10000000));
    sub->add_option("--tol", opt.tol_override, "quadrature tolerance")
        ->check(CLI::PositiveNumber);
  };

  add_common(app.add_subcommand("trace", "curve samples as CSV"), false);
  add_common(app.add_subcommand("singularities",
                                "locate and classify singular points"),
             false);
  add_common(app.add_subcommand("periodicity", "test the declared period L"),
             false);
  add_common(app.add_subcommand("solve-constants",
                                "center constants that close the curve"),
             false);
  add_common(app.add_subcommand("plot", "profile curve as SVG"), false);
  add_common(app.add_subcommand("mesh", "revolved surface as OBJ"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: E_USAGE " << e.what() << "\n";
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "trace")
      cmd_trace(opt);
    else if (cmd == "singularities")
      cmd_singularities(opt);
    else if (cmd == "periodicity")
      cmd_periodicity(opt);
    else if (cmd == "solve-constants")
      cmd_solve_constants(opt);
    else if (cmd == "plot")
      cmd_plot(opt);
    else
      cmd_mesh(opt);
    return 0;
  } catch (const ConfigError& e) {
    return fail("E_CONFIG", e, 2);
  } catch (const revsurf::ParseError& e) {
    return fail("E_PARSE", e, 2);
  } catch (const EvalError& e) {
    return fail("E_NUMERIC", e, 3);
  } catch (const QuadError& e) {
    return fail("E_NUMERIC", e, 3);
  } catch (const YCollapseError& e) {
    return fail("E_NUMERIC", e, 3);
  } catch (const RootError& e) {
    return fail("E_NUMERIC", e, 3);
  } catch (const AuditError& e) {
    return fail("E_NUMERIC", e, 3);
  } catch (const IoError& e) {
    return fail("E_IO", e, 4);
  } catch (const Error& e) {
    return fail("E_INTERNAL", e, 1);
  } catch (const std::exception& e) {
    return fail("E_INTERNAL", e, 1);
  }
}
