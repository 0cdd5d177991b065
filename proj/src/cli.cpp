#include "maxbias/cli.hpp"

#include "maxbias/dominance.hpp"
#include "maxbias/efficiency.hpp"
#include "maxbias/format.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace maxbias::cli {

namespace {

std::vector<double> split_triple(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_number(item));
  if (parts.size() != 3) throw DomainError("grid must be start:stop:step, got '" + text + "'");
  return parts;
}

struct Options {
  std::string estimator = "s";
  std::string rho = "biweight";
  std::optional<double> k;
  double k1 = 1.56;
  double k2 = 4.68;
  double b = 0.5;
  std::optional<double> c;
  std::string model = "gaussian";
  std::string grid;
  std::optional<double> target_eff;
  std::string solve = "breakdown";
  std::string laws;
  std::string out;
  std::string profile;
};

RhoSpec make_rho(const Options& o) {
  const RhoFamily family = parse_rho_family(o.rho);
  if (family == RhoFamily::Biweight) return RhoSpec::biweight(o.k.value_or(1.56));
  return RhoSpec::alpha_quantile(o.k.value_or(1.0));
}

EstimatorSpec make_estimator(const Options& o) {
  EstimatorSpec spec;
  switch (parse_estimator(o.estimator)) {
    case EstimatorKind::S: spec = EstimatorSpec::s(make_rho(o), o.b); break;
    case EstimatorKind::MM:
      spec = EstimatorSpec::mm(RhoSpec::biweight(o.k1), RhoSpec::biweight(o.k2), o.b);
      break;
    case EstimatorKind::CM:
      if (!o.c) throw DomainError("--c is required for the CM estimator");
      spec = EstimatorSpec::cm(make_rho(o), o.b, *o.c);
      break;
  }
  spec.validate();
  return spec;
}

/// Writes to --out when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot open output file " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

int run_curve(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.grid.empty()) throw DomainError("--grid is required");
  const auto spec = make_estimator(o);
  const auto grid = parse_linear_grid(o.grid);
  const double bd = breakdown_point(spec);
  for (double eps : grid) {
    if (eps < 0.0) throw DomainError("contamination must be nonnegative");
    if (eps >= bd) {
      throw BreakdownViolation("eps = " + format_number(eps) + " is not below the breakdown point " +
                               format_number(bd));
    }
  }
  const auto curve = bias_curve(spec, parse_model(o.model), grid);
  Sink sink(o.out, out);
  write_csv(*sink, curve_table(curve));
  bool failed = false;
  for (const auto& w : curve.warnings) err << "warning: " << w << '\n';
  for (const auto& p : curve.points) failed |= p.status == PointStatus::NumericalFailure;
  return failed ? kNumericalFailure : kOk;
}

int run_phi(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.grid.empty()) throw DomainError("--grid is required");
  const auto grid = parse_log_grid(o.grid);
  const GFunction gf(make_rho(o), parse_model(o.model));
  if (!gf.unimodal_verified()) err << "warning: phi is not unimodal on the scan grid\n";
  Sink sink(o.out, out);
  write_csv(*sink, phi_table(gf, grid));
  return kOk;
}

int run_tune(const Options& o, std::ostream& out, std::ostream&) {
  TuneRequest req{TuneKind::SBreakdown, o.b, o.target_eff.value_or(0.95), std::nullopt};
  std::string what;
  switch (parse_estimator(o.estimator)) {
    case EstimatorKind::S:
      if (o.solve == "consistency") {
        req.kind = TuneKind::SConsistency;
        what = "k";
      } else if (o.solve == "breakdown") {
        what = "b";
      } else {
        throw DomainError("--solve must be breakdown or consistency");
      }
      break;
    case EstimatorKind::MM:
      req.kind = TuneKind::MmK2;
      what = "k2";
      break;
    case EstimatorKind::CM:
      req.kind = TuneKind::CmC;
      what = "c";
      break;
  }
  if (!(req.target_eff > 0.0)) throw DomainError("--target-eff must be positive");
  const auto res = tune(req);
  Sink sink(o.out, out);
  *sink << what << '=' << format_number(res.value) << '\n'
        << "efficiency=" << format_number(res.achieved_eff) << '\n';
  return kOk;
}

int run_dominance(const Options& o, std::ostream& out, std::ostream&) {
  if (parse_model(o.model) != Model::Gaussian) {
    throw DomainError("dominance is only defined under the Gaussian model");
  }
  const GFunction gf(make_rho(o), Model::Gaussian);
  const auto rep = dominance_report(gf, o.b);
  Sink sink(o.out, out);
  write_report(*sink, rep);
  if (o.profile.empty()) {
    *sink << '\n';
    write_csv(*sink, c_profile_table(rep.c_of_eps_profile));
  } else {
    std::ofstream prof(o.profile);
    if (!prof) throw DomainError("cannot open profile file " + o.profile);
    write_csv(prof, c_profile_table(rep.c_of_eps_profile));
  }
  return kOk;
}

int run_table(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<LawKind> laws;
  if (o.laws.empty()) {
    laws = all_laws();
  } else {
    std::stringstream ss(o.laws);
    std::string item;
    while (std::getline(ss, item, ',')) laws.push_back(parse_law(item));
  }
  const auto cells = avar_cells(reference_rows(), laws);
  for (const auto& cell : cells) {
    if (!cell.flag.empty()) err << "warning: " << cell.estimator << ' ' << law_label(cell.law) << ": " << cell.flag << '\n';
  }
  Sink sink(o.out, out);
  write_csv(*sink, avar_table(cells));
  return kOk;
}

int run_check(const Options& o, std::ostream& out, std::ostream&) {
  const RhoSpec rho = make_rho(o);
  const GFunction gf(rho, parse_model(o.model));
  std::vector<CheckResult> results = validate_rho(rho);
  const auto& unimodal = gf.unimodal();
  std::string unimodal_detail;
  if (unimodal.first_violation) unimodal_detail = "slope rises again near s=" + format_number(*unimodal.first_violation);
  results.push_back({"phi unimodal", unimodal.unimodal, unimodal_detail});
  if (unimodal.unimodal) {
    const auto [lo, hi] = convexity_range(gf, o.b);
    results.push_back({"g convex on [" + format_number(lo) + ", " + format_number(hi) + "]",
                       check_g_convex(gf, lo, hi), ""});
  }
  Sink sink(o.out, out);
  bool all = true;
  for (const auto& r : results) {
    *sink << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) *sink << " (" << r.detail << ')';
    *sink << '\n';
    all &= r.passed;
  }
  return all ? kOk : kNumericalFailure;
}

}  // namespace

std::vector<double> parse_linear_grid(const std::string& text) {
  const auto p = split_triple(text);
  const double start = p[0], stop = p[1], step = p[2];
  if (!(step > 0.0) || stop < start) throw DomainError("grid needs step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (n > 1000000) throw DomainError("grid has too many points");
  std::vector<double> grid(n);
  for (long i = 0; i < n; ++i) grid[i] = start + i * step;
  return grid;
}

std::vector<double> parse_log_grid(const std::string& text) {
  const auto p = split_triple(text);
  const double start = p[0], stop = p[1];
  if (!(start > 0.0) || !(stop >= start)) throw DomainError("log grid needs 0 < start <= stop");
  if (p[2] < 1.0 || p[2] != std::floor(p[2]) || p[2] > 1e6) {
    throw DomainError("log grid count must be a positive integer");
  }
  const auto n = static_cast<long>(p[2]);
  std::vector<double> grid(n);
  const double a = std::log(start), d = n > 1 ? (std::log(stop) - a) / (n - 1) : 0.0;
  for (long i = 0; i < n; ++i) grid[i] = std::exp(a + i * d);
  if (n > 1) grid.back() = stop;
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum-bias, efficiency and dominance calculations for S, MM and CM regression estimates"};
  app.name("maxbias");
  app.require_subcommand(1);
  Options o;

  auto estimator_opts = [&](CLI::App* sub) {
    sub->add_option("--estimator", o.estimator, "s, mm or cm");
    sub->add_option("--k1", o.k1, "MM initial biweight constant");
    sub->add_option("--k2", o.k2, "MM final biweight constant");
    sub->add_option("--c", o.c, "CM penalty constant");
  };
  auto rho_opts = [&](CLI::App* sub) {
    sub->add_option("--rho", o.rho, "biweight or quantile");
    sub->add_option("--k", o.k, "rho tuning constant");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "gaussian or cauchy");
    sub->add_option("--out", o.out, "output file (default stdout)");
  };

  auto* curve = app.add_subcommand("curve", "maximum-bias curve as CSV eps,lower,upper,exact");
  estimator_opts(curve);
  rho_opts(curve);
  common(curve);
  curve->add_option("--b", o.b, "S-constraint level");
  curve->add_option("--grid", o.grid, "start:stop:step")->required();

  auto* phi = app.add_subcommand("phi", "phi(s) = -s g'(s) as CSV s,phi");
  rho_opts(phi);
  common(phi);
  phi->add_option("--grid", o.grid, "start:stop:count (log-spaced)")->required();

  auto* tune_cmd = app.add_subcommand("tune", "solve a constant for a Gaussian efficiency");
  estimator_opts(tune_cmd);
  tune_cmd->add_option("--b", o.b, "S-constraint level");
  tune_cmd->add_option("--target-eff", o.target_eff, "target Gaussian efficiency");
  tune_cmd->add_option("--solve", o.solve, "S only: breakdown (solve b) or consistency (solve k)");
  tune_cmd->add_option("--out", o.out, "output file (default stdout)");

  auto* dom = app.add_subcommand("dominance", "CM-versus-S dominance report");
  rho_opts(dom);
  common(dom);
  dom->add_option("--b", o.b, "S-constraint level");
  dom->add_option("--profile", o.profile, "write the eps,c_eps profile here instead of after the report");

  auto* table = app.add_subcommand("table", "asymptotic variances of the five reference estimators");
  table->add_option("--laws", o.laws, "comma-separated subset of NORM,SL,CAU,T3,DE,CN,UNIF");
  table->add_option("--out", o.out, "output file (default stdout)");

  auto* check = app.add_subcommand("check", "verify rho and g assumptions");
  rho_opts(check);
  common(check);
  check->add_option("--b", o.b, "level defining the convexity range");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (curve->parsed()) return run_curve(o, out, err);
    if (phi->parsed()) return run_phi(o, out, err);
    if (tune_cmd->parsed()) return run_tune(o, out, err);
    if (dom->parsed()) return run_dominance(o, out, err);
    if (table->parsed()) return run_table(o, out, err);
    return run_check(o, out, err);
  } catch (const BreakdownViolation& e) {
    err << "error: " << e.what() << '\n';
    return kBreakdownViolation;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "; attainable efficiency range [" << format_number(e.attainable_lo)
        << ", " << format_number(e.attainable_hi) << "]\n";
    return kBadInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace maxbias::cli
