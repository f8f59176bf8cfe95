// gpscat: command-line front end for the GPS cat-state library.
// Subcommands reproduce the source analysis (sigma), heralded waveforms
// (wavefunction), method-comparison sweeps (sweep), and the invariant
// validation suites (validate). Output is deterministic: identical
// invocations produce byte-identical files.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gps/compare.hpp"
#include "gps/gauss_core.hpp"
#include "gps/herald.hpp"
#include "gps/oracle.hpp"
#include "gps/special_fn.hpp"
#include "gps/targets.hpp"
#include "validate_suites.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;

// 17 significant digits: round-trip safe in CSV cells.
std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

int fail_config(const std::string& kind, const std::string& message) {
  json err;
  err["error"] = kind;
  err["message"] = message;
  std::cout << err.dump() << "\n";
  return kExitUsage;
}

struct GridSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char colon1 = 0, colon2 = 0;
  std::istringstream in(text);
  if (!(in >> g.lo >> colon1 >> g.hi >> colon2 >> g.step) || colon1 != ':' || colon2 != ':' || !(g.step > 0.0) ||
      g.hi < g.lo)
    throw gps::DomainError("grid must be <lo:hi:step> with step > 0 and hi >= lo");
  return g;
}

std::vector<double> grid_points(const GridSpec& g) {
  int count = static_cast<int>(std::floor((g.hi - g.lo) / g.step + 1e-9)) + 1;
  std::vector<double> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(g.lo + i * g.step);
  return pts;
}

void write_text(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw gps::DomainError("cannot open output path " + out_path);
  f << content;
}

// Shared source options: either --db (symmetric r1 = -r2) or explicit --r1/--r2.
struct SourceOpts {
  double level_db = -1.0;
  double r1 = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  bool has_db() const { return level_db >= 0.0; }
  bool has_r() const { return !std::isnan(r1) || !std::isnan(r2); }

  gps::SqueezerPair resolve() const {
    if (has_db() && has_r()) throw gps::DomainError("--db and --r1/--r2 are mutually exclusive");
    if (has_db()) {
      double r = gps::db_to_r(level_db);
      return gps::SqueezerPair(r, -r);
    }
    if (std::isnan(r1) || std::isnan(r2)) throw gps::DomainError("provide --db or both --r1 and --r2");
    return gps::SqueezerPair(r1, r2);
  }
};

void add_source_opts(CLI::App* cmd, SourceOpts& src) {
  cmd->add_option("--db", src.level_db, "input squeezing level in dB (sets r1 = -r2)");
  cmd->add_option("--r1", src.r1, "squeezing parameter of mode 1");
  cmd->add_option("--r2", src.r2, "squeezing parameter of mode 2");
}

json sigma_to_json(const gps::SigmaMatrix& s) {
  json j;
  j["s11"] = s.s11();
  j["s12"] = s.s12();
  j["s22"] = s.s22();
  return j;
}

// ---------------------------------------------------------------- sigma ----

struct SigmaOpts {
  SourceOpts src;
  double reflectance = -1.0;
  bool solve = false;
  std::string format = "json";
  std::string out_path;
};

int cmd_sigma(const SigmaOpts& opt) {
  using namespace gps;
  SqueezerPair sq = opt.src.resolve();
  BeamSplitter bs = (opt.reflectance >= 0.0) ? BeamSplitter(opt.reflectance) : solve_reflectance(sq);
  bool solved = opt.reflectance < 0.0;
  SigmaMatrix sigma = build_sigma(sq, bs);
  SigmaMatrix inv = build_sigma_inverse(sq, bs);
  SigmaMatrix p = p_domain_sigma(sigma);
  double residual = std::abs(sigma.s11() - 1.0);
  bool at_gps = residual < kGpsConditionTol;

  if (opt.format == "json") {
    json j;
    j["command"] = "sigma";
    j["r1"] = sq.r1;
    j["r2"] = sq.r2;
    j["reflectance"] = bs.reflectance;
    j["solved"] = solved;
    j["sigma"] = sigma_to_json(sigma);
    j["sigma_inverse"] = sigma_to_json(inv);
    j["sigma_p"] = sigma_to_json(p);
    j["det"] = sigma.det();
    j["trace"] = sigma.trace();
    j["gps_residual"] = residual;
    if (at_gps)
      j["r_c"] = output_squeezing(sigma);
    else
      j["r_c"] = nullptr;
    write_text(opt.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "key,value\n";
    csv << "r1," << fmt17(sq.r1) << "\n";
    csv << "r2," << fmt17(sq.r2) << "\n";
    csv << "reflectance," << fmt17(bs.reflectance) << "\n";
    csv << "solved," << (solved ? 1 : 0) << "\n";
    csv << "s11," << fmt17(sigma.s11()) << "\n";
    csv << "s12," << fmt17(sigma.s12()) << "\n";
    csv << "s22," << fmt17(sigma.s22()) << "\n";
    csv << "inv_s11," << fmt17(inv.s11()) << "\n";
    csv << "inv_s12," << fmt17(inv.s12()) << "\n";
    csv << "inv_s22," << fmt17(inv.s22()) << "\n";
    csv << "p_s11," << fmt17(p.s11()) << "\n";
    csv << "p_s12," << fmt17(p.s12()) << "\n";
    csv << "p_s22," << fmt17(p.s22()) << "\n";
    csv << "det," << fmt17(sigma.det()) << "\n";
    csv << "trace," << fmt17(sigma.trace()) << "\n";
    csv << "gps_residual," << fmt17(residual) << "\n";
    csv << "r_c," << (at_gps ? fmt17(output_squeezing(sigma)) : "nan") << "\n";
    write_text(opt.out_path, csv.str());
  }
  return kExitOk;
}

// --------------------------------------------------------- wavefunction ----

struct WavefunctionOpts {
  SourceOpts src;
  int n = -1;
  double reflectance = -1.0;
  std::string grid = "-10:10:0.02";
  bool p_domain = false;
  std::string format = "csv";
  std::string out_path;
};

int cmd_wavefunction(const WavefunctionOpts& opt) {
  using namespace gps;
  if (opt.n < 0) throw DomainError("--n is required and must be non-negative");
  SqueezerPair sq = opt.src.resolve();
  BeamSplitter bs = (opt.reflectance >= 0.0) ? BeamSplitter(opt.reflectance) : solve_reflectance(sq);
  SigmaMatrix sigma = build_sigma(sq, bs);
  if (opt.reflectance >= 0.0 && std::abs(sigma.s11() - 1.0) >= kGpsConditionTol)
    std::cerr << "warning: sigma11 = " << fmt17(sigma.s11()) << " (GPS condition not met; general path used)\n";

  HeraldOutcome outcome = herald(sigma, opt.n);
  double s_out = std::sqrt(sigma.det() + sigma.s22());
  double r_target = std::log(s_out);

  // Reference target: squeezed cat with alpha = sqrt(n) (approximant at n = 0).
  RealWavefunction target = (opt.n >= 1)
                                ? cat_wavefunction_x(CatTarget(std::sqrt(double(opt.n)), opt.n, r_target))
                                : approx_target_wavefunction(0, s_out);
  double fid = fidelity(outcome.psi, target);

  // Align the target's global sign with psi for a meaningful abs_err column.
  QuadratureGrid align_grid = QuadratureGrid::gauss_hermite(256, std::max(outcome.psi.half_width, target.half_width));
  double ov = integrate([&](double x) { return outcome.psi(x) * target(x); }, align_grid);
  double flip = ov < 0.0 ? -1.0 : 1.0;

  double metric = oscillation_metric(outcome.psi);
  std::vector<double> xs = grid_points(parse_grid(opt.grid));

  std::optional<ComplexWavefunction> ptilde;
  if (opt.p_domain) ptilde = p_domain_wavefunction(sigma, opt.n);

  json meta;
  meta["command"] = "wavefunction";
  meta["n"] = opt.n;
  meta["r1"] = sq.r1;
  meta["r2"] = sq.r2;
  meta["reflectance"] = bs.reflectance;
  meta["sigma11"] = sigma.s11();
  meta["det"] = sigma.det();
  meta["trace"] = sigma.trace();
  meta["prob"] = outcome.prob;
  meta["fidelity"] = fid;
  meta["oscillation_metric"] = metric;
  if (std::isnan(outcome.r_c))
    meta["r_c"] = nullptr;
  else
    meta["r_c"] = outcome.r_c;
  meta["warnings"] = outcome.warnings;

  if (opt.format == "json") {
    json cols;
    std::vector<double> col_x, col_psi, col_target, col_err, col_pt;
    for (double x : xs) {
      double v = outcome.psi(x);
      double t = flip * target(x);
      col_x.push_back(x);
      col_psi.push_back(v);
      col_target.push_back(t);
      col_err.push_back(std::abs(v - t));
      if (ptilde) col_pt.push_back(std::abs((*ptilde)(x)));
    }
    cols["x"] = col_x;
    cols["psi_n"] = col_psi;
    cols["target_cat"] = col_target;
    cols["abs_err"] = col_err;
    if (ptilde) {
      cols["p"] = col_x;
      cols["psi_tilde_abs"] = col_pt;
    }
    json j;
    j["meta"] = meta;
    j["columns"] = cols;
    write_text(opt.out_path, j.dump(2) + "\n");
    return kExitOk;
  }

  std::ostringstream csv;
  csv << "x,psi_n,target_cat,abs_err";
  if (opt.p_domain) csv << ",p,psi_tilde_abs";
  csv << "\n";
  for (double x : xs) {
    double v = outcome.psi(x);
    double t = flip * target(x);
    csv << fmt17(x) << "," << fmt17(v) << "," << fmt17(t) << "," << fmt17(std::abs(v - t));
    if (ptilde) csv << "," << fmt17(x) << "," << fmt17(std::abs((*ptilde)(x)));
    csv << "\n";
  }
  write_text(opt.out_path, csv.str());
  if (opt.out_path.empty()) {
    std::cerr << meta.dump(2) << "\n";
  } else {
    std::ofstream side(opt.out_path + ".meta.json", std::ios::binary | std::ios::trunc);
    side << meta.dump(2) << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ sweep ----

struct SweepOpts {
  std::string grid = "0.5:22:0.1";
  std::vector<int> photon_numbers{5, 10, 20};
  std::string methods = "gps,hom,conv";
  double f_rep = 0.0;
  int n_max = 60;
  std::string format = "csv";
  std::string out_path;
};

int cmd_sweep(const SweepOpts& opt) {
  using namespace gps;
  GridSpec g = parse_grid(opt.grid);
  SweepSpec spec;
  spec.db_lo = g.lo;
  spec.db_hi = g.hi;
  spec.db_step = g.step;
  spec.photon_numbers = opt.photon_numbers;
  spec.f_rep = opt.f_rep > 0.0 ? opt.f_rep : 1e8;
  spec.oracle_nmax = opt.n_max;
  spec.methods.clear();
  std::istringstream methods_in(opt.methods);
  std::string tok;
  while (std::getline(methods_in, tok, ',')) {
    if (tok == "gps")
      spec.methods.push_back(Method::kGps);
    else if (tok == "hom")
      spec.methods.push_back(Method::kHomodyne);
    else if (tok == "conv")
      spec.methods.push_back(Method::kConventional);
    else
      throw DomainError("unknown method '" + tok + "' (expected gps, hom, conv)");
  }
  if (spec.methods.empty()) throw DomainError("--methods must name at least one method");
  for (int n : spec.photon_numbers)
    if (n < 0) throw DomainError("--n entries must be non-negative");

  std::vector<SweepRow> rows = sweep(spec);
  bool with_rate = opt.f_rep > 0.0;

  std::vector<std::string> cols;
  for (Method m : spec.methods) {
    for (int n : spec.photon_numbers) cols.push_back(std::string(method_name(m)) + "_P" + std::to_string(n));
    if (m == Method::kGps && with_rate)
      for (int n : spec.photon_numbers) cols.push_back("gps_rate" + std::to_string(n));
  }

  auto row_values = [&](const SweepRow& row, std::vector<std::string>& vals, std::string& flags) {
    size_t cell_idx = 0;
    for (Method m : spec.methods) {
      std::vector<std::string> rates;
      for (size_t k = 0; k < spec.photon_numbers.size(); ++k, ++cell_idx) {
        const SweepCell& cell = row.cells[cell_idx];
        if (cell.result) {
          vals.push_back(fmt17(cell.result->probability));
          if (m == Method::kGps && with_rate) rates.push_back(fmt17(cell.result->rate));
        } else {
          vals.push_back("");
          if (m == Method::kGps && with_rate) rates.push_back("");
          if (!flags.empty()) flags += ";";
          flags += std::string(method_name(m)) + "_P" + std::to_string(cell.n) + ":" + cell.flag;
        }
      }
      for (auto& rt : rates) vals.push_back(std::move(rt));
    }
  };

  if (opt.format == "json") {
    json jrows = json::array();
    for (const SweepRow& row : rows) {
      json jr;
      jr["db"] = row.level_db;
      jr["r"] = row.r;
      std::vector<std::string> vals;
      std::string flags;
      row_values(row, vals, flags);
      for (size_t i = 0; i < cols.size(); ++i) {
        if (vals[i].empty())
          jr[cols[i]] = nullptr;
        else
          jr[cols[i]] = std::stod(vals[i]);
      }
      jr["flags"] = flags;
      jrows.push_back(std::move(jr));
    }
    json j;
    j["command"] = "sweep";
    j["f_rep"] = spec.f_rep;
    j["n_max"] = spec.oracle_nmax;
    j["rows"] = jrows;
    write_text(opt.out_path, j.dump(2) + "\n");
    return kExitOk;
  }

  std::ostringstream csv;
  csv << "db,r";
  for (const auto& c : cols) csv << "," << c;
  csv << ",flags\n";
  for (const SweepRow& row : rows) {
    std::vector<std::string> vals;
    std::string flags;
    row_values(row, vals, flags);
    csv << fmt17(row.level_db) << "," << fmt17(row.r);
    for (const auto& v : vals) csv << "," << v;
    csv << "," << flags << "\n";
  }
  write_text(opt.out_path, csv.str());
  return kExitOk;
}

// --------------------------------------------------------------- validate ----

struct ValidateOpts {
  std::string suite = "all";
  double level_db = 5.0;
  int n = 8;
  int n_max = 40;
  std::string format = "text";
  std::string out_path;
};

int cmd_validate(const ValidateOpts& opt) {
  if (!gpstool::known_suite(opt.suite))
    throw gps::DomainError("unknown suite '" + opt.suite + "'");
  gpstool::OracleParams params;
  params.level_db = opt.level_db;
  params.n = opt.n;
  params.n_max = opt.n_max;
  std::vector<gpstool::Check> checks = gpstool::run_suites(opt.suite, params);

  int failures = 0;
  for (const auto& c : checks)
    if (!c.ok) ++failures;

  if (opt.format == "json") {
    json arr = json::array();
    for (const auto& c : checks) {
      json j;
      j["suite"] = c.suite;
      j["check"] = c.name;
      j["measured"] = c.measured;
      j["threshold"] = c.threshold;
      j["bound"] = c.upper_bound ? "upper" : "lower";
      j["status"] = c.ok ? "pass" : "fail";
      j["error"] = c.error_class;
      arr.push_back(std::move(j));
    }
    json root;
    root["command"] = "validate";
    root["checks"] = arr;
    root["failures"] = failures;
    write_text(opt.out_path, root.dump(2) + "\n");
  } else if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "suite,check,measured,threshold,bound,status,error\n";
    for (const auto& c : checks) {
      csv << c.suite << ",\"" << c.name << "\"," << fmt17(c.measured) << "," << fmt17(c.threshold) << ","
          << (c.upper_bound ? "upper" : "lower") << "," << (c.ok ? "pass" : "fail") << "," << c.error_class << "\n";
    }
    write_text(opt.out_path, csv.str());
  } else {
    std::ostringstream txt;
    for (const auto& c : checks) {
      txt << (c.ok ? "PASS" : "FAIL") << "  [" << c.suite << "] " << c.name;
      if (!c.error_class.empty()) {
        txt << "  (error: " << c.error_class << ")";
      } else {
        txt << "  (measured " << fmt17(c.measured) << (c.upper_bound ? " < " : " > ") << fmt17(c.threshold) << ")";
      }
      txt << "\n";
    }
    txt << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
    write_text(opt.out_path, txt.str());
  }
  return failures == 0 ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "gpscat: heralded cat-state generation by photon-number measurement on "
      "two-mode Gaussian states (generalized photon subtraction)"};
  app.require_subcommand(1);

  SigmaOpts sigma_opts;
  CLI::App* sigma_cmd = app.add_subcommand(
      "sigma", "Report sigma, its inverse, the p-domain matrix, and the solved GPS reflectance.\n"
               "CSV schema: key,value rows (keys r1,r2,reflectance,solved,s11,s12,s22,inv_*,p_*,det,trace,"
               "gps_residual,r_c).");
  add_source_opts(sigma_cmd, sigma_opts.src);
  sigma_cmd->add_option("--reflectance", sigma_opts.reflectance, "beam-splitter reflectance override in [0,1]");
  sigma_cmd->add_flag("--solve-r", sigma_opts.solve, "solve R for sigma11 = 1 (default when no --reflectance)");
  sigma_cmd->add_option("--format", sigma_opts.format, "csv|json (default json)")
      ->check(CLI::IsMember({"csv", "json"}));
  sigma_cmd->add_option("--out", sigma_opts.out_path, "output path (stdout when omitted)");

  WavefunctionOpts wf_opts;
  CLI::App* wf_cmd = app.add_subcommand(
      "wavefunction", "Heralded waveform versus the squeezed-cat target.\n"
                      "CSV schema: x,psi_n,target_cat,abs_err[,p,psi_tilde_abs]; metadata (fidelity, prob, R, r_c,\n"
                      "oscillation_metric) goes to <out>.meta.json, or stderr when writing to stdout.");
  add_source_opts(wf_cmd, wf_opts.src);
  wf_cmd->add_option("--n", wf_opts.n, "detected photon number")->required();
  wf_cmd->add_option("--reflectance", wf_opts.reflectance, "beam-splitter reflectance override in [0,1]");
  wf_cmd->add_option("--grid", wf_opts.grid, "x grid as lo:hi:step (default -10:10:0.02)");
  wf_cmd->add_flag("--p-domain", wf_opts.p_domain, "append p-domain columns (p, |psi_tilde|)");
  wf_cmd->add_option("--format", wf_opts.format, "csv|json (default csv)")->check(CLI::IsMember({"csv", "json"}));
  wf_cmd->add_option("--out", wf_opts.out_path, "output path (stdout when omitted)");

  SweepOpts sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Success probabilities of GPS / homodyne conditioning / conventional subtraction against the\n"
               "input squeezing level. CSV schema: db,r,<method>_P<n> columns in method order (gps_rate<n>\n"
               "columns after gps when --frep is given), then flags. Failed points leave empty cells and are\n"
               "listed in flags as <column>:<error-class>.");
  sweep_cmd->add_option("--grid", sweep_opts.grid, "dB grid as lo:hi:step (default 0.5:22:0.1)");
  sweep_cmd->add_option("--n", sweep_opts.photon_numbers, "photon numbers of interest (default 5 10 20)")
      ->delimiter(',');
  sweep_cmd->add_option("--methods", sweep_opts.methods, "comma list from gps,hom,conv (default all)");
  sweep_cmd->add_option("--frep", sweep_opts.f_rep, "clock rate in Hz; adds gps_rate columns");
  sweep_cmd->add_option("--nmax", sweep_opts.n_max, "Fock truncation per mode for the conventional method");
  sweep_cmd->add_option("--format", sweep_opts.format, "csv|json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", sweep_opts.out_path, "output path (stdout when omitted)");

  ValidateOpts val_opts;
  CLI::App* val_cmd = app.add_subcommand(
      "validate", "Run the invariant suites (gauss, special, targets, herald, oracle, compare).\n"
                  "Exit 0 when every check passes, 1 otherwise. Oracle suite parameters: --db, --n, --nmax.");
  val_cmd->add_option("--suite", val_opts.suite, "suite name or 'all' (default all)");
  val_cmd->add_option("--db", val_opts.level_db, "oracle suite input squeezing in dB (default 5)");
  val_cmd->add_option("--n", val_opts.n, "oracle suite heralded photon number (default 8)");
  val_cmd->add_option("--nmax", val_opts.n_max, "oracle suite Fock truncation per mode (default 40)");
  val_cmd->add_option("--format", val_opts.format, "text|csv|json (default text)")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  val_cmd->add_option("--out", val_opts.out_path, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::ostringstream msg;
    msg << e.what();
    return fail_config("UsageError", msg.str());
  }

  try {
    if (sigma_cmd->parsed()) return cmd_sigma(sigma_opts);
    if (wf_cmd->parsed()) return cmd_wavefunction(wf_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
    if (val_cmd->parsed()) return cmd_validate(val_opts);
  } catch (const gps::NoSolutionError& e) {
    return fail_config("NoSolution", e.what());
  } catch (const gps::ConditionViolated& e) {
    return fail_config("ConditionViolated", e.what());
  } catch (const gps::TruncationError& e) {
    return fail_config("TruncationError", e.what());
  } catch (const gps::ZeroProbability& e) {
    return fail_config("ZeroProbability", e.what());
  } catch (const gps::NonConverged& e) {
    return fail_config("NonConverged", e.what());
  } catch (const gps::DomainError& e) {
    return fail_config("DomainError", e.what());
  } catch (const std::exception& e) {
    return fail_config("InternalError", e.what());
  }
  return fail_config("UsageError", "no subcommand given");
}
