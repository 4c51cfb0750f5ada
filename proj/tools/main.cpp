// smalife command-line front end.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smalife/analysis.hpp"
#include "smalife/config.hpp"
#include "smalife/csv_io.hpp"
#include "smalife/error.hpp"
#include "smalife/harness.hpp"
#include "smalife/svg.hpp"
#include "smalife/sysid.hpp"
#include "smalife/thermal.hpp"
#include "smalife/validation.hpp"

namespace fs = std::filesystem;
using namespace smalife;

namespace {

// Exit codes. Each error category has its own code; a sweep where some cells
// failed exits with kExitPartial.
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 9;
constexpr int kExitInternal = 1;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return 3;
    case ErrorCategory::parse: return 4;
    case ErrorCategory::io: return 5;
    case ErrorCategory::identifiability: return 6;
    case ErrorCategory::stuck: return 7;
    case ErrorCategory::precondition: return 8;
  }
  return kExitInternal;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

int fail(std::string_view category, const std::string& msg, int code) {
  std::cerr << "error[" << category << "]: " << one_line(msg) << '\n';
  return code;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

SweepConfig load_or_default(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------- identify

struct IdentifyArgs {
  std::string log;
  bool synthetic = false;
  std::uint64_t seed = 1;
  double noise = 0.0;
  double dt = 0.2;
  std::string config;
  std::string out = ".";
};

int cmd_identify(const IdentifyArgs& a) {
  IdLog data;
  if (a.synthetic) {
    const ThermalParams truth = load_or_default(a.config).base.thermal;
    ExcitationConfig ex;
    ex.dt = truth.dt;
    ex.seed = a.seed;
    data.duty = excite(ex);
    data.temps = simulate_response(truth, data.duty, truth.t_amb, a.noise, a.seed);
    data.dt = truth.dt;
  } else {
    data = read_id_csv(a.log, a.dt);
  }
  const IdResult r = fit_linear(data.temps, data.duty, data.dt);
  if (!r.diagnostic.empty()) std::cerr << "warning: " << r.diagnostic << '\n';

  std::ostringstream body;
  body << std::setprecision(10);
  body << "parameter,value\n"
       << "alpha1," << r.params.alpha1 << '\n'
       << "alpha2," << r.params.alpha2 << '\n'
       << "t_amb," << r.params.t_amb << '\n'
       << "dt," << r.params.dt << '\n'
       << "residual_rmse_C," << r.residual_rmse << '\n'
       << "samples," << r.sample_count << '\n';
  ensure_dir(a.out);
  write_text(fs::path(a.out) / "id.csv", body.str());

  std::cout << "alpha1 = " << fmt(r.params.alpha1, 8) << " 1/s\n"
            << "alpha2 = " << fmt(r.params.alpha2, 8) << " degC/s\n"
            << "t_amb  = " << fmt(r.params.t_amb, 8) << " degC\n"
            << "rmse   = " << fmt(r.residual_rmse, 4) << " degC over " << r.sample_count << " samples\n";
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::string profile = "c1";
  double t_set = 140.0;
  std::optional<int> cycles;
  std::string out = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  TrialConfig base = load_or_default(a.config).base;
  if (a.cycles) base.v_max = *a.cycles;
  const TrialConfig cfg = cell_config(base, {profile_from_string(a.profile), a.t_set});
  ensure_dir(a.out);
  const fs::path path = fs::path(a.out) / (cfg.label + ".csv");
  try {
    const TrialLog log = run_trial(cfg);
    write_trial_csv(log, path);
  } catch (const TrialFailure& e) {
    write_trial_csv(e.partial(), fs::path(path.string() + ".partial"));
    throw;
  }
  std::cout << path.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string out;
  int jobs = 1;
  bool resume = false;
};

constexpr const char* kManifestHeader = "cell,profile,t_set,config_hash,seed,status,path,message";

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

struct ManifestRow {
  std::string cell, profile, t_set, hash, seed, status, path, message;
};

// Previous manifest keyed by cell label; only the leading unquoted fields are needed.
std::map<std::string, ManifestRow> read_manifest(const fs::path& path) {
  std::map<std::string, ManifestRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (f.size() < 7 && std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() < 7) continue;
    rows[f[0]] = ManifestRow{f[0], f[1], f[2], f[3], f[4], f[5], f[6], ""};
  }
  return rows;
}

int cmd_sweep(const SweepArgs& a) {
  if (a.jobs < 1) throw ConfigError("--jobs must be at least 1");
  const SweepConfig cfg = load_or_default(a.config);
  const fs::path out = a.out;
  ensure_dir(out);
  const fs::path manifest_path = out / "manifest.csv";

  std::map<std::string, ManifestRow> previous;
  if (a.resume) previous = read_manifest(manifest_path);

  std::vector<ManifestRow> rows;
  std::vector<SweepCell> todo;
  for (const SweepCell& cell : cfg.cells()) {
    const TrialConfig cc = cell_config(cfg.base, cell);
    const auto it = previous.find(cc.label);
    if (it != previous.end() && it->second.status == "ok" && it->second.hash == config_hash(cc) &&
        fs::exists(out / it->second.path)) {
      rows.push_back(it->second);
      continue;
    }
    todo.push_back(cell);
  }

  int failed = 0;
  if (!todo.empty()) {
    for (const CellResult& r : run_sweep(cfg.base, todo, a.jobs)) {
      ManifestRow row{r.config.label, std::string(to_string(r.cell.profile)), fmt(r.cell.t_set, 17),
                      r.config_hash, std::to_string(r.config.noise.seed), r.ok ? "ok" : "failed", "", ""};
      if (r.ok) {
        row.path = r.config.label + ".csv";
        write_trial_csv(r.log, out / row.path);
      } else {
        ++failed;
        row.message = r.error;
        if (!r.log.rows.empty()) {
          row.path = r.config.label + ".csv.partial";
          write_trial_csv(r.log, out / row.path);
        }
      }
      rows.push_back(std::move(row));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ManifestRow& x, const ManifestRow& y) {
    if (x.profile != y.profile) return x.profile < y.profile;
    return std::stod(x.t_set) < std::stod(y.t_set);
  });
  std::ostringstream body;
  body << kManifestHeader << '\n';
  for (const ManifestRow& r : rows)
    body << r.cell << ',' << r.profile << ',' << r.t_set << ',' << r.hash << ',' << r.seed << ',' << r.status
         << ',' << r.path << ',' << csv_quote(one_line(r.message)) << '\n';
  write_text(manifest_path, body.str());

  const std::size_t total = rows.size();
  std::cout << (total - static_cast<std::size_t>(failed)) << " of " << total << " cells ok ("
            << (total - todo.size()) << " reused); manifest " << manifest_path.string() << '\n';
  if (failed > 0)
    return fail("partial", std::to_string(failed) + " of " + std::to_string(total) + " sweep cells failed; see " +
                               manifest_path.string(),
                kExitPartial);
  return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string in;
  std::string out;
};

bool is_trial_csv(const fs::path& p) {
  if (p.extension() != ".csv") return false;
  std::ifstream in(p);
  std::string first;
  std::getline(in, first);
  return first.rfind("# format=smalife-trial", 0) == 0;
}

int cmd_analyze(const AnalyzeArgs& a) {
  if (!fs::is_directory(a.in)) throw IoError("input directory '" + a.in + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.in))
    if (entry.is_regular_file() && is_trial_csv(entry.path())) files.push_back(entry.path());
  if (files.empty()) throw PreconditionError("no trial logs found in '" + a.in + "'");
  std::sort(files.begin(), files.end());

  std::vector<TrialAnalysis> trials;
  for (const fs::path& f : files) {
    TrialAnalysis t = analyze_trial(read_trial_csv(f));
    for (const std::string& w : t.warnings) std::cerr << "warning: " << t.label << ": " << w << '\n';
    trials.push_back(std::move(t));
  }
  std::sort(trials.begin(), trials.end(), [](const TrialAnalysis& x, const TrialAnalysis& y) {
    if (x.profile != y.profile) return x.profile < y.profile;
    return x.t_set < y.t_set;
  });

  const fs::path out = a.out;
  ensure_dir(out);
  for (const TrialAnalysis& t : trials) write_fmax_csv(t.fmax, out / (t.label + ".fmax.csv"));
  const std::vector<ForceCurve> curves = build_curves(trials);
  write_curve_csv(curves, out / "curve.csv");

  for (Profile p : {Profile::c1, Profile::c2}) {
    std::vector<TrialAnalysis> subset;
    std::copy_if(trials.begin(), trials.end(), std::back_inserter(subset),
                 [p](const TrialAnalysis& t) { return t.profile == p; });
    if (subset.empty()) continue;
    const std::string name(to_string(p));
    write_text(out / ("fmax_" + name + ".svg"),
               svg::render({svg::decay_panel("Per-cycle maximum force, profile " + name, subset)}));
  }
  write_text(out / "curve.svg", svg::render({svg::force_curve_panel(curves)}));

  for (const ForceCurve& c : curves)
    for (const CurvePoint& pt : c.points)
      std::cout << to_string(c.profile) << " T_set=" << fmt(pt.t_set) << " F_inf=" << fmt(pt.f_inf, 5) << " N ("
                << to_string(pt.family) << ", rmse " << fmt(pt.rmse, 3) << ")\n";
  return 0;
}

// ---------------------------------------------------------------- limit

struct LimitArgs {
  std::string curves;
  double delta = 0.1;
  std::string out;
};

int cmd_limit(const LimitArgs& a) {
  fs::path curve_path = a.curves;
  if (fs::is_directory(curve_path)) curve_path /= "curve.csv";
  const std::vector<ForceCurve> curves = read_curve_csv(curve_path);
  const ForceCurve* c1 = nullptr;
  const ForceCurve* c2 = nullptr;
  for (const ForceCurve& c : curves) (c.profile == Profile::c1 ? c1 : c2) = &c;
  if (!c1 || !c2)
    throw PreconditionError("limit selection needs curves for both profiles c1 and c2; '" + curve_path.string() +
                            "' has only " + (c1 ? "c1" : c2 ? "c2" : "none"));
  const LimitResult r = select_limit(*c1, *c2, a.delta);
  for (const std::string& d : r.diagnostics) std::cerr << "warning: " << d << '\n';

  const fs::path out = a.out.empty() ? curve_path.parent_path() : fs::path(a.out);
  if (!out.empty()) ensure_dir(out);
  write_text(out / "limit.txt", fmt(r.limit, 17) + "\n");
  std::cout << fmt(r.limit, 17) << '\n';
  std::cerr << "knee c1 = " << fmt(r.knee_c1) << " degC, knee c2 = " << fmt(r.knee_c2) << " degC\n";
  return 0;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  double t_low = 140.0;
  double t_high = 230.0;
  int cycles = 150;
  std::string config;
  std::string out;
};

int cmd_validate(const ValidateArgs& a) {
  ValidationConfig vc;
  vc.base = load_or_default(a.config).base;
  vc.t_low = a.t_low;
  vc.t_high = a.t_high;
  vc.cycles = a.cycles;
  const double reachable = equilibrium_temperature(vc.base.thermal, vc.base.c1.duty);
  for (double t : {a.t_low, a.t_high})
    if (!(t > vc.base.thermal.t_amb) || !(t - vc.base.c1.tol < reachable))
      throw ConfigError("validate: temperature " + fmt(t) + " degC is outside the reachable range (" +
                        fmt(vc.base.thermal.t_amb) + ", " + fmt(reachable + vc.base.c1.tol) +
                        ") for c1 duty " + fmt(vc.base.c1.duty));
  const ValidationReport r = run_validation(vc);

  std::ostringstream body;
  auto specimen = [&](const char* name, const SpecimenReport& s) {
    body << name << ": cycled at " << fmt(s.t_fatigue) << " degC, d = " << fmt(s.d_final, 5)
         << ", blocked force at " << fmt(vc.t_recycle) << " degC = " << fmt(s.force_at_recycle, 5) << " N";
    if (s.recycle_cycles > 0)
      body << ", mean re-cycle peak = " << fmt(s.mean_recycle_fmax, 5) << " N over " << s.recycle_cycles
           << " cycles";
    body << '\n';
  };
  specimen("low ", r.low);
  specimen("high", r.high);
  body << "ratio high/low = " << fmt(r.ratio, 5) << '\n';
  std::cout << body.str();
  if (!a.out.empty()) {
    ensure_dir(a.out);
    write_text(fs::path(a.out) / "validate.txt", body.str());
  }
  return 0;
}

// ---------------------------------------------------------------- plot

struct PlotArgs {
  std::string in;
  std::string out;
};

int cmd_plot(const PlotArgs& a) {
  const TrialLog log = read_trial_csv(fs::path(a.in));
  const fs::path out = a.out;
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  write_text(out, svg::render(svg::trial_panels(log)));
  std::cout << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smalife: SMA actuator life workbench"};
  app.require_subcommand(1);

  IdentifyArgs ida;
  auto* identify = app.add_subcommand("identify", "Identify thermal parameters from a duty/temperature log");
  auto* id_log = identify->add_option("--log", ida.log, "Trial CSV or two-column temp_C,duty CSV");
  auto* id_syn = identify->add_flag("--synthetic", ida.synthetic, "Generate a 10-minute excitation log first");
  id_log->excludes(id_syn);
  identify->add_option("--seed", ida.seed, "Seed for the synthetic excitation and noise");
  identify->add_option("--noise", ida.noise, "Synthetic temperature noise sigma, degC")->check(CLI::NonNegativeNumber);
  identify->add_option("--dt", ida.dt, "Sample period for two-column logs, s")->check(CLI::PositiveNumber);
  identify->add_option("--config", ida.config, "Config file for the synthetic plant");
  identify->add_option("--out", ida.out, "Output directory for id.csv");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run one trial and write its CSV log");
  simulate->add_option("--config", sa.config, "Config file (default: built-in default.json)");
  simulate->add_option("--profile", sa.profile, "c1 or c2")->check(CLI::IsMember({"c1", "c2"}));
  simulate->add_option("--t-set", sa.t_set, "Limit temperature, degC");
  simulate->add_option("--cycles", sa.cycles, "Override the cycle count");
  simulate->add_option("--out", sa.out, "Output directory");

  SweepArgs swa;
  auto* sweep = app.add_subcommand("sweep", "Run the temperature sweep for both profiles");
  sweep->add_option("--config", swa.config, "Config file (default: built-in default.json)");
  sweep->add_option("--out", swa.out, "Output directory")->required();
  sweep->add_option("--jobs", swa.jobs, "Parallel sweep cells");
  sweep->add_flag("--resume", swa.resume, "Skip cells already completed with the same config hash");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Per-cycle peaks, decay fits, force curves and plots");
  analyze->add_option("--in", aa.in, "Directory of trial CSVs")->required();
  analyze->add_option("--out", aa.out, "Output directory")->required();

  LimitArgs la;
  auto* limit = app.add_subcommand("limit", "Select the conservative long-life temperature limit");
  limit->add_option("--curves", la.curves, "curve.csv or the directory holding it")->required();
  limit->add_option("--delta", la.delta, "Plateau departure threshold, N")->check(CLI::NonNegativeNumber);
  limit->add_option("--out", la.out, "Directory for limit.txt (default: next to curve.csv)");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "A/B degradation comparison at two fatigue temperatures");
  validate->add_option("--t-low", va.t_low, "Low fatigue temperature, degC");
  validate->add_option("--t-high", va.t_high, "High fatigue temperature, degC");
  validate->add_option("--cycles", va.cycles, "Total cycles per specimen")->check(CLI::NonNegativeNumber);
  validate->add_option("--config", va.config, "Config file (default: built-in default.json)");
  validate->add_option("--out", va.out, "Directory for validate.txt");

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Plot a trial log's temperature and force traces as SVG");
  plot->add_option("--in", pa.in, "Trial CSV")->required();
  plot->add_option("--out", pa.out, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    if (*identify) {
      if (!ida.synthetic && ida.log.empty()) return fail("usage", "identify needs --log or --synthetic", kExitUsage);
      return cmd_identify(ida);
    }
    if (*simulate) return cmd_simulate(sa);
    if (*sweep) return cmd_sweep(swa);
    if (*analyze) return cmd_analyze(aa);
    if (*limit) return cmd_limit(la);
    if (*validate) return cmd_validate(va);
    if (*plot) return cmd_plot(pa);
  } catch (const Error& e) {
    return fail(to_string(e.category()), e.what(), exit_code(e.category()));
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitInternal);
  }
  return kExitUsage;
}
