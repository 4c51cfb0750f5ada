#include "smalife/csv_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smalife/config.hpp"
#include "text.hpp"

namespace smalife {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(text::trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

double field_double(std::string_view s, std::size_t line, const char* column) {
  if (auto v = text::to_double(s)) return *v;
  throw ParseError(line, std::string("column ") + column + ": '" + std::string(s) + "' is not a number");
}

std::string real(double v) { return text::precise(v, kCsvDigits); }

}  // namespace

void write_trial_csv(const TrialLog& log, std::ostream& out) {
  out << "# format=smalife-trial-v1\n";
  for (const auto& [k, v] : flatten(log.config)) out << "# " << k << '=' << v << '\n';
  out << kTrialHeader << '\n';
  for (const TrialRow& r : log.rows) {
    out << real(r.time_s) << ',' << r.cycle << ',' << to_string(r.phase) << ',' << real(r.duty_nominal) << ','
        << real(r.duty_applied) << ',' << real(r.temp_true) << ',' << real(r.temp_meas) << ','
        << real(r.force_true) << ',' << real(r.force_meas) << '\n';
  }
}

void write_trial_csv(const TrialLog& log, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_trial_csv(log, out);
  if (!out) throw IoError("write failed for " + path.string());
}

TrialLog read_trial_csv(std::istream& in) {
  FlatConfig meta;
  TrialLog log;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  bool format_seen = false;

  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = text::trim(raw);
    if (!header_seen) {
      if (s.empty()) continue;
      if (s.front() == '#') {
        s = text::trim(s.substr(1));
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ParseError(line, "metadata line without '='");
        std::string key(text::trim(s.substr(0, eq)));
        std::string value(text::trim(s.substr(eq + 1)));
        if (key == "format") {
          if (value != "smalife-trial-v1") throw ParseError(line, "unsupported format '" + value + "'");
          format_seen = true;
          continue;
        }
        meta.emplace_back(std::move(key), std::move(value));
        continue;
      }
      if (s != kTrialHeader) throw ParseError(line, "expected column header '" + std::string(kTrialHeader) + "'");
      if (!format_seen) throw ParseError(line, "missing '# format=' metadata line");
      try {
        log.config = unflatten(meta);
      } catch (const Error& e) {
        throw ParseError(line, std::string("bad metadata: ") + e.what());
      }
      header_seen = true;
      continue;
    }
    if (s.empty()) continue;

    const auto f = split(s);
    if (f.size() != 9)
      throw ParseError(line, "expected 9 columns, found " + std::to_string(f.size()));
    TrialRow r;
    r.time_s = field_double(f[0], line, "time_s");
    auto cycle = text::to_int<int>(f[1]);
    if (!cycle) throw ParseError(line, "column cycle: '" + std::string(f[1]) + "' is not an integer");
    r.cycle = *cycle;
    try {
      r.phase = phase_from_string(f[2]);
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
    r.duty_nominal = field_double(f[3], line, "duty_nominal");
    r.duty_applied = field_double(f[4], line, "duty_applied");
    r.temp_true = field_double(f[5], line, "temp_true_C");
    r.temp_meas = field_double(f[6], line, "temp_meas_C");
    r.force_true = field_double(f[7], line, "force_true_N");
    r.force_meas = field_double(f[8], line, "force_meas_N");
    if (!log.rows.empty() && !(r.time_s > log.rows.back().time_s))
      throw ParseError(line, "time_s is not strictly increasing");
    if (!log.rows.empty() && r.cycle < log.rows.back().cycle) throw ParseError(line, "cycle decreases");
    log.rows.push_back(r);
  }
  if (!header_seen) throw ParseError(line + 1, "missing column header");
  return log;
}

TrialLog read_trial_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_trial_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.filename().string() + ": " + e.detail());
  }
}

IdLog read_id_csv(const std::filesystem::path& path, double dt) {
  {
    auto probe = open_in(path);
    std::string first;
    while (std::getline(probe, first) && text::trim(first).empty()) {
    }
    if (text::trim(first).starts_with("#")) {
      const TrialLog log = read_trial_csv(path);
      IdLog out;
      out.dt = log.config.dt;
      for (const TrialRow& r : log.rows) {
        out.temps.push_back(r.temp_meas);
        out.duty.push_back(r.duty_applied);
      }
      return out;
    }
  }

  auto in = open_in(path);
  IdLog out;
  out.dt = dt;
  std::string raw;
  std::size_t line = 0;
  bool header_skipped = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = text::trim(raw);
    if (s.empty()) continue;
    const auto f = split(s);
    if (f.size() != 2) throw ParseError(line, "expected 2 columns (temp_C,duty), found " + std::to_string(f.size()));
    const auto temp = text::to_double(f[0]);
    const auto duty = text::to_double(f[1]);
    if (!temp || !duty) {
      if (out.temps.empty() && !header_skipped && !temp && !duty) {
        header_skipped = true;
        continue;
      }
      throw ParseError(line, "non-numeric value");
    }
    out.temps.push_back(*temp);
    out.duty.push_back(*duty);
  }
  if (out.temps.empty()) throw ParseError(line + 1, "no samples");
  return out;
}

void write_fmax_csv(const DecaySeries& s, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "cycle,f_max\n";
  for (const auto& p : s.points) out << p.cycle << ',' << real(p.force) << '\n';
}

void write_curve_csv(const std::vector<ForceCurve>& curves, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "profile,t_set_C,f_inf_N,family,rmse\n";
  for (const ForceCurve& c : curves)
    for (const CurvePoint& p : c.points)
      out << to_string(c.profile) << ',' << real(p.t_set) << ',' << real(p.f_inf) << ',' << to_string(p.family)
          << ',' << real(p.rmse) << '\n';
}

std::vector<ForceCurve> read_curve_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string raw;
  std::size_t line = 0;
  std::array<std::vector<CurvePoint>, 2> points;
  std::array<bool, 2> present{false, false};
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = text::trim(raw);
    if (s.empty()) continue;
    if (!header) {
      if (s != "profile,t_set_C,f_inf_N,family,rmse") throw ParseError(line, "unexpected curve.csv header");
      header = true;
      continue;
    }
    const auto f = split(s);
    if (f.size() != 5) throw ParseError(line, "expected 5 columns, found " + std::to_string(f.size()));
    try {
      const Profile p = profile_from_string(f[0]);
      CurvePoint pt;
      pt.t_set = field_double(f[1], line, "t_set_C");
      pt.f_inf = field_double(f[2], line, "f_inf_N");
      pt.family = decay_family_from_string(f[3]);
      pt.rmse = field_double(f[4], line, "rmse");
      points[p == Profile::c1 ? 0 : 1].push_back(pt);
      present[p == Profile::c1 ? 0 : 1] = true;
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  }
  if (!header) throw ParseError(line + 1, "missing curve.csv header");
  std::vector<ForceCurve> out;
  for (int i = 0; i < 2; ++i)
    if (present[static_cast<std::size_t>(i)])
      out.push_back(build_force_curve(i == 0 ? Profile::c1 : Profile::c2, points[static_cast<std::size_t>(i)]));
  return out;
}

}  // namespace smalife
