#include "lstmopt/results_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json_util.hpp"
#include "lstmopt/errors.hpp"

namespace lstmopt {
namespace {

using detail::json;

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const char* column) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError(std::string("results CSV: bad ") + column + " value '" + text + "'");
  }
  return v;
}

std::optional<double> parse_opt(const std::string& text, const char* column) {
  if (text.empty()) return std::nullopt;
  return parse_double(text, column);
}

std::string fixed(const std::optional<double>& v, int digits) {
  if (!v) return "n/a";
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << *v;
  return o.str();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_results_csv(std::ostream& out, std::span<const EvalRecord> records) {
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.instance_id << ',' << r.c_ratio << ',' << format_double(r.f_ratio) << ','
        << r.horizon << ',' << to_string(r.mode) << ',' << format_double(r.level_pct) << ','
        << to_string(r.status) << ',' << format_double(r.z_star) << ',' << opt(r.z_tilde) << ','
        << format_double(r.time_plain) << ',' << format_double(r.time_ml) << ',' << r.k_fixed
        << ',' << opt(r.optgap_pct) << '\n';
  }
}

std::vector<EvalRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw FormatError("results CSV: unexpected header");
  }
  std::vector<EvalRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 13) throw FormatError("results CSV: expected 13 fields in '" + line + "'");
    EvalRecord r;
    r.instance_id = f[0];
    r.c_ratio = static_cast<int>(parse_double(f[1], "c_ratio"));
    r.f_ratio = parse_double(f[2], "f_ratio");
    r.horizon = static_cast<std::size_t>(parse_double(f[3], "T"));
    try {
      r.mode = parse_mode(f[4]);
      r.status = parse_status(f[6]);
    } catch (const Error& e) {
      throw FormatError(std::string("results CSV: ") + e.what());
    }
    r.level_pct = parse_double(f[5], "level_pct");
    r.z_star = f[7].empty() ? std::nan("") : parse_double(f[7], "z_star");
    r.z_tilde = parse_opt(f[8], "z_tilde");
    r.time_plain = parse_double(f[9], "time_plain_s");
    r.time_ml = parse_double(f[10], "time_ml_s");
    r.k_fixed = static_cast<std::size_t>(parse_double(f[11], "k_fixed"));
    r.optgap_pct = parse_opt(f[12], "optgap_pct");
    out.push_back(std::move(r));
  }
  return out;
}

void write_solve_csv(std::ostream& out, std::span<const SolveRow> rows) {
  out << kSolveHeader << '\n';
  for (const auto& r : rows) {
    const Solution& s = r.solution;
    out << r.instance_id << ',' << r.horizon << ',' << r.solver << ',' << to_string(s.status)
        << ',' << (s.has_values() ? format_double(s.objective) : std::string()) << ','
        << format_double(s.stats.wall_time_seconds) << ',' << s.stats.nodes_explored << ','
        << s.stats.lp_solves << ',' << s.stats.cuts_added << ',' << opt(s.stats.mip_gap) << '\n';
  }
}

void write_history_csv(std::ostream& out, std::span<const EpochRecord> history) {
  out << "epoch,loss,val_accuracy,wall_time\n";
  for (const auto& h : history) {
    out << h.epoch << ',' << format_double(h.train_loss) << ',' << format_double(h.val_accuracy)
        << ',' << format_double(h.wall_time) << '\n';
  }
}

void write_probabilities(std::ostream& out, std::span<const ProbRecord> records,
                         bool include_seconds) {
  for (const auto& r : records) {
    json j = {{"instance_id", r.instance_id}, {"probs", r.pred.probs}};
    if (include_seconds) j["predict_seconds"] = r.pred.seconds;
    out << j.dump() << '\n';
  }
}

std::vector<ProbRecord> read_probabilities(std::istream& in) {
  std::vector<ProbRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = detail::parse_json(line, "probability record");
    ProbRecord r;
    r.instance_id = detail::get_field<std::string>(j, "instance_id", "probability record");
    r.pred.probs = detail::get_field<std::vector<double>>(j, "probs", "probability record");
    if (j.contains("predict_seconds")) {
      r.pred.seconds = detail::get_field<double>(j, "predict_seconds", "probability record");
    }
    if (j.contains("source")) {
      r.pred.source = detail::get_field<std::string>(j, "source", "probability record");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string render_report(const std::map<GroupKey, MetricsReport>& groups) {
  std::ostringstream out;
  bool first = true;
  std::optional<std::tuple<int, double, std::size_t>> current;
  for (const auto& [key, rep] : groups) {
    const auto instance_group = std::make_tuple(key.c_ratio, key.f_ratio, key.horizon);
    if (!current || *current != instance_group) {
      if (!first) out << '\n';
      first = false;
      current = instance_group;
      out << "### c = " << key.c_ratio << ", f = " << format_double(key.f_ratio)
          << ", T = " << key.horizon << "\n\n"
          << "| mode | pred (%) | m | timeCPX (s) | timeML (s) | timeimp | timegain (%) | "
             "inf (%) | optgap (%) |\n"
          << "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    }
    out << "| " << to_string(key.mode) << " | " << format_double(key.level_pct) << " | " << rep.m
        << " | " << fixed(rep.time_cpx, 4) << " | " << fixed(rep.time_ml, 4) << " | "
        << fixed(rep.timeimp, 1) << " | " << fixed(rep.timegain_pct, 1) << " | "
        << fixed(rep.inf_pct, 2) << " | " << fixed(rep.optgap_pct, 2) << " |\n";
  }
  return out.str();
}

std::string render_figure_csv(const std::map<GroupKey, MetricsReport>& groups,
                              FigureMetric metric) {
  std::ostringstream out;
  out << "c_ratio,f_ratio,T,level_pct,value\n";
  for (const auto& [key, rep] : groups) {
    if (key.mode != EvalMode::HardFix) continue;
    std::optional<double> v;
    switch (metric) {
      case FigureMetric::OptGap: v = rep.optgap_pct; break;
      case FigureMetric::Infeasibility: v = rep.inf_pct; break;
      case FigureMetric::TimeImprovement: v = rep.timeimp; break;
    }
    out << key.c_ratio << ',' << format_double(key.f_ratio) << ',' << key.horizon << ','
        << format_double(key.level_pct) << ',' << opt(v) << '\n';
  }
  return out.str();
}

}  // namespace lstmopt
