#include "maxbias/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace maxbias {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double parse_number(const std::string& text) {
  if (text == "inf") return kInf;
  if (text == "-inf") return -kInf;
  if (text == "nan") return std::nan("");
  const char* begin = text.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(x)) {
    throw DomainError("not a number: '" + text + "'");
  }
  return x;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool looks_numeric(const std::string& s) {
  try {
    parse_number(s);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty CSV");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) break;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) throw DomainError("ragged CSV row: " + line);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
}

CsvTable normalize_numbers(const CsvTable& table) {
  CsvTable out = table;
  for (auto& row : out.rows) {
    for (auto& cell : row) {
      if (looks_numeric(cell)) cell = format_number(parse_number(cell));
    }
  }
  return out;
}

CsvTable curve_table(const BiasCurve& curve) {
  CsvTable t{{"eps", "lower", "upper", "exact"}, {}};
  for (const auto& p : curve.points) {
    t.rows.push_back({format_number(p.eps), format_number(p.lower), format_number(p.upper),
                      p.exact ? "1" : "0"});
  }
  return t;
}

CsvTable phi_table(const GFunction& gf, std::span<const double> s_grid) {
  CsvTable t{{"s", "phi"}, {}};
  for (double s : s_grid) t.rows.push_back({format_number(s), format_number(gf.phi(s))});
  return t;
}

CsvTable avar_table(const std::vector<AvarCell>& cells) {
  CsvTable t{{"estimator", "law", "avar", "binding"}, {}};
  for (const auto& c : cells) {
    t.rows.push_back({c.estimator, law_label(c.law), format_number(c.avar), c.binding ? "1" : "0"});
  }
  return t;
}

CsvTable c_profile_table(const std::vector<CProfilePoint>& profile) {
  CsvTable t{{"eps", "c_eps"}, {}};
  for (const auto& p : profile) t.rows.push_back({format_number(p.eps), format_number(p.c_eps)});
  return t;
}

void write_report(std::ostream& out, const DominanceReport& rep) {
  auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : "none"; };
  out << "b=" << format_number(rep.b) << '\n'
      << "K=" << format_number(rep.k) << '\n'
      << "sigma_M=" << format_number(rep.sigma_m) << '\n'
      << "g_sigma_M=" << format_number(rep.g_sigma_m) << '\n'
      << "c0=" << format_number(rep.c0) << '\n'
      << "c0_limit=" << format_number(rep.c0_limit) << '\n'
      << "c1=" << opt(rep.c1) << '\n'
      << "c0_lower_bound=" << format_number(rep.c0_lower_bound) << '\n'
      << "phi_cond_lhs=" << format_number(rep.phi_cond.lhs) << '\n'
      << "phi_cond_rhs=" << format_number(rep.phi_cond.rhs) << '\n'
      << "phi_cond=" << (rep.phi_cond.holds ? "true" : "false") << '\n'
      << "g_convex=" << (rep.g_convex ? "true" : "false") << '\n'
      << "g_sigma_M_le_b=" << (rep.g_sigma_m_le_b ? "true" : "false") << '\n'
      << "interval_lo=" << (rep.dominance_interval ? format_number(rep.dominance_interval->first) : "none") << '\n'
      << "interval_hi=" << (rep.dominance_interval ? format_number(rep.dominance_interval->second) : "none") << '\n'
      << "verdict=" << to_string(rep.verdict) << '\n'
      << "reason=" << (rep.reason.empty() ? "none" : rep.reason) << '\n'
      << "profile_points=" << rep.c_of_eps_profile.size() << '\n';
}

}  // namespace maxbias
