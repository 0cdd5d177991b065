#pragma once

#include "maxbias/bias.hpp"
#include "maxbias/dominance.hpp"
#include "maxbias/efficiency.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace maxbias {

/// 9 significant digits ("%.9g"); infinities as `inf` / `-inf`, NaN as `nan`.
std::string format_number(double x);

/// Inverse of format_number. Throws DomainError on anything else.
double parse_number(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

/// Re-renders every numeric cell through parse_number / format_number.
CsvTable normalize_numbers(const CsvTable& table);

CsvTable curve_table(const BiasCurve& curve);
CsvTable phi_table(const GFunction& gf, std::span<const double> s_grid);
CsvTable avar_table(const std::vector<AvarCell>& cells);
CsvTable c_profile_table(const std::vector<CProfilePoint>& profile);

/// One `key=value` line per report field (the profile itself goes to c_profile_table).
void write_report(std::ostream& out, const DominanceReport& rep);

}  // namespace maxbias
