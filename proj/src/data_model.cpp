#include "depthcause/data_model.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace depthcause {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
    fields.back().pop_back();
  return fields;
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(path + ":" + std::to_string(line_no) + ": non-numeric value '" + field + "'");
  return v;
}

int parse_int(const std::string& field, const std::string& path, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(field.c_str(), &end, 10);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE)
    throw DataError(path + ":" + std::to_string(line_no) + ": non-integer value '" + field + "'");
  return static_cast<int>(v);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

bool read_line(std::ifstream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (line == "\r") continue;
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

std::vector<SubsidyRecord> load_subsidies(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!read_line(in, line))
    throw DataError(path + ": missing header");
  auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"unit", "year", "subsidy_type", "amount", "population"};
  if (std::vector<std::string>(header.begin(), header.end()) != expected)
    throw DataError(path + ": expected header unit,year,subsidy_type,amount,population");

  std::vector<SubsidyRecord> records;
  std::set<std::tuple<std::string, int, std::string>> seen;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    auto f = split_csv_line(line);
    if (f.size() != 5)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 5 columns, got " +
                      std::to_string(f.size()));
    SubsidyRecord r;
    r.unit = f[0];
    r.year = parse_int(f[1], path, line_no);
    r.subsidy_type = f[2];
    r.amount = parse_double(f[3], path, line_no);
    r.population = parse_double(f[4], path, line_no);
    if (r.unit.empty())
      throw DataError(path + ":" + std::to_string(line_no) + ": empty unit name");
    if (r.amount < 0.0)
      throw DataError(path + ":" + std::to_string(line_no) + ": negative amount");
    if (!(r.population > 0.0))
      throw DataError(path + ":" + std::to_string(line_no) + ": non-positive population");
    if (!seen.insert({r.unit, r.year, r.subsidy_type}).second)
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate key (" + r.unit + ", " +
                      std::to_string(r.year) + ", " + r.subsidy_type + ")");
    records.push_back(std::move(r));
  }
  return records;
}

MultivariateSample load_outcomes(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!read_line(in, line))
    throw DataError(path + ": missing header");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "unit")
    throw DataError(path + ": expected header unit,<name1>,...");

  MultivariateSample sample;
  sample.variable_names.assign(header.begin() + 1, header.end());
  const std::size_t l = sample.variable_names.size();

  std::vector<std::vector<double>> rows;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    auto f = split_csv_line(line);
    if (f.size() != l + 1)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(l + 1) +
                      " columns, got " + std::to_string(f.size()));
    if (f[0].empty())
      throw DataError(path + ":" + std::to_string(line_no) + ": empty unit name");
    if (!seen.insert(f[0]).second)
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate unit '" + f[0] + "'");
    sample.units.push_back({f[0], static_cast<int>(rows.size())});
    std::vector<double> row(l);
    for (std::size_t j = 0; j < l; ++j) row[j] = parse_double(f[j + 1], path, line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw DataError(path + ": no data rows");

  sample.points.resize(static_cast<Index>(rows.size()), static_cast<Index>(l));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < l; ++j)
      sample.points(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  sample.validate();
  return sample;
}

FunctionalSample aggregate_h(const std::vector<SubsidyRecord>& records) {
  if (records.empty()) throw DataError("no subsidy records");

  struct YearCell {
    double amount_sum = 0.0;
    double population = 0.0;
    bool has_population = false;
  };
  std::map<std::string, std::map<int, YearCell>> by_unit;
  for (const auto& r : records) {
    YearCell& cell = by_unit[r.unit][r.year];
    cell.amount_sum += r.amount;
    if (cell.has_population) {
      if (cell.population != r.population)
        throw DataError("inconsistent population for (" + r.unit + ", " + std::to_string(r.year) + ")");
    } else {
      cell.population = r.population;
      cell.has_population = true;
      if (!(r.population > 0.0))
        throw DataError("non-positive population for (" + r.unit + ", " + std::to_string(r.year) + ")");
    }
  }

  // Grid = years present for every unit; years missing anywhere are dropped.
  std::vector<int> common_years;
  for (const auto& [year, cell] : by_unit.begin()->second) {
    (void)cell;
    bool everywhere = true;
    for (const auto& [unit, years] : by_unit) {
      (void)unit;
      if (!years.count(year)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) common_years.push_back(year);
  }
  if (common_years.empty()) throw DataError("no common years");

  FunctionalSample sample;
  sample.grid.resize(static_cast<Index>(common_years.size()));
  for (std::size_t j = 0; j < common_years.size(); ++j)
    sample.grid[static_cast<Index>(j)] = common_years[j];
  sample.curves.resize(static_cast<Index>(by_unit.size()), sample.grid.size());
  int idx = 0;
  for (const auto& [unit, years] : by_unit) {  // std::map iterates in name order
    sample.units.push_back({unit, idx});
    for (std::size_t j = 0; j < common_years.size(); ++j) {
      const YearCell& cell = years.at(common_years[j]);
      sample.curves(idx, static_cast<Index>(j)) = cell.amount_sum / cell.population;
    }
    ++idx;
  }
  sample.validate();
  return sample;
}

FunctionalSample read_functional_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!read_line(in, line))
    throw DataError(path + ": missing header");
  auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"unit", "t", "value"})
    throw DataError(path + ": expected header unit,t,value");

  std::vector<std::string> unit_order;
  std::map<std::string, std::map<double, double>> values;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    auto f = split_csv_line(line);
    if (f.size() != 3)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 columns, got " +
                      std::to_string(f.size()));
    double t = parse_double(f[1], path, line_no);
    double v = parse_double(f[2], path, line_no);
    auto it = values.find(f[0]);
    if (it == values.end()) {
      unit_order.push_back(f[0]);
      it = values.emplace(f[0], std::map<double, double>{}).first;
    }
    if (!it->second.emplace(t, v).second)
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate (unit, t) pair");
  }
  if (unit_order.empty())
    throw DataError(path + ": no data rows");

  const std::map<double, double>& first = values.at(unit_order.front());
  std::vector<double> grid;
  for (const auto& [t, v] : first) {
    (void)v;
    grid.push_back(t);
  }
  FunctionalSample sample;
  sample.grid.resize(static_cast<Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) sample.grid[static_cast<Index>(j)] = grid[j];
  sample.curves.resize(static_cast<Index>(unit_order.size()), sample.grid.size());
  for (std::size_t i = 0; i < unit_order.size(); ++i) {
    const auto& row = values.at(unit_order[i]);
    if (row.size() != grid.size())
      throw DataError(path + ": unit '" + unit_order[i] + "' has a different grid");
    std::size_t j = 0;
    for (const auto& [t, v] : row) {
      if (t != grid[j])
        throw DataError(path + ": unit '" + unit_order[i] + "' has a different grid");
      sample.curves(static_cast<Index>(i), static_cast<Index>(j)) = v;
      ++j;
    }
    sample.units.push_back({unit_order[i], static_cast<int>(i)});
  }
  sample.validate();
  return sample;
}

void write_functional_csv(const FunctionalSample& sample, std::ostream& out) {
  out << "unit,t,value\n";
  for (Index i = 0; i < sample.n(); ++i)
    for (Index j = 0; j < sample.m(); ++j)
      out << sample.units[static_cast<std::size_t>(i)].name << ',' << format_double(sample.grid[j])
          << ',' << format_double(sample.curves(i, j)) << '\n';
}

MultivariateSample align_outcomes(const MultivariateSample& outcomes,
                                  const FunctionalSample& functional) {
  std::unordered_map<std::string, Index> row_of;
  for (Index i = 0; i < outcomes.n(); ++i)
    row_of.emplace(outcomes.units[static_cast<std::size_t>(i)].name, i);

  if (outcomes.n() != functional.n())
    throw DataError("outcome and treatment data disagree on the unit set (" +
                    std::to_string(outcomes.n()) + " vs " + std::to_string(functional.n()) +
                    " units)");
  MultivariateSample aligned;
  aligned.variable_names = outcomes.variable_names;
  aligned.points.resize(functional.n(), outcomes.l());
  for (Index i = 0; i < functional.n(); ++i) {
    const std::string& name = functional.units[static_cast<std::size_t>(i)].name;
    auto it = row_of.find(name);
    if (it == row_of.end())
      throw DataError("outcome data is missing unit '" + name + "'");
    aligned.points.row(i) = outcomes.points.row(it->second);
    aligned.units.push_back({name, static_cast<int>(i)});
  }
  aligned.validate();
  return aligned;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::uint64_t h = 14695981039346656037ULL;
  char chunk[4096];
  while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(chunk[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace depthcause
