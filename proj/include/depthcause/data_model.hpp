#ifndef DEPTHCAUSE_DATA_MODEL_HPP
#define DEPTHCAUSE_DATA_MODEL_HPP

#include "depthcause/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace depthcause {

struct SubsidyRecord {
  std::string unit;
  int year = 0;
  std::string subsidy_type;
  double amount = 0.0;      // >= 0
  double population = 0.0;  // > 0
};

// Long-format ingestion, header `unit,year,subsidy_type,amount,population`.
// Rejects duplicate (unit, year, subsidy_type) keys, negative amounts and
// non-positive populations.
std::vector<SubsidyRecord> load_subsidies(const std::string& path);

// Wide-format ingestion, header `unit,<name1>,...,<namel>`, one row per unit.
MultivariateSample load_outcomes(const std::string& path);

// Treatment aggregation: for unit v and year t present for every unit,
// S^v(t) = (sum of amounts over subsidy types) / population. Years missing
// for any unit are dropped from the grid for all units; units are ordered
// by name so the output does not depend on record order.
FunctionalSample aggregate_h(const std::vector<SubsidyRecord>& records);

// Long-format curve CSV, header `unit,t,value`. Values are written with 17
// significant digits so a write/read round trip is bit-exact.
FunctionalSample read_functional_csv(const std::string& path);
void write_functional_csv(const FunctionalSample& sample, std::ostream& out);

// Reorders outcome rows to match the functional sample's unit names.
MultivariateSample align_outcomes(const MultivariateSample& outcomes,
                                  const FunctionalSample& functional);

// 17-significant-digit formatting used by every CSV writer.
std::string format_double(double v);

// FNV-1a 64-bit digest of a file's bytes, for run manifests.
std::uint64_t file_digest(const std::string& path);

}  // namespace depthcause

#endif
