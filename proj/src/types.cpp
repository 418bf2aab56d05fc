#include "depthcause/types.hpp"

namespace depthcause {

const char* to_string(DepthMethod method) {
  switch (method) {
    case DepthMethod::MBD: return "mbd";
    case DepthMethod::FM: return "fm";
    case DepthMethod::ED: return "ed";
    case DepthMethod::PROJECTION: return "projection";
  }
  return "unknown";
}

void FunctionalSample::validate() const {
  if (n() < 1 || m() < 1)
    throw DataError("functional sample needs n >= 1 curves and m >= 1 grid points");
  if (grid.size() != m())
    throw DataError("grid length does not match curve length");
  if (static_cast<Index>(units.size()) != n())
    throw DataError("unit list does not match curve count");
  for (Index j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1]))
      throw DataError("grid is not strictly increasing");
  }
  if (!curves.allFinite())
    throw DataError("functional sample contains non-finite values");
}

FunctionalSample FunctionalSample::subset(const std::vector<Index>& rows) const {
  FunctionalSample out;
  out.grid = grid;
  out.curves.resize(static_cast<Index>(rows.size()), m());
  out.units.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.curves.row(static_cast<Index>(k)) = curves.row(rows[k]);
    out.units.push_back({units[rows[k]].name, static_cast<int>(k)});
  }
  return out;
}

void MultivariateSample::validate() const {
  if (n() < 1 || l() < 1)
    throw DataError("multivariate sample needs n >= 1 rows and l >= 1 columns");
  if (static_cast<Index>(units.size()) != n())
    throw DataError("unit list does not match row count");
  if (static_cast<Index>(variable_names.size()) != l())
    throw DataError("variable names do not match column count");
  if (!points.allFinite())
    throw DataError("multivariate sample contains non-finite values");
}

}  // namespace depthcause
