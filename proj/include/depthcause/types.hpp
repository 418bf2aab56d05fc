#ifndef DEPTHCAUSE_TYPES_HPP
#define DEPTHCAUSE_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace depthcause {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Valid data on which the requested analysis degenerates, e.g. a group
// split that leaves one side empty (CLI exit code 3).
class DegenerateAnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UnitId {
  std::string name;
  int index = 0;
};

inline bool operator==(const UnitId& a, const UnitId& b) {
  return a.name == b.name && a.index == b.index;
}

enum class DepthMethod { MBD, FM, ED, PROJECTION };

const char* to_string(DepthMethod method);

// n trajectories sampled on a shared, strictly increasing time grid.
struct FunctionalSample {
  Vector grid;                 // m time points
  Matrix curves;               // n x m, row i = trajectory of units[i]
  std::vector<UnitId> units;   // size n

  Index n() const { return curves.rows(); }
  Index m() const { return curves.cols(); }

  void validate() const;

  FunctionalSample subset(const std::vector<Index>& rows) const;
};

// n outcome vectors in R^l, rows aligned with units.
struct MultivariateSample {
  Matrix points;               // n x l
  std::vector<UnitId> units;   // size n
  std::vector<std::string> variable_names;  // size l

  Index n() const { return points.rows(); }
  Index l() const { return points.cols(); }

  void validate() const;
};

// Per-object depth values in [0,1] with the method that produced them.
struct DepthVector {
  Vector values;
  DepthMethod method = DepthMethod::MBD;
  std::vector<UnitId> units;

  Index n() const { return values.size(); }
};

}  // namespace depthcause

#endif
