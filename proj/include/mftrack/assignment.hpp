#pragma once

#include <limits>
#include <vector>

namespace mft {

/// Rectangular cost matrix: rows are tracked objects, columns detections.
/// Entries are finite costs or the forbidden sentinel (never matched).
struct CostMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  CostMatrix() = default;
  CostMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), values(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

  static constexpr double forbidden() { return std::numeric_limits<double>::infinity(); }

  double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
};

struct MatchedPair {
  int track;
  int detection;
  double cost;
};

/// A partition of rows and columns into matched pairs and unmatched leftovers.
struct Assignment {
  std::vector<MatchedPair> matched;
  std::vector<int> unmatched_tracks;
  std::vector<int> unmatched_detections;

  double total_cost() const {
    double total = 0.0;
    for (const auto& m : matched) total += m.cost;
    return total;
  }
};

/// Minimum-cost maximum-cardinality matching over allowed entries.
/// Equal-cost optima are normalized toward lower (track, detection) index
/// pairs so repeated runs are reproducible.
Assignment solve_assignment(const CostMatrix& m);

/// Demotes matched pairs costing more than tau_match to unmatched.
Assignment gate_assignment(const Assignment& a, double tau_match);

}  // namespace mft
