#pragma once

#include <array>

#include "fmeval/facet.hpp"

namespace fmeval {

// Non-negative per-facet weights, ordered B, M, R, C. Aggregation normalizes
// them to sum 1; the default comes from the linear fit on the annotation data.
struct WeightVector {
  std::array<double, 4> values{0.1, 0.3, 0.3, 0.3};

  static WeightVector defaults() { return WeightVector{}; }

  double operator[](FacetKind kind) const { return values[static_cast<int>(kind)]; }

  double sum() const { return values[0] + values[1] + values[2] + values[3]; }

  WeightVector normalized() const;

  // Throws Error(range_error) on a negative weight or an all-zero vector.
  void validate() const;
};

}  // namespace fmeval
