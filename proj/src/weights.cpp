#include "fmeval/weights.hpp"

#include "fmeval/errors.hpp"

namespace fmeval {

WeightVector WeightVector::normalized() const {
  validate();
  WeightVector out = *this;
  const double total = sum();
  for (double& w : out.values) w /= total;
  return out;
}

void WeightVector::validate() const {
  for (double w : values) {
    if (!(w >= 0.0)) throw Error(Errc::range_error, "facet weights must be non-negative");
  }
  if (sum() <= 0.0) throw Error(Errc::range_error, "facet weights must not all be zero");
}

}  // namespace fmeval
