#pragma once

#include <string>
#include <vector>

namespace fmeval {

// A labeled column of real scores aligned to a record (or observation)
// order. Every entry is defined; alignment with gaps is handled by
// AlignedColumn in meta_eval.
struct ScoreVector {
  std::vector<double> values;
  std::string label;

  std::size_t size() const { return values.size(); }
};

}  // namespace fmeval
