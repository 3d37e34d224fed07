#pragma once

#include <cstddef>
#include <vector>

#include "lpcoreset/linalg.hpp"

namespace lpcoreset {

/// Rows grouped by exact value of a rounded vector. values[k] is shared by every
/// row in groups[k]; groups are ordered by decreasing |value| with zero last.
struct GroupPartition {
  std::vector<double> values;
  std::vector<std::vector<std::size_t>> groups;

  std::size_t size() const { return values.size(); }
};

/// Rounds each nonzero entry down in magnitude to a power of (1+eps), keeping its
/// sign, then zeroes any entry with |x_i| <= max|b| / n^5. For n = 1 the
/// threshold equals max|b|, so the single nonzero entry is always kept.
DenseVector round_trunc(const DenseVector& b, double eps);

/// Upper bound on the number of distinct nonzero magnitudes round_trunc can emit.
std::size_t max_distinct_magnitudes(std::size_t n, double eps);

GroupPartition partition_groups(const DenseVector& rounded);

}  // namespace lpcoreset
