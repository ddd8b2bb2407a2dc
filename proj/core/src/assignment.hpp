#pragma once

// Maximum-weight rectangular assignment (Hungarian method on a padded square
// matrix). Internal to the matcher.

#include <cstdint>
#include <vector>

namespace decide::detail {

/// weight[r][c] for r < rows, c < cols. Returns, per row, the assigned column
/// or -1. Exactly min(rows, cols) rows are assigned.
std::vector<int> max_weight_assignment(const std::vector<std::vector<std::int64_t>>& weight);

}  // namespace decide::detail
