#include "assignment.hpp"

#include <algorithm>
#include <limits>

namespace decide::detail {

std::vector<int> max_weight_assignment(const std::vector<std::vector<std::int64_t>>& weight) {
  const std::size_t rows = weight.size();
  const std::size_t cols = rows ? weight[0].size() : 0;
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
  const std::size_t n = std::max(rows, cols);

  // Minimize cost = -weight; padding cells cost 0.
  auto cost = [&](std::size_t r, std::size_t c) -> std::int64_t {
    if (r < rows && c < cols) return -weight[r][c];
    return 0;
  };

  constexpr auto kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based potentials, e-maxx formulation.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      std::int64_t delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        auto cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      auto j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> out(rows, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    auto r = p[j] - 1;
    if (r < rows && j - 1 < cols) out[r] = static_cast<int>(j - 1);
  }
  return out;
}

}  // namespace decide::detail
