#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <vector>

#include "kserver/error.hpp"
#include "kserver/metric.hpp"

namespace kserver {

namespace {

// Points shared by both multisets can always be matched to themselves: any
// matching that does otherwise is no cheaper by the triangle inequality.
int strip_common(const Configuration& x, const Configuration& y, std::array<PointId, kMaxServers>& a,
                 std::array<PointId, kMaxServers>& b) {
  int i = 0, j = 0, m = 0, mb = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) {
      ++i, ++j;
    } else if (x[i] < y[j]) {
      a[static_cast<std::size_t>(m++)] = x[i++];
    } else {
      b[static_cast<std::size_t>(mb++)] = y[j++];
    }
  }
  while (i < x.size()) a[static_cast<std::size_t>(m++)] = x[i++];
  while (j < y.size()) b[static_cast<std::size_t>(mb++)] = y[j++];
  return m;
}

Value enumerate(const PointId* a, const PointId* b, int m, const MetricSpace& space) {
  if (m == 0) return 0;
  if (m == 1) return space.distance(a[0], b[0]);
  if (m == 2)
    return std::min(space.distance(a[0], b[0]) + space.distance(a[1], b[1]),
                    space.distance(a[0], b[1]) + space.distance(a[1], b[0]));
  std::array<int, kMaxServers> perm{};
  std::iota(perm.begin(), perm.begin() + m, 0);
  Value best = std::numeric_limits<Value>::max();
  do {
    Value total = 0;
    for (int i = 0; i < m; ++i) total += space.distance(a[i], b[perm[static_cast<std::size_t>(i)]]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.begin() + m));
  return best;
}

// Shortest augmenting path assignment with row/column potentials.
Value assignment(const PointId* a, const PointId* b, int m, const MetricSpace& space) {
  if (m == 0) return 0;
  constexpr Value inf = std::numeric_limits<Value>::max() / 4;
  const auto n = static_cast<std::size_t>(m);
  std::vector<Value> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      std::size_t r = match[col0], col1 = 0;
      Value delta = inf;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        Value cur = space.distance(a[r - 1], b[c - 1]) - u[r] - v[c];
        if (cur < minv[c]) minv[c] = cur, way[c] = col0;
        if (minv[c] < delta) delta = minv[c], col1 = c;
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  Value total = 0;
  for (std::size_t c = 1; c <= n; ++c) total += space.distance(a[match[c] - 1], b[c - 1]);
  return total;
}

void check_sizes(const Configuration& x, const Configuration& y) {
  if (x.size() != y.size())
    fail(ErrorKind::invalid_input, "matching between configurations of sizes " + std::to_string(x.size()) +
                                       " and " + std::to_string(y.size()));
}

}  // namespace

Value matching_distance(const Configuration& x, const Configuration& y, const MetricSpace& space) {
  check_sizes(x, y);
  std::array<PointId, kMaxServers> a{}, b{};
  int m = strip_common(x, y, a, b);
  return m <= 5 ? enumerate(a.data(), b.data(), m, space) : assignment(a.data(), b.data(), m, space);
}

Value matching_distance_enumerated(const Configuration& x, const Configuration& y, const MetricSpace& space) {
  check_sizes(x, y);
  return enumerate(x.begin(), y.begin(), x.size(), space);
}

Value matching_distance_assignment(const Configuration& x, const Configuration& y, const MetricSpace& space) {
  check_sizes(x, y);
  return assignment(x.begin(), y.begin(), x.size(), space);
}

}  // namespace kserver
