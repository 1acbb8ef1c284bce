#include "kserver/lemmas.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "kserver/error.hpp"

namespace kserver {

namespace {

std::vector<std::size_t> argmin_where(const WorkFunction& w, const std::function<bool(const Configuration&)>& keep) {
  Value best = std::numeric_limits<Value>::max();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!keep(w.configs().at(i))) continue;
    if (w.at(i) < best) {
      best = w.at(i);
      out.clear();
    }
    if (w.at(i) == best) out.push_back(i);
  }
  return out;
}

// Every multiset of size < k over the space's points.
std::vector<Configuration> small_multisets(int n, int k) {
  std::vector<Configuration> out{Configuration{}};
  std::vector<Configuration> layer{Configuration{}};
  for (int size = 1; size < k; ++size) {
    std::vector<Configuration> next;
    for (const auto& c : layer) {
      PointId from = c.empty() ? 0 : c[c.size() - 1];
      for (PointId p = from; p < n; ++p) next.push_back(c.with(p));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

Verdict<std::string> check_quasi_min(const WorkFunction& w) {
  if (w.k() == 1) return {};
  const ConfigSpace& cs = w.configs();
  for (std::size_t xi : argmin_where(w, [](const Configuration&) { return true; })) {
    const Configuration& x_config = cs.at(xi);
    for (int pos = 0; pos < x_config.size(); ++pos) {
      const PointId x = x_config[pos];
      // With a repeated x, X - x still contains x and no Y avoiding x can contain it.
      if (x_config.count(x) != 1) continue;
      const Configuration rest = x_config.without(x);
      auto ys = argmin_where(w, [&](const Configuration& y) { return !y.contains(x); });
      bool found = std::any_of(ys.begin(), ys.end(), [&](std::size_t yi) { return cs.at(yi).includes(rest); });
      if (!found)
        return {false, "X=" + to_string(x_config) + " x=" + std::to_string(x) + ": no minimiser avoiding x contains X-x"};
    }
  }
  return {};
}

Verdict<std::string> check_quasi_sub(const WorkFunction& w) {
  if (w.k() == 1) return {};
  const ConfigSpace& cs = w.configs();
  const auto global = argmin_where(w, [](const Configuration&) { return true; });
  for (const Configuration& a : small_multisets(cs.num_points(), cs.k())) {
    auto ys = argmin_where(w, [&](const Configuration& y) { return y.includes(a); });
    for (std::size_t xi : global) {
      const Configuration x_rest = cs.at(xi).minus(a);
      bool found = std::any_of(ys.begin(), ys.end(), [&](std::size_t yi) { return x_rest.includes(cs.at(yi).minus(a)); });
      if (!found) return {false, "X=" + to_string(cs.at(xi)) + " A=" + to_string(a) + ": no Y with Y-A inside X-A"};
    }
  }
  return {};
}

Verdict<std::string> check_quasi_greedy(const WorkFunction& w) {
  if (w.k() == 1) return {};
  const ConfigSpace& cs = w.configs();
  const auto global = argmin_where(w, [](const Configuration&) { return true; });
  for (const Configuration& a : small_multisets(cs.num_points(), cs.k())) {
    for (std::size_t yi : argmin_where(w, [&](const Configuration& y) { return y.includes(a); })) {
      const Configuration y_rest = cs.at(yi).minus(a);
      bool found = std::any_of(global.begin(), global.end(), [&](std::size_t xi) { return cs.at(xi).minus(a).includes(y_rest); });
      if (!found) return {false, "Y=" + to_string(cs.at(yi)) + " A=" + to_string(a) + ": no global minimiser X with Y-A inside X-A"};
    }
  }
  return {};
}

Configuration greedy_minimize(const WorkFunction& w, const Configuration& start) {
  const ConfigSpace& cs = w.configs();
  require(start.size() == cs.k(), "start configuration has the wrong size");
  std::vector<PointId> current(start.begin(), start.end());
  for (std::size_t i = 0; i < current.size(); ++i) {
    PointId best_point = current[i];
    Value best = std::numeric_limits<Value>::max();
    for (PointId y = 0; y < cs.num_points(); ++y) {
      current[i] = y;
      Value v = w(Configuration(std::span<const PointId>(current)));
      if (v < best) best = v, best_point = y;
    }
    current[i] = best_point;
  }
  return Configuration(std::span<const PointId>(current));
}

Verdict<std::string> check_resolve_monotone(const WorkFunction& w) {
  if (!w.last_request()) fail(ErrorKind::invalid_input, "resolve check needs a last request");
  const PointId r = *w.last_request();
  const ConfigSpace& cs = w.configs();
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const Configuration& x_config = cs.at(idx);
    for (int i = 0; i < cs.k(); ++i) {
      const PointId x = x_config[i];
      if (!resolves_from(w, x_config, x, r)) continue;
      for (int j = 0; j < cs.k(); ++j) {
        if (j == i) continue;
        const Configuration other = x_config.replaced(x_config[j], x);
        if (!resolves_from(w, other, x, r))
          return {false, "X=" + to_string(x_config) + " resolves from " + std::to_string(x) + " but " +
                             to_string(other) + " does not"};
      }
    }
  }
  return {};
}

}  // namespace kserver
