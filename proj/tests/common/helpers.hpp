#pragma once

#include <string>
#include <vector>

#include "kserver/metric.hpp"
#include "kserver/work_function.hpp"
#include "oracles.hpp"

namespace testing {

using namespace kserver;

/// Circle of circumference 8 with points every 0.5 (scale 2).
inline SpacePtr circle8() { return build_circle(16, 16, 2); }
/// Circle of circumference 8 with points at the integers.
inline SpacePtr circle8_unit() { return build_circle(8, 8, 1); }

inline Configuration cfg(const MetricSpace& s, std::initializer_list<const char*> pts) {
  std::vector<PointId> ids;
  for (const char* p : pts) ids.push_back(s.point(p));
  return Configuration(std::span<const PointId>(ids));
}

inline oracle::Table table_of(const WorkFunction& w) {
  oracle::Table t;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Configuration& c = w.configs().at(i);
    t[oracle::Multiset(c.begin(), c.end())] = w.at(i);
  }
  return t;
}

inline std::vector<int> antipodes(const MetricSpace& s) {
  std::vector<int> out;
  for (int p = 0; p < s.size(); ++p) out.push_back(s.antipode(p));
  return out;
}

inline std::vector<int> original(const MetricSpace& s) {
  return {s.original_points().begin(), s.original_points().end()};
}

inline std::string fixture(const std::string& name) { return std::string(KSERVER_FIXTURES) + "/" + name; }

}  // namespace testing
