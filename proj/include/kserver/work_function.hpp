#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kserver/config_space.hpp"

namespace kserver {

/// Where a table came from. Several statements only hold for work functions
/// generated from a cone by requests; everything else is labelled.
enum class Origin { reachable, ingested };

/// Dense exact table over every configuration of a ConfigSpace.
class WorkFunction {
 public:
  WorkFunction(ConfigSpacePtr configs, std::vector<Value> values,
               std::optional<PointId> last_request = std::nullopt,
               Origin origin = Origin::ingested);

  /// w(X) = d(C0, X).
  static WorkFunction cone(ConfigSpacePtr configs, const Configuration& c0);

  const ConfigSpace& configs() const { return *configs_; }
  const ConfigSpacePtr& configs_ptr() const { return configs_; }
  const MetricSpace& metric() const { return configs_->metric(); }
  int k() const { return configs_->k(); }
  std::size_t size() const { return values_.size(); }

  Value at(std::size_t idx) const { return values_[idx]; }
  Value operator()(const Configuration& c) const { return values_[configs_->index_of(c)]; }
  std::span<const Value> values() const { return values_; }

  std::optional<PointId> last_request() const { return last_request_; }
  Origin origin() const { return origin_; }

  Value min_value() const;

  friend bool operator==(const WorkFunction& a, const WorkFunction& b) {
    return a.values_ == b.values_;
  }

 private:
  ConfigSpacePtr configs_;
  std::vector<Value> values_;
  std::optional<PointId> last_request_;
  Origin origin_;
};

/// w ^ r, computed as w'(C) = min over x in C of w(C - x + r) + d(x, r). This
/// agrees with min over X containing r of w(X) + d(X, C) for 1-Lipschitz w.
WorkFunction update(const WorkFunction& w, PointId r);

struct SupportSet {
  std::vector<std::size_t> members;  // configuration indices, ascending
  std::vector<Value> values;
};

/// Configurations not supported by any other configuration. For 1-Lipschitz w
/// it suffices to test single-point exchanges X - x + y.
SupportSet support(const WorkFunction& w);
/// w(X) = min over the support of value + matching distance.
std::vector<Value> reconstruct_from_support(const ConfigSpace& configs, const SupportSet& s);

template <class W>
struct Verdict {
  bool holds = true;
  std::optional<W> witness;
  explicit operator bool() const { return holds; }
};

struct PairWitness {
  Configuration first;
  Configuration second;
};

Verdict<PairWitness> is_lipschitz(const WorkFunction& w);
/// Exchange property checked for every pair; the bijection search tries
/// maps fixing X and Y's common points first and then all bijections.
/// Unsupported above k = 5.
Verdict<PairWitness> is_quasiconvex(const WorkFunction& w);

/// argmin over X of w(X) - d(y^k, X).
std::vector<Configuration> minimizers(const WorkFunction& w, PointId y);
/// max over A of (w ^ r)(A) - w(A).
Value extended_cost(const WorkFunction& w, PointId r);
Value extended_cost(const WorkFunction& before, const WorkFunction& after);
/// The minimizers of w w.r.t. r are exactly the configurations that both
/// maximise (w ^ r) - w and minimise (w ^ r) - d(r^k, .).
bool check_duality(const WorkFunction& w, PointId r);
/// w(X) = w(X - x + y) + d(x, y).
bool resolves_from(const WorkFunction& w, const Configuration& x_config, PointId x, PointId y);

}  // namespace kserver
