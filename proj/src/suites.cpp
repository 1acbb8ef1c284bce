#include "kserver/suites.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "kserver/error.hpp"
#include "kserver/io.hpp"
#include "kserver/lemmas.hpp"
#include "kserver/potential.hpp"

namespace kserver {

namespace {

constexpr std::array<std::pair<Suite, std::string_view>, 12> kNames{{
    {Suite::duality, "duality"},
    {Suite::quasiconvex, "quasiconvex"},
    {Suite::lipschitz, "lipschitz"},
    {Suite::lemmas, "lemmas"},
    {Suite::update_equivalence, "update_equivalence"},
    {Suite::perm_intuition, "perm_intuition"},
    {Suite::push3, "push3"},
    {Suite::equivalence, "equivalence"},
    {Suite::mst_leaf, "mst_leaf"},
    {Suite::theorem_xk_r, "theorem_xk_r"},
    {Suite::monotone, "monotone"},
    {Suite::lazy_k3, "lazy_k3"},
}};

using Failure = std::optional<std::string>;

std::string show(const Configuration& c, const MetricSpace& s) {
  std::string out = "{";
  for (int i = 0; i < c.size(); ++i) out += (i ? ", " : "") + s.label(c[i]);
  return out + "}";
}

std::string show(std::span<const PointId> tuple, const MetricSpace& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) out += (i ? ", " : "") + s.label(tuple[i]);
  return out + ")";
}

std::string show_value(Value v, const MetricSpace& s) { return format_scaled(v, s.scale()); }

enum class Domain { base, extended, copies };

Domain domain_of(Suite s) {
  switch (s) {
    case Suite::perm_intuition:
    case Suite::push3:
    case Suite::theorem_xk_r:
    case Suite::monotone:
    case Suite::lazy_k3:
      return Domain::extended;
    case Suite::equivalence:
      return Domain::copies;
    default:
      return Domain::base;
  }
}

SpacePtr prepare(const SpacePtr& base, Domain d, int k) {
  switch (d) {
    case Domain::base:
      return base;
    case Domain::extended:
      return antipodal_extension(base);
    case Domain::copies:
      return with_copies(antipodal_extension(base), k);
  }
  return base;
}

PointId request_of(const WorkFunction& w, std::optional<PointId> r) {
  if (r) return *r;
  if (!w.last_request()) fail(ErrorKind::invalid_input, "this check needs a request or a table with a last request");
  return *w.last_request();
}

Failure check_update_equivalence(const WorkFunction& w, PointId r) {
  const ConfigSpace& cs = w.configs();
  const WorkFunction fast = update(w, r);
  for (std::size_t c = 0; c < cs.size(); ++c) {
    Value best = 0;
    bool any = false;
    for (std::size_t x = 0; x < cs.size(); ++x) {
      if (!cs.at(x).contains(r)) continue;
      const Value v = w.at(x) + matching_distance(cs.at(x), cs.at(c), cs.metric());
      if (!any || v < best) best = v;
      any = true;
    }
    if (best != fast.at(c))
      return "update at " + cs.metric().label(r) + " gives " + show_value(fast.at(c), cs.metric()) + " at " +
             show(cs.at(c), cs.metric()) + ", the definition gives " + show_value(best, cs.metric());
  }
  return std::nullopt;
}

Failure check_equivalence(const WorkFunction& w, Rng& rng) {
  const MetricSpace& s = w.metric();
  const int n = s.size();
  const int k = w.k();
  const Value shift = evader_server_shift(s, k);
  std::vector<PointId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const Value evader = evader_potential(w, std::span<const PointId>(perm)).value;
  const std::span<const PointId> tail(perm.data() + (n - k), static_cast<std::size_t>(k));
  const Value server = server_potential_at(w, tail);
  if (server != evader - shift)
    return "permutation " + show(perm, s) + ": server " + show_value(server, s) + ", evader minus shift " +
           show_value(evader - shift, s);
  const Value server_min = server_potential(w, TupleScope::all).value;
  const Value evader_min = evader_potential(w).value;
  if (server_min != evader_min - shift)
    return "minimum: server " + show_value(server_min, s) + ", evader minus shift " + show_value(evader_min - shift, s);
  return std::nullopt;
}

Failure check_one(Suite suite, const WorkFunction& w, std::optional<PointId> r_opt, Rng& rng,
                  std::span<const PointId> points) {
  const MetricSpace& s = w.metric();
  switch (suite) {
    case Suite::duality: {
      const PointId r = r_opt ? *r_opt : random_point(s, rng, points);
      if (!check_duality(w, r)) return "duality fails at request " + s.label(r);
      return std::nullopt;
    }
    case Suite::quasiconvex: {
      const auto v = is_quasiconvex(w);
      if (!v) return "no exchange bijection for X=" + show(v.witness->first, s) + ", Y=" + show(v.witness->second, s);
      return std::nullopt;
    }
    case Suite::lipschitz: {
      const auto v = is_lipschitz(w);
      if (!v) return "not 1-Lipschitz between " + show(v.witness->first, s) + " and " + show(v.witness->second, s);
      return std::nullopt;
    }
    case Suite::lemmas: {
      for (const auto& [name, v] : {std::pair{"quasiMin", check_quasi_min(w)},
                                    std::pair{"quasiSub", check_quasi_sub(w)},
                                    std::pair{"quasiGreedy", check_quasi_greedy(w)},
                                    std::pair{"resolveMonotone", check_resolve_monotone(w)}})
        if (!v) return std::string(name) + ": " + v.witness.value_or("");
      return std::nullopt;
    }
    case Suite::update_equivalence:
      return check_update_equivalence(w, r_opt ? *r_opt : random_point(s, rng, points));
    case Suite::perm_intuition: {
      // Lazy sequences end in a cone only for distinct points.
      std::vector<PointId> tuple(points.begin(), points.end());
      if (static_cast<int>(tuple.size()) < w.k()) fail(ErrorKind::invalid_input, "perm_intuition needs k distinct points");
      std::shuffle(tuple.begin(), tuple.end(), rng);
      tuple.resize(static_cast<std::size_t>(w.k()));
      if (!verify_perm_intuition(w, tuple)) return "identity fails for tuple " + show(tuple, s);
      return std::nullopt;
    }
    case Suite::push3: {
      const auto v = check_push(w);
      if (!v)
        return "set " + show(v.witness->set, s) + ": best ordering " + show_value(v.witness->best_any, s) +
               ", best ending in the last request " + show_value(v.witness->best_last, s);
      return std::nullopt;
    }
    case Suite::equivalence:
      return check_equivalence(w, rng);
    case Suite::mst_leaf: {
      const MstReport mst = mst_evader_potential(w);
      const Value evader = evader_potential(w).value;
      if (mst.value != evader)
        return "spanning tree " + show_value(mst.value, s) + ", evader potential " + show_value(evader, s);
      if (mst.last_request && !mst.last_request_is_leaf)
        return "no minimum spanning tree has " + s.label(*mst.last_request) + " as a leaf";
      return std::nullopt;
    }
    case Suite::theorem_xk_r: {
      const PointId r = request_of(w, r_opt);
      if (!check_last_request_attains(w, r)) {
        const PotentialReport any = server_potential(w);
        const PotentialReport last = server_potential_with_last(w, r);
        return "minimum " + show_value(any.value, s) + " at " + show(any.achiever, s) + ", with x_k = " + s.label(r) +
               " only " + show_value(last.value, s);
      }
      return std::nullopt;
    }
    case Suite::monotone: {
      const PointId r = r_opt ? *r_opt : random_point(s, rng, points);
      const Value before = server_potential(w).value;
      const Value after = server_potential(update(w, r)).value;
      if (after < before)
        return "request " + s.label(r) + " lowers the potential from " + show_value(before, s) + " to " +
               show_value(after, s);
      return std::nullopt;
    }
    case Suite::lazy_k3: {
      const Value lazy = lazy_potential_k3(w).value;
      const Value server = server_potential(w).value;
      if (lazy != server) return "lazy form " + show_value(lazy, s) + ", server form " + show_value(server, s);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void record(SuiteResult& result, const Failure& f, const WorkFunction& w) {
  ++result.cases;
  if (!f) return;
  if (result.failures++ == 0) {
    result.first_witness = *f;
    result.witness_table = work_function_to_json(w);
  }
}

}  // namespace

std::string_view to_string(Suite s) {
  for (const auto& [suite, name] : kNames)
    if (suite == s) return name;
  return "?";
}

Suite parse_suite(std::string_view name) {
  for (const auto& [suite, n] : kNames)
    if (n == name) return suite;
  std::string known;
  for (const auto& [suite, n] : kNames) known += (known.empty() ? "" : ", ") + std::string(n);
  fail(ErrorKind::invalid_input, "unknown suite '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<Suite> all_suites() {
  std::vector<Suite> out;
  for (const auto& [suite, name] : kNames) out.push_back(suite);
  return out;
}

SuiteResult run_suite(Suite suite, const SuiteOptions& options) {
  require(options.space != nullptr, "suite needs a space");
  require(options.k >= 1 && options.k <= kMaxServers, "k out of range");
  require(options.max_requests >= 1, "need at least one request per case");
  if (suite == Suite::push3 || suite == Suite::lazy_k3)
    if (options.k != 3) fail(ErrorKind::invalid_input, std::string(to_string(suite)) + " needs k = 3");
  if (suite == Suite::mst_leaf && options.k != options.space->size() - 2)
    fail(ErrorKind::invalid_input, "mst_leaf needs k = n - 2");

  const SpacePtr space = prepare(options.space, domain_of(suite), options.k);
  const auto configs = ConfigSpace::create(space, options.k);
  const std::span<const PointId> points = space->original_points();
  Rng rng(options.seed);
  SuiteResult result;
  result.suite = suite;
  for (std::size_t i = 0; i < options.cases; ++i) {
    const WorkFunction w = random_reachable(configs, rng, options.max_requests, points);
    record(result, check_one(suite, w, std::nullopt, rng, points), w);
  }
  return result;
}

SuiteResult check_table(Suite suite, const WorkFunction& w, std::optional<PointId> r) {
  Rng rng(1);
  SuiteResult result;
  result.suite = suite;
  record(result, check_one(suite, w, r, rng, w.metric().original_points()), w);
  return result;
}

}  // namespace kserver
