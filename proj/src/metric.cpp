#include "kserver/metric.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "kserver/error.hpp"

namespace kserver {

namespace {

using nlohmann::json;

std::string describe(const std::vector<std::string>& labels, PointId p) {
  return labels[static_cast<std::size_t>(p)];
}

std::optional<std::vector<PointId>> detect_antipodes(int n, const std::vector<Value>& dist,
                                                     Value diameter) {
  auto d = [&](int a, int b) { return dist[static_cast<std::size_t>(a * n + b)]; };
  if (diameter == 0) return std::nullopt;
  std::vector<PointId> anti(static_cast<std::size_t>(n), -1);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n && anti[static_cast<std::size_t>(p)] < 0; ++q) {
      if (d(p, q) != diameter) continue;
      bool ok = true;
      for (int x = 0; x < n && ok; ++x) ok = d(p, x) + d(x, q) == diameter;
      if (ok) anti[static_cast<std::size_t>(p)] = q;
    }
    if (anti[static_cast<std::size_t>(p)] < 0) return std::nullopt;
  }
  return anti;
}

std::string scale_hint(Value scale, Value multiplier) {
  return " (try scale " + std::to_string(scale * multiplier) + ")";
}

}  // namespace

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::circle: return "circle";
    case SpaceKind::tree: return "tree";
    case SpaceKind::multiray: return "multiray";
    case SpaceKind::star: return "star";
    case SpaceKind::general: return "general";
    case SpaceKind::extended: return "extended";
  }
  return "general";
}

SpaceKind space_kind_from_string(std::string_view name) {
  for (SpaceKind k : {SpaceKind::circle, SpaceKind::tree, SpaceKind::multiray, SpaceKind::star,
                      SpaceKind::general, SpaceKind::extended})
    if (to_string(k) == name) return k;
  fail(ErrorKind::parse, "unknown space kind '" + std::string(name) + "'");
}

MetricSpace::MetricSpace(Init init)
    : labels_(std::move(init.labels)),
      dist_(std::move(init.dist)),
      scale_(init.scale),
      kind_(init.kind),
      pseudo_(init.pseudo),
      original_(std::move(init.original)),
      leaves_(std::move(init.leaves)),
      center_(init.center),
      positions_(std::move(init.positions)),
      circumference_(init.circumference),
      source_(std::move(init.source)) {
  const int n = static_cast<int>(labels_.size());
  require(n > 0, "metric space needs at least one point");
  require(scale_ > 0, "scale must be positive");
  require(dist_.size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
          "distance table is not n x n");
  auto d = [&](int a, int b) { return dist_[static_cast<std::size_t>(a * n + b)]; };
  for (int a = 0; a < n; ++a) {
    if (d(a, a) != 0) fail(ErrorKind::invalid_input, "nonzero self-distance at " + describe(labels_, a));
    for (int b = 0; b < n; ++b) {
      if (d(a, b) < 0) fail(ErrorKind::invalid_input, "negative distance");
      if (d(a, b) != d(b, a))
        fail(ErrorKind::invalid_input,
             "asymmetric distance " + describe(labels_, a) + "," + describe(labels_, b));
      if (a != b && d(a, b) == 0 && !pseudo_)
        fail(ErrorKind::invalid_input,
             "distinct points " + describe(labels_, a) + "," + describe(labels_, b) + " at distance 0");
      diameter_ = std::max(diameter_, d(a, b));
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (d(a, c) > d(a, b) + d(b, c))
          fail(ErrorKind::invalid_input, "triangle inequality fails at " + describe(labels_, a) + "," +
                                             describe(labels_, b) + "," + describe(labels_, c));

  if (original_.empty()) {
    original_.resize(static_cast<std::size_t>(n));
    std::iota(original_.begin(), original_.end(), 0);
  }
  is_original_.assign(static_cast<std::size_t>(n), false);
  for (PointId p : original_) {
    require(p >= 0 && p < n, "original point out of range");
    is_original_[static_cast<std::size_t>(p)] = true;
  }

  if (init.antipodes) {
    require(init.antipodes->size() == static_cast<std::size_t>(n), "antipode map has wrong size");
    for (int p = 0; p < n; ++p) {
      PointId q = (*init.antipodes)[static_cast<std::size_t>(p)];
      require(q >= 0 && q < n, "antipode out of range");
      for (int x = 0; x < n; ++x)
        if (d(p, x) + d(x, q) != diameter_ || d(p, q) != diameter_)
          fail(ErrorKind::invalid_input, "antipode identity fails for " + describe(labels_, p));
    }
    antipodes_ = std::move(init.antipodes);
  } else {
    antipodes_ = detect_antipodes(n, dist_, diameter_);
  }
  if (!positions_.empty()) require(positions_.size() == static_cast<std::size_t>(n), "positions have wrong size");
}

PointId MetricSpace::antipode(PointId p) const {
  if (!antipodes_) fail(ErrorKind::invalid_input, "space has no antipode map; extend it first");
  return (*antipodes_)[static_cast<std::size_t>(p)];
}

std::optional<PointId> MetricSpace::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<PointId>(i);
  return std::nullopt;
}

PointId MetricSpace::point(std::string_view text) const {
  if (auto p = find(text)) return *p;
  if (is_circle() && circumference_ > 0) {
    Value pos = parse_scaled(text, scale_);
    pos = ((pos % circumference_) + circumference_) % circumference_;
    auto it = std::find(positions_.begin(), positions_.end(), pos);
    if (it != positions_.end()) return static_cast<PointId>(it - positions_.begin());
    fail(ErrorKind::invalid_input, "position " + std::string(text) + " is not a point of the circle");
  }
  fail(ErrorKind::invalid_input, "unknown point '" + std::string(text) + "'");
}

SpacePtr build_circle_subset(std::vector<Value> positions, Value circumference, Value scale) {
  require(circumference > 0, "circumference must be positive");
  std::sort(positions.begin(), positions.end());
  require(std::adjacent_find(positions.begin(), positions.end()) == positions.end(),
          "duplicate circle position");
  const std::size_t n = positions.size();
  MetricSpace::Init init;
  init.scale = scale;
  init.kind = SpaceKind::circle;
  init.circumference = circumference;
  init.dist.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    require(positions[a] >= 0 && positions[a] < circumference, "circle position out of range");
    init.labels.push_back(format_scaled(positions[a], scale));
    for (std::size_t b = 0; b < n; ++b) {
      Value gap = std::abs(positions[a] - positions[b]);
      init.dist[a * n + b] = std::min(gap, circumference - gap);
    }
  }
  init.positions = positions;
  init.source = {{"kind", "circle"},
                 {"circumference", format_scaled(circumference, scale)},
                 {"scale", scale}};
  std::vector<std::string> pos_text;
  for (Value p : positions) pos_text.push_back(format_scaled(p, scale));
  init.source["positions"] = pos_text;
  return std::make_shared<const MetricSpace>(std::move(init));
}

SpacePtr build_circle(int num_points, Value circumference, Value scale) {
  require(num_points >= 2, "a circle needs at least two points");
  require(circumference > 0, "circumference must be positive");
  if (circumference % num_points != 0) {
    Value mult = num_points / std::gcd(circumference, static_cast<Value>(num_points));
    fail(ErrorKind::invalid_input, "circumference " + format_scaled(circumference, scale) + " does not split into " +
                                       std::to_string(num_points) + " exact arcs" + scale_hint(scale, mult));
  }
  const Value step = circumference / num_points;
  std::vector<Value> positions;
  for (int i = 0; i < num_points; ++i) positions.push_back(step * i);
  auto sub = build_circle_subset(positions, circumference, scale);
  MetricSpace::Init init;
  for (int i = 0; i < sub->size(); ++i) init.labels.push_back(sub->label(i));
  init.dist.resize(static_cast<std::size_t>(num_points) * static_cast<std::size_t>(num_points));
  for (int a = 0; a < num_points; ++a)
    for (int b = 0; b < num_points; ++b)
      init.dist[static_cast<std::size_t>(a * num_points + b)] = sub->distance(a, b);
  init.scale = scale;
  init.kind = SpaceKind::circle;
  init.positions = positions;
  init.circumference = circumference;
  init.source = {{"kind", "circle"},
                 {"num_points", num_points},
                 {"circumference", format_scaled(circumference, scale)},
                 {"scale", scale}};
  return std::make_shared<const MetricSpace>(std::move(init));
}

SpacePtr build_tree(int num_nodes, std::span<const WeightedEdge> edges, Value scale,
                    std::vector<std::string> labels) {
  require(num_nodes >= 1, "a tree needs a node");
  const auto n = static_cast<std::size_t>(num_nodes);
  if (labels.empty())
    for (int i = 0; i < num_nodes; ++i) labels.push_back(std::to_string(i));
  require(labels.size() == n, "label count does not match node count");
  if (edges.size() != n - 1)
    fail(ErrorKind::invalid_input, "a tree on " + std::to_string(n) + " nodes has " + std::to_string(n - 1) +
                                       " edges, got " + std::to_string(edges.size()));
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  std::vector<std::vector<std::pair<int, Value>>> adj(n);
  bool zero = false;
  for (const auto& e : edges) {
    require(e.u >= 0 && e.u < num_nodes && e.v >= 0 && e.v < num_nodes, "edge endpoint out of range");
    require(e.weight >= 0, "negative edge weight");
    int a = root(e.u), b = root(e.v);
    if (a == b) fail(ErrorKind::invalid_input, "edge " + labels[static_cast<std::size_t>(e.u)] + "-" +
                                                   labels[static_cast<std::size_t>(e.v)] + " closes a cycle");
    parent[static_cast<std::size_t>(a)] = b;
    adj[static_cast<std::size_t>(e.u)].push_back({e.v, e.weight});
    adj[static_cast<std::size_t>(e.v)].push_back({e.u, e.weight});
    zero = zero || e.weight == 0;
  }
  MetricSpace::Init init;
  init.dist.assign(n * n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<int> stack{static_cast<int>(s)};
    init.dist[s * n + s] = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
        auto& slot = init.dist[s * n + static_cast<std::size_t>(v)];
        if (slot >= 0) continue;
        slot = init.dist[s * n + static_cast<std::size_t>(u)] + w;
        stack.push_back(v);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (adj[i].size() == 1) init.leaves.push_back(static_cast<PointId>(i));
  init.labels = labels;
  init.scale = scale;
  init.kind = SpaceKind::tree;
  init.pseudo = zero;
  json je = json::array();
  for (const auto& e : edges)
    je.push_back({labels[static_cast<std::size_t>(e.u)], labels[static_cast<std::size_t>(e.v)],
                  format_scaled(e.weight, scale)});
  init.source = {{"kind", "tree"}, {"scale", scale}, {"nodes", labels}, {"edges", je}};
  return std::make_shared<const MetricSpace>(std::move(init));
}

SpacePtr build_star(std::span<const Value> leaf_weights, Value scale, bool include_center) {
  require(leaf_weights.size() >= 2, "a star needs two leaves");
  const std::size_t m = leaf_weights.size();
  const std::size_t n = m + (include_center ? 1 : 0);
  MetricSpace::Init init;
  init.dist.assign(n * n, 0);
  for (std::size_t a = 0; a < m; ++a) {
    require(leaf_weights[a] > 0, "star leaf weights must be positive");
    init.labels.push_back("l" + std::to_string(a));
    init.leaves.push_back(static_cast<PointId>(a));
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) init.dist[a * n + b] = leaf_weights[a] + leaf_weights[b];
  }
  if (include_center) {
    init.labels.push_back("c");
    init.center = static_cast<PointId>(m);
    for (std::size_t a = 0; a < m; ++a) init.dist[a * n + m] = init.dist[m * n + a] = leaf_weights[a];
  }
  init.scale = scale;
  init.kind = SpaceKind::star;
  std::vector<std::string> w;
  for (Value v : leaf_weights) w.push_back(format_scaled(v, scale));
  init.source = {{"kind", "star"}, {"scale", scale}, {"leaf_weights", w}, {"center", include_center}};
  return std::make_shared<const MetricSpace>(std::move(init));
}

namespace {

SpacePtr multiray_impl(std::span<const Value> ray_lengths, Value step, Value scale,
                       std::vector<std::string> labels_override, json source) {
  require(ray_lengths.size() >= 2, "a multiray space needs two rays");
  require(step > 0, "grid step must be positive");
  // Point 0 is the center; ray i contributes points at step, 2*step, ... along it.
  std::vector<int> ray_of{-1};
  std::vector<Value> depth{0};
  std::vector<std::string> labels{"c"};
  std::vector<PointId> leaves;
  for (std::size_t i = 0; i < ray_lengths.size(); ++i) {
    if (ray_lengths[i] <= 0 || ray_lengths[i] % step != 0)
      fail(ErrorKind::invalid_input, "ray length " + format_scaled(ray_lengths[i], scale) +
                                         " is not a positive multiple of the step " + format_scaled(step, scale));
    for (Value j = 1; j * step <= ray_lengths[i]; ++j) {
      ray_of.push_back(static_cast<int>(i));
      depth.push_back(j * step);
      labels.push_back(std::string(1, static_cast<char>('a' + i)) + std::to_string(j));
    }
    leaves.push_back(static_cast<PointId>(labels.size() - 1));
  }
  const std::size_t n = labels.size();
  MetricSpace::Init init;
  init.dist.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      init.dist[a * n + b] = ray_of[a] == ray_of[b] ? std::abs(depth[a] - depth[b]) : depth[a] + depth[b];
  init.labels = labels_override.empty() ? labels : std::move(labels_override);
  init.leaves = leaves;
  init.center = 0;
  init.scale = scale;
  init.kind = SpaceKind::multiray;
  init.source = std::move(source);
  return std::make_shared<const MetricSpace>(std::move(init));
}

}  // namespace

SpacePtr build_multiray(std::span<const Value> ray_lengths, Value step, Value scale) {
  std::vector<std::string> rays;
  for (Value v : ray_lengths) rays.push_back(format_scaled(v, scale));
  return multiray_impl(ray_lengths, step, scale, {},
                       {{"kind", "multiray"}, {"scale", scale}, {"rays", rays}, {"step", format_scaled(step, scale)}});
}

SpacePtr build_line(int num_points, Value step, Value scale) {
  require(num_points >= 3, "a line needs at least three points");
  // Relabel the two-ray space by position: the center sits at index
  // (num_points - 1) / 2, so the left ray is the shorter one for even counts.
  const int left = (num_points - 1) / 2;
  const int right = num_points - 1 - left;
  std::vector<Value> rays{left * step, right * step};
  std::vector<std::string> labels(static_cast<std::size_t>(num_points));
  labels[0] = format_scaled(left * step, scale);
  for (int j = 1; j <= left; ++j) labels[static_cast<std::size_t>(j)] = format_scaled((left - j) * step, scale);
  for (int j = 1; j <= right; ++j)
    labels[static_cast<std::size_t>(left + j)] = format_scaled((left + j) * step, scale);
  return multiray_impl(rays, step, scale, labels,
                       {{"kind", "line"}, {"scale", scale}, {"num_points", num_points},
                        {"step", format_scaled(step, scale)}});
}

SpacePtr build_general(std::vector<std::string> labels, std::vector<Value> dist, Value scale) {
  MetricSpace::Init init;
  json rows = json::array();
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n && dist.size() == n * n; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < n; ++b) row.push_back(format_scaled(dist[a * n + b], scale));
    rows.push_back(row);
  }
  init.source = {{"kind", "general"}, {"scale", scale}, {"labels", labels}, {"dist", rows}};
  init.labels = std::move(labels);
  init.dist = std::move(dist);
  init.scale = scale;
  return std::make_shared<const MetricSpace>(std::move(init));
}

SpacePtr antipodal_extension(const SpacePtr& space) {
  if (space->has_antipodes()) return space;
  const int n = space->size();
  const Value delta = space->diameter();
  require(delta > 0, "cannot extend a space of diameter 0");
  const auto m = static_cast<std::size_t>(2 * n);
  MetricSpace::Init init;
  init.dist.resize(m * m);
  std::vector<PointId> anti(m);
  for (int a = 0; a < 2 * n; ++a) {
    anti[static_cast<std::size_t>(a)] = a < n ? a + n : a - n;
    for (int b = 0; b < 2 * n; ++b) {
      Value d = space->distance(a % n, b % n);
      init.dist[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(b)] =
          (a < n) == (b < n) ? d : 2 * delta - d;
    }
  }
  for (int a = 0; a < n; ++a) init.labels.push_back(space->label(a));
  for (int a = 0; a < n; ++a) init.labels.push_back(space->label(a) + "'");
  for (PointId p : space->original_points()) init.original.push_back(p);
  init.antipodes = anti;
  init.scale = space->scale();
  init.kind = SpaceKind::extended;
  init.pseudo = space->pseudo();
  init.source = {{"kind", "extended"}, {"base", space->source()}};
  return std::make_shared<const MetricSpace>(std::move(init));
}

SpacePtr with_copies(const SpacePtr& space, int copies) {
  require(copies >= 1, "need at least one copy");
  const int n = space->size();
  const auto m = static_cast<std::size_t>(n * copies);
  // Copy j of point p has id j * n + p.
  MetricSpace::Init init;
  init.dist.resize(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      init.dist[a * m + b] = space->distance(static_cast<PointId>(a % static_cast<std::size_t>(n)),
                                             static_cast<PointId>(b % static_cast<std::size_t>(n)));
  for (int j = 0; j < copies; ++j)
    for (int p = 0; p < n; ++p) init.labels.push_back(j == 0 ? space->label(p) : space->label(p) + "#" + std::to_string(j));
  for (int j = 0; j < copies; ++j)
    for (PointId p : space->original_points()) init.original.push_back(j * n + p);
  std::sort(init.original.begin(), init.original.end());
  if (space->has_antipodes()) {
    std::vector<PointId> anti(m);
    for (std::size_t a = 0; a < m; ++a) {
      auto j = static_cast<PointId>(a / static_cast<std::size_t>(n));
      anti[a] = j * n + space->antipode(static_cast<PointId>(a % static_cast<std::size_t>(n)));
    }
    init.antipodes = anti;
  }
  init.scale = space->scale();
  init.kind = space->kind();
  init.pseudo = copies > 1 || space->pseudo();
  init.source = {{"kind", "copies"}, {"copies", copies}, {"base", space->source()}};
  return std::make_shared<const MetricSpace>(std::move(init));
}

SpacePtr restrict_to(const SpacePtr& space, std::span<const PointId> points) {
  const std::size_t n = points.size();
  MetricSpace::Init init;
  init.dist.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    init.labels.push_back(space->label(points[a]));
    for (std::size_t b = 0; b < n; ++b) init.dist[a * n + b] = space->distance(points[a], points[b]);
  }
  init.scale = space->scale();
  init.pseudo = space->pseudo();
  if (space->is_circle()) {
    init.kind = SpaceKind::circle;
    for (PointId p : points) init.positions.push_back(space->positions()[static_cast<std::size_t>(p)]);
    init.circumference = space->circumference();
  }
  init.source = {{"kind", "subset"}, {"points", init.labels}, {"base", space->source()}};
  return std::make_shared<const MetricSpace>(std::move(init));
}

Value pairwise_sum(std::span<const PointId> points, const MetricSpace& space) {
  Value total = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) total += space.distance(points[i], points[j]);
  return total;
}

std::string format_scaled(Value v, Value scale) {
  const bool neg = v < 0;
  Value num = neg ? -v : v;
  Value den = scale;
  Value g = std::gcd(num, den);
  num /= g;
  den /= g;
  std::string sign = neg ? "-" : "";
  if (den == 1) return sign + std::to_string(num);
  Value rest = den;
  int digits = 0;
  while (rest % 2 == 0) rest /= 2, ++digits;
  int fives = 0;
  while (rest % 5 == 0) rest /= 5, ++fives;
  if (rest != 1) return sign + std::to_string(num) + "/" + std::to_string(den);
  digits = std::max(digits, fives);
  Value pow10 = 1;
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  Value scaled = num * (pow10 / den);
  std::string frac = std::to_string(scaled % pow10);
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  return sign + std::to_string(scaled / pow10) + "." + frac;
}

Value parse_scaled(std::string_view text, Value scale) {
  auto bad = [&]() -> Value { fail(ErrorKind::parse, "malformed length '" + std::string(text) + "'"); };
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return bad();
  auto parse_int = [&](std::string_view part, Value& out) {
    if (part.empty()) return false;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && ptr == part.data() + part.size();
  };
  Value num = 0, den = 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    if (!parse_int(s.substr(0, slash), num) || !parse_int(s.substr(slash + 1), den) || den == 0) return bad();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string digits(s.substr(0, dot));
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 12 || frac.find_first_not_of("0123456789") != std::string_view::npos)
      return bad();
    digits += frac;
    if (!parse_int(digits, num)) return bad();
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  } else if (!parse_int(s, num)) {
    return bad();
  }
  if ((num * scale) % den != 0)
    fail(ErrorKind::invalid_input, "length " + std::string(text) + " is not a multiple of 1/" +
                                       std::to_string(scale) + scale_hint(scale, den / std::gcd(num * scale, den)));
  Value v = num * scale / den;
  return neg ? -v : v;
}

}  // namespace kserver
