#include "kserver/io.hpp"

#include <fstream>
#include <sstream>

#include "kserver/error.hpp"

namespace kserver {

namespace {

using nlohmann::json;

std::string text_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  fail(ErrorKind::parse, "expected a length, got " + v.dump());
}

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) fail(ErrorKind::parse, std::string("space description lacks \"") + name + "\"");
  return j.at(name);
}

Value length(const json& v, Value scale) { return parse_scaled(text_of(v), scale); }

std::vector<Value> lengths(const json& arr, Value scale) {
  if (!arr.is_array()) fail(ErrorKind::parse, "expected an array of lengths");
  std::vector<Value> out;
  for (const auto& v : arr) out.push_back(length(v, scale));
  return out;
}

std::vector<std::string> split_words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

SpacePtr space_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::parse, "space description must be a JSON object");
  const std::string kind = field(j, "kind").get<std::string>();
  const Value scale = j.value("scale", Value{1});
  if (scale <= 0) fail(ErrorKind::parse, "scale must be positive");
  try {
    if (kind == "circle") {
      const Value circ = length(field(j, "circumference"), scale);
      if (j.contains("positions")) return build_circle_subset(lengths(j.at("positions"), scale), circ, scale);
      return build_circle(field(j, "num_points").get<int>(), circ, scale);
    }
    if (kind == "tree") {
      std::vector<std::string> labels = field(j, "nodes").get<std::vector<std::string>>();
      auto id = [&](const json& v) {
        const std::string s = text_of(v);
        auto it = std::find(labels.begin(), labels.end(), s);
        if (it == labels.end()) fail(ErrorKind::parse, "edge mentions unknown node '" + s + "'");
        return static_cast<PointId>(it - labels.begin());
      };
      std::vector<WeightedEdge> edges;
      for (const auto& e : field(j, "edges")) {
        if (!e.is_array() || e.size() != 3) fail(ErrorKind::parse, "tree edges are [u, v, weight]");
        edges.push_back({id(e[0]), id(e[1]), length(e[2], scale)});
      }
      return build_tree(static_cast<int>(labels.size()), edges, scale, labels);
    }
    if (kind == "star") return build_star(lengths(field(j, "leaf_weights"), scale), scale, j.value("center", true));
    if (kind == "multiray") return build_multiray(lengths(field(j, "rays"), scale), length(field(j, "step"), scale), scale);
    if (kind == "line") return build_line(field(j, "num_points").get<int>(), length(field(j, "step"), scale), scale);
    if (kind == "general") {
      auto labels = field(j, "labels").get<std::vector<std::string>>();
      std::vector<Value> dist;
      const json& rows = field(j, "dist");
      if (!rows.is_array() || rows.size() != labels.size()) fail(ErrorKind::parse, "dist must have one row per label");
      for (const auto& row : rows) {
        auto r = lengths(row, scale);
        if (r.size() != labels.size()) fail(ErrorKind::parse, "dist rows must have one entry per label");
        dist.insert(dist.end(), r.begin(), r.end());
      }
      return build_general(std::move(labels), std::move(dist), scale);
    }
    if (kind == "extended") return antipodal_extension(space_from_json(field(j, "base")));
    if (kind == "copies") return with_copies(space_from_json(field(j, "base")), field(j, "copies").get<int>());
    if (kind == "subset") {
      const SpacePtr base = space_from_json(field(j, "base"));
      std::vector<PointId> pts;
      for (const auto& p : field(j, "points")) pts.push_back(base->point(text_of(p)));
      return restrict_to(base, pts);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("bad space description: ") + e.what());
  }
  fail(ErrorKind::parse, "unknown space kind '" + kind + "'");
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

SpacePtr load_space(const std::filesystem::path& path) { return space_from_json(read_json_file(path)); }

RequestSeq parse_sequence(std::string_view text, const MetricSpace& space) {
  RequestSeq out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + why);
    };
    auto point = [&](const std::string& w) {
      try {
        return space.point(w);
      } catch (const Error& e) {
        fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": " + e.what());
      }
    };
    if (words[0] == "r") {
      if (words.size() != 2) bad("expected 'r <point>'");
      out.push_back(ServerRequest{point(words[1])});
    } else if (words[0] == "taxi") {
      if (words.size() != 3 && words.size() != 4) bad("expected 'taxi <s> <t> [cw|ccw]'");
      TaxiRequest t{point(words[1]), point(words[2])};
      if (words.size() == 4) {
        if (words[3] == "ccw")
          t.orientation = Orientation::counterclockwise;
        else if (words[3] != "cw")
          bad("orientation must be cw or ccw");
      }
      out.push_back(t);
    } else {
      bad("unknown event '" + words[0] + "'");
    }
    if (end == text.size()) break;
  }
  return out;
}

RequestSeq load_sequence(const std::filesystem::path& path, const MetricSpace& space) {
  try {
    return parse_sequence(read_text_file(path), space);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) fail(ErrorKind::parse, path.string() + ": " + e.what());
    throw;
  }
}

std::string format_event(const Event& e, const MetricSpace& space) {
  if (const auto* r = std::get_if<ServerRequest>(&e)) return "r " + space.label(r->point);
  const auto& t = std::get<TaxiRequest>(e);
  std::string out = "taxi " + space.label(t.start) + " " + space.label(t.dest);
  if (t.orientation == Orientation::counterclockwise) out += " ccw";
  return out;
}

std::string format_sequence(const RequestSeq& seq, const MetricSpace& space) {
  std::string out;
  for (const Event& e : seq) out += format_event(e, space) + "\n";
  return out;
}

Configuration parse_configuration(const json& labels, const MetricSpace& space) {
  if (!labels.is_array()) fail(ErrorKind::parse, "a configuration is an array of points");
  std::vector<PointId> pts;
  for (const auto& p : labels) pts.push_back(space.point(text_of(p)));
  if (pts.size() > static_cast<std::size_t>(kMaxServers)) fail(ErrorKind::unsupported, "too many servers");
  return Configuration(std::span<const PointId>(pts));
}

json configuration_to_json(const Configuration& c, const MetricSpace& space) {
  json out = json::array();
  for (PointId p : c) out.push_back(space.label(p));
  return out;
}

json work_function_to_json(const WorkFunction& w) {
  const MetricSpace& space = w.metric();
  json values = json::array();
  for (std::size_t i = 0; i < w.size(); ++i)
    values.push_back(json::array({configuration_to_json(w.configs().at(i), space), w.at(i)}));
  json out = {{"space", space.source()},
              {"k", w.k()},
              {"scale", space.scale()},
              {"origin", w.origin() == Origin::reachable ? "reachable" : "ingested"},
              {"values", values}};
  out["last_request"] = w.last_request() ? json(space.label(*w.last_request())) : json(nullptr);
  return out;
}

WorkFunction work_function_from_json(const json& j) {
  try {
    const SpacePtr space = space_from_json(j.at("space"));
    const auto configs = ConfigSpace::create(space, j.at("k").get<int>());
    std::vector<Value> values(configs->size());
    std::vector<bool> seen(configs->size(), false);
    for (const auto& entry : j.at("values")) {
      const std::size_t idx = configs->index_of(parse_configuration(entry.at(0), *space));
      if (seen[idx]) fail(ErrorKind::parse, "configuration listed twice in work-function dump");
      seen[idx] = true;
      values[idx] = entry.at(1).get<Value>();
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
      fail(ErrorKind::parse, "work-function dump misses configurations");
    std::optional<PointId> last;
    if (j.contains("last_request") && !j.at("last_request").is_null())
      last = space->point(text_of(j.at("last_request")));
    const Origin origin = j.value("origin", std::string("ingested")) == "reachable" ? Origin::reachable : Origin::ingested;
    return WorkFunction(configs, std::move(values), last, origin);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, std::string("bad work-function dump: ") + e.what());
  }
}

}  // namespace kserver
