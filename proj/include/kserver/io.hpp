#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "kserver/taxi.hpp"
#include "kserver/work_function.hpp"

namespace kserver {

/// Space descriptions are JSON objects with a "kind" and that kind's
/// parameters; lengths are given in original units ("6.5", "13/2" or plain
/// numbers) and converted with the object's "scale" (default 1).
///
///   {"kind": "circle", "num_points": 16, "circumference": 8, "scale": 2}
///   {"kind": "circle", "positions": ["0", "1.5"], "circumference": 8, "scale": 2}
///   {"kind": "tree", "nodes": ["a", "b"], "edges": [["a", "b", 3]]}
///   {"kind": "star", "leaf_weights": [1, 2, 3], "center": true}
///   {"kind": "multiray", "rays": [2, 2, 2], "step": 1}
///   {"kind": "line", "num_points": 9, "step": 1}
///   {"kind": "general", "labels": ["p", "q"], "dist": [[0, 1], [1, 0]]}
///   {"kind": "extended", "base": {...}}
///   {"kind": "copies", "copies": 2, "base": {...}}
///   {"kind": "subset", "points": ["a", "c"], "base": {...}}
///
/// Every constructed space reports such an object as its source(), so
/// descriptions round-trip.
SpacePtr space_from_json(const nlohmann::json& j);
SpacePtr load_space(const std::filesystem::path& path);

/// One event per line: `r <point>` or `taxi <s> <t> [cw|ccw]`. Blank lines
/// and text after '#' are ignored. Errors carry the line number.
RequestSeq parse_sequence(std::string_view text, const MetricSpace& space);
RequestSeq load_sequence(const std::filesystem::path& path, const MetricSpace& space);
std::string format_event(const Event& e, const MetricSpace& space);
std::string format_sequence(const RequestSeq& seq, const MetricSpace& space);

Configuration parse_configuration(const nlohmann::json& labels, const MetricSpace& space);
nlohmann::json configuration_to_json(const Configuration& c, const MetricSpace& space);

/// {"space", "k", "last_request", "origin", "values": [[[labels], v], ...]}
/// with values as scaled integers in canonical order.
nlohmann::json work_function_to_json(const WorkFunction& w);
/// Loaded tables are marked Origin::ingested unless the dump says reachable.
WorkFunction work_function_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace kserver
