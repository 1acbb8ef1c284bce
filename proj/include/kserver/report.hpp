#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace kserver {

/// Every command maps an input object to a result object. A report is
/// {"command", "input", "result"}; check_report re-runs the input and
/// compares, so machine output can always be re-validated.
///
/// Values in results are strings in original units; "scale" gives the
/// denominator they were computed with.
///
/// Inputs:
///   simulate        {space, k, start, events, tie, refine}
///   verify          {space, k, suite, cases, seed, max_requests}
///                   or {work_function, suite, request}
///   potential       {space, k, start, events, formulation, scope, auto_extend, tuple}
///                   or {work_function, formulation, scope, tuple}
///   counterexample  {scale, tie, refine}
///   enumerate       {num_points, k, dest_step, taxi, midpoint, max_states, workers,
///                    seed_cones, seed_replay, checkpoint, resume, checkpoint_every}
///   reconstruct-tree {space}
///
/// Result "status" is one of ok, failed (a property or a reproduced number
/// did not hold) or partial (a budget stopped the run).
using Progress = std::function<void(std::size_t states, std::size_t frontier)>;

nlohmann::json run_command(std::string_view command, const nlohmann::json& input, const Progress& progress = {});
nlohmann::json make_report(std::string_view command, const nlohmann::json& input, const Progress& progress = {});

/// Differences between a stored report and a fresh run of its input; empty
/// when they agree. Checkpoint and resume settings are ignored on the rerun.
std::vector<std::string> check_report(const nlohmann::json& report);

std::string render_text(const nlohmann::json& report);

/// 0 ok, 3 failed, 4 partial.
int exit_code(const nlohmann::json& result);

}  // namespace kserver
