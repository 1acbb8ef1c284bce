#pragma once

#include <string>

#include "kserver/work_function.hpp"

namespace kserver {

// Brute-force checks of the structural consequences of quasiconvexity. Each
// returns a human-readable witness on failure. For k = 1 they hold trivially.

/// For X in argmin w and x in X (single copy) some Y in argmin_{Y not
/// containing x} w contains X - x.
Verdict<std::string> check_quasi_min(const WorkFunction& w);

/// For X in argmin w and |A| < k some Y in argmin_{Y contains A} w has
/// Y - A inside X - A.
Verdict<std::string> check_quasi_sub(const WorkFunction& w);

/// For |A| < k and Y in argmin_{Y contains A} w some X in argmin w has
/// Y - A inside X - A.
Verdict<std::string> check_quasi_greedy(const WorkFunction& w);

/// Processes the elements of `start` in order, replacing each by a point
/// minimising w (smallest id on ties).
Configuration greedy_minimize(const WorkFunction& w, const Configuration& start);

/// If X resolves from x to the last request, then so does X - y + x.
Verdict<std::string> check_resolve_monotone(const WorkFunction& w);

}  // namespace kserver
