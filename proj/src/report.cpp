#include "kserver/report.hpp"

#include <sstream>

#include "kserver/enumerate.hpp"
#include "kserver/error.hpp"
#include "kserver/io.hpp"
#include "kserver/potential.hpp"
#include "kserver/replay.hpp"
#include "kserver/suites.hpp"
#include "kserver/tree_metric.hpp"

namespace kserver {

namespace {

using nlohmann::json;

std::string str(Value v, Value scale) { return format_scaled(v, scale); }

json labels(std::span<const PointId> pts, const MetricSpace& s) {
  json out = json::array();
  for (PointId p : pts) out.push_back(s.label(p));
  return out;
}

json labels(const Configuration& c, const MetricSpace& s) { return labels(c.points(), s); }

json support_json(const SupportSet& sup, const WorkFunction& w) {
  json out = json::array();
  const Value scale = w.metric().scale();
  for (std::size_t i = 0; i < sup.members.size(); ++i)
    out.push_back({{"configuration", labels(w.configs().at(sup.members[i]), w.metric())},
                   {"value", str(sup.values[i], scale)}});
  return out;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

RequestSeq events_of(const json& input, const MetricSpace& space) {
  if (!input.contains("events")) return {};
  const json& e = input.at("events");
  if (e.is_string()) return parse_sequence(e.get<std::string>(), space);
  std::string text;
  for (const auto& line : e) text += line.get<std::string>() + "\n";
  return parse_sequence(text, space);
}

bool has_taxi(const RequestSeq& events) {
  return std::any_of(events.begin(), events.end(), [](const Event& e) { return std::holds_alternative<TaxiRequest>(e); });
}

// ---------------------------------------------------------------- simulate

json cmd_simulate(const json& in) {
  const SpacePtr space = space_from_json(in.at("space"));
  const int k = in.at("k").get<int>();
  const auto configs = ConfigSpace::create(space, k);
  const Configuration start = parse_configuration(in.at("start"), *space);
  require(start.size() == k, "start configuration must have k points");
  const RequestSeq events = events_of(in, *space);
  const TieBreak tie = parse_tie_break(get_or<std::string>(in, "tie", "lexicographic"), *space);
  const Value refine = get_or<Value>(in, "refine", 8);
  const Value scale = space->scale();

  json result = {{"scale", scale}, {"steps", json::array()}};
  Value total_cost = 0;
  Value total_extended = 0;
  std::vector<std::string> problems;

  if (!has_taxi(events)) {
    std::vector<PointId> requests;
    for (const Event& e : events) requests.push_back(std::get<ServerRequest>(e).point);
    const Trajectory t = run_wfa(configs, start, requests, tie, false);
    const LedgerReport ledger = extended_cost_ledger(t);
    for (std::size_t i = 0; i < requests.size(); ++i)
      result["steps"].push_back({{"event", format_event(events[i], *space)},
                                 {"configuration", labels(t.configurations[i + 1], *space)},
                                 {"cost", str(t.costs[i], scale)},
                                 {"extended", str(t.extended_costs[i], scale)},
                                 {"pinned", str(t.pinned_costs[i], scale)}});
    total_cost = ledger.wfa_cost;
    total_extended = ledger.total_extended;
    result["opt"] = str(ledger.opt, scale);
    result["total_pinned"] = str(ledger.total_pinned, scale);
    if (!ledger.pinned_identity) problems.push_back("pinned costs do not sum to cost plus the final offset");
  } else {
    // Movement comes from WFA on the dense expansion; work functions use the
    // exact limit of that expansion on the coarse points.
    const SimulatedRun run = simulate_wfa(space, k, start, events, tie, refine);
    const MetricSpace& fine = *run.refinement.space;
    const Value fine_scale = fine.scale();
    auto coarse_of = [&](const Configuration& c) -> std::optional<Configuration> {
      std::vector<PointId> pts;
      for (PointId p : c) {
        const auto& fc = run.refinement.from_coarse;
        const auto it = std::find(fc.begin(), fc.end(), p);
        if (it == fc.end()) return std::nullopt;
        pts.push_back(static_cast<PointId>(it - fc.begin()));
      }
      return Configuration(std::span<const PointId>(pts));
    };
    WorkFunction w = WorkFunction::cone(configs, start);
    std::optional<Configuration> prev = start;
    std::size_t begin = 0;
    Value fine_total = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::size_t end = run.refinement.event_end[i];
      Value moved = 0;
      for (std::size_t j = begin; j < end; ++j) moved += run.trajectory.costs[j];
      fine_total += moved;
      begin = end;
      WorkFunction next = w;
      if (const auto* r = std::get_if<ServerRequest>(&events[i]))
        next = update(w, r->point);
      else
        next = taxi_update_closed(w, std::get<TaxiRequest>(events[i]).start, std::get<TaxiRequest>(events[i]).dest);
      const Configuration& fc = run.trajectory.configurations[end];
      const auto here = coarse_of(fc);
      const Value ext = extended_cost(w, next);
      total_extended += ext;
      json step = {{"event", format_event(events[i], *space)},
                   {"configuration", here ? labels(*here, *space) : labels(fc, fine)},
                   {"cost", str(moved, fine_scale)},
                   {"extended", str(ext, scale)}};
      step["pinned"] = prev ? json(str(next(*prev) - w(*prev), scale)) : json(nullptr);
      result["steps"].push_back(step);
      prev = here;
      w = std::move(next);
    }
    result["refine"] = refine;
    result["opt"] = str(offline_opt(w), scale);
    result["total_cost"] = str(fine_total, fine_scale);
    total_cost = -1;
  }
  if (total_cost >= 0) result["total_cost"] = str(total_cost, scale);
  result["total_extended"] = str(total_extended, scale);
  result["problems"] = problems;
  result["status"] = problems.empty() ? "ok" : "failed";
  return result;
}

// ------------------------------------------------------------------ verify

json suite_json(const SuiteResult& r, Value scale) {
  json out = {{"scale", scale}, {"suite", std::string(to_string(r.suite))}, {"cases", r.cases}, {"failures", r.failures}};
  out["first_witness"] = r.first_witness ? json(*r.first_witness) : json(nullptr);
  out["witness_table"] = r.witness_table ? *r.witness_table : json(nullptr);
  out["status"] = r.passed() ? "ok" : "failed";
  return out;
}

json cmd_verify(const json& in) {
  const Suite suite = parse_suite(in.at("suite").get<std::string>());
  if (in.contains("work_function")) {
    const WorkFunction w = work_function_from_json(in.at("work_function"));
    std::optional<PointId> r;
    if (in.contains("request") && !in.at("request").is_null()) r = w.metric().point(in.at("request").get<std::string>());
    return suite_json(check_table(suite, w, r), w.metric().scale());
  }
  SuiteOptions o;
  o.space = space_from_json(in.at("space"));
  o.k = in.at("k").get<int>();
  o.cases = get_or<std::size_t>(in, "cases", 100);
  o.seed = get_or<std::uint64_t>(in, "seed", 1);
  o.max_requests = get_or<int>(in, "max_requests", 8);
  return suite_json(run_suite(suite, o), o.space->scale());
}

// --------------------------------------------------------------- potential

Formulation parse_formulation(std::string_view s) {
  for (Formulation f : {Formulation::server, Formulation::evader, Formulation::lazy_k3, Formulation::mst})
    if (to_string(f) == s) return f;
  fail(ErrorKind::invalid_input, "unknown formulation '" + std::string(s) + "' (server, evader, lazy_k3, mst)");
}

json cmd_potential(const json& in) {
  const Formulation form = parse_formulation(get_or<std::string>(in, "formulation", "server"));
  const TupleScope scope = get_or<std::string>(in, "scope", "original") == "all" ? TupleScope::all : TupleScope::original;
  std::optional<WorkFunction> w;
  if (in.contains("work_function")) {
    w = work_function_from_json(in.at("work_function"));
  } else {
    SpacePtr space = space_from_json(in.at("space"));
    const bool extend = get_or<bool>(in, "auto_extend", true);
    if (form == Formulation::server && extend) space = antipodal_extension(space);
    const auto configs = ConfigSpace::create(space, in.at("k").get<int>());
    const Configuration start = parse_configuration(in.at("start"), *space);
    w = apply_events(WorkFunction::cone(configs, start), events_of(in, *space));
  }
  const MetricSpace& s = w->metric();
  const Value scale = s.scale();
  json result = {{"scale", scale}, {"formulation", std::string(to_string(form))}};
  PotentialReport rep;
  switch (form) {
    case Formulation::server:
      if (in.contains("tuple") && !in.at("tuple").is_null()) {
        for (const auto& p : in.at("tuple")) rep.achiever.push_back(s.point(p.get<std::string>()));
        rep.terms = server_potential_terms(*w, rep.achiever);
        rep.value = server_potential_at(*w, rep.achiever);
      } else {
        rep = server_potential(*w, scope);
        result["achievers"] = rep.all_achievers.size();
      }
      break;
    case Formulation::evader:
      rep = evader_potential(*w);
      result["shift"] = str(evader_server_shift(s, w->k()), scale);
      break;
    case Formulation::lazy_k3:
      rep = lazy_potential_k3(*w);
      break;
    case Formulation::mst: {
      const MstReport mst = mst_evader_potential(*w);
      rep.value = mst.value;
      json edges = json::array();
      for (const auto& [a, b] : mst.edges) edges.push_back({s.label(a), s.label(b)});
      result["edges"] = edges;
      result["last_request_is_leaf"] = mst.last_request_is_leaf;
      break;
    }
  }
  result["value"] = str(rep.value, scale);
  result["achiever"] = labels(rep.achiever, s);
  json terms = json::array();
  for (std::size_t i = 0; i < rep.terms.size(); ++i) {
    json t = {{"value", str(rep.terms[i], scale)}};
    if (form == Formulation::server)
      t["configuration"] = labels(potential_term_config(s, rep.achiever, static_cast<int>(i)), s);
    terms.push_back(t);
  }
  result["terms"] = terms;
  result["status"] = "ok";
  return result;
}

// ---------------------------------------------------------- counterexample

json cmd_counterexample(const json& in) {
  ReplayOptions o;
  o.scale = get_or<Value>(in, "scale", 2);
  if (in.contains("tie") && !in.at("tie").is_null()) o.tie = in.at("tie").get<std::string>();
  o.refine = get_or<Value>(in, "refine", 8);
  const CounterexampleReport r = replay_counterexample(o);
  const MetricSpace& s = *r.space;
  const Value scale = s.scale();
  json stages = json::array();
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    json st = {{"label", r.stages[i].label}, {"support", support_json(r.stages[i].support, r.stages[i].w)}};
    st["event"] = i == 0 ? json(nullptr) : json(format_event(r.events[i - 1], s));
    stages.push_back(st);
  }
  json rows = json::array();
  std::string line;
  for (const BoundTerm& b : r.bound_terms) {
    json moves = json::array();
    std::string bracket = "[" + str(b.via_value, scale);
    for (Value m : b.moves) {
      moves.push_back(str(m, scale));
      bracket += "+" + str(m, scale);
    }
    line += (line.empty() ? "" : "+") + bracket + "]";
    rows.push_back({{"term", labels(b.term, s)},
                    {"via", labels(b.via, s)},
                    {"via_value", str(b.via_value, scale)},
                    {"moves", moves},
                    {"total", str(b.total(), scale)}});
  }
  line += " = " + str(r.bound_total, scale);
  const std::vector<PointId> p456{s.point("4"), s.point("5"), s.point("6")};
  const bool attained_456 =
      std::find(r.phi_t.all_achievers.begin(), r.phi_t.all_achievers.end(), p456) != r.phi_t.all_achievers.end();
  json bound_terms = json::array();
  for (Value v : r.bound_tuple_terms) bound_terms.push_back(str(v, scale));
  return {{"scale", scale},
          {"stages", stages},
          {"wfa_configuration", labels(r.wfa_config, s)},
          {"single_server", r.single_server},
          {"w_t_at_ct", str(r.w_t_at_ct, scale)},
          {"w_t1_at_ct", str(r.w_t1_at_ct, scale)},
          {"pinned_increase", str(r.pinned_increase, scale)},
          {"extended_cost", str(r.extended_cost, scale)},
          {"phi_t", str(r.phi_t.value, scale)},
          {"phi_t_achiever", labels(r.phi_t.achiever, s)},
          {"phi_t_achievers", r.phi_t.all_achievers.size()},
          {"phi_t_attained_at_456", attained_456},
          {"phi_t1", str(r.phi_t1.value, scale)},
          {"bound_tuple", labels(r.bound_tuple, s)},
          {"bound_tuple_terms", bound_terms},
          {"bound_rows", rows},
          {"bound_line", line},
          {"bound_total", str(r.bound_total, scale)},
          {"laziness_gap", str(r.gap, scale)},
          {"mismatches", r.mismatches},
          {"status", r.ok() ? "ok" : "failed"}};
}

// --------------------------------------------------------------- enumerate

json cmd_enumerate(const json& in, const Progress& progress) {
  EnumerationOptions o;
  o.num_points = get_or<int>(in, "num_points", 16);
  o.k = get_or<int>(in, "k", 3);
  o.dest_step = get_or<int>(in, "dest_step", 2);
  o.taxi_alphabet = get_or<bool>(in, "taxi", true);
  o.midpoint_violation_requests = get_or<bool>(in, "midpoint", false);
  o.max_states = get_or<std::size_t>(in, "max_states", 0);
  o.workers = get_or<int>(in, "workers", 1);
  o.seed_cones = get_or<bool>(in, "seed_cones", true);
  o.checkpoint_every = get_or<std::size_t>(in, "checkpoint_every", 50000);
  if (in.contains("checkpoint") && !in.at("checkpoint").is_null()) o.checkpoint = in.at("checkpoint").get<std::string>();
  o.resume = get_or<bool>(in, "resume", false);
  o.progress = progress;
  const bool seed_replay = get_or<bool>(in, "seed_replay", false);
  const bool replay_grid = o.num_points == 16 && o.k == 3 && o.dest_step == 2;
  std::optional<std::string> replay_fp;
  if (replay_grid || seed_replay) {
    if (!replay_grid) fail(ErrorKind::invalid_input, "the replay state lives on 16 points with k = 3 and dest_step 2");
    const CounterexampleReport r = replay_counterexample();
    const WorkFunction& wt = r.stages[r.stages.size() - 2].w;
    replay_fp = fingerprint(wt, o.dest_step);
    if (seed_replay) o.extra_seeds.push_back(wt);
  }
  const EnumerationResult res = enumerate_reachable(o);
  const SpacePtr circle = build_circle(o.num_points, o.num_points, 2);
  json violations = json::array();
  bool replay_found = false;
  for (const Violation& v : res.violations) {
    violations.push_back({{"fingerprint", v.fingerprint},
                          {"request", circle->label(v.request)},
                          {"extended", str(v.extended_cost, 2)},
                          {"potential_change", str(v.potential_change, 2)}});
    replay_found |= replay_fp && v.fingerprint == *replay_fp;
  }
  json out = {{"scale", 2},
              {"states", res.states},
              {"expanded", res.expanded},
              {"complete", res.complete},
              {"violations", violations},
              {"violation_classes", res.violation_classes}};
  out["replay_fingerprint"] = replay_fp ? json(*replay_fp) : json(nullptr);
  out["replay_is_violation"] = replay_found;
  out["status"] = res.complete ? "ok" : "partial";
  return out;
}

// -------------------------------------------------------- reconstruct-tree

json cmd_reconstruct_tree(const json& in) {
  const SpacePtr space = space_from_json(in.at("space"));
  const MetricSpace& s = *space;
  const QuasiconcavityCheck q = is_quasiconcave(s);
  json out = {{"scale", s.scale()}, {"quasiconcave", q.holds}};
  if (!q.holds) {
    const auto& wit = *q.witness;
    json sums = json::array();
    for (Value v : wit.pair_sums) sums.push_back(str(v, s.scale()));
    out["witness"] = {{"points", labels(std::span<const PointId>(wit.points), s)}, {"pair_sums", sums}};
    out["status"] = "failed";
    return out;
  }
  const WeightedTree t = tree_from_quasiconcave(s);
  const Value ws = s.scale() * t.weight_scale;
  json nodes = json::array();
  for (const auto& n : t.nodes) nodes.push_back(n ? json(s.label(*n)) : json(nullptr));
  json edges = json::array();
  for (const auto& e : t.edges) edges.push_back({e.u, e.v, str(e.weight, ws)});
  bool exact = true;
  for (PointId a = 0; a < s.size(); ++a)
    for (PointId b = 0; b < s.size(); ++b) exact &= t.path_weight(a, b) == s.distance(a, b) * t.weight_scale;
  out["tree"] = {{"nodes", nodes}, {"edges", edges}};
  out["round_trip"] = exact;
  out["status"] = exact ? "ok" : "failed";
  return out;
}

void diff(const json& a, const json& b, const std::string& path, std::vector<std::string>& out) {
  if (a.is_object() && b.is_object()) {
    for (const auto& [key, v] : a.items())
      if (!b.contains(key))
        out.push_back(path + "/" + key + " missing from the rerun");
      else
        diff(v, b.at(key), path + "/" + key, out);
    for (const auto& [key, v] : b.items())
      if (!a.contains(key)) out.push_back(path + "/" + key + " missing from the report");
    return;
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) diff(a[i], b[i], path + "/" + std::to_string(i), out);
    return;
  }
  if (a != b) out.push_back(path + ": report has " + a.dump() + ", rerun gives " + b.dump());
}

std::string join(const json& arr) {
  std::string out;
  for (const auto& v : arr) out += (out.empty() ? "" : " ") + v.get<std::string>();
  return out;
}

std::string braces(const json& arr) {
  std::string out = "{";
  for (const auto& v : arr) out += (out.size() > 1 ? ", " : "") + v.get<std::string>();
  return out + "}";
}

void text_simulate(std::ostream& o, const json& r) {
  o << "step  event                 configuration        cost      extended  pinned\n";
  int i = 1;
  for (const auto& st : r.at("steps")) {
    o << std::left;
    o.width(6);
    o << i++;
    o.width(22);
    o << st.at("event").get<std::string>();
    o.width(21);
    o << braces(st.at("configuration"));
    o.width(10);
    o << st.at("cost").get<std::string>();
    o.width(10);
    o << st.at("extended").get<std::string>();
    o << (st.at("pinned").is_null() ? "-" : st.at("pinned").get<std::string>()) << "\n";
  }
  o << "total cost " << r.at("total_cost").get<std::string>() << ", total extended cost "
    << r.at("total_extended").get<std::string>() << ", opt " << r.at("opt").get<std::string>() << "\n";
  for (const auto& p : r.at("problems")) o << "problem: " << p.get<std::string>() << "\n";
}

void text_verify(std::ostream& o, const json& r) {
  o << r.at("suite").get<std::string>() << ": " << r.at("cases").get<std::size_t>() << " cases, "
    << r.at("failures").get<std::size_t>() << " failures\n";
  if (!r.at("first_witness").is_null()) o << "first witness: " << r.at("first_witness").get<std::string>() << "\n";
}

void text_potential(std::ostream& o, const json& r) {
  o << r.at("formulation").get<std::string>() << " potential " << r.at("value").get<std::string>();
  if (!r.at("achiever").empty()) o << " at (" << join(r.at("achiever")) << ")";
  if (r.contains("achievers")) o << ", " << r.at("achievers").get<std::size_t>() << " minimising tuples";
  o << "\n";
  std::string line;
  for (const auto& t : r.at("terms")) {
    line += line.empty() ? "" : " + ";
    line += t.contains("configuration") ? "w(" + join(t.at("configuration")) + ")=" : "";
    line += t.at("value").get<std::string>();
  }
  if (!line.empty()) o << "  " << line << " = " << r.at("value").get<std::string>() << "\n";
  if (r.contains("shift")) o << "  minus the shift " << r.at("shift").get<std::string>() << " gives the server value\n";
  if (r.contains("last_request_is_leaf"))
    o << "  last request is a leaf of some minimum spanning tree: " << (r.at("last_request_is_leaf").get<bool>() ? "yes" : "no") << "\n";
}

void text_counterexample(std::ostream& o, const json& r) {
  for (const auto& st : r.at("stages")) {
    o << st.at("label").get<std::string>();
    if (!st.at("event").is_null()) o << " after " << st.at("event").get<std::string>();
    o << ":";
    for (const auto& s : st.at("support"))
      o << " " << join(s.at("configuration")) << "=" << s.at("value").get<std::string>();
    o << "\n";
  }
  o << "C_t = " << braces(r.at("wfa_configuration")) << (r.at("single_server").get<bool>() ? ", one server moved" : "")
    << "\n";
  o << "w_{t+1}(C_t) - w_t(C_t) = " << r.at("w_t1_at_ct").get<std::string>() << " - "
    << r.at("w_t_at_ct").get<std::string>() << " = " << r.at("pinned_increase").get<std::string>() << "\n";
  o << "Phi(w_t) = " << r.at("phi_t").get<std::string>() << ", " << r.at("phi_t_achievers").get<std::size_t>()
    << " minimising tuples, (4, 5, 6) "
    << (r.at("phi_t_attained_at_456").get<bool>() ? "among them" : "not among them") << "\n";
  o << "Phi(w_{t+1}) <= Phi_" << braces(r.at("bound_tuple")) << "(w_{t+1}) <= " << r.at("bound_line").get<std::string>()
    << "\n";
  o << "Phi(w_{t+1}) = " << r.at("phi_t1").get<std::string>() << ", laziness gap "
    << r.at("laziness_gap").get<std::string>() << "\n";
  for (const auto& m : r.at("mismatches")) o << "mismatch: " << m.get<std::string>() << "\n";
}

void text_enumerate(std::ostream& o, const json& r) {
  o << r.at("states").get<std::size_t>() << " canonical states, " << r.at("expanded").get<std::size_t>()
    << " expanded, " << (r.at("complete").get<bool>() ? "complete" : "partial") << "\n";
  o << r.at("violation_classes").get<std::size_t>() << " violation classes\n";
  for (const auto& v : r.at("violations"))
    o << "  " << v.at("fingerprint").get<std::string>() << " request " << v.at("request").get<std::string>()
      << " extended " << v.at("extended").get<std::string>() << " potential change "
      << v.at("potential_change").get<std::string>() << "\n";
  if (!r.at("replay_fingerprint").is_null())
    o << "replay state " << r.at("replay_fingerprint").get<std::string>()
      << (r.at("replay_is_violation").get<bool>() ? " is among the violations\n" : " was not reported\n");
}

void text_tree(std::ostream& o, const json& r) {
  if (!r.at("quasiconcave").get<bool>()) {
    const auto& w = r.at("witness");
    o << "not quasiconcave: points " << join(w.at("points")) << " have pair sums " << join(w.at("pair_sums")) << "\n";
    return;
  }
  const auto& nodes = r.at("tree").at("nodes");
  auto name = [&](int i) { return nodes[static_cast<std::size_t>(i)].is_null() ? "#" + std::to_string(i) : nodes[static_cast<std::size_t>(i)].get<std::string>(); };
  for (const auto& e : r.at("tree").at("edges"))
    o << name(e[0].get<int>()) << " -- " << name(e[1].get<int>()) << "  " << e[2].get<std::string>() << "\n";
  o << "leaf distances reproduced: " << (r.at("round_trip").get<bool>() ? "yes" : "no") << "\n";
}

}  // namespace

json run_command(std::string_view command, const json& input, const Progress& progress) {
  try {
    if (command == "simulate") return cmd_simulate(input);
    if (command == "verify") return cmd_verify(input);
    if (command == "potential") return cmd_potential(input);
    if (command == "counterexample") return cmd_counterexample(input);
    if (command == "enumerate") return cmd_enumerate(input, progress);
    if (command == "reconstruct-tree") return cmd_reconstruct_tree(input);
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, "bad " + std::string(command) + " input: " + e.what());
  }
  fail(ErrorKind::invalid_input, "unknown command '" + std::string(command) + "'");
}

json make_report(std::string_view command, const json& input, const Progress& progress) {
  return {{"command", std::string(command)}, {"input", input}, {"result", run_command(command, input, progress)}};
}

std::vector<std::string> check_report(const json& report) {
  if (!report.is_object() || !report.contains("command") || !report.contains("input") || !report.contains("result"))
    fail(ErrorKind::parse, "a report has command, input and result");
  json input = report.at("input");
  input.erase("checkpoint");
  input.erase("resume");
  const json fresh = run_command(report.at("command").get<std::string>(), input);
  std::vector<std::string> out;
  diff(report.at("result"), fresh, "", out);
  return out;
}

std::string render_text(const json& report) {
  std::ostringstream o;
  const std::string cmd = report.at("command").get<std::string>();
  const json& r = report.at("result");
  o << cmd << ": scale " << r.at("scale").get<Value>() << ", values in original units\n";
  if (cmd == "simulate") text_simulate(o, r);
  if (cmd == "verify") text_verify(o, r);
  if (cmd == "potential") text_potential(o, r);
  if (cmd == "counterexample") text_counterexample(o, r);
  if (cmd == "enumerate") text_enumerate(o, r);
  if (cmd == "reconstruct-tree") text_tree(o, r);
  o << "status: " << r.at("status").get<std::string>() << "\n";
  return o.str();
}

int exit_code(const json& result) {
  const std::string s = result.at("status").get<std::string>();
  if (s == "ok") return 0;
  if (s == "partial") return 4;
  return 3;
}

}  // namespace kserver
