#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kserver/error.hpp"
#include "kserver/io.hpp"
#include "kserver/report.hpp"

using nlohmann::json;
using namespace kserver;

namespace {

enum Exit { ok = 0, usage = 1, parse_error = 2, failed = 3, partial = 4 };

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
      return parse_error;
    case ErrorKind::invariant:
      return failed;
    case ErrorKind::budget:
      return partial;
    default:
      return usage;
  }
}

struct Common {
  std::string format = "text";
  std::string output;
};

void emit(const Common& c, const json& report) {
  const std::string text = c.format == "json" ? report.dump(2) + "\n" : render_text(report);
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.output);
  if (!f) fail(ErrorKind::invalid_input, "cannot write " + c.output);
  f << text;
}

json start_json(const std::vector<std::string>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(p);
  return out;
}

json events_json(const std::string& path, const MetricSpace& space) {
  if (path.empty()) return json::array();
  const RequestSeq seq = load_sequence(path, space);  // line-numbered diagnostics
  json out = json::array();
  for (const Event& e : seq) out.push_back(format_event(e, space));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact workbench for the k-server work function algorithm"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("-o,--output", common.output, "Write the report to a file");

  std::string space_path, sequence_path, table_path, tie, suite = "duality", formulation = "server", scope = "original";
  std::string checkpoint, request, report_path;
  std::vector<std::string> start, tuple;
  int k = 2, enum_k = 3, max_requests = 8, workers = 1, num_points = 16, dest_step = 2;
  long long refine = 8, scale = 2;
  std::size_t cases = 100, max_states = 0, checkpoint_every = 50000;
  std::uint64_t seed = 1;
  bool no_extend = false, server_only = false, midpoint = false, seed_replay = false, no_cones = false, resume = false,
       progress = false;

  auto* sim = app.add_subcommand("simulate", "Run WFA on a request sequence and print the trajectory");
  sim->add_option("--space", space_path, "Space description (JSON)")->required()->check(CLI::ExistingFile);
  sim->add_option("--sequence", sequence_path, "Event file")->check(CLI::ExistingFile);
  sim->add_option("-k", k, "Number of servers")->required()->check(CLI::Range(1, 8));
  sim->add_option("--start", start, "Initial configuration")->required()->delimiter(',');
  sim->add_option("--tie", tie, "lexicographic, first or prefer:<point>");
  sim->add_option("--refine", refine, "Refinement factor for taxi events")->check(CLI::PositiveNumber);

  auto* ver = app.add_subcommand("verify", "Run a randomised property suite");
  ver->add_option("--suite", suite, "Suite name")->required();
  ver->add_option("--space", space_path, "Space description (JSON)")->check(CLI::ExistingFile);
  ver->add_option("--table", table_path, "Check one work-function dump instead")->check(CLI::ExistingFile);
  ver->add_option("--request", request, "Request point for --table");
  ver->add_option("-k", k, "Number of servers")->check(CLI::Range(1, 8));
  ver->add_option("--cases", cases, "Random cases")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "Random seed");
  ver->add_option("--max-requests", max_requests, "Requests per generated work function")->check(CLI::PositiveNumber);

  auto* pot = app.add_subcommand("potential", "Evaluate a potential");
  pot->add_option("--space", space_path, "Space description (JSON)")->check(CLI::ExistingFile);
  pot->add_option("--table", table_path, "Work-function dump")->check(CLI::ExistingFile);
  pot->add_option("--sequence", sequence_path, "Requests applied to the start cone")->check(CLI::ExistingFile);
  pot->add_option("-k", k, "Number of servers")->check(CLI::Range(1, 8));
  pot->add_option("--start", start, "Cone configuration")->delimiter(',');
  pot->add_option("--formulation", formulation, "server, evader, lazy_k3 or mst")
      ->check(CLI::IsMember({"server", "evader", "lazy_k3", "mst"}));
  pot->add_option("--scope", scope, "Tuple points: original or all")->check(CLI::IsMember({"original", "all"}));
  pot->add_option("--tuple", tuple, "Evaluate one tuple")->delimiter(',');
  pot->add_flag("--no-extend", no_extend, "Do not add antipodes to the space");

  auto* cex = app.add_subcommand("counterexample", "Replay the non-lazy instance on the circle of circumference 8");
  cex->add_option("--scale", scale, "Length scale (even)");
  cex->add_option("--tie", tie, "Tie-break for the WFA run (default prefer:6)");
  cex->add_option("--refine", refine, "Refinement factor for the WFA run")->check(CLI::PositiveNumber);

  auto* en = app.add_subcommand("enumerate", "Closure of reachable work functions with a laziness check");
  en->add_option("--num-points", num_points, "Circle points (scale 2)")->check(CLI::PositiveNumber);
  en->add_option("-k", enum_k, "Number of servers")->check(CLI::Range(1, 8));
  en->add_option("--dest-step", dest_step, "Destination grid step")->check(CLI::PositiveNumber);
  en->add_flag("--server-only", server_only, "Server requests on the grid only");
  en->add_flag("--midpoint", midpoint, "Also test requests between grid points");
  en->add_option("--max-states", max_states, "State budget (0 = unlimited)");
  en->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  en->add_option("--checkpoint", checkpoint, "Checkpoint file");
  en->add_option("--checkpoint-every", checkpoint_every, "States between checkpoints")->check(CLI::PositiveNumber);
  en->add_flag("--resume", resume, "Resume from the checkpoint");
  en->add_flag("--seed-replay", seed_replay, "Seed the replay state w_t");
  en->add_flag("--no-cones", no_cones, "Do not seed the cones");
  en->add_flag("--progress", progress, "Print progress to stderr");

  auto* tree = app.add_subcommand("reconstruct-tree", "Rebuild a tree from a quasiconcave metric");
  tree->add_option("--space", space_path, "Space description (JSON)")->required()->check(CLI::ExistingFile);

  auto* chk = app.add_subcommand("check-report", "Recompute a JSON report and compare");
  chk->add_option("report", report_path, "Report file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    json input;
    std::string command;
    Progress on_progress;
    if (*sim) {
      command = "simulate";
      const json space = read_json_file(space_path);
      input = {{"space", space},
               {"k", k},
               {"start", start_json(start)},
               {"events", events_json(sequence_path, *space_from_json(space))},
               {"refine", refine}};
      input["tie"] = tie.empty() ? json("lexicographic") : json(tie);
    } else if (*ver) {
      command = "verify";
      input = {{"suite", suite}};
      if (!table_path.empty()) {
        input["work_function"] = read_json_file(table_path);
        if (!request.empty()) input["request"] = request;
      } else {
        if (space_path.empty()) fail(ErrorKind::invalid_input, "verify needs --space or --table");
        input.update({{"space", read_json_file(space_path)},
                      {"k", k},
                      {"cases", cases},
                      {"seed", seed},
                      {"max_requests", max_requests}});
      }
    } else if (*pot) {
      command = "potential";
      input = {{"formulation", formulation}, {"scope", scope}};
      if (!tuple.empty()) input["tuple"] = start_json(tuple);
      if (!table_path.empty()) {
        input["work_function"] = read_json_file(table_path);
      } else {
        if (space_path.empty() || start.empty()) fail(ErrorKind::invalid_input, "potential needs --table or --space with --start");
        const json space = read_json_file(space_path);
        SpacePtr parsed = space_from_json(space);
        input.update({{"space", space},
                      {"k", k},
                      {"start", start_json(start)},
                      {"auto_extend", !no_extend},
                      {"events", events_json(sequence_path, *parsed)}});
      }
    } else if (*cex) {
      command = "counterexample";
      input = {{"scale", scale}, {"refine", refine}};
      if (!tie.empty()) input["tie"] = tie;
    } else if (*en) {
      command = "enumerate";
      input = {{"num_points", num_points},
               {"k", enum_k},
               {"dest_step", dest_step},
               {"taxi", !server_only},
               {"midpoint", midpoint},
               {"max_states", max_states},
               {"workers", workers},
               {"seed_cones", !no_cones},
               {"seed_replay", seed_replay},
               {"resume", resume},
               {"checkpoint_every", checkpoint_every}};
      if (!checkpoint.empty()) input["checkpoint"] = checkpoint;
      if (progress)
        on_progress = [](std::size_t states, std::size_t frontier) {
          static std::size_t last = 0;
          if (states - last >= 10000) {
            last = states;
            std::cerr << states << " states, frontier " << frontier << "\n";
          }
        };
    } else if (*tree) {
      command = "reconstruct-tree";
      input = {{"space", read_json_file(space_path)}};
    } else if (*chk) {
      const json report = read_json_file(report_path);
      const auto diffs = check_report(report);
      for (const auto& d : diffs) std::cout << d << "\n";
      std::cout << (diffs.empty() ? "report reproduced\n" : "report differs from a fresh run\n");
      return diffs.empty() ? ok : failed;
    }
    const json report = make_report(command, input, on_progress);
    emit(common, report);
    return exit_code(report.at("result"));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return parse_error;
  }
}
