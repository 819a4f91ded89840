#include <iostream>

#include <CLI11.hpp>

#include "pgsynth/io.hpp"
#include "pgsynth/solver.hpp"

namespace pgsynth {

namespace {

constexpr std::size_t kDefaultStateLimit = 200000;

PetriGame load_game_file(const std::string& path, std::int64_t bound_override) {
  PetriGame g = parse_game(read_file(path));
  if (bound_override > 0) g.bound = bound_override;
  return g;
}

void require_synthesizable(const PetriGame& g, std::size_t state_limit,
                           std::ostream& err) {
  GameReport rep = validate_game(g, state_limit);
  if (rep.synthesizable()) return;
  for (const auto& issue : rep.issues) err << "validation: " << issue << "\n";
  if (rep.bound_verdict == BoundVerdict::kUnknown)
    throw limit_exceeded("boundedness could not be established within the state limit");
  throw invalid_input("game failed validation");
}

int run_validate(const std::string& path, std::int64_t bound, std::size_t limit,
                 std::ostream& out, std::ostream& err) {
  PetriGame g = load_game_file(path, bound);
  GameReport rep = validate_game(g, limit);
  auto verdict = [](bool ok) { return ok ? "ok" : "FAIL"; };
  out << "partition:        " << verdict(rep.partition_ok) << "\n";
  out << "environment:      " << verdict(rep.env_token_ok) << "\n";
  out << "bad places:       " << verdict(rep.bad_ok) << "\n";
  out << "boundedness(k=" << g.bound << "): "
      << (rep.bound_verdict == BoundVerdict::kBounded
              ? "ok"
              : rep.bound_verdict == BoundVerdict::kViolated ? "FAIL"
                                                             : "unknown (unbounded-suspect)")
      << "\n";
  for (const auto& issue : rep.issues) out << "  - " << issue << "\n";
  out << (rep.synthesizable() ? "synthesizable" : "not synthesizable") << "\n";
  if (rep.synthesizable()) return 0;
  if (rep.bound_verdict == BoundVerdict::kUnknown) return 3;
  (void)err;
  return 2;
}

int run_solve(const std::string& path, std::int64_t bound, std::size_t limit,
              std::ostream& out, std::ostream& err) {
  PetriGame g = load_game_file(path, bound);
  require_synthesizable(g, limit, err);
  GameGraph gg = build_game_graph(g, limit);
  SolveResult sr = solve(gg);
  out << "states: " << gg.states.size() << ", edges: " << gg.edges.size()
      << ", w0: " << gg.w0.size() << ", w1: " << gg.w1.size() << "\n";
  out << "winning initial states: " << sr.winning_initials.size() << " of "
      << gg.initial.size() << "\n";
  bool real = realizable(sr);
  out << (real ? "realizable" : "unrealizable") << "\n";
  return real ? 0 : 1;
}

int run_synth(const std::string& path, const std::string& out_path, std::int64_t bound,
              std::size_t limit, std::ostream& out, std::ostream& err) {
  PetriGame g = load_game_file(path, bound);
  require_synthesizable(g, limit, err);
  GameGraph gg = build_game_graph(g, limit);
  SolveResult sr = solve(gg);
  if (!realizable(sr)) {
    out << "unrealizable\n";
    return 1;
  }
  StrategyNet s = extract_strategy(g, gg, sr);
  write_file(out_path, serialize_strategy(s));
  out << "strategy: " << s.net.places.size() << " places, "
      << s.net.transitions.size() << " transitions -> " << out_path << "\n";
  return 0;
}

int run_verify(const std::string& strategy_path, const std::string& game_path,
               std::int64_t bound, std::size_t limit, std::size_t plays,
               std::uint64_t seed, std::ostream& out, std::ostream& err) {
  PetriGame g = load_game_file(game_path, bound);
  StrategyNet s = parse_strategy(read_file(strategy_path));
  VerificationReport rep = verify_strategy(g, s, limit);
  auto line = [&](const char* name, bool ok, const std::optional<StrategyWitness>& w) {
    out << name << ": " << (ok ? "ok" : "FAIL") << "\n";
    if (!ok && w) {
      out << "  witness marking " << w->marking.key() << " after [";
      for (std::size_t i = 0; i < w->firing_sequence.size(); ++i)
        out << (i ? " " : "") << w->firing_sequence[i];
      out << "], offenders:";
      for (const auto& o : w->offenders) out << " " << o;
      out << "\n";
    }
  };
  line("determinism (S1)        ", rep.s1_ok, rep.s1_witness);
  line("environment freedom (S2)", rep.s2_ok, rep.s2_witness);
  line("deadlock avoidance      ", rep.deadlock_avoiding, rep.deadlock_witness);
  line("winning                 ", rep.winning, rep.winning_witness);
  bool plays_ok = true;
  if (plays > 0) {
    for (std::size_t i = 0; i < plays; ++i) {
      PlayTrace trace = simulate_play(s, make_seeded_chooser(seed + i), 10000);
      Marking m = trace.initial;
      auto bad_in = [&](const Marking& mk) {
        for (const auto& [p, c] : mk)
          if (g.is_bad(s.label_of(p))) return true;
        return false;
      };
      bool bad = bad_in(m);
      for (const auto& [t, mk] : trace.steps) bad = bad || bad_in(mk);
      if (bad) plays_ok = false;
    }
    out << "random plays (" << plays << ", seed " << seed
        << "): " << (plays_ok ? "no bad place reached" : "BAD PLACE REACHED") << "\n";
  }
  (void)err;
  return rep.all_ok() && plays_ok ? 0 : 1;
}

int run_distribute(const std::string& strategy_path, const std::string& game_path,
                   const std::string& out_path, std::int64_t bound, std::size_t limit,
                   std::ostream& out, std::ostream& err) {
  PetriGame g = load_game_file(game_path, bound);
  StrategyNet s = parse_strategy(read_file(strategy_path));
  std::vector<std::string> issues = validate_strategy_structure(g, s);
  if (!issues.empty()) throw invalid_input("strategy: " + issues.front());
  std::vector<LocalController> cs = to_local_controllers(g, s);
  DistributionCheck check = check_distribution(g, s, cs);
  out << cs.size() << " controllers\n";
  out << "composition isomorphic to strategy: " << (check.ok ? "ok" : "FAIL") << "\n";
  if (!check.ok) err << check.failure << "\n";
  if (!out_path.empty()) {
    write_file(out_path, serialize_controllers(cs));
    out << "controllers -> " << out_path << "\n";
  }
  (void)limit;
  return check.ok ? 0 : 1;
}

int run_unfold(const std::string& path, int depth, const std::string& out_path,
               const std::string& format, std::int64_t bound, std::ostream& out,
               std::ostream& err) {
  PetriGame g = load_game_file(path, bound);
  BranchingProcess bp = unfold_prefix(g.net, depth);
  BranchingProcessReport rep = validate_branching_process(bp);
  if (!rep.ok) {
    for (const auto& i : rep.issues) err << "unfolding: " << i << "\n";
    throw Error(ErrorKind::kInternal, "prefix failed the occurrence-net axioms");
  }
  std::string text =
      format == "json" ? serialize_prefix(bp) : export_dot_branching_process(g, bp);
  if (out_path.empty())
    out << text;
  else {
    write_file(out_path, text);
    out << "prefix: " << bp.occ.places.size() << " places, "
        << bp.occ.transitions.size() << " transitions -> " << out_path << "\n";
  }
  return 0;
}

int run_export(const std::string& path, const std::string& what,
               const std::string& format, int depth, const std::string& out_path,
               std::int64_t bound, std::size_t limit, std::ostream& out,
               std::ostream& err) {
  std::string text = read_file(path);
  std::string kind = document_kind(text);
  std::string rendered;
  if (kind == "game") {
    PetriGame g = parse_game(text);
    if (bound > 0) g.bound = bound;
    if (what == "net" || what.empty()) {
      rendered = format == "json" ? serialize_game(g) : export_dot_game(g);
    } else if (what == "graph") {
      require_synthesizable(g, limit, err);
      GameGraph gg = build_game_graph(g, limit);
      if (format == "json")
        throw invalid_input("graph export supports only dot");
      rendered = export_dot_game_graph(gg);
    } else if (what == "unfolding") {
      BranchingProcess bp = unfold_prefix(g.net, depth);
      rendered = format == "json" ? serialize_prefix(bp)
                                  : export_dot_branching_process(g, bp);
    } else {
      throw invalid_input("unknown export target '" + what + "'");
    }
  } else if (kind == "strategy" || kind == "prefix") {
    StrategyNet s = parse_strategy(text);
    if (format == "json") {
      rendered = serialize_strategy(s);
    } else {
      // Without the game the partition is unknown; render plain.
      rendered = export_dot_net(s.net);
    }
  } else if (kind == "controllers") {
    std::vector<LocalController> cs = parse_controllers(text);
    if (format == "json") {
      rendered = serialize_controllers(cs);
    } else {
      PetriGame empty;
      rendered = export_dot_controllers(empty, cs);
    }
  } else {
    throw invalid_input("unknown document kind '" + kind + "'");
  }
  if (out_path.empty())
    out << rendered;
  else
    write_file(out_path, rendered);
  return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesis of distributed controllers for Petri games"};
  app.require_subcommand(1);

  std::string input, against, output, format = "dot", what = "net";
  std::int64_t bound = 0;
  std::size_t state_limit = kDefaultStateLimit;
  int depth = 3;
  std::size_t plays = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool with_input = true) {
    if (with_input) cmd->add_option("input", input, "input document")->required();
    cmd->add_option("--bound", bound, "override the declared bound k");
    cmd->add_option("--state-limit", state_limit, "exploration state limit");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a game document");
  add_common(validate);

  CLI::App* solve_cmd = app.add_subcommand("solve", "decide realizability");
  add_common(solve_cmd);

  CLI::App* synth = app.add_subcommand("synth", "synthesize a winning strategy");
  add_common(synth);
  synth->add_option("-o,--out", output, "strategy output file")->required();

  CLI::App* verify = app.add_subcommand("verify", "verify a strategy file");
  add_common(verify);
  verify->add_option("--against", against, "game document")->required();
  verify->add_option("--plays", plays, "extra random plays to simulate");
  verify->add_option("--seed", seed, "seed for the random plays");

  CLI::App* distribute =
      app.add_subcommand("distribute", "decompose a strategy into local controllers");
  add_common(distribute);
  distribute->add_option("--against", against, "game document")->required();
  distribute->add_option("-o,--out", output, "controllers output file");

  CLI::App* unfold = app.add_subcommand("unfold", "depth-limited unfolding prefix");
  add_common(unfold);
  unfold->add_option("--depth", depth, "transition layers to unfold");
  unfold->add_option("-o,--out", output, "output file (default stdout)");
  unfold->add_option("--format", format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}));

  CLI::App* export_cmd = app.add_subcommand("export", "render a document");
  add_common(export_cmd);
  export_cmd->add_option("--what", what, "net, graph, or unfolding")
      ->check(CLI::IsMember({"net", "graph", "unfolding"}));
  export_cmd->add_option("--depth", depth, "layers for unfolding export");
  export_cmd->add_option("--format", format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("-o,--out", output, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return run_validate(input, bound, state_limit, out, err);
    if (solve_cmd->parsed()) return run_solve(input, bound, state_limit, out, err);
    if (synth->parsed()) return run_synth(input, output, bound, state_limit, out, err);
    if (verify->parsed())
      return run_verify(input, against, bound, state_limit, plays, seed, out, err);
    if (distribute->parsed())
      return run_distribute(input, against, output, bound, state_limit, out, err);
    if (unfold->parsed())
      return run_unfold(input, depth, output, format, bound, out, err);
    if (export_cmd->parsed())
      return run_export(input, what, format, depth, output, bound, state_limit, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kLimitExceeded:
        return 3;
      case ErrorKind::kUnrealizable:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace pgsynth
