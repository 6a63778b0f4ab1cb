#pragma once

// Command-line front end. Exit codes: 0 accept/found/member, 1 reject/none,
// 2 usage or input error, 3 undecided (or sweep warnings), 4 inconsistent.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "distauto/distauto.hpp"

namespace distauto::cli {

inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string cache_dir;
  bool use_cache = true;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t cut = s.find(sep, pos);
    out.push_back(s.substr(pos, cut == std::string::npos ? std::string::npos : cut - pos));
    if (cut == std::string::npos) return out;
    pos = cut + 1;
  }
}

/// Compiles or loads a cached machine; `key` covers everything the result depends on.
template <class Build>
DistributedMachine cached(const Context& ctx, const std::string& key, Build build) {
  namespace fs = std::filesystem;
  if (!ctx.use_cache) return build();
  fs::path file = fs::path(ctx.cache_dir) / (hex(fnv1a(key)) + ".machine");
  std::error_code ec;
  if (fs::exists(file, ec)) {
    try {
      return parse_machine(read_file(file.string()));
    } catch (const std::exception&) {
      // unreadable entry; rebuild below
    }
  }
  DistributedMachine m = build();
  fs::create_directories(ctx.cache_dir, ec);
  if (!ec) {
    fs::path tmp = file;
    tmp += ".tmp";
    try {
      write_file(tmp.string(), to_text(m));
      fs::rename(tmp, file, ec);
    } catch (const std::exception&) {
    }
  }
  return m;
}

inline DistributedMachine resolve_machine(const Context& ctx, const std::string& ref) {
  if (ref == "nlg") return nlg_decider();
  if (ref == "nqlg") return nqlg_decider();
  if (ref == "snowball") return snowball_machine();
  if (ref.rfind("tm-head:", 0) == 0) {
    std::string path = ref.substr(8);
    std::string text = read_file(path);
    return cached(ctx, "v1 tm-head\n" + text, [&] { return tm_head_machine(make_t_infinity(parse_tm(text))); });
  }
  if (ref.rfind("tm-head-plain:", 0) == 0) {
    std::string text = read_file(ref.substr(14));
    return cached(ctx, "v1 tm-head-plain\n" + text, [&] { return tm_head_machine(parse_tm(text)); });
  }
  if (ref.rfind("reduce:", 0) == 0) {
    auto parts = split(ref.substr(7), ':');
    if (parts.size() < 2) throw std::invalid_argument("expected reduce:<class>:<tm-path>");
    ReductionClass cls = parse_reduction_class(parts[0]);
    std::string path = ref.substr(7 + parts[0].size() + 1);
    std::string text = read_file(path);
    return cached(ctx, "v1 reduce " + parts[0] + "\n" + text,
                  [&] { return reduction_automaton(parse_tm(text), cls); });
  }
  return parse_machine(read_file(ref));
}

inline std::string summary(const FamilyReport& r) {
  if (!r.member) return "none";
  std::string s = std::string(to_string(r.family)) + " length " + std::to_string(*r.length);
  if (r.family == Family::NQLG && r.origin_set) s += " origins " + std::to_string(r.origin_set->size());
  return s;
}

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::accepting: return 0;
    case Verdict::rejecting: return 1;
    case Verdict::undecided: return 3;
    case Verdict::inconsistent: return 4;
  }
  return 2;
}

struct RunFlags {
  std::string machine, graph;
  std::string scheduler = "synchronous";
  std::uint64_t seed = 0;
  std::size_t window = 0;
  std::uint64_t max_steps = 0;
  bool trace = false;
};

inline void add_run_flags(CLI::App* sub, RunFlags& f) {
  sub->add_option("machine", f.machine, "nlg | nqlg | snowball | tm-head:<tm> | tm-head-plain:<tm> | reduce:<class>:<tm> | <machine file>")
      ->required();
  sub->add_option("graph", f.graph, "graph file")->required();
  sub->add_option("--scheduler", f.scheduler, "synchronous | liberal | exclusive");
  sub->add_option("--seed", f.seed, "schedule seed");
  sub->add_option("--window", f.window, "fairness window (default 4|V|)");
  sub->add_option("--max-steps", f.max_steps, "step budget (default 10|V|^2+1000)");
}

inline RunResult do_run(const Context& ctx, const RunFlags& f, DistributedMachine& m_out, bool trace) {
  DistributedMachine m = resolve_machine(ctx, f.machine);
  auto diags = validate_machine(m);
  if (!diags.empty()) throw std::invalid_argument("invalid machine: " + diags.front());
  LabelledGraph g = parse_graph(read_file(f.graph));
  RunLimits limits;
  limits.max_steps = f.max_steps;
  RunOptions opts;
  opts.record_trace = trace;
  Schedule sched = make_schedule(parse_scheduler_kind(f.scheduler), g, f.seed,
                                 f.window ? std::optional<std::size_t>(f.window) : std::nullopt);
  RunResult r = run_scheduled(m, g, sched, limits, opts);
  m_out = m;
  return r;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"workbench for weak asynchronous distributed automata on labelled graphs", "distauto"};
  app.require_subcommand(1);
  Context ctx{out, err, (std::filesystem::temp_directory_path() / "distauto-cache").string(), true};
  bool no_cache = false;
  app.add_option("--cache-dir", ctx.cache_dir, "directory for compiled machines");
  app.add_flag("--no-cache", no_cache, "always compile machine references");

  // generate
  std::string family, counts, policy = "full", gen_out;
  int n = 0;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("generate", "write a family instance");
  gen->add_option("family", family, "nlg | ncg | nqlg | sfnlg-harmonious")->required();
  gen->add_option("--n", n, "length (nlg, ncg) or index (sfnlg-harmonious)");
  gen->add_option("--counts", counts, "replica counts per layer for nqlg, e.g. 2,3,2");
  gen->add_option("--policy", policy, "nqlg edges: full | random");
  gen->add_option("--seed", seed, "seed for random edges");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  std::string check_path;
  auto* chk = app.add_subcommand("check", "classify a graph file");
  chk->add_option("graph", check_path)->required();

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run a machine on a graph");
  add_run_flags(run, run_flags);
  run->add_flag("--trace", run_flags.trace, "print every configuration");

  RunFlags replay_flags;
  std::string replay_trace;
  auto* rep = app.add_subcommand("replay", "re-run and compare against a recorded trace");
  add_run_flags(rep, replay_flags);
  rep->add_option("trace", replay_trace, "trace file from run --trace")->required();

  std::string machine_ref, machine_out;
  auto* comp = app.add_subcommand("compile-machine", "print a machine in text form");
  comp->add_option("machine", machine_ref)->required();
  comp->add_option("--out", machine_out);

  std::string tm_path;
  std::uint64_t tm_steps = 100000;
  bool tm_inf = false;
  auto* tmr = app.add_subcommand("tm-run", "run a Turing machine from blank tape");
  tmr->add_option("tm", tm_path)->required();
  tmr->add_option("--max-steps", tm_steps);
  tmr->add_flag("--tinf", tm_inf, "run the T-infinity transform instead");

  std::string tinf_path, tinf_out;
  auto* tinf_cmd = app.add_subcommand("tinf", "print the T-infinity transform of a Turing machine");
  tinf_cmd->add_option("tm", tinf_path)->required();
  tinf_cmd->add_option("--out", tinf_out);

  std::string red_path, red_class, red_out;
  auto* red = app.add_subcommand("reduce", "print the reduction automaton for a Turing machine");
  red->add_option("tm", red_path)->required();
  red->add_option("--class", red_class, "DA | dA | Da")->required();
  red->add_option("--out", red_out);

  std::string search_path, search_class, search_dir = ".";
  int search_max = 64;
  auto* srch = app.add_subcommand("search", "sweep the witness family for an accepted graph");
  srch->add_option("tm", search_path)->required();
  srch->add_option("--class", search_class, "DA | dA | Da")->required();
  srch->add_option("--max-length", search_max);
  srch->add_option("--out-dir", search_dir, "where the witness graph is written");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  ctx.use_cache = !no_cache;

  auto emit = [&](const std::string& path, const std::string& text) {
    if (path.empty()) out << text;
    else write_file(path, text);
  };

  try {
    if (*gen) {
      std::optional<LabelledGraph> g;
      if (family == "nlg") g = make_nlg(n);
      else if (family == "ncg") g = make_ncg(n);
      else if (family == "sfnlg-harmonious") g = make_harmonious_sfnlg(n);
      else if (family == "nqlg") {
        std::vector<int> c;
        for (const auto& part : split(counts, ',')) c.push_back(static_cast<int>(parse_int(part)));
        if (policy != "full" && policy != "random") throw std::invalid_argument("unknown policy '" + policy + "'");
        g = make_nqlg(c, policy == "full" ? EdgePolicy::full() : EdgePolicy::sampled(seed));
      } else {
        throw std::invalid_argument("unknown family '" + family + "'");
      }
      emit(gen_out, to_text(*g));
      (gen_out.empty() ? err : out) << summary(classify(*g)) << '\n';
      return 0;
    }
    if (*chk) {
      FamilyReport r = classify(parse_graph(read_file(check_path)));
      out << summary(r) << '\n';
      for (const auto& v : r.violations) out << "violation " << v << '\n';
      return r.member ? 0 : 1;
    }
    if (*run) {
      DistributedMachine m = nlg_decider();
      RunResult r = do_run(ctx, run_flags, m, run_flags.trace);
      if (run_flags.trace) out << format_trace(m, r);
      else out << verdict_line(r) << '\n';
      if (!r.details.empty()) err << r.details << '\n';
      return exit_code(r.verdict);
    }
    if (*rep) {
      DistributedMachine m = nlg_decider();
      RunResult r = do_run(ctx, replay_flags, m, true);
      auto want = split_lines(read_file(replay_trace));
      auto got = split_lines(format_trace(m, r));
      for (std::size_t i = 0; i < std::max(want.size(), got.size()); ++i) {
        if (i >= want.size() || i >= got.size() || want[i].tokens != got[i].tokens) {
          out << "REPLAY MISMATCH at line " << (i < want.size() ? want[i].number : i + 1) << '\n';
          return 1;
        }
      }
      out << "REPLAY OK " << verdict_line(r) << '\n';
      return 0;
    }
    if (*comp) {
      emit(machine_out, to_text(resolve_machine(ctx, machine_ref)));
      return 0;
    }
    if (*tmr) {
      TuringMachine t = parse_tm(read_file(tm_path));
      if (tm_inf) t = make_t_infinity(t);
      TMRun r = tm_run(t, tm_steps);
      switch (r.kind) {
        case TMRun::halts:
          out << "HALTS steps=" << r.steps << " cells=" << r.cells_visited << '\n';
          return 0;
        case TMRun::running:
          out << "RUNNING steps=" << r.steps << " cells=" << r.cells_visited << '\n';
          return 1;
        case TMRun::boundary_violation:
          out << "BOUNDARY-VIOLATION steps=" << r.steps << '\n';
          return 3;
      }
    }
    if (*tinf_cmd) {
      emit(tinf_out, to_text(make_t_infinity(parse_tm(read_file(tinf_path)))));
      return 0;
    }
    if (*red) {
      std::string ref = "reduce:" + red_class + ":" + red_path;
      emit(red_out, to_text(resolve_machine(ctx, ref)));
      return 0;
    }
    if (*srch) {
      ReductionClass cls = parse_reduction_class(search_class);
      DistributedMachine m = resolve_machine(ctx, "reduce:" + search_class + ":" + search_path);
      SearchResult s = find_accepted_graph(m, cls, search_max);
      for (const auto& w : s.warnings) out << "WARNING " << w << '\n';
      if (s.graph) {
        auto path = (std::filesystem::path(search_dir) /
                     ("witness-" + std::string(to_string(cls)) + "-" + std::to_string(s.graph->size()) + ".graph"))
                        .string();
        write_file(path, to_text(*s.graph));
        out << "FOUND length=" << s.graph->size() << ' ' << path << '\n';
        return s.warnings.empty() ? 0 : 3;
      }
      out << "NONE up to " << search_max << '\n';
      return s.warnings.empty() ? 1 : 3;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace distauto::cli
