#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hurwitz/cli.hpp"
#include "hurwitz/cohomology.hpp"
#include "hurwitz/combinatorics.hpp"
#include "hurwitz/hyperbolic_solver.hpp"

namespace hurwitz::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// One key of a subcommand: flag, config-file setter and resolved value.
struct Binding {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const std::string&)> set;
  std::function<json()> get;
  bool hashed = true;  // output locations do not enter the input hash
};

struct Command {
  CLI::App* app = nullptr;
  std::vector<Binding> keys;
  std::string config_file;
};

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

template <class T>
void bind_key(Command& cmd, const std::string& key, T& var, const std::string& help, bool hashed = true) {
  auto* o = cmd.app->add_option(flag_name(key), var, help)->capture_default_str();
  cmd.keys.push_back(Binding{
      key, o,
      [&var, key](const std::string& text) {
        T tmp{};
        if (!CLI::detail::lexical_cast(text, tmp)) throw ConfigError("config key " + key + ": cannot parse \"" + text + "\"");
        var = tmp;
      },
      [&var] { return json(var); }, hashed});
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat "key = value" lines; '#' starts a comment. Flags given on the command
// line win over the file.
void apply_config_file(Command& cmd) {
  std::ifstream in(cmd.config_file);
  if (!in) throw ConfigError("cannot read config file " + cmd.config_file);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(cmd.config_file + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    const auto it = std::find_if(cmd.keys.begin(), cmd.keys.end(), [&](const Binding& b) { return b.key == key; });
    if (it == cmd.keys.end())
      throw ConfigError(cmd.config_file + ":" + std::to_string(lineno) + ": unknown key \"" + key + "\" for " +
                        cmd.app->get_name());
    if (it->option->count() == 0) it->set(value);
  }
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path output_dir(const ExperimentConfig& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("HURWITZ_OUT_DIR"); env && *env) return env;
  return ".";
}

fs::path resolve(const fs::path& dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : dir / path;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fs::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
  out << text;
}

std::string csv_with_provenance(const json& prov, const std::string& body) {
  return "# config: " + prov.at("config").dump() + "\n# input_hash: " + prov.at("input_hash").get<std::string>() +
         "\n" + body;
}

struct Failure {
  int code;
  std::string kind;
};

int report_error(std::ostream& err, const std::string& command, const Failure& f, const std::string& message,
                 const fs::path* dir, json extra = nullptr) {
  json e{{"error", {{"kind", f.kind}, {"exit_code", f.code}, {"command", command}, {"message", message}}}};
  if (!extra.is_null()) e["error"]["detail"] = std::move(extra);
  err << e.dump() << std::endl;
  if (dir && !command.empty()) {
    try {
      write_text(*dir / (command + ".error.json"), e.dump(2) + "\n");
    } catch (...) {
    }
  }
  return f.code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  CLI::App app{"Hurwitz spaces of simple branched coverings: combinatorics, cohomology and Weil-Petersson numerics",
               "hurwitz"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h would clash with the base genus flag

  std::vector<Command> cmds;
  cmds.reserve(8);
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    cmds.push_back(Command{app.add_subcommand(name, help), {}, {}});
    Command& cmd = cmds.back();
    cmd.app->set_help_flag("--help", "print help");
    cmd.app->add_option("--config", cmd.config_file, "flat key = value file; flags override it");
    cmd.app->add_flag("--quiet", c.quiet, "do not echo the result to stdout");
    bind_key(cmd, "workers", c.workers, "worker threads");
    bind_key(cmd, "budget_seconds", c.budget_seconds, "wall-clock budget, 0 = unlimited");
    bind_key(cmd, "out", c.out_dir, "output directory (default $HURWITZ_OUT_DIR, then .)", false);
    return cmd;
  };
  auto enumeration_keys = [&](Command& cmd) {
    bind_key(cmd, "n", c.n, "degree");
    bind_key(cmd, "b", c.b, "number of branch points");
    bind_key(cmd, "max_degree", c.max_degree, "enumeration limit on n");
    bind_key(cmd, "max_branch_points", c.max_branch_points, "enumeration limit on b");
  };
  auto geometry_keys = [&](Command& cmd, bool single_level) {
    bind_key(cmd, "n", c.n, "degree");
    bind_key(cmd, "b", c.b, "number of branch points");
    bind_key(cmd, "points", c.points, "\"roots\" or \"re im; re im; ...\"");
    bind_key(cmd, "transpositions", c.transpositions, "\"a b; a b; ...\" (1-based)");
    bind_key(cmd, "input", c.input, "JSON file with datum and points");
    bind_key(cmd, "max_degree", c.max_degree, "enumeration limit on n");
    bind_key(cmd, "max_branch_points", c.max_branch_points, "enumeration limit on b");
    if (single_level) bind_key(cmd, "refinement", c.refinement, "mesh refinement level");
    bind_key(cmd, "disk_radius", c.disk_radius, "chordal radius of the ramification disks");
    bind_key(cmd, "solver_tolerance", c.solver_tolerance, "Newton acceptance tolerance");
    bind_key(cmd, "max_iterations", c.max_iterations, "Newton iteration cap");
  };
  auto family_keys = [&](Command& cmd) {
    bind_key(cmd, "k", c.k, "moving branch point (0-based)");
    bind_key(cmd, "epsilon", c.epsilon, "stencil step, 0 = automatic");
    bind_key(cmd, "richardson_tolerance", c.richardson_tolerance, "step acceptance, 0 disables halving");
    bind_key(cmd, "max_halvings", c.max_halvings, "cap on step halvings");
  };
  auto sidecar_keys = [&](Command& cmd) {
    bind_key(cmd, "mesh_out", c.mesh_out, "write the mesh as JSON", false);
    bind_key(cmd, "dump_fields", c.dump_fields, "write per-vertex fields as CSV", false);
  };

  {
    auto& cmd = add("enumerate", "conjugacy classes of transposition tuples");
    enumeration_keys(cmd);
  }
  {
    auto& cmd = add("orbits", "braid group orbits on the classes");
    enumeration_keys(cmd);
  }
  {
    auto& cmd = add("dims", "deformation cohomology dimensions");
    bind_key(cmd, "n", c.n, "degree");
    bind_key(cmd, "h", c.h, "base genus");
    bind_key(cmd, "b", c.b, "number of branch points");
  }
  {
    auto& cmd = add("solve-metric", "hyperbolic metric on the cover");
    geometry_keys(cmd, true);
    bind_key(cmd, "init_check", c.init_check, "re-solve from a random start and compare");
    bind_key(cmd, "seed", c.seed, "seed of the random start");
    sidecar_keys(cmd);
  }
  {
    auto& cmd = add("wp-norm", "Weil-Petersson norm of moving one branch point");
    geometry_keys(cmd, true);
    family_keys(cmd);
    sidecar_keys(cmd);
  }
  {
    auto& cmd = add("convergence", "refinement study of the wp-norm pipeline");
    geometry_keys(cmd, false);
    family_keys(cmd);
    bind_key(cmd, "levels", c.levels, "refinement levels, strictly increasing, e.g. 1,2,3");
  }
  {
    auto& cmd = add("identity-check", "pointwise fiber identity on random tensors");
    bind_key(cmd, "samples", c.samples, "number of random samples");
    bind_key(cmd, "seed", c.seed, "random seed");
    bind_key(cmd, "identity_tolerance", c.identity_tolerance, "pass threshold");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    std::string command;
    for (const auto& a : args)
      if (std::any_of(cmds.begin(), cmds.end(), [&](const Command& k) { return k.app->get_name() == a; })) {
        command = a;
        break;
      }
    return report_error(err, command, {exit_invalid_config, "invalid_config"}, e.what(), nullptr);
  }

  Command* active = nullptr;
  for (auto& cmd : cmds)
    if (cmd.app->parsed()) active = &cmd;
  c.command = active->app->get_name();

  fs::path dir = output_dir(c);
  std::string input_content;
  json resolved, hashed;
  try {
    if (!active->config_file.empty()) apply_config_file(*active);
    dir = output_dir(c);
    c.validate();
    resolved["command"] = c.command;
    hashed["command"] = c.command;
    for (const auto& k : active->keys) {
      resolved[k.key] = k.get();
      if (k.hashed) hashed[k.key] = k.get();
    }
    resolved["out"] = dir.string();
    input_content = hashed.dump();
    if (!c.input.empty()) {
      if (!fs::exists(c.input)) throw ConfigError("input file " + c.input + " does not exist");
      input_content += "\n" + read_all(c.input);
    }
  } catch (const ConfigError& e) {
    return report_error(err, c.command, {exit_invalid_config, "invalid_config"}, e.what(), &dir);
  }
  const json prov = provenance(resolved, input_content);

  try {
    json result;
    Sidecars side;
    Failure partial{exit_ok, ""};
    std::string partial_message;
    if (c.command == "enumerate")
      result = cmd_enumerate(c);
    else if (c.command == "orbits")
      result = cmd_orbits(c);
    else if (c.command == "dims")
      result = cmd_dims(c);
    else if (c.command == "solve-metric")
      result = cmd_solve_metric(c, &side);
    else if (c.command == "wp-norm")
      result = cmd_wp_norm(c, &side);
    else if (c.command == "identity-check")
      result = cmd_identity_check(c);
    else if (c.command == "convergence") {
      result = convergence_study(c);
      const auto& stop = result.at("stopped_by");
      if (!stop.is_null()) {
        partial_message = stop.at("message").get<std::string>();
        partial = stop.at("kind") == "budget_exceeded" ? Failure{exit_budget, "budget_exceeded"}
                                                        : Failure{exit_solver, stop.at("kind").get<std::string>()};
      }
      write_text(dir / "convergence.csv", csv_with_provenance(prov, convergence_csv(result)));
    }

    const json doc{{"command", c.command}, {"result", result}, {"provenance", prov}};
    write_text(dir / (c.command + ".json"), doc.dump(2) + "\n");
    for (const auto& s : side) {
      const auto path = resolve(dir, s.path);
      if (s.csv) {
        write_text(path, csv_with_provenance(prov, s.text));
      } else {
        json d = s.doc;
        d["provenance"] = prov;
        write_text(path, d.dump() + "\n");
      }
    }
    if (!c.quiet) out << doc.dump(2) << std::endl;
    if (partial.code != exit_ok) return report_error(err, c.command, partial, partial_message, &dir);
    return exit_ok;
  } catch (const ConfigError& e) {
    return report_error(err, c.command, {exit_invalid_config, "invalid_config"}, e.what(), &dir);
  } catch (const BudgetExceeded& e) {
    return report_error(err, c.command, {exit_budget, "budget_exceeded"}, e.what(), &dir);
  } catch (const std::invalid_argument& e) {
    // ImpossibleType, GenusTooSmall, DegreeMismatch and friends
    return report_error(err, c.command, {exit_invalid_config, "invalid_config"}, e.what(), &dir);
  } catch (const std::out_of_range& e) {
    return report_error(err, c.command, {exit_invalid_config, "invalid_config"}, e.what(), &dir);
  } catch (const SolverFailure& e) {
    return report_error(err, c.command, {exit_solver, "solver_failure"}, e.what(), &dir,
                        json{{"residual_history", e.history()}});
  } catch (const DegenerateGeometry& e) {
    return report_error(err, c.command, {exit_solver, "degenerate_geometry"}, e.what(), &dir);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, c.command, {exit_internal, "io_error"}, e.what(), nullptr);
  } catch (const std::runtime_error& e) {
    return report_error(err, c.command, {exit_solver, "solver_failure"}, e.what(), &dir);
  } catch (const std::exception& e) {
    return report_error(err, c.command, {exit_internal, "internal_error"}, e.what(), nullptr);
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace hurwitz::cli
