#ifndef HURWITZ_CLI_HPP
#define HURWITZ_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hurwitz/surface_mesh.hpp"

namespace hurwitz::cli {

// Exit codes of the `hurwitz` tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_invalid_config = 2,
  exit_budget = 3,
  exit_solver = 4,
};

/// Thrown for anything wrong with the experiment configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Every key any subcommand understands. Each subcommand exposes its own subset
/// as flags and as config-file keys; see README for the schema.
struct ExperimentConfig {
  std::string command;

  // combinatorics / cohomology
  int n = 2;
  int h = 0;
  int b = 6;
  int max_degree = 6;
  int max_branch_points = 8;

  // geometry input
  std::string points = "roots";  // "roots" or "re im; re im; ..."
  std::string transpositions;    // "a b; a b; ..." (1-based); empty: all (1 2) when n = 2
  std::string input;             // JSON file with "datum" and optional "points"
  int refinement = 2;
  double disk_radius = 0.2;
  double solver_tolerance = 1e-10;
  int max_iterations = 60;
  bool init_check = true;

  // families
  int k = 0;  // moving branch point, 0-based
  double epsilon = 0.0;
  double richardson_tolerance = 1e-4;
  int max_halvings = 4;

  // convergence study
  std::string levels = "1,2,3";

  // identity check
  int samples = 1000;
  std::uint64_t seed = 7;
  double identity_tolerance = 1e-12;

  // plumbing
  int workers = 1;
  double budget_seconds = 0.0;  // 0 = unlimited
  std::string out_dir;          // empty: $HURWITZ_OUT_DIR, then "."
  std::string mesh_out;
  std::string dump_fields;
  bool quiet = false;

  /// Checks the invariants (positive tolerances, increasing levels, ...).
  void validate() const;
  std::vector<int> level_list() const;
};

/// Branch configuration described by the geometry keys.
BranchConfiguration branch_configuration(const ExperimentConfig& c);

/// Git-style object hash: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_hash(const std::string& content);

/// Provenance block embedded in every output: resolved config and input hash.
nlohmann::json provenance(const nlohmann::json& resolved_config, const std::string& input_content);

/// Extra file requested by --mesh-out or --dump-fields. `path` is as given
/// (relative paths end up under the output directory).
struct Sidecar {
  std::string path;
  bool csv = false;
  std::string text;      // CSV body
  nlohmann::json doc;    // JSON document
};
using Sidecars = std::vector<Sidecar>;

// Subcommands as library calls. Each returns the result document without the
// provenance block and may throw.
nlohmann::json cmd_enumerate(const ExperimentConfig& c);
nlohmann::json cmd_orbits(const ExperimentConfig& c);
nlohmann::json cmd_dims(const ExperimentConfig& c);
nlohmann::json cmd_solve_metric(const ExperimentConfig& c, Sidecars* side = nullptr);
nlohmann::json cmd_wp_norm(const ExperimentConfig& c, Sidecars* side = nullptr);
nlohmann::json cmd_identity_check(const ExperimentConfig& c);

/// Table per refinement level: area error, ell residual, |g0_pde - g0_direct|,
/// wp_total, plus monotonicity flags. Stops at the first failure or when the
/// budget runs out; "complete" is false then and "stopped_by" says why.
nlohmann::json convergence_study(const ExperimentConfig& c);

/// Convergence rows as CSV (one line per level, header first).
std::string convergence_csv(const nlohmann::json& report);

/// JSON mesh document (vertices with chart tags, faces, cone points).
nlohmann::json mesh_document(const CoverSurface& s);

/// Entry point of the tool. Results go to `out` and the output directory,
/// error reports (JSON) to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace hurwitz::cli

#endif
