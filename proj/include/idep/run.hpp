#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idep/config.hpp"

namespace idep
{

enum class Command
{
  solve,
  sweep,
  spectrum,
  trace,
  metrics,
};

std::string_view to_string(Command c);

enum class SweepAxis
{
  gap,
};

/// Exit codes of the command-line tool.
enum class ExitCode : int
{
  ok            = 0,
  failure       = 1,
  config_error  = 2,
  not_converged = 3,
  io_error      = 4,
};

/// State shared by one run: the effective config, where files go, and what
/// has been produced so far.
struct RunContext
{
  RunConfig             cfg;
  std::filesystem::path out_dir;
  unsigned              threads = 1;

  std::string                        stage = "setup";
  std::vector<std::string>           files; ///< relative to out_dir, in write order
  std::optional<SolveStats>          solve;
  std::map<std::string, double>      results;
  std::map<std::string, std::string> outcomes; ///< trajectory name -> outcome label

  /// Registers `name` as an output and returns its full path.
  std::filesystem::path output(const std::string &name);

  /// One-line summary of geometry and solver settings for report headers.
  std::string provenance() const;
};

/// Solves the potential; writes phi, e2, grad_e2 (and labels if enabled),
/// the height-decay report and the uniformity report.
void run_solve(RunContext &ctx);

/// One solve per entry of analysis.sweep_gaps_um; writes gap_sweep.csv.
void run_sweep(RunContext &ctx, SweepAxis axis = SweepAxis::gap);

/// Clausius-Mossotti spectrum and crossover; writes spectrum.csv.
void run_spectrum(RunContext &ctx);

/// Solves the field, then integrates one trajectory per release point
/// (trajectory_NNN.csv) and the seed-region ensemble if configured.
void run_trace(RunContext &ctx, const std::vector<Vec3> &releases_um);

/// Recomputes the reports from e2.csv and grad_e2.csv already in out_dir.
void run_metrics(RunContext &ctx);

/// FNV-1a 64-bit hash of `text`, as 16 hex digits.
std::string config_hash(std::string_view text);

struct Invocation
{
  Command                              command = Command::solve;
  std::filesystem::path                config_path;
  std::optional<std::filesystem::path> out_dir;
  std::optional<double>                resolution_um;
  std::vector<Vec3>                    releases_um; ///< replaces trace.releases_um when set
  unsigned                             threads = 1;
};

/// Loads the config, applies overrides, runs the command and writes
/// manifest.json (success) or error.json (failure). Never throws.
ExitCode execute(const Invocation &inv);

/// Maps a caught exception to the tool's exit code.
ExitCode exit_code_for(const std::exception &e);

} // namespace idep
