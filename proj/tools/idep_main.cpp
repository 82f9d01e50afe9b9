// Command-line front end: idep <solve|sweep|spectrum|trace|metrics> --config FILE

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "idep/run.hpp"

namespace
{
idep::Vec3 parse_point(const std::string &s)
{
  idep::Vec3         p;
  char               c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> p.x >> c1 >> p.y >> c2 >> p.z) || c1 != ',' || c2 != ',')
    throw CLI::ValidationError("--release", "expected X,Y,Z in micrometres, got '" + s + "'");
  return p;
}
} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Insulator-based dielectrophoresis simulator"};
  app.require_subcommand(1);

  idep::Invocation         inv;
  std::string              config;
  std::string              out;
  double                   resolution = 0.0;
  std::string              log_level  = "info";
  std::vector<std::string> releases;

  app.add_option("--config", config, "run configuration (INI)")->required();
  app.add_option("--out", out, "output directory (overrides [output] directory)");
  app.add_option("--resolution", resolution, "grid resolution in micrometres")
    ->check(CLI::PositiveNumber);
  app.add_option("--threads", inv.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
    ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  const std::pair<const char *, idep::Command> commands[] = {
    {"solve", idep::Command::solve},       {"sweep", idep::Command::sweep},
    {"spectrum", idep::Command::spectrum}, {"trace", idep::Command::trace},
    {"metrics", idep::Command::metrics},
  };
  const char *help[] = {
    "solve the field and write fields plus height-decay and uniformity reports",
    "solve once per gap in [analysis] sweep_gaps_um",
    "Clausius-Mossotti spectrum and crossover frequency",
    "integrate particle trajectories from the release points",
    "recompute reports from e2.csv and grad_e2.csv in the output directory",
  };
  for (std::size_t n = 0; n < std::size(commands); ++n)
    {
      auto *sub = app.add_subcommand(commands[n].first, help[n]);
      sub->fallthrough();
      const auto cmd = commands[n].second;
      sub->callback([&inv, cmd] { inv.command = cmd; });
      if (cmd == idep::Command::trace)
        sub->add_option("--release", releases, "release point X,Y,Z in micrometres (repeatable)");
    }

  try
    {
      app.parse(argc, argv);
      for (const auto &r : releases)
        inv.releases_um.push_back(parse_point(r));
    }
  catch (const CLI::ParseError &e)
    {
      const int rc = app.exit(e);
      return rc == 0 ? 0 : static_cast<int>(idep::ExitCode::config_error);
    }

  auto logger = spdlog::stderr_color_mt("idep");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  inv.config_path = config;
  if (!out.empty())
    inv.out_dir = out;
  if (resolution > 0.0)
    inv.resolution_um = resolution;
  return static_cast<int>(idep::execute(inv));
}
