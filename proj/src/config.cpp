#include "idep/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <sstream>

#include "idep/error.hpp"

namespace idep
{

std::string_view to_string(FieldFormat f)
{
  switch (f)
    {
      case FieldFormat::csv:
        return "csv";
      case FieldFormat::vtk:
        return "vtk";
      case FieldFormat::both:
        return "both";
    }
  return "csv";
}

std::string_view to_string(CenterlineAxis a)
{
  return a == CenterlineAxis::along_channel ? "along_channel" : "across_gap";
}

// ---------------------------------------------------------------------------
// SI views

DeviceSpec RunConfig::device_spec() const
{
  constexpr double um = 1e-6;
  DeviceSpec       s;
  s.channel_length   = device.channel_length_um * um;
  s.channel_width    = device.channel_width_um * um;
  s.domain_height    = device.domain_height_um * um;
  s.insulator_height = device.insulator_height_um * um;
  for (const auto &t : device.tip_pairs)
    {
      TipPairSpec tip;
      tip.center_x  = t.center_x_um * um;
      tip.gap       = t.gap_um * um;
      tip.tip_angle = t.tip_angle_deg;
      if (t.base_depth_um)
        tip.base_depth = *t.base_depth_um * um;
      tip.truncation = t.truncation_um * um;
      s.tip_pairs.push_back(tip);
    }
  if (drive.applied_field_v_m)
    s.electrode_mode = AppliedField{*drive.applied_field_v_m};
  else
    s.electrode_mode = AppliedVoltage{drive.voltage_v.value_or(0.0)};
  return s;
}

MaterialProps RunConfig::medium_material() const
{
  return {materials.medium_sigma, materials.medium_eps_r};
}

MaterialProps RunConfig::insulator_material() const
{
  return {materials.conductivity_ratio * materials.medium_sigma, materials.insulator_eps_r};
}

DielectricProps RunConfig::medium() const
{
  return {materials.medium_eps_r, materials.medium_sigma};
}

ParticleModel RunConfig::particle_model() const
{
  return {particle.radius_um * 1e-6, {particle.eps_r, particle.sigma}};
}

FluidProps RunConfig::fluid() const { return {trace.viscosity, medium()}; }

SolveConfig RunConfig::solve_config(unsigned threads) const
{
  SolveConfig c;
  c.rel_tolerance      = solver.rel_tolerance;
  c.max_iterations     = solver.max_iterations;
  c.conductivity_ratio = materials.conductivity_ratio;
  c.log_every          = solver.log_every;
  c.threads            = threads;
  return c;
}

StepControl RunConfig::step_control() const
{
  return {trace.dt_max_s, trace.dt_min_s, trace.max_step_cells};
}

StopRules RunConfig::stop_rules() const
{
  StopRules r;
  if (trace.capture_radius_um)
    r.capture_radius = *trace.capture_radius_um * 1e-6;
  r.speed_floor = trace.speed_floor;
  r.t_max       = trace.t_max_s;
  return r;
}

// ---------------------------------------------------------------------------
// INI reading

namespace
{
struct Entry
{
  std::string value;
  int         line = 0;
  bool        used = false;
};

struct Section
{
  std::string                                 name;
  int                                         line = 0;
  std::vector<std::pair<std::string, Entry>> entries;
};

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_identifier(std::string_view s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<Section> tokenize(std::string_view text)
{
  std::vector<Section> sections;
  int                  line_no = 0;
  std::size_t          pos     = 0;
  while (pos <= text.size())
    {
      const auto       nl   = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
      pos                   = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;

      if (const auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty())
        continue;

      if (line.front() == '[')
        {
          if (line.back() != ']')
            throw ParseError(line_no, "unterminated section header");
          const auto name = trim(line.substr(1, line.size() - 2));
          if (!is_identifier(name))
            throw ParseError(line_no, "invalid section name '" + std::string(name) + "'");
          sections.push_back({std::string(name), line_no, {}});
          continue;
        }

      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(line_no, "expected 'key = value' or '[section]'");
      if (sections.empty())
        throw ParseError(line_no, "key outside of any section");
      const auto key = trim(line.substr(0, eq));
      if (!is_identifier(key))
        throw ParseError(line_no, "invalid key '" + std::string(key) + "'");
      auto &entries = sections.back().entries;
      if (std::any_of(entries.begin(), entries.end(), [&](const auto &e) { return e.first == key; }))
        throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
      entries.push_back({std::string(key), {std::string(trim(line.substr(eq + 1))), line_no}});
    }
  return sections;
}

double parse_number(std::string_view s, int line, std::string_view key)
{
  s = trim(s);
  double v   = 0.0;
  auto   res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(line, "'" + std::string(key) + "' expects a finite number, got '" +
                             std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> parts;
  if (trim(s).empty())
    return parts;
  std::size_t pos = 0;
  while (true)
    {
      const auto next = s.find(sep, pos);
      parts.push_back(trim(s.substr(pos, next == s.npos ? s.npos : next - pos)));
      if (next == s.npos)
        break;
      pos = next + 1;
    }
  return parts;
}

/// Reads typed values from one section and reports leftovers as unknown.
class Reader
{
public:
  explicit Reader(Section &s) : s_(s) {}

  Entry *find(std::string_view key)
  {
    for (auto &[k, e] : s_.entries)
      if (k == key)
        {
          e.used = true;
          return &e;
        }
    return nullptr;
  }

  void number(std::string_view key, double &out)
  {
    if (auto *e = find(key))
      out = parse_number(e->value, e->line, key);
  }

  void number(std::string_view key, std::optional<double> &out)
  {
    if (auto *e = find(key))
      out = parse_number(e->value, e->line, key);
  }

  template <typename Int>
  void integer(std::string_view key, Int &out)
  {
    if (auto *e = find(key))
      out = to_integer<Int>(e->value, e->line, key);
  }

  void flag(std::string_view key, bool &out)
  {
    if (auto *e = find(key))
      {
        if (e->value == "true")
          out = true;
        else if (e->value == "false")
          out = false;
        else
          throw ParseError(e->line, "'" + std::string(key) + "' expects true or false");
      }
  }

  void text(std::string_view key, std::string &out)
  {
    if (auto *e = find(key))
      out = e->value;
  }

  void list(std::string_view key, std::vector<double> &out)
  {
    if (auto *e = find(key))
      {
        out.clear();
        for (const auto part : split(e->value, ','))
          out.push_back(parse_number(part, e->line, key));
      }
  }

  void triple(std::string_view key, Vec3 &out)
  {
    if (auto *e = find(key))
      out = to_triple(e->value, e->line, key);
  }

  void triples(std::string_view key, std::vector<Vec3> &out)
  {
    if (auto *e = find(key))
      {
        out.clear();
        for (const auto part : split(e->value, ';'))
          out.push_back(to_triple(part, e->line, key));
      }
  }

  template <typename Int>
  void integer_triple(std::string_view key, std::array<Int, 3> &out)
  {
    if (auto *e = find(key))
      {
        const auto parts = split(e->value, ',');
        if (parts.size() != 3)
          throw ParseError(e->line, "'" + std::string(key) + "' expects three integers");
        for (int d = 0; d < 3; ++d)
          out[d] = to_integer<Int>(parts[d], e->line, key);
      }
  }

  void finish() const
  {
    for (const auto &[k, e] : s_.entries)
      if (!e.used)
        throw ParseError(e.line, "unknown key '" + k + "' in [" + s_.name + "]");
  }

private:
  template <typename Int>
  static Int to_integer(std::string_view s, int line, std::string_view key)
  {
    s     = trim(s);
    Int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ParseError(line, "'" + std::string(key) + "' expects a non-negative integer");
    return v;
  }

  static Vec3 to_triple(std::string_view s, int line, std::string_view key)
  {
    const auto parts = split(s, ',');
    if (parts.size() != 3)
      throw ParseError(line, "'" + std::string(key) + "' expects x, y, z triples");
    return {parse_number(parts[0], line, key), parse_number(parts[1], line, key),
            parse_number(parts[2], line, key)};
  }

  Section &s_;
};

void require(bool ok, const std::string &field, const std::string &reason)
{
  if (!ok)
    throw ValidationError(field, reason);
}
} // namespace

void validate(const RunConfig &c)
{
  const auto &d = c.device;
  require(d.channel_length_um > 0, "device.channel_length_um", "must be positive");
  require(d.channel_width_um > 0, "device.channel_width_um", "must be positive");
  require(d.domain_height_um > 0, "device.domain_height_um", "must be positive");
  require(d.insulator_height_um > 0, "device.insulator_height_um", "must be positive");
  require(d.insulator_height_um <= d.domain_height_um, "device.insulator_height_um",
          "must not exceed domain_height_um");
  require(d.resolution_um > 0, "device.resolution_um", "must be positive");
  for (std::size_t n = 0; n < d.tip_pairs.size(); ++n)
    {
      const auto       &t = d.tip_pairs[n];
      const std::string p = "tip_pair[" + std::to_string(n) + "].";
      require(t.gap_um > 0, p + "gap_um", "must be positive");
      require(t.tip_angle_deg > 0 && t.tip_angle_deg < 180, p + "tip_angle_deg",
              "must lie in (0, 180)");
      require(!t.base_depth_um || *t.base_depth_um > 0, p + "base_depth_um", "must be positive");
      require(t.truncation_um >= 0, p + "truncation_um", "must be non-negative");
    }

  const auto &m = c.materials;
  require(m.medium_sigma > 0, "materials.medium_sigma", "must be positive");
  require(m.medium_eps_r > 0, "materials.medium_eps_r", "must be positive");
  require(m.insulator_eps_r > 0, "materials.insulator_eps_r", "must be positive");
  require(m.conductivity_ratio >= 0 && m.conductivity_ratio < 1, "materials.conductivity_ratio",
          "must lie in [0, 1)");

  const auto &dr = c.drive;
  require(dr.applied_field_v_m.has_value() != dr.voltage_v.has_value(), "drive",
          "set exactly one of applied_field_v_m and voltage_v");
  require(dr.frequency_hz > 0, "drive.frequency_hz", "must be positive");

  require(c.particle.radius_um > 0, "particle.radius_um", "must be positive");
  require(c.particle.eps_r > 0, "particle.eps_r", "must be positive");
  require(c.particle.sigma >= 0, "particle.sigma", "must be non-negative");

  require(c.solver.rel_tolerance > 0 && c.solver.rel_tolerance < 1, "solver.rel_tolerance",
          "must lie in (0, 1)");
  require(c.solver.max_iterations > 0, "solver.max_iterations", "must be positive");
  require(!c.output.directory.empty(), "output.directory", "must not be empty");

  const auto &a = c.analysis;
  require(!a.heights_um.empty(), "analysis.heights_um", "needs at least one height");
  for (const double h : a.heights_um)
    require(h >= 0 && h <= d.domain_height_um, "analysis.heights_um", "must lie in the domain");
  for (const double h : a.uniformity_heights_um)
    require(h >= 0 && h <= d.domain_height_um, "analysis.uniformity_heights_um",
            "must lie in the domain");
  require(!a.sweep_gaps_um.empty(), "analysis.sweep_gaps_um", "needs at least one gap");
  for (std::size_t n = 0; n < a.sweep_gaps_um.size(); ++n)
    {
      require(a.sweep_gaps_um[n] > 0, "analysis.sweep_gaps_um", "must be positive");
      require(n == 0 || a.sweep_gaps_um[n] > a.sweep_gaps_um[n - 1], "analysis.sweep_gaps_um",
              "must be strictly increasing");
    }
  require(a.sweep_height_um >= 0 && a.sweep_height_um <= d.domain_height_um,
          "analysis.sweep_height_um", "must lie in the domain");

  const auto &s = c.spectrum;
  require(s.f_min_hz > 0 && s.f_max_hz > s.f_min_hz, "spectrum.f_min_hz",
          "needs 0 < f_min_hz < f_max_hz");
  require(s.points_per_decade > 0, "spectrum.points_per_decade", "must be positive");

  const auto &t = c.trace;
  require(t.viscosity > 0, "trace.viscosity", "must be positive");
  require(t.dt_min_s > 0 && t.dt_max_s >= t.dt_min_s, "trace.dt_max_s",
          "needs 0 < dt_min_s <= dt_max_s");
  require(t.max_step_cells > 0, "trace.max_step_cells", "must be positive");
  require(t.t_max_s > 0, "trace.t_max_s", "must be positive");
  require(t.speed_floor >= 0, "trace.speed_floor", "must be non-negative");
  require(!t.capture_radius_um || *t.capture_radius_um >= 0, "trace.capture_radius_um",
          "must be non-negative");
  const Vec3 box{d.channel_length_um, d.channel_width_um, d.domain_height_um};
  auto       in_box = [&](const Vec3 &p) {
    return p.x >= 0 && p.x <= box.x && p.y >= 0 && p.y <= box.y && p.z >= 0 && p.z <= box.z;
  };
  for (const auto &r : t.releases_um)
    require(in_box(r), "trace.releases_um", "release point outside the domain");
  if (t.seed_region)
    {
      require(in_box(t.seed_region->min_um) && in_box(t.seed_region->max_um),
              "trace.seed_min_um", "seed region outside the domain");
      for (const auto n : t.seed_region->counts)
        require(n > 0, "trace.seed_counts", "must be positive");
    }

  try
    {
      idep::validate(c.device_spec());
    }
  catch (const GeometryInvalid &e)
    {
      throw ValidationError("device", e.what());
    }
}

RunConfig parse_config(std::string_view text)
{
  auto sections = tokenize(text);

  static const std::vector<std::string> required = {"device",   "materials", "drive",
                                                    "particle", "solver",    "output"};
  static const std::vector<std::string> optional = {"tip_pair", "analysis", "spectrum", "trace"};

  std::map<std::string, Section *> by_name;
  std::vector<Section *>           tips;
  for (auto &s : sections)
    {
      if (s.name == "tip_pair")
        {
          tips.push_back(&s);
          continue;
        }
      const bool known = std::find(required.begin(), required.end(), s.name) != required.end() ||
                         std::find(optional.begin(), optional.end(), s.name) != optional.end();
      if (!known)
        throw ParseError(s.line, "unknown section [" + s.name + "]");
      if (by_name.count(s.name))
        throw ParseError(s.line, "duplicate section [" + s.name + "]");
      by_name[s.name] = &s;
    }
  std::string missing;
  for (const auto &r : required)
    if (!by_name.count(r))
      missing += (missing.empty() ? "" : ", ") + r;
  if (!missing.empty())
    throw ParseError(0, "missing required sections: " + missing);

  RunConfig c;
  {
    Reader r(*by_name["device"]);
    r.number("channel_length_um", c.device.channel_length_um);
    r.number("channel_width_um", c.device.channel_width_um);
    r.number("domain_height_um", c.device.domain_height_um);
    r.number("insulator_height_um", c.device.insulator_height_um);
    r.number("resolution_um", c.device.resolution_um);
    r.finish();
  }
  for (auto *s : tips)
    {
      Reader        r(*s);
      TipPairConfig t;
      if (!r.find("gap_um"))
        throw ParseError(s->line, "[tip_pair] requires gap_um");
      r.number("center_x_um", t.center_x_um);
      r.number("gap_um", t.gap_um);
      r.number("tip_angle_deg", t.tip_angle_deg);
      r.number("base_depth_um", t.base_depth_um);
      r.number("truncation_um", t.truncation_um);
      r.finish();
      c.device.tip_pairs.push_back(t);
    }
  {
    Reader r(*by_name["materials"]);
    r.number("medium_sigma", c.materials.medium_sigma);
    r.number("medium_eps_r", c.materials.medium_eps_r);
    r.number("insulator_eps_r", c.materials.insulator_eps_r);
    r.number("conductivity_ratio", c.materials.conductivity_ratio);
    r.finish();
  }
  {
    Reader r(*by_name["drive"]);
    r.number("applied_field_v_m", c.drive.applied_field_v_m);
    r.number("voltage_v", c.drive.voltage_v);
    r.number("frequency_hz", c.drive.frequency_hz);
    r.finish();
  }
  {
    Reader r(*by_name["particle"]);
    r.number("radius_um", c.particle.radius_um);
    r.number("eps_r", c.particle.eps_r);
    r.number("sigma", c.particle.sigma);
    r.finish();
  }
  {
    Reader r(*by_name["solver"]);
    r.number("rel_tolerance", c.solver.rel_tolerance);
    r.integer("max_iterations", c.solver.max_iterations);
    r.integer("log_every", c.solver.log_every);
    r.finish();
  }
  {
    Reader      r(*by_name["output"]);
    std::string format(to_string(c.output.field_format));
    r.text("directory", c.output.directory);
    r.flag("export_fields", c.output.export_fields);
    r.text("field_format", format);
    r.flag("export_labels", c.output.export_labels);
    if (format == "csv")
      c.output.field_format = FieldFormat::csv;
    else if (format == "vtk")
      c.output.field_format = FieldFormat::vtk;
    else if (format == "both")
      c.output.field_format = FieldFormat::both;
    else
      throw ValidationError("output.field_format", "must be csv, vtk or both");
    r.finish();
  }
  if (by_name.count("analysis"))
    {
      Reader      r(*by_name["analysis"]);
      std::string axis(to_string(c.analysis.centerline));
      r.list("heights_um", c.analysis.heights_um);
      r.list("uniformity_heights_um", c.analysis.uniformity_heights_um);
      r.integer("uniformity_margin_cells", c.analysis.uniformity_margin_cells);
      r.text("centerline", axis);
      r.list("sweep_gaps_um", c.analysis.sweep_gaps_um);
      r.number("sweep_height_um", c.analysis.sweep_height_um);
      if (axis == "along_channel")
        c.analysis.centerline = CenterlineAxis::along_channel;
      else if (axis == "across_gap")
        c.analysis.centerline = CenterlineAxis::across_gap;
      else
        throw ValidationError("analysis.centerline", "must be along_channel or across_gap");
      r.finish();
    }
  if (by_name.count("spectrum"))
    {
      Reader r(*by_name["spectrum"]);
      r.number("f_min_hz", c.spectrum.f_min_hz);
      r.number("f_max_hz", c.spectrum.f_max_hz);
      r.integer("points_per_decade", c.spectrum.points_per_decade);
      r.finish();
    }
  if (by_name.count("trace"))
    {
      Reader r(*by_name["trace"]);
      auto  &t = c.trace;
      r.triples("releases_um", t.releases_um);
      r.number("viscosity", t.viscosity);
      r.number("dt_max_s", t.dt_max_s);
      r.number("dt_min_s", t.dt_min_s);
      r.number("max_step_cells", t.max_step_cells);
      r.number("t_max_s", t.t_max_s);
      r.number("speed_floor", t.speed_floor);
      r.number("capture_radius_um", t.capture_radius_um);
      r.triple("ambient_velocity", t.ambient_velocity);
      const bool has_seed = r.find("seed_min_um") || r.find("seed_max_um") ||
                            r.find("seed_counts");
      if (has_seed)
        {
          SeedRegionConfig s;
          r.triple("seed_min_um", s.min_um);
          r.triple("seed_max_um", s.max_um);
          r.integer_triple("seed_counts", s.counts);
          t.seed_region = s;
        }
      r.finish();
    }

  validate(c);
  return c;
}

// ---------------------------------------------------------------------------
// writing

namespace
{
std::string num(double v) { return fmt::format("{}", v); }

std::string list(const std::vector<double> &v)
{
  std::string out;
  for (std::size_t n = 0; n < v.size(); ++n)
    out += (n ? ", " : "") + num(v[n]);
  return out;
}

std::string triple(const Vec3 &p) { return num(p.x) + ", " + num(p.y) + ", " + num(p.z); }
} // namespace

std::string serialize(const RunConfig &c)
{
  std::ostringstream o;
  auto               kv = [&](std::string_view k, const std::string &v) {
    o << k << " = " << v << '\n';
  };

  o << "[device]\n";
  kv("channel_length_um", num(c.device.channel_length_um));
  kv("channel_width_um", num(c.device.channel_width_um));
  kv("domain_height_um", num(c.device.domain_height_um));
  kv("insulator_height_um", num(c.device.insulator_height_um));
  kv("resolution_um", num(c.device.resolution_um));
  for (const auto &t : c.device.tip_pairs)
    {
      o << "\n[tip_pair]\n";
      kv("center_x_um", num(t.center_x_um));
      kv("gap_um", num(t.gap_um));
      kv("tip_angle_deg", num(t.tip_angle_deg));
      if (t.base_depth_um)
        kv("base_depth_um", num(*t.base_depth_um));
      kv("truncation_um", num(t.truncation_um));
    }

  o << "\n[materials]\n";
  kv("medium_sigma", num(c.materials.medium_sigma));
  kv("medium_eps_r", num(c.materials.medium_eps_r));
  kv("insulator_eps_r", num(c.materials.insulator_eps_r));
  kv("conductivity_ratio", num(c.materials.conductivity_ratio));

  o << "\n[drive]\n";
  if (c.drive.applied_field_v_m)
    kv("applied_field_v_m", num(*c.drive.applied_field_v_m));
  if (c.drive.voltage_v)
    kv("voltage_v", num(*c.drive.voltage_v));
  kv("frequency_hz", num(c.drive.frequency_hz));

  o << "\n[particle]\n";
  kv("radius_um", num(c.particle.radius_um));
  kv("eps_r", num(c.particle.eps_r));
  kv("sigma", num(c.particle.sigma));

  o << "\n[solver]\n";
  kv("rel_tolerance", num(c.solver.rel_tolerance));
  kv("max_iterations", std::to_string(c.solver.max_iterations));
  kv("log_every", std::to_string(c.solver.log_every));

  o << "\n[output]\n";
  kv("directory", c.output.directory);
  kv("export_fields", c.output.export_fields ? "true" : "false");
  kv("field_format", std::string(to_string(c.output.field_format)));
  kv("export_labels", c.output.export_labels ? "true" : "false");

  o << "\n[analysis]\n";
  kv("heights_um", list(c.analysis.heights_um));
  kv("uniformity_heights_um", list(c.analysis.uniformity_heights_um));
  kv("uniformity_margin_cells", std::to_string(c.analysis.uniformity_margin_cells));
  kv("centerline", std::string(to_string(c.analysis.centerline)));
  kv("sweep_gaps_um", list(c.analysis.sweep_gaps_um));
  kv("sweep_height_um", num(c.analysis.sweep_height_um));

  o << "\n[spectrum]\n";
  kv("f_min_hz", num(c.spectrum.f_min_hz));
  kv("f_max_hz", num(c.spectrum.f_max_hz));
  kv("points_per_decade", std::to_string(c.spectrum.points_per_decade));

  const auto &t = c.trace;
  o << "\n[trace]\n";
  std::string releases;
  for (std::size_t n = 0; n < t.releases_um.size(); ++n)
    releases += (n ? "; " : "") + triple(t.releases_um[n]);
  kv("releases_um", releases);
  kv("viscosity", num(t.viscosity));
  kv("dt_max_s", num(t.dt_max_s));
  kv("dt_min_s", num(t.dt_min_s));
  kv("max_step_cells", num(t.max_step_cells));
  kv("t_max_s", num(t.t_max_s));
  kv("speed_floor", num(t.speed_floor));
  if (t.capture_radius_um)
    kv("capture_radius_um", num(*t.capture_radius_um));
  kv("ambient_velocity", triple(t.ambient_velocity));
  if (t.seed_region)
    {
      kv("seed_min_um", triple(t.seed_region->min_um));
      kv("seed_max_um", triple(t.seed_region->max_um));
      kv("seed_counts", fmt::format("{}, {}, {}", t.seed_region->counts[0],
                                    t.seed_region->counts[1], t.seed_region->counts[2]));
    }
  return o.str();
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

} // namespace idep
