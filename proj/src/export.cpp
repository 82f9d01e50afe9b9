#include "idep/export.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <map>

#include "idep/error.hpp"

namespace idep
{

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

namespace
{
std::ofstream open_out(const std::filesystem::path &path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_out(std::ofstream &out, const std::filesystem::path &path)
{
  out.flush();
  if (!out)
    throw IoError("write to '" + path.string() + "' failed");
}

void write_provenance(std::ostream &out, std::string_view provenance)
{
  if (!provenance.empty())
    out << "# " << provenance << '\n';
}

template <typename Row>
void for_each_cell(const Grid3 &g, Row row)
{
  for (std::size_t k = 0; k < g.nz(); ++k)
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i)
        row(g.index(i, j, k), g.center(i, j, k));
}

void vtk_header(std::ostream &out, const Grid3 &g, std::string_view title)
{
  const Vec3 c0 = g.center(0, 0, 0);
  out << "# vtk DataFile Version 3.0\n"
      << title << '\n'
      << "ASCII\n"
      << "DATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g.nx() << ' ' << g.ny() << ' ' << g.nz() << '\n'
      << "ORIGIN " << format_number(c0.x) << ' ' << format_number(c0.y) << ' '
      << format_number(c0.z) << '\n'
      << "SPACING " << format_number(g.h(0)) << ' ' << format_number(g.h(1)) << ' '
      << format_number(g.h(2)) << '\n'
      << "POINT_DATA " << g.size() << '\n';
}

std::string data_name(std::string_view quantity)
{
  return quantity == "generic" ? "value" : std::string(quantity);
}

// -- CSV import ------------------------------------------------------------

double to_double(std::string_view s, const std::filesystem::path &path, std::size_t line)
{
  double v   = 0.0;
  auto   res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" +
                  std::string(s) + "'");
  return v;
}

struct RawTable
{
  std::vector<Vec3>                points;
  std::vector<std::vector<double>> values;
};

RawTable read_table(const std::filesystem::path &path, std::string_view expected_header,
                    std::size_t columns)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  RawTable    t;
  std::string line;
  std::size_t line_no = 0;
  bool        header  = false;
  while (std::getline(in, line))
    {
      ++line_no;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line.empty() || line.front() == '#')
        continue;
      if (!header)
        {
          if (line != expected_header)
            throw IoError(path.string() + ": unexpected header '" + line + "'");
          header = true;
          continue;
        }
      std::vector<double> cells;
      std::string_view    rest(line);
      while (true)
        {
          const auto comma = rest.find(',');
          cells.push_back(to_double(rest.substr(0, comma), path, line_no));
          if (comma == std::string_view::npos)
            break;
          rest.remove_prefix(comma + 1);
        }
      if (cells.size() != columns)
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " columns");
      t.points.push_back({cells[0], cells[1], cells[2]});
      t.values.emplace_back(cells.begin() + 3, cells.end());
    }
  if (!header)
    throw IoError(path.string() + ": missing header");
  return t;
}

/// Grid from the distinct centre coordinates, plus the cell index of each row.
std::pair<Grid3, std::vector<std::size_t>> rebuild_grid(const RawTable &t,
                                                        const std::filesystem::path &path)
{
  std::array<std::vector<double>, 3> axes;
  for (int d = 0; d < 3; ++d)
    {
      for (const auto &p : t.points)
        axes[d].push_back(p[d]);
      std::sort(axes[d].begin(), axes[d].end());
      axes[d].erase(std::unique(axes[d].begin(), axes[d].end()), axes[d].end());
      if (axes[d].size() < 2)
        throw IoError(path.string() + ": need at least two cell centres per axis");
    }
  Vec3 h, origin;
  for (int d = 0; d < 3; ++d)
    {
      h[d]      = (axes[d].back() - axes[d].front()) / double(axes[d].size() - 1);
      origin[d] = axes[d].front() - 0.5 * h[d];
    }
  Grid3 g(axes[0].size(), axes[1].size(), axes[2].size(), h, origin);
  if (t.points.size() != g.size())
    throw IoError(path.string() + ": row count does not match a full structured grid");

  std::vector<std::size_t> where(t.points.size());
  std::vector<bool>        seen(g.size(), false);
  for (std::size_t r = 0; r < t.points.size(); ++r)
    {
      std::size_t c[3];
      for (int d = 0; d < 3; ++d)
        c[d] = std::size_t(std::lower_bound(axes[d].begin(), axes[d].end(), t.points[r][d]) -
                           axes[d].begin());
      const std::size_t idx = g.index(c[0], c[1], c[2]);
      if (seen[idx])
        throw IoError(path.string() + ": duplicate cell centre");
      seen[idx] = true;
      where[r]  = idx;
    }
  return {g, where};
}
} // namespace

// -- field writers -----------------------------------------------------------

void write_csv(std::ostream &out, const ScalarField3 &f)
{
  out << "x_m,y_m,z_m,value\n";
  for_each_cell(f.grid, [&](std::size_t c, const Vec3 &p) {
    out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.z) << ','
        << format_number(f.values[c]) << '\n';
  });
}

void write_csv(std::ostream &out, const VectorField3 &f)
{
  out << "x_m,y_m,z_m,value_x,value_y,value_z\n";
  for_each_cell(f.grid, [&](std::size_t c, const Vec3 &p) {
    const Vec3 &v = f.values[c];
    out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.z) << ','
        << format_number(v.x) << ',' << format_number(v.y) << ',' << format_number(v.z) << '\n';
  });
}

void write_vtk(std::ostream &out, const ScalarField3 &f)
{
  const auto name = data_name(to_string(f.quantity));
  vtk_header(out, f.grid, "idep " + name);
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for_each_cell(f.grid,
                [&](std::size_t c, const Vec3 &) { out << format_number(f.values[c]) << '\n'; });
}

void write_vtk(std::ostream &out, const VectorField3 &f)
{
  const auto name = data_name(to_string(f.quantity));
  vtk_header(out, f.grid, "idep " + name);
  out << "VECTORS " << name << " double\n";
  for_each_cell(f.grid, [&](std::size_t c, const Vec3 &) {
    const Vec3 &v = f.values[c];
    out << format_number(v.x) << ' ' << format_number(v.y) << ' ' << format_number(v.z) << '\n';
  });
}

void export_scalar_field(const ScalarField3 &f, const std::filesystem::path &path,
                         ExportFormat format)
{
  auto out = open_out(path);
  if (format == ExportFormat::csv)
    write_csv(out, f);
  else
    write_vtk(out, f);
  close_out(out, path);
}

void export_vector_field(const VectorField3 &f, const std::filesystem::path &path,
                         ExportFormat format)
{
  auto out = open_out(path);
  if (format == ExportFormat::csv)
    write_csv(out, f);
  else
    write_vtk(out, f);
  close_out(out, path);
}

ScalarField3 import_scalar_csv(const std::filesystem::path &path, ScalarQuantity q)
{
  const auto t          = read_table(path, "x_m,y_m,z_m,value", 4);
  auto [grid, where]    = rebuild_grid(t, path);
  ScalarField3 f(grid, q);
  for (std::size_t r = 0; r < where.size(); ++r)
    f.values[where[r]] = t.values[r][0];
  return f;
}

VectorField3 import_vector_csv(const std::filesystem::path &path, VectorQuantity q)
{
  const auto t       = read_table(path, "x_m,y_m,z_m,value_x,value_y,value_z", 6);
  auto [grid, where] = rebuild_grid(t, path);
  VectorField3 f(grid, q);
  for (std::size_t r = 0; r < where.size(); ++r)
    f.values[where[r]] = {t.values[r][0], t.values[r][1], t.values[r][2]};
  return f;
}

// -- reports -----------------------------------------------------------------

void write_height_decay(const std::filesystem::path &path, const HeightDecayReport &r,
                        std::string_view provenance)
{
  auto out = open_out(path);
  write_provenance(out, provenance);
  out << "height_m,peak_grad_e2_v2_m3,relative_reduction\n";
  for (std::size_t n = 0; n < r.heights.size(); ++n)
    out << format_number(r.heights[n]) << ',' << format_number(r.peak_grad_e2[n]) << ','
        << format_number(r.relative_reduction[n]) << '\n';
  close_out(out, path);
}

void write_gap_sweep(const std::filesystem::path &path, const GapSweepReport &r,
                     std::string_view provenance)
{
  auto out = open_out(path);
  write_provenance(out, provenance);
  out << "gap_m,height_m,peak_grad_e2_v2_m3,iterations,relative_residual\n";
  for (std::size_t n = 0; n < r.gaps.size(); ++n)
    out << format_number(r.gaps[n]) << ',' << format_number(r.height) << ','
        << format_number(r.peak_grad_e2[n]) << ',' << r.solves[n].iterations << ','
        << format_number(r.solves[n].relative_residual) << '\n';
  close_out(out, path);
}

void write_uniformity(const std::filesystem::path &path, const std::vector<UniformityReport> &r,
                      std::string_view provenance)
{
  auto out = open_out(path);
  write_provenance(out, provenance);
  out << "height_m,coefficient_of_variation,mean_e2_v2_m2,samples\n";
  for (const auto &u : r)
    out << format_number(u.height) << ',' << format_number(u.coefficient_of_variation) << ','
        << format_number(u.mean) << ',' << u.samples << '\n';
  close_out(out, path);
}

void write_spectrum(const std::filesystem::path &path, const CMSpectrum &s,
                    std::string_view provenance)
{
  auto out = open_out(path);
  write_provenance(out, provenance);
  out << "frequency_hz,re_k,im_k\n";
  for (std::size_t n = 0; n < s.frequencies.size(); ++n)
    out << format_number(s.frequencies[n]) << ',' << format_number(s.re_k[n]) << ','
        << format_number(s.im_k[n]) << '\n';
  close_out(out, path);
}

void write_trajectory(const std::filesystem::path &path, const TrajectoryResult &r)
{
  auto out = open_out(path);
  out << "t_s,x_m,y_m,z_m,speed_m_s,outcome\n";
  for (std::size_t n = 0; n < r.samples.size(); ++n)
    {
      const auto &s = r.samples[n];
      out << format_number(s.time) << ',' << format_number(s.position.x) << ','
          << format_number(s.position.y) << ',' << format_number(s.position.z) << ','
          << format_number(r.speeds[n]) << ',';
      if (n + 1 == r.samples.size())
        out << r.outcome_label();
      out << '\n';
    }
  close_out(out, path);
}

void write_ensemble(const std::filesystem::path &path, const EnsembleResult &r,
                    std::string_view provenance)
{
  auto out = open_out(path);
  write_provenance(out, provenance);
  out << "release_x_m,release_y_m,release_z_m,outcome,time_to_trap_s\n";
  for (std::size_t n = 0; n < r.releases.size(); ++n)
    {
      const auto &p = r.releases[n];
      const auto &t = r.trajectories[n];
      out << format_number(p.x) << ',' << format_number(p.y) << ',' << format_number(p.z) << ','
          << t.outcome_label() << ',';
      if (t.outcome == Outcome::trapped)
        out << format_number(t.samples.back().time);
      out << '\n';
    }
  close_out(out, path);
}

} // namespace idep
