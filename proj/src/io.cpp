#include "adaptreg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adaptreg {

namespace {
namespace fs = std::filesystem;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

double safe_log10(double v) { return std::log10(std::max(v, 1e-300)); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
}

void write_text_file(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, target);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  write_text_file(path, out.str());
}

void dump_vertex_field(const std::string& path, const Mesh& mesh, const NodalField& field) {
  std::vector<std::string> header = {"vertex_id", "x", "value"};
  if (mesh.dim == 2) header = {"vertex_id", "x", "y", "value"};
  std::vector<std::vector<double>> rows;
  rows.reserve(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    std::vector<double> row{static_cast<double>(v), mesh.vertices(v, 0)};
    if (mesh.dim == 2) row.push_back(mesh.vertices(v, 1));
    row.push_back(field.values(v));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void dump_element_field(const std::string& path, const Mesh& mesh, const ElementField& field) {
  std::vector<std::string> header = {"element_id", "x_centroid", "value"};
  if (mesh.dim == 2) header = {"element_id", "x_centroid", "y_centroid", "value"};
  std::vector<std::vector<double>> rows;
  rows.reserve(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::Vector2d c = mesh.centroid(e);
    std::vector<double> row{static_cast<double>(e), c(0)};
    if (mesh.dim == 2) row.push_back(c(1));
    row.push_back(field.values(e));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void dump_estimator_breakdown(const std::string& path, const Mesh& mesh,
                              const EstimatorBreakdown& eta_h_part,
                              const EstimatorBreakdown& eta_alpha_part,
                              const ElementField& alpha_h) {
  std::vector<std::string> header = {"element_id", "x_centroid", "eta_h_T", "eta_alpha_T",
                                     "alpha_h_T"};
  if (mesh.dim == 2)
    header = {"element_id", "x_centroid", "y_centroid", "eta_h_T", "eta_alpha_T", "alpha_h_T"};
  std::vector<std::vector<double>> rows;
  rows.reserve(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::Vector2d c = mesh.centroid(e);
    std::vector<double> row{static_cast<double>(e), c(0)};
    if (mesh.dim == 2) row.push_back(c(1));
    row.push_back(std::sqrt(eta_h_part.eta_h_T2(e)));
    row.push_back(std::sqrt(eta_alpha_part.eta_alpha_T2(e)));
    row.push_back(alpha_h.values(e));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void dump_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ostringstream out;
  write_mesh(mesh, out);
  write_text_file(path, out.str());
}

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, bool logx, bool logy,
                     const std::vector<PlotSeries>& series) {
  const double W = 720, H = 480, L = 80, R = 40, T = 50, B = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = logx ? safe_log10(s.x[i]) : s.x[i];
      const double yv = logy ? safe_log10(s.y[i]) : s.y[i];
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  if (xmin > xmax) return;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  auto px = [&](double v) { return L + (W - L - R) * ((logx ? safe_log10(v) : v) - xmin) / (xmax - xmin); };
  auto py = [&](double v) { return H - B - (H - T - B) * ((logy ? safe_log10(v) : v) - ymin) / (ymax - ymin); };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n"
      << "<text x='" << W / 2 << "' y='" << H - 16 << "' text-anchor='middle' font-size='13'>"
      << xlabel << "</text>\n"
      << "<text x='20' y='" << H / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 20 "
      << H / 2 << ")'>" << ylabel << "</text>\n"
      << "<rect x='" << L << "' y='" << T << "' width='" << W - L - R << "' height='" << H - T - B
      << "' fill='none' stroke='black'/>\n";
  const int nticks = 6;
  for (int t = 0; t <= nticks; ++t) {
    const double fx = xmin + (xmax - xmin) * t / nticks;
    const double fy = ymin + (ymax - ymin) * t / nticks;
    const double gx = L + (W - L - R) * t / nticks;
    const double gy = H - B - (H - T - B) * t / nticks;
    svg << "<line x1='" << gx << "' y1='" << T << "' x2='" << gx << "' y2='" << H - B
        << "' stroke='#dddddd'/>\n"
        << "<line x1='" << L << "' y1='" << gy << "' x2='" << W - R << "' y2='" << gy
        << "' stroke='#dddddd'/>\n"
        << "<text x='" << gx << "' y='" << H - B + 18 << "' text-anchor='middle' font-size='11'>"
        << (logx ? "1e" + format_double(fx) : format_double(fx)) << "</text>\n"
        << "<text x='" << L - 6 << "' y='" << gy + 4 << "' text-anchor='end' font-size='11'>"
        << (logy ? "1e" + format_double(fy) : format_double(fy)) << "</text>\n";
  }
  int color = 0;
  for (const auto& s : series) {
    svg << "<polyline fill='none' stroke='" << kPalette[color % 8] << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    svg << "'/>\n";
    svg << "<text x='" << W - R - 8 << "' y='" << T + 18 + 16 * color
        << "' text-anchor='end' font-size='12' fill='" << kPalette[color % 8] << "'>" << s.label
        << "</text>\n";
    ++color;
  }
  svg << "</svg>\n";
  write_text_file(path, svg.str());
}

void write_mesh_heatmap(const std::string& path, const std::string& title, const Mesh& mesh,
                        const Eigen::VectorXd& element_values) {
  if (mesh.dim != 2) throw std::invalid_argument("write_mesh_heatmap: 2D meshes only");
  const double W = 640, H = 680, pad = 40;
  double vmin = 1e300, vmax = -1e300;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    vmin = std::min(vmin, safe_log10(element_values(e)));
    vmax = std::max(vmax, safe_log10(element_values(e)));
  }
  if (vmax - vmin < 1e-12) vmax = vmin + 1.0;
  auto color_of = [&](double v) {
    const double t = (safe_log10(v) - vmin) / (vmax - vmin);
    const int r = static_cast<int>(255 * t);
    const int b = static_cast<int>(255 * (1.0 - t));
    const int g = static_cast<int>(80 + 60 * (1.0 - std::abs(2.0 * t - 1.0)));
    char buf[10];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  auto px = [&](double x) { return pad + (W - 2 * pad) * x; };
  auto py = [&](double y) { return H - pad - (H - 2 * pad - 40) * y; };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << " (log10 range " << format_double(vmin) << " .. " << format_double(vmax)
      << ")</text>\n";
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& el = mesh.elements[e];
    svg << "<polygon points='";
    for (int k = 0; k < 3; ++k)
      svg << px(mesh.vertices(el[k], 0)) << ',' << py(mesh.vertices(el[k], 1)) << ' ';
    svg << "' fill='" << color_of(element_values(e)) << "' stroke='#00000030' stroke-width='0.2'/>\n";
  }
  svg << "</svg>\n";
  write_text_file(path, svg.str());
}

}  // namespace adaptreg
