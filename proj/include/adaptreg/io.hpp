#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "adaptreg/estimators.hpp"
#include "adaptreg/fields.hpp"
#include "adaptreg/mesh.hpp"

namespace adaptreg {

void ensure_directory(const std::string& dir);

// Writes to a temporary file in the same directory and renames into place.
void write_text_file(const std::string& path, const std::string& contents);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void dump_vertex_field(const std::string& path, const Mesh& mesh, const NodalField& field);
void dump_element_field(const std::string& path, const Mesh& mesh, const ElementField& field);
void dump_estimator_breakdown(const std::string& path, const Mesh& mesh,
                              const EstimatorBreakdown& eta_h_part,
                              const EstimatorBreakdown& eta_alpha_part,
                              const ElementField& alpha_h);
void dump_mesh_file(const std::string& path, const Mesh& mesh);

// Presentation-only SVG output; never gates exit codes.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel, bool logx, bool logy,
                     const std::vector<PlotSeries>& series);

// Triangles coloured by log10 of a per-element value (2D meshes).
void write_mesh_heatmap(const std::string& path, const std::string& title, const Mesh& mesh,
                        const Eigen::VectorXd& element_values);

std::string format_double(double v);

}  // namespace adaptreg
