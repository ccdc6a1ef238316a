#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace adaptreg {

// One (dim-1)-dimensional facet: a vertex in 1D, an edge in 2D.
struct Facet {
  std::array<int, 2> vertices{-1, -1};  // one entry used in 1D, two in 2D
  std::array<int, 2> elements{-1, -1};  // adjacent elements; second is -1 on the boundary
  double size = 0.0;                    // h_E
  bool boundary = false;

  bool interior() const { return !boundary; }
};

// Simplicial mesh: intervals in 1D, triangles in 2D. A mesh is immutable
// after construction; bisect() returns a new mesh whose parent_of entries
// index elements of the input mesh. Triangles are stored with positive
// orientation and carry a refinement edge for newest-vertex bisection.
struct Mesh {
  int dim = 1;
  Eigen::MatrixXd vertices;                        // n_vertices x dim
  std::vector<std::array<int, 3>> elements;        // dim+1 used entries, rest -1
  std::vector<Facet> facets;
  std::vector<std::array<int, 3>> element_facets;  // facet ids per element (dim+1 used)
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<int> refinement_edge;                // 2D: local index of the vertex opposite the edge
  std::vector<int> parent_of;                      // per element, element index in the parent mesh
  std::vector<std::array<int, 2>> vertex_parents;  // edge (in parent mesh) this vertex bisected; {v,v} if inherited
  int parent_element_count = 0;
  int generation = 0;

  int n_vertices() const { return static_cast<int>(vertices.rows()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int vertices_per_element() const { return dim + 1; }

  double element_volume(int e) const;
  double element_diameter(int e) const;  // h_T
  Eigen::Vector2d centroid(int e) const; // y = 0 in 1D
  double total_volume() const;
  double min_angle() const;              // radians; 2D only
};

Mesh build_uniform_interval(int n, double a, double b);

// n x n squares on the unit square, each split along its diagonal; the
// diagonal is the initial refinement edge of both triangles.
Mesh build_uniform_triangle_mesh(int n);

// Newest-vertex bisection of the marked elements plus conformity closure.
Mesh bisect(const Mesh& mesh, const std::vector<int>& marked);

// Plain-text dump: "dim n_vertices n_elements", vertex lines, element lines
// (vertex indices, plus the refinement-edge index in 2D).
void write_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace adaptreg
