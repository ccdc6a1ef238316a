#include "adaptreg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace adaptreg {

namespace {

// Builds facets, element->facet links and boundary flags from scratch.
// 1D facets are indexed by vertex; 2D facets are created in element-sweep
// order so the numbering is deterministic.
void build_topology(Mesh& mesh) {
  const int nv = mesh.n_vertices();
  const int ne = mesh.n_elements();
  mesh.facets.clear();
  mesh.element_facets.assign(ne, {-1, -1, -1});
  mesh.boundary_vertex.assign(nv, 0);

  if (mesh.dim == 1) {
    mesh.facets.resize(nv);
    for (int v = 0; v < nv; ++v) mesh.facets[v].vertices = {v, -1};
    for (int e = 0; e < ne; ++e) {
      for (int k = 0; k < 2; ++k) {
        const int v = mesh.elements[e][k];
        Facet& f = mesh.facets[v];
        if (f.elements[0] < 0) {
          f.elements[0] = e;
        } else if (f.elements[1] < 0) {
          f.elements[1] = e;
        } else {
          throw std::runtime_error("mesh: vertex shared by more than two intervals");
        }
        mesh.element_facets[e][k] = v;
      }
    }
    for (int v = 0; v < nv; ++v) {
      Facet& f = mesh.facets[v];
      f.boundary = f.elements[1] < 0;
      if (f.elements[0] < 0) throw std::runtime_error("mesh: isolated vertex");
      // A point has no diameter; interior vertices use the mean of the two
      // neighbouring element sizes, boundary vertices the single neighbour.
      const double h0 = mesh.element_volume(f.elements[0]);
      f.size = f.boundary ? h0 : 0.5 * (h0 + mesh.element_volume(f.elements[1]));
      if (f.boundary) mesh.boundary_vertex[v] = 1;
    }
    return;
  }

  std::map<std::pair<int, int>, int> edge_id;
  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[e];
    for (int k = 0; k < 3; ++k) {  // local edge k is opposite local vertex k
      int a = el[(k + 1) % 3];
      int b = el[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_id.try_emplace({a, b}, static_cast<int>(mesh.facets.size()));
      if (inserted) {
        Facet f;
        f.vertices = {a, b};
        f.elements = {e, -1};
        f.size = (mesh.vertices.row(a) - mesh.vertices.row(b)).norm();
        mesh.facets.push_back(f);
      } else {
        Facet& f = mesh.facets[it->second];
        if (f.elements[1] >= 0)
          throw std::runtime_error("mesh: edge shared by more than two triangles");
        f.elements[1] = e;
      }
      mesh.element_facets[e][k] = it->second;
    }
  }
  for (Facet& f : mesh.facets) {
    f.boundary = f.elements[1] < 0;
    if (f.boundary) {
      mesh.boundary_vertex[f.vertices[0]] = 1;
      mesh.boundary_vertex[f.vertices[1]] = 1;
    }
  }
}

double signed_area(const Mesh& m, int a, int b, int c) {
  const auto pa = m.vertices.row(a);
  const auto pb = m.vertices.row(b);
  const auto pc = m.vertices.row(c);
  return 0.5 * ((pb(0) - pa(0)) * (pc(1) - pa(1)) - (pc(0) - pa(0)) * (pb(1) - pa(1)));
}

void check_elements(const Mesh& mesh) {
  const int nv = mesh.n_vertices();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int k = 0; k < mesh.vertices_per_element(); ++k) {
      const int v = mesh.elements[e][k];
      if (v < 0 || v >= nv) throw std::runtime_error("mesh: vertex index out of range");
    }
    if (mesh.element_volume(e) <= 0.0)
      throw std::runtime_error("mesh: degenerate element");
  }
}

}  // namespace

double Mesh::element_volume(int e) const {
  const auto& el = elements[e];
  if (dim == 1) return std::abs(vertices(el[1], 0) - vertices(el[0], 0));
  return signed_area(*this, el[0], el[1], el[2]);
}

double Mesh::element_diameter(int e) const {
  const auto& el = elements[e];
  if (dim == 1) return element_volume(e);
  double h = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double len = (vertices.row(el[(k + 1) % 3]) - vertices.row(el[(k + 2) % 3])).norm();
    h = std::max(h, len);
  }
  return h;
}

Eigen::Vector2d Mesh::centroid(int e) const {
  const auto& el = elements[e];
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  const int n = vertices_per_element();
  for (int k = 0; k < n; ++k)
    for (int d = 0; d < dim; ++d) c(d) += vertices(el[k], d) / n;
  return c;
}

double Mesh::total_volume() const {
  double v = 0.0;
  for (int e = 0; e < n_elements(); ++e) v += element_volume(e);
  return v;
}

double Mesh::min_angle() const {
  if (dim != 2) throw std::logic_error("min_angle: 2D meshes only");
  double worst = M_PI;
  for (const auto& el : elements) {
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d u =
          (vertices.row(el[(k + 1) % 3]) - vertices.row(el[k])).transpose();
      const Eigen::Vector2d v =
          (vertices.row(el[(k + 2) % 3]) - vertices.row(el[k])).transpose();
      worst = std::min(worst, std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0)));
    }
  }
  return worst;
}

Mesh build_uniform_interval(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("build_uniform_interval: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("build_uniform_interval: requires a < b");
  Mesh m;
  m.dim = 1;
  m.vertices.resize(n + 1, 1);
  for (int i = 0; i <= n; ++i) m.vertices(i, 0) = a + (b - a) * i / n;
  m.elements.resize(n);
  m.parent_of.resize(n);
  m.vertex_parents.resize(n + 1);
  for (int e = 0; e < n; ++e) {
    m.elements[e] = {e, e + 1, -1};
    m.parent_of[e] = e;
  }
  for (int v = 0; v <= n; ++v) m.vertex_parents[v] = {v, v};
  m.parent_element_count = n;
  build_topology(m);
  check_elements(m);
  return m;
}

Mesh build_uniform_triangle_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_triangle_mesh: n must be >= 1");
  Mesh m;
  m.dim = 2;
  const int nv = (n + 1) * (n + 1);
  m.vertices.resize(nv, 2);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      m.vertices(vid(i, j), 0) = static_cast<double>(i) / n;
      m.vertices(vid(i, j), 1) = static_cast<double>(j) / n;
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int ll = vid(i, j), lr = vid(i + 1, j), ur = vid(i + 1, j + 1), ul = vid(i, j + 1);
      // Diagonal ll-ur is the hypotenuse of both triangles and their
      // initial refinement edge (opposite lr resp. ul).
      m.elements.push_back({ll, lr, ur});
      m.refinement_edge.push_back(1);
      m.elements.push_back({ll, ur, ul});
      m.refinement_edge.push_back(2);
    }
  const int ne = m.n_elements();
  m.parent_of.resize(ne);
  for (int e = 0; e < ne; ++e) m.parent_of[e] = e;
  m.vertex_parents.resize(nv);
  for (int v = 0; v < nv; ++v) m.vertex_parents[v] = {v, v};
  m.parent_element_count = ne;
  build_topology(m);
  check_elements(m);
  return m;
}

namespace {

Mesh bisect_1d(const Mesh& mesh, std::vector<char> is_marked) {
  // An element at floating-point resolution cannot be split further.
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (!is_marked[e]) continue;
    const double xa = mesh.vertices(mesh.elements[e][0], 0);
    const double xb = mesh.vertices(mesh.elements[e][1], 0);
    const double mid = 0.5 * (xa + xb);
    if (mid == xa || mid == xb) is_marked[e] = 0;
  }
  Mesh out;
  out.dim = 1;
  const int nv = mesh.n_vertices();
  int extra = 0;
  for (char c : is_marked) extra += c;
  out.vertices.resize(nv + extra, 1);
  out.vertices.topRows(nv) = mesh.vertices;
  out.vertex_parents.resize(nv + extra);
  for (int v = 0; v < nv; ++v) out.vertex_parents[v] = {v, v};

  int next = nv;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const int a = mesh.elements[e][0];
    const int b = mesh.elements[e][1];
    if (is_marked[e]) {
      out.vertices(next, 0) = 0.5 * (mesh.vertices(a, 0) + mesh.vertices(b, 0));
      out.vertex_parents[next] = {a, b};
      out.elements.push_back({a, next, -1});
      out.elements.push_back({next, b, -1});
      out.parent_of.push_back(e);
      out.parent_of.push_back(e);
      ++next;
    } else {
      out.elements.push_back({a, b, -1});
      out.parent_of.push_back(e);
    }
  }
  out.parent_element_count = mesh.n_elements();
  out.generation = mesh.generation + 1;
  build_topology(out);
  check_elements(out);
  return out;
}

struct EdgeKey {
  int a, b;
  EdgeKey(int x, int y) : a(std::min(x, y)), b(std::max(x, y)) {}
  bool operator<(const EdgeKey& o) const { return a < o.a || (a == o.a && b < o.b); }
};

Mesh bisect_2d(const Mesh& mesh, const std::vector<char>& is_marked) {
  const int ne = mesh.n_elements();
  // Edge-level closure: an element with any edge scheduled for splitting
  // must also split its refinement edge, otherwise hanging nodes appear.
  std::map<EdgeKey, int> split;  // edge -> midpoint vertex id (assigned later)
  auto ref_edge = [&mesh](int e) {
    const auto& el = mesh.elements[e];
    const int r = mesh.refinement_edge[e];
    return EdgeKey(el[(r + 1) % 3], el[(r + 2) % 3]);
  };
  for (int e = 0; e < ne; ++e)
    if (is_marked[e]) split.emplace(ref_edge(e), -1);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int e = 0; e < ne; ++e) {
      const auto& el = mesh.elements[e];
      bool any = false;
      for (int k = 0; k < 3 && !any; ++k)
        any = split.count(EdgeKey(el[(k + 1) % 3], el[(k + 2) % 3])) > 0;
      if (any && split.emplace(ref_edge(e), -1).second) changed = true;
    }
  }

  Mesh out;
  out.dim = 2;
  const int nv = mesh.n_vertices();
  out.vertices.resize(nv + static_cast<int>(split.size()), 2);
  out.vertices.topRows(nv) = mesh.vertices;
  out.vertex_parents.resize(nv + static_cast<int>(split.size()));
  for (int v = 0; v < nv; ++v) out.vertex_parents[v] = {v, v};
  int next = nv;
  for (auto& [key, mid] : split) {
    out.vertices.row(next) = 0.5 * (mesh.vertices.row(key.a) + mesh.vertices.row(key.b));
    out.vertex_parents[next] = {key.a, key.b};
    mid = next++;
  }

  auto midpoint_of = [&split](int a, int b) {
    auto it = split.find(EdgeKey(a, b));
    return it == split.end() ? -1 : it->second;
  };
  auto emit = [&out](int v0, int v1, int v2, int parent) {
    out.elements.push_back({v0, v1, v2});
    out.refinement_edge.push_back(0);
    out.parent_of.push_back(parent);
  };
  // Bisect (p | a--b) at m: children (m,p,a) and (m,b,p), both with the
  // newest vertex m first so their refinement edge is the opposite (old)
  // edge. At most one further split per child is ever needed.
  auto emit_child = [&](int m, int x, int y, int parent) {
    const int m2 = midpoint_of(x, y);
    if (m2 < 0) {
      emit(m, x, y, parent);
    } else {
      emit(m2, m, x, parent);
      emit(m2, y, m, parent);
    }
  };

  for (int e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[e];
    const int r = mesh.refinement_edge[e];
    const int p = el[r], a = el[(r + 1) % 3], b = el[(r + 2) % 3];
    const int m = midpoint_of(a, b);
    if (m < 0) {
      out.elements.push_back(el);
      out.refinement_edge.push_back(r);
      out.parent_of.push_back(e);
    } else {
      emit_child(m, p, a, e);
      emit_child(m, b, p, e);
    }
  }
  out.parent_element_count = ne;
  out.generation = mesh.generation + 1;
  build_topology(out);
  check_elements(out);
  return out;
}

}  // namespace

Mesh bisect(const Mesh& mesh, const std::vector<int>& marked) {
  std::vector<char> is_marked(mesh.n_elements(), 0);
  for (int e : marked) {
    if (e < 0 || e >= mesh.n_elements())
      throw std::out_of_range("bisect: marked element index out of range");
    is_marked[e] = 1;
  }
  return mesh.dim == 1 ? bisect_1d(mesh, is_marked) : bisect_2d(mesh, is_marked);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.dim << ' ' << mesh.n_vertices() << ' ' << mesh.n_elements() << '\n';
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    out << mesh.vertices(v, 0);
    if (mesh.dim == 2) out << ' ' << mesh.vertices(v, 1);
    out << '\n';
  }
  for (int e = 0; e < mesh.n_elements(); ++e) {
    out << mesh.elements[e][0] << ' ' << mesh.elements[e][1];
    if (mesh.dim == 2) out << ' ' << mesh.elements[e][2] << ' ' << mesh.refinement_edge[e];
    out << '\n';
  }
}

}  // namespace adaptreg
