#include "hmlab/domain/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "hmlab/error.hpp"
#include "surface.hpp"

namespace hmlab::domain {

namespace {

double wrap(double d, double period) { return d - period * std::round(d / period); }

double positive_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace

double minkowski(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double hyperboloid_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
  // The Minkowski norm of the chord is 2 sinh(d/2); this form keeps precision
  // for nearby points.
  Eigen::Vector3d diff = p - q;
  double chord_sq = std::max(0.0, minkowski(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(chord_sq));
}

Eigen::Vector3d hyperboloid_point(double r, double theta) {
  return {std::cosh(r), std::sinh(r) * std::cos(theta), std::sinh(r) * std::sin(theta)};
}

Eigen::Vector3d project_hyperboloid(const Eigen::Vector3d& p) {
  return {std::sqrt(1.0 + p[1] * p[1] + p[2] * p[2]), p[1], p[2]};
}

namespace detail {

double surface_distance(const DomainSpec& spec, const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
  switch (spec.kind) {
    case DomainKind::FlatTorus: {
      double dx = wrap(p[0] - q[0], spec.size_x);
      double dy = wrap(p[1] - q[1], spec.size_y);
      return std::hypot(dx, dy);
    }
    case DomainKind::FlatSquare: return std::hypot(p[0] - q[0], p[1] - q[1]);
    case DomainKind::RoundSphere:
      return spec.radius * std::atan2(p.cross(q).norm(), p.dot(q));
    case DomainKind::HyperbolicPatch: return hyperboloid_distance(p, q);
  }
  return 0.0;
}

double heron_area(double a, double b, double c) {
  std::array<double, 3> s{a, b, c};
  std::sort(s.begin(), s.end(), std::greater<>());
  double x = s[0], y = s[1], z = s[2];
  double prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return prod > 0.0 ? 0.25 * std::sqrt(prod) : 0.0;
}

double geodesic_triangle_area(const DomainSpec& spec, double a, double b, double c) {
  double s = 0.5 * (a + b + c);
  switch (spec.kind) {
    case DomainKind::FlatTorus:
    case DomainKind::FlatSquare: return heron_area(a, b, c);
    case DomainKind::RoundSphere: {
      double R = spec.radius;
      double t = std::tan(0.5 * s / R) * std::tan(0.5 * (s - a) / R) *
                 std::tan(0.5 * (s - b) / R) * std::tan(0.5 * (s - c) / R);
      return 4.0 * std::atan(std::sqrt(std::max(0.0, t))) * R * R;
    }
    case DomainKind::HyperbolicPatch: {
      double t = std::tanh(0.5 * s) * std::tanh(0.5 * (s - a)) * std::tanh(0.5 * (s - b)) *
                 std::tanh(0.5 * (s - c));
      return 4.0 * std::atan(std::sqrt(std::max(0.0, t)));
    }
  }
  return 0.0;
}

int hyperbolic_ring_size(const DomainSpec& spec, int ring) {
  if (ring == 0) return 1;
  double dr = spec.radius / spec.resolution;
  double r = ring * dr;
  return std::max(6, static_cast<int>(std::lround(2.0 * std::numbers::pi * std::sinh(r) / dr)));
}

double hyperbolic_inner_radius(const DomainSpec& spec) {
  // Geodesics are straight in the Klein model, whose radial coordinate is tanh r.
  int n = hyperbolic_ring_size(spec, spec.resolution);
  return std::atanh(std::tanh(spec.radius) * std::cos(std::numbers::pi / n));
}

}  // namespace detail

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::FlatTorus: return "flat_torus";
    case DomainKind::FlatSquare: return "flat_square";
    case DomainKind::RoundSphere: return "round_sphere";
    case DomainKind::HyperbolicPatch: return "hyperbolic_patch";
  }
  return "flat_torus";
}

DomainKind domain_kind_from_string(std::string_view name) {
  if (name == "flat_torus") return DomainKind::FlatTorus;
  if (name == "flat_square") return DomainKind::FlatSquare;
  if (name == "round_sphere") return DomainKind::RoundSphere;
  if (name == "hyperbolic_patch") return DomainKind::HyperbolicPatch;
  throw InvalidArgument("unknown domain kind '" + std::string(name) + "'");
}

MeshDomain::MeshDomain(DomainSpec spec, std::vector<MeshVertex> vertices,
                       std::vector<MeshEdge> edges, std::vector<Face> faces)
    : spec_(spec), vertices_(std::move(vertices)), edges_(std::move(edges)), faces_(std::move(faces)) {
  const int nv = vertex_count();
  if (nv == 0 || faces_.empty()) throw ConstructionError("mesh has no vertices or faces");
  for (const auto& v : vertices_)
    if (!(v.measure > 0.0)) throw ConstructionError("vertex measure must be positive");
  neighbors_.assign(nv, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.i < 0 || edge.j < 0 || edge.i >= nv || edge.j >= nv || edge.i == edge.j)
      throw ConstructionError("edge endpoints out of range");
    if (!(edge.weight > 0.0) || !(edge.length > 0.0))
      throw ConstructionError("edge weight and length must be positive");
    neighbors_[edge.i].push_back({edge.j, static_cast<int>(e), edge.weight});
    neighbors_[edge.j].push_back({edge.i, static_cast<int>(e), edge.weight});
  }
  vertex_faces_.assign(nv, {});
  face_adjacency_.assign(faces_.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, std::pair<int, int>> open;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (int c = 0; c < 3; ++c) {
      int v = faces_[f][c];
      if (v < 0 || v >= nv) throw ConstructionError("face index out of range");
      vertex_faces_[v].push_back(static_cast<int>(f));
      int a = faces_[f][(c + 1) % 3];
      int b = faces_[f][(c + 2) % 3];
      auto key = std::minmax(a, b);
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(static_cast<int>(f), c));
      } else {
        face_adjacency_[f][c] = it->second.first;
        face_adjacency_[it->second.first][it->second.second] = static_cast<int>(f);
        open.erase(it);
      }
    }
    for (int c = 0; c < 3; ++c) {
      double len = distance(faces_[f][c], faces_[f][(c + 1) % 3]);
      mesh_size_ = std::max(mesh_size_, len);
    }
  }
  curvature_ = CurvatureData::constant(2, model().curvature());
  frames_.resize(nv);
  for (int v = 0; v < nv; ++v) {
    const Eigen::Vector3d& p = vertices_[v].position;
    switch (spec_.kind) {
      case DomainKind::FlatTorus:
      case DomainKind::FlatSquare: frames_[v] = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()}; break;
      case DomainKind::RoundSphere: {
        Eigen::Vector3d n = p.normalized();
        Eigen::Vector3d a = std::abs(n[2]) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
        Eigen::Vector3d e1 = (a - a.dot(n) * n).normalized();
        frames_[v] = {e1, n.cross(e1)};
        break;
      }
      case DomainKind::HyperbolicPatch: {
        Eigen::Vector3d a = Eigen::Vector3d::UnitY();
        Eigen::Vector3d e1 = a + minkowski(a, p) * p;
        e1 /= std::sqrt(minkowski(e1, e1));
        Eigen::Vector3d b = Eigen::Vector3d::UnitZ();
        Eigen::Vector3d e2 = b + minkowski(b, p) * p - minkowski(b, e1) * e1;
        e2 /= std::sqrt(minkowski(e2, e2));
        frames_[v] = {e1, e2};
        break;
      }
    }
  }
}

std::span<const Neighbor> MeshDomain::neighbors(int v) const { return neighbors_[v]; }

std::span<const int> MeshDomain::incident_faces(int v) const { return vertex_faces_[v]; }

double MeshDomain::total_measure() const {
  double total = 0.0;
  for (const auto& v : vertices_) total += v.measure;
  return total;
}

bool MeshDomain::closed() const {
  return spec_.kind == DomainKind::FlatTorus || spec_.kind == DomainKind::RoundSphere;
}

ExactModel MeshDomain::model() const {
  switch (spec_.kind) {
    case DomainKind::FlatTorus:
    case DomainKind::FlatSquare: return {ModelKind::Flat, 1.0};
    case DomainKind::RoundSphere: return {ModelKind::RoundSphere, spec_.radius};
    case DomainKind::HyperbolicPatch: return {ModelKind::Hyperbolic, 1.0};
  }
  return {};
}

const CurvatureData& MeshDomain::curvature(int) const { return curvature_; }

NormalChart MeshDomain::chart(int v, double validity_radius) const {
  return model_chart(v, 2, model(), validity_radius);
}

double MeshDomain::distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q) const {
  return detail::surface_distance(spec_, p, q);
}

double MeshDomain::distance(int a, int b) const {
  return distance(vertices_[a].position, vertices_[b].position);
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> MeshDomain::frame(int v) const { return frames_[v]; }

Eigen::Vector3d MeshDomain::exp(int center, const Eigen::Vector2d& v) const {
  const Eigen::Vector3d& p = vertices_[center].position;
  const auto& [e1, e2] = frames_[center];
  double len = v.norm();
  switch (spec_.kind) {
    case DomainKind::FlatTorus:
      return {positive_mod(p[0] + v[0], spec_.size_x), positive_mod(p[1] + v[1], spec_.size_y), 0.0};
    case DomainKind::FlatSquare: return {p[0] + v[0], p[1] + v[1], 0.0};
    case DomainKind::RoundSphere: {
      if (len == 0.0) return p;
      Eigen::Vector3d dir = (v[0] * e1 + v[1] * e2) / len;
      double t = len / spec_.radius;
      return std::cos(t) * p + std::sin(t) * spec_.radius * dir;
    }
    case DomainKind::HyperbolicPatch: {
      if (len == 0.0) return p;
      Eigen::Vector3d dir = (v[0] * e1 + v[1] * e2) / len;
      return project_hyperboloid(std::cosh(len) * p + std::sinh(len) * dir);
    }
  }
  return p;
}

Eigen::Vector2d MeshDomain::log(int center, const Eigen::Vector3d& q) const {
  const Eigen::Vector3d& p = vertices_[center].position;
  const auto& [e1, e2] = frames_[center];
  switch (spec_.kind) {
    case DomainKind::FlatTorus:
      return {wrap(q[0] - p[0], spec_.size_x), wrap(q[1] - p[1], spec_.size_y)};
    case DomainKind::FlatSquare: return {q[0] - p[0], q[1] - p[1]};
    case DomainKind::RoundSphere: {
      Eigen::Vector3d c = p.normalized();
      Eigen::Vector3d u = q.normalized();
      double angle = std::atan2(c.cross(u).norm(), c.dot(u));
      Eigen::Vector3d w = u - u.dot(c) * c;
      double wn = w.norm();
      if (wn < 1e-300) return Eigen::Vector2d::Zero();
      w /= wn;
      return spec_.radius * angle * Eigen::Vector2d(w.dot(e1), w.dot(e2));
    }
    case DomainKind::HyperbolicPatch: {
      double d = hyperboloid_distance(p, q);
      Eigen::Vector3d w = q + minkowski(p, q) * p;
      double wn = std::sqrt(std::max(0.0, minkowski(w, w)));
      if (wn < 1e-300) return Eigen::Vector2d::Zero();
      return d / wn * Eigen::Vector2d(minkowski(w, e1), minkowski(w, e2));
    }
  }
  return Eigen::Vector2d::Zero();
}

double MeshDomain::boundary_distance(const Eigen::Vector3d& p) const {
  switch (spec_.kind) {
    case DomainKind::FlatTorus:
    case DomainKind::RoundSphere: return std::numeric_limits<double>::infinity();
    case DomainKind::FlatSquare:
      return std::min({p[0], spec_.size_x - p[0], p[1], spec_.size_y - p[1]});
    case DomainKind::HyperbolicPatch:
      return detail::hyperbolic_inner_radius(spec_) -
             hyperboloid_distance(p, Eigen::Vector3d(1.0, 0.0, 0.0));
  }
  return 0.0;
}

double MeshDomain::clearance(int v) const {
  switch (spec_.kind) {
    case DomainKind::FlatTorus: return 0.5 * std::min(spec_.size_x, spec_.size_y);
    case DomainKind::RoundSphere: return 0.5 * std::numbers::pi * spec_.radius;
    default: return boundary_distance(vertices_[v].position);
  }
}

Eigen::Vector2d MeshDomain::planar(int v) const {
  const Eigen::Vector3d& p = vertices_[v].position;
  if (spec_.kind == DomainKind::HyperbolicPatch) {
    double r = hyperboloid_distance(p, Eigen::Vector3d(1.0, 0.0, 0.0));
    double theta = std::atan2(p[2], p[1]);
    return r * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  }
  return {p[0], p[1]};
}

int MeshDomain::nearest_vertex(const Eigen::Vector3d& p) const {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < vertex_count(); ++v) {
    double d = distance(vertices_[v].position, p);
    if (d < best_d) best_d = d, best = v;
  }
  return best;
}

std::optional<Location> MeshDomain::locate(const Eigen::Vector3d& p, int hint_face) const {
  if (spec_.kind == DomainKind::FlatTorus || spec_.kind == DomainKind::FlatSquare) return locate_grid(p);
  return locate_walk(p, hint_face);
}

std::optional<Location> MeshDomain::locate_grid(const Eigen::Vector3d& p) const {
  const int k = spec_.resolution;
  const double hx = spec_.size_x / k;
  const double hy = spec_.size_y / k;
  double x = p[0];
  double y = p[1];
  int stride = k;
  if (spec_.kind == DomainKind::FlatTorus) {
    x = positive_mod(x, spec_.size_x);
    y = positive_mod(y, spec_.size_y);
  } else {
    const double slack = 1e-12 * std::max(spec_.size_x, spec_.size_y);
    if (x < -slack || y < -slack || x > spec_.size_x + slack || y > spec_.size_y + slack)
      return std::nullopt;
    stride = k + 1;
  }
  int i = std::clamp(static_cast<int>(std::floor(x / hx)), 0, k - 1);
  int j = std::clamp(static_cast<int>(std::floor(y / hy)), 0, k - 1);
  double fx = std::clamp(x / hx - i, 0.0, 1.0);
  double fy = std::clamp(y / hy - j, 0.0, 1.0);
  int cell = j * k + i;
  (void)stride;
  Location loc;
  if (fx >= fy) {
    loc.face = 2 * cell;
    loc.bary = {1.0 - fx, fx - fy, fy};
  } else {
    loc.face = 2 * cell + 1;
    loc.bary = {1.0 - fy, fx, fy - fx};
  }
  return loc;
}

bool MeshDomain::barycentric(int face, const Eigen::Vector3d& p, std::array<double, 3>& bary) const {
  // Cone coordinates: p = sum lambda_c v_c. Nonnegative lambdas mean p lies in
  // the geodesic triangle on the sphere or the hyperboloid.
  Eigen::Matrix3d m;
  for (int c = 0; c < 3; ++c) m.col(c) = vertices_[faces_[face][c]].position;
  Eigen::Vector3d lambda = m.partialPivLu().solve(p);
  if (!lambda.allFinite()) return false;
  double scale = lambda.cwiseAbs().sum();
  if (!(scale > 0.0)) return false;
  for (int c = 0; c < 3; ++c) bary[c] = lambda[c] / scale;
  return true;
}

namespace {

Location normalized_location(int face, std::array<double, 3> bary) {
  Location loc{face, bary};
  for (double& b : loc.bary) b = std::max(b, 0.0);
  double s = loc.bary[0] + loc.bary[1] + loc.bary[2];
  for (double& b : loc.bary) b /= s;
  return loc;
}

}  // namespace

std::optional<Location> MeshDomain::locate_walk(const Eigen::Vector3d& p, int hint_face) const {
  const int nf = static_cast<int>(faces_.size());
  const double slack = 1e-10;
  int face = (hint_face >= 0 && hint_face < nf) ? hint_face : 0;
  std::array<double, 3> bary{};
  for (int step = 0; step < nf; ++step) {
    if (!barycentric(face, p, bary)) break;
    int worst = 0;
    for (int c = 1; c < 3; ++c)
      if (bary[c] < bary[worst]) worst = c;
    if (bary[worst] >= -slack) return normalized_location(face, bary);
    int next = face_adjacency_[face][worst];
    if (next < 0) break;
    face = next;
  }
  // Fall back to an exhaustive search, keeping the best-fitting face.
  int best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best_bary{};
  for (int f = 0; f < nf; ++f) {
    if (!barycentric(f, p, bary)) continue;
    double mn = std::min({bary[0], bary[1], bary[2]});
    if (mn > best_min) best_min = mn, best = f, best_bary = bary;
  }
  if (best < 0 || best_min < -1e-9) return std::nullopt;
  return normalized_location(best, best_bary);
}

}  // namespace hmlab::domain
