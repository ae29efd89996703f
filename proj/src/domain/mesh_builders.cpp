#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "hmlab/domain/mesh.hpp"
#include "hmlab/error.hpp"
#include "surface.hpp"

namespace hmlab::domain {

namespace {

constexpr double kMaxAspect = 20.0;

struct RawMesh {
  std::vector<Eigen::Vector3d> positions;
  std::vector<char> boundary;
  std::vector<Face> faces;
};

std::array<double, 3> face_lengths(const DomainSpec& spec, const RawMesh& raw, const Face& f) {
  // lengths[c] is the side opposite corner c
  std::array<double, 3> len{};
  for (int c = 0; c < 3; ++c)
    len[c] = detail::surface_distance(spec, raw.positions[f[(c + 1) % 3]], raw.positions[f[(c + 2) % 3]]);
  return len;
}

// cot of the angle at corner c of the Euclidean triangle with these sides.
double corner_cot(const std::array<double, 3>& len, int c, double area) {
  double a = len[(c + 1) % 3], b = len[(c + 2) % 3], e = len[c];
  return (a * a + b * b - e * e) / (4.0 * area);
}

MeshDomain assemble(const DomainSpec& spec, const RawMesh& raw) {
  const int nv = static_cast<int>(raw.positions.size());
  std::vector<MeshVertex> vertices(nv);
  for (int v = 0; v < nv; ++v) {
    vertices[v].position = raw.positions[v];
    vertices[v].boundary = raw.boundary[v] != 0;
  }
  std::map<std::pair<int, int>, MeshEdge> edge_map;
  for (const Face& f : raw.faces) {
    auto len = face_lengths(spec, raw, f);
    double euclid = detail::heron_area(len[0], len[1], len[2]);
    double longest = std::max({len[0], len[1], len[2]});
    if (!(euclid > 0.0) ||
        longest * (len[0] + len[1] + len[2]) / (4.0 * std::sqrt(3.0) * euclid) > kMaxAspect)
      throw ConstructionError("degenerate triangle: aspect ratio beyond threshold");
    double area = detail::geodesic_triangle_area(spec, len[0], len[1], len[2]);
    for (int c = 0; c < 3; ++c) {
      vertices[f[c]].measure += area / 3.0;
      int a = f[(c + 1) % 3], b = f[(c + 2) % 3];
      auto key = std::minmax(a, b);
      auto& edge = edge_map[key];
      edge.i = key.first;
      edge.j = key.second;
      edge.length = len[c];
      edge.weight += 0.5 * corner_cot(len, c, euclid);
    }
  }
  double max_weight = 0.0;
  for (const auto& [key, edge] : edge_map) max_weight = std::max(max_weight, std::abs(edge.weight));
  std::vector<MeshEdge> edges;
  for (const auto& [key, edge] : edge_map) {
    if (std::abs(edge.weight) <= 1e-10 * max_weight) continue;
    if (edge.weight < 0.0) throw ConstructionError("negative cotangent weight: mesh is not Delaunay");
    edges.push_back(edge);
  }
  return MeshDomain(spec, std::move(vertices), std::move(edges), raw.faces);
}

RawMesh grid_mesh(const DomainSpec& spec, bool periodic) {
  const int k = spec.resolution;
  const int n = periodic ? k : k + 1;
  const double hx = spec.size_x / k, hy = spec.size_y / k;
  RawMesh raw;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      raw.positions.emplace_back(i * hx, j * hy, 0.0);
      raw.boundary.push_back(!periodic && (i == 0 || j == 0 || i == k || j == k));
    }
  auto id = [&](int i, int j) { return (j % n) * n + (i % n); };
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      raw.faces.push_back({v00, v10, v11});
      raw.faces.push_back({v00, v11, v01});
    }
  return raw;
}

RawMesh icosphere(const DomainSpec& spec) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Eigen::Vector3d> ico;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      ico.emplace_back(0.0, s1, s2 * phi);
      ico.emplace_back(s1, s2 * phi, 0.0);
      ico.emplace_back(s2 * phi, 0.0, s1);
    }
  std::vector<Face> ico_faces;
  for (int a = 0; a < 12; ++a)
    for (int b = a + 1; b < 12; ++b)
      for (int c = b + 1; c < 12; ++c) {
        auto near = [&](int x, int y) { return std::abs((ico[x] - ico[y]).norm() - 2.0) < 1e-9; };
        if (!(near(a, b) && near(b, c) && near(a, c))) continue;
        Eigen::Vector3d normal = (ico[b] - ico[a]).cross(ico[c] - ico[a]);
        if (normal.dot(ico[a] + ico[b] + ico[c]) > 0.0) ico_faces.push_back({a, b, c});
        else ico_faces.push_back({a, c, b});
      }

  const int k = spec.resolution;
  RawMesh raw;
  std::map<std::array<long long, 3>, int> index;
  auto vertex_id = [&](const Eigen::Vector3d& p) {
    Eigen::Vector3d q = spec.radius * p.normalized();
    Eigen::Vector3d u = p.normalized();
    std::array<long long, 3> key{std::llround(u[0] * 1e9), std::llround(u[1] * 1e9),
                                 std::llround(u[2] * 1e9)};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(raw.positions.size());
    raw.positions.push_back(q);
    raw.boundary.push_back(0);
    index.emplace(key, id);
    return id;
  };
  for (const Face& f : ico_faces) {
    const Eigen::Vector3d &a = ico[f[0]], &b = ico[f[1]], &c = ico[f[2]];
    std::vector<std::vector<int>> ids(k + 1);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j)
        ids[i].push_back(vertex_id(a + (b - a) * (double(i) / k) + (c - a) * (double(j) / k)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; i + j < k; ++j) {
        raw.faces.push_back({ids[i][j], ids[i + 1][j], ids[i][j + 1]});
        if (i + j + 2 <= k) raw.faces.push_back({ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]});
      }
  }
  return raw;
}

// Flip interior edges whose opposite angles sum beyond pi.
void delaunay_flips(const DomainSpec& spec, RawMesh& raw) {
  for (int pass = 0; pass < 200; ++pass) {
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_faces;
    for (std::size_t f = 0; f < raw.faces.size(); ++f)
      for (int c = 0; c < 3; ++c) {
        auto key = std::minmax(raw.faces[f][(c + 1) % 3], raw.faces[f][(c + 2) % 3]);
        edge_faces[key].emplace_back(static_cast<int>(f), c);
      }
    std::vector<char> touched(raw.faces.size(), 0);
    bool flipped = false;
    for (const auto& [key, incident] : edge_faces) {
      if (incident.size() != 2) continue;
      auto [f1, c1] = incident[0];
      auto [f2, c2] = incident[1];
      if (touched[f1] || touched[f2]) continue;
      auto l1 = face_lengths(spec, raw, raw.faces[f1]);
      auto l2 = face_lengths(spec, raw, raw.faces[f2]);
      double cot1 = corner_cot(l1, c1, detail::heron_area(l1[0], l1[1], l1[2]));
      double cot2 = corner_cot(l2, c2, detail::heron_area(l2[0], l2[1], l2[2]));
      if (cot1 + cot2 >= -1e-12) continue;
      int c = raw.faces[f1][c1];
      int d = raw.faces[f2][c2];
      if (edge_faces.count(std::minmax(c, d))) continue;
      int a = raw.faces[f1][(c1 + 1) % 3];
      int b = raw.faces[f1][(c1 + 2) % 3];
      // f1 = (a, b, c) counter-clockwise, f2 holds (b, a, d).
      raw.faces[f1] = {c, a, d};
      raw.faces[f2] = {c, d, b};
      touched[f1] = touched[f2] = 1;
      flipped = true;
    }
    if (!flipped) return;
  }
  throw ConstructionError("Delaunay flipping did not terminate");
}

RawMesh hyperbolic_patch(const DomainSpec& spec) {
  const int m = spec.resolution;
  RawMesh raw;
  raw.positions.push_back(hyperboloid_point(0.0, 0.0));
  raw.boundary.push_back(0);
  std::vector<int> ring_start{0};
  std::vector<int> ring_size{1};
  for (int ring = 1; ring <= m; ++ring) {
    int count = detail::hyperbolic_ring_size(spec, ring);
    double r = spec.radius * ring / m;
    double offset = 0.5 * (ring % 2);
    ring_start.push_back(static_cast<int>(raw.positions.size()));
    ring_size.push_back(count);
    for (int i = 0; i < count; ++i) {
      raw.positions.push_back(hyperboloid_point(r, 2.0 * std::numbers::pi * (i + offset) / count));
      raw.boundary.push_back(ring == m);
    }
  }
  for (int i = 0; i < ring_size[1]; ++i)
    raw.faces.push_back({0, ring_start[1] + i, ring_start[1] + (i + 1) % ring_size[1]});
  for (int ring = 1; ring < m; ++ring) {
    int p = ring_size[ring], q = ring_size[ring + 1];
    double off_a = 0.5 * (ring % 2), off_b = 0.5 * ((ring + 1) % 2);
    auto A = [&](int i) { return ring_start[ring] + i % p; };
    auto B = [&](int l) { return ring_start[ring + 1] + l % q; };
    int i = 0, l = 0;
    while (i < p || l < q) {
      double next_a = (i + 1 + off_a) / p;
      double next_b = (l + 1 + off_b) / q;
      if (l == q || (i < p && next_a <= next_b)) {
        raw.faces.push_back({A(i), B(l), A(i + 1)});
        ++i;
      } else {
        raw.faces.push_back({A(i), B(l), B(l + 1)});
        ++l;
      }
    }
  }
  delaunay_flips(spec, raw);
  return raw;
}

}  // namespace

int minimal_resolution(DomainKind kind) {
  switch (kind) {
    case DomainKind::FlatTorus:
    case DomainKind::FlatSquare: return 8;
    case DomainKind::RoundSphere: return 2;
    case DomainKind::HyperbolicPatch: return 4;
  }
  return 8;
}

MeshDomain build_mesh(const DomainSpec& spec) {
  if (spec.resolution < minimal_resolution(spec.kind))
    throw InvalidArgument("resolution " + std::to_string(spec.resolution) + " below minimum " +
                          std::to_string(minimal_resolution(spec.kind)) + " for " +
                          to_string(spec.kind));
  if (!(spec.size_x > 0.0) || !(spec.size_y > 0.0) || !(spec.radius > 0.0))
    throw InvalidArgument("domain sizes must be positive");
  switch (spec.kind) {
    case DomainKind::FlatTorus: return assemble(spec, grid_mesh(spec, true));
    case DomainKind::FlatSquare: return assemble(spec, grid_mesh(spec, false));
    case DomainKind::RoundSphere: return assemble(spec, icosphere(spec));
    case DomainKind::HyperbolicPatch: return assemble(spec, hyperbolic_patch(spec));
  }
  throw InvalidArgument("unknown domain kind");
}

nlohmann::json domain_spec_to_json(const DomainSpec& spec) {
  return {{"kind", to_string(spec.kind)},
          {"resolution", spec.resolution},
          {"size", {spec.size_x, spec.size_y}},
          {"radius", spec.radius}};
}

nlohmann::json mesh_to_json(const MeshDomain& mesh) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : mesh.vertices())
    vertices.push_back({{"xyz", {v.position[0], v.position[1], v.position[2]}},
                        {"measure", v.measure},
                        {"boundary", v.boundary}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : mesh.edges())
    edges.push_back({{"i", e.i}, {"j", e.j}, {"w", e.weight}, {"len", e.length}});
  nlohmann::json faces = nlohmann::json::array();
  for (const auto& f : mesh.faces()) faces.push_back({f[0], f[1], f[2]});
  return {{"tag", domain_spec_to_json(mesh.spec())},
          {"vertices", vertices},
          {"edges", edges},
          {"faces", faces}};
}

MeshDomain mesh_from_json(const nlohmann::json& doc) {
  try {
    const auto& tag = doc.at("tag");
    DomainSpec spec;
    spec.kind = domain_kind_from_string(tag.at("kind").get<std::string>());
    spec.resolution = tag.at("resolution").get<int>();
    spec.size_x = tag.at("size").at(0).get<double>();
    spec.size_y = tag.at("size").at(1).get<double>();
    spec.radius = tag.at("radius").get<double>();
    std::vector<MeshVertex> vertices;
    for (const auto& v : doc.at("vertices")) {
      const auto& xyz = v.at("xyz");
      vertices.push_back({Eigen::Vector3d(xyz.at(0).get<double>(), xyz.at(1).get<double>(),
                                          xyz.at(2).get<double>()),
                          v.at("measure").get<double>(), v.at("boundary").get<bool>()});
    }
    std::vector<MeshEdge> edges;
    for (const auto& e : doc.at("edges"))
      edges.push_back({e.at("i").get<int>(), e.at("j").get<int>(), e.at("w").get<double>(),
                       e.at("len").get<double>()});
    std::vector<Face> faces;
    for (const auto& f : doc.at("faces"))
      faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
    return MeshDomain(spec, std::move(vertices), std::move(edges), std::move(faces));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed mesh document: ") + e.what());
  }
}

}  // namespace hmlab::domain
