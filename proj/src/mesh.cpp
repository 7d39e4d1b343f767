#include "frvn/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "frvn/error.hpp"

namespace frvn {

namespace {

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

double tet_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return dot(sub(b, a), cross(sub(c, a), sub(d, a))) / 6.0;
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
  return 0.5 * norm(cross(sub(b, a), sub(c, a)));
}

constexpr int kTets[6][4] = {{0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6},
                             {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6}};
constexpr int kFaces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                              {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};

// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double hex_volume(const HexCorners& c) {
  double v = 0.0;
  for (const auto& t : kTets) v += tet_volume(c[t[0]], c[t[1]], c[t[2]], c[t[3]]);
  return v;
}

double hex_surface_area(const HexCorners& c) {
  double s = 0.0;
  for (const auto& f : kFaces) {
    const Point3 &a = c[f[0]], &b = c[f[1]], &p = c[f[2]], &d = c[f[3]];
    if (norm(sub(p, a)) <= norm(sub(d, b))) {
      s += triangle_area(a, b, p) + triangle_area(a, p, d);
    } else {
      s += triangle_area(a, b, d) + triangle_area(b, p, d);
    }
  }
  return s;
}

double shape_factor(const HexCorners& corners) {
  const double v = hex_volume(corners);
  if (!(v > 0.0)) throw InvalidInput("hexahedron has non-positive volume");
  const double s = hex_surface_area(corners);
  return 6.0 * std::sqrt(std::numbers::pi) * v / std::pow(s, 1.5);
}

std::size_t JitteredMesh::node_index(int i, int j, int k) const {
  const std::size_t nx = dims[0] + 1, ny = dims[1] + 1;
  return i + nx * (j + ny * static_cast<std::size_t>(k));
}

std::size_t JitteredMesh::element_count() const {
  return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
}

std::array<std::size_t, 8> JitteredMesh::connectivity(std::size_t e) const {
  const int i = static_cast<int>(e % dims[0]);
  const int j = static_cast<int>((e / dims[0]) % dims[1]);
  const int k = static_cast<int>(e / (static_cast<std::size_t>(dims[0]) * dims[1]));
  return {node_index(i, j, k),         node_index(i + 1, j, k),
          node_index(i + 1, j + 1, k), node_index(i, j + 1, k),
          node_index(i, j, k + 1),     node_index(i + 1, j, k + 1),
          node_index(i + 1, j + 1, k + 1), node_index(i, j + 1, k + 1)};
}

HexCorners JitteredMesh::element(std::size_t e) const {
  HexCorners corners;
  const auto ids = connectivity(e);
  for (int c = 0; c < 8; ++c) corners[c] = nodes[ids[c]];
  return corners;
}

double JitteredMesh::mean_quality() const {
  if (quality.empty()) return 0.0;
  return std::accumulate(quality.begin(), quality.end(), 0.0) / quality.size();
}

std::vector<double> audit_quality(const JitteredMesh& mesh, int threads) {
  std::vector<double> q(mesh.element_count());
  std::vector<double> volume(q.size());
  parallel_for(q.size(), threads, [&](std::size_t e) {
    const HexCorners corners = mesh.element(e);
    volume[e] = hex_volume(corners);
    q[e] = volume[e] > 0.0 ? 6.0 * std::sqrt(std::numbers::pi) * volume[e] /
                                 std::pow(hex_surface_area(corners), 1.5)
                           : 0.0;
  });
  for (std::size_t e = 0; e < q.size(); ++e) {
    if (!(volume[e] > 0.0)) {
      throw NumericalError("element " + std::to_string(e) + " is inverted (volume " +
                           format_real(volume[e]) + ")");
    }
  }
  return q;
}

JitteredMesh generate_jittered_mesh(std::array<int, 3> dims, std::array<double, 3> extent,
                                    double jitter_factor, std::uint64_t seed, int threads) {
  if (!(jitter_factor >= 0.0 && jitter_factor < 1.0)) {
    throw InvalidInput("jitter factor must lie in [0, 1)");
  }
  for (int d = 0; d < 3; ++d) {
    if (dims[d] < 2) throw InvalidInput("mesh needs at least 2 elements per direction");
    if (!(extent[d] > 0.0) || !std::isfinite(extent[d])) {
      throw InvalidInput("mesh extent must be positive");
    }
  }
  JitteredMesh mesh;
  mesh.dims = dims;
  mesh.extent = extent;
  mesh.jitter_factor = jitter_factor;
  mesh.seed = seed;
  const std::array<double, 3> h{extent[0] / dims[0], extent[1] / dims[1], extent[2] / dims[2]};
  mesh.nodes.resize(static_cast<std::size_t>(dims[0] + 1) * (dims[1] + 1) * (dims[2] + 1));

  std::mt19937_64 rng(seed);
  for (int k = 0; k <= dims[2]; ++k) {
    for (int j = 0; j <= dims[1]; ++j) {
      for (int i = 0; i <= dims[0]; ++i) {
        const std::array<int, 3> ijk{i, j, k};
        const bool interior = i > 0 && i < dims[0] && j > 0 && j < dims[1] && k > 0 &&
                              k < dims[2];
        Point3& x = mesh.nodes[mesh.node_index(i, j, k)];
        for (int d = 0; d < 3; ++d) {
          x[d] = ijk[d] == dims[d] ? extent[d] : ijk[d] * h[d];
          if (interior && jitter_factor > 0.0) {
            x[d] += (2.0 * unit_uniform(rng) - 1.0) * jitter_factor * h[d] / 2.0;
          }
        }
      }
    }
  }
  mesh.quality = audit_quality(mesh, threads);
  return mesh;
}

void write_mesh(std::ostream& out, const JitteredMesh& mesh) {
  out << "frvn-mesh 1\n";
  out << "dims " << mesh.dims[0] << ' ' << mesh.dims[1] << ' ' << mesh.dims[2] << '\n';
  out << "extent " << format_real(mesh.extent[0]) << ' ' << format_real(mesh.extent[1]) << ' '
      << format_real(mesh.extent[2]) << '\n';
  out << "jitter " << format_real(mesh.jitter_factor) << '\n';
  out << "seed " << mesh.seed << '\n';
  out << "nodes " << mesh.nodes.size() << '\n';
  for (const Point3& p : mesh.nodes) {
    out << format_real(p[0]) << ' ' << format_real(p[1]) << ' ' << format_real(p[2]) << '\n';
  }
  out << "elements " << mesh.element_count() << '\n';
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto ids = mesh.connectivity(e);
    for (int c = 0; c < 8; ++c) out << ids[c] << (c == 7 ? '\n' : ' ');
  }
}

JitteredMesh read_mesh(std::istream& in) {
  int line_no = 0;
  std::string line;
  auto next = [&](const std::string& key) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) break;
    }
    if (!in && line.empty()) {
      throw InvalidInput("mesh file ends before '" + key + "'");
    }
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    if (!key.empty() && word != key) {
      throw InvalidInput("mesh file line " + std::to_string(line_no) + ": expected '" + key +
                         "'");
    }
    return fields;
  };
  auto fail = [&] {
    throw InvalidInput("mesh file line " + std::to_string(line_no) + ": malformed");
  };

  JitteredMesh mesh;
  {
    auto f = next("frvn-mesh");
    int version = 0;
    if (!(f >> version) || version != 1) fail();
  }
  {
    auto f = next("dims");
    if (!(f >> mesh.dims[0] >> mesh.dims[1] >> mesh.dims[2])) fail();
    for (int d : mesh.dims) {
      if (d < 1) fail();
    }
  }
  {
    auto f = next("extent");
    std::string a, b, c;
    if (!(f >> a >> b >> c)) fail();
    mesh.extent = {std::stod(a), std::stod(b), std::stod(c)};
  }
  {
    auto f = next("jitter");
    std::string a;
    if (!(f >> a)) fail();
    mesh.jitter_factor = std::stod(a);
  }
  {
    auto f = next("seed");
    if (!(f >> mesh.seed)) fail();
  }
  std::size_t count = 0;
  {
    auto f = next("nodes");
    if (!(f >> count)) fail();
    if (count != static_cast<std::size_t>(mesh.dims[0] + 1) * (mesh.dims[1] + 1) *
                     (mesh.dims[2] + 1)) {
      fail();
    }
  }
  mesh.nodes.resize(count);
  for (Point3& p : mesh.nodes) {
    std::getline(in, line);
    ++line_no;
    std::istringstream f(line);
    std::string a, b, c;
    if (!(f >> a >> b >> c)) fail();
    p = {std::stod(a), std::stod(b), std::stod(c)};
  }
  {
    auto f = next("elements");
    std::size_t elements = 0;
    if (!(f >> elements) || elements != mesh.element_count()) fail();
  }
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    std::getline(in, line);
    ++line_no;
    std::istringstream f(line);
    std::array<std::size_t, 8> ids{};
    for (auto& id : ids) {
      if (!(f >> id)) fail();
    }
    if (ids != mesh.connectivity(e)) {
      throw InvalidInput("mesh file line " + std::to_string(line_no) +
                         ": connectivity does not match the structured layout");
    }
  }
  mesh.quality = audit_quality(mesh);
  return mesh;
}

}  // namespace frvn
