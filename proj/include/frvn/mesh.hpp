#ifndef FRVN_MESH_HPP_
#define FRVN_MESH_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace frvn {

using Point3 = std::array<double, 3>;

/// Hexahedron corners in VTK order: 0-3 the bottom face counter-clockwise
/// seen from above, 4-7 the top face above them.
using HexCorners = std::array<Point3, 8>;

/// Volume as the sum of six tetrahedra sharing the 0-6 diagonal. Positive for
/// a correctly oriented element.
double hex_volume(const HexCorners& corners);

/// Surface area with every (possibly warped) face split into two triangles
/// along its shorter diagonal.
double hex_surface_area(const HexCorners& corners);

/// q = 6 sqrt(pi) V / S^1.5; sqrt(pi/6) for a cube. Throws InvalidInput for
/// a non-positive volume.
double shape_factor(const HexCorners& corners);

struct JitteredMesh {
  std::array<int, 3> dims{1, 1, 1};       // elements per direction
  std::array<double, 3> extent{1.0, 1.0, 1.0};
  double jitter_factor = 0.0;
  std::uint64_t seed = 0;
  std::vector<Point3> nodes;              // (nx+1)(ny+1)(nz+1), x fastest
  std::vector<double> quality;            // q per element, x fastest

  std::size_t node_index(int i, int j, int k) const;
  std::size_t element_count() const;
  std::array<std::size_t, 8> connectivity(std::size_t element) const;
  HexCorners element(std::size_t element) const;
  double mean_quality() const;
};

/// Uniform grid whose interior corner nodes are each moved by independent
/// offsets uniform in (-jf h / 2, jf h / 2) per coordinate, h the uniform
/// spacing in that direction. The offsets come from std::mt19937_64 seeded
/// with `seed`, drawn node by node (x fastest) and x, y, z within a node.
/// Throws InvalidInput for jf outside [0, 1) or fewer than 2 elements in a
/// direction and NumericalError naming the first inverted element.
JitteredMesh generate_jittered_mesh(std::array<int, 3> dims, std::array<double, 3> extent,
                                    double jitter_factor, std::uint64_t seed,
                                    int threads = 1);

/// Recomputes the per-element quality, split across `threads` workers.
std::vector<double> audit_quality(const JitteredMesh& mesh, int threads = 1);

/// Plain-text format:
///
///   frvn-mesh 1
///   dims <nx> <ny> <nz>
///   extent <lx> <ly> <lz>
///   jitter <jf>
///   seed <seed>
///   nodes <count>
///   <x> <y> <z>            (one line per node)
///   elements <count>
///   <n0> ... <n7>          (one line per element, VTK corner order)
///
/// Reals are written with 17 significant digits, so a read restores every
/// bit.
void write_mesh(std::ostream& out, const JitteredMesh& mesh);
JitteredMesh read_mesh(std::istream& in);

}  // namespace frvn

#endif  // FRVN_MESH_HPP_
