#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tofcover/solid.hpp"

namespace tofcover {

/// Cubic voxelization domain. Leaf voxels have edge edge_length / 2^max_depth.
struct VoxelDomain {
    Vec3 origin;          // lowest corner
    double edge_length = 1.0;
    int max_depth = 8;

    VoxelDomain() = default;
    VoxelDomain(const Vec3& origin_, double edge, int depth);

    static VoxelDomain centered(const Vec3& center, double edge, int depth) {
        return VoxelDomain(center - Vec3(edge, edge, edge) * 0.5, edge, depth);
    }

    double voxel_size() const { return edge_length / static_cast<double>(1 << max_depth); }
    int leafs_per_edge() const { return 1 << max_depth; }
    Aabb box() const {
        Aabb b;
        b.lo = origin;
        b.hi = origin + Vec3(edge_length, edge_length, edge_length);
        return b;
    }

    bool operator==(const VoxelDomain& o) const {
        return origin.x == o.origin.x && origin.y == o.origin.y && origin.z == o.origin.z &&
               edge_length == o.edge_length && max_depth == o.max_depth;
    }
};

struct VoxelizeOptions {
    /// When set, a node at depth >= max_depth-2 whose 8 corners and center
    /// all agree on membership is classified without further subdivision.
    /// Approximate; keep off for reference-quality volumes.
    bool early_out = false;
};

/// Sparse occupancy octree in canonical compressed form: no branch node has
/// eight Full or eight Empty children. Immutable after construction.
class Octree {
  public:
    static constexpr std::int32_t kEmpty = -1;
    static constexpr std::int32_t kFull = -2;

    static Octree empty(const VoxelDomain& domain) { return Octree(domain, kEmpty); }
    static Octree full(const VoxelDomain& domain) { return Octree(domain, kFull); }

    const VoxelDomain& domain() const { return domain_; }

    /// Number of occupied leaf-equivalent voxels at max_depth.
    std::uint64_t occupied_count() const;

    /// Lambda operator: occupied voxel count times voxel_size^3.
    double volume() const;

    bool is_empty() const { return root_ == kEmpty; }

    /// Occupancy of the leaf voxel at integer grid coordinates (each in
    /// [0, 2^max_depth)).
    bool occupied_at(int ix, int iy, int iz) const;

    bool operator==(const Octree& o) const;

    /// Byte layout: origin as 3 little-endian f64, edge_length f64, max_depth
    /// u8, then a depth-first pre-order stream of 2-bit node tags (00 empty,
    /// 01 full, 10 branch; children in +x,+y,+z bit order), MSB-first within
    /// each byte, zero-padded to a byte boundary.
    std::vector<std::uint8_t> serialize() const;
    static Octree deserialize(const std::vector<std::uint8_t>& bytes);

    friend Octree voxelize(const Solid& solid, const VoxelDomain& domain,
                           const VoxelizeOptions& options);
    friend Octree merge(const Octree& a, const Octree& b);
    friend Octree subtract(const Octree& a, const Octree& b);
    friend Octree intersect(const Octree& a, const Octree& b);

    /// Canonicalizing node constructor used by the builders: collapses
    /// all-Full / all-Empty child sets instead of storing a branch.
    std::int32_t add_node(const std::array<std::int32_t, 8>& children);

  private:
    explicit Octree(const VoxelDomain& domain, std::int32_t root)
        : domain_(domain), root_(root) {}

    VoxelDomain domain_;
    std::int32_t root_ = kEmpty;
    // children[i] is kEmpty, kFull, or an index into nodes_; child i occupies
    // the octant offset (i&1, i>>1&1, i>>2&1).
    std::vector<std::array<std::int32_t, 8>> nodes_;
};

/// Omega operator: octree representation of an implicit solid. A leaf voxel
/// at grid index (ix, iy, iz) is occupied iff the solid contains its center,
/// probed at exactly origin + (index + 0.5) * voxel_size per component.
/// Throws if the solid's bounding box is not enclosed by the domain.
Octree voxelize(const Solid& solid, const VoxelDomain& domain,
                const VoxelizeOptions& options = {});

/// Voxelwise boolean ops; both operands must share one domain.
Octree merge(const Octree& a, const Octree& b);
Octree subtract(const Octree& a, const Octree& b);
Octree intersect(const Octree& a, const Octree& b);

}  // namespace tofcover
