#pragma once

#include <random>
#include <vector>

#include "tofcover/geom.hpp"
#include "tofcover/octree.hpp"

namespace tofcover::test {

inline Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    while (true) {
        const Vec3 v(n(rng), n(rng), n(rng));
        if (v.norm2() > 1e-12) return v.normalized();
    }
}

inline Vec3 random_point(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return Vec3(u(rng), u(rng), u(rng));
}

inline RigidTransform random_transform(std::mt19937_64& rng, double max_translation = 2.0) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> t(-max_translation, max_translation);
    return RigidTransform(Mat3::axis_angle(random_unit(rng), angle(rng)),
                          Vec3(t(rng), t(rng), t(rng)));
}

/// Dense voxel-set oracle: every leaf voxel of the domain classified by
/// center membership, stored as a flat bitset. Only sane at small depths.
struct DenseVoxels {
    int n = 0;
    std::vector<bool> bits;

    static DenseVoxels from_solid(const Solid& solid, const VoxelDomain& domain) {
        DenseVoxels d;
        d.n = domain.leafs_per_edge();
        d.bits.assign(static_cast<size_t>(d.n) * d.n * d.n, false);
        const double l = domain.voxel_size();
        for (int z = 0; z < d.n; ++z)
            for (int y = 0; y < d.n; ++y)
                for (int x = 0; x < d.n; ++x) {
                    const Vec3 center = domain.origin +
                                        Vec3((x + 0.5) * l, (y + 0.5) * l, (z + 0.5) * l);
                    d.set(x, y, z, solid.contains(center));
                }
        return d;
    }

    static DenseVoxels from_octree(const Octree& tree) {
        DenseVoxels d;
        d.n = tree.domain().leafs_per_edge();
        d.bits.assign(static_cast<size_t>(d.n) * d.n * d.n, false);
        for (int z = 0; z < d.n; ++z)
            for (int y = 0; y < d.n; ++y)
                for (int x = 0; x < d.n; ++x) d.set(x, y, z, tree.occupied_at(x, y, z));
        return d;
    }

    size_t idx(int x, int y, int z) const {
        return (static_cast<size_t>(z) * n + y) * n + x;
    }
    bool get(int x, int y, int z) const { return bits[idx(x, y, z)]; }
    void set(int x, int y, int z, bool v) { bits[idx(x, y, z)] = v; }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (bool b : bits) c += b;
        return c;
    }

    DenseVoxels binary(const DenseVoxels& o, bool (*op)(bool, bool)) const {
        DenseVoxels out = *this;
        for (size_t i = 0; i < bits.size(); ++i) out.bits[i] = op(bits[i], o.bits[i]);
        return out;
    }

    bool operator==(const DenseVoxels& o) const { return n == o.n && bits == o.bits; }
};

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    auto ranks = [](const std::vector<double>& v) {
        const size_t n = v.size();
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace tofcover::test
