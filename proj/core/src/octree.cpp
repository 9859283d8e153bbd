#include "tofcover/octree.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace tofcover {

VoxelDomain::VoxelDomain(const Vec3& origin_, double edge, int depth)
    : origin(origin_), edge_length(edge), max_depth(depth) {
    if (!(edge > 0.0)) throw std::invalid_argument("VoxelDomain: edge_length must be positive");
    if (depth < 1 || depth > 12)
        throw std::invalid_argument("VoxelDomain: max_depth outside [1, 12]");
}

std::int32_t Octree::add_node(const std::array<std::int32_t, 8>& children) {
    bool all_full = true, all_empty = true;
    for (std::int32_t c : children) {
        all_full &= (c == kFull);
        all_empty &= (c == kEmpty);
    }
    if (all_full) return kFull;
    if (all_empty) return kEmpty;
    nodes_.push_back(children);
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

namespace {

int leafs_per_edge_of(const VoxelDomain& d) { return 1 << d.max_depth; }

std::uint64_t count_rec(const std::vector<std::array<std::int32_t, 8>>& nodes, std::int32_t code,
                        int depth, int max_depth) {
    if (code == Octree::kEmpty) return 0;
    if (code == Octree::kFull) return 1ull << (3 * (max_depth - depth));
    std::uint64_t sum = 0;
    for (std::int32_t c : nodes[static_cast<size_t>(code)])
        sum += count_rec(nodes, c, depth + 1, max_depth);
    return sum;
}

}  // namespace

std::uint64_t Octree::occupied_count() const {
    return count_rec(nodes_, root_, 0, domain_.max_depth);
}

double Octree::volume() const {
    const double l = domain_.voxel_size();
    return static_cast<double>(occupied_count()) * l * l * l;
}

bool Octree::occupied_at(int ix, int iy, int iz) const {
    const int n = leafs_per_edge_of(domain_);
    if (ix < 0 || iy < 0 || iz < 0 || ix >= n || iy >= n || iz >= n)
        throw std::out_of_range("occupied_at: voxel index outside domain");
    std::int32_t code = root_;
    for (int d = 0; d < domain_.max_depth; ++d) {
        if (code == kEmpty) return false;
        if (code == kFull) return true;
        const int shift = domain_.max_depth - 1 - d;
        const int child = ((ix >> shift) & 1) | (((iy >> shift) & 1) << 1) |
                          (((iz >> shift) & 1) << 2);
        code = nodes_[static_cast<size_t>(code)][static_cast<size_t>(child)];
    }
    return code == kFull;
}

namespace {

bool equal_rec(std::int32_t ca, const std::vector<std::array<std::int32_t, 8>>& na,
               std::int32_t cb, const std::vector<std::array<std::int32_t, 8>>& nb) {
    if (ca < 0 || cb < 0) return ca == cb;
    const auto& childa = na[static_cast<size_t>(ca)];
    const auto& childb = nb[static_cast<size_t>(cb)];
    for (int i = 0; i < 8; ++i)
        if (!equal_rec(childa[static_cast<size_t>(i)], na, childb[static_cast<size_t>(i)], nb))
            return false;
    return true;
}

}  // namespace

bool Octree::operator==(const Octree& o) const {
    if (!(domain_ == o.domain_)) return false;
    return equal_rec(root_, nodes_, o.root_, o.nodes_);
}

// ---------------------------------------------------------------------------
// Voxelization
// ---------------------------------------------------------------------------

namespace {

struct LeafSolid {
    const Solid* solid;
    Aabb box;
    bool convex;
};

struct Voxelizer {
    const VoxelDomain& domain;
    const VoxelizeOptions& options;
    std::vector<LeafSolid> leaves;
    Octree* tree;
    double leaf_size = 0.0;

    bool any_contains(const Vec3& p, const std::vector<int>& active) const {
        for (int i : active)
            if (leaves[static_cast<size_t>(i)].box.contains(p) &&
                leaves[static_cast<size_t>(i)].solid->contains(p))
                return true;
        return false;
    }

    // Cell geometry comes from integer leaf coordinates so probe points are
    // reproducible: a node at depth d covers leaf cells [ix, ix+w) etc. with
    // w = 2^(max_depth-d), and every coordinate is origin + index * leaf_size
    // in a single rounding.
    Vec3 leaf_corner(std::int64_t ix, std::int64_t iy, std::int64_t iz) const {
        return Vec3(domain.origin.x + static_cast<double>(ix) * leaf_size,
                    domain.origin.y + static_cast<double>(iy) * leaf_size,
                    domain.origin.z + static_cast<double>(iz) * leaf_size);
    }
    Vec3 leaf_center(std::int64_t ix, std::int64_t iy, std::int64_t iz) const {
        return Vec3(domain.origin.x + (static_cast<double>(ix) + 0.5) * leaf_size,
                    domain.origin.y + (static_cast<double>(iy) + 0.5) * leaf_size,
                    domain.origin.z + (static_cast<double>(iz) + 0.5) * leaf_size);
    }

    std::int32_t run(std::int64_t ix, std::int64_t iy, std::int64_t iz, int depth,
                     const std::vector<int>& parent_active);
};

std::int32_t Voxelizer::run(std::int64_t ix, std::int64_t iy, std::int64_t iz, int depth,
                            const std::vector<int>& parent_active) {
    const std::int64_t width = std::int64_t{1} << (domain.max_depth - depth);
    Aabb cell;
    cell.lo = leaf_corner(ix, iy, iz);
    cell.hi = leaf_corner(ix + width, iy + width, iz + width);

    std::vector<int> active;
    active.reserve(parent_active.size());
    for (int i : parent_active)
        if (leaves[static_cast<size_t>(i)].box.intersects(cell)) active.push_back(i);
    if (active.empty()) return Octree::kEmpty;

    if (depth == domain.max_depth)
        return any_contains(leaf_center(ix, iy, iz), active) ? Octree::kFull : Octree::kEmpty;

    auto corner = [&](int c) {
        return leaf_corner(ix + ((c & 1) ? width : 0), iy + ((c & 2) ? width : 0),
                           iz + ((c & 4) ? width : 0));
    };

    // Exact shortcut: a convex member containing all 8 corners contains the
    // whole cell, hence every leaf center below it.
    for (int i : active) {
        const LeafSolid& ls = leaves[static_cast<size_t>(i)];
        if (!ls.convex || !ls.box.contains(cell)) continue;
        bool all = true;
        for (int c = 0; c < 8 && all; ++c) all = ls.solid->contains(corner(c));
        if (all) return Octree::kFull;
    }

    if (options.early_out && depth >= domain.max_depth - 2) {
        const bool first = any_contains(corner(0), active);
        bool agree = true;
        for (int c = 1; c < 8 && agree; ++c) agree = (any_contains(corner(c), active) == first);
        if (agree) {
            const std::int64_t h = width / 2;
            agree = (any_contains(leaf_corner(ix + h, iy + h, iz + h), active) == first);
        }
        if (agree) return first ? Octree::kFull : Octree::kEmpty;
    }

    const std::int64_t h = width / 2;
    std::array<std::int32_t, 8> children;
    for (int c = 0; c < 8; ++c) {
        children[static_cast<size_t>(c)] =
            run(ix + ((c & 1) ? h : 0), iy + ((c & 2) ? h : 0), iz + ((c & 4) ? h : 0),
                depth + 1, active);
    }
    return tree->add_node(children);
}

}  // namespace

Octree voxelize(const Solid& solid, const VoxelDomain& domain, const VoxelizeOptions& options) {
    if (!domain.box().contains(solid.bounding_box()))
        throw std::invalid_argument("voxelize: solid bounding box exceeds domain");

    Octree tree = Octree::empty(domain);
    Voxelizer vox{domain, options, {}, &tree, domain.voxel_size()};

    std::vector<const Solid*> flat;
    solid.collect_leaves(flat);
    vox.leaves.reserve(flat.size());
    std::vector<int> all;
    for (const Solid* s : flat) {
        vox.leaves.push_back({s, s->bounding_box(), s->is_convex()});
        all.push_back(static_cast<int>(vox.leaves.size()) - 1);
    }

    tree.root_ = vox.run(0, 0, 0, 0, all);
    return tree;
}

// ---------------------------------------------------------------------------
// Boolean operations
// ---------------------------------------------------------------------------

namespace {

using NodeVec = std::vector<std::array<std::int32_t, 8>>;

enum class BoolOp { Merge, Subtract, Intersect };

struct BoolCombiner {
    const NodeVec& na;
    const NodeVec& nb;
    Octree& out;
    BoolOp op;

    std::int32_t copy_from(const NodeVec& src, std::int32_t code);
    std::int32_t complement_from(const NodeVec& src, std::int32_t code);
    std::int32_t combine(std::int32_t a, std::int32_t b);
};

std::int32_t BoolCombiner::copy_from(const NodeVec& src, std::int32_t code) {
    if (code < 0) return code;
    std::array<std::int32_t, 8> children;
    const auto& c = src[static_cast<size_t>(code)];
    for (int i = 0; i < 8; ++i) children[static_cast<size_t>(i)] = copy_from(src, c[static_cast<size_t>(i)]);
    return out.add_node(children);
}

std::int32_t BoolCombiner::complement_from(const NodeVec& src, std::int32_t code) {
    if (code == Octree::kEmpty) return Octree::kFull;
    if (code == Octree::kFull) return Octree::kEmpty;
    std::array<std::int32_t, 8> children;
    const auto& c = src[static_cast<size_t>(code)];
    for (int i = 0; i < 8; ++i)
        children[static_cast<size_t>(i)] = complement_from(src, c[static_cast<size_t>(i)]);
    return out.add_node(children);
}

std::int32_t BoolCombiner::combine(std::int32_t a, std::int32_t b) {
    switch (op) {
        case BoolOp::Merge:
            if (a == Octree::kFull || b == Octree::kFull) return Octree::kFull;
            if (a == Octree::kEmpty) return copy_from(nb, b);
            if (b == Octree::kEmpty) return copy_from(na, a);
            break;
        case BoolOp::Subtract:
            if (a == Octree::kEmpty || b == Octree::kFull) return Octree::kEmpty;
            if (b == Octree::kEmpty) return copy_from(na, a);
            if (a == Octree::kFull) return complement_from(nb, b);
            break;
        case BoolOp::Intersect:
            if (a == Octree::kEmpty || b == Octree::kEmpty) return Octree::kEmpty;
            if (a == Octree::kFull) return copy_from(nb, b);
            if (b == Octree::kFull) return copy_from(na, a);
            break;
    }
    const auto& ca = na[static_cast<size_t>(a)];
    const auto& cb = nb[static_cast<size_t>(b)];
    std::array<std::int32_t, 8> children;
    for (int i = 0; i < 8; ++i)
        children[static_cast<size_t>(i)] =
            combine(ca[static_cast<size_t>(i)], cb[static_cast<size_t>(i)]);
    return out.add_node(children);
}

}  // namespace

Octree merge(const Octree& a, const Octree& b) {
    if (!(a.domain_ == b.domain_))
        throw std::invalid_argument("merge: octree domain mismatch");
    Octree out = Octree::empty(a.domain_);
    BoolCombiner c{a.nodes_, b.nodes_, out, BoolOp::Merge};
    out.root_ = c.combine(a.root_, b.root_);
    return out;
}

Octree subtract(const Octree& a, const Octree& b) {
    if (!(a.domain_ == b.domain_))
        throw std::invalid_argument("subtract: octree domain mismatch");
    Octree out = Octree::empty(a.domain_);
    BoolCombiner c{a.nodes_, b.nodes_, out, BoolOp::Subtract};
    out.root_ = c.combine(a.root_, b.root_);
    return out;
}

Octree intersect(const Octree& a, const Octree& b) {
    if (!(a.domain_ == b.domain_))
        throw std::invalid_argument("intersect: octree domain mismatch");
    Octree out = Octree::empty(a.domain_);
    BoolCombiner c{a.nodes_, b.nodes_, out, BoolOp::Intersect};
    out.root_ = c.combine(a.root_, b.root_);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

void put_f64_le(std::vector<std::uint8_t>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

double get_f64_le(const std::vector<std::uint8_t>& in, size_t& pos) {
    if (pos + 8 > in.size()) throw std::invalid_argument("octree bytes: truncated header");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in[pos + static_cast<size_t>(i)]) << (8 * i);
    pos += 8;
    return std::bit_cast<double>(bits);
}

struct BitWriter {
    std::vector<std::uint8_t>& out;
    std::uint8_t current = 0;
    int used = 0;
    void put2(std::uint8_t tag) {
        current = static_cast<std::uint8_t>(current | ((tag & 0x3u) << (6 - used)));
        used += 2;
        if (used == 8) {
            out.push_back(current);
            current = 0;
            used = 0;
        }
    }
    void finish() {
        if (used > 0) out.push_back(current);
    }
};

struct BitReader {
    const std::vector<std::uint8_t>& in;
    size_t pos;
    int used = 0;
    std::uint8_t get2() {
        if (pos >= in.size()) throw std::invalid_argument("octree bytes: truncated node stream");
        const std::uint8_t tag = static_cast<std::uint8_t>((in[pos] >> (6 - used)) & 0x3u);
        used += 2;
        if (used == 8) {
            ++pos;
            used = 0;
        }
        return tag;
    }
};

constexpr std::uint8_t kTagEmpty = 0;
constexpr std::uint8_t kTagFull = 1;
constexpr std::uint8_t kTagBranch = 2;

void write_rec(const NodeVec& nodes, std::int32_t code, BitWriter& bw) {
    if (code == Octree::kEmpty) {
        bw.put2(kTagEmpty);
        return;
    }
    if (code == Octree::kFull) {
        bw.put2(kTagFull);
        return;
    }
    bw.put2(kTagBranch);
    for (std::int32_t c : nodes[static_cast<size_t>(code)]) write_rec(nodes, c, bw);
}

}  // namespace

std::vector<std::uint8_t> Octree::serialize() const {
    std::vector<std::uint8_t> out;
    put_f64_le(out, domain_.origin.x);
    put_f64_le(out, domain_.origin.y);
    put_f64_le(out, domain_.origin.z);
    put_f64_le(out, domain_.edge_length);
    out.push_back(static_cast<std::uint8_t>(domain_.max_depth));
    BitWriter bw{out};
    write_rec(nodes_, root_, bw);
    bw.finish();
    return out;
}

Octree Octree::deserialize(const std::vector<std::uint8_t>& bytes) {
    size_t pos = 0;
    const double ox = get_f64_le(bytes, pos);
    const double oy = get_f64_le(bytes, pos);
    const double oz = get_f64_le(bytes, pos);
    const double edge = get_f64_le(bytes, pos);
    if (pos >= bytes.size()) throw std::invalid_argument("octree bytes: truncated header");
    const int depth = bytes[pos++];
    Octree tree = Octree::empty(VoxelDomain(Vec3(ox, oy, oz), edge, depth));

    BitReader br{bytes, pos};
    // Recursive descent over the tag stream.
    struct Reader {
        Octree& tree;
        BitReader& br;
        int max_depth;
        std::int32_t node(int depth) {
            const std::uint8_t tag = br.get2();
            if (tag == kTagEmpty) return kEmpty;
            if (tag == kTagFull) return kFull;
            if (tag != kTagBranch) throw std::invalid_argument("octree bytes: invalid node tag");
            if (depth >= max_depth)
                throw std::invalid_argument("octree bytes: branch below max_depth");
            std::array<std::int32_t, 8> children;
            for (int i = 0; i < 8; ++i) children[static_cast<size_t>(i)] = node(depth + 1);
            return tree.add_node(children);
        }
    } reader{tree, br, depth};
    tree.root_ = reader.node(0);
    return tree;
}

}  // namespace tofcover
