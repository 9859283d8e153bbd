#pragma once

#include <vector>

#include "tofcover/solid.hpp"

namespace tofcover {

/// Cross-sectional disc of a swept solid. inner_radius > 0 makes it an
/// annulus (tube shells decimate to outer-minus-inner discs).
struct Disc {
    Vec3 center;
    Vec3 normal;  // unit
    double radius = 0.0;
    double inner_radius = 0.0;
};

/// Decimates a Cone, Sphere, or TubeShell into discs along its natural
/// axis/curve at the given spacing, radii matching the local cross-section.
/// Throws for solids without a sweep axis.
std::vector<Disc> disc_decimate(const Solid& solid, double spacing);

/// Stack of disc slabs (each disc extruded by +-thickness/2 along its
/// normal) as an implicit solid, the alternative voxelization front-end.
/// The first and last slab are clamped to their disc plane so the stack does
/// not overshoot the decimated solid's ends.
SolidPtr make_disc_stack(std::vector<Disc> discs, double thickness);

}  // namespace tofcover
