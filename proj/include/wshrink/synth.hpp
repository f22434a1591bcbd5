#pragma once

#include "wshrink/imaging.hpp"

#include <cstdint>
#include <vector>

namespace wshrink {

/// Occlusion-model scene generator ("dead leaves"): rotated ellipses
/// and rectangles with a power-law size distribution painted
/// back-to-front over a smooth background, each with a linear shading
/// ramp, edges antialiased by 2x2 supersampling. Produces grey values
/// in [0, 255] with scale statistics close to natural images; used for
/// desk-scale experiments when no photographic dataset is at hand.
struct SceneOptions {
    int width = 128;
    int height = 128;
    double min_radius = 4.0;
    double max_radius = 0.0;   // 0 = min(width, height) / 2
    double size_power = 2.6;   // p(r) ~ r^-size_power
    double overdraw = 12.0;    // expected coverage multiple
    double shading = 30.0;     // max ramp magnitude per object
    double background_amp = 18.0;
    double texture_amp = 6.0;  // low-contrast oscillation inside objects
    int blur_passes = 0;       // binomial smoothing passes (lens softness)
};

Image dead_leaves(std::uint64_t seed, const SceneOptions& opts = {});

/// count scenes with seeds derived from the base seed.
std::vector<Image> dead_leaves_set(int count, std::uint64_t seed,
                                   const SceneOptions& opts = {});

} // namespace wshrink
