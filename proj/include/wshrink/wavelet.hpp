#pragma once

#include "wshrink/imaging.hpp"

#include <string>
#include <vector>

namespace wshrink {

/// Directional detail planes of one scale: variation along x, along y,
/// and diagonal. All planes are full resolution (non-decimated).
struct DetailPlanes {
    Image x;
    Image y;
    Image xy;
};

/// Non-decimating 2D Haar pyramid: per-scale detail triples at full
/// resolution plus the coarse scaling plane. detail[l - 1] holds
/// scale l, scale 1 being the finest.
struct WaveletPyramid {
    int width = 0;
    int height = 0;
    std::vector<DetailPlanes> detail;
    Image scaling;

    int levels() const { return static_cast<int>(detail.size()); }
};

/// A trous analysis with periodic indexing. At scale l the pair
/// operators use hole distance d = 2^(l-1):
///
///   low[i]  = (a[i] + a[i+d]) / 2
///   high[i] = (a[i] - a[i+d]) / 2
///
/// applied separably in x and y. The (1/2, 1/2) normalization keeps
/// every coefficient plane in the grey-value range, so contrast
/// parameters are comparable across scales. Warns on stderr when
/// 2^(levels-1) reaches the smaller image dimension.
WaveletPyramid analyze(const Image& img, int levels);

/// Inverse transform. Each scale is undone by averaging the two
/// shift-consistent local inversions per axis,
///
///   a[i] = ((low[i] + high[i]) + (low[i-d] - high[i-d])) / 2,
///
/// which reconstructs analyze() output exactly and realizes cycle
/// spinning for modified coefficients.
Image synthesize(const WaveletPyramid& pyr);

/// Default scale count for a given image: min(8, floor(log2(min(w, h)))).
int default_levels(int width, int height);

/// Debug dump: one PGM per plane (affinely rescaled to [0, 255]) plus a
/// manifest.txt with plane name, level and the pre-rescale min/max.
void dump_pyramid(const WaveletPyramid& pyr, const std::string& dir);

} // namespace wshrink
