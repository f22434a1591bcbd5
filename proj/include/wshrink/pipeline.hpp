#pragma once

#include "wshrink/shrinkage.hpp"

namespace wshrink {

/// One denoising job: input image, multiplier spec, scale count.
struct DenoiseRequest {
    Image input;
    ShrinkageSpec spec;
    int levels = 0;
};

/// u = synthesize(apply_shrinkage(analyze(f, L), spec)). The output has
/// the input's dimensions and is not clamped.
Image denoise(const DenoiseRequest& req);
Image denoise(const Image& input, const ShrinkageSpec& spec, int levels);

} // namespace wshrink
