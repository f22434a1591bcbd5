#include "wshrink/pipeline.hpp"

#include "wshrink/errors.hpp"

namespace wshrink {

Image denoise(const Image& input, const ShrinkageSpec& spec, int levels) {
    if (spec.rule == ShrinkRule::Fab && static_cast<int>(spec.per_scale.size()) != levels)
        throw ValidationError("denoise: fab spec scale count does not match levels");
    return synthesize(apply_shrinkage(analyze(input, levels), spec));
}

Image denoise(const DenoiseRequest& req) {
    return denoise(req.input, req.spec, req.levels);
}

} // namespace wshrink
