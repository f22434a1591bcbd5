#pragma once

#include "wshrink/wavelet.hpp"

#include <string>
#include <vector>

namespace wshrink {

/// Contrast parameters of the forward-and-backward diffusivity.
/// lambda1 controls shrinkage of small coefficients, lambda2 the onset
/// of amplification. Both must be strictly positive; lambda2 >= lambda1
/// is the intended regime but is not enforced.
struct FabParams {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// Scale- and noise-adaptive parameter law lambda1 = alpha*sigma/l^2,
/// lambda2 = beta*sigma/l^2. The defaults are the trained constants.
struct GenericParams {
    double alpha = 5.4;
    double beta = 8.9;
};

enum class ShrinkRule { Fab, Generic, Soft, Hard, Garrote };

const char* rule_name(ShrinkRule rule);
ShrinkRule rule_from_name(const std::string& name);

/// Which multiplier to apply per scale, with its parameters.
///  - Fab: one FabParams per scale (per_scale.size() == level count)
///  - Generic: GenericParams plus the noise level sigma (> 0)
///  - Soft/Hard/Garrote: one threshold theta (>= 0) for all scales
struct ShrinkageSpec {
    ShrinkRule rule = ShrinkRule::Generic;
    std::vector<FabParams> per_scale;
    GenericParams generic;
    double sigma = 0.0;
    double theta = 0.0;

    static ShrinkageSpec fab(std::vector<FabParams> params);
    static ShrinkageSpec generic_rule(GenericParams p, double sigma);
    static ShrinkageSpec soft(double theta);
    static ShrinkageSpec hard(double theta);
    static ShrinkageSpec garrote(double theta);
};

/// g(s^2) = 2 exp(-s^2/lambda1^2) - exp(-s^2/lambda2^2).
/// g(0) = 1; g < 0 means the shrinkage multiplier exceeds 1, i.e.
/// coefficient amplification. Exponents below -700 flush to zero.
double fab_diffusivity(double s2, const FabParams& p);

/// Resolves the generic law at (level, sigma).
FabParams generic_lambdas(int level, double sigma, const GenericParams& p);

/// The coupled multiplier m applied to a coefficient triple with
/// activity s^2 at the given scale. Fab/Generic: m = 1 - g(s^2).
/// Classical rules with s = sqrt(s^2):
///   hard    m = 0 if s <= theta, else 1
///   soft    m = max(0, 1 - theta/s)
///   garrote m = max(0, 1 - theta^2/s^2)
double coupled_multiplier(const ShrinkageSpec& spec, int level, double s2);

/// Applies the coupled rule per scale and pixel: the common factor
/// m(wx^2 + wy^2 + 2*wxy^2) multiplies all three channels. The scaling
/// plane is copied unchanged.
WaveletPyramid apply_shrinkage(const WaveletPyramid& pyr, const ShrinkageSpec& spec);

struct FabGradient {
    double dlambda1 = 0.0;
    double dlambda2 = 0.0;
};

/// (dm/dlambda1, dm/dlambda2) for m = 1 - g(s^2).
FabGradient multiplier_param_gradient(double s2, const FabParams& p);

/// Spec file serialization. Line-based text format (see README):
///   wshrink-spec v1
///   family <fab|generic|soft|hard|garrote>
///   levels <L>
///   scale <l> <lambda1> <lambda2>   (fab, one line per scale)
///   alphabeta <alpha> <beta>        (generic)
///   sigma <value>                   (generic, optional)
///   theta <value>                   (soft|hard|garrote)
/// Lines starting with '#' are ignored. Values round-trip exactly.
void save_spec(const ShrinkageSpec& spec, int levels, const std::string& path,
               const std::vector<std::string>& comments = {});
ShrinkageSpec load_spec(const std::string& path);

} // namespace wshrink
