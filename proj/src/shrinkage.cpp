#include "wshrink/shrinkage.hpp"

#include "wshrink/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wshrink {

namespace {

// Flush exponents below -700 to zero: the true value is < 1e-304 and
// subnormal arithmetic is slow.
inline double fab_exp(double arg) {
    return arg < -700.0 ? 0.0 : std::exp(arg);
}

void check_fab(const FabParams& p) {
    if (!(p.lambda1 > 0.0) || !(p.lambda2 > 0.0) || !std::isfinite(p.lambda1) ||
        !std::isfinite(p.lambda2))
        throw ValidationError("fab params: lambda1 and lambda2 must be positive and finite");
}

inline double classical_multiplier(ShrinkRule rule, double theta, double s2) {
    const double s = std::sqrt(s2);
    switch (rule) {
    case ShrinkRule::Hard:
        return s <= theta ? 0.0 : 1.0;
    case ShrinkRule::Soft:
        if (s == 0.0) return theta == 0.0 ? 1.0 : 0.0;
        return std::max(0.0, 1.0 - theta / s);
    case ShrinkRule::Garrote:
        if (s2 == 0.0) return theta == 0.0 ? 1.0 : 0.0;
        return std::max(0.0, 1.0 - theta * theta / s2);
    default:
        throw ValidationError("classical_multiplier: not a classical rule");
    }
}

} // namespace

const char* rule_name(ShrinkRule rule) {
    switch (rule) {
    case ShrinkRule::Fab: return "fab";
    case ShrinkRule::Generic: return "generic";
    case ShrinkRule::Soft: return "soft";
    case ShrinkRule::Hard: return "hard";
    case ShrinkRule::Garrote: return "garrote";
    }
    return "?";
}

ShrinkRule rule_from_name(const std::string& name) {
    if (name == "fab") return ShrinkRule::Fab;
    if (name == "generic") return ShrinkRule::Generic;
    if (name == "soft") return ShrinkRule::Soft;
    if (name == "hard") return ShrinkRule::Hard;
    if (name == "garrote") return ShrinkRule::Garrote;
    throw ValidationError("unknown shrinkage rule: " + name);
}

ShrinkageSpec ShrinkageSpec::fab(std::vector<FabParams> params) {
    if (params.empty()) throw ValidationError("fab spec: needs at least one scale");
    for (const auto& p : params) check_fab(p);
    ShrinkageSpec s;
    s.rule = ShrinkRule::Fab;
    s.per_scale = std::move(params);
    return s;
}

ShrinkageSpec ShrinkageSpec::generic_rule(GenericParams p, double sigma) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        throw ValidationError("generic spec: alpha and beta must be positive");
    ShrinkageSpec s;
    s.rule = ShrinkRule::Generic;
    s.generic = p;
    s.sigma = sigma;
    return s;
}

namespace {
ShrinkageSpec classical_spec(ShrinkRule rule, double theta) {
    if (theta < 0.0) throw ValidationError("threshold theta must be >= 0");
    ShrinkageSpec s;
    s.rule = rule;
    s.theta = theta;
    return s;
}
} // namespace

ShrinkageSpec ShrinkageSpec::soft(double theta) { return classical_spec(ShrinkRule::Soft, theta); }
ShrinkageSpec ShrinkageSpec::hard(double theta) { return classical_spec(ShrinkRule::Hard, theta); }
ShrinkageSpec ShrinkageSpec::garrote(double theta) { return classical_spec(ShrinkRule::Garrote, theta); }

double fab_diffusivity(double s2, const FabParams& p) {
    check_fab(p);
    return 2.0 * fab_exp(-s2 / (p.lambda1 * p.lambda1)) - fab_exp(-s2 / (p.lambda2 * p.lambda2));
}

FabParams generic_lambdas(int level, double sigma, const GenericParams& p) {
    if (level < 1) throw ValidationError("generic_lambdas: level must be >= 1");
    if (!(sigma > 0.0)) throw ValidationError("generic_lambdas: sigma must be > 0");
    const double scale = sigma / (static_cast<double>(level) * static_cast<double>(level));
    return {p.alpha * scale, p.beta * scale};
}

double coupled_multiplier(const ShrinkageSpec& spec, int level, double s2) {
    switch (spec.rule) {
    case ShrinkRule::Fab: {
        if (level < 1 || level > static_cast<int>(spec.per_scale.size()))
            throw ValidationError("coupled_multiplier: level out of range for fab spec");
        return 1.0 - fab_diffusivity(s2, spec.per_scale[static_cast<std::size_t>(level - 1)]);
    }
    case ShrinkRule::Generic:
        return 1.0 - fab_diffusivity(s2, generic_lambdas(level, spec.sigma, spec.generic));
    default:
        return classical_multiplier(spec.rule, spec.theta, s2);
    }
}

WaveletPyramid apply_shrinkage(const WaveletPyramid& pyr, const ShrinkageSpec& spec) {
    if (spec.rule == ShrinkRule::Fab &&
        static_cast<int>(spec.per_scale.size()) != pyr.levels())
        throw ValidationError("apply_shrinkage: fab spec has " +
                              std::to_string(spec.per_scale.size()) + " scales, pyramid has " +
                              std::to_string(pyr.levels()));
    if (spec.rule == ShrinkRule::Generic && !(spec.sigma > 0.0))
        throw ValidationError("apply_shrinkage: generic rule requires sigma > 0");

    WaveletPyramid out;
    out.width = pyr.width;
    out.height = pyr.height;
    out.scaling = pyr.scaling; // scaling coefficients stay untouched
    out.detail.resize(pyr.detail.size());

    for (int level = 1; level <= pyr.levels(); ++level) {
        const DetailPlanes& src = pyr.detail[static_cast<std::size_t>(level - 1)];
        DetailPlanes& dst = out.detail[static_cast<std::size_t>(level - 1)];
        dst.x = Image(pyr.width, pyr.height);
        dst.y = Image(pyr.width, pyr.height);
        dst.xy = Image(pyr.width, pyr.height);
        for (std::size_t i = 0; i < src.x.size(); ++i) {
            const double wx = src.x.pixels[i];
            const double wy = src.y.pixels[i];
            const double wxy = src.xy.pixels[i];
            const double s2 = wx * wx + wy * wy + 2.0 * wxy * wxy;
            const double m = coupled_multiplier(spec, level, s2);
            dst.x.pixels[i] = m * wx;
            dst.y.pixels[i] = m * wy;
            dst.xy.pixels[i] = m * wxy;
        }
    }
    return out;
}

FabGradient multiplier_param_gradient(double s2, const FabParams& p) {
    check_fab(p);
    if (s2 == 0.0) return {0.0, 0.0};
    FabGradient g;
    const double e1 = fab_exp(-s2 / (p.lambda1 * p.lambda1));
    const double e2 = fab_exp(-s2 / (p.lambda2 * p.lambda2));
    // m = 1 - 2 e1 + e2; d e1/d lambda1 = e1 * 2 s2 / lambda1^3.
    g.dlambda1 = e1 == 0.0 ? 0.0 : -4.0 * s2 * e1 / (p.lambda1 * p.lambda1 * p.lambda1);
    g.dlambda2 = e2 == 0.0 ? 0.0 : 2.0 * s2 * e2 / (p.lambda2 * p.lambda2 * p.lambda2);
    return g;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void save_spec(const ShrinkageSpec& spec, int levels, const std::string& path,
               const std::vector<std::string>& comments) {
    if (levels < 1) throw ValidationError("save_spec: levels must be >= 1");
    if (spec.rule == ShrinkRule::Fab && static_cast<int>(spec.per_scale.size()) != levels)
        throw ValidationError("save_spec: fab scale count does not match levels");

    std::ostringstream out;
    out << "wshrink-spec v1\n";
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "family " << rule_name(spec.rule) << "\n";
    out << "levels " << levels << "\n";
    switch (spec.rule) {
    case ShrinkRule::Fab:
        for (int l = 1; l <= levels; ++l) {
            const FabParams& p = spec.per_scale[static_cast<std::size_t>(l - 1)];
            out << "scale " << l << " " << fmt_double(p.lambda1) << " " << fmt_double(p.lambda2)
                << "\n";
        }
        break;
    case ShrinkRule::Generic:
        out << "alphabeta " << fmt_double(spec.generic.alpha) << " " << fmt_double(spec.generic.beta)
            << "\n";
        if (spec.sigma > 0.0) out << "sigma " << fmt_double(spec.sigma) << "\n";
        break;
    default:
        out << "theta " << fmt_double(spec.theta) << "\n";
        break;
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw IoError("cannot write spec file: " + path);
        f << out.str();
        if (!f) throw IoError("write failed: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot replace spec file: " + path + ": " + ec.message());
}

ShrinkageSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file: " + path);

    std::string line;
    if (!std::getline(in, line) || line != "wshrink-spec v1")
        throw FormatError("not a wshrink spec file (bad header): " + path);

    ShrinkageSpec spec;
    bool have_family = false;
    int levels = 0;
    std::vector<FabParams> scales;
    std::vector<bool> seen;

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "family") {
            std::string name;
            ls >> name;
            spec.rule = rule_from_name(name);
            have_family = true;
        } else if (key == "levels") {
            ls >> levels;
            if (!ls || levels < 1) throw FormatError("spec file: bad levels line: " + path);
            scales.assign(static_cast<std::size_t>(levels), FabParams{});
            seen.assign(static_cast<std::size_t>(levels), false);
        } else if (key == "scale") {
            int l = 0;
            FabParams p;
            ls >> l >> p.lambda1 >> p.lambda2;
            if (!ls || l < 1 || l > levels)
                throw FormatError("spec file: bad scale line: " + path);
            scales[static_cast<std::size_t>(l - 1)] = p;
            seen[static_cast<std::size_t>(l - 1)] = true;
        } else if (key == "alphabeta") {
            ls >> spec.generic.alpha >> spec.generic.beta;
            if (!ls) throw FormatError("spec file: bad alphabeta line: " + path);
        } else if (key == "sigma") {
            ls >> spec.sigma;
            if (!ls) throw FormatError("spec file: bad sigma line: " + path);
        } else if (key == "theta") {
            ls >> spec.theta;
            if (!ls || spec.theta < 0.0) throw FormatError("spec file: bad theta line: " + path);
        } else {
            throw FormatError("spec file: unknown directive '" + key + "': " + path);
        }
    }
    if (!have_family) throw FormatError("spec file: missing family line: " + path);
    if (spec.rule == ShrinkRule::Fab) {
        if (levels < 1) throw FormatError("spec file: fab family requires levels: " + path);
        for (bool s : seen)
            if (!s) throw FormatError("spec file: missing scale line: " + path);
        for (const auto& p : scales) check_fab(p);
        spec.per_scale = std::move(scales);
    }
    return spec;
}

} // namespace wshrink
