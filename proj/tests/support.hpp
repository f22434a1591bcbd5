#pragma once

#include "wshrink/imaging.hpp"
#include "wshrink/rng.hpp"
#include "wshrink/wavelet.hpp"

#include <cmath>
#include <functional>
#include <vector>

// Test-only reference implementations. Deliberately written as direct
// double loops, independent of the library's separable/cascaded code
// paths, so they can serve as oracles.
namespace testsupport {

inline wshrink::Image random_image(int w, int h, std::uint64_t seed, double lo = 0.0,
                                   double hi = 255.0) {
    wshrink::Image img(w, h);
    wshrink::Rng rng(seed);
    for (double& v : img.pixels) v = rng.next_in(lo, hi);
    return img;
}

inline wshrink::Image random_integer_image(int w, int h, std::uint64_t seed) {
    wshrink::Image img(w, h);
    wshrink::Rng rng(seed);
    for (double& v : img.pixels) v = static_cast<double>(rng.next_below(256));
    return img;
}

inline int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

// One analysis level by direct periodic 2D filtering (no separable pass
// reuse): returns {approx, wx, wy, wxy} for hole distance d.
struct LevelPlanes {
    wshrink::Image approx, wx, wy, wxy;
};

inline LevelPlanes haar_level_oracle(const wshrink::Image& a, int d) {
    const int w = a.width, h = a.height;
    LevelPlanes out{wshrink::Image(w, h), wshrink::Image(w, h), wshrink::Image(w, h),
                    wshrink::Image(w, h)};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double p00 = a.at(x, y);
            const double p10 = a.at(wrap(x + d, w), y);
            const double p01 = a.at(x, wrap(y + d, h));
            const double p11 = a.at(wrap(x + d, w), wrap(y + d, h));
            out.approx.at(x, y) = 0.25 * (p00 + p10 + p01 + p11);
            out.wx.at(x, y) = 0.25 * ((p00 - p10) + (p01 - p11));
            out.wy.at(x, y) = 0.25 * ((p00 + p10) - (p01 + p11));
            out.wxy.at(x, y) = 0.25 * ((p00 - p10) - (p01 - p11));
        }
    return out;
}

// The lowpass branch of the analysis/averaged-synthesis round trip:
// iterate the 4-tap mean down to level L, then the synthesis-side
// smoothing (backward offsets) back up. This is what the pipeline
// produces when every detail coefficient is zeroed.
inline wshrink::Image lowpass_roundtrip_oracle(const wshrink::Image& img, int levels) {
    const int w = img.width, h = img.height;
    wshrink::Image a = img;
    for (int l = 1; l <= levels; ++l) {
        const int d = 1 << (l - 1);
        a = haar_level_oracle(a, d).approx;
    }
    for (int l = levels; l >= 1; --l) {
        const int d = 1 << (l - 1);
        wshrink::Image next(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                next.at(x, y) = 0.25 * (a.at(x, y) + a.at(wrap(x - d, w), y) +
                                        a.at(x, wrap(y - d, h)) +
                                        a.at(wrap(x - d, w), wrap(y - d, h)));
        a = next;
    }
    return a;
}

inline wshrink::Image shift_image(const wshrink::Image& img, int dx, int dy) {
    wshrink::Image out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at(wrap(x + dx, img.width), wrap(y + dy, img.height)) = img.at(x, y);
    return out;
}

// Central finite difference of a scalar function, relative step per
// coordinate.
inline std::vector<double> central_fd(const std::function<double(const std::vector<double>&)>& f,
                                      std::vector<double> x, double rel_step) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(std::abs(x[i]), 1e-8);
        const double orig = x[i];
        x[i] = orig + h;
        const double fp = f(x);
        x[i] = orig - h;
        const double fm = f(x);
        x[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

inline double rel_err(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    if (denom < 1e-12) return 0.0; // both effectively zero
    return std::abs(a - b) / denom;
}

} // namespace testsupport
