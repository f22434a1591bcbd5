#include "wshrink/synth.hpp"

#include "wshrink/errors.hpp"
#include "wshrink/rng.hpp"

#include <algorithm>
#include <cmath>

namespace wshrink {

namespace {

struct Shape {
    bool rectangle = false;
    double cx = 0, cy = 0;
    double a = 1, b = 1;     // semi-axes
    double cos_t = 1, sin_t = 0;
    double value = 128;      // base grey
    double gx = 0, gy = 0;   // shading gradient per pixel
    double tex_amp = 0;      // micro-texture
    double tfx = 0, tfy = 0, tphase = 0;
};

// 1 inside, 0 outside, in the shape's rotated frame.
inline bool inside(const Shape& s, double px, double py) {
    const double dx = px - s.cx, dy = py - s.cy;
    const double u = dx * s.cos_t + dy * s.sin_t;
    const double v = -dx * s.sin_t + dy * s.cos_t;
    if (s.rectangle) return std::abs(u) <= s.a && std::abs(v) <= s.b;
    const double eu = u / s.a, ev = v / s.b;
    return eu * eu + ev * ev <= 1.0;
}

inline double shape_value(const Shape& s, double px, double py) {
    double v = s.value + s.gx * (px - s.cx) + s.gy * (py - s.cy);
    if (s.tex_amp > 0.0)
        v += s.tex_amp * std::sin(2.0 * M_PI * (s.tfx * px + s.tfy * py) + s.tphase);
    return v;
}

// One (1/4, 1/2, 1/4) binomial pass per axis, periodic.
void binomial_blur(wshrink::Image& img) {
    const int w = img.width, h = img.height;
    wshrink::Image tmp(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int xm = x == 0 ? w - 1 : x - 1;
            const int xp = x == w - 1 ? 0 : x + 1;
            tmp.at(x, y) = 0.25 * img.at(xm, y) + 0.5 * img.at(x, y) + 0.25 * img.at(xp, y);
        }
    for (int y = 0; y < h; ++y) {
        const int ym = y == 0 ? h - 1 : y - 1;
        const int yp = y == h - 1 ? 0 : y + 1;
        for (int x = 0; x < w; ++x)
            img.at(x, y) = 0.25 * tmp.at(x, ym) + 0.5 * tmp.at(x, y) + 0.25 * tmp.at(x, yp);
    }
}

} // namespace

Image dead_leaves(std::uint64_t seed, const SceneOptions& opts) {
    const int w = opts.width, h = opts.height;
    if (w < 4 || h < 4) throw ValidationError("dead_leaves: image too small");
    Rng rng(seed);

    // Smooth background: a few long-wavelength cosine ridges on mid grey.
    Image img(w, h, 0.0);
    const int waves = 3;
    double amp[waves], fx[waves], fy[waves], ph[waves];
    for (int k = 0; k < waves; ++k) {
        amp[k] = rng.next_in(0.2, 1.0) * opts.background_amp;
        const double wavelength = rng.next_in(0.7, 2.5) * std::min(w, h);
        const double angle = rng.next_in(0.0, 2.0 * M_PI);
        fx[k] = std::cos(angle) / wavelength;
        fy[k] = std::sin(angle) / wavelength;
        ph[k] = rng.next_in(0.0, 2.0 * M_PI);
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 128.0;
            for (int k = 0; k < waves; ++k)
                v += amp[k] * std::cos(2.0 * M_PI * (fx[k] * x + fy[k] * y) + ph[k]);
            img.at(x, y) = v;
        }

    const double rmin = opts.min_radius;
    const double rmax = opts.max_radius > 0.0 ? opts.max_radius : 0.5 * std::min(w, h);
    // Power-law radii p(r) ~ r^-q via inverse CDF.
    const double q = opts.size_power;
    const double t0 = std::pow(rmin, 1.0 - q), t1 = std::pow(rmax, 1.0 - q);
    const auto draw_radius = [&] {
        const double u = rng.next_unit();
        return std::pow(t0 + u * (t1 - t0), 1.0 / (1.0 - q));
    };

    // Enough shapes that accumulated area covers the frame several times.
    double mean_area = 0.0;
    {
        const int probes = 64;
        for (int i = 0; i < probes; ++i) {
            const double r = draw_radius();
            mean_area += M_PI * r * r;
        }
        mean_area /= probes;
    }
    const int count = std::max(8, static_cast<int>(opts.overdraw * w * h / mean_area));

    for (int k = 0; k < count; ++k) {
        Shape s;
        s.rectangle = rng.next_unit() < 0.35;
        const double r = draw_radius();
        s.a = r;
        s.b = r * rng.next_in(0.35, 1.0);
        const double theta = rng.next_in(0.0, M_PI);
        s.cos_t = std::cos(theta);
        s.sin_t = std::sin(theta);
        s.cx = rng.next_in(-r, w + r);
        s.cy = rng.next_in(-r, h + r);
        s.value = rng.next_in(10.0, 245.0);
        const double slope = rng.next_in(0.0, opts.shading) / std::max(4.0, r);
        const double dir = rng.next_in(0.0, 2.0 * M_PI);
        s.gx = slope * std::cos(dir);
        s.gy = slope * std::sin(dir);
        if (opts.texture_amp > 0.0 && rng.next_unit() < 0.6) {
            s.tex_amp = rng.next_in(0.2, 1.0) * opts.texture_amp;
            const double wavelength = rng.next_in(3.0, 10.0);
            const double tdir = rng.next_in(0.0, M_PI);
            s.tfx = std::cos(tdir) / wavelength;
            s.tfy = std::sin(tdir) / wavelength;
            s.tphase = rng.next_in(0.0, 2.0 * M_PI);
        }

        const double reach = std::max(s.a, s.b) + 1.0;
        const int x0 = std::max(0, static_cast<int>(std::floor(s.cx - reach)));
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil(s.cx + reach)));
        const int y0 = std::max(0, static_cast<int>(std::floor(s.cy - reach)));
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil(s.cy + reach)));

        // 2x2 supersampling blends the rim pixels (soft, camera-like edges).
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                int hits = 0;
                static const double off[2] = {0.25, 0.75};
                for (double oy : off)
                    for (double ox : off)
                        if (inside(s, x + ox, y + oy)) ++hits;
                if (hits == 0) continue;
                const double cover = hits / 4.0;
                const double v = std::clamp(shape_value(s, x + 0.5, y + 0.5), 0.0, 255.0);
                img.at(x, y) = (1.0 - cover) * img.at(x, y) + cover * v;
            }
    }

    for (int pass = 0; pass < opts.blur_passes; ++pass) binomial_blur(img);
    for (double& v : img.pixels) v = std::clamp(v, 0.0, 255.0);
    return img;
}

std::vector<Image> dead_leaves_set(int count, std::uint64_t seed, const SceneOptions& opts) {
    std::vector<Image> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(dead_leaves(derive_seed(seed, static_cast<std::uint64_t>(i)), opts));
    return out;
}

} // namespace wshrink
