#include "wshrink/wavelet.hpp"

#include "wshrink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace wshrink {

namespace {

// One analysis pass along x with hole distance d, periodic indexing.
void split_x(const Image& a, int d, Image& low, Image& high) {
    const int w = a.width, h = a.height;
    for (int y = 0; y < h; ++y) {
        const double* row = a.pixels.data() + static_cast<std::size_t>(y) * w;
        double* lo = low.pixels.data() + static_cast<std::size_t>(y) * w;
        double* hi = high.pixels.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            int p = x + d;
            if (p >= w) p -= w * (p / w);
            const double u = row[x], v = row[p];
            lo[x] = 0.5 * (u + v);
            hi[x] = 0.5 * (u - v);
        }
    }
}

void split_y(const Image& a, int d, Image& low, Image& high) {
    const int w = a.width, h = a.height;
    for (int y = 0; y < h; ++y) {
        int p = y + d;
        if (p >= h) p -= h * (p / h);
        const double* row = a.pixels.data() + static_cast<std::size_t>(y) * w;
        const double* partner = a.pixels.data() + static_cast<std::size_t>(p) * w;
        double* lo = low.pixels.data() + static_cast<std::size_t>(y) * w;
        double* hi = high.pixels.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            lo[x] = 0.5 * (row[x] + partner[x]);
            hi[x] = 0.5 * (row[x] - partner[x]);
        }
    }
}

// Averaged inversion along x: a[i] = ((lo[i] + hi[i]) + (lo[i-d] - hi[i-d])) / 2.
void merge_x(const Image& low, const Image& high, int d, Image& out) {
    const int w = low.width, h = low.height;
    for (int y = 0; y < h; ++y) {
        const double* lo = low.pixels.data() + static_cast<std::size_t>(y) * w;
        const double* hi = high.pixels.data() + static_cast<std::size_t>(y) * w;
        double* o = out.pixels.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            int p = x - d;
            if (p < 0) p += w * ((-p + w - 1) / w);
            o[x] = 0.5 * ((lo[x] + hi[x]) + (lo[p] - hi[p]));
        }
    }
}

void merge_y(const Image& low, const Image& high, int d, Image& out) {
    const int w = low.width, h = low.height;
    for (int y = 0; y < h; ++y) {
        int p = y - d;
        if (p < 0) p += h * ((-p + h - 1) / h);
        const double* lo = low.pixels.data() + static_cast<std::size_t>(y) * w;
        const double* hi = high.pixels.data() + static_cast<std::size_t>(y) * w;
        const double* lop = low.pixels.data() + static_cast<std::size_t>(p) * w;
        const double* hip = high.pixels.data() + static_cast<std::size_t>(p) * w;
        double* o = out.pixels.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x)
            o[x] = 0.5 * ((lo[x] + hi[x]) + (lop[x] - hip[x]));
    }
}

void check_pyramid(const WaveletPyramid& pyr) {
    const auto consistent = [&](const Image& p) {
        return p.width == pyr.width && p.height == pyr.height &&
               p.size() == static_cast<std::size_t>(pyr.width) * pyr.height;
    };
    if (pyr.levels() < 1 || !consistent(pyr.scaling))
        throw ValidationError("pyramid: inconsistent plane shapes");
    for (const auto& t : pyr.detail)
        if (!consistent(t.x) || !consistent(t.y) || !consistent(t.xy))
            throw ValidationError("pyramid: inconsistent plane shapes");
}

} // namespace

WaveletPyramid analyze(const Image& img, int levels) {
    if (levels < 1) throw ValidationError("analyze: levels must be >= 1");
    if (levels > 30) throw ValidationError("analyze: levels too large");
    if (img.width < 1 || img.height < 1) throw ValidationError("analyze: empty image");
    if ((1 << (levels - 1)) >= std::min(img.width, img.height))
        std::fprintf(stderr,
                     "wshrink: warning: hole distance 2^%d reaches the %dx%d image; "
                     "coarse scales are degenerate\n",
                     levels - 1, img.width, img.height);

    WaveletPyramid pyr;
    pyr.width = img.width;
    pyr.height = img.height;
    pyr.detail.resize(static_cast<std::size_t>(levels));

    Image approx = img;
    Image low_x(img.width, img.height), high_x(img.width, img.height);
    Image next(img.width, img.height);
    for (int level = 1; level <= levels; ++level) {
        const int d = 1 << (level - 1);
        DetailPlanes& t = pyr.detail[static_cast<std::size_t>(level - 1)];
        t.x = Image(img.width, img.height);
        t.y = Image(img.width, img.height);
        t.xy = Image(img.width, img.height);
        split_x(approx, d, low_x, high_x);
        split_y(low_x, d, next, t.y);   // a^l = Ly Lx, w_y = Hy Lx
        split_y(high_x, d, t.x, t.xy);  // w_x = Ly Hx, w_xy = Hy Hx
        std::swap(approx, next);
    }
    pyr.scaling = std::move(approx);
    return pyr;
}

Image synthesize(const WaveletPyramid& pyr) {
    check_pyramid(pyr);
    Image approx = pyr.scaling;
    Image low_x(pyr.width, pyr.height), high_x(pyr.width, pyr.height);
    Image next(pyr.width, pyr.height);
    for (int level = pyr.levels(); level >= 1; --level) {
        const int d = 1 << (level - 1);
        const DetailPlanes& t = pyr.detail[static_cast<std::size_t>(level - 1)];
        merge_y(approx, t.y, d, low_x); // recover Lx a^(l-1) from (a^l, w_y)
        merge_y(t.x, t.xy, d, high_x);  // recover Hx a^(l-1) from (w_x, w_xy)
        merge_x(low_x, high_x, d, next);
        std::swap(approx, next);
    }
    return approx;
}

int default_levels(int width, int height) {
    const int m = std::min(width, height);
    if (m < 2) return 1;
    return std::min(8, static_cast<int>(std::floor(std::log2(static_cast<double>(m)))));
}

void dump_pyramid(const WaveletPyramid& pyr, const std::string& dir) {
    check_pyramid(pyr);
    std::filesystem::create_directories(dir);
    std::string manifest;

    const auto dump_plane = [&](const Image& plane, const std::string& name, int level) {
        double lo = plane.pixels[0], hi = plane.pixels[0];
        for (double v : plane.pixels) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        Image scaled(plane.width, plane.height);
        const double span = hi - lo;
        for (std::size_t i = 0; i < plane.size(); ++i)
            scaled.pixels[i] = span > 0.0 ? (plane.pixels[i] - lo) / span * 255.0 : 0.0;
        const std::string file = name + ".pgm";
        save_image(scaled, dir + "/" + file);
        char line[160];
        std::snprintf(line, sizeof(line), "%s level=%d min=%.6g max=%.6g\n", file.c_str(),
                      level, lo, hi);
        manifest += line;
    };

    for (int level = 1; level <= pyr.levels(); ++level) {
        const DetailPlanes& t = pyr.detail[static_cast<std::size_t>(level - 1)];
        dump_plane(t.x, "wx_" + std::to_string(level), level);
        dump_plane(t.y, "wy_" + std::to_string(level), level);
        dump_plane(t.xy, "wxy_" + std::to_string(level), level);
    }
    dump_plane(pyr.scaling, "scaling", pyr.levels());

    std::ofstream out(dir + "/manifest.txt", std::ios::trunc);
    if (!out) throw IoError("cannot write manifest in " + dir);
    out << manifest;
}

} // namespace wshrink
