#include "wshrink/imaging.hpp"

#include "wshrink/errors.hpp"
#include "wshrink/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace wshrink {

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

namespace {

// Skips whitespace and '#' comments, then parses a nonnegative integer.
long next_pnm_int(std::istream& in, const char* what) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) throw FormatError(std::string("truncated PGM header: missing ") + what);
    if (!std::isdigit(c)) throw FormatError(std::string("malformed PGM header: bad ") + what);
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1000000000L) throw FormatError(std::string("PGM field out of range: ") + what);
        c = in.get();
    }
    if (c != EOF) in.unget();
    return value;
}

} // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file: " + path);

    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P') throw FormatError("not a PNM file (bad magic): " + path);
    if (m1 != '2' && m1 != '5') {
        if (m1 >= '1' && m1 <= '7')
            throw UnsupportedFormatError(std::string("unsupported PNM type P") + m1 +
                                         " (only P2/P5 grayscale): " + path);
        throw FormatError("not a PNM file (bad magic): " + path);
    }
    const bool binary = (m1 == '5');

    const long width = next_pnm_int(in, "width");
    const long height = next_pnm_int(in, "height");
    const long maxval = next_pnm_int(in, "maxval");
    if (width <= 0 || height <= 0) throw FormatError("malformed PGM header: bad dimensions: " + path);
    if (maxval <= 0) throw FormatError("malformed PGM header: bad maxval: " + path);
    if (maxval > 255)
        throw UnsupportedFormatError("unsupported PGM maxval " + std::to_string(maxval) +
                                     " (only 8-bit supported): " + path);

    Image img(static_cast<int>(width), static_cast<int>(height));
    if (binary) {
        in.get(); // single whitespace byte after maxval
        std::vector<unsigned char> raw(img.size());
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw FormatError("truncated PGM raster: " + path);
        for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i];
    } else {
        for (std::size_t i = 0; i < img.size(); ++i) {
            const long v = next_pnm_int(in, "pixel value");
            if (v > maxval) throw FormatError("PGM pixel value exceeds maxval: " + path);
            img.pixels[i] = static_cast<double>(v);
        }
    }
    return img;
}

void save_image(const Image& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 || img.size() != static_cast<std::size_t>(img.width) * img.height)
        throw ValidationError("save_image: inconsistent image shape");
    for (double v : img.pixels)
        if (!std::isfinite(v)) throw ValidationError("save_image: non-finite pixel value");

    std::string data;
    data.reserve(img.size() + 32);
    data += "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    for (double v : img.pixels) {
        long r = std::lround(v); // rounds half away from zero
        r = std::clamp(r, 0L, 255L);
        data.push_back(static_cast<char>(static_cast<unsigned char>(r)));
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write image file: " + path);
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw IoError("write failed: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw IoError("cannot replace image file: " + path + ": " + ec.message());
    }
}

Image add_gaussian_noise(const Image& img, const NoiseModel& noise) {
    if (noise.sigma < 0.0) throw ValidationError("add_gaussian_noise: sigma must be >= 0");
    Image out = img;
    if (noise.sigma == 0.0) return out;
    Rng rng(noise.seed);
    for (double& v : out.pixels) v += noise.sigma * rng.next_gaussian();
    return out;
}

double mse(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw ValidationError("mse: image dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const Image& a, const Image& b) {
    const double err = mse(a, b);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / err);
}

Image extract_patch(const Image& img, int size, std::uint64_t seed) {
    if (size <= 0) throw ValidationError("extract_patch: size must be positive");
    if (size > img.width || size > img.height)
        throw ValidationError("extract_patch: patch size exceeds image dimensions");
    Rng rng(seed);
    const int ox = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(img.width - size) + 1));
    const int oy = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(img.height - size) + 1));
    Image out(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            out.at(x, y) = img.at(ox + x, oy + y);
    return out;
}

double max_abs_diff(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw ValidationError("max_abs_diff: image dimensions differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.pixels[i] - b.pixels[i]));
    return m;
}

} // namespace wshrink
