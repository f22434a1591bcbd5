#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wshrink {

/// Real-valued grayscale raster in row-major order. Grey values are
/// nominally in [0, 255] but are never clamped in memory; noisy and
/// reconstructed images may exceed that range. Clamping and rounding
/// happen only when writing PGM files.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels; // row-major, pixels[y * width + x]

    Image() = default;
    Image(int w, int h, double fill = 0.0)
        : width(w), height(h),
          pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
               static_cast<std::size_t>(x);
    }

    double at(int x, int y) const { return pixels[idx(x, y)]; }
    double& at(int x, int y) { return pixels[idx(x, y)]; }

    std::size_t size() const { return pixels.size(); }
    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height;
    }
};

/// Additive Gaussian noise: standard deviation in grey-value units and
/// the seed of the generator producing the field.
struct NoiseModel {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Reads a PGM file (P2 ASCII or P5 binary, maxval <= 255, comments
/// tolerated). Throws IoError if the file cannot be opened, FormatError
/// on malformed content, UnsupportedFormatError for non-PGM PNM types
/// or 16-bit data.
Image load_image(const std::string& path);

/// Writes a binary P5 PGM. Values are rounded half-away-from-zero and
/// clamped to [0, 255] at write time; the in-memory image is untouched.
/// The file is written to a temporary name and renamed into place.
void save_image(const Image& img, const std::string& path);

/// out = img + n with n i.i.d. Gaussian(0, sigma^2). No clamping.
/// Identical (seed, sigma, shape) always yields the identical field.
Image add_gaussian_noise(const Image& img, const NoiseModel& noise);

/// Mean squared difference. Throws ValidationError on shape mismatch.
double mse(const Image& a, const Image& b);

/// 10 * log10(255^2 / mse), in dB. Returns +infinity when mse == 0.
double psnr(const Image& a, const Image& b);

/// Axis-aligned size x size crop at a seeded uniform offset.
Image extract_patch(const Image& img, int size, std::uint64_t seed);

/// Largest absolute pixel difference; shapes must match.
double max_abs_diff(const Image& a, const Image& b);

} // namespace wshrink
