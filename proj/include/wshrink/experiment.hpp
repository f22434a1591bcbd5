#pragma once

#include "wshrink/train.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wshrink {

/// One (method, sigma) record of an experiment.
struct ExperimentRow {
    std::string method;
    double sigma = 0.0;
    double psnr_mean = 0.0;
    std::vector<double> psnr_per_image;
    std::string params_used;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::uint64_t seed = 0;
    int levels = 0;
    std::string train_source;
    std::string test_source;
    std::string timestamp;

    const ExperimentRow* find(const std::string& method, double sigma) const;
};

/// Loads every .pgm in a directory, sorted by filename.
std::vector<Image> load_image_dir(const std::string& dir);

/// Seeded patch extraction: per_image patches from each source image.
/// Images smaller than patch_size are passed through whole.
std::vector<Image> make_patches(const std::vector<Image>& images, int patch_size,
                                int per_image, std::uint64_t seed);

/// Builds (noisy, clean) pairs with one fixed noise realization per
/// image, seeded per index from the batch seed.
TrainingBatch make_noisy_batch(const std::vector<Image>& clean, double sigma,
                               std::uint64_t seed, int levels);

/// PSNR of denoise(spec) on each clean image after seeded noising.
std::vector<double> evaluate_psnr(const std::vector<Image>& clean, double sigma,
                                  std::uint64_t seed, const ShrinkageSpec& spec,
                                  int levels);

/// Ablation at one noise level. Emits four rows, in order:
///   coupled-hard-tuned   classical hard, tuned threshold
///   fab-single-equal     lambda2 = lambda1, one pair for all scales
///   fab-single           one trained (lambda1, lambda2) for all scales
///   fab-per-scale        trained pair per scale
ExperimentReport run_ablation(const std::vector<Image>& train,
                              const std::vector<Image>& test, double sigma,
                              std::uint64_t seed, int levels);

/// Per-sigma tuned soft/hard/garrote against the fixed generic rule;
/// also reports the noisy-input PSNR per sigma.
ExperimentReport run_bench(const std::vector<Image>& train,
                           const std::vector<Image>& test,
                           std::span<const double> sigmas, std::uint64_t seed,
                           int levels);

/// Per-sigma trained per-scale models against one (alpha, beta) model
/// trained over all sigmas. Rows 'fab-per-scale' and 'generic-trained'.
ExperimentReport run_fit_gap(const std::vector<Image>& train,
                             const std::vector<Image>& test,
                             std::span<const double> sigmas, std::uint64_t seed,
                             int levels);

/// RFC-4180-style CSV with '#' header comments carrying seed and config.
/// Columns: method,sigma,psnr,psnr_per_image,params.
void write_report_csv(const ExperimentReport& report, const std::string& path);

/// Writes text via temp file + rename.
void atomic_write_text(const std::string& path, const std::string& content);

} // namespace wshrink
