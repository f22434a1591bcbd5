#include "wshrink/experiment.hpp"

#include "wshrink/errors.hpp"
#include "wshrink/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wshrink {

namespace {

// Noise seeds are derived per role so train and test realizations
// never coincide.
constexpr std::uint64_t kTrainNoiseSalt = 0x7261696e;
constexpr std::uint64_t kTestNoiseSalt = 0x74657374;

std::string iso_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

double mean(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

std::string fab_params_text(const std::vector<FabParams>& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ";";
        out += "l" + std::to_string(i + 1) + "=(" + fmt(params[i].lambda1) + "," +
               fmt(params[i].lambda2) + ")";
    }
    return out;
}

std::vector<FabParams> per_scale_from_result(const TrainResult& r, int levels) {
    std::vector<FabParams> out(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l)
        out[static_cast<std::size_t>(l)] = {r.params[2 * static_cast<std::size_t>(l)],
                                            r.params[2 * static_cast<std::size_t>(l) + 1]};
    return out;
}

ExperimentRow make_row(std::string method, double sigma, std::vector<double> psnrs,
                       std::string params) {
    ExperimentRow row;
    row.method = std::move(method);
    row.sigma = sigma;
    row.psnr_per_image = std::move(psnrs);
    row.psnr_mean = mean(row.psnr_per_image);
    row.params_used = std::move(params);
    return row;
}

} // namespace

const ExperimentRow* ExperimentReport::find(const std::string& method, double sigma) const {
    for (const auto& row : rows)
        if (row.method == method && row.sigma == sigma) return &row;
    return nullptr;
}

std::vector<Image> load_image_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() == ".pgm") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .pgm files in directory: " + dir);
    std::vector<Image> out;
    out.reserve(files.size());
    for (const auto& f : files) out.push_back(load_image(f));
    return out;
}

std::vector<Image> make_patches(const std::vector<Image>& images, int patch_size, int per_image,
                                std::uint64_t seed) {
    if (patch_size < 1) throw ValidationError("make_patches: patch_size must be >= 1");
    if (per_image < 1) throw ValidationError("make_patches: per_image must be >= 1");
    std::vector<Image> out;
    out.reserve(images.size() * static_cast<std::size_t>(per_image));
    std::uint64_t counter = 0;
    for (const Image& img : images) {
        if (img.width < patch_size || img.height < patch_size) {
            out.push_back(img); // too small to crop, pass through whole
            counter += static_cast<std::uint64_t>(per_image);
            continue;
        }
        for (int k = 0; k < per_image; ++k)
            out.push_back(extract_patch(img, patch_size, derive_seed(seed, counter++)));
    }
    return out;
}

TrainingBatch make_noisy_batch(const std::vector<Image>& clean, double sigma, std::uint64_t seed,
                               int levels) {
    TrainingBatch batch;
    batch.sigma = sigma;
    batch.levels = levels;
    batch.pairs.reserve(clean.size());
    for (std::size_t k = 0; k < clean.size(); ++k) {
        NoiseModel noise{sigma, derive_seed(seed, k)};
        batch.pairs.emplace_back(add_gaussian_noise(clean[k], noise), clean[k]);
    }
    return batch;
}

std::vector<double> evaluate_psnr(const std::vector<Image>& clean, double sigma,
                                  std::uint64_t seed, const ShrinkageSpec& spec, int levels) {
    std::vector<double> out;
    out.reserve(clean.size());
    for (std::size_t k = 0; k < clean.size(); ++k) {
        NoiseModel noise{sigma, derive_seed(seed, k)};
        const Image noisy = add_gaussian_noise(clean[k], noise);
        out.push_back(psnr(denoise(noisy, spec, levels), clean[k]));
    }
    return out;
}

ExperimentReport run_ablation(const std::vector<Image>& train, const std::vector<Image>& test,
                              double sigma, std::uint64_t seed, int levels) {
    if (train.empty() || test.empty()) throw ValidationError("run_ablation: empty image set");
    ExperimentReport report;
    report.seed = seed;
    report.levels = levels;
    report.timestamp = iso_timestamp();

    const std::uint64_t train_seed = derive_seed(seed, kTrainNoiseSalt);
    const std::uint64_t test_seed = derive_seed(seed, kTestNoiseSalt);
    const TrainingBatch batch = make_noisy_batch(train, sigma, train_seed, levels);

    // (a) classical hard shrinkage with tuned threshold
    const double theta = tune_threshold(ShrinkRule::Hard, batch);
    const ShrinkageSpec hard = ShrinkageSpec::hard(theta);
    report.rows.push_back(make_row("coupled-hard-tuned", sigma,
                                   evaluate_psnr(test, sigma, test_seed, hard, levels),
                                   "theta=" + fmt(theta)));

    // (b) lambda2 = lambda1, one parameter for all scales
    const TrainResult eq = train_shared_equal(batch, sigma);
    const ShrinkageSpec eq_spec = ShrinkageSpec::fab(
        std::vector<FabParams>(static_cast<std::size_t>(levels), {eq.params[0], eq.params[0]}));
    report.rows.push_back(make_row("fab-single-equal", sigma,
                                   evaluate_psnr(test, sigma, test_seed, eq_spec, levels),
                                   "lambda=" + fmt(eq.params[0])));

    // (c) one (lambda1, lambda2) pair for all scales
    const TrainResult shared = train_shared(batch, {sigma, 2.0 * sigma});
    const ShrinkageSpec shared_spec = ShrinkageSpec::fab(std::vector<FabParams>(
        static_cast<std::size_t>(levels), {shared.params[0], shared.params[1]}));
    report.rows.push_back(make_row("fab-single", sigma,
                                   evaluate_psnr(test, sigma, test_seed, shared_spec, levels),
                                   "l1=" + fmt(shared.params[0]) + ";l2=" + fmt(shared.params[1])));

    // (d) per-scale pairs
    const TrainResult per = train_per_scale(batch);
    const auto per_params = per_scale_from_result(per, levels);
    const ShrinkageSpec per_spec = ShrinkageSpec::fab(per_params);
    report.rows.push_back(make_row("fab-per-scale", sigma,
                                   evaluate_psnr(test, sigma, test_seed, per_spec, levels),
                                   fab_params_text(per_params)));
    return report;
}

ExperimentReport run_bench(const std::vector<Image>& train, const std::vector<Image>& test,
                           std::span<const double> sigmas, std::uint64_t seed, int levels) {
    if (train.empty() || test.empty()) throw ValidationError("run_bench: empty image set");
    if (sigmas.empty()) throw ValidationError("run_bench: no sigmas");
    ExperimentReport report;
    report.seed = seed;
    report.levels = levels;
    report.timestamp = iso_timestamp();

    const std::uint64_t train_seed = derive_seed(seed, kTrainNoiseSalt);
    const std::uint64_t test_seed = derive_seed(seed, kTestNoiseSalt);

    for (double sigma : sigmas) {
        const TrainingBatch batch = make_noisy_batch(train, sigma, train_seed, levels);

        // noisy input reference
        std::vector<double> noisy_psnrs;
        for (std::size_t k = 0; k < test.size(); ++k) {
            NoiseModel noise{sigma, derive_seed(test_seed, k)};
            noisy_psnrs.push_back(psnr(add_gaussian_noise(test[k], noise), test[k]));
        }
        report.rows.push_back(make_row("noisy", sigma, std::move(noisy_psnrs), ""));

        for (ShrinkRule rule : {ShrinkRule::Soft, ShrinkRule::Hard, ShrinkRule::Garrote}) {
            const double theta = tune_threshold(rule, batch);
            ShrinkageSpec spec;
            spec.rule = rule;
            spec.theta = theta;
            report.rows.push_back(make_row(rule_name(rule), sigma,
                                           evaluate_psnr(test, sigma, test_seed, spec, levels),
                                           "theta=" + fmt(theta)));
        }

        const ShrinkageSpec generic = ShrinkageSpec::generic_rule(GenericParams{}, sigma);
        report.rows.push_back(make_row("generic", sigma,
                                       evaluate_psnr(test, sigma, test_seed, generic, levels),
                                       "alpha=" + fmt(generic.generic.alpha) +
                                           ";beta=" + fmt(generic.generic.beta)));
    }
    return report;
}

ExperimentReport run_fit_gap(const std::vector<Image>& train, const std::vector<Image>& test,
                             std::span<const double> sigmas, std::uint64_t seed, int levels) {
    if (train.empty() || test.empty()) throw ValidationError("run_fit_gap: empty image set");
    if (sigmas.size() < 3) throw ValidationError("run_fit_gap: needs at least 3 sigmas");
    ExperimentReport report;
    report.seed = seed;
    report.levels = levels;
    report.timestamp = iso_timestamp();

    const std::uint64_t train_seed = derive_seed(seed, kTrainNoiseSalt);
    const std::uint64_t test_seed = derive_seed(seed, kTestNoiseSalt);

    std::vector<TrainingBatch> batches;
    batches.reserve(sigmas.size());
    for (double sigma : sigmas)
        batches.push_back(make_noisy_batch(train, sigma, train_seed, levels));

    // Individually trained per-scale model per noise level.
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const TrainResult per = train_per_scale(batches[i]);
        const auto params = per_scale_from_result(per, levels);
        report.rows.push_back(make_row("fab-per-scale", sigmas[i],
                                       evaluate_psnr(test, sigmas[i], test_seed,
                                                     ShrinkageSpec::fab(params), levels),
                                       fab_params_text(params)));
    }

    // One (alpha, beta) fit over all levels and noise levels.
    const TrainResult gen = train_generic(batches);
    const GenericParams fitted{gen.params[0], gen.params[1]};
    for (double sigma : sigmas) {
        const ShrinkageSpec spec = ShrinkageSpec::generic_rule(fitted, sigma);
        report.rows.push_back(make_row("generic-trained", sigma,
                                       evaluate_psnr(test, sigma, test_seed, spec, levels),
                                       "alpha=" + fmt(fitted.alpha) + ";beta=" + fmt(fitted.beta)));
    }
    return report;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + path);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot replace file: " + path + ": " + ec.message());
}

void write_report_csv(const ExperimentReport& report, const std::string& path) {
    std::ostringstream out;
    out << "# wshrink experiment report\n";
    out << "# seed=" << report.seed << " levels=" << report.levels << "\n";
    if (!report.train_source.empty()) out << "# train=" << report.train_source << "\n";
    if (!report.test_source.empty()) out << "# test=" << report.test_source << "\n";
    out << "# generated=" << report.timestamp << "\n";
    out << "method,sigma,psnr,psnr_per_image,params\n";
    for (const auto& row : report.rows) {
        std::string per_image;
        for (std::size_t i = 0; i < row.psnr_per_image.size(); ++i) {
            if (i) per_image += ";";
            per_image += fmt(row.psnr_per_image[i], "%.4f");
        }
        out << csv_escape(row.method) << "," << fmt(row.sigma) << ","
            << fmt(row.psnr_mean, "%.4f") << "," << csv_escape(per_image) << ","
            << csv_escape(row.params_used) << "\n";
    }
    atomic_write_text(path, out.str());
}

} // namespace wshrink
