#include "wshrink/train.hpp"

#include "wshrink/errors.hpp"
#include "wshrink/synth.hpp"
#include "support.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

using namespace wshrink;
using testsupport::random_integer_image;

namespace {

TrainingBatch small_batch(int images, int w, int h, double sigma, std::uint64_t seed, int levels) {
    SceneOptions opts;
    opts.width = w;
    opts.height = h;
    opts.min_radius = 1.5;
    TrainingBatch batch;
    batch.sigma = sigma;
    batch.levels = levels;
    for (int k = 0; k < images; ++k) {
        const Image clean = dead_leaves(derive_seed(seed, static_cast<std::uint64_t>(k)), opts);
        const Image noisy =
            add_gaussian_noise(clean, {sigma, derive_seed(seed, 1000 + static_cast<std::uint64_t>(k))});
        batch.pairs.emplace_back(noisy, clean);
    }
    return batch;
}

std::vector<double> log_params(std::initializer_list<double> natural) {
    std::vector<double> out;
    for (double v : natural) out.push_back(std::log(v));
    return out;
}

} // namespace

TEST_CASE("synthesis adjoint equals analysis") {
    // <synthesize(p), z> == <p, analyze(z)> over random pyramids; this
    // identity is what the gradient implementation relies on.
    const int w = 13, h = 9, L = 3;
    Rng rng(7);
    WaveletPyramid p;
    p.width = w;
    p.height = h;
    p.scaling = testsupport::random_image(w, h, 100, -1.0, 1.0);
    p.detail.resize(L);
    for (auto& t : p.detail) {
        t.x = testsupport::random_image(w, h, rng.next_u64(), -1.0, 1.0);
        t.y = testsupport::random_image(w, h, rng.next_u64(), -1.0, 1.0);
        t.xy = testsupport::random_image(w, h, rng.next_u64(), -1.0, 1.0);
    }
    const Image z = testsupport::random_image(w, h, 55, -1.0, 1.0);

    const Image sp = synthesize(p);
    double lhs = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i) lhs += sp.pixels[i] * z.pixels[i];

    const WaveletPyramid az = analyze(z, L);
    double rhs = 0.0;
    for (int l = 0; l < L; ++l)
        for (std::size_t i = 0; i < az.detail[l].x.size(); ++i)
            rhs += p.detail[l].x.pixels[i] * az.detail[l].x.pixels[i] +
                   p.detail[l].y.pixels[i] * az.detail[l].y.pixels[i] +
                   p.detail[l].xy.pixels[i] * az.detail[l].xy.pixels[i];
    for (std::size_t i = 0; i < az.scaling.size(); ++i)
        rhs += p.scaling.pixels[i] * az.scaling.pixels[i];

    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("objective is zero for clean batches under a pass-through rule") {
    // On integer-valued images all nonzero activities are far above the
    // cutoff of a tiny lambda, so the multiplier is exactly 1 there and
    // zero coefficients stay zero: the reconstruction is exact.
    TrainingBatch batch;
    batch.sigma = 1.0;
    batch.levels = 3;
    const Image v = random_integer_image(32, 32, 3);
    batch.pairs.emplace_back(v, v);
    const auto lp = log_params({1e-8, 1e-8, 1e-8, 1e-8, 1e-8, 1e-8});
    CHECK(objective(lp, batch, TrainFamily::PerScaleFab) == 0.0);
}

TEST_CASE("constant residual forces E = 4") {
    TrainingBatch batch;
    batch.sigma = 1.0;
    batch.levels = 3;
    const Image v = random_integer_image(32, 32, 9);
    Image f = v;
    for (double& px : f.pixels) px += 2.0; // u = f under pass-through, so u - v = 2
    batch.pairs.emplace_back(f, v);
    const auto lp = log_params({1e-8, 1e-8, 1e-8, 1e-8, 1e-8, 1e-8});
    CHECK(objective(lp, batch, TrainFamily::PerScaleFab) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("objective agrees with per-image mse") {
    const TrainingBatch batch = small_batch(3, 32, 32, 20.0, 77, 4);
    const auto lp = log_params({40.0, 80.0, 20.0, 30.0, 8.0, 12.0, 3.0, 5.0});

    const double e = objective(lp, batch, TrainFamily::PerScaleFab);

    std::vector<FabParams> params;
    for (std::size_t i = 0; i < 8; i += 2) params.push_back({std::exp(lp[i]), std::exp(lp[i + 1])});
    const ShrinkageSpec spec = ShrinkageSpec::fab(params);
    double acc = 0.0;
    for (const auto& [noisy, clean] : batch.pairs) acc += mse(denoise(noisy, spec, 4), clean);
    acc /= static_cast<double>(batch.pairs.size());

    CHECK(e == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("objective is invariant under pair reordering") {
    TrainingBatch batch = small_batch(4, 32, 32, 15.0, 5, 3);
    const auto lp = log_params({30.0, 60.0, 12.0, 20.0, 5.0, 8.0});
    const double base = objective(lp, batch, TrainFamily::PerScaleFab);

    TrainingBatch permuted = batch;
    std::rotate(permuted.pairs.begin(), permuted.pairs.begin() + 2, permuted.pairs.end());
    const double rotated = objective(lp, permuted, TrainFamily::PerScaleFab);
    CHECK(rotated == doctest::Approx(base).epsilon(1e-12));

    // restoring the order reproduces the value bitwise
    std::rotate(permuted.pairs.begin(), permuted.pairs.begin() + 2, permuted.pairs.end());
    CHECK(objective(lp, permuted, TrainFamily::PerScaleFab) == base);
}

TEST_CASE("analytic gradient matches central finite differences") {
    const TrainingBatch batch = small_batch(2, 32, 32, 25.0, 1234, 5);

    const auto check_family = [&](TrainFamily family, const std::vector<double>& lp) {
        const auto analytic = objective_gradient(lp, batch, family);
        REQUIRE(analytic.size() == param_count(family, batch.levels));
        const auto fd = testsupport::central_fd(
            [&](const std::vector<double>& p) { return objective(p, batch, family); }, lp, 1e-5);
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            INFO("component ", i);
            CHECK(testsupport::rel_err(analytic[i], fd[i]) <= 1e-5);
        }
    };

    SUBCASE("per-scale family at random points") {
        Rng rng(99);
        for (int point = 0; point < 2; ++point) {
            std::vector<double> lp;
            for (int l = 1; l <= batch.levels; ++l) {
                const double l1 = rng.next_in(5.0, 80.0) / (l * l) * 4.0;
                lp.push_back(std::log(l1));
                lp.push_back(std::log(l1 * rng.next_in(1.0, 2.5)));
            }
            check_family(TrainFamily::PerScaleFab, lp);
        }
    }
    SUBCASE("generic family") {
        check_family(TrainFamily::Generic, log_params({5.4, 8.9}));
        check_family(TrainFamily::Generic, log_params({2.0, 12.0}));
    }
    SUBCASE("shared families") {
        check_family(TrainFamily::SharedFab, log_params({20.0, 45.0}));
        check_family(TrainFamily::SharedFabEqual, log_params({25.0}));
    }
}

TEST_CASE("gradient of a constant-image batch vanishes") {
    TrainingBatch batch;
    batch.sigma = 10.0;
    batch.levels = 3;
    batch.pairs.emplace_back(Image(16, 16, 90.0), Image(16, 16, 90.0));
    const auto g =
        objective_gradient(log_params({10.0, 20.0, 5.0, 8.0, 2.0, 3.0}), batch,
                           TrainFamily::PerScaleFab);
    for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("generic gradient has exactly two components") {
    const TrainingBatch batch = small_batch(1, 32, 32, 20.0, 31, 4);
    CHECK(objective_gradient(log_params({5.0, 9.0}), batch, TrainFamily::Generic).size() == 2);
}

TEST_CASE("lbfgs minimizes a quadratic exactly") {
    const std::vector<double> c = {3.0, -1.5, 0.25, 10.0};
    const LossFn loss = [&](std::span<const double> x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - c[i]) * (x[i] - c[i]);
        return acc;
    };
    const GradFn grad = [&](std::span<const double> x) {
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * (x[i] - c[i]);
        return g;
    };
    const TrainResult res = optimize_lbfgs(loss, grad, {0.0, 0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(res.params[i] - c[i]) <= 1e-8);
    CHECK(res.final_loss <= 1e-15);
}

TEST_CASE("lbfgs solves Rosenbrock") {
    const LossFn loss = [](std::span<const double> x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    const GradFn grad = [](std::span<const double> x) {
        const double b = x[1] - x[0] * x[0];
        return std::vector<double>{-2.0 * (1.0 - x[0]) - 400.0 * x[0] * b, 200.0 * b};
    };
    const TrainResult res = optimize_lbfgs(loss, grad, {-1.2, 1.0});
    CHECK(std::abs(res.params[0] - 1.0) <= 1e-5);
    CHECK(std::abs(res.params[1] - 1.0) <= 1e-5);
    CHECK(res.iterations > 0);
    CHECK(res.gradient_norm <= 1e-5);

    // accepted iterates never increase the loss
    for (std::size_t i = 1; i < res.loss_trace.size(); ++i)
        CHECK(res.loss_trace[i] <= res.loss_trace[i - 1]);
}

TEST_CASE("lbfgs rejects non-finite starting points") {
    const LossFn loss = [](std::span<const double>) {
        return std::numeric_limits<double>::quiet_NaN();
    };
    const GradFn grad = [](std::span<const double> x) { return std::vector<double>(x.size(), 0.0); };
    CHECK_THROWS_AS(optimize_lbfgs(loss, grad, {1.0}), NumericError);
    try {
        optimize_lbfgs(loss, grad, {1.0, 2.0});
    } catch (const NumericError& e) {
        CHECK(e.point == std::vector<double>{1.0, 2.0});
    }
}

TEST_CASE("training reduces the objective on a small batch") {
    const TrainingBatch batch = small_batch(3, 48, 48, 25.0, 2024, 4);
    LbfgsOptions opts;
    opts.max_iter = 120;

    const TrainResult res = train_per_scale(batch, {}, opts);
    REQUIRE(res.params.size() == 8);
    for (double p : res.params) CHECK(p > 0.0);
    CHECK(res.final_loss < res.loss_trace.front());
    CHECK(res.final_loss == res.loss_trace.back());

    // the trained model must beat the noisy input on the batch itself
    const double noisy_mse = [&] {
        double acc = 0.0;
        for (const auto& [noisy, clean] : batch.pairs) acc += mse(noisy, clean);
        return acc / static_cast<double>(batch.pairs.size());
    }();
    CHECK(res.final_loss < noisy_mse);
}

TEST_CASE("training scales with the data") {
    // scaling images and sigma by c scales the trained lambdas by ~c
    const double c = 2.0;
    TrainingBatch batch = small_batch(2, 32, 32, 20.0, 909, 3);
    TrainingBatch scaled = batch;
    scaled.sigma *= c;
    for (auto& [noisy, clean] : scaled.pairs) {
        for (double& v : noisy.pixels) v *= c;
        for (double& v : clean.pixels) v *= c;
    }
    LbfgsOptions opts;
    opts.max_iter = 150;
    opts.grad_tol = 1e-9;
    const TrainResult a = train_per_scale(batch, {}, opts);
    const TrainResult b = train_per_scale(scaled, {}, opts);
    for (std::size_t i = 0; i < a.params.size(); ++i)
        CHECK(b.params[i] / a.params[i] == doctest::Approx(c).epsilon(0.05));
}

TEST_CASE("train_generic validates the sigma coverage") {
    std::vector<TrainingBatch> batches = {small_batch(1, 32, 32, 10.0, 1, 3),
                                          small_batch(1, 32, 32, 10.0, 2, 3)};
    CHECK_THROWS_AS(train_generic(batches), ValidationError);
}

TEST_CASE("tune_threshold basics") {
    SUBCASE("zero-noise batch tunes to zero") {
        TrainingBatch batch;
        batch.sigma = 0.0;
        batch.levels = 3;
        const Image v = random_integer_image(32, 32, 4);
        batch.pairs.emplace_back(v, v);
        CHECK(tune_threshold(ShrinkRule::Hard, batch) == 0.0);
    }
    SUBCASE("refined theta beats every coarse grid point") {
        const TrainingBatch batch = small_batch(2, 32, 32, 20.0, 66, 4);
        for (ShrinkRule rule : {ShrinkRule::Soft, ShrinkRule::Hard, ShrinkRule::Garrote}) {
            const double theta = tune_threshold(rule, batch);
            ShrinkageSpec spec;
            spec.rule = rule;
            const auto batch_obj = [&](double th) {
                spec.theta = th;
                double acc = 0.0;
                for (const auto& [noisy, clean] : batch.pairs)
                    acc += mse(denoise(noisy, spec, batch.levels), clean);
                return acc / static_cast<double>(batch.pairs.size());
            };
            const double tuned = batch_obj(theta);
            for (int i = 0; i <= 32; ++i)
                CHECK(tuned <= batch_obj(10.0 * batch.sigma * i / 32.0) + 1e-12);
        }
    }
    SUBCASE("non-classical rule rejected") {
        const TrainingBatch batch = small_batch(1, 32, 32, 10.0, 3, 3);
        CHECK_THROWS_AS(tune_threshold(ShrinkRule::Fab, batch), ValidationError);
    }
}

TEST_CASE("train results serialize as loadable spec files") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "wshrink_train_result.txt").string();
    const TrainingBatch batch = small_batch(2, 32, 32, 25.0, 11, 3);
    LbfgsOptions opts;
    opts.max_iter = 25;
    const TrainResult res = train_per_scale(batch, {}, opts);

    std::vector<FabParams> params;
    for (std::size_t i = 0; i + 1 < res.params.size(); i += 2)
        params.push_back({res.params[i], res.params[i + 1]});
    save_train_result(ShrinkageSpec::fab(params), batch.levels, res, path, {"sigma 25"});

    const ShrinkageSpec back = load_spec(path);
    REQUIRE(back.rule == ShrinkRule::Fab);
    REQUIRE(back.per_scale.size() == 3);
    CHECK(back.per_scale[0].lambda1 == params[0].lambda1);
    CHECK(back.per_scale[2].lambda2 == params[2].lambda2);

    // trace lines present as comments
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("# trace,0,") != std::string::npos);
    CHECK(text.find("# final_loss") != std::string::npos);
}
