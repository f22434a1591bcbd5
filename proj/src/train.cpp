#include "wshrink/train.hpp"

#include "wshrink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>

namespace wshrink {

namespace {

inline double fab_exp(double arg) {
    return arg < -700.0 ? 0.0 : std::exp(arg);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

void check_batch(const TrainingBatch& batch) {
    if (batch.pairs.empty()) throw ValidationError("training batch: needs at least one pair");
    if (batch.levels < 1) throw ValidationError("training batch: levels must be >= 1");
    for (const auto& [noisy, clean] : batch.pairs)
        if (!noisy.same_shape(clean))
            throw ValidationError("training batch: noisy/clean dimensions differ");
}

// Per-image caches: the analysis pyramid of the noisy input and the
// coupled activity s^2 per scale. Both are independent of the
// parameters, so every objective evaluation reuses them.
struct ImageCache {
    const Image* clean = nullptr;
    WaveletPyramid pyr;
    std::vector<std::vector<double>> s2; // [level-1][pixel]
    double inv_n = 0.0;
};

class BatchEvaluator {
public:
    explicit BatchEvaluator(const TrainingBatch& batch) : batch_(&batch) {
        check_batch(batch);
        cache_.reserve(batch.pairs.size());
        for (const auto& [noisy, clean] : batch.pairs) {
            ImageCache c;
            c.clean = &clean;
            c.pyr = analyze(noisy, batch.levels);
            c.inv_n = 1.0 / static_cast<double>(noisy.size());
            c.s2.resize(static_cast<std::size_t>(batch.levels));
            for (int l = 0; l < batch.levels; ++l) {
                const DetailPlanes& t = c.pyr.detail[static_cast<std::size_t>(l)];
                auto& plane = c.s2[static_cast<std::size_t>(l)];
                plane.resize(t.x.size());
                for (std::size_t i = 0; i < plane.size(); ++i) {
                    const double wx = t.x.pixels[i], wy = t.y.pixels[i], wxy = t.xy.pixels[i];
                    plane[i] = wx * wx + wy * wy + 2.0 * wxy * wxy;
                }
            }
            cache_.push_back(std::move(c));
        }
    }

    int levels() const { return batch_->levels; }
    double sigma() const { return batch_->sigma; }

    // E = (1/K) sum_k ||u_k - v_k||^2 / N_k for a per-level multiplier.
    template <class MulFn> // double(int level, double s2)
    double loss(const MulFn& mul) const {
        double acc = 0.0;
        for (const ImageCache& c : cache_) {
            const Image u = reconstruct(c, mul);
            double err = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double d = u.pixels[i] - c.clean->pixels[i];
                err += d * d;
            }
            acc += err * c.inv_n;
        }
        return acc / static_cast<double>(cache_.size());
    }

    // Loss plus dE/dlambda per scale. The residual is pulled back
    // through the synthesis adjoint, which equals the analysis cascade,
    // so one analyze() per image covers every parameter at once.
    double loss_and_fab_grad(const std::vector<FabParams>& lam,
                             std::vector<FabGradient>& grad) const {
        const int L = levels();
        grad.assign(static_cast<std::size_t>(L), FabGradient{});
        double acc = 0.0;
        for (const ImageCache& c : cache_) {
            const Image u = reconstruct(c, [&](int level, double s2) {
                const FabParams& p = lam[static_cast<std::size_t>(level - 1)];
                return 1.0 - (2.0 * fab_exp(-s2 / (p.lambda1 * p.lambda1)) -
                              fab_exp(-s2 / (p.lambda2 * p.lambda2)));
            });
            Image residual(u.width, u.height);
            double err = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double d = u.pixels[i] - c.clean->pixels[i];
                residual.pixels[i] = d;
                err += d * d;
            }
            acc += err * c.inv_n;

            const WaveletPyramid back = analyze(residual, L);
            const double w = 2.0 * c.inv_n / static_cast<double>(cache_.size());
            for (int l = 1; l <= L; ++l) {
                const DetailPlanes& t = c.pyr.detail[static_cast<std::size_t>(l - 1)];
                const DetailPlanes& r = back.detail[static_cast<std::size_t>(l - 1)];
                const auto& s2p = c.s2[static_cast<std::size_t>(l - 1)];
                const FabParams& p = lam[static_cast<std::size_t>(l - 1)];
                const double il1 = 1.0 / (p.lambda1 * p.lambda1);
                const double il2 = 1.0 / (p.lambda2 * p.lambda2);
                const double c1 = 4.0 / (p.lambda1 * p.lambda1 * p.lambda1);
                const double c2 = 2.0 / (p.lambda2 * p.lambda2 * p.lambda2);
                double g1 = 0.0, g2 = 0.0;
                for (std::size_t i = 0; i < s2p.size(); ++i) {
                    const double s2 = s2p[i];
                    if (s2 == 0.0) continue;
                    const double common = r.x.pixels[i] * t.x.pixels[i] +
                                          r.y.pixels[i] * t.y.pixels[i] +
                                          r.xy.pixels[i] * t.xy.pixels[i];
                    const double e1 = fab_exp(-s2 * il1);
                    const double e2 = fab_exp(-s2 * il2);
                    if (e1 != 0.0) g1 -= common * s2 * e1;
                    if (e2 != 0.0) g2 += common * s2 * e2;
                }
                grad[static_cast<std::size_t>(l - 1)].dlambda1 += w * c1 * g1;
                grad[static_cast<std::size_t>(l - 1)].dlambda2 += w * c2 * g2;
            }
        }
        return acc / static_cast<double>(cache_.size());
    }

private:
    template <class MulFn>
    Image reconstruct(const ImageCache& c, const MulFn& mul) const {
        WaveletPyramid shrunk;
        shrunk.width = c.pyr.width;
        shrunk.height = c.pyr.height;
        shrunk.scaling = c.pyr.scaling;
        shrunk.detail.resize(c.pyr.detail.size());
        for (int l = 1; l <= levels(); ++l) {
            const DetailPlanes& src = c.pyr.detail[static_cast<std::size_t>(l - 1)];
            DetailPlanes& dst = shrunk.detail[static_cast<std::size_t>(l - 1)];
            const auto& s2p = c.s2[static_cast<std::size_t>(l - 1)];
            dst.x = Image(src.x.width, src.x.height);
            dst.y = Image(src.y.width, src.y.height);
            dst.xy = Image(src.xy.width, src.xy.height);
            for (std::size_t i = 0; i < s2p.size(); ++i) {
                const double m = mul(l, s2p[i]);
                dst.x.pixels[i] = m * src.x.pixels[i];
                dst.y.pixels[i] = m * src.y.pixels[i];
                dst.xy.pixels[i] = m * src.xy.pixels[i];
            }
        }
        return synthesize(shrunk);
    }

    const TrainingBatch* batch_;
    std::vector<ImageCache> cache_;
};

// Maps log-domain parameters to per-scale contrast parameters.
std::vector<FabParams> resolve_lambdas(std::span<const double> lp, TrainFamily family,
                                       int levels, double sigma) {
    if (lp.size() != param_count(family, levels))
        throw ValidationError("objective: parameter vector has wrong size");
    std::vector<FabParams> lam(static_cast<std::size_t>(levels));
    switch (family) {
    case TrainFamily::PerScaleFab:
        for (int l = 0; l < levels; ++l)
            lam[static_cast<std::size_t>(l)] = {std::exp(lp[2 * static_cast<std::size_t>(l)]),
                                                std::exp(lp[2 * static_cast<std::size_t>(l) + 1])};
        break;
    case TrainFamily::SharedFab:
        for (auto& p : lam) p = {std::exp(lp[0]), std::exp(lp[1])};
        break;
    case TrainFamily::SharedFabEqual:
        for (auto& p : lam) p = {std::exp(lp[0]), std::exp(lp[0])};
        break;
    case TrainFamily::Generic: {
        if (!(sigma > 0.0))
            throw ValidationError("objective: generic family requires batch sigma > 0");
        const GenericParams g{std::exp(lp[0]), std::exp(lp[1])};
        for (int l = 1; l <= levels; ++l)
            lam[static_cast<std::size_t>(l - 1)] = generic_lambdas(l, sigma, g);
        break;
    }
    }
    return lam;
}

// Chain rule from per-scale dE/dlambda down to the log-domain vector.
std::vector<double> collapse_gradient(const std::vector<FabGradient>& per_scale,
                                      const std::vector<FabParams>& lam,
                                      std::span<const double> lp, TrainFamily family,
                                      double sigma) {
    const int L = static_cast<int>(per_scale.size());
    std::vector<double> g(param_count(family, L), 0.0);
    switch (family) {
    case TrainFamily::PerScaleFab:
        for (int l = 0; l < L; ++l) {
            g[2 * static_cast<std::size_t>(l)] =
                per_scale[static_cast<std::size_t>(l)].dlambda1 * lam[static_cast<std::size_t>(l)].lambda1;
            g[2 * static_cast<std::size_t>(l) + 1] =
                per_scale[static_cast<std::size_t>(l)].dlambda2 * lam[static_cast<std::size_t>(l)].lambda2;
        }
        break;
    case TrainFamily::SharedFab:
        for (int l = 0; l < L; ++l) {
            g[0] += per_scale[static_cast<std::size_t>(l)].dlambda1 * lam[0].lambda1;
            g[1] += per_scale[static_cast<std::size_t>(l)].dlambda2 * lam[0].lambda2;
        }
        break;
    case TrainFamily::SharedFabEqual:
        for (int l = 0; l < L; ++l)
            g[0] += (per_scale[static_cast<std::size_t>(l)].dlambda1 +
                     per_scale[static_cast<std::size_t>(l)].dlambda2) *
                    lam[0].lambda1;
        break;
    case TrainFamily::Generic: {
        const double alpha = std::exp(lp[0]), beta = std::exp(lp[1]);
        for (int l = 1; l <= L; ++l) {
            const double scale = sigma / (static_cast<double>(l) * static_cast<double>(l));
            g[0] += per_scale[static_cast<std::size_t>(l - 1)].dlambda1 * scale * alpha;
            g[1] += per_scale[static_cast<std::size_t>(l - 1)].dlambda2 * scale * beta;
        }
        break;
    }
    }
    return g;
}

double eval_objective(const BatchEvaluator& ev, std::span<const double> lp, TrainFamily family) {
    const auto lam = resolve_lambdas(lp, family, ev.levels(), ev.sigma());
    return ev.loss([&](int level, double s2) {
        const FabParams& p = lam[static_cast<std::size_t>(level - 1)];
        return 1.0 - (2.0 * fab_exp(-s2 / (p.lambda1 * p.lambda1)) -
                      fab_exp(-s2 / (p.lambda2 * p.lambda2)));
    });
}

std::vector<double> eval_gradient(const BatchEvaluator& ev, std::span<const double> lp,
                                  TrainFamily family, double* loss_out = nullptr) {
    const auto lam = resolve_lambdas(lp, family, ev.levels(), ev.sigma());
    std::vector<FabGradient> per_scale;
    const double loss = ev.loss_and_fab_grad(lam, per_scale);
    if (loss_out) *loss_out = loss;
    return collapse_gradient(per_scale, lam, lp, family, ev.sigma());
}

template <class F>
double golden_section_min(const F& f, double a, double b, double tol) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> to_logs(std::span<const double> natural) {
    std::vector<double> out(natural.size());
    for (std::size_t i = 0; i < natural.size(); ++i) {
        if (!(natural[i] > 0.0))
            throw ValidationError("initial parameters must be strictly positive");
        out[i] = std::log(natural[i]);
    }
    return out;
}

TrainResult run_training(const LossFn& loss, const GradFn& grad, std::vector<double> x0_natural,
                         const LbfgsOptions& opts) {
    TrainResult res = optimize_lbfgs(loss, grad, to_logs(x0_natural), opts);
    for (double& p : res.params) p = std::exp(p);
    return res;
}

} // namespace

std::size_t param_count(TrainFamily family, int levels) {
    switch (family) {
    case TrainFamily::PerScaleFab: return 2 * static_cast<std::size_t>(levels);
    case TrainFamily::SharedFab: return 2;
    case TrainFamily::SharedFabEqual: return 1;
    case TrainFamily::Generic: return 2;
    }
    return 0;
}

double objective(std::span<const double> log_params, const TrainingBatch& batch,
                 TrainFamily family) {
    return eval_objective(BatchEvaluator(batch), log_params, family);
}

std::vector<double> objective_gradient(std::span<const double> log_params,
                                       const TrainingBatch& batch, TrainFamily family) {
    return eval_gradient(BatchEvaluator(batch), log_params, family);
}

double objective(std::span<const double> log_params, std::span<const TrainingBatch> batches,
                 TrainFamily family) {
    if (batches.empty()) throw ValidationError("objective: no batches");
    double acc = 0.0;
    for (const TrainingBatch& b : batches) acc += objective(log_params, b, family);
    return acc / static_cast<double>(batches.size());
}

std::vector<double> objective_gradient(std::span<const double> log_params,
                                       std::span<const TrainingBatch> batches,
                                       TrainFamily family) {
    if (batches.empty()) throw ValidationError("objective_gradient: no batches");
    std::vector<double> acc(log_params.size(), 0.0);
    for (const TrainingBatch& b : batches) {
        const auto g = objective_gradient(log_params, b, family);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
    }
    for (double& v : acc) v /= static_cast<double>(batches.size());
    return acc;
}

TrainResult optimize_lbfgs(const LossFn& loss, const GradFn& grad, std::vector<double> x0,
                           const LbfgsOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0) throw ValidationError("optimize_lbfgs: empty parameter vector");

    std::vector<double> x = std::move(x0);
    double f = loss(x);
    if (!std::isfinite(f)) throw NumericError("loss not finite at initial point", x);
    std::vector<double> g = grad(x);
    if (g.size() != n || !all_finite(g))
        throw NumericError("gradient not finite at initial point", x);

    TrainResult res;
    res.loss_trace.push_back(f);
    std::vector<double> best_x = x;
    double best_f = f;

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    std::vector<double> dir(n), x_new(n), g_new(n);
    int accepted = 0;
    int stagnant = 0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const double gnorm = norm2(g);
        if (gnorm <= opts.grad_tol) break;

        // Two-loop recursion for d = -H g.
        dir.assign(g.begin(), g.end());
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], dir);
            for (std::size_t j = 0; j < n; ++j) dir[j] -= alpha[i] * y_hist[i][j];
        }
        if (!s_hist.empty()) {
            const double gamma =
                dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (double& v : dir) v *= gamma;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], dir);
            for (std::size_t j = 0; j < n; ++j) dir[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (double& v : dir) v = -v;

        double dg = dot(dir, g);
        if (!(dg < 0.0)) { // not a descent direction, fall back to steepest descent
            for (std::size_t j = 0; j < n; ++j) dir[j] = -g[j];
            dg = -gnorm * gnorm;
        }

        // Backtracking line search with the sufficient-decrease condition.
        double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(1.0, gnorm)) : 1.0;
        double f_new = f;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * dir[j];
            f_new = loss(x_new);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * dg) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break; // no acceptable step along this direction

        g_new = grad(x_new);
        if (g_new.size() != n || !all_finite(g_new))
            throw NumericError("gradient not finite at accepted iterate", x_new);

        std::vector<double> s(n), yv(n);
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = x_new[j] - x[j];
            yv[j] = g_new[j] - g[j];
        }
        const double sy = dot(s, yv);
        if (sy > 1e-10 * norm2(s) * norm2(yv)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        const double drop = f - f_new;
        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        ++accepted;
        res.loss_trace.push_back(f);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
        // declare stagnation only after a streak of negligible drops, so
        // a single flat step on a plateau does not end the run
        if (drop <= opts.rel_loss_tol * std::max(1.0, std::abs(f))) {
            if (++stagnant >= 3) break;
        } else {
            stagnant = 0;
        }
    }

    res.params = std::move(best_x);
    res.final_loss = best_f;
    res.iterations = accepted;
    res.gradient_norm = norm2(g);
    return res;
}

TrainResult train_per_scale(const TrainingBatch& batch, const std::vector<FabParams>& init,
                            const LbfgsOptions& opts) {
    check_batch(batch);
    const int L = batch.levels;
    std::vector<double> x0;
    if (init.empty()) {
        if (!(batch.sigma > 0.0))
            throw ValidationError("train_per_scale: default init needs batch sigma > 0");
        for (int l = 1; l <= L; ++l) {
            // 2*sigma/l^2, floored at sigma/2: below the floor the
            // exponentials underflow against coarse-scale activities and
            // those coordinates start with an exactly zero gradient.
            // lambda2 starts above lambda1 to seed the forward-and-
            // backward regime rather than the boundary lambda2 = lambda1.
            const double lam = std::max(
                2.0 * batch.sigma / (static_cast<double>(l) * static_cast<double>(l)),
                0.5 * batch.sigma);
            x0.push_back(lam);
            x0.push_back(1.65 * lam);
        }
    } else {
        if (static_cast<int>(init.size()) != L)
            throw ValidationError("train_per_scale: init size does not match levels");
        for (const auto& p : init) {
            x0.push_back(p.lambda1);
            x0.push_back(p.lambda2);
        }
    }

    BatchEvaluator ev(batch);
    const auto loss = [&](std::span<const double> p) {
        return eval_objective(ev, p, TrainFamily::PerScaleFab);
    };
    const auto gradf = [&](std::span<const double> p) {
        return eval_gradient(ev, p, TrainFamily::PerScaleFab);
    };
    return run_training(loss, gradf, std::move(x0), opts);
}

TrainResult train_shared(const TrainingBatch& batch, const FabParams& init,
                         const LbfgsOptions& opts) {
    BatchEvaluator ev(batch);
    const auto loss = [&](std::span<const double> p) {
        return eval_objective(ev, p, TrainFamily::SharedFab);
    };
    const auto gradf = [&](std::span<const double> p) {
        return eval_gradient(ev, p, TrainFamily::SharedFab);
    };
    return run_training(loss, gradf, {init.lambda1, init.lambda2}, opts);
}

TrainResult train_shared_equal(const TrainingBatch& batch, double init_lambda,
                               const LbfgsOptions& opts) {
    BatchEvaluator ev(batch);
    const auto loss = [&](std::span<const double> p) {
        return eval_objective(ev, p, TrainFamily::SharedFabEqual);
    };
    const auto gradf = [&](std::span<const double> p) {
        return eval_gradient(ev, p, TrainFamily::SharedFabEqual);
    };
    return run_training(loss, gradf, {init_lambda}, opts);
}

TrainResult train_generic(const std::vector<TrainingBatch>& batches, const GenericParams& init,
                          const LbfgsOptions& opts) {
    if (batches.empty()) throw ValidationError("train_generic: no batches");
    std::vector<double> sigmas;
    for (const auto& b : batches) {
        check_batch(b);
        if (!(b.sigma > 0.0)) throw ValidationError("train_generic: batch sigma must be > 0");
        if (std::find(sigmas.begin(), sigmas.end(), b.sigma) == sigmas.end())
            sigmas.push_back(b.sigma);
    }
    if (sigmas.size() < 3)
        throw ValidationError("train_generic: batches must cover at least 3 distinct sigmas");

    std::vector<BatchEvaluator> evs;
    evs.reserve(batches.size());
    for (const auto& b : batches) evs.emplace_back(b);

    const auto loss = [&](std::span<const double> p) {
        double acc = 0.0;
        for (const auto& ev : evs) acc += eval_objective(ev, p, TrainFamily::Generic);
        return acc / static_cast<double>(evs.size());
    };
    const auto gradf = [&](std::span<const double> p) {
        std::vector<double> acc(p.size(), 0.0);
        for (const auto& ev : evs) {
            const auto g = eval_gradient(ev, p, TrainFamily::Generic);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
        }
        for (double& v : acc) v /= static_cast<double>(evs.size());
        return acc;
    };
    return run_training(loss, gradf, {init.alpha, init.beta}, opts);
}

double tune_threshold(ShrinkRule rule, const TrainingBatch& batch) {
    if (rule != ShrinkRule::Soft && rule != ShrinkRule::Hard && rule != ShrinkRule::Garrote)
        throw ValidationError("tune_threshold: rule must be soft, hard, or garrote");
    check_batch(batch);
    if (!(batch.sigma > 0.0)) return 0.0; // search domain [0, 10*sigma] collapses

    BatchEvaluator ev(batch);
    ShrinkageSpec probe;
    probe.rule = rule;
    const auto obj = [&](double theta) {
        probe.theta = theta;
        return ev.loss([&](int level, double s2) { return coupled_multiplier(probe, level, s2); });
    };

    const double hi = 10.0 * batch.sigma;
    constexpr int kGridPoints = 33;
    double best_theta = 0.0, best_val = obj(0.0);
    for (int i = 1; i < kGridPoints; ++i) {
        const double theta = hi * static_cast<double>(i) / (kGridPoints - 1);
        const double v = obj(theta);
        if (v < best_val) {
            best_val = v;
            best_theta = theta;
        }
    }

    const double step = hi / (kGridPoints - 1);
    const double a = std::max(0.0, best_theta - step);
    const double b = std::min(hi, best_theta + step);
    const double refined = golden_section_min(obj, a, b, std::max(1e-7 * hi, 1e-12));
    // Never return a point worse than the grid minimum.
    return obj(refined) <= best_val ? refined : best_theta;
}

void save_train_result(const ShrinkageSpec& spec, int levels, const TrainResult& result,
                       const std::string& path, const std::vector<std::string>& comments) {
    std::vector<std::string> all = comments;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "iterations %d", result.iterations);
    all.emplace_back(buf);
    std::snprintf(buf, sizeof(buf), "final_loss %.17g", result.final_loss);
    all.emplace_back(buf);
    std::snprintf(buf, sizeof(buf), "gradient_norm %.17g", result.gradient_norm);
    all.emplace_back(buf);
    for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "trace,%zu,%.17g", i, result.loss_trace[i]);
        all.emplace_back(buf);
    }
    save_spec(spec, levels, path, all);
}

} // namespace wshrink
