#pragma once

#include "wshrink/pipeline.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wshrink {

/// A batch of (noisy, clean) image pairs sharing one noise level and
/// one scale count.
struct TrainingBatch {
    std::vector<std::pair<Image, Image>> pairs; // (f_k, v_k)
    double sigma = 0.0;
    int levels = 0;
};

/// Parameter tying for the trainable rules.
///   PerScaleFab    2L parameters (lambda1, lambda2 per scale)
///   SharedFab      2 parameters, one pair for all scales
///   SharedFabEqual 1 parameter, lambda1 = lambda2 for all scales
///   Generic        2 parameters (alpha, beta)
enum class TrainFamily { PerScaleFab, SharedFab, SharedFabEqual, Generic };

std::size_t param_count(TrainFamily family, int levels);

/// Batch objective E = (1/K) sum_k ||u_k - v_k||^2 / N_k where u_k is
/// the reconstruction under the given parameters. Parameters are
/// supplied in the log domain and exponentiated internally, so every
/// evaluated lambda (or alpha, beta) is strictly positive.
double objective(std::span<const double> log_params, const TrainingBatch& batch,
                 TrainFamily family);

/// Analytic gradient of objective() w.r.t. the log-domain parameters.
/// Computed by pushing the residual through the synthesis adjoint; the
/// adjoint of the averaged-inversion synthesis is the analysis cascade
/// itself, so one extra analyze() per image covers all parameters.
std::vector<double> objective_gradient(std::span<const double> log_params,
                                       const TrainingBatch& batch, TrainFamily family);

/// Pooled forms over several batches (mean of per-batch objectives).
double objective(std::span<const double> log_params,
                 std::span<const TrainingBatch> batches, TrainFamily family);
std::vector<double> objective_gradient(std::span<const double> log_params,
                                       std::span<const TrainingBatch> batches,
                                       TrainFamily family);

struct LbfgsOptions {
    int memory = 10;
    int max_iter = 500;
    double grad_tol = 1e-6;
    double rel_loss_tol = 1e-10;
};

struct TrainResult {
    std::vector<double> params;      // natural domain
    double final_loss = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
    std::vector<double> loss_trace;  // loss at every accepted iterate
};

using LossFn = std::function<double(std::span<const double>)>;
using GradFn = std::function<std::vector<double>(std::span<const double>)>;

/// Limited-memory BFGS with backtracking Armijo line search. Stops on
/// gradient norm, relative loss stagnation, or the iteration cap, and
/// returns the best point seen. Throws NumericError (carrying the
/// offending point) if the loss or gradient is non-finite at x0 or at
/// an accepted iterate.
TrainResult optimize_lbfgs(const LossFn& loss, const GradFn& grad,
                           std::vector<double> x0, const LbfgsOptions& opts = {});

/// Trains per-scale (lambda1, lambda2). Default init is
/// lambda1 = lambda2 = 2*sigma/l^2. Result params are in the natural
/// domain, ordered (l1^1, l2^1, l1^2, l2^2, ...).
TrainResult train_per_scale(const TrainingBatch& batch,
                            const std::vector<FabParams>& init = {},
                            const LbfgsOptions& opts = {});

/// Variants used by the ablation study.
TrainResult train_shared(const TrainingBatch& batch, const FabParams& init,
                         const LbfgsOptions& opts = {});
TrainResult train_shared_equal(const TrainingBatch& batch, double init_lambda,
                               const LbfgsOptions& opts = {});

/// Fits (alpha, beta) over batches spanning several noise levels
/// (at least 3 distinct sigmas required).
TrainResult train_generic(const std::vector<TrainingBatch>& batches,
                          const GenericParams& init = {},
                          const LbfgsOptions& opts = {});

/// Minimizes the batch objective over theta in [0, 10*sigma]: 33-point
/// grid scan, then golden-section refinement on the bracketing
/// interval. The returned theta is never worse than any grid point.
double tune_threshold(ShrinkRule rule, const TrainingBatch& batch);

/// Writes a trained spec plus its loss trace as '# trace,<i>,<loss>'
/// comment lines. The file is a valid spec file; load_spec() reads it.
void save_train_result(const ShrinkageSpec& spec, int levels, const TrainResult& result,
                       const std::string& path,
                       const std::vector<std::string>& comments = {});

} // namespace wshrink
