#include "cardest/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cardest/kernels.hpp"
#include "cardest/rng.hpp"

namespace cardest::nn {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

// A test-loss drop below this relative size does not reset the patience
// counter; without it, asymptotic last-ulp improvements hold training open.
constexpr double kMinRelImprovement = 1e-4;

struct AdamState {
    std::vector<std::vector<double>> mw, vw, mb, vb;
    long step = 0;

    void init_for(const DenseNet& net) {
        mw.resize(net.num_layers());
        vw.resize(net.num_layers());
        mb.resize(net.num_layers());
        vb.resize(net.num_layers());
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            mw[l].assign(net.weights[l].size(), 0.0);
            vw[l].assign(net.weights[l].size(), 0.0);
            mb[l].assign(net.biases[l].size(), 0.0);
            vb[l].assign(net.biases[l].size(), 0.0);
        }
    }

    void apply(DenseNet& net, const Gradients& grads, double lr) {
        ++step;
        const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
        const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            kernels::adam_update(net.weights[l].data(), mw[l].data(), vw[l].data(),
                                 grads.dw[l].data(), net.weights[l].size(), lr, kAdamBeta1,
                                 kAdamBeta2, kAdamEps, bc1, bc2);
            kernels::adam_update(net.biases[l].data(), mb[l].data(), vb[l].data(),
                                 grads.db[l].data(), net.biases[l].size(), lr, kAdamBeta1,
                                 kAdamBeta2, kAdamEps, bc1, bc2);
        }
    }
};

void validate(const DenseNet& net, const TrainSet& data, const TrainConfig& config) {
    if (data.inputs.empty()) throw std::invalid_argument("fit_dataset: empty dataset");
    if (data.inputs.size() != data.targets.size())
        throw std::invalid_argument("fit_dataset: inputs/targets size mismatch");
    if (!data.teacher_sq_err.empty() && data.teacher_sq_err.size() != data.inputs.size())
        throw std::invalid_argument("fit_dataset: teacher_sq_err size mismatch");
    if (config.mixing_alpha < 0.0 || config.mixing_alpha > 1.0)
        throw std::invalid_argument("fit_dataset: mixing_alpha must lie in [0, 1]");
    if (config.mixing_alpha < 1.0 && data.teacher_sq_err.empty())
        throw std::invalid_argument("fit_dataset: distillation requires teacher_sq_err");
    if (config.train_fraction <= 0.0 || config.train_fraction >= 1.0)
        throw std::invalid_argument("fit_dataset: train_fraction must lie in (0, 1)");
    if (config.learning_rate <= 0.0 || config.batch_size < 1 || config.max_epochs < 1)
        throw std::invalid_argument("fit_dataset: bad learning_rate/batch_size/max_epochs");
    if (data.inputs.front().size() != static_cast<std::size_t>(net.input_dim()))
        throw std::invalid_argument("fit_dataset: input width does not match net");
    if (data.targets.front().size() != static_cast<std::size_t>(net.output_dim()))
        throw std::invalid_argument("fit_dataset: target width does not match net");
}

}  // namespace

FitResult fit_dataset(DenseNet& net, const TrainSet& data, const TrainConfig& config) {
    validate(net, data, config);

    const std::size_t n = data.inputs.size();
    const double alpha = config.mixing_alpha;
    const bool distill = !data.teacher_sq_err.empty();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(config.seed);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i)));
        std::swap(order[i], order[j]);
    }

    std::size_t train_count =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * config.train_fraction));
    train_count = std::clamp<std::size_t>(train_count, 1, n > 1 ? n - 1 : 1);
    const std::size_t test_count = n - train_count;

    const int in_dim = net.input_dim();
    const int out_dim = net.output_dim();
    const int batch_size = config.batch_size;

    AdamState adam;
    adam.init_for(net);
    Gradients grads;
    grads.init_for(net);
    BatchCache cache;
    std::vector<double> xbuf(static_cast<std::size_t>(batch_size) * in_dim);
    std::vector<double> ybuf(static_cast<std::size_t>(batch_size) * out_dim);
    std::vector<double> yhat(static_cast<std::size_t>(batch_size) * out_dim);
    std::vector<double> dLdy(static_cast<std::size_t>(batch_size) * out_dim);

    // Objective and plain-data MSE over an index range [first, last).
    auto evaluate = [&](std::size_t first, std::size_t last, double& objective,
                        double& data_mse) {
        objective = 0.0;
        data_mse = 0.0;
        for (std::size_t pos = first; pos < last; pos += batch_size) {
            const int b = static_cast<int>(std::min<std::size_t>(batch_size, last - pos));
            for (int r = 0; r < b; ++r) {
                const std::size_t idx = order[pos + r];
                std::copy_n(data.inputs[idx].data(), in_dim, xbuf.data() + r * in_dim);
                std::copy_n(data.targets[idx].data(), out_dim, ybuf.data() + r * out_dim);
            }
            forward_batch(net, xbuf.data(), b, yhat.data());
            for (int r = 0; r < b; ++r) {
                const std::size_t idx = order[pos + r];
                const double sq = kernels::sum_sq_diff(yhat.data() + r * out_dim,
                                                       ybuf.data() + r * out_dim, out_dim);
                data_mse += sq;
                objective += alpha * sq + (distill ? (1.0 - alpha) * data.teacher_sq_err[idx] : 0.0);
            }
        }
        const double denom = static_cast<double>(last - first);
        objective /= denom;
        data_mse /= denom;
    };

    FitResult result;
    double best_test = std::numeric_limits<double>::infinity();
    int stale_epochs = 0;

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        double train_accum = 0.0;
        for (std::size_t pos = 0; pos < train_count; pos += batch_size) {
            const int b = static_cast<int>(std::min<std::size_t>(batch_size, train_count - pos));
            for (int r = 0; r < b; ++r) {
                const std::size_t idx = order[pos + r];
                std::copy_n(data.inputs[idx].data(), in_dim, xbuf.data() + r * in_dim);
                std::copy_n(data.targets[idx].data(), out_dim, ybuf.data() + r * out_dim);
            }
            forward_batch(net, xbuf.data(), b, yhat.data(), &cache);
            const double grad_scale = 2.0 * alpha / b;
            for (int r = 0; r < b; ++r) {
                const std::size_t idx = order[pos + r];
                double sq = 0.0;
                for (int j = 0; j < out_dim; ++j) {
                    const double diff = yhat[r * out_dim + j] - ybuf[r * out_dim + j];
                    dLdy[r * out_dim + j] = grad_scale * diff;
                    sq += diff * diff;
                }
                train_accum +=
                    alpha * sq + (distill ? (1.0 - alpha) * data.teacher_sq_err[idx] : 0.0);
            }
            backward_batch(net, xbuf.data(), b, cache, dLdy.data(), grads);
            adam.apply(net, grads, config.learning_rate);
        }

        EpochLoss losses;
        losses.train = train_accum / static_cast<double>(train_count);
        if (test_count > 0) {
            evaluate(train_count, n, losses.test, losses.test_data_mse);
        } else {
            evaluate(0, train_count, losses.test, losses.test_data_mse);
        }
        result.curve.push_back(losses);
        ++result.epochs_run;

        if (config.early_stop_epoch > 0 && epoch + 1 >= config.early_stop_epoch) break;
        if (config.patience > 0) {
            if (losses.test < best_test * (1.0 - kMinRelImprovement)) {
                best_test = losses.test;
                stale_epochs = 0;
            } else if (++stale_epochs >= config.patience) {
                break;
            }
        }
    }

    result.final_test_data_mse = result.curve.back().test_data_mse;
    return result;
}

}  // namespace cardest::nn
