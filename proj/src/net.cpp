#include "cardest/net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cardest/kernels.hpp"
#include "cardest/rng.hpp"
#include "json.hpp"

namespace cardest::nn {

namespace {

constexpr int kWeightFormatVersion = 1;

void apply_activation(Activation act, const double* pre, double* post, std::size_t n) {
    switch (act) {
        case Activation::ReLU:
            for (std::size_t i = 0; i < n; ++i) post[i] = pre[i] > 0.0 ? pre[i] : 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) post[i] = 1.0 / (1.0 + std::exp(-pre[i]));
            break;
        case Activation::Linear:
            std::copy_n(pre, n, post);
            break;
    }
}

// delta *= act'(z), using pre for ReLU and post for sigmoid.
void apply_activation_grad(Activation act, const double* pre, const double* post,
                           double* delta, std::size_t n) {
    switch (act) {
        case Activation::ReLU:
            for (std::size_t i = 0; i < n; ++i)
                if (pre[i] <= 0.0) delta[i] = 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < n; ++i) delta[i] *= post[i] * (1.0 - post[i]);
            break;
        case Activation::Linear:
            break;
    }
}

void check_shapes(const DenseNet& net) {
    if (net.layer_dims.size() < 2)
        throw std::invalid_argument("DenseNet: need at least input and output dims");
    if (net.activations.size() != net.layer_dims.size() - 1)
        throw std::invalid_argument("DenseNet: one activation per weight layer required");
    for (int d : net.layer_dims)
        if (d < 1) throw std::invalid_argument("DenseNet: layer dims must be positive");
}

}  // namespace

const char* activation_name(Activation activation) {
    switch (activation) {
        case Activation::ReLU: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Linear: return "linear";
    }
    return "unknown";
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::ReLU;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "linear") return Activation::Linear;
    throw std::invalid_argument("unknown activation: " + name);
}

std::vector<int> mlp_dims(int input_dim, int output_dim) {
    if (input_dim < 2 || output_dim < 1)
        throw std::invalid_argument("mlp_dims: bad input/output dims");
    return {input_dim, input_dim, input_dim / 2, input_dim / 2, output_dim};
}

std::vector<Activation> mlp_activations() {
    return {Activation::ReLU, Activation::Sigmoid, Activation::Sigmoid, Activation::Linear};
}

DenseNet init_net(std::vector<int> layer_dims, std::vector<Activation> activations,
                  std::uint64_t seed, Scaling scaling) {
    DenseNet net;
    net.layer_dims = std::move(layer_dims);
    net.activations = std::move(activations);
    net.scaling = scaling;
    check_shapes(net);

    Rng rng(seed);
    net.weights.resize(net.num_layers());
    net.biases.resize(net.num_layers());
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const int fan_in = net.layer_dims[l];
        const int fan_out = net.layer_dims[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        net.weights[l].resize(static_cast<std::size_t>(fan_out) * fan_in);
        for (auto& w : net.weights[l]) w = (rng.uniform01() * 2.0 - 1.0) * bound;
        net.biases[l].assign(fan_out, 0.0);
    }
    return net;
}

void forward_batch(const DenseNet& net, const double* x, int batch, double* y,
                   BatchCache* cache) {
    const std::size_t layers = net.num_layers();
    thread_local std::vector<double> scratch_a, scratch_b;
    std::vector<double>* cur = nullptr;

    if (cache) {
        cache->batch = batch;
        cache->pre.resize(layers);
        cache->post.resize(layers);
    }

    const double* input = x;
    for (std::size_t l = 0; l < layers; ++l) {
        const int in_dim = net.layer_dims[l];
        const int out_dim = net.layer_dims[l + 1];
        const std::size_t count = static_cast<std::size_t>(batch) * out_dim;

        double* pre;
        if (cache) {
            cache->pre[l].resize(count);
            pre = cache->pre[l].data();
        } else {
            std::vector<double>& buf = (cur == &scratch_a) ? scratch_b : scratch_a;
            buf.resize(count);
            pre = buf.data();
            cur = &buf;
        }

        kernels::gemm_nt(input, net.weights[l].data(), pre, batch, out_dim, in_dim);
        const double* bias = net.biases[l].data();
        for (int r = 0; r < batch; ++r) {
            double* row = pre + static_cast<std::size_t>(r) * out_dim;
            for (int j = 0; j < out_dim; ++j) row[j] += bias[j];
        }

        double* post = pre;  // activations applied in place unless cached
        if (cache) {
            cache->post[l].resize(count);
            post = cache->post[l].data();
        }
        apply_activation(net.activations[l], pre, post, count);
        input = post;
    }
    std::copy_n(input, static_cast<std::size_t>(batch) * net.output_dim(), y);
}

std::vector<double> forward(const DenseNet& net, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(net.input_dim()))
        throw std::invalid_argument("forward: input length mismatch");
    std::vector<double> y(net.output_dim());
    forward_batch(net, x.data(), 1, y.data());
    return y;
}

std::vector<double> predict(const DenseNet& net, const feat::FeatureVector& features) {
    std::vector<double> y = forward(net, features.values);
    for (double& v : y) v = std::clamp(v * net.scaling.n_max, 0.0, net.scaling.n_max);
    return y;
}

double loss_mse(std::span<const double> prediction, std::span<const double> target) {
    if (prediction.size() != target.size())
        throw std::invalid_argument("loss_mse: length mismatch");
    return kernels::sum_sq_diff(prediction.data(), target.data(), prediction.size());
}

double loss_distill(std::span<const double> student_pred,
                    std::span<const double> teacher_pred,
                    std::span<const double> target, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("loss_distill: alpha must lie in [0, 1]");
    return alpha * loss_mse(student_pred, target) +
           (1.0 - alpha) * loss_mse(teacher_pred, target);
}

void Gradients::init_for(const DenseNet& net) {
    dw.resize(net.num_layers());
    db.resize(net.num_layers());
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        dw[l].assign(net.weights[l].size(), 0.0);
        db[l].assign(net.biases[l].size(), 0.0);
    }
}

void backward_batch(const DenseNet& net, const double* x, int batch,
                    const BatchCache& cache, const double* dLdy, Gradients& out) {
    const std::size_t layers = net.num_layers();
    if (out.dw.size() != layers) out.init_for(net);

    thread_local std::vector<double> delta, delta_next;
    const std::size_t out_count = static_cast<std::size_t>(batch) * net.output_dim();
    delta.assign(dLdy, dLdy + out_count);
    apply_activation_grad(net.activations[layers - 1], cache.pre[layers - 1].data(),
                          cache.post[layers - 1].data(), delta.data(), out_count);

    for (std::size_t l = layers; l-- > 0;) {
        const int in_dim = net.layer_dims[l];
        const int out_dim = net.layer_dims[l + 1];
        const double* layer_input = (l == 0) ? x : cache.post[l - 1].data();

        kernels::gemm_tn(delta.data(), layer_input, out.dw[l].data(), out_dim, in_dim, batch);

        double* db = out.db[l].data();
        std::fill_n(db, out_dim, 0.0);
        for (int r = 0; r < batch; ++r) {
            const double* row = delta.data() + static_cast<std::size_t>(r) * out_dim;
            for (int j = 0; j < out_dim; ++j) db[j] += row[j];
        }

        if (l == 0) break;
        const std::size_t prev_count = static_cast<std::size_t>(batch) * in_dim;
        delta_next.resize(prev_count);
        kernels::gemm_nn(delta.data(), net.weights[l].data(), delta_next.data(), batch,
                         in_dim, out_dim);
        apply_activation_grad(net.activations[l - 1], cache.pre[l - 1].data(),
                              cache.post[l - 1].data(), delta_next.data(), prev_count);
        std::swap(delta, delta_next);
    }
}

namespace {

double fit_single_impl(DenseNet& net, std::span<const double> x,
                       std::span<const double> target, double grad_scale,
                       double learning_rate, int steps) {
    if (steps < 1) throw std::invalid_argument("fit_single: steps must be >= 1");
    if (x.size() != static_cast<std::size_t>(net.input_dim()))
        throw std::invalid_argument("fit_single: input length mismatch");
    if (target.size() != static_cast<std::size_t>(net.output_dim()))
        throw std::invalid_argument("fit_single: target length mismatch");

    BatchCache cache;
    Gradients grads;
    std::vector<double> yhat(net.output_dim());
    std::vector<double> dLdy(net.output_dim());
    double first_loss = 0.0;
    for (int s = 0; s < steps; ++s) {
        forward_batch(net, x.data(), 1, yhat.data(), &cache);
        if (s == 0) first_loss = loss_mse(yhat, target);
        if (grad_scale == 0.0) break;  // no gradient path; weights stay put
        for (int j = 0; j < net.output_dim(); ++j)
            dLdy[j] = 2.0 * grad_scale * (yhat[j] - target[j]);
        backward_batch(net, x.data(), 1, cache, dLdy.data(), grads);
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            double* w = net.weights[l].data();
            const double* dw = grads.dw[l].data();
            for (std::size_t i = 0; i < net.weights[l].size(); ++i)
                w[i] -= learning_rate * dw[i];
            double* b = net.biases[l].data();
            const double* db = grads.db[l].data();
            for (std::size_t i = 0; i < net.biases[l].size(); ++i)
                b[i] -= learning_rate * db[i];
        }
    }
    return first_loss;
}

}  // namespace

double fit_single(DenseNet& net, std::span<const double> x, std::span<const double> target,
                  double learning_rate, int steps) {
    return fit_single_impl(net, x, target, 1.0, learning_rate, steps);
}

double fit_single_distill(DenseNet& net, std::span<const double> x,
                          std::span<const double> target, double alpha,
                          double learning_rate, int steps) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("fit_single_distill: alpha must lie in [0, 1]");
    return fit_single_impl(net, x, target, alpha, learning_rate, steps);
}

void save_net(const DenseNet& net, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["format_version"] = kWeightFormatVersion;
    doc["layer_dims"] = net.layer_dims;
    std::vector<std::string> act_names;
    for (Activation a : net.activations) act_names.emplace_back(activation_name(a));
    doc["activations"] = act_names;
    doc["weights"] = net.weights;
    doc["biases"] = net.biases;
    doc["scaling"] = {{"n_max", net.scaling.n_max}, {"num_types", net.scaling.num_types}};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << doc.dump();
    out << "\n";
}

DenseNet load_net(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in);  // parse_error carries byte position

    const int version = doc.at("format_version").get<int>();
    if (version != kWeightFormatVersion)
        throw std::runtime_error("unsupported weight format_version " +
                                 std::to_string(version) + " (expected " +
                                 std::to_string(kWeightFormatVersion) + ")");

    DenseNet net;
    net.layer_dims = doc.at("layer_dims").get<std::vector<int>>();
    for (const auto& name : doc.at("activations"))
        net.activations.push_back(activation_from_name(name.get<std::string>()));
    net.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
    net.biases = doc.at("biases").get<std::vector<std::vector<double>>>();
    net.scaling.n_max = doc.at("scaling").at("n_max").get<double>();
    net.scaling.num_types = doc.at("scaling").at("num_types").get<int>();

    check_shapes(net);
    if (net.weights.size() != net.num_layers() || net.biases.size() != net.num_layers())
        throw std::runtime_error("weight file layer count mismatch");
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const std::size_t expect_w =
            static_cast<std::size_t>(net.layer_dims[l + 1]) * net.layer_dims[l];
        if (net.weights[l].size() != expect_w ||
            net.biases[l].size() != static_cast<std::size_t>(net.layer_dims[l + 1]))
            throw std::runtime_error("weight file shape mismatch at layer " + std::to_string(l));
    }
    return net;
}

}  // namespace cardest::nn
