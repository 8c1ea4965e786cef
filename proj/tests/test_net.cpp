#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "cardest/net.hpp"
#include "cardest/rng.hpp"
#include "doctest.h"

using namespace cardest;
using nn::Activation;

namespace {

nn::DenseNet tiny_net(std::vector<int> dims, std::vector<Activation> acts, std::uint64_t seed) {
    return nn::init_net(std::move(dims), std::move(acts), seed, {64.0, 1});
}

}  // namespace

TEST_CASE("mlp dims follow the L, L/2, L/2 shape") {
    CHECK(nn::mlp_dims(301, 1) == std::vector<int>{301, 301, 150, 150, 1});
    CHECK(nn::mlp_dims(101, 1) == std::vector<int>{101, 101, 50, 50, 1});
    CHECK(nn::mlp_dims(803, 3) == std::vector<int>{803, 803, 401, 401, 3});
    CHECK(nn::mlp_dims(303, 3) == std::vector<int>{303, 303, 151, 151, 3});
}

TEST_CASE("init_net is deterministic and bounded") {
    const auto a = tiny_net({8, 8, 4, 4, 1}, nn::mlp_activations(), 42);
    const auto b = tiny_net({8, 8, 4, 4, 1}, nn::mlp_activations(), 42);
    CHECK(a.weights == b.weights);
    CHECK(a.biases == b.biases);

    for (std::size_t l = 0; l < a.num_layers(); ++l) {
        const double bound =
            std::sqrt(6.0 / (a.layer_dims[l] + a.layer_dims[l + 1]));
        for (double w : a.weights[l]) CHECK(std::abs(w) <= bound);
        for (double bias : a.biases[l]) CHECK(bias == 0.0);
    }

    const auto c = tiny_net({8, 8, 4, 4, 1}, nn::mlp_activations(), 43);
    CHECK(a.weights != c.weights);
}

TEST_CASE("init_net rejects inconsistent shapes") {
    CHECK_THROWS_AS(nn::init_net({4}, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(nn::init_net({4, 2}, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(nn::init_net({4, 0, 1}, nn::mlp_activations(), 1), std::invalid_argument);
}

TEST_CASE("forward of an identity linear layer is the identity") {
    nn::DenseNet net;
    net.layer_dims = {2, 2};
    net.activations = {Activation::Linear};
    net.weights = {{1, 0, 0, 1}};
    net.biases = {{0, 0}};
    const std::vector<double> x = {0.3, -0.7};
    CHECK(nn::forward(net, x) == x);
}

TEST_CASE("forward matches a pencil-and-paper 2-2-1 computation") {
    nn::DenseNet net;
    net.layer_dims = {2, 2, 1};
    net.activations = {Activation::ReLU, Activation::Linear};
    net.weights = {{0.5, -1.0, 2.0, 1.0}, {1.5, -0.5}};
    net.biases = {{0.1, -0.2}, {0.25}};
    // x = (1, 2): pre1 = (0.5*1 - 1*2 + 0.1, 2*1 + 1*2 - 0.2) = (-1.4, 3.8)
    // relu -> (0, 3.8); out = 1.5*0 - 0.5*3.8 + 0.25 = -1.65
    const auto y = nn::forward(net, std::vector<double>{1.0, 2.0});
    CHECK(y[0] == doctest::Approx(-1.65).epsilon(1e-12));
}

TEST_CASE("forward output is finite and length errors throw") {
    const auto net = tiny_net({6, 6, 3, 3, 1}, nn::mlp_activations(), 7);
    const std::vector<double> x = {0.1, 0.9, 0.4, 0.0, 1.0, 0.2};
    for (double v : nn::forward(net, x)) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(nn::forward(net, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("loss_mse cases") {
    CHECK(nn::loss_mse(std::vector<double>{3.0}, std::vector<double>{3.0}) == 0.0);
    CHECK(nn::loss_mse(std::vector<double>{3.0}, std::vector<double>{1.0}) == 4.0);
    CHECK(nn::loss_mse(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}) == 5.0);
    CHECK_THROWS_AS(nn::loss_mse(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("loss_distill endpoints and affinity in alpha") {
    const std::vector<double> student = {3.0}, teacher = {2.0}, target = {1.0};
    CHECK(nn::loss_distill(student, teacher, target, 1.0) == nn::loss_mse(student, target));
    CHECK(nn::loss_distill(student, teacher, target, 0.0) == nn::loss_mse(teacher, target));
    CHECK(nn::loss_distill(student, teacher, target, 0.1) ==
          doctest::Approx(0.1 * 4.0 + 0.9 * 1.0).epsilon(1e-15));

    // affine in alpha: exact linear interpolation at grid points
    const double at0 = nn::loss_distill(student, teacher, target, 0.0);
    const double at1 = nn::loss_distill(student, teacher, target, 1.0);
    for (int i = 0; i <= 10; ++i) {
        const double alpha = i / 10.0;
        const double expect = at0 + alpha * (at1 - at0);
        CHECK(std::abs(nn::loss_distill(student, teacher, target, alpha) - expect) < 1e-12);
    }
    CHECK_THROWS_AS(nn::loss_distill(student, teacher, target, 1.5), std::invalid_argument);
}

TEST_CASE("backward of a 1-1 linear net matches calculus") {
    nn::DenseNet net;
    net.layer_dims = {1, 1};
    net.activations = {Activation::Linear};
    net.weights = {{0.7}};
    net.biases = {{0.0}};
    const double x = 1.3, y = 2.0;
    nn::BatchCache cache;
    std::vector<double> yhat(1);
    nn::forward_batch(net, &x, 1, yhat.data(), &cache);
    const double dLdy = 2.0 * (yhat[0] - y);
    nn::Gradients grads;
    nn::backward_batch(net, &x, 1, cache, &dLdy, grads);
    CHECK(grads.dw[0][0] == doctest::Approx(2.0 * (0.7 * x - y) * x).epsilon(1e-12));
    CHECK(grads.db[0][0] == doctest::Approx(2.0 * (0.7 * x - y)).epsilon(1e-12));
}

TEST_CASE("zero upstream gradient gives zero parameter gradients") {
    const auto net = tiny_net({5, 5, 2, 2, 1}, nn::mlp_activations(), 3);
    const std::vector<double> x = {0.2, 0.4, 0.6, 0.8, 1.0};
    nn::BatchCache cache;
    std::vector<double> yhat(1);
    nn::forward_batch(net, x.data(), 1, yhat.data(), &cache);
    const double zero = 0.0;
    nn::Gradients grads;
    nn::backward_batch(net, x.data(), 1, cache, &zero, grads);
    for (const auto& layer : grads.dw)
        for (double g : layer) CHECK(g == 0.0);
    for (const auto& layer : grads.db)
        for (double g : layer) CHECK(g == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(2024);
    for (int rep = 0; rep < 5; ++rep) {
        const int in = rng.uniform_int(2, 6);
        const int hidden = rng.uniform_int(2, 8);
        const int out = rng.uniform_int(1, 3);
        nn::DenseNet net;
        std::vector<double> x(in), target(out);
        nn::BatchCache cache;
        std::vector<double> yhat(out), dLdy(out);
        // resample until every ReLU pre-activation is clear of the kink,
        // so the central difference stays on one linear piece
        for (;;) {
            net = nn::init_net({in, hidden, std::max(1, hidden / 2), out},
                               {Activation::ReLU, Activation::Sigmoid, Activation::Linear},
                               rng.next_u64(), {1.0, out});
            for (auto& v : x) v = rng.uniform01() + 0.25;
            for (auto& v : target) v = rng.uniform01();
            nn::forward_batch(net, x.data(), 1, yhat.data(), &cache);
            bool clear = true;
            for (double pre : cache.pre[0])
                if (std::abs(pre) < 1e-3) clear = false;
            if (clear) break;
        }
        for (int j = 0; j < out; ++j) dLdy[j] = 2.0 * (yhat[j] - target[j]);
        nn::Gradients grads;
        nn::backward_batch(net, x.data(), 1, cache, dLdy.data(), grads);

        const double step = 1e-5;
        auto loss_at = [&]() {
            const auto y = nn::forward(net, x);
            return nn::loss_mse(y, target);
        };
        for (std::size_t l = 0; l < net.num_layers(); ++l) {
            for (std::size_t i = 0; i < net.weights[l].size(); ++i) {
                const double saved = net.weights[l][i];
                net.weights[l][i] = saved + step;
                const double up = loss_at();
                net.weights[l][i] = saved - step;
                const double down = loss_at();
                net.weights[l][i] = saved;
                const double numeric = (up - down) / (2.0 * step);
                const double analytic = grads.dw[l][i];
                const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
                CHECK(std::abs(numeric - analytic) / scale < 1e-4);
            }
            for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
                const double saved = net.biases[l][i];
                net.biases[l][i] = saved + step;
                const double up = loss_at();
                net.biases[l][i] = saved - step;
                const double down = loss_at();
                net.biases[l][i] = saved;
                const double numeric = (up - down) / (2.0 * step);
                const double analytic = grads.db[l][i];
                const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
                CHECK(std::abs(numeric - analytic) / scale < 1e-4);
            }
        }
    }
}

TEST_CASE("fit_single decreases the loss monotonically on a linear net") {
    nn::DenseNet net;
    net.layer_dims = {1, 1};
    net.activations = {Activation::Linear};
    net.weights = {{0.1}};
    net.biases = {{0.0}};
    const std::vector<double> x = {1.0}, target = {0.9};
    double prev = nn::loss_mse(nn::forward(net, x), target);
    for (int i = 0; i < 20; ++i) {
        nn::fit_single(net, x, target, 0.05, 1);
        const double now = nn::loss_mse(nn::forward(net, x), target);
        CHECK(now <= prev + 1e-15);
        prev = now;
    }
    CHECK(prev < 0.1);
    CHECK_THROWS_AS(nn::fit_single(net, x, target, 0.05, 0), std::invalid_argument);
}

TEST_CASE("fit_single_distill at alpha=0 leaves the net unchanged") {
    auto net = tiny_net({4, 4, 2, 2, 1}, nn::mlp_activations(), 5);
    const auto before = net.weights;
    const std::vector<double> x = {0.1, 0.2, 0.3, 0.4}, target = {0.5};
    nn::fit_single_distill(net, x, target, 0.0, 0.1, 3);
    CHECK(net.weights == before);
    nn::fit_single_distill(net, x, target, 0.5, 0.1, 1);
    CHECK(net.weights != before);
}

TEST_CASE("predict unscales and clamps to [0, n_max]") {
    nn::DenseNet net;
    net.layer_dims = {1, 1};
    net.activations = {Activation::Linear};
    net.weights = {{2.0}};
    net.biases = {{0.0}};
    net.scaling = {64.0, 1};
    feat::FeatureVector fv;
    fv.values = {2.0};  // raw output 4.0 -> 256 unscaled -> clamp 64
    CHECK(nn::predict(net, fv)[0] == 64.0);
    fv.values = {-1.0};
    CHECK(nn::predict(net, fv)[0] == 0.0);
    fv.values = {0.25};
    CHECK(nn::predict(net, fv)[0] == doctest::Approx(32.0));
}

TEST_CASE("save/load round-trip is bit-exact") {
    const auto net = tiny_net({7, 7, 3, 3, 2}, nn::mlp_activations(), 99);
    const auto path = std::filesystem::temp_directory_path() / "cardest_net_test.json";
    nn::save_net(net, path);
    const auto loaded = nn::load_net(path);
    CHECK(loaded.layer_dims == net.layer_dims);
    CHECK(loaded.activations == net.activations);
    CHECK(loaded.weights == net.weights);
    CHECK(loaded.biases == net.biases);
    CHECK(loaded.scaling.n_max == net.scaling.n_max);
    CHECK(loaded.scaling.num_types == net.scaling.num_types);

    const std::vector<double> x = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    CHECK(nn::forward(net, x) == nn::forward(loaded, x));
    std::filesystem::remove(path);
}

TEST_CASE("load_net rejects truncated files and version mismatches") {
    const auto net = tiny_net({3, 3, 1}, {Activation::ReLU, Activation::Linear}, 1);
    const auto dir = std::filesystem::temp_directory_path();
    const auto good = dir / "cardest_net_good.json";
    nn::save_net(net, good);

    std::ifstream in(good);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    const auto truncated = dir / "cardest_net_trunc.json";
    std::ofstream(truncated) << text.substr(0, text.size() / 2);
    CHECK_THROWS(nn::load_net(truncated));

    const auto wrong_version = dir / "cardest_net_version.json";
    std::string bumped = text;
    const auto pos = bumped.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    bumped.replace(pos, 18, "\"format_version\":9");
    std::ofstream(wrong_version) << bumped;
    bool version_error = false;
    try {
        nn::load_net(wrong_version);
    } catch (const std::runtime_error& e) {
        version_error = std::string(e.what()).find("format_version") != std::string::npos;
    }
    CHECK(version_error);

    std::filesystem::remove(good);
    std::filesystem::remove(truncated);
    std::filesystem::remove(wrong_version);
}
