#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pcae/dataset.hpp"
#include "pcae/matrix.hpp"
#include "pcae/random.hpp"

namespace pcae {

// Single-hidden-layer linear autoencoder: codes = W1 y + b1 (bottleneck,
// m < n), reconstruction = W2 codes + b2. No activation function anywhere.
struct AutoencoderParams {
    Matrix w1;               // m x n
    std::vector<double> b1;  // m
    Matrix w2;               // n x m
    std::vector<double> b2;  // n

    std::size_t input_dim() const { return w1.cols(); }
    std::size_t code_dim() const { return w1.rows(); }
};

struct Gradients {
    Matrix w1;
    std::vector<double> b1;
    Matrix w2;
    std::vector<double> b2;
};

struct AdamState {
    Gradients first_moment;
    Gradients second_moment;
    long step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState zeros_like(const AutoencoderParams& params);
};

struct TrainConfig {
    // Defaults are tuned for the synthetic planted-spectrum suite (n=20, N=2000).
    // The small batch + low rate combination gives the weight-decay term enough
    // steps to break the rotational symmetry inside the principal subspace, which
    // is what makes the recovered singular vectors line up with individual
    // loading vectors instead of an arbitrary rotation of them.
    double learning_rate = 5e-4;
    double weight_decay = 0.4;  // coefficient of 0.5*||W||_F^2 per weight matrix, never biases
    std::size_t batch_size = 8;
    std::size_t epochs = 200;
    std::uint64_t seed = 2;
    double init_scale = 0.01;
    // Subtract the dataset mean during optimization and fold it back into the
    // biases afterwards. The returned model is exactly equivalent (it maps raw
    // inputs), but optimization no longer has to track the mean through the
    // bias terms, which matters for data with a large mean (e.g. images).
    bool center = false;

    void validate() const;
};

struct TrainReport {
    std::vector<double> epoch_loss;  // mean batch loss per epoch
    double final_loss = 0.0;
    double wall_seconds = 0.0;
};

struct ForwardResult {
    Matrix codes;  // m x B
    Matrix recon;  // n x B
};

// Gaussian weights with std = init_scale, zero biases. Deterministic for a
// fixed config.seed.
AutoencoderParams init_params(std::size_t n, std::size_t m, const TrainConfig& config,
                              RandomSource& rng);

ForwardResult forward(const AutoencoderParams& params, const Matrix& batch);

// Mean over batch columns of the squared reconstruction error, plus
// weight_decay * 0.5 * (||W1||_F^2 + ||W2||_F^2).
double loss(const AutoencoderParams& params, const Matrix& batch, double weight_decay);

Gradients gradients(const AutoencoderParams& params, const Matrix& batch, double weight_decay);

// Standard Adam update with bias correction; increments state.step_count.
void adam_step(AutoencoderParams& params, const Gradients& grads, AdamState& state,
               double learning_rate);

// Minibatch training over seeded-shuffled epochs. By default inputs are NOT
// centered (the bias terms absorb the data mean); with config.center the mean
// is subtracted during optimization and folded back into the biases, so the
// returned parameters always describe a model over the raw inputs.
std::pair<AutoencoderParams, TrainReport> train(const Dataset& dataset, std::size_t m,
                                                const TrainConfig& config);

} // namespace pcae
