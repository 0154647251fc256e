#include "pcae/autoencoder.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pcae/errors.hpp"

namespace pcae {

namespace {

void check_batch(const AutoencoderParams& params, const Matrix& batch) {
    if (batch.rows() != params.input_dim())
        throw DimensionError("batch has " + std::to_string(batch.rows()) +
                             " rows, expected " + std::to_string(params.input_dim()));
    if (batch.cols() == 0)
        throw DimensionError("empty batch");
}

void adam_update_tensor(double* param, double* m1, double* m2, const double* grad,
                        std::size_t count, const AdamState& state, double lr) {
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < count; ++i) {
        m1[i] = state.beta1 * m1[i] + (1.0 - state.beta1) * grad[i];
        m2[i] = state.beta2 * m2[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double mhat = m1[i] / bc1;
        const double vhat = m2[i] / bc2;
        param[i] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
    }
}

} // namespace

AdamState AdamState::zeros_like(const AutoencoderParams& params) {
    AdamState s;
    s.first_moment.w1 = Matrix(params.w1.rows(), params.w1.cols());
    s.first_moment.b1.assign(params.b1.size(), 0.0);
    s.first_moment.w2 = Matrix(params.w2.rows(), params.w2.cols());
    s.first_moment.b2.assign(params.b2.size(), 0.0);
    s.second_moment = s.first_moment;
    return s;
}

void TrainConfig::validate() const {
    if (learning_rate <= 0.0)
        throw ConfigError("learning_rate must be positive");
    if (weight_decay < 0.0)
        throw ConfigError("weight_decay must be non-negative");
    if (batch_size < 1)
        throw ConfigError("batch_size must be >= 1");
    if (init_scale <= 0.0)
        throw ConfigError("init_scale must be positive");
}

AutoencoderParams init_params(std::size_t n, std::size_t m, const TrainConfig& config,
                              RandomSource& rng) {
    if (m >= n)
        throw ConfigError("bottleneck requires m < n (got m=" + std::to_string(m) +
                          ", n=" + std::to_string(n) + ")");
    config.validate();
    AutoencoderParams p;
    p.w1 = gaussian_fill(rng, m, n, config.init_scale);
    p.b1.assign(m, 0.0);
    p.w2 = gaussian_fill(rng, n, m, config.init_scale);
    p.b2.assign(n, 0.0);
    return p;
}

ForwardResult forward(const AutoencoderParams& params, const Matrix& batch) {
    check_batch(params, batch);
    ForwardResult r;
    r.codes = matmul(params.w1, batch);
    for (std::size_t i = 0; i < r.codes.rows(); ++i)
        for (std::size_t j = 0; j < r.codes.cols(); ++j)
            r.codes(i, j) += params.b1[i];
    r.recon = matmul(params.w2, r.codes);
    for (std::size_t i = 0; i < r.recon.rows(); ++i)
        for (std::size_t j = 0; j < r.recon.cols(); ++j)
            r.recon(i, j) += params.b2[i];
    return r;
}

double loss(const AutoencoderParams& params, const Matrix& batch, double weight_decay) {
    const ForwardResult r = forward(params, batch);
    const double recon_err =
        frobenius_norm_sq(subtract(batch, r.recon)) / static_cast<double>(batch.cols());
    return recon_err +
           weight_decay * 0.5 * (frobenius_norm_sq(params.w1) + frobenius_norm_sq(params.w2));
}

Gradients gradients(const AutoencoderParams& params, const Matrix& batch, double weight_decay) {
    const ForwardResult r = forward(params, batch);
    const std::size_t b = batch.cols();
    const double inv_b = 2.0 / static_cast<double>(b);

    Matrix err = subtract(r.recon, batch);  // n x B

    Gradients g;
    g.w2 = scale(matmul(err, transpose(r.codes)), inv_b);
    const Matrix back = matmul(transpose(params.w2), err);  // m x B
    g.w1 = scale(matmul(back, transpose(batch)), inv_b);

    if (weight_decay > 0.0) {
        g.w1 = add(g.w1, scale(params.w1, weight_decay));
        g.w2 = add(g.w2, scale(params.w2, weight_decay));
    }

    g.b2.assign(params.b2.size(), 0.0);
    for (std::size_t i = 0; i < err.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < err.cols(); ++j)
            s += err(i, j);
        g.b2[i] = inv_b * s;
    }
    g.b1.assign(params.b1.size(), 0.0);
    for (std::size_t i = 0; i < back.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < back.cols(); ++j)
            s += back(i, j);
        g.b1[i] = inv_b * s;
    }
    return g;
}

void adam_step(AutoencoderParams& params, const Gradients& grads, AdamState& state,
               double learning_rate) {
    if (grads.w1.rows() != params.w1.rows() || grads.w1.cols() != params.w1.cols() ||
        grads.w2.rows() != params.w2.rows() || grads.w2.cols() != params.w2.cols() ||
        grads.b1.size() != params.b1.size() || grads.b2.size() != params.b2.size())
        throw DimensionError("adam_step: gradient shapes do not match parameters");

    ++state.step_count;
    adam_update_tensor(params.w1.data(), state.first_moment.w1.data(),
                       state.second_moment.w1.data(), grads.w1.data(), params.w1.size(), state,
                       learning_rate);
    adam_update_tensor(params.b1.data(), state.first_moment.b1.data(),
                       state.second_moment.b1.data(), grads.b1.data(), params.b1.size(), state,
                       learning_rate);
    adam_update_tensor(params.w2.data(), state.first_moment.w2.data(),
                       state.second_moment.w2.data(), grads.w2.data(), params.w2.size(), state,
                       learning_rate);
    adam_update_tensor(params.b2.data(), state.first_moment.b2.data(),
                       state.second_moment.b2.data(), grads.b2.data(), params.b2.size(), state,
                       learning_rate);
}

std::pair<AutoencoderParams, TrainReport> train(const Dataset& dataset, std::size_t m,
                                                const TrainConfig& config) {
    config.validate();
    const std::size_t n = dataset.dim();
    const std::size_t count = dataset.count();
    if (m >= n)
        throw ConfigError("train: m must be < dataset dimension");
    if (count < config.batch_size)
        throw ConfigError("train: dataset smaller than one batch");

    RandomSource init_rng(config.seed);
    AutoencoderParams params = init_params(n, m, config, init_rng);
    AdamState state = AdamState::zeros_like(params);

    std::vector<double> mean(n, 0.0);
    if (config.center) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < count; ++j)
                s += dataset.observations(i, j);
            mean[i] = s / static_cast<double>(count);
        }
    }

    TrainReport report;
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t batches = (count + config.batch_size - 1) / config.batch_size;
    Matrix batch;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // Fresh seeded shuffle per epoch so runs are reproducible end to end.
        RandomSource shuffle_rng(config.seed + 1 + epoch);
        const std::vector<std::size_t> order = shuffle_rng.permutation(count);

        double epoch_loss = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t begin = b * config.batch_size;
            const std::size_t end = std::min(begin + config.batch_size, count);
            batch = Matrix(n, end - begin);
            for (std::size_t j = begin; j < end; ++j)
                for (std::size_t i = 0; i < n; ++i)
                    batch(i, j - begin) = dataset.observations(i, order[j]) - mean[i];

            epoch_loss += loss(params, batch, config.weight_decay);
            const Gradients g = gradients(params, batch, config.weight_decay);
            adam_step(params, g, state, config.learning_rate);
        }
        report.epoch_loss.push_back(epoch_loss / static_cast<double>(batches));
        if (!params.w1.all_finite() || !params.w2.all_finite())
            throw NumericError("train: parameters diverged (non-finite) at epoch " +
                               std::to_string(epoch));
    }

    if (config.center) {
        // Fold the mean into the biases: code = W1 (x - mu) + b1 and
        // recon = W2 code + b2 + mu, rewritten as a model over raw x.
        for (std::size_t i = 0; i < m; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                dot += params.w1(i, j) * mean[j];
            params.b1[i] -= dot;
        }
        for (std::size_t i = 0; i < n; ++i)
            params.b2[i] += mean[i];
    }

    report.final_loss = loss(params, dataset.observations, config.weight_decay);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(params), std::move(report)};
}

} // namespace pcae
