// pcae: PCA experiments with an exact spectral oracle and a linear
// autoencoder whose weights recover the loading vectors through SVD.
//
// Subcommands: synth, train, oracle, recover, report.
// Exit codes: 0 success, 2 usage/config error, 3 I/O error, 4 numerical error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcae/analysis.hpp"
#include "pcae/autoencoder.hpp"
#include "pcae/dataset.hpp"
#include "pcae/errors.hpp"
#include "pcae/io.hpp"
#include "pcae/spectral.hpp"

namespace fs = std::filesystem;
using namespace pcae;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

std::string default_out_dir() {
    const char* env = std::getenv("PCAE_OUT");
    return env ? env : ".";
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_manifest(const fs::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot write manifest: " + path.string());
    for (const auto& [k, v] : entries)
        out << k << '=' << v << '\n';
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// Sniff the on-disk format: PCAE container, IDX image file, or CSV.
Dataset load_dataset(const fs::path& path, CsvOrientation orientation) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw IoError("cannot open dataset: " + path.string());
    unsigned char head[4] = {0, 0, 0, 0};
    probe.read(reinterpret_cast<char*>(head), 4);
    probe.close();

    if (head[0] == 'P' && head[1] == 'C' && head[2] == 'A' && head[3] == 'E') {
        Dataset d;
        d.observations = read_matrix(path);
        d.source_tag = path.filename().string();
        return d;
    }
    if (head[0] == 0 && head[1] == 0 && head[2] == 0x08 && head[3] == 0x03)
        return read_idx_images(path);
    return read_csv_matrix(path, orientation);
}

std::vector<double> parse_stds(const std::string& csv) {
    std::vector<double> stds;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            stds.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("invalid --stds entry: '" + item + "'");
        }
    }
    if (stds.empty())
        throw ConfigError("--stds must contain at least one value");
    for (std::size_t i = 0; i + 1 < stds.size(); ++i)
        if (stds[i + 1] >= stds[i])
            throw ConfigError("--stds must be strictly descending");
    if (stds.back() <= 0.0)
        throw ConfigError("--stds must be positive");
    return stds;
}

void save_model(const PcaModel& model, const fs::path& dir) {
    write_matrix(model.loading_vectors, dir / "loading.pcae");
    Matrix mean(model.mean.size(), 1);
    for (std::size_t i = 0; i < model.mean.size(); ++i)
        mean(i, 0) = model.mean[i];
    write_matrix(mean, dir / "mean.pcae");
    if (!model.variances.empty()) {
        Matrix var(1, model.variances.size());
        for (std::size_t i = 0; i < model.variances.size(); ++i)
            var(0, i) = model.variances[i];
        write_csv_matrix(var, dir / "variances.csv");
    }
}

PcaModel load_model(const fs::path& dir) {
    PcaModel model;
    model.loading_vectors = read_matrix(dir / "loading.pcae");
    const Matrix mean = read_matrix(dir / "mean.pcae");
    model.mean.assign(mean.data(), mean.data() + mean.size());
    const fs::path var_path = dir / "variances.csv";
    if (fs::exists(var_path)) {
        const Dataset var = read_csv_matrix(var_path, CsvOrientation::ColumnsAreObservations);
        model.variances.assign(var.observations.data(),
                               var.observations.data() + var.observations.size());
    }
    return model;
}

AutoencoderParams load_weights(const fs::path& dir) {
    AutoencoderParams p;
    p.w1 = read_matrix(dir / "w1.pcae");
    p.w2 = read_matrix(dir / "w2.pcae");
    const Matrix b1 = read_matrix(dir / "b1.pcae");
    const Matrix b2 = read_matrix(dir / "b2.pcae");
    p.b1.assign(b1.data(), b1.data() + b1.size());
    p.b2.assign(b2.data(), b2.data() + b2.size());
    return p;
}

void save_weights(const AutoencoderParams& p, const fs::path& dir) {
    write_matrix(p.w1, dir / "w1.pcae");
    write_matrix(p.w2, dir / "w2.pcae");
    Matrix b1(p.b1.size(), 1), b2(p.b2.size(), 1);
    for (std::size_t i = 0; i < p.b1.size(); ++i)
        b1(i, 0) = p.b1[i];
    for (std::size_t i = 0; i < p.b2.size(); ++i)
        b2(i, 0) = p.b2[i];
    write_matrix(b1, dir / "b1.pcae");
    write_matrix(b2, dir / "b2.pcae");
}

ImageShape resolve_shape(const Dataset& data, const std::string& shape_flag) {
    if (!shape_flag.empty()) {
        const auto x = shape_flag.find('x');
        if (x == std::string::npos)
            throw ConfigError("--image-shape must look like HxW");
        ImageShape s;
        s.height = std::stoul(shape_flag.substr(0, x));
        s.width = std::stoul(shape_flag.substr(x + 1));
        return s;
    }
    if (data.image_shape)
        return *data.image_shape;
    throw ConfigError("dataset carries no image shape; pass --image-shape HxW to render");
}

struct SynthArgs {
    std::size_t n = 0;
    std::size_t count = 0;
    std::string stds;
    double mean_shift = 0.0;
    std::uint64_t seed = 0;
    std::string out = default_out_dir();
};

int run_synth(const SynthArgs& a) {
    const std::vector<double> stds = parse_stds(a.stds);
    if (stds.size() != a.n)
        throw ConfigError("--stds must list exactly n values");
    ensure_dir(a.out);

    RandomSource rng(a.seed);
    PlantedSpectrum spec;
    spec.basis = random_orthogonal(a.n, rng);
    spec.stds = stds;
    spec.mean.assign(a.n, 0.0);
    if (a.mean_shift != 0.0) {
        // Deterministic direction: the normalized all-ones vector.
        const double per_axis = a.mean_shift / std::sqrt(static_cast<double>(a.n));
        for (double& v : spec.mean)
            v = per_axis;
    }

    const Dataset data = synthesize_gaussian(spec, a.count, rng);
    const fs::path dir(a.out);
    write_matrix(data.observations, dir / "dataset.pcae");
    write_matrix(spec.basis, dir / "basis.pcae");
    Matrix stds_row(1, a.n);
    for (std::size_t i = 0; i < a.n; ++i)
        stds_row(0, i) = stds[i];
    write_csv_matrix(stds_row, dir / "stds.csv");

    write_manifest(dir / "manifest.txt", {
        {"subcommand", "synth"},
        {"n", std::to_string(a.n)},
        {"count", std::to_string(a.count)},
        {"stds", a.stds},
        {"mean_shift", fmt(a.mean_shift)},
        {"seed", std::to_string(a.seed)},
    });
    std::cout << "wrote " << (dir / "dataset.pcae").string() << " (" << a.n << "x" << a.count
              << ")\n";
    return 0;
}

struct TrainArgs {
    std::string data;
    std::size_t m = 0;
    TrainConfig config;
    std::string csv_orientation = "rows";
    std::string out = default_out_dir();
};

int run_train(const TrainArgs& a) {
    const Dataset data = load_dataset(a.data, a.csv_orientation == "rows"
                                                  ? CsvOrientation::RowsAreObservations
                                                  : CsvOrientation::ColumnsAreObservations);
    if (a.m >= data.dim())
        throw ConfigError("--m must be smaller than the data dimension " +
                          std::to_string(data.dim()));
    ensure_dir(a.out);

    auto [params, report] = train(data, a.m, a.config);
    const fs::path dir(a.out);
    save_weights(params, dir);

    Matrix trace(report.epoch_loss.size(), 1);
    for (std::size_t i = 0; i < report.epoch_loss.size(); ++i)
        trace(i, 0) = report.epoch_loss[i];
    write_csv_matrix(trace, dir / "loss.csv");

    std::vector<std::pair<std::string, std::string>> manifest = {
        {"subcommand", "train"},
        {"data", a.data},
        {"n", std::to_string(data.dim())},
        {"count", std::to_string(data.count())},
        {"m", std::to_string(a.m)},
        {"learning_rate", fmt(a.config.learning_rate)},
        {"weight_decay", fmt(a.config.weight_decay)},
        {"batch_size", std::to_string(a.config.batch_size)},
        {"epochs", std::to_string(a.config.epochs)},
        {"seed", std::to_string(a.config.seed)},
        {"init_scale", fmt(a.config.init_scale)},
        {"center", a.config.center ? "1" : "0"},
        {"final_loss", fmt(report.final_loss)},
        {"wall_seconds", fmt(report.wall_seconds)},
    };
    // The Eckart-Young comparison needs the full covariance spectrum; only
    // do it automatically at small dimension.
    if (data.dim() <= 256 && a.config.epochs > 0) {
        const EckartYoungResult ey = eckart_young_gap(data, params);
        manifest.emplace_back("recon_error", fmt(ey.recon_error));
        manifest.emplace_back("eckart_young_bound", fmt(ey.bound));
        manifest.emplace_back("eckart_young_gap", fmt(ey.gap));
    }
    write_manifest(dir / "manifest.txt", manifest);

    std::cout << "trained m=" << a.m << " for " << a.config.epochs
              << " epochs, final loss " << report.final_loss << "\n";
    return 0;
}

struct OracleArgs {
    std::string data;
    std::size_t m = 0;
    bool render = false;
    std::string image_shape;
    std::size_t grid_cols = 4;
    std::string csv_orientation = "rows";
    std::string out = default_out_dir();
};

int run_oracle(const OracleArgs& a) {
    const Dataset data = load_dataset(a.data, a.csv_orientation == "rows"
                                                  ? CsvOrientation::RowsAreObservations
                                                  : CsvOrientation::ColumnsAreObservations);
    if (data.dim() > 4096)
        throw ConfigError("oracle refuses n > 4096 (covariance would be formed explicitly); "
                          "use the autoencoder path instead");
    ensure_dir(a.out);

    const PcaModel model = oracle_pca(data, a.m);
    const fs::path dir(a.out);
    save_model(model, dir);
    if (a.render)
        write_pgm_grid(model.loading_vectors, resolve_shape(data, a.image_shape), a.grid_cols,
                       dir / "grid.pgm");

    write_manifest(dir / "manifest.txt", {
        {"subcommand", "oracle"},
        {"data", a.data},
        {"n", std::to_string(data.dim())},
        {"count", std::to_string(data.count())},
        {"m", std::to_string(a.m)},
        {"degenerate", model.degenerate ? "1" : "0"},
    });
    std::cout << "oracle model with " << a.m << " components written to " << a.out << "\n";
    return 0;
}

struct RecoverArgs {
    std::string weights;
    std::string data;
    std::size_t m = 0;
    std::string source = "w2";
    bool render = false;
    std::string image_shape;
    std::size_t grid_cols = 4;
    std::string csv_orientation = "rows";
    std::string out = default_out_dir();
};

int run_recover(const RecoverArgs& a) {
    const AutoencoderParams params = load_weights(a.weights);
    const Dataset data = load_dataset(a.data, a.csv_orientation == "rows"
                                                  ? CsvOrientation::RowsAreObservations
                                                  : CsvOrientation::ColumnsAreObservations);
    const std::size_t m = a.m > 0 ? a.m : params.code_dim();
    const RecoverySource source = a.source == "w1" ? RecoverySource::W1 : RecoverySource::W2;
    ensure_dir(a.out);

    PcaModel model;
    try {
        model = recover_loading_vectors(params, source, m);
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) +
                           " (try more training epochs or a lower weight decay)");
    }
    model = estimate_variances(model, data);

    const fs::path dir(a.out);
    save_model(model, dir);
    if (a.render)
        write_pgm_grid(model.loading_vectors, resolve_shape(data, a.image_shape), a.grid_cols,
                       dir / "grid.pgm");

    write_manifest(dir / "manifest.txt", {
        {"subcommand", "recover"},
        {"weights", a.weights},
        {"data", a.data},
        {"m", std::to_string(m)},
        {"source", a.source},
        {"degenerate", model.degenerate ? "1" : "0"},
    });
    std::cout << "recovered " << m << " loading vectors from " << a.source << "\n";
    return 0;
}

struct ReportArgs {
    std::string model;
    std::string data;
    std::string ref_model;
    std::string weights;
    bool no_svd = false;
    std::string csv_orientation = "rows";
    std::string out = default_out_dir();
};

int run_report(const ReportArgs& a) {
    const Dataset data = load_dataset(a.data, a.csv_orientation == "rows"
                                                  ? CsvOrientation::RowsAreObservations
                                                  : CsvOrientation::ColumnsAreObservations);
    ensure_dir(a.out);
    const fs::path dir(a.out);

    DiagnosticsReport report;
    Matrix scores;
    std::optional<PcaModel> model;

    if (a.no_svd) {
        if (a.weights.empty())
            throw ConfigError("--no-svd needs --weights (it transforms by raw W2^T)");
        const AutoencoderParams params = load_weights(a.weights);
        const std::vector<double> mean = column_mean(data.observations);
        scores = matmul(transpose(params.w2), subtract_column(data.observations, mean));
    } else {
        if (a.model.empty())
            throw ConfigError("--model is required (or pass --no-svd with --weights)");
        model = load_model(a.model);
        scores = transform(*model, data);
    }

    const CovarianceReport cov = covariance_report(scores);
    report.offdiag_ratio = cov.offdiag_ratio;
    report.descending_ok = cov.descending_ok;
    write_csv_matrix(cov.covariance, dir / "covariance.csv");

    if (model) {
        const EckartYoungResult ey = eckart_young_gap(data, *model);
        report.recon_error = ey.recon_error;
        report.eckart_young_bound = ey.bound;
        report.eckart_young_gap = ey.gap;
    }
    if (!a.weights.empty()) {
        const AutoencoderParams params = load_weights(a.weights);
        report.pseudoinverse_residual = pseudoinverse_residual(params);
    }
    if (!a.ref_model.empty() && model) {
        const PcaModel ref = load_model(a.ref_model);
        report.principal_angles_deg =
            principal_angles_deg(model->loading_vectors, ref.loading_vectors);
    }

    report.write(dir / "report.txt");
    write_manifest(dir / "manifest.txt", {
        {"subcommand", "report"},
        {"model", a.model},
        {"data", a.data},
        {"ref_model", a.ref_model},
        {"weights", a.weights},
        {"no_svd", a.no_svd ? "1" : "0"},
    });
    std::cout << report.to_key_values();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PCA via spectral oracle and linear autoencoder weight recovery"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a planted-spectrum Gaussian dataset");
    cmd_synth->add_option("--n", synth.n, "Data dimension")->required();
    cmd_synth->add_option("--count", synth.count, "Number of observations")->required();
    cmd_synth->add_option("--stds", synth.stds,
                          "Comma-separated per-axis stds, strictly descending")->required();
    cmd_synth->add_option("--mean-shift", synth.mean_shift, "Norm of the planted mean vector");
    cmd_synth->add_option("--seed", synth.seed, "RNG seed");
    cmd_synth->add_option("--out", synth.out, "Output directory");

    TrainArgs tr;
    auto* cmd_train = app.add_subcommand("train", "Train the linear autoencoder");
    cmd_train->add_option("--data", tr.data, "Dataset file (PCAE, CSV, or IDX)")->required();
    cmd_train->add_option("--m", tr.m, "Bottleneck width")->required();
    cmd_train->add_option("--lr", tr.config.learning_rate, "Adam learning rate");
    cmd_train->add_option("--wd", tr.config.weight_decay, "Weight decay coefficient");
    cmd_train->add_option("--batch", tr.config.batch_size, "Minibatch size");
    cmd_train->add_option("--epochs", tr.config.epochs, "Training epochs");
    cmd_train->add_option("--seed", tr.config.seed, "RNG seed");
    cmd_train->add_option("--init-scale", tr.config.init_scale, "Init weight std");
    cmd_train->add_flag("--center", tr.config.center,
                        "Subtract the data mean during optimization (folded back into "
                        "the biases; the saved model still maps raw inputs)");
    cmd_train->add_option("--csv-orientation", tr.csv_orientation, "rows|cols")
        ->check(CLI::IsMember({"rows", "cols"}));
    cmd_train->add_option("--out", tr.out, "Output directory");

    OracleArgs orc;
    auto* cmd_oracle = app.add_subcommand("oracle", "Exact PCA via covariance eigendecomposition");
    cmd_oracle->add_option("--data", orc.data, "Dataset file")->required();
    cmd_oracle->add_option("--m", orc.m, "Number of components")->required();
    cmd_oracle->add_flag("--render", orc.render, "Write a PGM grid of the loading vectors");
    cmd_oracle->add_option("--image-shape", orc.image_shape, "HxW for rendering");
    cmd_oracle->add_option("--grid-cols", orc.grid_cols, "Grid columns for rendering");
    cmd_oracle->add_option("--csv-orientation", orc.csv_orientation, "rows|cols")
        ->check(CLI::IsMember({"rows", "cols"}));
    cmd_oracle->add_option("--out", orc.out, "Output directory");

    RecoverArgs rec;
    auto* cmd_recover =
        app.add_subcommand("recover", "Recover loading vectors from trained weights");
    cmd_recover->add_option("--weights", rec.weights, "Directory with w1/b1/w2/b2.pcae")
        ->required();
    cmd_recover->add_option("--data", rec.data, "Dataset file for variance estimation")
        ->required();
    cmd_recover->add_option("--m", rec.m, "Components to keep (default: bottleneck width)");
    cmd_recover->add_option("--source", rec.source, "w2|w1")
        ->check(CLI::IsMember({"w2", "w1"}));
    cmd_recover->add_flag("--render", rec.render, "Write a PGM grid of the loading vectors");
    cmd_recover->add_option("--image-shape", rec.image_shape, "HxW for rendering");
    cmd_recover->add_option("--grid-cols", rec.grid_cols, "Grid columns for rendering");
    cmd_recover->add_option("--csv-orientation", rec.csv_orientation, "rows|cols")
        ->check(CLI::IsMember({"rows", "cols"}));
    cmd_recover->add_option("--out", rec.out, "Output directory");

    ReportArgs rep;
    auto* cmd_report = app.add_subcommand("report", "Diagnostics for a model on a dataset");
    cmd_report->add_option("--model", rep.model, "Model directory");
    cmd_report->add_option("--data", rep.data, "Dataset file")->required();
    cmd_report->add_option("--ref-model", rep.ref_model,
                           "Reference model directory for principal angles");
    cmd_report->add_option("--weights", rep.weights,
                           "Weights directory for the pseudoinverse residual");
    cmd_report->add_flag("--no-svd", rep.no_svd,
                         "Transform by raw W2^T instead of the recovered basis");
    cmd_report->add_option("--csv-orientation", rep.csv_orientation, "rows|cols")
        ->check(CLI::IsMember({"rows", "cols"}));
    cmd_report->add_option("--out", rep.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_synth->parsed())
            return run_synth(synth);
        if (cmd_train->parsed())
            return run_train(tr);
        if (cmd_oracle->parsed())
            return run_oracle(orc);
        if (cmd_recover->parsed())
            return run_recover(rec);
        if (cmd_report->parsed())
            return run_report(rep);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
