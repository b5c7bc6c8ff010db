#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fusim/fusion.hpp"
#include "fusim/io.hpp"
#include "fusim/scene.hpp"

namespace fusim::model {

/// Dense row-major matrix, rows x cols.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

/// Describes what the model consumes and produces; stored alongside the
/// parameters so a checkpoint is self-contained.
struct ModelMeta {
    std::uint32_t photon_len = 512;
    std::uint32_t radar_len = 64;
    std::uint32_t map_width = 32;
    std::uint32_t map_height = 32;
    double depth_norm = 6.0;  // meters per unit of network output
    double fov_x = 1.0;
    double fov_y = 1.0;
    fusion::FuseMode mode = fusion::FuseMode::fusion;
};

/// Fully connected network: ReLU hidden layers, sigmoid output. Weights are
/// stored per layer as [out x in]; layer_dims runs input..output.
struct MlpModel {
    std::vector<std::size_t> layer_dims;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    ModelMeta meta;

    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
};

/// Weights drawn from a zero-mean normal scaled by 1/sqrt(fan_in), biases
/// zero. Deterministic per seed. At least one hidden layer is required.
MlpModel init_model(const std::vector<std::size_t>& layer_dims, std::uint64_t seed,
                    const ModelMeta& meta);

/// Network output for one input vector; all values in (0, 1).
std::vector<double> forward(const MlpModel& m, const std::vector<double>& x);

double loss_mse(const std::vector<double>& pred, const std::vector<double>& truth);

struct Gradients {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;
};

/// Analytic gradients of the mean-squared reconstruction error for one
/// sample with respect to every weight and bias.
Gradients backward(const MlpModel& m, const std::vector<double>& x,
                   const std::vector<double>& truth);

enum class Optimizer { adam, sgd_momentum };

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 200;
    int batch_size = 32;
    double split_ratio = 0.9;  // fraction of samples used for training
    std::uint64_t seed = 1;
    Optimizer optimizer = Optimizer::adam;
};

struct TrainReport {
    std::vector<double> train_loss;  // one entry per epoch
    std::vector<double> test_loss;
    std::vector<double> test_ssim;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double wall_time_s = 0.0;
};

/// Deterministic shuffled split of [0, n) into train/test index sets.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, double split_ratio, std::uint64_t seed);

/// Mini-batch training with the configured optimizer. The sample set is
/// split split_ratio : 1 - split_ratio into train and held-out test data;
/// per-epoch train loss, test loss and test SSIM are reported. The fused
/// input segments are masked according to hidden_meta.mode. A non-finite
/// epoch loss aborts with an error naming the epoch.
std::pair<MlpModel, TrainReport> train(const std::vector<io::Sample>& samples,
                                       const TrainConfig& config,
                                       const std::vector<std::size_t>& hidden_dims,
                                       const ModelMeta& meta);

/// Reshapes a forward pass into a depth map in meters (output * depth_norm).
scene::DepthMap predict(const MlpModel& m, const std::vector<double>& fused);

/// Applies the model's ablation mode to a full fused vector: segments the
/// model was not trained on are zeroed.
std::vector<double> mask_for_mode(const MlpModel& m, const std::vector<float>& fused);

inline constexpr char kModelMagic[4] = {'F', 'T', 'M', 'K'};
inline constexpr std::uint32_t kModelVersion = 1;

/// Checkpoint layout: magic, format version, metadata block, layer dims,
/// then all parameters as little-endian 64-bit floats in layer order
/// (weights row-major, then biases). Round trips are byte-exact.
void save_model(const MlpModel& m, const std::string& path);
MlpModel load_model(const std::string& path);

}  // namespace fusim::model
