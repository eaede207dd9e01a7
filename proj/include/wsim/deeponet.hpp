// Branch/trunk operator network with sine augmentation and ablation modes:
// forward evaluation, exact reverse-mode gradients, Adam training, warm
// start, and exact-round-trip persistence. All arithmetic is double and
// single-threaded with a fixed summation order, so results are reproducible
// bit for bit from the seed.

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wsim/dataset.hpp"
#include "wsim/rng.hpp"

namespace wsim {

/// Plain fully connected net: ReLU hidden layers, linear output.
struct MLP {
    struct Layer {
        Eigen::MatrixXd W;  // out x in
        Eigen::VectorXd b;
    };
    std::vector<Layer> layers;

    int input_dim() const { return (int)layers.front().W.cols(); }
    int output_dim() const { return (int)layers.back().W.rows(); }

    /// He-style uniform fan-in initialization, seeded.
    static MLP create(const std::vector<int>& dims, Rng& rng);
};

Eigen::VectorXd mlp_forward(const MLP& mlp, const Eigen::VectorXd& x);
/// Columns are samples.
Eigen::MatrixXd mlp_forward_batch(const MLP& mlp, const Eigen::MatrixXd& X);

enum class ShapeInfo { None, Branch, Trunk };
std::string to_string(ShapeInfo s);
ShapeInfo shape_info_from_string(const std::string& s);

struct Ablation {
    ShapeInfo shape_info = ShapeInfo::Trunk;
    bool sine_aug = true;
};

/// The five Table-2 configurations: Case 1..4 and the final model.
Ablation ablation_case(int case_id);
std::string ablation_case_name(int case_id);

/// Per-input min-max affine maps to [0,1].
struct Normalization {
    Eigen::VectorXd branch_lo, branch_hi;
    Eigen::VectorXd trunk_lo, trunk_hi;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 100;
    int epochs = 100;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_hat = 1e-8;

    void validate() const;
};

struct DeepONetModel {
    int p = 50;
    Ablation ablation;
    MLP branch;  // input 5 (9 with shape info), output 2p
    MLP trunk;   // input 3 (7 with shape info), output p
    Normalization norm;

    int branch_input_dim() const { return ablation.shape_info == ShapeInfo::Branch ? 9 : 5; }
    int trunk_input_dim() const { return ablation.shape_info == ShapeInfo::Trunk ? 7 : 3; }

    /// Seeded construction; hidden widths default to three layers of 50.
    static DeepONetModel create(int p, Ablation ablation, const Normalization& norm,
                                Rng& rng, const std::vector<int>& hidden = {50, 50, 50});

    /// Raw (unnormalized) model inputs for a record, per the ablation wiring.
    Eigen::VectorXd branch_raw(const DataRecord& r) const;
    Eigen::VectorXd trunk_raw(const DataRecord& r) const;
};

/// Branch bounds from the Table-1 ranges, trunk bounds from the dataset.
Normalization make_normalization(std::span<const DataRecord> records,
                                 const Ablation& ablation,
                                 const VariableParamRanges& ranges = {});

/// Hard boundary-condition factors of the augmentation step.
/// Throws std::domain_error for non-positive extents.
std::array<double, 2> sine_augment(double u1_hat, double u2_hat, double x,
                                   double y, double x_l, double y_l);

/// Full forward pass for one record: normalization, both nets, the basis
/// inner product, and (when enabled) sine augmentation.
std::array<double, 2> deeponet_forward(const DeepONetModel& model,
                                       const DataRecord& record);

/// Batched forward over records (2 x n output).
Eigen::MatrixXd deeponet_forward_batch(const DeepONetModel& model,
                                       std::span<const DataRecord> records);

struct ModelGradients {
    std::vector<MLP::Layer> branch;  // same shapes as the parameters
    std::vector<MLP::Layer> trunk;
};

/// Mean squared error over both displacement components of the batch and
/// exact reverse-mode gradients for every weight and bias.
double loss_and_gradients(const DeepONetModel& model,
                          std::span<const DataRecord> batch, ModelGradients& grads);

double mse_loss(const DeepONetModel& model, std::span<const DataRecord> records);

struct AdamState {
    std::vector<MLP::Layer> m_branch, v_branch, m_trunk, v_trunk;
    long step_count = 0;

    static AdamState zeros_like(const DeepONetModel& model);
};

void adam_step(DeepONetModel& model, const ModelGradients& grads, AdamState& state,
               const TrainConfig& config);

struct TrainHistory {
    std::vector<double> train_mse;  // index 0 = before training
    std::vector<double> val_mse;
};

/// Epoch loop with seeded per-epoch shuffling and Adam updates.
TrainHistory train(DeepONetModel& model, std::span<const DataRecord> train_records,
                   std::span<const DataRecord> val_records, const TrainConfig& config);

/// Deep copy of the parameters; optimizer state starts fresh in train().
DeepONetModel warm_start(const DeepONetModel& prev);

/// Copies parameters between models of identical architecture.
/// Throws std::invalid_argument on any shape mismatch.
void copy_parameters_into(DeepONetModel& dst, const DeepONetModel& src);

struct FieldPrediction {
    std::vector<std::array<double, 2>> u;  // per grid point
    double seconds = 0.0;                   // wall clock for the forward passes
};

/// Evaluate the surrogate at (t, x, y) grid points for one parameter set and
/// geometry. Throws std::domain_error when a point leaves the domain.
FieldPrediction predict_field(const DeepONetModel& model, const VariableParams& vp,
                              const WoundGeometry& geometry,
                              std::span<const std::array<double, 3>> txy,
                              int batch_size = 50);

void save_model(const DeepONetModel& model, const std::string& path);
DeepONetModel load_model(const std::string& path);

}  // namespace wsim
