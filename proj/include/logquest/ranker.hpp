#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace logquest {

enum class ModelKind { Passage, Answer };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view tag);

/// Feature count of each model kind's schema.
Eigen::Index feature_dimension(ModelKind kind);

/// Logistic-regression scorer shared by the passage and answer rankers.
struct LinearModel {
    ModelKind kind = ModelKind::Passage;
    Eigen::VectorXd weights;
    double bias = 0.0;

    static LinearModel zeros(ModelKind kind);
};

/// 1 / (1 + e^-z), evaluated without overflow for any finite z.
double sigmoid(double z);

/// sigmoid(w . f + b). Throws DimensionMismatch.
double score(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& features);

struct TrainingSet {
    ModelKind kind = ModelKind::Passage;
    Eigen::MatrixXd features;  // one row per example
    Eigen::VectorXd labels;    // 0 or 1
};

/// CSV with a header row: feature columns, then `label`.
TrainingSet parse_training_csv(std::string_view text, ModelKind kind);
TrainingSet load_training_csv(const std::filesystem::path& path, ModelKind kind);
void save_training_csv(const std::filesystem::path& path, const TrainingSet& data,
                       const std::vector<std::string>& feature_names);

struct Gradient {
    Eigen::VectorXd weights;
    double bias = 0.0;
};

/// Mean log-loss over all rows.
double log_loss(const LinearModel& model, const TrainingSet& data);

/// Analytic gradient of log_loss: mean of (score - label) * f, and of (score - label).
Gradient log_loss_gradient(const LinearModel& model, const TrainingSet& data);

struct TrainResult {
    LinearModel model;
    std::vector<double> loss_history;  // loss after each epoch
};

/// Full-batch gradient descent. Rejects single-label data, non-positive
/// learning rates and epoch counts below one.
TrainResult train(const LinearModel& init, const TrainingSet& data, double learning_rate, int epochs);

/// `.lrm`: schema tag, bias, space-separated weights; one per line.
LinearModel load_model(const std::filesystem::path& path);
LinearModel parse_model(std::string_view text);
void save_model(const std::filesystem::path& path, const LinearModel& model);
std::string format_model(const LinearModel& model);

/// Signals of one proof, scored by the answer model.
struct AnswerFeatures {
    int relax_count = 0;
    int proof_level = 0;
    double retrieval_score = 0.0;
    double passage_support = 0.0;
    bool answer_is_ground = true;

    Eigen::VectorXd to_vector() const;
    static const std::vector<std::string>& names();
};

struct AnswerCandidate {
    std::string answer_key;  // canonical rendering of the binding
    AnswerFeatures features;
    std::string passage_id;
};

struct RankedAnswer {
    std::size_t candidate = 0;  // index into the input list
    double score = 0.0;
};

/// Keeps the best-scoring provenance per answer, sorts by score descending
/// (ties: fewer relaxations, then passage id) and returns the first `n`.
std::vector<RankedAnswer> rank_answers(const std::vector<AnswerCandidate>& candidates, const LinearModel& model,
                                       std::size_t n = 3);

}  // namespace logquest
