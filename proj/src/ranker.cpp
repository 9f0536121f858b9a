#include "logquest/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "logquest/errors.hpp"

namespace logquest {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::Passage ? "passage" : "answer"; }

ModelKind model_kind_from_string(std::string_view tag) {
    if (tag == "passage") return ModelKind::Passage;
    if (tag == "answer") return ModelKind::Answer;
    throw DataError("unknown model kind: " + std::string(tag));
}

Eigen::Index feature_dimension(ModelKind) { return 5; }

LinearModel LinearModel::zeros(ModelKind kind) {
    return LinearModel{kind, Eigen::VectorXd::Zero(feature_dimension(kind)), 0.0};
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double score(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& features) {
    if (features.size() != model.weights.size()) {
        throw DimensionMismatch("model has " + std::to_string(model.weights.size()) + " weights, got " +
                                std::to_string(features.size()) + " features");
    }
    return sigmoid(model.weights.dot(features) + model.bias);
}

namespace {

void check_dimensions(const LinearModel& model, const TrainingSet& data) {
    if (data.features.cols() != model.weights.size()) {
        throw DimensionMismatch("training data has " + std::to_string(data.features.cols()) +
                                " columns, model has " + std::to_string(model.weights.size()) + " weights");
    }
    if (data.features.rows() != data.labels.size()) throw DimensionMismatch("label count differs from row count");
}

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open ") + what + ": " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

double parse_number(const std::string& cell, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size() && cell.find_first_not_of(" \t\r", used) != std::string::npos) throw DataError("");
        if (!std::isfinite(v)) throw DataError("");
        return v;
    } catch (const std::exception&) {
        throw DataError("bad number '" + cell + "' in " + context);
    }
}

}  // namespace

TrainingSet parse_training_csv(std::string_view text, ModelKind kind) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) throw DataError("training data is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    if (header.size() < 2 || header.back() != "label") throw DataError("last header column must be 'label'");
    const auto dim = static_cast<Eigen::Index>(header.size() - 1);
    if (dim != feature_dimension(kind)) {
        throw DimensionMismatch(std::string(to_string(kind)) + " schema has " +
                                std::to_string(feature_dimension(kind)) + " features, csv has " +
                                std::to_string(dim));
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            throw DimensionMismatch("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                    " columns, expected " + std::to_string(header.size()));
        }
        std::vector<double> row;
        for (const auto& c : cells) row.push_back(parse_number(c, "row " + std::to_string(line_no)));
        if (row.back() != 0.0 && row.back() != 1.0) throw DataError("label must be 0 or 1 on row " + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    TrainingSet data;
    data.kind = kind;
    data.features.resize(static_cast<Eigen::Index>(rows.size()), dim);
    data.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        for (Eigen::Index c = 0; c < dim; ++c) data.features(i, c) = rows[r][static_cast<std::size_t>(c)];
        data.labels(i) = rows[r].back();
    }
    return data;
}

TrainingSet load_training_csv(const std::filesystem::path& path, ModelKind kind) {
    return parse_training_csv(read_file(path, "training data"), kind);
}

void save_training_csv(const std::filesystem::path& path, const TrainingSet& data,
                       const std::vector<std::string>& feature_names) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& name : feature_names) out << name << ',';
    out << "label\n" << std::setprecision(17);
    for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.features.cols(); ++c) out << data.features(r, c) << ',';
        out << static_cast<int>(data.labels(r)) << '\n';
    }
}

double log_loss(const LinearModel& model, const TrainingSet& data) {
    check_dimensions(model, data);
    if (data.features.rows() == 0) return 0.0;
    const Eigen::VectorXd z = (data.features * model.weights).array() + model.bias;
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
        total += softplus(z(i)) - data.labels(i) * z(i);
    }
    return total / static_cast<double>(z.size());
}

Gradient log_loss_gradient(const LinearModel& model, const TrainingSet& data) {
    check_dimensions(model, data);
    Gradient g{Eigen::VectorXd::Zero(model.weights.size()), 0.0};
    const auto n = data.features.rows();
    if (n == 0) return g;
    const Eigen::VectorXd z = (data.features * model.weights).array() + model.bias;
    const Eigen::VectorXd residual = z.unaryExpr([](double v) { return sigmoid(v); }) - data.labels;
    g.weights = data.features.transpose() * residual / static_cast<double>(n);
    g.bias = residual.mean();
    return g;
}

TrainResult train(const LinearModel& init, const TrainingSet& data, double learning_rate, int epochs) {
    check_dimensions(init, data);
    if (!(learning_rate > 0.0)) throw DataError("learning rate must be positive");
    if (epochs < 1) throw DataError("epochs must be at least 1");
    const auto positives = (data.labels.array() > 0.5).count();
    if (positives == 0 || positives == data.labels.size()) {
        throw DataError("training data needs at least one row of each label");
    }
    TrainResult result{init, {}};
    result.model.kind = data.kind;
    result.loss_history.reserve(static_cast<std::size_t>(epochs));
    for (int e = 0; e < epochs; ++e) {
        const Gradient g = log_loss_gradient(result.model, data);
        result.model.weights -= learning_rate * g.weights;
        result.model.bias -= learning_rate * g.bias;
        result.loss_history.push_back(log_loss(result.model, data));
    }
    return result;
}

LinearModel parse_model(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tag, bias_line, weight_line;
    if (!std::getline(in, tag) || !std::getline(in, bias_line) || !std::getline(in, weight_line)) {
        throw DataError("model file needs three lines: schema, bias, weights");
    }
    auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    };
    LinearModel model;
    model.kind = model_kind_from_string(trim(tag));
    model.bias = parse_number(trim(bias_line), "model bias");
    std::istringstream ws(weight_line);
    std::vector<double> weights;
    std::string cell;
    while (ws >> cell) weights.push_back(parse_number(cell, "model weights"));
    if (static_cast<Eigen::Index>(weights.size()) != feature_dimension(model.kind)) {
        throw DimensionMismatch("model has " + std::to_string(weights.size()) + " weights, schema needs " +
                                std::to_string(feature_dimension(model.kind)));
    }
    model.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    return model;
}

LinearModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path, "model")); }

std::string format_model(const LinearModel& model) {
    std::ostringstream out;
    out << std::setprecision(17) << to_string(model.kind) << '\n' << model.bias << '\n';
    for (Eigen::Index i = 0; i < model.weights.size(); ++i) out << (i ? " " : "") << model.weights(i);
    out << '\n';
    return out.str();
}

void save_model(const std::filesystem::path& path, const LinearModel& model) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << format_model(model);
}

Eigen::VectorXd AnswerFeatures::to_vector() const {
    Eigen::VectorXd v(5);
    v << relax_count, proof_level, retrieval_score, passage_support, answer_is_ground ? 1.0 : 0.0;
    return v;
}

const std::vector<std::string>& AnswerFeatures::names() {
    static const std::vector<std::string> n = {"relax_count", "proof_level", "retrieval_score", "passage_support",
                                               "answer_is_ground"};
    return n;
}

std::vector<RankedAnswer> rank_answers(const std::vector<AnswerCandidate>& candidates, const LinearModel& model,
                                       std::size_t n) {
    auto better = [&](const RankedAnswer& a, const RankedAnswer& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto& ca = candidates[a.candidate];
        const auto& cb = candidates[b.candidate];
        if (ca.features.relax_count != cb.features.relax_count) {
            return ca.features.relax_count < cb.features.relax_count;
        }
        if (ca.passage_id != cb.passage_id) return ca.passage_id < cb.passage_id;
        return a.candidate < b.candidate;
    };

    std::map<std::string, RankedAnswer> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        RankedAnswer r{i, score(model, candidates[i].features.to_vector())};
        auto [it, inserted] = best.emplace(candidates[i].answer_key, r);
        if (!inserted && better(r, it->second)) it->second = r;
    }
    std::vector<RankedAnswer> out;
    out.reserve(best.size());
    for (const auto& [key, r] : best) out.push_back(r);
    std::sort(out.begin(), out.end(), better);
    if (out.size() > n) out.resize(n);
    return out;
}

}  // namespace logquest
