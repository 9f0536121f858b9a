#include "logquest/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "logquest/errors.hpp"
#include "logquest/text.hpp"

namespace logquest {

namespace {

using Clock = std::chrono::steady_clock;

TrainingSet to_training_set(ModelKind kind, const std::vector<Eigen::VectorXd>& rows, const std::vector<double>& labels) {
    TrainingSet d;
    d.kind = kind;
    d.features = Eigen::MatrixXd(static_cast<Eigen::Index>(rows.size()), feature_dimension(kind));
    d.labels = Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.features.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
        d.labels[static_cast<Eigen::Index>(i)] = labels[i];
    }
    return d;
}

// Every proved answer for every passage, however many there are.
AskResult ask_all(const Engine& engine, const std::string& question) {
    AskOptions options;
    options.answers = std::max<std::size_t>(1, engine.retriever().passages().size() * 16);
    return engine.ask(question, options);
}

}  // namespace

std::vector<GoldItem> parse_gold(std::string_view text) {
    std::vector<GoldItem> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError("gold line " + std::to_string(no) + ": expected question TAB answers");
        GoldItem item;
        item.question = line.substr(0, tab);
        item.line = no;
        std::istringstream alts(line.substr(tab + 1));
        std::string alt;
        while (std::getline(alts, alt, '|')) {
            if (!normalize_answer(alt).empty()) item.answers.push_back(alt);
        }
        if (item.answers.empty()) throw DataError("gold line " + std::to_string(no) + ": no answers");
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<GoldItem> load_gold(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open gold file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_gold(buffer.str());
}

std::string normalize_answer(std::string_view text) {
    std::string out;
    for (const auto& t : tokenize(text)) out += (out.empty() ? "" : " ") + t;
    return out;
}

bool answer_matches(std::string_view produced, const GoldItem& gold) {
    const std::string p = normalize_answer(produced);
    return std::any_of(gold.answers.begin(), gold.answers.end(),
                       [&](const std::string& a) { return normalize_answer(a) == p; });
}

std::chrono::nanoseconds percentile(std::vector<std::chrono::nanoseconds> values, double q) {
    if (values.empty()) return std::chrono::nanoseconds(0);
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

BenchReport run_benchmark(const Engine& engine, const std::vector<GoldItem>& gold) {
    BenchReport report;
    std::vector<std::chrono::nanoseconds> latencies;
    std::size_t correct = 0;
    for (const auto& item : gold) {
        QuestionOutcome o;
        o.question = item.question;
        const auto start = Clock::now();
        try {
            const AskResult r = engine.ask(item.question);
            o.diagnostic = r.diagnostic;
            o.candidates = r.candidates;
            for (const auto& a : r.answers) {
                o.answers.push_back(a.answer_text);
                o.correct = o.correct || answer_matches(a.answer_text, item);
            }
        } catch (const NoPatternMatch& e) {
            o.understood = false;
            o.diagnostic = e.what();
        }
        o.latency = Clock::now() - start;
        latencies.push_back(o.latency);
        correct += o.correct ? 1 : 0;
        report.outcomes.push_back(std::move(o));
    }
    report.accuracy_at_k = gold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
    report.median = percentile(latencies, 0.5);
    report.p90 = percentile(latencies, 0.9);
    report.p99 = percentile(latencies, 0.99);
    report.max = percentile(latencies, 1.0);
    return report;
}

TrainingSet passage_training_data(const Engine& engine, const std::vector<GoldItem>& gold) {
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> labels;
    const LinearModel neutral = LinearModel::zeros(ModelKind::Passage);
    for (const auto& item : gold) {
        AskResult r;
        try {
            r = ask_all(engine, item.question);
        } catch (const NoPatternMatch&) {
            continue;
        }
        std::set<std::string> good;
        for (const auto& p : r.pool) {
            if (answer_matches(p.value, item)) good.insert(p.candidate.passage_id);
        }
        const auto all = engine.retriever().rank(item.question, neutral, engine.retriever().passages().size() + 1);
        for (const auto& c : all) {
            rows.push_back(c.features.to_vector());
            labels.push_back(good.count(c.passage_id) ? 1.0 : 0.0);
        }
    }
    return to_training_set(ModelKind::Passage, rows, labels);
}

TrainingSet answer_training_data(const Engine& engine, const std::vector<GoldItem>& gold) {
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> labels;
    for (const auto& item : gold) {
        AskResult r;
        try {
            r = ask_all(engine, item.question);
        } catch (const NoPatternMatch&) {
            continue;
        }
        for (const auto& p : r.pool) {
            rows.push_back(p.candidate.features.to_vector());
            labels.push_back(answer_matches(p.value, item) ? 1.0 : 0.0);
        }
    }
    return to_training_set(ModelKind::Answer, rows, labels);
}

}  // namespace logquest
