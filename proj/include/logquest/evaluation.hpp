#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logquest/engine.hpp"

namespace logquest {

/// One line of a gold file: question TAB answer alternatives separated by `|`.
struct GoldItem {
    std::string question;
    std::vector<std::string> answers;
    std::size_t line = 0;
};

std::vector<GoldItem> parse_gold(std::string_view text);
std::vector<GoldItem> load_gold(const std::filesystem::path& path);

/// Lowercased tokens joined by single spaces: "Rheinland-Pfalz",
/// "rheinland_pfalz" and "rheinland pfalz" all normalize alike.
std::string normalize_answer(std::string_view text);

bool answer_matches(std::string_view produced, const GoldItem& gold);

struct QuestionOutcome {
    std::string question;
    bool correct = false;
    bool understood = true;
    std::vector<std::string> answers;
    std::string diagnostic;
    std::chrono::nanoseconds latency{0};
    std::size_t candidates = 0;
};

struct BenchReport {
    std::vector<QuestionOutcome> outcomes;
    double accuracy_at_k = 0.0;  // k = answers returned
    std::chrono::nanoseconds median{0};
    std::chrono::nanoseconds p90{0};
    std::chrono::nanoseconds p99{0};
    std::chrono::nanoseconds max{0};
};

/// Nearest-rank percentile, q in (0, 1].
std::chrono::nanoseconds percentile(std::vector<std::chrono::nanoseconds> values, double q);

BenchReport run_benchmark(const Engine& engine, const std::vector<GoldItem>& gold);

/// Labeled feature rows for the passage ranker: every retrieved passage of
/// every question, positive when some proof from it yields a gold answer.
TrainingSet passage_training_data(const Engine& engine, const std::vector<GoldItem>& gold);

/// Labeled rows for the answer ranker: every proved (passage, answer) pair,
/// positive when the answer matches the gold set.
TrainingSet answer_training_data(const Engine& engine, const std::vector<GoldItem>& gold);

}  // namespace logquest
