#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace logquest {

struct PipelineConfig {
    std::size_t top_k_passages = 200;
    std::chrono::milliseconds per_candidate_budget{200};
    int max_relax = 2;
    int max_level = 12;
    int max_branches = 64;
    std::size_t answers_returned = 3;
    std::chrono::milliseconds question_budget{10000};
    std::size_t workers = 4;  // proofs in flight per question

    std::filesystem::path corpus;
    std::filesystem::path background;
    std::filesystem::path patterns;
    std::filesystem::path synonyms;  // optional
    std::filesystem::path passage_model;
    std::filesystem::path answer_model;

    /// Defaults with asset paths under `data_dir`.
    static PipelineConfig with_data_dir(const std::filesystem::path& data_dir);
    /// Bundled assets (compile-time data directory, overridable with
    /// LOGQUEST_DATA).
    static PipelineConfig bundled();

    /// Throws DataError.
    void validate() const;

    /// One `key = value` assignment. Relative paths are resolved against
    /// `base_dir`. Throws DataError on unknown keys or bad values.
    void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});

    /// Known keys in file order.
    static const std::vector<std::string>& keys();
    std::string get(std::string_view key) const;
};

/// Flat `key = value` lines; `#` starts a comment.
PipelineConfig parse_config(std::string_view text, PipelineConfig base, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base);

/// Bundled defaults, overlaid with the file named by LOGQUEST_CONFIG if set.
PipelineConfig config_from_environment();

std::string format_config(const PipelineConfig& config);

}  // namespace logquest
