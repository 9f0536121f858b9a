#include "logquest/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "logquest/errors.hpp"

namespace logquest {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_integer(std::string_view key, std::string_view value) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw DataError("config: '" + std::string(key) + "' expects an integer, got '" + std::string(value) + "'");
    }
    return out;
}

// "250", "250ms", "2s"
std::chrono::milliseconds parse_duration(std::string_view key, std::string_view value) {
    long long scale = 1;
    if (value.size() > 2 && value.substr(value.size() - 2) == "ms") {
        value.remove_suffix(2);
    } else if (value.size() > 1 && value.back() == 's') {
        value.remove_suffix(1);
        scale = 1000;
    }
    return std::chrono::milliseconds(parse_integer(key, trim(value)) * scale);
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base_dir) {
    std::filesystem::path p{std::string(value)};
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

}  // namespace

PipelineConfig PipelineConfig::with_data_dir(const std::filesystem::path& data_dir) {
    PipelineConfig c;
    c.corpus = data_dir / "corpus" / "demo.jsonl";
    c.background = data_dir / "kb" / "background.lkb";
    c.patterns = data_dir / "patterns" / "en.qpat";
    c.synonyms = data_dir / "lexicon" / "synonyms.syn";
    c.passage_model = data_dir / "models" / "passage.lrm";
    c.answer_model = data_dir / "models" / "answer.lrm";
    return c;
}

PipelineConfig PipelineConfig::bundled() {
    if (const char* dir = std::getenv("LOGQUEST_DATA"); dir && *dir) return with_data_dir(dir);
#ifdef LOGQUEST_DEFAULT_DATA_DIR
    return with_data_dir(LOGQUEST_DEFAULT_DATA_DIR);
#else
    return with_data_dir("data");
#endif
}

void PipelineConfig::validate() const {
    auto positive = [](bool ok, const char* what) {
        if (!ok) throw DataError(std::string("config: ") + what + " must be positive");
    };
    positive(top_k_passages > 0, "top_k_passages");
    positive(per_candidate_budget.count() > 0, "per_candidate_budget");
    positive(max_level > 0, "max_level");
    positive(max_branches > 0, "max_branches");
    positive(answers_returned > 0, "answers_returned");
    positive(question_budget.count() > 0, "question_budget");
    positive(workers > 0, "workers");
    if (max_relax < 0) throw DataError("config: max_relax must not be negative");
    if (answers_returned > top_k_passages) throw DataError("config: answers_returned exceeds top_k_passages");
}

const std::vector<std::string>& PipelineConfig::keys() {
    static const std::vector<std::string> k = {
        "top_k_passages", "per_candidate_budget", "max_relax", "max_level",     "max_branches",
        "answers_returned", "question_budget",    "workers",   "corpus",        "background",
        "patterns",         "synonyms",           "passage_model", "answer_model"};
    return k;
}

void PipelineConfig::set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir) {
    value = trim(value);
    auto count = [&](long long min) {
        const long long v = parse_integer(key, value);
        if (v < min) throw DataError("config: '" + std::string(key) + "' out of range");
        return v;
    };
    if (key == "top_k_passages") top_k_passages = static_cast<std::size_t>(count(1));
    else if (key == "per_candidate_budget") per_candidate_budget = parse_duration(key, value);
    else if (key == "max_relax") max_relax = static_cast<int>(count(0));
    else if (key == "max_level") max_level = static_cast<int>(count(1));
    else if (key == "max_branches") max_branches = static_cast<int>(count(1));
    else if (key == "answers_returned") answers_returned = static_cast<std::size_t>(count(1));
    else if (key == "question_budget") question_budget = parse_duration(key, value);
    else if (key == "workers") workers = static_cast<std::size_t>(count(1));
    else if (key == "corpus") corpus = resolve(value, base_dir);
    else if (key == "background") background = resolve(value, base_dir);
    else if (key == "patterns") patterns = resolve(value, base_dir);
    else if (key == "synonyms") synonyms = resolve(value, base_dir);
    else if (key == "passage_model") passage_model = resolve(value, base_dir);
    else if (key == "answer_model") answer_model = resolve(value, base_dir);
    else throw DataError("config: unknown key '" + std::string(key) + "'");
}

std::string PipelineConfig::get(std::string_view key) const {
    if (key == "top_k_passages") return std::to_string(top_k_passages);
    if (key == "per_candidate_budget") return std::to_string(per_candidate_budget.count()) + "ms";
    if (key == "max_relax") return std::to_string(max_relax);
    if (key == "max_level") return std::to_string(max_level);
    if (key == "max_branches") return std::to_string(max_branches);
    if (key == "answers_returned") return std::to_string(answers_returned);
    if (key == "question_budget") return std::to_string(question_budget.count()) + "ms";
    if (key == "workers") return std::to_string(workers);
    if (key == "corpus") return corpus.string();
    if (key == "background") return background.string();
    if (key == "patterns") return patterns.string();
    if (key == "synonyms") return synonyms.string();
    if (key == "passage_model") return passage_model.string();
    if (key == "answer_model") return answer_model.string();
    throw DataError("config: unknown key '" + std::string(key) + "'");
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base, const std::filesystem::path& base_dir) {
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw DataError("config line " + std::to_string(no) + ": expected key = value");
        }
        try {
            base.set(trim(view.substr(0, eq)), view.substr(eq + 1), base_dir);
        } catch (const DataError& e) {
            throw DataError("config line " + std::to_string(no) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(base), path.parent_path());
}

PipelineConfig config_from_environment() {
    PipelineConfig c = PipelineConfig::bundled();
    if (const char* path = std::getenv("LOGQUEST_CONFIG"); path && *path) c = load_config(path, std::move(c));
    return c;
}

std::string format_config(const PipelineConfig& config) {
    std::string out;
    for (const auto& k : PipelineConfig::keys()) out += k + " = " + config.get(k) + "\n";
    return out;
}

}  // namespace logquest
