// logquest command line: ask, serve, train, check-kb, bench, export-training.

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

#include "logquest/config.hpp"
#include "logquest/engine.hpp"
#include "logquest/errors.hpp"
#include "logquest/evaluation.hpp"
#include "logquest/parser.hpp"
#include "logquest/ranker.hpp"
#include "logquest/service.hpp"
#include "logquest/transform.hpp"

using namespace logquest;

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kInternalError = 2;

// Flags that mirror PipelineConfig; applied over the config file.
struct ConfigFlags {
    std::string file;
    std::vector<std::string> settings;  // key=value
    std::map<std::string, std::string> named;

    void attach(CLI::App* app) {
        app->add_option("--config", file, "key=value config file (default: $LOGQUEST_CONFIG)");
        app->add_option("--set", settings, "override one config key, e.g. --set max_relax=1");
        for (const auto& key : PipelineConfig::keys()) {
            std::string flag = "--" + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            app->add_option_function<std::string>(
                flag, [this, key](const std::string& v) { named[key] = v; }, "config: " + key);
        }
    }

    PipelineConfig resolve() const {
        PipelineConfig c = file.empty() ? config_from_environment() : load_config(file, PipelineConfig::bundled());
        for (const auto& [k, v] : named) c.set(k, v, std::filesystem::current_path());
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw DataError("--set expects key=value, got '" + s + "'");
            c.set(s.substr(0, eq), s.substr(eq + 1), std::filesystem::current_path());
        }
        c.validate();
        return c;
    }
};

std::string millis(std::chrono::nanoseconds d) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << std::chrono::duration<double, std::milli>(d).count() << " ms";
    return out.str();
}

void print_answers(const AskResult& r, std::ostream& out) {
    if (r.answers.empty()) {
        out << "No answer. (" << r.diagnostic << ")\n";
        return;
    }
    int rank = 1;
    for (const auto& a : r.answers) {
        out << rank++ << ". " << a.answer_text << "  [confidence " << std::fixed << std::setprecision(3)
            << a.confidence << ", passage " << a.passage_id;
        if (a.relax_count > 0) out << ", relaxed " << a.relax_count;
        out << "]\n   ";
        // Highlighted tokens in brackets.
        std::size_t pos = 0;
        for (const auto& [b, e] : a.highlight_spans) {
            out << a.passage_text.substr(pos, b - pos) << '[' << a.passage_text.substr(b, e - b) << ']';
            pos = e;
        }
        out << a.passage_text.substr(pos) << "\n";
        if (!a.dropped_subgoals.empty()) {
            out << "   dropped:";
            for (const auto& d : a.dropped_subgoals) out << ' ' << d;
            out << "\n";
        }
    }
    if (!r.diagnostic.empty()) out << "(" << r.diagnostic << ")\n";
}

int check_kb(const std::vector<std::string>& files, bool dump) {
    int status = kOk;
    for (const auto& f : files) {
        std::vector<Clause> kb;
        try {
            kb = load_kb_file(f);
        } catch (const ParseError& e) {
            std::cerr << f << ": " << e.what() << "\n";
            status = kUserError;
            continue;
        }
        std::size_t facts = 0, rules = 0, disjunctive = 0, constraints = 0, guarded = 0;
        for (const auto& c : kb) {
            if (c.is_constraint()) ++constraints;
            else if (c.head.size() > 1) ++disjunctive;
            else if (c.is_fact()) ++facts;
            else ++rules;
            if (!c.is_range_restricted()) ++guarded;
        }
        const Signature sig = signature_of(kb);
        std::cout << f << ": " << kb.size() << " clauses (" << facts << " facts, " << rules << " rules, "
                  << disjunctive << " disjunctive, " << constraints << " constraints)\n"
                  << "  range restriction: " << guarded << " clause(s) need dom guards\n"
                  << "  equality: " << (sig.uses_equality() ? "used, congruence axioms will be added" : "not used")
                  << "\n";
        if (dump) {
            for (const auto& c : range_restrict_all(kb)) std::cout << to_string(c) << "\n";
        }
    }
    return status;
}

Service* active_service = nullptr;

void on_signal(int) {
    if (active_service) active_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logquest: logic-based question answering over a passage corpus"};
    app.require_subcommand(1);

    ConfigFlags ask_flags, serve_flags, bench_flags, export_flags;

    auto* ask = app.add_subcommand("ask", "answer one question");
    std::string question;
    bool as_json = false;
    std::optional<std::size_t> answers;
    ask->add_option("question", question, "question text")->required();
    ask->add_flag("--json", as_json, "print the AnswerRecord array as JSON");
    ask->add_option("--answers", answers, "answers to return");
    ask_flags.attach(ask);

    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port (0 = any free port)");
    serve_flags.attach(serve);

    auto* train_cmd = app.add_subcommand("train", "fit a ranker from a labeled CSV");
    std::string kind_name = "passage", data_path, out_path, init_path;
    double lr = 0.1;
    int epochs = 500;
    train_cmd->add_option("--kind", kind_name, "passage or answer")->check(CLI::IsMember({"passage", "answer"}));
    train_cmd->add_option("--data", data_path, "training CSV (feature columns, then label)")->required();
    train_cmd->add_option("--out", out_path, "model file to write")->required();
    train_cmd->add_option("--init", init_path, "starting model (default: zeros)");
    train_cmd->add_option("--lr", lr, "learning rate");
    train_cmd->add_option("--epochs", epochs, "full-batch epochs");

    auto* check = app.add_subcommand("check-kb", "parse KB files and report range restriction");
    std::vector<std::string> kb_files;
    bool dump = false;
    check->add_option("files", kb_files, ".lkb files")->required();
    check->add_flag("--dump", dump, "print the range-restricted clauses");

    auto* bench = app.add_subcommand("bench", "run a gold question set");
    std::string gold_path;
    bool verbose = false;
    bench->add_option("--gold", gold_path, "gold TSV (default: bundled eval/gold.tsv)");
    bench->add_flag("-v,--verbose", verbose, "one line per question");
    bench_flags.attach(bench);

    auto* exporter = app.add_subcommand("export-training", "write ranker training rows from a gold set");
    std::string export_kind = "passage", export_gold, export_out;
    exporter->add_option("--kind", export_kind, "passage or answer")->check(CLI::IsMember({"passage", "answer"}));
    exporter->add_option("--gold", export_gold, "question TSV")->required();
    exporter->add_option("--out", export_out, "CSV to write")->required();
    export_flags.attach(exporter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUserError;
    }

    try {
        if (*ask) {
            PipelineConfig config = ask_flags.resolve();
            const Engine engine = Engine::load(config);
            AskOptions options;
            options.answers = answers;
            const AskResult r = engine.ask(question, options);
            if (as_json) {
                nlohmann::json body = nlohmann::json::array();
                for (const auto& a : r.answers) body.push_back(to_json(a));
                std::cout << body.dump(2) << "\n";
                if (!r.diagnostic.empty()) std::cerr << "diagnostic: " << r.diagnostic << "\n";
            } else {
                std::cout << to_string(r.query) << "\n";
                print_answers(r, std::cout);
            }
            return kOk;
        }
        if (*serve) {
            const Engine engine = Engine::load(serve_flags.resolve());
            Service service(engine);
            const int bound = service.bind(host, port);
            active_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "listening on http://" << host << ":" << bound << std::endl;
            service.listen();
            return kOk;
        }
        if (*train_cmd) {
            const ModelKind kind = model_kind_from_string(kind_name);
            const TrainingSet data = load_training_csv(data_path, kind);
            const LinearModel init = init_path.empty() ? LinearModel::zeros(kind) : load_model(init_path);
            const TrainResult result = train(init, data, lr, epochs);
            save_model(out_path, result.model);
            std::cout << "trained " << kind_name << " model on " << data.features.rows() << " rows, final loss "
                      << result.loss_history.back() << "\n"
                      << format_model(result.model);
            return kOk;
        }
        if (*check) return check_kb(kb_files, dump);
        if (*bench) {
            const PipelineConfig config = bench_flags.resolve();
            const Engine engine = Engine::load(config);
            const auto gold = load_gold(gold_path.empty() ? config.corpus.parent_path().parent_path() / "eval" / "gold.tsv"
                                                          : std::filesystem::path(gold_path));
            const BenchReport report = run_benchmark(engine, gold);
            if (verbose) {
                for (const auto& o : report.outcomes) {
                    std::cout << (o.correct ? "ok   " : "MISS ") << o.question << " -> ";
                    for (std::size_t i = 0; i < o.answers.size(); ++i) std::cout << (i ? " | " : "") << o.answers[i];
                    if (!o.diagnostic.empty()) std::cout << " (" << o.diagnostic << ")";
                    std::cout << "  " << millis(o.latency) << "\n";
                }
            }
            std::cout << "questions: " << gold.size() << "\n"
                      << "accuracy@" << config.answers_returned << ": " << std::fixed << std::setprecision(3)
                      << report.accuracy_at_k << "\n"
                      << "latency median: " << millis(report.median) << "\n"
                      << "latency p90: " << millis(report.p90) << "\n"
                      << "latency p99: " << millis(report.p99) << "\n"
                      << "latency max: " << millis(report.max) << "\n";
            return kOk;
        }
        if (*exporter) {
            const Engine engine = Engine::load(export_flags.resolve());
            const auto gold = load_gold(export_gold);
            if (export_kind == "passage") {
                save_training_csv(export_out, passage_training_data(engine, gold), FeatureVector::names());
            } else {
                save_training_csv(export_out, answer_training_data(engine, gold), AnswerFeatures::names());
            }
            std::cout << "wrote " << export_out << "\n";
            return kOk;
        }
    } catch (const NoPatternMatch& e) {
        std::cerr << e.what() << "\n";
        return kUserError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUserError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}
