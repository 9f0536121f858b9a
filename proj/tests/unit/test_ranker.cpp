#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "logquest/errors.hpp"
#include "logquest/ranker.hpp"

using namespace logquest;

namespace {

LinearModel model_of(std::initializer_list<double> w, double b) {
    LinearModel m;
    m.weights = Eigen::VectorXd(static_cast<Eigen::Index>(w.size()));
    Eigen::Index i = 0;
    for (double x : w) m.weights[i++] = x;
    m.bias = b;
    return m;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

TrainingSet separable_1d() {
    TrainingSet d;
    d.features = Eigen::MatrixXd(8, 1);
    d.features << -2, -1.5, -1, -0.5, 0.5, 1, 1.5, 2;
    d.labels = Eigen::VectorXd(8);
    d.labels << 0, 0, 0, 0, 1, 1, 1, 1;
    return d;
}

}  // namespace

TEST_SUITE("score") {
    TEST_CASE("zero model scores one half") {
        const auto m = LinearModel::zeros(ModelKind::Passage);
        CHECK(score(m, Eigen::VectorXd::Zero(5)) == 0.5);
        CHECK(score(m, vec({3, -1, 7, 0.2, 9})) == 0.5);
        CHECK(score(model_of({1}, 0), vec({0})) == 0.5);
    }

    TEST_CASE("hand-evaluated example") {
        // 2*1 + (-1)*3 + 0.5 = -0.5
        const double s = score(model_of({2, -1}, 0.5), vec({1, 3}));
        CHECK(s == doctest::Approx(1.0 / (1.0 + std::exp(0.5))).epsilon(1e-15));
        CHECK(s == doctest::Approx(0.37754).epsilon(1e-5));
    }

    TEST_CASE("dimension mismatch") {
        CHECK_THROWS_AS(score(model_of({1, 2}, 0), vec({1})), DimensionMismatch);
    }

    TEST_CASE("sigmoid is stable at the extremes") {
        CHECK(sigmoid(1000) == 1.0);
        CHECK(sigmoid(-1000) >= 0.0);
        CHECK(std::isfinite(sigmoid(-1000)));
        CHECK(sigmoid(-30) == doctest::Approx(std::exp(-30.0)).epsilon(1e-10));
    }
}

TEST_SUITE("train") {
    TEST_CASE("loss falls on separable data") {
        const auto result = train(model_of({0}, 0), separable_1d(), 0.1, 10);
        REQUIRE(result.loss_history.size() == 10);
        double previous = log_loss(model_of({0}, 0), separable_1d());
        for (double loss : result.loss_history) {
            CHECK(loss < previous);
            previous = loss;
        }
        CHECK(result.model.weights[0] > 0);
    }

    TEST_CASE("single-label data is rejected") {
        auto d = separable_1d();
        d.labels.setOnes();
        CHECK_THROWS_AS(train(model_of({0}, 0), d, 0.1, 5), DataError);
    }

    TEST_CASE("bad hyper-parameters are rejected") {
        CHECK_THROWS_AS(train(model_of({0}, 0), separable_1d(), 0.0, 5), DataError);
        CHECK_THROWS_AS(train(model_of({0}, 0), separable_1d(), 0.1, 0), DataError);
        CHECK_THROWS_AS(train(model_of({0, 0}, 0), separable_1d(), 0.1, 5), DimensionMismatch);
    }

    TEST_CASE("gradient matches central differences") {
        std::mt19937 rng(41);
        std::normal_distribution<double> g(0.0, 1.0);
        const double h = 1e-6;
        for (int trial = 0; trial < 20; ++trial) {
            TrainingSet d;
            d.features = Eigen::MatrixXd(12, 5);
            d.labels = Eigen::VectorXd(12);
            for (Eigen::Index i = 0; i < 12; ++i) {
                for (Eigen::Index j = 0; j < 5; ++j) d.features(i, j) = g(rng);
                d.labels[i] = i % 2;
            }
            LinearModel m = LinearModel::zeros(ModelKind::Passage);
            for (Eigen::Index j = 0; j < 5; ++j) m.weights[j] = g(rng);
            m.bias = g(rng);

            const Gradient analytic = log_loss_gradient(m, d);
            auto numeric_at = [&](auto&& perturb) {
                LinearModel plus = m, minus = m;
                perturb(plus, h);
                perturb(minus, -h);
                return (log_loss(plus, d) - log_loss(minus, d)) / (2 * h);
            };
            for (Eigen::Index j = 0; j < 5; ++j) {
                const double num = numeric_at([j](LinearModel& x, double e) { x.weights[j] += e; });
                const double ana = analytic.weights[j];
                CHECK(std::abs(num - ana) / std::max(1e-8, std::max(std::abs(num), std::abs(ana))) < 1e-5);
            }
            const double num_b = numeric_at([](LinearModel& x, double e) { x.bias += e; });
            CHECK(std::abs(num_b - analytic.bias) / std::max(1e-8, std::abs(num_b)) < 1e-5);
        }
    }

    TEST_CASE("log loss is finite for confident mistakes") {
        TrainingSet d;
        d.features = Eigen::MatrixXd(1, 1);
        d.features << 1.0;
        d.labels = Eigen::VectorXd(1);
        d.labels << 0.0;
        const double loss = log_loss(model_of({800}, 0), d);
        CHECK(std::isfinite(loss));
        CHECK(loss == doctest::Approx(800.0));
    }
}

TEST_SUITE("model files") {
    TEST_CASE("format and parse round-trip") {
        LinearModel m = model_of({0.25, -1.5, 3, 0, 1e-7}, -0.125);
        m.kind = ModelKind::Answer;
        const auto back = parse_model(format_model(m));
        CHECK(back.kind == ModelKind::Answer);
        CHECK(back.bias == m.bias);
        CHECK(back.weights == m.weights);
    }

    TEST_CASE("malformed models are rejected") {
        CHECK_THROWS_AS(parse_model(""), DataError);
        CHECK_THROWS_AS(parse_model("passage\n0.5\n1 2"), DimensionMismatch);
        CHECK_THROWS_AS(parse_model("nonsense\n0\n1 2 3 4 5"), DataError);
        CHECK_THROWS_AS(parse_model("passage\nx\n1 2 3 4 5"), DataError);
    }

    TEST_CASE("training csv") {
        const auto d = parse_training_csv("a,b,c,d,e,label\n1,2,3,4,5,1\n0,0,0,0,0,0\n", ModelKind::Passage);
        CHECK(d.features.rows() == 2);
        CHECK(d.features(0, 4) == 5);
        CHECK(d.labels[0] == 1);
        CHECK_THROWS_AS(parse_training_csv("a,b,label\n1,2,1\n", ModelKind::Passage), DimensionMismatch);
        CHECK_THROWS_AS(parse_training_csv("a,b,c,d,e,label\n1,2,3,4,5,2\n", ModelKind::Passage), DataError);
        CHECK_THROWS_AS(parse_training_csv("a,b,c,d,e\n1,2,3,4,5\n", ModelKind::Passage), DataError);

        const auto path = std::filesystem::temp_directory_path() / "logquest_train_roundtrip.csv";
        save_training_csv(path, d, {"a", "b", "c", "d", "e"});
        const auto back = load_training_csv(path, ModelKind::Passage);
        CHECK(back.features == d.features);
        CHECK(back.labels == d.labels);
        std::filesystem::remove(path);
    }
}

TEST_SUITE("rank_answers") {
    const LinearModel by_retrieval = [] {
        LinearModel m = LinearModel::zeros(ModelKind::Answer);
        m.weights[2] = 1.0;  // retrieval_score
        return m;
    }();

    AnswerCandidate cand(std::string key, double retrieval, std::string passage, int relax = 0) {
        AnswerCandidate c;
        c.answer_key = std::move(key);
        c.features.retrieval_score = retrieval;
        c.features.relax_count = relax;
        c.passage_id = std::move(passage);
        return c;
    }

    TEST_CASE("one candidate") {
        for (std::size_t n : {1u, 3u, 10u}) {
            const auto out = rank_answers({cand("berlin", 0.3, "p1")}, by_retrieval, n);
            REQUIRE(out.size() == 1);
            CHECK(out[0].candidate == 0);
        }
        CHECK(rank_answers({}, by_retrieval, 3).empty());
    }

    TEST_CASE("duplicate bindings keep the best provenance") {
        // logit(0.9) and logit(0.4) as retrieval scores give scores 0.9 / 0.4.
        const double hi = std::log(0.9 / 0.1), lo = std::log(0.4 / 0.6);
        const std::vector<AnswerCandidate> cs = {cand("berlin", lo, "p2"), cand("berlin", hi, "p7")};
        const auto out = rank_answers(cs, by_retrieval, 3);
        REQUIRE(out.size() == 1);
        CHECK(out[0].candidate == 1);
        CHECK(out[0].score == doctest::Approx(0.9));

        // Exhaustive policy check over both input orders.
        const std::vector<AnswerCandidate> reversed = {cs[1], cs[0]};
        const auto again = rank_answers(reversed, by_retrieval, 3);
        CHECK(reversed[again[0].candidate].passage_id == "p7");
    }

    TEST_CASE("top n by score with deterministic ties") {
        std::vector<AnswerCandidate> cs;
        for (int i = 0; i < 7; ++i) cs.push_back(cand("a" + std::to_string(i), 0.1 * i, "p" + std::to_string(i)));
        cs.push_back(cand("tie_relaxed", 0.1 * 5, "p0", 1));
        const auto out = rank_answers(cs, by_retrieval, 3);
        REQUIRE(out.size() == 3);
        CHECK(cs[out[0].candidate].answer_key == "a6");
        CHECK(cs[out[1].candidate].answer_key == "a5");
        CHECK(cs[out[2].candidate].answer_key == "tie_relaxed");
        CHECK(out[0].score >= out[1].score);
    }

    TEST_CASE("answer features vector") {
        AnswerFeatures f;
        f.relax_count = 2;
        f.proof_level = 3;
        f.retrieval_score = 0.5;
        f.passage_support = 0.25;
        f.answer_is_ground = true;
        CHECK(f.to_vector() == vec({2, 3, 0.5, 0.25, 1}));
        CHECK(AnswerFeatures::names().size() == 5);
    }
}
