#include <doctest.h>

#include <random>

#include "logquest/errors.hpp"
#include "logquest/parser.hpp"
#include "logquest/relaxation.hpp"
#include "oracle.hpp"

using namespace logquest;

namespace {

// Policy spelled out by enumeration: collect (support, -position) for every
// admissible drop and take the minimum.
std::size_t expected_drop(const Query& q, const PredicateSupport& support) {
    std::vector<std::pair<std::size_t, long>> options;
    for (std::size_t i = 0; i < q.subgoals.size(); ++i) {
        std::vector<Atom> rest = q.subgoals;
        rest.erase(rest.begin() + static_cast<long>(i));
        if (rest.empty()) continue;
        const auto vars = variables_of(rest);
        bool keeps = true;
        for (Symbol v : q.answer_vars) keeps = keeps && std::find(vars.begin(), vars.end(), v) != vars.end();
        if (!keeps) continue;
        auto it = support.find(q.subgoals[i].predicate);
        options.emplace_back(it == support.end() ? 0 : it->second, -static_cast<long>(i));
    }
    REQUIRE_FALSE(options.empty());
    return static_cast<std::size_t>(-std::min_element(options.begin(), options.end())->second);
}

oracle::AnswerSet projected(const std::vector<Clause>& kb, const Query& q, const std::vector<Atom>& universe_extra) {
    const auto dom = oracle::universe(kb, universe_extra);
    return oracle::answers_in(oracle::closure(kb, universe_extra), q, dom);
}

}  // namespace

TEST_SUITE("relax_once") {
    TEST_CASE("zero-support subgoal goes first") {
        PredicateSupport support{{Symbol::intern("born_in"), 4}};
        const auto rq = relax_once(RelaxedQuery::of(parse_query("?- born_in(X,Y), city(Y).")), support);
        CHECK(to_string(rq.query) == "?- born_in(X,Y).");
        REQUIRE(rq.dropped.size() == 1);
        CHECK(to_string(rq.dropped.front()) == "city(Y)");
        CHECK(rq.relax_count == 1);
    }

    TEST_CASE("single subgoal cannot be dropped") {
        CHECK_THROWS_AS(relax_once(RelaxedQuery::of(parse_query("?- capital(germany, X).")), {}), NothingDroppable);
    }

    TEST_CASE("answer variables must survive") {
        Query q = parse_query("?- capital(germany, X), river(Y).");
        q.answer_vars = {Symbol::intern("X"), Symbol::intern("Y")};
        CHECK_THROWS_AS(relax_once(RelaxedQuery::of(q), {}), NothingDroppable);
        q.answer_vars = {Symbol::intern("X")};
        CHECK(to_string(relax_once(RelaxedQuery::of(q), {}).query) == "?- capital(germany,X).");
    }

    TEST_CASE("equal support drops the rightmost subgoal") {
        PredicateSupport support{{Symbol::intern("p"), 2}, {Symbol::intern("q"), 2}, {Symbol::intern("r"), 2}};
        const Query q = parse_query("?- p(X), q(X), r(X).");
        const auto rq = relax_once(RelaxedQuery::of(q), support);
        CHECK(to_string(rq.query) == "?- p(X), q(X).");
        CHECK(expected_drop(q, support) == 2);
    }

    TEST_CASE("property: matches the enumerated policy") {
        std::mt19937 rng(17);
        static const char* preds[] = {"p", "q", "r", "s"};
        static const char* vars[] = {"X", "Y", "Z"};
        for (int i = 0; i < 500; ++i) {
            std::vector<Atom> goals;
            const int n = 1 + static_cast<int>(rng() % 4);
            for (int k = 0; k < n; ++k) {
                goals.push_back(Atom(preds[rng() % 4], {Term::variable(vars[rng() % 3])}));
            }
            Query q = make_query(goals);
            if (!q.answer_vars.empty() && rng() % 2) q.answer_vars.resize(1);
            PredicateSupport support;
            for (auto p : preds) support[Symbol::intern(p)] = rng() % 3;
            RelaxedQuery rq = RelaxedQuery::of(q);
            bool any = false;
            for (std::size_t k = 0; k < q.subgoals.size(); ++k) any = any || droppable(q, k);
            if (!any) {
                CHECK_THROWS_AS(relax_once(rq, support), NothingDroppable);
                continue;
            }
            const std::size_t idx = expected_drop(q, support);
            const auto out = relax_once(rq, support);
            CHECK(out.dropped.back() == q.subgoals[idx]);
            CHECK(out.query.subgoals.size() + 1 == q.subgoals.size());
            CHECK(out.query.answer_vars == q.answer_vars);
            CHECK(out.relax_count == static_cast<int>(out.dropped.size()));
        }
    }

    TEST_CASE("fact support counts ground single facts") {
        const auto bg = parse_kb("city(berlin).\ncity(bonn).\ncity(X) :- capital(Y, X).\nloc(X).");
        const auto passage = parse_kb("capital(germany, berlin).\ncity(koblenz).");
        const auto s = fact_support(bg, passage);
        CHECK(s.at(Symbol::intern("city")) == 3);
        CHECK(s.at(Symbol::intern("capital")) == 1);
        CHECK_FALSE(s.count(Symbol::intern("loc")));
    }
}

TEST_SUITE("prove_with_relaxation") {
    const auto bg = parse_kb("capital(germany, berlin).\ncapital(france, paris).\ncountry(germany).");

    TEST_CASE("provable query needs no relaxation") {
        const auto r = prove_with_relaxation(bg, std::vector<Clause>{}, parse_query("?- capital(germany, X)."),
                                             Limits{}, 2);
        CHECK(r.result.status == ProofStatus::AnswersFound);
        CHECK(r.relax_count() == 0);
    }

    TEST_CASE("missing city facts are relaxed away") {
        const Query q = parse_query("?- capital(germany, X), city(X).");
        const auto r = prove_with_relaxation(bg, std::vector<Clause>{}, q, Limits{}, 2);
        REQUIRE(r.result.status == ProofStatus::AnswersFound);
        CHECK(r.relax_count() == 1);
        CHECK(to_string(r.query.dropped.at(0)) == "city(X)");
        REQUIRE(r.result.answers.size() == 1);
        CHECK(to_string(*r.result.answers[0].bindings.lookup(Symbol::intern("X"))) == "berlin");
        // Oracle on the relaxed query.
        const auto expected = projected(bg, r.query.query, q.subgoals);
        CHECK(expected.size() == 1);
    }

    TEST_CASE("no relaxation allowed") {
        const auto r = prove_with_relaxation(bg, std::vector<Clause>{}, parse_query("?- capital(germany, X), city(X)."),
                                             Limits{}, 0);
        CHECK(r.result.status == ProofStatus::SaturatedNoAnswer);
        CHECK(r.relax_count() == 0);
    }

    TEST_CASE("stops when nothing more can be dropped") {
        const auto r = prove_with_relaxation(bg, std::vector<Clause>{}, parse_query("?- capital(spain, X), city(X)."),
                                             Limits{}, 5);
        CHECK(r.result.status == ProofStatus::SaturatedNoAnswer);
        CHECK(r.relax_count() == 1);
    }

    TEST_CASE("dropped constants stay in the domain") {
        const auto r = prove_with_relaxation(parse_kb("known(X)."), std::vector<Clause>{},
                                             parse_query("?- known(X), seen(zurich, X)."), Limits{}, 1);
        REQUIRE(r.result.status == ProofStatus::AnswersFound);
        CHECK(to_string(*r.result.answers.at(0).bindings.lookup(Symbol::intern("X"))) == "zurich");
    }

    TEST_CASE("negative max_relax is rejected") {
        CHECK_THROWS_AS(prove_with_relaxation(bg, std::vector<Clause>{}, parse_query("?- country(X)."), Limits{}, -1),
                        std::invalid_argument);
    }

    TEST_CASE("property: relaxed answers are a superset") {
        std::mt19937 rng(23);
        oracle::KbShape shape;
        int relaxed = 0;
        for (int i = 0; i < 100; ++i) {
            const auto vocab = oracle::random_vocabulary(rng, shape);
            const auto kb = oracle::random_kb(rng, shape, vocab);
            Query q = oracle::random_query(rng, vocab, 4);
            if (q.answer_vars.size() > 1) q.answer_vars.resize(1);
            RelaxedQuery rq;
            try {
                rq = relax_once(RelaxedQuery::of(q), fact_support(kb, {}));
            } catch (const NothingDroppable&) {
                continue;
            }
            ++relaxed;
            const auto full = prove(kb, std::vector<Clause>{}, q, Limits::untimed(64));
            SaturateOptions keep_domain;
            keep_domain.domain_atoms = rq.dropped;
            const auto weak = prove(kb, std::vector<Clause>{}, rq.query, Limits::untimed(64), keep_domain);
            CAPTURE(dump_problem(kb));
            CAPTURE(to_string(q));
            CAPTURE(to_string(rq.query));
            for (const auto& a : full.answers) {
                CHECK(std::any_of(weak.answers.begin(), weak.answers.end(),
                                  [&](const ProofAnswer& b) { return b.bindings == a.bindings; }));
            }
        }
        CHECK(relaxed > 30);
    }
}
