#include <doctest.h>

#include <random>

#include "logquest/errors.hpp"
#include "logquest/parser.hpp"
#include "logquest/prover.hpp"
#include "logquest/question.hpp"
#include "logquest/substitution.hpp"
#include "logquest/transform.hpp"
#include "oracle.hpp"

using namespace logquest;

namespace {

Atom atom(std::string_view text) {
    const Clause c = parse_clause(std::string(text) + ".", origin::background, ParseOptions{true, 1});
    REQUIRE(c.head.size() == 1);
    return c.head.front();
}

Term c(std::string_view name) { return Term::constant(name); }
Term v(std::string_view name) { return Term::variable(name); }

// Alpha-equivalence of clauses: same shape up to a consistent variable renaming.
bool rename_match(const Term& a, const Term& b, std::map<Symbol, Symbol>& fwd, std::map<Symbol, Symbol>& back) {
    if (a.kind() != b.kind()) return false;
    if (a.is_variable()) {
        auto [i, ins1] = fwd.emplace(a.symbol(), b.symbol());
        auto [j, ins2] = back.emplace(b.symbol(), a.symbol());
        return i->second == b.symbol() && j->second == a.symbol();
    }
    if (a.symbol() != b.symbol() || a.args().size() != b.args().size()) return false;
    for (std::size_t k = 0; k < a.args().size(); ++k) {
        if (!rename_match(a.args()[k], b.args()[k], fwd, back)) return false;
    }
    return true;
}

bool is_variant(const Clause& x, const Clause& y) {
    if (x.head.size() != y.head.size() || x.body.size() != y.body.size()) return false;
    std::map<Symbol, Symbol> fwd, back;
    auto atoms_match = [&](const std::vector<Atom>& as, const std::vector<Atom>& bs) {
        for (std::size_t i = 0; i < as.size(); ++i) {
            if (as[i].predicate != bs[i].predicate || as[i].args.size() != bs[i].args.size()) return false;
            for (std::size_t k = 0; k < as[i].args.size(); ++k) {
                if (!rename_match(as[i].args[k], bs[i].args[k], fwd, back)) return false;
            }
        }
        return true;
    };
    return atoms_match(x.head, y.head) && atoms_match(x.body, y.body);
}

Term random_term(std::mt19937& rng, int depth) {
    static const char* consts[] = {"a", "b", "berlin", "k9", "münchen"};
    static const char* vars[] = {"X", "Y", "Zed", "_W"};
    const int pick = static_cast<int>(rng() % (depth > 0 ? 3 : 2));
    if (pick == 0) return Term::constant(consts[rng() % 5]);
    if (pick == 1) return Term::variable(vars[rng() % 4]);
    std::vector<Term> args;
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) args.push_back(random_term(rng, depth - 1));
    return Term::compound(rng() % 2 ? "f" : "g", std::move(args));
}

Atom random_user_atom(std::mt19937& rng) {
    if (rng() % 8 == 0) return Atom(reserved::equality(), {random_term(rng, 1), random_term(rng, 1)});
    static const char* preds[] = {"p", "located_in", "q2", "flag"};
    Atom a;
    a.predicate = Symbol::intern(preds[rng() % 4]);
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) a.args.push_back(random_term(rng, 2));
    return a;
}

Term random_ground(std::mt19937& rng, int depth) {
    if (depth == 0 || rng() % 2) return Term::constant(std::string(1, static_cast<char>('a' + rng() % 3)));
    return Term::compound("f", {random_ground(rng, depth - 1), random_ground(rng, depth - 1)});
}

}  // namespace

TEST_SUITE("match") {
    TEST_CASE("binds a variable against a constant") {
        auto s = match(atom("p(X,b)"), atom("p(a,b)"));
        REQUIRE(s);
        CHECK(s->size() == 1);
        CHECK(*s->lookup(Symbol::intern("X")) == c("a"));
    }

    TEST_CASE("conflicting repeated variable fails") { CHECK_FALSE(match(atom("p(X,X)"), atom("p(a,b)"))); }

    TEST_CASE("nested compound binds both variables") {
        const Atom pattern = atom("p(f(X),Y)");
        const Atom ground = atom("p(f(a),g(a))");
        auto s = match(pattern, ground);
        REQUIRE(s);
        CHECK(s->size() == 2);
        CHECK(apply(*s, pattern) == ground);
        CHECK(*s->lookup(Symbol::intern("Y")) == Term::compound("g", {c("a")}));
    }

    TEST_CASE("non-ground target never matches") { CHECK_FALSE(match(atom("p(X)"), atom("p(Y)"))); }

    TEST_CASE("predicate and arity must agree") {
        CHECK_FALSE(match(atom("p(X)"), atom("q(a)")));
        CHECK_FALSE(match(atom("p(X)"), atom("p(a,b)")));
    }

    TEST_CASE("property: match then apply reproduces the ground atom") {
        std::mt19937 rng(7);
        int matched = 0;
        for (int i = 0; i < 2000; ++i) {
            Atom g("p", {random_ground(rng, 2), random_ground(rng, 2)});
            // Generalize random positions of the ground atom into variables.
            Atom pattern = g;
            for (auto& t : pattern.args) {
                if (rng() % 2) t = Term::variable(rng() % 2 ? "X" : "Y");
            }
            auto s = match(pattern, g);
            if (!s) continue;
            ++matched;
            CHECK(apply(*s, pattern) == g);
            for (const auto& [var, term] : s->bindings()) CHECK(term.is_ground());
        }
        CHECK(matched > 1000);
    }
}

TEST_SUITE("substitution") {
    TEST_CASE("apply replaces bound variables only") {
        Substitution s;
        s.bind(Symbol::intern("X"), c("a"));
        CHECK(apply(s, atom("q(X)")) == atom("q(a)"));
        CHECK(apply(s, atom("q(X,Y)")) == atom("q(a,Y)"));
    }

    TEST_CASE("empty substitution is the identity") {
        const Clause cl = parse_clause("h(X) ; k(f(Y)) :- b(X, Y).");
        CHECK(apply(Substitution{}, cl) == cl);
    }

    TEST_CASE("composition equals sequential application") {
        Substitution first;
        first.bind(Symbol::intern("X"), Term::compound("f", {v("Y")}));
        Substitution second;
        second.bind(Symbol::intern("Y"), c("b"));
        const Atom p = atom("p(X,Y)");
        const Atom expected = atom("p(f(b),b)");
        CHECK(apply(second, apply(first, p)) == expected);
        CHECK(apply(compose(first, second), p) == expected);
    }

    TEST_CASE("occurs check rejects cyclic bindings") {
        Substitution s;
        CHECK_THROWS_AS(s.bind(Symbol::intern("X"), Term::compound("f", {v("X")})), std::invalid_argument);
    }

    TEST_CASE("property: substitutions stay idempotent") {
        std::mt19937 rng(11);
        for (int i = 0; i < 500; ++i) {
            Substitution s;
            static const char* names[] = {"X", "Y", "Z", "W"};
            for (int k = 0; k < 3; ++k) {
                const Symbol var = Symbol::intern(names[rng() % 4]);
                const Term t = random_term(rng, 2);
                if (s.binds(var)) continue;
                try {
                    s.bind(var, t);
                } catch (const std::invalid_argument&) {
                }
            }
            const Atom x("p", {random_term(rng, 2), random_term(rng, 2)});
            CHECK(apply(s, apply(s, x)) == apply(s, x));
        }
    }
}

TEST_SUITE("range restriction") {
    TEST_CASE("already range-restricted clause is unchanged") {
        const Clause cl = parse_clause("p(a) :- q(a).");
        const auto out = range_restrict(cl);
        REQUIRE(out.size() == 1);
        CHECK(out.front() == cl);
    }

    TEST_CASE("open fact gains a dom guard") {
        const auto out = range_restrict(parse_clause("p(X)."));
        REQUIRE(out.size() == 1);
        CHECK(to_string(out.front()) == "p(X) :- dom(X).");
        CHECK(out.front().is_range_restricted());
    }

    TEST_CASE("disjunctive head variable gains a dom guard") {
        const auto out = range_restrict(parse_clause("p(X);r(Y) :- q(X)."));
        REQUIRE(out.size() == 1);
        CHECK(to_string(out.front()) == "p(X) ; r(Y) :- q(X), dom(Y).");
    }

    TEST_CASE("dom facts cover every constant once") {
        const auto kb = parse_kb("p(a, f(b)).\nq(a).\nr(X) :- q(X), s(c).");
        const auto facts = dom_facts(kb);
        std::vector<std::string> printed;
        for (const auto& f : facts) printed.push_back(to_string(f));
        CHECK(printed == std::vector<std::string>{"dom(a).", "dom(b).", "dom(c)."});
    }

    TEST_CASE("ground consequences are preserved (brute-force oracle)") {
        // p(X). over the universe {a, b} plus a rule using it.
        const auto kb = parse_kb("p(X).\nq(a).\nr(Y) ; s(Y) :- q(Y).\nt(X, Y) :- q(X).");
        std::vector<Clause> definite;
        for (const auto& cl : kb) {
            if (cl.head.size() <= 1) definite.push_back(cl);
        }
        definite.push_back(parse_clause("u(b)."));
        auto before = oracle::closure(definite);
        auto after = oracle::closure(range_restrict_all(definite));
        for (auto it = after.begin(); it != after.end();) {
            it = it->predicate == reserved::dom() ? after.erase(it) : std::next(it);
        }
        CHECK(before == after);
        CHECK(before.count(atom("p(b)")));
        CHECK(before.count(atom("t(a,b)")));
    }

    TEST_CASE("property: random KBs keep their ground consequences") {
        std::mt19937 rng(3);
        oracle::KbShape shape;
        shape.max_constants = 4;
        shape.max_clauses = 8;
        for (int i = 0; i < 40; ++i) {
            const auto vocab = oracle::random_vocabulary(rng, shape);
            const auto kb = oracle::random_kb(rng, shape, vocab);
            auto after = oracle::closure(range_restrict_all(kb));
            for (auto it = after.begin(); it != after.end();) {
                it = it->predicate == reserved::dom() ? after.erase(it) : std::next(it);
            }
            CHECK(oracle::closure(kb) == after);
        }
    }
}

TEST_SUITE("congruence axioms") {
    TEST_CASE("no equality, no axioms") {
        CHECK(congruence_axioms(signature_of(parse_kb("p(a).\nq(X) :- p(X)."))).empty());
    }

    TEST_CASE("textbook schema for a unary predicate") {
        const auto axioms = congruence_axioms(signature_of(parse_kb("p(a).\n=(a, b).")));
        const Clause expected = parse_clause("p(Y) :- p(X), =(X,Y).");
        CHECK(std::any_of(axioms.begin(), axioms.end(), [&](const Clause& a) { return is_variant(a, expected); }));
        const Clause symmetry = parse_clause("=(Y,X) :- =(X,Y).");
        CHECK(std::any_of(axioms.begin(), axioms.end(), [&](const Clause& a) { return is_variant(a, symmetry); }));
    }

    TEST_CASE("axiom count follows the signature") {
        // 3 structural axioms + one per predicate position (p/2, q/1) + one per
        // function position (f/2).
        const auto kb = parse_kb("p(a, f(b, c)).\nq(a).\na = b.");
        CHECK(congruence_axioms(signature_of(kb)).size() == 3 + (2 + 1) + 2);
    }

    TEST_CASE("equal constants share their properties") {
        const auto kb = parse_kb("=(a,b).\np(a).");
        const Query q = parse_query("?- p(X).");
        const auto result = prove(kb, std::vector<Clause>{}, q, Limits::untimed());
        REQUIRE(result.status == ProofStatus::AnswersFound);
        std::vector<std::string> got;
        for (const auto& a : result.answers) got.push_back(to_string(*a.bindings.lookup(Symbol::intern("X"))));
        CHECK(got == std::vector<std::string>{"a", "b"});

        // Forward-chaining oracle over the KB plus its axioms.
        std::vector<Clause> with_axioms = kb;
        for (auto& ax : congruence_axioms(signature_of(kb))) with_axioms.push_back(ax);
        const auto expected = oracle::answers(range_restrict_all(with_axioms), q);
        CHECK(expected.size() == 2);
        CHECK(expected.size() == result.answers.size());
    }
}

TEST_SUITE("parser") {
    TEST_CASE("fact") {
        const Clause cl = parse_clause("capital(germany, berlin).");
        CHECK(cl.is_fact());
        REQUIRE(cl.head.size() == 1);
        CHECK(cl.head.front() == Atom("capital", {c("germany"), c("berlin")}));
    }

    TEST_CASE("rule") {
        const Clause cl = parse_clause("located(X,Z) :- located(X,Y), located(Y,Z).");
        CHECK(cl.head.size() == 1);
        CHECK(cl.body.size() == 2);
        CHECK(cl.body[1] == Atom("located", {v("Y"), v("Z")}));
    }

    TEST_CASE("disjunctive head") {
        const Clause cl = parse_clause("mammal(X) ; reptile(X) :- animal(X).");
        CHECK(cl.head.size() == 2);
    }

    TEST_CASE("constraints, comments, whitespace") {
        CHECK(parse_clause("false :- p(X), q(X).").is_constraint());
        CHECK(parse_clause(":- p(X).").is_constraint());
        CHECK(parse_clause("  p ( a ,b ) .   % trailing comment") == parse_clause("p(a,b)."));
    }

    TEST_CASE("origin tag is attached") { CHECK(parse_clause("p(a).", "p17").origin == "p17"); }

    TEST_CASE("syntax errors carry line, column and token") {
        ParseOptions opts;
        opts.line = 4;
        try {
            parse_clause("p(a :- q.", origin::background, opts);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
            CHECK(e.column() == 5);
            CHECK(e.token() == ":-");
        }
        CHECK_THROWS_AS(parse_clause("p(a)"), ParseError);
        CHECK_THROWS_AS(parse_clause("p(a). q(b)."), ParseError);
        CHECK_THROWS_AS(parse_clause("P(a)."), ParseError);
    }

    TEST_CASE("reserved predicates are rejected in user input") {
        CHECK_THROWS_AS(parse_clause("dom(a)."), ParseError);
        CHECK_THROWS_AS(parse_clause("p(X) :- __ans(X)."), ParseError);
        CHECK_THROWS_AS(parse_clause("=(a, b, c)."), ParseError);
        CHECK_NOTHROW(parse_clause("dom(a).", origin::background, ParseOptions{true, 1}));
    }

    TEST_CASE("queries") {
        const Query q = parse_query("?- capital(germany, X).");
        CHECK(q.subgoals.size() == 1);
        CHECK(q.answer_vars == std::vector<Symbol>{Symbol::intern("X")});
        CHECK(parse_query("?- capital(germany, berlin).").answer_vars.empty());
        CHECK(parse_query("?- born_in(X,Y), city(Y).").answer_vars ==
              std::vector<Symbol>{Symbol::intern("X"), Symbol::intern("Y")});
        CHECK_THROWS_AS(parse_query("?- ."), ParseError);
        CHECK_THROWS_AS(parse_query("capital(germany, X)."), ParseError);
    }

    TEST_CASE("kb text reports the failing line") {
        try {
            parse_kb("% header\np(a).\n\nq(b) :- .\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
        }
    }

    TEST_CASE("property: print then parse is the identity") {
        std::mt19937 rng(5);
        for (int i = 0; i < 500; ++i) {
            Clause cl;
            const int h = static_cast<int>(rng() % 3);
            const int b = static_cast<int>(rng() % 3) + (h == 0 ? 1 : 0);
            for (int k = 0; k < h; ++k) cl.head.push_back(random_user_atom(rng));
            for (int k = 0; k < b; ++k) cl.body.push_back(random_user_atom(rng));
            const std::string printed = to_string(cl);
            CAPTURE(printed);
            CHECK(parse_clause(printed) == cl);
        }
    }
}

TEST_SUITE("questions") {
    const std::vector<QuestionPattern> patterns = parse_patterns(
        "# test patterns\n"
        "who wrote <e>\t?- wrote(X, <e>).\n"
        "what is the <r> of <e>\t?- <r>(<e>, X).\n"
        "is <a> the capital of <b>\t?- capital(<b>, <a>).\n"
        "which river flows through <e>\t?- flows_through(X, <e>), river(X), located_in(<e>, Y).\n");

    TEST_CASE("single slot fill") {
        CHECK(to_string(parse_question("What is the capital of Germany?", patterns)) == "?- capital(germany,X).");
    }

    TEST_CASE("answer variable first in the template") {
        const Query q = parse_question("Who wrote Faust?", patterns);
        CHECK(to_string(q) == "?- wrote(X,faust).");
        CHECK(q.answer_vars == std::vector<Symbol>{Symbol::intern("X")});
    }

    TEST_CASE("unmatched question") {
        CHECK_THROWS_AS(parse_question("Colorless green ideas?", patterns), NoPatternMatch);
        CHECK_THROWS_AS(parse_question("anything", {}), NoPatternMatch);
    }

    TEST_CASE("multi-token spans are joined with underscores") {
        CHECK(to_string(parse_question("What is the capital of Rheinland-Pfalz?", patterns)) ==
              "?- capital(rheinland_pfalz,X).");
        CHECK(to_string(parse_question("Who wrote The Sorrows of Young Werther?", patterns)) ==
              "?- wrote(X,the_sorrows_of_young_werther).");
    }

    TEST_CASE("yes/no pattern has no answer variable") {
        const Query q = parse_question("Is Berlin the capital of Germany?", patterns);
        CHECK(q.answer_vars.empty());
        CHECK(to_string(q) == "?- capital(germany,berlin).");
    }

    TEST_CASE("extra template variables stay existential") {
        const Query q = parse_question("Which river flows through Koblenz?", patterns);
        CHECK(q.answer_vars == std::vector<Symbol>{Symbol::intern("X")});
    }

    TEST_CASE("file order decides between matching patterns") {
        auto both = parse_patterns("what is <x>\t?- first(<x>, X).\nwhat is the <r> of <e>\t?- <r>(<e>, X).\n");
        const auto first = interpret_question("what is the capital of germany", both);
        CHECK(first.pattern_index == 0);
        CHECK(to_string(first.query) == "?- first(the_capital_of_germany,X).");
        std::reverse(both.begin(), both.end());
        CHECK(interpret_question("what is the capital of germany", both).pattern_index == 0);
        CHECK(to_string(parse_question("what is the capital of germany", both)) == "?- capital(germany,X).");
    }

    TEST_CASE("pattern file errors") {
        CHECK_THROWS_AS(parse_patterns("no tab here"), ParseError);
        CHECK_THROWS_AS(parse_patterns("who wrote <e>\t?- wrote(X, <f>)."), ParseError);
        CHECK_THROWS_AS(parse_patterns("who wrote <e>\twrote(X, <e>)."), ParseError);
    }
}
