#include "logquest/prover.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "logquest/parser.hpp"
#include "logquest/transform.hpp"

namespace logquest {

Limits Limits::untimed(int max_level, int max_branches) {
    return Limits{max_level, std::chrono::nanoseconds::max(), max_branches};
}

std::string to_string(ProofStatus status) {
    switch (status) {
        case ProofStatus::AnswersFound: return "answers_found";
        case ProofStatus::SaturatedNoAnswer: return "saturated_no_answer";
        case ProofStatus::BudgetExhausted: return "budget_exhausted";
        case ProofStatus::KbInconsistent: return "kb_inconsistent";
    }
    return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;
using AtomId = std::uint32_t;

Clock::time_point deadline_after(Clock::time_point start, std::chrono::nanoseconds budget) {
    if (budget >= Clock::time_point::max() - start) return Clock::time_point::max();
    return start + std::chrono::duration_cast<Clock::duration>(budget);
}

struct FirstArgKey {
    Symbol predicate;
    Term first;

    friend bool operator==(const FirstArgKey& a, const FirstArgKey& b) {
        return a.predicate == b.predicate && a.first == b.first;
    }
};

struct FirstArgHash {
    std::size_t operator()(const FirstArgKey& k) const noexcept { return k.predicate.hash() * 31 + k.first.hash(); }
};

/// Ground atoms of one branch with per-predicate and first-argument indexes.
/// Ids grow monotonically, so every index list is sorted.
struct AtomStore {
    std::vector<Atom> atoms;
    std::vector<int> level;
    std::vector<char> traced;
    std::vector<std::vector<AtomId>> premises;
    std::unordered_map<Atom, AtomId> ids;
    std::unordered_map<Symbol, std::vector<AtomId>> by_predicate;
    std::unordered_map<FirstArgKey, std::vector<AtomId>, FirstArgHash> by_first_arg;

    AtomId size() const { return static_cast<AtomId>(atoms.size()); }
    bool contains(const Atom& a) const { return ids.count(a) > 0; }

    bool add(Atom a, int lvl, bool tr, std::vector<AtomId> prem) {
        const AtomId id = size();
        if (!ids.emplace(a, id).second) return false;
        by_predicate[a.predicate].push_back(id);
        if (!a.args.empty()) by_first_arg[FirstArgKey{a.predicate, a.args.front()}].push_back(id);
        atoms.push_back(std::move(a));
        level.push_back(lvl);
        traced.push_back(tr ? 1 : 0);
        premises.push_back(std::move(prem));
        return true;
    }

    const std::vector<AtomId>* relation(Symbol pred) const {
        auto it = by_predicate.find(pred);
        return it == by_predicate.end() ? nullptr : &it->second;
    }

    const std::vector<AtomId>* first_arg(Symbol pred, const Term& first) const {
        auto it = by_first_arg.find(FirstArgKey{pred, first});
        return it == by_first_arg.end() ? nullptr : &it->second;
    }
};

std::size_t count_in(const std::vector<AtomId>* ids, AtomId lo, AtomId hi) {
    if (!ids || lo >= hi) return 0;
    auto a = std::lower_bound(ids->begin(), ids->end(), lo);
    auto b = std::lower_bound(a, ids->end(), hi);
    return static_cast<std::size_t>(b - a);
}

struct Obligation {
    std::vector<Atom> heads;
    int level = 0;
    bool traced = false;
    std::vector<AtomId> premises;
};

struct Branch {
    AtomStore store;
    std::vector<Obligation> pending;
    AtomId delta_begin = 0;
    int round = 0;
    AtomId initial_count = 0;
    std::vector<std::set<std::vector<AtomId>>> fired;  // per clause, redundancy check only
};

struct Derivation {
    Atom atom;
    int level = 0;
    bool traced = false;
    std::vector<AtomId> premises;
};

using AnswerKey = std::vector<Term>;

struct AnswerKeyLess {
    bool operator()(const AnswerKey& a, const AnswerKey& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const Term& x, const Term& y) { return compare(x, y) < 0; });
    }
};

struct AnswerInfo {
    int level = 0;
    double support = 0.0;
};

using AnswerMap = std::map<AnswerKey, AnswerInfo, AnswerKeyLess>;

class Saturator {
public:
    Saturator(const std::vector<Clause>& clauses, const Limits& limits, Clock::time_point start,
              Clock::time_point deadline, const SaturateOptions& options)
        : clauses_(clauses), limits_(limits), start_(start), deadline_(deadline), options_(options) {
        passage_clause_.reserve(clauses.size());
        for (const auto& c : clauses) {
            if (!c.is_range_restricted()) {
                throw std::invalid_argument("clause is not range restricted: " + to_string(c));
            }
            passage_clause_.push_back(origin::is_passage(c.origin));
            if (c.head.size() == 1 && c.head.front().predicate == reserved::answer() && !answer_rule_) {
                answer_rule_ = &c;
            }
        }
        if (answer_rule_) {
            for (const auto& t : answer_rule_->head.front().args) {
                answer_vars_.push_back(t.is_variable() ? t.symbol() : Symbol());
            }
        }
    }

    ProofResult run() {
        Branch root;
        if (options_.check_redundancy) root.fired.resize(clauses_.size());
        for (const auto& c : clauses_) {
            if (c.body.empty() && c.head.size() == 1) {
                root.store.add(c.head.front(), 0, origin::is_passage(c.origin), {});
            }
        }
        root.initial_count = root.store.size();

        std::vector<Branch> stack;
        stack.push_back(std::move(root));
        int created = 1;
        bool any_open = false;
        bool first_open = true;
        AnswerMap answers;

        while (!stack.empty()) {
            Branch branch = std::move(stack.back());
            stack.pop_back();

            bool closed = false;
            bool finished = false;
            while (!finished) {
                const Outcome outcome = round(branch);
                if (outcome == Outcome::Closed) {
                    closed = true;
                    break;
                }
                if (outcome == Outcome::TimedOut) break;
                if (outcome == Outcome::Progress) continue;

                // Definite fixpoint: resolve pending disjunctions.
                auto& pending = branch.pending;
                pending.erase(std::remove_if(pending.begin(), pending.end(),
                                             [&](const Obligation& o) {
                                                 return std::any_of(o.heads.begin(), o.heads.end(),
                                                                    [&](const Atom& h) { return branch.store.contains(h); });
                                             }),
                              pending.end());
                if (pending.empty()) {
                    finished = true;
                    break;
                }
                // Past the branch cap only the leftmost alternative is kept.
                const int spare = std::max(limits_.max_branches - created, 0);
                const std::size_t n = pending.front().heads.size();
                const std::size_t allowed = std::min<std::size_t>(n, static_cast<std::size_t>(spare) + 1);
                if (allowed < n) stats_.branch_limit_hit = true;
                Obligation chosen = std::move(pending.front());
                pending.erase(pending.begin());
                if (allowed == 1) {
                    branch.delta_begin = branch.store.size();
                    branch.store.add(chosen.heads.front(), chosen.level, chosen.traced, chosen.premises);
                    continue;
                }
                ++stats_.split_count;
                created += static_cast<int>(allowed) - 1;
                for (std::size_t k = allowed; k-- > 0;) {
                    Branch child = k == 0 ? std::move(branch) : branch;
                    child.delta_begin = child.store.size();
                    child.store.add(chosen.heads[k], chosen.level, chosen.traced, chosen.premises);
                    stack.push_back(std::move(child));
                }
                break;
            }

            const bool stopped = stats_.time_limit_hit;
            if (closed || finished || stopped) ++stats_.branches_explored;
            if (!closed && (finished || stopped)) {
                collect(branch, answers, any_open, first_open);
                any_open = true;
                first_open = false;
            }
            if (stopped) break;
        }

        const bool cut_short = stats_.time_limit_hit || stats_.branch_limit_hit;
        // Unvisited branches could refute any cautious answer.
        if (options_.mode == AnswerMode::Cautious && cut_short) answers.clear();

        ProofResult result;
        stats_.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start_);
        result.stats = stats_;
        for (const auto& [key, info] : answers) {
            ProofAnswer a;
            for (std::size_t i = 0; i < key.size() && i < answer_vars_.size(); ++i) {
                if (answer_vars_[i].valid()) a.bindings.push_ground(answer_vars_[i], key[i]);
            }
            a.proof_level = info.level;
            a.passage_support = info.support;
            result.answers.push_back(std::move(a));
        }
        if (!result.answers.empty()) {
            result.status = ProofStatus::AnswersFound;
        } else if (cut_short) {
            result.status = ProofStatus::BudgetExhausted;
        } else if (!any_open) {
            result.status = ProofStatus::KbInconsistent;
        } else if (stats_.level_limit_hit) {
            result.status = ProofStatus::BudgetExhausted;
        } else {
            result.status = ProofStatus::SaturatedNoAnswer;
        }
        return result;
    }

private:
    enum class Outcome { Progress, Fixpoint, Closed, TimedOut };

    bool out_of_time() {
        if (stats_.time_limit_hit) return true;
        if ((++tick_ & 0xFF) != 0) return false;
        return check_clock();
    }

    bool check_clock() {
        if (deadline_ != Clock::time_point::max() && Clock::now() >= deadline_) stats_.time_limit_hit = true;
        return stats_.time_limit_hit;
    }

    Outcome round(Branch& b) {
        if (check_clock()) return Outcome::TimedOut;
        ++b.round;
        const AtomId round_start = b.store.size();
        const AtomId delta_start = b.delta_begin;
        derived_.clear();
        derived_index_.clear();
        obligations_.clear();
        closed_ = false;

        for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
            const Clause& c = clauses_[ci];
            if (c.body.empty()) {
                if (b.round == 1 && c.head.size() != 1) {
                    Substitution empty;
                    premises_.clear();
                    fire(b, ci, empty);
                }
            } else {
                join_clause(b, ci, delta_start, round_start);
            }
            if (closed_) return Outcome::Closed;
            if (stats_.time_limit_hit) return Outcome::TimedOut;
        }

        for (auto& d : derived_) b.store.add(std::move(d.atom), d.level, d.traced, std::move(d.premises));
        b.delta_begin = round_start;
        for (auto& o : obligations_) b.pending.push_back(std::move(o));
        return b.store.size() > round_start ? Outcome::Progress : Outcome::Fixpoint;
    }

    void join_clause(Branch& b, std::size_t ci, AtomId delta_start, AtomId round_start) {
        const auto& body = clauses_[ci].body;
        const std::size_t m = body.size();
        lo_.assign(m, 0);
        hi_.assign(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            // Semi-naive split: literal i ranges over the delta, earlier
            // literals over older atoms, later ones over everything before
            // this round. Each grounding is enumerated in exactly one round.
            const auto* rel_i = b.store.relation(body[i].predicate);
            if (count_in(rel_i, delta_start, round_start) == 0) continue;
            std::vector<std::pair<std::size_t, std::size_t>> sized;
            sized.reserve(m);
            for (std::size_t j = 0; j < m; ++j) {
                if (j < i) {
                    lo_[j] = 0;
                    hi_[j] = delta_start;
                } else if (j == i) {
                    lo_[j] = delta_start;
                    hi_[j] = round_start;
                } else {
                    lo_[j] = 0;
                    hi_[j] = round_start;
                }
                sized.emplace_back(count_in(b.store.relation(body[j].predicate), lo_[j], hi_[j]), j);
            }
            if (std::any_of(sized.begin(), sized.end(), [](const auto& s) { return s.first == 0; })) continue;
            std::stable_sort(sized.begin(), sized.end(),
                             [](const auto& x, const auto& y) { return x.first < y.first; });
            order_.clear();
            for (const auto& s : sized) order_.push_back(s.second);
            Substitution sigma;
            premises_.assign(m, 0);
            enumerate(b, ci, 0, sigma);
            if (closed_ || stats_.time_limit_hit) return;
        }
    }

    void enumerate(Branch& b, std::size_t ci, std::size_t depth, Substitution& sigma) {
        const auto& body = clauses_[ci].body;
        if (depth == order_.size()) {
            fire(b, ci, sigma);
            return;
        }
        if (out_of_time()) return;
        const std::size_t j = order_[depth];
        const Atom& pattern = body[j];
        const std::vector<AtomId>* candidates = nullptr;
        if (!pattern.args.empty()) {
            const Term& first = pattern.args.front();
            if (first.is_constant()) {
                candidates = b.store.first_arg(pattern.predicate, first);
                if (!candidates) return;
            } else if (first.is_variable()) {
                if (const Term* bound = sigma.lookup(first.symbol())) {
                    candidates = b.store.first_arg(pattern.predicate, *bound);
                    if (!candidates) return;
                }
            } else if (Term t = apply(sigma, first); t.is_ground()) {
                candidates = b.store.first_arg(pattern.predicate, t);
                if (!candidates) return;
            }
        }
        if (!candidates) candidates = b.store.relation(pattern.predicate);
        if (!candidates) return;

        const AtomId lo = lo_[j];
        const AtomId hi = hi_[j];
        auto it = std::lower_bound(candidates->begin(), candidates->end(), lo);
        for (; it != candidates->end() && *it < hi; ++it) {
            const std::size_t mark = sigma.size();
            if (!match_into(pattern, b.store.atoms[*it], sigma)) continue;
            premises_[j] = *it;
            enumerate(b, ci, depth + 1, sigma);
            sigma.truncate(mark);
            if (closed_ || stats_.time_limit_hit) return;
        }
    }

    void fire(Branch& b, std::size_t ci, const Substitution& sigma) {
        const Clause& c = clauses_[ci];
        if (options_.check_redundancy && !b.fired[ci].insert(premises_).second) ++stats_.redundant_firings;

        int lvl = 0;
        bool tr = passage_clause_[ci];
        for (AtomId p : premises_) {
            lvl = std::max(lvl, b.store.level[p] + 1);
            tr = tr || b.store.traced[p];
        }
        if (c.head.empty()) {
            closed_ = true;
            return;
        }
        std::vector<Atom> heads;
        heads.reserve(c.head.size());
        for (const auto& h : c.head) {
            Atom g = apply(sigma, h);
            if (b.store.contains(g)) return;
            heads.push_back(std::move(g));
        }
        if (heads.size() == 1) {
            if (lvl > limits_.max_level) {
                stats_.level_limit_hit = true;
                return;
            }
            auto [it, inserted] = derived_index_.emplace(heads.front(), derived_.size());
            if (!inserted) {
                auto& existing = derived_[it->second];
                if (lvl < existing.level) {
                    existing.level = lvl;
                    existing.traced = tr;
                    existing.premises = premises_;
                }
                return;
            }
            derived_.push_back({std::move(heads.front()), lvl, tr, premises_});
            return;
        }
        if (std::any_of(heads.begin(), heads.end(), [&](const Atom& h) { return derived_index_.count(h) > 0; })) {
            return;
        }
        if (lvl > limits_.max_level) {
            stats_.level_limit_hit = true;
            return;
        }
        obligations_.push_back({std::move(heads), lvl, tr, premises_});
    }

    double support_of(const Branch& b, AtomId answer) const {
        std::vector<AtomId> stack(b.store.premises[answer].begin(), b.store.premises[answer].end());
        std::set<AtomId> seen;
        std::size_t total = 0;
        std::size_t traced = 0;
        while (!stack.empty()) {
            const AtomId id = stack.back();
            stack.pop_back();
            if (!seen.insert(id).second) continue;
            if (b.store.atoms[id].predicate == reserved::dom()) continue;
            ++total;
            traced += b.store.traced[id] ? 1 : 0;
            for (AtomId p : b.store.premises[id]) stack.push_back(p);
        }
        return total == 0 ? 0.0 : static_cast<double>(traced) / static_cast<double>(total);
    }

    void collect(const Branch& b, AnswerMap& answers, bool any_open_before, bool first_open) {
        const std::size_t derived = b.store.size() - std::min(b.store.size(), b.initial_count);
        if (derived >= stats_.derived_atom_count) {
            stats_.derived_atom_count = derived;
            std::size_t traced = 0;
            for (AtomId id = b.initial_count; id < b.store.size(); ++id) traced += b.store.traced[id] ? 1 : 0;
            stats_.passage_derived_count = traced;
        }
        AnswerMap here;
        if (const auto* rel = b.store.relation(reserved::answer())) {
            for (AtomId id : *rel) {
                here.emplace(b.store.atoms[id].args, AnswerInfo{b.store.level[id], support_of(b, id)});
            }
        }
        if (options_.mode == AnswerMode::Brave || first_open || !any_open_before) {
            for (auto& [key, info] : here) {
                auto [it, inserted] = answers.emplace(key, info);
                if (!inserted && info.level < it->second.level) it->second = info;
            }
            return;
        }
        for (auto it = answers.begin(); it != answers.end();) {
            auto h = here.find(it->first);
            if (h == here.end()) {
                it = answers.erase(it);
                continue;
            }
            if (h->second.level > it->second.level) it->second = h->second;
            ++it;
        }
    }

    const std::vector<Clause>& clauses_;
    Limits limits_;
    Clock::time_point start_;
    Clock::time_point deadline_;
    SaturateOptions options_;
    std::vector<char> passage_clause_;
    const Clause* answer_rule_ = nullptr;
    std::vector<Symbol> answer_vars_;
    ProofStats stats_;
    std::uint64_t tick_ = 0;

    // Per-round scratch.
    std::vector<Derivation> derived_;
    std::unordered_map<Atom, std::size_t> derived_index_;
    std::vector<Obligation> obligations_;
    bool closed_ = false;
    std::vector<AtomId> lo_, hi_;
    std::vector<std::size_t> order_;
    std::vector<AtomId> premises_;
};

ProofResult saturate_until(const std::vector<Clause>& clauses, const Limits& limits, Clock::time_point start,
                           Clock::time_point deadline, const SaturateOptions& options) {
    return Saturator(clauses, limits, start, deadline, options).run();
}

void check_input(const std::vector<Clause>& clauses) {
    for (const auto& c : clauses) {
        for (const auto& a : c.head) check_reserved(a);
        for (const auto& a : c.body) check_reserved(a);
    }
}

}  // namespace

std::vector<Clause> compile_problem(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts,
                                    const Query& query, const std::vector<Atom>& domain_atoms) {
    check_input(background);
    check_input(passage_facts);
    for (const auto& a : query.subgoals) check_reserved(a);

    std::vector<Clause> input;
    input.reserve(background.size() + passage_facts.size() + 1);
    input.insert(input.end(), background.begin(), background.end());
    input.insert(input.end(), passage_facts.begin(), passage_facts.end());

    Clause answer_rule;
    std::vector<Term> answer_args;
    for (Symbol v : query.answer_vars) answer_args.push_back(Term::variable(v));
    answer_rule.head.emplace_back(reserved::answer(), std::move(answer_args));
    answer_rule.body = query.subgoals;
    answer_rule.origin = std::string(origin::query);

    std::vector<Clause> everything = input;
    everything.push_back(answer_rule);
    const Signature signature = signature_of(everything);

    std::vector<Clause> out;
    for (const auto& c : input) {
        for (auto& r : range_restrict(c)) out.push_back(std::move(r));
    }
    for (const auto& axiom : congruence_axioms(signature)) {
        for (auto& r : range_restrict(axiom)) out.push_back(std::move(r));
    }
    for (auto& d : dom_facts(everything, domain_atoms)) out.push_back(std::move(d));
    for (auto& r : range_restrict(answer_rule)) out.push_back(std::move(r));
    return out;
}

ProofResult saturate(const std::vector<Clause>& clauses, const Limits& limits, const SaturateOptions& options) {
    const auto start = Clock::now();
    return saturate_until(clauses, limits, start, deadline_after(start, limits.time_budget), options);
}

ProofResult prove(const std::vector<Clause>& background, const std::vector<Clause>& passage_facts,
                  const Query& query, const Limits& limits, const SaturateOptions& options) {
    const auto start = Clock::now();
    const auto deadline = deadline_after(start, limits.time_budget);
    const auto clauses = compile_problem(background, passage_facts, query, options.domain_atoms);
    if (options.dump) *options.dump << dump_problem(clauses);
    return saturate_until(clauses, limits, start, deadline, options);
}

ProofResult prove(const std::vector<Clause>& background, const Passage& passage, const Query& query,
                  const Limits& limits, const SaturateOptions& options) {
    return prove(background, passage.facts, query, limits, options);
}

std::string dump_problem(const std::vector<Clause>& clauses) {
    std::string out;
    std::string last_origin;
    for (const auto& c : clauses) {
        if (c.origin != last_origin) {
            out += "% origin: " + c.origin + "\n";
            last_origin = c.origin;
        }
        out += to_string(c);
        out += '\n';
    }
    return out;
}

}  // namespace logquest
