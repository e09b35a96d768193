#ifndef QECAD_QE_HPP
#define QECAD_QE_HPP

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "qecad/cad.hpp"
#include "qecad/formula.hpp"

namespace qecad {

struct QeOptions {
    CadOptions cad;
    // Short-circuiting is observable only in the statistics; turning it off
    // exists for the transparency property test.
    bool short_circuit = true;
    // Random points spent on the internal substitution check of eliminate.
    int oracle_samples = 40;
};

struct DecisionStats {
    std::size_t cells_built = 0;
    std::size_t cells_skipped = 0;
};

struct Decision {
    bool value = false;
    std::optional<SamplePoint> witness;
    DecisionStats statistics;
};

// Direct evaluation of a quantifier-free formula at a rational point.
inline bool evaluate_qf(const FormulaPtr& f, const std::map<std::string, Rational>& point) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Atom: {
            std::map<int, Rational> idx;
            const VarOrderPtr& order = f->poly.order();
            for (std::size_t i = 0; i < order->size(); ++i) {
                auto it = point.find(order->name(i));
                if (it != point.end()) idx[static_cast<int>(i)] = it->second;
            }
            Polynomial v = f->poly.eval(idx);
            if (!v.is_constant())
                throw usage_error("evaluate_qf: unbound variable in " + f->poly.to_string());
            return rel_holds(f->rel, sign_of(v.constant_value()));
        }
        case FKind::Not: return !evaluate_qf(f->kids[0], point);
        case FKind::And: return evaluate_qf(f->kids[0], point) && evaluate_qf(f->kids[1], point);
        case FKind::Or: return evaluate_qf(f->kids[0], point) || evaluate_qf(f->kids[1], point);
        case FKind::Implies:
            return !evaluate_qf(f->kids[0], point) || evaluate_qf(f->kids[1], point);
        case FKind::Iff:
            return evaluate_qf(f->kids[0], point) == evaluate_qf(f->kids[1], point);
        case FKind::Forall:
        case FKind::Exists: throw usage_error("evaluate_qf: formula has quantifiers");
    }
    throw usage_error("evaluate_qf: bad node");
}

namespace detail {

inline void collect_polys(const FormulaPtr& f, std::set<Polynomial>& out) {
    if (f->kind == FKind::Atom) {
        if (!f->poly.is_constant()) out.insert(f->poly);
        return;
    }
    for (const auto& k : f->kids) collect_polys(k, out);
}

// Matrix truth at a sample point binding every variable, with memoized
// polynomial signs (atoms share polynomials freely).
inline bool eval_matrix(const FormulaPtr& f, const SamplePoint& pt,
                        std::map<Polynomial, int>& sign_cache) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Atom: {
            int s;
            if (f->poly.is_constant()) {
                s = sign_of(f->poly.constant_value());
            } else {
                auto it = sign_cache.find(f->poly);
                if (it == sign_cache.end())
                    it = sign_cache.emplace(f->poly, sign_at(f->poly, pt)).first;
                s = it->second;
            }
            return rel_holds(f->rel, s);
        }
        case FKind::And:
            return eval_matrix(f->kids[0], pt, sign_cache) &&
                   eval_matrix(f->kids[1], pt, sign_cache);
        case FKind::Or:
            return eval_matrix(f->kids[0], pt, sign_cache) ||
                   eval_matrix(f->kids[1], pt, sign_cache);
        default: throw usage_error("matrix is not in and-or form");
    }
}

// And-or tree evaluation over lazily lifted cells. Returns the truth value
// together with a leaf sample whose matrix value equals it.
class AndOrSearch {
  public:
    AndOrSearch(const PrenexFormula& pf, const CadBuilder& builder, const QeOptions& opts)
        : pf_(pf), builder_(builder), opts_(opts) {}

    struct Result {
        bool value;
        SamplePoint leaf;
    };

    // level counts from start_level (1-based CAD level) up to the full
    // variable count; quantifiers are read off the prefix.
    Result run(const CadCell* parent, int start_level) {
        return eval(parent, start_level);
    }

    DecisionStats stats;

  private:
    Result eval(const CadCell* parent, int level) {
        int n = static_cast<int>(pf_.order->size());
        if (level > n) {
            SamplePoint pt = parent ? parent->sample : SamplePoint{};
            std::map<Polynomial, int> cache;
            return {eval_matrix(pf_.matrix, pt, cache), pt};
        }
        std::vector<CadCellPtr> kids =
            parent ? builder_.lift_cell(*parent) : builder_.base_cells();
        stats.cells_built += kids.size();
        // Sections first: the corpus' equational constraints hold there, so
        // decisive answers tend to surface sooner.
        std::stable_partition(kids.begin(), kids.end(), [](const CadCellPtr& c) {
            return c->kind == CellKind::Section;
        });
        std::size_t qi = static_cast<std::size_t>(level) - 1 - pf_.free_count;
        bool is_forall = pf_.prefix.at(qi).first == Quant::Forall;
        std::optional<Result> decisive;
        std::optional<Result> agreeing;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            Result r = eval(kids[i].get(), level + 1);
            if (r.value != is_forall) {
                decisive = r;
                if (opts_.short_circuit) {
                    stats.cells_skipped += kids.size() - 1 - i;
                    break;
                }
            } else {
                agreeing = r;
            }
        }
        if (decisive) return *decisive;
        if (agreeing) return *agreeing;
        // No children cannot happen (lifting always yields a cell); an empty
        // quantifier domain would make forall true and exists false anyway.
        return {is_forall, parent ? parent->sample : SamplePoint{}};
    }

    const PrenexFormula& pf_;
    const CadBuilder& builder_;
    const QeOptions& opts_;
};

}  // namespace detail

// Truth of a sentence by and-or evaluation over the CAD of its atom
// polynomials. The witness is a full-dimension sample point at which the
// matrix evaluates to the returned value.
inline Decision decide(const FormulaPtr& sentence, const QeOptions& opts = {}) {
    PrenexFormula pf = to_prenex(sentence);
    if (pf.free_count > 0)
        throw usage_error("decide needs a sentence; use eliminate for free variables");
    Decision d;
    int n = static_cast<int>(pf.order->size());
    if (n == 0) {
        std::map<Polynomial, int> cache;
        d.value = detail::eval_matrix(pf.matrix, SamplePoint{}, cache);
        return d;
    }
    std::set<Polynomial> polys;
    detail::collect_polys(pf.matrix, polys);
    CadBuilder builder(std::vector<Polynomial>(polys.begin(), polys.end()), n, pf.order,
                       opts.cad);
    detail::AndOrSearch search(pf, builder, opts);
    auto result = search.run(nullptr, 1);
    d.value = result.value;
    d.witness = result.leaf;
    d.statistics = search.stats;
    return d;
}

inline Decision decide(const std::string& sentence, const QeOptions& opts = {}) {
    return decide(parse(sentence), opts);
}

namespace detail {

// One disjunct of an eliminate answer: for each polynomial the set of signs
// it may take. Rendering maps {-1} to <, {-1,0} to <= and so on; a full set
// drops the condition.
using SignSets = std::map<Polynomial, std::set<int>>;

inline FormulaPtr render_sign_sets(const SignSets& d) {
    FormulaPtr out = f_true();
    for (const auto& [p, signs] : d) {
        if (signs.size() == 3) continue;
        FormulaPtr atom;
        if (signs == std::set<int>{-1})
            atom = f_atom(p, Rel::Lt);
        else if (signs == std::set<int>{0})
            atom = f_atom(p, Rel::Eq);
        else if (signs == std::set<int>{1})
            atom = f_atom(p, Rel::Gt);
        else if (signs == std::set<int>{-1, 0})
            atom = f_atom(p, Rel::Le);
        else if (signs == std::set<int>{0, 1})
            atom = f_atom(p, Rel::Ge);
        else
            atom = f_atom(p, Rel::Ne);
        out = mk_and(out, atom);
    }
    return out;
}

// Merge disjuncts that agree everywhere except in one polynomial's sign set.
inline void merge_sign_sets(std::vector<SignSets>& ds) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < ds.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < ds.size() && !changed; ++j) {
                if (ds[i].size() != ds[j].size()) continue;
                const SignSets* diff_a = nullptr;
                const std::set<int>* diff_b = nullptr;
                const Polynomial* key = nullptr;
                bool comparable = true;
                int diffs = 0;
                for (auto a = ds[i].begin(), b = ds[j].begin(); a != ds[i].end(); ++a, ++b) {
                    if (!(a->first == b->first)) {
                        comparable = false;
                        break;
                    }
                    if (a->second != b->second) {
                        ++diffs;
                        key = &a->first;
                        diff_b = &b->second;
                    }
                }
                (void)diff_a;
                if (!comparable || diffs > 1) continue;
                if (diffs == 1) ds[i][*key].insert(diff_b->begin(), diff_b->end());
                ds.erase(ds.begin() + static_cast<std::ptrdiff_t>(j));
                // Conditions satisfied by every sign disappear.
                for (auto it = ds[i].begin(); it != ds[i].end();)
                    it = it->second.size() == 3 ? ds[i].erase(it) : std::next(it);
                changed = true;
            }
    }
}

}  // namespace detail

// Quantifier elimination: the free variables take CAD levels 1..k and the
// answer is the disjunction of the descriptions of the level-k cells whose
// quantified subtree evaluates true. The output is checked against the
// input on random rational points before being returned.
inline FormulaPtr eliminate(const FormulaPtr& f, const QeOptions& opts = {},
                            const std::vector<std::string>& free_order = {}) {
    PrenexFormula pf = to_prenex(f, free_order);
    std::size_t k = pf.free_count;
    if (k == 0) throw usage_error("eliminate needs free variables; use decide");
    int n = static_cast<int>(pf.order->size());

    std::set<Polynomial> polys;
    detail::collect_polys(pf.matrix, polys);
    CadBuilder builder(std::vector<Polynomial>(polys.begin(), polys.end()), n, pf.order,
                       opts.cad);
    detail::AndOrSearch search(pf, builder, opts);

    // Materialize the free levels; keep the tree for cell_description.
    CadTree tree;
    tree.order = pf.order;
    tree.families = builder.families();

    std::vector<const CadCell*> frontier;
    std::function<void(CadCellPtr&)> expand = [&](CadCellPtr& cell) {
        if (cell->level == static_cast<int>(k)) {
            frontier.push_back(cell.get());
            return;
        }
        cell->children = builder.lift_cell(*cell);
        for (auto& c : cell->children) expand(c);
    };
    tree.roots = builder.base_cells();
    for (auto& r : tree.roots) expand(r);

    std::vector<detail::SignSets> qualifying;
    bool all = true;
    for (const CadCell* cell : frontier) {
        bool value = static_cast<int>(k) == n
                         ? [&] {
                               std::map<Polynomial, int> cache;
                               return detail::eval_matrix(pf.matrix, cell->sample, cache);
                           }()
                         : search.run(cell, static_cast<int>(k) + 1).value;
        if (!value) {
            all = false;
            continue;
        }
        detail::SignSets d;
        for (int lvl = 1; lvl <= static_cast<int>(k); ++lvl) {
            std::vector<int> prefix(cell->path.begin(), cell->path.begin() + lvl);
            for (const auto& [p, s] : tree.locate(prefix).signs) d[p] = {s};
        }
        qualifying.push_back(std::move(d));
    }

    FormulaPtr out;
    if (qualifying.empty()) {
        out = f_false();
    } else if (all) {
        out = f_true();
    } else {
        detail::merge_sign_sets(qualifying);
        out = f_false();
        for (const auto& d : qualifying) out = mk_or(out, detail::render_sign_sets(d));
    }

    // Substitution oracle: the answer must agree with deciding the original
    // formula at random rational points.
    std::vector<std::string> frees(pf.order->names().begin(),
                                   pf.order->names().begin() + static_cast<std::ptrdiff_t>(k));
    std::mt19937 rng(20260823u);
    std::uniform_int_distribution<int> num(-8, 8);
    std::uniform_int_distribution<int> den(1, 3);
    for (int i = 0; i < opts.oracle_samples; ++i) {
        std::map<std::string, Rational> point;
        for (const auto& v : frees) point[v] = make_rational(num(rng), den(rng));
        FormulaPtr grounded = substitute(f, point);
        bool expect = decide(grounded, opts).value;
        if (evaluate_qf(out, point) != expect)
            throw std::runtime_error("eliminate: output failed the substitution check");
    }
    return out;
}

inline FormulaPtr eliminate(const std::string& text, const QeOptions& opts = {},
                            const std::vector<std::string>& free_order = {}) {
    return eliminate(parse(text), opts, free_order);
}

}  // namespace qecad

#endif  // QECAD_QE_HPP
