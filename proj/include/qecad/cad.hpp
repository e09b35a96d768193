#ifndef QECAD_CAD_HPP
#define QECAD_CAD_HPP

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "qecad/algebraic.hpp"
#include "qecad/formula.hpp"
#include "qecad/polygcd.hpp"
#include "qecad/resultant.hpp"

namespace qecad {

struct CadOptions {
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check_budget() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw timeout_error("time budget exceeded during CAD construction");
    }
};

namespace detail {

// p together with its recursive content chain, so no real zeros are lost
// when normalize_set strips contents.
inline void add_with_contents(const Polynomial& p, std::vector<Polynomial>& out) {
    if (p.is_constant()) return;
    out.push_back(p);
    Polynomial c = content_in(p, p.main_variable());
    if (!c.is_constant()) add_with_contents(c, out);
}

}  // namespace detail

// Collins' projection operator: coefficients of each polynomial in v,
// principal subresultant coefficients against the v-derivative, and pairwise
// principal subresultant coefficients; polynomials free of v pass through.
// The result is normalized and free of v.
inline std::vector<Polynomial> project(const std::vector<Polynomial>& F, int v) {
    std::vector<Polynomial> out;
    std::vector<Polynomial> active;
    for (const Polynomial& f : F) {
        if (f.degree_in(v) >= 1)
            active.push_back(f);
        else
            detail::add_with_contents(f, out);
    }
    for (const Polynomial& f : active) {
        for (const Polynomial& c : f.coefficients_in(v)) detail::add_with_contents(c, out);
        Polynomial d = f.derivative(v);
        int top = f.degree_in(v) - 1;  // = min(deg f, deg f')
        for (int l = 0; l <= top; ++l) detail::add_with_contents(psc(f, d, v, l), out);
    }
    for (std::size_t i = 0; i < active.size(); ++i)
        for (std::size_t j = i + 1; j < active.size(); ++j) {
            int top = std::min(active[i].degree_in(v), active[j].degree_in(v));
            for (int m = 0; m <= top; ++m)
                detail::add_with_contents(psc(active[i], active[j], v, m), out);
        }
    return normalize_set(out);
}

enum class CellKind { Sector, Section };

struct CadCell;
using CadCellPtr = std::shared_ptr<CadCell>;

// One cell of the decomposition: a sector is an open interval in the lifted
// coordinate, a section is a root point. Signs cover every polynomial of
// the cell's level family and are constant across the cell.
struct CadCell {
    int level = 1;
    std::vector<int> path;
    CellKind kind = CellKind::Sector;
    SamplePoint sample;
    std::map<Polynomial, int> signs;
    std::vector<CadCellPtr> children;  // filled by compute_cad
};

struct CadTree {
    VarOrderPtr order;
    std::vector<std::vector<Polynomial>> families;  // families[k-1] = level-k family
    std::vector<CadCellPtr> roots;

    const CadCell& locate(const std::vector<int>& path) const {
        const std::vector<CadCellPtr>* layer = &roots;
        const CadCell* cell = nullptr;
        for (int idx : path) {
            cell = (*layer).at(static_cast<std::size_t>(idx)).get();
            layer = &cell->children;
        }
        if (!cell) throw usage_error("empty cell path");
        return *cell;
    }

    std::size_t leaf_count() const {
        std::size_t n = 0;
        std::function<void(const CadCellPtr&)> walk = [&](const CadCellPtr& c) {
            if (c->level == static_cast<int>(families.size())) ++n;
            for (const auto& k : c->children) walk(k);
        };
        for (const auto& r : roots) walk(r);
        return n;
    }
};

// Projection chain plus on-demand lifting. compute_cad materializes the full
// tree; the decision procedure calls children_of lazily instead.
class CadBuilder {
  public:
    CadBuilder(const std::vector<Polynomial>& F, int levels, VarOrderPtr order,
               CadOptions options = {})
        : order_(std::move(order)), options_(options) {
        if (levels < 1) throw usage_error("CAD needs at least one level");
        families_.resize(static_cast<std::size_t>(levels));
        std::vector<Polynomial> top;
        for (const Polynomial& f : F) {
            Polynomial g = f.order() == order_ ? f : f.reorder(order_);
            if (g.main_variable() >= levels)
                throw usage_error("polynomial uses a variable beyond the CAD level");
            detail::add_with_contents(g, top);
        }
        families_[static_cast<std::size_t>(levels - 1)] = normalize_set(top);
        for (int k = levels - 1; k >= 1; --k) {
            options_.check_budget();
            families_[static_cast<std::size_t>(k - 1)] =
                project(families_[static_cast<std::size_t>(k)], k);
        }
    }

    int levels() const { return static_cast<int>(families_.size()); }
    const VarOrderPtr& order() const { return order_; }
    const std::vector<std::vector<Polynomial>>& families() const { return families_; }

    std::vector<CadCellPtr> base_cells() const {
        CadCell root;  // pseudo-parent at level 0
        root.level = 0;
        return lift_cell(root);
    }

    // Children of a level j-1 cell: the decomposition of the line above its
    // sample point into sections (roots of the non-vanishing level-j
    // polynomials) and the sectors between them.
    std::vector<CadCellPtr> lift_cell(const CadCell& parent) const {
        options_.check_budget();
        int level = parent.level + 1;
        int v = level - 1;  // 0-based lifted variable
        const std::vector<Polynomial>& family = families_[static_cast<std::size_t>(v)];

        std::vector<Polynomial> relevant;
        for (const Polynomial& f : family)
            if (f.degree_in(v) >= 1) relevant.push_back(f);

        // Drop polynomials that vanish identically above the sample point.
        std::vector<Polynomial> active;
        std::vector<Polynomial> vanished;
        for (const Polynomial& f : relevant) {
            bool all_zero = true;
            for (const Polynomial& c : f.coefficients_in(v)) {
                if (c.is_zero()) continue;
                int s = c.is_constant() ? sign_of(c.constant_value())
                                        : sign_at(c, parent.sample);
                if (s != 0) {
                    all_zero = false;
                    break;
                }
            }
            (all_zero ? vanished : active).push_back(f);
        }

        // Rational-coefficient candidate polynomials whose roots cover every
        // root of the active polynomials above the sample point.
        std::vector<UniPoly> shadows;
        detail::AlgebraicCoords coords = detail::split_coords(parent.sample);
        for (const Polynomial& f : active) {
            Polynomial g = f.eval(coords.rational);
            g = detail::eliminate_coordinates(std::move(g), coords.irrational);
            if (g.is_constant()) continue;  // no real roots above the point
            shadows.push_back(UniPoly::from_polynomial(g, v));
        }
        std::vector<AlgebraicNumber> candidates = isolate_roots(shadows);

        // Keep candidates at which some active polynomial really vanishes,
        // remembering which ones vanish for the sign vectors.
        struct Root {
            AlgebraicNumber value;
            std::set<Polynomial> vanishing;
        };
        std::vector<Root> roots;
        for (const AlgebraicNumber& cand : candidates) {
            options_.check_budget();
            SamplePoint probe = parent.sample.extended(cand);
            Root r{cand, {}};
            for (const Polynomial& f : active)
                if (sign_at(f, probe) == 0) r.vanishing.insert(f);
            if (!r.vanishing.empty()) roots.push_back(std::move(r));
        }

        Rational bound(1);
        for (const UniPoly& s : shadows)
            if (s.degree() >= 1) bound = std::max(bound, root_bound(uni_squarefree(s)));

        // Separate adjacent accepted roots so sector midpoints exist.
        for (std::size_t i = 0; i + 1 < roots.size(); ++i)
            while (!(roots[i].value.hi() < roots[i + 1].value.lo())) {
                roots[i].value = roots[i].value.refined();
                roots[i + 1].value = roots[i + 1].value.refined();
            }

        std::vector<CadCellPtr> out;
        auto emit = [&](CellKind kind, AlgebraicNumber coord,
                        const std::set<Polynomial>* vanishing) {
            auto cell = std::make_shared<CadCell>();
            cell->level = level;
            cell->path = parent.path;
            cell->path.push_back(static_cast<int>(out.size()));
            cell->kind = kind;
            cell->sample = parent.sample.extended(std::move(coord));
            for (const Polynomial& f : family) {
                int s;
                if (f.is_constant()) {
                    s = sign_of(f.constant_value());
                } else if (std::find(vanished.begin(), vanished.end(), f) != vanished.end()) {
                    s = 0;
                } else if (vanishing && vanishing->count(f)) {
                    s = 0;
                } else if (f.degree_in(v) < 1) {
                    auto it = parent.signs.find(f);
                    s = it != parent.signs.end() ? it->second : sign_at(f, parent.sample);
                } else {
                    s = sign_at(f, cell->sample);
                }
                cell->signs[f] = s;
            }
            out.push_back(std::move(cell));
        };

        if (roots.empty()) {
            emit(CellKind::Sector, AlgebraicNumber::rational(Rational(0)), nullptr);
            return out;
        }
        emit(CellKind::Sector, AlgebraicNumber::rational(-bound), nullptr);
        for (std::size_t i = 0; i < roots.size(); ++i) {
            emit(CellKind::Section, roots[i].value, &roots[i].vanishing);
            if (i + 1 < roots.size()) {
                Rational mid = (roots[i].value.hi() + roots[i + 1].value.lo()) / 2;
                emit(CellKind::Sector, AlgebraicNumber::rational(mid), nullptr);
            }
        }
        emit(CellKind::Sector, AlgebraicNumber::rational(bound), nullptr);
        return out;
    }

  private:
    VarOrderPtr order_;
    std::vector<std::vector<Polynomial>> families_;
    CadOptions options_;
};

// Full F-sign-invariant CAD of R^j, materialized.
inline CadTree compute_cad(const std::vector<Polynomial>& F, int j,
                           const VarOrderPtr& order, CadOptions options = {}) {
    CadBuilder builder(F, j, order, options);
    CadTree tree;
    tree.order = order;
    tree.families = builder.families();
    std::function<void(CadCellPtr&)> expand = [&](CadCellPtr& cell) {
        if (cell->level >= j) return;
        cell->children = builder.lift_cell(*cell);
        for (auto& k : cell->children) expand(k);
    };
    tree.roots = builder.base_cells();
    for (auto& r : tree.roots) expand(r);
    return tree;
}

// Conjunction of the sign conditions of every family polynomial along the
// first k levels of the cell's ancestry; true on the whole projected cell.
inline FormulaPtr cell_description(const CadCell& cell, const CadTree& tree, int k) {
    if (k > cell.level) throw usage_error("cell_description: too many levels requested");
    FormulaPtr out = f_true();
    for (int lvl = 1; lvl <= k; ++lvl) {
        std::vector<int> prefix(cell.path.begin(), cell.path.begin() + lvl);
        const CadCell& ancestor = tree.locate(prefix);
        for (const auto& [p, s] : ancestor.signs) {
            Rel r = s < 0 ? Rel::Lt : s > 0 ? Rel::Gt : Rel::Eq;
            out = mk_and(out, f_atom(p, r));
        }
    }
    return out;
}

}  // namespace qecad

#endif  // QECAD_CAD_HPP
