#ifndef QECAD_CELLDUMP_HPP
#define QECAD_CELLDUMP_HPP

#include <sstream>
#include <string>
#include <vector>

#include "qecad/cad.hpp"

namespace qecad {

// Skeleton of one dumped cell, the part that must survive a round-trip.
struct CellRecord {
    int level = 0;
    std::vector<int> path;
    CellKind kind = CellKind::Sector;
    std::string signs;
};

namespace detail {

inline std::string sign_char(int s) { return s < 0 ? "-" : s > 0 ? "+" : "0"; }

inline void dump_cell(const CadCell& cell, const CadTree& tree, unsigned precision,
                      bool with_exact, std::ostringstream& out) {
    out << "cell level=" << cell.level << " path=";
    for (std::size_t i = 0; i < cell.path.size(); ++i)
        out << (i ? "." : "") << cell.path[i];
    out << " kind=" << (cell.kind == CellKind::Section ? "section" : "sector");
    out << " signs=";
    const auto& family = tree.families[static_cast<std::size_t>(cell.level - 1)];
    bool first = true;
    for (const Polynomial& p : family) {
        out << (first ? "" : ",") << sign_char(cell.signs.at(p));
        first = false;
    }
    out << " sample=";
    for (std::size_t i = 0; i < cell.sample.coords.size(); ++i)
        out << (i ? "," : "") << cell.sample.coords[i].decimal(precision);
    if (with_exact) {
        out << " exact=";
        for (std::size_t i = 0; i < cell.sample.coords.size(); ++i) {
            const AlgebraicNumber& a = cell.sample.coords[i];
            if (i) out << ";";
            if (a.is_rational()) {
                out << to_string(a.value());
            } else {
                out << "root[";
                const auto& c = a.defining().coeffs();
                for (std::size_t k = 0; k < c.size(); ++k)
                    out << (k ? "," : "") << to_string(c[k]);
                out << "]@(" << to_string(a.lo()) << "," << to_string(a.hi()) << ")";
            }
        }
    }
    out << "\n";
    for (const auto& child : cell.children) dump_cell(*child, tree, precision, with_exact, out);
}

}  // namespace detail

// Line-delimited dump: the per-level polynomial families followed by every
// cell in depth-first order. Sign vectors follow the family order.
inline std::string dump_tree(const CadTree& tree, unsigned precision = 6,
                             bool with_exact = false) {
    std::ostringstream out;
    for (std::size_t k = 0; k < tree.families.size(); ++k) {
        out << "family level=" << (k + 1) << " polys=";
        for (std::size_t i = 0; i < tree.families[k].size(); ++i)
            out << (i ? ";" : "") << tree.families[k][i].to_string();
        out << "\n";
    }
    for (const auto& root : tree.roots)
        detail::dump_cell(*root, tree, precision, with_exact, out);
    return out.str();
}

// Reparse the cell skeleton (levels, paths, kinds, sign vectors) of a dump.
inline std::vector<CellRecord> parse_dump(const std::string& text) {
    std::vector<CellRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("cell ", 0) != 0) continue;
        CellRecord rec;
        std::istringstream fields(line.substr(5));
        std::string field;
        while (fields >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) throw usage_error("malformed dump field " + field);
            std::string key = field.substr(0, eq);
            std::string val = field.substr(eq + 1);
            if (key == "level") {
                rec.level = std::stoi(val);
            } else if (key == "path") {
                std::size_t pos = 0;
                while (pos <= val.size()) {
                    std::size_t dot = val.find('.', pos);
                    rec.path.push_back(std::stoi(
                        val.substr(pos, dot == std::string::npos ? std::string::npos
                                                                 : dot - pos)));
                    if (dot == std::string::npos) break;
                    pos = dot + 1;
                }
            } else if (key == "kind") {
                if (val == "section") rec.kind = CellKind::Section;
                else if (val == "sector") rec.kind = CellKind::Sector;
                else throw usage_error("unknown cell kind " + val);
            } else if (key == "signs") {
                rec.signs = val;
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

inline std::vector<CellRecord> tree_records(const CadTree& tree) {
    std::vector<CellRecord> out;
    std::function<void(const CadCell&)> walk = [&](const CadCell& c) {
        CellRecord rec;
        rec.level = c.level;
        rec.path = c.path;
        rec.kind = c.kind;
        const auto& family = tree.families[static_cast<std::size_t>(c.level - 1)];
        for (const Polynomial& p : family) rec.signs += detail::sign_char(c.signs.at(p));
        std::string with_commas;
        for (std::size_t i = 0; i < rec.signs.size(); ++i) {
            if (i) with_commas += ",";
            with_commas += rec.signs[i];
        }
        rec.signs = with_commas;
        out.push_back(std::move(rec));
        for (const auto& k : c.children) walk(*k);
    };
    for (const auto& r : tree.roots) walk(*r);
    return out;
}

inline bool operator==(const CellRecord& a, const CellRecord& b) {
    return a.level == b.level && a.path == b.path && a.kind == b.kind && a.signs == b.signs;
}

}  // namespace qecad

#endif  // QECAD_CELLDUMP_HPP
