#ifndef QECAD_CLI_HPP
#define QECAD_CLI_HPP

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qecad/celldump.hpp"
#include "qecad/qe.hpp"
#include "qecad/stats.hpp"

namespace qecad {
namespace cli {

constexpr const char* kTimeBudgetEnv = "QECAD_TIME_BUDGET";

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Inline text and --file are mutually exclusive input sources.
inline std::string input_text(const std::string& inline_text, const std::string& file) {
    if (!inline_text.empty() && !file.empty())
        throw usage_error("give either inline input or --file, not both");
    if (inline_text.empty() && file.empty())
        throw usage_error("missing input: pass it inline or via --file");
    return file.empty() ? inline_text : read_file(file);
}

inline std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        std::size_t a = piece.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = piece.find_last_not_of(" \t");
        out.push_back(piece.substr(a, b - a + 1));
    }
    return out;
}

inline QeOptions make_options(double budget_seconds) {
    QeOptions opts;
    if (budget_seconds == 0) {
        if (const char* env = std::getenv(kTimeBudgetEnv)) budget_seconds = std::atof(env);
    }
    if (budget_seconds > 0)
        opts.cad.deadline = std::chrono::steady_clock::now() +
                            std::chrono::milliseconds(
                                static_cast<long long>(budget_seconds * 1000));
    return opts;
}

inline std::string sample_text(const SamplePoint& pt, unsigned precision) {
    std::string out = "(";
    for (std::size_t i = 0; i < pt.coords.size(); ++i) {
        if (i) out += ", ";
        out += pt.coords[i].decimal(precision);
    }
    return out + ")";
}

// Identifiers in first-appearance order, for deriving a variable order from
// bare polynomial text.
inline std::vector<std::string> appearance_order(const std::string& text) {
    qecad::detail::Lexer lex(text);
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& t : lex.tokens)
        if (t.kind == qecad::detail::Tok::Ident && !seen.count(t.text)) {
            seen.insert(t.text);
            names.push_back(t.text);
        }
    return names;
}

inline PolynomialModel load_model(const std::string& spec) {
    if (spec.find(':') == std::string::npos && spec.find('\n') == std::string::npos) {
        try {
            return built_in_model(spec);
        } catch (const usage_error&) {
            // fall through to the file reading
        }
        return parse_model(read_file(spec));
    }
    return parse_model(spec);
}

struct Args {
    std::string text;      // inline formula / polynomial list / model spec
    std::string file;
    std::string var_order;
    double time_budget = 0;  // seconds; 0 = environment default or none
    bool assert_true = false;
    bool witness = false;
    bool stats = false;
    unsigned precision = 6;
    bool exact = false;
    // model command
    std::string task = "implicitize";
    std::string other;
    std::string mode = "inclusion";
    std::vector<std::string> quantities;
    bool emit_formula = false;
};

inline int finish_decision(const Decision& d, const Args& a) {
    std::cout << (d.value ? "true" : "false") << "\n";
    if (a.witness && d.witness && !d.witness->coords.empty())
        std::cout << "witness " << sample_text(*d.witness, a.precision) << "\n";
    if (a.stats)
        std::cerr << "cells built " << d.statistics.cells_built << ", skipped "
                  << d.statistics.cells_skipped << "\n";
    return !d.value && a.assert_true ? 1 : 0;
}

inline int run_decide(const Args& a) {
    Decision d = decide(input_text(a.text, a.file), make_options(a.time_budget));
    return finish_decision(d, a);
}

inline int run_eliminate(const Args& a) {
    FormulaPtr out = eliminate(input_text(a.text, a.file), make_options(a.time_budget),
                               split_names(a.var_order));
    std::cout << render(out) << "\n";
    return 0;
}

inline int run_cad(const Args& a) {
    std::string text = input_text(a.text, a.file);
    std::vector<std::string> pieces;
    std::istringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ';'))
        if (piece.find_first_not_of(" \t\r\n") != std::string::npos)
            pieces.push_back(piece);
    std::vector<std::string> names;
    if (a.var_order.empty()) {
        std::set<std::string> seen;
        for (const std::string& p : pieces)
            for (const std::string& n : appearance_order(p))
                if (seen.insert(n).second) names.push_back(n);
    } else {
        names = split_names(a.var_order);
    }
    if (names.empty()) throw usage_error("cad needs at least one variable");
    VarOrderPtr order = make_order(names);
    std::vector<Polynomial> F;
    for (const std::string& p : pieces) F.push_back(parse_polynomial(p, order));
    CadOptions copts = make_options(a.time_budget).cad;
    CadTree tree = compute_cad(F, static_cast<int>(order->size()), order, copts);
    std::cout << dump_tree(tree, a.precision, a.exact);
    return 0;
}

inline int run_model(const Args& a) {
    PolynomialModel m = load_model(input_text(a.text, a.file));
    QeOptions opts = make_options(a.time_budget);

    FormulaPtr compiled;
    bool is_decision;
    if (a.task == "implicitize") {
        compiled = implicitization_formula(m);
        is_decision = false;
    } else if (a.task == "compare") {
        if (a.other.empty()) throw usage_error("compare needs --other");
        CompareMode mode;
        if (a.mode == "inclusion") mode = CompareMode::Inclusion;
        else if (a.mode == "equality") mode = CompareMode::Equality;
        else if (a.mode == "overlap") mode = CompareMode::Overlap;
        else throw usage_error("unknown comparison mode " + a.mode);
        compiled = model_compare_sentence(m, load_model(a.other), mode);
        is_decision = true;
    } else if (a.task == "identify") {
        if (a.quantities.empty()) throw usage_error("identify needs --quantity");
        std::vector<Polynomial> q;
        for (const auto& text : a.quantities)
            q.push_back(parse_polynomial(text, m.param_order()));
        compiled = identifiability_sentence(m, q);
        is_decision = true;
    } else if (a.task == "region") {
        if (a.quantities.size() != 1) throw usage_error("region needs exactly one --quantity");
        compiled = quantity_region_formula(m, parse_polynomial(a.quantities[0], m.param_order()));
        is_decision = false;
    } else {
        throw usage_error("unknown model task " + a.task);
    }

    if (a.emit_formula) {
        std::cout << render(compiled) << "\n";
        return 0;
    }
    if (is_decision) return finish_decision(decide(compiled, opts), a);
    std::cout << render(eliminate(compiled, opts)) << "\n";
    return 0;
}

}  // namespace detail

inline int run(std::vector<std::string> args) {
    CLI::App app{"quantifier elimination over the reals by cylindrical algebraic "
                 "decomposition"};
    app.require_subcommand(1);

    detail::Args a;
    auto add_common = [&](CLI::App* cmd, bool takes_inline) {
        if (takes_inline) cmd->add_option("input", a.text, "inline input text");
        cmd->add_option("--file", a.file, "read the input from a file");
        cmd->add_option("--time-budget", a.time_budget,
                        "abort after this many seconds (default from $" +
                            std::string(kTimeBudgetEnv) + ")");
        cmd->add_option("--precision", a.precision, "decimal digits for sample output")
            ->check(CLI::Range(1u, 64u));
    };

    CLI::App* decide_cmd = app.add_subcommand("decide", "decide the truth of a sentence");
    add_common(decide_cmd, true);
    decide_cmd->add_flag("--assert-true", a.assert_true,
                         "exit with status 1 when the answer is false");
    decide_cmd->add_flag("--witness", a.witness, "print a witness sample point");
    decide_cmd->add_flag("--stats", a.stats, "print cell statistics to stderr");

    CLI::App* elim_cmd =
        app.add_subcommand("eliminate", "eliminate the quantified variables of a formula");
    add_common(elim_cmd, true);
    elim_cmd->add_option("--var-order", a.var_order,
                         "comma-separated order of the free variables");

    CLI::App* cad_cmd = app.add_subcommand(
        "cad", "decompose space by the signs of ';'-separated polynomials");
    add_common(cad_cmd, true);
    cad_cmd->add_option("--var-order", a.var_order,
                        "comma-separated variable order (default: appearance order)");
    cad_cmd->add_flag("--exact", a.exact, "include exact algebraic sample data");

    CLI::App* model_cmd = app.add_subcommand(
        "model", "ask a statistical question about a polynomial model");
    add_common(model_cmd, true);
    model_cmd->add_option("--task", a.task, "implicitize | compare | identify | region");
    model_cmd->add_option("--other", a.other, "second model for --task compare");
    model_cmd->add_option("--mode", a.mode, "inclusion | equality | overlap");
    model_cmd->add_option("--quantity", a.quantities,
                          "parameter polynomial for identify/region tasks");
    model_cmd->add_flag("--emit-formula", a.emit_formula,
                        "print the compiled sentence instead of solving it");
    model_cmd->add_flag("--assert-true", a.assert_true,
                        "exit with status 1 when a decision task answers false");
    model_cmd->add_flag("--witness", a.witness, "print a witness sample point");
    model_cmd->add_flag("--stats", a.stats, "print cell statistics to stderr");

    try {
        std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help and friends
            CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands()[0];
            std::cout << sub->help();
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (decide_cmd->parsed()) return detail::run_decide(a);
        if (elim_cmd->parsed()) return detail::run_eliminate(a);
        if (cad_cmd->parsed()) return detail::run_cad(a);
        return detail::run_model(a);
    } catch (const timeout_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args));
}

}  // namespace cli
}  // namespace qecad

#endif  // QECAD_CLI_HPP
