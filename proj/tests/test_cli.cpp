#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qecad/cli.hpp"
#include "qecad/qecad.hpp"

using namespace qecad;

namespace {

struct CliResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    CliResult r;
    try {
        r.exit_code = cli::run(std::move(args));
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "cli_test_" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("decide answers sentences and sets the exit code") {
    CliResult r = run_cli({"decide", "(forall x) x*x >= 0"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "true\n");

    r = run_cli({"decide", "exists x. x*x = -1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "false\n");

    r = run_cli({"decide", "exists x. x*x = -1", "--assert-true"});
    CHECK(r.exit_code == 1);
    CHECK(r.out == "false\n");

    r = run_cli({"decide", "exists x. x - 3 = 0", "--assert-true"});
    CHECK(r.exit_code == 0);
}

TEST_CASE("decide reports witnesses and statistics") {
    CliResult r = run_cli({"decide", "exists x. x*x - 2 = 0 and x > 0", "--witness",
                           "--stats", "--precision", "3"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("true\nwitness (", 0) == 0);
    CHECK(r.out.find("1.414") != std::string::npos);
    CHECK(r.err.find("cells built") != std::string::npos);

    r = run_cli({"decide", "(forall x) x*x >= 0", "--witness"});
    CHECK(r.out.rfind("true\n", 0) == 0);
}

TEST_CASE("decide rejects formulas with free variables") {
    CliResult r = run_cli({"decide", "x > 0"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("malformed input exits with status 2") {
    CliResult r = run_cli({"decide", "(forall x"});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("syntax error") != std::string::npos);

    r = run_cli({"eliminate", "exists x. x +* 2 = 0"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("eliminate prints a quantifier-free equivalent") {
    CliResult r = run_cli({"eliminate", "exists x. y - x^2 = 0"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "y >= 0\n");
}

TEST_CASE("eliminate honors an explicit free-variable order") {
    CliResult r = run_cli({"eliminate", "exists x. x - b = 0 and x - c = 0",
                           "--var-order", "c,b"});
    CHECK(r.exit_code == 0);
    FormulaPtr got = parse(r.out);
    auto order = make_order({"c", "b"});
    for (const Rational& bv : {Rational(-2), Rational(0), Rational(3)})
        for (const Rational& cv : {Rational(-1), Rational(0), Rational(3)}) {
            bool expect = bv == cv;
            CHECK(evaluate_qf(got, {{"b", bv}, {"c", cv}}) == expect);
        }
}

TEST_CASE("input comes from exactly one source") {
    std::string path = write_temp("formula.txt", "(forall x) x*x >= 0\n");
    CliResult r = run_cli({"decide", "--file", path});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "true\n");

    r = run_cli({"decide", "1 > 0", "--file", path});
    CHECK(r.exit_code == 2);

    r = run_cli({"decide"});
    CHECK(r.exit_code == 2);

    r = run_cli({"decide", "--file", "cli_test_no_such_file.txt"});
    CHECK(r.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("cad dumps a deterministic, reparsable decomposition") {
    CliResult r = run_cli({"cad", "x^2 - 2"});
    CHECK(r.exit_code == 0);
    std::vector<CellRecord> records = parse_dump(r.out);
    REQUIRE(records.size() == 5);
    CHECK(records[0].signs == "+");
    CHECK(records[1].kind == CellKind::Section);
    CHECK(records[2].signs == "-");
    CHECK(records[4].signs == "+");

    CliResult again = run_cli({"cad", "x^2 - 2"});
    CHECK(again.out == r.out);
}

TEST_CASE("cad supports multiple polynomials and an explicit order") {
    CliResult r = run_cli({"cad", "x2^2 - x1", "--var-order", "x1,x2"});
    CHECK(r.exit_code == 0);
    std::vector<CellRecord> records = parse_dump(r.out);
    int leaves = 0;
    for (const CellRecord& rec : records)
        if (rec.level == 2) ++leaves;
    CHECK(leaves == 9);

    // Appearance order: y before x, so this is a CAD of the (y, x) plane.
    r = run_cli({"cad", "y - 1; x*y"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("family level=1") != std::string::npos);
    CHECK(r.out.find("family level=2") != std::string::npos);
}

TEST_CASE("cad precision and exact output") {
    CliResult r = run_cli({"cad", "x^2 - 2", "--precision", "2"});
    CHECK(r.out.find("-1.41\n") != std::string::npos);
    CHECK(r.out.find("1.4142") == std::string::npos);

    r = run_cli({"cad", "x^2 - 2", "--exact"});
    CHECK(r.out.find("exact=root[") != std::string::npos);

    r = run_cli({"cad", "x^2 - 2", "--precision", "0"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("cad rejects empty input") {
    CliResult r = run_cli({"cad", " ; "});
    CHECK(r.exit_code == 2);
}

TEST_CASE("model implicitize on an inline specification") {
    std::string spec =
        "params: t\n"
        "observables: x\n"
        "map: t^2\n";
    CliResult r = run_cli({"model", spec});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "x >= 0\n");
}

TEST_CASE("model specifications load from files and by name") {
    std::string path = write_temp("model.txt",
                                  "# squares\n"
                                  "params: t\n"
                                  "observables: x\n"
                                  "map: t^2\n");
    CliResult r = run_cli({"model", "--file", path});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "x >= 0\n");
    r = run_cli({"model", path});  // bare path, not a built-in name
    CHECK(r.exit_code == 0);
    CHECK(r.out == "x >= 0\n");
    std::remove(path.c_str());

    r = run_cli({"model", "no-such-model"});
    CHECK(r.exit_code == 2);

    r = run_cli({"model", "gaussian-complete-3", "--emit-formula"});
    CHECK(r.exit_code == 0);
    CHECK(!r.out.empty());
}

TEST_CASE("model compare decides set relations between images") {
    std::string diag =
        "params: t\n"
        "observables: x y\n"
        "map: t, t\n";
    std::string plane =
        "params: u v\n"
        "observables: x y\n"
        "map: u, v\n";
    CliResult r = run_cli({"model", diag, "--task", "compare", "--other", plane});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "true\n");

    r = run_cli({"model", plane, "--task", "compare", "--other", diag});
    CHECK(r.out == "false\n");

    r = run_cli({"model", diag, "--task", "compare", "--other", plane, "--mode",
                 "equality", "--assert-true"});
    CHECK(r.exit_code == 1);
    CHECK(r.out == "false\n");

    r = run_cli({"model", diag, "--task", "compare", "--other", plane, "--mode",
                 "overlap"});
    CHECK(r.out == "true\n");

    r = run_cli({"model", diag, "--task", "compare", "--other", plane, "--mode",
                 "sideways"});
    CHECK(r.exit_code == 2);

    r = run_cli({"model", diag, "--task", "compare"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("model identify and region tasks") {
    std::string squares =
        "params: t\n"
        "observables: x\n"
        "map: t^2\n";
    CliResult r = run_cli({"model", squares, "--task", "identify", "--quantity", "t",
                           "--witness"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("false\nwitness (", 0) == 0);

    r = run_cli({"model", squares, "--task", "identify", "--quantity", "t^2"});
    CHECK(r.out == "true\n");

    r = run_cli({"model", squares, "--task", "region", "--quantity", "t^2"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "r >= 0\n");

    r = run_cli({"model", squares, "--task", "identify"});
    CHECK(r.exit_code == 2);
    r = run_cli({"model", squares, "--task", "region"});
    CHECK(r.exit_code == 2);
    r = run_cli({"model", squares, "--task", "mystify"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("model emit-formula prints the sentence without solving") {
    std::string squares =
        "params: t\n"
        "observables: x\n"
        "map: t^2\n";
    CliResult r = run_cli({"model", squares, "--task", "identify", "--quantity", "t",
                           "--emit-formula"});
    CHECK(r.exit_code == 0);
    FormulaPtr f = parse(r.out);
    CHECK(free_variables(f).empty());
}

TEST_CASE("time budgets abort long runs with exit status 3") {
    std::vector<std::string> slow = {
        "decide",
        "forall a. forall b. forall c. forall d. exists x. "
        "a*x^3 + b*x^2 + c*x + d = 0 or a = 0"};
    std::vector<std::string> with_flag = slow;
    with_flag.push_back("--time-budget");
    with_flag.push_back("0.05");
    CliResult r = run_cli(with_flag);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("time budget") != std::string::npos);

    setenv(cli::kTimeBudgetEnv, "0.05", 1);
    r = run_cli(slow);
    unsetenv(cli::kTimeBudgetEnv);
    CHECK(r.exit_code == 3);

    // An explicit budget overrides the environment default.
    setenv(cli::kTimeBudgetEnv, "0.0001", 1);
    r = run_cli({"decide", "1 > 0", "--time-budget", "60"});
    unsetenv(cli::kTimeBudgetEnv);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "true\n");
}

TEST_CASE("usage errors from the option parser") {
    CliResult r = run_cli({});
    CHECK(r.exit_code == 2);

    r = run_cli({"frobnicate", "1 > 0"});
    CHECK(r.exit_code == 2);

    r = run_cli({"decide", "1 > 0", "--no-such-flag"});
    CHECK(r.exit_code == 2);

    r = run_cli({"--help"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Subcommands:") != std::string::npos);

    r = run_cli({"decide", "--help"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("--assert-true") != std::string::npos);
}
