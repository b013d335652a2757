#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "mage/cli.hpp"
#include "mage/mae.hpp"
#include "mage/parser.hpp"
#include "test_support.hpp"

using namespace mage;
using namespace mage::testing;
using nlohmann::json;

TEST_CASE("parsing the classical forms") {
    Form laplace = parse_form("dq1^dp2 - dq2^dp1", 2);
    Form expect = basis_form(2, {1, 4}, Rational(1)) + basis_form(2, {2, 3}, Rational(-1));
    CHECK(laplace == expect);

    // the Born-Infeld form as classically printed (without the primitive completion)
    Form bi = parse_form("(1-p1^2)*dq1^dp2 + p1*p2*dq1^dp1 + (1+p2^2)*dq2^dp1", 2);
    Poly one = Poly::constant(4, 1);
    Poly p1 = Poly::variable(4, 2), p2 = Poly::variable(4, 3);
    Form expect_bi = basis_form(2, {1, 4}, one - p1 * p1) +
                     basis_form(2, {1, 3}, p1 * p2) +
                     basis_form(2, {2, 3}, one + p2 * p2);
    CHECK(bi == expect_bi);
}

TEST_CASE("parse errors carry position information") {
    try {
        parse_form("dq1^^dp2", 2);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.column == 5);
        CHECK(std::string(e.what()).find("covector") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_form("dq1^dx2", 2), ParseError);   // unknown variable
    CHECK_THROWS_AS(parse_form("dq3^dp1", 2), ParseError);   // index out of range
    CHECK_THROWS_AS(parse_form("dq1^dp1 + dq1", 2), ParseError); // mixed degrees
    CHECK_THROWS_AS(parse_form("q1^0", 2), ParseError);      // exponent must be positive
    CHECK_THROWS_AS(parse_form("q1/q2", 2), ParseError);     // non-constant divisor
    CHECK_THROWS_AS(parse_poly("1/0", 2), ParseError);
}

TEST_CASE("poly grammar corners") {
    // power binds before division
    Poly p = parse_poly("q1^2/2", 2);
    CHECK(p == Poly::variable(4, 0).pow(2).scaled(Rational(1, 2)));
    // unary minus and nesting
    Poly q = parse_poly("-(q1 - p2)^2", 2);
    Poly diff = Poly::variable(4, 0) - Poly::variable(4, 3);
    CHECK(q == -(diff * diff));
    // integer rationals
    CHECK(parse_poly("3/4", 2) == Poly::constant(4, Rational(3, 4)));
}

TEST_CASE("print-parse roundtrip on random forms") {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 500) {
        int n = 2 + (done % 3);
        std::uniform_int_distribution<int> dd(0, 2 * n);
        Form f = random_form(rng, n, dd(rng), false, 3, 2);
        if (f.is_zero()) continue; // "0" reparses as the degree-0 zero form
        std::string s = form_to_string(f);
        Form g = parse_form(s, n);
        // parse(print(parse(s))) == parse(s)
        CHECK(g == f);
        CHECK(parse_form(form_to_string(g), n) == g);
        ++done;
    }
}

TEST_CASE("parse_point") {
    auto pt = parse_point("1/2, -3 ,0");
    REQUIRE(pt.size() == 3);
    CHECK(pt[0] == Rational(1, 2));
    CHECK(pt[1] == Rational(-3));
    CHECK(pt[2] == Rational(0));
    CHECK_THROWS_AS(parse_point("1,,2"), ParseError);
}

TEST_CASE("run_command: classify the special lagrangian equation") {
    // build the SLAG form, print it, classify through the CLI surface
    SymplecticContext ctx = SymplecticContext::make(3);
    Form slag = basis_form(3, {4, 2, 3}, Rational(1)) + basis_form(3, {1, 5, 3}, Rational(1)) +
                basis_form(3, {1, 2, 6}, Rational(1)) + basis_form(3, {4, 5, 6}, Rational(-1));
    CommandResult r =
        run_command({"classify", "--dim", "3", "--form", form_to_string(slag)});
    CHECK(r.exit_code == 0);
    json j = json::parse(r.json);
    CHECK(j["command"] == "classify");
    CHECK(j["dim"] == 3);
    CHECK(j["result"]["orbit"] == 2);
    CHECK(j["result"]["normal_form"] == "Δf - hess(f) = 0");
    CHECK(j["result"]["lambda_sign"] == -1);
    CHECK(j["result"]["signature"] == json::array({0, 6, 0}));
    CHECK(j["warnings"].empty());
}

TEST_CASE("run_command: divergent type of the Born-Infeld form") {
    std::string bi =
        "(1-p1^2)*dq1^dp2 + p1*p2*dq1^dp1 - p1*p2*dq2^dp2 + (1+p2^2)*dq2^dp1";
    CommandResult r = run_command({"divergent", "--form", bi});
    CHECK(r.exit_code == 0);
    json j = json::parse(r.json);
    CHECK(j["result"]["is_divergent"] == false);
    CHECK(j["result"]["alpha"] == "3*p1*dp2 - 3*p2*dp1");
    CHECK(j["result"]["euler"] == "6*dp1^dp2");
}

TEST_CASE("run_command: apply") {
    CommandResult r = run_command({"apply", "--dim", "2", "--form", "dq1^dp2 - dq2^dp1",
                                   "--function", "q1^2/2"});
    CHECK(r.exit_code == 0);
    json j = json::parse(r.json);
    CHECK(j["result"]["result"] == "1*dq1^dq2");
}

TEST_CASE("run_command: symbol and decompose") {
    CommandResult r =
        run_command({"symbol", "--dim", "2", "--form", "dq1^dp2 - dq2^dp1"});
    json j = json::parse(r.json);
    CHECK(j["result"]["symbol"] == "u11 + u22");

    CommandResult r2 = run_command({"decompose", "--dim", "2", "--form", "dq1^dp1"});
    json j2 = json::parse(r2.json);
    CHECK(j2["result"]["omega0"] == "-1/2*dq2^dp2 + 1/2*dq1^dp1");
    CHECK(j2["result"]["omega1"] == "1/2");
}

TEST_CASE("run_command: linearize and ellipticity") {
    CommandResult r =
        run_command({"ellipticity", "--dim", "2", "--form", "dq1^dp2 + dq2^dp1",
                     "--function", "0", "--point", "0,0"});
    json j = json::parse(r.json);
    CHECK(j["result"]["class"] == "hyperbolic");

    CommandResult r2 =
        run_command({"linearize", "--dim", "2", "--form", "dq1^dp2 - dq2^dp1",
                     "--function", "q1*q2", "--point", "1,2"});
    json j2 = json::parse(r2.json);
    CHECK(j2["result"]["class"] == "elliptic");
    CHECK(j2["result"]["principal"] ==
          json::array({json::array({"1", "0"}), json::array({"0", "1"})}));
}

TEST_CASE("run_command: exit codes") {
    // usage error
    CHECK(run_command({"no-such-command"}).exit_code == 1);
    CHECK(run_command({"classify", "--dim", "2"}).exit_code == 1); // missing --form
    CHECK(run_command({"classify", "--dim", "2", "--form", "dq1^^dp1"}).exit_code == 1);
    // domain error: dual-linearize on a degenerate form
    std::string lap3 = "dp1^dq2^dq3 + dq1^dp2^dq3 + dq1^dq2^dp3";
    CommandResult r = run_command({"dual-linearize", "--dim", "3", "--form", lap3,
                                   "--function", "0", "--point", "0,0,0"});
    CHECK(r.exit_code == 2);
    json j = json::parse(r.json);
    CHECK(j["result"].contains("error"));
    // success is 0
    CHECK(run_command({"classify", "--dim", "2", "--form", "dq1^dp2"}).exit_code == 0);
}

TEST_CASE("identical invocations produce byte-identical output") {
    std::vector<std::string> argv{"invariants", "--dim", "3", "--form",
                                  "dp1^dq2^dq3 + dq1^dp2^dq3 + dq1^dq2^dp3 - dp1^dp2^dp3"};
    CommandResult a = run_command(argv);
    CommandResult b = run_command(argv);
    CHECK(a.json == b.json);
    CHECK(a.exit_code == 0);
}

TEST_CASE("exact commands emit rationals only, never floats") {
    for (auto argv : std::vector<std::vector<std::string>>{
             {"invariants", "--dim", "3", "--form",
              "dp1^dq2^dq3 + dq1^dp2^dq3 + dq1^dq2^dp3 - dp1^dp2^dp3"},
             {"decompose", "--dim", "2", "--form", "dq1^dp1"},
             {"linearize", "--dim", "2", "--form", "dq1^dp2 - dq2^dp1", "--function",
              "q1^3/6", "--point", "1/2,2/3"}}) {
        CommandResult r = run_command(argv);
        CHECK(r.exit_code == 0);
        CHECK(r.json.find('.') == std::string::npos);
    }
}

TEST_CASE("run_command: conservation and gcs surfaces") {
    CommandResult r = run_command({"conservation", "--dim", "2", "--form",
                                   "dq1^dp2 - dq2^dp1", "--function", "q1"});
    json j = json::parse(r.json);
    CHECK(j["result"]["is_generating"] == true);
    CHECK(j["result"]["conjugate"] == "-q2");

    CommandResult r2 =
        run_command({"gcs-check", "--dim", "2", "--form", "dq1^dp2 - dq2^dp1"});
    json j2 = json::parse(r2.json);
    CHECK(j2["result"]["j_squared_ok"] == true);
    CHECK(j2["result"]["integrability_residual_zero"] == true);

    // solution-check over a temp surface file
    std::string path = "mage_test_surface.txt";
    {
        std::ofstream out(path);
        out << "# graph of grad(q1*q2)\n";
        for (int i = 0; i < 3; ++i)
            out << 0.1 * i << " 0.5 0.5 " << 0.1 * i << "  1 0 0 1  0 1 1 0\n";
    }
    CommandResult r3 = run_command({"solution-check", "--dim", "2", "--form",
                                    "dq1^dp2 - dq2^dp1", "--surface", path});
    std::remove(path.c_str());
    json j3 = json::parse(r3.json);
    CHECK(j3["result"]["samples"] == 3);
    CHECK(j3["result"]["passed"] == 3);
}

TEST_CASE("run_command: 4D report and pretty output") {
    // Plebanski I through the CLI: zero quartic with its zero square root
    SymplecticContext ctx = SymplecticContext::make(4);
    int nv = hess_nvars(4);
    Poly h = Poly::variable(nv, hess_uij_var(4, 0, 1)) *
                 Poly::variable(nv, hess_uij_var(4, 2, 3)) -
             Poly::variable(nv, hess_uij_var(4, 0, 3)) *
                 Poly::variable(nv, hess_uij_var(4, 1, 2)) -
             Poly::constant(nv, 1);
    Form w = form_from_symbol(HessSymbol::make(4, h), ctx);
    CommandResult r =
        run_command({"classify", "--dim", "4", "--form", form_to_string(w)});
    CHECK(r.exit_code == 0);
    json j = json::parse(r.json);
    CHECK(j["result"]["a"].size() == 4);
    CHECK(j["result"]["a"][0] == "8");
    CHECK(j["result"]["q"] == "0");
    CHECK(j["result"]["square_root"]["found"] == true);

    CommandResult rp = run_command({"classify", "--dim", "2", "--form", "dq1^dp2",
                                    "--pretty"});
    CHECK(rp.exit_code == 0);
    CHECK(rp.json.find('\n') != std::string::npos); // indented
    CHECK(json::parse(rp.json)["result"]["orbit"] == "Degenerate");
}

TEST_CASE("batch mode runs whole files") {
    std::istringstream in(
        "classify --dim 2 --form 'dq1^dp2 - dq2^dp1'\n"
        "# a comment\n"
        "apply --dim 2 --form \"dq1^dp2 - dq2^dp1\" --function q1^2/2\n");
    std::ostringstream out;
    int code = run_batch(in, out);
    CHECK(code == 0);
    std::istringstream lines(out.str());
    std::string line1, line2;
    std::getline(lines, line1);
    std::getline(lines, line2);
    json j1 = json::parse(line1);
    CHECK(j1["result"]["orbit"] == "Laplace");
    json j2 = json::parse(line2);
    CHECK(j2["result"]["result"] == "1*dq1^dq2");
}
