#include "anyon/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace anyon;

namespace {

const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

std::string fermion_json()
{
    return R"({
      "name": "fermion-doc",
      "labels": ["e", "psi"],
      "vacuum": "e",
      "dual": {"e": "e", "psi": "psi"},
      "fusion": [["psi", "psi", "e"]],
      "f_symbols": {"psi,psi,psi;psi": [[[1, 0]]]},
      "r_symbols": {"psi,psi;e": [-1, 0]}
    })";
}

} // namespace

TEST_CASE("fibonacci builtin carries the published data")
{
    auto m = builtin("fibonacci");
    REQUIRE(m.num_types() == 2);
    CHECK(m.label(0) == "e");
    CHECK(m.label(1) == "tau");
    const Charge t = 1, e = 0;
    CHECK(m.fuses(t, t, e));
    CHECK(m.fuses(t, t, t));
    CHECK(fuse(m, t, t) == std::vector<Charge>{e, t});

    const FMatrix* f = m.f_matrix(t, t, t, t);
    REQUIRE(f != nullptr);
    CHECK(std::abs(f->values(0, 0) - kInvPhi) < 1e-15);
    CHECK(std::abs(f->values(0, 0).real() - 0.6180339887) < 1e-10);
    CHECK(std::abs(f->values(0, 1) - std::sqrt(kInvPhi)) < 1e-15);
    CHECK(std::abs(f->values(1, 1) + kInvPhi) < 1e-15);

    CHECK(std::abs(m.r_symbol(t, t, e) - std::polar(1.0, -4.0 * std::numbers::pi / 5.0)) < 1e-15);
    CHECK(std::abs(m.r_symbol(t, t, t) - std::polar(1.0, 3.0 * std::numbers::pi / 5.0)) < 1e-15);

    CHECK(std::abs(m.quantum_dim(t) - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-12);
}

TEST_CASE("fuse obeys the vacuum law and symmetry")
{
    for (const auto& name : builtin_names()) {
        auto m = builtin(name);
        for (Charge a = 0; a < m.num_types(); ++a) {
            CHECK(fuse(m, m.vacuum(), a) == std::vector<Charge>{a});
            auto with_dual = fuse(m, a, m.dual(a));
            CHECK(std::find(with_dual.begin(), with_dual.end(), m.vacuum()) != with_dual.end());
            for (Charge b = 0; b < m.num_types(); ++b)
                CHECK(fuse(m, a, b) == fuse(m, b, a));
        }
    }
    auto f = builtin("fermion");
    CHECK(fuse(f, 1, 1) == std::vector<Charge>{0});
    CHECK_THROWS_AS(fuse(f, 0, 5), ArgumentError);
}

TEST_CASE("abelian classification and ordering")
{
    auto ising = builtin("ising");
    CHECK(ising.label(0) == "1");
    CHECK(ising.label(1) == "psi");
    CHECK(ising.label(2) == "sigma");
    CHECK(ising.is_abelian(0));
    CHECK(ising.is_abelian(1));
    CHECK_FALSE(ising.is_abelian(2));

    // Non-abelian type listed first in the document still ends up last.
    auto data = builtin_data("ising");
    data.labels = {"sigma", "psi", "1"};
    AnyonModel reordered(data);
    CHECK(reordered.labels() == std::vector<std::string>{"1", "psi", "sigma"});
}

TEST_CASE("quantum dimensions satisfy d_a d_b = sum_c N d_c")
{
    for (const auto& name : builtin_names()) {
        auto m = builtin(name);
        for (Charge a = 0; a < m.num_types(); ++a)
            for (Charge b = 0; b < m.num_types(); ++b) {
                double sum = 0;
                for (Charge c : m.fuse(a, b))
                    sum += m.quantum_dim(c);
                CHECK(std::abs(m.quantum_dim(a) * m.quantum_dim(b) - sum) < 1e-10);
            }
    }
    CHECK(std::abs(builtin("ising").quantum_dim(2) - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("builtins pass full validation")
{
    for (const auto& name : builtin_names()) {
        auto report = validate_model(builtin(name), ValidationLevel::full);
        INFO(name);
        for (const auto& c : report.checks) {
            INFO(c.name << " residual " << c.max_residual);
            CHECK(c.passed);
            CHECK(c.max_residual < 1e-10);
        }
        CHECK(report.passed());
        CHECK(report.find("pentagon") != nullptr);
        CHECK(report.find("hexagon") != nullptr);
    }
    auto basic = validate_model(builtin("fibonacci"), ValidationLevel::basic);
    CHECK(basic.find("pentagon") == nullptr);
}

TEST_CASE("a perturbed F block breaks the pentagon")
{
    // Still unitary, but with the wrong mixing angle.
    auto data = builtin_data("fibonacci");
    auto& f = data.f_symbols.at({"tau", "tau", "tau", "tau"});
    const double c = 0.5, s = std::sqrt(0.75);
    f << c, s, s, -c;
    AnyonModel broken(data);
    auto report = validate_model(broken, ValidationLevel::full);
    CHECK_FALSE(report.passed());
    const auto* p = report.find("pentagon");
    REQUIRE(p != nullptr);
    CHECK_FALSE(p->passed);
    CHECK(p->max_residual > 1e-3);
}

TEST_CASE("a wrong R phase breaks the hexagon")
{
    auto data = builtin_data("fibonacci");
    data.r_symbols.at({"tau", "tau", "e"}) = std::polar(1.0, 0.3);
    auto report = validate_model(AnyonModel(data), ValidationLevel::full);
    CHECK(report.find("pentagon")->passed);
    CHECK_FALSE(report.find("hexagon")->passed);
}

TEST_CASE("fermion document loads as an abelian model")
{
    auto m = load_model(fermion_json());
    CHECK(m.name() == "fermion-doc");
    CHECK(m.num_types() == 2);
    CHECK(m.is_abelian(1));
    CHECK(m.r_symbol(1, 1, 0) == Complex(-1.0, 0.0));
    CHECK(validate_model(m, ValidationLevel::full).passed());
}

TEST_CASE("load_model rejects bad documents")
{
    CHECK_THROWS_AS(load_model("{not json"), ModelError);
    CHECK_THROWS_AS(load_model(R"({"labels": ["e"]})"), ModelError);

    SUBCASE("multiplicity above one")
    {
        auto doc = R"({"labels": ["e", "a", "c"], "vacuum": "e",
                       "fusion": [["a", "a", "c"], ["a", "a", "c"]]})";
        try {
            load_model(doc);
            FAIL("expected ModelError");
        } catch (const ModelError& e) {
            CHECK(std::string(e.what()).find("multiplicity unsupported") != std::string::npos);
        }
        auto explicit_count = R"({"labels": ["e", "a"], "vacuum": "e", "fusion": [["a", "a", "e", 2]]})";
        CHECK_THROWS_WITH_AS(load_model(explicit_count), doctest::Contains("multiplicity unsupported"), ModelError);
    }
    SUBCASE("missing F entry")
    {
        auto doc = R"({"labels": ["e", "tau"], "vacuum": "e", "fusion": [["tau", "tau", "e"], ["tau", "tau", "tau"]],
                       "f_symbols": {"tau,tau,tau;e": [[[1,0]]]},
                       "r_symbols": {"tau,tau;e": [1,0], "tau,tau;tau": [1,0]}})";
        CHECK_THROWS_WITH_AS(load_model(doc), doctest::Contains("missing F-symbol"), ModelError);
    }
    SUBCASE("missing R entry")
    {
        auto doc = R"({"labels": ["e", "psi"], "vacuum": "e", "fusion": [["psi", "psi", "e"]],
                       "f_symbols": {"psi,psi,psi;psi": [[[1,0]]]}})";
        CHECK_THROWS_WITH_AS(load_model(doc), doctest::Contains("missing R-symbol"), ModelError);
    }
    SUBCASE("non-unitary F")
    {
        auto doc = R"({"labels": ["e", "psi"], "vacuum": "e", "fusion": [["psi", "psi", "e"]],
                       "f_symbols": {"psi,psi,psi;psi": [[[2,0]]]}, "r_symbols": {"psi,psi;e": [-1,0]}})";
        CHECK_THROWS_WITH_AS(load_model(doc), doctest::Contains("non-unitary"), ModelError);
    }
}

TEST_CASE("builtins survive a JSON round trip")
{
    for (const auto& name : builtin_names()) {
        auto m = builtin(name);
        auto again = load_model(model_to_json(m));
        REQUIRE(again.labels() == m.labels());
        for (const auto& [a, b, c, d] : m.admissible_f_keys())
            CHECK((again.f_matrix(a, b, c, d)->values - m.f_matrix(a, b, c, d)->values).norm() < 1e-15);
        for (Charge a = 0; a < m.num_types(); ++a)
            for (Charge b = 0; b < m.num_types(); ++b)
                for (Charge c : m.fuse(a, b))
                    CHECK(again.r_symbol(a, b, c) == m.r_symbol(a, b, c));
    }
    CHECK_THROWS_AS(builtin("toric"), ArgumentError);
}
