#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nclab/errors.hpp"
#include "nclab/pipeline.hpp"

using namespace nclab;

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> v) {
    double a = 0.0;
    for (double c : v) a += c * c;
    return a;
}

Symbol bracket_power(int n, double p) {
    ClassicalStructure cs;
    cs.terms.push_back({p, [](std::span<const double>, std::span<const double>) { return Complex(1.0); }});
    return Symbol(
        n, [p](std::span<const double> k, std::span<const double>) { return Complex(std::pow(1.0 + norm2(k), p / 2)); },
        p, Side::Discrete, 1.0, 0.0, cs);
}

Symbol modulated() {
    ClassicalStructure cs;
    cs.terms.push_back({-1.0, [](std::span<const double>, std::span<const double> x) {
                            return Complex(1.0 + 0.5 * std::cos(2 * kPi * x[0]));
                        }});
    return Symbol(
        1,
        [](std::span<const double> k, std::span<const double> x) {
            return Complex((1.0 + 0.5 * std::cos(2 * kPi * x[0])) / std::sqrt(1.0 + k[0] * k[0]));
        },
        -1.0, Side::Discrete, 1.0, 0.0, cs);
}

}  // namespace

TEST_CASE("diagonal_fast_path examples") {
    const auto s = diagonal_fast_path(bracket_power(1, -1), 3);
    const std::vector<double> want{1.0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(5.0),
                                   1 / std::sqrt(5.0), 1 / std::sqrt(10.0), 1 / std::sqrt(10.0)};
    REQUIRE(s.values.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(s.values[i] - want[i]) < 1e-15);

    const Symbol c(2, [](std::span<const double>, std::span<const double>) { return Complex(0.75); }, 0.0,
                   Side::Discrete);
    const auto cs = diagonal_fast_path(c, 4);
    CHECK(cs.values.size() == 81);
    for (double v : cs.values) CHECK(v == 0.75);

    CHECK_THROWS_AS(diagonal_fast_path(modulated(), 8), UsageError);
}

TEST_CASE("fast path agrees with the assembled matrix") {
    for (int n : {1, 2}) {
        const auto fast = diagonal_fast_path(bracket_power(n, -double(n)), 16).values;
        OperatorSpectrumOptions o;
        o.M = 16;
        o.symmetrize = false;
        o.allow_fast_path = false;
        const auto full = operator_spectrum(bracket_power(n, -double(n)), o);
        CHECK_FALSE(full.fast_path);
        REQUIRE(full.values.size() == fast.size());
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(full.values[i] - fast[i]) < 1e-13);
    }
}

TEST_CASE("run_connes_check: multiplier on the fast path") {
    ConnesOptions o;
    o.spectrum.M = 20000;
    o.spectrum.symmetrize = false;
    const auto r = run_connes_check(bracket_power(1, -1), o);
    CHECK(r.fast_path);
    CHECK(r.Q == 0);
    CHECK(r.residue_lattice == Complex(2.0));
    CHECK(std::abs(r.residue_paper - Complex(1.0 / kPi)) < 1e-14);
    CHECK(r.relative_deviation < 0.05);
    CHECK(r.warnings.empty());
    CHECK(r.summary.window_end == 40001);
}

TEST_CASE("run_connes_check: x-dependent symbol, symmetrised") {
    ConnesOptions o;
    o.spectrum.M = 256;
    o.spectrum.symmetrize = true;
    const auto r = run_connes_check(modulated(), o);
    CHECK_FALSE(r.fast_path);
    CHECK(r.symmetrized);
    CHECK(r.Q == 4096);
    CHECK(std::abs(r.residue_lattice - Complex(2.0)) < 1e-12);
    CHECK(r.relative_deviation < 0.1);
    CHECK(r.hermiticity_deviation > 0.0);
    CHECK(r.min_eigenvalue > -0.05);
    CHECK(r.warnings.empty());
}

TEST_CASE("run_connes_check: order mismatch and trace-class spectrum") {
    ConnesOptions o;
    o.spectrum.M = 20000;
    const auto trace_class = bracket_power(1, -2);
    CHECK_THROWS_AS(run_connes_check(trace_class, o), UsageError);
    const auto spec = operator_spectrum(trace_class, o.spectrum);
    FitOptions fo;
    fo.discard = 0.0;
    CHECK(std::abs(trace_estimate(spec.values, fo).trace_estimate) < 0.02);
}

TEST_CASE("positivity warning") {
    // Sign-indefinite symbol: half the spectrum is negative.
    ClassicalStructure cs;
    cs.terms.push_back({-1.0, [](std::span<const double>, std::span<const double> x) {
                            return Complex(std::cos(2 * kPi * x[0]));
                        }});
    const Symbol s(
        1,
        [](std::span<const double> k, std::span<const double> x) {
            return Complex(std::cos(2 * kPi * x[0]) / std::sqrt(1.0 + k[0] * k[0]));
        },
        -1.0, Side::Discrete, 1.0, 0.0, cs);
    ConnesOptions o;
    o.spectrum.M = 64;
    const auto r = run_connes_check(s, o);
    CHECK(r.min_eigenvalue < 0.0);
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("property: deterministic results") {
    ConnesOptions o;
    o.spectrum.M = 64;
    const auto a = run_connes_check(modulated(), o);
    const auto b = run_connes_check(modulated(), o);
    CHECK(a.spectral_estimate == b.spectral_estimate);
    CHECK(a.summary.partial_sums == b.summary.partial_sums);
    CHECK(a.residue_lattice == b.residue_lattice);
}

TEST_CASE("property: symmetrisation leaves the residue input unchanged") {
    ConnesOptions on, off;
    on.spectrum.M = off.spectrum.M = 32;
    on.spectrum.symmetrize = true;
    off.spectrum.symmetrize = false;
    const auto a = run_connes_check(modulated(), on);
    const auto b = run_connes_check(modulated(), off);
    CHECK(a.residue_lattice == b.residue_lattice);
    CHECK(a.residue_paper == b.residue_paper);
    CHECK(a.symmetrized);
    CHECK_FALSE(b.symmetrized);
}

TEST_CASE("n = 2 multiplier comparison") {
    ConnesOptions o;
    o.spectrum.M = 160;  // 103041 points
    o.spectrum.symmetrize = false;
    const auto r = run_connes_check(bracket_power(2, -2), o);
    CHECK(r.fast_path);
    CHECK(std::abs(r.residue_lattice - Complex(kPi)) < 1e-12);
    CHECK(r.relative_deviation < r.summary.stability_span / kPi + 0.05);
}
