#include <doctest.h>

#include <cmath>
#include <random>

#include "ptamp/errors.hpp"
#include "ptamp/signals.hpp"

using namespace ptamp;
using signals::AmplifierSpec;
using signals::ParameterSignal;

namespace {
AmplifierSpec constant_spec(double om, double al, double be, double m) {
    return AmplifierSpec{ParameterSignal::constant(om), ParameterSignal::constant(al),
                         ParameterSignal::constant(be), ParameterSignal::constant(m)};
}
}  // namespace

TEST_CASE("equivalent_form: Hermitian oscillator limit") {
    const auto eq = signals::equivalent_form(constant_spec(1.0, 0.0, 0.0, 1.0), 0.0);
    CHECK(eq.M == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eq.Omega2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eq.nu_minus == 0.0);
}

TEST_CASE("equivalent_form: direct substitution") {
    const auto eq = signals::equivalent_form(constant_spec(1.0, 0.1, 0.2, 1.0), 0.0);
    CHECK(eq.nu_plus == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(eq.nu_minus == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(eq.M == doctest::Approx(1.0 / 0.7).epsilon(1e-14));
    CHECK(eq.Omega2 == doctest::Approx(0.91).epsilon(1e-14));
}

TEST_CASE("equivalent_form: omega = nu+ boundary flagged") {
    CHECK_THROWS_AS(signals::equivalent_form(constant_spec(1.0, 0.5, 0.5, 2.0), 0.0),
                    DegenerateMassError);
}

TEST_CASE("equivalent_form: reduces to (m, omega) when alpha = beta = 0") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double om = u(rng), m = u(rng);
        const auto eq = signals::equivalent_form(constant_spec(om, 0.0, 0.0, m), 0.0);
        CHECK(eq.M == doctest::Approx(m).epsilon(1e-14));
        CHECK(eq.Omega2 == doctest::Approx(om * om).epsilon(1e-14));
    }
}

TEST_CASE("pt_unbroken: Hermitian matrices always pass") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double h11 = u(rng), h22 = u(rng);
        const std::complex<double> c{u(rng), u(rng)};
        CHECK(signals::pt_unbroken(h11, h22, c, std::conj(c)));
    }
}

TEST_CASE("pt_unbroken at unit mass and frequency equals the cubic region predicate") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int i = 0; i < 2000; ++i) {
        const double a = u(rng), b = u(rng);
        const auto e = signals::pt_bilinear_unit(a, b);
        const bool lib = signals::pt_unbroken(e.h11, e.h22, e.h12, e.h21);
        const bool predicate = a * b * (1.0 - a - b) >= 0.0;
        CHECK(lib == predicate);
    }
    // the textbook example values
    const auto e1 = signals::pt_bilinear_unit(0.1, 0.2);
    CHECK(signals::pt_unbroken(e1.h11, e1.h22, e1.h12, e1.h21));
    const auto e2 = signals::pt_bilinear_unit(0.6, 0.6);
    CHECK_FALSE(signals::pt_unbroken(e2.h11, e2.h22, e2.h12, e2.h21));
}

TEST_CASE("pt_region_scan: corners and sample points") {
    const auto grid = signals::pt_region_scan({0.0, 1.0}, {0.0, 1.0}, 3);
    CHECK(grid.at(0, 0));        // (0, 0)
    CHECK_FALSE(grid.at(2, 2));  // (1, 1)
    const auto g5 = signals::pt_region_scan({0.0, 1.0}, {0.0, 1.0}, 5);
    CHECK(g5.at(1, 1));  // (0.25, 0.25)
    const auto g11 = signals::pt_region_scan({0.0, 1.0}, {0.0, 1.0}, 11);
    CHECK_FALSE(g11.at(9, 2));  // (0.9, 0.2)
    CHECK_THROWS_AS(signals::pt_region_scan({0.0, 1.0}, {0.0, 1.0}, 1), InvalidArgument);
}

TEST_CASE("modulated_spec: unmodulated limit and direct substitution") {
    const auto plain =
        signals::modulated_spec(1.0, 1.0, 0.0, ParameterSignal::cosine(1.0, 2.0, 0.0));
    CHECK(plain.spec.alpha(0.3) == 0.0);
    CHECK(plain.spec.beta(1.7) == 0.0);
    CHECK(plain.spec.omega(0.5) == doctest::Approx(1.0).epsilon(1e-15));

    const auto mod =
        signals::modulated_spec(1.0, 1.0, 0.1, ParameterSignal::cosine(1.0, 2.0, 0.0));
    CHECK_FALSE(mod.large_eps_warning);
    CHECK(mod.spec.alpha(0.0) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(mod.spec.beta(0.0) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(mod.spec.mass(0.0) == doctest::Approx(1.1).epsilon(1e-15));

    // Hermitian at all times: nu_minus vanishes identically
    for (double t : {-2.0, -0.3, 0.0, 0.9, 4.0}) {
        const auto eq = signals::equivalent_form(mod.spec, t);
        CHECK(std::abs(eq.nu_minus) < 1e-16);
    }
    CHECK(signals::modulated_spec(1.0, 1.0, 0.5, ParameterSignal::constant(1.0))
              .large_eps_warning);
}

TEST_CASE("tabulated signal: cubic interpolation inside, refusal outside") {
    std::vector<double> t, v;
    for (int i = 0; i <= 20; ++i) {
        t.push_back(0.1 * i);
        v.push_back(std::sin(0.1 * i));
    }
    const auto s = ParameterSignal::table(t, v);
    CHECK(std::abs(s(0.55) - std::sin(0.55)) < 1e-4);
    CHECK(std::abs(s.derivative(0.55) - std::cos(0.55)) < 1e-3);
    CHECK_THROWS_AS(s(-0.01), InvalidArgument);
    CHECK_THROWS_AS(s(2.01), InvalidArgument);
}

TEST_CASE("evenness diagnostic") {
    CHECK(ParameterSignal::cosine(1.0, 3.0, 0.0).evenness_defect() < 1e-15);
    const auto shifted = ParameterSignal::cosine(1.0, 3.0, 1.0);
    CHECK(shifted.evenness_defect() > 0.1);
}

TEST_CASE("signal JSON descriptors round-trip and reject unknown keys") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 30; ++i) {
        ParameterSignal s = [&]() {
            switch (i % 3) {
                case 0:
                    return ParameterSignal::constant(u(rng));
                case 1:
                    return ParameterSignal::cosine(u(rng), std::abs(u(rng)) + 0.1, u(rng));
                default:
                    return ParameterSignal::toy_power(u(rng), 1.0 + std::floor(std::abs(u(rng))));
            }
        }();
        const auto back = ParameterSignal::from_json(s.to_json());
        for (double t : {0.2, 0.7, 1.9}) CHECK(back(t) == doctest::Approx(s(t)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(ParameterSignal::from_json({{"kind", "constant"}, {"valu", 1.0}}),
                    ConfigError);
    CHECK_THROWS_AS(ParameterSignal::from_json({{"kind", "sawtooth"}, {"value", 1.0}}),
                    ConfigError);
}

TEST_CASE("amplifier spec validation") {
    auto spec = constant_spec(1.0, 0.1, 0.2, 1.0);
    CHECK_NOTHROW(spec.validate(0.0, 1.0));
    auto bad = constant_spec(1.0, 0.1, 0.2, -1.0);
    CHECK_THROWS_AS(bad.validate(0.0, 1.0), DomainError);
}
