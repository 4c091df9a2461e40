#include <doctest.h>

#include <cmath>
#include <numbers>

#include "circletrack/bessel.hpp"
#include "circletrack/von_mises.hpp"
#include "oracles/reference_bessel.hpp"

using namespace circletrack;

namespace {

constexpr double kPi = std::numbers::pi;

// 3600-point midpoint quadrature over (-pi, pi].
template <typename F>
double quadrature(F&& f, int n = 3600) {
    const double delta = 2 * kPi / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        total += f(-kPi + (i + 0.5) * delta);
    }
    return total * delta;
}

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(3 * kPi / 2).radians() == doctest::Approx(-kPi / 2).epsilon(1e-15));
    CHECK(wrap_angle(kPi).radians() == kPi);
    CHECK(wrap_angle(-kPi).radians() == kPi);
    CHECK(wrap_angle(0.0).radians() == 0.0);
    CHECK(wrap_angle(7 * kPi).radians() == doctest::Approx(kPi).epsilon(1e-12));
    CHECK_THROWS_AS(wrap_angle(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(wrap_angle(INFINITY), std::domain_error);

    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double value = wrap_angle(rng.uniform(-50.0, 50.0)).radians();
        CHECK(value > -kPi);
        CHECK(value <= kPi);
    }
}

TEST_CASE("vm_log_pdf values and normalization") {
    CHECK(vm_log_pdf(Angle(0.7), VonMises(Angle(0.7), 0.0)) ==
          doctest::Approx(-std::log(2 * kPi)).epsilon(1e-14));
    const double expected = 2.0 - std::log(2 * kPi * oracle::i0_reference(2.0L));
    CHECK(vm_log_pdf(Angle(0.3), VonMises(Angle(0.3), 2.0)) ==
          doctest::Approx(expected).epsilon(1e-12));

    for (double kappa : {0.0, 0.1, 1.0, 10.0, 100.0}) {
        const VonMises d(Angle(0.9), kappa);
        const double integral =
            quadrature([&](double x) { return std::exp(vm_log_pdf(Angle(x), d)); });
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("VonMises rejects negative concentration and clamps huge ones") {
    CHECK_THROWS_AS(VonMises(Angle(0.0), -1.0), std::domain_error);
    CHECK(VonMises(Angle(0.0), 1e9).concentration == kKappaMax);
}

TEST_CASE("vm_multiply closed-form cases") {
    const VonMises aligned = vm_multiply(VonMises(Angle(0.4), 3.0), VonMises(Angle(0.4), 2.0));
    CHECK(aligned.concentration == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(aligned.mean.radians() == doctest::Approx(0.4).epsilon(1e-12));

    const VonMises cancelled =
        vm_multiply(VonMises(Angle(0.4), 2.0), VonMises(Angle(0.4 + kPi), 2.0));
    CHECK(cancelled.concentration <= 1e-9);
    CHECK(cancelled.mean.radians() == doctest::Approx(0.4).epsilon(1e-9));

    const VonMises bisect = vm_multiply(VonMises(Angle(0.0), 2.0), VonMises(Angle(kPi / 2), 2.0));
    CHECK(bisect.mean.radians() == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(bisect.concentration == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("vm_multiply is commutative and associative") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const VonMises a(Angle(rng.uniform(-kPi, kPi)), rng.uniform(0.0, 20.0));
        const VonMises b(Angle(rng.uniform(-kPi, kPi)), rng.uniform(0.0, 20.0));
        const VonMises c(Angle(rng.uniform(-kPi, kPi)), rng.uniform(0.0, 20.0));

        const VonMises ab = vm_multiply(a, b);
        const VonMises ba = vm_multiply(b, a);
        CHECK(std::fabs(ab.concentration - ba.concentration) <= 1e-10);
        if (ab.concentration > 1e-6) {
            CHECK(geodesic_distance(ab.mean, ba.mean) <= 1e-10);
        }

        const VonMises left = vm_multiply(ab, c);
        const VonMises right = vm_multiply(a, vm_multiply(b, c));
        CHECK(std::fabs(left.concentration - right.concentration) <=
              1e-10 * (1.0 + left.concentration));
        if (left.concentration > 1e-6) {
            CHECK(geodesic_distance(left.mean, right.mean) <= 1e-8);
        }
    }
}

TEST_CASE("vm_convolve_approx endpoint behaviour") {
    const VonMises state(Angle(1.1), 4.0);
    const VonMises sharp = vm_convolve_approx(state, kKappaMax);
    CHECK(sharp.mean.radians() == doctest::Approx(1.1));
    CHECK(sharp.concentration == doctest::Approx(4.0).epsilon(1e-4));

    const VonMises diffused = vm_convolve_approx(state, 0.0);
    CHECK(diffused.concentration == 0.0);

    const VonMises mid = vm_convolve_approx(VonMises(Angle(0.0), 2.0), 2.0);
    const double target = oracle::ratio_reference(2.0) * oracle::ratio_reference(2.0);
    CHECK(oracle::ratio_reference(mid.concentration) == doctest::Approx(target).epsilon(1e-9));
    CHECK(mid.concentration == doctest::Approx(1.1).epsilon(0.05));
}

TEST_CASE("vm_convolve_approx never increases concentration") {
    Rng rng(6);
    for (int i = 0; i < 300; ++i) {
        const double lambda = rng.uniform(0.0, 200.0);
        const double kappa_z = rng.uniform(0.0, 200.0);
        const VonMises out = vm_convolve_approx(VonMises(Angle(0.0), lambda), kappa_z);
        CHECK(out.concentration <= std::min(lambda, kappa_z) + 1e-9);
    }
}

TEST_CASE("vm_convolve_approx_n composes single steps exactly") {
    const VonMises state(Angle(-0.4), 9.0);
    VonMises stepped = state;
    for (int i = 0; i < 7; ++i) stepped = vm_convolve_approx(stepped, 3.0);
    const VonMises jumped = vm_convolve_approx_n(state, 3.0, 7);
    CHECK(jumped.concentration == doctest::Approx(stepped.concentration).epsilon(1e-9));
    CHECK(jumped.mean.radians() == stepped.mean.radians());
}

TEST_CASE("vm_exact_conv_log_density closed-form cases") {
    CHECK(vm_exact_conv_log_density(Angle(2.2), 7.0, VonMises(Angle(0.1), 0.0)) ==
          doctest::Approx(-std::log(2 * kPi)).epsilon(1e-12));

    const double kappa = 3.0;
    const double lambda = 5.0;
    const double at_mean = vm_exact_conv_log_density(Angle(0.6), kappa, VonMises(Angle(0.6), lambda));
    const double expected = std::log(oracle::i0_reference(kappa + lambda)) -
                            std::log(2 * kPi * oracle::i0_reference(kappa) *
                                     oracle::i0_reference(lambda));
    CHECK(at_mean == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("vm_exact_conv_log_density equals the dense-grid convolution integral") {
    // Spec'd spot check.
    {
        const VonMises state(Angle(0.0), 3.0);
        const double direct = vm_exact_conv_log_density(Angle(1.0), 5.0, state);
        const double integral = quadrature([&](double z) {
            return std::exp(vm_log_pdf(Angle(1.0), VonMises(Angle(z), 5.0)) +
                            vm_log_pdf(Angle(z), state));
        });
        CHECK(std::fabs(direct - std::log(integral)) <= 1e-6);
    }

    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const VonMises state(Angle(rng.uniform(-kPi, kPi)), rng.uniform(0.0, 30.0));
        const double obs_conc = rng.uniform(0.0, 30.0);
        const Angle x(rng.uniform(-kPi, kPi));
        const double direct = vm_exact_conv_log_density(x, obs_conc, state);
        const double integral = quadrature([&](double z) {
            return std::exp(vm_log_pdf(x, VonMises(Angle(z), obs_conc)) +
                            vm_log_pdf(Angle(z), state));
        });
        CHECK(std::fabs(direct - std::log(integral)) <= 1e-6);
    }
}

TEST_CASE("vm_exact_conv_log_density is a density in the observation") {
    for (double lambda : {0.0, 0.5, 4.0, 50.0}) {
        const VonMises state(Angle(-1.9), lambda);
        const double integral = quadrature([&](double x) {
            return std::exp(vm_exact_conv_log_density(Angle(x), 6.0, state));
        });
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("vm_sample distribution and determinism") {
    {
        Rng rng(42);
        double cx = 0.0;
        double sy = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const Angle a = vm_sample(VonMises(Angle(0.0), 0.0), rng);
            cx += std::cos(a.radians());
            sy += std::sin(a.radians());
        }
        CHECK(std::sqrt(cx * cx + sy * sy) / draws <= 0.01);
    }
    {
        Rng rng(43);
        double cx = 0.0;
        double sy = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const Angle a = vm_sample(VonMises(Angle(1.0), 50.0), rng);
            cx += std::cos(a.radians());
            sy += std::sin(a.radians());
        }
        CHECK(std::atan2(sy, cx) == doctest::Approx(1.0).epsilon(0.02));
    }
    {
        Rng rng_a(99);
        Rng rng_b(99);
        const VonMises d(Angle(0.5), 7.0);
        CHECK(vm_sample(d, rng_a).radians() == vm_sample(d, rng_b).radians());
    }
}
