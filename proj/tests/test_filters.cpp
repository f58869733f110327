#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "arffklms/error.hpp"
#include "arffklms/filters.hpp"
#include "oracles.hpp"

using namespace arffklms;

namespace {

struct RandomState {
    FeatureBank bank;
    std::vector<double> alpha;
    std::vector<double> x;
    double y;
};

RandomState random_state(std::mt19937_64& rng, std::size_t d, std::size_t dim) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> phases(d);
    for (auto& b : phases) b = phase(rng);
    FeatureBank bank(oracle::normal_vector(rng, d * dim), phases, dim);
    return {bank, oracle::normal_vector(rng, d), oracle::normal_vector(rng, dim),
            oracle::normal_vector(rng, 1)[0]};
}

}  // namespace

TEST_CASE("arff predict examples") {
    const auto bank = sample_feature_bank({1.0, 8, 2, 3});
    const ArffGklms zero(bank, {0.1, 0.1, 0.1});
    const std::vector<double> x{0.4, -1.2};
    CHECK(zero.predict(x) == 0.0);

    // z = cos(pi/3) = 0.5
    FeatureBank one({std::numbers::pi / 3.0}, {0.0}, 1);
    const ArffGklms f(one, {2.0}, {0.1, 0.1, 0.1});
    const std::vector<double> unit{1.0};
    CHECK(f.predict(unit) == doctest::Approx(1.0).epsilon(1e-15));

    const std::vector<double> bad{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(zero.predict(bad), UsageError);
}

TEST_CASE("arff prediction is periodic in every phase") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        auto s = random_state(rng, 6, 2);
        const ArffGklms f(s.bank, s.alpha, {0.1, 0.1, 0.1});
        FeatureBank shifted = s.bank;
        shifted.phase(static_cast<std::size_t>(t) % 6) += 2.0 * std::numbers::pi;
        const ArffGklms g(shifted, s.alpha, {0.1, 0.1, 0.1});
        CHECK(g.predict(s.x) == doctest::Approx(f.predict(s.x)).epsilon(1e-12));
    }
}

TEST_CASE("arff one step from zero weights") {
    FeatureBank bank({1.0}, {0.0}, 1);
    ArffGklms f(bank, {0.1, 1.0, 1.0});
    const std::vector<double> x{1.0};
    const auto out = f.step(x, 1.0);
    CHECK(out.prediction == 0.0);
    CHECK(out.error == 1.0);
    CHECK(out.model_size == 1);
    CHECK(f.alpha()[0] == doctest::Approx(0.0540302305868139717400936607443).epsilon(1e-14));
    // alpha_m was zero before the step, so frequency and phase stay put
    CHECK(f.bank().omega(0)[0] == 1.0);
    CHECK(f.bank().phase(0) == 0.0);
}

TEST_CASE("arff two steps follow the hand recursion") {
    // hand-rolled recursion with pre-update values on the right-hand side
    const double ea = 0.05, ew = 0.3, eb = 0.2;
    double alpha[2] = {0.0, 0.0};
    double w[2][2] = {{0.7, -0.4}, {1.3, 0.2}};
    double b[2] = {0.5, 2.0};
    const double xs[2][2] = {{0.3, -0.8}, {1.1, 0.4}};
    const double ys[2] = {0.9, -0.35};

    ArffGklms f(FeatureBank({0.7, -0.4, 1.3, 0.2}, {0.5, 2.0}, 2), {0.3, -0.1}, {ea, ew, eb});
    alpha[0] = 0.3;
    alpha[1] = -0.1;

    for (int n = 0; n < 2; ++n) {
        const double* x = xs[n];
        double arg[2], z[2], pred = 0.0;
        for (int m = 0; m < 2; ++m) {
            arg[m] = w[m][0] * x[0] + w[m][1] * x[1] + b[m];
            z[m] = std::cos(arg[m]);
            pred += alpha[m] * z[m];
        }
        const double e = ys[n] - pred;
        double na[2], nw[2][2], nb[2];
        for (int m = 0; m < 2; ++m) {
            na[m] = alpha[m] + ea * e * z[m];
            for (int l = 0; l < 2; ++l) nw[m][l] = w[m][l] - ew * e * alpha[m] * std::sin(arg[m]) * x[l];
            nb[m] = b[m] - eb * e * alpha[m] * std::sin(arg[m]);
        }
        const auto out = f.step(std::span<const double>(x, 2), ys[n]);
        CHECK(out.prediction == doctest::Approx(pred).epsilon(1e-13));
        for (int m = 0; m < 2; ++m) {
            alpha[m] = na[m];
            b[m] = nb[m];
            for (int l = 0; l < 2; ++l) w[m][l] = nw[m][l];
            CHECK(f.alpha()[m] == doctest::Approx(alpha[m]).epsilon(1e-13));
            CHECK(f.bank().phase(m) == doctest::Approx(b[m]).epsilon(1e-13));
            for (int l = 0; l < 2; ++l) CHECK(f.bank().omega(m)[l] == doctest::Approx(w[m][l]).epsilon(1e-13));
        }
    }
}

TEST_CASE("zero error leaves every filter unchanged") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        auto s = random_state(rng, 8, 2);
        ArffGklms arff(s.bank, s.alpha, {0.5, 0.5, 0.5});
        const double y = arff.predict(s.x);
        const auto out = arff.step(s.x, y);
        CHECK(out.error == 0.0);
        CHECK(arff.bank() == s.bank);
        CHECK(std::equal(s.alpha.begin(), s.alpha.end(), arff.alpha().begin()));

        RffGklms rff(s.bank, s.alpha, 0.5);
        CHECK(rff.step(s.x, rff.predict(s.x)).error == 0.0);
        CHECK(std::equal(s.alpha.begin(), s.alpha.end(), rff.alpha().begin()));
    }

    GklmsCs cs(GaussianKernel(1.0), 2, 0.3, 0.5);
    const std::vector<double> x{0.2, -0.1};
    cs.step(x, 1.0);
    const std::vector<double> before(cs.weights().begin(), cs.weights().end());
    const std::vector<double> near{0.25, -0.1};  // coherent with x, so rejected
    const auto out = cs.step(near, cs.predict(near));
    CHECK(out.error == 0.0);
    CHECK(cs.dictionary().size() == 1);
    CHECK(std::equal(before.begin(), before.end(), cs.weights().begin()));
}

TEST_CASE("arff with frozen features is bit-identical to rff") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        const auto bank = sample_feature_bank({0.8, 24, 2, static_cast<std::uint64_t>(trial)});
        const auto alpha0 = oracle::normal_vector(rng, 24, 0.1);
        ArffGklms arff(bank, alpha0, {0.02, 0.0, 0.0});
        RffGklms rff(bank, alpha0, 0.02);
        for (int n = 0; n < 2000; ++n) {
            const auto x = oracle::normal_vector(rng, 2);
            const double y = std::sin(x[0]) * x[1] + 0.1 * oracle::normal_vector(rng, 1)[0];
            const auto a = arff.step(x, y);
            const auto r = rff.step(x, y);
            REQUIRE(a.prediction == r.prediction);
            REQUIRE(a.error == r.error);
        }
        CHECK(std::equal(arff.alpha().begin(), arff.alpha().end(), rff.alpha().begin()));
        CHECK(arff.bank() == bank);
    }
}

TEST_CASE("rff step examples") {
    const auto bank = sample_feature_bank({1.0, 5, 2, 12});
    const std::vector<double> x{0.3, 0.9};
    RffGklms f(bank, 0.25);
    const auto out = f.step(x, 2.0);
    CHECK(out.prediction == 0.0);
    CHECK(out.error == 2.0);
    const auto z = feature_map(bank, x);
    for (std::size_t m = 0; m < 5; ++m) CHECK(f.alpha()[m] == doctest::Approx(0.25 * 2.0 * z[m]));

    RffGklms g(bank, 0.25);
    std::mt19937_64 rng(2);
    for (int n = 0; n < 100; ++n) g.step(oracle::normal_vector(rng, 2), 0.0);
    for (double a : g.alpha()) CHECK(a == 0.0);
    CHECK(g.bank() == bank);
}

TEST_CASE("rff three steps match a scalar LMS recursion") {
    FeatureBank bank({0.4, -1.1, 0.9}, {0.3, 1.7, 4.0}, 1);
    RffGklms f(bank, 0.3);
    const double xs[3] = {0.5, -1.25, 2.0};
    const double ys[3] = {1.0, -0.5, 0.25};
    double w[3] = {0.0, 0.0, 0.0};
    for (int n = 0; n < 3; ++n) {
        double z[3], pred = 0.0;
        for (int m = 0; m < 3; ++m) {
            z[m] = std::cos(bank.omega(m)[0] * xs[n] + bank.phase(m));
            pred += w[m] * z[m];
        }
        const double e = ys[n] - pred;
        for (int m = 0; m < 3; ++m) w[m] += 0.3 * e * z[m];
        const auto out = f.step(std::span<const double>(&xs[n], 1), ys[n]);
        CHECK(std::abs(out.prediction - pred) <= 1e-12);
    }
    for (int m = 0; m < 3; ++m) CHECK(std::abs(f.alpha()[m] - w[m]) <= 1e-12);
}

TEST_CASE("gklms-cs examples") {
    GklmsCs f(GaussianKernel(0.95), 2, 0.2, 0.7);
    const std::vector<double> x{0.5, -0.5};
    const auto first = f.step(x, 3.0);
    CHECK(first.prediction == 0.0);
    CHECK(first.model_size == 1);
    CHECK(f.weights()[0] == doctest::Approx(0.2 * 3.0));
    for (int n = 0; n < 100; ++n) f.step(x, 3.0);
    CHECK(f.dictionary().size() == 1);
    CHECK(f.predict(x) == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("gklms-cs weights track the dictionary and respect coherence") {
    std::mt19937_64 rng(31);
    GklmsCs f(GaussianKernel(0.5), 2, 0.1, 0.6);
    for (int n = 0; n < 3000; ++n) {
        const auto x = oracle::normal_vector(rng, 2);
        const auto out = f.step(x, std::cos(x[0]) - x[1]);
        REQUIRE(f.weights().size() == f.dictionary().size());
        REQUIRE(out.model_size == f.dictionary().size());
    }
    const auto& d = f.dictionary();
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            CHECK(oracle::gaussian_kernel(d.center(i), d.center(j), 0.5) <= 0.6 + 1e-15);
}

TEST_CASE("instantaneous_loss examples") {
    std::mt19937_64 rng(6);
    auto s = random_state(rng, 4, 2);
    const ArffGklms f(s.bank, s.alpha, {0.1, 0.1, 0.1});
    CHECK(f.instantaneous_loss(s.x, f.predict(s.x)) == 0.0);
    const ArffGklms zero(s.bank, {0.1, 0.1, 0.1});
    CHECK(zero.instantaneous_loss(s.x, 1.5) == 2.25);
}

TEST_CASE("update directions are negative half-gradients of the instantaneous loss") {
    std::mt19937_64 rng(2024);
    const std::size_t d = 8, dim = 2;
    const double h = 1e-6;
    for (int t = 0; t < 100; ++t) {
        const auto s = random_state(rng, d, dim);
        const ArffGklms f(s.bank, s.alpha, {1.0, 1.0, 1.0});
        const auto dir = f.descent_directions(s.x, s.y);

        // parameters packed as [alpha | omegas | phases]
        std::vector<double> p = s.alpha;
        p.insert(p.end(), s.bank.omegas().begin(), s.bank.omegas().end());
        p.insert(p.end(), s.bank.phases().begin(), s.bank.phases().end());
        auto loss = [&](const std::vector<double>& q) {
            std::vector<double> a(q.begin(), q.begin() + d);
            std::vector<double> w(q.begin() + d, q.begin() + d + d * dim);
            std::vector<double> b(q.begin() + d + d * dim, q.end());
            const double e = s.y - oracle::rff_output(a, w, b, s.x);
            return e * e;
        };
        std::vector<double> analytic = dir.alpha;
        analytic.insert(analytic.end(), dir.omegas.begin(), dir.omegas.end());
        analytic.insert(analytic.end(), dir.phases.begin(), dir.phases.end());

        double err = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double fd = -0.5 * oracle::central_difference(loss, p, i, h);
            err += (fd - analytic[i]) * (fd - analytic[i]);
            norm += analytic[i] * analytic[i];
        }
        CHECK(std::sqrt(err) <= 1e-5 * std::max(1.0, std::sqrt(norm)));

        // a unit-step update moves the state by exactly these directions
        ArffGklms stepped = f;
        stepped.step(s.x, s.y);
        for (std::size_t m = 0; m < d; ++m) {
            CHECK(stepped.alpha()[m] - s.alpha[m] == doctest::Approx(dir.alpha[m]).epsilon(1e-9).scale(1.0));
            CHECK(stepped.bank().phase(m) - s.bank.phase(m) == doctest::Approx(dir.phases[m]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("filters reject bad samples and report divergence") {
    const auto bank = sample_feature_bank({1.0, 4, 2, 1});
    ArffGklms f(bank, {0.1, 0.1, 0.1});
    const std::vector<double> nan_x{NAN, 0.0}, x{1.0, 2.0};
    CHECK_THROWS_AS(f.step(nan_x, 1.0), StreamError);
    CHECK_THROWS_AS(f.step(x, INFINITY), StreamError);
    const std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(f.step(wrong, 1.0), UsageError);

    RffGklms r(bank, 1e300);
    r.step(x, 0.0);
    try {
        r.step(x, 1e10);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.step() == 1);
    }

    CHECK_THROWS_AS(ArffGklms(bank, {-0.1, 0.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(ArffGklms(bank, {0.1, NAN, 0.0}), ConfigError);
    CHECK_THROWS_AS(GklmsCs(GaussianKernel(1.0), 2, 0.1, 1.0), ConfigError);
    CHECK_THROWS_AS(ArffGklms(bank, std::vector<double>(3, 0.0), {0.1, 0.1, 0.1}), UsageError);
}
