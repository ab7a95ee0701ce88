#include <doctest.h>

#include <cmath>

#include "dwlab/coeffs.hpp"
#include "dwlab/nonlinearity.hpp"

using namespace dwlab;

TEST_CASE("b(t) evaluates the power law") {
    CHECK(b_of_t(DampingModel(0.0, 1.0), 5.0) == doctest::Approx(1.0));
    CHECK(b_of_t(DampingModel(-1.0, 1.0), 3.0) == doctest::Approx(4.0));
    CHECK(b_of_t(DampingModel(0.5, 2.0), 3.0) == doctest::Approx(1.0)); // 2 * 4^{-1/2}
    CHECK_THROWS_AS(b_of_t(DampingModel(0.0, 1.0), -0.1), ValidationError);
}

TEST_CASE("B(t) closed forms and the quadrature oracle agree") {
    CHECK(B_of_t(DampingModel(0.0, 1.0), 7.0) == doctest::Approx(7.0));
    CHECK(B_of_t(DampingModel(-1.0, 1.0), std::exp(1.0) - 1.0) == doctest::Approx(1.0));
    CHECK(B_of_t(DampingModel(0.5, 1.0), 3.0) == doctest::Approx(14.0 / 3.0).epsilon(1e-14));

    for (double beta : {-1.0, -0.5, 0.0, 0.3, 0.5, 0.9}) {
        const DampingModel m(beta, 1.7);
        for (double t : {0.5, 2.0, 9.0}) {
            const double by_quadrature = quadrature::adaptive_simpson(
                [&](double tau) { return 1.0 / b_of_t(m, tau); }, 0.0, t, 1e-12);
            CHECK(B_of_t(m, t) == doctest::Approx(by_quadrature).epsilon(1e-10));
        }
    }
}

TEST_CASE("B is strictly increasing in t") {
    for (double beta : {-1.0, -0.4, 0.0, 0.6}) {
        const DampingModel m(beta, 0.8);
        double prev = -1.0;
        for (double t = 0.0; t <= 20.0; t += 0.25) {
            const double B = B_of_t(m, t);
            CHECK(B > prev);
            prev = B;
        }
    }
}

TEST_CASE("t(s) inverts the clock; bisection oracle confirms the closed form") {
    CHECK(t_of_s(DampingModel(0.0, 1.0), std::log(8.0)) == doctest::Approx(7.0));
    CHECK(t_of_s(DampingModel(-1.0, 1.0), 0.0) == doctest::Approx(0.0));
    {
        const DampingModel m(0.5, 1.0);
        for (double s : {0.3, 1.0, 2.5}) {
            const double expect = std::pow(1.5 * (std::exp(s) - 1.0) + 1.0, 2.0 / 3.0) - 1.0;
            CHECK(t_of_s(m, s) == doctest::Approx(expect).epsilon(1e-13));
            const double by_bisection = quadrature::bisect(
                [&](double t) { return B_of_t(m, t) + 1.0 - std::exp(s); }, 0.0, 1e4, 1e-13);
            CHECK(t_of_s(m, s) == doctest::Approx(by_bisection).epsilon(1e-9));
        }
    }
}

TEST_CASE("round trip B(t(s)) + 1 = e^s to 1e-10 relative on s in [0, 12]") {
    for (double beta : {-0.5, 0.0, 0.5, 0.9}) {
        const DampingModel m(beta, 1.0);
        for (double s = 0.0; s <= 12.0; s += 0.25)
            CHECK(std::abs(B_of_t(m, t_of_s(m, s)) + 1.0 - std::exp(s)) <= 1e-10 * std::exp(s));
    }
}

TEST_CASE("chain rule for b(t(s)) holds discretely at second order") {
    const DampingModel m(0.5, 1.3);
    const double s0 = 1.7;
    auto residual = [&](double ds) {
        const double num = (b_of_t(m, t_of_s(m, s0 + ds)) - b_of_t(m, t_of_s(m, s0 - ds))) / (2.0 * ds);
        const double t = t_of_s(m, s0);
        return std::abs(num - db_dt(m, t) * b_of_t(m, t) * std::exp(s0));
    };
    const double r1 = residual(1e-2), r2 = residual(5e-3);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("scaled weights: constant damping, power-law decay, beta = -1 underflow") {
    {
        const ScaledWeights w = scaled_weights(DampingModel(0.0, 1.0), 2.0);
        CHECK(w.eps == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
        CHECK(w.drag == 0.0);
        CHECK(!w.underflow);
    }
    {
        // mu (1+beta) = 1 makes the decay law exact for every s
        const double beta = 0.5;
        const DampingModel m(beta, 1.0 / (1.0 + beta));
        const double rate = (1.0 - beta) / (1.0 + beta);
        double lo = 1e300, hi = 0.0;
        std::vector<double> xs, ys;
        for (double s = 2.0; s <= 10.0; s += 0.25) {
            const double scaled = scaled_weights(m, s).eps * std::exp(rate * s);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
            xs.push_back(s);
            ys.push_back(std::log(scaled_weights(m, s).eps));
        }
        CHECK(hi / lo == doctest::Approx(1.0).epsilon(1e-12));
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
        mx /= xs.size(); my /= ys.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        CHECK(std::abs(sxy / sxx + rate) < 1e-3);
    }
    {
        // generic mu carries an O(e^{-s}) bias in the fitted slope
        const DampingModel m(0.5, 1.0);
        std::vector<double> xs, ys;
        for (double s = 2.0; s <= 10.0; s += 0.25) {
            xs.push_back(s);
            ys.push_back(std::log(scaled_weights(m, s).eps));
        }
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
        mx /= xs.size(); my /= ys.size();
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        CHECK(std::abs(sxy / sxx + 1.0 / 3.0) < 5e-3);
    }
    {
        const ScaledWeights w = scaled_weights(DampingModel(-1.0, 1.0), 3.0);
        CHECK(w.underflow);
        CHECK(w.eps < 1e-15);
        const double exact = std::exp(-3.0 - 2.0 * (std::exp(3.0) - 1.0));
        CHECK(w.eps == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("lambda0 drops terms with zero amplitude and caps beta = -1") {
    PerturbationModel both;
    both.c_amp = {1.0};
    both.gamma = 1.0;
    both.d_amp = 1.0;
    both.nu = 2.0;
    CHECK(rate_lambda0(DampingModel(0.0, 1.0), both) == doctest::Approx(0.5));

    PerturbationModel none;
    none.c_amp = {0.0};
    CHECK(rate_lambda0(DampingModel(0.0, 1.0), none) == doctest::Approx(1.0));
    CHECK(rate_lambda0(DampingModel(-1.0, 1.0), both) == doctest::Approx(kRateCap));
}

TEST_CASE("lambda1 covers both dimension branches and the beta = -1 convention") {
    CHECK(rate_lambda1(2, NonlinearityModel::power(2, 1.0, 3.0, true), 0.0) == doctest::Approx(1.0));
    CHECK(rate_lambda1(1, NonlinearityModel::monomials({{1.0, 4.0, 0, 0, true}}), 0.0) ==
          doctest::Approx(0.5));
    CHECK(rate_lambda1(1, NonlinearityModel::monomials({{1.0, 2.0, 0, 1, true}}), -1.0) ==
          doctest::Approx(kRateCap));
    CHECK(rate_lambda1(1, NonlinearityModel::monomials({{1.0, 2.0, 0, 1, true}}), 0.0) ==
          doctest::Approx(1.0)); // (2 + 3 - 3)/2
    CHECK(rate_lambda1(1, NonlinearityModel::none(1), 0.0) == doctest::Approx(kRateCap));
}

TEST_CASE("lambda assembles the minimum and the predicted exponent") {
    {
        const RateSet r = rate_lambda(1, 1.0, 0.01, 1.0, kRateCap);
        CHECK(r.lambda == doctest::Approx(0.24));
        CHECK(r.exponent == doctest::Approx(0.49));
    }
    {
        const RateSet r = rate_lambda(2, 3.0, 0.02, 1.0 / 3.0, 1.0);
        CHECK(r.lambda == doctest::Approx(1.0 / 3.0 - 0.02));
        CHECK(r.exponent == doctest::Approx(0.5 + 1.0 / 3.0 - 0.02));
    }
    {
        // linear case with m/2 - n/4 = 1/4 binding
        const RateSet r = rate_lambda(1, 1.0, 1e-9, kRateCap, kRateCap);
        CHECK(r.lambda + 1e-9 == doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(rate_lambda(1, 2.0, 0.01, 1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(rate_lambda(2, 1.5, 0.01, 1.0, 1.0), ValidationError);
}

TEST_CASE("lambda is nonincreasing in beta for the pure linear case") {
    double prev = 1e300;
    for (double beta = -0.9; beta < 0.95; beta += 0.05) {
        PerturbationModel none;
        none.c_amp = {0.0};
        const double l0 = rate_lambda0(DampingModel(beta, 1.0), none);
        const RateSet r = rate_lambda(1, 1.0, 0.01, l0, kRateCap);
        CHECK(r.lambda <= prev + 1e-12);
        prev = r.lambda;
    }
}
