#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jumplab/bns/correlation.hpp"
#include "jumplab/bns/dynamics.hpp"
#include "jumplab/bns/laplace.hpp"
#include "jumplab/bns/model.hpp"
#include "jumplab/bns/simulate.hpp"
#include "test_support.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace jumplab;

namespace {

const SubordinatorSpec kSmallJumps{{1.0, 1.0}, 1.0};
const SubordinatorSpec kLargeJumps{{2.0, 1.0}, 1.0};

BnsParams mixed_params() {
    BnsParams p;
    p.mu = 0.05;
    p.beta = -0.1;
    p.rho = -0.3;
    p.lambda = 1.0;
    p.theta = 0.3;
    p.sigma0_sq = 1.0;
    return p;
}

}  // namespace

TEST_CASE("mean-reversion weight", "[dynamics]") {
    CHECK_THAT(epsilon(0.0, 1.0, 1.0), WithinAbs(-std::expm1(-1.0), 1e-15));
    CHECK(epsilon(1.0, 1.0, 2.0) == 0.0);
    // small-rate limit stays stable through expm1
    CHECK_THAT(epsilon(0.0, 1.0, 1e-8), WithinAbs(1.0, 1e-7));
    CHECK_THROWS_AS(epsilon(2.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(epsilon(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("model parameter and pair validation", "[model]") {
    SECTION("parameter guards") {
        BnsParams p = mixed_params();
        p.rho = 0.1;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = mixed_params();
        p.theta = 1.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = mixed_params();
        p.lambda = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        CHECK_NOTHROW(mixed_params().validate());
    }

    SECTION("subordinator summary quantities") {
        CHECK(kSmallJumps.intensity() == 1.0);
        CHECK(kSmallJumps.unit_variance() == 2.0);
        CHECK(kSmallJumps.mgf_bound() == 0.5);
        CHECK(kLargeJumps.intensity() == 2.0);
        CHECK(kLargeJumps.unit_variance() == 12.0);
        CHECK(kLargeJumps.mgf_bound() == 0.125);
    }

    SECTION("intensity ordering is enforced") {
        CHECK_NOTHROW(validate_subordinator_pair(kSmallJumps, kLargeJumps));
        CHECK_THROWS_AS(validate_subordinator_pair(kSmallJumps, kSmallJumps),
                        std::invalid_argument);
        CHECK_THROWS_AS(validate_subordinator_pair(kLargeJumps, kSmallJumps),
                        std::invalid_argument);
    }
}

TEST_CASE("jump stream sampling", "[model]") {
    SECTION("deterministic, ordered, inside the window") {
        Rng a(Seed{3});
        Rng b(Seed{3});
        const auto ja = sample_jump_stream(kSmallJumps, 2.0, 1.0, 11.0, a);
        const auto jb = sample_jump_stream(kSmallJumps, 2.0, 1.0, 11.0, b);
        REQUIRE(ja.size() == jb.size());
        for (std::size_t i = 0; i < ja.size(); ++i) {
            CHECK(ja[i].time == jb[i].time);
            CHECK(ja[i].size == jb[i].size);
            CHECK(ja[i].time > 1.0);
            CHECK(ja[i].time <= 11.0);
            CHECK(ja[i].size > 0.0);
            if (i > 0) CHECK(ja[i].time > ja[i - 1].time);
        }
    }

    SECTION("arrival count matches the scaled clock rate") {
        Rng rng(Seed{4});
        double total = 0.0;
        const int reps = 200;
        for (int i = 0; i < reps; ++i)
            total += static_cast<double>(sample_jump_stream(kSmallJumps, 2.0, 0.0, 10.0, rng)
                                             .size());
        // lambda * rate * horizon = 20 expected arrivals per stream
        CHECK_THAT(total / reps, WithinAbs(20.0, 1.0));
    }
}

TEST_CASE("path simulation basics", "[simulate-paths]") {
    const BnsParams p = mixed_params();
    const PathGrid grid{0.0, 1.0, 500};

    SECTION("reproducible and well-formed") {
        const auto a = simulate_paths(p, kSmallJumps, kLargeJumps, grid, 3, Seed{5});
        const auto b = simulate_paths(p, kSmallJumps, kLargeJumps, grid, 3, Seed{5});
        REQUIRE(a.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a[i].x == b[i].x);
            CHECK(a[i].sigma_sq == b[i].sigma_sq);
            REQUIRE(a[i].t.size() == grid.steps + 1);
            REQUIRE(a[i].x.size() == grid.steps + 1);
            REQUIRE(a[i].sigma_sq.size() == grid.steps + 1);
            CHECK(a[i].t.front() == 0.0);
            CHECK_THAT(a[i].t.back(), WithinAbs(1.0, 1e-12));
            for (double v : a[i].sigma_sq) CHECK(v > 0.0);
        }
        CHECK(a[0].x != a[1].x);
    }

    SECTION("grid validation") {
        CHECK_THROWS_AS((PathGrid{1.0, 0.5, 100}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((PathGrid{0.0, 1.0, 0}.validate()), std::invalid_argument);
        CHECK_THROWS_AS(simulate_paths(p, kSmallJumps, kLargeJumps, grid, 0, Seed{1}),
                        std::invalid_argument);
    }
}

TEST_CASE("variance closed form on a realization", "[dynamics]") {
    BnsParams p = mixed_params();
    p.lambda = 2.0;
    p.sigma0_sq = 0.04;

    SECTION("pure decay without jumps") {
        const double v = sigma_sq_closed_form({}, {}, p, 0.7);
        CHECK_THAT(v, WithinAbs(std::exp(-1.4) * 0.04, 1e-15));
    }

    SECTION("single small-jump arrival in the classical weighting") {
        BnsParams cl = p;
        cl.theta = 0.0;
        const std::vector<Jump> z{{0.5, 1.2}};
        const double v = sigma_sq_closed_form(z, {}, cl, 1.0);
        CHECK_THAT(v, WithinAbs(std::exp(-2.0) * 0.04 + 1.2 * std::exp(-1.0), 1e-14));
        // before the arrival only the decayed initial variance remains
        CHECK_THAT(sigma_sq_closed_form(z, {}, cl, 0.2),
                   WithinAbs(std::exp(-0.4) * 0.04, 1e-15));
    }

    SECTION("mixed weights") {
        BnsParams mx = p;
        mx.lambda = 1.0;
        mx.theta = 0.25;
        mx.sigma0_sq = 1.0;
        const std::vector<Jump> z{{0.25, 2.0}};
        const std::vector<Jump> zb{{0.5, 3.0}};
        const double expect = std::exp(-1.0) + 0.75 * 2.0 * std::exp(-0.75) +
                              0.25 * 3.0 * std::exp(-0.5);
        CHECK_THAT(sigma_sq_closed_form(z, zb, mx, 1.0), WithinAbs(expect, 1e-14));
    }

    SECTION("negative time is rejected") {
        CHECK_THROWS_AS(sigma_sq_closed_form({}, {}, p, -0.1), std::invalid_argument);
    }
}

TEST_CASE("euler variance tracks the closed form", "[simulate-paths]") {
    const BnsParams p = mixed_params();
    const PathGrid grid{0.0, 1.0, 10000};
    Rng rng(Seed{6});
    const BnsPath path = simulate_path(p, kSmallJumps, kLargeJumps, grid, rng);
    for (std::size_t k : {std::size_t{2500}, std::size_t{5000}, std::size_t{10000}}) {
        const double exact = sigma_sq_closed_form(path.z_jumps, path.zb_jumps, p, path.t[k]);
        CHECK_THAT(path.sigma_sq[k], WithinRel(exact, 1e-3));
    }
}

TEST_CASE("integrated variance on a realization", "[dynamics]") {
    BnsParams p = mixed_params();
    p.theta = 0.25;
    const std::vector<Jump> z{{0.3, 1.0}, {0.7, 0.5}};
    const std::vector<Jump> zb{{0.45, 2.0}};

    SECTION("empty horizon") {
        CHECK(integrated_variance(0.8, z, zb, p, 0.5, 0.5) == 0.0);
    }

    SECTION("no arrivals reduces to the epsilon weight") {
        const double v = integrated_variance(0.8, {}, {}, p, 0.2, 1.0);
        CHECK_THAT(v, WithinAbs(0.8 * epsilon(0.2, 1.0, p.lambda), 1e-15));
    }

    SECTION("matches a trapezoid integral of the closed-form variance") {
        const double t = 0.2;
        const double T = 1.0;
        const double s0 = sigma_sq_closed_form(z, zb, p, t);
        const double direct = integrated_variance(s0, z, zb, p, t, T);
        const std::size_t n = 200000;
        double acc = 0.0;
        double prev = s0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double tau = t + (T - t) * static_cast<double>(i) / n;
            const double cur = sigma_sq_closed_form(z, zb, p, tau);
            acc += 0.5 * (prev + cur) * (T - t) / n;
            prev = cur;
        }
        CHECK_THAT(direct, WithinRel(acc, 1e-3));
    }

    SECTION("reversed horizon is rejected") {
        CHECK_THROWS_AS(integrated_variance(0.8, z, zb, p, 1.0, 0.5), std::invalid_argument);
    }
}

TEST_CASE("correlation formula on a realization", "[correlation]") {
    BnsParams p = mixed_params();
    const std::vector<Jump> z{{0.3, 1.0}, {0.8, 0.5}};
    const std::vector<Jump> zb{{0.6, 2.0}};

    SECTION("identity variance path with no leverage gives the square-root decay") {
        BnsParams flat = p;
        flat.rho = 0.0;
        const IntegratedVariancePath identity = [](double v) { return v; };
        for (auto [s, t] : {std::pair{0.5, 1.0}, std::pair{10.0, 20.0},
                            std::pair{10.0, 80.0}}) {
            const double c = correlation_formula(flat, kSmallJumps, kLargeJumps, s, t, {}, {},
                                                 identity);
            CHECK_THAT(c, WithinAbs(std::sqrt(s / t), 1e-10));
        }
    }

    SECTION("classical weight ignores the large-jump stream entirely") {
        BnsParams cl = p;
        cl.theta = 0.0;
        const double with_zb =
            correlation_formula(cl, kSmallJumps, kLargeJumps, 0.5, 1.0, z, zb);
        const double without_zb =
            correlation_formula(cl, kSmallJumps, kLargeJumps, 0.5, 1.0, z, {});
        CHECK(with_zb == without_zb);
    }

    SECTION("decays as the horizon grows") {
        double prev = 1.0;
        for (double t : {0.6, 1.0, 2.0, 4.0}) {
            const double c = correlation_formula(p, kSmallJumps, kLargeJumps, 0.5, t, z, zb);
            CHECK(c < prev);
            CHECK(c > 0.0);
            prev = c;
        }
    }

    SECTION("convenience overload uses the realization's own variance path") {
        const double a = correlation_formula(p, kSmallJumps, kLargeJumps, 0.5, 1.0, z, zb);
        const double b = correlation_formula(
            p, kSmallJumps, kLargeJumps, 0.5, 1.0, z, zb,
            realized_variance_path(p.sigma0_sq, z, zb, p));
        CHECK(a == b);
    }

    SECTION("ordering guards") {
        CHECK_THROWS_AS(correlation_formula(p, kSmallJumps, kLargeJumps, 1.0, 0.5, z, zb),
                        std::invalid_argument);
        CHECK_THROWS_AS(correlation_formula(p, kSmallJumps, kLargeJumps, 0.0, 0.5, z, zb),
                        std::invalid_argument);
    }
}

TEST_CASE("sampled correlation", "[correlation]") {
    // no leverage, no variance drift in the price, stationary initial
    // variance: the population correlation is exactly sqrt(s/t)
    BnsParams p;
    p.mu = 0.0;
    p.beta = 0.0;
    p.rho = 0.0;
    p.lambda = 1.0;
    p.theta = 0.5;
    p.sigma0_sq = 0.5 * kSmallJumps.intensity() + 0.5 * kLargeJumps.intensity();

    SECTION("deterministic and in range") {
        const double a = correlation_mc(p, kSmallJumps, kLargeJumps, 0.5, 1.0, 200, 50, Seed{7});
        const double b = correlation_mc(p, kSmallJumps, kLargeJumps, 0.5, 1.0, 200, 50, Seed{7});
        const double c = correlation_mc(p, kSmallJumps, kLargeJumps, 0.5, 1.0, 200, 50, Seed{8});
        CHECK(a == b);
        CHECK(a != c);
        CHECK(a >= -1.0);
        CHECK(a <= 1.0);
    }

    SECTION("agrees with the stationary square-root decay") {
        const double est =
            correlation_mc(p, kSmallJumps, kLargeJumps, 0.5, 1.0, 4000, 200, Seed{9});
        CHECK_THAT(est, WithinAbs(std::sqrt(0.5), 0.03));
    }

    SECTION("argument guards") {
        CHECK_THROWS_AS(correlation_mc(p, kSmallJumps, kLargeJumps, 1.0, 0.5, 10, 10, Seed{1}),
                        std::invalid_argument);
        CHECK_THROWS_AS(correlation_mc(p, kSmallJumps, kLargeJumps, 0.5, 1.0, 1, 10, Seed{1}),
                        std::invalid_argument);
    }
}

TEST_CASE("subordinator cumulant", "[laplace]") {
    SECTION("vanishes at zero and matches a hand value") {
        CHECK(cumulant(kSmallJumps, {0.0, 0.0}) == std::complex<double>{0.0, 0.0});
        // at c = 3/8 the square root is exactly 1/2
        const std::complex<double> v = cumulant(kSmallJumps, {0.375, 0.0});
        CHECK_THAT(v.real(), WithinAbs(std::exp(0.5) - 1.0, 1e-12));
        CHECK(v.imag() == 0.0);
    }

    SECTION("domain boundary") {
        CHECK_NOTHROW(cumulant(kSmallJumps, {0.49, 0.0}));
        CHECK_NOTHROW(cumulant(kSmallJumps, {0.5, 0.0}));
        CHECK_THROWS_AS(cumulant(kSmallJumps, {0.6, 0.0}), CumulantDomainError);
    }

    SECTION("matches a monte carlo moment generating function") {
        const double c = -0.8;
        Rng rng(Seed{10});
        std::vector<double> vals(200000);
        for (auto& v : vals) {
            const std::uint64_t n_jumps = rng.poisson(kSmallJumps.rate);
            double zsum = 0.0;
            for (std::uint64_t j = 0; j < n_jumps; ++j)
                zsum += ig_draw(kSmallJumps.params, rng);
            v = std::exp(c * zsum);
        }
        const double mean = jltest::mean_of(vals);
        const double se_log = jltest::se_of(vals) / mean;
        CHECK_THAT(std::log(mean),
                   WithinAbs(cumulant(kSmallJumps, {c, 0.0}).real(), 3.0 * se_log));
    }

    SECTION("effective mixture reduces to the pure parts at the ends") {
        BnsParams p = mixed_params();
        const std::complex<double> c{0.1, 0.1};
        p.theta = 0.0;
        CHECK(cumulant_effective(p, kSmallJumps, kLargeJumps, c) == cumulant(kSmallJumps, c));
        p.theta = 1.0;
        CHECK(cumulant_effective(p, kSmallJumps, kLargeJumps, c) == cumulant(kLargeJumps, c));
        p.theta = 0.5;
        CHECK(cumulant_effective(p, kSmallJumps, kLargeJumps, c) ==
              cumulant(kSmallJumps, 0.5 * c) + cumulant(kLargeJumps, 0.5 * c));
    }

    SECTION("effective domain bound") {
        BnsParams p = mixed_params();
        p.theta = 0.5;
        CHECK(theta_hat_effective(p, kSmallJumps, kLargeJumps) == 0.25);
        p.theta = 0.0;
        CHECK(theta_hat_effective(p, kSmallJumps, kLargeJumps) == 0.5);
        p.theta = 1.0;
        CHECK(theta_hat_effective(p, kSmallJumps, kLargeJumps) == 0.125);
    }
}

TEST_CASE("transform strip", "[laplace]") {
    SECTION("symmetric closed form without drift or leverage") {
        BnsParams p;
        p.beta = 0.0;
        p.rho = 0.0;
        p.lambda = 1.0;
        p.theta = 0.5;
        p.sigma0_sq = 0.04;
        const TransformStrip strip = strip_bounds(p, kSmallJumps, kLargeJumps, 0.0, 1.0);
        // the binding time is s = t where epsilon peaks
        const double root = std::sqrt(2.0 * 0.25 / -std::expm1(-1.0));
        CHECK_THAT(strip.theta_plus, WithinAbs(root, 1e-6));
        CHECK_THAT(strip.theta_minus, WithinAbs(-root, 1e-6));
        CHECK(strip.contains(0.0));
        CHECK_FALSE(strip.contains(root + 0.1));
    }

    SECTION("always brackets zero") {
        for (double rho : {0.0, -0.2, -0.5}) {
            BnsParams p = mixed_params();
            p.rho = rho;
            const TransformStrip strip = strip_bounds(p, kSmallJumps, kLargeJumps, 0.0, 2.0);
            CHECK(strip.theta_minus < 0.0);
            CHECK(strip.theta_plus > 0.0);
        }
    }

    SECTION("degenerate horizon is rejected") {
        CHECK_THROWS_AS(strip_bounds(mixed_params(), kSmallJumps, kLargeJumps, 1.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("log-price laplace transform", "[laplace]") {
    BnsParams p;
    p.mu = 0.05;
    p.beta = -0.1;
    p.rho = -0.3;
    p.lambda = 1.0;
    p.theta = 0.5;
    p.sigma0_sq = 1.5;
    const TransformState state{0.0, p.sigma0_sq};

    SECTION("unit value at the origin") {
        const std::complex<double> v =
            laplace_transform(p, kSmallJumps, kLargeJumps, state, 0.0, 1.0, {0.0, 0.0});
        CHECK(v.real() == 1.0);
        CHECK(v.imag() == 0.0);
    }

    SECTION("characteristic function is bounded by one") {
        for (double y : {-2.0, -1.0, -0.3, 0.3, 1.0, 2.0}) {
            const std::complex<double> v =
                laplace_transform(p, kSmallJumps, kLargeJumps, state, 0.0, 1.0, {0.0, y});
            CHECK(std::abs(v) <= 1.0 + 1e-12);
        }
    }

    SECTION("arguments outside the strip leave the cumulant domain") {
        const TransformStrip strip = strip_bounds(p, kSmallJumps, kLargeJumps, 0.0, 1.0);
        CHECK_THROWS_AS(laplace_transform(p, kSmallJumps, kLargeJumps, state, 0.0, 1.0,
                                          {strip.theta_plus * 1.5, 0.0}),
                        CumulantDomainError);
    }

    SECTION("matches the sampled transform at an interior argument") {
        const TransformStrip strip = strip_bounds(p, kSmallJumps, kLargeJumps, 0.0, 1.0);
        const double zr = 0.5 * strip.theta_plus;
        const double exact =
            laplace_transform(p, kSmallJumps, kLargeJumps, state, 0.0, 1.0, {zr, 0.0}).real();

        const auto paths = simulate_paths(p, kSmallJumps, kLargeJumps,
                                          PathGrid{0.0, 1.0, 500}, 20000, Seed{11});
        std::vector<double> vals;
        vals.reserve(paths.size());
        for (const auto& path : paths) vals.push_back(std::exp(zr * path.x.back()));
        const double mc = jltest::mean_of(vals);
        const double band = 3.0 * jltest::se_of(vals) + 5e-3 * exact;  // noise + euler bias
        CHECK_THAT(mc, WithinAbs(exact, band));
    }

    SECTION("derivative at the origin is the mean log price") {
        const double h = 1e-5;
        const double up =
            laplace_transform(p, kSmallJumps, kLargeJumps, state, 0.0, 1.0, {h, 0.0}).real();
        const double dn =
            laplace_transform(p, kSmallJumps, kLargeJumps, state, 0.0, 1.0, {-h, 0.0}).real();
        const double deriv = (up - dn) / (2.0 * h);

        const auto paths = simulate_paths(p, kSmallJumps, kLargeJumps,
                                          PathGrid{0.0, 1.0, 500}, 20000, Seed{12});
        std::vector<double> xs;
        xs.reserve(paths.size());
        for (const auto& path : paths) xs.push_back(path.x.back());
        const double band = 3.0 * jltest::se_of(xs) + 5e-3 * std::abs(deriv);
        CHECK_THAT(jltest::mean_of(xs), WithinAbs(deriv, band));
    }

    SECTION("state validation") {
        CHECK_THROWS_AS(laplace_transform(p, kSmallJumps, kLargeJumps, {0.0, -1.0}, 0.0, 1.0,
                                          {0.0, 0.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(laplace_transform(p, kSmallJumps, kLargeJumps, state, 1.0, 1.0,
                                          {0.0, 0.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("classical reduction against an exact sampler", "[simulate-paths]") {
    // theta = 0: only the small-jump subordinator feeds the dynamics, and the
    // model admits an event-driven exact simulation to compare moments with
    BnsParams p;
    p.mu = 0.03;
    p.beta = -0.2;
    p.rho = -0.4;
    p.lambda = 1.5;
    p.theta = 0.0;
    p.sigma0_sq = 0.8;

    const std::size_t n = 6000;
    const auto paths =
        simulate_paths(p, kSmallJumps, kLargeJumps, PathGrid{0.0, 1.0, 600}, n, Seed{13});
    std::vector<double> euler;
    euler.reserve(n);
    for (const auto& path : paths) euler.push_back(path.x.back());

    Rng rng(Seed{14});
    std::vector<double> exact;
    exact.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        exact.push_back(jltest::classical_terminal(p, kSmallJumps, 1.0, rng).x);

    const double mean_band =
        3.0 * std::sqrt(jltest::se_of(euler) * jltest::se_of(euler) +
                        jltest::se_of(exact) * jltest::se_of(exact));
    CHECK_THAT(jltest::mean_of(euler), WithinAbs(jltest::mean_of(exact), mean_band));

    // variances compared on a generous combined band: Var(s^2) ~ 2 s^4 / n
    // for light tails, inflated 3x for the jump component
    const double ve = jltest::variance_of(euler);
    const double vx = jltest::variance_of(exact);
    const double var_band = 9.0 * std::sqrt(2.0 / n) * std::max(ve, vx);
    CHECK_THAT(ve, WithinAbs(vx, var_band));
}
