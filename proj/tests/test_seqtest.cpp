#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jumplab/seqtest/boundary.hpp"
#include "jumplab/seqtest/coefficients.hpp"
#include "jumplab/seqtest/detect.hpp"
#include "jumplab/seqtest/envelopes.hpp"
#include "jumplab/seqtest/simulate.hpp"
#include "jumplab/seqtest/tilt.hpp"
#include "test_support.hpp"

using Catch::Matchers::WithinAbs;
using namespace jumplab;

namespace {

// High-precision reference values for the unit-mean, unit-scale base density,
// computed independently with 30-digit adaptive quadrature.
constexpr double kTruncatedMean = 0.87021744042030525;   // int (1 ^ x) x nu
constexpr double kTailMean = 0.66810200122317061;        // int_{x>1} x nu
constexpr double kLogMean = 0.60935883436294934;         // int log(1+x) nu
constexpr double kGammaSquared = 0.07609250373762981;    // drift, squared-log reading
constexpr double kGammaTwoLog = 0.48003501576653315;     // drift, doubled-log reading
constexpr double kBoundedJump = 0.34832760183271241;     // int y/(1+|y|) K
constexpr double kEnvelopeB = 1.12090905841421621;       // 2(C+gamma)/beta^2 at a=1

const InverseGaussianParams kUnitNu{1.0, 1.0};

}  // namespace

TEST_CASE("jump-measure integrals", "[coefficients]") {
    SECTION("total mass equals the tilt") {
        auto one = [](double) { return 1.0; };
        CHECK_THAT(k_integral(one, 1.0, kUnitNu), WithinAbs(1.0, 1e-8));
        CHECK_THAT(k_integral(one, 0.5, kUnitNu), WithinAbs(0.5, 1e-8));
        CHECK(k_integral(one, 0.0, kUnitNu) == 0.0);
    }

    SECTION("mean of the pushforward") {
        const double v = k_integral([](double y) { return y; }, 1.0, kUnitNu);
        CHECK_THAT(v, WithinAbs(kLogMean, 1e-7));
    }

    SECTION("negative tilt is rejected") {
        CHECK_THROWS_AS(k_integral([](double) { return 1.0; }, -1.0, kUnitNu),
                        std::invalid_argument);
    }
}

TEST_CASE("generator coefficients against quadrature references", "[coefficients]") {
    const JumpHypothesis hyp{1.0, kUnitNu, 1.0};
    const GeneratorCoefficients c = generator_coeffs(hyp);

    SECTION("unit-tilt values") {
        CHECK_THAT(c.beta, WithinAbs(-kTruncatedMean, 1e-7));
        CHECK_THAT(c.m, WithinAbs(kTailMean, 1e-7));
        CHECK_THAT(c.gamma, WithinAbs(kGammaSquared, 1e-7));
        CHECK_THAT(c.C, WithinAbs(kBoundedJump, 1e-7));
        CHECK(c.M == 1.0);
        CHECK_THAT(c.B, WithinAbs(kEnvelopeB, 1e-6));
    }

    SECTION("doubled-log drift variant changes gamma only") {
        const GeneratorCoefficients c2 = generator_coeffs(hyp, GammaVariant::two_log1p);
        CHECK_THAT(c2.gamma, WithinAbs(kGammaTwoLog, 1e-7));
        CHECK(c2.beta == c.beta);
        CHECK(c2.m == c.m);
        CHECK(c2.C == c.C);
    }

    SECTION("diffusion scale divides beta and nothing else") {
        const GeneratorCoefficients cs = generator_coeffs({1.0, kUnitNu, 2.0});
        CHECK_THAT(cs.beta, WithinAbs(-kTruncatedMean / 2.0, 1e-7));
        CHECK_THAT(cs.m, WithinAbs(c.m, 1e-12));
        CHECK_THAT(cs.C, WithinAbs(c.C, 1e-12));
        CHECK(cs.M == c.M);
    }

    SECTION("linear dependence on the tilt") {
        const GeneratorCoefficients cd = generator_coeffs({2.0, kUnitNu, 1.0});
        CHECK_THAT(cd.beta, WithinAbs(2.0 * c.beta, 1e-7));
        CHECK_THAT(cd.m, WithinAbs(2.0 * c.m, 1e-7));
        CHECK_THAT(cd.C, WithinAbs(2.0 * c.C, 1e-7));
        CHECK(cd.M == 2.0);
        // the small-jump integral inside gamma scales linearly too
        const double term1 = c.gamma - c.m + 0.5 * c.beta * c.beta;
        const double term2 = cd.gamma - cd.m + 0.5 * cd.beta * cd.beta;
        CHECK_THAT(term2, WithinAbs(2.0 * term1, 1e-7));
    }

    SECTION("finite and well-signed across a parameter grid") {
        for (double a : {0.5, 1.0, 2.0}) {
            for (double sigma : {0.5, 1.0}) {
                for (const auto& nu :
                     {InverseGaussianParams{1.0, 1.0}, InverseGaussianParams{2.0, 1.0}}) {
                    const GeneratorCoefficients g = generator_coeffs({a, nu, sigma});
                    CHECK(std::isfinite(g.beta));
                    CHECK(std::isfinite(g.gamma));
                    CHECK(std::isfinite(g.B));
                    CHECK(g.beta < 0.0);
                    CHECK(g.m > 0.0);
                    CHECK(g.M == a);
                }
            }
        }
    }

    SECTION("null tilt is rejected") {
        CHECK_THROWS_AS(generator_coeffs({0.0, kUnitNu, 1.0}), std::invalid_argument);
    }
}

TEST_CASE("envelope boundary values and monotonicity", "[envelopes]") {
    const GeneratorCoefficients real = generator_coeffs({1.0, kUnitNu, 1.0});
    GeneratorCoefficients synthetic;
    synthetic.beta = -2.0;
    synthetic.M = 0.05;
    synthetic.B = 0.7;

    SECTION("f and g pin 1 at the left edge and 0 at the right") {
        for (const auto& c : {real, synthetic}) {
            for (const auto& rule : {DecisionRule{-1.0, 1.0, 0.1},
                                     DecisionRule{-0.5, 2.0, 0.05}}) {
                CHECK_THAT(super_solution_f(rule.l, rule, c), WithinAbs(1.0, 1e-12));
                CHECK_THAT(super_solution_f(rule.r, rule, c), WithinAbs(0.0, 1e-12));
                CHECK_THAT(sub_solution_g(rule.l, rule, c), WithinAbs(1.0, 1e-12));
                CHECK_THAT(sub_solution_g(rule.r, rule, c), WithinAbs(0.0, 1e-12));
            }
        }
    }

    SECTION("hand-computed interior values") {
        GeneratorCoefficients c;
        c.beta = -1.0;
        c.M = 1.0;
        c.B = 1.0;
        const DecisionRule rule{-1.0, 1.0, 0.1};
        // (e^2 - 1) / (e^2 - e^{-2})
        CHECK_THAT(super_solution_f(0.0, rule, c),
                   WithinAbs(0.88079707797788244, 1e-12));
        // e * sinh(sqrt(3)) / sinh(2 sqrt(3))
        CHECK_THAT(sub_solution_g(0.0, rule, c),
                   WithinAbs(0.46632520223840163, 1e-12));
    }

    SECTION("degenerate B gives the linear profile") {
        GeneratorCoefficients c;
        c.B = 0.0;
        CHECK(super_solution_f(0.0, DecisionRule{-1.0, 1.0, 0.1}, c) == 0.5);
    }

    SECTION("strictly decreasing across the decision interval") {
        const DecisionRule rule{-1.0, 1.5, 0.1};
        double prev_f = super_solution_f(rule.l, rule, real);
        double prev_g = sub_solution_g(rule.l, rule, real);
        for (int i = 1; i <= 100; ++i) {
            const double x = rule.l + (rule.r - rule.l) * i / 100.0;
            const double fx = super_solution_f(x, rule, real);
            const double gx = sub_solution_g(x, rule, real);
            CHECK(fx < prev_f);
            CHECK(gx < prev_g);
            prev_f = fx;
            prev_g = gx;
        }
    }

    SECTION("domain and degeneracy guards") {
        const DecisionRule rule{-1.0, 1.0, 0.1};
        CHECK_THROWS_AS(super_solution_f(1.5, rule, real), std::invalid_argument);
        CHECK_THROWS_AS(sub_solution_g(-2.0, rule, real), std::invalid_argument);
        GeneratorCoefficients flat;
        flat.beta = 0.0;
        CHECK_THROWS_AS(sub_solution_g(0.0, rule, flat), std::invalid_argument);
    }
}

TEST_CASE("right-boundary solve", "[boundary]") {
    SECTION("closed-form f boundary when the g equation has no root") {
        GeneratorCoefficients c;
        c.beta = -1.0;
        c.M = 1.0;
        c.B = 1.0;  // g supremum e^{1 - sqrt(3)} < 0.9: unreachable
        const BoundarySolution sol = solve_right_boundary(0.1, -1.0, c, false);
        CHECK_THAT(sol.r_f, WithinAbs(1.08635108691541028, 1e-9));
        CHECK_FALSE(sol.g_root_found);
        CHECK(sol.r_g == sol.r_f);
        CHECK(sol.r == sol.r_f);
        CHECK_THROWS_AS(solve_right_boundary(0.1, -1.0, c, true), BoundarySolveError);
    }

    SECTION("both equations solved when the g root exists") {
        GeneratorCoefficients c;
        c.beta = -2.0;
        c.M = 0.05;
        c.B = 1.0;  // g supremum e^{1 - sqrt(1.1)/2} > 0.9
        const BoundarySolution sol = solve_right_boundary(0.1, -1.0, c);
        REQUIRE(sol.g_root_found);
        CHECK_THAT(super_solution_f(0.0, DecisionRule{-1.0, sol.r_f, 0.1}, c),
                   WithinAbs(0.9, 1e-9));
        CHECK_THAT(sub_solution_g(0.0, DecisionRule{-1.0, sol.r_g, 0.1}, c),
                   WithinAbs(0.9, 1e-9));
        CHECK(sol.r == 0.5 * (sol.r_f + sol.r_g));
    }

    SECTION("linear limit of the f boundary") {
        GeneratorCoefficients c;
        c.beta = -1.0;
        c.M = 1.0;
        c.B = 0.0;
        const BoundarySolution sol = solve_right_boundary(0.1, -1.0, c, false);
        CHECK_THAT(sol.r_f, WithinAbs(9.0, 1e-12));
    }

    SECTION("negative B admits no boundary") {
        GeneratorCoefficients c;
        c.beta = -1.0;
        c.M = 1.0;
        c.B = -0.5;
        CHECK_THROWS_AS(solve_right_boundary(0.1, -1.0, c, false), BoundarySolveError);
    }

    SECTION("parameter validation") {
        GeneratorCoefficients c;
        c.beta = -1.0;
        c.B = 1.0;
        CHECK_THROWS_AS(solve_right_boundary(0.0, -1.0, c), std::invalid_argument);
        CHECK_THROWS_AS(solve_right_boundary(1.0, -1.0, c), std::invalid_argument);
        CHECK_THROWS_AS(solve_right_boundary(0.1, 0.0, c), std::invalid_argument);
    }
}

TEST_CASE("log-likelihood path simulation", "[simulate]") {
    const JumpHypothesis hyp{1.0, kUnitNu, 1.0};
    const GeneratorCoefficients c = generator_coeffs(hyp);
    const DecisionRule rule{-1.0, 1.0, 0.1};
    const SimControls ctl{5.0, 1e-3};

    SECTION("deterministic given the seed, tallies sum to the path count") {
        std::vector<double> ua, ub;
        const ExitResult a = simulate_loglikelihood(c, hyp, rule, 50, ctl, Seed{4}, &ua);
        const ExitResult b = simulate_loglikelihood(c, hyp, rule, 50, ctl, Seed{4}, &ub);
        CHECK(a.exits_right == b.exits_right);
        CHECK(a.exits_left == b.exits_left);
        CHECK(a.no_exit == b.no_exit);
        CHECK(ua == ub);
        CHECK(ua.size() == 50);
        CHECK(a.exits_right + a.exits_left + a.no_exit == a.n_sims);
        CHECK(a.n_sims == 50);

        std::vector<double> uc;
        simulate_loglikelihood(c, hyp, rule, 50, ctl, Seed{5}, &uc);
        CHECK(ua != uc);
    }

    SECTION("an unreachable right boundary is never crossed") {
        const ExitResult r =
            simulate_loglikelihood(c, hyp, DecisionRule{-1.0, 1e9, 0.1}, 100,
                                   SimControls{1.0, 1e-2}, Seed{6});
        CHECK(r.exits_right == 0);
    }

    SECTION("a strongly negative drift forces left exits") {
        GeneratorCoefficients down;
        down.beta = -0.1;
        down.gamma = -100.0;
        down.M = 0.0;  // no jumps
        const ExitResult r =
            simulate_loglikelihood(down, hyp, DecisionRule{-0.5, 0.5, 0.1}, 64,
                                   SimControls{1.0, 1e-3}, Seed{7});
        CHECK(r.exits_left == 64);
    }

    SECTION("mean terminal level reproduces the jump drift") {
        // With zero drift and vanishing diffusion, u(1) is minus the sum of
        // log(1+x) marks of a unit-rate compound Poisson clock, so its mean
        // is minus the pushforward mean.
        GeneratorCoefficients pure_jump;
        pure_jump.beta = 0.0;
        pure_jump.gamma = 0.0;
        pure_jump.M = 1.0;
        std::vector<double> terminal;
        simulate_loglikelihood(pure_jump, hyp, DecisionRule{-1e9, 1e9, 0.1}, 100000,
                               SimControls{1.0, 1e-2}, Seed{8}, &terminal);
        const double se = jltest::se_of(terminal);
        CHECK_THAT(jltest::mean_of(terminal), WithinAbs(-kLogMean, 3.0 * se));
    }

    SECTION("control validation") {
        CHECK_THROWS_AS(simulate_loglikelihood(c, hyp, rule, 0, ctl, Seed{1}),
                        std::invalid_argument);
        CHECK_THROWS_AS(simulate_loglikelihood(c, hyp, rule, 1, SimControls{1.0, 0.0}, Seed{1}),
                        std::invalid_argument);
    }
}

TEST_CASE("tilt estimation", "[tilt]") {
    SECTION("closed-form solutions of the moment equation") {
        const TiltFit null_fit = fit_tilt_a({0.5, 1.5}, kUnitNu);
        CHECK(null_fit.a == 0.0);
        CHECK_FALSE(null_fit.capped);

        // sample mean 1.5 against moments (1, 2): a = 0.5 / 0.5
        const TiltFit unit = fit_tilt_a({1.0, 2.0}, kUnitNu);
        CHECK_THAT(unit.a, WithinAbs(1.0, 1e-15));
        CHECK_FALSE(unit.capped);
    }

    SECTION("pole and cap handling") {
        const TiltFit at_pole = fit_tilt_a({2.0, 2.0}, kUnitNu);
        CHECK(at_pole.a == 50.0);
        CHECK(at_pole.capped);

        // mean 1.99 solves to a = 99, beyond the default cap
        const TiltFit near_pole = fit_tilt_a({1.99, 1.99}, kUnitNu);
        CHECK(near_pole.a == 50.0);
        CHECK(near_pole.capped);

        const TiltFit low_cap = fit_tilt_a({1.0, 2.0}, kUnitNu, 0.5);
        CHECK(low_cap.a == 0.5);
        CHECK(low_cap.capped);
    }

    SECTION("the second moment used by the fit matches quadrature") {
        const double m2 =
            integrate_positive([](double x) { return x * x * ig_pdf(x, kUnitNu); });
        CHECK_THAT(m2, WithinAbs(kUnitNu.second_moment(), 1e-7));
        const InverseGaussianParams wide{2.0, 1.0};
        const double m2w =
            integrate_positive([&](double x) { return x * x * ig_pdf(x, wide); });
        CHECK_THAT(m2w, WithinAbs(wide.second_moment(), 1e-5));
    }

    SECTION("recovers the tilt from an exactly tilted sample") {
        const auto draws = jltest::tilted_ig_sample(kUnitNu, 1.0, 10000, Seed{77});
        const TiltFit fit = fit_tilt_a(draws, kUnitNu);
        CHECK_THAT(fit.a, WithinAbs(1.0, 0.2));
        CHECK_FALSE(fit.capped);
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(fit_tilt_a({}, kUnitNu), std::invalid_argument);
        CHECK_THROWS_AS(fit_tilt_a({1.0, -1.0}, kUnitNu), std::invalid_argument);
        CHECK_THROWS_AS(fit_tilt_a({1.0, 2.0}, kUnitNu, 0.0), std::invalid_argument);
    }
}

namespace {

// 1 + n_changes prices from 100, each percent change taken from the cycle.
std::vector<double> prices_from_cycle(const std::vector<double>& pct_cycle,
                                      std::size_t n_changes) {
    std::vector<double> prices{100.0};
    for (std::size_t i = 0; i < n_changes; ++i)
        prices.push_back(prices.back() * (1.0 + pct_cycle[i % pct_cycle.size()] / 100.0));
    return prices;
}

// Same decision and counters, numeric fields equal to rounding. Rescaling the
// prices perturbs the percent changes by an ulp, so the downstream numbers
// match only to ~1e-12 relative.
void check_records_close(const DetectionRecord& a, const DetectionRecord& b) {
    CHECK(a.period_start_index == b.period_start_index);
    CHECK_THAT(a.a_hat, Catch::Matchers::WithinRel(b.a_hat, 1e-9));
    CHECK_THAT(a.sigma, Catch::Matchers::WithinRel(b.sigma, 1e-9));
    REQUIRE(a.coeffs.has_value() == b.coeffs.has_value());
    if (a.coeffs && b.coeffs)
        CHECK_THAT(a.coeffs->B, Catch::Matchers::WithinRel(b.coeffs->B, 1e-9));
    REQUIRE(a.boundary.has_value() == b.boundary.has_value());
    if (a.boundary && b.boundary)
        CHECK_THAT(a.boundary->r, Catch::Matchers::WithinRel(b.boundary->r, 1e-9));
    CHECK(a.right_exits == b.right_exits);
    CHECK(a.label == b.label);
}

void check_records_equal(const DetectionRecord& a, const DetectionRecord& b) {
    CHECK(a.period_start_index == b.period_start_index);
    CHECK(a.a_hat == b.a_hat);
    CHECK(a.sigma == b.sigma);
    CHECK(a.coeffs.has_value() == b.coeffs.has_value());
    if (a.coeffs && b.coeffs) {
        CHECK(a.coeffs->beta == b.coeffs->beta);
        CHECK(a.coeffs->B == b.coeffs->B);
    }
    CHECK(a.boundary.has_value() == b.boundary.has_value());
    if (a.boundary && b.boundary) CHECK(a.boundary->r == b.boundary->r);
    CHECK(a.right_exits == b.right_exits);
    CHECK(a.left_exits == b.left_exits);
    CHECK(a.no_exits == b.no_exits);
    CHECK(a.label == b.label);
    CHECK(a.tilt_capped == b.tilt_capped);
    CHECK(a.boundary_failed == b.boundary_failed);
    CHECK(a.g_fallback == b.g_fallback);
}

}  // namespace

TEST_CASE("window detection", "[detect]") {
    DetectorConfig cfg;
    cfg.p_star = 4;
    cfg.n_sims = 8;
    cfg.sim = SimControls{5.0, 1e-3};
    // negative changes of mean 1.45: a mid-range tilt with a full solve
    const auto mixed = prices_from_cycle({1.1, -1.3, 0.9, -1.7, 1.0, -1.2, 0.8, -1.6}, 30);

    SECTION("deterministic and scale-free") {
        const DetectionRecord a = detect(mixed, kUnitNu, cfg, Seed{9}, 42);
        const DetectionRecord b = detect(mixed, kUnitNu, cfg, Seed{9}, 42);
        check_records_equal(a, b);
        CHECK(a.period_start_index == 42);
        REQUIRE(a.coeffs.has_value());
        CHECK(a.a_hat > 0.0);

        auto scaled = mixed;
        for (auto& p : scaled) p *= 10.0;
        check_records_close(a, detect(scaled, kUnitNu, cfg, Seed{9}, 42));
    }

    SECTION("a window with no drawdowns is labeled null without simulating") {
        const auto rising = prices_from_cycle({0.5, 1.0, 0.2}, 30);
        const DetectionRecord rec = detect(rising, kUnitNu, cfg, Seed{10});
        CHECK(rec.label == 0);
        CHECK(rec.a_hat == 0.0);
        CHECK(rec.no_exits == cfg.n_sims);
        CHECK_FALSE(rec.coeffs.has_value());
        CHECK_FALSE(rec.boundary.has_value());
    }

    SECTION("small drawdowns clamp the tilt to the null") {
        const auto calm = prices_from_cycle({0.6, -0.5, 0.4, -0.4}, 30);
        const DetectionRecord rec = detect(calm, kUnitNu, cfg, Seed{11});
        CHECK(rec.a_hat == 0.0);
        CHECK(rec.label == 0);
        CHECK_FALSE(rec.coeffs.has_value());
    }

    SECTION("extreme capped tilt collapses the decision interval") {
        // uniform 3%-scale drops: jump mean past the estimator pole, tiny
        // diffusion, so the drift term swamps C + gamma and no interval exists
        const auto crash = prices_from_cycle({-3.0, -3.2}, 30);
        const DetectionRecord rec = detect(crash, kUnitNu, cfg, Seed{12});
        CHECK(rec.tilt_capped);
        CHECK(rec.boundary_failed);
        CHECK(rec.label == 1);
        CHECK(rec.right_exits == cfg.n_sims);
        CHECK_FALSE(rec.boundary.has_value());
    }

    SECTION("identical drawdowns solve the boundary through the fallback") {
        const auto sawtooth = prices_from_cycle({1.0, -1.5}, 30);
        const DetectionRecord rec = detect(sawtooth, kUnitNu, cfg, Seed{13});
        REQUIRE(rec.boundary.has_value());
        CHECK(rec.g_fallback);
        CHECK(rec.boundary->r_g == rec.boundary->r_f);
        // drawdown magnitudes are exactly 1.5, the moment solve gives a = 1
        CHECK_THAT(rec.a_hat, WithinAbs(1.0, 1e-12));
        CHECK_FALSE(rec.tilt_capped);
    }

    SECTION("configuration and input validation") {
        DetectorConfig bad = cfg;
        bad.p_star = 0;
        CHECK_THROWS_AS(detect(mixed, kUnitNu, bad, Seed{1}), std::invalid_argument);
        bad.p_star = bad.n_sims + 1;
        CHECK_THROWS_AS(detect(mixed, kUnitNu, bad, Seed{1}), std::invalid_argument);
        CHECK_THROWS_AS(detect({100.0}, kUnitNu, cfg, Seed{1}), std::invalid_argument);
    }
}

TEST_CASE("baseline mean comparison", "[detect]") {
    CHECK(naive_classify({2.0, 2.0}, {1.0, 1.0}) == 1);
    CHECK(naive_classify({0.5}, {1.0}) == 0);
    CHECK(naive_classify({1.0}, {1.0}) == 0);  // strict comparison
    CHECK_THROWS_AS(naive_classify({}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(naive_classify({1.0}, {}), std::invalid_argument);
}
