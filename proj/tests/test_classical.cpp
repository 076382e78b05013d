#include <doctest.h>

#include <cmath>

#include "lgwalk/analysis.hpp"
#include "lgwalk/classical.hpp"
#include "lgwalk/rng.hpp"

using namespace lgwalk;

TEST_CASE("trajectory enumeration is complete and consistent") {
    CHECK(enumerate_trajectories(4).size() == 16);
    CHECK(enumerate_trajectories(1).size() == 2);
    CHECK(enumerate_trajectories(0).size() == 1);
    CHECK_THROWS_AS(enumerate_trajectories(25), ValidationError);
    CHECK_THROWS_AS(enumerate_trajectories(-1), ValidationError);

    for (const Trajectory& t : enumerate_trajectories(5)) {
        auto xs = t.positions();
        CHECK(xs.size() == 5);
        int x = 0;
        for (int k = 0; k < 5; ++k) {
            x += t.branch(k) == Branch::right ? 1 : -1;
            CHECK(xs[static_cast<std::size_t>(k)] == x);
            CHECK(std::abs(x) <= k + 1);
        }
        CHECK(t.position_after(5) == xs.back());
    }
}

TEST_CASE("classical binomial distribution") {
    PositionDistribution fair = classical_binomial_distribution(4, 0.5);
    CHECK(fair.at(-4) == doctest::Approx(1.0 / 16).epsilon(1e-14));
    CHECK(fair.at(-2) == doctest::Approx(4.0 / 16).epsilon(1e-14));
    CHECK(fair.at(0) == doctest::Approx(6.0 / 16).epsilon(1e-14));
    CHECK(fair.at(2) == doctest::Approx(4.0 / 16).epsilon(1e-14));
    CHECK(fair.at(4) == doctest::Approx(1.0 / 16).epsilon(1e-14));

    PositionDistribution sure = classical_binomial_distribution(4, 1.0);
    CHECK(sure.at(-4) == 1.0);

    PositionDistribution two = classical_binomial_distribution(2, 0.5);
    CHECK(two.at(-2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(two.at(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(two.at(2) == doctest::Approx(0.25).epsilon(1e-14));

    SUBCASE("variance matches n 4 p (1-p)") {
        for (double p : {0.2, 0.5, 0.77}) {
            PositionDistribution d = classical_binomial_distribution(6, p);
            double mean = 0, m2 = 0;
            for (int x = -6; x <= 6; ++x) {
                mean += x * d.at(x);
                m2 += x * x * d.at(x);
            }
            CHECK(m2 - mean * mean == doctest::Approx(6 * 4 * p * (1 - p)).epsilon(1e-12));
        }
    }
    SUBCASE("fair coin matches exhaustive path counting") {
        auto trajectories = enumerate_trajectories(4);
        PositionDistribution counted(Window(-4, 4));
        for (const Trajectory& t : trajectories)
            counted.ref(t.position_after(4)) += 1.0 / 16;
        PositionDistribution binomial = classical_binomial_distribution(4, 0.5);
        CHECK(total_variation(counted, binomial) < 1e-14);
    }
}

TEST_CASE("every classical trajectory distribution satisfies K <= 1") {
    auto trajectories = enumerate_trajectories(4);
    QScheme constant = QScheme::constant_one();

    SUBCASE("constant scheme gives exactly 1 for any distribution") {
        std::vector<double> uniform(16, 1.0 / 16);
        CHECK(classical_k(trajectories, uniform, constant) == doctest::Approx(1.0).epsilon(1e-14));
        // Random distributions.
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto g = make_stream(seed, 99, 0);
            std::vector<double> w(16);
            double total = 0;
            for (double& v : w)
                total += v = uniform_double(g) + 1e-3;
            for (double& v : w)
                v /= total;
            CHECK(classical_k(trajectories, w, constant) == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    SUBCASE("dichotomic designations never exceed 1 and stay above -3") {
        for (double xi = -1.0; xi <= 1.0 + 1e-12; xi += 0.1) {
            QScheme scheme = QScheme::dichotomic(std::min(xi, 1.0));
            for (const Trajectory& t : trajectories) {
                double k = classical_k_single(t, scheme);
                CHECK(k <= 1.0 + 1e-12);
                CHECK(k >= -3.0 - 1e-12);
            }
        }
    }
    SUBCASE("uniform distribution with xi = -1 gives the enumerated value 3/4") {
        std::vector<double> uniform(16, 1.0 / 16);
        CHECK(classical_k(trajectories, uniform, QScheme::dichotomic(-1)) ==
              doctest::Approx(0.75).epsilon(1e-14));
    }
    SUBCASE("weights must be aligned and normalized") {
        std::vector<double> w(16, 1.0 / 8);
        CHECK_THROWS_AS(classical_k(trajectories, w, constant), ValidationError);
        std::vector<double> short_w(8, 1.0 / 8);
        CHECK_THROWS_AS(classical_k(trajectories, short_w, constant), ValidationError);
    }
}

TEST_CASE("classical sampling matches its exact counterpart") {
    SUBCASE("p = 1 walks deterministically to -4") {
        auto events = sample_classical_events(4, 1.0, 100, QScheme::constant_one(), 3);
        for (const EventRecord& ev : events) {
            CHECK(ev.reported_x3 == -4);
            CHECK(ev.q3 == -1.0);
            CHECK(ev.retained);
        }
    }
    SUBCASE("fair-coin <Q3> matches the binomial sign mass") {
        const int n = 100000;
        auto events = sample_classical_events(4, 0.5, n, QScheme::constant_one(), 17);
        double sum = 0;
        for (const EventRecord& ev : events)
            sum += ev.q3;
        // Binomial(4, 1/2): mass at x <= 0 is 11/16.
        double exact = -11.0 / 16 + 5.0 / 16;
        double se = std::sqrt((1 - exact * exact) / n);
        CHECK(std::abs(sum / n - exact) < 4 * se);
    }
    SUBCASE("arm sampling retains exactly the conditioned branch") {
        ClassicalSamplerOptions opts;
        opts.arm = Arm::condition_on_left;
        auto events = sample_classical_events(4, 0.5, 2000, QScheme::constant_one(), 23, opts);
        for (const EventRecord& ev : events) {
            REQUIRE(ev.branch_at_t2.has_value());
            CHECK(ev.retained == (ev.branch_at_t2 == Branch::left));
        }
    }
    SUBCASE("identical seeds reproduce identical streams") {
        auto a = sample_classical_events(4, 0.3, 50, QScheme::constant_one(), 77);
        auto b = sample_classical_events(4, 0.3, 50, QScheme::constant_one(), 77);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].reported_x3 == b[i].reported_x3);
    }
}

TEST_CASE("non-invasive classical arms reproduce K = 1; invasive ones fake a violation") {
    const std::int64_t shots = 20000;
    QScheme constant = QScheme::constant_one();

    auto run_arms = [&](double p, bool invasive) {
        EventGroups groups;
        for (Arm arm : {Arm::none, Arm::condition_on_left, Arm::condition_on_right}) {
            ClassicalSamplerOptions opts;
            opts.arm = arm;
            opts.invasive = invasive;
            auto events = sample_classical_events(4, p, shots, constant, 4242, opts);
            if (arm == Arm::none)
                groups.none = std::move(events);
            else if (arm == Arm::condition_on_left)
                groups.left = std::move(events);
            else
                groups.right = std::move(events);
        }
        return k_parts_from_events(groups, constant).k;
    };

    // Monte Carlo error on K at this size is well under 0.02.
    CHECK(std::abs(run_arms(0.9, false) - 1.0) < 0.05);
    CHECK(std::abs(run_arms(0.5, false) - 1.0) < 0.05);

    // Scrambling the coin after t2 at p = 0.9 pushes K toward 1.32: the
    // violation is faked by disturbance, not by quantumness.
    double faked = run_arms(0.9, true);
    CHECK(faked > 1.2);
    CHECK(faked < 1.45);
}
