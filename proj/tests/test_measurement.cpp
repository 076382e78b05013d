#include <doctest.h>

#include <numbers>
#include <set>

#include "lgwalk/measurement.hpp"
#include "test_helpers.hpp"

using namespace lgwalk;
constexpr double kPi = std::numbers::pi;

namespace {
WalkerState one_step(double theta) {
    Window w = default_window(4, 5);
    return walk_step(new_localized(0, Spin::up, w), CoinParams(theta));
}
} // namespace

TEST_CASE("q assignments follow the three-time rules") {
    CHECK(q_at_t1() == 1.0);
    CHECK(q_at_t3(0) == -1.0);
    CHECK(q_at_t3(-4) == -1.0);
    CHECK(q_at_t3(1) == 1.0);

    QScheme constant = QScheme::constant_one();
    CHECK(q_at_t2(Branch::left, constant) == 1.0);
    CHECK(q_at_t2(Branch::right, constant) == 1.0);

    QScheme dich = QScheme::dichotomic(-1.0);
    CHECK(q_at_t2(Branch::right, dich) == 1.0);
    CHECK(q_at_t2(Branch::left, dich) == -1.0);

    CHECK_THROWS_AS(QScheme::dichotomic(1.5), ValidationError);
}

TEST_CASE("project_t2 conditions on a branch") {
    SUBCASE("fair coin: each branch has probability 1/2") {
        auto [prob, state] = project_t2(one_step(kPi / 2), Branch::left);
        CHECK(prob == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::norm(state.amplitude(Spin::up, -1)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("theta = 0: the left branch is deterministic") {
        auto [prob, state] = project_t2(one_step(0), Branch::left);
        CHECK(prob == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::norm(state.amplitude(Spin::up, -1)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("conditioning on an empty branch is an error") {
        CHECK_THROWS_AS(project_t2(one_step(0), Branch::right), ValidationError);
    }
}

TEST_CASE("removal protocol validation") {
    RemovalProtocol p = RemovalProtocol::conditioning_on(Branch::left);
    p.validate(4); // shift 5 for a 4-step walk: fine

    p.removal_shift = 4;
    CHECK_THROWS_AS(p.validate(4), ValidationError); // even
    p.removal_shift = 3;
    CHECK_THROWS_AS(p.validate(4), ValidationError); // < 2*(4-1)-1
    p.removal_shift = 7;
    p.validate(4);
    p.excitation_prob = 1.5;
    CHECK_THROWS_AS(p.validate(4), ValidationError);

    RemovalProtocol none;
    none.validate(4); // arm none never validates geometry
}

TEST_CASE("negative measurement: retained block equals the projective conditional") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    NegativeRunResult nr =
        negative_measurement_run(spec, RemovalProtocol::conditioning_on(Branch::left));

    CHECK(nr.retention_probability == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(nr.retention_probability - nr.born_probability) < 1e-12);

    // Frozen conditional distribution {1, 5, 1, 1} / 8 on {-4, -2, 0, 2}.
    CHECK(nr.conditioned_final.at(-4) == doctest::Approx(1.0 / 8).epsilon(1e-12));
    CHECK(nr.conditioned_final.at(-2) == doctest::Approx(5.0 / 8).epsilon(1e-12));
    CHECK(nr.conditioned_final.at(0) == doctest::Approx(1.0 / 8).epsilon(1e-12));
    CHECK(nr.conditioned_final.at(2) == doctest::Approx(1.0 / 8).epsilon(1e-12));

    // Projective oracle: project, then walk the remaining three steps.
    WalkerState psi1 = one_step(kPi / 2);
    WalkerState cond = project_t2(psi1, Branch::left).conditioned;
    for (int k = 0; k < 3; ++k)
        cond = walk_step(cond, spec.coin);
    CHECK(total_variation(nr.conditioned_final, position_distribution(cond)) < 1e-12);
}

TEST_CASE("negative measurement supports are disjoint with opposite parity") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    NegativeRunResult nr =
        negative_measurement_run(spec, RemovalProtocol::conditioning_on(Branch::left));
    CHECK(nr.retained_support == std::vector<int>{-4, -2, 0, 2});
    CHECK(nr.displaced_support == std::vector<int>{3, 5, 7, 9});

    std::set<int> overlap;
    for (int x : nr.retained_support)
        if (std::count(nr.displaced_support.begin(), nr.displaced_support.end(), x))
            overlap.insert(x);
    CHECK(overlap.empty());

    // Every final-distribution site with mass is classified, none ambiguous.
    double retained_mass = 0, displaced_mass = 0;
    for (int x = nr.final_distribution.window.x_min; x <= nr.final_distribution.window.x_max; ++x) {
        double p = nr.final_distribution.at(x);
        if (p == 0)
            continue;
        if (classify_site(x, nr.retained_support, nr.displaced_support) == Classification::retained)
            retained_mass += p;
        else
            displaced_mass += p;
    }
    CHECK(retained_mass == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(displaced_mass == doctest::Approx(0.5).epsilon(1e-12));

    auto outcomes = nr.site_outcomes();
    CHECK(outcomes.size() == 8);
    double labelled_total = 0;
    for (const auto& o : outcomes) {
        labelled_total += o.probability;
        CHECK(o.retained == (o.x <= 2));
    }
    CHECK(labelled_total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("left and right arms are mirror images and their retentions sum to 1") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    NegativeRunResult left =
        negative_measurement_run(spec, RemovalProtocol::conditioning_on(Branch::left));
    NegativeRunResult right =
        negative_measurement_run(spec, RemovalProtocol::conditioning_on(Branch::right));

    CHECK(left.retention_probability + right.retention_probability == doctest::Approx(1.0).epsilon(1e-12));
    for (int x = -4; x <= 4; ++x)
        CHECK(left.conditioned_final.at(x) == doctest::Approx(right.conditioned_final.at(-x)).epsilon(1e-12));
}

TEST_CASE("negative/projective equivalence holds for every tested angle and with dephasing") {
    for (double theta : {0.4, 1.1, kPi / 2, 2.5}) {
        for (double p_d : {0.0, 0.06}) {
            WalkSpec spec{4, CoinParams(theta), p_d};
            for (Branch b : {Branch::left, Branch::right}) {
                NegativeRunResult nr =
                    negative_measurement_run(spec, RemovalProtocol::conditioning_on(b));
                // Projective conditional via density evolution.
                Window w = default_window(4, 5);
                WalkSpec head = spec;
                head.steps = 1;
                WalkerDensity rho1 =
                    run_walk_density(head, new_localized_density(0, Spin::up, w)).back();
                auto proj = project_t2(rho1, b);
                WalkSpec tail = spec;
                tail.steps = 3;
                PositionDistribution expected =
                    position_distribution(run_walk_density(tail, proj.conditioned).back());
                CHECK(total_variation(nr.conditioned_final, expected) < 1e-12);
                CHECK(std::abs(nr.retention_probability - proj.probability) < 1e-12);
            }
        }
    }
}

TEST_CASE("literal right arm recovers the same conditional from the displaced window") {
    WalkSpec spec{4, CoinParams(1.2), 0};
    RemovalProtocol canonical = RemovalProtocol::conditioning_on(Branch::right);
    RemovalProtocol literal = canonical;
    literal.literal_text_arm = true;

    NegativeRunResult a = negative_measurement_run(spec, canonical);
    NegativeRunResult b = negative_measurement_run(spec, literal);
    CHECK(a.retained_is_conditioned);
    CHECK_FALSE(b.retained_is_conditioned);
    CHECK(total_variation(a.conditioned_final, b.conditioned_final) < 1e-12);
    // In the literal variant the untouched block is the left branch.
    CHECK(b.retention_probability ==
          doctest::Approx(1.0 - a.retention_probability).epsilon(1e-12));
}

TEST_CASE("negative run rejects arm none") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    CHECK_THROWS_AS(negative_measurement_run(spec, RemovalProtocol::none()), ValidationError);
}

TEST_CASE("classification is conservative on noisy sites") {
    std::vector<int> retained{-4, -2, 0, 2};
    std::vector<int> displaced{3, 5, 7, 9};
    CHECK(classify_site(3, retained, displaced) == Classification::rejected);
    CHECK(classify_site(0, retained, displaced) == Classification::retained);
    CHECK(classify_site(-5, retained, displaced) == Classification::retained); // nearest -4
    CHECK(classify_site(4, retained, displaced) == Classification::rejected);  // nearest 3/5
    CHECK(classify_site(1, retained, displaced) == Classification::retained);  // inside gap
    // Equidistant: never counted as retained.
    CHECK(classify_site(2, std::vector<int>{0}, std::vector<int>{4}) == Classification::rejected);
}

TEST_CASE("sample_event: deterministic walk with conditioning") {
    WalkSpec spec{4, CoinParams(0), 0};
    EventSampler sampler(spec, RemovalProtocol::conditioning_on(Branch::left),
                         QScheme::constant_one(), NoiseParams{}, 11);
    for (int i = 0; i < 10; ++i) {
        EventRecord ev = sampler.sample(i);
        CHECK(ev.retained);
        CHECK(ev.reported_x3 == -4);
        CHECK(ev.q3 == -1.0);
        CHECK(ev.branch_at_t2 == Branch::left);
    }
}

TEST_CASE("sampled <Q3> agrees with the exact walk value") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    EventSampler sampler(spec, RemovalProtocol::none(), QScheme::constant_one(), NoiseParams{}, 123);
    const int n = 10000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        sum += sampler.sample(i).q3;
    double exact = -0.625; // frozen from the 16-path enumeration
    double se = std::sqrt((1 - exact * exact) / n);
    CHECK(std::abs(sum / n - exact) < 3 * se);
}

TEST_CASE("detection noise relocates about 2% of reports to adjacent sites") {
    WalkSpec spec{4, CoinParams(0), 0};
    NoiseParams noise;
    noise.detection_error = 0.02;
    EventSampler sampler(spec, RemovalProtocol::none(), QScheme::constant_one(), noise, 77);
    const int n = 20000;
    int moved = 0;
    for (int i = 0; i < n; ++i) {
        EventRecord ev = sampler.sample(i);
        if (ev.reported_x3 == -5 || ev.reported_x3 == -3)
            ++moved;
        else
            CHECK(ev.reported_x3 == -4);
    }
    double fraction = static_cast<double>(moved) / n;
    CHECK(fraction > 0.015);
    CHECK(fraction < 0.025);
}

TEST_CASE("empirical site frequencies converge at the 1/sqrt(N) rate") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    EventSampler sampler(spec, RemovalProtocol::none(), QScheme::constant_one(), NoiseParams{}, 2024);
    const int n = 100000;
    std::map<int, int> counts;
    for (int i = 0; i < n; ++i)
        ++counts[sampler.sample(i).reported_x3];
    const std::map<int, double> born{{-4, 1.0 / 16}, {-2, 10.0 / 16}, {0, 2.0 / 16},
                                     {2, 2.0 / 16},  {4, 1.0 / 16}};
    for (const auto& [x, p] : born) {
        double freq = static_cast<double>(counts[x]) / n;
        double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(freq - p) < 4 * se);
    }
}

TEST_CASE("per-event streams are reproducible and order-independent") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0.06};
    NoiseParams noise = NoiseParams::experiment_defaults();
    RemovalProtocol protocol = RemovalProtocol::conditioning_on(Branch::left);
    protocol.excitation_prob = 0.01;
    EventSampler a(spec, protocol, QScheme::constant_one(), noise, 5);
    EventSampler b(spec, protocol, QScheme::constant_one(), noise, 5);

    EventRecord late = a.sample(500);
    for (int i = 0; i < 500; ++i)
        (void)a.sample(i);
    EventRecord again = a.sample(500);
    CHECK(late.reported_x3 == again.reported_x3);
    CHECK(late.retained == again.retained);
    CHECK(late.corrupt == again.corrupt);

    auto batch_a = a.sample_many(0, 50);
    auto batch_b = b.sample_many(0, 50);
    for (std::size_t i = 0; i < batch_a.size(); ++i) {
        CHECK(batch_a[i].reported_x3 == batch_b[i].reported_x3);
        CHECK(batch_a[i].retained == batch_b[i].retained);
    }
    // Different seed, different stream.
    EventSampler c(spec, protocol, QScheme::constant_one(), noise, 6);
    auto batch_c = c.sample_many(0, 50);
    int differing = 0;
    for (std::size_t i = 0; i < batch_c.size(); ++i)
        differing += batch_c[i].reported_x3 != batch_a[i].reported_x3 ? 1 : 0;
    CHECK(differing > 0);
}

TEST_CASE("wrong-state preparations are flagged and follow the flipped walk") {
    WalkSpec spec{4, CoinParams(0), 0};
    NoiseParams noise;
    noise.prep_error = 1.0; // every event starts in the wrong state
    EventSampler sampler(spec, RemovalProtocol::none(), QScheme::constant_one(), noise, 9);
    for (int i = 0; i < 20; ++i) {
        EventRecord ev = sampler.sample(i);
        CHECK(ev.prep_error);
        CHECK(ev.reported_x3 == 4); // down start at theta=0 walks right
    }
}

TEST_CASE("excitation marks retained atoms as corrupt for venality accounting") {
    WalkSpec spec{4, CoinParams(kPi / 2), 0};
    RemovalProtocol protocol = RemovalProtocol::conditioning_on(Branch::left);
    protocol.excitation_prob = 1.0;
    EventSampler sampler(spec, protocol, QScheme::constant_one(), NoiseParams{}, 31);
    int retained = 0;
    for (int i = 0; i < 200; ++i) {
        EventRecord ev = sampler.sample(i);
        if (ev.retained) {
            ++retained;
            CHECK(ev.corrupt);
        } else {
            CHECK_FALSE(ev.corrupt);
        }
    }
    CHECK(retained > 0);
}

TEST_CASE("retained events always satisfy the q3 sign rule") {
    WalkSpec spec{4, CoinParams(1.3), 0.05};
    RemovalProtocol protocol = RemovalProtocol::conditioning_on(Branch::right);
    protocol.excitation_prob = 0.01;
    EventSampler sampler(spec, protocol, QScheme::constant_one(), NoiseParams::experiment_defaults(), 8);
    for (int i = 0; i < 500; ++i) {
        EventRecord ev = sampler.sample(i);
        CHECK(ev.q3 == q_at_t3(ev.reported_x3));
        CHECK(ev.arm == Arm::condition_on_right);
        CHECK(ev.branch_at_t2.has_value());
    }
}
