#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lgwalk/walk.hpp"

namespace lgwalk {

/// The two states an atom can occupy after the first step when prepared in
/// (up, x=0): left = (up, x=-1), right = (down, x=+1).
enum class Branch { left, right };

inline int branch_site(Branch b) { return b == Branch::left ? -1 : +1; }
inline Spin branch_spin(Branch b) { return b == Branch::left ? Spin::up : Spin::down; }
inline Branch other_branch(Branch b) { return b == Branch::left ? Branch::right : Branch::left; }

/// Q(t2) assignment. constant_one maps both branches to 1; dichotomic maps
/// (down,+1) to +1 and (up,-1) to xi with |xi| <= 1.
struct QScheme {
    enum class Kind { constant_one, dichotomic };
    Kind kind = Kind::constant_one;
    double xi = 1.0;

    static QScheme constant_one() { return QScheme{}; }
    static QScheme dichotomic(double xi_value);

    double q2(Branch b) const {
        if (kind == Kind::constant_one)
            return 1.0;
        return b == Branch::right ? 1.0 : xi;
    }
    bool operator==(const QScheme&) const = default;
};

double q_at_t1();
double q_at_t2(Branch branch, const QScheme& scheme);
/// Sign rule on the final position: -1 for x <= 0, +1 for x > 0.
double q_at_t3(int x);

enum class Arm { none, condition_on_left, condition_on_right };

/// State-selective removal performed at t2.
///
/// condition_on_left transports the down species removal_shift sites to the
/// right, leaving the (up,-1) branch untouched. condition_on_right, in the
/// canonical mirror-consistent realization, transports the up species to the
/// left and retains the untouched (down,+1) branch. With literal_text_arm the
/// right arm instead transports the down species itself to the left and the
/// right-branch conditional is recovered from the displaced window.
struct RemovalProtocol {
    Arm arm = Arm::none;
    int removal_shift = 5;
    double excitation_prob = 0; // chance the removal disturbs an unshifted atom
    bool literal_text_arm = false;

    /// Checks shift parity and magnitude against the walk geometry: the shift
    /// must be odd and at least 2*(steps - t2) - 1 so the retained and
    /// displaced windows cannot overlap or interleave.
    void validate(int steps, int t2_step = 1) const;

    static RemovalProtocol none() { return RemovalProtocol{}; }
    static RemovalProtocol conditioning_on(Branch b, int shift = 5);
};

struct NoiseParams {
    double detection_error = 0; // reported site hops to an adjacent site
    double prep_error = 0;      // preparation lands in the wrong internal state

    void validate() const;
    /// Experimental-scale defaults: 2% imaging error, 1% wrong-state preparation.
    static NoiseParams experiment_defaults() { return NoiseParams{0.02, 0.01}; }
};

/// One simulated single-atom run.
struct EventRecord {
    std::int64_t run_id = 0;
    Arm arm = Arm::none;
    double theta = 0;
    int reported_x3 = 0;
    bool retained = true;
    double q3 = 0;
    std::optional<Branch> branch_at_t2;
    std::uint64_t seed = 0;
    bool prep_error = false; // wrong-state preparation, kept but flagged
    bool corrupt = false;    // removal may have disturbed this retained atom
};

/// Projective conditioning at t2: Born probability of the branch and the
/// renormalized post-measurement state.
struct BranchProjection {
    double probability = 0;
    WalkerState conditioned;
};
BranchProjection project_t2(const WalkerState& one_step_state, Branch branch);

struct BranchProjectionDensity {
    double probability = 0;
    WalkerDensity conditioned;
};
BranchProjectionDensity project_t2(const WalkerDensity& one_step_rho, Branch branch);

/// Outcome of the ideal-negative removal protocol, evolved to t3.
struct NegativeRunResult {
    Branch conditioned_branch = Branch::left;
    bool retained_is_conditioned = true; // false only for the literal right arm

    PositionDistribution final_distribution; // both blocks, full window
    double retention_probability = 0;        // mass of the retained window
    double born_probability = 0;             // Born weight of the conditioned branch at t2

    std::vector<int> retained_support;  // sorted; sites reachable by the unshifted atom
    std::vector<int> displaced_support; // sorted; sites reachable by the transported atom

    PositionDistribution retained_conditional;  // normalized block distributions
    PositionDistribution displaced_conditional;

    /// Conditional t3 distribution of the conditioned branch. Equals
    /// retained_conditional except in the literal right arm, where it is the
    /// displaced block shifted back by the removal distance.
    PositionDistribution conditioned_final;

    struct SiteOutcome {
        int x = 0;
        double probability = 0;
        bool retained = false;
    };
    /// Final distribution with its per-site retained/rejected labels.
    std::vector<SiteOutcome> site_outcomes() const;
};

NegativeRunResult negative_measurement_run(const WalkSpec& spec, const RemovalProtocol& protocol,
                                           Spin initial_spin = Spin::up, int t2_step = 1);

enum class Classification { retained, rejected };

/// Final-position classification: exact set membership first; a noisy site in
/// neither window goes to the nearer one, ties rejected so that a possibly
/// perturbed atom is never counted as retained.
Classification classify_site(int x, const std::vector<int>& retained_support,
                             const std::vector<int>& displaced_support);

/// Draws single-atom outcomes for one protocol configuration. All event
/// randomness comes from a per-run_id stream, so events are reproducible and
/// independent of sampling order.
class EventSampler {
public:
    EventSampler(const WalkSpec& spec, const RemovalProtocol& protocol, const QScheme& scheme,
                 const NoiseParams& noise, std::uint64_t seed);

    EventRecord sample(std::int64_t run_id) const;
    std::vector<EventRecord> sample_many(std::int64_t first_run_id, std::int64_t count) const;

    const NegativeRunResult& model(Spin initial_spin = Spin::up) const;

private:
    struct ArmTables {
        double retention_probability = 0;
        PositionDistribution unconditioned; // arm == none
        NegativeRunResult negative;         // arm != none
    };
    const ArmTables& tables(Spin s) const { return s == Spin::up ? up_ : down_; }
    WalkSpec spec_;
    RemovalProtocol protocol_;
    QScheme scheme_;
    NoiseParams noise_;
    std::uint64_t seed_;
    ArmTables up_, down_;
};

/// Single-event convenience wrapper over EventSampler.
EventRecord sample_event(const WalkSpec& spec, const RemovalProtocol& protocol, const QScheme& scheme,
                         const NoiseParams& noise, std::uint64_t seed, std::int64_t run_id);

} // namespace lgwalk
