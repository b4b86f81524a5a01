#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treecut/augmented_eval.hpp"
#include "treecut/caterpillar.hpp"

namespace treecut {

enum class Phase { I, IIx, IIy, III };
const char* to_string(Phase p);

enum class EventKind {
    VertexReached,
    MidpointReached,
    DiameterThreshold,
    CycleCandidate,
    GrowShrinkSwitch,
    PathStateChange,
    Terminal
};
const char* to_string(EventKind k);

enum class TerminalReason {
    None,
    NoUsefulShortcut,  // point or straight backbone: cc is optimal
    BothEnds,          // pq reached ab
    PAtA,
    QAtB,
    DiameterFloor,  // diameter reached delta
    BlockedState,   // x-■, ■-y and ■-■ or ■-o are all diametral
    XYWithSS,       // x-y together with ■-■
    XYWithSOAndSY,  // x-y, ■-o and ■-y during a sideways shift
    WedgePath,      // a ▲-pq-▲ path became diametral during the last out-shift
    NoRootInBracket
};
const char* to_string(TerminalReason r);

struct Event {
    EventKind kind = EventKind::PathStateChange;
    Phase phase = Phase::I;
    double parameter = 0.0;  // sweep time in phase I, travel of the leading endpoint otherwise
    double p_arc = 0.0;      // d_T(a, p)
    double q_arc = 0.0;      // d_T(q, b)
    double diameter = 0.0;
    double best_diameter = 0.0;
    std::string payload;
    std::set<std::string> path_state;
    TerminalReason reason = TerminalReason::None;
};

// Relation between the travel dp of the leading endpoint, the change
// dl = |pq| - |p'q'| of the shortcut length, the follower's travel dq and the
// decrease of the diameter while a path state is held in balance.
struct SpeedLaw {
    int table = 0;  // 1: sideways shift, 2: out-shift
    int row = 0;    // 1-based
    std::string name;
    double dq(double dp, double dl) const;
    double delta_diameter(double dp, double dl) const;
};

// Row for a path state in a given phase, if the state names exactly one.
// For phase IIy the state is read with x and y exchanged.
std::optional<SpeedLaw> speed_law(Phase phase, const std::set<std::string>& path_state);

struct SweepSegment {
    Phase phase = Phase::I;
    double p0 = 0.0, t0 = 0.0;  // d_T(a,p), d_T(a,q) at the start
    double p1 = 0.0, t1 = 0.0;  // and at the end
    double diameter0 = 0.0;
    double min_diameter = 0.0;
    std::set<std::string> path_state;  // full path state inside the segment
    bool uniform_state = false;        // same full path state at both ends and the middle
    std::vector<std::pair<double, double>> probes;  // interior (d_T(a,p), d_T(a,q))
    std::optional<SpeedLaw> law;                    // row governing the segment, if any
    bool leader_is_q = false;                       // q is the endpoint moved at unit speed
};

struct OptimizeOptions {
    bool trace = true;
    // count every path-state change during the last out-shift instead of
    // collapsing those shadowed by a diametral x-T-▲ or ▲-T-y path
    bool diagnostic = false;
    int probes_per_segment = 0;
    int samples_per_segment = 8;
};

struct SweepCounters {
    long long events = 0;
    long long phase3_state_changes = 0;
    long long grow_shrink_switches = 0;
    long long segments = 0;
    long long evaluations = 0;
};

struct OptimizeResult {
    Shortcut shortcut;
    double p_arc = 0.0;  // d_T(a, p)
    double q_arc = 0.0;  // d_T(a, q)
    double diameter_before = 0.0;
    double diameter_after = 0.0;
    bool useful = false;
    Phase final_phase = Phase::I;
    TerminalReason reason = TerminalReason::None;
    std::vector<Event> trace;
    std::vector<SweepSegment> segments;
    SweepCounters counters;
};

OptimizeResult optimize(const GeometricTree& tree, const OptimizeOptions& options = {});

// q position balancing the two diametral families of a sideways shift
// (x-y against x-■ and ■-o) for p at arc s, searched in [t_lo, t_hi] with q
// moving from t_hi toward t_lo.  Throws NoRootInBracket when even t_lo leaves
// the q side short.
class NoRootInBracket : public std::runtime_error {
public:
    NoRootInBracket() : std::runtime_error("no balancing position inside the bracket") {}
};
double balance_solve(const CaterpillarView& view, double s, double t_lo, double t_hi, bool with_xb = true,
                     bool with_so = true);

}  // namespace treecut
