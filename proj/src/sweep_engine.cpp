#include "treecut/sweep_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "treecut/smawk.hpp"

namespace treecut {

const char* to_string(Phase p) {
    switch (p) {
        case Phase::I: return "I";
        case Phase::IIx: return "II-x";
        case Phase::IIy: return "II-y";
        case Phase::III: return "III";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::VertexReached: return "VertexReached";
        case EventKind::MidpointReached: return "MidpointReached";
        case EventKind::DiameterThreshold: return "DiameterThreshold";
        case EventKind::CycleCandidate: return "CycleCandidate";
        case EventKind::GrowShrinkSwitch: return "GrowShrinkSwitch";
        case EventKind::PathStateChange: return "PathStateChange";
        case EventKind::Terminal: return "Terminal";
    }
    return "?";
}

const char* to_string(TerminalReason r) {
    switch (r) {
        case TerminalReason::None: return "none";
        case TerminalReason::NoUsefulShortcut: return "no-useful-shortcut";
        case TerminalReason::BothEnds: return "pq=ab";
        case TerminalReason::PAtA: return "p=a";
        case TerminalReason::QAtB: return "q=b";
        case TerminalReason::DiameterFloor: return "diameter=delta";
        case TerminalReason::BlockedState: return "blocked-state";
        case TerminalReason::XYWithSS: return "x-y-with-■-■";
        case TerminalReason::XYWithSOAndSY: return "x-y-■-o-■-y";
        case TerminalReason::WedgePath: return "▲-pq-▲";
        case TerminalReason::NoRootInBracket: return "no-root-in-bracket";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// speed laws

namespace {

struct LawRow {
    int table;
    int row;
    const char* name;
    double dq_dp, dq_dl, dd_dp, dd_dl;
};

constexpr double kThird = 1.0 / 3.0;

const LawRow kSidewaysRows[] = {
    {1, 1, "x-pq-y, x-pq-▲", 0.0, 0.0, 1.0, 1.0},
    {1, 2, "x-pq-y, x-pq-•, x-T-•", kThird, kThird, 2 * kThird, 2 * kThird},
    {1, 3, "x-pq-y, x-T-▲", 1.0, 1.0, 0.0, 0.0},
    {1, 4, "x-pq-y, ▲-p-o, ▲-q-o", 1.0, kThird, 0.0, 2 * kThird},
};

const LawRow kOutRows[] = {
    {2, 1, "x-pq-▲, ▲-pq-y", 1.0, 0.0, 0.0, 1.0},
    {2, 2, "x-pq-▲, •-y", 1.0, kThird, 0.0, 2 * kThird},
    {2, 3, "x-pq-▲, ▲-T-y", 1.0, 1.0, 0.0, 0.0},
    {2, 4, "x-•, ▲-pq-y", 1.0, -kThird, 0.0, 2 * kThird},
    {2, 5, "x-•, •-y", 1.0, 0.0, 0.0, 0.5},
    {2, 6, "x-•, ▲-T-y", 1.0, 1.0, 0.0, 0.0},
    {2, 7, "x-T-▲, ▲-pq-y", 1.0, -1.0, 0.0, 0.0},
    {2, 8, "x-T-▲, •-y", 1.0, -1.0, 0.0, 0.0},
    {2, 9, "x-T-▲, ▲-T-y", 1.0, 0.0, 0.0, 0.0},
};

SpeedLaw law_of(const LawRow& r) { return SpeedLaw{r.table, r.row, r.name}; }

const LawRow& row_of(const SpeedLaw& law) {
    return law.table == 1 ? kSidewaysRows[law.row - 1] : kOutRows[law.row - 1];
}

std::string swap_xy(const std::string& part) {
    if (part == "x") return "y";
    if (part == "y") return "x";
    return part;
}

std::string swap_pq(const std::string& part) {
    if (part == "p") return "q";
    if (part == "q") return "p";
    return part;
}

// Descriptor of the same path read from the other end of the backbone.
std::string mirror_descriptor(const std::string& d) {
    auto first = d.find('-');
    auto last = d.rfind('-');
    std::string a = d.substr(0, first), m = d.substr(first + 1, last - first - 1), b = d.substr(last + 1);
    if (b == "o") return a + "-" + swap_pq(m) + "-" + b;
    return swap_xy(b) + "-" + m + "-" + swap_xy(a);
}

std::set<std::string> mirrored_state(const std::set<std::string>& state) {
    std::set<std::string> out;
    for (auto& d : state) out.insert(mirror_descriptor(d));
    return out;
}

}  // namespace

double SpeedLaw::dq(double dp, double dl) const {
    const auto& r = row_of(*this);
    return r.dq_dp * dp + r.dq_dl * dl;
}

double SpeedLaw::delta_diameter(double dp, double dl) const {
    const auto& r = row_of(*this);
    return r.dd_dp * dp + r.dd_dl * dl;
}

std::optional<SpeedLaw> speed_law(Phase phase, const std::set<std::string>& in) {
    const std::set<std::string> state = phase == Phase::IIy ? mirrored_state(in) : in;
    if (phase == Phase::IIx || phase == Phase::IIy) {
        const std::set<std::string> rows[] = {
            {"x-pq-y", "x-pq-▲"},
            {"x-pq-y", "x-pq-•", "x-T-•"},
            {"x-pq-y", "x-T-▲"},
            {"x-pq-y", "▲-p-o", "▲-q-o"},
        };
        for (int k = 0; k < 4; ++k)
            if (state == rows[k]) return law_of(kSidewaysRows[k]);
        return std::nullopt;
    }
    if (phase == Phase::III) {
        const std::set<std::string> xs[] = {{"x-pq-▲"}, {"x-pq-•", "x-T-•"}, {"x-T-▲"}};
        const std::set<std::string> ys[] = {{"▲-pq-y"}, {"•-pq-y", "•-T-y"}, {"▲-T-y"}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                std::set<std::string> want = xs[i];
                want.insert(ys[j].begin(), ys[j].end());
                if (state == want) return law_of(kOutRows[3 * i + j]);
            }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// balance

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxBisect = 200;

enum Fam : unsigned { kXY = 1, kXB = 2, kBY = 4, kSC = 8, kSO = 16, kSSPQ = 32, kSSTREE = 64 };

unsigned tight_families(const CaterpillarView::Families& f, double tol) {
    unsigned m = 0;
    const double lim = f.diameter - tol;
    if (f.xy >= lim) m |= kXY;
    if (f.xb >= lim) m |= kXB;
    if (f.by >= lim) m |= kBY;
    if (f.sc >= lim) m |= kSC;
    if (f.so >= lim) m |= kSO;
    if (f.ss_pq >= lim) m |= kSSPQ;
    if (f.ss_tree >= lim) m |= kSSTREE;
    return m;
}

double sideways_target(const CaterpillarView::Families& f, bool with_xb, bool with_so) {
    double g = kNegInf;
    if (with_xb) g = std::max(g, f.xb);
    if (with_so) g = std::max(g, f.so);
    return g;
}

double view_scale(const CaterpillarView& v) { return v.tol() / 1e-9; }

// Sign change of a continuous g inside [lo, hi] with g(lo) < 0 <= g(hi), by
// the Illinois variant of regula falsi.  A bisection step is forced whenever
// three steps failed to halve the bracket.  Returns a point with g >= 0.
template <class G>
double crossing(G&& g, double lo, double glo, double hi, double ghi, double width) {
    int side = 0, stalled = 0;
    double last_width = hi - lo;
    for (int k = 0; k < 300 && hi - lo > width; ++k) {
        double x = hi - ghi * (hi - lo) / (ghi - glo);
        if (stalled >= 3 || !(x > lo && x < hi)) {
            x = 0.5 * (lo + hi);
            stalled = 0;
        }
        double gx = g(x);
        if (gx >= 0.0) {
            hi = x;
            ghi = gx;
            if (side == 1) glo *= 0.5;
            side = 1;
        } else {
            lo = x;
            glo = gx;
            if (side == -1) ghi *= 0.5;
            side = -1;
        }
        if (hi - lo > 0.5 * last_width) {
            ++stalled;
        } else {
            stalled = 0;
            last_width = hi - lo;
        }
    }
    return hi;
}

// Bracket of width <= width around a minimum of f on [lo, hi].
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double width) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < 200 && hi - lo > width; ++k) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    return {lo, hi};
}

}  // namespace

double balance_solve(const CaterpillarView& view, double s, double t_lo, double t_hi, bool with_xb, bool with_so) {
    auto gap = [&](double t) {
        auto f = view.evaluate(s, t);
        return f.xy - sideways_target(f, with_xb, with_so);
    };
    if (t_hi <= t_lo) return t_hi;
    if (gap(t_hi) >= 0.0) return t_hi;
    if (gap(t_lo) < 0.0) throw NoRootInBracket();
    const double width = 1e-13 * view_scale(view);
    auto neg = [&](double t) { return -gap(t); };
    return crossing(neg, t_lo, neg(t_lo), t_hi, neg(t_hi), width);
}

namespace {

// q position balancing x-■ against ■-y for p at arc s during an out-shift,
// searched in [t_lo, length].  When the balance holds on a whole interval
// (both sides pinned by tree paths) the prediction t_pred is kept inside it.
double out_balance(const CaterpillarView& view, double s, double t_lo, double t_pred, bool& clamped) {
    clamped = false;
    const double L = view.length();
    const double eps = 1e-12 * view_scale(view), width = 1e-13 * view_scale(view);
    auto gap = [&](double t) {
        auto f = view.evaluate(s, t);
        return f.xb - f.by;
    };
    const double g_lo = gap(t_lo);
    if (g_lo > eps) return t_lo;
    const double g_hi = gap(L);
    if (g_hi < -eps) {
        clamped = true;
        return L;
    }
    // first t with gap >= -eps
    auto lower = [&](double t) { return gap(t) + eps; };
    const double t1 = g_lo >= -eps ? t_lo : crossing(lower, t_lo, g_lo + eps, L, g_hi + eps, width);
    t_pred = std::clamp(t_pred, t1, L);
    const double g_pred = gap(t_pred);
    if (g_pred <= eps) return t_pred;
    // last t with gap <= eps, below t_pred
    auto upper = [&](double t) { return gap(t) - eps - 1e-300; };
    return crossing(upper, t1, gap(t1) - eps - 1e-300, t_pred, g_pred - eps, width);
}

// ---------------------------------------------------------------------------
// the sweep

struct Sample {
    double u = 0.0;
    double s = 0.0, t = 0.0;
    bool clamped = false;  // the follower hit the end of its range
    CaterpillarView::Families f;
    unsigned signature = 0;
};

enum class Stop { None, SegmentEnd, Condition, Signature, GrowShrink };

struct BranchResult {
    double best = std::numeric_limits<double>::infinity();
    double best_s = 0.0, best_t = 0.0;  // real arcs from a
    Phase phase = Phase::I;
    TerminalReason reason = TerminalReason::None;
};

class Sweep {
public:
    Sweep(const GeometricTree& tree, const BackboneDecomposition& dec, const OptimizeOptions& opt, OptimizeResult& out)
        : tree_(tree), dec_(dec), opt_(opt), out_(out), forward_(tree, dec), backward_(forward_.mirrored()) {
        tol_ = forward_.tol();
        scale_ = view_scale(forward_);
        arcs_forward_.assign(dec.secondary.size(), 0.0);
        arcs_backward_.assign(dec.secondary.size(), 0.0);
        for (const auto& pd : forward_.pendants()) arcs_forward_[static_cast<std::size_t>(pd.index)] = pd.arc;
        for (const auto& pd : backward_.pendants()) arcs_backward_[static_cast<std::size_t>(pd.index)] = pd.arc;
        // smallest feature along the backbone: vertex gaps and pendant heights
        feature_ = dec.length;
        const auto& arcs = forward_.vertex_arcs();
        for (std::size_t k = 1; k < arcs.size(); ++k)
            if (arcs[k] - arcs[k - 1] > tol_) feature_ = std::min(feature_, arcs[k] - arcs[k - 1]);
        for (const auto& pd : forward_.pendants())
            if (pd.height > tol_) feature_ = std::min(feature_, pd.height);
    }

    void run();
    BranchResult best() const { return best_; }

private:
    // motion along the current phase, anchored at the last event
    struct Motion {
        Phase phase = Phase::I;
        const CaterpillarView* view = nullptr;
        double u0 = 0.0, s0 = 0.0, t0 = 0.0;
        bool with_xb = false, with_so = false;  // sideways balance families
    };

    Sample sample(const Motion& m, double u);
    unsigned signature(const Motion& m, double s, double t, const CaterpillarView::Families& f) const;
    bool condition(const Motion& m, const Sample& x, unsigned watched) const;
    double pendant_arc(const CaterpillarView& view, int secondary) const;
    bool useful_for_x(const CaterpillarView& view, double s, double t, double ell, int secondary) const;
    bool useful_for_y(const CaterpillarView& view, double s, double t, double ell, int secondary) const;
    void update_holds(const Motion& m, const Sample& x);
    double condition_value(const Motion& m, const Sample& x, unsigned watched) const;
    double next_breakpoint(const Motion& m, double u) const;
    double phase_end(const Motion& m) const;

    // Advance until the next event; returns the event sample.
    Stop scan(const Motion& m, Sample& from, double u_end, unsigned watched, bool& growing, bool& growing_known,
              Sample& event);
    void record_segment(const Motion& m, const Sample& a, const Sample& b, const std::vector<Sample>& inner);
    void record_event(EventKind kind, const Motion& m, const Sample& x, std::string payload,
                      TerminalReason reason = TerminalReason::None);
    std::set<std::string> path_state(const Motion& m, const Sample& x) const;
    std::pair<double, double> real_arcs(const Motion& m, double s, double t) const;

    BranchResult run_phase1(Sample& at);
    BranchResult run_sideways(const CaterpillarView& view, Sample start, unsigned active);
    BranchResult run_out(const CaterpillarView& view, Phase entry, Sample start, std::size_t first_segment);
    void wedge_postprocess(const Motion& m, std::size_t first_segment, std::size_t first_event, BranchResult& r);
    void consider(BranchResult& r, const BranchResult& other) const;
    void track_best(BranchResult& r, std::size_t from_segment) const;

    const GeometricTree& tree_;
    const BackboneDecomposition& dec_;
    const OptimizeOptions& opt_;
    OptimizeResult& out_;
    CaterpillarView forward_;
    CaterpillarView backward_;
    double tol_ = 0.0, scale_ = 1.0;
    BranchResult best_;

    // minimum diameter seen in each recorded segment, with its real arcs
    struct SegmentMin {
        double diameter, s, t;
    };
    std::vector<SegmentMin> seg_min_;
    struct SegmentRecord {
        Motion motion;
        Sample a, b;
        long long output_index;  // position in out_.segments, -1 if not kept
    };
    std::vector<SegmentRecord> records_;
    // pendant arcs by secondary index, in each view
    std::vector<double> arcs_forward_, arcs_backward_;
    // secondary whose x-T-s_i (s_i-T-y) path holds the out-shift x (y) component
    int frozen_x_ = -1, frozen_y_ = -1;
    double feature_ = 1.0;
    static constexpr int kMaxSamples = 256;
    static constexpr unsigned kHeldX = 1u << 1;  // bits of the x-y subtype, unused in an out-shift
    static constexpr unsigned kHeldY = 1u << 2;
};

std::pair<double, double> Sweep::real_arcs(const Motion& m, double s, double t) const {
    if (m.view->is_mirrored()) return {m.view->length() - t, m.view->length() - s};
    return {s, t};
}

Sample Sweep::sample(const Motion& m, double u) {
    Sample x;
    x.u = u;
    const auto& v = *m.view;
    const double gamma = v.center_arc(), L = v.length();
    if (m.phase == Phase::I) {
        x.s = std::max(0.0, gamma - u);
        x.t = std::min(L, gamma + u);
    } else if (m.phase == Phase::III) {
        x.s = std::max(0.0, m.s0 - (u - m.u0));
        x.t = out_balance(v, x.s, m.t0, m.t0 + (u - m.u0), x.clamped);
    } else {
        x.s = std::max(0.0, m.s0 - (u - m.u0));
        try {
            x.t = balance_solve(v, x.s, v.center_arc(), m.t0, m.with_xb, m.with_so);
        } catch (const NoRootInBracket&) {
            x.t = v.center_arc();
            x.clamped = true;
        }
    }
    x.f = v.evaluate(x.s, x.t);
    x.signature = signature(m, x.s, x.t, x.f);
    ++out_.counters.evaluations;
    return x;
}

unsigned Sweep::signature(const Motion& m, double s, double t, const CaterpillarView::Families& f) const {
    unsigned mask = m.view->tight_mask(s, t, f);
    if (m.phase != Phase::III) return mask;
    auto bits_of = [&](std::initializer_list<PairSubType> subs) {
        unsigned b = 0;
        for (auto sub : subs)
            for (PathType pt : {PathType::ViaShortcut, PathType::ViaTree, PathType::ViaP, PathType::ViaQ})
                b |= term_bit(sub, pt);
        return b;
    };
    unsigned xcomp = mask & bits_of({PairSubType::XS, PairSubType::XC});
    unsigned ycomp = mask & bits_of({PairSubType::SY, PairSubType::CY});
    if (!opt_.diagnostic) {
        // Once x-T-s_i is diametral the x component is ignored until pq is
        // useful for (x, s_i) again; likewise for the y component.
        const double ell = f.ell;
        const bool held_x = frozen_x_ >= 0 && !useful_for_x(*m.view, s, t, ell, frozen_x_);
        const bool held_y = frozen_y_ >= 0 && !useful_for_y(*m.view, s, t, ell, frozen_y_);
        if (held_x || (mask & term_bit(PairSubType::XS, PathType::ViaTree))) xcomp = kHeldX;
        if (held_y || (mask & term_bit(PairSubType::SY, PathType::ViaTree))) ycomp = kHeldY;
    }
    return xcomp | ycomp;
}

double Sweep::pendant_arc(const CaterpillarView& view, int secondary) const {
    const auto& arcs = view.is_mirrored() ? arcs_backward_ : arcs_forward_;
    return arcs[static_cast<std::size_t>(secondary)];
}

bool Sweep::useful_for_x(const CaterpillarView& view, double s, double t, double ell, int secondary) const {
    const double rho = pendant_arc(view, secondary);
    if (rho < s) return false;
    const double via = rho > t ? s + ell + (rho - t) : s + ell + (t - rho);
    return via < rho - tol_;
}

bool Sweep::useful_for_y(const CaterpillarView& view, double s, double t, double ell, int secondary) const {
    const double rho = pendant_arc(view, secondary);
    const double L = view.length();
    if (rho > t) return false;
    const double via = rho < s ? (s - rho) + ell + (L - t) : (rho - s) + ell + (L - t);
    return via < (L - rho) - tol_;
}

// Update the held components at an out-shift event.
void Sweep::update_holds(const Motion& m, const Sample& x) {
    if (opt_.diagnostic) return;
    const auto& view = *m.view;
    if (frozen_x_ >= 0 && useful_for_x(view, x.s, x.t, x.f.ell, frozen_x_)) frozen_x_ = -1;
    if (frozen_y_ >= 0 && useful_for_y(view, x.s, x.t, x.f.ell, frozen_y_)) frozen_y_ = -1;
    if (frozen_x_ >= 0 && frozen_y_ >= 0) return;
    for (const auto& term : view.tight_terms(x.s, x.t)) {
        if (!(term.paths & path_bit(PathType::ViaTree))) continue;
        if (term.subtype == PairSubType::XS && frozen_x_ < 0) frozen_x_ = term.i;
        if (term.subtype == PairSubType::SY && frozen_y_ < 0) frozen_y_ = term.i >= 0 ? term.i : term.j;
    }
}

// Whether a watched family has caught up with the balanced diameter, or the
// diameter reached the sub-tree floor.
bool Sweep::condition(const Motion& m, const Sample& x, unsigned watched) const {
    return condition_value(m, x, watched) >= 0.0;
}

double Sweep::condition_value(const Motion& m, const Sample& x, unsigned watched) const {
    const auto& f = x.f;
    const double floor_gap = dec_.delta + tol_ - f.diameter;
    double level = m.phase == Phase::III ? std::max(f.xb, f.by) : f.xy;
    double w = kNegInf;
    if (watched & kXB) w = std::max(w, f.xb);
    if (watched & kBY) w = std::max(w, f.by);
    if (watched & kSC) w = std::max(w, f.sc);
    if (watched & kSO) w = std::max(w, f.so);
    if (watched & kSSPQ) w = std::max(w, f.ss_pq);
    if (watched & kSSTREE) w = std::max(w, f.ss_tree);
    return std::max(floor_gap, w - level);
}

double Sweep::phase_end(const Motion& m) const {
    const auto& v = *m.view;
    if (m.phase == Phase::I) return std::max(v.center_arc(), v.length() - v.center_arc());
    return m.u0 + m.s0;
}

// Next parameter at which p (or q in phase I) reaches a vertex or a
// midpoint, strictly after u.
double Sweep::next_breakpoint(const Motion& m, double u) const {
    const auto& v = *m.view;
    const auto& arcs = v.vertex_arcs();
    const double gamma = v.center_arc(), L = v.length();
    const double eps = 1e-12 * scale_;
    double best = phase_end(m);
    auto offer = [&](double cand) {
        if (cand > u + eps && cand < best) best = cand;
    };
    if (m.phase == Phase::I) {
        for (double a : arcs) {
            if (a < gamma) offer(gamma - a);
            if (a > gamma) offer(a - gamma);
        }
        offer(gamma);
        offer(L - gamma);
        for (const auto& pd : v.pendants()) {
            // q passes the point equidistant from y and the pendant leaf,
            // p the point equidistant from x and the pendant leaf
            double tq = 0.5 * (L + v.h_y() + pd.arc - pd.height);
            if (tq > gamma && tq < L) offer(tq - gamma);
            double sp = 0.5 * (pd.arc + pd.height - v.h_x());
            if (sp > 0.0 && sp < gamma) offer(gamma - sp);
        }
        return best;
    }
    const double s = m.s0 - (u - m.u0);
    for (double a : arcs)
        if (a < s - eps) offer(m.u0 + m.s0 - a);
    return best;
}

std::set<std::string> Sweep::path_state(const Motion& m, const Sample& x) const {
    unsigned mask = m.view->tight_mask(x.s, x.t, x.f);
    std::set<std::string> out;
    for (int sub = 0; sub < 8; ++sub)
        for (PathType pt : {PathType::ViaShortcut, PathType::ViaTree, PathType::ViaP, PathType::ViaQ})
            if (mask & term_bit(static_cast<PairSubType>(sub), pt)) {
                auto d = path_descriptor(static_cast<PairSubType>(sub), pt);
                out.insert(m.view->is_mirrored() ? mirror_descriptor(d) : d);
            }
    return out;
}

void Sweep::record_event(EventKind kind, const Motion& m, const Sample& x, std::string payload,
                         TerminalReason reason) {
    ++out_.counters.events;
    if (kind == EventKind::GrowShrinkSwitch) ++out_.counters.grow_shrink_switches;
    if (kind == EventKind::PathStateChange && m.phase == Phase::III) ++out_.counters.phase3_state_changes;
    if (!opt_.trace) return;
    Event e;
    e.kind = kind;
    e.phase = m.phase;
    e.parameter = x.u;
    auto [ps, pt] = real_arcs(m, x.s, x.t);
    e.p_arc = ps;
    e.q_arc = dec_.length - pt;
    e.diameter = x.f.diameter;
    double best = best_.best;
    for (auto& sm : seg_min_) best = std::min(best, sm.diameter);
    e.best_diameter = std::min(best, x.f.diameter);
    e.payload = std::move(payload);
    e.path_state = path_state(m, x);
    e.reason = reason;
    out_.trace.push_back(std::move(e));
}

void Sweep::record_segment(const Motion& m, const Sample& a, const Sample& b, const std::vector<Sample>& inner) {
    ++out_.counters.segments;
    // minimum of the diameter over the segment: best sample, refined by a
    // golden section search when it lies strictly inside
    std::vector<const Sample*> pts{&a};
    for (auto& x : inner)
        if (x.u > a.u && x.u < b.u) pts.push_back(&x);
    pts.push_back(&b);
    std::size_t arg = 0;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (pts[k]->f.diameter < pts[arg]->f.diameter) arg = k;
    Sample best = *pts[arg];
    auto f = [&](double u) {
        Sample x = sample(m, u);
        if (x.f.diameter < best.f.diameter) best = x;
        return x.f.diameter;
    };
    if (arg > 0 && arg + 1 < pts.size()) {
        golden_min(f, pts[arg - 1]->u, pts[arg + 1]->u, 1e-10 * scale_);
    } else if (pts.size() > 1) {
        // a minimum at an end sample may still hide a dip next to it
        const Sample& end = *pts[arg];
        const Sample& next = *pts[arg == 0 ? 1 : arg - 1];
        const double probe = end.u + 1e-3 * (next.u - end.u);
        if (f(probe) < end.f.diameter - 1e-12 * scale_)
            golden_min(f, std::min(end.u, next.u), std::max(end.u, next.u), 1e-10 * scale_);
    }
    auto [bs, bt] = real_arcs(m, best.s, best.t);
    seg_min_.push_back({best.f.diameter, bs, bt});

    SweepSegment seg;
    seg.phase = m.phase;
    auto [p0, t0] = real_arcs(m, a.s, a.t);
    auto [p1, t1] = real_arcs(m, b.s, b.t);
    seg.p0 = p0;
    seg.t0 = t0;
    seg.p1 = p1;
    seg.t1 = t1;
    seg.diameter0 = a.f.diameter;
    seg.min_diameter = best.f.diameter;
    seg.leader_is_q = m.view->is_mirrored() && m.phase != Phase::I;
    if (opt_.probes_per_segment > 0 && b.u - a.u > 1e-9 * scale_) {
        // state strictly inside the segment, away from its end events
        double span = b.u - a.u;
        Sample mid = sample(m, a.u + 0.5 * span);
        Sample early = sample(m, a.u + 1e-3 * span), late = sample(m, b.u - 1e-3 * span);
        Motion full = m;
        auto st = path_state(full, mid);
        seg.path_state = st;
        seg.uniform_state = path_state(full, early) == st && path_state(full, late) == st;
        std::set<std::string> view_state;
        unsigned mask = m.view->tight_mask(mid.s, mid.t, mid.f);
        for (int sub = 0; sub < 8; ++sub)
            for (PathType pt : {PathType::ViaShortcut, PathType::ViaTree, PathType::ViaP, PathType::ViaQ})
                if (mask & term_bit(static_cast<PairSubType>(sub), pt))
                    view_state.insert(path_descriptor(static_cast<PairSubType>(sub), pt));
        Phase law_phase = m.phase == Phase::IIy ? Phase::IIx : m.phase;
        if (seg.uniform_state) seg.law = speed_law(law_phase, view_state);
        for (int k = 1; k <= opt_.probes_per_segment; ++k) {
            Sample pr = sample(m, a.u + span * k / (opt_.probes_per_segment + 1));
            seg.probes.push_back(real_arcs(m, pr.s, pr.t));
        }
    }
    long long kept = -1;
    if (opt_.trace || opt_.probes_per_segment > 0) {
        kept = static_cast<long long>(out_.segments.size());
        out_.segments.push_back(std::move(seg));
    }
    records_.push_back({m, a, b, kept});
}

Stop Sweep::scan(const Motion& m, Sample& from, double u_end, unsigned watched, bool& growing, bool& growing_known,
                 Sample& event) {
    // enough samples that two state changes rarely fall between neighbours
    const int K = std::clamp(static_cast<int>(std::ceil((u_end - from.u) / (0.25 * feature_))),
                             std::max(2, opt_.samples_per_segment), kMaxSamples);
    const double eps_u = 1e-12 * scale_;
    std::vector<Sample> inner;
    if (condition(m, from, watched)) {
        event = from;
        record_segment(m, from, from, inner);
        return Stop::Condition;
    }
    // the state at an event is the union of the states on both sides; compare
    // against the state just after it
    const double du = std::min(1e-7 * scale_, (u_end - from.u) / 1000.0);
    if (du > 0.0) {
        Sample right = sample(m, from.u + du);
        from.signature = right.signature;
        // direction of |pq| right after the event
        if (std::abs(right.f.ell - from.f.ell) > 1e-3 * du) {
            growing = right.f.ell > from.f.ell;
            growing_known = true;
        }
    }
    // the follower's vertex crossings end a segment as well
    const auto& arcs = m.view->vertex_arcs();
    auto follower_crossing = [&](const Sample& a, const Sample& b) -> double {
        if (m.phase == Phase::I) return -1.0;
        for (double arc : arcs) {
            bool crossed = m.phase == Phase::III ? (a.t < arc - eps_u && b.t >= arc - eps_u)
                                                 : (a.t > arc + eps_u && b.t <= arc + eps_u);
            if (!crossed) continue;
            auto past = [&](double u) {
                double t = sample(m, u).t;
                return m.phase == Phase::III ? t - (arc - eps_u) : (arc + eps_u) - t;
            };
            return crossing(past, a.u, past(a.u), b.u, past(b.u), eps_u);
        }
        return -1.0;
    };

    Sample prev = from;
    double prev_slope = 0.0;
    for (int i = 1; i <= K; ++i) {
        double u = from.u + (u_end - from.u) * i / K;
        Sample cur = sample(m, u);
        struct Cand {
            double u;
            Stop kind;
        };
        std::vector<Cand> cands;
        if (condition(m, cur, watched)) {
            auto g = [&](double u) { return condition_value(m, sample(m, u), watched); };
            cands.push_back({crossing(g, prev.u, condition_value(m, prev, watched), cur.u,
                                      condition_value(m, cur, watched), eps_u),
                             Stop::Condition});
        }
        if (cur.signature != prev.signature) {
            double lo = prev.u, hi = cur.u;
            for (int k = 0; k < kMaxBisect && hi - lo > eps_u; ++k) {
                double mid = 0.5 * (lo + hi);
                (sample(m, mid).signature != prev.signature ? hi : lo) = mid;
            }
            cands.push_back({hi, Stop::Signature});
        }
        double slope = cur.f.ell - prev.f.ell;
        if (std::abs(slope) > 1e-12 * scale_) {
            bool up = slope > 0.0;
            if (growing_known && up != growing) {
                // extremum of |pq| between the previous two samples
                double lo = i >= 2 ? prev.u - (cur.u - prev.u) : prev.u, hi = cur.u;
                lo = std::max(lo, from.u);
                // growing before the switch means a maximum
                const double sign = growing ? -1.0 : 1.0;
                auto [lo_u, hi_u] = golden_min([&](double u) { return sign * sample(m, u).f.ell; }, lo, hi, eps_u);
                double at = std::max(0.5 * (lo_u + hi_u), from.u + eps_u);
                cands.push_back({at, Stop::GrowShrink});
            }
            if (!growing_known) {
                growing = up;
                growing_known = true;
            }
        }
        (void)prev_slope;
        prev_slope = slope;
        double cross = follower_crossing(prev, cur);
        if (cross >= 0.0) cands.push_back({cross, Stop::SegmentEnd});
        if (!cands.empty()) {
            auto first = *std::min_element(cands.begin(), cands.end(),
                                           [](const Cand& l, const Cand& r) { return l.u < r.u; });
            for (auto& c : cands)
                if (c.kind == Stop::Condition && c.u <= first.u + 1e-9 * scale_) first = c;
            event = sample(m, first.u);
            if (first.kind != Stop::Condition && condition(m, event, watched)) {
                // a family overtook the level and fell back before the next sample
                auto g = [&](double u) { return condition_value(m, sample(m, u), watched); };
                first = {crossing(g, prev.u, condition_value(m, prev, watched), event.u,
                                  condition_value(m, event, watched), eps_u),
                         Stop::Condition};
                event = sample(m, first.u);
            }
            if (first.kind == Stop::GrowShrink) growing = !growing;
            record_segment(m, from, event, inner);
            return first.kind;
        }
        inner.push_back(cur);
        prev = cur;
    }
    event = prev;
    record_segment(m, from, event, inner);
    return Stop::SegmentEnd;
}

void Sweep::track_best(BranchResult& r, std::size_t from_segment) const {
    for (std::size_t k = from_segment; k < seg_min_.size(); ++k)
        if (seg_min_[k].diameter < r.best) {
            r.best = seg_min_[k].diameter;
            r.best_s = seg_min_[k].s;
            r.best_t = seg_min_[k].t;
        }
}

// Adopt the terminal state of a later branch, keeping the better minimum.
void Sweep::consider(BranchResult& r, const BranchResult& other) const {
    r.phase = other.phase;
    r.reason = other.reason;
    if (other.best < r.best) {
        r.best = other.best;
        r.best_s = other.best_s;
        r.best_t = other.best_t;
    }
}

namespace {

// event kind for a family that just became diametral
EventKind appearance_kind(unsigned mask_before, unsigned mask_after) {
    unsigned fresh = mask_after & ~mask_before;
    if (fresh & (term_bit(PairSubType::XS, PathType::ViaTree) | term_bit(PairSubType::SY, PathType::ViaTree)))
        return EventKind::DiameterThreshold;
    unsigned cyc = 0;
    for (auto sub : {PairSubType::XC, PairSubType::CY, PairSubType::SC, PairSubType::SO})
        for (PathType pt : {PathType::ViaShortcut, PathType::ViaTree, PathType::ViaP, PathType::ViaQ})
            cyc |= term_bit(sub, pt);
    if (fresh & cyc) return EventKind::CycleCandidate;
    return EventKind::PathStateChange;
}

}  // namespace

BranchResult Sweep::run_phase1(Sample& at) {
    Motion m;
    m.phase = Phase::I;
    m.view = &forward_;
    at = sample(m, 0.0);
    const unsigned watched = kXB | kBY | kSO | kSC | kSSPQ | kSSTREE;
    const double end = phase_end(m);
    bool growing = true, known = true;
    BranchResult r;
    r.phase = Phase::I;
    std::size_t seg0 = seg_min_.size();
    for (int guard = 0; guard < 1000000; ++guard) {
        double u_end = next_breakpoint(m, at.u);
        Sample ev;
        unsigned before = m.view->tight_mask(at.s, at.t, at.f);
        Stop why = scan(m, at, u_end, watched, growing, known, ev);
        if (why == Stop::Condition) {
            at = ev;
            track_best(r, seg0);
            if (at.f.diameter <= dec_.delta + tol_) {
                record_event(EventKind::Terminal, m, at, "diameter reached delta", TerminalReason::DiameterFloor);
                r.reason = TerminalReason::DiameterFloor;
                return r;
            }
            record_event(appearance_kind(before, m.view->tight_mask(at.s, at.t, at.f)), m, at, "second pair type");
            return r;  // caller dispatches on the pair state
        }
        at = ev;
        if (why == Stop::Signature) {
            record_event(EventKind::PathStateChange, m, at, "");
        } else if (why == Stop::GrowShrink) {
            record_event(EventKind::GrowShrinkSwitch, m, at, "");
        } else if (at.u >= end - 1e-12 * scale_) {
            track_best(r, seg0);
            record_event(EventKind::Terminal, m, at, "pq reached ab", TerminalReason::BothEnds);
            r.reason = TerminalReason::BothEnds;
            return r;
        } else {
            bool p_vertex = false, q_vertex = false;
            for (double a : m.view->vertex_arcs()) {
                if (std::abs(a - at.s) <= 1e-12 * scale_) p_vertex = true;
                if (std::abs(a - at.t) <= 1e-12 * scale_) q_vertex = true;
            }
            if (at.s <= 1e-12 * scale_) p_vertex = true;
            if (at.t >= dec_.length - 1e-12 * scale_) q_vertex = true;
            if (p_vertex || q_vertex)
                record_event(EventKind::VertexReached, m, at, p_vertex && q_vertex ? "p,q" : p_vertex ? "p" : "q");
            else
                record_event(EventKind::MidpointReached, m, at, "");
        }
    }
    return r;
}

BranchResult Sweep::run_sideways(const CaterpillarView& view, Sample start, unsigned active) {
    Motion m;
    m.phase = view.is_mirrored() ? Phase::IIy : Phase::IIx;
    m.view = &view;
    m.u0 = 0.0;
    m.s0 = start.s;
    m.t0 = start.t;
    m.with_xb = active & kXB;
    m.with_so = active & kSO;
    BranchResult r;
    r.phase = m.phase;
    std::size_t seg0 = seg_min_.size();
    Sample at = sample(m, 0.0);
    bool growing = true, known = false;
    for (int guard = 0; guard < 1000000; ++guard) {
        unsigned watched = (kBY | kSC | kSSPQ | kSSTREE) | (m.with_xb ? 0u : kXB) | (m.with_so ? 0u : kSO);
        if (at.clamped) {
            track_best(r, seg0);
            record_event(EventKind::Terminal, m, at, "balance lost", TerminalReason::NoRootInBracket);
            r.reason = TerminalReason::NoRootInBracket;
            return r;
        }
        if (at.s <= 0.0) {
            track_best(r, seg0);
            bool q_lead = view.is_mirrored();
            auto reason = q_lead ? TerminalReason::QAtB : TerminalReason::PAtA;
            record_event(EventKind::Terminal, m, at, q_lead ? "q reached b" : "p reached a", reason);
            r.reason = reason;
            return r;
        }
        double u_end = next_breakpoint(m, at.u);
        Sample ev;
        unsigned before = m.view->tight_mask(at.s, at.t, at.f);
        Stop why = scan(m, at, u_end, watched, growing, known, ev);
        at = ev;
        if (why == Stop::Condition) {
            track_best(r, seg0);
            unsigned fam = tight_families(at.f, tol_);
            EventKind kind = appearance_kind(before, m.view->tight_mask(at.s, at.t, at.f));
            if (at.f.diameter <= dec_.delta + tol_) {
                record_event(EventKind::Terminal, m, at, "diameter reached delta", TerminalReason::DiameterFloor);
                r.reason = TerminalReason::DiameterFloor;
                return r;
            }
            if (fam & (kSC | kSSPQ | kSSTREE)) {
                record_event(EventKind::Terminal, m, at, "x-y with ■-■", TerminalReason::XYWithSS);
                r.reason = TerminalReason::XYWithSS;
                return r;
            }
            if (fam & kBY) {
                bool xb = m.with_xb || (fam & kXB), so = m.with_so || (fam & kSO);
                if (xb && !so) {
                    record_event(kind, m, at, "enter out-shift");
                    BranchResult next = run_out(view, m.phase, at, seg0);
                    track_best(next, seg0);
                    return next;
                }
                auto reason = xb ? TerminalReason::BlockedState : TerminalReason::XYWithSOAndSY;
                record_event(EventKind::Terminal, m, at, "blocked", reason);
                r.reason = reason;
                return r;
            }
            // another sideways family joins the balance
            if (fam & kXB) m.with_xb = true;
            if (fam & kSO) m.with_so = true;
            record_event(kind, m, at, "pair state grows");
        } else if (why == Stop::Signature) {
            record_event(EventKind::PathStateChange, m, at, "");
        } else if (why == Stop::GrowShrink) {
            record_event(EventKind::GrowShrinkSwitch, m, at, "");
        } else {
            record_event(EventKind::VertexReached, m, at, "");
        }
        m.u0 = at.u;
        m.s0 = at.s;
        m.t0 = at.t;
    }
    return r;
}

BranchResult Sweep::run_out(const CaterpillarView& view, Phase entry, Sample start, std::size_t first_segment) {
    (void)entry;
    Motion m;
    m.phase = Phase::III;
    m.view = &view;
    m.u0 = 0.0;
    m.s0 = start.s;
    m.t0 = start.t;
    BranchResult r;
    r.phase = Phase::III;
    const std::size_t seg0 = seg_min_.size();
    const std::size_t ev0 = out_.trace.size();
    frozen_x_ = frozen_y_ = -1;
    Sample at = sample(m, 0.0);
    update_holds(m, at);
    at.signature = signature(m, at.s, at.t, at.f);
    bool growing = true, known = false;
    const unsigned watched = kSC | kSO;
    for (int guard = 0; guard < 1000000; ++guard) {
        if (at.s <= 0.0 || at.clamped || at.t >= view.length()) {
            bool p_end = at.s <= 0.0;
            if (view.is_mirrored()) p_end = !p_end;
            auto reason = p_end ? TerminalReason::PAtA : TerminalReason::QAtB;
            record_event(EventKind::Terminal, m, at, p_end ? "p reached a" : "q reached b", reason);
            r.reason = reason;
            break;
        }
        double u_end = next_breakpoint(m, at.u);
        Sample ev;
        unsigned before = m.view->tight_mask(at.s, at.t, at.f);
        Stop why = scan(m, at, u_end, watched, growing, known, ev);
        at = ev;
        if (why == Stop::Condition) {
            if (at.f.diameter <= dec_.delta + tol_) {
                record_event(EventKind::Terminal, m, at, "diameter reached delta", TerminalReason::DiameterFloor);
                r.reason = TerminalReason::DiameterFloor;
            } else {
                (void)before;
                record_event(EventKind::Terminal, m, at, "■-■ or ■-o joins", TerminalReason::BlockedState);
                r.reason = TerminalReason::BlockedState;
            }
            break;
        } else if (why == Stop::Signature) {
            record_event(EventKind::PathStateChange, m, at, "");
        } else if (why == Stop::GrowShrink) {
            record_event(EventKind::GrowShrinkSwitch, m, at, "");
        } else if (!at.clamped && at.s > 0.0) {
            record_event(EventKind::VertexReached, m, at, "");
        }
        update_holds(m, at);
        m.u0 = at.u;
        m.s0 = at.s;
        m.t0 = at.t;
    }
    wedge_postprocess(m, seg0, ev0, r);
    track_best(r, first_segment);
    return r;
}

// The out-shift above does not watch ▲-pq-▲ paths.  Find the first recorded
// position where one is diametral by binary search with the wedge-path
// search, pin it down inside its segment, and cut the out-shift there.
void Sweep::wedge_postprocess(const Motion& m, std::size_t seg0, std::size_t ev0, BranchResult& r) {
    const auto& view = *m.view;
    auto wedge_tight = [&](const Sample& x) {
        auto [rs, rt] = real_arcs(m, x.s, x.t);
        auto w = longest_wedge_path(dec_, rs, rt, x.f.ell);
        return w && w->length >= std::max(x.f.xb, x.f.by) - tol_;
    };
    const std::size_t n = records_.size();
    if (n <= seg0) return;
    // first segment whose end is tight
    std::size_t lo = seg0, hi = n;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        (wedge_tight(records_[mid].b) ? hi : lo) = mid + (wedge_tight(records_[mid].b) ? 0 : 1);
    }
    if (lo == n) return;
    const std::size_t k = lo;
    const Motion& mk = records_[k].motion;
    Sample cut;
    if (wedge_tight(records_[k].a)) {
        cut = records_[k].a;
    } else {
        double ul = records_[k].a.u, uh = records_[k].b.u;
        for (int it = 0; it < kMaxBisect && uh - ul > 1e-12 * scale_; ++it) {
            double mid = 0.5 * (ul + uh);
            (wedge_tight(sample(mk, mid)) ? uh : ul) = mid;
        }
        cut = sample(mk, uh);
    }
    (void)view;

    // drop everything recorded after the cut
    if (opt_.trace) {
        std::size_t keep = ev0;
        while (keep < out_.trace.size() && out_.trace[keep].parameter <= cut.u) ++keep;
        out_.trace.resize(keep);
    }
    long long first_dropped = -1;
    for (std::size_t q = k; q < n; ++q)
        if (records_[q].output_index >= 0) {
            first_dropped = records_[q].output_index;
            break;
        }
    if (first_dropped >= 0) out_.segments.resize(static_cast<std::size_t>(first_dropped));
    const Sample start = records_[k].a;
    records_.resize(k);
    seg_min_.resize(k);
    out_.counters.segments = static_cast<long long>(records_.size());
    record_segment(mk, start, cut, {});
    record_event(EventKind::Terminal, mk, cut, "▲-pq-▲ joins", TerminalReason::WedgePath);
    r.reason = TerminalReason::WedgePath;
}

void Sweep::run() {
    Sample at;
    BranchResult r1 = run_phase1(at);
    best_ = r1;
    if (r1.reason != TerminalReason::None) return;

    Motion m1;
    m1.phase = Phase::I;
    m1.view = &forward_;
    unsigned fam = tight_families(at.f, tol_);
    if (fam & (kSC | kSSPQ | kSSTREE)) {
        record_event(EventKind::Terminal, m1, at, "x-y with ■-■", TerminalReason::XYWithSS);
        best_.reason = TerminalReason::XYWithSS;
        return;
    }
    const bool xb = fam & kXB, by = fam & kBY, so = fam & kSO;
    if (xb && by) {
        if (so) {
            record_event(EventKind::Terminal, m1, at, "blocked", TerminalReason::BlockedState);
            best_.reason = TerminalReason::BlockedState;
            return;
        }
        consider(best_, run_out(forward_, Phase::I, at, 0));
        return;
    }
    if (xb) {
        consider(best_, run_sideways(forward_, at, fam & (kXB | kSO)));
        return;
    }
    if (by) {
        Sample mirrored = at;
        mirrored.s = dec_.length - at.t;
        mirrored.t = dec_.length - at.s;
        unsigned active = (so ? kSO : 0u) | kXB;
        consider(best_, run_sideways(backward_, mirrored, active));
        return;
    }
    if (so) {
        BranchResult rx = run_sideways(forward_, at, kSO);
        Sample mirrored = at;
        mirrored.s = dec_.length - at.t;
        mirrored.t = dec_.length - at.s;
        BranchResult ry = run_sideways(backward_, mirrored, kSO);
        // ties go to the shift toward x
        if (ry.best < rx.best) {
            consider(best_, rx);
            consider(best_, ry);
        } else {
            consider(best_, ry);
            consider(best_, rx);
        }
        return;
    }
    // nothing new is diametral: the condition fired on the delta floor
    best_.reason = TerminalReason::DiameterFloor;
}

}  // namespace

OptimizeResult optimize(const GeometricTree& tree, const OptimizeOptions& options) {
    OptimizeResult out;
    auto dec = backbone(tree);
    out.diameter_before = dec.diameter;
    auto degenerate = [&](TerminalReason reason) {
        out.shortcut = {dec.center, dec.center};
        out.p_arc = out.q_arc = dec.center_arc;
        out.diameter_after = dec.diameter;
        out.useful = false;
        out.reason = reason;
    };
    if (!has_useful_shortcut(dec)) {
        degenerate(TerminalReason::NoUsefulShortcut);
        ++out.counters.events;
        if (options.trace) {
            Event e;
            e.kind = EventKind::Terminal;
            e.p_arc = dec.center_arc;
            e.q_arc = dec.length - dec.center_arc;
            e.diameter = e.best_diameter = dec.diameter;
            e.payload = dec.is_point ? "backbone is a point" : "backbone is straight";
            e.reason = TerminalReason::NoUsefulShortcut;
            out.trace.push_back(e);
        }
        return out;
    }
    Sweep sweep(tree, dec, options, out);
    sweep.run();
    auto best = sweep.best();
    out.final_phase = best.phase;
    out.reason = best.reason;
    out.p_arc = best.best_s;
    out.q_arc = best.best_t;
    out.shortcut = {backbone_point(tree, dec, best.best_s), backbone_point(tree, dec, best.best_t)};
    out.diameter_after = CaterpillarView(tree, dec).evaluate(best.best_s, best.best_t).diameter;
    out.useful = out.diameter_after < dec.diameter - tree.tol();
    if (!out.useful) {
        auto reason = out.reason;
        degenerate(reason);
    }
    return out;
}

}  // namespace treecut
