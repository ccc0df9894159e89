#include "tritrack/wft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "tritrack/errors.hpp"

namespace tritrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(double t, double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "t=%.17g, x=%.17g", t, x);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// CharTrace

std::size_t CharTrace::shock_crossings() const {
    std::size_t n = 0;
    for (const TraceCrossing& c : crossings)
        if (c.kind == WaveKind::Shock1) ++n;
    return n;
}

std::size_t CharTrace::contact_crossings() const {
    std::size_t n = 0;
    for (const TraceCrossing& c : crossings)
        if (c.kind == WaveKind::Contact1) ++n;
    return n;
}

std::vector<std::array<double, 2>> CharTrace::polyline() const {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(crossings.size() + 2);
    pts.push_back({t0, x0});
    for (const TraceCrossing& c : crossings) pts.push_back({c.t, c.x});
    pts.push_back({terminal_t, terminal_x});
    return pts;
}

// ---------------------------------------------------------------------------
// Exact rational scheduling state

struct Simulation::ExactState {
    using Q = boost::multiprecision::cpp_rational;

    struct Line {
        Q t0 = 0, x0 = 0, s = 0;
    };

    std::vector<Line> lines; // parallel to Simulation::slots_
    Q clock = 0;
    Q pend_t = 0, pend_x = 0; // coordinates of the group being resolved
    bool pend_valid = false;
    Polynomial f_poly, a_poly;
    int nu = 1;

    static Q eval(const Polynomial& p, const Q& u) {
        const std::vector<double>& c = p.coeffs();
        Q r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * u + Q(c[i]);
        return r;
    }

    Q node(std::int64_t k) const { return Q(k) / Q(nu); }

    Q front_speed(const Front& f) const {
        if (f.family() == 2) return eval(a_poly, node(f.k_l));
        return (eval(f_poly, node(f.k_r)) - eval(f_poly, node(f.k_l))) /
               (node(f.k_r) - node(f.k_l));
    }

    void ensure(std::size_t n) {
        if (lines.size() < n) lines.resize(n);
    }
};

// ---------------------------------------------------------------------------
// Construction

namespace {

GridFlux checked_grid(const FluxModel& m, int nu) {
    if (nu < 1) throw ConfigError("wft: grid resolution nu must be >= 1");
    const double margin = check_ush(m);
    if (!(margin > 0.0)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", margin);
        throw UshError("wft: model '" + m.name +
                       "' is not uniformly strictly hyperbolic on [-M, M] "
                       "(margin " + std::string(buf) + ")");
    }
    return GridFlux(m, nu);
}

} // namespace

Simulation::Simulation(const FluxModel& model, int nu, const StepFunction& u0,
                       const StepFunction& v0, SimOptions opts)
    : model_(model), grid_(checked_grid(model, nu)), opts_(std::move(opts)) {
    for (double uv : u0.values()) {
        if (!std::isfinite(uv) || std::abs(uv) > model_.bound + 1e-12)
            throw ConfigError("wft: initial u leaves the working range [-M, M]");
        try {
            (void)grid_.index_of(uv);
        } catch (const std::domain_error&) {
            throw ConfigError("wft: initial u is not grid-valued; sample it first");
        }
    }
    for (double vv : v0.values())
        if (!std::isfinite(vv))
            throw ConfigError("wft: initial v must be finite");

    build_initial_fronts(u0, v0);
    if (opts_.exact_mode) exact_init();
}

Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

void Simulation::build_initial_fronts(const StepFunction& u0, const StepFunction& v0) {
    const std::vector<double>& ub = u0.breakpoints();
    const std::vector<double>& vb = v0.breakpoints();
    std::vector<double> bps;
    bps.reserve(ub.size() + vb.size());
    std::merge(ub.begin(), ub.end(), vb.begin(), vb.end(), std::back_inserter(bps));
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    const double width = bps.empty() ? 0.0 : bps.back() - bps.front();
    tol_ = opts_.group_tol * std::max(1.0, width);

    init_left_u_ = u0.values().front();
    init_left_Z_ = model_.to_Z(init_left_u_, v0.values().front());
    note_Z(init_left_Z_);

    auto side_values = [](const std::vector<double>& xs, const std::vector<double>& vs,
                          double x) -> std::pair<double, double> {
        const std::size_t i =
            static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
        const double left = vs[i];
        const double right = (i < xs.size() && xs[i] == x) ? vs[i + 1] : vs[i];
        return {left, right};
    };

    for (double x : bps) {
        const auto [uL, uR] = side_values(ub, u0.values(), x);
        const auto [vL, vR] = side_values(vb, v0.values(), x);
        const double ZL = model_.to_Z(uL, vL);
        const double ZR = model_.to_Z(uR, vR);
        if (uL == uR && ZL == ZR) continue;
        const WaveFan fan = system_riemann(model_, grid_, uL, ZL, uR, ZR);
        spawn_fan(fan, 0.0, x, tail_, -1, nullptr);
    }
}

void Simulation::exact_init() {
    if (!model_.polynomials)
        throw ConfigError("wft: exact mode requires a polynomial model");
    exact_ = std::make_unique<ExactState>();
    exact_->f_poly = model_.polynomials->first;
    exact_->a_poly = model_.polynomials->second;
    exact_->nu = grid_.nu();
    exact_->ensure(slots_.size());
    for (int s = head_; s != -1; s = slots_[s].next) {
        const Front& f = slots_[s];
        ExactState::Line& L = exact_->lines[s];
        L.t0 = ExactState::Q(f.birth_time);
        L.x0 = ExactState::Q(f.birth_x);
        L.s = exact_->front_speed(f);
    }
}

void Simulation::exact_on_spawn(int slot) {
    ExactState& X = *exact_;
    X.ensure(slots_.size());
    const Front& f = slots_[slot];
    ExactState::Line& L = X.lines[slot];
    if (X.pend_valid) {
        L.t0 = X.pend_t;
        L.x0 = X.pend_x;
    } else {
        L.t0 = ExactState::Q(f.birth_time);
        L.x0 = ExactState::Q(f.birth_x);
    }
    L.s = X.front_speed(f);
}

// ---------------------------------------------------------------------------
// Slot and list management

int Simulation::alloc_slot() {
    if (!free_slots_.empty()) {
        const int s = free_slots_.back();
        free_slots_.pop_back();
        return s;
    }
    slots_.push_back(Front{});
    return static_cast<int>(slots_.size()) - 1;
}

int Simulation::spawn(Front f) {
    const int s = alloc_slot();
    f.uid = fronts_created_++;
    f.stamp = slots_[s].stamp + 1;
    f.alive = true;
    f.death_time = kInf;
    f.prev = f.next = -1;
    note_Z(f.Z_l);
    note_Z(f.Z_r);
    slots_[s] = f;
    if (exact_) exact_on_spawn(s);
    return s;
}

void Simulation::kill(int slot, double t) {
    Front& f = slots_[slot];
    unlink(slot);
    f.alive = false;
    f.death_time = t;
    ++f.stamp;
    if (!opts_.retain_log) free_slots_.push_back(slot);
}

void Simulation::insert_after(int slot, int left_slot) {
    Front& f = slots_[slot];
    if (left_slot < 0) {
        f.prev = -1;
        f.next = head_;
        if (head_ >= 0) slots_[head_].prev = slot;
        head_ = slot;
        if (tail_ < 0) tail_ = slot;
    } else {
        Front& l = slots_[left_slot];
        f.prev = left_slot;
        f.next = l.next;
        if (l.next >= 0) slots_[l.next].prev = slot;
        l.next = slot;
        if (tail_ == left_slot) tail_ = slot;
    }
    ++alive_count_;
}

void Simulation::unlink(int slot) {
    Front& f = slots_[slot];
    if (f.prev >= 0) slots_[f.prev].next = f.next; else head_ = f.next;
    if (f.next >= 0) slots_[f.next].prev = f.prev; else tail_ = f.prev;
    f.prev = f.next = -1;
    --alive_count_;
}

double Simulation::note_Z(double Z) {
    max_abs_Z_ = std::max(max_abs_Z_, std::abs(Z));
    return Z;
}

// ---------------------------------------------------------------------------
// Event scheduling (floating path)

namespace {
struct EventAfter {
    template <typename E>
    bool operator()(const E& a, const E& b) const {
        return std::tie(a.t, a.x, a.seq) > std::tie(b.t, b.x, b.seq);
    }
};
} // namespace

std::optional<Simulation::Event> Simulation::compute_pair_event(int l, int r) const {
    const Front& L = slots_[l];
    const Front& R = slots_[r];
    if (!(L.speed > R.speed)) return std::nullopt;
    double t = (R.birth_x - L.birth_x + L.speed * L.birth_time - R.speed * R.birth_time) /
               (L.speed - R.speed);
    if (t < clock_) t = clock_;
    Event e;
    e.t = t;
    e.x = L.position(t);
    e.left = l;
    e.right = r;
    e.stamp_l = L.stamp;
    e.stamp_r = R.stamp;
    return e;
}

void Simulation::push_event(int l, int r) {
    if (opts_.exact_mode || l < 0 || r < 0) return;
    std::optional<Event> ev = compute_pair_event(l, r);
    if (!ev) return;
    ev->seq = ++event_seq_;
    heap_.push_back(*ev);
    std::push_heap(heap_.begin(), heap_.end(), EventAfter{});
}

bool Simulation::event_valid(const Event& e) const {
    if (e.left < 0 || e.right < 0) return false;
    const Front& L = slots_[e.left];
    const Front& R = slots_[e.right];
    return L.alive && R.alive && L.next == e.right && L.stamp == e.stamp_l &&
           R.stamp == e.stamp_r;
}

bool Simulation::pop_valid_event(Event& out) {
    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end(), EventAfter{});
        const Event e = heap_.back();
        heap_.pop_back();
        if (event_valid(e)) {
            out = e;
            return true;
        }
    }
    return false;
}

void Simulation::maybe_compact_heap() {
    if (heap_.size() < 4096 || heap_.size() < 8 * (alive_count_ + 8)) return;
    heap_.clear();
    for (int s = head_; s != -1; s = slots_[s].next)
        if (slots_[s].next != -1) push_event(s, slots_[s].next);
}

std::vector<int> Simulation::collect_group(const Event& e) const {
    std::vector<int> g{e.left, e.right};
    for (;;) {
        const int p = slots_[g.front()].prev;
        if (p < 0) break;
        const std::optional<Event> ev = compute_pair_event(p, g.front());
        if (!ev || std::abs(ev->t - e.t) > tol_ || std::abs(ev->x - e.x) > tol_) break;
        g.insert(g.begin(), p);
    }
    for (;;) {
        const int n = slots_[g.back()].next;
        if (n < 0) break;
        const std::optional<Event> ev = compute_pair_event(g.back(), n);
        if (!ev || std::abs(ev->t - e.t) > tol_ || std::abs(ev->x - e.x) > tol_) break;
        g.push_back(n);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Exact scheduling

bool Simulation::next_exact_event(Event& out, std::vector<int>& group) {
    ExactState& X = *exact_;
    using Q = ExactState::Q;

    auto pair_event = [&](int l, int r, Q& tau, Q& xx) -> bool {
        const ExactState::Line& Ll = X.lines[l];
        const ExactState::Line& Lr = X.lines[r];
        if (Ll.s <= Lr.s) return false;
        tau = (Lr.x0 - Ll.x0 + Ll.s * Ll.t0 - Lr.s * Lr.t0) / (Ll.s - Lr.s);
        if (tau < X.clock) tau = X.clock;
        xx = Ll.x0 + Ll.s * (tau - Ll.t0);
        return true;
    };

    int bl = -1, br = -1;
    Q bt = 0, bx = 0;
    for (int l = head_; l != -1; l = slots_[l].next) {
        const int r = slots_[l].next;
        if (r == -1) break;
        Q tau, xx;
        if (!pair_event(l, r, tau, xx)) continue;
        if (bl == -1 || tau < bt || (tau == bt && xx < bx)) {
            bl = l;
            br = r;
            bt = tau;
            bx = xx;
        }
    }
    if (bl == -1) return false;

    group.assign({bl, br});
    for (;;) {
        const int p = slots_[group.front()].prev;
        if (p < 0) break;
        Q tau, xx;
        if (!pair_event(p, group.front(), tau, xx) || tau != bt || xx != bx) break;
        group.insert(group.begin(), p);
    }
    for (;;) {
        const int n = slots_[group.back()].next;
        if (n < 0) break;
        Q tau, xx;
        if (!pair_event(group.back(), n, tau, xx) || tau != bt || xx != bx) break;
        group.push_back(n);
    }

    X.pend_t = bt;
    X.pend_x = bx;
    out = Event{bt.convert_to<double>(), bx.convert_to<double>(), bl, br, 0, 0, 0};
    return true;
}

// ---------------------------------------------------------------------------
// Resolution

bool Simulation::step_once(double t_limit) {
    Event e;
    std::vector<int> group;
    if (opts_.exact_mode) {
        if (!next_exact_event(e, group)) return false;
        if (e.t > t_limit) return false; // nothing consumed
        exact_->clock = exact_->pend_t;
        exact_->pend_valid = true;
    } else {
        maybe_compact_heap();
        if (!pop_valid_event(e)) return false;
        if (e.t > t_limit) {
            heap_.push_back(e); // still valid; hand it back
            std::push_heap(heap_.begin(), heap_.end(), EventAfter{});
            return false;
        }
        group = collect_group(e);
    }

    if (interactions_ >= opts_.max_interactions) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "wft: interaction cap %llu reached at t=%.17g (alive fronts: %zu)",
                      static_cast<unsigned long long>(opts_.max_interactions), e.t,
                      alive_count_);
        throw CircuitBreakerError(buf);
    }
    ++interactions_;
    clock_ = std::max(clock_, e.t);
    resolve_group(group, e.t, e.x);
    if (exact_) exact_->pend_valid = false;
    return true;
}

void Simulation::resolve_group(const std::vector<int>& group, double t, double x) {
    const Front a = slots_[group.front()];
    const Front b = slots_[group.back()];

    if (b.is_trace) {
        if (group.size() != 2 || a.family() != 1 || a.is_trace)
            throw DegenerateTraceError(
                "wft: traced characteristic caught inside a front interaction at " +
                describe(t, x));
        resolve_trace_crossing(group.front(), group.back(), t, x);
        return;
    }
    for (int s : group)
        if (slots_[s].is_trace)
            throw DegenerateTraceError(
                "wft: traced characteristic overtaken from the right at " + describe(t, x));

    int c2 = 0;
    for (int s : group)
        if (slots_[s].kind == WaveKind::Contact2) ++c2;
    if (c2 >= 2) panic("two 2-contacts collided at " + describe(t, x));

    const int left_nb = a.prev;
    const int right_nb = b.next;
    const bool want_rec = static_cast<bool>(opts_.observer) || opts_.retain_log;
    std::vector<std::uint64_t> uids_in;
    if (want_rec)
        for (int s : group) uids_in.push_back(slots_[s].uid);

    for (int s : group) kill(s, t);

    WaveFan fan;
    if (group.size() == 2 && a.family() == 1 && b.kind == WaveKind::Contact2) {
        // A 1-front overtakes a 2-contact: the scalar jump passes through
        // unchanged, so reuse its geometry instead of re-solving the envelope.
        const double Zm = rh_plus(model_, a.u_l, a.u_r, b.Z_r);
        if (Zm != a.Z_l) {
            ElementaryWave c2w;
            c2w.kind = WaveKind::Contact2;
            c2w.speed = model_.a(a.u_l);
            c2w.u_l = c2w.u_r = a.u_l;
            c2w.Z_l = a.Z_l;
            c2w.Z_r = Zm;
            c2w.k_l = c2w.k_r = a.k_l;
            fan.waves.push_back(c2w);
        }
        ElementaryWave w;
        w.kind = a.kind;
        w.speed = a.speed;
        w.u_l = a.u_l;
        w.u_r = a.u_r;
        w.Z_l = Zm;
        w.Z_r = b.Z_r;
        w.k_l = a.k_l;
        w.k_r = a.k_r;
        fan.waves.push_back(w);
    } else {
        fan = system_riemann(model_, grid_, a.u_l, a.Z_l, b.u_r, b.Z_r);
    }

    std::vector<std::uint64_t> uids_out;
    spawn_fan(fan, t, x, left_nb, right_nb, want_rec ? &uids_out : nullptr);

    recent_[recent_n_ % recent_.size()] =
        RecentEvent{t, x, static_cast<int>(group.size()), static_cast<int>(fan.waves.size())};
    ++recent_n_;

    if (want_rec) {
        InteractionRecord rec;
        rec.index = interactions_ - 1;
        rec.t = t;
        rec.x = x;
        rec.n_in = static_cast<int>(group.size());
        rec.n_out = static_cast<int>(fan.waves.size());
        rec.uids_in = std::move(uids_in);
        rec.uids_out = std::move(uids_out);
        if (opts_.observer) opts_.observer(rec);
        if (opts_.retain_log) log_.push_back(std::move(rec));
    }
}

void Simulation::spawn_fan(const WaveFan& fan, double t, double x, int left_nb,
                           int right_nb, std::vector<std::uint64_t>* out_uids) {
    int prev = left_nb;
    int first = -1, last = -1;
    for (const ElementaryWave& w : fan.waves) {
        Front f;
        f.birth_time = t;
        f.birth_x = x;
        f.speed = w.speed;
        f.u_l = w.u_l;
        f.u_r = w.u_r;
        f.Z_l = w.Z_l;
        f.Z_r = w.Z_r;
        f.k_l = w.k_l;
        f.k_r = w.k_r;
        f.kind = w.kind;
        const int s = spawn(f);
        insert_after(s, prev);
        if (out_uids) out_uids->push_back(slots_[s].uid);
        if (first < 0) first = s;
        last = s;
        prev = s;
    }
    if (first < 0) {
        if (left_nb >= 0 && right_nb >= 0) push_event(left_nb, right_nb);
        return;
    }
    // Fan members diverge among themselves; only the boundary pairs can meet.
    if (left_nb >= 0) push_event(left_nb, first);
    if (right_nb >= 0) push_event(last, right_nb);
}

void Simulation::resolve_trace_crossing(int front_slot, int trace_slot, double t,
                                        double x) {
    const Front F = slots_[front_slot];
    const Front T = slots_[trace_slot];
    const double ratio = rh_factor(model_, F.u_l, F.u_r);
    const double Zn = T.Z_l * ratio;

    const bool want_rec = static_cast<bool>(opts_.observer) || opts_.retain_log;

    kill(trace_slot, t);
    const int left_nb = slots_[front_slot].prev;
    Front nt;
    nt.birth_time = t;
    nt.birth_x = x;
    nt.speed = model_.a(F.u_l);
    nt.u_l = nt.u_r = F.u_l;
    nt.Z_l = nt.Z_r = Zn;
    nt.k_l = nt.k_r = F.k_l;
    nt.kind = WaveKind::Contact2;
    nt.is_trace = true;
    const int s = spawn(nt);
    insert_after(s, left_nb);
    trace_slot_ = s;
    trace_crossings_.push_back(TraceCrossing{F.uid, F.kind, t, x, ratio, Zn});

    push_event(left_nb, s);
    push_event(front_slot, slots_[front_slot].next);

    recent_[recent_n_ % recent_.size()] = RecentEvent{t, x, 2, 2};
    ++recent_n_;

    if (want_rec) {
        InteractionRecord rec;
        rec.index = interactions_ - 1;
        rec.t = t;
        rec.x = x;
        rec.n_in = 2;
        rec.n_out = 2;
        rec.uids_in = {F.uid, T.uid};
        rec.uids_out = {F.uid, slots_[s].uid};
        if (opts_.observer) opts_.observer(rec);
        if (opts_.retain_log) log_.push_back(std::move(rec));
    }
}

void Simulation::panic(const std::string& what) const {
    std::string msg = "wft engine: " + what + "; recent interactions:";
    const std::size_t n = std::min<std::size_t>(recent_n_, recent_.size());
    char buf[128];
    for (std::size_t i = 0; i < n; ++i) {
        const RecentEvent& ev = recent_[(recent_n_ - n + i) % recent_.size()];
        std::snprintf(buf, sizeof buf, " [t=%.17g x=%.17g in=%d out=%d]", ev.t, ev.x,
                      ev.n_in, ev.n_out);
        msg += buf;
    }
    throw EngineError(msg);
}

// ---------------------------------------------------------------------------
// Public driving

void Simulation::run_until(double t_end) {
    if (!(t_end >= clock_))
        throw std::invalid_argument("run_until: target time precedes the clock");
    while (step_once(t_end)) {
    }
    clock_ = t_end;
}

bool Simulation::step(double t_limit) { return step_once(t_limit); }

double Simulation::clock() const { return clock_; }

std::pair<double, double> Simulation::left_state() const {
    return {init_left_u_, init_left_Z_};
}

std::optional<std::array<double, 2>> Simulation::peek_next_collision() const {
    std::optional<std::array<double, 2>> best;
    for (int s = head_; s != -1; s = slots_[s].next) {
        const int n = slots_[s].next;
        if (n == -1) break;
        const std::optional<Event> ev = compute_pair_event(s, n);
        if (!ev) continue;
        const std::array<double, 2> c{ev->t, ev->x};
        if (!best || c < *best) best = c;
    }
    return best;
}

Snapshot Simulation::snapshot(double t) const {
    if (t < clock_ - tol_)
        throw std::invalid_argument("snapshot: time precedes the clock");
    const std::optional<std::array<double, 2>> nxt = peek_next_collision();
    if (nxt && t > (*nxt)[0] + tol_)
        throw std::invalid_argument(
            "snapshot: time lies beyond the next interaction; run_until it first");

    double ul = init_left_u_, zl = init_left_Z_;
    for (int s = head_; s != -1; s = slots_[s].next) {
        const Front& f = slots_[s];
        if (f.is_trace) continue;
        ul = f.u_l;
        zl = f.Z_l;
        break;
    }
    std::vector<double> xs, us{ul}, zs{zl};
    for (int s = head_; s != -1; s = slots_[s].next) {
        const Front& f = slots_[s];
        if (f.is_trace) continue;
        double p = f.position(t);
        if (!xs.empty() && p < xs.back()) {
            if (xs.back() - p > tol_)
                throw EngineError("snapshot: front ordering violated at " + describe(t, p));
            p = xs.back();
        }
        xs.push_back(p);
        us.push_back(f.u_r);
        zs.push_back(f.Z_r);
    }
    std::vector<double> vs;
    vs.reserve(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) vs.push_back(model_.from_Z(us[i], zs[i]));

    if (xs.empty())
        return Snapshot{t, StepFunction(us[0]), StepFunction(vs[0]), StepFunction(zs[0])};
    return Snapshot{t, StepFunction::from_raw(xs, us), StepFunction::from_raw(xs, vs),
                    StepFunction::from_raw(std::move(xs), std::move(zs))};
}

std::vector<Front> Simulation::alive_fronts() const {
    std::vector<Front> out;
    out.reserve(alive_count_);
    for (int s = head_; s != -1; s = slots_[s].next) out.push_back(slots_[s]);
    return out;
}

const std::vector<Front>& Simulation::all_fronts() const {
    if (!opts_.retain_log)
        throw EngineError("all_fronts: simulation was not run with retain_log");
    return slots_;
}

const std::vector<InteractionRecord>& Simulation::log() const {
    if (!opts_.retain_log)
        throw EngineError("log: simulation was not run with retain_log");
    return log_;
}

SimStats Simulation::stats() const {
    SimStats s;
    s.interactions = interactions_;
    s.fronts_created = fronts_created_;
    s.alive = alive_count_;
    s.clock = clock_;
    s.max_abs_Z = max_abs_Z_;
    return s;
}

// ---------------------------------------------------------------------------
// Characteristic tracing

void Simulation::start_trace(double x0, double Z0) {
    if (trace_started_) throw EngineError("start_trace: a trace is already active");
    if (!std::isfinite(x0) || !std::isfinite(Z0))
        throw ConfigError("start_trace: seed must be finite");

    int left = -1, right = -1;
    for (int s = head_; s != -1; s = slots_[s].next) {
        const double p = slots_[s].position(clock_);
        if (p == x0)
            throw DegenerateTraceError("start_trace: seed sits exactly on a front at " +
                                       describe(clock_, x0));
        if (p < x0) {
            left = s;
        } else {
            right = s;
            break;
        }
    }
    const double u = right >= 0 ? slots_[right].u_l
                                : (left >= 0 ? slots_[left].u_r : init_left_u_);
    Front f;
    f.birth_time = clock_;
    f.birth_x = x0;
    f.speed = model_.a(u);
    f.u_l = f.u_r = u;
    f.Z_l = f.Z_r = Z0;
    f.k_l = f.k_r = grid_.index_of(u);
    f.kind = WaveKind::Contact2;
    f.is_trace = true;
    const int s = spawn(f);
    insert_after(s, left);
    trace_slot_ = s;
    trace_started_ = true;
    trace_t0_ = clock_;
    trace_x0_ = x0;
    trace_Z0_ = Z0;
    push_event(left, s);
    push_event(s, right);
}

bool Simulation::has_trace() const { return trace_started_; }

std::size_t Simulation::trace_crossing_count() const {
    return trace_crossings_.size();
}

CharTrace Simulation::trace_result() const {
    if (!trace_started_) throw EngineError("trace_result: no trace was started");
    CharTrace ct;
    ct.t0 = trace_t0_;
    ct.x0 = trace_x0_;
    ct.Z0 = trace_Z0_;
    ct.crossings = trace_crossings_;
    const Front& T = slots_[trace_slot_];
    ct.terminal_t = clock_;
    ct.terminal_x = T.position(clock_);
    ct.terminal_Z = T.Z_l;
    return ct;
}

CharTrace Simulation::replay_trace(double x0, double t1, double Z0) const {
    if (!opts_.retain_log)
        throw EngineError("replay_trace: simulation was not run with retain_log");
    if (t1 > clock_)
        throw EngineError("replay_trace: simulation has only reached t=" +
                          std::to_string(clock_));

    CharTrace ct;
    ct.t0 = 0.0;
    ct.x0 = x0;
    ct.Z0 = Z0;

    double u = init_left_u_;
    {
        // Rightmost initial front left of the seed; fronts sharing a fan
        // point are ordered by speed, so the fastest one is nearest.
        double best_x = -kInf, best_s = -kInf;
        for (const Front& g : slots_) {
            if (g.is_trace || g.birth_time != 0.0) continue;
            if (g.birth_x == x0)
                throw DegenerateTraceError("replay_trace: seed sits on an initial front");
            if (g.birth_x < x0 &&
                (g.birth_x > best_x ||
                 (g.birth_x == best_x && g.speed > best_s))) {
                best_x = g.birth_x;
                best_s = g.speed;
                u = g.u_r;
            }
        }
    }

    double t_cur = 0.0, x_cur = x0, Z = Z0;
    double s_tr = model_.a(u);
    std::uint64_t last_uid = ~std::uint64_t{0};
    for (;;) {
        double best_t = kInf;
        const Front* best_g = nullptr;
        bool tie = false;
        for (const Front& g : slots_) {
            if (g.is_trace || g.uid == last_uid || g.speed == s_tr) continue;
            const double tau =
                (g.birth_x - g.speed * g.birth_time - x_cur + s_tr * t_cur) /
                (s_tr - g.speed);
            if (!(tau > t_cur) || tau < g.birth_time || tau > g.death_time || tau > t1)
                continue;
            if (tau < best_t) {
                best_t = tau;
                best_g = &g;
                tie = false;
            } else if (tau == best_t) {
                tie = true;
            }
        }
        if (!best_g) break;
        if (tie)
            throw DegenerateTraceError("replay_trace: several fronts cross at once at t=" +
                                       std::to_string(best_t));
        if (best_g->family() != 1)
            throw DegenerateTraceError("replay_trace: crossed by a 2-contact at t=" +
                                       std::to_string(best_t));
        const double ratio = rh_factor(model_, best_g->u_l, best_g->u_r);
        Z *= ratio;
        const double xc = best_g->position(best_t);
        ct.crossings.push_back(
            TraceCrossing{best_g->uid, best_g->kind, best_t, xc, ratio, Z});
        t_cur = best_t;
        x_cur = xc;
        u = best_g->u_l;
        s_tr = model_.a(u);
        last_uid = best_g->uid;
    }
    ct.terminal_t = t1;
    ct.terminal_x = x_cur + s_tr * (t1 - t_cur);
    ct.terminal_Z = Z;
    return ct;
}

} // namespace tritrack
