#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tritrack/flux_model.hpp"
#include "tritrack/riemann.hpp"
#include "tritrack/step_function.hpp"

namespace tritrack {

/// One straight-line discontinuity of the approximate solution. Fronts are
/// immutable once born: any change of state, speed or neighbourhood kills the
/// front and spawns fresh ones, so a (slot, stamp) pair pins a unique front
/// for the scheduler and the uid pins it forever for logs and traces.
struct Front {
    double birth_time = 0.0;
    double birth_x = 0.0;
    double speed = 0.0;
    double u_l = 0.0, u_r = 0.0;
    double Z_l = 0.0, Z_r = 0.0;
    double death_time = std::numeric_limits<double>::infinity();
    std::uint64_t uid = 0;
    std::int64_t k_l = 0, k_r = 0;
    int prev = -1, next = -1; // alive-list links (slot indices)
    std::uint32_t stamp = 0;
    WaveKind kind = WaveKind::Shock1;
    bool alive = false;
    bool is_trace = false;

    double position(double t) const { return birth_x + speed * (t - birth_time); }
    int family() const { return kind == WaveKind::Contact2 ? 2 : 1; }
};

/// Piecewise constant state at a fixed time.
struct Snapshot {
    double t = 0.0;
    StepFunction u;
    StepFunction v;
    StepFunction Z;
};

/// Summary of one resolved interaction group, passed to the observer and,
/// with retain_log, appended to the interaction log.
struct InteractionRecord {
    std::uint64_t index = 0; // 0-based position in the event sequence
    double t = 0.0, x = 0.0;
    int n_in = 0, n_out = 0;
    std::vector<std::uint64_t> uids_in, uids_out;
};

/// One 1-front overtaking the traced 2-characteristic.
struct TraceCrossing {
    std::uint64_t front_uid = 0;
    WaveKind kind = WaveKind::Shock1;
    double t = 0.0, x = 0.0;
    double ratio = 1.0;   // rh_factor of the crossed front
    double Z_after = 0.0; // accumulated value just left of the front
};

/// A 2-characteristic traced through the front pattern. Z is constant between
/// crossings and multiplies by rh_factor(u_l, u_r) at each 1-front crossed.
struct CharTrace {
    double t0 = 0.0, x0 = 0.0, Z0 = 1.0;
    std::vector<TraceCrossing> crossings;
    double terminal_t = 0.0, terminal_x = 0.0, terminal_Z = 1.0;

    std::size_t shock_crossings() const;
    std::size_t contact_crossings() const;
    /// Kink points (t, x) of the trajectory, endpoints included.
    std::vector<std::array<double, 2>> polyline() const;
};

struct SimOptions {
    /// Keep every front ever born plus the interaction log (enables post-hoc
    /// characteristic replay; memory grows with the interaction count).
    bool retain_log = false;
    /// Schedule collisions in exact rational arithmetic (requires a
    /// polynomial model; meant for small configurations).
    bool exact_mode = false;
    std::uint64_t max_interactions = 10'000'000ULL;
    /// Grouping tolerance, scaled internally by max(1, data width).
    double group_tol = 1e-12;
    std::function<void(const InteractionRecord&)> observer;
};

struct SimStats {
    std::uint64_t interactions = 0;
    std::uint64_t fronts_created = 0;
    std::size_t alive = 0;
    double clock = 0.0;
    double max_abs_Z = 0.0;
};

/// Wave-front tracking for the triangular system with grid flux f_nu.
///
/// The scalar field u evolves by exact front tracking of the piecewise linear
/// flux; Z rides along through the Rankine-Hugoniot factor; jumps of Z that
/// the 1-family cannot carry travel as 2-contacts at speed a(u). Collisions
/// are resolved group-at-a-time by a Riemann solve on the group's outer
/// states, so simultaneous arrivals at one point are handled atomically.
class Simulation {
public:
    /// u0 must be grid-valued (every value a node of f_nu) with |u0| <= M;
    /// throws ConfigError otherwise and UshError when the model is not
    /// uniformly strictly hyperbolic on [-M, M].
    Simulation(const FluxModel& model, int nu, const StepFunction& u0,
               const StepFunction& v0, SimOptions opts = {});
    ~Simulation();
    Simulation(Simulation&&) noexcept;
    Simulation& operator=(Simulation&&) noexcept;
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Resolve every interaction up to and including time t_end, then move
    /// the clock there. Throws CircuitBreakerError past max_interactions.
    void run_until(double t_end);

    /// Resolve the single next interaction group. Returns false (and leaves
    /// the clock alone) when none is pending or the next one lies beyond
    /// t_limit.
    bool step(double t_limit = std::numeric_limits<double>::infinity());

    double clock() const;

    /// Leftmost (x -> -inf) state of the initial data as (u, Z).
    std::pair<double, double> left_state() const;

    /// Time and position of the next pending interaction, if any.
    std::optional<std::array<double, 2>> peek_next_collision() const;

    /// State at time t; t must lie in [clock, next collision time].
    Snapshot snapshot(double t) const;

    /// Alive fronts in left-to-right order (trace pseudo-fronts included).
    std::vector<Front> alive_fronts() const;

    /// Every front ever created, in creation order. Requires retain_log.
    const std::vector<Front>& all_fronts() const;

    /// Interaction log. Requires retain_log.
    const std::vector<InteractionRecord>& log() const;

    SimStats stats() const;
    const FluxModel& model() const { return model_; }
    const GridFlux& grid() const { return grid_; }

    /// Insert the traced 2-characteristic at (clock, x0). Throws
    /// DegenerateTraceError when x0 sits exactly on a front, EngineError when
    /// a trace is already active.
    void start_trace(double x0, double Z0 = 1.0);
    bool has_trace() const;
    /// Number of fronts the active trace has crossed so far.
    std::size_t trace_crossing_count() const;
    /// Trace accumulated so far (valid after start_trace).
    CharTrace trace_result() const;

    /// Re-derive a trace from the retained front log, independently of the
    /// inline mechanism: scan for the earliest line crossing, multiply by the
    /// crossed front's rh_factor, repeat. Requires retain_log; the simulation
    /// must already have run past t1.
    CharTrace replay_trace(double x0, double t1, double Z0 = 1.0) const;

private:
    struct ExactState; // rational scheduling side table (exact_mode)

    struct Event {
        double t = 0.0, x = 0.0;
        int left = -1, right = -1;
        std::uint32_t stamp_l = 0, stamp_r = 0;
        std::uint64_t seq = 0; // deterministic tie-breaker
    };

    struct RecentEvent {
        double t = 0.0, x = 0.0;
        int n_in = 0, n_out = 0;
    };

    // construction
    void build_initial_fronts(const StepFunction& u0, const StepFunction& v0);
    int alloc_slot();
    int spawn(Front f);
    void kill(int slot, double t);
    void insert_after(int slot, int left_slot); // -1 left_slot = list head
    void unlink(int slot);

    // scheduling
    void push_event(int left_slot, int right_slot);
    std::optional<Event> compute_pair_event(int left_slot, int right_slot) const;
    bool pop_valid_event(Event& out);
    bool event_valid(const Event& e) const;
    void maybe_compact_heap();
    bool next_exact_event(Event& out, std::vector<int>& group);

    // resolution
    bool step_once(double t_limit);
    std::vector<int> collect_group(const Event& e) const;
    void resolve_group(const std::vector<int>& group, double t, double x);
    void resolve_trace_crossing(int front_slot, int trace_slot, double t, double x);
    void spawn_fan(const WaveFan& fan, double t, double x, int left_neighbor,
                   int right_neighbor, std::vector<std::uint64_t>* out_uids);
    [[noreturn]] void panic(const std::string& what) const;

    // exact-mode helpers (defined in the .cpp)
    void exact_init();
    void exact_on_spawn(int slot);

    double note_Z(double Z);

    FluxModel model_;
    GridFlux grid_;
    SimOptions opts_;

    std::vector<Front> slots_;
    std::vector<int> free_slots_;
    int head_ = -1, tail_ = -1;
    std::size_t alive_count_ = 0;

    std::vector<Event> heap_;
    std::uint64_t event_seq_ = 0;

    double clock_ = 0.0;
    double tol_ = 1e-12;
    double init_left_u_ = 0.0, init_left_Z_ = 0.0;
    std::uint64_t interactions_ = 0;
    std::uint64_t fronts_created_ = 0;
    double max_abs_Z_ = 0.0;

    int trace_slot_ = -1;
    bool trace_started_ = false;
    double trace_t0_ = 0.0, trace_x0_ = 0.0, trace_Z0_ = 1.0;
    std::vector<TraceCrossing> trace_crossings_;

    std::vector<InteractionRecord> log_;
    std::array<RecentEvent, 8> recent_{};
    std::size_t recent_n_ = 0;

    std::unique_ptr<ExactState> exact_;
};

} // namespace tritrack
