#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sbpsat/error.hpp"
#include "sbpsat/grid.hpp"
#include "sbpsat/induction.hpp"

namespace sbpsat {

enum class Integrator { rk2, rk4 };

inline const char* to_string(Integrator m) { return m == Integrator::rk2 ? "rk2" : "rk4"; }

struct IntegratorConfig {
    Integrator method = Integrator::rk2;
    double cfl = 0.45;
    double t_final = 0.0;
    std::optional<double> fixed_dt;
    /// Call the diagnostics hook every this many steps (0: only at the end).
    int hook_every = 0;

    void validate() const {
        if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("CFL number must lie in (0, 1], got " + std::to_string(cfl));
        if (!(t_final >= 0.0) || !std::isfinite(t_final))
            throw ConfigError("final time must be finite and non-negative");
        if (fixed_dt && !(*fixed_dt > 0.0)) throw ConfigError("fixed time step must be positive");
        if (hook_every < 0) throw ConfigError("hook cadence must be non-negative");
    }
};

/// dt = cfl / (max|u1|/dx + max|u2|/dy).
inline double compute_dt(const Grid2D& grid, const VelocityCoeffs& coeffs, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("CFL number must lie in (0, 1], got " + std::to_string(cfl));
    const double rate = coeffs.max_abs_u1() / grid.dx() + coeffs.max_abs_u2() / grid.dy();
    if (!(rate > 0.0)) throw ConfigError("velocity vanishes on the whole grid; set a fixed time step instead");
    return cfl / rate;
}

/// Raised when the state stops being finite. Carries the last finite state.
class InstabilityError : public Error {
public:
    InstabilityError(long step, double time, std::vector<double> last_state)
        : Error("instability: non-finite state at step " + std::to_string(step) + " (t=" + std::to_string(time) + ")"),
          step_(step), time_(time), last_state_(std::move(last_state)) {}

    long step() const { return step_; }
    double time() const { return time_; }
    const std::vector<double>& last_state() const { return last_state_; }

private:
    long step_;
    double time_;
    std::vector<double> last_state_;
};

namespace detail {
inline std::span<double> state_span(std::vector<double>& v) { return v; }
inline std::span<const double> state_span(const std::vector<double>& v) { return v; }
inline std::span<double> state_span(MagneticField& v) { return v.data(); }
inline std::span<const double> state_span(const MagneticField& v) { return v.data(); }

template <class State>
void check_finite(const State& v) {
    for (double x : state_span(v))
        if (!std::isfinite(x)) throw NonFiniteError("non-finite value after time step");
}
} // namespace detail

// The right-hand side is any callable rhs(t, const State& v, State& dvdt).

/// Heun's method (explicit trapezoid), stage times t and t+dt.
template <class State, class Rhs>
State rk2_step(const State& v, double t, double dt, Rhs&& rhs) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    State k1 = v, k2 = v, stage = v;
    rhs(t, v, k1);
    auto s = detail::state_span(stage);
    auto a = detail::state_span(k1);
    auto x = detail::state_span(v);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + dt * a[i];
    rhs(t + dt, stage, k2);
    State next = v;
    auto nx = detail::state_span(next);
    auto b = detail::state_span(k2);
    for (std::size_t i = 0; i < nx.size(); ++i) nx[i] = x[i] + 0.5 * dt * (a[i] + b[i]);
    detail::check_finite(next);
    return next;
}

/// Classical four-stage Runge-Kutta.
template <class State, class Rhs>
State rk4_step(const State& v, double t, double dt, Rhs&& rhs) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    State k1 = v, k2 = v, k3 = v, k4 = v, stage = v;
    auto x = detail::state_span(v);
    auto s = detail::state_span(stage);
    auto stage_from = [&](const State& k, double c) {
        auto kk = detail::state_span(k);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + c * dt * kk[i];
    };
    rhs(t, v, k1);
    stage_from(k1, 0.5);
    rhs(t + 0.5 * dt, stage, k2);
    stage_from(k2, 0.5);
    rhs(t + 0.5 * dt, stage, k3);
    stage_from(k3, 1.0);
    rhs(t + dt, stage, k4);
    State next = v;
    auto nx = detail::state_span(next);
    auto a = detail::state_span(k1), b = detail::state_span(k2), c = detail::state_span(k3),
         d = detail::state_span(k4);
    for (std::size_t i = 0; i < nx.size(); ++i) nx[i] = x[i] + dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    detail::check_finite(next);
    return next;
}

template <class State>
struct IntegrationResult {
    State state;
    double time = 0.0;
    long steps = 0;
};

/// Advances v0 from t0 to cfg.t_final in steps of dt, shortening the last
/// step to land on t_final exactly. hook(step, t, state) is called after
/// every `cfg.hook_every` steps and once at the end.
template <class State, class Rhs, class Hook>
IntegrationResult<State> integrate(State v0, double t0, double dt, const IntegratorConfig& cfg, Rhs&& rhs, Hook&& hook) {
    cfg.validate();
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    IntegrationResult<State> res{std::move(v0), t0, 0};
    double t = t0;
    long step = 0;
    bool hooked_last = false;
    while (t < cfg.t_final) {
        double h = dt;
        bool last = false;
        if (cfg.t_final - t <= dt * (1.0 + 1e-10)) {
            h = cfg.t_final - t;
            last = true;
        }
        try {
            res.state = cfg.method == Integrator::rk2 ? rk2_step(res.state, t, h, rhs) : rk4_step(res.state, t, h, rhs);
        } catch (const NonFiniteError&) {
            auto s = detail::state_span(res.state);
            throw InstabilityError(step + 1, t + h, std::vector<double>(s.begin(), s.end()));
        }
        t = last ? cfg.t_final : t + h;
        ++step;
        hooked_last = false;
        if (cfg.hook_every > 0 && step % cfg.hook_every == 0) {
            hook(step, t, static_cast<const State&>(res.state));
            hooked_last = true;
        }
    }
    if (!hooked_last) hook(step, t, static_cast<const State&>(res.state));
    res.time = t;
    res.steps = step;
    return res;
}

template <class State, class Rhs>
IntegrationResult<State> integrate(State v0, double t0, double dt, const IntegratorConfig& cfg, Rhs&& rhs) {
    return integrate(std::move(v0), t0, dt, cfg, std::forward<Rhs>(rhs), [](long, double, const State&) {});
}

/// Time step for a scheme: the fixed one if configured, else from the CFL.
inline double scheme_dt(const InductionScheme& s, const IntegratorConfig& cfg) {
    return cfg.fixed_dt ? *cfg.fixed_dt : compute_dt(s.grid, s.coeffs, cfg.cfl);
}

/// Integrates the SBP-SAT scheme from V0 at t0 up to cfg.t_final.
template <class Hook>
IntegrationResult<MagneticField> integrate(const InductionScheme& s, MagneticField v0, double t0,
                                           const IntegratorConfig& cfg, Hook&& hook) {
    auto rhs = [&s](double t, const MagneticField& v, MagneticField& dv) { compute_rhs(s, v, t, dv); };
    return integrate(std::move(v0), t0, scheme_dt(s, cfg), cfg, rhs, std::forward<Hook>(hook));
}

inline IntegrationResult<MagneticField> integrate(const InductionScheme& s, MagneticField v0, double t0,
                                                  const IntegratorConfig& cfg) {
    return integrate(s, std::move(v0), t0, cfg, [](long, double, const MagneticField&) {});
}

} // namespace sbpsat
