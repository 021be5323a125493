#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/field.hpp"
#include "yaf/grid.hpp"
#include "yaf/operators.hpp"

namespace yaf {

/**
 * Time parametrisation carried by a trajectory.
 *
 * - `rescaled`: the conformal density u^p evolves linearly through the
 *   Laplacian, d(v^p)/ds = lap v.  Comparison brackets are stated on this
 *   clock.
 * - `geometric`: the metric evolves by minus its scalar curvature; the
 *   stepped variable is w = v^{4/(n-2)} and dw/dt = B[w].  ADM-mass series
 *   are reported on this clock.
 *
 * The two clocks differ by the constant factor time_rescale_factor(c):
 * s = c t.  The tag is fixed for a trajectory.
 */
enum class TimeForm { rescaled, geometric };

inline const char* to_string(TimeForm f) {
  return f == TimeForm::rescaled ? "rescaled" : "geometric";
}

enum class Scheme { explicit_euler, implicit_euler_newton };

inline const char* to_string(Scheme s) {
  return s == Scheme::explicit_euler ? "explicit_euler" : "implicit_euler_newton";
}

enum class InnerBoundaryKind { origin_regular, dirichlet };

/**
 * Boundary treatment.  The outer node always carries Dirichlet data; the
 * inner node is either an evolving origin-regular row (grids reaching r = 0)
 * or Dirichlet (excised core).  Absent values pin the boundary at the state's
 * current endpoint values, i.e. stationary Dirichlet data.
 */
struct BoundarySpec {
  InnerBoundaryKind inner = InnerBoundaryKind::origin_regular;
  std::optional<double> inner_value;  ///< conformal-factor value; dirichlet only
  std::optional<double> outer_value;  ///< conformal-factor value
};

/** Optional manufactured source, added to the stepped equation's right side. */
using SourceFn = std::function<double(double r, double t)>;

struct SolverConfig {
  Scheme scheme = Scheme::implicit_euler_newton;
  double dt = 1e-2;
  double cfl_safety = 0.5;    ///< explicit scheme: fraction of the stability limit
  double newton_tol = 1e-10;  ///< sup-norm residual target of the implicit solve
  int newton_max_iter = 25;
  BoundarySpec boundary;
  SourceFn source;  ///< source for dv/ds (rescaled) or dw/dt (geometric)
};

/** Conformal factor together with its clock. */
struct FlowState {
  ConformalField v;
  double time = 0.0;
  TimeForm form = TimeForm::geometric;
};

struct StepStats {
  int newton_iterations = 0;
  double residual = 0.0;
  double dt = 0.0;
};

// ---------------------------------------------------------------------------
// Right-hand sides
// ---------------------------------------------------------------------------

/// dv/ds at one node in the rescaled form: (1/p) v^{1-p} lap v.
inline double rhs_u_form_pointwise(double v, double lap_v, const Constants& c) {
  return (1.0 / c.p) * std::pow(v, 1.0 - c.p) * lap_v;
}

/// dw/dt at one node: -R0 + (n-1) [ lap w / w + (n-6)/4 (w')^2 / w^2 ].
inline double rhs_w_form_pointwise(double w, double lap_w, double dw, double r0,
                                   const Constants& c) {
  const double nm1 = static_cast<double>(c.n - 1);
  const double grad_coef = static_cast<double>(c.n - 6) / 4.0;
  return -r0 + nm1 * (lap_w / w + grad_coef * dw * dw / (w * w));
}

/**
 * dv/ds over the grid in the rescaled form.  Non-evolving rows (Dirichlet
 * endpoints) are zero; the origin row of an origin-regular grid evolves.
 */
inline std::vector<double> rhs_u_form(const ConformalField& v, const Constants& c) {
  if (v.grid()->dim() != c.n) {
    throw InvalidArgumentError("rhs_u_form: grid dimension does not match constants");
  }
  const Tridiagonal lap = laplacian_matrix(*v.grid());
  const std::vector<double> lv = lap.apply(v.values());
  std::vector<double> out(v.size(), 0.0);
  const std::size_t first = v.grid()->origin_regular() ? 0 : 1;
  for (std::size_t i = first; i + 1 < v.size(); ++i) {
    out[i] = rhs_u_form_pointwise(v[i], lv[i], c);
  }
  return out;
}

/** dw/dt over the grid in the geometric form, against background curvature R0. */
inline std::vector<double> rhs_w_form(const RadialGrid& g, const std::vector<double>& w,
                                      const std::vector<double>& r0, const Constants& c) {
  require_size(w.size(), g.size(), "rhs_w_form");
  require_size(r0.size(), g.size(), "rhs_w_form (R0)");
  if (g.dim() != c.n) {
    throw InvalidArgumentError("rhs_w_form: grid dimension does not match constants");
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) {
      throw PositivityError("rhs_w_form: w must be positive", i, w[i]);
    }
  }
  const Tridiagonal lap = laplacian_matrix(g);
  const Tridiagonal der = derivative_matrix(g);
  const std::vector<double> lw = lap.apply(w);
  const std::vector<double> dw = der.apply(w);
  std::vector<double> out(w.size(), 0.0);
  const std::size_t first = g.origin_regular() ? 0 : 1;
  for (std::size_t i = first; i + 1 < w.size(); ++i) {
    // the derivative matrix has a zero origin row, consistent with even parity
    out[i] = rhs_w_form_pointwise(w[i], lw[i], dw[i], r0[i], c);
  }
  return out;
}

/**
 * Linearisation of the geometric right side at w: the tridiagonal operator
 *
 *   L(w) phi = (n-1) [ lap phi / w - lap w phi / w^2
 *                     + (n-6)/2 ( <w', phi'> / w^2 - (w')^2 phi / w^3 ) ].
 *
 * Assembled with the same discrete Laplacian and gradient as rhs_w_form, this
 * is the exact Jacobian of the discrete right side, which the implicit Newton
 * solver relies on.  Rows of Dirichlet nodes are zero.
 */
inline Tridiagonal newton_linearization(const RadialGrid& g, const std::vector<double>& w,
                                        const Constants& c) {
  require_size(w.size(), g.size(), "newton_linearization");
  const std::size_t n = g.size();
  const double nm1 = static_cast<double>(c.n - 1);
  const double half_grad = static_cast<double>(c.n - 6) / 2.0;
  const Tridiagonal lap = laplacian_matrix(g);
  const Tridiagonal der = derivative_matrix(g);
  const std::vector<double> lw = lap.apply(w);
  const std::vector<double> dw = der.apply(w);
  Tridiagonal out(n);
  const std::size_t first = g.origin_regular() ? 0 : 1;
  for (std::size_t i = first; i + 1 < n; ++i) {
    const double wi = w[i];
    const double w2 = wi * wi;
    const double lap_scale = nm1 / wi;
    const double grad_scale = nm1 * half_grad * dw[i] / w2;
    out.lower[i] = lap_scale * lap.lower[i] + grad_scale * der.lower[i];
    out.upper[i] = lap_scale * lap.upper[i] + grad_scale * der.upper[i];
    out.diag[i] = lap_scale * lap.diag[i] + grad_scale * der.diag[i] -
                  nm1 * (lw[i] / w2 + half_grad * dw[i] * dw[i] / (w2 * wi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

namespace detail {

inline double sup_norm(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

struct BoundaryValues {
  bool inner_dirichlet = false;
  double inner = 1.0;
  double outer = 1.0;
};

inline BoundaryValues resolve_boundary(const FlowState& s, const BoundarySpec& bc) {
  const RadialGrid& g = *s.v.grid();
  BoundaryValues out;
  if (bc.inner == InnerBoundaryKind::origin_regular) {
    if (!g.origin_regular()) {
      throw InvalidArgumentError(
          "step: origin-regular boundary requested on a grid with r_inner > 0");
    }
    out.inner_dirichlet = false;
  } else {
    if (g.origin_regular()) {
      throw InvalidArgumentError(
          "step: Dirichlet inner boundary requested on an origin-regular grid; "
          "grids reaching r = 0 must use the origin-regular mode");
    }
    out.inner_dirichlet = true;
    out.inner = bc.inner_value.value_or(s.v[0]);
    if (!(out.inner > 0.0)) {
      throw InvalidArgumentError("step: inner Dirichlet value must be positive");
    }
  }
  out.outer = bc.outer_value.value_or(s.v[s.v.size() - 1]);
  if (!(out.outer > 0.0)) {
    throw InvalidArgumentError("step: outer Dirichlet value must be positive");
  }
  return out;
}

/// Newton iteration with residual-monotonising damping (at most five
/// halvings) on F(x) = 0; J is re-assembled by `jacobian` at each iterate.
/// Iterates are kept strictly positive.  Returns the final residual.
template <class ResidualFn, class JacobianFn>
double damped_newton(std::vector<double>& x, const ResidualFn& residual,
                     const JacobianFn& jacobian, double tol, int max_iter, double time,
                     int* iters_out) {
  std::vector<double> f = residual(x);
  double fnorm = sup_norm(f);
  int iter = 0;
  while (fnorm > tol) {
    if (iter >= max_iter) {
      throw StepError("implicit step: Newton failed to reach tolerance " + std::to_string(tol) +
                          " within " + std::to_string(max_iter) + " iterations (residual " +
                          std::to_string(fnorm) + ")",
                      time, fnorm);
    }
    Tridiagonal j = jacobian(x);
    std::vector<double> rhs(f);
    for (auto& v : rhs) v = -v;
    const std::vector<double> delta = solve_tridiagonal(j, rhs);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 5; ++halving) {
      std::vector<double> trial(x);
      bool positive = true;
      for (std::size_t i = 0; i < x.size(); ++i) {
        trial[i] += alpha * delta[i];
        if (!(trial[i] > 0.0) || !std::isfinite(trial[i])) positive = false;
      }
      if (positive) {
        std::vector<double> ftrial = residual(trial);
        const double ftn = sup_norm(ftrial);
        if (ftn < fnorm || ftn <= tol) {
          x = std::move(trial);
          f = std::move(ftrial);
          fnorm = ftn;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      throw StepError("implicit step: Newton damping exhausted (five halvings) at residual " +
                          std::to_string(fnorm),
                      time, fnorm);
    }
    ++iter;
  }
  if (iters_out) *iters_out = iter;
  return fnorm;
}

}  // namespace detail

/** Largest explicit-Euler step the linearised diffusion admits (before the
 *  cfl_safety factor is applied). */
inline double explicit_stability_limit(const FlowState& s, const Constants& c) {
  const RadialGrid& g = *s.v.grid();
  const Tridiagonal lap = laplacian_matrix(g);
  double limit = kInfinity;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (lap.diag[i] == 0.0) continue;
    double rate;  // linearised decay rate of the diffusion at node i
    if (s.form == TimeForm::rescaled) {
      rate = std::abs(lap.diag[i]) / (c.p * std::pow(s.v[i], c.p - 1.0));
    } else {
      const double w = std::pow(s.v[i], 4.0 / (c.n - 2.0));
      rate = static_cast<double>(c.n - 1) * std::abs(lap.diag[i]) / w;
    }
    limit = std::min(limit, 1.0 / rate);
  }
  return limit;
}

/**
 * Advance one time step.
 *
 * Rescaled form: the conservative density y = v^p satisfies dy/ds = lap v
 * (+ p v^{p-1} source); the implicit solve works on v with
 * F(v) = v^p - y_old - dt (lap v + ...).  Because the Jacobian
 * p diag(v^{p-1}) - dt lap is an M-matrix, the discrete step map is
 * inverse-monotone, which is what the comparison-principle and
 * sign-preservation guarantees rest on.
 *
 * Geometric form: w = v^{4/(n-2)} advances through dw/dt = B[w] with the
 * exact discrete Jacobian from newton_linearization.
 *
 * Positivity is a hard invariant: a step that cannot maintain it raises
 * (PositivityError or StepError); values are never clipped.
 */
inline FlowState step(const FlowState& s, const SolverConfig& cfg, const Constants& c,
                      StepStats* stats = nullptr) {
  const RadialGrid& g = *s.v.grid();
  if (g.dim() != c.n) {
    throw InvalidArgumentError("step: grid dimension does not match constants");
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw InvalidArgumentError("step: dt must be positive and finite");
  }
  const detail::BoundaryValues bv = detail::resolve_boundary(s, cfg.boundary);
  const double t_new = s.time + cfg.dt;
  const std::size_t n = g.size();
  const Tridiagonal lap = laplacian_matrix(g);
  const std::size_t first = g.origin_regular() ? 0 : 1;

  if (cfg.scheme == Scheme::explicit_euler) {
    const double limit = cfg.cfl_safety * explicit_stability_limit(s, c);
    if (cfg.dt > limit) {
      throw StepError("explicit step: dt = " + std::to_string(cfg.dt) +
                          " exceeds the stability bound cfl_safety * " +
                          std::to_string(limit / cfg.cfl_safety),
                      s.time, 0.0);
    }
  }

  std::vector<double> vnew(s.v.values());
  if (bv.inner_dirichlet) vnew[0] = bv.inner;
  vnew[n - 1] = bv.outer;

  if (s.form == TimeForm::rescaled) {
    auto source_at = [&](const std::vector<double>& x, double t) {
      std::vector<double> src(n, 0.0);
      if (cfg.source) {
        for (std::size_t i = first; i + 1 < n; ++i) {
          src[i] = c.p * std::pow(x[i], c.p - 1.0) * cfg.source(g.node(i), t);
        }
      }
      return src;
    };
    std::vector<double> y_old(n);
    for (std::size_t i = 0; i < n; ++i) y_old[i] = std::pow(s.v[i], c.p);

    if (cfg.scheme == Scheme::explicit_euler) {
      const std::vector<double> lv = lap.apply(s.v.values());
      const std::vector<double> src = source_at(s.v.values(), s.time);
      for (std::size_t i = first; i + 1 < n; ++i) {
        const double y = y_old[i] + cfg.dt * (lv[i] + src[i]);
        if (!(y > 0.0) || !std::isfinite(y)) {
          throw PositivityError("explicit step: density lost positivity at node " +
                                    std::to_string(i),
                                i, y);
        }
        vnew[i] = std::pow(y, 1.0 / c.p);
      }
      if (stats) *stats = {0, 0.0, cfg.dt};
    } else {
      auto residual = [&](const std::vector<double>& x) {
        const std::vector<double> lv = lap.apply(x);
        const std::vector<double> src = source_at(x, t_new);
        std::vector<double> f(n, 0.0);
        for (std::size_t i = first; i + 1 < n; ++i) {
          f[i] = std::pow(x[i], c.p) - y_old[i] - cfg.dt * (lv[i] + src[i]);
        }
        return f;
      };
      auto jacobian = [&](const std::vector<double>& x) {
        Tridiagonal j(n);
        for (std::size_t i = 0; i < n; ++i) j.diag[i] = 1.0;  // identity on BC rows
        for (std::size_t i = first; i + 1 < n; ++i) {
          j.lower[i] = -cfg.dt * lap.lower[i];
          j.upper[i] = -cfg.dt * lap.upper[i];
          j.diag[i] = c.p * std::pow(x[i], c.p - 1.0) - cfg.dt * lap.diag[i];
          if (cfg.source) {
            j.diag[i] -= cfg.dt * c.p * (c.p - 1.0) * std::pow(x[i], c.p - 2.0) *
                         cfg.source(g.node(i), t_new);
          }
        }
        return j;
      };
      StepStats st;
      st.dt = cfg.dt;
      st.residual = detail::damped_newton(vnew, residual, jacobian, cfg.newton_tol,
                                          cfg.newton_max_iter, s.time, &st.newton_iterations);
      if (stats) *stats = st;
    }
    return FlowState{s.v.with_values(std::move(vnew)), t_new, s.form};
  }

  // geometric form: step w = v^{4/(n-2)}
  const double w_expo = 4.0 / static_cast<double>(c.n - 2);
  std::vector<double> w_old(n);
  for (std::size_t i = 0; i < n; ++i) w_old[i] = std::pow(s.v[i], w_expo);
  std::vector<double> r0(n, 0.0);  // flat background carries zero scalar curvature
  std::vector<double> w(w_old);
  if (bv.inner_dirichlet) w[0] = std::pow(bv.inner, w_expo);
  w[n - 1] = std::pow(bv.outer, w_expo);

  auto add_source = [&](std::vector<double>& rhs, double t) {
    if (!cfg.source) return;
    for (std::size_t i = first; i + 1 < n; ++i) rhs[i] += cfg.source(g.node(i), t);
  };

  if (cfg.scheme == Scheme::explicit_euler) {
    std::vector<double> b = rhs_w_form(g, w_old, r0, c);
    add_source(b, s.time);
    for (std::size_t i = first; i + 1 < n; ++i) {
      w[i] = w_old[i] + cfg.dt * b[i];
      if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
        throw PositivityError("explicit step: w lost positivity at node " + std::to_string(i), i,
                              w[i]);
      }
    }
    if (stats) *stats = {0, 0.0, cfg.dt};
  } else {
    auto residual = [&](const std::vector<double>& x) {
      std::vector<double> b = rhs_w_form(g, x, r0, c);
      add_source(b, t_new);
      std::vector<double> f(n, 0.0);
      for (std::size_t i = first; i + 1 < n; ++i) {
        f[i] = x[i] - w_old[i] - cfg.dt * b[i];
      }
      return f;
    };
    auto jacobian = [&](const std::vector<double>& x) {
      Tridiagonal l = newton_linearization(g, x, c);
      Tridiagonal j(n);
      for (std::size_t i = 0; i < n; ++i) j.diag[i] = 1.0;
      for (std::size_t i = first; i + 1 < n; ++i) {
        j.lower[i] = -cfg.dt * l.lower[i];
        j.upper[i] = -cfg.dt * l.upper[i];
        j.diag[i] = 1.0 - cfg.dt * l.diag[i];
      }
      return j;
    };
    StepStats st;
    st.dt = cfg.dt;
    st.residual = detail::damped_newton(w, residual, jacobian, cfg.newton_tol,
                                        cfg.newton_max_iter, s.time, &st.newton_iterations);
    if (stats) *stats = st;
  }
  for (std::size_t i = 0; i < n; ++i) vnew[i] = std::pow(w[i], 1.0 / w_expo);
  return FlowState{s.v.with_values(std::move(vnew)), t_new, s.form};
}

// ---------------------------------------------------------------------------
// Trajectories and monitors
// ---------------------------------------------------------------------------

enum class EventSeverity { info, violation, fatal };

inline const char* to_string(EventSeverity s) {
  switch (s) {
    case EventSeverity::info: return "info";
    case EventSeverity::violation: return "violation";
    case EventSeverity::fatal: return "fatal";
  }
  return "?";
}

struct MonitorEvent {
  double time = 0.0;
  std::string monitor;
  std::string series;  ///< which scalar of the monitor this value belongs to
  double value = 0.0;
  EventSeverity severity = EventSeverity::info;
  std::string detail;
};

/**
 * Observer called on every retained snapshot.  A monitor accumulates its own
 * series and verdict; an event of fatal severity aborts the evolution cleanly
 * after the snapshot is recorded.
 */
class FlowMonitor {
 public:
  virtual ~FlowMonitor() = default;
  virtual std::string name() const = 0;
  virtual std::vector<MonitorEvent> observe(const FlowState& state) = 0;
  virtual bool passed() const = 0;
  virtual std::string verdict_detail() const { return {}; }
};

struct FlowTrajectory {
  TimeForm form = TimeForm::geometric;
  std::vector<FlowState> snapshots;
  std::vector<MonitorEvent> events;
  std::size_t steps_taken = 0;
  bool aborted = false;
  std::string abort_reason;

  const FlowState& initial() const { return snapshots.front(); }
  const FlowState& final_state() const { return snapshots.back(); }
};

/**
 * March from state.time to t_end with fixed steps (a shorter final step lands
 * exactly on t_end), retaining every `snapshot_stride`-th state plus the
 * initial and final ones.  Monitors observe each retained snapshot; a fatal
 * event or a failed step aborts cleanly, returning the trajectory up to and
 * including the last sound state.
 */
inline FlowTrajectory evolve(FlowState state, const SolverConfig& cfg, double t_end,
                             const std::vector<std::shared_ptr<FlowMonitor>>& monitors = {},
                             std::size_t snapshot_stride = 1) {
  if (!(t_end >= state.time)) {
    throw InvalidArgumentError("evolve: t_end precedes the initial time");
  }
  if (snapshot_stride == 0) {
    throw InvalidArgumentError("evolve: snapshot_stride must be >= 1");
  }
  FlowTrajectory traj;
  traj.form = state.form;

  auto record = [&](const FlowState& s) -> bool {
    traj.snapshots.push_back(s);
    bool fatal = false;
    for (const auto& m : monitors) {
      for (auto& e : m->observe(s)) {
        if (e.severity == EventSeverity::fatal) fatal = true;
        traj.events.push_back(std::move(e));
      }
    }
    return fatal;
  };

  if (record(state)) {
    traj.aborted = true;
    traj.abort_reason = "fatal monitor event on the initial state";
    return traj;
  }

  const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));
  const Constants consts = Constants::for_dimension(state.v.grid()->dim());
  std::size_t since_snapshot = 0;
  while (state.time < t_end - tiny) {
    SolverConfig step_cfg = cfg;
    step_cfg.dt = std::min(cfg.dt, t_end - state.time);
    try {
      state = step(state, step_cfg, consts);
    } catch (const Error& e) {
      traj.aborted = true;
      traj.abort_reason = e.what();
      MonitorEvent ev;
      ev.time = state.time;
      ev.monitor = "stepper";
      ev.series = "abort";
      ev.severity = EventSeverity::fatal;
      ev.detail = e.what();
      traj.events.push_back(std::move(ev));
      return traj;
    }
    ++traj.steps_taken;
    ++since_snapshot;
    const bool last = state.time >= t_end - tiny;
    if (since_snapshot >= snapshot_stride || last) {
      since_snapshot = 0;
      if (record(state)) {
        traj.aborted = true;
        traj.abort_reason = "fatal monitor event at t = " + std::to_string(state.time);
        return traj;
      }
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Comparison bracket and existence time
// ---------------------------------------------------------------------------

/**
 * Sup/inf comparison bracket for the normalised factor u = v/v0 at rescaled
 * time t, driven by S = sup |R(g0)|:
 *
 *   (1 - c_n S t)^{(n-2)/4}  <=  u  <=  (1 + c_n S t)^{(n-2)/4},
 *   c_n = (n-2)/((n-1)(n+2)).
 *
 * The lower bound degenerates at t = 1/(c_n S); past that point it carries no
 * information and `lower_valid` is false (lower is reported as 0).
 */
struct Bracket {
  double lower = 0.0;
  double upper = kInfinity;
  bool lower_valid = true;
};

inline Bracket maximum_principle_bracket(double t, double sup_r0, const Constants& c) {
  if (t < 0.0 || sup_r0 < 0.0) {
    throw InvalidArgumentError("maximum_principle_bracket: t and sup_r0 must be >= 0");
  }
  const double cn = c.bracket_rate();
  const double expo = static_cast<double>(c.n - 2) / 4.0;
  Bracket b;
  b.upper = std::pow(1.0 + cn * sup_r0 * t, expo);
  const double low_base = 1.0 - cn * sup_r0 * t;
  if (low_base > 0.0) {
    b.lower = std::pow(low_base, expo);
    b.lower_valid = true;
  } else {
    b.lower = 0.0;
    b.lower_valid = false;
  }
  return b;
}

/** One bracket check of a snapshot. */
struct BracketReport {
  double time = 0.0;  ///< rescaled time at which the bracket applies
  double lower = 0.0;
  double upper = 0.0;
  bool lower_valid = true;
  double min_u = 0.0;
  double max_u = 0.0;
  bool satisfied = true;
};

inline BracketReport bracket_report(double rescaled_time, double min_u, double max_u,
                                    double sup_r0, const Constants& c, double tol = 1e-8) {
  const Bracket b = maximum_principle_bracket(rescaled_time, sup_r0, c);
  BracketReport rep;
  rep.time = rescaled_time;
  rep.lower = b.lower;
  rep.upper = b.upper;
  rep.lower_valid = b.lower_valid;
  rep.min_u = min_u;
  rep.max_u = max_u;
  rep.satisfied = (max_u <= b.upper + tol) && (!b.lower_valid || min_u >= b.lower - tol);
  return rep;
}

/**
 * Rescaled-time horizon up to which the lower bracket certifies that u stays
 * above (1/2)^{(n-2)/4}: T = (n-1)(n+2) / (2 (n-2) sup_r0).  A vanishing
 * curvature bound yields an infinite horizon (sentinel).
 */
inline double guaranteed_existence_time(double sup_r0, const Constants& c) {
  if (sup_r0 < 0.0) {
    throw InvalidArgumentError("guaranteed_existence_time: sup_r0 must be >= 0");
  }
  if (sup_r0 == 0.0) return kInfinity;
  return static_cast<double>(c.n - 1) * static_cast<double>(c.n + 2) /
         (2.0 * static_cast<double>(c.n - 2) * sup_r0);
}

// ---------------------------------------------------------------------------
// Fine-solution certificate
// ---------------------------------------------------------------------------

struct CertificateThresholds {
  double u_min = 1e-6;      ///< inf u must stay above this
  double u_max = 1e6;       ///< sup u must stay below this
  double grad_max = 1e6;    ///< sup |grad u| w.r.t. the background metric
  double curv_max = 1e6;    ///< sup |R| (curvature proxy for the conformal class)
};

/**
 * Uniform bounds harvested from a trajectory: positivity bracket of
 * u = v/v0, gradient bound, and the scalar-curvature bound that controls the
 * curvature of a rotationally symmetric conformally flat metric.  `certified`
 * says every snapshot respected the thresholds.
 */
struct SolutionCertificate {
  double inf_u = kInfinity;
  double sup_u = 0.0;
  double sup_grad_u = 0.0;
  double sup_curvature = 0.0;
  bool certified = true;
  double first_failure_time = 0.0;  ///< meaningful only when !certified
};

inline SolutionCertificate fine_solution_certificate(const FlowTrajectory& traj,
                                                     const ConformalField& v0,
                                                     const Constants& c,
                                                     CertificateThresholds thr = {}) {
  if (traj.snapshots.empty()) {
    throw InvalidArgumentError("fine_solution_certificate: empty trajectory");
  }
  const RadialGrid& g = *v0.grid();
  require_same_grid(g, *traj.initial().v.grid(), "fine_solution_certificate");
  SolutionCertificate cert;
  const double metric_expo = -2.0 / static_cast<double>(c.n - 2);
  bool failed = false;
  for (const auto& s : traj.snapshots) {
    std::vector<double> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) u[i] = s.v[i] / v0[i];
    const std::vector<double> du = radial_derivative(g, u);
    const std::vector<double> curv = scalar_curvature(s.v, c);
    double lo = kInfinity, hi = 0.0, gr = 0.0, rc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      lo = std::min(lo, u[i]);
      hi = std::max(hi, u[i]);
      gr = std::max(gr, std::pow(v0[i], metric_expo) * std::abs(du[i]));
      rc = std::max(rc, std::abs(curv[i]));
    }
    cert.inf_u = std::min(cert.inf_u, lo);
    cert.sup_u = std::max(cert.sup_u, hi);
    cert.sup_grad_u = std::max(cert.sup_grad_u, gr);
    cert.sup_curvature = std::max(cert.sup_curvature, rc);
    if (!failed && (lo < thr.u_min || hi > thr.u_max || gr > thr.grad_max || rc > thr.curv_max)) {
      failed = true;
      cert.certified = false;
      cert.first_failure_time = s.time;
    }
  }
  return cert;
}

/// Convert a trajectory/monitor time to the rescaled clock.
inline double to_rescaled_time(double t, TimeForm form, const Constants& c) {
  return form == TimeForm::rescaled ? t : t * time_rescale_factor(c);
}

/// Convert a trajectory/monitor time to the geometric clock.
inline double to_geometric_time(double t, TimeForm form, const Constants& c) {
  return form == TimeForm::geometric ? t : t / time_rescale_factor(c);
}

}  // namespace yaf
