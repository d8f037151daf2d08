"""Parametrized classical dynamics on the extended phase space.

State is (q, p, t, pi_t) evolving in an arbitrary parameter sigma under a
positive lapse N(sigma):

    dq/dsigma = N dH/dp,   dp/dsigma = -N dH/dq,
    dt/dsigma = N,         dpi_t/dsigma = 0,

subject to the constraint H(p, q) + pi_t = 0.  Fixing the gauge N = 1
reproduces Hamilton's equations in t; fixing the energy instead turns the
endpoint problem into a fixed-energy, free-travel-time shooting problem
where the time of flight is an output.

The stepper is a fourth-order symplectic composition (triple-jump) of the
kick-drift-kick splitting, with the lapse entering each substep as a time
density evaluated at the substep midpoint.  pi_t has no generator and is
literally never written to, so its conservation is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    EnergyBelowBarrier,
    NonMonotoneTime,
    ShootingDiverged,
    StepSizeTooLarge,
)
from .linalg import _frozen
from .models import ClassicalSystem, hamiltonian_value

# Triple-jump composition coefficients: 2*w1 + w0 = 1, 2*w1^3 + w0^3 = 0.
_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = 1.0 - 2.0 * _W1
_JUMP = (_W1, _W0, _W1)

CONSTRAINT_START_TOL = 1e-10
DRIFT_HARD_LIMIT = 1e-4
MIN_STEPS = 16
DEFAULT_STEPS_PER_SIGMA = 512
DEFAULT_MIN_STEPS = 2048


def default_step_count(span: float) -> int:
    """Step count used when a caller does not pin one explicitly."""
    return max(DEFAULT_MIN_STEPS, int(np.ceil(abs(span) * DEFAULT_STEPS_PER_SIGMA)))


@dataclass(frozen=True)
class ExtendedPhasePoint:
    q: np.ndarray
    p: np.ndarray
    t: float
    pi_t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", _frozen(np.atleast_1d(np.asarray(self.q, dtype=float))))
        object.__setattr__(self, "p", _frozen(np.atleast_1d(np.asarray(self.p, dtype=float))))


@dataclass(frozen=True)
class LapseProfile:
    """Strictly positive rate of physical time per unit evolution parameter."""

    n_of_sigma: Callable[[float], float]
    description: str = ""


def unit_lapse() -> LapseProfile:
    return LapseProfile(lambda sigma: 1.0, description="N=1")


def sinusoidal_lapse(amplitude: float = 0.5, frequency: float = 1.0) -> LapseProfile:
    """N(sigma) = 1 + amplitude * sin(frequency * sigma).

    Over an integer number of periods this has the same integral as the
    unit lapse, which is what the reparametrization checks need.
    """
    if abs(amplitude) >= 1.0:
        raise ValueError("need |amplitude| < 1 to keep the lapse positive")

    def n(sigma: float) -> float:
        return 1.0 + amplitude * np.sin(frequency * sigma)

    return LapseProfile(n, description=f"N=1+{amplitude}*sin({frequency}*sigma)")


@dataclass(frozen=True)
class Trajectory:
    """A sigma-parametrized history on the extended phase space."""

    sigma_values: np.ndarray
    qs: np.ndarray
    ps: np.ndarray
    ts: np.ndarray
    pi_ts: np.ndarray
    h_values: np.ndarray
    lapse_values: np.ndarray
    energy_drift: float
    action_parametrized: float
    action_hamilton: float | None = None
    action_mj: float | None = None

    def __post_init__(self) -> None:
        for name in ("sigma_values", "qs", "ps", "ts", "pi_ts", "h_values", "lapse_values"):
            object.__setattr__(self, name, _frozen(np.asarray(getattr(self, name), dtype=float)))
        if np.any(np.diff(self.sigma_values) <= 0):
            raise ValueError("sigma_values must be strictly increasing")

    @property
    def states(self) -> list[ExtendedPhasePoint]:
        return [
            ExtendedPhasePoint(q=self.qs[i], p=self.ps[i], t=float(self.ts[i]), pi_t=float(self.pi_ts[i]))
            for i in range(len(self.sigma_values))
        ]

    @property
    def final_state(self) -> ExtendedPhasePoint:
        return ExtendedPhasePoint(
            q=self.qs[-1], p=self.ps[-1], t=float(self.ts[-1]), pi_t=float(self.pi_ts[-1])
        )


def _advance(sys: ClassicalSystem, lapse_n, q, p, t, sigma, h):
    """One composed step: three lapse-weighted kick-drift-kick substeps."""
    mass = sys.mass
    for c in _JUMP:
        n_mid = lapse_n(sigma + 0.5 * c * h)
        if not (n_mid > 0.0):
            raise ValueError(f"lapse must stay positive, got N({sigma + 0.5 * c * h}) = {n_mid}")
        tau = c * h * n_mid
        p = p - (0.5 * tau) * sys.grad_potential(q)
        q = q + (tau / mass) * p
        p = p - (0.5 * tau) * sys.grad_potential(q)
        t = t + tau
        sigma = sigma + c * h
    return q, p, t


def _assemble_trajectory(sys, lapse_n, sigmas, qs, ps, ts, pi_t) -> Trajectory:
    n_nodes = len(sigmas)
    h_vals = np.empty(n_nodes)
    for i in range(n_nodes):
        h_vals[i] = np.dot(ps[i], ps[i]) / (2.0 * sys.mass) + sys.potential(qs[i])
    lapse_vals = np.array([lapse_n(s) for s in sigmas])
    pi_ts = np.full(n_nodes, pi_t)
    drift = float(np.max(np.abs(h_vals + pi_t)))
    if not np.isfinite(drift) or drift > DRIFT_HARD_LIMIT:
        raise StepSizeTooLarge(
            f"constraint drift {drift:.3e} exceeds {DRIFT_HARD_LIMIT}; use more steps"
        )
    # Parametrized action: the pi_t * dt/dsigma term integrates exactly to
    # pi_t * (t_b - t_a) because pi_t is constant; the rest is trapezoid.
    kinetic_flow = lapse_vals * np.einsum("ij,ij->i", ps, ps) / sys.mass
    constraint_term = lapse_vals * (h_vals + pi_t)
    s_param = (
        float(np.trapezoid(kinetic_flow, sigmas))
        + pi_t * (ts[-1] - ts[0])
        - float(np.trapezoid(constraint_term, sigmas))
    )
    return Trajectory(
        sigma_values=sigmas,
        qs=np.asarray(qs),
        ps=np.asarray(ps),
        ts=np.asarray(ts),
        pi_ts=pi_ts,
        h_values=h_vals,
        lapse_values=lapse_vals,
        energy_drift=drift,
        action_parametrized=s_param,
    )


def integrate_parametrized(
    sys: ClassicalSystem,
    x0: ExtendedPhasePoint,
    lapse: LapseProfile,
    sigma_span: tuple[float, float],
    n_steps: int,
) -> Trajectory:
    """Integrate the extended equations with an arbitrary positive lapse."""
    if n_steps < MIN_STEPS:
        raise ValueError(f"n_steps must be at least {MIN_STEPS}")
    s0, s1 = float(sigma_span[0]), float(sigma_span[1])
    if not (s1 > s0):
        raise ValueError("sigma_span must be increasing")
    h0 = hamiltonian_value(sys, x0.q, x0.p)
    if abs(h0 + x0.pi_t) > CONSTRAINT_START_TOL:
        raise ValueError(
            f"initial state violates the constraint: H + pi_t = {h0 + x0.pi_t:.3e}"
        )
    h = (s1 - s0) / n_steps
    lapse_n = lapse.n_of_sigma
    q = np.array(x0.q, dtype=float)
    p = np.array(x0.p, dtype=float)
    t = float(x0.t)
    sigmas = s0 + h * np.arange(n_steps + 1)
    sigmas[-1] = s1
    qs = np.empty((n_steps + 1, sys.dof))
    ps = np.empty((n_steps + 1, sys.dof))
    ts = np.empty(n_steps + 1)
    qs[0], ps[0], ts[0] = q, p, t
    with np.errstate(over="ignore", invalid="ignore"):
        # an exploding coarse-step run is caught by the drift check below
        for k in range(n_steps):
            q, p, t = _advance(sys, lapse_n, q, p, t, sigmas[k], h)
            qs[k + 1], ps[k + 1], ts[k + 1] = q, p, t
    return _assemble_trajectory(sys, lapse_n, sigmas, qs, ps, ts, x0.pi_t)


def gauge_fix_hamilton(
    sys: ClassicalSystem,
    q0: np.ndarray,
    p0: np.ndarray,
    t_span: tuple[float, float],
    n_steps: int,
) -> Trajectory:
    """Parametrized integration in the gauge t(sigma) = sigma, N = 1.

    The constraint fixes pi_t = -H(p0, q0); the (q, p) history then
    coincides bit-for-bit with a direct integration of Hamilton's
    equations at the same step, since both run the same stepping kernel.
    """
    q0 = np.atleast_1d(np.asarray(q0, dtype=float))
    p0 = np.atleast_1d(np.asarray(p0, dtype=float))
    x0 = ExtendedPhasePoint(q=q0, p=p0, t=float(t_span[0]), pi_t=-hamiltonian_value(sys, q0, p0))
    return integrate_parametrized(sys, x0, unit_lapse(), t_span, n_steps)


def integrate_hamilton(
    sys: ClassicalSystem,
    q0: np.ndarray,
    p0: np.ndarray,
    t_span: tuple[float, float],
    n_steps: int,
) -> Trajectory:
    """Direct fixed-step integration of dq/dt = dH/dp, dp/dt = -dH/dq.

    Shares the stepping kernel with the parametrized integrator (unit time
    density), which is exactly what makes the gauge-reduction comparison a
    bitwise statement instead of a tolerance.
    """
    if n_steps < MIN_STEPS:
        raise ValueError(f"n_steps must be at least {MIN_STEPS}")
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (t1 > t0):
        raise ValueError("t_span must be increasing")
    q = np.atleast_1d(np.asarray(q0, dtype=float))
    p = np.atleast_1d(np.asarray(p0, dtype=float))
    pi_t = -hamiltonian_value(sys, q, p)
    h = (t1 - t0) / n_steps

    def unit(sigma: float) -> float:
        return 1.0

    sigmas = t0 + h * np.arange(n_steps + 1)
    sigmas[-1] = t1
    qs = np.empty((n_steps + 1, sys.dof))
    ps = np.empty((n_steps + 1, sys.dof))
    ts = np.empty(n_steps + 1)
    t = t0
    qs[0], ps[0], ts[0] = q, p, t
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            q, p, t = _advance(sys, unit, q, p, t, sigmas[k], h)
            qs[k + 1], ps[k + 1], ts[k + 1] = q, p, t
    return _assemble_trajectory(sys, unit, sigmas, qs, ps, ts, pi_t)


class ActionSummary(NamedTuple):
    parametrized: float
    hamilton: float | None
    maupertuis_jacobi: float | None
    routh_residual: float


def evaluate_actions(
    traj: Trajectory,
    sys: ClassicalSystem,
    e: float | None = None,
    *,
    include_hamilton: bool = True,
) -> ActionSummary:
    """Evaluate the three boundary-problem actions on one trajectory.

    parametrized: integral of [p dq/dsigma + pi_t dt/dsigma - N (H + pi_t)];
    hamilton: integral of [p qdot - H] dt (needs monotone t);
    maupertuis_jacobi: integral of [p dq/dsigma - N (H - E)] (needs E).

    The Routh residual compares the boundary-swapped action
    (p dq/dsigma - t dpi_t/dsigma - N(H + pi_t), with dpi_t/dsigma = 0
    identically) against parametrized minus the [pi_t t] boundary term; the
    identity is pure bookkeeping and must hold to roundoff.
    """
    pi_t = float(traj.pi_ts[0])
    sigmas = traj.sigma_values
    flow = traj.lapse_values * np.einsum("ij,ij->i", traj.ps, traj.ps) / sys.mass
    t1 = float(np.trapezoid(flow, sigmas))
    t3 = float(np.trapezoid(traj.lapse_values * (traj.h_values + pi_t), sigmas))
    s_param = t1 + pi_t * (traj.ts[-1] - traj.ts[0]) - t3
    s_tilde = t1 - t3
    boundary = float(traj.pi_ts[-1] * traj.ts[-1] - traj.pi_ts[0] * traj.ts[0])
    routh_residual = abs(s_tilde - (s_param - boundary))

    s_hamilton: float | None = None
    if include_hamilton:
        if np.any(np.diff(traj.ts) <= 0):
            raise NonMonotoneTime("t is not strictly increasing along this trajectory")
        integrand = np.einsum("ij,ij->i", traj.ps, traj.ps) / sys.mass - traj.h_values
        s_hamilton = float(np.trapezoid(integrand, traj.ts))

    s_mj: float | None = None
    if e is not None:
        shell_term = float(np.trapezoid(traj.lapse_values * (traj.h_values - e), sigmas))
        s_mj = t1 - shell_term
    return ActionSummary(s_param, s_hamilton, s_mj, routh_residual)


def reparametrization_invariance_check(
    sys: ClassicalSystem,
    x0: ExtendedPhasePoint,
    lapse1: LapseProfile,
    lapse2: LapseProfile,
    sigma_span: tuple[float, float],
    n_steps: int,
) -> float:
    """Max-norm difference of the final (q, p, t) under two equivalent lapses.

    The two profiles must carry the same total physical time over the span
    (checked by dense Simpson quadrature to 1e-12); the two integrations
    then traverse the same physical path at different parametrization
    speeds and must land at the same physical endpoint.
    """
    s0, s1 = float(sigma_span[0]), float(sigma_span[1])
    nodes = np.linspace(s0, s1, 16385)
    vals1 = np.array([lapse1.n_of_sigma(s) for s in nodes])
    vals2 = np.array([lapse2.n_of_sigma(s) for s in nodes])
    h = nodes[1] - nodes[0]
    weights = np.ones_like(nodes)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    int1 = float(np.dot(weights, vals1) * h / 3.0)
    int2 = float(np.dot(weights, vals2) * h / 3.0)
    if abs(int1 - int2) > 1e-12 * max(1.0, abs(int1)):
        raise ValueError(
            f"lapse profiles carry different total time: {int1!r} vs {int2!r}"
        )
    traj1 = integrate_parametrized(sys, x0, lapse1, sigma_span, n_steps)
    traj2 = integrate_parametrized(sys, x0, lapse2, sigma_span, n_steps)
    dq = float(np.max(np.abs(traj1.qs[-1] - traj2.qs[-1])))
    dp = float(np.max(np.abs(traj1.ps[-1] - traj2.ps[-1])))
    dt = abs(float(traj1.ts[-1] - traj2.ts[-1]))
    return max(dq, dp, dt)


def _shell_momentum(sys: ClassicalSystem, q: np.ndarray, e: float, direction: np.ndarray) -> np.ndarray:
    kinetic = e - sys.potential(q)
    if kinetic < 0:
        raise EnergyBelowBarrier(
            f"E = {e} lies below V(q_a) = {sys.potential(q)}; no on-shell momentum"
        )
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        direction = np.zeros(sys.dof)
        direction[0] = 1.0
        norm = 1.0
    return direction / norm * np.sqrt(2.0 * sys.mass * kinetic)


def _march_residual(
    sys: ClassicalSystem,
    q_a: np.ndarray,
    p_a: np.ndarray,
    q_b: np.ndarray,
    h: float,
    sigma_cap: float,
    *,
    stop_tol: float | None = None,
):
    """March in gauge N = 1 to closest approaches of q_b.

    Watches g(sigma) = (q - q_b) . v, the directional derivative of the
    half squared distance; a sign change from approaching to receding
    brackets a closest approach, which is then located by bisecting the
    substep width.  Returns (residual_vector, sigma_star, best) for the
    first approach, unless stop_tol is given, in which case marching
    continues past approaches whose miss distance exceeds stop_tol.
    """

    def unit(sigma: float) -> float:
        return 1.0

    q = np.array(q_a, dtype=float)
    p = np.array(p_a, dtype=float)
    t = 0.0
    sigma = 0.0
    best = None

    def g_of(qv, pv):
        return float(np.dot(qv - q_b, pv)) / sys.mass

    g_prev = g_of(q, p)
    n_max = int(np.ceil(sigma_cap / h))
    for _ in range(n_max):
        q_next, p_next, t_next = _advance(sys, unit, q, p, t, sigma, h)
        g_next = g_of(q_next, p_next)
        if g_prev < 0.0 <= g_next:
            lo, hi = 0.0, 1.0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                qm, pm, tm = _advance(sys, unit, q, p, t, sigma, mid * h)
                if g_of(qm, pm) < 0.0:
                    lo = mid
                else:
                    hi = mid
            lam = 0.5 * (lo + hi)
            q_star, p_star, t_star = _advance(sys, unit, q, p, t, sigma, lam * h)
            residual = q_star - q_b
            candidate = (residual, sigma + lam * h, t_star, q_star, p_star)
            miss = float(np.max(np.abs(residual)))
            if stop_tol is None or miss <= stop_tol:
                return candidate
            if best is None or miss < float(np.max(np.abs(best[0]))):
                best = candidate
        q, p, t, sigma = q_next, p_next, t_next, sigma + h
        g_prev = g_next
    if best is not None:
        return best
    return None


def maupertuis_shoot(
    sys: ClassicalSystem,
    q_a: np.ndarray,
    q_b: np.ndarray,
    e: float,
    init_guess: np.ndarray,
    *,
    steps_per_unit: int = 2048,
    sigma_cap: float = 128.0,
    endpoint_tol: float = 1e-8,
    max_iter: int = 200,
) -> tuple[np.ndarray, float, Trajectory]:
    """Fixed-energy two-point boundary problem, travel time left free.

    The momentum magnitude at q_a is pinned to the shell H(p, q_a) = E at
    every iterate (only the direction is ever adjusted), the endpoints and
    the energy are the data, and the time of flight is read off the
    solution.  Multiple solutions are not enumerated: the solver stays in
    the basin of init_guess.
    """
    q_a = np.atleast_1d(np.asarray(q_a, dtype=float))
    q_b = np.atleast_1d(np.asarray(q_b, dtype=float))
    guess = np.atleast_1d(np.asarray(init_guess, dtype=float))
    if q_a.shape != (sys.dof,) or q_b.shape != (sys.dof,):
        raise ValueError(f"endpoints must have shape ({sys.dof},)")
    h = 1.0 / steps_per_unit
    p_a = _shell_momentum(sys, q_a, e, guess)

    if float(np.max(np.abs(q_a - q_b))) <= 1e-14:
        # Degenerate endpoints: the zero-length solution, by convention.
        sigmas = np.array([0.0, 1e-12])
        qs = np.vstack([q_a, q_a])
        ps = np.vstack([p_a, p_a])
        ts = np.array([0.0, 1e-12])
        lapse = unit_lapse()
        traj = _assemble_trajectory(sys, lapse.n_of_sigma, sigmas, qs, ps, ts, -e)
        return p_a, 0.0, traj

    def solve_march(p_start, stop_tol):
        return _march_residual(sys, q_a, p_start, q_b, h, sigma_cap, stop_tol=stop_tol)

    if sys.dof == 1:
        # On the shell the 1-dof momentum is fixed up to sign, so the march
        # simply continues until a crossing in the chosen direction.
        hit = solve_march(p_a, endpoint_tol)
        if hit is None or float(np.max(np.abs(hit[0]))) > endpoint_tol:
            raise ShootingDiverged(
                f"no crossing of q_b within sigma <= {sigma_cap} in this basin"
            )
        residual, sigma_star, t_star = hit[0], hit[1], hit[2]
    else:
        # Only the momentum direction is free (the magnitude is pinned to
        # the shell), so the secant iteration runs in an orthonormal basis
        # of the tangent space at the current direction.
        p_cur = p_a
        hit = solve_march(p_cur, None)
        if hit is None:
            raise ShootingDiverged("trajectory never approaches q_b from init_guess")
        residual, sigma_star, t_star = hit[0], hit[1], hit[2]
        p_mag = float(np.linalg.norm(p_cur))
        fd_eps = 1e-6 * p_mag
        for _ in range(max_iter):
            miss = float(np.max(np.abs(residual)))
            if miss <= endpoint_tol:
                break
            basis, _ = np.linalg.qr(
                np.column_stack([p_cur / p_mag, np.eye(sys.dof)])
            )
            tangent = basis[:, 1 : sys.dof]
            jac = np.empty((sys.dof, sys.dof - 1))
            for i in range(sys.dof - 1):
                p_pert = _shell_momentum(sys, q_a, e, p_cur + fd_eps * tangent[:, i])
                pert = solve_march(p_pert, None)
                if pert is None:
                    raise ShootingDiverged("perturbed trajectory lost the target")
                jac[:, i] = (pert[0] - residual) / fd_eps
            step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
            damping = 1.0
            improved = False
            for _ in range(12):
                p_try = _shell_momentum(sys, q_a, e, p_cur + damping * (tangent @ step))
                trial = solve_march(p_try, None)
                if trial is not None and float(np.max(np.abs(trial[0]))) < miss:
                    p_cur, (residual, sigma_star, t_star) = p_try, (trial[0], trial[1], trial[2])
                    improved = True
                    break
                damping *= 0.5
            if not improved:
                raise ShootingDiverged(
                    f"damped secant stalled with residual {miss:.3e}"
                )
        else:
            raise ShootingDiverged(f"no convergence within {max_iter} iterations")
        p_a = p_cur
        if float(np.max(np.abs(residual))) > endpoint_tol:
            raise ShootingDiverged(
                f"residual {float(np.max(np.abs(residual))):.3e} above tolerance"
            )

    n_steps = max(MIN_STEPS, int(np.ceil(sigma_star * steps_per_unit)))
    x0 = ExtendedPhasePoint(q=q_a, p=p_a, t=0.0, pi_t=-e)
    traj = integrate_parametrized(sys, x0, unit_lapse(), (0.0, sigma_star), n_steps)
    final_miss = float(np.max(np.abs(traj.qs[-1] - q_b)))
    if final_miss > endpoint_tol:
        raise ShootingDiverged(
            f"re-integrated endpoint misses q_b by {final_miss:.3e}"
        )
    time_of_flight = float(traj.ts[-1] - traj.ts[0])
    return p_a, time_of_flight, traj
