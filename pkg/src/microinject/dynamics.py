"""Dynamics of the 2-DOF motion stage.

The stage obeys ``M @ qddot + B @ qdot = tau - fed`` with diagonal mass
matrix ``M = diag(mx+my+mp, my+mp)``, identity damping matrix ``B``, motor
torque ``tau`` and commanded actuator force ``fed``.  Torque and force
components are treated as commensurable generalized forces, exactly as the
model equation states them.

With ``tau = fed = 0`` the system decouples into two first-order velocity
decays and has the closed-form solution implemented by ``free_response``;
the numerical integrator is checked against it by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

from .algebra2d import Mat2, Vec2, diag, identity, mat_inv, mat_mul, mat_vec_mul
from .frames import FrameParams, transformation_matrix


class NonFiniteState(RuntimeError):
    """Integration diverged: a state component became NaN or infinite.

    ``samples`` holds the finite prefix of the trajectory; ``last_index``
    is the index of its final (finite) entry.
    """

    def __init__(self, message: str, samples: "List[Tuple[float, StageState]]"):
        super().__init__(message)
        self.samples = samples
        self.last_index = len(samples) - 1


@dataclass(frozen=True)
class MassParams:
    """Masses of the x-table, y-table and working plate; all > 0."""

    mx: float
    my: float
    mp: float

    def __post_init__(self) -> None:
        for name in ("mx", "my", "mp"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be finite and > 0")

    @property
    def total_x(self) -> float:
        """Mass moved along x: mx + my + mp."""
        return self.mx + self.my + self.mp

    @property
    def total_y(self) -> float:
        """Mass moved along y: my + mp."""
        return self.my + self.mp


@dataclass(frozen=True)
class StageState:
    """Stage configuration: positions q = (x, y) and velocities qdot."""

    q: Vec2
    qdot: Vec2

    def is_finite(self) -> bool:
        return self.q.is_finite() and self.qdot.is_finite()


@dataclass(frozen=True)
class ForcePair:
    """Planar force with x/y components (applied or commanded)."""

    fex: float
    fey: float

    @property
    def vec(self) -> Vec2:
        return Vec2(self.fex, self.fey)

    @classmethod
    def from_vec(cls, v: Vec2) -> "ForcePair":
        return cls(v.a0, v.a1)


@dataclass(frozen=True)
class Torque:
    """Motor torque with x/y components."""

    taux: float
    tauy: float

    @property
    def vec(self) -> Vec2:
        return Vec2(self.taux, self.tauy)

    @classmethod
    def from_vec(cls, v: Vec2) -> "Torque":
        return cls(v.a0, v.a1)


ZERO_FORCE = ForcePair(0.0, 0.0)
ZERO_TORQUE = Torque(0.0, 0.0)


def mass_matrix(masses: MassParams) -> Mat2:
    """diag(mx+my+mp, my+mp); diagonal and positive-definite."""
    return diag(masses.total_x, masses.total_y)


def damping_matrix() -> Mat2:
    """The positioning-table matrix: the 2x2 identity."""
    return identity()


def dynamics_residual(
    masses: MassParams, qddot: Vec2, qdot: Vec2, tau: Torque, fed: ForcePair
) -> Vec2:
    """M @ qddot + B @ qdot - (tau - fed); zero iff the dynamics hold."""
    lhs = mat_vec_mul(mass_matrix(masses), qddot) + mat_vec_mul(
        damping_matrix(), qdot
    )
    return lhs - (tau.vec - fed.vec)


def free_response(
    masses: MassParams, x0: float, y0: float, xd0: float, yd0: float, t: float
) -> StageState:
    """Closed-form torque-free, force-free motion from (x0, y0, xd0, yd0).

    x(t) = (x0 + xd0*Mx) - xd0*Mx*exp(-t/Mx) with Mx = mx+my+mp, and the
    analogous y(t) with My = my+mp; velocities are the analytic derivatives
    xd0*exp(-t/Mx), yd0*exp(-t/My).
    """
    if not t >= 0.0:
        raise ValueError("t must be >= 0")
    mx_tot = masses.total_x
    my_tot = masses.total_y
    ex = math.exp(-t / mx_tot)
    ey = math.exp(-t / my_tot)
    q = Vec2((x0 + xd0 * mx_tot) - xd0 * mx_tot * ex, (y0 + yd0 * my_tot) - yd0 * my_tot * ey)
    qdot = Vec2(xd0 * ex, yd0 * ey)
    return StageState(q, qdot)


def free_response_accel(
    masses: MassParams, xd0: float, yd0: float, t: float
) -> Vec2:
    """Analytic accelerations of the free response:
    (-(xd0/Mx)*exp(-t/Mx), -(yd0/My)*exp(-t/My))."""
    if not t >= 0.0:
        raise ValueError("t must be >= 0")
    mx_tot = masses.total_x
    my_tot = masses.total_y
    return Vec2(
        -(xd0 / mx_tot) * math.exp(-t / mx_tot),
        -(yd0 / my_tot) * math.exp(-t / my_tot),
    )


def _sample_times(t_end: float, dt: float) -> List[float]:
    # full steps of width dt, then a final partial step landing exactly on
    # t_end; times are k*dt (not accumulated) to avoid drift
    n = int(math.floor(t_end / dt))
    if (n + 1) * dt <= t_end:
        n += 1
    times = [k * dt for k in range(n + 1)]
    if times[-1] < t_end:
        times.append(t_end)
    return times


def rk4_step(
    minv: Mat2, q: Vec2, qdot: Vec2, tau_vec: Vec2, fed_vec: Vec2, h: float
) -> Tuple[Vec2, Vec2]:
    """One classical Runge-Kutta step of the stage dynamics.

    The forcing (tau_vec, fed_vec) is held constant across the substages;
    damping is the identity matrix acting on the substage velocities.
    """
    b = identity()

    def accel(v: Vec2) -> Vec2:
        return mat_vec_mul(minv, tau_vec - fed_vec - mat_vec_mul(b, v))

    k1q, k1v = qdot, accel(qdot)
    v2 = qdot + k1v.scale(0.5 * h)
    k2q, k2v = v2, accel(v2)
    v3 = qdot + k2v.scale(0.5 * h)
    k3q, k3v = v3, accel(v3)
    v4 = qdot + k3v.scale(h)
    k4q, k4v = v4, accel(v4)
    q_new = q + (k1q + k2q.scale(2.0) + k3q.scale(2.0) + k4q).scale(h / 6.0)
    qdot_new = qdot + (k1v + k2v.scale(2.0) + k3v.scale(2.0) + k4v).scale(h / 6.0)
    return q_new, qdot_new


def integrate(
    masses: MassParams,
    s0: StageState,
    tau_of_t: Callable[[float], Torque],
    fed_of_t: Callable[[float], ForcePair],
    t_end: float,
    dt: float,
) -> List[Tuple[float, StageState]]:
    """Fixed-step RK4 integration of the stage dynamics.

    Parameters
    ----------
    masses : MassParams
    s0 : StageState
        Initial state at t = 0.
    tau_of_t, fed_of_t : callables
        Time-varying torque and commanded force, evaluated at the RK4
        substage times.
    t_end : float
        End time (>= 0); a final partial step lands exactly on it.
    dt : float
        Step width (> 0).

    Returns
    -------
    list of (t, StageState) at t = 0, dt, 2*dt, ..., t_end.

    Raises
    ------
    NonFiniteState
        If any state component becomes NaN or infinite; the exception
        carries the finite prefix of the trajectory.
    """
    if not dt > 0.0:
        raise ValueError("dt must be > 0")
    if not t_end >= 0.0:
        raise ValueError("t_end must be >= 0")
    minv = mat_inv(mass_matrix(masses))
    b = identity()

    def deriv(t: float, q: Vec2, v: Vec2) -> Tuple[Vec2, Vec2]:
        forcing = tau_of_t(t).vec - fed_of_t(t).vec
        return v, mat_vec_mul(minv, forcing - mat_vec_mul(b, v))

    times = _sample_times(t_end, dt)
    samples: List[Tuple[float, StageState]] = [(0.0, s0)]
    q, v = s0.q, s0.qdot
    for i in range(len(times) - 1):
        t = times[i]
        h = times[i + 1] - t
        k1q, k1v = deriv(t, q, v)
        k2q, k2v = deriv(t + 0.5 * h, q + k1q.scale(0.5 * h), v + k1v.scale(0.5 * h))
        k3q, k3v = deriv(t + 0.5 * h, q + k2q.scale(0.5 * h), v + k2v.scale(0.5 * h))
        k4q, k4v = deriv(t + h, q + k3q.scale(h), v + k3v.scale(h))
        q = q + (k1q + k2q.scale(2.0) + k3q.scale(2.0) + k4q).scale(h / 6.0)
        v = v + (k1v + k2v.scale(2.0) + k3v.scale(2.0) + k4v).scale(h / 6.0)
        state = StageState(q, v)
        if not state.is_finite():
            raise NonFiniteState(
                f"state became non-finite at t={times[i + 1]!r}", samples
            )
        samples.append((times[i + 1], state))
    return samples


def image_space_operators(masses: MassParams, p: FrameParams) -> Tuple[Mat2, Mat2]:
    """Inertia and positioning-table operators in image space.

    Returns (M @ T_inv, B @ T_inv).  For any stage trajectory satisfying
    the dynamics, the image trajectory u = T @ q + offset satisfies
    (M @ T_inv) @ uddot + (B @ T_inv) @ udot = tau - fed.
    """
    t_inv = mat_inv(transformation_matrix(p))
    return mat_mul(mass_matrix(masses), t_inv), mat_mul(damping_matrix(), t_inv)
