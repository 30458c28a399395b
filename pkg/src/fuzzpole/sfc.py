"""State-feedback baseline: analytic linearization of the cart-pole about
upright, gain design by pole placement (Ackermann), and the control law
u = -k (state - reference).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .plant import PlantParams, PlantState

__all__ = [
    "LinearModel",
    "GainVector",
    "DesignError",
    "linearize",
    "design_gains",
    "sfc_output",
    "DEFAULT_DESIRED_POLES",
]

# Nominal continuous-time closed-loop pole set used throughout the comparison
# experiments; deliberately modest so gains stay tied to the nominal model.
DEFAULT_DESIRED_POLES = (-1.5, -1.6, -2.0, -2.2)

_STATE_ORDER = ("theta", "theta_dot", "x", "x_dot")


class DesignError(ValueError):
    pass


@dataclass(frozen=True)
class LinearModel:
    """Continuous-time (A, B) with state ordered (theta, theta_dot, x, x_dot)."""

    A: np.ndarray
    B: np.ndarray  # (4, 1)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        B = np.asarray(self.B, dtype=np.float64).reshape(4, 1)
        if A.shape != (4, 4):
            raise DesignError(f"A must be 4x4, got {A.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
            raise DesignError("linear model entries must be finite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


def linearize(p: PlantParams) -> LinearModel:
    """Analytic Jacobian of the frictionless dynamics at the upright origin.

    Friction terms are dropped (treated as a disturbance); the cart-position
    row and angle row are kinematic identities.
    """
    total = p.m_c + p.m
    d = 4.0 / 3.0 - p.m / total
    if d <= 0.0:
        raise DesignError(
            f"degenerate linearization denominator 4/3 - m/(m_c+m) = {d:g}"
        )
    denom = p.l * d
    dth_acc_dtheta = p.g / denom
    dth_acc_df = -1.0 / (total * denom)
    dx_acc_dtheta = -p.m * p.l * dth_acc_dtheta / total
    dx_acc_df = (1.0 - p.m * p.l * dth_acc_df) / total
    A = np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [dth_acc_dtheta, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [dx_acc_dtheta, 0.0, 0.0, 0.0],
        ]
    )
    B = np.array([[0.0], [dth_acc_df], [0.0], [dx_acc_df]])
    return LinearModel(A, B)


@dataclass(frozen=True)
class GainVector:
    """Feedback gain row and the target state the error is measured from."""

    k: np.ndarray  # (4,)
    reference: np.ndarray = field(
        default_factory=lambda: np.zeros(4)
    )  # (theta, theta_dot, x, x_dot)
    f_max: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "k", np.asarray(self.k, dtype=np.float64).reshape(4))
        object.__setattr__(
            self, "reference", np.asarray(self.reference, dtype=np.float64).reshape(4)
        )

    def with_target(self, x_target: float) -> "GainVector":
        return GainVector(
            self.k, np.array([0.0, 0.0, float(x_target), 0.0]), self.f_max
        )


def _conjugate_closed(poles: np.ndarray, tol: float = 1e-9) -> bool:
    remaining = list(poles)
    while remaining:
        pole = remaining.pop()
        if abs(pole.imag) <= tol:
            continue
        match = next(
            (i for i, q in enumerate(remaining) if abs(q - pole.conjugate()) <= tol),
            None,
        )
        if match is None:
            return False
        remaining.pop(match)
    return True


def design_gains(
    model: LinearModel,
    desired_poles=DEFAULT_DESIRED_POLES,
    reference=(0.0, 0.0, 0.0, 0.0),
    f_max: float = 10.0,
) -> GainVector:
    """Pole placement via Ackermann's formula for the single-input pair.

    Raises DesignError when the pole set is not closed under conjugation or
    the pair is uncontrollable (reporting the controllability-matrix rank);
    the achieved closed-loop eigenvalues are verified against the request.
    """
    poles = np.asarray(desired_poles, dtype=np.complex128).reshape(-1)
    if poles.shape != (4,):
        raise DesignError(f"need exactly 4 desired poles, got {poles.shape[0]}")
    if not _conjugate_closed(poles):
        raise DesignError(
            f"desired poles {poles} are not closed under conjugation"
        )
    A, B = model.A, model.B
    ctrb = np.hstack([B, A @ B, A @ A @ B, A @ A @ A @ B])
    rank = int(np.linalg.matrix_rank(ctrb))
    if rank < 4:
        raise DesignError(
            f"(A, B) pair is uncontrollable: controllability matrix rank {rank} < 4"
        )
    coeffs = np.poly(poles)  # monic characteristic polynomial
    coeffs = np.real_if_close(coeffs, tol=1e6)
    phi = np.zeros((4, 4))
    for c in coeffs:
        phi = phi @ A + float(np.real(c)) * np.eye(4)
    k = np.linalg.solve(ctrb.T, np.array([0.0, 0.0, 0.0, 1.0])) @ phi

    achieved = np.linalg.eigvals(A - B @ k.reshape(1, 4))
    want = np.sort_complex(poles)
    got = np.sort_complex(achieved)
    if not np.allclose(got, want, atol=1e-6, rtol=1e-6):
        raise DesignError(
            f"placement verification failed: wanted {want}, achieved {got}"
        )
    return GainVector(k, np.asarray(reference, dtype=np.float64), f_max)


def sfc_output(gains: GainVector, s: PlantState) -> float:
    """u = -k (state - reference), clamped to the actuator limit."""
    u = 0.0
    state = s.as_tuple()
    for i in range(4):
        u -= gains.k[i] * (state[i] - gains.reference[i])
    if u > gains.f_max:
        return gains.f_max
    if u < -gains.f_max:
        return -gains.f_max
    return u
