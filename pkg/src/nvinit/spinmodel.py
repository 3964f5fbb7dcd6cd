"""Six-level rate model of laser-driven population redistribution.

The working subspace is spanned by |m_s, m_I> with m_s in {0, -1} and
m_I in {-1, +1, 0}.  Canonical index order of the population vector:

    0: |0,-1>   1: |0,+1>   2: |0,0>   3: |-1,-1>   4: |-1,+1>   5: |-1,0>

During laser illumination the electron repolarizes (-1 -> 0) at rate k_s
while the nuclear spin hops between the m_I levels of the m_s=0 manifold
at rate k_i.  All times are in microseconds, rates in 1/us.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LEVELS",
    "LEVEL_INDEX",
    "RateParams",
    "validate_population",
    "rate_matrix",
    "propagator",
    "propagate",
    "propagate_numeric",
    "steady_state",
    "seg1_reference_solution",
    "seg2_reference_solution",
    "NUCLEAR_MIRROR",
]

#: (m_s, m_I) pairs in canonical index order.
LEVELS = ((0, -1), (0, +1), (0, 0), (-1, -1), (-1, +1), (-1, 0))

#: Map (m_s, m_I) -> canonical index.
LEVEL_INDEX = {lvl: i for i, lvl in enumerate(LEVELS)}

#: Index permutation that swaps the nuclear labels m_I = -1 <-> +1
#: (indices 0<->1 and 3<->4).  The generator commutes with it.
NUCLEAR_MIRROR = (1, 0, 2, 4, 3, 5)

# Below this separation the closed-form denominator (3*k_i - k_s) is
# treated as degenerate and the numeric integrator takes over.
_DEGENERACY_EPS = 1e-6

_SUM_TOL = 1e-9
_NEG_CLAMP = 1e-12


@dataclass(frozen=True)
class RateParams:
    """Optical pumping rates in 1/us.

    Parameters
    ----------
    k_s : float
        Electron repolarization rate (m_s = -1 to 0).  Must be positive.
    k_i : float
        Nuclear hop rate between the m_I levels of the m_s = 0 manifold.
        Must be nonnegative; zero disables nuclear depolarization.

    The defaults correspond to lifetimes 1/k_s = 0.27 us and
    1/k_i = 4.76 us.
    """

    k_s: float = 1.0 / 0.27
    k_i: float = 1.0 / 4.76

    def __post_init__(self) -> None:
        if not (np.isfinite(self.k_s) and np.isfinite(self.k_i)):
            raise ValueError("rates must be finite")
        if self.k_s <= 0:
            raise ValueError(f"k_s must be positive, got {self.k_s}")
        if self.k_i < 0:
            raise ValueError(f"k_i must be nonnegative, got {self.k_i}")

    @property
    def degenerate(self) -> bool:
        """True when |3*k_i - k_s| is too small for the closed form."""
        return abs(3.0 * self.k_i - self.k_s) < _DEGENERACY_EPS


def validate_population(p) -> np.ndarray:
    """Check and return a population vector as a float array of length 6.

    Entries must lie in [0, 1] and sum to 1, both within 1e-9.
    """
    arr = np.asarray(p, dtype=float)
    if arr.shape != (6,):
        raise ValueError(f"population vector must have 6 entries, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("population vector must be finite")
    if np.any(arr < -_SUM_TOL) or np.any(arr > 1.0 + _SUM_TOL):
        raise ValueError(f"population entries must lie in [0, 1]: {arr}")
    total = float(arr.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise ValueError(f"population vector must sum to 1, got {total!r}")
    return arr


def _clamp_dust(p: np.ndarray) -> np.ndarray:
    """Zero out tiny negative float dust; larger negatives are a bug."""
    low = p.min()
    if low < -_NEG_CLAMP:
        raise ValueError(f"propagation produced a negative population {low!r}")
    return np.where(p < 0.0, 0.0, p)


def rate_matrix(rates: RateParams = RateParams()) -> np.ndarray:
    """Generator matrix M of the rate equation dP/dt = M P.

    Column j holds the flows out of state j; entry (i, j) is the flow
    into state i from state j.  Blocks: the m_s=0 manifold mixes its
    nuclear levels at k_i, each m_s=-1 level feeds its m_I partner in
    m_s=0 at k_s, and nothing flows into m_s=-1.

    Returns
    -------
    numpy.ndarray, shape (6, 6)
        All column sums are exactly zero.
    """
    ks, ki = rates.k_s, rates.k_i
    hop = ki * (np.ones((3, 3)) - 3.0 * np.eye(3))
    m = np.zeros((6, 6))
    m[:3, :3] = hop
    m[:3, 3:] = ks * np.eye(3)
    m[3:, 3:] = -ks * np.eye(3)
    return m


def propagator(t: float, rates: RateParams = RateParams()) -> np.ndarray:
    """Propagator exp(M t) of the rate equation.

    Built from the known eigenstructure of M (eigenvalues 0, -3*k_i twice
    and -k_s three times).  Near the degeneracy 3*k_i = k_s the closed
    form loses its denominator, so the matrix is assembled column by
    column with the fixed-step integrator instead; both paths agree to
    better than 1e-8 at the boundary.

    Parameters
    ----------
    t : float
        Duration in us, t >= 0.
    rates : RateParams
        Pumping rates.

    Returns
    -------
    numpy.ndarray, shape (6, 6)
        Columns are probability vectors (sum to 1).
    """
    if t < 0:
        raise ValueError(f"duration must be nonnegative, got {t}")
    if rates.degenerate:
        cols = [propagate_numeric(col, t, rates) for col in np.eye(6)]
        return np.column_stack(cols)
    ks, ki = rates.k_s, rates.k_i
    e3 = np.exp(-3.0 * ki * t)
    es = np.exp(-ks * t)
    third = np.full((3, 3), 1.0 / 3.0)
    eye3 = np.eye(3)
    # Mixing ratio of the decaying m_s=-1 feed between the uniform mode
    # and the traceless nuclear modes.
    phi = ks * (es - e3) / (3.0 * ki - ks)
    u = np.zeros((6, 6))
    u[:3, :3] = third + e3 * (eye3 - third)
    u[:3, 3:] = (1.0 - es) * third + phi * (eye3 - third)
    u[3:, 3:] = es * eye3
    return u


def propagate(p, t: float, rates: RateParams = RateParams()) -> np.ndarray:
    """Evolve a population vector for time t under laser illumination.

    Equivalent to propagator(t, rates) @ p with simplex cleanup: float
    dust in [-1e-12, 0) is clamped to zero.
    """
    vec = validate_population(p)
    out = propagator(t, rates) @ vec
    return _clamp_dust(out)


def propagate_numeric(p, t: float, rates: RateParams = RateParams(),
                      step: float = 1e-3) -> np.ndarray:
    """Classic fixed-step 4th-order Runge-Kutta integration of dP/dt = M P.

    Serves as the independent cross-check of the closed-form propagator
    and as its fallback in the degenerate regime.  The interval is split
    into ceil(t/step) uniform steps.

    Parameters
    ----------
    p : array_like
        Valid population vector.
    t : float
        Duration in us, t >= 0.
    rates : RateParams
        Pumping rates.
    step : float
        Maximum step size in us; must satisfy 0 < step <= 1e-2.
    """
    if not 0.0 < step <= 1e-2:
        raise ValueError(f"step must be in (0, 1e-2] us, got {step}")
    if t < 0:
        raise ValueError(f"duration must be nonnegative, got {t}")
    vec = validate_population(p)
    if t == 0.0:
        return vec.copy()
    m = rate_matrix(rates)
    n = int(np.ceil(t / step))
    h = t / n
    y = vec.copy()
    for _ in range(n):
        k1 = m @ y
        k2 = m @ (y + 0.5 * h * k1)
        k3 = m @ (y + 0.5 * h * k2)
        k4 = m @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return _clamp_dust(y)


def steady_state(rates: RateParams = RateParams()) -> np.ndarray:
    """Unique stationary distribution (1/3, 1/3, 1/3, 0, 0, 0).

    Requires k_i > 0; without nuclear hopping the kernel of M is
    degenerate and no single steady state exists.
    """
    if rates.k_i == 0:
        raise ValueError("steady state is not unique when k_i = 0")
    return np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]) / 3.0


def _exp_pair(t: float, rates: RateParams) -> tuple[float, float, float]:
    if rates.degenerate:
        raise ValueError(
            "reference solution is singular at 3*k_i = k_s; "
            "use propagate instead")
    es = np.exp(-rates.k_s * t)
    e3 = np.exp(-3.0 * rates.k_i * t)
    return es, e3, 3.0 * rates.k_i - rates.k_s


def seg1_reference_solution(t: float, rates: RateParams = RateParams()) -> np.ndarray:
    """Transcribed closed-form solution for the seg1 laser dynamics.

    Kept verbatim as a historical cross-check, including its known
    transcription defect: components 1 and 2 come out exchanged relative
    to the stated initial condition (0,1,1,0,0,1)/3, so the vector at
    t=0 reads (1/3, 0, 1/3, 0, 0, 1/3).  After exchanging those two
    components it matches propagate() from (0,1,1,0,0,1)/3 exactly.
    Never used as the production path.
    """
    if t < 0:
        raise ValueError(f"duration must be nonnegative, got {t}")
    es, e3, den = _exp_pair(t, rates)
    ks, ki = rates.k_s, rates.k_i
    c1 = 1.0 - ki * (es - e3) / den
    c2 = 1.0 - ((2.0 * ki - ks) * e3 + ki * es) / den
    c3 = 1.0 - ((ki - ks) * es + (ks - ki) * e3) / den
    return np.array([c1, c2, c3, 0.0, 0.0, es]) / 3.0


def seg2_reference_solution(t: float, rates: RateParams = RateParams()) -> np.ndarray:
    """Transcribed closed-form solution for the seg2 laser dynamics.

    Evaluates the tabulated expressions for the initial condition
    (0.07, 0, 0.55, 0, 0.05, 0.33) verbatim, typos included: the
    asymptote constant is 0.34 per level (the exact value is 1/3), the
    rate coefficients carry only two decimals, and component 2 fails its
    own initial condition (it evaluates to about 0.61 at t=0 instead
    of 0).  Components 1, 3, 4, 5, 6 track propagate() within 0.015;
    component 2 is good for nothing beyond documenting the defect.
    Never used as the production path.
    """
    if t < 0:
        raise ValueError(f"duration must be nonnegative, got {t}")
    es, e3, den = _exp_pair(t, rates)
    ks, ki = rates.k_s, rates.k_i
    c1 = 0.34 + (e3 * (0.26 * ks - 0.4 * ki) - 0.38 * ki * es) / den
    c2 = 0.34 - (es * (0.38 * ki - 0.05 * ks) - e3 * (0.63 * ki - 0.29 * ks)) / den
    c3 = 0.34 + (e3 * (1.03 * ki - 0.55 * ks) - es * (0.38 * ki - 0.33 * ks)) / den
    return np.array([c1, c2, c3, 0.0, 0.05 * es, 0.33 * es])
