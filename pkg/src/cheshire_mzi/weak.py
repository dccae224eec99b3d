"""Weak values: analytic quotient, exact meter protocol and shot sampling.

A weak value of ``A`` between preselection ``|i>`` and postselection ``|f>``
is ``<f|A|i> / <f|i>``.  Operationally it is read off a meter qubit that was
weakly coupled to ``A`` before the postselecting measurement: conditioned on
success the meter is ``∝ |0> + g A_w |1>`` and

    A_w ≈ (<X_m> + i <Y_m>) / (2 g).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoPostselectedEvents, NonHermitianObservable, VanishingOverlap, ZeroProbability
from .operators import (
    OBSERVABLES,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PROJ_L,
    PROJ_R,
    SIGMA_X,
    SIGMA_Z,
    meter_reflection,
    meter_zero,
)
from .state import (
    PATH,
    POLARIZATION,
    Operator,
    StateVector,
    apply,
    embed,
    identity,
    inner,
    meter,
    partial_inner,
    tensor,
)

EPS_OVERLAP = 1e-10
DEFAULT_G = 1e-3
MAX_G = 0.1

SYSTEM = (PATH, POLARIZATION)
METER = meter(0)


class Method(str, enum.Enum):
    ANALYTIC = "analytic"
    METER_EXACT = "meter"
    METER_SAMPLED = "sample"


class Flavor(str, enum.Enum):
    CANONICAL = "canonical"
    REFLECTION = "reflection"


@dataclass(frozen=True)
class WeakValue:
    value: complex
    method: Method
    pre: StateVector = field(repr=False)
    post: StateVector = field(repr=False)
    observable: Operator = field(repr=False)
    g: float | None = None
    shots: int | None = None
    stderr: float | None = None
    probability: float | None = None

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True)
class CouplingSpec:
    """Meter coupling of strength ``g`` to a Hermitian system observable.

    ``theta_g`` is the meter rotation angle of the reflection-based
    construction; ``g == 4 * theta_g`` always.
    """

    observable: Operator
    g: float
    flavor: Flavor = Flavor.CANONICAL

    def __post_init__(self):
        if not self.observable.is_hermitian():
            raise NonHermitianObservable("coupled observable must be Hermitian")
        if not np.isfinite(self.g):
            raise ValueError(f"coupling strength must be finite, got {self.g!r}")
        object.__setattr__(self, "flavor", Flavor(self.flavor))

    @property
    def theta_g(self) -> float:
        return self.g / 4

    @classmethod
    def from_theta_g(cls, observable: Operator, theta_g: float, flavor=Flavor.CANONICAL):
        return cls(observable, 4 * theta_g, flavor)


def _check_pair(pre: StateVector, post: StateVector, eps: float) -> complex:
    for name, s in (("pre", pre), ("post", post)):
        if abs(s.norm() - 1) > 1e-12:
            raise ValueError(f"{name}selected state is not normalized")
    overlap = inner(post, pre)
    if abs(overlap) < eps:
        raise VanishingOverlap(f"|<post|pre>| = {abs(overlap):.3e} < {eps:g}")
    return overlap


def weak_value_analytic(
    A: Operator, pre: StateVector, post: StateVector, eps: float = EPS_OVERLAP
) -> WeakValue:
    overlap = _check_pair(pre, post, eps)
    value = inner(post, apply(A, pre)) / overlap
    return WeakValue(value, Method.ANALYTIC, pre, post, A, probability=abs(overlap) ** 2)


def delayed_overlap(theta: float, phi: float) -> complex:
    """``cos(theta/2) + sin(theta/2) e^{i phi}``: twice the pre/post overlap."""
    return np.cos(theta / 2) + np.sin(theta / 2) * np.exp(1j * phi)


def closed_form_delayed(tag: str, theta: float, phi: float, eps: float = EPS_OVERLAP) -> complex:
    """Weak values of the arm-resolved polarization components for the tuner setup."""
    D = delayed_overlap(theta, phi)
    if abs(D) < eps:
        raise VanishingOverlap(f"tuner setting theta={theta!r}, phi={phi!r} is a pole")
    c, s, e = np.cos(theta / 2), np.sin(theta / 2), np.exp(1j * phi)
    numerators = {"xL": s, "xR": c * e, "zL": c, "zR": -e * s}
    try:
        return complex(numerators[tag] / D)
    except KeyError:
        raise KeyError(f"closed form only for xL, xR, zL, zR; got {tag!r}") from None


def _meter_rotation(angle: float) -> np.ndarray:
    # exp(-i angle Y) = [[cos, -sin], [sin, cos]]
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _canonical_coupling(A: Operator, g: float) -> Operator:
    # exp(-i g A ⊗ Y) block-diagonalized in the eigenbasis of A
    evals, vecs = np.linalg.eigh(A.matrix)
    d = A.dim
    block = np.zeros((2 * d, 2 * d), dtype=complex)
    for k, a in enumerate(evals):
        block[2 * k:2 * k + 2, 2 * k:2 * k + 2] = _meter_rotation(g * a)
    W = np.kron(vecs, np.eye(2))
    return Operator(A.labels + (METER,), W @ block @ W.conj().T)


def _arm_decomposition(A: Operator) -> tuple[Operator, Operator]:
    full = embed(A, SYSTEM)
    for arm in (PROJ_L, PROJ_R):
        for pol in (SIGMA_X, SIGMA_Z):
            if full.allclose(arm @ pol):
                return arm, pol
    raise ValueError("reflection coupling is defined only for arm-resolved sigma_x / sigma_z observables")


def _reflection_coupling(A: Operator, theta_g: float) -> Operator:
    arm, pol = _arm_decomposition(A)
    R = meter_reflection(theta_g)
    block = R.matrix @ PAULI_Z @ R.matrix
    other = identity([PATH]) - arm
    arm_m = embed(arm, SYSTEM).matrix
    other_m = embed(other, SYSTEM).matrix
    pol_m = embed(pol, SYSTEM).matrix
    # the two path branches are orthogonal, so the sum is unitary without a 1/sqrt2
    U = np.kron(other_m @ pol_m, np.eye(2)) + np.kron(arm_m @ pol_m, block)
    return Operator(SYSTEM + (METER,), U)


def coupling_unitary(spec: CouplingSpec) -> Operator:
    """Joint system-meter unitary for ``spec``.

    ``CANONICAL`` is ``exp(-i g A ⊗ Y_m)``, which rotates the meter by ``g a``
    on each eigenspace of ``A``.  ``REFLECTION`` applies the polarization
    Pauli in both arms and the meter block ``R Z R = cos(g) Z + sin(g) X`` in
    the measured arm only.
    """
    if spec.flavor == Flavor.CANONICAL:
        return _canonical_coupling(embed(spec.observable, SYSTEM), spec.g)
    return _reflection_coupling(spec.observable, spec.theta_g)


def postselect(state: StateVector, target: StateVector, eps: float = EPS_OVERLAP) -> tuple[StateVector, float]:
    """Project the ``target`` factors of ``state`` onto ``target``.

    Returns the renormalized conditional state of the remaining factors and
    the success probability.
    """
    if abs(target.norm() - 1) > 1e-12:
        raise ValueError("postselection target is not normalized")
    cond = partial_inner(target, state)
    prob = cond.norm() ** 2 / state.norm() ** 2
    if prob < eps ** 2:
        raise ZeroProbability(f"postselection probability {prob:.3e} is zero")
    return cond.normalize(), min(float(prob), 1.0)


def _check_g(g: float):
    if not 0 < g <= MAX_G:
        raise ValueError(f"coupling strength must lie in (0, {MAX_G}], got {g!r}")


def conditional_meter(
    A: Operator,
    pre: StateVector,
    post: StateVector,
    g: float,
    flavor: Flavor = Flavor.CANONICAL,
    eps: float = EPS_OVERLAP,
) -> tuple[StateVector, float]:
    """Meter state after coupling and a successful postselection, with its probability."""
    U = coupling_unitary(CouplingSpec(A, g, flavor))
    coupled = apply(U, tensor(pre, meter_zero()))
    return postselect(coupled, post, eps)


def _meter_xy(m: StateVector) -> tuple[float, float]:
    a = m.amplitudes
    return float(np.real(a.conj() @ PAULI_X @ a)), float(np.real(a.conj() @ PAULI_Y @ a))


def estimate_weak_value_meter(
    A: Operator,
    pre: StateVector,
    post: StateVector,
    g: float = DEFAULT_G,
    flavor: Flavor = Flavor.CANONICAL,
    eps: float = EPS_OVERLAP,
) -> WeakValue:
    """Weak value from exact meter expectations, ``(<X> + i<Y>) / 2g``."""
    _check_g(g)
    _check_pair(pre, post, eps)
    m, prob = conditional_meter(A, pre, post, g, flavor, eps)
    ex, ey = _meter_xy(m)
    return WeakValue(complex(ex, ey) / (2 * g), Method.METER_EXACT, pre, post, A, g=g, probability=prob)


def reflection_coupling_target(A: Operator, pre: StateVector, post: StateVector) -> complex:
    """First-order meter reading of the reflection coupling.

    Because that coupling applies the Pauli in both arms, the meter shift is
    ``<f|Π⊗σ|i> / <f|I⊗σ|i>`` rather than the weak value of ``Π⊗σ``.
    """
    arm, pol = _arm_decomposition(A)
    denom = inner(post, apply(pol, pre))
    if abs(denom) < EPS_OVERLAP:
        raise VanishingOverlap("reflection coupling reading diverges for this pair")
    return inner(post, apply(arm @ pol, pre)) / denom


def _binomial_stderr(mean: float, n: int) -> float:
    if n == 0:
        return math.inf
    # floor the variance so a run of identical outcomes still reports an uncertainty
    return math.sqrt(max(1 - mean * mean, 1 / n) / n)


def sample_weak_value(
    A: Operator,
    pre: StateVector,
    post: StateVector,
    g: float = DEFAULT_G,
    shots: int = 100_000,
    seed=0,
    flavor: Flavor = Flavor.CANONICAL,
    eps: float = EPS_OVERLAP,
) -> WeakValue:
    """Monte Carlo run of the meter protocol.

    Each trial succeeds in postselection with the exact probability.  Successful
    trials alternate between meter X readout (even success index) and Y
    readout (odd), each drawing a ±1 outcome from Born probabilities.
    ``seed`` may be an int or a ``numpy.random.SeedSequence``.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    _check_g(g)
    rng = np.random.default_rng(seed)
    try:
        m, prob = conditional_meter(A, pre, post, g, flavor, eps)
    except (ZeroProbability, VanishingOverlap):
        m, prob = None, 0.0
    success = rng.random(shots) < prob
    n_ok = int(success.sum())
    if n_ok == 0:
        raise NoPostselectedEvents(f"none of {shots} trials passed postselection (p = {prob:.3e})")
    ex, ey = _meter_xy(m)
    is_x = np.arange(n_ok) % 2 == 0
    p_plus = np.where(is_x, (1 + ex) / 2, (1 + ey) / 2)
    outcomes = np.where(rng.random(n_ok) < p_plus, 1.0, -1.0)
    nx, ny = int(is_x.sum()), int((~is_x).sum())
    mx = float(outcomes[is_x].mean())
    my = float(outcomes[~is_x].mean()) if ny else 0.0
    se = math.hypot(_binomial_stderr(mx, nx), _binomial_stderr(my, ny)) / (2 * g)
    return WeakValue(
        complex(mx, my) / (2 * g),
        Method.METER_SAMPLED,
        pre,
        post,
        A,
        g=g,
        shots=shots,
        stderr=se,
        probability=n_ok / shots,
    )


def weak_value(
    A: Operator,
    pre: StateVector,
    post: StateVector,
    method: Method | str = Method.ANALYTIC,
    g: float = DEFAULT_G,
    shots: int = 0,
    seed=0,
) -> WeakValue:
    """Dispatch to the analytic, exact-meter or sampled route."""
    method = Method(method)
    if method == Method.ANALYTIC:
        return weak_value_analytic(A, pre, post)
    if method == Method.METER_EXACT:
        return estimate_weak_value_meter(A, pre, post, g)
    return sample_weak_value(A, pre, post, g, shots or 100_000, seed)


__all__ = [
    "CouplingSpec",
    "Flavor",
    "Method",
    "OBSERVABLES",
    "WeakValue",
    "closed_form_delayed",
    "conditional_meter",
    "coupling_unitary",
    "delayed_overlap",
    "estimate_weak_value_meter",
    "reflection_coupling_target",
    "postselect",
    "sample_weak_value",
    "weak_value",
    "weak_value_analytic",
]
