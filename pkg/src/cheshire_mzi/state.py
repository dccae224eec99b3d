"""Dense states and operators on small tensor products of qubit-like subsystems.

Every subsystem is two-dimensional and carries a label (the photon path, its
polarization, or a numbered meter qubit).  States and operators remember the
order of their factors, and the kernel functions below permute factors as
needed, so ``|L>|H>`` and ``|H>|L>`` are the same physical state.

Basis encoding: path ``|L> -> 0, |R> -> 1``; polarization ``|H> -> 0,
|V> -> 1``; meter ``|0>_m -> 0, |1>_m -> 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateLabel,
    LabelError,
    LabelMismatch,
    LabelNotInState,
    LabelNotInTarget,
)

NORM_TOL = 1e-12


class Kind(enum.IntEnum):
    PATH = 0
    POLARIZATION = 1
    METER = 2


@dataclass(frozen=True, order=True)
class SubsystemLabel:
    """Name of one two-level factor.  Sorting gives the canonical order
    Path < Polarization < Meter(0) < Meter(1) < ..."""

    kind: Kind
    index: int = 0

    def __post_init__(self):
        if self.index < 0:
            raise LabelError(f"negative subsystem index {self.index}")
        if self.kind != Kind.METER and self.index != 0:
            raise LabelError(f"{self.kind.name} does not take an index")

    def __str__(self):
        if self.kind == Kind.METER:
            return f"Meter({self.index})"
        return self.kind.name.capitalize()


PATH = SubsystemLabel(Kind.PATH)
POLARIZATION = SubsystemLabel(Kind.POLARIZATION)


def meter(index: int = 0) -> SubsystemLabel:
    return SubsystemLabel(Kind.METER, index)


def _as_labels(labels: Iterable[SubsystemLabel]) -> tuple[SubsystemLabel, ...]:
    labels = tuple(labels)
    for lab in labels:
        if not isinstance(lab, SubsystemLabel):
            raise TypeError(f"expected SubsystemLabel, got {type(lab).__name__}")
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"repeated subsystem in {[str(l) for l in labels]}")
    return labels


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


def _axis_order(src: Sequence[SubsystemLabel], dst: Sequence[SubsystemLabel]) -> list[int]:
    if set(src) != set(dst) or len(src) != len(dst):
        raise LabelMismatch(
            f"cannot reorder {[str(l) for l in src]} into {[str(l) for l in dst]}"
        )
    return [src.index(lab) for lab in dst]


class StateVector:
    """Pure state over labelled two-level subsystems.

    Parameters
    ----------
    labels : sequence of SubsystemLabel
        Factor order of ``amplitudes`` (first label is the most significant bit).
    amplitudes : array_like
        Complex vector of length ``2**len(labels)``.
    normalized : bool
        If true, the squared norm is checked against 1 to within 1e-12.
    """

    __slots__ = ("labels", "amplitudes", "normalized")

    def __init__(self, labels, amplitudes, normalized: bool = False):
        labels = _as_labels(labels)
        amps = _frozen(np.ravel(amplitudes))
        if amps.shape != (2 ** len(labels),):
            raise ValueError(
                f"{len(labels)} subsystems need {2 ** len(labels)} amplitudes, got {amps.size}"
            )
        if normalized and abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {np.vdot(amps, amps).real!r})")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "normalized", bool(normalized))

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    def __repr__(self):
        labs = ", ".join(map(str, self.labels))
        return f"StateVector([{labs}], {np.array2string(self.amplitudes, precision=6)})"

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> StateVector:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return StateVector(self.labels, self.amplitudes / n, normalized=True)

    def permute(self, labels: Sequence[SubsystemLabel]) -> StateVector:
        """Same state with its factors listed in ``labels`` order."""
        labels = _as_labels(labels)
        order = _axis_order(self.labels, labels)
        n = len(labels)
        amps = self.amplitudes.reshape((2,) * n).transpose(order).reshape(-1) if n else self.amplitudes
        return StateVector(labels, amps, self.normalized)

    def canonical(self) -> StateVector:
        return self.permute(sorted(self.labels))

    def allclose(self, other: StateVector, atol: float = 1e-12) -> bool:
        if set(self.labels) != set(other.labels):
            return False
        return np.allclose(self.amplitudes, other.permute(self.labels).amplitudes, atol=atol, rtol=0)

    def __mul__(self, c) -> StateVector:
        return StateVector(self.labels, self.amplitudes * c)

    __rmul__ = __mul__

    def __add__(self, other: StateVector) -> StateVector:
        return StateVector(self.labels, self.amplitudes + other.permute(self.labels).amplitudes)

    def __sub__(self, other: StateVector) -> StateVector:
        return StateVector(self.labels, self.amplitudes - other.permute(self.labels).amplitudes)


class Operator:
    """Square complex matrix acting on the listed subsystems."""

    __slots__ = ("labels", "matrix")

    def __init__(self, labels, matrix):
        labels = _as_labels(labels)
        mat = _frozen(matrix)
        d = 2 ** len(labels)
        if mat.shape != (d, d):
            raise ValueError(f"{len(labels)} subsystems need a {d}x{d} matrix, got {mat.shape}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "matrix", mat)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    def __repr__(self):
        labs = ", ".join(map(str, self.labels))
        return f"Operator([{labs}],\n{np.array2string(self.matrix, precision=6)})"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> Operator:
        return Operator(self.labels, self.matrix.conj().T)

    def is_unitary(self, atol: float = NORM_TOL) -> bool:
        prod = self.matrix @ self.matrix.conj().T
        return bool(np.max(np.abs(prod - np.eye(self.dim))) <= atol)

    def is_hermitian(self, atol: float = NORM_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T)) <= atol)

    def permute(self, labels: Sequence[SubsystemLabel]) -> Operator:
        labels = _as_labels(labels)
        order = _axis_order(self.labels, labels)
        n = len(labels)
        if n == 0:
            return Operator(labels, self.matrix)
        t = self.matrix.reshape((2,) * (2 * n)).transpose(order + [n + i for i in order])
        return Operator(labels, t.reshape(self.dim, self.dim))

    def allclose(self, other: Operator, atol: float = 1e-12) -> bool:
        labels = self.labels + tuple(l for l in other.labels if l not in self.labels)
        a, b = embed(self, labels), embed(other, labels)
        return np.allclose(a.matrix, b.matrix, atol=atol, rtol=0)

    def _union(self, other: Operator) -> tuple[Operator, Operator]:
        labels = self.labels + tuple(l for l in other.labels if l not in self.labels)
        return embed(self, labels), embed(other, labels)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return apply(self, other)
        a, b = self._union(other)
        return Operator(a.labels, a.matrix @ b.matrix)

    def __add__(self, other: Operator) -> Operator:
        a, b = self._union(other)
        return Operator(a.labels, a.matrix + b.matrix)

    def __sub__(self, other: Operator) -> Operator:
        a, b = self._union(other)
        return Operator(a.labels, a.matrix - b.matrix)

    def __mul__(self, c) -> Operator:
        return Operator(self.labels, self.matrix * c)

    __rmul__ = __mul__

    def __neg__(self) -> Operator:
        return Operator(self.labels, -self.matrix)


def identity(labels: Sequence[SubsystemLabel]) -> Operator:
    labels = _as_labels(labels)
    return Operator(labels, np.eye(2 ** len(labels)))


def basis_state(labels: Sequence[SubsystemLabel], bits: Sequence[int]) -> StateVector:
    """Computational basis state, e.g. ``basis_state([PATH, POLARIZATION], [0, 1])`` is |L>|V>."""
    labels = _as_labels(labels)
    if len(bits) != len(labels) or any(b not in (0, 1) for b in bits):
        raise ValueError(f"need one bit per subsystem, got {bits!r}")
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[int("".join(map(str, bits)) or "0", 2)] = 1.0
    return StateVector(labels, amps, normalized=True)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Product state ``a ⊗ b`` with labels of ``a`` first."""
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise DuplicateLabel(f"subsystems {sorted(map(str, overlap))} appear in both factors")
    return StateVector(
        a.labels + b.labels,
        np.kron(a.amplitudes, b.amplitudes),
        normalized=a.normalized and b.normalized,
    )


def tensor_ops(a: Operator, b: Operator) -> Operator:
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise DuplicateLabel(f"subsystems {sorted(map(str, overlap))} appear in both factors")
    return Operator(a.labels + b.labels, np.kron(a.matrix, b.matrix))


def embed(op: Operator, target: Sequence[SubsystemLabel]) -> Operator:
    """Lift ``op`` to the composite space ``target``, acting as identity on
    the extra factors."""
    target = _as_labels(target)
    missing = [l for l in op.labels if l not in target]
    if missing:
        raise LabelNotInTarget(f"{[str(l) for l in missing]} not in target {[str(l) for l in target]}")
    rest = [l for l in target if l not in op.labels]
    full = Operator(op.labels + tuple(rest), np.kron(op.matrix, np.eye(2 ** len(rest))))
    return full.permute(target)


def apply(op: Operator, state: StateVector) -> StateVector:
    missing = [l for l in op.labels if l not in state.labels]
    if missing:
        raise LabelNotInState(f"operator acts on {[str(l) for l in missing]}, absent from state")
    m = embed(op, state.labels).matrix
    return StateVector(state.labels, m @ state.amplitudes)


def inner(bra: StateVector, ket: StateVector) -> complex:
    """``<bra|ket>``, conjugate-linear in ``bra``."""
    if set(bra.labels) != set(ket.labels):
        raise LabelMismatch(
            f"bra on {[str(l) for l in bra.labels]} vs ket on {[str(l) for l in ket.labels]}"
        )
    return complex(np.vdot(bra.amplitudes, ket.permute(bra.labels).amplitudes))


def partial_inner(bra: StateVector, ket: StateVector) -> StateVector:
    """Contract ``bra`` against the matching factors of ``ket``.

    Returns the unnormalized state on the remaining subsystems of ``ket``
    (listed in ``ket`` order).
    """
    missing = [l for l in bra.labels if l not in ket.labels]
    if missing:
        raise LabelNotInState(f"{[str(l) for l in missing]} absent from state")
    rest = tuple(l for l in ket.labels if l not in bra.labels)
    m = ket.permute(bra.labels + rest).amplitudes.reshape(bra.dim, 2 ** len(rest))
    return StateVector(rest, bra.amplitudes.conj() @ m)


def expectation(op: Operator, state: StateVector) -> complex:
    return inner(state, apply(op, state))
