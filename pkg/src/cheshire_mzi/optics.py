"""Optical elements of the interferometer as unitaries on path or polarization.

The first beam splitter uses ``(1/sqrt2) [[i, 1], [1, i]]``: light entering
port 0 is reflected into the left arm (picking up a factor ``i``) and
transmitted into the right arm.

The path phase ``phi`` is always the *net* phase of ``|R>`` relative to
``|L>`` after preparation.  :func:`prepare_delayed` removes the reflection
phase with :func:`reflection_compensation`, so its output equals
``(|L> + e^{i phi}|R>)(cos(theta/2)|H> + sin(theta/2)|V>)/sqrt2`` exactly.
"""

from __future__ import annotations

import numpy as np

from .state import PATH, POLARIZATION, Operator, StateVector, apply, tensor
from .operators import H

INPUT_PORT = 0

_SQRT_HALF = 1 / np.sqrt(2)


def beam_splitter() -> Operator:
    return Operator([PATH], _SQRT_HALF * np.array([[1j, 1], [1, 1j]]))


def polarization_tuner(theta: float) -> Operator:
    """Rotate polarization by ``theta/2``: |H> -> cos(theta/2)|H> + sin(theta/2)|V>."""
    if not np.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return Operator([POLARIZATION], [[c, -s], [s, c]])


def path_phase(phi: float) -> Operator:
    """``diag(1, e^{i phi})`` on (L, R)."""
    if not np.isfinite(phi):
        raise ValueError(f"phi must be finite, got {phi!r}")
    return Operator([PATH], np.diag([1, np.exp(1j * phi)]))


def reflection_compensation() -> Operator:
    """Undo the ``i`` picked up by the left arm on reflection at the beam splitter."""
    return Operator([PATH], np.diag([-1j, 1]))


def input_port_state() -> StateVector:
    amps = np.zeros(2)
    amps[INPUT_PORT] = 1
    return StateVector([PATH], amps, normalized=True)


def prepare_original() -> StateVector:
    """Horizontally polarized photon after the first beam splitter: (i|L> + |R>)|H>/sqrt2."""
    return apply(beam_splitter(), tensor(input_port_state(), H))


def prepare_delayed(theta: float, phi: float) -> StateVector:
    """Run the photon through beam splitter, tuners and path phase."""
    psi = prepare_original()
    for element in (polarization_tuner(theta), path_phase(phi), reflection_compensation()):
        psi = apply(element, psi)
    return StateVector(psi.labels, psi.amplitudes, normalized=True)


def postselector(variant: str = "delayed") -> StateVector:
    """Target state of the detector-D1 click.

    ``"delayed"`` gives (|L>|H> + |R>|V>)/sqrt2; ``"original"`` gives
    (|L>|H> - i|R>|V>)/sqrt2.  The waveplate/beam-splitter train that
    realizes the click is modelled as an exact projection onto this state.
    """
    if variant == "delayed":
        amps = [_SQRT_HALF, 0, 0, _SQRT_HALF]
    elif variant == "original":
        amps = [_SQRT_HALF, 0, 0, -1j * _SQRT_HALF]
    else:
        raise ValueError(f"unknown postselection variant {variant!r}")
    return StateVector([PATH, POLARIZATION], amps, normalized=True)


def preselector(variant: str = "delayed", theta: float = 0.0, phi: float = 0.0) -> StateVector:
    if variant == "delayed":
        return prepare_delayed(theta, phi)
    if variant == "original":
        return prepare_original()
    raise ValueError(f"unknown preselection variant {variant!r}")


ELEMENTS = {
    "bs1": beam_splitter,
    "tuner": polarization_tuner,
    "phase": path_phase,
}
