"""Weak-value simulator for the quantum Cheshire Cat in a Mach-Zehnder interferometer.

Weak values of arm-resolved polarization observables are computed three
ways: the analytic quotient ``<f|A|i>/<f|i>``, an exact meter-qubit
protocol, and Monte Carlo shot sampling of that protocol.
"""

from .errors import (
    CheshireError,
    CircuitError,
    CircuitSyntaxError,
    DuplicateLabel,
    LabelMismatch,
    LabelNotInState,
    LabelNotInTarget,
    NoPostselectedEvents,
    NonHermitianObservable,
    UnknownObservable,
    VanishingOverlap,
    ZeroProbability,
)
from .state import (
    PATH,
    POLARIZATION,
    Operator,
    StateVector,
    SubsystemLabel,
    apply,
    basis_state,
    embed,
    identity,
    inner,
    meter,
    partial_inner,
    tensor,
    tensor_ops,
)
from .operators import observable
from .optics import (
    beam_splitter,
    path_phase,
    polarization_tuner,
    postselector,
    prepare_delayed,
    prepare_original,
)
from .weak import (
    CouplingSpec,
    Flavor,
    Method,
    WeakValue,
    closed_form_delayed,
    coupling_unitary,
    estimate_weak_value_meter,
    reflection_coupling_target,
    postselect,
    sample_weak_value,
    weak_value,
    weak_value_analytic,
)
from .scenarios import (
    ExperimentConfig,
    SweepRow,
    SweepTable,
    flip_check,
    run_delayed_choice,
    run_grin_snarl,
    run_original_cheshire,
    sweep,
)
from .dsl import compile_and_run, parse, pretty_print

__version__ = "0.1.0"
