"""State-vector simulation: gates, erasures, recovery circuits, TEC and the atom-mediated CZ."""

from .recovery import (
    encode_four_qubit,
    encode_qpyc,
    logical_measurement_under_erasure,
    recover_four_qubit,
    recover_three_qutrit,
)
from .state import (
    ErasedTargetError,
    GateOp,
    MeasurementRecord,
    QuditState,
    SimulationError,
    Trajectory,
    UncorrectableError,
    apply_circuit,
    apply_gate,
    erase,
    fidelity,
    measure,
)
from .tec import TecNoise, TecResult, tec_cycle
