"""Unitary-only simulation of superdense coding and teleportation.

State preparation, measurement, and classical signaling are all modeled as
unitary evolution of one global pure state: knowledge is a basis-state
register, measuring is a pointer-shifting controlled unitary, and sending a
message is physically handing a wire to the other agent.
"""

from .state import (
    Bipartition,
    Branch,
    BranchDecomposition,
    PureState,
    StateError,
    WireError,
    ZeroStateError,
    apply,
    basis_state,
    branch_decompose,
    dump_state,
    equal_up_to_phase,
    fidelity,
    inner_product,
    permute_wires,
    qubit,
    schmidt_factor,
    tensor,
)
from .gates import (
    ControlSpec,
    GateError,
    UnitaryGate,
    bell,
    control_unitary,
    cu_meas,
    cu_sigma,
    reversed_convention_matrix,
    sigma,
    u_b_decoder,
)
from .protocols import (
    Agent,
    DecodeTable,
    LocalityError,
    ProtocolError,
    ProtocolWorld,
    SuperdenseResult,
    TeleportResult,
    apply_local,
    audit_locality,
    derive_decode_table,
    run_superdense,
    run_teleport,
    transfer,
)
from .circuit import (
    AssertionOutcome,
    CircuitError,
    CircuitParseError,
    CircuitProgram,
    exec_circuit,
    parse_circuit,
    superdense_source,
    teleport_source,
)
from .render import render_ascii

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "AssertionOutcome",
    "Bipartition",
    "Branch",
    "BranchDecomposition",
    "CircuitError",
    "CircuitParseError",
    "CircuitProgram",
    "ControlSpec",
    "DecodeTable",
    "GateError",
    "LocalityError",
    "ProtocolError",
    "ProtocolWorld",
    "PureState",
    "StateError",
    "SuperdenseResult",
    "TeleportResult",
    "UnitaryGate",
    "WireError",
    "ZeroStateError",
    "apply",
    "apply_local",
    "audit_locality",
    "basis_state",
    "bell",
    "branch_decompose",
    "control_unitary",
    "cu_meas",
    "cu_sigma",
    "derive_decode_table",
    "dump_state",
    "equal_up_to_phase",
    "exec_circuit",
    "fidelity",
    "inner_product",
    "parse_circuit",
    "permute_wires",
    "qubit",
    "render_ascii",
    "reversed_convention_matrix",
    "run_superdense",
    "run_teleport",
    "schmidt_factor",
    "sigma",
    "superdense_source",
    "teleport_source",
    "tensor",
    "transfer",
    "u_b_decoder",
]
