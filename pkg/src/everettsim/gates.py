"""Constructors for every unitary the two protocols use.

The single-qubit encoding family ``sigma(p, q)`` is defined by its action on
basis kets rather than by fixed matrices:

    sigma(p,q)|0> = (-1)^p |p+q>        sigma(p,q)|1> = |p+q+1>

with addition mod 2. These rules are convention independent; the matrices
below use the package convention (basis index 0 is |0>). Writings that order
the one-qubit basis the other way around, |0> = (0,1)^T and |1> = (1,0)^T,
see the same gates with both matrix axes reversed; ``reversed_convention_matrix``
performs that translation. As a matrix in this package's convention,
sigma(1,0) happens to equal iY; only the action rules matter to the protocols.

Also here: the Bell-pair builder, generic basis-controlled unitaries, the
two-qubit encoder controlled by two knowledge wires (``cu_sigma``), the
Bell-basis measurement unitary that shifts a two-wire pointer by the outcome
label (``cu_meas``), and the receiver's correction unitary (``u_b_decoder``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .state import PureState

UNITARY_TOL = 1e-12

_BITS = (0, 1)


class GateError(ValueError):
    """Invalid gate construction."""


@dataclass(frozen=True, eq=False)
class UnitaryGate:
    """Dense unitary on ``arity`` qubit wires (matrix dimension 2^arity).

    Unitarity is checked at construction; a failing matrix raises GateError.
    Row/column index bits follow the package basis convention, first wire
    most significant.
    """

    arity: int
    matrix: np.ndarray
    name: str = ""

    def __post_init__(self) -> None:
        dim = 1 << self.arity
        mat = np.array(self.matrix, dtype=complex)
        if mat.shape != (dim, dim):
            raise GateError(f"arity {self.arity} needs a {dim}x{dim} matrix, got {mat.shape}")
        if not np.isfinite(mat).all():
            raise GateError("non-finite matrix entry")
        defect = np.abs(mat.conj().T @ mat - np.eye(dim)).max()
        if defect > UNITARY_TOL:
            raise GateError(f"matrix is not unitary (defect {defect:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def __repr__(self) -> str:
        return f"UnitaryGate(name={self.name!r}, arity={self.arity})"


def reversed_convention_matrix(gate: UnitaryGate) -> np.ndarray:
    """The gate's matrix re-expressed with every wire's basis order flipped.

    Flipping |0> and |1> on each wire complements the basis index, which for
    a full register is a reversal of both matrix axes.
    """
    return gate.matrix[::-1, ::-1].copy()


@dataclass(frozen=True, eq=False)
class ControlSpec:
    """A total mapping from control bit strings to equal-arity branch gates."""

    control_arity: int
    branch_gates: Mapping[tuple[int, ...], UnitaryGate] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.control_arity < 1:
            raise GateError("need at least one control wire")
        gates = dict(self.branch_gates)
        expected = 1 << self.control_arity
        if len(gates) != expected:
            raise GateError(f"expected {expected} branch gates, got {len(gates)}")
        arities = set()
        for key, gate in gates.items():
            if len(key) != self.control_arity or any(b not in _BITS for b in key):
                raise GateError(f"bad control bit string {key!r}")
            arities.add(gate.arity)
        if len(arities) != 1:
            raise GateError(f"branch gates must share one target arity, got {sorted(arities)}")
        object.__setattr__(self, "branch_gates", gates)

    @property
    def target_arity(self) -> int:
        return next(iter(self.branch_gates.values())).arity


def control_unitary(spec: ControlSpec, name: str = "") -> UnitaryGate:
    """Block-diagonal gate |c>|t> -> |c> (branch_gates[c] |t>).

    Control wires come first (most significant), targets last.
    """
    k, t = spec.control_arity, spec.target_arity
    dt = 1 << t
    full = np.zeros(((1 << k) * dt, (1 << k) * dt), dtype=complex)
    for value in range(1 << k):
        bits = tuple((value >> (k - 1 - i)) & 1 for i in range(k))
        block = spec.branch_gates[bits].matrix
        full[value * dt : (value + 1) * dt, value * dt : (value + 1) * dt] = block
    return UnitaryGate(k + t, full, name=name)


@lru_cache(maxsize=None)
def sigma(p: int, q: int) -> UnitaryGate:
    """The (p, q) single-qubit encoder, built from its basis action rules."""
    if p not in _BITS or q not in _BITS:
        raise GateError(f"bits required, got p={p!r} q={q!r}")
    mat = np.zeros((2, 2), dtype=complex)
    mat[(p + q) % 2, 0] = (-1.0) ** p
    mat[(p + q + 1) % 2, 1] = 1.0
    return UnitaryGate(1, mat, name=f"sigma{p}{q}")


def bell(x: int, y: int, wires: Sequence[str]) -> PureState:
    """Unnormalized Bell state |x>|y> + (-1)^y |x+1>|y+1> on two wires."""
    if x not in _BITS or y not in _BITS:
        raise GateError(f"bits required, got x={x!r} y={y!r}")
    wires = tuple(wires)
    if len(wires) != 2:
        raise GateError("a Bell state needs exactly two wire labels")
    amps = np.zeros(4, dtype=complex)
    amps[(x << 1) | y] = 1.0
    amps[((1 - x) << 1) | (1 - y)] = (-1.0) ** y
    return PureState(wires, amps)


@lru_cache(maxsize=1)
def cu_sigma() -> UnitaryGate:
    """Two knowledge wires controlling the encoder family on one target.

    |p>|q>|x> -> |p>|q> sigma(p,q)|x>; arity 3, controls first.
    """
    branches = {(p, q): sigma(p, q) for p in _BITS for q in _BITS}
    return control_unitary(ControlSpec(2, branches), name="cu_sigma")


@lru_cache(maxsize=1)
def cu_meas() -> UnitaryGate:
    """Bell-basis measurement as a pointer-shift unitary, arity 4.

    Wire order (pointer1, pointer2, measured1, measured2). For every pointer
    value |mn> and Bell state b(x,y) of the measured pair:

        |mn> (x) b(x,y)  ->  |m+x, n+y> (x) b(x,y)     (mod 2)

    The defining requirement only pins the pointer-at-|00> slice; extending
    it to a pointer translation makes the whole map unitary.
    """
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    eye = np.eye(2)
    full = np.zeros((16, 16), dtype=complex)
    for x in _BITS:
        for y in _BITS:
            vec = bell(x, y, ("m1", "m2")).amps
            projector = np.outer(vec, vec.conj()) / 2.0
            shift = np.kron(flip if x else eye, flip if y else eye)
            full += np.kron(shift, projector)
    return UnitaryGate(4, full, name="cu_meas")


@lru_cache(maxsize=1)
def u_b_decoder() -> UnitaryGate:
    """The receiver's correction, arity 3 (two pointer controls, one target).

    |xy>|z> -> (-1)^(y(z+1)) |xy>|z+x+y>  with addition mod 2.
    """
    branches = {}
    for x in _BITS:
        for y in _BITS:
            mat = np.zeros((2, 2), dtype=complex)
            for z in _BITS:
                mat[(z + x + y) % 2, z] = (-1.0) ** (y * (z + 1))
            branches[(x, y)] = UnitaryGate(1, mat)
    return control_unitary(ControlSpec(2, branches), name="u_b")
