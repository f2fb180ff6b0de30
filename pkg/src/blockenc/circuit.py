"""Elementary unitary blocks and their composition over a register layout.

Everything here is dense complex linear algebra: registers are digit
positions of a mixed-radix index (first register is the most significant),
blocks are square matrices on a subset of registers, and `compose` embeds
and multiplies them in circuit time order.  Intended for desk-scale
verification, so total dimensions are capped well below memory limits.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    AllZeroValues,
    DimMismatch,
    NotBijective,
    OutOfUnitRange,
    SupportTooLarge,
)

#: dense simulation refuses layouts above this total dimension
MAX_TOTAL_DIM = 1 << 13


@dataclass(frozen=True)
class Register:
    name: str
    dim: int

    def __post_init__(self):
        if self.dim < 1 or self.dim & (self.dim - 1):
            raise ValueError(f"register {self.name!r} dimension {self.dim} is not a power of two")


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered registers; the first register is the most significant digit."""

    registers: tuple[Register, ...]

    def __post_init__(self):
        names = [r.name for r in self.registers]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")

    @property
    def total_dim(self) -> int:
        return prod(r.dim for r in self.registers)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    def dim_of(self, name: str) -> int:
        return self.registers[self.position(name)].dim

    def position(self, name: str) -> int:
        for k, r in enumerate(self.registers):
            if r.name == name:
                return k
        raise KeyError(f"no register named {name!r}")

    def qubits(self, name: str) -> int:
        return int(self.dim_of(name) - 1).bit_length()


def layout_of(*regs: tuple[str, int]) -> RegisterLayout:
    return RegisterLayout(tuple(Register(n, d) for n, d in regs))


def unitarity_defect(u: np.ndarray) -> float:
    """Max-abs deviation of U†U from the identity."""
    g = u.conj().T @ u
    g[np.diag_indices_from(g)] -= 1.0
    return float(np.abs(g).max())


def complete_columns(fixed: np.ndarray, dim: int, basis_order: Sequence[int] | None = None) -> np.ndarray:
    """Extend orthonormal columns to a full unitary.

    Remaining columns come from Gram-Schmidt over the standard basis scanned
    in ``basis_order`` (natural order by default), which makes the junk
    blocks deterministic.
    """
    fixed = np.atleast_2d(np.asarray(fixed, dtype=np.complex128))
    if fixed.shape[0] != dim:
        raise DimMismatch(f"fixed columns have length {fixed.shape[0]}, expected {dim}")
    k = fixed.shape[1]
    cols = np.zeros((dim, dim), dtype=np.complex128)
    cols[:, :k] = fixed
    filled = k
    order = range(dim) if basis_order is None else basis_order
    for b in order:
        if filled == dim:
            break
        v = np.zeros(dim, dtype=np.complex128)
        v[b] = 1.0
        v -= cols[:, :filled] @ (cols[:, :filled].conj().T @ v)
        nrm = np.linalg.norm(v)
        if nrm > 1e-8:
            # second orthogonalisation pass for numerical safety
            v -= cols[:, :filled] @ (cols[:, :filled].conj().T @ v)
            cols[:, filled] = v / np.linalg.norm(v)
            filled += 1
    if filled != dim:
        raise DimMismatch("could not complete the unitary (fixed columns not orthonormal?)")
    return cols


def diffusion(s_eff: int, support: Iterable[int], register_dim: int) -> np.ndarray:
    """Unitary sending |0> to the uniform superposition over ``support``.

    The remaining columns are a deterministic orthonormal completion; only
    the first column matters for the encodings.
    """
    support = sorted(set(int(s) for s in support))
    if len(support) != s_eff:
        raise ValueError(f"support has {len(support)} states, expected {s_eff}")
    if s_eff < 1 or s_eff > register_dim:
        raise SupportTooLarge(f"support size {s_eff} exceeds register dimension {register_dim}")
    if support[0] < 0 or support[-1] >= register_dim:
        raise SupportTooLarge(f"support {support} outside [0,{register_dim})")
    col = np.zeros((register_dim, 1), dtype=np.complex128)
    col[support, 0] = 1.0 / np.sqrt(s_eff)
    return complete_columns(col, register_dim)


def multiplexed_rotation(
    values: Sequence[float],
    norm: float,
    exponent: float = 1.0,
    signed: bool = True,
) -> np.ndarray:
    """X-rotations on a data qubit multiplexed over a value register.

    Block ``d`` is ``R_X(2 arccos v_d)`` with
    ``v_d = sgn(A_d) |A_d|^p / norm^p`` (unsigned drops the sign factor), so
    that ``<0|R|0> = v_d``: starting and postselecting the data qubit on |0>
    loads the value.  Returned matrix acts on data (x) value register with the
    data qubit most significant.
    """
    a = np.asarray(values, dtype=np.float64)
    if norm <= 0:
        raise OutOfUnitRange("norm must be positive")
    if np.any(np.abs(a) > norm * (1 + 1e-12)):
        raise OutOfUnitRange("a value exceeds the declared norm")
    v = np.abs(a) ** exponent / norm**exponent
    if signed:
        v *= np.where(a < 0, -1.0, 1.0)
    if np.any(np.abs(v) > 1 + 1e-12):
        raise OutOfUnitRange("rotation amplitude outside [-1, 1]")
    v = np.clip(v, -1.0, 1.0)
    s = np.sqrt(1.0 - v * v)
    d = a.size
    u = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    idx = np.arange(d)
    u[idx, idx] = v
    u[d + idx, d + idx] = v
    u[idx, d + idx] = -1j * s
    u[d + idx, idx] = -1j * s
    return u


def permutation_unitary(perm: Sequence[int], dim: int | None = None) -> np.ndarray:
    """Lift a classical bijection x -> perm[x] to the unitary U|x> = |perm x>."""
    p = np.asarray(perm, dtype=np.int64)
    dim = p.size if dim is None else dim
    if p.size != dim or not np.array_equal(np.sort(p), np.arange(dim)):
        raise NotBijective("table is not a permutation of the index set")
    u = np.zeros((dim, dim), dtype=np.complex128)
    u[p, np.arange(dim)] = 1.0
    return u


def range_controlled_not(range_flags: Sequence[int]) -> np.ndarray:
    """NOT on the delete qubit controlled on flagged label values.

    Acts on delete (x) label register with the delete qubit most significant.
    """
    flags = np.asarray(range_flags, dtype=np.uint8)
    dim = flags.size
    perm = np.arange(2 * dim, dtype=np.int64)
    hit = np.flatnonzero(flags)
    perm[hit] = dim + hit
    perm[dim + hit] = hit
    return permutation_unitary(perm)


def prep_isometry(values: Sequence[float], exponent: float = 0.5, signed: bool = True) -> np.ndarray:
    """State-preparation unitary loading value amplitudes onto |0>.

    First column is ``sum_d sgn(A_d)|A_d|^p |d> / sqrt(sum |A_d|^{2p})``
    (signs only when ``signed``); negative values keep real negative
    amplitudes rather than complex roots.  Deterministic completion as in
    :func:`diffusion`.
    """
    a = np.asarray(values, dtype=np.float64)
    if not np.any(a != 0):
        raise AllZeroValues("cannot prepare a state from all-zero values")
    amp = np.abs(a) ** exponent
    if signed:
        amp *= np.where(a < 0, -1.0, 1.0)
    amp = amp / np.linalg.norm(amp)
    return complete_columns(amp[:, None], a.size)


def controlled_unitary(u: np.ndarray, active: int = 1) -> np.ndarray:
    """Add a qubit control (most significant) activating on ``active``."""
    dim = u.shape[0]
    c = np.eye(2 * dim, dtype=np.complex128)
    lo = active * dim
    c[lo : lo + dim, lo : lo + dim] = u
    return c


def embed_operator(layout: RegisterLayout, block: np.ndarray, targets: Sequence[str]) -> np.ndarray:
    """Tensor a block acting on ``targets`` with identity on the rest.

    ``targets`` lists register names in the order the block's index digits
    use them (first name most significant within the block).
    """
    dims = [r.dim for r in layout.registers]
    t_pos = [layout.position(t) for t in targets]
    rest = [p for p in range(len(dims)) if p not in t_pos]
    t_dim = prod(dims[p] for p in t_pos)
    if block.shape != (t_dim, t_dim):
        raise DimMismatch(f"block is {block.shape}, targets {tuple(targets)} span dimension {t_dim}")
    rest_dim = prod(dims[p] for p in rest)
    order = t_pos + rest
    full = np.kron(block, np.eye(rest_dim, dtype=np.complex128))
    k = len(dims)
    inv = [order.index(q) for q in range(k)]
    tensor = full.reshape([dims[p] for p in order] * 2)
    tensor = tensor.transpose(inv + [k + q for q in inv])
    total = layout.total_dim
    return np.ascontiguousarray(tensor.reshape(total, total))


PlacedBlock = tuple  # (matrix, targets) or (matrix, targets, (control_register, active_value))


def compose(layout: RegisterLayout, placed: Sequence[PlacedBlock]) -> np.ndarray:
    """Multiply embedded blocks in circuit time order (first item acts first)."""
    total = layout.total_dim
    u = np.eye(total, dtype=np.complex128)
    for item in placed:
        mat, targets = item[0], tuple(item[1])
        if len(item) > 2 and item[2] is not None:
            ctrl_reg, active = item[2]
            if layout.dim_of(ctrl_reg) != 2:
                raise DimMismatch("control register must be a single qubit")
            mat = controlled_unitary(np.asarray(mat, dtype=np.complex128), active)
            targets = (ctrl_reg,) + targets
        u = embed_operator(layout, np.asarray(mat, dtype=np.complex128), targets) @ u
    return u


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SWAP_2Q = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]


def permutation_from_map(dim: int, fn: Callable[[int], int]) -> np.ndarray:
    """Tabulate x -> fn(x) and lift it (raises if not a bijection)."""
    return permutation_unitary([fn(x) for x in range(dim)], dim)
