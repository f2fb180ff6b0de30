"""Assembly of the block-encoding schemes into simulated unitaries.

Every builder returns a :class:`BlockEncoding` whose layout lists all flag
registers above the block register, so the encoded matrix always sits in the
top-left corner of the unitary.  The base and PREP/UNPREP schemes are exact;
the preamplified schemes apply the amplification polynomial to the singular
values of the two split factors via SVD and re-embed the result, which
realises the same matrix the amplified circuit would produce without
synthesising phase factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import circuit as qc
from . import sva
from .errors import (
    AllZeroValues,
    EncodingTooLarge,
    NoTransposeOracle,
    NotSymmetric,
    PrepIncompatible,
)
from .estimator import CostRecord, prep_subnormalisation
from .structure import (
    OracleTables,
    PaddedShape,
    StructureSpec,
    complete_oracles,
    derive_counts,
    pad_shape,
)


@dataclass(frozen=True)
class AmplificationParams:
    """Knobs for the preamplified schemes.

    ``delta`` is the plateau margin of the amplification polynomial (largest
    valid choice by default), ``epsilon`` its relative accuracy, ``p`` the
    exponent splitting the data loading.  ``gamma_c``/``gamma_r`` override
    the automatic amplification factors when set.
    """

    delta: float = sva.DELTA_DEFAULT
    epsilon: float = 1e-3
    p: float = 0.5
    gamma_c: float | None = None
    gamma_r: float | None = None

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        if not 0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        for g in (self.gamma_c, self.gamma_r):
            if g is not None and g < 1:
                raise ValueError("amplification factors below 1 are not meaningful")


@dataclass(frozen=True)
class BlockEncoding:
    """A simulated block encoding: unitary, register layout, and bookkeeping.

    ``flags`` are the registers that must be |0> on input and output to
    select the encoded block; they are exactly the non-block registers, and
    the block register is last, so the block is ``unitary[:N, :N] * (1/alpha)``.
    """

    unitary: np.ndarray
    layout: qc.RegisterLayout
    flags: tuple[str, ...]
    alpha: float
    cost: CostRecord
    scheme_tag: str
    hermitian: bool = False
    gamma_c: float = 1.0
    gamma_r: float = 1.0
    epsilon: float = 0.0

    def __post_init__(self):
        assert self.flags == self.layout.names[:-1], "flag registers must precede the block register"
        defect = qc.unitarity_defect(self.unitary)
        assert defect <= 1e-10, f"assembled operator is not unitary (defect {defect:.3e})"

    @property
    def block_dim(self) -> int:
        return self.layout.registers[-1].dim


def _prepared(spec: StructureSpec) -> tuple:
    counts = derive_counts(spec)
    shape = pad_shape(*counts, spec.n, min_m_extent=spec.m_range)
    tables = complete_oracles(spec, shape)
    return counts, shape, tables


def _norm_max(spec: StructureSpec) -> float:
    norm = max(abs(v) for v in spec.values)
    if norm == 0:
        raise AllZeroValues("all data values vanish")
    return norm


def _combined_values(spec: StructureSpec, shape: PaddedShape) -> np.ndarray:
    """Data value per combined label index; invalid labels load zero."""
    vals = np.zeros(shape.combined_dim, dtype=np.float64)
    for d, m, _, _ in spec.labels():
        vals[d * shape.M_pad + m] = spec.values[d]
    return vals


def _guard_dim(total: int) -> None:
    if total > qc.MAX_TOTAL_DIM:
        raise EncodingTooLarge(f"total dimension {total} exceeds the dense-simulation cap {qc.MAX_TOTAL_DIM}")


def _support(side_support: tuple[int, ...], s_true: int, register_dim: int) -> tuple[int, ...]:
    """Diffusion support: the s-values the oracle uses, padded to size S_c/S_r."""
    sup = list(side_support)
    nxt = 0
    while len(sup) < s_true:
        while nxt in sup:
            nxt += 1
        sup.append(nxt)
    assert len(sup) == s_true
    assert max(sup) < register_dim
    return tuple(sorted(sup))


def _inverse(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return inv


def build_base(spec: StructureSpec, tables: OracleTables | None = None, shape: PaddedShape | None = None) -> BlockEncoding:
    """The general scheme: diffusion, column oracle, range flag, multiplexed
    rotations, row oracle, inverse diffusion.

    Subnormalisation ``sqrt(S_c S_r) ||A||_max``; flag registers are the data
    qubit, the delete qubit, and the sparsity register (2 + ceil(log2 S)
    qubits).
    """
    if tables is None or shape is None:
        _, shape, tables = _prepared(spec)
    n = spec.n
    norm = _norm_max(spec)
    _guard_dim(4 * shape.s_register_dim * n)
    layout = qc.layout_of(("data", 2), ("del", 2), ("s", shape.s_register_dim), ("block", n))
    diff_c = qc.diffusion(shape.S_c, _support(tables.col_support, shape.S_c, shape.s_register_dim), shape.s_register_dim)
    diff_r = qc.diffusion(shape.S_r, _support(tables.row_support, shape.S_r, shape.s_register_dim), shape.s_register_dim)
    rot = qc.multiplexed_rotation(_combined_values(spec, shape), norm)
    placed = [
        (diff_c, ("s",)),
        (qc.permutation_unitary(_inverse(tables.col_perm)), ("s", "block")),
        (qc.range_controlled_not(tables.range_flags), ("del", "s", "block")),
        (rot, ("data", "s", "block")),
        (qc.permutation_unitary(tables.row_perm), ("s", "block")),
        (diff_r.conj().T, ("s",)),
    ]
    u = qc.compose(layout, placed)
    alpha = sqrt(shape.S_c * shape.S_r) * norm
    d_items = len(spec.values)
    cost = CostRecord("base", d_items, alpha, 2 + shape.flag_qubit_log)
    return BlockEncoding(u, layout, layout.names[:-1], alpha, cost, "base")


def build_hermitian_base(
    spec: StructureSpec, tables: OracleTables | None = None, shape: PaddedShape | None = None
) -> BlockEncoding:
    """Base scheme made Hermitian via the transposition oracle.

    The row oracle becomes column-oracle-after-transposition, a Z on the data
    qubit precedes the rotations, and the circuit is a conjugation of three
    commuting Hermitian middles; costs match the base scheme.
    """
    if spec.transpose is None:
        raise NoTransposeOracle("Hermitian base scheme needs the transposition map")
    if tables is None or shape is None:
        _, shape, tables = _prepared(spec)
    if shape.S_c != shape.S_r:
        raise NoTransposeOracle("Hermitian base scheme needs equal row and column sparsities")
    n = spec.n
    norm = _norm_max(spec)
    _guard_dim(4 * shape.s_register_dim * n)
    layout = qc.layout_of(("data", 2), ("del", 2), ("s", shape.s_register_dim), ("block", n))
    diff = qc.diffusion(shape.S_c, _support(tables.col_support, shape.S_c, shape.s_register_dim), shape.s_register_dim)
    rot = qc.multiplexed_rotation(_combined_values(spec, shape), norm)
    placed = [
        (diff, ("s",)),
        (qc.permutation_unitary(_inverse(tables.col_perm)), ("s", "block")),
        (qc.range_controlled_not(tables.range_flags), ("del", "s", "block")),
        (qc.PAULI_Z, ("data",)),
        (rot, ("data", "s", "block")),
        (qc.permutation_unitary(tables.transpose_perm), ("s", "block")),
        (qc.permutation_unitary(tables.col_perm), ("s", "block")),
        (diff.conj().T, ("s",)),
    ]
    u = qc.compose(layout, placed)
    alpha = sqrt(shape.S_c * shape.S_r) * norm
    cost = CostRecord("hermitian_base", len(spec.values), alpha, 2 + shape.flag_qubit_log)
    return BlockEncoding(u, layout, layout.names[:-1], alpha, cost, "hermitian_base", hermitian=True)


def _sign_diagonal(values, stride: int, dim: int) -> np.ndarray:
    """Diagonal +-1 oracle applying sgn(A_d), d = index // stride (+1 beyond)."""
    signs = np.ones(dim, dtype=np.complex128)
    for x in range(dim):
        d = x // stride
        if d < len(values) and values[d] < 0:
            signs[x] = -1.0
    return np.diag(signs)


def build_prep_unprep(spec: StructureSpec, p: float = 0.5) -> BlockEncoding:
    """State-preparation scheme replacing diffusion and rotations.

    Needs the prep-factor certificate (the oracles pass the value register
    through), D <= S_c, S_r with D dividing both, and D a power of two.  The
    subnormalisation drops to
    ``sqrt(S_c S_r)/D * sqrt(sum |A_d|^2p sum |A_d|^(2-2p))``; one flag qubit
    fewer than the base scheme.  At the optimal p=1/2 the unprepare operator
    is the prepared adjoint times the sign oracle, which also halves the data
    loading.
    """
    if spec.prep_factor is None:
        raise PrepIncompatible("spec carries no prep-factor certificate")
    counts, shape, tables = _prepared(spec)
    d_items = counts.D
    if d_items > counts.S_c or d_items > counts.S_r:
        raise PrepIncompatible(f"D={d_items} exceeds a sparsity (S_c={counts.S_c}, S_r={counts.S_r})")
    n = spec.n
    norm = _norm_max(spec)
    srem_dim = shape.s_register_dim // d_items
    _guard_dim(2 * d_items * srem_dim * n)
    layout = qc.layout_of(("del", 2), ("d", d_items), ("srem", srem_dim), ("block", n))

    prep = qc.prep_isometry(spec.values, p, signed=True)
    if p == 0.5:
        unprep = prep.conj().T @ _sign_diagonal(spec.values, 1, d_items)
    else:
        unprep = qc.prep_isometry(spec.values, 1.0 - p, signed=False).conj().T
    diff_c = qc.diffusion(counts.S_c // d_items, range(counts.S_c // d_items), srem_dim)
    diff_r = qc.diffusion(counts.S_r // d_items, range(counts.S_r // d_items), srem_dim)
    placed = [
        (prep, ("d",)),
        (diff_c, ("srem",)),
        (qc.permutation_unitary(_inverse(tables.col_perm)), ("d", "srem", "block")),
        (qc.range_controlled_not(tables.range_flags), ("del", "d", "srem", "block")),
        (qc.permutation_unitary(tables.row_perm), ("d", "srem", "block")),
        (unprep, ("d",)),
        (diff_r.conj().T, ("srem",)),
    ]
    u = qc.compose(layout, placed)
    alpha = prep_subnormalisation(spec.values, counts.S_c, counts.S_r, p)
    data_loading = d_items if p == 0.5 else 2 * d_items
    cost = CostRecord("prep_unprep", data_loading, alpha, 1 + shape.flag_qubit_log)
    return BlockEncoding(u, layout, layout.names[:-1], alpha, cost, "prep_unprep")


def _factor_dilation(block: np.ndarray, ambient: int) -> np.ndarray:
    """Deterministic unitary on ``ambient`` dims with ``block`` top-left.

    ``block`` (r x c, operator norm <= 1) occupies rows [0, r) and columns
    [0, c); the orthogonality deficit goes into rows [r, r+c), and the
    remaining columns are completed over the standard basis.
    """
    r, c = block.shape
    gram = np.eye(c) - block.T @ block
    w, v = np.linalg.eigh(gram)
    k = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    cols = np.zeros((ambient, c), dtype=np.complex128)
    cols[:r] = block
    cols[r : r + c] = k
    return qc.complete_columns(cols, ambient)


def _amplified_factor(
    m_exact: np.ndarray, params: AmplificationParams, gamma_override: float | None
) -> tuple[np.ndarray, float, sva.ChebyshevPoly | None]:
    """Amplify a split factor's singular values; fall back to gamma=1."""
    zeta_max = float(np.linalg.svd(m_exact, compute_uv=False).max())
    gamma = gamma_override if gamma_override is not None else 2.0 ** (-0.25) / zeta_max
    if gamma <= 1.0:
        return m_exact, 1.0, None
    poly = sva.sva_polynomial(gamma, params.delta, params.epsilon)
    return sva.amplify_singular_values(m_exact, poly), gamma, poly


def build_preamplified(spec: StructureSpec, params: AmplificationParams | None = None) -> BlockEncoding:
    """Split the data loading by exponent p and amplify both factors.

    The two halves of the circuit are rectangular block encodings whose
    singular values are the column/row value norms; each is amplified by its
    own factor (chosen as 2^(-1/4) over the largest singular value, clipped
    at 1), dividing the subnormalisation by ``gamma_c * gamma_r`` at accuracy
    ``(2 eps + eps^2) * alpha``.  Factors that cannot be amplified are left
    exact.
    """
    params = params or AmplificationParams()
    counts, shape, tables = _prepared(spec)
    n = spec.n
    norm = _norm_max(spec)
    s_dim = shape.s_register_dim
    combined = s_dim * n
    _guard_dim(8 * combined)
    layout = qc.layout_of(("data0", 2), ("data1", 2), ("del", 2), ("s", s_dim), ("block", n))
    sub_c = qc.layout_of(("data0", 2), ("s", s_dim), ("block", n))
    sub_r = qc.layout_of(("data1", 2), ("s", s_dim), ("block", n))

    vals = _combined_values(spec, shape)
    rot_left = qc.multiplexed_rotation(vals, norm, exponent=params.p, signed=True)
    rot_right = qc.multiplexed_rotation(vals, norm, exponent=1.0 - params.p, signed=False)
    diff_c = qc.diffusion(shape.S_c, _support(tables.col_support, shape.S_c, s_dim), s_dim)
    diff_r = qc.diffusion(shape.S_r, _support(tables.row_support, shape.S_r, s_dim), s_dim)

    w_c = qc.compose(
        sub_c,
        [
            (diff_c, ("s",)),
            (qc.permutation_unitary(_inverse(tables.col_perm)), ("s", "block")),
            (rot_left, ("data0", "s", "block")),
        ],
    )
    w_r = qc.compose(
        sub_r,
        [
            (rot_right, ("data1", "s", "block")),
            (qc.permutation_unitary(tables.row_perm), ("s", "block")),
            (diff_r.conj().T, ("s",)),
        ],
    )

    m_c = w_c[:combined, :n].real  # columns: flags of the left factor all |0>
    m_r = w_r[:n, :combined].real
    m_c_amp, gamma_c, _ = _amplified_factor(m_c, params, params.gamma_c)
    m_r_amp, gamma_r, _ = _amplified_factor(m_r, params, params.gamma_r)
    u_c = _factor_dilation(m_c_amp, 2 * combined) if gamma_c > 1 else w_c
    u_r = _factor_dilation(m_r_amp, 2 * combined) if gamma_r > 1 else w_r

    u = qc.compose(
        layout,
        [
            (u_c, ("data0", "s", "block")),
            (qc.range_controlled_not(tables.range_flags), ("del", "s", "block")),
            (u_r, ("data1", "s", "block")),
        ],
    )
    base_alpha = sqrt(shape.S_c * shape.S_r) * norm
    alpha = base_alpha / (gamma_c * gamma_r)
    d_items = counts.D
    amp = 3.0 * (
        gamma_c / params.delta * np.log(gamma_c / params.epsilon)
        + gamma_r / params.delta * np.log(gamma_r / params.epsilon)
    )
    cost = CostRecord("preamplified", d_items * amp, alpha, 5 + shape.flag_qubit_log)
    return BlockEncoding(
        u,
        layout,
        layout.names[:-1],
        alpha,
        cost,
        "preamplified",
        gamma_c=gamma_c,
        gamma_r=gamma_r,
        epsilon=params.epsilon,
    )


def build_hermitian_preamplified(spec: StructureSpec, params: AmplificationParams | None = None) -> BlockEncoding:
    """Preamplified scheme with exactly conjugate split factors (p = 1/2).

    The rotations load unsigned square roots so the two factors are Hermitian
    conjugates (amplified together); a separate sign oracle in the middle
    restores the signs, adding D to the data loading.  A swap of the two data
    qubits keeps the left factor's junk away from the right factor.
    """
    params = params or AmplificationParams()
    if params.p != 0.5:
        raise ValueError("the Hermitian preamplified construction fixes p = 1/2")
    if spec.transpose is None:
        raise NoTransposeOracle("Hermitian preamplification needs the transposition map")
    counts, shape, tables = _prepared(spec)
    if shape.S_c != shape.S_r:
        raise NoTransposeOracle("Hermitian preamplification needs equal sparsities")
    n = spec.n
    norm = _norm_max(spec)
    s_dim = shape.s_register_dim
    combined = s_dim * n
    _guard_dim(8 * combined)
    layout = qc.layout_of(("data0", 2), ("data1", 2), ("del", 2), ("s", s_dim), ("block", n))
    sub = qc.layout_of(("data1", 2), ("s", s_dim), ("block", n))

    vals = _combined_values(spec, shape)
    rot = qc.multiplexed_rotation(vals, norm, exponent=0.5, signed=False)
    diff = qc.diffusion(shape.S_c, _support(tables.col_support, shape.S_c, s_dim), s_dim)
    # right factor: rotations+Z, column oracle, inverse diffusion
    w = qc.compose(
        sub,
        [
            (rot, ("data1", "s", "block")),
            (qc.PAULI_Z, ("data1",)),
            (qc.permutation_unitary(tables.col_perm), ("s", "block")),
            (diff.conj().T, ("s",)),
        ],
    )
    m = w[:n, :combined].real
    m_amp, gamma, _ = _amplified_factor(m, params, params.gamma_c)
    u_right = _factor_dilation(m_amp, 2 * combined) if gamma > 1 else w

    u = qc.compose(
        layout,
        [
            (u_right.conj().T, ("data1", "s", "block")),
            (qc.range_controlled_not(tables.range_flags), ("del", "s", "block")),
            (qc.SWAP_2Q, ("data0", "data1")),
            (qc.permutation_unitary(tables.transpose_perm), ("s", "block")),
            (_sign_diagonal(spec.values, shape.M_pad, combined), ("s", "block")),
            (u_right, ("data1", "s", "block")),
        ],
    )
    base_alpha = sqrt(shape.S_c * shape.S_r) * norm
    alpha = base_alpha / (gamma * gamma)
    d_items = counts.D
    amp = 6.0 * gamma / params.delta * np.log(gamma / params.epsilon)
    cost = CostRecord("hermitian_preamplified", d_items * amp + d_items, alpha, 5 + shape.flag_qubit_log)
    return BlockEncoding(
        u,
        layout,
        layout.names[:-1],
        alpha,
        cost,
        "hermitian_preamplified",
        hermitian=True,
        gamma_c=gamma,
        gamma_r=gamma,
        epsilon=params.epsilon,
    )


def hermitianize(enc: BlockEncoding, symmetry_tol: float | None = None) -> BlockEncoding:
    """Wrap any encoding of a symmetric matrix into a Hermitian one.

    One extra flag qubit; conjugating the controlled encoding and its adjoint
    between Hadamards symmetrises the unitary while leaving the encoded block
    (hence alpha) unchanged.  Data loading doubles.
    """
    from .verify import extract_block

    block = extract_block(enc)
    if symmetry_tol is None:
        symmetry_tol = 1e-9 if enc.epsilon == 0 else 3 * enc.epsilon
    skew = float(np.abs(block - block.T).max())
    if skew > symmetry_tol:
        raise NotSymmetric(f"encoded matrix is not symmetric (defect {skew:.3e})")
    _guard_dim(2 * enc.layout.total_dim)
    existing = enc.layout.names
    flag = "herm_flag"
    k = 0
    while flag in existing:
        k += 1
        flag = f"herm_flag{k}"
    layout = qc.RegisterLayout((qc.Register(flag, 2),) + enc.layout.registers)
    placed = [
        (qc.hadamard(), (flag,)),
        (enc.unitary, existing, (flag, 1)),
        (qc.PAULI_X, (flag,)),
        (enc.unitary.conj().T, existing, (flag, 1)),
        (qc.hadamard(), (flag,)),
    ]
    u = qc.compose(layout, placed)
    cost = CostRecord(
        "hermitianized",
        2 * enc.cost.data_loading,
        enc.alpha,
        enc.cost.flag_qubits + 1,
        note=f"wraps {enc.scheme_tag}",
    )
    return BlockEncoding(
        u,
        layout,
        layout.names[:-1],
        enc.alpha,
        cost,
        "hermitianized",
        hermitian=True,
        gamma_c=enc.gamma_c,
        gamma_r=enc.gamma_r,
        epsilon=enc.epsilon,
    )
