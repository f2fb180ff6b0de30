"""Arithmetic descriptions of structured matrices and their oracle tables.

A matrix is described by labelling each nonzero entry with a pair ``(d, m)``:
``d`` indexes the distinct data value and ``m`` distinguishes repetitions of
that value.  Arithmetic maps give the row and column index of each label.
This module validates such descriptions, pads the label space until
``M_pad * D_pad == N * S`` holds, and completes the partial column/row maps
into full permutations acting on a combined register of dimension
``s_register_dim * N``.

Packing conventions used throughout the package:

* value-side label ``(d, m)``  ->  index ``d * M_pad + m``
* index-side label ``(s, j)``  ->  index ``s * N + j``

Oracles are kept as classical permutation tables rather than gate networks;
dense simulation only needs the permutation action, and the arithmetic
realisations cost polylog(N) gates regardless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import LabelCollision, NotDivisible, OutOfBounds, PrepIncompatible


@dataclass(frozen=True)
class PrepFactor:
    """Certificate that the column/row oracles commute with data loading.

    ``t_c(d, m)`` and ``t_r(d, m)`` give the position of a label inside its
    column/row *within* the block of fixed ``d``, so that the oracles can be
    written with the ``d`` register passing through unchanged.
    """

    t_c: Callable[[int, int], int]
    t_r: Callable[[int, int], int]


@dataclass(frozen=True)
class StructureSpec:
    """Arithmetic description of a structured matrix.

    ``row_map``/``col_map`` send an in-range label ``(d, m)`` to the row and
    column index of the entry holding value ``values[d]``.  ``m_range`` is the
    extent of the ``m`` axis the maps are defined on (labels outside
    ``in_range`` are dummy).  ``transpose`` is an involution on labels mapping
    an entry to its transpose partner (symmetric matrices only).
    ``col_rank``/``row_rank`` optionally fix the enumeration of entries within
    a column/row; the default is lexicographic rank over ``(d, m)``.
    """

    n: int
    values: tuple[float, ...]
    row_map: Callable[[int, int], int]
    col_map: Callable[[int, int], int]
    in_range: Callable[[int, int], bool]
    m_range: int
    transpose: Callable[[int, int], tuple[int, int]] | None = None
    prep_factor: PrepFactor | None = None
    col_rank: Callable[[int, int], int] | None = None
    row_rank: Callable[[int, int], int] | None = None
    name: str = "custom"

    def __post_init__(self):
        if self.n < 1 or self.n & (self.n - 1):
            raise ValueError(f"matrix dimension must be a power of two, got {self.n}")
        if len(self.values) == 0:
            raise ValueError("empty value list")
        if self.m_range < 1:
            raise ValueError("m_range must be positive")

    def labels(self):
        """Yield (d, m, i, j) for every in-range label, lexicographically."""
        for d in range(len(self.values)):
            for m in range(self.m_range):
                if self.in_range(d, m):
                    yield d, m, self.row_map(d, m), self.col_map(d, m)


class Counts(NamedTuple):
    D: int
    M: int
    S_c: int
    S_r: int


@dataclass(frozen=True)
class PaddedShape:
    """Label-space sizes after padding, plus register embedding dimensions.

    ``S_c``/``S_r`` stay at the true per-column/per-row maxima (they set the
    diffusion supports and the subnormalisation); ``S`` is the padded maximum
    satisfying ``M_pad * D_pad == N * S``.
    """

    D_pad: int
    M_pad: int
    S_c: int
    S_r: int
    S: int
    s_register_dim: int
    block_dim: int

    @property
    def combined_dim(self) -> int:
        return self.s_register_dim * self.block_dim

    @property
    def flag_qubit_log(self) -> int:
        """ceil(log2 S), the qubit count of the sparsity register."""
        return int(self.s_register_dim - 1).bit_length()


def _check_transpose(spec: StructureSpec) -> None:
    for d, m, i, j in spec.labels():
        td, tm = spec.transpose(d, m)
        if td != d:
            raise ValueError(f"transposition changes the value index at ({d},{m})")
        if not spec.in_range(td, tm):
            raise ValueError(f"transposition leaves the in-range set at ({d},{m})")
        if spec.transpose(td, tm) != (d, m):
            raise ValueError(f"transposition is not an involution at ({d},{m})")
        if (spec.row_map(td, tm), spec.col_map(td, tm)) != (j, i):
            raise ValueError(f"transposition does not swap (i,j) at ({d},{m})")


def derive_counts(spec: StructureSpec) -> Counts:
    """Count distinct values, maximal multiplicity, and column/row sparsities.

    Validates the labelling on the way: every in-range label must map into
    [0, N) x [0, N) and no two labels may hit the same entry.
    """
    n = spec.n
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    per_d = np.zeros(len(spec.values), dtype=np.int64)
    per_col = np.zeros(n, dtype=np.int64)
    per_row = np.zeros(n, dtype=np.int64)
    for d, m, i, j in spec.labels():
        if not (0 <= i < n and 0 <= j < n):
            raise OutOfBounds(f"label ({d},{m}) maps to ({i},{j}) outside [0,{n})")
        if (i, j) in seen:
            raise LabelCollision(f"labels {seen[i, j]} and ({d},{m}) both map to entry ({i},{j})")
        seen[i, j] = (d, m)
        per_d[d] += 1
        per_col[j] += 1
        per_row[i] += 1
    if not seen:
        raise ValueError("structure has no in-range labels")
    if spec.transpose is not None:
        _check_transpose(spec)
    return Counts(len(spec.values), int(per_d.max()), int(per_col.max()), int(per_row.max()))


def pad_shape(D: int, M: int, S_c: int, S_r: int, n: int, min_m_extent: int | None = None) -> PaddedShape:
    """Pad the label space until ``M_pad * D_pad == N * S``.

    Strategy: take the smallest ``S >= max(S_c, S_r)``, then the smallest
    ``D_pad >= D`` dividing ``N * S`` whose quotient covers the multiplicity
    axis.  Padding M first (``D_pad == D``) is preferred; growing S or D only
    adds dummy labels that the out-of-range oracle deletes.  ``min_m_extent``
    lets a labelling demand more m-slots than the maximal multiplicity.
    """
    need_m = max(M, min_m_extent or 0)
    s0 = max(S_c, S_r)
    for s in range(s0, s0 + 4 * n * D + 1):
        total = n * s
        for d_pad in range(D, total + 1):
            if total % d_pad == 0 and total // d_pad >= need_m:
                s_reg = 1 << int(s - 1).bit_length()
                return PaddedShape(d_pad, total // d_pad, S_c, S_r, s, s_reg, n)
    raise AssertionError("padding search failed")  # pragma: no cover


@dataclass(frozen=True)
class OracleTables:
    """Permutation tables realising the column, row, and range oracles.

    ``col_perm[d*M_pad + m] = s_c*N + j`` (and analogously ``row_perm``);
    both are full permutations of ``range(combined_dim)``.  ``range_flags``
    is 1 exactly on indices that do not correspond to an in-range label.
    ``col_support``/``row_support`` list the s-values taken on in-range
    labels, i.e. the diffusion supports.
    """

    shape: PaddedShape
    col_perm: np.ndarray
    row_perm: np.ndarray
    range_flags: np.ndarray
    col_support: tuple[int, ...]
    row_support: tuple[int, ...]
    transpose_perm: np.ndarray | None = None

    @property
    def combined_dim(self) -> int:
        return self.shape.combined_dim


def _complete_permutation(partial: np.ndarray, lo: int, hi: int) -> None:
    """Match unassigned inputs to unassigned outputs of [lo, hi) in order."""
    block = partial[lo:hi]
    used = set(block[block >= 0].tolist())
    free_out = iter(y for y in range(lo, hi) if y not in used)
    for x in range(lo, hi):
        if partial[x] < 0:
            partial[x] = next(free_out)


def _assign_side(
    spec: StructureSpec,
    shape: PaddedShape,
    index_of: Callable[[int, int], int],
    rank_override: Callable[[int, int], int] | None,
    t_component: Callable[[int, int], int] | None,
    s_limit: int,
    side: str,
) -> tuple[np.ndarray, tuple[int, ...]]:
    n = spec.n
    dim = shape.combined_dim
    perm = np.full(dim, -1, dtype=np.int64)
    prep = t_component is not None
    if prep:
        d_count = len(spec.values)
        if shape.D_pad != d_count:
            raise PrepIncompatible("value-count padding breaks the pass-through d register")
        if d_count & (d_count - 1):
            raise NotDivisible(f"D={d_count} is not a power of two")
        if s_limit % d_count:
            raise NotDivisible(f"D={d_count} does not divide S_{side}={s_limit}")
        if shape.s_register_dim % d_count:
            raise NotDivisible("d register does not split off the sparsity register")
        stride = shape.s_register_dim // d_count
        t_max = s_limit // d_count

    # rank bookkeeping: entries of each column/row in lexicographic label order
    groups: dict[int, int] = {}
    support: set[int] = set()
    taken: set[int] = set()
    for d, m, i, j in spec.labels():
        pos = i if side == "r" else j
        x = d * shape.M_pad + m
        if prep:
            t = t_component(d, m)
            if not 0 <= t < t_max:
                raise PrepIncompatible(f"t_{side}({d},{m})={t} outside [0,{t_max})")
            s = d * stride + t
        elif rank_override is not None:
            s = rank_override(d, m)
            if not 0 <= s < s_limit:
                raise ValueError(f"rank override {s} at ({d},{m}) outside [0,{s_limit})")
        else:
            s = groups.get(pos, 0)
            groups[pos] = s + 1
            assert s < s_limit
        y = s * n + pos
        if perm[x] >= 0 or y in taken:
            raise PrepIncompatible(f"({side}-side) label ({d},{m}) clashes at s={s}, index={pos}")
        perm[x] = y
        taken.add(y)
        support.add(s)

    if prep:
        for d in range(len(spec.values)):
            _complete_permutation(perm, d * shape.M_pad, (d + 1) * shape.M_pad)
    else:
        _complete_permutation(perm, 0, dim)
    return perm, tuple(sorted(support))


def complete_oracles(spec: StructureSpec, shape: PaddedShape) -> OracleTables:
    """Extend the partial (d,m) -> (s,j)/(s,i) maps to full permutations.

    In-range labels get their enumeration rank within the column/row (or the
    declared override / prep-factor position); everything else is matched to
    the leftover indices in lexicographic order, which keeps the tables
    deterministic.  With a ``prep_factor`` the completion stays within each
    fixed-``d`` block so the whole permutation commutes with anything
    diagonal in ``d``.
    """
    if spec.prep_factor is not None and shape.s_register_dim != shape.S:
        raise NotDivisible("PREP register splitting needs a power-of-two padded sparsity")
    prep = spec.prep_factor
    col_perm, col_support = _assign_side(
        spec, shape, spec.col_map, spec.col_rank, prep.t_c if prep else None, shape.S_c, "c"
    )
    row_perm, row_support = _assign_side(
        spec, shape, spec.row_map, spec.row_rank, prep.t_r if prep else None, shape.S_r, "r"
    )

    dim = shape.combined_dim
    flags = np.ones(dim, dtype=np.uint8)
    for d, m, _, _ in spec.labels():
        flags[d * shape.M_pad + m] = 0

    transpose_perm = None
    if spec.transpose is not None:
        transpose_perm = np.arange(dim, dtype=np.int64)
        for d, m, _, _ in spec.labels():
            td, tm = spec.transpose(d, m)
            transpose_perm[d * shape.M_pad + m] = td * shape.M_pad + tm

    return OracleTables(shape, col_perm, row_perm, flags, col_support, row_support, transpose_perm)
