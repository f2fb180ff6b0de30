"""Built-in structured-matrix families and their special-case circuits.

Each family provides a :class:`StructureSpec` plus a direct dense
constructor that writes entries straight from the matrix definition, used as
the independent oracle in tests.  Two compact circuit variants (the merged
overflow/delete Toeplitz circuit and the no-delete-qubit tridiagonal
circuit) are built explicitly to cross-check the generic pipeline.
"""

from __future__ import annotations

import numpy as np

from . import circuit as qc
from .errors import BadFamilyParameter
from .estimator import CostRecord
from .schemes import BlockEncoding
from .structure import PrepFactor, StructureSpec


def _require_pow2(n: int, minimum: int, what: str) -> None:
    if n < minimum or n & (n - 1):
        raise BadFamilyParameter(f"{what} must be a power of two >= {minimum}, got {n}")


# ---------------------------------------------------------------------------
# checkerboard


def checkerboard(n: int, a0: float, a1: float, zero_corners: bool = False) -> StructureSpec:
    """Alternating-value dense matrix: a0 on even i+j, a1 on odd.

    Two data values, multiplicity n^2/2, full sparsity n.  ``zero_corners``
    deletes the top-left and bottom-right entries, exercising the range
    oracle.  The labelling walks the matrix row by row, so
    ``m = i*(n/2) + floor(j/2)``.
    """
    _require_pow2(n, 2, "checkerboard dimension")
    half = n // 2
    m_top = n * n // 2

    def i_of(d, m):
        return m // half

    def j_of(d, m):
        i = m // half
        return 2 * (m % half) + (d + i) % 2

    def in_range(d, m):
        if zero_corners and d == 0 and m in (0, m_top - 1):
            return False
        return True

    def tau(d, m):
        i, j = i_of(d, m), j_of(d, m)
        return d, j * half + i // 2

    prep = PrepFactor(t_c=lambda d, m: i_of(d, m) // 2, t_r=lambda d, m: j_of(d, m) // 2)
    return StructureSpec(
        n=n,
        values=(float(a0), float(a1)),
        row_map=i_of,
        col_map=j_of,
        in_range=in_range,
        m_range=m_top,
        transpose=tau,
        prep_factor=prep,
        name="checkerboard",
    )


def checkerboard_dense(n: int, a0: float, a1: float, zero_corners: bool = False) -> np.ndarray:
    a = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            a[i, j] = a0 if (i + j) % 2 == 0 else a1
    if zero_corners:
        a[0, 0] = 0.0
        a[n - 1, n - 1] = 0.0
    return a


# ---------------------------------------------------------------------------
# Toeplitz / circulant


def toeplitz(n: int, k: int, values, circulant: bool = False) -> StructureSpec:
    """Banded Toeplitz matrix with D diagonals offset k above the main one.

    Value d sits on the diagonal ``i - j = d - k``; labels use the column
    index as m, so out-of-range pairs are exactly the over/underflows of
    ``i = d - k + m``.  The circulant variant wraps the row index mod n and
    has no out-of-range pairs.
    """
    _require_pow2(n, 2, "Toeplitz dimension")
    vals = tuple(float(v) for v in values)
    d_count = len(vals)
    if not 1 <= d_count <= n:
        raise BadFamilyParameter(f"need between 1 and {n} diagonals, got {d_count}")
    if not 0 <= k < d_count:
        raise BadFamilyParameter(f"offset k={k} outside [0, {d_count})")

    def i_of(d, m):
        return (d - k + m) % n if circulant else d - k + m

    def in_range(d, m):
        return True if circulant else 0 <= d - k + m < n

    prep = PrepFactor(t_c=lambda d, m: 0, t_r=lambda d, m: 0)
    return StructureSpec(
        n=n,
        values=vals,
        row_map=i_of,
        col_map=lambda d, m: m,
        in_range=in_range,
        m_range=n,
        prep_factor=prep,
        name="circulant" if circulant else "toeplitz",
    )


def toeplitz_dense(n: int, k: int, values, circulant: bool = False) -> np.ndarray:
    d_count = len(values)
    a = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            d = (i - j + k) % n if circulant else i - j + k
            if 0 <= d < d_count:
                a[i, j] = values[d]
    return a


# ---------------------------------------------------------------------------
# symmetric tridiagonal


def tridiagonal(n: int, values, with_transpose: bool = True, pad_zero_value: bool = True) -> StructureSpec:
    """Symmetric tridiagonal matrix with 2n-1 distinct values.

    ``values[2i]`` is the diagonal entry (i, i); ``values[2i+1]`` the shared
    off-diagonal pair (i, i+1)/(i+1, i).  ``pad_zero_value`` appends an
    explicit zero for the padding value index so the top range-oracle flip
    can be dropped in the compact circuit; the unpadded variant leaves the
    padding to :func:`blockenc.structure.pad_shape` and is kept for
    regression.
    """
    _require_pow2(n, 2, "tridiagonal dimension")
    vals = tuple(float(v) for v in values)
    if len(vals) != 2 * n - 1:
        raise BadFamilyParameter(f"need 2n-1 = {2 * n - 1} values, got {len(vals)}")
    if pad_zero_value:
        vals = vals + (0.0,)

    def i_of(d, m):
        return d // 2 + m

    def j_of(d, m):
        return d // 2 + (d % 2 if m == 0 else 0)

    def in_range(d, m):
        return d < 2 * n - 1 and not (d % 2 == 0 and m == 1)

    tau = (lambda d, m: (d, 1 - m) if d % 2 else (d, m)) if with_transpose else None
    return StructureSpec(
        n=n,
        values=vals,
        row_map=i_of,
        col_map=j_of,
        in_range=in_range,
        m_range=2,
        transpose=tau,
        name="tridiagonal",
    )


def tridiagonal_dense(n: int, values) -> np.ndarray:
    a = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        a[i, i] = values[2 * i]
        if i + 1 < n:
            a[i, i + 1] = values[2 * i + 1]
            a[i + 1, i] = values[2 * i + 1]
    return a


# ---------------------------------------------------------------------------
# extended binary tree adjacency


def binary_tree(n: int, a0: float, a1: float, a2: float) -> StructureSpec:
    """Adjacency matrix of a balanced binary tree extended by a root above.

    Root and leaf nodes carry weight a0, the other nodes a1, the edges a2.
    Labels m < n describe diagonal entries and above-diagonal edges
    (i = floor(m/2)); labels m > n their below-diagonal partners (i = m - n).
    Transposition just flips the top m bit for the edge value.  The printed
    within-row enumeration (diagonal 0, parent 1, children 2 and 3) is
    declared explicitly so the oracles match it.
    """
    _require_pow2(n, 8, "binary-tree dimension")

    def tau(d, m):
        return (d, m ^ n) if d == 2 else (d, m)

    def i_of(d, m):
        if d <= 1:
            return m
        return m // 2 if m < n else m - n

    def j_of(d, m):
        td, tm = tau(d, m)
        return i_of(td, tm)

    def in_range(d, m):
        if d == 0:
            return m == 0 or n // 2 <= m < n
        if d == 1:
            return 1 <= m < n // 2
        if d == 2:
            return m != 0 and m != n and m < 2 * n
        return False

    def row_rank(d, m):
        if d <= 1:
            return 0
        return 1 if m > n else 2 + m % 2

    return StructureSpec(
        n=n,
        values=(float(a0), float(a1), float(a2)),
        row_map=i_of,
        col_map=j_of,
        in_range=in_range,
        m_range=2 * n,
        transpose=tau,
        row_rank=row_rank,
        col_rank=lambda d, m: row_rank(*tau(d, m)),
        name="binary_tree",
    )


def binary_tree_dense(n: int, a0: float, a1: float, a2: float) -> np.ndarray:
    a = np.zeros((n, n), dtype=np.float64)
    a[0, 0] = a0
    for m in range(n // 2, n):
        a[m, m] = a0
    for m in range(1, n // 2):
        a[m, m] = a1
    for m in range(1, n):
        a[m // 2, m] = a2
        a[m, m // 2] = a2
    return a


# ---------------------------------------------------------------------------
# dedicated compact circuits (cross-checks of the generic pipeline)


def toeplitz_merged_encoding(n: int, k: int, values) -> BlockEncoding:
    """Toeplitz circuit with the overflow bit reused as the delete flag.

    One modular addition of d - k over the doubled index register replaces
    the three separate oracles; the high bit ends up set exactly on the
    over/underflowed labels.  Must encode the same block as the generic base
    scheme.
    """
    _require_pow2(n, 2, "Toeplitz dimension")
    vals = np.asarray(values, dtype=np.float64)
    d_count = vals.size
    _require_pow2(d_count, 1, "diagonal count")
    layout = qc.layout_of(("data", 2), ("s", d_count), ("del", 2), ("block", n))
    norm = float(np.abs(vals).max())
    diff = qc.diffusion(d_count, range(d_count), d_count)
    rot = qc.multiplexed_rotation(vals, norm)
    two_n = 2 * n

    def shifted(x: int) -> int:
        d, y = divmod(x, two_n)
        return d * two_n + (y + d - k) % two_n

    adder = qc.permutation_from_map(d_count * two_n, shifted)
    u = qc.compose(
        layout,
        [
            (diff, ("s",)),
            (rot, ("data", "s")),
            (adder, ("s", "del", "block")),
            (diff.conj().T, ("s",)),
        ],
    )
    alpha = d_count * norm
    log_s = int(d_count - 1).bit_length()
    cost = CostRecord("base", d_count, alpha, 2 + log_s, note="merged overflow/delete variant")
    return BlockEncoding(u, layout, layout.names[:-1], alpha, cost, "base")


def tridiagonal_compact_encoding(n: int, values, hermitian: bool = False) -> BlockEncoding:
    """Tridiagonal circuit without a delete qubit.

    The value register is read off the column register plus one sparsity bit
    (d = 2j + s0), the uniform superposition runs over the three index
    combinations {00, 01, 11} actually used, and the one remaining invalid
    label loads an explicit zero.  The Hermitian variant conjugates the
    column oracle around the transposition CNOT with a Z on the data qubit.
    """
    _require_pow2(n, 2, "tridiagonal dimension")
    vals = list(float(v) for v in values)
    if len(vals) != 2 * n - 1:
        raise BadFamilyParameter(f"need 2n-1 = {2 * n - 1} values, got {len(vals)}")
    vals.append(0.0)
    layout = qc.layout_of(("data", 2), ("s", 4), ("block", n))
    norm = max(abs(v) for v in vals)
    diff3 = qc.diffusion(3, (0, 1, 3), 4)
    combined = 4 * n
    loaded = np.array([vals[2 * (x % n) + ((x // n) & 1)] for x in range(combined)])
    rot = qc.multiplexed_rotation(loaded, norm)

    def dec_if_s1(x: int) -> int:
        s, j = divmod(x, n)
        return x if s != 1 else s * n + (j - 1) % n

    def inc_if_s1(x: int) -> int:
        s, j = divmod(x, n)
        return x if s != 1 else s * n + (j + 1) % n

    def inc_if_s1bit(x: int) -> int:
        s, j = divmod(x, n)
        return x if not s & 2 else s * n + (j + 1) % n

    def flip_m(x: int) -> int:
        s, j = divmod(x, n)
        return (s ^ ((s & 1) << 1)) * n + j

    col_dag = qc.permutation_from_map(combined, dec_if_s1)
    if hermitian:
        placed = [
            (diff3, ("s",)),
            (col_dag, ("s", "block")),
            (qc.PAULI_Z, ("data",)),
            (rot, ("data", "s", "block")),
            (qc.permutation_from_map(combined, flip_m), ("s", "block")),
            (qc.permutation_from_map(combined, inc_if_s1), ("s", "block")),
            (diff3.conj().T, ("s",)),
        ]
    else:
        placed = [
            (diff3, ("s",)),
            (col_dag, ("s", "block")),
            (rot, ("data", "s", "block")),
            (qc.permutation_from_map(combined, inc_if_s1bit), ("s", "block")),
            (diff3.conj().T, ("s",)),
        ]
    u = qc.compose(layout, placed)
    alpha = 3.0 * norm
    tag = "hermitian_base" if hermitian else "base"
    cost = CostRecord(tag, len(vals), alpha, 3, note="no delete qubit; padding value loads zero")
    return BlockEncoding(u, layout, layout.names[:-1], alpha, cost, tag, hermitian=hermitian)


# ---------------------------------------------------------------------------
# JSON structure descriptions

FAMILY_NAMES = ("checkerboard", "toeplitz", "circulant", "tridiagonal", "binary-tree")


def spec_from_json(obj: dict) -> StructureSpec:
    """Build a family spec from the JSON description format.

    Expected keys: ``family``, ``n``, ``values``, plus per-family parameters
    (``k``/``circulant`` for Toeplitz, ``zero_corners`` for the checkerboard,
    ``with_transpose``/``pad_zero_value`` for the tridiagonal family).
    """
    family = obj.get("family")
    n = obj.get("n")
    values = obj.get("values")
    if family is None or n is None or values is None:
        raise BadFamilyParameter("description needs 'family', 'n', and 'values'")
    family = str(family).replace("_", "-")
    if family == "checkerboard":
        if len(values) != 2:
            raise BadFamilyParameter("checkerboard takes exactly two values")
        return checkerboard(n, *values, zero_corners=bool(obj.get("zero_corners", False)))
    if family in ("toeplitz", "circulant"):
        return toeplitz(
            n,
            int(obj.get("k", 0)),
            values,
            circulant=family == "circulant" or bool(obj.get("circulant", False)),
        )
    if family == "tridiagonal":
        return tridiagonal(
            n,
            values,
            with_transpose=bool(obj.get("with_transpose", True)),
            pad_zero_value=bool(obj.get("pad_zero_value", True)),
        )
    if family == "binary-tree":
        if len(values) != 3:
            raise BadFamilyParameter("binary-tree takes exactly three values")
        return binary_tree(n, *values)
    raise BadFamilyParameter(f"unknown family {family!r} (choose from {FAMILY_NAMES})")


def dense_direct(spec_name: str, n: int, values, **params) -> np.ndarray:
    """Dispatch to the oracle-free dense constructors by family name."""
    if spec_name == "checkerboard":
        return checkerboard_dense(n, *values, zero_corners=params.get("zero_corners", False))
    if spec_name in ("toeplitz", "circulant"):
        return toeplitz_dense(n, params.get("k", 0), values, circulant=spec_name == "circulant")
    if spec_name == "tridiagonal":
        return tridiagonal_dense(n, values)
    if spec_name == "binary_tree":
        return binary_tree_dense(n, *values)
    raise BadFamilyParameter(f"unknown family {spec_name!r}")
