"""Independent checks: dense reconstruction, block extraction, reports.

This module is the oracle side of every dual-route test: it rebuilds the
target matrix straight from the label maps, pulls the encoded block out of a
simulated unitary, and compares the two without going through the scheme
builders' own arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import ComplexLeak, LabelCollision, OutOfBounds
from .structure import StructureSpec, derive_counts

if TYPE_CHECKING:  # pragma: no cover
    from .schemes import BlockEncoding

#: max-abs tolerances used across the package (single source of truth)
TOLERANCES = {
    "block_exact": 1e-9,
    "alpha_relative": 1e-9,
    "unitarity": 1e-10,
    "hermiticity": 1e-10,
    "imag_leak": 1e-10,
}


def dense_from_structure(spec: StructureSpec) -> np.ndarray:
    """Write every in-range label's value into a dense N x N matrix."""
    n = spec.n
    a = np.zeros((n, n), dtype=np.float64)
    hit = np.zeros((n, n), dtype=bool)
    for d, m, i, j in spec.labels():
        if not (0 <= i < n and 0 <= j < n):
            raise OutOfBounds(f"label ({d},{m}) maps outside the matrix")
        if hit[i, j]:
            raise LabelCollision(f"entry ({i},{j}) written twice")
        hit[i, j] = True
        a[i, j] = spec.values[d]
    return a


def extract_block(enc: "BlockEncoding") -> np.ndarray:
    """Matrix elements <flags=0, i| U |flags=0, j> as a real N x N array.

    Layouts place all flag registers above the block register, so the block
    is the top-left corner of the unitary.
    """
    n = enc.block_dim
    b = np.asarray(enc.unitary[:n, :n])
    leak = float(np.abs(b.imag).max())
    if leak > TOLERANCES["imag_leak"]:
        raise ComplexLeak(f"imaginary part {leak:.3e} above {TOLERANCES['imag_leak']:.0e}")
    return np.ascontiguousarray(b.real)


def block_by_resolution_sum(spec: StructureSpec) -> np.ndarray:
    """The block computed from the explicit label sum instead of simulation.

    Sums ``(A_d / ||A||_max) * (1/sqrt(S_c S_r))`` over the in-range labels
    with delta constraints on the row/column maps; equals the simulated block
    of the base scheme.
    """
    counts = derive_counts(spec)
    norm = max(abs(v) for v in spec.values)
    b = np.zeros((spec.n, spec.n), dtype=np.float64)
    w = 1.0 / np.sqrt(counts.S_c * counts.S_r)
    for d, m, i, j in spec.labels():
        b[i, j] += (spec.values[d] / norm) * w
    return b


def measured_alpha(block: np.ndarray, target: np.ndarray) -> float:
    """Least-squares scale: argmin over alpha of ||alpha*block - target||_F."""
    denom = float(np.sum(block * block))
    if denom == 0.0:
        return float("nan")
    return float(np.sum(block * target) / denom)


@dataclass(frozen=True)
class Report:
    """Outcome of checking one encoding against its target matrix."""

    scheme: str
    n: int
    predicted_alpha: float
    measured_alpha: float
    alpha_relative_error: float
    max_abs_error: float
    block_tolerance: float
    unitarity_defect: float
    hermiticity_defect: float
    flag_qubits: int
    data_loading: float
    passed: bool

    def to_json(self, **extra) -> str:
        payload = {k: _sig12(v) for k, v in {**asdict(self), **extra}.items()}
        return json.dumps(payload, indent=2)


def _sig12(x):
    """Round floats to 12 significant digits for stable machine output."""
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def check_encoding(enc: "BlockEncoding", spec: StructureSpec, block_tolerance: float | None = None) -> Report:
    """Compare an encoding's block against the dense target.

    The block tolerance defaults to 1e-9 for exact schemes and to
    ``(2 eps + eps^2) * alpha`` for the preamplified ones; the measured
    (least-squares) subnormalisation must match the predicted one to the same
    relative precision.
    """
    a = dense_from_structure(spec)
    b = extract_block(enc)
    u = enc.unitary
    g = u.conj().T @ u
    unit = float(np.abs(g - np.eye(g.shape[0])).max())
    herm = float(np.abs(u - u.conj().T).max())

    approximate = enc.scheme_tag in ("preamplified", "hermitian_preamplified")
    if block_tolerance is None:
        if approximate:
            eps = enc.epsilon
            block_tolerance = (2.0 * eps + eps * eps) * enc.alpha
        else:
            block_tolerance = TOLERANCES["block_exact"]
    err = float(np.abs(enc.alpha * b - a).max())
    meas = measured_alpha(b, a)
    rel = abs(meas / enc.alpha - 1.0)
    alpha_tol = (2 * enc.epsilon + enc.epsilon**2) if approximate else TOLERANCES["alpha_relative"]
    passed = (
        err <= block_tolerance
        and rel <= alpha_tol
        and unit <= TOLERANCES["unitarity"]
        and (herm <= TOLERANCES["hermiticity"] or not enc.hermitian)
    )
    return Report(
        scheme=enc.scheme_tag,
        n=spec.n,
        predicted_alpha=float(enc.alpha),
        measured_alpha=meas,
        alpha_relative_error=rel,
        max_abs_error=err,
        block_tolerance=float(block_tolerance),
        unitarity_defect=unit,
        hermiticity_defect=herm,
        flag_qubits=enc.cost.flag_qubits,
        data_loading=float(enc.cost.data_loading),
        passed=passed,
    )
