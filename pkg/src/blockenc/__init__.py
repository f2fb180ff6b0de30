"""Block encodings of structured matrices.

Builds block-encoding unitaries from arithmetic descriptions of sparse,
structured matrices (base, Hermitian, preamplified, and PREP/UNPREP
variants), verifies them by dense simulation at desk scale, estimates
data-loading / subnormalisation costs, and searches the polynomial degree
required for singular value amplification.
"""

from .structure import StructureSpec, PaddedShape, OracleTables, derive_counts, pad_shape, complete_oracles
from .schemes import (
    BlockEncoding,
    AmplificationParams,
    build_base,
    build_hermitian_base,
    build_prep_unprep,
    build_preamplified,
    build_hermitian_preamplified,
    hermitianize,
)
from .verify import dense_from_structure, extract_block, check_encoding
from .estimator import CostRecord, mu_p, amp_factor, table_rows, loading_model
from . import families, sva

__all__ = [
    "StructureSpec",
    "PaddedShape",
    "OracleTables",
    "derive_counts",
    "pad_shape",
    "complete_oracles",
    "BlockEncoding",
    "AmplificationParams",
    "build_base",
    "build_hermitian_base",
    "build_prep_unprep",
    "build_preamplified",
    "build_hermitian_preamplified",
    "hermitianize",
    "dense_from_structure",
    "extract_block",
    "check_encoding",
    "CostRecord",
    "mu_p",
    "amp_factor",
    "table_rows",
    "loading_model",
    "families",
    "sva",
]

__version__ = "0.1.0"
