"""Exception types raised by the library."""


class BlockEncodingError(Exception):
    """Base class for all library errors."""


class LabelCollision(BlockEncodingError):
    """Two in-range (d, m) labels map to the same matrix entry."""


class OutOfBounds(BlockEncodingError):
    """A row/column map left the valid index range [0, N)."""


class PrepIncompatible(BlockEncodingError):
    """The declared state-preparation factorisation is not bijective."""


class NotDivisible(BlockEncodingError):
    """Register splitting for the PREP/UNPREP scheme is impossible."""


class SupportTooLarge(BlockEncodingError):
    """Diffusion support exceeds the register dimension."""


class OutOfUnitRange(BlockEncodingError):
    """A rotation amplitude fell outside [-1, 1]."""


class NotBijective(BlockEncodingError):
    """A table meant to be a permutation is not one."""


class AllZeroValues(BlockEncodingError):
    """State preparation from an all-zero value list."""


class DimMismatch(BlockEncodingError):
    """A circuit block does not match its target registers."""


class NoTransposeOracle(BlockEncodingError):
    """A Hermitian construction was requested without a transposition map."""


class NotSymmetric(BlockEncodingError):
    """Hermitianisation of an encoding whose matrix is not symmetric."""


class EncodingTooLarge(BlockEncodingError):
    """Dense simulation refused: total dimension above the supported limit."""


class InfeasibleParameters(BlockEncodingError):
    """No polynomial satisfying the amplification bounds exists here."""


class SingularValueOutOfRange(BlockEncodingError):
    """A singular value lies outside the validity region of the polynomial."""


class ComplexLeak(BlockEncodingError):
    """The extracted block has an imaginary part above tolerance."""


class BadFamilyParameter(BlockEncodingError):
    """A built-in family constructor received invalid parameters."""
