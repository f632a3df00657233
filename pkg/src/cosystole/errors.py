"""Exception types shared across the package.

The CLI maps these onto exit statuses: format/input problems exit with 2,
capacity problems with 3.
"""


class CosystoleError(Exception):
    """Base class for all package errors."""


class InputError(CosystoleError, ValueError):
    """Malformed or inconsistent user input (bad file, bad arguments)."""


class FormatError(InputError):
    """A text file does not follow its documented format."""


class PurityError(InputError):
    """A simplicial complex is not pure; carries a witness simplex."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MorphismError(InputError):
    """An atom map is not a measure-preserving Boolean morphism."""


class LabelingError(InputError):
    """An edge labeling violates flatness; carries a witness triangle."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class StructureError(InputError):
    """A permutation action does not have the required exact structure."""


class CapacityError(CosystoleError):
    """A computation exceeds the configured budget."""
