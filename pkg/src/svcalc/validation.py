"""Input validation helpers shared across the package."""

import numpy as np

__all__ = [
    "as_complex_matrix",
    "as_complex_vector",
    "require_square",
    "require_same_shape",
    "check_positive",
]


def as_complex_matrix(a, name="matrix"):
    """Coerce `a` to a 2-D complex128 array with finite entries.

    Raises ValueError for anything that is not a finite matrix with at
    least one row and one column.
    """
    m = np.asarray(a)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {m.ndim}-D input")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    m = m.astype(np.complex128, copy=False)
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def as_complex_vector(h, name="vector"):
    """Coerce `h` to a 1-D complex128 array with finite entries."""
    v = np.asarray(h)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError(f"{name} must be a nonempty 1-D array")
    v = v.astype(np.complex128, copy=False)
    if not np.isfinite(v).all():
        raise ValueError(f"{name} contains non-finite entries")
    return v


def require_square(m, name="matrix"):
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def require_same_shape(a, b, names=("first matrix", "second matrix")):
    if a.shape != b.shape:
        raise ValueError(
            f"{names[0]} and {names[1]} must share a shape, got {a.shape} vs {b.shape}"
        )


def check_positive(value, name):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
