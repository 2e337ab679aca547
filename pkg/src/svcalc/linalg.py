"""Dense complex matrix primitives.

Thin singular value decompositions, Frobenius norms, Hadamard products,
Haar-distributed random unitaries, and the JSON interchange format used
by the command line tools.  Everything is double-precision complex and
backed by numpy's LAPACK bindings.
"""

from dataclasses import dataclass
import json

import numpy as np

from .validation import as_complex_matrix, check_positive, require_same_shape

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "SingularDecomposition",
    "svd",
    "frobenius_norm",
    "hadamard",
    "random_unitary",
    "orthonormality_defect",
    "matrix_to_dict",
    "matrix_from_dict",
    "matrix_to_json",
    "matrix_from_json",
    "save_matrix",
    "load_matrix",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used across decompositions and checks.

    tol_orth      orthonormality defect allowed in computed singular vectors
    tol_recon     relative reconstruction error allowed for factorizations
    tol_rank      singular values below tol_rank * sigma_max count as zero
    tol_identity  relative tolerance for identity-style equality checks
    """

    tol_orth: float = 1e-10
    tol_recon: float = 1e-10
    tol_rank: float = 1e-12
    tol_identity: float = 1e-8

    def __post_init__(self):
        for field_name in ("tol_orth", "tol_recon", "tol_rank", "tol_identity"):
            check_positive(getattr(self, field_name), field_name)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SingularDecomposition:
    """Thin SVD ``a = u @ diag(sigma) @ v.conj().T``.

    `u` is m-by-r and `v` is n-by-r with orthonormal columns, r = min(m, n),
    and `sigma` holds the singular values in descending order.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self):
        return (self.u * self.sigma) @ self.v.conj().T

    @property
    def shape(self):
        return (self.u.shape[0], self.v.shape[0])


def svd(a):
    """Thin singular value decomposition of a complex matrix.

    Parameters
    ----------
    a : array_like
        Matrix with finite entries; rectangular shapes are fine.

    Returns
    -------
    SingularDecomposition

    Raises
    ------
    ValueError
        If `a` is not a finite 2-D array.
    numpy.linalg.LinAlgError
        If the underlying SVD iteration fails to converge.
    """
    m = as_complex_matrix(a)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return SingularDecomposition(u=u, sigma=s, v=vh.conj().T)


def frobenius_norm(a):
    """Frobenius norm ``sqrt(sum |a_ij|^2)``."""
    return float(np.linalg.norm(as_complex_matrix(a)))


def hadamard(a, b):
    """Entrywise product of two equal-shape matrices."""
    ma = as_complex_matrix(a, "first factor")
    mb = as_complex_matrix(b, "second factor")
    require_same_shape(ma, mb, ("first factor", "second factor"))
    return ma * mb


def random_unitary(d, seed):
    """Haar-distributed d-by-d unitary matrix for a given integer seed.

    QR factorization of a complex Gaussian matrix, with the R diagonal
    rephased so the distribution is exactly Haar rather than QR-biased.
    """
    d = int(d)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases


def orthonormality_defect(m):
    """``||m* m - I||_F`` -- zero when the columns of `m` are orthonormal."""
    m = as_complex_matrix(m)
    gram = m.conj().T @ m
    return float(np.linalg.norm(gram - np.eye(m.shape[1])))


# ---------------------------------------------------------------------------
# JSON interchange format: {"rows": r, "cols": c, "entries": [[re, im], ...]}
# with entries in row-major order.  Floats survive a round trip bit-exactly
# because json serializes them via repr.
# ---------------------------------------------------------------------------


def matrix_to_dict(a):
    m = as_complex_matrix(a)
    flat = m.reshape(-1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_dict(d):
    if not isinstance(d, dict):
        raise ValueError("matrix JSON must be an object")
    missing = {"rows", "cols", "entries"} - set(d)
    if missing:
        raise ValueError(f"matrix JSON missing keys: {sorted(missing)}")
    rows, cols = d["rows"], d["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive integers")
    entries = d["entries"]
    if len(entries) != rows * cols:
        raise ValueError(
            f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
        )
    values = np.empty(rows * cols, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"entry {k} is not an [re, im] pair")
        values[k] = complex(float(pair[0]), float(pair[1]))
    return as_complex_matrix(values.reshape(rows, cols))


def matrix_to_json(a):
    return json.dumps(matrix_to_dict(a))


def matrix_from_json(text):
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid matrix JSON: {exc}") from exc
    return matrix_from_dict(payload)


def save_matrix(a, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_json(a))
        fh.write("\n")


def load_matrix(path):
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(fh.read())
