"""Complex doubly substochastic matrices and their extreme-point structure.

A square complex matrix is doubly substochastic (cdss) when every row
and column has l1 norm at most 1.  The extreme points of this convex
body are the permutation-phase matrices: a single unimodular entry per
row and column.  Alignment matrices ``conj(Vb* Va) .* (Ub* Ua)`` built
from the singular vectors of two matrices are always cdss, which is what
ties this module to the singular value calculus: expanding such an
alignment into permutation-phase terms rewrites a Frobenius distance
``||a - b||_F^2`` as a convex combination of scalar distances between
rotated singular values (`distance_identity_check`).

The decomposition is constructive.  Phases are stripped off, the modulus
matrix is embedded in a doubly stochastic matrix of twice the size using
diagonal slack blocks, and permutations are peeled greedily: a perfect
matching on the support, subtract the smallest matched entry, repeat.
Peeled permutations restricted back to the original block may be partial;
they are completed and emitted as two half-weight terms whose completion
phases are +1 and -1, so the reconstruction gets exact zeros there.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import frobenius_norm, svd
from .validation import as_complex_matrix, require_same_shape, require_square

__all__ = [
    "NotCdssError",
    "PermutationPhase",
    "pp_to_matrix",
    "CdssDecomposition",
    "is_cdss",
    "decompose",
    "term_bound",
    "distance_identity_check",
]


class NotCdssError(ValueError):
    """Raised when a matrix fails the doubly substochastic row/column test."""


@dataclass(frozen=True)
class PermutationPhase:
    """A permutation-phase matrix: entry ``phases[i]`` at ``(i, perm[i])``.

    `perm` is a 0-based permutation tuple and `phases` a tuple of
    unimodular complex numbers, one per row.
    """

    perm: tuple
    phases: tuple

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        d = len(perm)
        if d < 1:
            raise ValueError("permutation must be nonempty")
        if sorted(perm) != list(range(d)):
            raise ValueError(f"perm is not a permutation of 0..{d - 1}")
        phases = tuple(complex(g) for g in self.phases)
        if len(phases) != d:
            raise ValueError("phases must match the permutation length")
        for k, g in enumerate(phases):
            if abs(abs(g) - 1.0) > 1e-12:
                raise ValueError(f"phase {k} is not unimodular: |{g!r}| != 1")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "phases", phases)

    @property
    def dimension(self):
        return len(self.perm)

    def to_matrix(self):
        d = self.dimension
        m = np.zeros((d, d), dtype=np.complex128)
        m[np.arange(d), np.asarray(self.perm)] = np.asarray(self.phases)
        return m


def pp_to_matrix(pp):
    """Dense matrix of a PermutationPhase term."""
    return pp.to_matrix()


@dataclass(frozen=True)
class CdssDecomposition:
    """Convex combination ``sum_n weight_n * M_n`` of permutation-phase terms."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(w), pp) for w, pp in self.terms)
        if not terms:
            raise ValueError("decomposition needs at least one term")
        d = terms[0][1].dimension
        for w, pp in terms:
            if w < 0.0:
                raise ValueError(f"negative weight {w!r}")
            if pp.dimension != d:
                raise ValueError("mixed dimensions in decomposition")
        object.__setattr__(self, "terms", terms)

    @property
    def n_terms(self):
        return len(self.terms)

    @property
    def dimension(self):
        return self.terms[0][1].dimension

    @property
    def weights(self):
        return np.array([w for w, _ in self.terms])

    def reconstruct(self):
        out = np.zeros((self.dimension, self.dimension), dtype=np.complex128)
        for w, pp in self.terms:
            out[np.arange(self.dimension), np.asarray(pp.perm)] += w * np.asarray(pp.phases)
        return out

    def to_dict(self):
        return {
            "terms": [
                {
                    "weight": float(w),
                    "perm": [int(p) + 1 for p in pp.perm],
                    "phases": [[float(g.real), float(g.imag)] for g in pp.phases],
                }
                for w, pp in self.terms
            ]
        }

    @classmethod
    def from_dict(cls, payload):
        if not isinstance(payload, dict) or "terms" not in payload:
            raise ValueError("decomposition JSON must be an object with a 'terms' key")
        terms = []
        for k, item in enumerate(payload["terms"]):
            try:
                weight = float(item["weight"])
                perm = tuple(int(p) - 1 for p in item["perm"])
                phases = tuple(complex(re, im) for re, im in item["phases"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed term {k}: {exc}") from exc
            terms.append((weight, PermutationPhase(perm, phases)))
        return cls(tuple(terms))


def is_cdss(m, tol=1e-12):
    """True when every row and column l1 sum is at most ``1 + tol``."""
    mat = require_square(as_complex_matrix(m))
    mods = np.abs(mat)
    return bool(
        mods.sum(axis=1).max() <= 1.0 + tol and mods.sum(axis=0).max() <= 1.0 + tol
    )


def term_bound(d):
    """Guaranteed ceiling on the number of terms produced by `decompose`.

    The peel runs on the doubly stochastic completion of size D = 2 d,
    which requires at most D^2 - 2 D + 2 permutations; each peel emits at
    most two terms and the final weight normalization at most two more.
    """
    dd = 2 * int(d)
    return 2 * (dd * dd - 2 * dd + 2) + 2


def _perfect_matching(support, n):
    """Kuhn's augmenting-path perfect matching; returns row -> column or None."""
    match_col = [-1] * n

    def try_row(r, seen):
        for c in support[r]:
            if not seen[c]:
                seen[c] = True
                if match_col[c] == -1 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if not try_row(r, [False] * n):
            return None
    out = [-1] * n
    for c, r in enumerate(match_col):
        out[r] = c
    return out


def decompose(m, tol=1e-12):
    """Expand a cdss matrix into a convex combination of permutation-phase terms.

    Parameters
    ----------
    m : array_like
        Square complex matrix passing ``is_cdss(m, tol)``.
    tol : float
        Slack allowed on the row/column l1 sums.

    Returns
    -------
    CdssDecomposition
        Weights are nonnegative, sum to 1, the term count stays below
        ``term_bound(d)``, and the combination reproduces `m` to around
        1e-12 per entry.

    Raises
    ------
    NotCdssError
        If a row or column l1 sum exceeds ``1 + tol``.
    """
    mat = require_square(as_complex_matrix(m))
    if not is_cdss(mat, tol):
        raise NotCdssError(
            "row or column l1 sums exceed 1; the matrix is not doubly substochastic"
        )
    d = mat.shape[0]
    mods = np.abs(mat)
    dd = 2 * d

    # Doubly stochastic completion: diagonal slack blocks soak up the deficits.
    big = np.zeros((dd, dd))
    big[:d, :d] = mods
    big[:d, d:] = np.diag(np.clip(1.0 - mods.sum(axis=1), 0.0, None))
    big[d:, :d] = np.diag(np.clip(1.0 - mods.sum(axis=0), 0.0, None))
    big[d:, d:] = mods.T

    rows = np.arange(dd)
    identity = tuple(range(d))
    terms = []
    while True:
        if big.sum() <= dd * 1e-12:
            break
        # support threshold well below the extractable mass, but above dust
        delta = min(1e-13, float(big.max()) * 1e-3)
        support = [np.flatnonzero(big[r] > delta).tolist() for r in range(dd)]
        matched = _perfect_matching(support, dd)
        if matched is None:
            raise RuntimeError("residual support lost its perfect matching")
        matched = np.asarray(matched)
        w = float(big[rows, matched].min())
        big[rows, matched] -= w
        if w < 1e-15:
            continue
        sub = {i: int(matched[i]) for i in range(d) if matched[i] < d}
        if len(sub) == d:
            perm = tuple(sub[i] for i in range(d))
            phases = tuple(_phase(mat[i, perm[i]]) for i in range(d))
            terms.append((w, PermutationPhase(perm, phases)))
        else:
            # complete the partial permutation; the completion entries carry
            # opposite phases across two half-weight terms and cancel exactly
            free_rows = [i for i in range(d) if i not in sub]
            taken = set(sub.values())
            free_cols = [j for j in range(d) if j not in taken]
            perm = [0] * d
            for i, j in sub.items():
                perm[i] = j
            for i, j in zip(free_rows, free_cols):
                perm[i] = j
            plus = [0j] * d
            minus = [0j] * d
            for i in range(d):
                if i in sub:
                    plus[i] = minus[i] = _phase(mat[i, perm[i]])
                else:
                    plus[i] = 1.0 + 0j
                    minus[i] = -1.0 + 0j
            terms.append((w / 2.0, PermutationPhase(tuple(perm), tuple(plus))))
            terms.append((w / 2.0, PermutationPhase(tuple(perm), tuple(minus))))

    total = sum(w for w, _ in terms)
    if total <= 0.0:
        raise RuntimeError("decomposition extracted no weight")
    leftover = 1.0 - total
    if leftover > 1e-15:
        # pad with a canceling pair so the weights are a genuine convex combination
        ones = tuple([1.0 + 0j] * d)
        flipped = tuple([-1.0 + 0j] * d)
        terms.append((leftover / 2.0, PermutationPhase(identity, ones)))
        terms.append((leftover / 2.0, PermutationPhase(identity, flipped)))
    else:
        terms = [(w / total, pp) for w, pp in terms]
    return CdssDecomposition(tuple(terms))


def _phase(z):
    mag = abs(z)
    if mag == 0.0:
        return 1.0 + 0j
    return z / mag


def distance_identity_check(a, b, cdss_tol=1e-10):
    """Evaluate both sides of the Frobenius distance identity.

    With thin SVDs ``a = Ua Sa Va*`` and ``b = Ub Sb Vb*``, the alignment
    matrix ``W = conj(Vb* Va) .* (Ub* Ua)`` is cdss; expanding it as
    ``sum_n c_n M_{perm_n, gamma_n}`` yields

        ||a - b||_F^2 = sum_n c_n sum_i |s_i(b) - gamma_{n,i} s_{perm_n(i)}(a)|^2.

    Returns the pair (lhs, rhs) so callers can compare at their own
    tolerance.  Square matrices only.
    """
    ma = as_complex_matrix(a, "first matrix")
    mb = as_complex_matrix(b, "second matrix")
    require_same_shape(ma, mb)
    require_square(ma)
    da = svd(ma)
    db = svd(mb)
    w = np.conj(db.v.conj().T @ da.v) * (db.u.conj().T @ da.u)
    dec = decompose(w, tol=cdss_tol)
    lhs = frobenius_norm(ma - mb) ** 2
    rhs = 0.0
    for weight, pp in dec.terms:
        aligned = np.asarray(pp.phases) * da.sigma[np.asarray(pp.perm)]
        rhs += weight * float(np.sum(np.abs(db.sigma - aligned) ** 2))
    return lhs, rhs
