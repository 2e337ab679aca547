"""Randomized verification of the sharp Lipschitz bounds.

The claim under test: the matrix map induced by a scalar function f
(via the singular value calculus) has operator Lipschitz constant, in
Frobenius norm, exactly the complex rotation modulus of f -- at most
sqrt(2) * lip(f) in general, exactly lip(f) for real-valued f, and
independent of dimension.  `verify_bound` hammers the ratio

    ||f_s(a) - f_s(b)||_F / ||a - b||_F

with randomized matrix pairs and reports the empirical maximum against
the applicable bound; `scalar_tightness` reproduces the 1x1 extremal
construction whose ratio approaches sqrt(2).
"""

import cmath
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .functions import (
    SQRT2,
    Scale,
    ScalarFunction,
    _lip_c_search,
    lip_modulus,
    parse_function,
    tight_function,
)
from .linalg import frobenius_norm, random_unitary
from .svfc import apply_svfc
from .validation import as_complex_matrix, check_positive, require_same_shape

__all__ = [
    "TrialConfig",
    "VerificationReport",
    "operator_ratio",
    "verify_bound",
    "scalar_tightness",
    "dimension_sweep",
    "thread_count",
]


@dataclass(frozen=True)
class TrialConfig:
    """Configuration for a randomized bound verification run."""

    function: ScalarFunction
    dimension: int = 8
    trials: int = 1000
    seed: int = 0
    matrix_scale: float = 1.0
    perturbation_scale: float = 1e-3

    def __post_init__(self):
        f = self.function
        if isinstance(f, str):
            f = parse_function(f)
        if not isinstance(f, ScalarFunction):
            raise ValueError("function must be a ScalarFunction or DSL string")
        object.__setattr__(self, "function", f)
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "seed", int(self.seed))
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        check_positive(self.matrix_scale, "matrix_scale")
        check_positive(self.perturbation_scale, "perturbation_scale")

    def to_dict(self):
        return {
            "function": self.function.to_dsl(),
            "dimension": self.dimension,
            "trials": self.trials,
            "seed": self.seed,
            "matrix_scale": self.matrix_scale,
            "perturbation_scale": self.perturbation_scale,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Result of a verification run.

    `passed` is None when no finite bound applies (non-Lipschitz f); the
    JSON form then carries ``"pass": null`` next to ``"bound": "inf"``.
    """

    config: TrialConfig
    ratios: np.ndarray
    max_ratio: float
    bound: float
    bound_kind: str
    passed: object
    runtime_sec: float

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "max_ratio": self.max_ratio,
            "bound": "inf" if math.isinf(self.bound) else self.bound,
            "bound_kind": self.bound_kind,
            "pass": self.passed,
            "trials": int(self.ratios.size),
            "seed": self.config.seed,
            "runtime_sec": self.runtime_sec,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    def trials_csv(self):
        lines = ["trial_index,ratio"]
        lines.extend(f"{i},{float(r)!r}" for i, r in enumerate(self.ratios))
        return "\n".join(lines) + "\n"


def operator_ratio(f, a, b, tol_degenerate=1e-12):
    """The Frobenius ratio ``||f_s(a) - f_s(b)|| / ||a - b||``.

    Raises ValueError when ``||a - b||`` is negligible relative to the
    inputs, where the ratio degenerates to 0/0.
    """
    ma = as_complex_matrix(a, "first matrix")
    mb = as_complex_matrix(b, "second matrix")
    require_same_shape(ma, mb)
    den = frobenius_norm(ma - mb)
    if den <= tol_degenerate * max(1.0, frobenius_norm(ma), frobenius_norm(mb)):
        raise ValueError("matrices coincide; the ratio is degenerate")
    num = frobenius_norm(apply_svfc(f, ma) - apply_svfc(f, mb))
    return num / den


def thread_count():
    """Worker threads for trial evaluation, from SVCALC_THREADS (default 1)."""
    raw = os.environ.get("SVCALC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"SVCALC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"SVCALC_THREADS must be a positive integer, got {raw!r}")
    return n


def _select_bound(f):
    """Applicable sharp bound and its label for a scalar function."""
    lip = lip_modulus(f)
    if not math.isfinite(lip):
        return ("lip_real" if f.is_real else "sqrt2_lip_complex"), math.inf
    if f.is_real:
        return "lip_real", lip
    if isinstance(f, Scale):
        return "lip_c", abs(f.alpha)  # exact: rotations commute with scaling
    return "sqrt2_lip_complex", SQRT2 * lip


def _gaussian(rng, d, scale):
    return scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / SQRT2


def _trial_pairs(cfg, rng):
    """Deterministic pair stream cycling four families: independent Gaussian,
    shared singular vectors, two-sided rotation, small perturbation."""
    d = cfg.dimension
    sc = cfg.matrix_scale
    pairs = []
    for k in range(cfg.trials):
        kind = k % 4
        if kind == 0:
            pairs.append((_gaussian(rng, d, sc), _gaussian(rng, d, sc)))
        elif kind == 1:
            u = random_unitary(d, rng)
            v = random_unitary(d, rng)
            s1 = np.abs(rng.standard_normal(d)) * sc
            s2 = np.abs(rng.standard_normal(d)) * sc
            pairs.append(((u * s1) @ v.conj().T, (u * s2) @ v.conj().T))
        elif kind == 2:
            a = _gaussian(rng, d, sc)
            q = random_unitary(d, rng)
            p = random_unitary(d, rng)
            pairs.append((a, q @ a @ p.conj().T))
        else:
            a = _gaussian(rng, d, sc)
            pairs.append((a, a + cfg.perturbation_scale * _gaussian(rng, d, sc)))
    return pairs


def _structured_pairs(cfg):
    """Extra deterministic 1x1 pairs at the sampled rotation-modulus argmax.

    Only at dimension 1 and for Lipschitz f: these make the scalar
    construction that approaches the bound part of the trial set.
    """
    if cfg.dimension != 1 or not math.isfinite(lip_modulus(cfg.function)):
        return []
    _, x, y, theta = _lip_c_search(cfg.function)
    a = np.array([[x]], dtype=complex)
    b = np.array([[cmath.exp(1j * theta) * y]], dtype=complex)
    return [(a, b)]


def verify_bound(config, tol_bound=1e-9):
    """Run randomized operator-ratio trials against the applicable bound.

    The trial set is a pure function of (seed, trials, dimension, scales);
    SVCALC_THREADS only parallelizes evaluation.  Degenerate pairs (equal
    matrices) are skipped.  Returns a VerificationReport whose `passed`
    field is ``max_ratio <= bound * (1 + tol_bound)``, or None when f has
    no finite Lipschitz bound.
    """
    t0 = time.perf_counter()
    f = config.function
    bound_kind, bound = _select_bound(f)
    rng = np.random.default_rng(config.seed)
    pairs = _trial_pairs(config, rng)
    pairs.extend(_structured_pairs(config))

    def one(pair):
        try:
            return operator_ratio(f, pair[0], pair[1])
        except ValueError:
            return None

    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(one, pairs))
    else:
        raw = [one(p) for p in pairs]
    ratios = np.array([r for r in raw if r is not None], dtype=float)
    if ratios.size == 0:
        raise RuntimeError("every trial pair was degenerate")

    max_ratio = float(ratios.max())
    passed = None if math.isinf(bound) else bool(max_ratio <= bound * (1.0 + tol_bound))
    return VerificationReport(
        config=config,
        ratios=ratios,
        max_ratio=max_ratio,
        bound=bound,
        bound_kind=bound_kind,
        passed=passed,
        runtime_sec=time.perf_counter() - t0,
    )


def scalar_tightness(t):
    """Operator-level extremal ratio at parameter t != 0.

    Runs the 1x1 pair a = [1 + |t|], b = [e^{it}] through the tight
    function for w = 1 - it; equals the scalar extremal_ratio(t) up to
    roundoff and approaches sqrt(2) as t -> 0.
    """
    t = float(t)
    if t == 0.0:
        raise ValueError("t must be nonzero")
    f = tight_function(1.0 - 1j * t)
    a = np.array([[1.0 + abs(t)]], dtype=complex)
    b = np.array([[cmath.exp(1j * t)]], dtype=complex)
    return operator_ratio(f, a, b)


def dimension_sweep(f, dims=(1, 2, 4, 8), trials=500, seed=0, matrix_scale=1.0):
    """verify_bound across dimensions.  The bound itself never changes with d."""
    reports = []
    for i, d in enumerate(dims):
        cfg = TrialConfig(
            function=f,
            dimension=int(d),
            trials=trials,
            seed=seed + 7919 * i,
            matrix_scale=matrix_scale,
        )
        reports.append(verify_bound(cfg))
    return reports
