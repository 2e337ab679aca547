"""Scalar functions on the nonnegative reals and their Lipschitz moduli.

These are the symbols fed to the singular value calculus: functions f on
[0, inf) with f(0) = 0, possibly complex-valued.  Two moduli matter.  The
ordinary Lipschitz modulus

    lip(f)   = sup |f(x) - f(y)| / |x - y|

and the rotation-aware complex modulus

    lip_c(f) = sup |f(x) - c f(y)| / |x - c y|   over x, y >= 0, |c| = 1,

which is the exact operator Lipschitz constant of the induced matrix map.
For real-valued f the two coincide; in general

    lip(f) <= lip_c(f) <= sqrt(2) * lip(f),

and the sqrt(2) factor is approached (never attained) by tight piecewise
linear functions built from a target value w close to 1.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .validation import check_positive

__all__ = [
    "SQRT2",
    "ScalarFunction",
    "Identity",
    "Scale",
    "SoftThreshold",
    "HardThreshold",
    "Clip",
    "Power",
    "PiecewiseLinear",
    "parse_function",
    "LipschitzModuli",
    "lip_modulus",
    "lip_c_modulus",
    "lipschitz_moduli",
    "tight_function",
    "extremal_ratio",
    "maxnorm_ratio",
    "maxnorm_margin",
    "ScanResult",
    "maxnorm_scan",
]

SQRT2 = math.sqrt(2.0)


class ScalarFunction:
    """A function on [0, inf) with f(0) = 0, evaluated vectorized.

    Calling an instance with a scalar returns a complex number; calling
    with an array returns a complex array of the same shape.  Negative
    arguments are rejected.
    """

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0):
            raise ValueError("scalar functions are defined for x >= 0 only")
        out = np.asarray(self._evaluate(np.atleast_1d(arr)), dtype=complex)
        if arr.ndim == 0:
            return complex(out[0])
        return out.reshape(arr.shape)

    def _evaluate(self, x):
        raise NotImplementedError

    def lip(self, domain_cap=None):
        raise NotImplementedError

    @property
    def is_real(self):
        raise NotImplementedError

    def breakpoints(self):
        """Abscissae where the behavior of f changes; always starts at 0."""
        raise NotImplementedError

    def domain_cap(self):
        """Default sampling cap: ten times the largest structural abscissa."""
        return 10.0 * max(1.0, max(self.breakpoints()))

    def to_dsl(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(ScalarFunction):
    """f(x) = x."""

    def _evaluate(self, x):
        return x.astype(complex)

    def lip(self, domain_cap=None):
        return 1.0

    @property
    def is_real(self):
        return True

    def breakpoints(self):
        return (0.0, 1.0)

    def to_dsl(self):
        return "identity"


@dataclass(frozen=True)
class Scale(ScalarFunction):
    """f(x) = alpha * x for a fixed complex alpha."""

    alpha: complex

    def __post_init__(self):
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError("alpha must be finite")
        object.__setattr__(self, "alpha", a)

    def _evaluate(self, x):
        return self.alpha * x

    def lip(self, domain_cap=None):
        return abs(self.alpha)

    @property
    def is_real(self):
        return self.alpha.imag == 0.0

    def breakpoints(self):
        return (0.0, 1.0)

    def to_dsl(self):
        return f"scale:re={self.alpha.real!r},im={self.alpha.imag!r}"


@dataclass(frozen=True)
class SoftThreshold(ScalarFunction):
    """f(x) = max(x - tau, 0), the shrinkage nonlinearity."""

    tau: float

    def __post_init__(self):
        check_positive(self.tau, "tau")
        object.__setattr__(self, "tau", float(self.tau))

    def _evaluate(self, x):
        return np.maximum(x - self.tau, 0.0).astype(complex)

    def lip(self, domain_cap=None):
        if domain_cap is not None and domain_cap <= self.tau:
            return 0.0
        return 1.0

    @property
    def is_real(self):
        return True

    def breakpoints(self):
        return (0.0, self.tau)

    def to_dsl(self):
        return f"soft:tau={self.tau!r}"


@dataclass(frozen=True)
class HardThreshold(ScalarFunction):
    """f(x) = x for x > tau, else 0.  Not Lipschitz: it jumps at tau."""

    tau: float

    def __post_init__(self):
        check_positive(self.tau, "tau")
        object.__setattr__(self, "tau", float(self.tau))

    def _evaluate(self, x):
        return np.where(x > self.tau, x, 0.0).astype(complex)

    def lip(self, domain_cap=None):
        if domain_cap is not None and domain_cap <= self.tau:
            return 0.0
        return math.inf

    @property
    def is_real(self):
        return True

    def breakpoints(self):
        return (0.0, self.tau)

    def to_dsl(self):
        return f"hard:tau={self.tau!r}"


@dataclass(frozen=True)
class Clip(ScalarFunction):
    """f(x) = min(x, limit)."""

    limit: float

    def __post_init__(self):
        check_positive(self.limit, "limit")
        object.__setattr__(self, "limit", float(self.limit))

    def _evaluate(self, x):
        return np.minimum(x, self.limit).astype(complex)

    def lip(self, domain_cap=None):
        return 1.0

    @property
    def is_real(self):
        return True

    def breakpoints(self):
        return (0.0, self.limit)

    def to_dsl(self):
        return f"clip:c={self.limit!r}"


@dataclass(frozen=True)
class Power(ScalarFunction):
    """f(x) = x ** p with 0 < p <= 1.  Not Lipschitz near 0 unless p = 1."""

    exponent: float

    def __post_init__(self):
        p = float(self.exponent)
        if not (0.0 < p <= 1.0) or not math.isfinite(p):
            raise ValueError(f"exponent must lie in (0, 1], got {self.exponent!r}")
        object.__setattr__(self, "exponent", p)

    def _evaluate(self, x):
        return (x ** self.exponent).astype(complex)

    def lip(self, domain_cap=None):
        return 1.0 if self.exponent == 1.0 else math.inf

    @property
    def is_real(self):
        return True

    def breakpoints(self):
        return (0.0, 1.0)

    def to_dsl(self):
        return f"power:p={self.exponent!r}"


@dataclass(frozen=True)
class PiecewiseLinear(ScalarFunction):
    """Piecewise linear interpolation through complex-valued knots.

    Knots are (x, value) pairs with strictly increasing x, the first knot
    pinned at (0, 0); beyond the last knot the function continues as a
    constant.  The Lipschitz modulus is the largest segment speed
    |dv| / dx.
    """

    knots: tuple

    def __post_init__(self):
        raw = tuple(self.knots)
        if len(raw) < 1:
            raise ValueError("at least one knot is required")
        norm = []
        for k, pair in enumerate(raw):
            x, v = pair
            x = float(x)
            v = complex(v)
            if not math.isfinite(x) or not cmath.isfinite(v):
                raise ValueError(f"knot {k} is not finite")
            norm.append((x, v))
        if norm[0] != (0.0, 0j):
            raise ValueError("the first knot must be (0, 0)")
        xs = [x for x, _ in norm]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("knot abscissae must be strictly increasing")
        object.__setattr__(self, "knots", tuple(norm))

    def _arrays(self):
        xs = np.array([x for x, _ in self.knots])
        vs = np.array([v for _, v in self.knots], dtype=complex)
        return xs, vs

    def _evaluate(self, x):
        xs, vs = self._arrays()
        return np.interp(x, xs, vs.real) + 1j * np.interp(x, xs, vs.imag)

    def lip(self, domain_cap=None):
        xs, vs = self._arrays()
        if len(xs) < 2:
            return 0.0
        speeds = np.abs(np.diff(vs)) / np.diff(xs)
        if domain_cap is not None:
            speeds = speeds[xs[:-1] < domain_cap]
        return float(speeds.max()) if speeds.size else 0.0

    @property
    def is_real(self):
        return all(v.imag == 0.0 for _, v in self.knots)

    def breakpoints(self):
        return tuple(x for x, _ in self.knots)

    def to_dsl(self):
        triples = ";".join(
            f"{x!r},{v.real!r},{v.imag!r}" for x, v in self.knots
        )
        return f"pwl:knots={triples}"


# ---------------------------------------------------------------------------
# DSL: name[:key=value,...]
# ---------------------------------------------------------------------------


def _parse_kv(argtext, allowed, family):
    args = {}
    if not argtext.strip():
        return args
    for item in argtext.split(","):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq:
            raise ValueError(f"{family}: expected key=value, got {item!r}")
        if key not in allowed:
            raise ValueError(f"{family}: unknown parameter {key!r}")
        if key in args:
            raise ValueError(f"{family}: duplicate parameter {key!r}")
        try:
            args[key] = float(val)
        except ValueError:
            raise ValueError(f"{family}: parameter {key!r} is not a number: {val!r}") from None
    return args


def parse_function(text):
    """Parse the scalar function DSL ``name[:key=value,...]``.

    Families: ``identity``, ``scale:re=..,im=..``, ``soft:tau=..``,
    ``hard:tau=..``, ``clip:c=..``, ``power:p=..``, and
    ``pwl:knots=x,re,im;x,re,im;...``.

    Raises ValueError with a family-specific message on malformed input.
    """
    s = str(text).strip()
    if not s:
        raise ValueError("empty function specification")
    name, _, argtext = s.partition(":")
    name = name.strip().lower()
    if name == "identity":
        if argtext.strip():
            raise ValueError("identity takes no parameters")
        return Identity()
    if name == "scale":
        kv = _parse_kv(argtext, {"re", "im"}, "scale")
        return Scale(complex(kv.get("re", 0.0), kv.get("im", 0.0)))
    if name == "soft":
        kv = _parse_kv(argtext, {"tau"}, "soft")
        if "tau" not in kv:
            raise ValueError("soft requires tau")
        return SoftThreshold(kv["tau"])
    if name == "hard":
        kv = _parse_kv(argtext, {"tau"}, "hard")
        if "tau" not in kv:
            raise ValueError("hard requires tau")
        return HardThreshold(kv["tau"])
    if name == "clip":
        kv = _parse_kv(argtext, {"c"}, "clip")
        if "c" not in kv:
            raise ValueError("clip requires c")
        return Clip(kv["c"])
    if name == "power":
        kv = _parse_kv(argtext, {"p"}, "power")
        if "p" not in kv:
            raise ValueError("power requires p")
        return Power(kv["p"])
    if name == "pwl":
        key, eq, val = argtext.partition("=")
        if not eq or key.strip() != "knots":
            raise ValueError("pwl requires knots=x,re,im;x,re,im;...")
        knots = []
        for k, triple in enumerate(val.split(";")):
            parts = triple.split(",")
            if len(parts) != 3:
                raise ValueError(f"pwl: knot {k} is not an x,re,im triple: {triple!r}")
            try:
                x, re, im = (float(p) for p in parts)
            except ValueError:
                raise ValueError(f"pwl: knot {k} has a non-numeric field: {triple!r}") from None
            knots.append((x, complex(re, im)))
        return PiecewiseLinear(tuple(knots))
    raise ValueError(f"unknown function family {name!r}")


# ---------------------------------------------------------------------------
# Lipschitz moduli
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LipschitzModuli:
    """The pair (lip, lip_c) for a scalar function, plus how lip_c was found.

    `lip_c_upper` is the universal a-priori cap sqrt(2) * lip.  `method`
    records whether lip_c is an exact analytic value or a sampled
    (certified lower-bound) estimate.
    """

    lip: float
    lip_c: float
    method: str

    def __post_init__(self):
        if self.method not in ("analytic", "sampled"):
            raise ValueError(f"unknown method {self.method!r}")
        if math.isfinite(self.lip) and math.isfinite(self.lip_c):
            slack = 1e-9 * max(1.0, self.lip) + 1e-12
            if self.lip_c < self.lip - slack:
                raise ValueError("lip_c below lip")
            if self.lip_c > SQRT2 * self.lip + slack:
                raise ValueError("lip_c above sqrt(2) * lip")

    @property
    def lip_c_upper(self):
        return SQRT2 * self.lip

    def to_dict(self):
        return {
            "lip": _json_float(self.lip),
            "lip_c": _json_float(self.lip_c),
            "lip_c_upper": _json_float(self.lip_c_upper),
            "method": self.method,
        }


def _json_float(x):
    return "inf" if math.isinf(x) else float(x)


def lip_modulus(f, domain_cap=None):
    """Lipschitz modulus of `f` on [0, domain_cap] ([0, inf) when None).

    Exact for every family; math.inf for hard thresholds and strict
    powers, whose difference quotients are unbounded.
    """
    if domain_cap is not None:
        check_positive(domain_cap, "domain_cap")
    return float(f.lip(domain_cap))


def lip_c_modulus(f, domain_cap=None, grid=64):
    """Sampled lower bound for the complex rotation modulus of `f`.

        sup |f(x) - c f(y)| / |x - c y|   over x, y >= 0, |c| = 1

    Sampling runs over breakpoints, segment midpoints and a uniform grid
    up to the cap, with rotation angles that cluster near c = 1 (where
    the supremum hides for near-tight functions), then polishes the angle
    by golden-section search for the most promising pairs.  The result is
    a certified lower bound; for Lipschitz f it always lies in
    [lip, sqrt(2) * lip] up to roundoff.

    Raises ValueError when `f` is not Lipschitz.
    """
    best, _, _, _ = _lip_c_search(f, domain_cap, grid)
    return best


def lipschitz_moduli(f, domain_cap=None, grid=64):
    """Both moduli for `f` as a LipschitzModuli record.

    Real-valued functions and pure scalings have lip_c = lip exactly, so
    those are reported analytically; other complex-valued functions fall
    back to the sampled lower bound.
    """
    lip = lip_modulus(f, domain_cap)
    if not math.isfinite(lip):
        return LipschitzModuli(lip=math.inf, lip_c=math.inf, method="analytic")
    if f.is_real or isinstance(f, Scale):
        return LipschitzModuli(lip=lip, lip_c=lip, method="analytic")
    sampled = lip_c_modulus(f, domain_cap, grid)
    return LipschitzModuli(lip=lip, lip_c=max(sampled, lip), method="sampled")


def _abscissae(f, cap, grid):
    bps = np.asarray(f.breakpoints(), dtype=float)
    bps = bps[bps <= cap]
    mids = 0.5 * (bps[:-1] + bps[1:]) if bps.size > 1 else np.empty(0)
    lin = np.linspace(0.0, cap, max(int(grid), 8))
    xs = np.unique(np.concatenate([bps, mids, lin]))
    return xs[(xs >= 0.0) & (xs <= cap)]


def _angles(grid):
    base = np.linspace(-math.pi, math.pi, 2 * max(int(grid), 32) + 1)
    small = np.logspace(-8, 0, 49)
    return np.unique(np.concatenate([base, small, -small, [0.0]]))


def _pair_ratio(f, x, y, theta):
    c = cmath.exp(1j * theta)
    den = abs(x - c * y)
    if den <= 1e-12 * max(1.0, x, y):
        return -math.inf
    return abs(f(x) - c * f(y)) / den


def _golden_max(fun, lo, hi, iterations=80):
    """Golden-section maximization on [lo, hi]; returns (value, argmax)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    best_val, best_arg = max((fc, c), (fd, d))
    for _ in range(iterations):
        if b - a < 1e-14:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
        top = max((fc, c), (fd, d))
        if top[0] > best_val:
            best_val, best_arg = top
    return best_val, best_arg


def _lip_c_search(f, domain_cap=None, grid=64, polish_top=8):
    """Grid search + angle polish; returns (value, x, y, theta)."""
    lip = lip_modulus(f, domain_cap)
    if not math.isfinite(lip):
        raise ValueError("complex rotation modulus requires a Lipschitz function")
    cap = float(domain_cap) if domain_cap is not None else f.domain_cap()
    xs = _abscissae(f, cap, grid)
    angles = _angles(grid)
    cs = np.exp(1j * angles)
    fx = np.asarray(f(xs), dtype=complex)
    floor = 1e-12 * np.maximum(1.0, xs)

    best = (-math.inf, 0.0, 0.0, 0.0)
    per_pair = []
    for i, x in enumerate(xs):
        num = np.abs(fx[i] - np.outer(fx, cs))
        den = np.abs(x - np.outer(xs, cs))
        ok = den > np.maximum(floor[i], floor)[:, None]
        ratio = np.where(ok, num / np.where(ok, den, 1.0), -math.inf)
        j, k = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        val = float(ratio[j, k])
        per_pair.append((val, i, int(j), int(k)))
        if val > best[0]:
            best = (val, float(x), float(xs[j]), float(angles[k]))

    per_pair.sort(reverse=True)
    for val, i, j, k in per_pair[:polish_top]:
        if not math.isfinite(val):
            break
        lo = angles[k - 1] if k > 0 else angles[k] - 1e-2
        hi = angles[k + 1] if k + 1 < len(angles) else angles[k] + 1e-2
        x, y = float(xs[i]), float(xs[j])
        refined, theta = _golden_max(lambda t: _pair_ratio(f, x, y, t), lo, hi)
        if refined > best[0]:
            best = (refined, x, y, float(theta))
    return best


# ---------------------------------------------------------------------------
# Tight functions and the sqrt(2) ratio
# ---------------------------------------------------------------------------


def tight_function(w):
    """Unit-speed piecewise linear function with knots (0,0), (1,1), (1+|w-1|, w).

    Both segments have speed exactly 1, so lip = 1; for w near (but not
    equal to) 1 off the real axis, the complex rotation modulus of the
    result approaches sqrt(2).  Requires w != 1.
    """
    w = complex(w)
    if not cmath.isfinite(w):
        raise ValueError("w must be finite")
    if w == 1:
        raise ValueError("w = 1 collapses the second segment")
    return PiecewiseLinear(((0.0, 0j), (1.0, 1.0 + 0j), (1.0 + abs(w - 1.0), w)))


def maxnorm_ratio(w, c):
    """The ratio |w - c| / |1 + |w - 1| - c| for unimodular c.

    Its supremum over all finite w and |c| = 1 equals sqrt(2), approached
    only in the degenerate limit w -> 1, c -> 1.  Raises ValueError if c
    is not unimodular or the denominator vanishes.
    """
    w = complex(w)
    c = complex(c)
    if abs(abs(c) - 1.0) > 1e-12:
        raise ValueError(f"c must be unimodular, got |c| = {abs(c)!r}")
    den = abs(1.0 + abs(w - 1.0) - c)
    if den < 1e-15:
        raise ValueError("degenerate configuration: denominator vanishes")
    return abs(w - c) / den


def extremal_ratio(t):
    """The extremal curve ratio |1 - e^{it} - it| / |1 + |t| - e^{it}|, t != 0.

    This is maxnorm_ratio at w = 1 - it, c = e^{it}; it increases to
    sqrt(2) as t -> 0 (the gap is ~ |t|/(2 sqrt(2))) and is symmetric in
    the sign of t.
    """
    t = float(t)
    if t == 0.0:
        raise ValueError("t must be nonzero")
    return maxnorm_ratio(1.0 - 1j * t, cmath.exp(1j * t))


def maxnorm_margin(w):
    """Closed-form nonnegativity margin for the sqrt(2) claim, vectorized in w.

        |w|^2 + 5 - 4 Re w + 4 |w-1| - 2 |2 (1 + |w-1|) - w|

    equals the minimum over unimodular c of 2 |1+|w-1|-c|^2 - |w-c|^2 and
    is nonnegative for every complex w, vanishing only at w = 1.
    """
    w = np.asarray(w, dtype=complex)
    a = np.abs(w - 1.0)
    return (
        np.abs(w) ** 2 + 5.0 - 4.0 * w.real + 4.0 * a
        - 2.0 * np.abs(2.0 * (1.0 + a) - w)
    )


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a maxnorm_ratio scan over (w, c) samples."""

    max_ratio: float
    argmax_w: complex
    argmax_c: complex
    min_margin: float
    n_samples: int


_DEN_FLOOR = 1e-6  # keeps float cancellation near (w, c) = (1, 1) out of the scan


def maxnorm_scan(
    re_range=(-3.0, 3.0),
    im_range=(-3.0, 3.0),
    n_re=100,
    n_im=100,
    n_angles=100,
    refine=True,
):
    """Scan maxnorm_ratio over a w-rectangle times the unit circle.

    Evaluates the ratio at n_re * n_im * n_angles grid samples, checks the
    closed-form margin at every w sample, and optionally polishes the best
    grid point with a coordinate pattern search.  Configurations whose
    denominator falls below 1e-6 are skipped as degenerate: there the true
    ratio is provably below sqrt(2) by far more than the roundoff such a
    small denominator could introduce, so skipping cannot hide a violation.
    """
    res = np.linspace(float(re_range[0]), float(re_range[1]), int(n_re))
    ims = np.linspace(float(im_range[0]), float(im_range[1]), int(n_im))
    w = res[:, None] + 1j * ims[None, :]
    a = np.abs(w - 1.0)
    min_margin = float(np.min(maxnorm_margin(w)))

    best_val = -math.inf
    best_w = 1.0 + 0j
    best_theta = 0.0
    thetas = np.linspace(-math.pi, math.pi, int(n_angles), endpoint=False)
    for theta in thetas:
        c = cmath.exp(1j * theta)
        den = np.abs(1.0 + a - c)
        ok = den >= _DEN_FLOOR
        ratio = np.where(ok, np.abs(w - c) / np.where(ok, den, 1.0), -math.inf)
        idx = int(np.argmax(ratio))
        val = float(ratio.flat[idx])
        if val > best_val:
            best_val = val
            best_w = complex(w.flat[idx])
            best_theta = float(theta)

    if refine:
        best_val, best_w, best_theta = _pattern_polish(best_val, best_w, best_theta)

    return ScanResult(
        max_ratio=best_val,
        argmax_w=best_w,
        argmax_c=cmath.exp(1j * best_theta),
        min_margin=min_margin,
        n_samples=int(n_re) * int(n_im) * int(n_angles),
    )


def _scan_point(re, im, theta):
    w = complex(re, im)
    den = abs(1.0 + abs(w - 1.0) - cmath.exp(1j * theta))
    if den < _DEN_FLOOR:
        return -math.inf
    return abs(w - cmath.exp(1j * theta)) / den


def _pattern_polish(val, w, theta, step=0.1, iterations=400):
    point = [w.real, w.imag, theta]
    for _ in range(iterations):
        improved = False
        for k in range(3):
            for sign in (1.0, -1.0):
                cand = list(point)
                cand[k] += sign * step
                v = _scan_point(*cand)
                if v > val:
                    val, point, improved = v, cand, True
        if not improved:
            step *= 0.5
            if step < 1e-14:
                break
    return val, complex(point[0], point[1]), point[2]
