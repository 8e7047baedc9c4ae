"""Chimney sequences {a_n}, {b_n} and their exponent quantities.

A chimney domain is determined by two interlacing sequences

    0 < ... < a_{n+1} < b_{n+1} < a_n < b_n < ... < b_0 = 1,

where chimney n sits over the interval (a_n, b_n).  Everything here is kept
in natural-log space: a_n underflows double precision past a handful of terms
for the power families, while ln a_n stays perfectly representable.

The central quantities are the exponents

    m_n = 1 + log(A_{n-1}/B_n) / log(1/a_n),
    M_n = 1 + log(A_{n-1}/B_n) / log(1/b_n),

with A_n = a_0 a_1 ... a_n and B_n = b_0 b_1 ... b_n.  Their liminf/limsup
(m, M) are the extreme values of the normalized modulus along the compression
ray; the ray diverges in the Thurston boundary exactly when m < M.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

__all__ = [
    "Factorial",
    "RisingFactorial",
    "Power",
    "PowerPair",
    "Explicit",
    "SequenceSpec",
    "ChimneySequence",
    "ExponentPair",
    "ExponentWindow",
    "ValidityReport",
    "make_sequence",
    "log_products",
    "exponents",
    "exponents_window",
    "exponent_limits",
    "validate_hypotheses",
    "phi",
    "invert_phi",
    "closed_form_limits",
    "spec_to_dict",
    "spec_from_dict",
    "spec_to_json",
    "spec_from_json",
]


@dataclass(frozen=True)
class Factorial:
    """a_n = 1/(2n+2)!, b_n = 1/(2n+1)!  (reciprocal factorials)."""


@dataclass(frozen=True)
class RisingFactorial:
    """Ratios of rising factorials with integer steps p, q < r.

    Built from the recursion a_n = b_n * (nr+1)^(p) / (nr+1)^(r) and
    b_{n+1} = a_n * ((n+1)r+1)^(q) / ((n+1)r+1)^(r) where x^(j) denotes the
    rising factorial x(x+1)...(x+j-1), evaluated through log-gamma.
    """

    p: int
    q: int
    r: int

    def __post_init__(self):
        if not (self.p >= 1 and self.q >= 1):
            raise ValueError("rising factorial requires p, q >= 1")
        if self.r <= max(self.p, self.q):
            raise ValueError("rising factorial requires r > max(p, q)")


@dataclass(frozen=True)
class Power:
    """a_n = a^(p^(2n)), b_n = a^(p^(2n-1)), b_0 = 1."""

    p: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "a", float(self.a))
        if not self.p > 1:
            raise ValueError("power family requires p > 1")
        if not 0 < self.a < 1:
            raise ValueError("power family requires a in (0,1)")


@dataclass(frozen=True)
class PowerPair:
    """Two-exponent recursion a_n = b_n^p, b_{n+1} = a_n^q with b_0 = 1, a_0 = a."""

    p: float
    q: float
    a: float

    def __post_init__(self):
        for name in ("p", "q", "a"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.p > 1 and self.q > 1):
            raise ValueError("power pair requires p, q > 1")
        if not 0 < self.a < 1:
            raise ValueError("power pair requires a in (0,1)")


@dataclass(frozen=True)
class Explicit:
    """Finite sequence given directly by ln a_n and ln b_n."""

    log_a: tuple
    log_b: tuple

    def __post_init__(self):
        la = tuple(float(v) for v in self.log_a)
        lb = tuple(float(v) for v in self.log_b)
        object.__setattr__(self, "log_a", la)
        object.__setattr__(self, "log_b", lb)
        if len(la) != len(lb) or len(la) == 0:
            raise ValueError("log_a and log_b must be nonempty and equal length")
        if lb[0] != 0.0:
            raise ValueError("explicit sequence requires log b_0 = 0")
        for n in range(len(la)):
            if not la[n] < lb[n]:
                raise ValueError(f"interlacing violated: a_{n} >= b_{n}")
            if n >= 1 and not lb[n] < la[n - 1]:
                raise ValueError(f"interlacing violated: b_{n} >= a_{n-1}")
        if any(not math.isfinite(v) for v in la + lb):
            raise ValueError("explicit sequence values must be finite")


SequenceSpec = Factorial | RisingFactorial | Power | PowerPair | Explicit


@dataclass
class ChimneySequence:
    """Lazy log-space view of a chimney sequence.

    log_a(n) and log_b(n) return ln a_n and ln b_n; partial log-products are
    cached as cumulative sums so deep windows (n up to 10^6) stay fast.
    """

    spec: SequenceSpec
    _cumA: np.ndarray = field(default=None, repr=False, compare=False)
    _cumB: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def length(self):
        """Number of defined indices, or None when the sequence is infinite."""
        if isinstance(self.spec, Explicit):
            return len(self.spec.log_a)
        return None

    def _check_index(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("index must be >= 0")
        if self.length is not None and n >= self.length:
            raise IndexError(f"explicit sequence has length {self.length}")
        return n

    def log_a(self, n):
        return float(self.log_a_array(np.array([self._check_index(n)]))[0])

    def log_b(self, n):
        return float(self.log_b_array(np.array([self._check_index(n)]))[0])

    def log_a_array(self, ns):
        ns = np.asarray(ns, dtype=np.int64)
        out = self._eval_array(ns, which="a")
        if not np.all(np.isfinite(out)):
            raise OverflowError("ln a_n overflows double precision at this index")
        return out

    def log_b_array(self, ns):
        ns = np.asarray(ns, dtype=np.int64)
        out = self._eval_array(ns, which="b")
        if not np.all(np.isfinite(out)):
            raise OverflowError("ln b_n overflows double precision at this index")
        return out

    def _eval_array(self, ns, which):
        s = self.spec
        if isinstance(s, Factorial):
            if which == "a":
                return -gammaln(2 * ns + 3)
            return -gammaln(2 * ns + 2)
        if isinstance(s, Power):
            with np.errstate(over="ignore"):
                if which == "a":
                    return np.power(s.p, 2 * ns) * math.log(s.a)
                out = np.power(s.p, np.maximum(2 * ns - 1, 0)) * math.log(s.a)
            return np.where(ns == 0, 0.0, out)
        if isinstance(s, PowerPair):
            with np.errstate(over="ignore"):
                if which == "a":
                    return np.power(s.p * s.q, ns) * math.log(s.a)
                out = s.q * np.power(s.p * s.q, np.maximum(ns - 1, 0)) * math.log(s.a)
            return np.where(ns == 0, 0.0, out)
        if isinstance(s, RisingFactorial):
            da, db = self._rising_cumsums(int(ns.max()) if ns.size else 0)
            # log a_n = sum_{k<=n} da_k + sum_{1<=k<=n} db_k; log b_n drops da_n
            if which == "a":
                return da[ns] + db[ns]
            return np.where(ns == 0, 0.0, da[np.maximum(ns - 1, 0)] + db[ns])
        if isinstance(s, Explicit):
            vals = np.array(s.log_a if which == "a" else s.log_b)
            return vals[ns]
        raise TypeError(f"unknown spec {type(s)}")

    def _rising_cumsums(self, n_hi):
        cached = getattr(self, "_rising_cache", None)
        if cached is not None and len(cached[0]) > n_hi:
            return cached
        s = self.spec
        k = np.arange(n_hi + 1, dtype=float)
        base = k * s.r + 1.0
        da = np.cumsum(gammaln(base + s.p) - gammaln(base + s.r))
        db_terms = gammaln(base + s.q) - gammaln(base + s.r)
        db_terms[0] = 0.0
        db = np.cumsum(db_terms)
        object.__setattr__(self, "_rising_cache", (da, db))
        return da, db

    def _product_cumsums(self, n_hi):
        if self._cumA is not None and len(self._cumA) > n_hi:
            return self._cumA, self._cumB
        ns = np.arange(n_hi + 1)
        # extended precision keeps adjacent prefix differences accurate for
        # windows as deep as n = 10^6
        cumA = np.cumsum(self.log_a_array(ns).astype(np.longdouble))
        cumB = np.cumsum(self.log_b_array(ns).astype(np.longdouble))
        self._cumA, self._cumB = cumA, cumB
        return cumA, cumB


def make_sequence(spec: SequenceSpec) -> ChimneySequence:
    """Build a lazy log-space chimney sequence from a spec."""
    if not isinstance(spec, (Factorial, RisingFactorial, Power, PowerPair, Explicit)):
        raise TypeError("spec must be a sequence spec variant")
    return ChimneySequence(spec)


def log_products(seq: ChimneySequence, n: int):
    """Return (ln A_n, ln B_n) where A_n = prod a_k, B_n = prod b_k, k <= n."""
    n = seq._check_index(n)
    cumA, cumB = seq._product_cumsums(n)
    return float(cumA[n]), float(cumB[n])


@dataclass(frozen=True)
class ExponentPair:
    m_n: float
    M_n: float


_TWO_FORM_RTOL = 1e-12


def exponents(seq: ChimneySequence, n: int) -> ExponentPair:
    """Exponents (m_n, M_n) at index n >= 1.

    Each exponent has two algebraically equal expressions; both are evaluated
    and must agree to 1e-12 relative error, which guards against broken
    sequence definitions.
    """
    n = int(n)
    if n < 1:
        raise ValueError("exponents need n >= 1 (they use A_{n-1})")
    m, M = exponents_window(seq, n, n)
    return ExponentPair(float(m[0]), float(M[0]))


def exponents_window(seq: ChimneySequence, n_min: int, n_max: int):
    """Vectorized (m_n, M_n) arrays for n in [n_min, n_max]."""
    if n_min < 1 or n_max < n_min:
        raise ValueError("window must satisfy 1 <= n_min <= n_max")
    seq._check_index(n_max)
    cumA, cumB = seq._product_cumsums(n_max)
    ns = np.arange(n_min, n_max + 1)
    la = seq.log_a_array(ns).astype(np.longdouble)
    lb = seq.log_b_array(ns).astype(np.longdouble)
    logA_prev, logB_prev = cumA[ns - 1], cumB[ns - 1]
    logA, logB = cumA[ns], cumB[ns]
    num = logA_prev - logB  # = log(A_{n-1}/B_n) >= 0

    m1 = 1.0 + num / (-la)
    m2 = 2.0 - (logB - logA) / (-la)
    M1 = 1.0 + num / (-lb)
    M2 = 2.0 - (logB_prev - logA_prev) / (-lb)
    for u, v in ((m1, m2), (M1, M2)):
        scale = np.maximum(np.abs(u), 1.0)
        if np.any(np.abs(u - v) > _TWO_FORM_RTOL * scale):
            raise ArithmeticError("the two exponent forms disagree beyond 1e-12")
    return m1.astype(float), M1.astype(float)


@dataclass(frozen=True)
class ExponentWindow:
    m_hat: float
    M_hat: float
    m_drift: float
    M_drift: float

    @property
    def converged(self):
        """Heuristic: window extremes stable over the last quartile."""
        return max(self.m_drift, self.M_drift) < 1e-6


def exponent_limits(seq: ChimneySequence, n_min: int, n_max: int) -> ExponentWindow:
    """Window estimate of (m, M) = (liminf m_n, limsup M_n).

    m_hat is the window minimum of m_n and M_hat the window maximum of M_n.
    The drift fields compare against the same extremes taken over the last
    quartile of the window only; a large drift flags that the window is still
    moving and the estimate should not be trusted as a limit.
    """
    if not 1 <= n_min < n_max:
        raise ValueError("need 1 <= n_min < n_max")
    m, M = exponents_window(seq, n_min, n_max)
    m_hat, M_hat = float(m.min()), float(M.max())
    q = max(1, len(m) // 4)
    m_drift = abs(float(m[-q:].min()) - m_hat)
    M_drift = abs(float(M[-q:].max()) - M_hat)
    return ExponentWindow(m_hat, M_hat, m_drift, M_drift)


@dataclass(frozen=True)
class ValidityReport:
    """Checks of the standing hypotheses on the sequences.

    c_est bounds the gap ratios max(b_{n+1}/a_n, a_n/b_n); the hypotheses ask
    for some c < 1 dominating all of them.  roots tracks whether
    max(ln a_n, ln b_n)/n decreases toward -inf (the n-th root condition).
    """

    c_est: float
    root_first: float
    root_last: float
    roots_decreasing: bool
    n_used: int

    @property
    def passed(self):
        return self.c_est < 1.0 and self.roots_decreasing and self.root_last < self.root_first


def validate_hypotheses(seq: ChimneySequence, N: int) -> ValidityReport:
    if N < 2:
        raise ValueError("need N >= 2")
    n_hi = N
    if seq.length is not None:
        n_hi = min(N, seq.length - 1)
    ns = np.arange(0, n_hi + 1)
    la = seq.log_a_array(ns)
    lb = seq.log_b_array(ns)
    ratios = [np.max(la - lb)]  # log(a_n / b_n) <= log c
    if n_hi >= 1:
        ratios.append(np.max(lb[1:] - la[:-1]))  # log(b_{n+1} / a_n)
    c_est = float(math.exp(max(float(r) for r in ratios)))

    ms = np.arange(1, n_hi + 1)
    roots = np.maximum(la[1:], lb[1:]) / ms
    decreasing = bool(np.all(np.diff(roots) < 0)) if len(roots) > 1 else True
    return ValidityReport(
        c_est=c_est,
        root_first=float(roots[0]),
        root_last=float(roots[-1]),
        roots_decreasing=decreasing,
        n_used=int(n_hi),
    )


def phi(p: float, alpha: float) -> float:
    """Piecewise modulus profile over one interlacing period.

    On [1, p] the profile decreases from M_p to m_p as 1 + p/(alpha (p+1));
    on [p, p^2] it increases back to M_p as 2 - p^2/(alpha (p+1)).
    """
    if not p > 1:
        raise ValueError("need p > 1")
    if not 1.0 <= alpha <= p * p * (1 + 1e-15):
        raise ValueError("alpha must lie in [1, p^2]")
    if alpha <= p:
        return 1.0 + p / (alpha * (p + 1.0))
    return 2.0 - p * p / (alpha * (p + 1.0))


def invert_phi(p: float, s: float, branch: str = "decreasing") -> float:
    """Solve phi(p, alpha) = s on the requested monotone branch."""
    if not p > 1:
        raise ValueError("need p > 1")
    m_p = 1.0 + 1.0 / (p + 1.0)
    M_p = 2.0 - 1.0 / (p + 1.0)
    if not (m_p - 1e-12) <= s <= (M_p + 1e-12):
        raise ValueError(f"s must lie in [{m_p}, {M_p}]")
    s = min(max(s, m_p), M_p)
    if branch == "decreasing":
        return p / ((s - 1.0) * (p + 1.0))
    if branch == "increasing":
        return p * p / ((2.0 - s) * (p + 1.0))
    raise ValueError("branch must be 'decreasing' or 'increasing'")


def closed_form_limits(spec: SequenceSpec):
    """Exact (m, M) for the named families; Explicit has no closed form."""
    if isinstance(spec, Factorial):
        return (1.5, 1.5)
    if isinstance(spec, RisingFactorial):
        s = 2.0 - (spec.r - spec.p) / (2.0 * spec.r - spec.p - spec.q)
        return (s, s)
    if isinstance(spec, Power):
        p = spec.p
        return (1.0 + 1.0 / (p + 1.0), 2.0 - 1.0 / (p + 1.0))
    if isinstance(spec, PowerPair):
        p, q = spec.p, spec.q
        return (1.0 + (q - 1.0) / (p * q - 1.0), 1.0 + p * (q - 1.0) / (p * q - 1.0))
    raise ValueError("no closed form for this spec")


_KINDS = {
    Factorial: "factorial",
    RisingFactorial: "rising_factorial",
    Power: "power",
    PowerPair: "power_pair",
    Explicit: "explicit",
}


def spec_to_dict(spec: SequenceSpec) -> dict:
    d = {"kind": _KINDS[type(spec)]}
    if isinstance(spec, RisingFactorial):
        d.update(p=spec.p, q=spec.q, r=spec.r)
    elif isinstance(spec, Power):
        d.update(p=spec.p, a=spec.a)
    elif isinstance(spec, PowerPair):
        d.update(p=spec.p, q=spec.q, a=spec.a)
    elif isinstance(spec, Explicit):
        d.update(log_a=list(spec.log_a), log_b=list(spec.log_b))
    return d


def spec_from_dict(d: dict) -> SequenceSpec:
    kind = d.get("kind")
    if kind == "factorial":
        return Factorial()
    if kind == "rising_factorial":
        return RisingFactorial(int(d["p"]), int(d["q"]), int(d["r"]))
    if kind == "power":
        return Power(float(d["p"]), float(d["a"]))
    if kind == "power_pair":
        return PowerPair(float(d["p"]), float(d["q"]), float(d["a"]))
    if kind == "explicit":
        return Explicit(tuple(d["log_a"]), tuple(d["log_b"]))
    raise ValueError(f"unknown sequence kind {kind!r}")


def spec_to_json(spec: SequenceSpec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True)


def spec_from_json(text: str) -> SequenceSpec:
    return spec_from_dict(json.loads(text))
