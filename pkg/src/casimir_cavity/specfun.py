"""Special functions on and near the complex unit circle.

Provides the Lerch transcendent, the generalized harmonic number, Gauss'
hypergeometric series, complex digamma/trigamma and the incomplete beta
function, at controlled absolute accuracy.  The interesting regime is
|z| = 1, z != 1, where the defining series are only conditionally (or
marginally) convergent; those are summed with a Levin u-transformation
(Euler averaging as fallback) after a burn-in that clears the scale set
by the shift parameters.

Complex arguments are plain Python/`numpy` complex scalars.  All
functions are pure; every returned value is checked to be finite.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError, NoConvergence, PoleOnPath

__all__ = [
    "SeriesAccuracy",
    "lerch_phi",
    "gen_harmonic",
    "gauss_2f1",
    "polygamma",
    "inc_beta",
    "pochhammer",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.5772156649015328606

# |z| above which the defining series is treated as a unit-circle case
# and handed to the accelerator.
_DIRECT_RADIUS = 0.9


@dataclass(frozen=True)
class SeriesAccuracy:
    """Accuracy policy for the series evaluations.

    abs_tol is the target absolute error, max_terms caps the number of
    generated terms (burn-in included), accelerator selects the scheme
    used on conditionally convergent unit-circle series.
    """

    abs_tol: float = 1e-12
    max_terms: int = 10**6
    accelerator: str = "levin_u"  # "none" | "levin_u" | "euler"

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.accelerator not in ("none", "levin_u", "euler"):
            raise DomainError(f"unknown accelerator {self.accelerator!r}")


_DEFAULT_ACC = SeriesAccuracy()


def _require_finite(value, what):
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NoConvergence(f"{what} produced a non-finite value")
    return value


def _is_nonpositive_integer(w):
    w = complex(w)
    return w.imag == 0.0 and w.real <= 0.0 and w.real == int(w.real)


class _AccelStall(Exception):
    """Internal: accelerator stagnated above tolerance."""

    def __init__(self, best, estimate):
        self.best = best
        self.estimate = estimate


class _LevinU:
    """Streaming Levin u-transformation for complex sequences.

    Feed (partial sum, latest term) pairs; `value` holds the current
    extrapolation.  Numerator/denominator triangles are updated in place
    (standard recursive scheme with remainder estimates w_n=(b+n)*a_n).
    """

    def __init__(self, beta=1.0):
        self._beta = beta
        self._numer = []
        self._denom = []
        self._n = 0
        self.value = 0j

    def feed(self, partial_sum, term):
        beta, n = self._beta, self._n
        omega = (beta + n) * term
        if omega == 0:
            # series terminated exactly; the partial sum is the answer
            self.value = partial_sum
            return self.value
        t = 1.0 / (beta + n)
        d = t / omega
        self._numer.append(partial_sum * d)
        self._denom.append(d)
        if n > 0:
            ratio = (beta + n - 1) * t
            numer, denom = self._numer, self._denom
            for j in range(1, n + 1):
                fact = (n - j + beta) * t
                numer[n - j] = numer[n - j + 1] - fact * numer[n - j]
                denom[n - j] = denom[n - j + 1] - fact * denom[n - j]
                t *= ratio
        self._n += 1
        if self._denom[0] != 0:
            self.value = self._numer[0] / self._denom[0]
        return self.value


class _Euler:
    """Iterated averaging of partial sums (generalized Euler transform)."""

    _MAX_DEPTH = 64

    def __init__(self):
        self._col = []
        self.value = 0j

    def feed(self, partial_sum, term):
        v = partial_sum
        col = self._col
        for k in range(len(col)):
            v, col[k] = 0.5 * (v + col[k]), v
        if len(col) < self._MAX_DEPTH:
            col.append(v)
        self.value = v
        return v


def _accelerated_tail(term_gen, acc, scheme, budget):
    """Sum an infinite series with the chosen accelerator.

    term_gen yields successive terms.  Returns (value, error_estimate,
    n_terms).  Raises _AccelStall if the estimate stagnates above
    tolerance, so callers can retry with a longer burn-in.
    """

    accel = _LevinU() if scheme == "levin_u" else _Euler()
    partial = 0j
    comp = 0j  # Kahan compensation
    prev = None
    small_streak = 0
    best = 0j
    best_est = math.inf
    for n, term in enumerate(term_gen):
        if n >= budget:
            break
        y = term - comp
        t = partial + y
        comp = (t - partial) - y
        partial = t
        est_val = accel.feed(partial, term)
        if prev is not None:
            diff = abs(est_val - prev)
            floor = 1e-15 * (abs(est_val) + 1.0) * (n + 1)
            estimate = 2.0 * diff + floor
            if estimate < best_est:
                best, best_est = est_val, estimate
            if diff <= 0.25 * acc.abs_tol and n >= 6:
                small_streak += 1
                if small_streak >= 2:
                    return est_val, max(2.0 * diff, floor), n + 1
            else:
                small_streak = 0
            # high-order Levin columns eventually drown in roundoff;
            # bail out with the best estimate seen so far
            if n > 220:
                raise _AccelStall(best, best_est)
        prev = est_val
    raise _AccelStall(best, best_est)


def _sum_unit_circle(term_at, head_terms, acc, what):
    """Head-sum then accelerate the tail of a unit-circle series.

    term_at(n) returns the n-th term (n >= 0).  head_terms is the
    initial burn-in length; it is grown geometrically if the accelerator
    stalls.  Honors acc.accelerator with Euler fallback after Levin.
    """

    schemes = {"levin_u": ("levin_u", "euler"), "euler": ("euler",)}[acc.accelerator]
    burn = head_terms
    failure = None
    while True:
        head = 0j
        comp = 0j
        for n in range(burn):
            y = term_at(n) - comp
            t = head + y
            comp = (t - head) - y
            head = t
        remaining = acc.max_terms - burn
        if remaining < 16:
            break
        def tail_gen():
            n = burn
            while True:
                yield term_at(n)
                n += 1
        for scheme in schemes:
            try:
                tail, est, used = _accelerated_tail(tail_gen(), acc, scheme, remaining)
            except _AccelStall as stall:
                failure = (head + stall.best, stall.estimate)
                continue
            return head + tail, est + 1e-15 * abs(head), burn + used
        burn *= 4
        if burn > acc.max_terms // 2:
            break
    best, est = failure if failure is not None else (0j, math.inf)
    raise NoConvergence(
        f"{what}: accelerator did not reach abs_tol={acc.abs_tol:g} "
        f"within max_terms={acc.max_terms}",
        best=best,
        error_estimate=est,
    )


def _sum_direct(term_at, ratio_bound, acc, what):
    """Direct summation with a geometric tail bound |t_N| * q/(1-q)."""

    partial = 0j
    comp = 0j
    n = 0
    while n < acc.max_terms:
        term = term_at(n)
        y = term - comp
        t = partial + y
        comp = (t - partial) - y
        partial = t
        n += 1
        if n >= 4:
            q = ratio_bound(n)
            if q < 1.0:
                tail = abs(term) * q / (1.0 - q)
                if tail <= acc.abs_tol:
                    return partial, tail + 1e-15 * abs(partial) * math.log2(n + 2), n
    raise NoConvergence(
        f"{what}: direct summation did not reach abs_tol={acc.abs_tol:g} "
        f"within max_terms={acc.max_terms}",
        best=partial,
    )


def _finish(value, err, acc, with_error, what):
    value = _require_finite(complex(value), what)
    if with_error:
        return value, float(err)
    return value


# ----------------------------------------------------------------------
# Lerch transcendent
# ----------------------------------------------------------------------

def lerch_phi(z, s, a, acc=None, with_error=False):
    """Lerch transcendent  sum_{n>=0} z^n / (n+a)^s  for |z| <= 1.

    Parameters
    ----------
    z : complex
        Argument, |z| <= 1.  For |z| = 1 the series is conditionally
        (s = 1) or slowly (s > 1) convergent and is accelerated.
    s : float
        Real exponent, s > 0.  z = 1 additionally requires s > 1.
    a : complex
        Shift parameter; must not be a non-positive integer.
    acc : SeriesAccuracy, optional
    with_error : bool
        If true, return (value, error_estimate) instead of the value.

    Raises
    ------
    PoleOnPath, DomainError, NoConvergence
    """

    acc = acc or _DEFAULT_ACC
    z, a, s = complex(z), complex(a), float(s)
    if _is_nonpositive_integer(a):
        raise PoleOnPath(f"lerch_phi: a={a} hits a pole of 1/(n+a)^s")
    if s <= 0:
        raise DomainError("lerch_phi: s must be positive")
    r = abs(z)
    if r > 1.0 + 1e-12:
        raise DomainError(f"lerch_phi: |z|={r} exceeds 1")
    if r > 1.0:
        z /= r  # collapse rounding fuzz onto the circle
    if z == 0:
        return _finish(a ** (-s), 1e-16 * abs(a ** (-s)), acc, with_error, "lerch_phi")
    if z == 1.0:
        if s <= 1.0:
            raise DomainError("lerch_phi: z=1 requires s>1")
        return _hurwitz(s, a, acc, with_error)

    def term_at(n, _cache={}):
        # z^n via cached block anchor to avoid phase drift on |z|=1
        anchor = _cache.get("anchor")
        if anchor is None or not (anchor[0] <= n < anchor[0] + 256):
            zn = cmath.exp(n * cmath.log(z)) if n else 1.0 + 0j
            _cache["anchor"] = (n, zn)
        else:
            base, zbase = _cache["anchor"]
            zn = zbase * z ** (n - base)
        return zn / (n + a) ** s

    abs_a = abs(a)
    if r <= _DIRECT_RADIUS or acc.accelerator == "none":

        def ratio_bound(n):
            # sup over the tail of |t_{m+1}/t_m| <= r ((m+|a|)/(m+1-|a|))^s
            if n + 1 <= abs_a + 1:
                return 1.0  # coefficient may still grow; keep summing
            return r * ((n + abs_a) / (n + 1 - abs_a)) ** s

        value, err, _ = _sum_direct(term_at, ratio_bound, acc, "lerch_phi")
        return _finish(value, err, acc, with_error, "lerch_phi")

    burn = max(int(3 * abs_a) + 16, 32)
    value, err, _ = _sum_unit_circle(term_at, burn, acc, "lerch_phi")
    return _finish(value, err, acc, with_error, "lerch_phi")


def _hurwitz(s, a, acc, with_error):
    """Hurwitz tail for lerch_phi at z=1, s>1: direct sum + EM correction."""

    N = max(int(10 * abs(a)) + 64, 64)
    n = np.arange(N, dtype=float)
    head = complex(np.sum((n + a) ** (-s)))
    w = N + a
    # Euler-Maclaurin: sum_{n>=N} (n+a)^-s
    tail = w ** (1 - s) / (s - 1) + 0.5 * w ** (-s) + s * w ** (-s - 1) / 12.0 \
        - s * (s + 1) * (s + 2) * w ** (-s - 3) / 720.0
    err = abs(s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * w ** (-s - 5) / 30240.0)
    return _finish(head + tail, err + 1e-15 * abs(head), acc, with_error, "lerch_phi")


# ----------------------------------------------------------------------
# Generalized harmonic number
# ----------------------------------------------------------------------

def gen_harmonic(x):
    """Generalized harmonic number  H(x) = x * sum_{k>=1} 1/(k(x+k)).

    Evaluated through the digamma relation H(x) = psi(x+1) + gamma,
    accurate to ~1e-15 absolute.  x must not be an integer <= -1.
    """

    x = float(x)
    if x <= -1.0 and x == int(x):
        raise PoleOnPath(f"gen_harmonic: pole at x={x}")
    return float(_sp.digamma(x + 1.0)) + EULER_GAMMA


# ----------------------------------------------------------------------
# Gauss hypergeometric series
# ----------------------------------------------------------------------

def gauss_2f1(a, b, c, z, acc=None, with_error=False):
    """Gauss hypergeometric  2F1(a,b;c;z) = sum (a)_n (b)_n / (c)_n z^n/n!.

    Supports |z| <= 1.  On the unit circle convergence requires
    Re(c-a-b) > -1 (marginal cases are accelerated); z = 1 requires
    Re(c-a-b) > 0 and is summed by Gauss' theorem.
    """

    acc = acc or _DEFAULT_ACC
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_nonpositive_integer(c):
        raise DomainError(f"gauss_2f1: c={c} is a non-positive integer")
    r = abs(z)
    if r > 1.0 + 1e-12:
        raise DomainError(f"gauss_2f1: |z|={r} exceeds 1")
    if r > 1.0:
        z /= r
    if z == 0:
        return _finish(1.0 + 0j, 1e-16, acc, with_error, "gauss_2f1")
    margin = (c - a - b).real
    if z == 1.0:
        if margin <= 0:
            raise DomainError("gauss_2f1: z=1 requires Re(c-a-b) > 0")
        g = _sp.gamma
        value = g(c) * g(c - a - b) / (g(c - a) * g(c - b))
        return _finish(value, 1e-14 * abs(value), acc, with_error, "gauss_2f1")
    if r == 1.0 and margin <= -1.0:
        raise DomainError("gauss_2f1: series diverges on |z|=1 for Re(c-a-b) <= -1")

    scale = max(abs(a), abs(b), abs(c))

    def term_at(n, _cache={}):
        tn = _cache.get(n)
        if tn is None:
            # recompute from scratch only at anchors; otherwise recurse
            prev = _cache.get(n - 1)
            if prev is None or n == 0:
                tn = _term_2f1_from_scratch(a, b, c, z, n)
            else:
                tn = prev * (a + n - 1) * (b + n - 1) * z / ((c + n - 1) * n)
            _cache.clear()
            _cache[n] = tn
        return tn

    aa, ab, ac = abs(a), abs(b), abs(c)
    if r <= _DIRECT_RADIUS or acc.accelerator == "none":

        def ratio_bound(n):
            if n + 1 <= ac + 1:
                return 1.0
            return r * (n + aa) * (n + ab) / ((n + 1 - ac) * (n + 1))

        value, err, _ = _sum_direct(term_at, ratio_bound, acc, "gauss_2f1")
        return _finish(value, err, acc, with_error, "gauss_2f1")

    burn = max(int(3 * scale) + 16, 32)
    value, err, _ = _sum_unit_circle(term_at, burn, acc, "gauss_2f1")
    return _finish(value, err, acc, with_error, "gauss_2f1")


def _term_2f1_from_scratch(a, b, c, z, n):
    # log-free product; n stays modest because callers walk sequentially
    t = 1.0 + 0j
    for k in range(n):
        t *= (a + k) * (b + k) * z / ((c + k) * (k + 1))
    return t


# ----------------------------------------------------------------------
# Digamma / trigamma for complex arguments
# ----------------------------------------------------------------------

# Bernoulli numbers B_2..B_14 for the asymptotic tails
_BERNOULLI = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
              -691.0 / 2730, 7.0 / 6)

_ASYMPTOTIC_RADIUS = 17.0


def polygamma(n, x):
    """psi^(n)(x) for n in {0, 1} and complex x off the poles.

    n = 0 delegates to scipy's complex digamma; n = 1 uses pole
    reflection, recurrence shift to |x| >= 17 and the Bernoulli
    asymptotic series (absolute error ~1e-13 in the operating range).
    """

    x = complex(x)
    if _is_nonpositive_integer(x):
        raise PoleOnPath(f"polygamma: pole at x={x}")
    if n == 0:
        out = complex(_sp.digamma(x))
        return _require_finite(out, "polygamma")
    if n != 1:
        raise DomainError("polygamma: only n=0 and n=1 are supported")
    return _require_finite(_trigamma(x), "polygamma")


def _trigamma(x):
    if x.real < 0.5:
        sp = cmath.sin(cmath.pi * x)
        return (cmath.pi / sp) ** 2 - _trigamma(1.0 - x)
    shift = 0j
    while abs(x) < _ASYMPTOTIC_RADIUS:
        shift += 1.0 / (x * x)
        x += 1.0
    w2 = 1.0 / (x * x)
    tail = 0j
    power = w2 / x  # 1/x^3
    for b2k in _BERNOULLI:
        tail += b2k * power
        power *= w2
    return shift + 1.0 / x + 0.5 * w2 + tail


# ----------------------------------------------------------------------
# Incomplete beta function
# ----------------------------------------------------------------------

def inc_beta(z, a, b, acc=None, with_error=False):
    """Incomplete beta  B(z;a,b) = integral_0^z t^(a-1) (1-t)^(b-1) dt.

    Evaluated via the series  z^a * sum_n (1-b)_n / n! * z^n / (a+n)
    on the principal branch of z^a; valid for |z| <= 1 with z != 1
    whenever Re(b) <= 0.
    """

    acc = acc or _DEFAULT_ACC
    z, a, b = complex(z), complex(a), complex(b)
    if _is_nonpositive_integer(a):
        raise DomainError(f"inc_beta: a={a} is a non-positive integer")
    r = abs(z)
    if r > 1.0 + 1e-12:
        raise DomainError(f"inc_beta: |z|={r} exceeds 1")
    if r > 1.0:
        z /= r
    if z == 0:
        return _finish(0j, 0.0, acc, with_error, "inc_beta")
    if z == 1.0 and b.real <= 0:
        raise DomainError("inc_beta: integrand pole at t=1 (z=1 with Re(b)<=0)")

    za = cmath.exp(a * cmath.log(z))

    def term_at(n, _cache={}):
        # coefficient (1-b)_n / n!, walked by recurrence
        key, coef = _cache.get("c", (-1, None))
        if key != n - 1 or n == 0:
            coef = 1.0 + 0j
            for k in range(n):
                coef *= (1.0 - b + k) / (k + 1)
        else:
            coef = coef * (1.0 - b + n - 1) / n
        _cache["c"] = (n, coef)
        return coef * z ** n / (a + n) if n < 256 else \
            coef * cmath.exp(n * cmath.log(z)) / (a + n)

    abs_ab = max(abs(a), abs(b))
    if r <= _DIRECT_RADIUS or acc.accelerator == "none":

        def ratio_bound(n):
            if n + 1 <= abs(a) + 1:
                return 1.0
            return r * (n + 1 + abs(b)) * (n + abs(a)) / ((n + 1) * (n + 1 - abs(a)))

        value, err, _ = _sum_direct(term_at, ratio_bound, acc, "inc_beta")
        return _finish(za * value, abs(za) * err, acc, with_error, "inc_beta")

    burn = max(int(3 * abs_ab) + 16, 32)
    value, err, _ = _sum_unit_circle(term_at, burn, acc, "inc_beta")
    return _finish(za * value, abs(za) * err, acc, with_error, "inc_beta")


def pochhammer(p, n):
    """Pochhammer symbol (p)_n = p (p+1) ... (p+n-1), with (p)_0 = 1."""

    if n < 0 or n != int(n):
        raise DomainError("pochhammer: n must be a non-negative integer")
    p = complex(p)
    out = 1.0 + 0j
    for k in range(int(n)):
        out *= p + k
    return out
