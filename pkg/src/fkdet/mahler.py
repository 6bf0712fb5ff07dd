"""Mahler measures: Jensen's formula from roots, torus quadrature, and the
iterated one-variable specialization limit.

The one-variable path is the accurate one.  Polynomials are made
square-free exactly (Yun decomposition over the integers) before any
floating-point root finding, so repeated roots cost no precision; the
roots of each square-free factor are then polished with Newton steps
against the exact coefficients.  The torus grid and the specialization
ramp are the two multivariate routes.  Both are empirical and their
error estimates are observed differences, not proved bounds.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .laurent import LaurentPolynomial
from .values import MahlerValue

# roots with modulus in (1 - UNIT_BAND, 1 + UNIT_BAND] count as lying on
# the unit circle and contribute factor 1 to the Jensen product
UNIT_BAND = 1e-12

# grid samples with |p| below this are treated as exact zeros and excluded
ZERO_FLOOR = 1e-300

_COMPANION_LIMIT = 30


# ---------------------------------------------------------------------------
# integer polynomial helpers (dense ascending coefficient lists)


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _deriv(coeffs: list) -> list:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _primitive(coeffs: list) -> list:
    """Divide by the integer content and normalize the leading sign."""
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    if g == 0:
        return []
    out = [c // g for c in coeffs]
    if out[-1] < 0:
        out = [-c for c in out]
    return out


def _pseudo_rem(a: list, b: list) -> list:
    """Remainder of a by b up to powers of lc(b); integer arithmetic only."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            return r
        lead = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i in range(db + 1):
            r[shift + i] -= lead * b[i]


def _gcd_poly(a: list, b: list) -> list:
    """Primitive gcd of integer polynomials via a primitive remainder sequence."""
    a = _primitive(_trim(list(a)))
    b = _primitive(_trim(list(b)))
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _primitive(_trim(_pseudo_rem(a, b)))
        a, b = b, r
    return a


def _div_exact(a: list, b: list) -> list:
    """Exact quotient a / b for integer polynomials with b | a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = _trim(list(a))
    if not a:
        return []
    r = [Fraction(x) for x in a]
    db = len(b) - 1
    lb = b[-1]
    width = len(a) - len(b) + 1
    if width <= 0:
        raise ValueError("quotient would be zero, division not exact")
    q = [Fraction(0)] * width
    for k in range(width - 1, -1, -1):
        c = r[db + k] / lb
        q[k] = c
        if c:
            for i in range(db + 1):
                r[k + i] -= c * b[i]
    if any(r):
        raise ValueError("polynomial division not exact")
    out = []
    for c in q:
        if c.denominator != 1:
            raise ValueError("polynomial division not exact over the integers")
        out.append(int(c))
    return out


def squarefree_decomposition(coeffs: list) -> list:
    """Yun decomposition of a primitive integer polynomial.

    Returns [(factor, multiplicity)] with each factor primitive and
    square-free, such that the product of factor**multiplicity equals the
    input up to sign.
    """
    p = _primitive(_trim(list(coeffs)))
    if len(p) <= 1:
        return []
    d = _deriv(p)
    g = _gcd_poly(p, d)
    if len(g) == 1:
        return [(p, 1)]
    w = _div_exact(p, g)
    y = _div_exact(d, g)
    dw = _deriv(w)
    z = _trim([a - b for a, b in zip(y + [0] * len(dw), dw + [0] * len(y))])
    out = []
    i = 1
    while len(w) > 1:
        if i > len(coeffs):
            raise AssertionError("square-free decomposition failed to terminate")
        h = _gcd_poly(w, z)
        if len(h) > 1:
            out.append((h, i))
            w = _div_exact(w, h)
            z = _div_exact(z, h)
        dw = _deriv(w)
        z = _trim([zc - wc for zc, wc in zip(z + [0] * len(dw), dw + [0] * len(z))])
        i += 1
    return out


# ---------------------------------------------------------------------------
# floating root finding


def _horner_pair(desc: np.ndarray, dd: np.ndarray, x: np.ndarray):
    return np.polyval(desc, x), np.polyval(dd, x)


def _aberth(coeffs: list) -> np.ndarray | None:
    """Simultaneous root iteration for a square-free polynomial.

    coeffs ascending; returns None if the iteration fails to converge,
    in which case the caller falls back to companion eigenvalues.
    """
    c = np.array([float(x) for x in coeffs], dtype=np.complex128)
    n = len(c) - 1
    lead = c[-1]
    radius = 1.0 + float(np.max(np.abs(c[:-1] / lead)))
    k = np.arange(n)
    roots = 0.9 * radius * np.exp(2j * np.pi * (k + 0.35) / n)
    desc = c[::-1]
    dd = np.polyder(desc)
    for _ in range(400):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            vals, dvals = _horner_pair(desc, dd, roots)
            dvals = np.where(dvals == 0, 1e-300, dvals)
            w = vals / dvals
            diff = roots[:, None] - roots[None, :]
            np.fill_diagonal(diff, 1.0)
            s = np.sum(1.0 / diff, axis=1) - 1.0
            denom = 1.0 - w * s
            denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
            corr = w / denom
            roots = roots - corr
        if not np.all(np.isfinite(roots)):
            return None
        if np.max(np.abs(corr)) <= 1e-14 * (1.0 + np.max(np.abs(roots))):
            return roots
    return None


def _roots_squarefree(coeffs: list) -> tuple[np.ndarray, float]:
    """All roots of a square-free integer polynomial plus a residual estimate."""
    deg = len(coeffs) - 1
    if deg == 0:
        return np.array([], dtype=np.complex128), 0.0
    desc = np.array([float(x) for x in coeffs[::-1]], dtype=np.complex128)
    if deg <= _COMPANION_LIMIT:
        roots = np.roots(desc)
    else:
        roots = _aberth(coeffs)
        if roots is None:
            roots = np.roots(desc)
    # Newton polish against the exact coefficients; square-free input
    # keeps the derivative well away from zero at the roots
    dd = np.polyder(desc)
    step = np.zeros_like(roots)
    for _ in range(3):
        vals, dvals = _horner_pair(desc, dd, roots)
        dvals = np.where(dvals == 0, 1e-300, dvals)
        step = vals / dvals
        roots = roots - step
    residual = float(np.max(np.abs(step))) if len(step) else 0.0
    return roots, residual


@dataclass(frozen=True)
class RootList:
    """Factorization data of a one-variable Laurent polynomial.

    p(z) = c * z**stripped_exponent * prod(z - root); lead_abs is |c|,
    roots are listed with multiplicity, residual is the root-finder's
    largest final correction step.
    """

    lead_abs: float
    roots: tuple
    stripped_exponent: int
    residual: float


def roots_one_var(p: LaurentPolynomial) -> RootList:
    """Roots with multiplicity of a nonzero rank-1 Laurent polynomial."""
    if p.rank != 1:
        raise ValueError("need a rank-1 polynomial")
    if p.is_zero():
        raise ValueError("zero polynomial has no root data")
    low, coeffs = p.dense_coefficients()
    lead_abs = abs(float(coeffs[-1]))
    if len(coeffs) == 1:
        return RootList(lead_abs, (), low, 0.0)
    # clear denominators: scaling by a positive rational moves |c| but not
    # the roots, so factor the primitive integer polynomial
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots: list = []
    residual = 0.0
    total = 0
    for factor, mult in squarefree_decomposition(ints):
        found, res = _roots_squarefree(factor)
        residual = max(residual, res)
        for r in found:
            roots.extend([complex(r)] * mult)
        total += (len(factor) - 1) * mult
    if total != len(coeffs) - 1:
        raise AssertionError("root count does not match degree")
    return RootList(lead_abs, tuple(roots), low, residual)


# ---------------------------------------------------------------------------
# measures


def mahler_jensen(p: LaurentPolynomial) -> MahlerValue:
    """Mahler measure of a rank-1 polynomial via the Jensen product."""
    data = roots_one_var(p)
    log_m = math.log(data.lead_abs)
    for a in data.roots:
        m = abs(a)
        if m > 1.0 + UNIT_BAND:
            log_m += math.log(m)
    value = math.exp(log_m)
    error = value * (data.residual * max(1, len(data.roots)) + 1e-15)
    return MahlerValue(value, log_m, "jensen", error)


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("FKDET_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _grid_log_mean(p: LaurentPolynomial, n: int, threads: int) -> float:
    """Mean of ln|p| over the uniform n**d torus grid, zero samples excluded."""
    d = p.rank
    terms = sorted((exps, float(c)) for exps, c in p.terms.items())
    theta = 2.0 * np.pi * np.arange(n) / n
    axis_pows: list = []
    for axis in range(d):
        cache: dict = {}
        for exps, _ in terms:
            e = exps[axis]
            if e not in cache:
                cache[e] = np.exp(1j * e * theta)
        axis_pows.append(cache)

    tail = n ** (d - 1)
    rows_per_chunk = max(1, (1 << 20) // max(1, tail))
    chunks = [(lo, min(lo + rows_per_chunk, n)) for lo in range(0, n, rows_per_chunk)]

    def eval_chunk(bounds: tuple) -> float:
        lo, hi = bounds
        shape = (hi - lo,) + (n,) * (d - 1)
        acc = np.zeros(shape, dtype=np.complex128)
        for exps, c in terms:
            prod = axis_pows[0][exps[0]][lo:hi].reshape((hi - lo,) + (1,) * (d - 1))
            for axis in range(1, d):
                vec = axis_pows[axis][exps[axis]]
                prod = prod * vec.reshape((1,) * axis + (n,) + (1,) * (d - 1 - axis))
            acc = acc + c * prod
        mags = np.abs(acc).ravel()
        good = mags >= ZERO_FLOOR
        return float(np.sum(np.log(mags[good])))

    # fixed chunking and ordered reduction keep the result independent of
    # the worker count
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(eval_chunk, chunks))
    else:
        partials = [eval_chunk(ch) for ch in chunks]
    return math.fsum(partials) / float(n) ** d


def log_mahler_quadrature(
    p: LaurentPolynomial, n: int, threads: int | None = None
) -> MahlerValue:
    """Mahler measure from the grid average of ln|p| on the torus."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if n < 2:
        raise ValueError("grid size must be at least 2")
    workers = _thread_count(threads)
    log_m = _grid_log_mean(p, n, workers)
    coarse = max(2, n // 2)
    log_coarse = _grid_log_mean(p, coarse, workers) if coarse < n else log_m
    value = math.exp(log_m)
    return MahlerValue(value, log_m, "quadrature", abs(value - math.exp(log_coarse)))


def default_bl_schedule(p: LaurentPolynomial, steps: int = 4, base: int = 25) -> list:
    """Geometric specialization ramp for a rank d >= 2 polynomial.

    k_2 doubles from `base`; each deeper k is pushed past the support-bound
    chain of p itself so the inner limits stay ahead of the outer ones.
    """
    if p.rank < 2:
        raise ValueError("schedule needs rank at least 2")
    bounds = [p.support_bound(i) for i in range(1, p.rank + 1)]
    partial = [2 * sum(bounds[:i]) for i in range(1, p.rank)]
    tuples = []
    for j in range(steps):
        ks = [base * 2 ** j]
        for i in range(1, p.rank - 1):
            ks.append(partial[i] * ks[-1] + 1)
        tuples.append(tuple(ks))
    return tuples


def mahler_boyd_lawton(
    p: LaurentPolynomial, schedule: list | None = None
) -> MahlerValue:
    """Mahler measure as the limit of one-variable specializations.

    The value is the Jensen measure at the last schedule tuple; the error
    estimate is the spread over the final three tuples.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.rank < 2:
        raise ValueError("need rank at least 2; use mahler_jensen instead")
    if schedule is None:
        schedule = default_bl_schedule(p)
    if not schedule:
        raise ValueError("empty specialization schedule")
    values = []
    for ks in schedule:
        q = p.specialize(ks)
        if q.is_zero():
            raise ValueError("specialization collapsed to zero at %r" % (tuple(ks),))
        values.append(mahler_jensen(q).value)
    tail = values[-3:]
    spread = max(tail) - min(tail)
    value = values[-1]
    return MahlerValue(value, math.log(value), "boyd_lawton", spread)
