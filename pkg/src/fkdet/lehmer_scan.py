"""Exhaustive search for generalized Lehmer constants.

Lambda(G) is the infimum of Fuglede-Kadison determinants above 1 over
integer matrices over the group ring, Lambda_1 restricts to single ring
elements, and the ^w variants restrict to injective operators.  A scan
enumerates a finite search space (bounded coefficients, optionally bounded
support), quotients it by the determinant-preserving symmetries (global
sign, monomial multiplication, adjoint), classifies each candidate as
determinant one or greater, and reports the least value above the
threshold together with the witness attaining it.  The scan certifies the
stated finite space only; known exact values for small groups live in a
separate table.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .fk_finite import (
    FiniteGroup,
    FiniteGroupRingElement,
    FiniteGroupRingMatrix,
    fk_det_finite,
    format_element,
    vn_dim_kernel_finite,
)
from .fk_zd import fk_det_zd, vn_dim_kernel_zd
from .laurent import (
    GroupRingMatrix,
    LaurentPolynomial,
    format_polynomial,
    matrix_from_json,
    matrix_to_json,
    parse_polynomial,
)
from .mahler import UNIT_BAND, _thread_count, log_mahler_quadrature, roots_one_var
from .values import FKValue, Radical

VARIANTS = ("lambda", "lambda_1", "lambda_w", "lambda_w_1")

# a computed determinant below 1 + this counts as "determinant one" and is
# excluded from the infimum; every report carries the threshold it used
DEFAULT_ONE_THRESHOLD = 1e-9

# one-variable candidates with unit leading coefficient and all root moduli
# below 1 + this band are classified as determinant one exactly (they are
# monomial multiples of products of cyclotomic polynomials)
CYCLOTOMIC_ROOT_BAND = 1e-10

DEFAULT_BUDGET_ELEMENTS = 10**7
DEFAULT_BUDGET_MATRICES = 10**5

# refuse spaces whose raw enumeration cannot finish at desk scale
RAW_ENUMERATION_CAP = 5 * 10**7

_BATCH = 1024


@dataclass(frozen=True)
class SearchSpace:
    """A finite family of integer matrices over one group ring.

    Exactly one of ``group`` (a finite group) or ``rank``/``box`` (Z^d with
    entry exponents confined to the box ``0..box[i]`` per axis) describes
    the ring.  ``shape`` is the matrix size, ``coeff_bound`` the largest
    coefficient magnitude, and ``support`` optionally caps the number of
    nonzero coefficients across the whole candidate.
    """

    group: FiniteGroup | None = None
    rank: int = 0
    box: tuple = ()
    shape: tuple = (1, 1)
    coeff_bound: int = 1
    support: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(x) for x in self.shape))
        object.__setattr__(self, "box", tuple(int(b) for b in self.box))
        if self.group is not None:
            if not isinstance(self.group, FiniteGroup):
                raise ValueError("group must be a FiniteGroup")
            if self.rank or self.box:
                raise ValueError("give either a finite group or a rank and box")
        else:
            if self.rank < 1:
                raise ValueError("need a finite group or a rank >= 1")
            if len(self.box) != self.rank:
                raise ValueError(f"box {self.box} does not have rank {self.rank}")
            if any(b < 0 for b in self.box):
                raise ValueError("box entries must be nonnegative")
        if len(self.shape) != 2 or any(x < 1 for x in self.shape):
            raise ValueError(f"shape must be two positive integers, got {self.shape}")
        if self.coeff_bound < 1:
            raise ValueError("coefficient bound must be at least 1")
        if self.support is not None and self.support < 1:
            raise ValueError("support bound must be at least 1")

    def positions(self) -> int:
        r, s = self.shape
        if self.group is not None:
            return r * s * self.group.order
        return r * s * math.prod(b + 1 for b in self.box)

    def raw_count(self) -> int:
        """Vectors enumerated before symmetry reduction (zero excluded)."""
        p = self.positions()
        c = self.coeff_bound
        if self.support is None or self.support >= p:
            return (2 * c + 1) ** p - 1
        return sum(
            math.comb(p, j) * (2 * c) ** j for j in range(1, self.support + 1)
        )

    def as_json(self) -> dict:
        if self.group is not None:
            ring = {"kind": self.group.kind, "order": self.group.order}
        else:
            ring = {"kind": "zd", "rank": self.rank, "box": list(self.box)}
        return {
            "ring": ring,
            "shape": list(self.shape),
            "coeff_bound": self.coeff_bound,
            "support": self.support,
        }


@dataclass(frozen=True)
class ScanReport:
    """Outcome of one exhaustive scan.

    ``infimum_found`` is the least determinant classified above 1, None
    when no candidate qualified.  ``count_examined`` counts symmetry-orbit
    representatives; candidates identical up to sign, monomial
    multiplication, or adjoint are examined once.
    """

    space: SearchSpace
    variant: str
    infimum_found: FKValue | None
    witness: dict | None
    count_examined: int
    count_det_one: int
    one_threshold: float
    budget: int
    budget_exceeded: bool
    survey: tuple | None = None

    def as_json(self) -> dict:
        out = {
            "space": self.space.as_json(),
            "variant": self.variant,
            "infimum_found": (
                None if self.infimum_found is None else self.infimum_found.as_json()
            ),
            "witness": self.witness,
            "count_examined": self.count_examined,
            "count_det_one": self.count_det_one,
            "one_threshold": self.one_threshold,
            "budget": self.budget,
            "budget_exceeded": self.budget_exceeded,
        }
        if self.survey is not None:
            out["survey"] = [{"witness": w, "value": v} for w, v in self.survey]
        return out


def survey_to_csv(report: ScanReport) -> str:
    """Survey rows (witness, value) as CSV; header only when no survey ran."""
    lines = ["witness,value"]
    for text, value in report.survey or ():
        lines.append('"%s",%r' % (text.replace('"', '""'), value))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# candidate enumeration


def _vectors(positions: int, bound: int, support: int | None):
    """All nonzero integer vectors in the box, deterministically ordered.

    Without a support cap the order is descending lexicographic, so the
    greatest member of a symmetry orbit is seen first and ties in the
    infimum resolve to it; with a support cap the stream is graded by
    support size first, which keeps sparse spaces enumerable without
    touching the dense box.
    """
    if support is None or support >= positions:
        for v in itertools.product(range(bound, -bound - 1, -1), repeat=positions):
            if any(v):
                yield v
        return
    nonzero = list(range(bound, 0, -1)) + list(range(-1, -bound - 1, -1))
    for j in range(1, support + 1):
        for pos in itertools.combinations(range(positions), j):
            for vals in itertools.product(nonzero, repeat=j):
                v = [0] * positions
                for p, c in zip(pos, vals):
                    v[p] = c
                yield tuple(v)


def _neg(vec: tuple) -> tuple:
    return tuple(-x for x in vec)


class _FiniteSpace:
    """Enumeration context for matrices over a finite group ring."""

    def __init__(self, space: SearchSpace):
        self.space = space
        self.group = space.group
        self.rows, self.cols = space.shape
        n = self.group.order
        self.n = n
        p = space.positions()
        # left translation by g permutes each entry's coefficients
        self.translations = []
        for g in range(n):
            row = self.group.table[g]
            dest = [0] * p
            for idx in range(p):
                e, h = divmod(idx, n)
                dest[idx] = e * n + row[h]
            self.translations.append(tuple(dest))
        self.adjoint_src: tuple | None = None
        if self.rows == self.cols:
            inv = self.group.inverses
            src = [0] * p
            for i in range(self.rows):
                for j in range(self.cols):
                    for h in range(n):
                        src[(i * self.cols + j) * n + h] = (
                            j * self.cols + i
                        ) * n + inv[h]
            self.adjoint_src = tuple(src)

    def stream(self):
        space = self.space
        for vec in _vectors(space.positions(), space.coeff_bound, space.support):
            if self._is_canonical(vec):
                yield vec

    def _is_canonical(self, vec: tuple) -> bool:
        p = len(vec)
        for dest in self.translations:
            t = [0] * p
            for idx in range(p):
                t[dest[idx]] = vec[idx]
            t = tuple(t)
            if t > vec or _neg(t) > vec:
                return False
            if self.adjoint_src is not None:
                a = tuple(t[s] for s in self.adjoint_src)
                if a > vec or _neg(a) > vec:
                    return False
        return True

    def build(self, vec: tuple) -> FiniteGroupRingMatrix:
        n = self.n
        rows = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                base = (i * self.cols + j) * n
                row.append(
                    FiniteGroupRingElement(self.group, vec[base : base + n])
                )
            rows.append(row)
        return FiniteGroupRingMatrix(self.group, rows)

    def injective(self, m: FiniteGroupRingMatrix) -> bool:
        return vn_dim_kernel_finite(m) == 0

    def evaluate(self, m, one_threshold, grid_size, threads):
        v = fk_det_finite(m)
        return v, v.value < 1.0 + one_threshold

    def entry_texts(self, m) -> list:
        return [format_element(x) for row in m.entries for x in row]

    def witness_json(self, m) -> dict:
        if self.space.shape == (1, 1):
            x = m.entries[0][0]
            return {
                "kind": "element",
                "text": format_element(x),
                "coeffs": [int(c) for c in x.coeffs],
            }
        return {
            "kind": "matrix",
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entry_texts(m),
            "coeffs": [
                [int(c) for c in x.coeffs] for row in m.entries for x in row
            ],
        }


class _LaurentSpace:
    """Enumeration context for matrices over Q[Z^d] with a degree box."""

    def __init__(self, space: SearchSpace):
        self.space = space
        self.rank = space.rank
        self.rows, self.cols = space.shape
        self.exps = list(itertools.product(*[range(b + 1) for b in space.box]))
        self.block = len(self.exps)
        self.strides = [0] * self.rank
        acc = 1
        for a in range(self.rank - 1, -1, -1):
            self.strides[a] = acc
            acc *= space.box[a] + 1

    def stream(self):
        space = self.space
        for vec in _vectors(space.positions(), space.coeff_bound, space.support):
            support = [i for i, x in enumerate(vec) if x]
            if not self._is_shifted_down(support):
                continue
            if self._is_canonical(vec, support):
                yield vec

    def _is_shifted_down(self, support: list) -> bool:
        # monomial shifts are quotiented by anchoring the combined support
        # to exponent 0 on every axis
        for a in range(self.rank):
            if min(self.exps[i % self.block][a] for i in support) != 0:
                return False
        return True

    def _reverse(self, vec: tuple, support: list) -> tuple | None:
        if self.rows != self.cols:
            return None
        top = [
            max(self.exps[i % self.block][a] for i in support)
            for a in range(self.rank)
        ]
        out = [0] * len(vec)
        for i in support:
            entry, t = divmod(i, self.block)
            ei, ej = divmod(entry, self.cols)
            e = self.exps[t]
            dest_t = sum(
                (top[a] - e[a]) * self.strides[a] for a in range(self.rank)
            )
            out[(ej * self.cols + ei) * self.block + dest_t] = vec[i]
        return tuple(out)

    def _is_canonical(self, vec: tuple, support: list) -> bool:
        if _neg(vec) > vec:
            return False
        rev = self._reverse(vec, support)
        if rev is not None and (rev > vec or _neg(rev) > vec):
            return False
        return True

    def build(self, vec: tuple) -> GroupRingMatrix:
        rows = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                base = (i * self.cols + j) * self.block
                terms = {}
                for t in range(self.block):
                    c = vec[base + t]
                    if c:
                        terms[self.exps[t]] = Fraction(c)
                row.append(LaurentPolynomial(self.rank, terms))
            rows.append(row)
        return GroupRingMatrix(rows, rank=self.rank)

    def injective(self, m: GroupRingMatrix) -> bool:
        if self.space.shape == (1, 1):
            return not m.entries[0][0].is_zero()
        return vn_dim_kernel_zd(m) == 0

    def evaluate(self, m, one_threshold, grid_size, threads):
        if self.space.shape == (1, 1):
            return _poly_det(m.entries[0][0], one_threshold, grid_size, threads)
        v = fk_det_zd(m, "auto", grid_size=grid_size, threads=threads).value
        return v, v.value < 1.0 + one_threshold

    def entry_texts(self, m) -> list:
        return [format_polynomial(p) for row in m.entries for p in row]

    def witness_json(self, m) -> dict:
        if self.space.shape == (1, 1):
            return {
                "kind": "element",
                "rank": self.rank,
                "text": format_polynomial(m.entries[0][0]),
            }
        return {"kind": "matrix", **matrix_to_json(m)}


def _collinear_image(p: LaurentPolynomial) -> LaurentPolynomial | None:
    """One-variable polynomial with the same measure, if the support is
    collinear; the substitution z -> z^v along a primitive direction and a
    monomial shift both leave the Mahler measure unchanged."""
    pts = sorted(p.terms)
    base = pts[0]
    diffs = [tuple(x - y for x, y in zip(e, base)) for e in pts[1:]]
    v = diffs[0]
    g = 0
    for x in v:
        g = math.gcd(g, abs(x))
    v = tuple(x // g for x in v)
    j0 = next(i for i, x in enumerate(v) if x)
    ts = [0]
    for d in diffs:
        t = d[j0] // v[j0]
        if tuple(t * x for x in v) != d:
            return None
        ts.append(t)
    return LaurentPolynomial(1, {(t,): p.terms[e] for t, e in zip(ts, pts)})


def _poly_det(p, one_threshold, grid_size, threads):
    """Determinant of one nonzero element of Q[Z^d] plus its classification."""
    if len(p.terms) == 1:
        c = abs(next(iter(p.terms.values())))
        exact = Radical(c.numerator) if c.denominator == 1 and c >= 1 else None
        v = FKValue(float(c), "jensen", 0.0, exact)
        return v, v.value < 1.0 + one_threshold
    line = _collinear_image(p)
    if line is not None:
        data = roots_one_var(line)
        log_m = math.log(data.lead_abs)
        for a in data.roots:
            m = abs(a)
            if m > 1.0 + UNIT_BAND:
                log_m += math.log(m)
        value = math.exp(log_m)
        error = value * (data.residual * max(1, len(data.roots)) + 1e-15)
        cyclotomic = data.lead_abs == 1.0 and all(
            abs(a) <= 1.0 + CYCLOTOMIC_ROOT_BAND for a in data.roots
        )
        v = FKValue(value, "jensen", error)
        return v, cyclotomic or value < 1.0 + one_threshold
    mv = log_mahler_quadrature(p, grid_size, threads)
    v = FKValue(mv.value, mv.method, mv.error_estimate)
    return v, mv.value < 1.0 + one_threshold


def _context(space: SearchSpace):
    return _FiniteSpace(space) if space.group is not None else _LaurentSpace(space)


def _matrix_text(texts: list, rows: int, cols: int) -> str:
    return "[%s]" % "; ".join(
        ", ".join(texts[i * cols : (i + 1) * cols]) for i in range(rows)
    )


def scan(
    space: SearchSpace,
    variant: str,
    *,
    budget: int | None = None,
    one_threshold: float = DEFAULT_ONE_THRESHOLD,
    grid_size: int = 256,
    survey: bool = False,
    threads: int | None = None,
) -> ScanReport:
    """Exhaust the space and report the least determinant above 1.

    The weak variants discard candidates that are not injective before any
    determinant is computed.  ``budget`` caps determinant evaluations; a
    scan that hits it stops and returns a partial report flagged
    ``budget_exceeded``.  Ties in the infimum keep the earliest candidate
    in enumeration order, so reports are deterministic for a fixed space.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if variant in ("lambda_1", "lambda_w_1") and space.shape != (1, 1):
        raise ValueError("the _1 constants range over ring elements; use shape (1, 1)")
    weak = variant in ("lambda_w", "lambda_w_1")
    if budget is None:
        budget = (
            DEFAULT_BUDGET_ELEMENTS
            if space.shape == (1, 1)
            else DEFAULT_BUDGET_MATRICES
        )
    if budget < 1:
        raise ValueError("budget must be at least 1")
    raw = space.raw_count()
    if raw > RAW_ENUMERATION_CAP:
        raise ValueError(
            f"space has {raw} raw candidates, over the enumeration cap "
            f"{RAW_ENUMERATION_CAP}; shrink the box or add a support bound"
        )

    ctx = _context(space)
    workers = _thread_count(threads)
    inner_threads = 1 if workers > 1 else threads

    examined = 0
    evaluated = 0
    det_one = 0
    exceeded = False
    best = None  # (value, FKValue, matrix)
    rows: list = []

    def run_batch(batch, pool):
        nonlocal det_one, best
        if pool is not None:
            results = list(
                pool.map(
                    lambda m: ctx.evaluate(m, one_threshold, grid_size, inner_threads),
                    batch,
                )
            )
        else:
            results = [
                ctx.evaluate(m, one_threshold, grid_size, inner_threads)
                for m in batch
            ]
        for m, (value, is_one) in zip(batch, results):
            if is_one:
                det_one += 1
                continue
            if survey and value.value <= 1.5:
                texts = ctx.entry_texts(m)
                text = (
                    texts[0]
                    if space.shape == (1, 1)
                    else _matrix_text(texts, *space.shape)
                )
                rows.append((text, value.value))
            if best is None or value.value < best[0]:
                best = (value.value, value, m)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        batch: list = []
        for vec in ctx.stream():
            m = ctx.build(vec)
            admit = not weak or ctx.injective(m)
            if admit and evaluated >= budget:
                exceeded = True
                break
            examined += 1
            if not admit:
                continue
            evaluated += 1
            batch.append(m)
            if len(batch) >= _BATCH:
                run_batch(batch, pool)
                batch = []
        if batch:
            run_batch(batch, pool)
    finally:
        if pool is not None:
            pool.shutdown()

    return ScanReport(
        space=space,
        variant=variant,
        infimum_found=None if best is None else best[1],
        witness=None if best is None else ctx.witness_json(best[2]),
        count_examined=examined,
        count_det_one=det_one,
        one_threshold=one_threshold,
        budget=budget,
        budget_exceeded=exceeded,
        survey=tuple(rows) if survey else None,
    )


def witness_value(
    space: SearchSpace,
    witness: dict,
    *,
    one_threshold: float = DEFAULT_ONE_THRESHOLD,
    grid_size: int = 256,
    threads: int | None = None,
) -> FKValue:
    """Re-evaluate a reported witness through the same determinant path."""
    if space.group is not None:
        if witness["kind"] == "element":
            m = FiniteGroupRingMatrix.from_element(
                FiniteGroupRingElement(space.group, witness["coeffs"])
            )
        else:
            rows, cols = witness["rows"], witness["cols"]
            coeffs = witness["coeffs"]
            m = FiniteGroupRingMatrix(
                space.group,
                [
                    [
                        FiniteGroupRingElement(
                            space.group, coeffs[i * cols + j]
                        )
                        for j in range(cols)
                    ]
                    for i in range(rows)
                ],
            )
        return fk_det_finite(m)
    if witness["kind"] == "element":
        p = parse_polynomial(witness["text"], rank=space.rank)
        value, _ = _poly_det(p, one_threshold, grid_size, threads)
        return value
    m = matrix_from_json(witness)
    return fk_det_zd(m, "auto", grid_size=grid_size, threads=threads).value


# ---------------------------------------------------------------------------
# known exact values


def _element_order(g: FiniteGroup, x: int) -> int:
    k = 1
    y = x
    while y != g.identity:
        y = g.table[y][x]
        k += 1
    return k


def _is_cyclic(g: FiniteGroup) -> bool:
    return any(_element_order(g, x) == g.order for x in range(g.order))


def exact_constants(g: FiniteGroup) -> dict:
    """Known values and two-sided bounds of the four constants for ``g``.

    Exact radicals exist for the trivial group, Z/2, and the weak constants
    of odd cyclic groups; every other finite group of order >= 3 gets the
    generic bounds 2**(1/(2n)) <= Lambda <= (n-1)**(1/n) and
    2**(1/n) <= Lambda^w <= (n-1)**(1/n).
    """
    if not isinstance(g, FiniteGroup):
        raise ValueError("exact constants are tabulated for finite groups only")
    n = g.order
    if n == 1:
        return {
            "lambda": {"exact": Radical(2, Fraction(1, 2))},
            "lambda_1": {"exact": Radical(2)},
            "lambda_w": {"exact": Radical(2)},
            "lambda_w_1": {"exact": Radical(2)},
        }
    if n == 2:
        return {
            "lambda": {
                "lower": Radical(2, Fraction(1, 4)),
                "upper": Radical(2, Fraction(1, 2)),
            },
            "lambda_1": {"exact": Radical(2, Fraction(1, 2))},
            "lambda_w": {"exact": Radical(3, Fraction(1, 2))},
            "lambda_w_1": {"exact": Radical(3, Fraction(1, 2))},
        }
    generic = {
        "lambda": {
            "lower": Radical(2, Fraction(1, 2 * n)),
            "upper": Radical(n - 1, Fraction(1, n)),
        },
        "lambda_w": {
            "lower": Radical(2, Fraction(1, n)),
            "upper": Radical(n - 1, Fraction(1, n)),
        },
    }
    if n % 2 == 1 and _is_cyclic(g):
        generic["lambda_w"] = {"exact": Radical(2, Fraction(1, n))}
        generic["lambda_w_1"] = {"exact": Radical(2, Fraction(1, n))}
    return generic


def constants_to_json(table: dict) -> dict:
    return {
        variant: {key: r.as_json() for key, r in row.items()}
        for variant, row in table.items()
    }


def torsion_bound_check(m: int) -> float:
    """(m - 1)**(1/m): an upper bound for Lambda^w_1 of any group with an
    order-m finite subgroup; decreases to 1 as m grows."""
    if m < 3:
        raise ValueError("need m >= 3")
    return (m - 1) ** (1.0 / m)
