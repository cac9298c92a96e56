"""Closed-form solution terms for regular-order equations as determinants of
lower Hessenberg matrices with unit superdiagonal.

A regular-order equation in *normal form* reads, for n >= 0,

    y_n + a(n, N+n-1) y_{n-1} + ... + a(n, 1) y_{1-N} + a(n, 0) y_{-N} = g_n,

with N initial values y_{-N}..y_{-1}.  Each solution term is, up to sign, the
determinant of a lower Hessenberg matrix whose band holds the equation
coefficients a(r, N+c-1) and whose first column distinguishes the solution
kind: column i of the coefficients for the i-th fundamental sequence, the
forcing terms for a particular solution, and the forcing terms minus the
weighted initial values for the full general solution.

Because the superdiagonal is identically 1, expanding along the last row
gives the division-free recurrence

    d_k = sum_{j=0..k} (-1)^(k-j) m[k][j] d_{j-1},   d_{-1} = 1,

which evaluates every leading principal determinant in one quadratic pass.
All prefix functions below share that pass, so asking for a whole prefix
costs the same as asking for its last term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

from .rows import Scalar, ScalarLike, as_scalar
from .sources import RowSource, SpecError


@dataclass(frozen=True)
class LowerHessenberg:
    """A square lower Hessenberg matrix with implicit unit superdiagonal.

    ``first_column[r]`` is entry (r, 0); ``band[r]`` holds entries
    (r, 1)..(r, r).  Entries (r, r+1) are 1 and everything above them is 0.
    """

    first_column: Tuple[Scalar, ...]
    band: Tuple[Tuple[Scalar, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "first_column",
                           tuple(as_scalar(v) for v in self.first_column))
        object.__setattr__(self, "band",
                           tuple(tuple(as_scalar(v) for v in row) for row in self.band))
        if len(self.band) != len(self.first_column):
            raise ValueError("band must have one tuple per row")
        for r, row in enumerate(self.band):
            if len(row) != r:
                raise ValueError(f"band row {r} must have {r} entries, got {len(row)}")

    @property
    def order(self) -> int:
        return len(self.first_column)

    def entry(self, r: int, c: int) -> Scalar:
        if c == 0:
            return self.first_column[r]
        if c <= r:
            return self.band[r][c - 1]
        if c == r + 1:
            return Fraction(1)
        return Fraction(0)

    def to_dense(self) -> List[List[Scalar]]:
        n = self.order
        return [[self.entry(r, c) for c in range(n)] for r in range(n)]


def _det_prefix(entry: Callable[[int, int], Scalar], count: int) -> List[Scalar]:
    """Determinants of the leading principal minors of orders 1..count, for a
    lower Hessenberg matrix with unit superdiagonal given entrywise."""
    dets: List[Scalar] = []
    for k in range(count):
        acc = Fraction(0)
        sign = 1
        for j in range(k, -1, -1):
            prev = dets[j - 1] if j >= 1 else Fraction(1)
            if prev:
                m = entry(k, j)
                if m:
                    acc += sign * m * prev
            sign = -sign
        dets.append(acc)
    return dets


def hess_det(matrix: LowerHessenberg) -> Scalar:
    """Exact determinant by last-row expansion; quadratic, division-free."""
    if matrix.order == 0:
        return Fraction(1)
    return _det_prefix(matrix.entry, matrix.order)[-1]


@dataclass(frozen=True)
class HessSpec:
    """A regular-order equation in normal form.

    ``coeff(n, j)`` is defined for 0 <= j <= n+index-1; the coefficient of
    y_n itself is implicitly 1.  ``forcing(n)`` is the right-hand side and
    ``init`` holds y_{-N}..y_{-1}.
    """

    index: int
    coeff: Callable[[int, int], Scalar]
    forcing: Callable[[int], Scalar]
    init: Tuple[Scalar, ...] = field(default=())

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("index must be nonnegative")
        object.__setattr__(self, "init", tuple(as_scalar(v) for v in self.init))


def _zero_forcing(n: int) -> Scalar:
    return Fraction(0)


def hess_spec_from_source(source: RowSource, g: Optional[Sequence[ScalarLike]] = None,
                          init: Sequence[ScalarLike] = ()) -> HessSpec:
    """Normalize a regular-order source: each row and its forcing term are
    divided by the trailing coefficient so the superdiagonal becomes 1."""
    order = source.regular_order_index
    if order is None:
        raise SpecError("source is not tagged with a regular order index")
    g_vals = None if g is None else [as_scalar(v) for v in g]

    @lru_cache(maxsize=None)
    def fetch(n: int):
        row = source.row_at(n)
        return row, row.get(n + order)

    def coeff(n: int, j: int) -> Scalar:
        row, lead = fetch(n)
        return row.get(j) / lead

    if g_vals is None:
        forcing = _zero_forcing
    else:
        def forcing(n: int) -> Scalar:
            if n >= len(g_vals):
                raise ValueError(
                    f"forcing prefix has {len(g_vals)} terms, term {n} requested"
                )
            return g_vals[n] / fetch(n)[1]

    return HessSpec(index=order, coeff=coeff, forcing=forcing, init=init)


def _band_entry(spec: HessSpec, k: int, j: int) -> Scalar:
    # matrix entry (k, j) for j >= 1 is the coefficient at column index+j-1
    return spec.coeff(k, spec.index + j - 1)


def _signed_prefix(spec: HessSpec, first: Callable[[int], Scalar], count: int,
                   odd_sign: bool) -> List[Scalar]:
    def entry(k, j):
        return first(k) if j == 0 else _band_entry(spec, k, j)

    dets = _det_prefix(entry, count)
    if odd_sign:
        return [d if k % 2 else -d for k, d in enumerate(dets)]
    return [-d if k % 2 else d for k, d in enumerate(dets)]


def xi_prefix(spec: HessSpec, i: int, count: int) -> List[Scalar]:
    """Terms 0..count-1 of the i-th fundamental sequence (sign (-1)^(n+1))."""
    if not 0 <= i < spec.index:
        raise ValueError(f"fundamental index {i} outside 0..{spec.index - 1}")
    return _signed_prefix(spec, lambda k: spec.coeff(k, i), count, odd_sign=True)


def xi_term(spec: HessSpec, i: int, n: int) -> Scalar:
    """General term of the i-th fundamental sequence; for n in [-N, -1] the
    initial pattern is 1 at n = i-N and 0 elsewhere."""
    if not 0 <= i < spec.index:
        raise ValueError(f"fundamental index {i} outside 0..{spec.index - 1}")
    if n < -spec.index:
        raise ValueError(f"term {n} precedes the initial segment")
    if n < 0:
        return Fraction(1) if n == i - spec.index else Fraction(0)
    return xi_prefix(spec, i, n + 1)[-1]


def particular_prefix(spec: HessSpec, count: int) -> List[Scalar]:
    """Terms 0..count-1 of the particular solution with zero initial values
    (sign (-1)^n, forcing terms in the first column)."""
    return _signed_prefix(spec, spec.forcing, count, odd_sign=False)


def particular_term(spec: HessSpec, n: int) -> Scalar:
    if n < -spec.index:
        raise ValueError(f"term {n} precedes the initial segment")
    if n < 0:
        return Fraction(0)
    return particular_prefix(spec, n + 1)[-1]


def _general_first(spec: HessSpec) -> Callable[[int], Scalar]:
    if len(spec.init) != spec.index:
        raise ValueError(f"expected {spec.index} initial values, got {len(spec.init)}")

    def first(k: int) -> Scalar:
        value = spec.forcing(k)
        for i, y0 in enumerate(spec.init):
            if y0:
                value -= spec.coeff(k, i) * y0
        return value

    return first


def general_prefix(spec: HessSpec, count: int) -> List[Scalar]:
    """Terms 0..count-1 of the unique solution as single determinants whose
    first column folds the initial values into the forcing terms."""
    return _signed_prefix(spec, _general_first(spec), count, odd_sign=False)


def general_term(spec: HessSpec, n: int) -> Scalar:
    """General solution term; n in [-N, -1] returns the initial value."""
    if n < -spec.index:
        raise ValueError(f"term {n} precedes the initial segment")
    if n < 0:
        if len(spec.init) != spec.index:
            raise ValueError(f"expected {spec.index} initial values, got {len(spec.init)}")
        return spec.init[n + spec.index]
    return general_prefix(spec, n + 1)[-1]


def superposed_prefix(spec: HessSpec, count: int) -> List[Scalar]:
    """Terms 0..count-1 assembled as particular plus weighted fundamental
    sequences; must agree with general_prefix exactly (multilinearity of the
    determinant in its first column)."""
    if len(spec.init) != spec.index:
        raise ValueError(f"expected {spec.index} initial values, got {len(spec.init)}")
    total = particular_prefix(spec, count)
    for i, y0 in enumerate(spec.init):
        if y0:
            xi = xi_prefix(spec, i, count)
            total = [t + y0 * x for t, x in zip(total, xi)]
    return total
