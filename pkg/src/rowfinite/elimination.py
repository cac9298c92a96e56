"""Streaming rightmost-pivot Gauss-Jordan elimination over row-finite
matrices.

The engine consumes the rows of an infinite coefficient matrix one at a time
and maintains a reduced prefix in *quasi-Hermite form*: nonzero rows have
strictly increasing lengths, every rightmost coefficient is 1, every other
row has a zero in each pivot column, and zero rows stay pinned at the index
where they were produced.  Alongside the reduced rows it keeps transform
rows: the identity subjected to the same elementary operations, so that
``q_rows[n] . A == h_rows[n]`` entrywise for every consumed ``n``.

Each consumed row passes through three steps:

1. *Gaussian clearing* -- existing rightmost-1 pivots are applied, in
   increasing pivot-length order and repeating until none applies, after
   which the survivor is normalized so its own rightmost coefficient is 1.
   Any pivot order yields the same reduced row; this one is fixed for
   determinism.  The survivor's length always differs from every existing
   pivot length.
2. *Cross clearing* (the Jordan half) -- when the survivor's length falls
   strictly below the greatest existing pivot length, it is used as a pivot
   to zero the matching column of every stored row.  Row lengths are
   unchanged by this step.
3. *Placement* -- the survivor is inserted so nonzero-row lengths stay
   strictly increasing; displaced nonzero rows shift to later nonzero slots
   while zero rows keep their exact indices.

``gauss_only`` mode serves sources whose rows already arrive in strictly
increasing length order (lower echelon): steps 2-3 provably never fire there
and every prefix is final the moment it appears, so the reported prefixes are
certified.  For arbitrary sources stabilization is only empirical; the
engine records, per prefix index, the last step that changed it.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .rows import FiniteRow, ZERO_ROW
from .sources import RowSource

GAUSS_JORDAN = "gauss_jordan"
GAUSS_ONLY = "gauss_only"


class EngineError(RuntimeError):
    """An internal invariant of the elimination engine was violated."""


@dataclass(frozen=True)
class QhfPrefix:
    """The first n+1 reduced rows with their transform rows and, per row,
    the last step at which the prefix up to that row changed."""

    rows: Tuple[FiniteRow, ...]
    q_rows: Tuple[FiniteRow, ...]
    stable_since: Tuple[int, ...]
    certified: bool


class EliminationState:
    """Mutable engine state; single-owner, not safe for concurrent mutation.

    Attributes
    ----------
    h_rows, q_rows : reduced rows and matching transform rows, index-aligned.
    j_set, w_set   : positions of nonzero and of zero rows (both increasing).
    mu             : lengths of the nonzero rows in position order; strictly
                     increasing at all times.
    last_change    : per prefix index n, the last step k at which rows 0..n
                     differed from the previous step (creation counts).
    """

    def __init__(self, mode: str = GAUSS_JORDAN,
                 regular_order_index: Optional[int] = None):
        if mode not in (GAUSS_JORDAN, GAUSS_ONLY):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.regular_order_index = regular_order_index
        self.h_rows: List[FiniteRow] = []
        self.q_rows: List[FiniteRow] = []
        self.j_set: List[int] = []
        self.w_set: List[int] = []
        self.mu: List[int] = []
        self.last_change: List[int] = []

    @property
    def k(self) -> int:
        """Number of source rows consumed so far."""
        return len(self.h_rows)

    @property
    def certified(self) -> bool:
        return self.mode == GAUSS_ONLY

    @property
    def greatest_length(self) -> int:
        return self.mu[-1] if self.mu else -1

    # -- step 1: Gaussian clearing ------------------------------------------

    def reduce_with_transform(self, row: FiniteRow) -> Tuple[FiniteRow, FiniteRow]:
        """Clear ``row`` against the stored pivots without mutating the state.

        Returns the normalized survivor together with its transform row
        (the same combination applied to the identity row e_k).
        """
        work = row
        qwork = FiniteRow([(self.k, 1)])
        changed = True
        while changed and not work.is_zero:
            changed = False
            for rank, pos in enumerate(self.j_set):
                piv_len = self.mu[rank]
                if piv_len > work.length:
                    break
                c = work.get(piv_len)
                if c:
                    work = work.axpy(-c, self.h_rows[pos])
                    qwork = qwork.axpy(-c, self.q_rows[pos])
                    changed = True
                    if work.is_zero:
                        break
        if not work.is_zero:
            lead = work.leading
            if lead != 1:
                inv = 1 / lead
                work = work.scale(inv)
                qwork = qwork.scale(inv)
        return work, qwork

    def gaussian_reduce(self, row: FiniteRow) -> FiniteRow:
        """The survivor the next push would produce from ``row``."""
        return self.reduce_with_transform(row)[0]

    # -- step 2: cross clearing ----------------------------------------------

    def jordan_clear(self, g: FiniteRow, q_g: FiniteRow) -> List[int]:
        """Zero the column ``length(g)`` of every stored row using ``g``.

        ``g`` must be a Gaussian survivor whose length falls strictly below
        the greatest stored pivot length; violations indicate an engine bug.
        Returns the positions whose content changed.  Lengths of stored rows
        are never affected.
        """
        if g.is_zero:
            raise EngineError("cross clearing needs a nonzero pivot")
        lg = g.length
        if not self.mu or lg >= self.mu[-1]:
            raise EngineError("cross-clearing pivot does not fall below the prefix")
        rank = bisect_left(self.mu, lg)
        if rank < len(self.mu) and self.mu[rank] == lg:
            raise EngineError(f"pivot length {lg} collides with a stored pivot")
        changed = []
        for pos in self.j_set:
            c = self.h_rows[pos].get(lg)
            if c:
                self.h_rows[pos] = self.h_rows[pos].axpy(-c, g)
                self.q_rows[pos] = self.q_rows[pos].axpy(-c, q_g)
                changed.append(pos)
        return changed

    # -- step 3: placement -----------------------------------------------------

    def insert_with_permutation(self, g: FiniteRow, q_g: FiniteRow,
                                extra_changed: Iterable[int] = ()) -> List[int]:
        """Place a survivor, shifting nonzero rows as needed, and update the
        change markers (zero rows never move).  Returns changed positions."""
        k = self.k
        changed = set(extra_changed)
        if g.is_zero:
            self.h_rows.append(ZERO_ROW)
            self.q_rows.append(q_g)
            self.w_set.append(k)
        elif not self.mu or g.length > self.mu[-1]:
            self.h_rows.append(g)
            self.q_rows.append(q_g)
            self.j_set.append(k)
            self.mu.append(g.length)
        else:
            rank = bisect_left(self.mu, g.length)
            if rank < len(self.mu) and self.mu[rank] == g.length:
                raise EngineError(f"pivot length {g.length} collides with a stored pivot")
            targets = self.j_set[rank:] + [k]
            shifted_h = [g] + [self.h_rows[p] for p in self.j_set[rank:]]
            shifted_q = [q_g] + [self.q_rows[p] for p in self.j_set[rank:]]
            self.h_rows.append(ZERO_ROW)
            self.q_rows.append(ZERO_ROW)
            for pos, hrow, qrow in zip(targets, shifted_h, shifted_q):
                self.h_rows[pos] = hrow
                self.q_rows[pos] = qrow
            changed.update(targets[:-1])
            self.mu.insert(rank, g.length)
            self.j_set.append(k)
        if changed:
            for n in range(min(changed), k):
                self.last_change[n] = k
        self.last_change.append(k)
        return sorted(changed)

    # -- the full step ---------------------------------------------------------

    def push_row(self, row: FiniteRow) -> None:
        """Consume one source row, restoring every invariant."""
        g, q_g = self.reduce_with_transform(row)
        if g.is_zero or not self.mu or g.length > self.mu[-1]:
            self.insert_with_permutation(g, q_g)
        else:
            if self.mode == GAUSS_ONLY:
                raise EngineError(
                    "source tagged lower-echelon produced a length-decreasing row"
                )
            changed = self.jordan_clear(g, q_g)
            self.insert_with_permutation(g, q_g, extra_changed=changed)

    # -- reports ---------------------------------------------------------------

    def qhf_prefix(self, n: int) -> QhfPrefix:
        if not 0 <= n < self.k:
            raise IndexError(f"prefix {n} out of range (consumed {self.k} rows)")
        return QhfPrefix(
            rows=tuple(self.h_rows[: n + 1]),
            q_rows=tuple(self.q_rows[: n + 1]),
            stable_since=tuple(self.last_change[: n + 1]),
            certified=self.certified,
        )

    def left_null_basis(self) -> List[FiniteRow]:
        """Transform rows sitting at zero-row positions; each annihilates
        every consumed row of the source."""
        return [self.q_rows[w] for w in self.w_set]

    def verify_left_association(self, source: RowSource) -> bool:
        """True iff the transform rows exactly reproduce the reduced rows
        from the source: q_rows[n] . A == h_rows[n] for every consumed n."""
        for n in range(self.k):
            acc = ZERO_ROW
            for m, c in self.q_rows[n].items():
                if m >= self.k:
                    return False
                acc = acc.axpy(c, source.row_at(m))
            if acc != self.h_rows[n]:
                return False
        return True


def run(source: RowSource, horizon: int) -> EliminationState:
    """Push rows 0..horizon-1 of the source; gauss_only for lower-echelon
    sources, full mode otherwise."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    mode = GAUSS_ONLY if source.lower_echelon else GAUSS_JORDAN
    state = EliminationState(mode=mode,
                             regular_order_index=source.regular_order_index)
    for n in range(horizon):
        state.push_row(source.row_at(n))
    return state


def check_invariants(state: EliminationState) -> None:
    """Raise EngineError unless the state satisfies every structural
    invariant: the quasi-Hermite postulates on nonzero rows, pinned zero
    rows, coherent index sets, and nonzero transform rows."""
    k = state.k
    if sorted(state.j_set + state.w_set) != list(range(k)):
        raise EngineError("j_set and w_set do not partition the consumed range")
    if len(state.mu) != len(state.j_set):
        raise EngineError("mu and j_set lengths differ")
    if any(b <= a for a, b in zip(state.mu, state.mu[1:])):
        raise EngineError("pivot lengths are not strictly increasing")
    for w in state.w_set:
        if not state.h_rows[w].is_zero:
            raise EngineError(f"row {w} is indexed as zero but is not")
    pivots = list(zip(state.j_set, state.mu))
    for pos, length in pivots:
        row = state.h_rows[pos]
        if row.is_zero or row.length != length:
            raise EngineError(f"row {pos} does not carry pivot length {length}")
        if row.leading != 1:
            raise EngineError(f"row {pos} rightmost coefficient is {row.leading}, not 1")
    for m in range(k):
        row = state.h_rows[m]
        for pos, length in pivots:
            if pos != m and row.get(length) != 0:
                raise EngineError(
                    f"row {m} has a nonzero entry in pivot column {length} of row {pos}"
                )
    for n in range(k):
        q = state.q_rows[n]
        if q.is_zero:
            raise EngineError(f"transform row {n} is zero")
        if q.length >= k:
            raise EngineError(f"transform row {n} references unconsumed rows")
