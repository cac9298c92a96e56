import random
from fractions import Fraction

import pytest

from rowfinite import FiniteRow, build_family, check_invariants


def naive_det(dense):
    """Cofactor expansion along the first row; exponential-time oracle."""
    n = len(dense)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(dense[0][0])
    total = Fraction(0)
    for c in range(n):
        if dense[0][c] == 0:
            continue
        minor = [row[:c] + row[c + 1:] for row in dense[1:]]
        total += (-1) ** c * dense[0][c] * naive_det(minor)
    return total


def random_explicit_rows(rng, max_rows=30, max_len=13):
    """Random sparse integer rows in [-9, 9], with occasional zero rows and
    repeats/negations of earlier rows so the left-null machinery fires."""
    rows = []
    for _ in range(rng.randint(1, max_rows)):
        roll = rng.random()
        nonzero = [r for r in rows if not r.is_zero]
        if roll < 0.10:
            rows.append(FiniteRow())
        elif roll < 0.25 and nonzero:
            base = rng.choice(nonzero)
            rows.append(base if rng.random() < 0.5 else base.scale(-1))
        else:
            length = rng.randint(0, max_len)
            entries = [(col, rng.randint(-9, 9))
                       for col in range(length) if rng.random() < 0.45]
            entries.append((length, rng.choice([v for v in range(-9, 10) if v])))
            rows.append(FiniteRow(entries))
    return rows


def random_regular_source(rng, order, horizon, shape):
    """A random regular-order source of the given shape with rational
    coefficients, defined for rows 0..horizon-1."""
    table = {}
    for n in range(horizon):
        lo = n if shape == "n_order" else 0
        for j in range(lo, n + order):
            table[(n, j)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        lead = Fraction(rng.choice([v for v in range(-4, 5) if v]),
                        rng.randint(1, 3))
        table[(n, n + order)] = lead
    return build_family({
        "family": shape,
        "N": order,
        "a": lambda n, j: table.get((n, j), Fraction(0)),
    })


def random_scalar(rng, span=9, max_den=4):
    return Fraction(rng.randint(-span, span), rng.randint(1, max_den))


def dense_rank(rows, width):
    """Rank of a dense rational matrix by plain forward elimination;
    independent of the streaming engine."""
    m = [[Fraction(v) for v in r.to_dense(width)] for r in rows]
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [a - c * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def push_checked(state, row):
    state.push_row(row)
    check_invariants(state)


@pytest.fixture
def rng():
    return random.Random(20240817)
