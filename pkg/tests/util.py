"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from dynwed.core import DEL, INS, SUB, Edit, EditScript, WeightTable, symbols


def random_table(rng: np.random.Generator, sigma: int, den: int, hi_units: int = 4) -> WeightTable:
    """Normalized table with off-diagonal numerators in [den, hi_units*den]."""
    cells = rng.integers(den, hi_units * den + 1, size=(sigma + 1, sigma + 1))
    np.fill_diagonal(cells, 0)
    return WeightTable(sigma, den, cells)


def random_string(rng: np.random.Generator, n: int, sigma: int):
    return symbols(rng.integers(0, sigma, size=n))


def random_script(rng: np.random.Generator, s, sigma: int, max_edits: int) -> EditScript:
    """Random canonical script against source s."""
    cur = list(int(v) for v in s)
    raw = []
    n_edits = int(rng.integers(0, max_edits + 1))
    # Build edits against the *source* coordinates: pick distinct anchor
    # positions, optionally stacking inserts before a sub/del.
    positions = sorted(rng.choice(len(cur) + 1, size=min(n_edits, len(cur) + 1), replace=False))
    budget = n_edits
    for pos in positions:
        if budget <= 0:
            break
        kind = rng.choice([INS, DEL, SUB]) if pos < len(cur) else INS
        if kind == INS:
            raw.append(Edit(INS, int(pos), int(rng.integers(0, sigma))))
        elif kind == DEL:
            raw.append(Edit(DEL, int(pos)))
        else:
            other = (cur[pos] + 1 + int(rng.integers(0, sigma - 1))) % sigma
            raw.append(Edit(SUB, int(pos), other))
        budget -= 1
    return EditScript(raw)


def random_monge(rng: np.random.Generator, p: int, q: int, scale: int = 8) -> np.ndarray:
    """Random Monge matrix: anti-cumulative sums of a nonnegative density."""
    density = rng.integers(0, scale, size=(p, q))
    m = np.cumsum(density, axis=0)
    m = np.cumsum(m[:, ::-1], axis=1)[:, ::-1]
    rows = rng.integers(0, 10 * scale, size=(p, 1))
    cols = rng.integers(0, 10 * scale, size=(1, q))
    return (m + rows + cols).astype(np.int64)


def naive_minplus(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Reference min-plus product by full broadcasting."""
    return (A[:, :, None] + B[None, :, :]).min(axis=1)
