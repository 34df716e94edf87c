"""Seeded random instances with planted decompositions.

Planted parts may be empty, so the part count handed back is exactly the
count requested; operation-count tests rely on that.  Values default to
the range [-10^6, 10^6], far inside the construction entry bound.
"""

from __future__ import annotations

import numpy as np

from .core import (
    Decomposition,
    IntMatrix,
    IntVector,
    MonotoneTag,
    Subsequence,
)

DEFAULT_VALUE_BOUND = 10**6


def as_generator(seed) -> np.random.Generator:
    """Pass numpy Generators through; anything else seeds a fresh one."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _direction_tag(direction) -> MonotoneTag:
    tag = direction if isinstance(direction, MonotoneTag) else MonotoneTag(direction)
    if tag is MonotoneTag.UNIFORM:
        raise ValueError("direction must be 'nondec' or 'noninc'")
    return tag


def random_index_partition(
    rng: np.random.Generator, n: int, parts: int
) -> list[list[int]]:
    """Assign each of 0..n-1 to one of ``parts`` classes uniformly;
    classes may come back empty."""
    if parts < 1:
        raise ValueError("need at least one part")
    assign = rng.integers(0, parts, size=n)
    return [[int(i) for i in np.flatnonzero(assign == p)] for p in range(parts)]


def random_vector(
    seed, n: int, *, value_bound: int = DEFAULT_VALUE_BOUND
) -> IntVector:
    rng = as_generator(seed)
    return IntVector(rng.integers(-value_bound, value_bound + 1, size=n))


def random_matrix(
    seed, n: int, *, value_bound: int = DEFAULT_VALUE_BOUND
) -> IntMatrix:
    rng = as_generator(seed)
    return IntMatrix(rng.integers(-value_bound, value_bound + 1, size=(n, n)))


def _plant_monotone_values(
    rng: np.random.Generator,
    n: int,
    parts: int,
    tag: MonotoneTag,
    value_bound: int,
) -> tuple[np.ndarray, Decomposition]:
    idx_parts = random_index_partition(rng, n, parts)
    values = np.zeros(n, dtype=np.int64)
    subs = []
    for indices in idx_parts:
        v = np.sort(rng.integers(-value_bound, value_bound + 1, size=len(indices)))
        if tag is MonotoneTag.NON_INCREASING:
            v = v[::-1]
        values[indices] = v
        subs.append(Subsequence(tuple(indices), tag))
    return values, Decomposition(n, tuple(subs))


def planted_monotone_vector(
    seed,
    n: int,
    parts: int,
    direction="nondec",
    *,
    value_bound: int = DEFAULT_VALUE_BOUND,
) -> tuple[IntVector, Decomposition]:
    """Vector whose planted decomposition has exactly ``parts`` parts, all
    monotone in ``direction``."""
    rng = as_generator(seed)
    tag = _direction_tag(direction)
    values, dec = _plant_monotone_values(rng, n, parts, tag, value_bound)
    return IntVector(values), dec


def _plant_uniform_values(
    rng: np.random.Generator, n: int, classes: int, value_bound: int
) -> tuple[np.ndarray, Decomposition]:
    if classes > 2 * value_bound + 1:
        raise ValueError("not enough distinct values in range")
    pool = rng.choice(2 * value_bound + 1, size=classes, replace=False)
    pool = pool.astype(np.int64) - value_bound
    assign = rng.integers(0, classes, size=n)
    values = pool[assign]
    subs = tuple(
        Subsequence(
            tuple(int(i) for i in np.flatnonzero(assign == cls)),
            MonotoneTag.UNIFORM,
        )
        for cls in range(classes)
    )
    return values, Decomposition(n, subs)


def planted_uniform_vector(
    seed, n: int, classes: int, *, value_bound: int = DEFAULT_VALUE_BOUND
) -> tuple[IntVector, Decomposition]:
    """Vector taking at most ``classes`` distinct values, with the planted
    constant-valued decomposition (one part per class, possibly empty)."""
    rng = as_generator(seed)
    values, dec = _plant_uniform_values(rng, n, classes, value_bound)
    return IntVector(values), dec


def planted_matrix_rows(
    seed,
    n: int,
    parts: int,
    direction="nondec",
    *,
    value_bound: int = DEFAULT_VALUE_BOUND,
) -> tuple[IntMatrix, list[Decomposition]]:
    """Matrix whose every row carries a planted ``parts``-part monotone
    decomposition in ``direction``."""
    rng = as_generator(seed)
    tag = _direction_tag(direction)
    rows, decs = [], []
    for _ in range(n):
        values, dec = _plant_monotone_values(rng, n, parts, tag, value_bound)
        rows.append(values)
        decs.append(dec)
    return IntMatrix(np.stack(rows)), decs


def planted_matrix_cols(
    seed,
    n: int,
    parts: int,
    direction="nondec",
    *,
    value_bound: int = DEFAULT_VALUE_BOUND,
) -> tuple[IntMatrix, list[Decomposition]]:
    """Matrix whose every column carries a planted monotone decomposition;
    the list is indexed by column."""
    M, decs = planted_matrix_rows(
        seed, n, parts, direction, value_bound=value_bound
    )
    return M.transpose(), decs


def planted_mixed_matrix_rows(
    seed,
    n: int,
    parts: int,
    *,
    value_bound: int = DEFAULT_VALUE_BOUND,
) -> tuple[IntMatrix, list[Decomposition]]:
    """Matrix rows with planted parts of independently random directions."""
    rng = as_generator(seed)
    rows, decs = [], []
    for _ in range(n):
        idx_parts = random_index_partition(rng, n, parts)
        values = np.zeros(n, dtype=np.int64)
        subs = []
        for indices in idx_parts:
            tag = (
                MonotoneTag.NON_DECREASING
                if rng.integers(0, 2) == 0
                else MonotoneTag.NON_INCREASING
            )
            v = np.sort(rng.integers(-value_bound, value_bound + 1, size=len(indices)))
            if tag is MonotoneTag.NON_INCREASING:
                v = v[::-1]
            values[indices] = v
            subs.append(Subsequence(tuple(indices), tag))
        rows.append(values)
        decs.append(Decomposition(n, tuple(subs)))
    return IntMatrix(np.stack(rows)), decs


def planted_uniform_matrix_rows(
    seed, n: int, classes: int, *, value_bound: int = DEFAULT_VALUE_BOUND
) -> tuple[IntMatrix, list[Decomposition]]:
    """Matrix whose every row takes at most ``classes`` distinct values,
    with planted constant-valued row decompositions."""
    rng = as_generator(seed)
    rows, decs = [], []
    for _ in range(n):
        values, dec = _plant_uniform_values(rng, n, classes, value_bound)
        rows.append(values)
        decs.append(dec)
    return IntMatrix(np.stack(rows)), decs


def planted_uniform_matrix_cols(
    seed, n: int, classes: int, *, value_bound: int = DEFAULT_VALUE_BOUND
) -> tuple[IntMatrix, list[Decomposition]]:
    """Column flavor of planted_uniform_matrix_rows; list indexed by
    column."""
    M, decs = planted_uniform_matrix_rows(seed, n, classes, value_bound=value_bound)
    return M.transpose(), decs
