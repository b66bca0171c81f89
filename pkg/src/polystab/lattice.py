"""Characters and one-parameter subgroups of the diagonal torus of SL(D).

Characters live in ambient Z^D (one coordinate per column variable).  The
SL character lattice is the quotient by the diagonal (1, ..., 1); dually a
one-parameter subgroup is an integer vector with coordinate sum zero, so the
pairing descends to the quotient.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotSumZero, PolystabError

Character = tuple  # tuple[int, ...]; exponent vectors are non-negative characters


class OneParamSubgroup(tuple):
    """Sum-zero integer vector; immutable."""

    def __new__(cls, coords: Iterable[int]):
        coords = tuple(int(c) for c in coords)
        if not coords:
            raise PolystabError("one-parameter subgroup must be non-empty (empty)")
        total = sum(coords)
        if total != 0:
            raise NotSumZero(total)
        return super().__new__(cls, coords)

    def __repr__(self):
        return f"OneParamSubgroup({tuple(self)!r})"


def validate_1ps(coords: Sequence[int]) -> OneParamSubgroup:
    return OneParamSubgroup(coords)


def check_dims(a: Sequence, b: Sequence) -> int:
    if len(a) != len(b):
        raise DimensionMismatch(len(a), len(b))
    return len(a)


def pair(lam: Sequence[int], chi: Sequence[int]) -> int:
    """Integral pairing <lam, chi>, the exponent of t in chi(lam(t))."""
    check_dims(lam, chi)
    return sum(x * y for x, y in zip(lam, chi))


def quotient_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff a - b is an integer multiple of (1, ..., 1)."""
    check_dims(a, b)
    diff = [x - y for x, y in zip(a, b)]
    return all(d == diff[0] for d in diff)


def project_quotient(x: Sequence[int]) -> tuple:
    """Coordinates of x in Z^D / Z(1,...,1) ~ Z^(D-1): subtract the last entry."""
    last = x[-1]
    return tuple(c - last for c in x[:-1])


def lift_functional(a: Sequence[int]) -> OneParamSubgroup:
    """Sum-zero lift of a functional on the quotient coordinates.

    Satisfies pair(lift_functional(a), x) == <a, project_quotient(x)>.
    """
    a = tuple(int(c) for c in a)
    return OneParamSubgroup(a + (-sum(a),))


def sum_zero_box(dim: int, radius: int):
    """All sum-zero integer vectors of length dim with max-norm <= radius."""
    if dim < 1:
        return

    def rec(prefix, remaining):
        if remaining == 1:
            last = -sum(prefix)
            if abs(last) <= radius:
                yield OneParamSubgroup(prefix + (last,))
            return
        for c in range(-radius, radius + 1):
            yield from rec(prefix + (c,), remaining - 1)

    yield from rec((), dim)
