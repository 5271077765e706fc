"""Occupation-number multiindices and their index sets.

An occupation multiindex is a length-``d`` tuple of nonnegative integers;
its norm is the particle number.  Index sets are always materialized in
lexicographically descending order, e.g. ``(3,0), (2,1), (1,2), (0,3)``,
and that order is what every matrix in the package is indexed by.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial, prod
from typing import Iterator, Optional, Sequence, Tuple

Occupation = Tuple[int, ...]


def as_occupation(x: Sequence[int]) -> Occupation:
    """Validate ``x`` and return it as a tuple of ints."""
    occ = tuple(int(v) for v in x)
    if len(occ) == 0:
        raise ValueError("occupation must have at least one entry (d >= 1)")
    if any(v < 0 for v in occ):
        raise ValueError(f"occupation entries must be nonnegative, got {occ}")
    return occ


def norm(x: Sequence[int]) -> int:
    return sum(x)


def leq(x: Sequence[int], y: Sequence[int]) -> bool:
    """Elementwise partial order ``x <= y``."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return all(a <= b for a, b in zip(x, y))


def add(x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
    """Entrywise difference; may contain negative entries."""
    return tuple(a - b for a, b in zip(x, y))


def support(x: Sequence[int]) -> Tuple[int, ...]:
    """Positions of the nonzero entries."""
    return tuple(i for i, v in enumerate(x) if v != 0)


def multinomial(x: Sequence[int]) -> int:
    """``norm(x)! / prod(x_i!)`` as an exact integer.

    >>> multinomial((1, 2))
    3
    >>> multinomial((7, 3))
    120
    """
    x = as_occupation(x)
    # product of binomials avoids the big factorial quotient
    out, running = 1, 0
    for v in x:
        running += v
        out *= comb(running, v)
    return out


@dataclass(frozen=True)
class IndexSet:
    """Ordered, immutable set of occupation multiindices of fixed norm.

    ``bound`` is ``None`` for the full set of all ``d``-entry occupations
    of norm ``norm``; otherwise every member is elementwise ``<= bound``.
    """

    d: int
    norm: int
    members: Tuple[Occupation, ...]
    bound: Optional[Occupation] = None
    _position: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_position", {m: i for i, m in enumerate(self.members)}
        )

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Occupation]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Occupation:
        return self.members[i]

    def __contains__(self, x) -> bool:
        return tuple(x) in self._position

    def index(self, x: Sequence[int]) -> int:
        try:
            return self._position[tuple(x)]
        except KeyError:
            raise ValueError(f"{tuple(x)} is not in this index set") from None


def _descend(total: int, caps: Sequence[int]) -> Iterator[Occupation]:
    # Lexicographically descending walk over {x : sum(x) = total, x <= caps}.
    # suffix[i] is the largest amount positions i.. can still absorb, so
    # every branch taken is guaranteed to yield at least one member.
    d = len(caps)
    suffix = [0] * (d + 1)
    for i in range(d - 1, -1, -1):
        suffix[i] = suffix[i + 1] + caps[i]
    if total > suffix[0]:
        return
    buf = [0] * d

    def rec(i: int, left: int) -> Iterator[Occupation]:
        if i == d - 1:
            buf[i] = left
            yield tuple(buf)
            return
        hi = min(caps[i], left)
        lo = max(0, left - suffix[i + 1])
        for v in range(hi, lo - 1, -1):
            buf[i] = v
            yield from rec(i + 1, left - v)

    yield from rec(0, total)


def enumerate_full(d: int, n: int) -> IndexSet:
    """All occupations with ``d`` entries summing to ``n``.

    The size is ``comb(n + d - 1, d - 1)``.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    members = tuple(_descend(n, [n] * d))
    return IndexSet(d=d, norm=n, members=members)


def enumerate_restricted(m: int, bound: Sequence[int]) -> IndexSet:
    """Occupations of norm ``m`` lying elementwise below ``bound``.

    Raises ``ValueError`` when ``m`` exceeds ``norm(bound)``: the set would
    be empty, which only ever happens through a caller bug.
    """
    bound = as_occupation(bound)
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if m > norm(bound):
        raise ValueError(
            f"m={m} exceeds the norm {norm(bound)} of the bound {bound}"
        )
    members = tuple(_descend(m, bound))
    return IndexSet(d=len(bound), norm=m, members=members, bound=bound)


def full_set_size(d: int, n: int) -> int:
    """Dimension of the symmetric subspace of ``n`` qudits of dimension ``d``."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return comb(n + d - 1, d - 1)


def qubit_bounds(n: int, e: int, m: int) -> Tuple[int, int]:
    """Inclusive range ``(l_min, l_max)`` of the second entry of members of
    ``enumerate_restricted(m, (n - e, e))``."""
    if not 0 <= e <= n:
        raise ValueError(f"need 0 <= e <= n, got e={e}, n={n}")
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    return max(0, e - (n - m)), min(m, e)


def qubit_restricted(n: int, e: int, m: int) -> IndexSet:
    """Fast path for ``d = 2``: walk the second entry from ``l_min`` up."""
    lo, hi = qubit_bounds(n, e, m)
    members = tuple((m - l, l) for l in range(lo, hi + 1))
    return IndexSet(d=2, norm=m, members=members, bound=(n - e, e))


def factorial_product(x: Sequence[int]) -> int:
    return prod(factorial(v) for v in x)
