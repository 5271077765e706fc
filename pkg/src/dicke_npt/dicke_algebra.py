"""Exact Schmidt data of Dicke states and their reduced states.

Everything here is built in exact rational arithmetic.  Square roots never
get evaluated until a caller asks for floating point: an operator entry
``sgn(q) * sqrt(|q|)`` is stored as its signed radicand ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import limits
from .multiindex import (
    IndexSet,
    Occupation,
    as_occupation,
    enumerate_full,
    enumerate_restricted,
    leq,
    multinomial,
    norm,
    sub,
)


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """Square root of a nonnegative rational if it is rational, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    p, r = q.numerator, q.denominator
    sp, sr = math.isqrt(p), math.isqrt(r)
    if sp * sp == p and sr * sr == r:
        return Fraction(sp, sr)
    return None


def radical_to_float(q: Fraction) -> float:
    """Value ``sgn(q) * sqrt(|q|)`` of a signed radicand."""
    if q == 0:
        return 0.0
    s = math.sqrt(float(abs(q)))
    return s if q > 0 else -s


def schmidt_coefficient(parent: Sequence[int], part: Sequence[int]) -> Fraction:
    """Schmidt weight of ``|D_part>`` in the Dicke state ``|D_parent>``.

    Equal to ``multinomial(part) * multinomial(parent - part) / multinomial(parent)``.

    >>> schmidt_coefficient((1, 2), (1, 1))
    Fraction(2, 3)
    """
    parent = as_occupation(parent)
    part = as_occupation(part)
    if len(part) != len(parent):
        raise ValueError(f"dimension mismatch: {part} vs {parent}")
    if not leq(part, parent):
        raise ValueError(f"{part} is not elementwise <= {parent}")
    rest = sub(parent, part)
    return Fraction(multinomial(part) * multinomial(rest), multinomial(parent))


def schmidt_decomposition(
    parent: Sequence[int], m: int
) -> List[Tuple[Occupation, Fraction]]:
    """Schmidt terms of ``|D_parent>`` across an ``(m, n - m)`` split.

    One ``(part, weight)`` pair per member of the restricted index set; the
    complementary Schmidt vector is ``|D_{parent - part}>``.
    """
    parent = as_occupation(parent)
    n = norm(parent)
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= {n - 1}, got m={m}")
    return [(p, schmidt_coefficient(parent, p)) for p in enumerate_restricted(m, parent)]


@dataclass(frozen=True)
class ReducedDickeState:
    """Reduced state of ``m`` sites of ``|D_parent>``; diagonal in the Dicke basis."""

    parent: Occupation
    m: int
    weights: Dict[Occupation, Fraction]

    @property
    def support(self) -> IndexSet:
        return enumerate_restricted(self.m, self.parent)

    def trace(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))


def reduced_state(parent: Sequence[int], m: int) -> ReducedDickeState:
    parent = as_occupation(parent)
    n = norm(parent)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= {n}, got m={m}")
    weights = {p: schmidt_coefficient(parent, p) for p in enumerate_restricted(m, parent)}
    return ReducedDickeState(parent=parent, m=m, weights=weights)


@dataclass(frozen=True)
class BipartiteSymmetricOperator:
    """Operator on ``Sym^k (x) Sym^(m-k)`` in the product Dicke basis.

    Rows and columns are indexed by pairs ``(kappa, mu)`` with
    ``kappa in left`` and ``mu in right``; the flat index of a pair is
    ``left.index(kappa) * len(right) + right.index(mu)``.  ``entries`` maps
    ``(row, col)`` to the signed radicand of the entry; missing keys are zero.
    """

    d: int
    m: int
    k: int
    left: IndexSet
    right: IndexSet
    entries: Dict[Tuple[int, int], Fraction]
    is_hermitian: bool = True

    @property
    def dim(self) -> int:
        return len(self.left) * len(self.right)

    def pair(self, i: int) -> Tuple[Occupation, Occupation]:
        a, b = divmod(i, len(self.right))
        return self.left[a], self.right[b]

    def flat(self, kappa: Sequence[int], mu: Sequence[int]) -> int:
        return self.left.index(kappa) * len(self.right) + self.right.index(mu)

    def pairs(self) -> Iterator[Tuple[Occupation, Occupation]]:
        for kappa in self.left:
            for mu in self.right:
                yield kappa, mu

    def radicand(self, row: int, col: int) -> Fraction:
        return self.entries.get((row, col), Fraction(0))

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim))
        for (r, c), q in self.entries.items():
            out[r, c] = radical_to_float(q)
        return out

    def exact_entry(self, row: int, col: int) -> Fraction:
        """Entry as a rational; raises if it is irrational."""
        q = self.radicand(row, col)
        root = exact_sqrt(abs(q))
        if root is None:
            raise ValueError(f"entry ({row}, {col}) = sqrt({q}) is irrational")
        return root if q >= 0 else -root

    def trace(self) -> Fraction:
        return sum((self.exact_entry(i, i) for i in range(self.dim)), Fraction(0))

    def trace_right(self) -> Dict[Occupation, Fraction]:
        """Diagonal of the operator traced over the ``mu`` slot, keyed by ``kappa``.

        Off-diagonal ``kappa`` blocks survive the trace only if present; the
        Dicke reductions never produce them.
        """
        nr = len(self.right)
        out = {}
        for a, kappa in enumerate(self.left):
            s = sum(
                (self.exact_entry(a * nr + b, a * nr + b) for b in range(nr)),
                Fraction(0),
            )
            if s:
                out[kappa] = s
        return out

    def trace_left(self) -> Dict[Occupation, Fraction]:
        nr = len(self.right)
        out = {}
        for b, mu in enumerate(self.right):
            s = sum(
                (self.exact_entry(a * nr + b, a * nr + b) for a in range(len(self.left))),
                Fraction(0),
            )
            if s:
                out[mu] = s
        return out


def bipartite_operator(parent: Sequence[int], m: int, k: int) -> BipartiteSymmetricOperator:
    """Reduced state of ``m`` sites, written across a ``(k, m - k)`` split.

    The entry at ``((kk, mm - kk), (kk', mm - kk'))`` is
    ``eta[parent, mm] * sqrt(eta[mm, kk] * eta[mm, kk'])`` summed over the
    Schmidt parts ``mm``; its radicand is ``eta[parent, mm]**2 * eta[mm, kk] * eta[mm, kk']``.
    """
    parent = as_occupation(parent)
    n = norm(parent)
    if not 2 <= m <= n:
        raise ValueError(f"need 2 <= m <= {n}, got m={m}")
    if not 1 <= k <= m - 1:
        raise ValueError(f"need 1 <= k <= {m - 1}, got k={k}")
    d = len(parent)
    left = enumerate_full(d, k)
    right = enumerate_full(d, m - k)
    nr = len(right)
    entries: Dict[Tuple[int, int], Fraction] = {}
    for mm in enumerate_restricted(m, parent):
        outer = schmidt_coefficient(parent, mm) ** 2
        parts = enumerate_restricted(k, mm)
        inner = [schmidt_coefficient(mm, kk) for kk in parts]
        idx = [left.index(kk) * nr + right.index(sub(mm, kk)) for kk in parts]
        for a, ea in zip(idx, inner):
            for b, eb in zip(idx, inner):
                # distinct mm never share a (row, col): mm = kappa + mu
                entries[(a, b)] = outer * ea * eb
    return BipartiteSymmetricOperator(d=d, m=m, k=k, left=left, right=right, entries=entries)


def partial_transpose(op: BipartiteSymmetricOperator) -> BipartiteSymmetricOperator:
    """Transpose the ``kappa`` slot: ``out[(k, u), (k', u')] = op[(k', u), (k, u')]``."""
    nr = len(op.right)
    entries = {}
    for (r, c), q in op.entries.items():
        ka, mu = divmod(r, nr)
        kb, mu2 = divmod(c, nr)
        entries[(kb * nr + mu, ka * nr + mu2)] = q
    return BipartiteSymmetricOperator(
        d=op.d, m=op.m, k=op.k, left=op.left, right=op.right,
        entries=entries, is_hermitian=op.is_hermitian,
    )


def _distinct_words(occ: Occupation) -> Iterator[Tuple[int, ...]]:
    counts = list(occ)
    total = sum(counts)
    word = [0] * total

    def rec(pos):
        if pos == total:
            yield tuple(word)
            return
        for s, c in enumerate(counts):
            if c:
                counts[s] -= 1
                word[pos] = s
                yield from rec(pos + 1)
                counts[s] += 1

    yield from rec(0)


def dicke_ket(occ: Sequence[int], *, normalized: bool = True) -> np.ndarray:
    """Dense ``|D_occ>`` in the computational basis (site 1 most significant)."""
    occ = as_occupation(occ)
    d, n = len(occ), norm(occ)
    out = np.zeros(d**n)
    weights = d ** np.arange(n - 1, -1, -1)
    for w in _distinct_words(occ):
        out[int(np.dot(w, weights)) if n else 0] = 1.0
    if normalized:
        out /= math.sqrt(multinomial(occ))
    return out


StateLike = Union[ReducedDickeState, BipartiteSymmetricOperator]


def embed_dense(state: StateLike, *, limit=None) -> np.ndarray:
    """Expand a symmetric-basis state into a dense ``d**m`` square matrix."""
    if isinstance(state, ReducedDickeState):
        d, m = len(state.parent), state.m
        limits.check_matrix(d**m, limit)
        out = np.zeros((d**m, d**m))
        for occ, w in state.weights.items():
            v = dicke_ket(occ)
            out += float(w) * np.outer(v, v)
        return out
    d, m = state.d, state.m
    limits.check_matrix(d**m, limit)
    kets_l = [dicke_ket(kappa) for kappa in state.left]
    kets_r = [dicke_ket(mu) for mu in state.right]
    iso = np.empty((d**m, state.dim))
    for i in range(state.dim):
        a, b = divmod(i, len(state.right))
        iso[:, i] = np.kron(kets_l[a], kets_r[b])
    return iso @ state.to_array() @ iso.T
