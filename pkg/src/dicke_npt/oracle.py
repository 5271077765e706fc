"""Brute-force reference computations in the full ``d**n`` Hilbert space.

Nothing here uses the symmetric-basis machinery; the point is to have a
second, independent route to every number the symmetric path produces.

Basis convention: a word ``(i_1, ..., i_n)`` of local labels ``0..d-1``
maps to the integer ``sum_s i_s * d**(n - s)``, i.e. site 1 is the most
significant digit.  That is numpy's C order for an array of shape
``(d,) * n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import limits
from .multiindex import as_occupation, enumerate_restricted, norm, sub


def _sites(size: int, d: int) -> int:
    if d < 2:
        raise ValueError("site count is ambiguous for d < 2; pass it explicitly")
    n, p = 0, 1
    while p < size:
        p *= d
        n += 1
    if p != size:
        raise ValueError(f"size {size} is not a power of d={d}")
    return n


def _digits(d: int, n: int) -> np.ndarray:
    # (n, d**n) array; column j holds the word of basis index j
    return np.indices((d,) * n).reshape(n, -1)


def dicke_word_counts(parent: Sequence[int], *, limit=None) -> np.ndarray:
    """Integer vector: 1 on every basis word of type ``parent``, 0 elsewhere.

    This is the non-normalized Dicke vector.
    """
    parent = as_occupation(parent)
    d, n = len(parent), norm(parent)
    limits.check_vector(d**n, limit)
    if n == 0:
        return np.ones(1, dtype=np.int64)
    digits = _digits(d, n)
    hit = np.ones(d**n, dtype=bool)
    for s, c in enumerate(parent):
        hit &= (digits == s).sum(axis=0) == c
    return hit.astype(np.int64)


def dense_dicke(parent: Sequence[int], *, limit=None) -> np.ndarray:
    """Normalized dense Dicke vector (complex amplitudes)."""
    raw = dicke_word_counts(parent, limit=limit).astype(complex)
    return raw / np.sqrt(raw.sum().real)


def dense_partial_trace(
    vec: np.ndarray, d: int, keep: int, *, n=None, traced="last", limit=None
) -> np.ndarray:
    """Reduced density matrix of ``keep`` sites of the pure state ``vec``.

    ``traced`` selects whether the last or the first ``n - keep`` sites are
    summed out.
    """
    if n is None:
        n = _sites(vec.size, d)
    if not 1 <= keep <= n:
        raise ValueError(f"need 1 <= keep <= {n}, got {keep}")
    limits.check_matrix(d**keep, limit)
    if traced == "last":
        psi = vec.reshape(d**keep, -1)
    elif traced == "first":
        psi = vec.reshape(-1, d**keep).T
    else:
        raise ValueError(f"traced must be 'first' or 'last', got {traced!r}")
    return psi @ psi.conj().T


def dense_partial_transpose(mat: np.ndarray, d: int, k: int, *, m=None) -> np.ndarray:
    """Transpose the first ``k`` sites of a ``d**m`` square matrix."""
    dim = mat.shape[0]
    if mat.shape != (dim, dim):
        raise ValueError(f"matrix of shape {mat.shape} is not square")
    if m is None:
        m = _sites(dim, d)
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= {m}, got {k}")
    a, b = d**k, d ** (m - k)
    t = mat.reshape(a, b, a, b).transpose(2, 1, 0, 3)
    return t.reshape(dim, dim)


def dense_eigenvalues(mat: np.ndarray, *, tol: float = 1e-9) -> np.ndarray:
    """Full ascending spectrum of a Hermitian matrix."""
    defect = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    return np.linalg.eigvalsh(mat)


def dense_min_eigenvalue(mat: np.ndarray) -> float:
    return float(dense_eigenvalues(mat)[0])


def reduced_dicke_matrix(parent: Sequence[int], m: int, *, limit=None) -> np.ndarray:
    parent = as_occupation(parent)
    return dense_partial_trace(dense_dicke(parent, limit=limit), len(parent), m, n=norm(parent))


def dense_pt_spectrum(parent: Sequence[int], m: int, k: int, *, limit=None) -> np.ndarray:
    """Ascending spectrum of the partially transposed ``m``-site reduction."""
    parent = as_occupation(parent)
    rho = reduced_dicke_matrix(parent, m, limit=limit)
    return dense_eigenvalues(dense_partial_transpose(rho, len(parent), k, m=m))


def schmidt_singular_values(parent: Sequence[int], m: int, *, limit=None) -> np.ndarray:
    """Singular values of the dense Dicke vector reshaped to ``d**m x d**(n-m)``."""
    parent = as_occupation(parent)
    d = len(parent)
    psi = dense_dicke(parent, limit=limit).reshape(d**m, -1)
    return np.linalg.svd(psi, compute_uv=False)


@dataclass(frozen=True)
class SchmidtIdentityCheck:
    """Outcome of checking the integer decomposition of a non-normalized
    Dicke vector into products of smaller non-normalized Dicke vectors."""

    unit_coefficients: bool
    disjoint_supports: bool
    covers_parent: bool
    contained_in_parent: bool
    sum_matches: bool
    term_supports: tuple = ()

    def __bool__(self):
        return (
            self.unit_coefficients
            and self.disjoint_supports
            and self.covers_parent
            and self.contained_in_parent
            and self.sum_matches
        )


def schmidt_identity_properties(parent: Sequence[int], m: int, *, limit=None) -> SchmidtIdentityCheck:
    parent = as_occupation(parent)
    n = norm(parent)
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= {n}, got m={m}")
    d = len(parent)
    whole = dicke_word_counts(parent, limit=limit)
    tail = d ** (n - m)
    products = []
    for p in enumerate_restricted(m, parent):
        head_words = np.flatnonzero(dicke_word_counts(p))
        tail_words = np.flatnonzero(dicke_word_counts(sub(parent, p)))
        # one +1 per concatenated word pair; a repeated word would show as 2
        term = np.zeros_like(whole)
        np.add.at(term, (head_words[:, None] * tail + tail_words[None, :]).ravel(), 1)
        products.append(term)
    unit = all(v.max() == 1 for v in products)
    supports = [v != 0 for v in products]
    cover_count = np.sum(supports, axis=0)
    parent_support = whole != 0
    return SchmidtIdentityCheck(
        unit_coefficients=unit,
        disjoint_supports=bool(np.all(cover_count <= 1)),
        covers_parent=bool(np.all(cover_count[parent_support] >= 1)),
        contained_in_parent=all(not np.any(s & ~parent_support) for s in supports),
        sum_matches=bool(np.array_equal(np.sum(products, axis=0), whole)),
        term_supports=tuple(tuple(int(i) for i in np.flatnonzero(s)) for s in supports),
    )


def verify_schmidt_identity(parent: Sequence[int], m: int, *, limit=None) -> bool:
    return bool(schmidt_identity_properties(parent, m, limit=limit))


def cross_check(parent: Sequence[int], *, limit=None, entry_tol=1e-12, spectrum_tol=1e-10):
    """Compare every symmetric-basis result for ``parent`` with the dense route.

    Returns a list of human-readable mismatch descriptions; empty means the
    two routes agree everywhere.
    """
    # local imports keep the dense primitives above free of the symmetric path
    from .dicke_algebra import (
        bipartite_operator,
        embed_dense,
        partial_transpose,
        reduced_state,
        schmidt_decomposition,
    )
    from .multiindex import enumerate_restricted

    parent = as_occupation(parent)
    d, n = len(parent), norm(parent)
    psi = dense_dicke(parent, limit=limit)
    problems = []
    for m in range(1, n + 1):
        if not verify_schmidt_identity(parent, m, limit=limit):
            problems.append(f"m={m}: integer Schmidt identity fails")
        rho = dense_partial_trace(psi, d, m, n=n)
        diag = embed_dense(reduced_state(parent, m))
        err = np.max(np.abs(diag - rho))
        if err > entry_tol:
            problems.append(f"m={m}: reduced state differs by {err:.3e}")
        if m < n:
            weights = sorted(float(w) for _, w in schmidt_decomposition(parent, m))
            sv = np.sort(schmidt_singular_values(parent, m, limit=limit))
            sv2 = sv**2
            rank = int(np.sum(sv > 1e-10))
            if rank != len(enumerate_restricted(m, parent)):
                problems.append(f"m={m}: Schmidt rank {rank} != {len(weights)}")
            err = np.max(np.abs(sv2[-len(weights):] - weights))
            if err > entry_tol:
                problems.append(f"m={m}: Schmidt weights differ by {err:.3e}")
        for k in range(1, m):
            op = bipartite_operator(parent, m, k)
            err = np.max(np.abs(embed_dense(op) - rho))
            if err > entry_tol:
                problems.append(f"m={m} k={k}: embedded operator differs by {err:.3e}")
            sym = np.linalg.eigvalsh(partial_transpose(op).to_array())
            dense = dense_eigenvalues(dense_partial_transpose(rho, d, k, m=m))
            padded = np.sort(np.concatenate([sym, np.zeros(dense.size - sym.size)]))
            err = np.max(np.abs(padded - dense))
            if err > spectrum_tol:
                problems.append(f"m={m} k={k}: PT spectra differ by {err:.3e}")
    return problems

