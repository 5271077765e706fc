"""NPT certification of reduced Dicke states.

For a split of ``m`` sites into ``k`` and ``m - k`` the witness vector is

    psi = alpha |D_kh> (x) |D_{mh - kh'}> + beta |D_kh'> (x) |D_{mh - kh}>

and ``<psi| rho^T |psi>`` is the Hermitian form
``A |alpha|^2 + B |beta|^2 + 2 C Re(conj(alpha) beta)`` with rational
``A, B, C**2``.  The form takes a negative value iff ``A*B < C**2``, which
is decided here in exact arithmetic.  The spectral route (smallest
eigenvalue of the partially transposed operator) is computed alongside as
an independent check.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .dicke_algebra import bipartite_operator, partial_transpose, schmidt_coefficient
from .multiindex import (
    Occupation,
    add,
    as_occupation,
    leq,
    multinomial,
    norm,
    sub,
    support,
)

NPT_GME = "NPT-GME"
FULLY_SEPARABLE = "fully separable"
INCONCLUSIVE = "inconclusive"

SPECTRAL_NPT_THRESHOLD = -1e-10


class InvalidWitnessError(ValueError):
    pass


class FullySeparableError(ValueError):
    """The occupation has a single nonzero entry; no witness exists."""


@dataclass(frozen=True)
class WitnessChoice:
    m_hat: Occupation
    k_hat: Occupation
    k_hat_prime: Occupation
    delta: Tuple[int, ...]
    positions: Optional[Tuple[int, int]] = None

    @property
    def is_canonical(self) -> bool:
        return _unit_pair(self.delta) is not None


def _unit_pair(delta: Sequence[int]) -> Optional[Tuple[int, int]]:
    plus = [i for i, v in enumerate(delta) if v == 1]
    minus = [i for i, v in enumerate(delta) if v == -1]
    if len(plus) == 1 and len(minus) == 1 and sum(abs(v) for v in delta) == 2:
        return plus[0], minus[0]
    return None


def _check_split(n: int, m: int, k: int) -> None:
    if not 2 <= m <= n:
        raise ValueError(f"need 2 <= m <= {n}, got m={m}")
    if not 1 <= k <= m - 1:
        raise ValueError(f"need 1 <= k <= {m - 1}, got k={k}")


def _fill(start: List[int], caps: Sequence[int], amount: int) -> List[int]:
    # add `amount` units in index order without exceeding caps
    out = list(start)
    for i, cap in enumerate(caps):
        take = min(cap - out[i], amount)
        out[i] += take
        amount -= take
    if amount:
        raise InvalidWitnessError("not enough capacity for greedy fill")
    return out


def choose_witness(parent: Sequence[int], m: int, k: int) -> WitnessChoice:
    """Canonical witness for the ``(k, m - k)`` split of the ``m``-site reduction.

    ``i, j`` are the first two occupied levels.  ``m_hat`` gets one unit at
    each of them and is then filled greedily in level order below
    ``parent``; ``k_hat`` gets one unit at ``j``, keeps at least one unit of
    ``m_hat[i]`` free, and is filled greedily the same way.  Then
    ``k_hat_prime = k_hat + e_i - e_j``.
    """
    parent = as_occupation(parent)
    occupied = support(parent)
    if len(occupied) < 2:
        raise FullySeparableError(
            f"{parent} has fewer than two nonzero occupations; the state is fully separable"
        )
    _check_split(norm(parent), m, k)
    d = len(parent)
    i, j = occupied[0], occupied[1]

    seed = [0] * d
    seed[i] = seed[j] = 1
    m_hat = _fill(seed, parent, m - 2)

    caps = list(m_hat)
    caps[i] -= 1
    seed = [0] * d
    seed[j] = 1
    k_hat = _fill(seed, caps, k - 1)

    delta = [0] * d
    delta[i], delta[j] = 1, -1
    return WitnessChoice(
        m_hat=tuple(m_hat),
        k_hat=tuple(k_hat),
        k_hat_prime=add(k_hat, delta),
        delta=tuple(delta),
        positions=(i, j),
    )


def _in_restricted(x: Sequence[int], bound: Sequence[int]) -> bool:
    return all(v >= 0 for v in x) and leq(x, bound)


def validate_choice(parent: Sequence[int], m: int, k: int, choice: WitnessChoice) -> None:
    parent = as_occupation(parent)
    _check_split(norm(parent), m, k)
    mh, kh, kp = choice.m_hat, choice.k_hat, choice.k_hat_prime
    if not (len(mh) == len(kh) == len(kp) == len(parent)):
        raise InvalidWitnessError("witness multiindices must all have length d")
    if norm(mh) != m or not _in_restricted(mh, parent):
        raise InvalidWitnessError(f"m_hat={mh} is not a norm-{m} occupation below {parent}")
    for name, x in (("k_hat", kh), ("k_hat_prime", kp)):
        if norm(x) != k or not _in_restricted(x, mh):
            raise InvalidWitnessError(f"{name}={x} is not a norm-{k} occupation below m_hat={mh}")
    if kh == kp:
        raise InvalidWitnessError("k_hat and k_hat_prime must differ")
    if tuple(choice.delta) != sub(kp, kh):
        raise InvalidWitnessError("delta must equal k_hat_prime - k_hat")


@dataclass(frozen=True)
class HermitianForm2:
    """Coefficients of ``A |a|^2 + B |b|^2 + 2 C Re(conj(a) b)``, with ``C`` kept squared."""

    A: Fraction
    B: Fraction
    C_squared: Fraction
    a_term_present: bool = True
    b_term_present: bool = True

    @property
    def discriminant(self) -> Fraction:
        return self.A * self.B - self.C_squared

    @property
    def C(self) -> float:
        return math.sqrt(self.C_squared)

    def matrix(self) -> np.ndarray:
        c = self.C
        return np.array([[float(self.A), c], [c, float(self.B)]])


def hermitian_form(
    parent: Sequence[int], m: int, k: int, choice: WitnessChoice
) -> HermitianForm2:
    parent = as_occupation(parent)
    validate_choice(parent, m, k, choice)
    mh, kh, kp, delta = choice.m_hat, choice.k_hat, choice.k_hat_prime, choice.delta

    lower = sub(mh, delta)
    a_present = _in_restricted(lower, parent) and leq(kh, lower)
    A = (
        schmidt_coefficient(parent, lower) * schmidt_coefficient(lower, kh)
        if a_present
        else Fraction(0)
    )
    upper = add(mh, delta)
    b_present = _in_restricted(upper, parent) and leq(kp, upper)
    B = (
        schmidt_coefficient(parent, upper) * schmidt_coefficient(upper, kp)
        if b_present
        else Fraction(0)
    )
    C_squared = (
        schmidt_coefficient(parent, mh) ** 2
        * schmidt_coefficient(mh, kh)
        * schmidt_coefficient(mh, kp)
    )
    return HermitianForm2(A, B, C_squared, a_present, b_present)


def discriminant(form: HermitianForm2) -> Fraction:
    """``A*B - C**2``; negative iff the witness detects NPT."""
    return form.discriminant


def _multinomial_or_zero(x: Sequence[int]) -> int:
    return multinomial(x) if all(v >= 0 for v in x) else 0


def binomial_form_holds(parent: Sequence[int], choice: WitnessChoice) -> bool:
    """Negativity condition with the Schmidt coefficients cancelled.

    Compares ``M(n - mh + delta) * M(n - mh - delta) * [mh -+ delta allowed]``
    against ``M(n - mh)**2`` where ``M`` is the multinomial of norm ``n - m``.
    """
    parent = as_occupation(parent)
    mh, delta = choice.m_hat, choice.delta
    rest = sub(parent, mh)
    allowed = _in_restricted(sub(mh, delta), parent) and _in_restricted(add(mh, delta), parent)
    lhs = _multinomial_or_zero(add(rest, delta)) * _multinomial_or_zero(sub(rest, delta)) if allowed else 0
    return lhs < multinomial(rest) ** 2


def two_factor_product(parent: Sequence[int], choice: WitnessChoice) -> Fraction:
    """``(r_i / (r_i + 1)) * (r_j / (r_j + 1))`` with ``r = parent - m_hat``."""
    parent = as_occupation(parent)
    pair = _unit_pair(choice.delta)
    if pair is None:
        raise InvalidWitnessError(f"delta={choice.delta} is not of the form e_i - e_j")
    i, j = pair
    ri = parent[i] - choice.m_hat[i]
    rj = parent[j] - choice.m_hat[j]
    return Fraction(ri, ri + 1) * Fraction(rj, rj + 1)


def two_factor_check(parent: Sequence[int], choice: WitnessChoice) -> bool:
    return two_factor_product(parent, choice) < 1


def optimal_amplitudes(form: HermitianForm2) -> Tuple[complex, complex, float]:
    """Unit vector ``(alpha, beta)`` minimizing the form, and the minimum."""
    if form.C_squared <= 0:
        raise ValueError("C_squared must be positive")
    a, b, c = float(form.A), float(form.B), form.C
    value = (a + b) / 2 - math.hypot((a - b) / 2, c)
    # (A - value) alpha + C beta = 0; value < A so the first entry stays positive
    alpha, beta = c, value - a
    scale = math.hypot(alpha, beta)
    return complex(alpha / scale), complex(beta / scale), value


def witness_sandwich(
    parent: Sequence[int], m: int, k: int, choice: WitnessChoice, alpha: complex, beta: complex
) -> float:
    """``<psi| rho^T |psi>`` evaluated from the closed-form coefficients."""
    form = hermitian_form(parent, m, k, choice)
    alpha, beta = complex(alpha), complex(beta)
    return (
        float(form.A) * abs(alpha) ** 2
        + float(form.B) * abs(beta) ** 2
        + 2 * form.C * (alpha.conjugate() * beta).real
    )


def sandwich_via_operator(
    parent: Sequence[int], m: int, k: int, choice: WitnessChoice, alpha: complex, beta: complex
) -> float:
    """Same quantity as :func:`witness_sandwich`, via the full operator matrix."""
    validate_choice(parent, m, k, choice)
    op = partial_transpose(bipartite_operator(parent, m, k))
    psi = np.zeros(op.dim, dtype=complex)
    mh, kh, kp = choice.m_hat, choice.k_hat, choice.k_hat_prime
    psi[op.flat(kh, sub(mh, kp))] += alpha
    psi[op.flat(kp, sub(mh, kh))] += beta
    return float(np.real(np.vdot(psi, op.to_array() @ psi)))


def pt_spectrum(parent: Sequence[int], m: int, k: int) -> np.ndarray:
    """Ascending spectrum of the partially transposed reduction, symmetric basis."""
    op = partial_transpose(bipartite_operator(parent, m, k))
    return np.linalg.eigvalsh(op.to_array())


def spectral_min(parent: Sequence[int], m: int, k: int) -> float:
    return float(pt_spectrum(parent, m, k)[0])


@dataclass(frozen=True)
class SplitRecord:
    m: int
    k: int
    witness: WitnessChoice
    form: HermitianForm2
    discriminant: Fraction
    optimal_witness_value: float
    spectral_min: float
    is_npt: bool
    elapsed_ms: float = 0.0

    @property
    def spectral_npt(self) -> bool:
        return self.spectral_min < SPECTRAL_NPT_THRESHOLD


@dataclass(frozen=True)
class CertificationReport:
    parent: Occupation
    verdict: str
    records: Tuple[SplitRecord, ...] = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return norm(self.parent)

    @property
    def d(self) -> int:
        return len(self.parent)


def certify_split(parent: Sequence[int], m: int, k: int) -> SplitRecord:
    parent = as_occupation(parent)
    start = time.perf_counter()
    choice = choose_witness(parent, m, k)
    form = hermitian_form(parent, m, k, choice)
    disc = form.discriminant
    _, _, value = optimal_amplitudes(form)
    smin = spectral_min(parent, m, k)
    elapsed = (time.perf_counter() - start) * 1e3
    return SplitRecord(
        m=m, k=k, witness=choice, form=form, discriminant=disc,
        optimal_witness_value=value, spectral_min=smin,
        is_npt=disc < 0, elapsed_ms=elapsed,
    )


def splits(n: int) -> List[Tuple[int, int]]:
    """All ``(m, k)`` with ``2 <= m <= n`` and ``1 <= k <= m - 1``, ascending."""
    return [(m, k) for m in range(2, n + 1) for k in range(1, m)]


def certify(parent: Sequence[int], *, threads: int = 1) -> CertificationReport:
    """Certify every reduction of ``|D_parent>`` across every split.

    A single occupied level gives the ``fully separable`` verdict and no
    records.  Otherwise each ``(m, k)`` gets a record, and the verdict is
    ``NPT-GME`` when every discriminant is negative.
    """
    parent = as_occupation(parent)
    n = norm(parent)
    if n < 2:
        raise ValueError(f"need at least two sites, got n={n}")
    if len(support(parent)) < 2:
        return CertificationReport(parent=parent, verdict=FULLY_SEPARABLE)
    grid = splits(n)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = tuple(pool.map(lambda mk: certify_split(parent, *mk), grid))
    else:
        records = tuple(certify_split(parent, m, k) for m, k in grid)
    verdict = NPT_GME if all(r.is_npt for r in records) else INCONCLUSIVE
    return CertificationReport(parent=parent, verdict=verdict, records=records)
