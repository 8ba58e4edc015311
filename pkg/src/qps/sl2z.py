"""Integer unimodular 2x2 matrices.

An element is stored as ``h = [[kappa, mu], [lam, nu]]`` with
``kappa*nu - lam*mu = 1``.  It acts on the clock and shift operators by
``Q -> a_Q P^lam Q^kappa`` and ``P -> a_P P^nu Q^mu`` and on phase-space
labels by ``(q, p) -> (nu*q - lam*p, -mu*q + kappa*p)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

import numpy as np

from .exceptions import NotCoprimeError, NotUnimodularError, PointOutOfRangeError
from .algebra import check_dim


@dataclass(frozen=True)
class Sp2ZElement:
    kappa: int
    mu: int
    lam: int
    nu: int

    def __post_init__(self):
        for name in ("kappa", "mu", "lam", "nu"):
            object.__setattr__(self, name, int(getattr(self, name)))
        det = self.kappa * self.nu - self.lam * self.mu
        if det != 1:
            raise NotUnimodularError(f"det {self.as_rows()} = {det}, expected 1")

    @classmethod
    def identity(cls) -> Sp2ZElement:
        return cls(1, 0, 0, 1)

    def as_rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.kappa, self.mu), (self.lam, self.nu))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.as_rows(), dtype=np.int64)

    def __matmul__(self, other: Sp2ZElement) -> Sp2ZElement:
        a, b = self, other
        return Sp2ZElement(
            a.kappa * b.kappa + a.mu * b.lam,
            a.kappa * b.mu + a.mu * b.nu,
            a.lam * b.kappa + a.nu * b.lam,
            a.lam * b.mu + a.nu * b.nu,
        )

    def inverse(self) -> Sp2ZElement:
        return Sp2ZElement(self.nu, -self.mu, -self.lam, self.kappa)

    def max_entry(self) -> int:
        return max(abs(self.kappa), abs(self.mu), abs(self.lam), abs(self.nu))

    def relabel(self, dq, dp, N: int):
        """Image of doubled coordinates under the label map, reduced mod ``2N``."""
        return (
            np.mod(self.nu * np.asarray(dq) - self.lam * np.asarray(dp), 2 * N),
            np.mod(-self.mu * np.asarray(dq) + self.kappa * np.asarray(dp), 2 * N),
        )


# generators of SL(2, Z) used by the samplers and the verification suites
LOWER = Sp2ZElement(1, 0, 1, 1)
UPPER = Sp2ZElement(1, 1, 0, 1)
S = Sp2ZElement(0, -1, 1, 0)
MINUS_ONE = Sp2ZElement(-1, 0, 0, -1)
GENERATORS = (LOWER, UPPER, S, MINUS_ONE)


def validate_sl2(h) -> Sp2ZElement:
    """Check a 2x2 integer matrix ``[[kappa, mu], [lam, nu]]`` and wrap it."""
    if isinstance(h, Sp2ZElement):
        return h
    arr = np.asarray(h)
    if arr.shape != (2, 2):
        raise NotUnimodularError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.asarray(arr, dtype=float) == np.round(np.asarray(arr, dtype=float))):
            raise NotUnimodularError(f"non-integer entries in {arr.tolist()}")
        arr = np.round(np.asarray(arr, dtype=float)).astype(np.int64)
    (kappa, mu), (lam, nu) = arr.tolist()
    return Sp2ZElement(kappa, mu, lam, nu)


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y = g = gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_x, x = x, old_x - quotient * x
        old_y, y = y, old_y - quotient * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def complete_to_sl2(kappa: int, lam: int, shift: int = 0) -> Sp2ZElement:
    """Complete a coprime first column ``(kappa, lam)`` to an element of SL(2, Z).

    Among all solutions ``mu + t*kappa, nu + t*lam`` the one with the
    smallest ``|mu|`` is chosen (ties go to ``mu >= 0``); when ``kappa == 0``
    ``mu`` is forced and the smallest ``|nu|`` is taken instead.  ``shift``
    moves ``t`` away from that choice, producing other valid completions.
    """
    kappa, lam = int(kappa), int(lam)
    g, x, y = extended_gcd(kappa, lam)
    if g != 1:
        raise NotCoprimeError(f"gcd({kappa}, {lam}) = {g}")
    # kappa*x + lam*y = 1  ->  nu = x, mu = -y
    mu, nu = -y, x
    if kappa != 0:
        t0 = -mu // kappa
        t = min((t0, t0 + 1), key=lambda t: (abs(mu + t * kappa), mu + t * kappa < 0))
    else:
        t0 = -nu // lam
        t = min((t0, t0 + 1), key=lambda t: (abs(nu + t * lam), nu + t * lam < 0))
    t += shift
    return Sp2ZElement(kappa, mu + t * kappa, lam, nu + t * lam)


@dataclass(frozen=True)
class OrbitReduction:
    """A doubled point written as ``xi * (lam, kappa)`` with coprime ``(kappa, lam)``.

    The origin is flagged ``degenerate`` and carries ``xi = 0, kappa = 1,
    lam = 0``.
    """

    xi: int
    kappa: int
    lam: int
    degenerate: bool = False


def reduce_point(dq: int, dp: int, N: int) -> OrbitReduction:
    """Split the doubled point ``(dq, dp) = (2 q_f, 2 p_f)`` into gcd and direction."""
    N = check_dim(N)
    dq, dp = int(dq), int(dp)
    if not (0 <= dq < 2 * N and 0 <= dp < 2 * N):
        raise PointOutOfRangeError(f"({dq}, {dp}) outside [0, {2 * N})^2")
    if dq == 0 and dp == 0:
        return OrbitReduction(0, 1, 0, degenerate=True)
    xi = gcd(dp, dq)
    return OrbitReduction(xi, dp // xi, dq // xi)


def random_sl2(bound: int, seed: int, steps: int = 24) -> Sp2ZElement:
    """Deterministic random element with all entries bounded by ``bound`` in magnitude.

    Built as a random word in ``[[1,0],[1,1]]``, ``[[1,1],[0,1]]``, their
    inverses and ``-1``; steps that would leave the bound are skipped.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    rng = random.Random(seed)
    moves = (LOWER, LOWER.inverse(), UPPER, UPPER.inverse(), MINUS_ONE)
    h = Sp2ZElement.identity()
    for _ in range(steps):
        candidate = h @ rng.choice(moves)
        if candidate.max_entry() <= bound:
            h = candidate
    return h
