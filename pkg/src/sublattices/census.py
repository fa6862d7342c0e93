"""Counting formulas: sublattices by index, their equivalence classes, class sizes.

Two sublattices of Z^n count as equivalent when a unimodular change of basis maps
one onto the other, which happens exactly when they share the same invariant
factor chain d1 | d2 | ... | dn.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iter_product
from math import prod
from typing import Iterable, NamedTuple, Sequence

from .arith import (
    INFINITY,
    divisor_compositions,
    euler_phi_prime_power,
    factorize,
    is_prime,
    ord_p,
    partition_count,
    partitions,
)


def _check_nm(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n} m={m}")


def sublattice_count_recursion(n: int, m: int) -> int:
    """Number of index-m sublattices of Z^n as a sum over ordered divisor tuples.

    Each diagonal (d1, ..., dn) of a Hermite form contributes
    d1^0 * d2^1 * ... * dn^(n-1) reduced upper entries.
    """
    _check_nm(n, m)
    total = 0
    for comp in divisor_compositions(m, n):
        term = 1
        for i, d in enumerate(comp):
            term *= d**i
        total += term
    return total


def sublattice_count(n: int, m: int) -> int:
    """Number of index-m sublattices of Z^n, multiplicative closed form.

    Per prime power p**r the count is prod_{j=1..n-1} (p^(j+r)-1)/(p^j-1);
    the quotient of the full products is exact even though individual factors
    need not divide, so we multiply everything out before the one division.
    """
    _check_nm(n, m)
    total = 1
    for p, r in factorize(m):
        num = 1
        den = 1
        for j in range(1, n):
            num *= p ** (j + r) - 1
            den *= p**j - 1
        if num % den:
            raise ArithmeticError(f"closed form lost exactness at p={p} r={r} n={n}")
        total *= num // den
    return total


def class_count(n: int, m: int) -> int:
    """Number of equivalence classes of index-m sublattices of Z^n.

    Classes correspond to choices, per prime p | m, of a partition of the
    exponent of p into n nondecreasing parts.
    """
    _check_nm(n, m)
    out = 1
    for _, r in factorize(m):
        out *= partition_count(n, r)
    return out


def validate_chain(divisors: Iterable[int]) -> tuple[int, ...]:
    """Check an invariant factor chain: positive entries, each dividing the next."""
    chain = tuple(int(d) for d in divisors)
    if not chain:
        raise ValueError("invariant factor chain must be nonempty")
    for d in chain:
        if d < 1:
            raise ValueError(f"invariant factors must be positive, got {d}")
    for a, b in zip(chain, chain[1:]):
        if b % a:
            raise ValueError(f"broken divisor chain: {a} does not divide {b}")
    return chain


class ValuationProfile(NamedTuple):
    """Valuation levels of an inner class extended by one glue vector.

    levels has one entry per dimension of the merged lattice; the entries are
    nondecreasing and the last one is INFINITY so that a cutoff always exists.
    cutoff is the first 1-based index whose level strictly exceeds the pivot
    exponent.
    """

    levels: tuple
    cutoff: int


def valuation_profile(pivot: int, inner: Sequence[int], glue: Sequence[int]) -> ValuationProfile:
    """Profile of the class obtained by gluing a pivot vector onto an inner class.

    inner is the nondecreasing exponent tuple of the inner class and glue the
    componentwise valuations of the glue vector, with 0 <= glue[i] <= inner[i].
    Level k (1-based, below the sentinel) is
        min(inner[k-1] - inner[i] + glue[i] for i < k-1,  glue[j] for j >= k-1)
    over 0-based positions of the inner tuple.
    """
    inner = tuple(int(b) for b in inner)
    glue = tuple(int(d) for d in glue)
    if pivot < 0:
        raise ValueError(f"pivot exponent must be nonnegative, got {pivot}")
    if len(glue) != len(inner):
        raise ValueError("glue vector and inner class must have equal length")
    if any(b < 0 for b in inner) or any(inner[i] > inner[i + 1] for i in range(len(inner) - 1)):
        raise ValueError(f"inner class must be nondecreasing and nonnegative, got {inner}")
    for b, d in zip(inner, glue):
        if not 0 <= d <= b:
            raise ValueError(f"glue valuation {d} outside [0, {b}]")
    levels: list = []
    for k in range(1, len(inner) + 1):
        candidates = [inner[k - 1] - inner[i] + glue[i] for i in range(k - 1)]
        candidates += [glue[j] for j in range(k - 1, len(inner))]
        levels.append(min(candidates))
    levels.append(INFINITY)
    for a, b in zip(levels, levels[1:]):
        if a > b:
            raise ArithmeticError(f"valuation levels must be nondecreasing, got {levels}")
    cutoff = next(k for k, lv in enumerate(levels, start=1) if pivot < lv)
    return ValuationProfile(tuple(levels), cutoff)


def _merged_exponents(pivot: int, inner: tuple[int, ...], prof: ValuationProfile) -> tuple[int, ...]:
    """Exponent tuple of the class glued from (pivot, inner) with the given profile."""
    n = len(inner) + 1
    lv = (0,) + prof.levels  # 1-based access with level_0 = 0
    b = (0,) + inner  # 1-based access with inner_0 = 0
    k0 = prof.cutoff
    out = []
    for k in range(1, n + 1):
        if k < k0:
            out.append(lv[k] if k == 1 else b[k - 1] + lv[k] - lv[k - 1])
        elif k == k0:
            out.append(b[k - 1] + pivot - lv[k - 1])
        else:
            out.append(b[k - 1])
    return tuple(out)


def admissible_glue(pivot: int, target: Sequence[int], inner: Sequence[int]) -> list[tuple[int, ...]]:
    """Glue valuation tuples through which (pivot, inner) merges into target.

    Scans the box prod [0, inner[i]] and keeps the glue vectors whose merged
    exponent tuple equals target.  Empty when the exponent budget
    sum(target) = pivot + sum(inner) fails.  The result does not depend on any
    prime, which is what makes the class sizes polynomial in the prime.
    """
    target = tuple(int(a) for a in target)
    inner = tuple(int(b) for b in inner)
    if pivot < 0:
        raise ValueError(f"pivot exponent must be nonnegative, got {pivot}")
    if len(target) != len(inner) + 1:
        raise ValueError("target must have one more part than the inner class")
    if sum(target) != pivot + sum(inner):
        return []
    out = []
    for glue in iter_product(*(range(b + 1) for b in inner)):
        prof = valuation_profile(pivot, inner, glue)
        if _merged_exponents(pivot, inner, prof) == target:
            out.append(glue)
    return out


def glue_vector_count(inner: Sequence[int], glue: Sequence[int], p: int) -> int:
    """Number of glue vectors with the given componentwise valuations.

    Components at valuation glue[i] < inner[i] can be any unit multiple of
    p**glue[i] modulo p**inner[i]; components at the top valuation are pinned.
    """
    inner = tuple(int(b) for b in inner)
    glue = tuple(int(d) for d in glue)
    out = 1
    for b, d in zip(inner, glue):
        if not 0 <= d <= b:
            raise ValueError(f"glue valuation {d} outside [0, {b}]")
        if d < b:
            out *= p ** (b - d) - p ** (b - d - 1)
    return out


@lru_cache(maxsize=None)
def _class_size_prime(exponents: tuple[int, ...], p: int) -> int:
    n = len(exponents)
    if n == 1:
        return 1
    k = sum(exponents)
    total = 0
    for pivot in range(k + 1):
        for inner in partitions(n - 1, k - pivot):
            hits = admissible_glue(pivot, exponents, inner)
            if not hits:
                continue
            weight = sum(glue_vector_count(inner, g, p) for g in hits)
            total += _class_size_prime(inner, p) * weight
    return total


def class_size_prime(exponents: Sequence[int], p: int) -> int:
    """Number of sublattices whose invariant factors are p**e along the exponent tuple.

    Recursion on dimension: split off the first basis direction (the pivot),
    classify the remaining directions as an inner class one dimension down, and
    weight each inner class by the glue vectors through which the two merge into
    the requested class.  Memoized per (exponents, p).
    """
    exps = tuple(int(e) for e in exponents)
    if not exps:
        raise ValueError("exponent tuple must be nonempty")
    if any(e < 0 for e in exps) or any(exps[i] > exps[i + 1] for i in range(len(exps) - 1)):
        raise ValueError(f"exponents must be nondecreasing and nonnegative, got {exps}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _class_size_prime(exps, p)


def class_size_2x2(t: int, r: int, p: int) -> int:
    """Closed-form size of the class (p**t, p**(r-t)) in dimension 2."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if t < 0 or 2 * t > r:
        raise ValueError(f"need 0 <= 2t <= r, got t={t} r={r}")
    if 2 * t == r:
        return 1
    return p ** (r - 2 * t) + p ** (r - 2 * t - 1)


def class_size(divisors: Iterable[int]) -> int:
    """Number of sublattices whose invariant factor chain equals the given one."""
    chain = validate_chain(divisors)
    out = 1
    for p, _ in factorize(chain[-1]):
        exps = tuple(ord_p(p, d) for d in chain)
        out *= class_size_prime(exps, p)
    return out


def cocyclic_count_prime_power(n: int, p: int, r: int) -> int:
    """Number of co-cyclic sublattices of index p**r: quotient cyclic, chain (1,...,1,p**r)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if r < 0:
        raise ValueError(f"need r >= 0, got {r}")
    if r == 0:
        return 1
    return p ** ((n - 1) * (r - 1)) * ((p**n - 1) // (p - 1))


def cocyclic_count(n: int, m: int) -> int:
    """Number of co-cyclic sublattices of index m: (m/rad m)^(n-1) * sigma1((rad m)^(n-1))."""
    _check_nm(n, m)
    fac = factorize(m)
    rad = prod(p for p, _ in fac)
    sigma = prod((p**n - 1) // (p - 1) for p, _ in fac)
    return (m // rad) ** (n - 1) * sigma


def cocyclic_count_upto(n: int, limit: int) -> int:
    """Total number of co-cyclic sublattices of Z^n over all indices 1..limit."""
    _check_nm(n, limit)
    return sum(cocyclic_count(n, m) for m in range(1, limit + 1))


@dataclass
class CensusTable:
    """Class-by-class table for one (n, m): invariant factor chain -> count."""

    n: int
    m: int
    counts: dict[tuple[int, ...], int]

    def total(self) -> int:
        return sum(self.counts.values())

    def sorted_items(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.counts.items())


def class_census(n: int, m: int) -> CensusTable:
    """Every invariant factor chain of index m together with its class size.

    Keys combine one exponent partition per prime of m; the count is the product
    of the per-prime class sizes.  Key count equals class_count(n, m) and the
    counts sum to sublattice_count(n, m).
    """
    _check_nm(n, m)
    fac = factorize(m)
    prime_parts = [list(partitions(n, r)) for _, r in fac]
    counts: dict[tuple[int, ...], int] = {}
    for combo in iter_product(*prime_parts):
        key = tuple(
            prod(p ** exps[i] for (p, _), exps in zip(fac, combo)) for i in range(n)
        )
        counts[key] = prod(class_size_prime(exps, p) for (p, _), exps in zip(fac, combo))
    return CensusTable(n, m, counts)


def euler_phi_recurrence_check(n: int, p: int, r: int) -> bool:
    """Dimension recurrence for co-cyclic counts, used as an internal cross-check.

    f_n = p**r * f_{n-1}(p**r) + sum_{r1=1..r-1} phi(p**(r-r1)) * f_{n-1}(p**(r-r1)) + 1.
    """
    if n < 2 or r < 1:
        raise ValueError(f"need n >= 2 and r >= 1, got n={n} r={r}")
    lhs = cocyclic_count_prime_power(n, p, r)
    rhs = p**r * cocyclic_count_prime_power(n - 1, p, r) + 1
    for r1 in range(1, r):
        rhs += euler_phi_prime_power(p, r - r1) * cocyclic_count_prime_power(n - 1, p, r - r1)
    return lhs == rhs
