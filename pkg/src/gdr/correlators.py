"""Witten-Kontsevich intersection numbers <tau_{k1}...tau_{kn}>_g.

These are the integrals of psi-class monomials over the compactified
moduli space of stable curves, the leaf evaluator of the bamboo pipeline.
Evaluation order: dimension gate, genus-0 closed form (n-3)!/prod(k_i!),
string equation, dilaton equation, then the Dijkgraaf-Verlinde-Verlinde
recursion on the largest exponent. The two initial conditions are
<tau_0^3>_0 = 1 (inside the closed form) and <tau_1>_1 = 1/24.

All values are memoized; the memo persists through a line-oriented text
cache (`g;k1,...,kn;num/den`, exponents sorted ascending). Memo writes
are idempotent (a key always maps to the same value), so concurrent
recomputation is harmless; loading a cache can only pre-populate values
that recomputation would reproduce.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Tuple

from .core import format_rational, parse_rational

Key = Tuple[int, Tuple[int, ...]]

_memo: Dict[Key, Fraction] = {}

_GENUS_1_ONE_POINT = Fraction(1, 24)


@dataclass(frozen=True)
class CorrelatorKey:
    """Memo key (genus, sorted exponent multiset); insertion order is
    irrelevant because the correlator is symmetric."""

    genus: int
    exponents: tuple

    @classmethod
    def make(cls, genus: int, exponents: Iterable[int]) -> "CorrelatorKey":
        return cls(int(genus), tuple(sorted(int(k) for k in exponents)))

    @property
    def dimension_ok(self) -> bool:
        n = len(self.exponents)
        return sum(self.exponents) == 3 * self.genus - 3 + n


def clear_memo() -> None:
    _memo.clear()


def memo_snapshot() -> Dict[Key, Fraction]:
    return dict(_memo)


def _odd_double_factorial(m: int) -> int:
    """(2k+1)!! for odd m = 2k+1 >= -1; (-1)!! = 1."""
    result = 1
    for j in range(1, m + 1, 2):
        result *= j
    return result


def correlator(genus: int, exponents: Iterable[int]) -> Fraction:
    """<tau_{k1}...tau_{kn}>_g as an exact rational.

    Out-of-dimension input and empty moduli (g=0 with n<3, n=0) give 0,
    never an error; negative genus or exponents are rejected.
    """
    exps = tuple(sorted(int(k) for k in exponents))
    if genus < 0:
        raise ValueError("genus must be >= 0")
    if any(k < 0 for k in exps):
        raise ValueError("psi exponents must be >= 0")
    n = len(exps)
    if n == 0 or sum(exps) != 3 * genus - 3 + n:
        return Fraction(0)
    if genus == 0:
        if n < 3:
            return Fraction(0)
        value = Fraction(factorial(n - 3))
        for k in exps:
            value /= factorial(k)
        return value
    key = (genus, exps)
    cached = _memo.get(key)
    if cached is not None:
        return cached
    value = _evaluate(genus, exps)
    _memo[key] = value
    return value


def _evaluate(genus: int, exps: tuple) -> Fraction:
    n = len(exps)
    if (genus, n) == (1, 1):
        return _GENUS_1_ONE_POINT
    if exps[0] == 0:
        # string equation: remove one tau_0, lower each remaining exponent
        rest = exps[1:]
        total = Fraction(0)
        for j, kj in enumerate(rest):
            if kj >= 1:
                total += correlator(genus, rest[:j] + (kj - 1,) + rest[j + 1:])
        return total
    if exps[0] == 1:
        # dilaton equation; n >= 2 here since (1,1) was handled above
        return (2 * genus - 2 + (n - 1)) * correlator(genus, exps[1:])
    return _dvv(genus, exps)


def _dvv(genus: int, exps: tuple) -> Fraction:
    """Virasoro recursion on the largest exponent (all exponents >= 2)."""
    k = exps[-1]
    rest = exps[:-1]
    m = len(rest)
    acc = Fraction(0)
    for j, kj in enumerate(rest):
        joined = rest[:j] + (k + kj - 1,) + rest[j + 1:]
        acc += Fraction(
            _odd_double_factorial(2 * (k + kj) - 1),
            _odd_double_factorial(2 * kj - 1),
        ) * correlator(genus, joined)
    half = Fraction(1, 2)
    for a in range(k - 1):
        b = k - 2 - a
        weight = _odd_double_factorial(2 * a + 1) * _odd_double_factorial(2 * b + 1)
        acc += half * weight * correlator(genus - 1, rest + (a, b))
        for g1 in range(genus + 1):
            g2 = genus - g1
            for mask in range(1 << m):
                left = tuple(rest[i] for i in range(m) if mask >> i & 1)
                right = tuple(rest[i] for i in range(m) if not mask >> i & 1)
                acc += (
                    half
                    * weight
                    * correlator(g1, (a,) + left)
                    * correlator(g2, (b,) + right)
                )
    return acc / _odd_double_factorial(2 * k + 1)


# ---------------------------------------------------------------------------
# persistent cache: `g;k1,k2,...,kn;num/den` per line, exponents ascending


class CacheError(ValueError):
    """Raised when a cache file fails to parse; the whole file is rejected."""


_INT_RE = re.compile(r"^\d+$")


def _parse_line(line: str, lineno: int) -> tuple:
    fields = line.split(";")
    if len(fields) != 3:
        raise CacheError(f"line {lineno}: expected 3 ';'-separated fields")
    genus_text, exps_text, frac_text = fields
    if not _INT_RE.match(genus_text):
        raise CacheError(f"line {lineno}: malformed genus {genus_text!r}")
    parts = exps_text.split(",")
    if not all(_INT_RE.match(p) for p in parts):
        raise CacheError(f"line {lineno}: malformed exponents {exps_text!r}")
    exps = tuple(int(p) for p in parts)
    if exps != tuple(sorted(exps)):
        raise CacheError(f"line {lineno}: exponents not sorted ascending")
    try:
        value = parse_rational(frac_text)
    except ValueError as exc:
        raise CacheError(f"line {lineno}: {exc}") from exc
    return (int(genus_text), exps), value


def load_cache(path: str) -> Dict[Key, Fraction]:
    """Parse a cache file. Any malformed line rejects the whole file."""
    table: Dict[Key, Fraction] = {}
    with open(path, "r", encoding="ascii") as handle:
        for lineno, raw in enumerate(handle.read().splitlines(), start=1):
            key, value = _parse_line(raw, lineno)
            table[key] = value
    return table


def store_cache(path: str, table: Dict[Key, Fraction] | None = None) -> None:
    """Write a cache file in canonical sorted order (bit-exact round trip)."""
    if table is None:
        table = _memo
    lines = []
    for (genus, exps), value in sorted(table.items()):
        exps_text = ",".join(str(k) for k in exps)
        lines.append(f"{genus};{exps_text};{format_rational(value)}")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines))
        if lines:
            handle.write("\n")


def load_cache_into_memo(path: str) -> int:
    """Merge a cache file into the live memo; returns the number of entries."""
    table = load_cache(path)
    _memo.update(table)
    return len(table)
