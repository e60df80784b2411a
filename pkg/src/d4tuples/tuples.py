"""D(4)-tuples, the regular extensions d+/d-, and triple enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .arith import perfect_square_root
from .errors import DomainError

N = 4


@dataclass(frozen=True)
class DTriple:
    a: int
    b: int
    c: int
    r_ab: int
    r_ac: int
    r_bc: int

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "DTriple":
        """Validate {a, b, c} (any order) and attach the witness roots."""
        a, b, c = sorted((a, b, c))
        if a <= 0 or not a < b < c:
            raise DomainError(f"not three distinct positive integers: {a}, {b}, {c}")
        roots = [perfect_square_root(x * y + N) for x, y in ((a, b), (a, c), (b, c))]
        if None in roots:
            raise DomainError(f"{{{a}, {b}, {c}}} is not a D(4)-triple")
        return cls(a, b, c, *roots)

    def __iter__(self):
        return iter((self.a, self.b, self.c))


@dataclass(frozen=True)
class DQuadruple:
    elements: tuple[int, int, int, int]
    witnesses: dict

    @classmethod
    def of(cls, xs: Iterable[int]) -> "DQuadruple":
        elements = _canonical(xs)
        if len(elements) != 4:
            raise DomainError("a quadruple needs four elements")
        witnesses = {}
        for x, y in combinations(elements, 2):
            r = perfect_square_root(x * y + N)
            if r is None:
                raise DomainError(f"{x}*{y}+4 is not a square")
            witnesses[(x, y)] = r
        return cls(elements, witnesses)


@dataclass(frozen=True)
class RegularExtension:
    d_plus: int
    d_minus: int
    triple: DTriple


def _canonical(xs: Iterable[int]) -> tuple[int, ...]:
    xs = [int(x) for x in xs]
    if any(x <= 0 for x in xs):
        raise DomainError(f"elements must be positive: {xs}")
    if len(set(xs)) != len(xs):
        raise DomainError(f"elements must be distinct: {xs}")
    return tuple(sorted(xs))


def is_d4_pair(a: int, b: int) -> tuple[bool, int | None]:
    """Return (True, r) with r^2 = ab + 4, or (False, None)."""
    if a <= 0 or b <= 0:
        raise DomainError(f"pair elements must be positive: {a}, {b}")
    if a == b:
        raise DomainError(f"pair elements must be distinct: {a}")
    r = perfect_square_root(a * b + N)
    return r is not None, r


def is_d4_tuple(xs: Iterable[int]) -> bool:
    elements = _canonical(xs)
    return all(perfect_square_root(x * y + N) is not None for x, y in combinations(elements, 2))


def witness_table(xs: Iterable[int]) -> list[tuple[int, int, int | None]]:
    elements = _canonical(xs)
    return [(x, y, perfect_square_root(x * y + N)) for x, y in combinations(elements, 2)]


def regular_extensions(t: DTriple) -> RegularExtension:
    # sqrt((ab+4)(ac+4)(bc+4)) is the product of the three witnesses
    root = t.r_ab * t.r_ac * t.r_bc
    abc = t.a * t.b * t.c
    base = t.a + t.b + t.c
    # abc and root have the same parity, so the halves are exact
    assert (abc + root) % 2 == 0
    d_plus = base + (abc + root) // 2
    d_minus = base + (abc - root) // 2
    return RegularExtension(d_plus, d_minus, t)


def d_minus(a: int, b: int, c: int) -> int:
    return regular_extensions(DTriple.of(a, b, c)).d_minus


def regularity_relation_holds(a: int, d: int, b: int, c: int) -> bool:
    """(b + c - a - d)^2 == (ad + 4)(bc + 4)."""
    return (b + c - a - d) ** 2 == (a * d + N) * (b * c + N)


# ---------------------------------------------------------------------------
# enumeration


def _partners_below(c: int) -> np.ndarray:
    """All x < c with xc + 4 a perfect square.

    xc + 4 = r^2 with 0 < x < c forces 2 < r <= c, so scan r and keep
    r^2 = 4 (mod c).
    """
    if c < 2:
        return np.empty(0, dtype=np.int64)
    r = np.arange(3, c + 1, dtype=np.int64)
    sq = r * r - N
    hits = sq[sq % c == 0] // c
    return hits[(hits > 0) & (hits < c)]


def partner_table(limit: int) -> dict[int, np.ndarray]:
    """Map each c <= limit to the sorted array of its D(4)-partners x < c."""
    if limit > 3_000_000:
        raise DomainError("partner tables beyond 3e6 need 64-bit overflow care")
    return {c: np.sort(_partners_below(c)) for c in range(1, limit + 1)}


def triples_with_largest(c: int, partners: dict[int, np.ndarray] | None = None) -> list[tuple[int, int]]:
    """All (a, b) with a < b < c and {a, b, c} a D(4)-triple."""
    below_c = _partners_below(c) if partners is None else partners[c]
    below_c_set = set(int(x) for x in below_c)
    out = []
    for b in sorted(below_c_set):
        below_b = _partners_below(b) if partners is None else partners[b]
        for a in below_b:
            a = int(a)
            if a in below_c_set:
                out.append((a, b))
    out.sort()
    return out


def enumerate_d4_triples(limit: int) -> Iterator[DTriple]:
    """Every D(4)-triple with c <= limit, once, in lexicographic (a, b, c) order."""
    if limit < 3:
        raise DomainError("limit must be at least 3")
    partners = partner_table(limit)
    found = []
    for c in range(3, limit + 1):
        for a, b in triples_with_largest(c, partners):
            found.append((a, b, c))
    found.sort()
    for a, b, c in found:
        yield DTriple.of(a, b, c)


def format_tuple(xs: Iterable[int]) -> str:
    return " ".join(str(x) for x in _canonical(xs))


def parse_tuples(lines: Iterable[str]) -> list[tuple[int, ...]]:
    out = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(_canonical(int(tok) for tok in line.split()))
    return out
