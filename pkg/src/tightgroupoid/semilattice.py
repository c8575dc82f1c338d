"""Projections of T, the filters A(k), and the character space N-bar^2.

A projection ``P_i(n)`` is diagonal on the joint basis, with support

* class 1: ``{i >= n1, j >= n1}``
* class 2: ``{i >= n1, j = n2}``
* class 3: ``{i = n1, j >= n2}``
* class 4: ``{(n1, n2)}``

so products are intersections.  A point ``k`` of ``N-bar^2`` gives the
character ``phi(k)`` whose filter ``A(k)`` consists of the projections whose
support, closed up in the one-point compactification, contains ``k``.

``math.inf`` stands for the point at infinity; it absorbs finite shifts.
"""

import math
from itertools import product
from typing import NamedTuple

from .errors import ParseError, WitnessNotFound
from .parsing import Scanner
from .word_algebra import Word, format_word, is_projection, parse_word_at

INF = math.inf


class Projection(NamedTuple):
    cls: int
    n: tuple

    @property
    def word(self) -> Word:
        return Word(self.cls, 0, self.n, self.n)

    @classmethod
    def from_word(cls, w: Word):
        if not is_projection(w):
            raise ValueError(f"{format_word(w)} is not a projection")
        return cls(w.cls, w.n)

    def __str__(self):
        return format_word(self.word)


def projection_valid(p: Projection) -> bool:
    n1, n2 = p.n
    if min(n1, n2) < 0 or p.cls not in (1, 2, 3, 4):
        return False
    return {1: n1 == n2, 2: n1 >= n2, 3: n1 <= n2, 4: True}[p.cls]


def enumerate_projections(bound: int):
    out = [Projection(1, (a, a)) for a in range(bound + 1)]
    for cls in (2, 3, 4):
        for n in product(range(bound + 1), repeat=2):
            p = Projection(cls, n)
            if projection_valid(p):
                out.append(p)
    return out


def proj_mul(a: Projection, b: Projection):
    """Closed-form product of two projections; ``None`` is zero."""
    if a is None or b is None:
        return None
    if a.cls > b.cls:
        a, b = b, a
    (m1, m2), (n1, n2) = a.n, b.n
    pair = (a.cls, b.cls)
    if pair == (1, 1):
        return Projection(1, (max(m1, n1), max(m2, n2)))
    if pair == (1, 2):
        return b if m2 <= n2 <= n1 else None
    if pair == (1, 3):
        return b if m1 <= n1 <= n2 else None
    if pair == (1, 4):
        return b if m1 <= n1 and m2 <= n2 else None
    if pair == (2, 2):
        return Projection(2, (max(m1, n1), n2)) if m2 == n2 else None
    if pair == (2, 3):
        return Projection(4, b.n) if m1 == m2 == n1 == n2 else None
    if pair == (2, 4):
        return b if m1 <= n1 and m2 == n2 else None
    if pair == (3, 3):
        return Projection(3, (n1, max(m2, n2))) if m1 == n1 else None
    if pair == (3, 4):
        return b if m1 == n1 and m2 <= n2 else None
    return b if a.n == b.n else None


def leq(p: Projection, q: Projection) -> bool:
    return proj_mul(p, q) == p


# -- unit points -------------------------------------------------------------

class UnitPoint(NamedTuple):
    k1: float
    k2: float

    def __str__(self):
        return format_unit(self)

    @property
    def finite(self) -> bool:
        return self.k1 != INF and self.k2 != INF

    def sort_key(self):
        return (self.k1, self.k2)


def unit(k1, k2) -> UnitPoint:
    def norm(x):
        if x == INF or x == "inf":
            return INF
        x = int(x)
        if x < 0:
            raise ValueError("unit point coordinates are natural numbers or inf")
        return x
    return UnitPoint(norm(k1), norm(k2))


def _fmt_ext(x) -> str:
    return "inf" if x == INF else str(int(x))


def format_unit(k: UnitPoint) -> str:
    return f"phi({_fmt_ext(k.k1)},{_fmt_ext(k.k2)})"


def _ext_at(sc: Scanner):
    if sc.peek("inf"):
        sc.expect("inf")
        return INF
    return sc.integer(signed=False)


def parse_unit_at(sc: Scanner) -> UnitPoint:
    sc.expect("phi")
    sc.expect("(")
    a = _ext_at(sc)
    sc.expect(",")
    b = _ext_at(sc)
    sc.expect(")")
    return UnitPoint(a, b)


def parse_unit(text: str) -> UnitPoint:
    sc = Scanner(text)
    k = parse_unit_at(sc)
    sc.end()
    return k


def parse_projection(text: str) -> Projection:
    sc = Scanner(text)
    w = parse_word_at(sc)
    sc.end()
    if not is_projection(w):
        raise ParseError(text, 0, "a projection (r=0 and n=m)")
    return Projection.from_word(w)


def unit_points(bound: int):
    coords = list(range(bound + 1)) + [INF]
    return [UnitPoint(a, b) for a in coords for b in coords]


def ext_shift(k: UnitPoint, n, m) -> UnitPoint:
    """Coordinatewise ``k - n + m`` with infinity absorbing."""
    return UnitPoint(*(INF if x == INF else x - a + b for x, a, b in zip(k, n, m)))


# -- filters -----------------------------------------------------------------

def in_filter(p: Projection, k: UnitPoint) -> bool:
    (n1, n2), (k1, k2) = p.n, k
    if p.cls == 1:
        return n1 <= min(k1, k2)
    if p.cls == 2:
        return k2 == n2 and n1 <= k1
    if p.cls == 3:
        return k1 == n1 and n2 <= k2
    return (n1, n2) == (k1, k2)


def char_eval(k: UnitPoint, e) -> int:
    """phi(k) on a projection, a projection word, or zero (``None``)."""
    if e is None:
        return 0
    if isinstance(e, Word):
        if e.is_zero:
            return 0
        e = Projection.from_word(e)
    return 1 if in_filter(e, k) else 0


def lambda_generators(k: UnitPoint, bound: int):
    """The generating projections of the filter, truncated at ``bound``."""
    k1, k2 = k
    if k.finite:
        return [Projection(4, (k1, k2))]
    if k1 != INF:
        return [Projection(3, (k1, l2)) for l2 in range(k1, bound + 1)]
    if k2 != INF:
        return [Projection(2, (l1, k2)) for l1 in range(k2, bound + 1)]
    return [Projection(1, (l, l)) for l in range(bound + 1)]


def filter_from_definition(k: UnitPoint, bound: int):
    """Upward closure of the generators inside the projections of index <= bound."""
    gens = lambda_generators(k, bound)
    return {f for f in enumerate_projections(bound) if any(leq(g, f) for g in gens)}


def minimum_of_filter(k: UnitPoint):
    return Projection(4, (k.k1, k.k2)) if k.finite else None


def _proof_witness(p: Projection, k: UnitPoint):
    """The orthogonal projection the maximality argument constructs."""
    if k.finite:
        return Projection(4, (k.k1, k.k2))
    k1, k2 = k
    top = max(p.n) + 1
    if k1 != INF:
        return Projection(3, (k1, max(k1, top)))
    if k2 != INF:
        return Projection(2, (max(k2, top), k2))
    return Projection(1, (top, top))


def ultrafilter_witness(k: UnitPoint, bound: int) -> dict:
    """Check the bounded filter axioms and find an orthogonal member for each outsider.

    Raises ``WitnessNotFound`` if some excluded projection has no witness.
    """
    finite = [x for x in k if x != INF]
    if finite and bound < max(finite) + 1:
        raise ValueError("bound must exceed every finite coordinate of k")
    universe = enumerate_projections(bound)
    members = [p for p in universe if in_filter(p, k)]
    failures = []
    for p in members:
        for q in universe:
            if leq(p, q) and not in_filter(q, k):
                failures.append(("upward closed", str(p), str(q)))
        for q in members:
            pq = proj_mul(p, q)
            if pq is None or not in_filter(pq, k):
                failures.append(("multiplicative", str(p), str(q)))
    witnesses = {}
    proof_used = 0
    for p in universe:
        if in_filter(p, k):
            continue
        q = _proof_witness(p, k)
        if in_filter(q, k) and proj_mul(p, q) is None:
            proof_used += 1
        else:
            q = next((c for c in enumerate_projections(bound + max(p.n))
                      if in_filter(c, k) and proj_mul(p, c) is None), None)
            if q is None:
                raise WitnessNotFound(p, f"no witness for {p} at {format_unit(k)}")
        witnesses[p] = q
    return {
        "k": k,
        "bound": bound,
        "members": len(members),
        "excluded": len(witnesses),
        "witnesses": witnesses,
        "proof_witnesses": proof_used,
        "filter_failures": failures,
    }


def char_converges(sequence, limit: UnitPoint, probe: Projection) -> bool:
    """Whether ``char_eval(k_a, probe)`` settles on the limit's value.

    A finite sequence stands for its prefix, so "eventually" means: from some
    index in the first half of the sequence onward.
    """
    target = char_eval(limit, probe)
    values = [char_eval(k, probe) for k in sequence]
    if not values:
        return False
    settle = len(values)
    while settle > 0 and values[settle - 1] == target:
        settle -= 1
    return settle <= (len(values) - 1) // 2
