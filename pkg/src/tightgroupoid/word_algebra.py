"""Symbolic arithmetic for the inverse semigroup T.

A leg is the single-mode operator ``S*^n p^k S^m`` on l^2(N), where ``S`` is
the left shift (so ``S*`` is the isometry) and ``p`` the projection onto
``e_0``.  A word ``B_i(r, n, m)`` is the tensor ``leg1 (x) leg2 (x) t^r``; the
class ``i`` records which legs carry ``p``.  Words are kept up to phase.

Winding convention: ``r = n1 - m1`` for classes 1 and 2, ``r = n2 - m2`` for
class 3, ``r`` free for class 4.  This is the unique choice for which the four
generators below are words.

>>> s1 = generator("g1")
>>> format_word(word_mul(s1, adjoint(s1)))
'B1(r=0; n=1,1; m=1,1)'
>>> format_word(word_mul(adjoint(s1), s1))
'B1(r=0; n=0,0; m=0,0)'
"""

from functools import lru_cache
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import InternalInconsistency, InvalidWord, ParseError
from .parsing import Scanner

WINDING_CONVENTION = "r = n1 - m1 (classes 1, 2); r = n2 - m2 (class 3); free (class 4)"
SHIFT_CONVENTION = "S e_i = e_(i-1), S* e_i = e_(i+1), p = |e_0><e_0|, t e_c = e_(c-1)"


class ShiftMonomial(NamedTuple):
    n: int
    k: int
    m: int


class Word(NamedTuple):
    """Normal form of an element of T; ``cls == 0`` is the zero element."""

    cls: int
    r: int
    n: tuple
    m: tuple

    @property
    def is_zero(self) -> bool:
        return self.cls == 0

    def __str__(self):
        return format_word(self)


ZERO = Word(0, 0, (0, 0), (0, 0))

CLASS_FLAGS = {1: (0, 0), 2: (0, 1), 3: (1, 0), 4: (1, 1)}
FLAGS_CLASS = {v: c for c, v in CLASS_FLAGS.items()}


@lru_cache(maxsize=None)
def monomial_mul(a: ShiftMonomial, b: ShiftMonomial):
    """Normal form of ``a * b``, or ``None`` for the zero operator."""
    n1, k1, m1 = a
    n2, k2, m2 = b
    if k1 == 0 and k2 == 0:
        if m1 == n2:
            return ShiftMonomial(n1, 0, m2)
        if m1 < n2:
            return ShiftMonomial(n1 + n2 - m1, 0, m2)
        return ShiftMonomial(n1, 0, m1 - n2 + m2)
    if k1 == 0 and k2 == 1:
        if m1 == n2:
            return ShiftMonomial(n1, 1, m2)
        if m1 < n2:
            return ShiftMonomial(n1 + n2 - m1, 1, m2)
        return None
    if k1 == 1 and k2 == 0:
        if m1 == n2:
            return ShiftMonomial(n1, 1, m2)
        if m1 > n2:
            return ShiftMonomial(n1, 1, m1 - n2 + m2)
        return None
    if m1 == n2:
        return ShiftMonomial(n1, 1, m2)
    return None


def is_valid(w: Word) -> bool:
    if w.cls == 0:
        return w == ZERO
    if w.cls not in CLASS_FLAGS:
        return False
    (n1, n2), (m1, m2) = w.n, w.m
    if min(n1, n2, m1, m2) < 0:
        return False
    if w.cls == 1:
        return n1 == n2 and m1 == m2 and w.r == n1 - m1
    if w.cls == 2:
        return n1 >= n2 and m1 >= m2 and w.r == n1 - m1
    if w.cls == 3:
        return n1 <= n2 and m1 <= m2 and w.r == n2 - m2
    return True


def make_word(cls: int, r: int, n, m) -> Word:
    """Build a word and check the class constraints."""
    w = Word(int(cls), int(r), (int(n[0]), int(n[1])), (int(m[0]), int(m[1])))
    if not is_valid(w):
        raise InvalidWord(f"{format_word(w)} violates the class {cls} constraints "
                          f"under the convention {WINDING_CONVENTION}")
    return w


def legs(w: Word):
    k1, k2 = CLASS_FLAGS[w.cls]
    return ShiftMonomial(w.n[0], k1, w.m[0]), ShiftMonomial(w.n[1], k2, w.m[1])


def word_mul(a: Word, b: Word) -> Word:
    if a.cls == 0 or b.cls == 0:
        return ZERO
    a1, a2 = legs(a)
    b1, b2 = legs(b)
    l1 = monomial_mul(a1, b1)
    if l1 is None:
        return ZERO
    l2 = monomial_mul(a2, b2)
    if l2 is None:
        return ZERO
    w = Word(FLAGS_CLASS[(l1.k, l2.k)], a.r + b.r, (l1.n, l2.n), (l1.m, l2.m))
    if not is_valid(w):
        raise InternalInconsistency(f"{a} * {b} gave invalid {w}")
    return w


def word_product(*ws: Word) -> Word:
    out = ws[0]
    for w in ws[1:]:
        out = word_mul(out, w)
    return out


def adjoint(a: Word) -> Word:
    if a.cls == 0:
        return ZERO
    return Word(a.cls, -a.r, a.m, a.n)


def is_projection(a: Word) -> bool:
    return a.cls != 0 and a.r == 0 and a.n == a.m


def max_index(w: Word) -> int:
    return max(w.n + w.m) if w.cls else 0


_GENERATORS = {
    "g1": Word(1, 1, (1, 1), (0, 0)),   # S* (x) S* (x) t
    "g2": Word(3, 1, (0, 1), (0, 0)),   # -p (x) S* (x) t
    "g3": Word(2, 1, (1, 0), (0, 0)),   # -S* (x) p (x) t
    "g4": Word(4, 1, (0, 0), (0, 0)),   # -p (x) p (x) t
}
GENERATOR_IDS = tuple(_GENERATORS)
GENERATOR_SIGNS = {"g1": 1, "g2": -1, "g3": -1, "g4": -1}


def generator(gid: str) -> Word:
    gid = {"s1": "g1", "s2": "g2", "s3": "g3", "s4": "g4"}.get(gid, gid)
    return _GENERATORS[gid]


def enumerate_words(bound: int, rbound: int | None = None):
    """All valid non-zero words with indices <= bound; class 4 gets |r| <= rbound."""
    if rbound is None:
        rbound = bound
    rng = range(bound + 1)
    out = []
    for a, b in product(rng, rng):
        out.append(Word(1, a - b, (a, a), (b, b)))
    for n1, n2, m1, m2 in product(rng, rng, rng, rng):
        if n1 >= n2 and m1 >= m2 and abs(n1 - m1) <= rbound:
            out.append(Word(2, n1 - m1, (n1, n2), (m1, m2)))
        if n1 <= n2 and m1 <= m2 and abs(n2 - m2) <= rbound:
            out.append(Word(3, n2 - m2, (n1, n2), (m1, m2)))
        for r in range(-rbound, rbound + 1):
            out.append(Word(4, r, (n1, n2), (m1, m2)))
    return [w for w in out if w.cls != 1 or abs(w.r) <= rbound]


# -- text form -------------------------------------------------------------

def format_word(w: Word) -> str:
    if w.cls == 0:
        return "0"
    return f"B{w.cls}(r={w.r}; n={w.n[0]},{w.n[1]}; m={w.m[0]},{w.m[1]})"


def parse_word_at(sc: Scanner) -> Word:
    sc.skip_ws()
    start = sc.pos
    for alias in ("s1", "s2", "s3", "s4"):
        if sc.peek(alias):
            sc.expect(alias)
            return generator(alias)
    if sc.peek("0"):
        sc.expect("0")
        return ZERO
    sc.expect("B")
    sc.skip_ws()
    cls_pos = sc.pos
    cls = sc.integer(signed=False)
    if cls not in CLASS_FLAGS:
        raise ParseError(sc.text, cls_pos, "class digit 1-4")
    sc.expect("(")
    sc.expect("r")
    sc.expect("=")
    r = sc.integer()
    sc.expect(";")
    sc.expect("n")
    sc.expect("=")
    n1 = sc.integer(signed=False)
    sc.expect(",")
    n2 = sc.integer(signed=False)
    sc.expect(";")
    sc.expect("m")
    sc.expect("=")
    m1 = sc.integer(signed=False)
    sc.expect(",")
    m2 = sc.integer(signed=False)
    sc.expect(")")
    w = Word(cls, r, (n1, n2), (m1, m2))
    if not is_valid(w):
        raise ParseError(sc.text, start, f"a valid class-{cls} word ({WINDING_CONVENTION})")
    return w


def parse_word(text: str) -> Word:
    sc = Scanner(text)
    w = parse_word_at(sc)
    sc.end()
    return w


# -- batched products ------------------------------------------------------
# Columns: cls, r, n1, n2, m1, m2.  Used by the exhaustive suites, where the
# pair count is in the tens of millions; cross-checked against word_mul.

def words_to_array(words) -> np.ndarray:
    return np.array([(w.cls, w.r, w.n[0], w.n[1], w.m[0], w.m[1]) for w in words],
                    dtype=np.int64).reshape(-1, 6)


def array_to_words(arr: np.ndarray):
    return [Word(int(c), int(r), (int(a), int(b)), (int(x), int(y)))
            for c, r, a, b, x, y in np.asarray(arr).reshape(-1, 6)]


_K1 = np.array([0, 0, 0, 1, 1])
_K2 = np.array([0, 0, 1, 0, 1])
_CLS_OF = np.array([[1, 2], [3, 4]])


def _leg_mul(n1, k1, m1, n2, k2, m2):
    # closed form of the nine-case table: n grows by (n2-m1)^+, m by (m1-n2)^+
    zero = ((k2 == 1) & (m1 > n2)) | ((k1 == 1) & (m1 < n2))
    n = n1 + np.maximum(n2 - m1, 0)
    m = m2 + np.maximum(m1 - n2, 0)
    return n, k1 | k2, m, zero


def valid_mask(arr: np.ndarray) -> np.ndarray:
    c, r, n1, n2, m1, m2 = np.moveaxis(arr, -1, 0)
    ok1 = (n1 == n2) & (m1 == m2) & (r == n1 - m1)
    ok2 = (n1 >= n2) & (m1 >= m2) & (r == n1 - m1)
    ok3 = (n1 <= n2) & (m1 <= m2) & (r == n2 - m2)
    nonneg = (n1 >= 0) & (n2 >= 0) & (m1 >= 0) & (m2 >= 0)
    zero = (c == 0) & (r == 0) & (n1 == 0) & (n2 == 0) & (m1 == 0) & (m2 == 0)
    return zero | (nonneg & (((c == 1) & ok1) | ((c == 2) & ok2) | ((c == 3) & ok3) | (c == 4)))


def word_mul_array(a: np.ndarray, b: np.ndarray):
    """Broadcast product of word arrays; returns (products, invalid_mask)."""
    ca, ra, an1, an2, am1, am2 = np.moveaxis(a, -1, 0)
    cb, rb, bn1, bn2, bm1, bm2 = np.moveaxis(b, -1, 0)
    n1, k1, m1, z1 = _leg_mul(an1, _K1[ca], am1, bn1, _K1[cb], bm1)
    n2, k2, m2, z2 = _leg_mul(an2, _K2[ca], am2, bn2, _K2[cb], bm2)
    zero = z1 | z2 | (ca == 0) | (cb == 0)
    cls = _CLS_OF[k1, k2]
    out = np.stack(np.broadcast_arrays(cls, ra + rb, n1, n2, m1, m2), axis=-1)
    out = np.where(zero[..., None], 0, out)
    return out, ~valid_mask(out)


def adjoint_array(a: np.ndarray) -> np.ndarray:
    c, r, n1, n2, m1, m2 = np.moveaxis(a, -1, 0)
    return np.stack([c, -r, m1, m2, n1, n2], axis=-1)
