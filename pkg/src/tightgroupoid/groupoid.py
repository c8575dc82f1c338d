"""The tight groupoid of T: characters acted on by words, germs, fibres, orbits.

A word ``w = B_i(r, n, m)`` moves the support point ``m`` to ``n``, so the
character action is ``phi(k).w = phi(k - n + m)``.  The germ of ``w`` at
``phi(k)`` is determined by the range ``k``, the source ``k - n + m`` and the
winding ``r``; the canonical representative is rebuilt from those three.
"""

from typing import NamedTuple

from .errors import InternalInconsistency, NotComposable, NotInDomain, ParseError
from .parsing import Scanner
from .semilattice import (INF, Projection, UnitPoint, char_eval, enumerate_projections,
                          ext_shift, format_unit, in_filter, parse_unit_at, unit_points)
from .word_algebra import Word, adjoint, format_word, is_valid, parse_word_at, word_mul

ACTION_CONVENTION = "phi(k).B_i(r,n,m) = phi(k - n + m); e.g. phi(k).s1 = phi(k1-1, k2-1)"


def range_projection(w: Word) -> Projection:
    return Projection(w.cls, w.n)


def in_sigma(k: UnitPoint, w: Word) -> bool:
    if w.is_zero:
        return False
    (n1, n2), (k1, k2) = w.n, k
    if w.cls == 1:
        return n1 <= min(k1, k2)
    if w.cls == 2:
        return k2 == n2 and n1 <= k1
    if w.cls == 3:
        return k1 == n1 and n2 <= k2
    return (n1, n2) == (k1, k2)


def domain_set(w: Word, bound: int):
    return sorted((k for k in unit_points(bound) if in_sigma(k, w)), key=UnitPoint.sort_key)


def act(k: UnitPoint, w: Word) -> UnitPoint:
    if not in_sigma(k, w):
        raise NotInDomain(f"{format_unit(k)} is not in the domain of {format_word(w)}")
    return ext_shift(k, w.n, w.m)


_candidate_tables = {}


def _membership_table(k: UnitPoint, universe):
    return tuple(in_filter(e, k) for e in universe)


def act_oracle(k: UnitPoint, w: Word, bound: int) -> UnitPoint:
    """Find ``k'`` with ``phi(k')(e) = phi(k)(w e w*)`` on every projection of index <= bound."""
    if not in_sigma(k, w):
        raise NotInDomain(f"{format_unit(k)} is not in the domain of {format_word(w)}")
    universe = enumerate_projections(bound)
    ws = adjoint(w)
    table = tuple(bool(char_eval(k, word_mul(word_mul(w, e.word), ws))) for e in universe)
    if bound not in _candidate_tables:
        cands = {}
        for c in unit_points(bound):
            cands.setdefault(_membership_table(c, universe), []).append(c)
        _candidate_tables[bound] = cands
    hits = _candidate_tables[bound].get(table, [])
    if len(hits) != 1:
        raise InternalInconsistency(
            f"oracle found {len(hits)} candidate characters for {format_unit(k)} . {format_word(w)}")
    return hits[0]


# -- germs -------------------------------------------------------------------

def orbit_type(k: UnitPoint) -> int:
    """1: (inf,inf); 2: (inf, finite); 3: (finite, inf); 4: finite^2."""
    if k.k1 == INF and k.k2 == INF:
        return 1
    if k.k1 == INF:
        return 2
    if k.k2 == INF:
        return 3
    return 4


def canonical_word(k: UnitPoint, src: UnitPoint, r: int) -> Word:
    """The representative chosen for the germ from ``src`` to ``k`` with winding ``r``."""
    t = orbit_type(k)
    if orbit_type(src) != t:
        raise NotInDomain(f"{format_unit(src)} and {format_unit(k)} lie in different orbits")
    if t == 4:
        return Word(4, r, (k.k1, k.k2), (src.k1, src.k2))
    if t == 1:
        return Word(1, r, (r, r), (0, 0)) if r >= 0 else Word(1, r, (0, 0), (-r, -r))
    if t == 3:
        k1, m1 = k.k1, src.k1
        base = k1 + m1
        if r >= 0:
            return Word(3, r, (k1, base + r), (m1, base))
        return Word(3, r, (k1, base), (m1, base - r))
    k2, m2 = k.k2, src.k2
    base = k2 + m2
    if r >= 0:
        return Word(2, r, (base + r, k2), (base, m2))
    return Word(2, r, (base, k2), (base - r, m2))


class Germ(NamedTuple):
    """A germ stored through its canonical representative word."""

    k: UnitPoint
    word: Word

    @property
    def cls(self) -> int:
        return self.word.cls

    @property
    def r(self) -> int:
        return self.word.r

    @property
    def source(self) -> UnitPoint:
        return ext_shift(self.k, self.word.n, self.word.m)

    @property
    def data(self) -> tuple:
        """Canonical data: (r,), (r, m2), (r, m1) or (m1, m2, r) by orbit type."""
        s = self.source
        t = orbit_type(self.k)
        if t == 1:
            return (self.r,)
        if t == 2:
            return (self.r, s.k2)
        if t == 3:
            return (self.r, s.k1)
        return (s.k1, s.k2, self.r)

    def sort_key(self):
        return (self.k.sort_key(), self.data)

    def __str__(self):
        return format_germ(self)


def germ_from_data(k: UnitPoint, src: UnitPoint, r: int) -> Germ:
    return Germ(k, canonical_word(k, src, r))


def canonicalize(k: UnitPoint, w: Word) -> Germ:
    src = act(k, w)
    return germ_from_data(k, src, w.r)


def unit_germ(k: UnitPoint) -> Germ:
    return germ_from_data(k, k, 0)


def range_(g: Germ) -> UnitPoint:
    return g.k


def source(g: Germ) -> UnitPoint:
    return g.source


def compose(a: Germ, b: Germ) -> Germ:
    if a.source != b.k:
        raise NotComposable(f"source {format_unit(a.source)} of the left germ "
                            f"differs from range {format_unit(b.k)} of the right germ")
    w = word_mul(a.word, b.word)
    if w.is_zero:
        raise InternalInconsistency(f"{a} * {b} has zero product word")
    return canonicalize(a.k, w)


def inverse(g: Germ) -> Germ:
    return canonicalize(g.source, adjoint(g.word))


def is_unit(g: Germ) -> bool:
    return g.source == g.k and g.r == 0


# -- equivalence -------------------------------------------------------------

def equivalent(a, b, bound: int | None = None) -> bool:
    """Germ equivalence of two Sigma pairs ``(k, w)``.

    Without ``bound`` the canonical forms are compared; with ``bound`` a witness
    projection of index <= bound is searched for instead.
    """
    (ka, wa), (kb, wb) = a, b
    for k, w in (a, b):
        if not in_sigma(k, w):
            raise NotInDomain(f"{format_unit(k)} is not in the domain of {format_word(w)}")
    if ka != kb:
        return False
    if bound is None:
        return canonicalize(ka, wa) == canonicalize(kb, wb)
    return witness(ka, wa, wb, bound) is not None


def witness(k: UnitPoint, wa: Word, wb: Word, bound: int):
    for e in enumerate_projections(bound):
        if in_filter(e, k) and word_mul(e.word, wa) == word_mul(e.word, wb):
            return e
    return None


# -- fibres and isotropy -----------------------------------------------------

def _coords(t_inf: bool, bound: int):
    return [INF] if t_inf else list(range(bound + 1))


def _orbit_points(t: int, bound: int):
    return [UnitPoint(a, b)
            for a in _coords(t in (1, 2), bound)
            for b in _coords(t in (1, 3), bound)]


def label_r(g: Germ) -> tuple:
    """alpha label of a germ in its range fibre."""
    return g.data


def label_s(g: Germ) -> tuple:
    """beta label of a germ in its source fibre: range coordinates and winding."""
    t = orbit_type(g.k)
    if t == 1:
        return (g.r,)
    if t == 2:
        return (g.r, g.k.k2)
    if t == 3:
        return (g.r, g.k.k1)
    return (g.k.k1, g.k.k2, g.r)


def fiber_r(u: UnitPoint, bound: int, winding_bound: int | None = None):
    """Germs with range ``u``, source coordinates and |winding| at most ``bound``."""
    wb = bound if winding_bound is None else winding_bound
    out = [germ_from_data(u, s, r)
           for s in _orbit_points(orbit_type(u), bound) for r in range(-wb, wb + 1)]
    return sorted(out, key=Germ.sort_key)


def fiber_s(u: UnitPoint, bound: int, winding_bound: int | None = None):
    """Germs with source ``u``, range coordinates and |winding| at most ``bound``."""
    wb = bound if winding_bound is None else winding_bound
    out = [germ_from_data(k, u, r)
           for k in _orbit_points(orbit_type(u), bound) for r in range(-wb, wb + 1)]
    return sorted(out, key=Germ.sort_key)


def isotropy(u: UnitPoint, bound: int):
    """(winding label, germ) pairs of the isotropy group at ``u``."""
    return [(r, germ_from_data(u, u, r)) for r in range(-bound, bound + 1)]


def gamma(g: Germ) -> int:
    if g.k != g.source:
        raise NotInDomain(f"{g} is not an isotropy germ")
    return g.r


def in_bisection(y: Germ, w: Word) -> bool:
    """Whether ``y`` lies in the open bisection of all germs of ``w``."""
    return in_sigma(y.k, w) and equivalent((y.k, y.word), (y.k, w))


def bisection_convolution(w: Word, labels, fibre_bound: int, winding_bound: int | None = None):
    """Nonzero entries ``(x, z)`` of ``xi -> 1_w * xi`` on functions over ``labels``.

    ``(1_w * xi)(x)`` is the sum over ``y`` in the range fibre of ``r(x)`` of
    ``1_w(y) xi(y^-1 x)``; the fibre is enumerated up to ``fibre_bound``.
    Entries are label indices, sorted.
    """
    index = {g: i for i, g in enumerate(labels)}
    members = {}
    entries = []
    for xi, x in enumerate(labels):
        if x.k not in members:
            # y is canonical, so equivalence with (r(y), w) is equality with
            # the canonical form of w at r(y), computed once per fibre
            target = canonicalize(x.k, w) if in_sigma(x.k, w) else None
            members[x.k] = [y for y in fiber_r(x.k, fibre_bound, winding_bound)
                            if y == target]
        for y in members[x.k]:
            z = index.get(compose(inverse(y), x))
            if z is not None:
                entries.append((xi, z))
    return sorted(entries)


# -- orbits and the quotient topology ------------------------------------------

ORBITS = ("NxN", "Nx{inf}", "{inf}xN", "{(inf,inf)}")
_ORBIT_OF_TYPE = {4: "NxN", 3: "Nx{inf}", 2: "{inf}xN", 1: "{(inf,inf)}"}


def orbit(u: UnitPoint) -> str:
    return _ORBIT_OF_TYPE[orbit_type(u)]


def connecting_germ(a: UnitPoint, b: UnitPoint):
    """A germ with range ``a`` and source ``b``, or ``None`` for different orbits."""
    if orbit_type(a) != orbit_type(b):
        return None
    return germ_from_data(a, b, 0)


def _is_open(orbits: frozenset, depth: int = 3) -> bool:
    # Basic neighbourhoods in N-bar^2 are products of {x} or [L, inf].  A union
    # of orbits is invariant under shifting finite coordinates, so checking the
    # points with coordinates in {0..depth, inf} against the tail L = depth
    # decides openness.
    def inside(p):
        return orbit(p) in orbits

    for p in unit_points(depth):
        if not inside(p):
            continue
        xs = [[p.k1]] if p.k1 != INF else [[depth, depth + 1, INF]]
        ys = [[p.k2]] if p.k2 != INF else [[depth, depth + 1, INF]]
        if not all(inside(UnitPoint(x, y)) for x in xs[0] for y in ys[0]):
            return False
    return True


def orbit_space() -> dict:
    """The quotient topology on the four orbits, with T0 and lattice checks."""
    names = list(ORBITS)
    subsets = [frozenset(c for i, c in enumerate(names) if mask >> i & 1)
               for mask in range(1 << len(names))]
    tau = [s for s in subsets if _is_open(s)]
    tau_set = set(tau)
    closed = all(a | b in tau_set and a & b in tau_set for a in tau for b in tau)
    t0 = all(any((x in s) != (y in s) for s in tau)
             for i, x in enumerate(names) for y in names[i + 1:])
    # orbits are exactly the classes of "connected by a germ"
    pts = unit_points(3)
    connected = all((connecting_germ(a, b) is not None) == (orbit(a) == orbit(b))
                    for a in pts for b in pts)
    return {
        "orbits": names,
        "open_sets": sorted((sorted(s) for s in tau), key=lambda s: (len(s), s)),
        "count": len(tau),
        "closed_under_union_intersection": closed,
        "t0": t0,
        "orbits_match_germ_connectivity": connected,
    }


# -- text form ---------------------------------------------------------------

def format_germ(g: Germ) -> str:
    return f"[{format_unit(g.k)}, {format_word(g.word)}]"


def parse_germ(text: str) -> Germ:
    """Parse ``[phi(k1,k2), word]`` and return its canonical germ."""
    sc = Scanner(text)
    sc.expect("[")
    k = parse_unit_at(sc)
    sc.expect(",")
    pos = sc.pos
    w = parse_word_at(sc)
    sc.expect("]")
    sc.end()
    if not in_sigma(k, w):
        raise ParseError(text, pos, f"a word whose domain contains {format_unit(k)}")
    return canonicalize(k, w)


def check_germ(g: Germ) -> bool:
    """The stored word is valid, contains ``k`` and is its own canonical form."""
    return is_valid(g.word) and in_sigma(g.k, g.word) and canonicalize(g.k, g.word) == g

