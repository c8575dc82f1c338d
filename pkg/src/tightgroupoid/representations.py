"""Soibelman families and the representations induced from isotropy characters.

For a unit ``u`` the induced space is spanned by basis functions ``e_rho`` on
the source fibre of ``u``.  A torus point ``t0`` turns the isotropy pairing
``<e_a, e_b>_*`` into the Gram form ``G[a, b] = sum_r <e_a, e_b>_*(sigma_r) t0^r``
(conjugate-linear in the first slot).  Since ``rho sigma_r`` has winding
``r_rho + r``, the Gram form is ``t0^(r_b - r_a)`` on labels with a common
range and zero otherwise, so ``e_rho -> t0^(r_rho) e_range(rho)`` identifies
the quotient with l2 of the orbit.
"""

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import groupoid as gp
from .errors import GramDegeneracyMismatch
from .semilattice import INF, UnitPoint
from .word_algebra import GENERATOR_IDS, adjoint, generator, max_index, word_mul

NULL_THRESHOLD = 1e-9
PSD_TOLERANCE = -1e-12
TOL = 1e-12

CASE_UNITS = {1: UnitPoint(INF, INF), 2: UnitPoint(INF, 2), 3: UnitPoint(2, INF), 4: UnitPoint(2, 3)}
T0_SAMPLES = (0.0, 0.25, 0.3)   # turns: 1, i, exp(0.6 pi i)

# -- Weyl group and torus ------------------------------------------------------

WEYL = ("1", "w1", "w2", "w1w2")


def weyl_mul(a: str, b: str) -> str:
    letters = {"1": set(), "w1": {1}, "w2": {2}, "w1w2": {1, 2}}
    s = letters[a] ^ letters[b]
    return {frozenset(): "1", frozenset({1}): "w1", frozenset({2}): "w2"}.get(frozenset(s), "w1w2")


class TorusPoint(NamedTuple):
    t0: complex

    @classmethod
    def from_turns(cls, turns: float):
        return cls(complex(np.exp(2j * np.pi * turns)))

    def check(self):
        if abs(abs(self.t0) - 1) > TOL:
            raise ValueError(f"{self.t0} is not on the unit circle")
        return self


def _t0(t0) -> complex:
    return complex(t0.t0 if isinstance(t0, TorusPoint) else t0)


# -- Soibelman families ----------------------------------------------------------

def _shift_pair(n: int):
    s_star = np.eye(n, k=-1)
    p = np.zeros((n, n))
    p[0, 0] = 1
    return s_star, p


def soibelman(omega: str, t0, n: int) -> dict:
    """Generator images of the family ``omega`` on the ``n``-truncated space."""
    t0 = _t0(t0)
    s, p = _shift_pair(n)
    z = np.zeros((n, n))
    if omega == "w1w2":
        imgs = (np.kron(s, s), np.kron(s, p), np.kron(p, s), np.kron(p, p))
    elif omega == "w1":
        imgs = (s, z, p, z)
    elif omega == "w2":
        imgs = (s, p, z, z)
    elif omega == "1":
        imgs = (np.ones((1, 1)), np.zeros((1, 1)), np.zeros((1, 1)), np.zeros((1, 1)))
    else:
        raise ValueError(f"unknown Weyl word {omega!r}")
    return {g: t0 * m.astype(complex) for g, m in zip(GENERATOR_IDS, imgs)}


# -- pairings and Gram forms -------------------------------------------------------

def star_inner(phi1: dict, phi2: dict, u: UnitPoint, window: int) -> dict:
    """``<phi1, phi2>_*`` as a function of the isotropy winding, ``|r| <= window``.

    ``phi1``, ``phi2`` map germs with source ``u`` to complex coefficients.
    """
    out = {}
    for r, sigma in gp.isotropy(u, window):
        total = 0j
        for y, c in phi1.items():
            if c:
                total += np.conj(c) * phi2.get(gp.compose(y, sigma), 0)
        if total:
            out[r] = total
    return out


def case_labels(case: int, bound: int):
    return gp.fiber_s(CASE_UNITS[case], bound)


def _pairing_rows(labels, u: UnitPoint, window: int):
    # <e_a, e_b>_*(sigma_r) = 1 iff a sigma_r = b
    index = {g: i for i, g in enumerate(labels)}
    iso = gp.isotropy(u, window)
    rows = []
    for a in labels:
        row = []
        for r, sigma in iso:
            b = index.get(gp.compose(a, sigma))
            if b is not None:
                row.append((b, r))
        rows.append(row)
    return rows


def gram(case: int, t0, labels, window: int | None = None) -> np.ndarray:
    u = CASE_UNITS[case]
    if window is None:
        window = 2 * max((abs(g.r) for g in labels), default=0)
    t0 = _t0(t0)
    G = np.zeros((len(labels), len(labels)), dtype=complex)
    for a, row in enumerate(_pairing_rows(labels, u, window)):
        for b, r in row:
            G[a, b] += t0 ** r
    return G


class InducedSpace(NamedTuple):
    case: int
    unit: UnitPoint
    t0: complex
    bound: int
    labels: list
    gram: np.ndarray
    ident: np.ndarray      # row a: image of e_a in the orbit basis
    ranges: list           # orbit basis, sorted
    basis: list            # label index of the winding-0 label over each range
    rank: int
    min_eigenvalue: float


def _ident_matrix(labels, ranges, t0: complex) -> np.ndarray:
    pos = {k: i for i, k in enumerate(ranges)}
    C = np.zeros((len(labels), len(ranges)), dtype=complex)
    for a, g in enumerate(labels):
        C[a, pos[g.k]] = t0 ** g.r
    return C


@lru_cache(maxsize=None)
def _labels_cached(case: int, bound: int):
    return tuple(case_labels(case, bound))


def induced_space(case: int, t0, bound: int) -> InducedSpace:
    t0 = _t0(TorusPoint(_t0(t0)).check())
    labels = list(_labels_cached(case, bound))
    G = gram(case, t0, labels)
    evals = np.linalg.eigvalsh(G)
    rank = int(np.sum(evals > NULL_THRESHOLD))
    ranges = sorted({g.k for g in labels}, key=UnitPoint.sort_key)
    if rank != len(ranges):
        raise GramDegeneracyMismatch(
            f"case {case}: Gram rank {rank} but {len(ranges)} orbit points in the window")
    index = {g: i for i, g in enumerate(labels)}
    u = CASE_UNITS[case]
    basis = [index[gp.germ_from_data(k, u, 0)] for k in ranges]
    return InducedSpace(case, u, t0, bound, labels, G, _ident_matrix(labels, ranges, t0),
                        ranges, basis, rank, float(evals.min()))


def isometry_defect(space: InducedSpace) -> float:
    C = space.ident
    return float(np.abs(space.gram - np.conj(C) @ C.T).max())


# -- induced operators ---------------------------------------------------------------

@lru_cache(maxsize=None)
def label_operator(case: int, bound: int, w) -> np.ndarray:
    """0/1 matrix of ``xi -> 1_w * xi`` on the label window (independent of t0)."""
    labels = list(_labels_cached(case, bound))
    entries = gp.bisection_convolution(w, labels, bound + max_index(w) + 1, bound)
    A = np.zeros((len(labels), len(labels)))
    for x, z in entries:
        A[x, z] += 1
    return A


def induced_operator(space: InducedSpace, w) -> np.ndarray:
    A = label_operator(space.case, space.bound, w)
    return space.ident.T @ A[:, space.basis]


def induced_rep(case: int, t0, bound: int, space: InducedSpace | None = None) -> dict:
    if bound < 4:
        raise ValueError("bound must be at least 4")
    space = space or induced_space(case, t0, bound)
    return {g: induced_operator(space, generator(g)) for g in GENERATOR_IDS}


def _interior_cols(space: InducedSpace, margin: int):
    return [i for i, k in enumerate(space.ranges)
            if all(x == INF or x <= space.bound - margin for x in k)]


def well_defined_defect(space: InducedSpace, w, margin: int = 2) -> float:
    """How far ``1_w *`` is from descending to the quotient, on interior labels."""
    A = label_operator(space.case, space.bound, w)
    img = induced_operator(space, w)
    C = space.ident
    cols = [a for a, g in enumerate(space.labels)
            if abs(g.r) <= space.bound - margin
            and all(x == INF or x <= space.bound - margin for x in g.k)]
    lhs = C.T @ A[:, cols]
    rhs = img @ C.T[:, cols]
    return float(np.abs(lhs - rhs).max(initial=0))


def homomorphism_defect(space: InducedSpace, margin: int = 2) -> float:
    """Max deviation of products and adjoints of generator images from the
    images of the symbolic products, on interior columns."""
    cols = _interior_cols(space, margin)
    worst = 0.0
    gens = {g: generator(g) for g in GENERATOR_IDS}
    imgs = {g: induced_operator(space, w) for g, w in gens.items()}
    for g, w in gens.items():
        star = induced_operator(space, adjoint(w))
        worst = max(worst, np.abs((star - imgs[g].conj().T)[:, cols]).max(initial=0))
        for h, v in gens.items():
            prod = word_mul(w, v)
            target = induced_operator(space, prod) if not prod.is_zero else 0 * imgs[g]
            worst = max(worst, np.abs((imgs[g] @ imgs[h] - target)[:, cols]).max(initial=0))
    return float(worst)


def equivariance_defect(case: int, t0a, t0b, bound: int) -> float:
    """Replacing t0 by t0' rescales the identification by diag(lambda^r) and the
    images by lambda = t0'/t0."""
    sa, sb = induced_space(case, t0a, bound), induced_space(case, t0b, bound)
    lam = sb.t0 / sa.t0
    D = np.diag([lam ** g.r for g in sa.labels])
    worst = float(np.abs(sb.ident - D @ sa.ident).max())
    for g in GENERATOR_IDS:
        w = generator(g)
        A = label_operator(case, bound, w)
        worst = max(worst, float(np.abs(D @ A - lam ** w.r * A @ D).max()))
        worst = max(worst, float(np.abs(induced_operator(sb, w)
                                        - lam ** w.r * induced_operator(sa, w)).max()))
    return worst


# -- equivalence with a Soibelman family -------------------------------------------------

def _leg_flip(n: int) -> np.ndarray:
    F = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            F[b * n + a, a * n + b] = 1
    return F


def check_equivalence(case: int, t0, bound: int, margin: int = 1) -> dict:
    """Match induced generator images against every Soibelman family.

    Candidate intertwiners are the identity and, on two-leg spaces, the flip
    of the two l2(N) factors.  Entrywise comparison on interior columns.
    """
    space = induced_space(case, t0, bound)
    imgs = induced_rep(case, t0, bound, space)
    n = bound + 1
    cols = _interior_cols(space, margin)
    dim = len(space.ranges)
    results = {}
    for omega in WEYL:
        fam = soibelman(omega, space.t0, n)
        if fam["g1"].shape[0] != dim:
            results[omega] = {"match": False, "reason": "dimension", "intertwiner": None}
            continue
        inters = {"identity": np.eye(dim)}
        if dim == n * n:
            inters["leg flip"] = _leg_flip(n)
        best = None
        for name, J in inters.items():
            diff = max(float(np.abs((J @ imgs[g] @ J.T - fam[g])[:, cols]).max(initial=0))
                       for g in GENERATOR_IDS)
            if best is None or diff < best[1]:
                best = (name, diff)
        results[omega] = {"match": best[1] <= TOL, "max_diff": best[1], "intertwiner": best[0]}
    matched = [w for w, r in results.items() if r["match"]]
    return {
        "case": case,
        "unit": str(space.unit),
        "t0": [space.t0.real, space.t0.imag],
        "bound": bound,
        "matched": matched[0] if len(matched) == 1 else None,
        "families": results,
        "gram_min_eigenvalue": space.min_eigenvalue,
        "quotient_dim": space.rank,
        "isometry_defect": isometry_defect(space),
    }
