"""Truncated operator model on l2(N) (x) l2(N) (x) l2(Z).

The basis vector ``(i, j, c)`` has ``0 <= i, j < N`` and ``-R <= c <= R``;
shifts that would leave the window are dropped, never wrapped.  Words are
realized straight from their leg operators ``S*^n p^k S^m`` and ``t^r`` by
sparse matrix products, so the realization is independent of the symbolic
product table and serves as its oracle.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from . import groupoid as gp
from .semilattice import UnitPoint
from .word_algebra import CLASS_FLAGS, GENERATOR_IDS, GENERATOR_SIGNS, Word, generator

PSI_CONVENTION = ("basis vector of the germ [phi(k), B4(r,k,(0,0))] is e_k (x) e_(-r), "
                  "i.e. its word applied to e_(0,0,0)")


@dataclass(frozen=True)
class TruncConfig:
    N: int = 12
    R: int = 8
    q: float = 0.0

    def __post_init__(self):
        if self.N < 2 or self.R < 1 or not 0 <= self.q < 1:
            raise ValueError("need N >= 2, R >= 1 and 0 <= q < 1")

    @property
    def W(self) -> int:
        return 2 * self.R + 1

    @property
    def dim(self) -> int:
        return self.N * self.N * self.W

    def index(self, i, j, c) -> int:
        return (i * self.N + j) * self.W + (c + self.R)

    def coords(self, idx: int):
        ij, c = divmod(idx, self.W)
        i, j = divmod(ij, self.N)
        return i, j, c - self.R

    def contains(self, i, j, c) -> bool:
        return 0 <= i < self.N and 0 <= j < self.N and -self.R <= c <= self.R


def shift(N: int) -> sp.csr_matrix:
    """S e_i = e_(i-1), S e_0 = 0."""
    return sp.csr_matrix(sp.eye(N, N, k=1, dtype=np.int64))


def coshift(N: int) -> sp.csr_matrix:
    return sp.csr_matrix(shift(N).T)


def vacuum(N: int) -> sp.csr_matrix:
    return sp.csr_matrix(([1], ([0], [0])), shape=(N, N), dtype=np.int64)


def bilateral(R: int) -> sp.csr_matrix:
    """t e_c = e_(c-1) on the window -R..R."""
    return shift(2 * R + 1)


def _power(M, e: int):
    out = sp.identity(M.shape[0], dtype=M.dtype, format="csr")
    for _ in range(e):
        out = out @ M
    return out


# cached and shared: callers must not modify the returned matrices
@lru_cache(maxsize=4096)
def leg_matrix(n: int, k: int, m: int, N: int) -> sp.csr_matrix:
    out = _power(coshift(N), n)
    if k:
        out = out @ vacuum(N)
    return sp.csr_matrix(out @ _power(shift(N), m))


@lru_cache(maxsize=256)
def winding_matrix(r: int, R: int) -> sp.csr_matrix:
    t = bilateral(R)
    return _power(t, r) if r >= 0 else _power(sp.csr_matrix(t.T), -r)


def realize(w: Word, cfg: TruncConfig) -> sp.csr_matrix:
    """0/1 matrix of a word (phases dropped)."""
    if w.is_zero:
        return sp.csr_matrix((cfg.dim, cfg.dim), dtype=np.int64)
    k1, k2 = CLASS_FLAGS[w.cls]
    a = leg_matrix(w.n[0], k1, w.m[0], cfg.N)
    b = leg_matrix(w.n[1], k2, w.m[1], cfg.N)
    return sp.csr_matrix(sp.kron(sp.kron(a, b), winding_matrix(w.r, cfg.R)))


def gen_q(gid: str, cfg: TruncConfig) -> sp.csr_matrix:
    """The q-deformed generator, with its sign."""
    N, q = cfg.N, cfg.q
    qN = sp.diags(q ** np.arange(N, dtype=float))
    root = sp.diags(np.sqrt(1.0 - q ** (2 * np.arange(N, dtype=float))))
    a = root @ coshift(N)
    legs = {"g1": (a, a), "g2": (qN, a), "g3": (a, qN), "g4": (qN, qN)}[gid]
    t = bilateral(cfg.R)
    M = sp.kron(sp.kron(legs[0], legs[1]), t) * GENERATOR_SIGNS[gid]
    return sp.csr_matrix(M, dtype=complex)


def partial_map(M) -> np.ndarray:
    """Column ``y`` -> row ``x`` of the only nonzero entry, ``-1`` for empty columns.

    Raises ``ValueError`` unless ``M`` has at most one entry per column and
    every entry has modulus one, i.e. ``M`` is a partial permutation up to phase.
    """
    C = sp.csc_matrix(M)
    C.eliminate_zeros()
    counts = np.diff(C.indptr)
    if counts.max(initial=0) > 1 or not np.allclose(np.abs(C.data), 1):
        raise ValueError("not a partial permutation matrix")
    img = np.full(C.shape[1], -1, dtype=np.int64)
    cols = np.repeat(np.arange(C.shape[1]), counts)
    img[cols] = C.indices
    return img


def interior_mask(cfg: TruncConfig, margin: int) -> np.ndarray:
    """Basis vectors at distance >= margin from every truncation boundary."""
    idx = np.arange(cfg.dim)
    ij, c = np.divmod(idx, cfg.W)
    i, j = np.divmod(ij, cfg.N)
    c = c - cfg.R
    lim = cfg.N - 1 - margin
    return (i <= lim) & (j <= lim) & (np.abs(c) <= cfg.R - margin)


def interior_equal(A, B, cfg: TruncConfig, margin: int, atol: float = 0.0) -> bool:
    I = np.flatnonzero(interior_mask(cfg, margin))
    a = sp.csr_matrix(A)[I][:, I]
    b = sp.csr_matrix(B)[I][:, I]
    d = (a - b)
    return d.nnz == 0 or float(np.abs(d.data).max()) <= atol


def phase_stripped(M) -> sp.csr_matrix:
    M = sp.csr_matrix(M, copy=True)
    M.data = np.abs(M.data)
    return M


def coordinate_list(M, cfg: TruncConfig):
    """Nonzero entries as ``((i,j,c) row, (i,j,c) column, value)`` triples, sorted."""
    C = sp.coo_matrix(M)
    rows = []
    for x, y, v in zip(C.row, C.col, C.data):
        if v != 0:
            rows.append((cfg.coords(int(x)), cfg.coords(int(y)), complex(v)))
    return sorted(rows)


# -- the isomorphism onto D_0 ---------------------------------------------------

def psi_action(gid: str, b):
    """Image of the basis vector ``b = (m0, n0, r0)`` under the generator's
    induced operator, or ``None``.

    Obtained from the fibre sum in the regular representation at phi(0,0)
    and the basis identification ``PSI_CONVENTION``.
    """
    m0, n0, r0 = b
    if gid == "g1":
        return (m0 + 1, n0 + 1, r0 - 1)
    if gid == "g2":
        return (0, n0 + 1, r0 - 1) if m0 == 0 else None
    if gid == "g3":
        return (m0 + 1, 0, r0 - 1) if n0 == 0 else None
    return (0, 0, r0 - 1) if (m0, n0) == (0, 0) else None


def printed_psi_action(gid: str, b):
    """The basis actions as printed with the isomorphism theorem (kept for comparison)."""
    m0, n0, r0 = b
    if gid == "g1":
        return (m0 - 1, n0 - 1, r0 + 1) if m0 and n0 else None
    if gid == "g2":
        return (m0 - 1, 0, r0 + 1) if n0 == 0 and m0 else None
    if gid == "g3":
        return (0, n0 - 1, r0 + 1) if m0 == 0 and n0 else None
    return (0, 0, r0 + 1) if (m0, n0) == (0, 0) else None


def swapped_psi_action(gid: str, b):
    """Negative control: a2 and a3 exchanged."""
    return psi_action({"g2": "g3", "g3": "g2"}.get(gid, gid), b)


def action_matrix(action, gid: str, cfg: TruncConfig) -> sp.csr_matrix:
    rows, cols = [], []
    for y in range(cfg.dim):
        tgt = action(gid, cfg.coords(y))
        if tgt is not None and cfg.contains(*tgt):
            rows.append(cfg.index(*tgt))
            cols.append(y)
    return sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)),
                         shape=(cfg.dim, cfg.dim))


def orbit_vector(g: gp.Germ, cfg: TruncConfig):
    """Basis index of a germ with source phi(0,0): its word applied to e_(0,0,0)."""
    if g.source != UnitPoint(0, 0):
        raise ValueError("germ does not start at phi(0,0)")
    return (g.k.k1, g.k.k2, -g.r)


def regular_matrix(gid: str, cfg: TruncConfig) -> sp.csr_matrix:
    """The generator's operator in the regular representation at phi(0,0),
    computed by fibre sums in the groupoid and transported to the basis."""
    v = UnitPoint(0, 0)
    labels = gp.fiber_s(v, cfg.N - 1, cfg.R)
    entries = gp.bisection_convolution(generator(gid), labels, cfg.N, cfg.R)
    rows, cols = [], []
    for x, z in entries:
        rows.append(cfg.index(*orbit_vector(labels[x], cfg)))
        cols.append(cfg.index(*orbit_vector(labels[z], cfg)))
    return sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)),
                         shape=(cfg.dim, cfg.dim))


def verify_psi(cfg: TruncConfig = TruncConfig(), margin: int = 1) -> dict:
    """Compare the induced basis actions with the realized generators.

    The main check is psi_action == realize(generator) == |gen_q(q=0)| ==
    groupoid fibre sum, on interior entries.  Controls that must fail: a2/a3
    swapped, the printed basis actions, and q = 0.5 generators.
    """
    cfg0 = TruncConfig(cfg.N, cfg.R, 0.0)
    checks = {}
    for gid in GENERATOR_IDS:
        psi = action_matrix(psi_action, gid, cfg0)
        real = realize(generator(gid), cfg0)
        checks[gid] = {
            "psi_vs_realize": interior_equal(psi, real, cfg0, margin),
            "realize_vs_gen_q0": interior_equal(real, phase_stripped(gen_q(gid, cfg0)), cfg0, margin),
            "psi_vs_groupoid": interior_equal(psi, regular_matrix(gid, cfg0), cfg0, margin),
        }
    controls = {
        "swap_a2_a3": all(interior_equal(action_matrix(swapped_psi_action, g, cfg0),
                                         realize(generator(g), cfg0), cfg0, margin)
                          for g in GENERATOR_IDS),
        "printed_actions": all(interior_equal(action_matrix(printed_psi_action, g, cfg0),
                                              realize(generator(g), cfg0), cfg0, margin)
                               for g in GENERATOR_IDS),
        "q_half": all(interior_equal(phase_stripped(gen_q(g, TruncConfig(cfg.N, cfg.R, 0.5))),
                                     action_matrix(psi_action, g, cfg0), cfg0, margin, 1e-12)
                      for g in GENERATOR_IDS),
    }
    printed_is_adjoint = all(
        interior_equal(action_matrix(printed_psi_action, g, cfg0),
                       realize(generator({"g2": "g3", "g3": "g2"}.get(g, g)), cfg0).T,
                       cfg0, margin)
        for g in GENERATOR_IDS)
    return {
        "config": {"N": cfg.N, "R": cfg.R},
        "generators": checks,
        "passed": all(all(c.values()) for c in checks.values()),
        "controls_match": controls,
        "controls_failed_as_designed": not any(controls.values()),
        "printed_actions_are_adjoints_with_a2_a3_exchanged": printed_is_adjoint,
        "convention": PSI_CONVENTION,
    }
