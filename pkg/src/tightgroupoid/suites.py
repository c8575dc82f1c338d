"""Exhaustive verification suites behind ``verify`` and the acceptance tests."""

import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import groupoid as gp
from . import operator_model as om
from . import representations as rp
from . import semilattice as sl
from . import word_algebra as wa
from .errors import TightGroupoidError, WitnessNotFound
from .semilattice import INF, UnitPoint

MAX_LISTED_FAILURES = 50
CONVENTIONS = {
    "winding": wa.WINDING_CONVENTION,
    "operators": wa.SHIFT_CONVENTION,
    "action": gp.ACTION_CONVENTION,
    "psi_basis": om.PSI_CONVENTION,
}


@dataclass
class SuiteReport:
    suite: str
    cases: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    wall_time: float = 0.0
    parts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def fail(self, inp, expected, got):
        self.failure_count += 1
        if len(self.failures) < MAX_LISTED_FAILURES:
            self.failures.append((str(inp), str(expected), str(got)))

    def check(self, ok, inp, expected, got):
        self.cases += 1
        if not ok:
            self.fail(inp, expected, got)
        return ok

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "suite": self.suite,
            "passed": self.passed,
            "cases": self.cases,
            "failure_count": self.failure_count,
            "failures": [{"input": i, "expected": e, "got": g} for i, e, g in sorted(self.failures)],
            "wall_time": round(self.wall_time, 3),
            "parts": self.parts,
            "notes": self.notes,
            "conventions": CONVENTIONS,
        }


def _timed(fn):
    def run(*args, **kwargs):
        t = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.wall_time = time.perf_counter() - t
        return rep
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- semigroup ---------------------------------------------------------------

def _array_matches_scalar(rep, A, B, words_a, words_b):
    P, bad = wa.word_mul_array(A[:, None, :], B[None, :, :])
    for i, a in enumerate(words_a):
        got = wa.array_to_words(P[i])
        for j, b in enumerate(words_b):
            rep.check(not bad[i, j] and got[j] == wa.word_mul(a, b),
                      f"array {a} * {b}", wa.word_mul(a, b), got[j])


def projection_table(bound: int = 4, rep: SuiteReport | None = None) -> SuiteReport:
    rep = rep or SuiteReport("projection-table")
    projs = sl.enumerate_projections(bound)
    for p, q in product(projs, projs):
        closed = sl.proj_mul(p, q)
        expect = wa.word_mul(p.word, q.word)
        got = closed.word if closed is not None else wa.ZERO
        rep.check(got == expect, f"{p} * {q}", expect, got)
        rep.check(closed == sl.proj_mul(q, p), f"commute {p}, {q}", closed, sl.proj_mul(q, p))
    for p in projs:
        rep.check(sl.proj_mul(p, p) == p, f"idempotent {p}", p, sl.proj_mul(p, p))
    return rep


@_timed
def semigroup_axioms(bound: int = 4, rbound: int | None = None, chunk: int = 150) -> SuiteReport:
    """Inverse-semigroup axioms, closure and involution over all words of index <= bound."""
    rbound = bound if rbound is None else rbound
    rep = SuiteReport("semigroup-axioms")
    words = wa.enumerate_words(bound, rbound)
    rep.parts["words"] = len(words)
    start = rep.cases
    for a in words:
        s = wa.adjoint(a)
        rep.check(wa.is_valid(a), f"valid {a}", True, False)
        rep.check(wa.word_product(a, s, a) == a, f"a a* a, a={a}", a, wa.word_product(a, s, a))
        rep.check(wa.word_product(s, a, s) == s, f"a* a a*, a={a}", s, wa.word_product(s, a, s))
        rep.check(wa.adjoint(s) == a, f"a** = a, a={a}", a, wa.adjoint(s))
    for a in wa.enumerate_words(3, 3):
        sq = wa.word_mul(a, a)
        rep.check(wa.is_projection(a) == (sq == a and wa.adjoint(a) == a),
                  f"projection test {a}", sq == a and wa.adjoint(a) == a, wa.is_projection(a))
    rep.parts["unary cases"] = rep.cases - start

    # the batched product must agree with the scalar one before it is trusted
    start = rep.cases
    small = wa.enumerate_words(2, 2)
    S = wa.words_to_array(small)
    _array_matches_scalar(rep, S, S, small, small)
    rng = np.random.default_rng(0)
    A = wa.words_to_array(words)
    ia = rng.integers(0, len(words), 300)
    ib = rng.integers(0, len(words), 300)
    _array_matches_scalar(rep, A[ia], A[ib], [words[i] for i in ia], [words[i] for i in ib])
    rep.parts["batched vs scalar cases"] = rep.cases - start

    As = wa.adjoint_array(A)
    pairs = closure_fail = invol_fail = 0
    for lo in range(0, len(words), chunk):
        blk, blk_s = A[lo:lo + chunk, None, :], As[lo:lo + chunk, None, :]
        P, bad = wa.word_mul_array(blk, A[None, :, :])
        Q, bad_q = wa.word_mul_array(As[None, :, :], blk_s)
        lhs = wa.adjoint_array(P)
        wrong = np.any(lhs != Q, axis=-1) | bad_q
        pairs += bad.size
        for i, j in zip(*np.nonzero(bad)):
            closure_fail += 1
            rep.fail(f"closure {words[lo + i]} * {words[j]}", "valid word", wa.array_to_words(P[i, j])[0])
        for i, j in zip(*np.nonzero(wrong)):
            invol_fail += 1
            rep.fail(f"(ab)* = b*a*, a={words[lo + i]}, b={words[j]}",
                     wa.array_to_words(lhs[i, j])[0], wa.array_to_words(Q[i, j])[0])
    rep.cases += 2 * pairs
    rep.parts["pairs"] = pairs
    rep.parts["closure failures"] = closure_fail
    rep.parts["involution failures"] = invol_fail

    start = rep.cases
    projection_table(bound, rep)
    rep.parts["projection table cases"] = rep.cases - start
    return rep


# -- operator oracle ---------------------------------------------------------

@_timed
def oracle_products(bound: int = 3, cfg: om.TruncConfig = om.TruncConfig(12, 8)) -> SuiteReport:
    """Symbolic products against products of realized matrices, interior entries."""
    rep = SuiteReport("oracle-products")
    margin = bound
    I = np.flatnonzero(om.interior_mask(cfg, margin))
    rep.parts["config"] = {"N": cfg.N, "R": cfg.R, "margin": margin, "interior": int(I.size)}

    # single legs
    legs = [wa.ShiftMonomial(n, k, m) for n in range(bound + 1) for k in (0, 1) for m in range(bound + 1)]
    lim = cfg.N - 1 - 2 * bound
    for a, b in product(legs, legs):
        c = wa.monomial_mul(a, b)
        got = om.leg_matrix(*a, cfg.N) @ om.leg_matrix(*b, cfg.N)
        ref = om.leg_matrix(*c, cfg.N) if c is not None else 0 * got
        d = (got - ref)[:lim + 1, :lim + 1]
        rep.check(d.nnz == 0 or not np.any(d.data), f"leg {tuple(a)} * {tuple(b)}", c, "matrix differs")

    # words, via the partial maps of the realized matrices
    words = wa.enumerate_words(bound, bound)
    maps = np.stack([np.append(om.partial_map(om.realize(w, cfg)), -1) for w in words])
    restricted = maps[:, I]
    ref_id, refs = {}, []

    def ref_index(w):
        if w not in ref_id:
            ref_id[w] = len(refs)
            refs.append(om.partial_map(om.realize(w, cfg))[I])
        return ref_id[w]

    for i, a in enumerate(words):
        prods = [wa.word_mul(a, b) for b in words]
        ref = np.stack([refs[ref_index(p)] for p in prods])
        bad = np.any(maps[i][restricted] != ref, axis=1)
        rep.cases += len(words)
        for j in np.flatnonzero(bad):
            rep.fail(f"{a} * {words[j]}", prods[j], "realized product differs on interior")
    rep.parts["words"] = len(words)
    rep.parts["distinct products"] = len(ref_id)
    return rep


# -- filters -----------------------------------------------------------------

@_timed
def ultrafilters(coord_bound: int = 4, bound: int = 6) -> SuiteReport:
    rep = SuiteReport("ultrafilters")
    universe = sl.enumerate_projections(bound)
    points = sl.unit_points(coord_bound)
    proof = 0
    for k in points:
        try:
            res = sl.ultrafilter_witness(k, bound)
        except WitnessNotFound as exc:
            rep.fail(f"witness at {k}", "witness", f"none for {exc.projection}")
            continue
        rep.cases += res["excluded"]
        proof += res["proof_witnesses"]
        for f in res["filter_failures"]:
            rep.fail(f"filter axiom at {k}", f[0], f[1:])
        for p, q in res["witnesses"].items():
            rep.check(sl.in_filter(q, k) and sl.proj_mul(p, q) is None,
                      f"witness {q} for {p} at {k}", "orthogonal member", q)
        defined = sl.filter_from_definition(k, bound + 1)
        for p in universe:
            rep.check(sl.in_filter(p, k) == (p in defined), f"A({k}) contains {p}",
                      p in defined, sl.in_filter(p, k))
        mn = sl.minimum_of_filter(k)
        if mn is not None:
            rep.check(all(sl.leq(mn, p) for p in universe if sl.in_filter(p, k)),
                      f"minimum of A({k})", mn, "not below every member")
    # injectivity of k -> phi(k)
    tables = {}
    for k in points:
        idx = coord_bound + 1
        tables.setdefault(tuple(sl.in_filter(p, k) for p in sl.enumerate_projections(idx)), []).append(k)
    for same in tables.values():
        rep.check(len(same) == 1, "distinct filters", "one point", same)
    rep.parts["points"] = len(points)
    rep.parts["witnesses from the maximality argument"] = proof
    return rep


# -- groupoid ----------------------------------------------------------------

def canonical_germs(bound: int):
    """Every canonical germ whose range, source and |winding| are at most ``bound``."""
    out = []
    for u in sl.unit_points(bound):
        out.extend(gp.fiber_r(u, bound))
    return sorted(out, key=gp.Germ.sort_key)


@_timed
def groupoid_axioms(bound: int = 3, oracle_bound: int = 7) -> SuiteReport:
    rep = SuiteReport("groupoid-axioms")
    germs = canonical_germs(bound)
    rep.parts["germs"] = len(germs)
    ids, germ_of, table = {}, [], {}

    def gid(g):
        if g not in ids:
            ids[g] = len(germ_of)
            germ_of.append(g)
        return ids[g]

    def comp(a, b):
        key = (gid(a), gid(b))
        if key not in table:
            table[key] = gid(gp.compose(a, b))
        return germ_of[table[key]]

    by_range, by_source = {}, {}
    for g in germs:
        gid(g)
        by_range.setdefault(g.k, []).append(g)
        by_source.setdefault(g.source, []).append(g)

    start = rep.cases
    for g in germs:
        inv = gp.inverse(g)
        rep.check(gp.check_germ(g), f"canonical {g}", True, False)
        rep.check(gp.inverse(inv) == g, f"inverse^2 {g}", g, gp.inverse(inv))
        rep.check(gp.compose(gp.compose(g, inv), g) == g, f"g g^-1 g, g={g}", g, "differs")
        rep.check(gp.compose(g, inv) == gp.unit_germ(g.k), f"g g^-1 unit, g={g}",
                  gp.unit_germ(g.k), gp.compose(g, inv))
        rep.check(gp.compose(gp.unit_germ(g.k), g) == g, f"r(g) g, g={g}", g, "differs")
        rep.check(gp.compose(g, gp.unit_germ(g.source)) == g, f"g s(g), g={g}", g, "differs")
        rep.check(inv.k == g.source and inv.source == g.k, f"range/source of inverse {g}", "swapped", inv)
    rep.parts["unary cases"] = rep.cases - start

    # associativity on every composable triple: fill a memoized composition
    # table with every product the triples need, then compare in bulk
    for b in germs:
        for a in by_source.get(b.k, []):
            comp(a, b)
    for x in list(germ_of):
        for c in by_range.get(x.source, []):
            comp(x, c)
        for a in by_source.get(x.k, []):
            comp(a, x)
    size = len(germ_of)
    T = np.full((size, size), -1, dtype=np.int64)
    keys = np.array(list(table.keys()), dtype=np.int64)
    T[keys[:, 0], keys[:, 1]] = np.array(list(table.values()), dtype=np.int64)
    triples = 0
    for b in germs:
        A = np.array([ids[a] for a in by_source.get(b.k, [])], dtype=np.int64)
        C = np.array([ids[c] for c in by_range.get(b.source, [])], dtype=np.int64)
        if not A.size or not C.size:
            continue
        ib = ids[b]
        left = T[T[A, ib][:, None], C[None, :]]
        right = T[A[:, None], T[ib, C][None, :]]
        triples += left.size
        for i, j in zip(*np.nonzero((left != right) | (left < 0))):
            rep.fail(f"(ab)c = a(bc), a={germ_of[A[i]]}, b={b}, c={germ_of[C[j]]}", "equal", "differ")
    rep.cases += triples
    rep.parts["composable triples"] = triples

    # local bijectivity: k -> germ of w at k is injective on the domain
    start = rep.cases
    for w in wa.enumerate_words(bound, 1):
        dom = gp.domain_set(w, bound)
        gs = [gp.canonicalize(k, w) for k in dom]
        rep.check(len(set(gs)) == len(dom), f"injective on D({w})", len(dom), len(set(gs)))
        rep.check(set(gp.domain_set(w, bound)) == {k for k in sl.unit_points(bound)
                                                    if sl.in_filter(gp.range_projection(w), k)},
                  f"in_sigma vs in_filter for {w}", "equal", "differ")
    rep.parts["etale cases"] = rep.cases - start

    # the closed-form action against the (x.s)(e) = x(s e s*) oracle
    start = rep.cases
    for k in sl.unit_points(bound):
        for w in wa.enumerate_words(bound, 0) + [wa.generator(g) for g in wa.GENERATOR_IDS]:
            if gp.in_sigma(k, w):
                exp, got = gp.act(k, w), gp.act_oracle(k, w, oracle_bound)
                rep.check(exp == got, f"act {k} . {w}", got, exp)
    rep.parts["action oracle cases"] = rep.cases - start
    return rep


@_timed
def equivalence_oracle(bound: int = 3, witness_bound: int = 6) -> SuiteReport:
    """Canonical-form equality against witness-search equivalence on Sigma pairs."""
    rep = SuiteReport("equivalence-oracle")
    words = wa.enumerate_words(bound, bound)
    universe = sl.enumerate_projections(witness_bound)
    total_pairs = equal_pairs = 0
    for k in sl.unit_points(bound):
        sig = [w for w in words if gp.in_sigma(k, w)]
        members = [e for e in universe if sl.in_filter(e, k)]
        canon = [gp.canonicalize(k, w) for w in sig]
        products = [tuple(wa.word_mul(e.word, w) for e in members) for w in sig]
        for i, j in product(range(len(sig)), repeat=2):
            by_canon = canon[i] == canon[j]
            by_witness = any(x == y for x, y in zip(products[i], products[j]))
            total_pairs += 1
            equal_pairs += by_canon
            rep.check(by_canon == by_witness, f"({k}, {sig[i]}) ~ ({k}, {sig[j]})",
                      f"witness search: {by_witness}", f"canonical: {by_canon}")
    rep.parts["pairs"] = total_pairs
    rep.parts["equivalent pairs"] = equal_pairs
    return rep


# -- isotropy, orbits, topology ----------------------------------------------

ISOTROPY_UNITS = (UnitPoint(INF, INF), UnitPoint(INF, 2), UnitPoint(2, INF), UnitPoint(2, 3))


def orbit_space_checks(rep: SuiteReport) -> SuiteReport:
    space = gp.orbit_space()
    rep.check(len(space["orbits"]) == 4, "orbit count", 4, len(space["orbits"]))
    expected = sorted([[], ["NxN"], ["NxN", "Nx{inf}"], ["NxN", "{inf}xN"],
                       ["NxN", "Nx{inf}", "{inf}xN"], ["NxN", "Nx{inf}", "{(inf,inf)}", "{inf}xN"]],
                      key=lambda s: (len(s), s))
    rep.check(space["open_sets"] == expected, "open sets", expected, space["open_sets"])
    rep.check(space["t0"], "T0", True, False)
    rep.check(space["closed_under_union_intersection"], "lattice", True, False)
    rep.check(space["orbits_match_germ_connectivity"], "orbits", True, False)
    rep.parts["open sets"] = space["open_sets"]
    return rep


def isotropy_checks(rep: SuiteReport, window: int = 4, fibre_bound: int = 3) -> SuiteReport:
    for u in ISOTROPY_UNITS:
        iso = dict(gp.isotropy(u, window))
        rep.check(sorted(iso) == list(range(-window, window + 1)), f"isotropy labels at {u}",
                  "window", sorted(iso))
        for r, g in iso.items():
            rep.check(g.k == u and g.source == u and gp.gamma(g) == r, f"isotropy germ {g}", r, gp.gamma(g))
            rep.check(gp.gamma(gp.inverse(g)) == -r, f"inverse label {g}", -r, gp.gamma(gp.inverse(g)))
            for s, h in iso.items():
                rep.check(gp.gamma(gp.compose(g, h)) == r + s, f"label of {g} * {h}", r + s,
                          gp.gamma(gp.compose(g, h)))
        fr = gp.fiber_r(u, fibre_bound)
        fs = gp.fiber_s(u, fibre_bound)
        rep.check(len(set(map(gp.label_r, fr))) == len(fr) == len(set(fr)), f"alpha bijective at {u}",
                  len(fr), len(set(map(gp.label_r, fr))))
        rep.check(len(set(map(gp.label_s, fs))) == len(fs) == len(set(fs)), f"beta bijective at {u}",
                  len(fs), len(set(map(gp.label_s, fs))))
        both = {g for g in fr if g.source == u} & {g for g in fs if g.k == u}
        rep.check(both == {g for _, g in gp.isotropy(u, fibre_bound)}, f"fibres meet in isotropy at {u}",
                  "isotropy", len(both))
    return rep


@_timed
def orbit_topology(window: int = 4, fibre_bound: int = 3) -> SuiteReport:
    """Orbits, the quotient topology, and the isotropy groups at one unit per orbit."""
    rep = orbit_space_checks(SuiteReport("orbit-topology"))
    return isotropy_checks(rep, window, fibre_bound)


# -- operator model and representations --------------------------------------

@_timed
def psi(cfg: om.TruncConfig = om.TruncConfig(12, 8)) -> SuiteReport:
    rep = SuiteReport("psi")
    res = om.verify_psi(cfg)
    for g, checks in res["generators"].items():
        for name, ok in checks.items():
            rep.check(ok, f"{g} {name}", True, False)
    for name, matched in res["controls_match"].items():
        rep.check(not matched, f"negative control {name}", "mismatch", "match")
    rep.parts = {k: v for k, v in res.items() if k not in ("generators",)}
    rep.notes.append("printed basis actions equal the adjoint generators with a2/a3 exchanged: "
                     f"{res['printed_actions_are_adjoints_with_a2_a3_exchanged']}")
    return rep


EXPECTED_FAMILY = {1: "1", 4: "w1w2"}


@_timed
def reps(t0_turns=rp.T0_SAMPLES, bound: int = 6) -> SuiteReport:
    rep = SuiteReport("reps")
    pairing = {}
    for turns in t0_turns:
        t0 = rp.TorusPoint.from_turns(turns).t0
        for case in (1, 2, 3, 4):
            tag = f"case {case}, t0 turns {turns}"
            try:
                res = rp.check_equivalence(case, t0, bound)
            except TightGroupoidError as exc:
                rep.fail(tag, "induced space", exc)
                continue
            space = rp.induced_space(case, t0, bound)
            rep.check(res["gram_min_eigenvalue"] >= rp.PSD_TOLERANCE, f"{tag} Gram PSD",
                      ">= -1e-12", res["gram_min_eigenvalue"])
            rep.check(res["isometry_defect"] <= rp.TOL, f"{tag} isometric identification",
                      0, res["isometry_defect"])
            rep.check(res["matched"] is not None, f"{tag} matches one family", "one", res["families"])
            if case in EXPECTED_FAMILY:
                rep.check(res["matched"] == EXPECTED_FAMILY[case], f"{tag} family",
                          EXPECTED_FAMILY[case], res["matched"])
            inter = res["families"][res["matched"]]["intertwiner"] if res["matched"] else None
            pairing.setdefault(case, set()).add((res["matched"], inter))
            hd = rp.homomorphism_defect(space)
            rep.check(hd <= rp.TOL, f"{tag} homomorphism", 0, hd)
            wd = max(rp.well_defined_defect(space, wa.generator(g)) for g in wa.GENERATOR_IDS)
            rep.check(wd <= rp.TOL, f"{tag} descends to quotient", 0, wd)
            if turns != t0_turns[0]:
                ed = rp.equivariance_defect(case, rp.TorusPoint.from_turns(t0_turns[0]).t0, t0, bound)
                rep.check(ed <= rp.TOL, f"{tag} t0 equivariance", 0, ed)
        # the two-label Gram checks
        G1 = rp.gram(1, t0, [gp.germ_from_data(rp.CASE_UNITS[1], rp.CASE_UNITS[1], r) for r in (1, 3)])
        rep.check(abs(np.linalg.det(G1)) <= rp.TOL, f"case 1 2x2 Gram determinant, t0 turns {turns}",
                  0, abs(np.linalg.det(G1)))
        u3 = rp.CASE_UNITS[3]
        G3 = rp.gram(3, t0, [gp.germ_from_data(UnitPoint(s, INF), u3, 0) for s in (0, 3)])
        rep.check(np.abs(G3 - np.eye(2)).max() <= rp.TOL, f"case 3 2x2 Gram identity, t0 turns {turns}",
                  "identity", G3)
    for case, found in sorted(pairing.items()):
        rep.check(len(found) == 1, f"case {case} family independent of t0", "one", found)
        for omega, inter in sorted(found, key=str):
            rep.notes.append(f"case {case} (unit {rp.CASE_UNITS[case]}) -> family {omega} via {inter}")
    rep.parts["pairing"] = {c: sorted(map(list, f), key=str) for c, f in pairing.items()}
    return rep


SUITES = {
    "semigroup-axioms": semigroup_axioms,
    "oracle-products": oracle_products,
    "ultrafilters": ultrafilters,
    "groupoid-axioms": groupoid_axioms,
    "equivalence-oracle": equivalence_oracle,
    "psi": psi,
    "reps": reps,
    "orbit-topology": orbit_topology,
}
