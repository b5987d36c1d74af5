"""The relative extriangulated structure (C, E_N, s_N) of an extension-closed N.

An extension class in E(C, A) is a morphism h: C -> A[1].  It lies in E^L_N
when h o x factors through N[1] for every x: N_i -> C with N_i in N, and in
E^R_N when y o h[-1] factors through N[-1] for every y: A -> N_i.  Both are
tested on hom bases, since the factoring morphisms form a subspace.  The
right-hand test is applied in its shifted form y[1] o h in [N](C, N_i[1]),
which keeps every object inside the label universe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .category import (Category, InvariantViolation, Mor, Obj, Triangle, WindowExceeded,
                       _affine_candidates)
from .subcat import Subcat, enumerate_space, is_extension_closed, is_thick_tri


@dataclass(frozen=True, eq=False)
class ExtClass:
    """An extension h in E(C, A), realized as h: C -> A[1]."""

    C: Obj
    A: Obj
    h: Mor

    @staticmethod
    def of(h: Mor) -> "ExtClass":
        cat = h.cat
        return ExtClass(h.dom, cat.shift_obj(h.cod, -1), h)

    def push(self, a: Mor) -> "ExtClass":
        """a_* h for a: A -> A'."""
        cat = self.h.cat
        return ExtClass(self.C, a.cod, cat.shift_mor(a, 1) @ self.h)

    def pull(self, c: Mor) -> "ExtClass":
        """c^* h for c: C' -> C."""
        return ExtClass(c.dom, self.A, self.h @ c)


class RelStructure:
    """(C, E_N, s_N) for an extension-closed subcategory N."""

    def __init__(self, N: Subcat, check: bool = True, seed: int = 0):
        self.N = N
        self.cat: Category = N.cat
        self.N1 = N.shifted(1)
        self.closure = is_extension_closed(N, seed=seed) if check else None
        if self.closure is not None and not self.closure.closed:
            raise ValueError(f"{N!r} is not extension-closed: {self.closure.counterexample}")
        self._test_labels = None

    def __repr__(self) -> str:
        return f"RelStructure({self.N!r})"

    # -- E^L, E^R, E_N ---------------------------------------------------------------------
    def _labels(self) -> tuple[list[int], list[int]]:
        """N-labels and N[1]-labels of the universe."""
        if self._test_labels is None:
            cat = self.cat
            self._test_labels = ([L for L in cat.all_labels() if self.N.contains_label(L)],
                                 [L for L in cat.all_labels() if self.N1.contains_label(L)])
        return self._test_labels

    def in_EL(self, e) -> bool:
        h = _h(e)
        cat = self.cat
        for L in self._labels()[0]:
            for x in cat.basis(Obj((L,)), h.dom):
                if not self.N1.in_ideal(h @ x):
                    return False
        return True

    def in_ER(self, e) -> bool:
        h = _h(e)
        cat = self.cat
        for M in self._labels()[1]:
            for y in cat.basis(h.cod, Obj((M,))):
                if not self.N.in_ideal(y @ h):
                    return False
        return True

    def in_EN(self, e) -> bool:
        return self.in_EL(e) and self.in_ER(e)

    def is_rel_inflation(self, f: Mor) -> bool:
        return self.in_EN(self.cat.complete_to_triangle(f).h)

    def is_rel_deflation(self, g: Mor) -> bool:
        return self.in_EN(self.cat.cocone_complete(g).h)

    # -- morphism classes ---------------------------------------------------------------------
    def in_L(self, f: Mor) -> bool:
        T = self.cat.complete_to_triangle(f)
        return self.N.contains(T.C) and self.N1.in_ideal(T.h)

    def in_R(self, g: Mor) -> bool:
        T = self.cat.cocone_complete(g)
        return self.N.contains(T.A) and self.N.in_ideal(T.h)

    def in_Lsp(self, f: Mor) -> bool:
        return self.in_L(f) and self.cat.has_left_inverse(f) is not None

    def in_Rsp(self, g: Mor) -> bool:
        return self.in_R(g) and self.cat.has_right_inverse(g) is not None

    def in_SN(self, s: Mor) -> bool:
        T = self.cat.cocone_complete(s)
        return self.N.in_ideal(T.f) and self.N.in_ideal(T.h)

    # -- factorizations -----------------------------------------------------------------------
    def rl_factorize(self, s: Mor) -> "Factorization":
        """s = r o l with l in L and r in R_sp, built from a homotopy pullback.

        With A -f-> B -s-> C -g-> A[1] and g = g2 o g1 through N0 in N, the
        pullback E of g along g2 splits as C + N_C; l is the induced map
        B -> C + N_C and r the projection onto C.
        """
        cat, N = self.cat, self.N
        if not self.in_SN(s):
            raise ValueError("rl_factorize: morphism is not in S_N")
        T = cat.cocone_complete(s)
        g = T.h
        ok, (N0, g1, g2) = N.factors_through(g)
        P = cat.homotopy_pullback(g, g2)
        C = s.cod
        z = P.filler(cat.identity(C), g1)          # section of b: E -> C
        Tz = cat.complete_to_triangle(z)
        NC = Tz.C
        psi = cat.vcat([P.b, Tz.g])                # E -> C + N_C
        if not cat.is_iso(psi):
            raise InvariantViolation("rl_factorize: pullback does not split")
        r = cat.proj([C, NC], 0)
        # the octahedral filler is the one whose triangle B -> E -> N0 is distinguished;
        # fillers differ by maps killed by (b; g'), searched for membership in L
        base = P.filler(s, cat.zero(s.dom, N0))
        k = cat.vcat([P.b, P.gp])
        l = None
        for l0 in self._fillers(base, cat.postcomp_matrix(k, s.dom), post=True):
            cand = psi @ l0
            if self.in_L(cand):
                l = cand
                break
        if l is None:
            raise InvariantViolation("THEOREM VIOLATION: no pullback filler lies in L")
        fac = Factorization(l, r, NC)
        self._check(fac, s, "rl")
        return fac

    def _fillers(self, base: Mor, M: np.ndarray, post: bool, budget: int = 1024):
        cat = self.cat
        yield base
        kern = cat.F.kernel(M) if M.shape[0] else np.eye(M.shape[1], dtype=np.int64)
        if kern.shape[0] == 0:
            return
        rng = np.random.default_rng(0)
        for v in _affine_candidates(cat.p, base.vec, kern, budget, rng):
            yield Mor(cat, base.dom, base.cod, v)

    def lr_factorize(self, s: Mor) -> "Factorization":
        """s = r o l with l in L_sp and r in R, built from a homotopy pushout."""
        cat, N = self.cat, self.N
        if not self.in_SN(s):
            raise ValueError("lr_factorize: morphism is not in S_N")
        T = cat.cocone_complete(s)
        f = T.f
        ok, (N0, f1, f2) = N.factors_through(f)
        P = cat.homotopy_pushout(f, f1)
        B = s.dom
        z = P.filler(cat.identity(B), f2)          # retraction F -> B of b1
        Tz = cat.cocone_complete(z)
        NB = Tz.A
        phi = cat.hcat([P.b1, Tz.f])               # B + N_B -> F
        if not cat.is_iso(phi):
            raise InvariantViolation("lr_factorize: pushout does not split")
        l = cat.inj([B, NB], 0)
        base = P.filler(s, cat.zero(N0, s.cod))
        k = cat.hcat([P.b1, P.f1])
        r = None
        for r0 in self._fillers(base, cat.precomp_matrix(k, s.cod), post=False):
            cand = r0 @ phi
            if self.in_R(cand):
                r = cand
                break
        if r is None:
            raise InvariantViolation("THEOREM VIOLATION: no pushout filler lies in R")
        fac = Factorization(l, r, NB)
        self._check(fac, s, "lr")
        return fac

    def _check(self, fac: "Factorization", s: Mor, kind: str) -> None:
        if not (fac.r @ fac.l).equals(s):
            raise InvariantViolation(f"THEOREM VIOLATION: {kind} factors do not compose to s")
        if not self.N.contains(fac.complement):
            raise InvariantViolation(f"THEOREM VIOLATION: {kind} complement outside N")
        if kind == "rl":
            good = self.in_L(fac.l) and self.in_Rsp(fac.r)
        else:
            good = self.in_Lsp(fac.l) and self.in_R(fac.r)
        if not good:
            raise InvariantViolation(f"THEOREM VIOLATION: {kind} factor memberships fail")


@dataclass(frozen=True, eq=False)
class Factorization:
    l: Mor
    r: Mor
    complement: Obj        # the summand N_C (or N_B) in N


def _h(e) -> Mor:
    return e.h if isinstance(e, ExtClass) else e


# -- enumeration helpers ---------------------------------------------------------------------------
def window_ext_classes(cat: Category, budget: int = 64, samples: int = 8, seed: int = 0):
    """Extension classes h: C -> A[1] between window indecomposables.

    Each hom space is enumerated when it has at most ``budget`` elements and
    sampled otherwise."""
    for C in cat.window_labels:
        for A in cat.window_labels:
            X, Y = Obj((C,)), cat.shift_obj(Obj((A,)), 1)
            dim = cat.hom_dim_obj(X, Y)
            it, _ = enumerate_space(cat.p, dim, budget, samples, seed)
            for v in it:
                yield ExtClass(X, Obj((A,)), cat.mor(X, Y, v))


def window_morphisms(cat: Category, basis_only: bool = True, budget: int = 64,
                     samples: int = 8, seed: int = 0):
    """Morphisms between window indecomposables (nonzero)."""
    for i in cat.window_labels:
        for j in cat.window_labels:
            X, Y = Obj((i,)), Obj((j,))
            if basis_only:
                yield from cat.basis(X, Y)
                continue
            it, _ = enumerate_space(cat.p, cat.hom_dim_obj(X, Y), budget, samples, seed)
            for v in it:
                if v.any():
                    yield cat.mor(X, Y, v)


# -- classification inside (C, E_N, s_N) ----------------------------------------------------------
@dataclass
class RelClassification:
    thick_in_rel: bool
    biresolving: bool
    serre: bool
    witnesses: dict = dc_field(default_factory=dict)
    instances: dict = dc_field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"thick_in_rel": self.thick_in_rel, "biresolving": self.biresolving,
                "serre": self.serre, "instances": dict(self.instances),
                "witnesses": dict(self.witnesses)}


def _n_morphisms(rs: RelStructure, rng, extra: int):
    """Nonzero maps between N-labels of the window, plus a few sums."""
    cat = rs.cat
    labs = rs.N.labels()
    for a in labs:
        for b in labs:
            yield from cat.basis(Obj((a,)), Obj((b,)))
    for _ in range(extra if labs else 0):
        X = Obj(tuple(sorted(rng.choice(labs, size=2))))
        Y = Obj(tuple(sorted(rng.choice(labs, size=2))))
        d = cat.hom_dim_obj(X, Y)
        if d:
            yield cat.mor(X, Y, rng.integers(0, cat.p, d))


def _conflations_with_middle(rs: RelStructure, rng, extra: int):
    """Triangles A -> B -> C -> A[1] with B in N, from maps out of B.

    The zero middle term comes first: C[-1] -> 0 -> C for each window C."""
    cat = rs.cat
    for c in cat.window_labels:
        try:
            yield cat.cocone_complete(cat.zero(Obj(()), Obj((c,))))
        except WindowExceeded:
            continue
    for b in rs.N.labels():
        B = Obj((b,))
        for c in cat.window_labels:
            for g in cat.basis(B, Obj((c,))):
                yield cat.cocone_complete(g)
        for _ in range(extra):
            c = rng.choice(cat.window_labels, size=2)
            C = Obj(tuple(sorted(int(x) for x in c)))
            d = cat.hom_dim_obj(B, C)
            if d:
                yield cat.cocone_complete(cat.mor(B, C, rng.integers(0, cat.p, d)))


def _inflation_into_N(rs: RelStructure, X: Obj, budget: int) -> Mor | None:
    cat, N = rs.cat, rs.N
    cands = [cat.zero(X, Obj(()))]
    labs = [L for L in N.labels(window=False) if cat.hom_dim_obj(X, Obj((L,)))]
    cands.append(N._coevaluation(labs, X))
    for k in range(1, len(labs) + 1):
        for sub in itertools.combinations(labs, k):
            cands.append(N._coevaluation(list(sub), X))
    for f in cands[:budget]:
        try:
            if rs.is_rel_inflation(f):
                return f
        except WindowExceeded:
            continue
    return None


def _deflation_from_N(rs: RelStructure, X: Obj, budget: int) -> Mor | None:
    cat, N = rs.cat, rs.N
    cands = [cat.zero(Obj(()), X)]
    labs = [L for L in N.labels(window=False) if cat.hom_dim_obj(Obj((L,)), X)]
    cands.append(N._evaluation(labs, X))
    for k in range(1, len(labs) + 1):
        for sub in itertools.combinations(labs, k):
            cands.append(N._evaluation(list(sub), X))
    for g in cands[:budget]:
        try:
            if rs.is_rel_deflation(g):
                return g
        except WindowExceeded:
            continue
    return None


def classify_relative(rs: RelStructure, seed: int = 0, extra: int = 8,
                      budget: int = 64) -> RelClassification:
    """Thick, biresolving and Serre tests for N inside (C, E_N, s_N).

    Thickness and the Serre property are checked on E_N-conflations built
    from maps between N-objects; biresolving searches, for each window
    indecomposable, an s_N-inflation into N and an s_N-deflation out of N
    among the zero map and (partial) approximations.
    """
    cat, N = rs.cat, rs.N
    rng = np.random.default_rng(seed)
    wit: dict = {}
    inst = {"thick_in_rel": 0, "serre": 0, "biresolving": 0}
    thick = True
    for f in _n_morphisms(rs, rng, extra):
        for T in _two_in_N(rs, f):
            try:
                if not rs.in_EN(T.h):
                    continue
                inst["thick_in_rel"] += 1
                if not (N.contains(T.A) and N.contains(T.B) and N.contains(T.C)):
                    thick = False
                    wit.setdefault("thick_in_rel", _dump(cat, T))
            except WindowExceeded:
                continue
    serre = True
    for T in _conflations_with_middle(rs, rng, extra):
        try:
            if not rs.in_EN(T.h):
                continue
        except WindowExceeded:
            continue
        inst["serre"] += 1
        if not (N.contains(T.A) and N.contains(T.C)):
            serre = False
            wit.setdefault("serre", _dump(cat, T))
            break
    bires = True
    for i in cat.window_labels:
        X = Obj((i,))
        inst["biresolving"] += 1
        if _inflation_into_N(rs, X, budget) is None:
            bires = False
            wit.setdefault("biresolving", {"object": cat.label_name(i), "missing": "inflation"})
            break
        if _deflation_from_N(rs, X, budget) is None:
            bires = False
            wit.setdefault("biresolving", {"object": cat.label_name(i), "missing": "deflation"})
            break
    return RelClassification(thick, bires, serre, wit, inst)


def _two_in_N(rs: RelStructure, f: Mor):
    """Triangles through f in which two of the three terms lie in N."""
    cat = rs.cat
    try:
        yield cat.complete_to_triangle(f)       # A, B in N
        yield cat.cocone_complete(f)            # B, C in N
    except WindowExceeded:
        return
    try:
        A1 = cat.shift_obj(f.cod, 1)
    except WindowExceeded:
        return
    for h in cat.basis(f.dom, A1):              # A, C in N
        try:
            yield cat.rotate_inv(cat.rotate_inv(cat.complete_to_triangle(h)))
        except WindowExceeded:
            continue


def _dump(cat: Category, T: Triangle) -> dict:
    return {"A": cat.obj_name(T.A), "B": cat.obj_name(T.B), "C": cat.obj_name(T.C),
            "h": T.h.vec.tolist()}


def relative_structure(N: Subcat, seed: int = 0) -> RelStructure:
    return RelStructure(N, seed=seed)


__all__ = ["ExtClass", "RelStructure", "Factorization", "RelClassification",
           "classify_relative", "window_ext_classes", "window_morphisms",
           "relative_structure", "is_thick_tri"]
