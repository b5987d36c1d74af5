from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extriloc.category import InvariantViolation, Obj, WindowExceeded
from extriloc.derived import DerivedDynkin
from extriloc.quiver import Quiver
from extriloc.relative import (ExtClass, RelStructure, classify_relative, window_ext_classes,
                               window_morphisms)
from extriloc.stable import StableNakayama
from extriloc.subcat import Subcat
from oracles import all_vectors, span_size

A2 = Quiver.dynkin("A2")


@pytest.fixture(scope="module")
def a2():
    return DerivedDynkin(A2, 2, 1, margin=2)


def scenarios(cat):
    return {"hv": Subcat.homology_vanishing(cat, except_=[0]),
            "orbit": Subcat.shift_orbit(cat, ["01"]),
            "zero": Subcat.zero(cat),
            "s2": Subcat.explicit(cat, ["01"]),
            "s1": Subcat.explicit(cat, ["10"])}


class IdealOracle:
    """[N](X, Y) for indecomposable X, Y as the enumerated span of composites."""

    def __init__(self, cat, labels):
        self.cat, self.labels, self.cache = cat, labels, {}

    def contains(self, f) -> bool:
        cat = self.cat
        (i,), (j,) = f.dom.labels, f.cod.labels
        if (i, j) not in self.cache:
            comps = [tuple(int(x) for x in np.zeros(cat.hom_dim(i, j), dtype=np.int64))]
            for L in self.labels:
                X, Z, Y = Obj((i,)), Obj((L,)), Obj((j,))
                for u in all_vectors(cat.p, cat.hom_dim(i, L)):
                    for v in all_vectors(cat.p, cat.hom_dim(L, j)):
                        comps.append((cat.mor(Z, Y, v) @ cat.mor(X, Z, u)).vec)
            self.cache[i, j] = comps
        comps = self.cache[i, j]
        return span_size(comps, cat.p) == span_size(comps + [f.vec], cat.p)


def lex_rex_oracle(cat, N, h):
    """(Lex) and (Rex) checked on every test map from and to every N-label."""
    NL = [L for L in cat.all_labels() if N.contains_label(L)]
    N1 = N.shifted(1)
    N1L = [L for L in cat.all_labels() if N1.contains_label(L)]
    ideal_n1 = IdealOracle(cat, N1L)
    ideal_n = IdealOracle(cat, NL)
    lex = all(ideal_n1.contains(h @ cat.mor(Obj((L,)), h.dom, v))
              for L in NL for v in all_vectors(cat.p, cat.hom_dim_obj(Obj((L,)), h.dom)))
    rex = all(ideal_n.contains(cat.mor(h.cod, Obj((M,)), v) @ h)
              for M in N1L for v in all_vectors(cat.p, cat.hom_dim_obj(h.cod, Obj((M,)))))
    return lex, rex


@pytest.mark.parametrize("which", ["hv", "orbit", "zero", "s2"])
def test_lex_rex_match_enumeration(a2, which):
    N = scenarios(a2)[which]
    rs = RelStructure(N, check=False)
    for e in window_ext_classes(a2):
        if e.h.is_zero():
            continue
        lex, rex = lex_rex_oracle(a2, N, e.h)
        assert rs.in_EL(e) == lex and rs.in_ER(e) == rex, a2.obj_name(e.C)


def test_el_examples(a2):
    h = a2.basis(a2.obj("10"), a2.obj("01[1]"))[0]
    assert RelStructure(Subcat.explicit(a2, ["01"]), check=False).in_EL(h)
    assert not RelStructure(Subcat.explicit(a2, ["10"]), check=False).in_EL(h)


def test_inflation_examples(a2):
    f = a2.basis(a2.obj("01"), a2.obj("11"))[0]
    assert RelStructure(scenarios(a2)["hv"]).is_rel_inflation(f)
    # N = 0 gives the whole structure E_0 = E
    assert RelStructure(Subcat.zero(a2)).is_rel_inflation(f)


def test_morphism_class_examples(a2):
    rs = RelStructure(scenarios(a2)["orbit"])
    g = a2.basis(a2.obj("11"), a2.obj("10"))[0]
    f = a2.basis(a2.obj("01"), a2.obj("11"))[0]
    assert rs.in_R(g) and not rs.in_L(f) and rs.in_SN(g)
    X = a2.obj("10")
    assert rs.in_L(a2.identity(X))
    split = a2.inj([X, a2.obj("01")], 0)
    assert rs.in_Lsp(split)
    rs0 = RelStructure(Subcat.zero(a2))
    for i, j in itertools.product(a2.window_labels, repeat=2):
        for s in a2.basis(Obj((i,)), Obj((j,))):
            assert rs0.in_SN(s) == a2.is_iso(s)


def test_thick_subcategory_gives_whole_structure():
    cat = DerivedDynkin(A2, 2, 2, margin=2)
    rs = RelStructure(Subcat.shift_orbit(cat, ["01"]))
    assert all(rs.in_EN(e) for e in window_ext_classes(cat))


@pytest.mark.parametrize("which", ["hv", "orbit"])
def test_en_is_closed_under_push_and_pull(a2, which):
    rs = RelStructure(scenarios(a2)[which])
    rng = np.random.default_rng(7)
    labs = a2.window_labels
    for e in window_ext_classes(a2):
        if not rs.in_EN(e):
            continue
        for _ in range(3):
            A2_ = Obj((int(rng.choice(labs)),))
            C2 = Obj((int(rng.choice(labs)),))
            a = a2.mor(e.A, A2_, rng.integers(0, 2, a2.hom_dim_obj(e.A, A2_)))
            c = a2.mor(C2, e.C, rng.integers(0, 2, a2.hom_dim_obj(C2, e.C)))
            try:
                assert rs.in_EN(e.push(a)) and rs.in_EN(e.pull(c))
            except WindowExceeded:
                pass


@pytest.mark.parametrize("which", ["hv", "orbit"])
def test_rl_and_lr_factorizations(a2, which):
    rs = RelStructure(scenarios(a2)[which])
    objs = [Obj(())] + [Obj((i,)) for i in a2.window_labels]
    n = 0
    for X, Y in itertools.product(objs, repeat=2):
        for v in all_vectors(2, a2.hom_dim_obj(X, Y)):
            s = a2.mor(X, Y, v)
            try:
                if not rs.in_SN(s):
                    continue
                fr = rs.rl_factorize(s)
                fl = rs.lr_factorize(s)
            except WindowExceeded:
                continue
            n += 1
            assert (fr.r @ fr.l).equals(s) and rs.in_L(fr.l) and rs.in_Rsp(fr.r)
            assert (fl.r @ fl.l).equals(s) and rs.in_Lsp(fl.l) and rs.in_R(fl.r)
    assert n > 10


def test_rl_factorize_rejects_non_sn(a2):
    rs = RelStructure(Subcat.zero(a2))
    f = a2.basis(a2.obj("01"), a2.obj("11"))[0]
    with pytest.raises(ValueError):
        rs.rl_factorize(f)


def test_relstructure_rejects_non_closed():
    cat = StableNakayama(4, 2)
    with pytest.raises(ValueError):
        RelStructure(Subcat.explicit(cat, ["J2"]))


def test_classify_relative_examples():
    cat = DerivedDynkin(A2, 2, 2, margin=2)
    r = classify_relative(RelStructure(Subcat.shift_orbit(cat, ["01"])))
    assert r.biresolving and r.thick_in_rel
    r = classify_relative(RelStructure(Subcat.homology_vanishing(cat, except_=[0])))
    assert r.serre and not r.biresolving and r.thick_in_rel
    r = classify_relative(RelStructure(Subcat.zero(cat)))
    assert not r.serre and "serre" in r.witnesses


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_sn_is_closed_under_composition(data):
    cat = DerivedDynkin(A2, 2, 1, margin=2)
    rs = RelStructure(Subcat.homology_vanishing(cat, except_=[0]))
    sn = [s for s in window_morphisms(cat, basis_only=False) if rs.in_SN(s)]
    s = data.draw(st.sampled_from(sn))
    nxt = [t for t in sn if t.dom == s.cod]
    if not nxt:
        return
    t = data.draw(st.sampled_from(nxt))
    assert rs.in_SN(t @ s)
