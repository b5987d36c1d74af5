from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extriloc.category import Obj, WindowExceeded
from extriloc.derived import DerivedDynkin
from extriloc.localization import (UNDECIDED, Localization, Roof, theorem_A_classify,
                                   verify_MR, verify_MS)
from extriloc.quiver import Quiver
from extriloc.relative import RelStructure, window_morphisms
from extriloc.stable import StableNakayama
from extriloc.subcat import Subcat
from oracles import rep_hom_dim

A2 = Quiver.dynkin("A2")


@pytest.fixture(scope="module")
def a2():
    return DerivedDynkin(A2, 2, 2, margin=2)


@pytest.fixture(scope="module")
def verdier(a2):
    return Localization(RelStructure(Subcat.shift_orbit(a2, ["01"])))


@pytest.fixture(scope="module")
def abelian(a2):
    return Localization(RelStructure(Subcat.homology_vanishing(a2, except_=[0])))


def test_verdier_hom_dims_match_restriction_to_vertex_one(a2, verdier):
    """D(A2)/<S2> is D(k) through M |-> M at vertex 1."""
    for i, j in itertools.product(a2.window_labels, repeat=2):
        (a, d), (b, e) = a2.labels[i], a2.labels[j]
        if abs(d) > 1 or abs(e) > 1:
            continue
        lh = verdier.loc_hom(Obj((i,)), Obj((j,)), depth=4)
        assert lh.stabilized
        expect = a2.mods[a].dims[0] * a2.mods[b].dims[0] if d == e else 0
        assert lh.dim == expect, (a2.label_name(i), a2.label_name(j))


def test_verdier_examples(a2, verdier):
    S1, P1 = a2.obj("10"), a2.obj("11")
    assert verdier.loc_hom(S1, P1).dim == 1
    lh = verdier.loc_hom(S1, a2.obj("10[1]"))
    assert lh.dim == 0 and lh.stabilized and lh.depth <= 2


def test_abelian_hom_dims_match_module_homs(a2, abelian):
    for i, j in itertools.product(a2.window_labels, repeat=2):
        (a, d), (b, e) = a2.labels[i], a2.labels[j]
        if abs(d) > 1 or abs(e) > 1:
            continue
        lh = abelian.loc_hom(Obj((i,)), Obj((j,)), depth=4)
        if not lh.stabilized:
            continue
        M, N = a2.mods[a], a2.mods[b]
        expect = rep_hom_dim(M.dims, M.mats, N.dims, N.mats, A2.arrows, 2) if d == e == 0 else 0
        assert lh.dim == expect, (a2.label_name(i), a2.label_name(j))


def test_q_kills_exactly_the_ideal(a2, abelian):
    for f in window_morphisms(a2):
        assert abelian.roof_is_zero(abelian.q_morphism(f)) == abelian.N.in_ideal(f)


def test_sn_morphisms_become_invertible(a2, verdier):
    for s in window_morphisms(a2):
        if not verdier.rs.in_SN(s):
            continue
        inv = verdier.inverse_of(s)
        one = verdier.roof_compose(inv, verdier.q_morphism(s))
        assert verdier.roof_equal(one, verdier.identity(s.dom)) is True
        assert verdier.is_iso_loc(s)


def test_inverse_of_rejects_non_sn(a2, verdier):
    with pytest.raises(ValueError):
        verdier.inverse_of(a2.basis(a2.obj("01"), a2.obj("11"))[0])


def test_saturation_iso_iff_mono_and_epi(a2, abelian, verdier):
    for loc in (abelian, verdier):
        for f in window_morphisms(a2):
            try:
                assert loc.is_iso_loc(f) == (loc.is_mono_loc(f) and loc.is_epi_loc(f))
            except WindowExceeded:
                continue


def test_mono_epi_flags_for_projective_cover(a2, abelian):
    g = a2.basis(a2.obj("11"), a2.obj("10"))[0]
    assert abelian.is_epi_loc(g) and not abelian.is_mono_loc(g) and not abelian.is_iso_loc(g)


def test_mono_epi_factorization(a2, abelian):
    g = a2.basis(a2.obj("11"), a2.obj("10"))[0]
    fac = abelian.mono_epi_factorize(abelian.q_morphism(g))
    assert abelian.is_epi_loc(fac.epi) and abelian.is_mono_loc(fac.mono)


def test_ore_square_example(a2, verdier):
    P1, S1 = a2.obj("11"), a2.obj("10")
    s = a2.basis(P1, S1)[0]
    x = a2.vcat([s, s])
    t, xp = verdier.ore_square(x, s)
    assert verdier.rs.in_SN(t)
    assert verdier.N.congruent(t @ x, xp @ s)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_ore_square_property(data):
    cat = DerivedDynkin(A2, 2, 1, margin=2)
    loc = Localization(RelStructure(Subcat.homology_vanishing(cat, except_=[0])))
    sn = [s for s in window_morphisms(cat, basis_only=False) if loc.rs.in_SN(s)]
    s = data.draw(st.sampled_from(sn))
    j = data.draw(st.sampled_from(cat.window_labels))
    X = Obj((j,))
    d = cat.hom_dim_obj(s.dom, X)
    v = data.draw(st.lists(st.integers(0, 1), min_size=d, max_size=d))
    x = cat.mor(s.dom, X, np.array(v, dtype=np.int64))
    try:
        t, xp = loc.ore_square(x, s)
    except WindowExceeded:
        return
    assert loc.rs.in_SN(t) and loc.N.congruent(t @ x, xp @ s)


def test_roof_composition_is_associative_on_classes(a2, abelian):
    rng = np.random.default_rng(3)
    sn = [s for s in window_morphisms(a2) if abelian.rs.in_SN(s) and not a2.is_iso(s)]
    checked = 0
    for s in sn[:6]:
        a = abelian.inverse_of(s)                  # s.cod -> s.dom
        for g in a2.basis(s.dom, Obj((int(rng.choice(a2.window_labels)),))):
            b = abelian.q_morphism(g)
            c = abelian.identity(g.cod)
            try:
                lhs = abelian.roof_compose(c, abelian.roof_compose(b, a))
                rhs = abelian.roof_compose(abelian.roof_compose(c, b), a)
            except WindowExceeded:
                continue
            res = abelian.roof_equal(lhs, rhs)
            if res is UNDECIDED:
                continue
            assert res
            checked += 1
    assert checked


def test_roof_requires_shared_apex(a2):
    with pytest.raises(ValueError):
        Roof(a2.identity(a2.obj("10")), a2.identity(a2.obj("11")))


def test_axioms_exhaustive_on_stable_zero():
    cat = StableNakayama(4, 2)
    loc = Localization(RelStructure(Subcat.zero(cat)))
    for r in {**verify_MS(loc, exhaustive=True), **verify_MR(loc, exhaustive=True)}.values():
        assert r.ok and r.undecided == 0 and r.instances > 0, r.as_dict()


def test_axioms_sampled_on_abelian(abelian):
    for r in {**verify_MS(abelian, samples=30), **verify_MR(abelian, samples=30)}.values():
        assert r.ok, r.as_dict()
        assert r.undecided <= 0.1 * r.instances, r.as_dict()


@pytest.mark.parametrize("spec,verdict", [
    ({"kind": "shift_orbit", "labels": ["01"]}, "triangulated"),
    ({"kind": "homology_vanishing", "degrees": {"except": [0]}}, "abelian"),
    ({"kind": "zero"}, "triangulated"),
    ({"kind": "degree_range", "lo": 1}, "extriangulated"),
])
def test_classifier(a2, spec, verdict):
    c = theorem_A_classify(RelStructure(Subcat.from_spec(a2, spec)))
    assert c.verdict == verdict
    assert not c.violations
