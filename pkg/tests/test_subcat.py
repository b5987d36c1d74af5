from __future__ import annotations

import itertools

import pytest

from extriloc.category import Obj
from extriloc.derived import DerivedDynkin
from extriloc.quiver import Quiver
from extriloc.stable import StableNakayama
from extriloc.subcat import (Subcat, cone_generation_witness, is_extension_closed,
                             is_shift_stable, is_thick_tri)
from oracles import all_vectors, nakayama_extension_middles, span_dim

A2 = Quiver.dynkin("A2")


@pytest.fixture(scope="module")
def a2():
    return DerivedDynkin(A2, 2, 2, margin=2)


def hv(cat):
    return Subcat.homology_vanishing(cat, except_=[0])


def orbit(cat):
    return Subcat.shift_orbit(cat, ["01"])


def stable_closure_oracle(sizes, n: int, max_total: int) -> bool:
    """Extension closure of add{J_s : s in sizes} from module extensions."""
    sums = [c for k in range(1, max_total + 1)
            for c in itertools.combinations_with_replacement(sorted(sizes), k)
            if sum(c) <= max_total]
    for A in sums:
        for C in sums:
            if sum(A) + sum(C) > max_total:
                continue
            for mid in nakayama_extension_middles(A, C, n):
                if not set(mid) <= set(sizes):
                    return False
    return True


def test_membership_examples(a2):
    N = hv(a2)
    assert N.contains(a2.obj("10[1]")) and not N.contains(a2.obj("10"))
    assert orbit(a2).contains(a2.obj("01[-1]"))


def test_ideal_of_orbit_misses_projective_cover(a2):
    N = orbit(a2)
    assert N.ideal(a2.obj("11"), a2.obj("10")).dim == 0


def test_identity_outside_n_is_not_in_ideal(a2):
    assert not hv(a2).in_ideal(a2.identity(a2.obj("10")))


@pytest.mark.parametrize("which", ["hv", "orbit", "explicit"])
def test_ideal_matches_enumerated_composites(a2, which):
    N = {"hv": hv(a2), "orbit": orbit(a2),
         "explicit": Subcat.explicit(a2, ["11", "10[1]"])}[which]
    cat = a2
    ls = [L for L in cat.all_labels() if N.contains_label(L)]
    for i, j in itertools.product(cat.window_labels, repeat=2):
        X, Y = Obj((i,)), Obj((j,))
        d = cat.hom_dim(i, j)
        if not d:
            continue
        comps = []
        for L in ls:
            Z = Obj((L,))
            us = [cat.mor(X, Z, v) for v in all_vectors(cat.p, cat.hom_dim(i, L))]
            vs = [cat.mor(Z, Y, v) for v in all_vectors(cat.p, cat.hom_dim(L, j))]
            comps += [(v @ u).vec for u in us for v in vs]
        assert N.ideal(X, Y).dim == span_dim(comps, cat.p), (cat.label_name(i), cat.label_name(j))


def test_factorization_witness(a2):
    N = hv(a2)
    for i, j in itertools.product(a2.window_labels, repeat=2):
        for f in a2.basis(Obj((i,)), Obj((j,))):
            ok, wit = N.factors_through(f)
            assert ok == N.in_ideal(f)
            if ok:
                N0, h, g = wit
                assert N.contains(N0) and (g @ h).equals(f)


def test_right_approximation_by_projectives(a2):
    P = Subcat.explicit(a2, ["11", "01"])
    u = P.right_approximation(a2.obj("10")).u
    assert "11" in a2.obj_name(u.dom)
    g = a2.basis(a2.obj("11"), a2.obj("10"))[0]
    assert a2.solve_post(u, g) is not None


def test_stable_j2_counterexample():
    cat = StableNakayama(4, 2)
    v = is_extension_closed(Subcat.explicit(cat, ["J2"]))
    assert not v.closed
    assert v.counterexample["E"] == "J1+J3"


@pytest.mark.parametrize("subset", [c for k in range(4)
                                    for c in itertools.combinations((1, 2, 3), k)])
def test_stable_extension_closure_matches_module_oracle(subset):
    cat = StableNakayama(4, 2)
    N = Subcat.explicit(cat, [f"J{s}" for s in subset])
    assert is_extension_closed(N).closed == stable_closure_oracle(subset, 4, 6)


def test_derived_examples(a2):
    assert is_extension_closed(hv(a2)).closed
    assert not is_shift_stable(hv(a2))
    assert is_thick_tri(orbit(a2))


def test_cone_generation(a2):
    w = cone_generation_witness(hv(a2), a2.obj("10"))
    assert w.status == "found"
    T = w.triangle
    assert hv(a2).contains(T.A) and hv(a2).contains(T.B)
    assert cone_generation_witness(orbit(a2), a2.obj("10")).status == "refuted"


def test_from_spec_round_trip(a2):
    for spec in ({"kind": "homology_vanishing", "degrees": {"except": [0]}},
                 {"kind": "shift_orbit", "labels": ["01"]},
                 {"kind": "explicit", "labels": ["11"]},
                 {"kind": "degree_range", "lo": 1},
                 {"kind": "right_perp", "labels": ["11", "01"]}):
        N = Subcat.from_spec(a2, spec)
        again = Subcat.from_spec(a2, N.describe())
        assert N.labels() == again.labels()
    with pytest.raises(ValueError):
        Subcat.from_spec(a2, {"kind": "nope"})
