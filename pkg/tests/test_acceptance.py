"""Acceptance criteria, one test and one printed PASS/FAIL line each."""

from __future__ import annotations

import itertools
import time

import numpy as np
import pytest

from extriloc.category import InvariantViolation, Obj, WindowExceeded
from extriloc.derived import DerivedDynkin
from extriloc.heart import CotorsionPair
from extriloc.localization import (Localization, mr3_witness, sample_mr3, theorem_A_classify,
                                   verify_MR, verify_MS)
from extriloc.quiver import Quiver
from extriloc.relative import RelStructure, window_ext_classes, window_morphisms
from extriloc.stable import StableNakayama
from extriloc.subcat import Subcat, is_extension_closed
from oracles import end_module_hom_dim, nakayama_extension_middles, rep_hom_dim

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}
A2, A3 = Quiver.dynkin("A2"), Quiver.dynkin("A3")
APR = ["111", "011", "010"]


def record(n: int, ok: bool, msg: str) -> None:
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {msg}"


# -- 1 ---------------------------------------------------------------------------------------------------
def module_ses_closure(sizes, n: int = 4, max_total: int = 8) -> bool:
    sums = [c for k in range(1, max_total + 1)
            for c in itertools.combinations_with_replacement(sorted(sizes), k)
            if sum(c) <= max_total]
    for A in sums:
        for C in sums:
            if sum(A) + sum(C) <= max_total:
                if not all(set(m) <= set(sizes) for m in nakayama_extension_middles(A, C, n)):
                    return False
    return True


def test_criterion_1_exhaustive_stable():
    cat = StableNakayama(4, 2)
    t0 = time.perf_counter()
    verdicts, axioms, bad = {}, {}, []
    for k in range(4):
        for sub in itertools.combinations((1, 2, 3), k):
            N = Subcat.explicit(cat, [f"J{s}" for s in sub])
            closed = is_extension_closed(N).closed
            verdicts[sub] = closed
            if closed:
                loc = Localization(RelStructure(N))
                res = {**verify_MS(loc, exhaustive=True), **verify_MR(loc, exhaustive=True)}
                axioms[sub] = sum(r.instances for r in res.values())
                bad += [(sub, r.name) for r in res.values() if not r.ok or r.undecided]
    elapsed = time.perf_counter() - t0
    oracle = {sub: module_ses_closure(sub) for sub in verdicts}
    mism = [s for s in verdicts if verdicts[s] != oracle[s]]
    ok = not mism and not bad and len(verdicts) == 8 and elapsed < 60
    record(1, ok, f"8 subsets, closed={[list(s) for s in verdicts if verdicts[s]]}, "
                  f"oracle mismatches={len(mism)}, exhaustive axiom instances={axioms}, "
                  f"axiom failures={bad}, {elapsed:.1f}s")
    assert ok


# -- 2 ---------------------------------------------------------------------------------------------------
def test_criterion_2_verdier():
    t0 = time.perf_counter()
    cat = DerivedDynkin(A2, 2, 3, margin=2)
    rs = RelStructure(Subcat.shift_orbit(cat, ["01"]))
    cls = theorem_A_classify(rs)
    classes = list(window_ext_classes(cat))
    en_all = all(rs.in_EN(e) for e in classes)
    mors = list(window_morphisms(cat))
    lrs = [f for f in mors if not rs.in_L(f) == rs.in_R(f) == rs.in_SN(f)]
    loc = Localization(rs)
    S1 = cat.obj("10")
    h0 = loc.loc_hom(S1, S1)
    h1 = loc.loc_hom(S1, cat.obj("10[1]"))
    elapsed = time.perf_counter() - t0
    ok = (cls.verdict == "triangulated" and not cls.violations and en_all and not lrs
          and h0.dim == 1 and h1.dim == 0 and h0.stabilized and h1.stabilized
          and h0.depth <= 2 and h1.depth <= 2 and elapsed < 120)
    record(2, ok, f"classification={cls.verdict}, E_N=E on {len(classes)} classes: {en_all}, "
                  f"L=R=S_N mismatches {len(lrs)}/{len(mors)}, loc_hom dims "
                  f"{h0.dim}/{h1.dim} at depths {h0.depth}/{h1.depth}, {elapsed:.1f}s")
    assert ok


# -- 3 ---------------------------------------------------------------------------------------------------
def test_criterion_3_abelian():
    cat = DerivedDynkin(A2, 2, 2, margin=2)
    rs = RelStructure(Subcat.homology_vanishing(cat, except_=[0]))
    cls = theorem_A_classify(rs)
    loc = Localization(rs)
    compared, mism, unstab = 0, [], 0
    for i, j in itertools.product(cat.window_labels, repeat=2):
        lh = loc.loc_hom(Obj((i,)), Obj((j,)))
        if not lh.stabilized:
            unstab += 1
            continue
        (a, d), (b, e) = cat.labels[i], cat.labels[j]
        M, N = cat.mods[a], cat.mods[b]
        expect = rep_hom_dim(M.dims, M.mats, N.dims, N.mats, A2.arrows, 2) if d == e == 0 else 0
        compared += 1
        if lh.dim != expect:
            mism.append((cat.label_name(i), cat.label_name(j), lh.dim, expect))
    cp = CotorsionPair.t_structure(cat, 0)
    coh = cp.check_cohomological(50, seed=0)
    total = compared + unstab
    ok = (cls.verdict == "abelian" and cls.relative["serre"] and not cls.violations
          and not mism and compared >= 0.9 * total and coh.ok and coh.instances >= 50)
    record(3, ok, f"classification={cls.verdict}, serre={cls.relative['serre']}, "
                  f"loc_hom vs Hom_kQ(H0,H0): {compared} pairs ({unstab} unstabilized), "
                  f"{len(mism)} mismatches; cohomological on {coh.instances} checks, "
                  f"{len(coh.failures)} failures")
    assert ok


# -- 4 ---------------------------------------------------------------------------------------------------
def test_criterion_4_tilting_heart():
    cat = DerivedDynkin(A3, 2, 2, margin=2)
    cp = CotorsionPair.rigid(cat, APR)
    loc = Localization(RelStructure(cp.N))
    pairs = [(i, j) for i in cat.window_labels for j in cat.window_labels
             if abs(cat.degree(i)) <= 1 and abs(cat.degree(j)) <= 1]
    rep = cp.heart_equivalence_check(loc, pairs=pairs)
    T = [cat.parse_label(t) for t in APR]
    mism = [row for row in rep.details["table"]
            if not row[2] == row[3] == end_module_hom_dim(cat, T, cat.obj(row[0]),
                                                          cat.obj(row[1]))]
    n = rep.details["pairs"]
    ok = rep.ok and not mism and n >= 36
    record(4, ok, f"T = {'+'.join(APR)}, {n} pairs against End(T)-module homs, "
                  f"{len(mism)} mismatches, {len(rep.failures)} check failures")
    assert ok


# -- 5 ---------------------------------------------------------------------------------------------------
def test_criterion_5_relative_structures():
    cat = DerivedDynkin(A2, 2, 2, margin=2)
    parts, ok = [], True
    for name, cp in (("t_structure", CotorsionPair.t_structure(cat, 0)),
                     ("rigid kQ", CotorsionPair.rigid(cat, ["11", "01"]))):
        rep = cp.compare_relative_structures(RelStructure(cp.N))
        n = rep.instances
        eh, js = rep.details["EH_eq_EN"], rep.details["EJS_eq_EL"]
        ok &= eh == n and js == n
        parts.append(f"{name}: EH=EN {eh}/{n}, EJS=EL {js}/{n} "
                     f"(EJS=ER {rep.details['EJS_eq_ER']}/{n})")
    record(5, ok, "; ".join(parts))
    assert ok


# -- 6 ---------------------------------------------------------------------------------------------------
def _scenarios():
    st = StableNakayama(4, 2)
    a2 = DerivedDynkin(A2, 2, 2, margin=2)
    a3 = DerivedDynkin(A3, 2, 2, margin=2)
    return {"stable_all": Subcat.everything(st),
            "a2_verdier": Subcat.shift_orbit(a2, ["01"]),
            "a2_abelian": Subcat.homology_vanishing(a2, except_=[0]),
            "a3_apr": CotorsionPair.rigid(a3, APR).N}


def _rand_obj(cat, rng):
    k = int(rng.integers(1, 3))
    return Obj(tuple(sorted(int(i) for i in rng.choice(cat.window_labels, size=k))))


def _run(fn):
    """'ok', 'undecided' or the violation text."""
    try:
        return "ok" if fn() else "undecided"
    except (WindowExceeded, LookupError):
        return "undecided"
    except InvariantViolation as e:
        return f"violation: {e}"


def test_criterion_6_constructions():
    n = 100
    lines, ok = [], True
    for name, N in _scenarios().items():
        cat = N.cat
        rs = RelStructure(N)
        loc = Localization(rs)
        cls = theorem_A_classify(rs)
        rng = np.random.default_rng(2024)
        tallies = {}

        def rl():
            s = loc.sample_SN(_rand_obj(cat, rng), rng)
            fac = rs.rl_factorize(s)
            return (fac.r @ fac.l).equals(s) and rs.in_L(fac.l) and rs.in_Rsp(fac.r)

        def ore():
            s = loc.sample_SN(_rand_obj(cat, rng), rng)
            Y = _rand_obj(cat, rng)
            x = cat.mor(s.dom, Y, rng.integers(0, cat.p, cat.hom_dim_obj(s.dom, Y)))
            t, xp = loc.ore_square(x, s)
            return rs.in_SN(t) and N.congruent(t @ x, xp @ s)

        def mr3():
            inst = sample_mr3(loc, rng)
            if inst is None:
                return False
            T1, T2, a, c = inst
            b = mr3_witness(loc, T1, T2, a, c, seed=int(rng.integers(1 << 30)))
            return b is not None and rs.in_SN(b) and (b @ T1.f).equals(T2.f @ a) \
                and (T2.g @ b).equals(c @ T1.g)

        def mono_epi():
            X, Y = _rand_obj(cat, rng), _rand_obj(cat, rng)
            f = cat.mor(X, Y, rng.integers(0, cat.p, cat.hom_dim_obj(X, Y)))
            fac = loc.mono_epi_factorize(loc.q_morphism(f), seed=int(rng.integers(1 << 30)))
            return loc.is_epi_loc(fac.epi) and loc.is_mono_loc(fac.mono)

        checks = {"rl_factorize": rl, "ore_square": ore, "mr3_witness": mr3}
        if cls.verdict == "abelian":
            checks["mono_epi_factorize"] = mono_epi
        for cname, fn in checks.items():
            out = [_run(fn) for _ in range(n)]
            good = out.count("ok")
            viol = [o for o in out if o.startswith("violation")]
            tallies[cname] = f"{good}/{n}"
            ok &= not viol and good >= 0.9 * n
        ok &= not cls.violations
        lines.append(f"{name} ({cls.verdict}): " + ", ".join(f"{k} {v}"
                                                             for k, v in tallies.items()))
    record(6, ok, "; ".join(lines))
    assert ok
