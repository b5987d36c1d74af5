"""Scenario runner: JSON scenario in, JSON report out.

Exit codes: 0 all suites pass, 1 a suite failed, 2 the scenario could not be
parsed or built, 3 a suite left the label universe (WindowExceeded).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import __version__
from .category import Category, InvariantViolation, Obj, WindowExceeded
from .derived import DerivedDynkin
from .dot import ar_quiver, sn_graph
from .heart import CotorsionPair
from .localization import (Localization, theorem_A_classify, verify_MR, verify_MS)
from .quiver import Quiver
from .relative import RelStructure, classify_relative, window_ext_classes, window_morphisms
from .stable import StableNakayama
from .subcat import Subcat, is_extension_closed, is_thick_tri

SUITES = ("axioms_ms", "axioms_mr", "relative", "classify", "verdier", "abelian", "heart",
          "sakai")
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_WINDOW = 0, 1, 2, 3


class ScenarioError(ValueError):
    pass


# -- scenario parsing ----------------------------------------------------------------------------
def load_scenario(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            scn = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"cannot read scenario: {e}") from e
    return normalize(scn)


def normalize(scn) -> dict:
    if not isinstance(scn, dict):
        raise ScenarioError("scenario must be a JSON object")
    be = scn.get("backend")
    if not isinstance(be, dict) or be.get("kind") not in ("stable_nakayama", "derived_dynkin"):
        raise ScenarioError("backend.kind must be stable_nakayama or derived_dynkin")
    sub = scn.get("subcat", {"kind": "zero"})
    if not isinstance(sub, dict) or "kind" not in sub:
        raise ScenarioError("subcat must be an object with a kind")
    suites = scn.get("suites", [])
    if not isinstance(suites, list) or any(s not in SUITES for s in suites):
        raise ScenarioError(f"suites must be a list drawn from {list(SUITES)}")
    budgets = scn.get("budgets", {})
    if not isinstance(budgets, dict):
        raise ScenarioError("budgets must be an object")
    out = {"schema": 1, "name": scn.get("name", ""), "backend": dict(be),
           "subcat": dict(sub), "suites": list(suites),
           "budgets": {"roof_depth": int(budgets.get("roof_depth", 4)),
                       "samples": int(budgets.get("samples", 30)),
                       "exhaustive": bool(budgets.get("exhaustive", False))},
           "seed": int(scn.get("seed", 0))}
    if "heart" in scn:
        if not isinstance(scn["heart"], dict):
            raise ScenarioError("heart must be an object")
        out["heart"] = dict(scn["heart"])
    return out


def build_category(be: dict) -> Category:
    try:
        p = int(be.get("p", 2))
        if be["kind"] == "stable_nakayama":
            return StableNakayama(int(be["n"]), p)
        q = be["quiver"]
        Q = (Quiver.dynkin(q["kind"], q.get("arrows")) if isinstance(q, dict)
             else Quiver.dynkin(str(q)))
        w = int(be.get("window", 2))
        return DerivedDynkin(Q, p, w, margin=int(be.get("margin", 2)))
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"bad backend: {e}") from e


def build_subcats(cat: Category, spec: dict) -> list[Subcat]:
    """One subcategory, or every subset of the given labels for kind all_subsets."""
    try:
        if spec["kind"] == "all_subsets":
            labs = spec.get("labels") or [cat.label_name(i) for i in cat.window_labels]
            return [Subcat.explicit(cat, list(c)) for r in range(len(labs) + 1)
                    for c in itertools.combinations(labs, r)]
        return [Subcat.from_spec(cat, spec)]
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"bad subcat: {e}") from e


# -- suites --------------------------------------------------------------------------------------------
@dataclass
class SuiteResult:
    suite: str
    status: str = "pass"            # pass, fail, skipped, window_exceeded
    instances: int = 0
    failures: list = dc_field(default_factory=list)
    details: list = dc_field(default_factory=list)

    def fail(self, what) -> None:
        self.status = "fail" if self.status != "window_exceeded" else self.status
        if len(self.failures) < 50:
            self.failures.append(what)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "status": self.status, "instances": self.instances,
                "failures": self.failures, "details": self.details}


class Context:
    """Lazily built structures for one subcategory."""

    def __init__(self, cat: Category, N: Subcat, scn: dict):
        self.cat, self.N, self.scn = cat, N, scn
        self.seed = scn["seed"]
        self.budgets = scn["budgets"]
        self._rs = self._loc = self._cls = self._cp = self._closure = None

    @property
    def closure(self):
        if self._closure is None:
            self._closure = is_extension_closed(self.N, seed=self.seed)
        return self._closure

    @property
    def closed(self) -> bool:
        return self.closure.closed

    @property
    def rs(self) -> RelStructure:
        if self._rs is None:
            self._rs = RelStructure(self.N, check=False, seed=self.seed)
        return self._rs

    @property
    def loc(self) -> Localization:
        if self._loc is None:
            self._loc = Localization(self.rs)
        return self._loc

    @property
    def classification(self):
        if self._cls is None:
            self._cls = theorem_A_classify(self.rs, seed=self.seed)
        return self._cls

    @property
    def cp(self) -> CotorsionPair | None:
        if self._cp is None and "heart" in self.scn:
            self._cp = CotorsionPair.from_spec(self.cat, self.scn["heart"])
        return self._cp

    def describe(self) -> dict:
        return self.N.describe()


def _axioms(ctx: Context, res: SuiteResult, which: str) -> dict:
    fn = verify_MS if which == "ms" else verify_MR
    out = fn(ctx.loc, samples=ctx.budgets["samples"], seed=ctx.seed,
             exhaustive=ctx.budgets["exhaustive"])
    summary = {}
    for name, r in out.items():
        res.instances += r.instances
        decided = r.instances - r.undecided
        for f in r.failures:
            res.fail({"axiom": name, "witness": f})
        if r.instances and decided < 0.9 * r.instances:
            res.fail({"axiom": name, "undecided": r.undecided, "instances": r.instances})
        summary[name] = {"instances": r.instances, "passes": r.passes, "undecided": r.undecided}
    return summary


def suite_axioms_ms(ctx: Context, res: SuiteResult) -> dict:
    return _axioms(ctx, res, "ms")


def suite_axioms_mr(ctx: Context, res: SuiteResult) -> dict:
    return _axioms(ctx, res, "mr")


def suite_relative(ctx: Context, res: SuiteResult) -> dict:
    cl = classify_relative(ctx.rs, seed=ctx.seed)
    res.instances += 1
    return cl.as_dict()


def suite_classify(ctx: Context, res: SuiteResult) -> dict:
    c = ctx.classification
    res.instances += 1
    for v in c.violations:
        res.fail(v)
    return c.as_dict()


def suite_verdier(ctx: Context, res: SuiteResult) -> dict:
    cat, rs, loc = ctx.cat, ctx.rs, ctx.loc
    if not is_thick_tri(ctx.N, seed=ctx.seed):
        return {"skipped": "N is not thick"}
    for e in window_ext_classes(cat, seed=ctx.seed):
        res.instances += 1
        if not rs.in_EN(e):
            res.fail({"ext_not_in_EN": [cat.obj_name(e.C), cat.obj_name(e.A), e.h.vec.tolist()]})
    for f in window_morphisms(cat):
        res.instances += 1
        a, b, c = rs.in_L(f), rs.in_R(f), rs.in_SN(f)
        if not a == b == c:
            res.fail({"morphism": [cat.obj_name(f.dom), cat.obj_name(f.cod), f.vec.tolist()],
                      "L": a, "R": b, "SN": c})
    table = []
    for i in cat.window_labels:
        for j in (i, _shift_or_none(cat, i)):
            if j is None:
                continue
            lh = loc.loc_hom(Obj((i,)), Obj((j,)), depth=ctx.budgets["roof_depth"])
            res.instances += 1
            if not lh.stabilized:
                res.fail({"unstabilized": [cat.label_name(i), cat.label_name(j)]})
            table.append([cat.label_name(i), cat.label_name(j), lh.dim, lh.depth])
    return {"loc_hom": table}


def _shift_or_none(cat: Category, i: int):
    try:
        j = cat.shift_label(i, 1)
    except WindowExceeded:
        return None
    return j if cat.in_window(j) else None


def suite_abelian(ctx: Context, res: SuiteResult) -> dict:
    c = ctx.classification
    if c.verdict != "abelian":
        return {"skipped": f"classification is {c.verdict}"}
    res.instances += 1
    if not c.relative.get("serre"):
        res.fail("Serre property not confirmed")
    rng = np.random.default_rng(ctx.seed)
    loc, cat = ctx.loc, ctx.cat
    tried = found = 0
    for k in range(ctx.budgets["samples"]):
        i, j = (int(x) for x in rng.choice(cat.window_labels, size=2))
        d = cat.hom_dim(i, j)
        if not d:
            continue
        f = cat.mor(Obj((i,)), Obj((j,)), rng.integers(0, cat.p, size=d))
        tried += 1
        try:
            loc.mono_epi_factorize(loc.q_morphism(f), seed=ctx.seed + k)
            found += 1
        except LookupError:
            pass
        except InvariantViolation as e:
            res.fail({"mono_epi": str(e), "dom": cat.obj_name(f.dom), "cod": cat.obj_name(f.cod),
                      "vec": f.vec.tolist()})
    res.instances += tried
    if found < 0.9 * tried:
        res.fail({"mono_epi_decided": found, "instances": tried})
    return {"serre": c.relative.get("serre"), "mono_epi": {"found": found, "instances": tried}}


def suite_heart(ctx: Context, res: SuiteResult) -> dict:
    cp = ctx.cp
    if cp is None:
        return {"skipped": "scenario has no heart entry"}
    cat = ctx.cat
    reports = [cp.check_cotorsion(), cp.kernel_check(),
               cp.check_cohomological(ctx.budgets["samples"], ctx.seed),
               cp.lr_rl_check(ctx.budgets["samples"], ctx.seed),
               cp.eh_closure_check(ctx.budgets["samples"], ctx.seed)]
    diag = 0
    for L in cat.window_labels:
        X = Obj((L,))
        bad = cp.check_coreflection(X) + cp.check_reflection(X)
        diag += 1
        for b in bad:
            res.fail(b)
    res.instances += diag
    loc = Localization(RelStructure(cp.N, check=False, seed=ctx.seed))
    reports.append(cp.heart_equivalence_check(loc, depth=ctx.budgets["roof_depth"],
                                              samples=ctx.budgets["samples"], seed=ctx.seed))
    out = {}
    for r in reports:
        res.instances += r.instances
        for f in r.failures:
            res.fail({r.name: f})
        out[r.name] = {"instances": r.instances, "ok": r.ok, **r.details}
    return out


def suite_sakai(ctx: Context, res: SuiteResult) -> dict:
    cp = ctx.cp
    if cp is None:
        return {"skipped": "scenario has no heart entry"}
    rs = RelStructure(cp.N, check=False, seed=ctx.seed)
    r = cp.compare_relative_structures(rs, seed=ctx.seed)
    res.instances += r.instances
    for f in r.failures:
        res.fail(f)
    return r.details


RUNNERS = {"axioms_ms": suite_axioms_ms, "axioms_mr": suite_axioms_mr,
           "relative": suite_relative, "classify": suite_classify, "verdier": suite_verdier,
           "abelian": suite_abelian, "heart": suite_heart, "sakai": suite_sakai}
NEEDS_CLOSED = {"axioms_ms", "axioms_mr", "relative", "classify", "verdier", "abelian"}


def run_scenario(scn: dict, timing: bool = False) -> tuple[dict, int]:
    t0 = time.perf_counter()
    cat = build_category(scn["backend"])
    ctxs = [Context(cat, N, scn) for N in build_subcats(cat, scn["subcat"])]
    results = []
    for name in scn["suites"]:
        res = SuiteResult(name)
        for ctx in ctxs:
            entry = {"subcat": ctx.describe()}
            try:
                entry["extension_closed"] = ctx.closed
                if name in NEEDS_CLOSED and not ctx.closed:
                    entry["skipped"] = "not extension-closed"
                    entry["counterexample"] = ctx.closure.counterexample
                    res.details.append(entry)
                    continue
                entry.update(RUNNERS[name](ctx, res))
            except WindowExceeded as e:
                res.status = "window_exceeded"
                res.failures.append({"window_exceeded": str(e)})
            res.details.append(entry)
        results.append(res.as_dict())
    report = {"schema": 1, "version": __version__, "scenario": scn, "results": results,
              "timing_ms": round(1000 * (time.perf_counter() - t0)) if timing else None,
              "disclaimer": "checks are exact over F_p on the label universe of the window; "
                            "sampled suites depend on the recorded seed"}
    statuses = [r["status"] for r in results]
    code = (EXIT_WINDOW if "window_exceeded" in statuses
            else EXIT_FAIL if "fail" in statuses else EXIT_OK)
    return report, code


def export_dot(scn: dict, what: str) -> str:
    cat = build_category(scn["backend"])
    if what == "ar_quiver":
        return ar_quiver(cat)
    N = build_subcats(cat, scn["subcat"])[0]
    return sn_graph(RelStructure(N, check=False))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="extriloc", description=__doc__.splitlines()[0])
    ap.add_argument("--scenario", required=True, metavar="PATH")
    ap.add_argument("--report", metavar="PATH", help="write the JSON report here (default stdout)")
    ap.add_argument("--window", type=int, metavar="N", help="override backend.window")
    ap.add_argument("--seed", type=int, metavar="U64", help="override the scenario seed")
    ap.add_argument("--suite", action="append", choices=SUITES, metavar="NAME",
                    help="run only these suites (repeatable)")
    ap.add_argument("--dot", choices=("ar_quiver", "sn_graph"),
                    help="print a DOT export instead of running suites")
    ap.add_argument("--timing", action="store_true",
                    help="record wall-clock time (makes reports non-reproducible)")
    args = ap.parse_args(argv)
    try:
        scn = load_scenario(args.scenario)
        if args.window is not None:
            scn["backend"]["window"] = args.window
        if args.seed is not None:
            if not 0 <= args.seed < 1 << 64:
                raise ScenarioError("seed must be an unsigned 64-bit integer")
            scn["seed"] = args.seed
        if args.suite:
            scn["suites"] = list(args.suite)
        if args.dot:
            sys.stdout.write(export_dot(scn, args.dot))
            return EXIT_OK
        report, code = run_scenario(scn, timing=args.timing)
    except ScenarioError as e:
        print(f"extriloc: {e}", file=sys.stderr)
        return EXIT_PARSE
    except WindowExceeded as e:
        print(f"extriloc: window exceeded: {e}", file=sys.stderr)
        return EXIT_WINDOW
    text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o) if isinstance(o, (set, frozenset)) else list(o)
    return str(o)
