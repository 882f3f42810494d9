"""The acceptance battery, shared by ``fusionlim verify-paper`` and the test suite.

Each criterion returns a :class:`Row` with the expected and actual values,
whether it passed, the elapsed time and its time limit.  A row passes only
if the values match exactly and it finished within its limit.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from .expr import build_group, build_module
from .fusion import (FusionContext, class_local_lambda, classify_linking_systems, fusion_context,
                     lim_z_direct, out_f, theorem_sets)
from .groups import sylow
from .lam import (kunneth_combine, lambda_bar_oracle, lambda_closed_form_sylow_p, lambda_poset,
                  lambda_zero_law, vanishing_preflight, wreath_shift)
from .linking import (canonical_linking, check_axioms, extend_weak, iso_of_extensions,
                      random_lift_triples, restrict_objects, unique_lift, weaken)

EX2_GROUP = "semidirect(tensor(natural(2),natural(2),natural(2)), prod(Sym(3),Sym(3),Sym(3)))"
EX2_MODULE = "tensor(natural(2),natural(2),natural(2))"


@dataclass
class Row:
    id: str
    name: str
    expected: object
    actual: object
    passed: bool
    seconds: float
    limit: float
    required: bool = True
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        opt = "" if self.required else " (stretch)"
        return (f"[{tag}] criterion {self.id}{opt}: {self.name} | expected {self.expected} | "
                f"actual {self.actual} | {self.seconds:.1f}s / {self.limit:.0f}s")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["seconds"] = round(self.seconds, 3)
        return d


class Workspace:
    """Caches the expensive shared objects (the ex2 context and its sets)."""

    def __init__(self):
        self._fc: FusionContext | None = None
        self._sets = None

    def ex2(self) -> FusionContext:
        if self._fc is None:
            self._fc = fusion_context(EX2_GROUP, module_spec=EX2_MODULE)
        return self._fc

    def ex2_sets(self):
        if self._sets is None:
            self._sets = theorem_sets(self.ex2())
        return self._sets


def _pair(group: str, module: str):
    G = build_group(group)
    return G, build_module(module, G)


def _row(cid: str, name: str, limit: float, fn: Callable[[], tuple], required: bool = True) -> Row:
    t0 = time.perf_counter()
    expected, actual, ok, details = fn()
    dt = time.perf_counter() - t0
    return Row(cid, name, expected, actual, bool(ok) and dt <= limit, dt, limit, required, details)


# ---------------------------------------------------------------------------

def criterion_1(ws: Workspace) -> Row:
    def run():
        G, V = _pair("Sym(3)", "natural(2)")
        bar = lambda_bar_oracle(G, V, 2).dims
        pos = lambda_poset(G, V, 2).dims
        ok1 = bar == pos == [0, 1, 0]
        return [0, 1, 0], {"bar": bar, "poset": pos}, ok1, {}

    r = _row("1a", "Lambda^*(Sym(3); V) at p=2, both backends", 5, run)

    def run3():
        G, V = _pair("Sym(4)", "natural(3)")
        pos = lambda_poset(G, V, 3).dims
        cf = lambda_closed_form_sylow_p(G, V, 3).dims
        return 1, {"poset": pos[1], "closed_form": cf[1]}, pos[1] == cf[1] == 1, {
            "poset_dims": pos, "closed_form_dims": cf}

    r3 = _row("1b", "Lambda^1(Sym(4); natural(3)) at p=3", 60, run3)
    return _merge("1", "base case", [r, r3])


def _merge(cid: str, name: str, rows: list[Row]) -> Row:
    return Row(cid, name, [r.expected for r in rows], [r.actual for r in rows],
               all(r.passed for r in rows), sum(r.seconds for r in rows),
               sum(r.limit for r in rows), rows[0].required,
               {"parts": [r.as_dict() for r in rows]})


def criterion_2(ws: Workspace) -> Row:
    def run():
        G, V = _pair("Sym(3)", "natural(2)")
        base = lambda_poset(G, V, 2).dims
        G2, V2 = _pair("prod(Sym(3),Sym(3))", "tensor(natural(2),natural(2))")
        got = lambda_poset(G2, V2, 2).dims
        want = kunneth_combine(base, base, 2)
        return want, got, got == want == [0, 0, 1], {}

    return _row("2", "Kunneth: Lambda^*(Sym(3)^2; V(x)V)", 120, run)


def criterion_3(ws: Workspace) -> Row:
    def run():
        G, M = _pair("prod(Sym(3),Sym(3),Sym(3))", EX2_MODULE)
        res = lambda_poset(G, M, 3)
        return 1, res.dims[3], res.dims[3] == 1, {"dims": res.dims}

    return _row("3", "Lambda^3(Sym(3)^3; V(x)V(x)V)", 600, run)


def criterion_4(ws: Workspace) -> Row:
    def run():
        G, V = _pair("Sym(3)", "natural(2)")
        base = lambda_poset(G, V, 2).dims
        W, V2 = _pair("wreath(Sym(3),2)", "power(natural(2),2)")
        got = lambda_poset(W, V2, 3).dims
        want = wreath_shift(G, 2, base)
        return want[1:4], got[1:4], got[1:4] == want[1:4], {"wreath_dims": got, "base_dims": base}

    return _row("4", "wreath shift: Lambda^i(Sym(3) wr C2; V^2) = Lambda^(i-1)(Sym(3); V)", 300, run)


# (group, module, i_max, run the bar oracle too)
BATTERY = [
    ("Sym(3)", "natural(2)", 2, True),
    ("Sym(3)", "trivial(2,1)", 2, True),
    ("C(2)", "trivial(2,1)", 2, True),
    ("C(3)", "trivial(2,1)", 2, True),
    ("prod(C(2),C(2))", "trivial(2,2)", 2, True),
    ("prod(Sym(3),C(2))", "tensor(natural(2),trivial(2,1))", 2, True),
    ("Sym(4)", "natural(2,4)", 2, True),
    ("Sym(4)", "natural(3)", 2, True),
    ("Sym(3)", "natural(3,3)", 2, True),
    ("Sym(6)", "natural(5)", 2, False),
    ("Sym(5)", "natural(2,5)", 2, False),
    ("prod(Sym(3),Sym(3))", "tensor(natural(2),natural(2))", 3, False),
]


def battery_case(group: str, module: str, i_max: int, with_bar: bool) -> dict:
    """Run every property of the battery on one (Gamma, M) pair."""
    G, M = _pair(group, module)
    p = M.p
    dims = lambda_poset(G, M, i_max).dims
    out = {"group": group, "module": module, "prime": p, "dims": dims, "checks": {}}
    checks = out["checks"]
    if with_bar:
        bar = lambda_bar_oracle(G, M, i_max).dims
        out["bar_dims"] = bar
        checks["backends_agree"] = bar == dims
    checks["lambda0_law"] = dims[0] == lambda_zero_law(G, M)
    cert = vanishing_preflight(G, M)
    out["certificate"] = cert
    if cert is not None:
        checks["certificate_confirmed"] = all(d == 0 for d in dims)
    if sylow(G, p).order == p:
        cf = lambda_closed_form_sylow_p(G, M, i_max).dims
        out["closed_form"] = cf
        checks["closed_form_matches"] = cf == dims
    checks["dimension_bound"] = all(d == 0 or M.dim >= p ** k for k, d in enumerate(dims))
    out["pass"] = all(checks.values())
    return out


def criterion_5(ws: Workspace) -> Row:
    def run():
        cases = [battery_case(*c) for c in BATTERY]
        failed = [f"{c['group']}/{c['module']}" for c in cases if not c["pass"]]
        kinds = {k for c in cases for k in c["checks"]}
        ok = not failed and len(cases) >= 8 and {"lambda0_law", "certificate_confirmed",
                                                  "closed_form_matches", "dimension_bound"} <= kinds
        return "all properties hold", ("all properties hold" if ok else f"failures: {failed}"), ok, {
            "cases": cases}

    return _row("5", f"property battery over {len(BATTERY)} pairs", 300, run)


def criterion_6(ws: Workspace) -> Row:
    def run():
        fc = ws.ex2()
        sets = ws.ex2_sets()
        data = out_f(fc, fc.M)
        local = class_local_lambda(fc, fc.M, 3, data=data).dims
        G, M = _pair("prod(Sym(3),Sym(3),Sym(3))", EX2_MODULE)
        direct = lambda_poset(G, M, 3).dims
        report = classify_linking_systems(fc, sets=sets)
        actual = {"|G|": fc.G.order, "|X|": len(sets.X), "checks": sets.ok,
                  "|Out_F(M)|": data.out_order, "class_local": local,
                  "x_classes": report["x_classes"], "y_classes": report["y_classes"]}
        expected = {"|G|": 55296, "|X|": 16, "checks": True, "|Out_F(M)|": 216,
                    "class_local": direct, "x_classes": 1, "y_classes": 2}
        return expected, actual, actual == expected and direct[3] == 1, {"report": report}

    return _row("6", "theorem pipeline for (V(x)V(x)V) x| Sym(3)^3", 900, run)


def linking_properties(fc: FusionContext, objects=None, restrict_to=None, lifts: int = 1000,
                       extensions: str = "full", seed: int = 0) -> dict:
    """Axioms, counting, unique lifts, round trip and Theta for one canonical system.

    ``extensions`` is "full" (round trip and Theta over every delta),
    "axioms" (both extensions pass the axioms) or "none".
    """
    import random

    L = canonical_linking(fc, objects)
    if restrict_to is not None:
        L = restrict_objects(L, restrict_to)
    out: dict = {"objects": len(L.objects), "morphisms": L.core.n_morphisms()}
    rep = check_axioms(L, seed=seed)
    out["axioms"] = rep["pass"]
    out["axiom_report"] = rep
    out["counting"] = rep["A_counting"]["pass"]
    trips = random_lift_triples(L, lifts, seed=seed)
    out["unique_lift"] = all(unique_lift(L, a, b, c) == d for a, b, c, d in trips)
    if extensions == "none":
        return out
    W = weaken(L)
    out["weak_axioms"] = check_axioms(W, seed=seed)["pass"]
    n, s = len(L.objects), L.top
    core = L.core
    iota = {i: L.inclusion(i).key for i in range(n)}
    E = extend_weak(W, iota)
    rng = random.Random(seed)
    z = {}
    iota2 = {}
    for i, P in enumerate(L.objects):
        zs = fc.centralizer_in_s(P).elements
        z[i] = fc.G.identity if i == s else rng.choice(zs)
        iota2[i] = core.compose(i, i, s, iota[i], W.delta_obj(i, z[i]))
    E2 = extend_weak(W, iota2)
    pairs = [(i, j) for i in range(n) for j in range(n)]
    ts = {(i, j): fc.transporter_in_s(L.objects[i], L.objects[j]) for i, j in pairs}
    if extensions == "axioms":
        out["extension_axioms"] = check_axioms(E, seed=seed)["pass"] and \
            check_axioms(E2, seed=seed)["pass"]
        return out
    out["round_trip"] = all(E.delta_key(i, j, g) == L.delta_key(i, j, g)
                            for i, j in pairs for g in ts[(i, j)])
    out["extension_axioms"] = check_axioms(E2, seed=seed)["pass"]
    theta = iso_of_extensions(E, E2)
    out["theta_z_matches"] = theta.z == z
    out["theta_delta"] = all(theta(E2.delta(i, j, g)) == E.delta(i, j, g)
                             for i, j in pairs for g in ts[(i, j)])
    # Theta commutes with pi and composition, and is a bijection on each hom-set
    ok_pi = ok_comp = ok_bij = True
    for i, j in pairs:
        mors = L.morphisms(i, j)
        images = {theta(f) for f in mors}
        ok_bij &= len(images) == len(mors)
        for f in mors:
            ok_pi &= L.pi(theta(f)) == L.pi(f)
            for k in range(n):
                for g in L.morphisms(j, k):
                    ok_comp &= theta(L.compose(g, f)) == L.compose(theta(g), theta(f))
    out["theta_functor"] = ok_pi and ok_comp and ok_bij
    return out


_LINKING_KEYS = ["axioms", "counting", "unique_lift", "weak_axioms", "round_trip",
                 "extension_axioms", "theta_z_matches", "theta_delta", "theta_functor"]


def criterion_7(ws: Workspace) -> Row:
    def run():
        from .groups import symmetric_group

        fc4 = FusionContext(symmetric_group(4), 2, group_spec="Sym(4)")
        s4 = linking_properties(fc4)
        fc = ws.ex2()
        sets = ws.ex2_sets()
        ey = linking_properties(fc, objects=sets.X, restrict_to=sets.Y, extensions="axioms")
        actual = {"Sym(4)": {k: s4[k] for k in _LINKING_KEYS},
                  "ex2_Y": {k: ey[k] for k in ("axioms", "counting", "unique_lift",
                                               "weak_axioms", "extension_axioms")}}
        ok = all(actual["Sym(4)"].values()) and all(actual["ex2_Y"].values())
        details = {"Sym(4)_report": s4["axiom_report"], "ex2_Y_report": ey["axiom_report"],
                   "ex2_Y_morphisms": ey["morphisms"]}
        return "all properties hold", "all properties hold" if ok else actual, ok, details

    return _row("7", "linking systems: axioms, counting, lifts, extensions", 600, run)


def criterion_8a(ws: Workspace) -> Row:
    def run():
        G, M = _pair("wreath(wreath(Sym(3),2),2)", "power(power(natural(2),2),2)")
        res = lambda_poset(G, M, 3)
        return 1, res.dims[3], res.dims[3] == 1, {"dims": res.dims}

    return _row("8a", "Lambda^3(Sym(3) wr C2 wr C2; V^4)", 7200, run, required=False)


def criterion_8b(ws: Workspace) -> Row:
    def run():
        fc = ws.ex2()
        sets = ws.ex2_sets()
        y = lim_z_direct(fc, sets.Y, 3)
        x = lim_z_direct(fc, sets.X, 3)
        # the bar complex is affordable up to degree 1 and must agree there
        y_bar = lim_z_direct(fc, sets.Y, 1, method="bar")
        actual = {"Y": y, "X": x, "Y_bar_low": y_bar}
        expected = {"Y": [0, 0, 1, 0], "X": [0, 0, 0, 0], "Y_bar_low": [0, 0]}
        return expected, actual, actual == expected, {}

    return _row("8b", "lim^i of Z over O(F^Y) and O(F^X) for ex2", 7200, run, required=False)


REQUIRED = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7]
STRETCH = [criterion_8a, criterion_8b]


def run_all(include_stretch: bool = False, echo: Callable[[str], None] | None = None,
            only: set | None = None) -> list[Row]:
    ws = Workspace()
    rows = []
    for fn in REQUIRED + (STRETCH if include_stretch else []):
        cid = fn.__name__.split("_")[1]
        if only is not None and cid not in only:
            continue
        row = fn(ws)
        rows.append(row)
        if echo is not None:
            echo(row.line())
    return rows
