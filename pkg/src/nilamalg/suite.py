"""The acceptance battery: one function per criterion.

Each criterion returns a :class:`CriterionResult`; ``run_suite`` runs them in
order.  Both the ``paper-suite`` command and tests/test_acceptance.py use it.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import catalog, oracles
from .constructions import (
    BaseCounterexample,
    IsBase,
    WitnessExtension,
    check_exponent,
    find_witness,
    random_overgroup,
)
from .dominion import (
    BPN,
    N2,
    dominion,
    dominion_closure_chain,
    dominion_oracle,
    is_absolutely_closed,
    is_amalgamation_base,
    n2_levels_stabilize,
)
from .even import even_amalgam_condition, even_weak_base_condition
from .fpgroup import FpGroup, Morphism, lift_variety, omega_subgroup
from .nil2 import FreeNil2, VarietyParams
from .products import (
    Amalgam,
    coproduct,
    is_strongly_embeddable,
    is_weakly_embeddable,
    maier_strong_check,
)
from .constructions import witness_not_base


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:>2}: {self.title} ({self.seconds:.2f}s)"


@dataclass
class SuiteConfig:
    seed: int = 0
    identity_samples: int = 1000
    random_amalgams: int = 20
    runtime_limit_cant: float = 30.0
    gate_limit: float = 5.0


def _lifted(spec: str, n: int) -> FpGroup:
    G = catalog.group(spec)
    return G if G.params.n == n else lift_variety(G, n, f"{G.name}@{n}")


# 1


def identities(cfg: SuiteConfig) -> tuple[bool, dict]:
    rng = random.Random(cfg.seed)
    F = FreeNil2(3, VarietyParams(3, 2))
    qg, qc = F.params.q_gen, F.params.q_comm

    def rnd():
        return F.element([rng.randrange(qg) for _ in range(F.k)], [rng.randrange(qc) for _ in range(F.ncomm)])

    def rnd_comm():
        return F.element([0] * F.k, [rng.randrange(qc) for _ in range(F.ncomm)])

    failures = []
    e = F.identity
    for t in range(cfg.identity_samples):
        x, y, z = rnd(), rnd(), rnd()
        m = rng.randint(-20, 20)
        checks = {
            "assoc": (x * y) * z == x * (y * z),
            "identity": x * e == x == e * x,
            "inverse": (x * x.inverse()).is_identity() and x ** -1 == x.inverse(),
            "comm def": x.commutator(y) == x.inverse() * y.inverse() * x * y,
            "a left": (x * y).commutator(z) == x.commutator(z) * y.commutator(z),
            "a right": x.commutator(y * z) == x.commutator(y) * x.commutator(z),
            "b": (x**m).commutator(y) == x.commutator(y) ** m == x.commutator(y**m),
            "c": (x * y) ** m == x**m * y**m * y.commutator(x) ** (m * (m - 1) // 2),
            "d": (x * rnd_comm()).commutator(y * rnd_comm()) == x.commutator(y),
            "exponent": (x**qg).is_identity(),
        }
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            failures.append({"sample": t, "failed": bad})
    mism = oracles.compare_with_rewriting(3)
    detail = {"samples": cfg.identity_samples, "identity_failures": failures[:5], "rewriting_mismatches": len(mism),
              "products_compared": 27 * 27}
    return not failures and not mism, detail


# 2

MACHENRY_PAIRS = [
    ("cyclic(3)", "cyclic(3)", 27),
    ("free(1,3,2)", "free(1,3,2)", 729),
    ("cyclic(3)", "abelian(3,3)", None),
    ("abelian(3,3)", "heisenberg(3)", None),
    ("heisenberg(3)", "heisenberg(3)", None),
    ("cant(3,1)", "higgins(3)", None),
    ("free(2,3,1)", "cyclic(3)", None),
    ("cyclic(9)", "abelian(9,3)", None),
    ("abelian(9,3)", "cant(3,2)", None),
    ("cant(3,2)", "cyclic(9)", None),
    ("abelian(9,9)", "cyclic(9)", None),
    ("free(2,3,2)", "cyclic(9)", None),
]


def machenry(cfg: SuiteConfig) -> tuple[bool, dict]:
    rows, ok = [], True
    for sa, sc, want in MACHENRY_PAIRS:
        A, C = catalog.group(sa), catalog.group(sc)
        try:
            res = coproduct(A, C)
        except AssertionError as exc:
            rows.append({"pair": [sa, sc], "error": str(exc)})
            ok = False
            continue
        order = res.group.order()
        row = {"pair": [sa, sc], "order": order, "tensor": res.tensor}
        good = order == A.order() * C.order() * _prod(res.tensor)
        if want is not None:
            good &= order == want
        if order <= 3**8:
            bfs = oracles.bfs_order(res.group)
            row["bfs_order"] = bfs
            good &= bfs == order
        row["ok"] = good
        ok &= good
        rows.append(row)
    return ok and len(rows) >= 10, {"pairs": rows}


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


# 3

DOMINION_PAIRS = [
    ("free(2,3,2)", "a^3,b^3"),
    ("free(2,3,2)", "a^3"),
    ("free(2,3,2)", "a,b^3"),
    ("free(2,3,2)", "a^3*b^3"),
    ("free(2,3,2)", "a^3,b^3*[a,b]"),
    ("cant(3,2)", "x^3,y^3"),
    ("cant(3,2)", "x^3"),
    ("abelian(9,9)", "a^3,b^3"),
    ("heisenberg(3)", "x"),
    ("free(2,3,3)", "a^3,b^3"),
    ("free(2,3,3)", "a^9,b^3"),
]


def dominion_equivalence(cfg: SuiteConfig) -> tuple[bool, dict]:
    rows, ok = [], True
    for spec, gens in DOMINION_PAIRS:
        K = catalog.group(spec)
        G = catalog.subgroup_of(K, gens)
        D = dominion(K, G).subgroup
        O = dominion_oracle(K, G)
        same = D == O
        ok &= same
        rows.append({"K": spec, "G": gens, "G_order": G.order(), "dominion": D.order(), "oracle": O.order(), "ok": same})
    K = catalog.group("free(2,3,2)")
    G = catalog.subgroup_of(K, "a^3,b^3")
    d = catalog.subgroup_of(K, "[a,b]^3").gens[0]
    res = dominion(K, G)
    cert = d in res.subgroup and d not in G and any(c[3] == d for c in res.certificates)
    return ok and cert and len(rows) >= 8, {"pairs": rows, "certificate_[a,b]^3": cert}


# 4


def cant_witness(n: int) -> dict:
    """cant(3,n) inside F(2,3,n+1) by x -> a^3, y -> b^3; [a,b]^3 is dominated but not in the image."""
    G = _lifted(f"cant(3,{n})", n + 1)
    K = catalog.group(f"free(2,3,{n + 1})")
    a, b = K.gens()
    iota = Morphism(G, K, [a**3, b**3])
    image = iota.image_subgroup()
    d = a.commutator(b) ** 3
    dom = dominion(K, image).subgroup
    return {
        "group": G.name,
        "overgroup": K.name,
        "injective": iota.is_injective(),
        "d": "[a,b]^3",
        "d_in_dominion": d in dom,
        "d_in_image": d in image,
    }


def cant_group(cfg: SuiteConfig) -> tuple[bool, dict]:
    t = time.perf_counter()
    out, ok = {}, True
    for n in (1, 2):
        own = is_absolutely_closed(catalog.group(f"cant(3,{n})"), BPN).closed
        up = is_absolutely_closed(_lifted(f"cant(3,{n})", n + 1), BPN)
        w = cant_witness(n)
        good = own and not up.closed and w["injective"] and w["d_in_dominion"] and not w["d_in_image"]
        ok &= good
        out[f"cant(3,{n})"] = {
            f"closed_in_B{3**n}": own,
            f"closed_in_B{3**(n + 1)}": up.closed,
            "failure": up.failures[0].as_dict() if up.failures else None,
            "witness": w,
        }
    out["seconds"] = round(time.perf_counter() - t, 3)
    return ok and out["seconds"] <= cfg.runtime_limit_cant, out


# 5

ABELIAN_CASES = [("cyclic(9)", 2), ("abelian(9,3)", 2), ("abelian(9,9)", 2), ("cyclic(3)", 2),
                 ("abelian(3,3)", 2), ("abelian(3,3,3)", 2), ("abelian(3,3)", 3)]
EXPONENT_P_CASES = ["cyclic(3)", "abelian(3,3)", "abelian(3,3,3)", "heisenberg(3)", "cant(3,1)",
                    "higgins(3)", "free(2,3,1)", "free(3,3,1)"]


def easy_cases(cfg: SuiteConfig) -> tuple[bool, dict]:
    rows, ok = [], True
    for spec, n in ABELIAN_CASES:
        G = _lifted(spec, n)
        got = is_absolutely_closed(G, BPN).closed
        want = oracles.g_mod_pg_cyclic(G)
        ok &= got == want
        rows.append({"group": spec, "n": n, "rule": "G/pG cyclic", "closed": got, "predicate": want})
    for spec in EXPONENT_P_CASES:
        G = catalog.group(spec)
        want = oracles.center_mod_derived_cyclic(G)
        in_b3 = is_absolutely_closed(G, BPN).closed
        got_n2 = is_absolutely_closed(G, N2).closed
        got_b9 = is_absolutely_closed(_lifted(spec, 2), BPN).closed
        good = in_b3 and got_n2 == want and got_b9 == want
        ok &= good
        rows.append({"group": spec, "rule": "Z/G' cyclic", "closed_B3": in_b3, "closed_N2": got_n2,
                     "closed_B9": got_b9, "predicate": want})
    return ok, {"cases": rows}


# 6


def higgins(cfg: SuiteConfig) -> tuple[bool, dict]:
    H = catalog.group("higgins(3)")
    Q, _ = H.quotient([w for w in _commutator_words(H)], "higgins_ab")
    inv = Q.abelianization()
    out = {
        "higgins_N2": is_absolutely_closed(H, N2).closed,
        "higgins_B9": is_absolutely_closed(lift_variety(H, 2), BPN).closed,
        "abelianization": inv,
        "ab_N2": is_absolutely_closed(Q, N2).closed,
        "ab_B9": is_absolutely_closed(lift_variety(Q, 2), BPN).closed,
    }
    ok = out["higgins_N2"] and out["higgins_B9"] and inv == [3, 3, 3] and Q.is_abelian()
    ok &= not out["ab_N2"] and not out["ab_B9"]
    return ok, out


def _commutator_words(G: FpGroup):
    from . import words as W

    return [W.Commutator(W.Gen(j), W.Gen(i)) for j, i in G.free.pairs]


# 7

CHAIN_PAIRS = [
    ("free(2,3,2)", "a^3,b^3"),
    ("free(2,3,3)", "a^3,b^3"),
    ("free(2,3,3)", "a^3,b^9"),
    ("free(2,3,3)", "a^9,b^9"),
    ("cant(3,3)", "x^3,y^3"),
    ("free(3,3,2)", "a^3,b^3,c"),
]


def no_absolute_closures(cfg: SuiteConfig) -> tuple[bool, dict]:
    rows, ok = [], True
    for spec, gens in CHAIN_PAIRS:
        K = catalog.group(spec)
        G = catalog.subgroup_of(K, gens)
        Gg, _ = G.as_group(name="G")
        g_closed = is_absolutely_closed(Gg, BPN).closed
        res, rep = dominion_closure_chain(K, G)
        good = not g_closed and not res.trivial and not rep.closed
        ok &= good
        rows.append({"K": spec, "G": gens, "G_order": G.order(), "D_order": res.subgroup.order(),
                     "G_closed": g_closed, "D_closed": rep.closed, "ok": good})
    return ok and len(rows) >= 5, {"pairs": rows}


# 8


def bases(cfg: SuiteConfig) -> tuple[bool, dict]:
    rows, ok = [], True
    for spec in catalog.ODD_CATALOG:
        G = catalog.group(spec)
        verdict = is_amalgamation_base(G)
        outcome = witness_not_base(G)
        row = {"group": spec, "base": verdict.base}
        if not verdict.base:
            good = isinstance(outcome, BaseCounterexample)
            if good:
                # recheck from scratch rather than trusting the stored decision
                am = outcome.amalgam
                good = not is_weakly_embeddable(Amalgam(am.A, am.C, am.B, am.phi_A, am.phi_C)).embeddable
                row["counterexample"] = outcome.summary()
        else:
            good = isinstance(outcome, IsBase)
            rng = random.Random(f"{cfg.seed}:{spec}")
            agree = 0
            for _ in range(cfg.random_amalgams):
                K1, i1 = random_overgroup(G, rng)
                K2, i2 = random_overgroup(G, rng)
                am = Amalgam(K1, K2, G, i1, i2)
                s = is_strongly_embeddable(am).embeddable
                m = maier_strong_check(am).holds
                if s and m:
                    agree += 1
                else:
                    good = False
            row["random_amalgams_passed"] = agree
        row["ok"] = good
        ok &= good
        rows.append(row)
    return ok, {"groups": rows}


# 9

WITNESS_CASES = [("abelian(9,3)", 2), ("abelian(9,9)", 2), ("abelian(3,3)", 2), ("cant(3,2)", 3)]


def witness_soundness(cfg: SuiteConfig) -> tuple[bool, dict]:
    rows, ok = [], True
    for spec, n in WITNESS_CASES:
        G = _lifted(spec, n)
        wit = find_witness(G)
        if not isinstance(wit, WitnessExtension):
            ok = False
            rows.append({"group": spec, "n": n, "error": "no witness"})
            continue
        K, p = wit.K, G.params.p
        gen_orders = max(g.order() for g in K.gens())
        exp_ok = check_exponent(K, seed=cfg.seed) and (p**n) % gen_orders == 0 and K.params.n == n
        image = wit.iota.image_subgroup()
        row = {
            "group": spec,
            "n": n,
            "overgroup_order": K.order(),
            "exponent_ok": exp_ok,
            "injective": wit.iota.is_injective(),
            "d_in_dominion": wit.d in dominion(K, image).subgroup,
            "d_in_image": wit.d in image,
            "keylemma_instances": wit.keylemma_instances,
        }
        good = exp_ok and row["injective"] and row["d_in_dominion"] and not row["d_in_image"]
        good &= wit.keylemma_instances > 0
        row["ok"] = good
        ok &= good
        rows.append(row)
    return ok, {"witnesses": rows}


# 10


def even_exponent(cfg: SuiteConfig) -> tuple[bool, dict]:
    G = catalog.group("e4")
    elems = list(G.elements())
    Z = G.center()
    om = omega_subgroup(G, 1, Z)
    P = G.power_subgroup(2)
    cond = even_amalgam_condition(G)
    weak = even_weak_base_condition(G)
    brute_Z = oracles.brute_center(G)
    out = {
        "order": len(elems),
        "bfs_order": oracles.bfs_order(G),
        "omega_order": om.order(),
        "power_order": P.order(),
        "amalgam_condition": cond.holds,
        "center_order": Z.order(),
        "brute_center_order": len(brute_Z),
        "derived_order": G.derived_subgroup().order(),
        "weak_base_condition": weak.holds,
    }
    ok = out["order"] == 64 == out["bfs_order"] and out["omega_order"] == 8 == out["power_order"]
    ok &= om == P and cond.holds and Z.order() == len(brute_Z) and Z != G.derived_subgroup()
    ok &= not weak.holds
    return ok, out


# 11


def gates(cfg: SuiteConfig) -> tuple[bool, dict]:
    out, ok = {}, True
    t = time.perf_counter()
    bad = oracles.compare_linalg(80, cfg.seed)
    out["linalg"] = {"mismatches": len(bad), "seconds": round(time.perf_counter() - t, 3)}
    ok &= not bad and out["linalg"]["seconds"] < cfg.gate_limit
    t = time.perf_counter()
    stab = {spec: n2_levels_stabilize(catalog.group(spec)) for spec in catalog.ODD_CATALOG}
    out["stabilization"] = {"groups": stab, "seconds": round(time.perf_counter() - t, 3)}
    ok &= all(stab.values()) and out["stabilization"]["seconds"] < cfg.gate_limit
    t = time.perf_counter()
    table = oracles.rewriting_table(3)
    is_group = oracles.table_is_group(table)
    mism = oracles.compare_with_rewriting(3)
    out["cayley"] = {"is_group": is_group, "mismatches": len(mism), "seconds": round(time.perf_counter() - t, 3)}
    ok &= is_group and not mism and out["cayley"]["seconds"] < cfg.gate_limit
    return ok, out


CRITERIA: list[tuple[int, str, Callable[[SuiteConfig], tuple[bool, dict]]]] = [
    (1, "nil-2 identities and rewriting agreement", identities),
    (2, "MacHenry coproduct orders", machenry),
    (3, "dominion equals amalgam oracle", dominion_equivalence),
    (4, "cant groups: closed in own exponent, not one level up", cant_group),
    (5, "easy cases match center/derived predicates", easy_cases),
    (6, "closed group with non-closed abelianization", higgins),
    (7, "dominions of non-closed groups are not closed", no_absolute_closures),
    (8, "base verdicts matched by constructions", bases),
    (9, "witness extensions are sound", witness_soundness),
    (10, "exponent-4 example", even_exponent),
    (11, "oracle gates", gates),
]


def run_criterion(number: int, cfg: Optional[SuiteConfig] = None) -> CriterionResult:
    cfg = cfg or SuiteConfig()
    for num, title, fn in CRITERIA:
        if num == number:
            t = time.perf_counter()
            try:
                passed, detail = fn(cfg)
            except Exception as exc:  # a crash is a failed criterion, reported as such
                passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
            return CriterionResult(num, title, bool(passed), detail, time.perf_counter() - t)
    raise KeyError(f"no criterion {number}")


def run_suite(numbers=None, cfg: Optional[SuiteConfig] = None, order_seed: Optional[int] = None) -> list[CriterionResult]:
    nums = [c[0] for c in CRITERIA] if numbers is None else list(numbers)
    if order_seed is not None:
        random.Random(order_seed).shuffle(nums)
    results = [run_criterion(k, cfg) for k in nums]
    return sorted(results, key=lambda r: r.number)
