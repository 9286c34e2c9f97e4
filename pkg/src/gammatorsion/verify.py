"""Named verification suites.  Each check is exact; the JSON form of a suite run
is deterministic (no timings, fixed iteration and RNG seeds)."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .charmap import (delta, dynkin_index, dynkin_index_group, dynkin_index_short, f3, fundamental_indices,
                      orbit_dynkin_index, phi, phi_orbit, short_coroot_factor)
from .gammafilt import (RankBoundError, gamma2_torsion, gamma3_torsion, in_tits_kernel, iprime_images,
                        product_torsion, steinberg_pair_identity, steinberg_rho, theta_rational_certificate)
from .groupring import GroupRingElement, augmentation, is_invariant, orbit_sum
from .intlat import FinAbGroup
from .rootsys import (DEFAULT_ORBIT_CEILING, RootDatum, fundamental_group, invariant_form_q, orbit_array,
                      parse_type, product_datum, roots, weyl_group_order)
from .symtrunc import TruncatedPolynomial, graded_part

# Published values of N(G) for the split simply connected group.
DYNKIN_TABLE = {
    **{f"A{n}": 1 for n in range(1, 9)},
    **{f"C{n}": 1 for n in range(2, 5)},
    **{f"B{n}": 2 for n in range(3, 6)},
    **{f"D{n}": 2 for n in range(4, 7)},
    "G2": 2, "F4": 6, "E6": 6, "E7": 12, "E8": 60,
}

MAINCOMP_EXHAUSTIVE = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D3", "D4", "G2", "F4"]
MAINCOMP_RANDOM = ["B5", "D5", "E6"]
RANK6_TYPES = ([f"A{n}" for n in range(1, 7)] + [f"B{n}" for n in range(2, 7)]
               + [f"C{n}" for n in range(2, 7)] + ["D4", "D5", "D6", "G2", "F4", "E6"])
GAMMA3_TYPES = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2", "F4"]
RANK5_TYPES = ([f"A{n}" for n in range(1, 6)] + [f"B{n}" for n in range(2, 6)]
               + [f"C{n}" for n in range(2, 6)] + ["D4", "D5", "G2", "F4"])
LONGROOT_TYPES = ["B3", "C3", "F4", "G2"]
STEINBERG_TYPES = ["A2", "B2", "G2", "A3"]
RATIONAL_EVEN = ["B3", "C2", "C3", "C4", "D4", "D5", "D6", "E7"]
RATIONAL_ODD = ["A2", "A4", "A6", "E6", "E8", "F4", "G2"]
KUNNETH_SINGLE = ["A2", "B3", "D4", "G2", "F4"]


@dataclass
class Check:
    suite: str
    name: str
    statement: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  [{self.suite}] {self.name}: {self.statement}"


def _q_multiple(p: TruncatedPolynomial, q: TruncatedPolynomial) -> int | None:
    """k with p == k q, or None."""
    if not p.terms:
        return 0
    e, c = next(iter(q.terms.items()))
    k, r = divmod(p.coefficient(e), c)
    if r or p != q * k:
        return None
    return k


def weyl_sum(d: RootDatum, lam, ceiling: int = DEFAULT_ORBIT_CEILING) -> GroupRingElement:
    """sum over w in W of e^{w lam}: the orbit sum times the stabilizer order."""
    s = orbit_sum(d, lam, ceiling)
    return s * (weyl_group_order(d) // len(s))


def suite_table(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name, expected in DYNKIN_TABLE.items():
        d = parse_type(name)
        got = dynkin_index_group(d, ceiling, threads)
        out.append(Check("table", name, "N(G) matches the Dynkin index table", got == expected,
                         {"expected": expected, "computed": got,
                          "fundamental": fundamental_indices(d, ceiling, threads)}))
    return out


def suite_gamma2(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name, expected in DYNKIN_TABLE.items():
        d = parse_type(name)
        rep = gamma2_torsion(d, ceiling, threads)
        want = FinAbGroup.from_cyclic([expected])
        ok = rep.torsion == want and rep.theta_order == expected
        out.append(Check("gamma2", name, "Tors gamma^{2/3} is cyclic of order N(G), generated by theta", ok,
                         {"invariant_factors": list(rep.torsion.invariant_factors),
                          "free_rank": rep.group.free_rank, "theta_order": rep.theta_order,
                          "expected_order": expected}))
    return out


def _maincomp_one(d: RootDatum, lam, q, ceiling) -> tuple[bool, int, int]:
    p = phi_orbit(d, lam, 2, ceiling)
    size = len(orbit_array(d, lam, ceiling))
    n = orbit_dynkin_index(d, lam, ceiling)
    return p == q * n + size, size, n


def suite_maincomp(ceiling=DEFAULT_ORBIT_CEILING, threads=1, random_count: int = 50) -> list[Check]:
    out = []
    for name in MAINCOMP_EXHAUSTIVE:
        d = parse_type(name)
        q = invariant_form_q(d).with_cap(2)
        lams = list(itertools.product(range(3), repeat=d.rank))
        fails = [lam for lam in lams if not _maincomp_one(d, lam, q, ceiling)[0]]
        out.append(Check("maincomp", name, "phi_2(W e^lam) = |W lam| + N q, lam in {0,1,2}^n", not fails,
                         {"weights": len(lams), "failures": [list(x) for x in fails]}))
    for name in MAINCOMP_RANDOM:
        d = parse_type(name)
        q = invariant_form_q(d).with_cap(2)
        rng = random.Random(f"maincomp-{name}")
        lams = [tuple(rng.randrange(3) for _ in range(d.rank)) for _ in range(random_count)]
        fails = [lam for lam in lams if not _maincomp_one(d, lam, q, ceiling)[0]]
        out.append(Check("maincomp", name, f"phi_2(W e^lam) = |W lam| + N q, {random_count} random lam",
                         not fails, {"weights": len(lams), "failures": [list(x) for x in fails]}))
    return out


def suite_iprime(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name in RANK6_TYPES:
        d = parse_type(name)
        q = invariant_form_q(d).with_cap(2)
        mults = []
        ok = True
        for p in iprime_images(d, 2, 1, ceiling, threads):
            k = _q_multiple(graded_part(p, 2), q)
            low_zero = not graded_part(p, 0).terms and not graded_part(p, 1).terms
            if k is None or not low_zero:
                ok = False
            else:
                mults.append(k)
        content = math.gcd(*mults) if mults else 0
        expected = dynkin_index_group(d, ceiling, threads)
        out.append(Check("iprime", name, "phi_2(I') = Z N(G) q", ok and content == expected,
                         {"content": content, "expected": expected}))
    return out


def suite_examples(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    a1 = parse_type("A1")
    fails = []
    for n in range(1, 11):
        x = GroupRingElement.exp((n,)) + GroupRingElement.exp((-n,))
        want = TruncatedPolynomial(1, 2, {(0,): 2, (2,): n * n})
        if phi(x, 2) != want:
            fails.append(n)
    out.append(Check("examples", "A1", "phi_2(e^{n w} + e^{-n w}) = 2 + n^2 w^2, n = 1..10", not fails,
                     {"failures": fails}))
    d = product_datum(a1, a1)
    fails = []
    for a, b in itertools.product(range(-3, 4), repeat=2):
        want = TruncatedPolynomial(2, 2, {(0, 0): 4, (2, 0): 2 * a * a, (0, 2): 2 * b * b})
        if phi(weyl_sum(d, (a, b), ceiling), 2) != want:
            fails.append([a, b])
    out.append(Check("examples", "A1xA1", "phi_2(W e^{a1 w1 + a2 w2}) = 4 + 2(a1^2 w1^2 + a2^2 w2^2)",
                     not fails, {"pairs": 49, "failures": fails}))
    return out


def suite_type_a(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for n in range(2, 7):
        d = parse_type(f"A{n}")
        dl = delta(d)
        p = phi(dl, 3, threads)
        low = [graded_part(p, k) for k in range(3)]
        ok = (all(not x.terms for x in low) and graded_part(p, 3) == f3(d)
              and augmentation(dl) == 0 and is_invariant(d, dl))
        out.append(Check("typeA", d.name, "phi_3(Delta) = f_3 with vanishing parts in degree <= 2", ok,
                         {"phi3": str(graded_part(p, 3)), "f3": str(f3(d))}))
    return out


def suite_gamma3(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name in GAMMA3_TYPES:
        d = parse_type(name)
        ng = dynkin_index_group(d, ceiling, threads)
        try:
            rep = gamma3_torsion(d, ceiling, threads)
        except RankBoundError as exc:
            out.append(Check("gamma3", name, "2 Tors gamma^{3/4} is a quotient of (Z/N(G))^rank", False,
                             {"error": str(exc)}))
            continue
        doubled = rep.doubled()
        ok = (len(doubled.invariant_factors) <= d.rank
              and all(ng % f == 0 for f in doubled.invariant_factors))
        out.append(Check("gamma3", name, "2 Tors gamma^{3/4} is a quotient of (Z/N(G))^rank", ok,
                         {"torsion": list(rep.torsion.invariant_factors),
                          "doubled": list(doubled.invariant_factors), "N": ng, "rank": d.rank}))
    return out


def _symmetric(p: np.ndarray) -> bool:
    return np.array_equal(np.sort(p), np.sort(-p))


def _pairs_key(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    z = np.stack([x, y], axis=1)
    return z[np.lexsort(z.T[::-1])]


def suite_equinum(ceiling=DEFAULT_ORBIT_CEILING, threads=1, orbits: int = 20) -> list[Check]:
    out = []
    for name in RANK5_TYPES:
        d = parse_type(name)
        rng = random.Random(f"equinum-{name}")
        rts = [r for r in roots(d) if r.height > 0]
        coroots = {r.weight: np.array(r.coroot, dtype=np.int64) for r in rts}
        ortho = [(a, b) for a, b in itertools.combinations(rts, 2)
                 if sum(x * y for x, y in zip(a.weight, b.coroot)) == 0]
        bad = 0
        for _ in range(orbits):
            lam = tuple(rng.randrange(-2, 3) for _ in range(d.rank))
            orb = orbit_array(d, lam, ceiling)
            pair = {w: orb @ c for w, c in coroots.items()}
            for r in rts:
                if not _symmetric(pair[r.weight]):
                    bad += 1
            for a, b in ortho:
                x, y = pair[a.weight], pair[b.weight]
                base = _pairs_key(x, y)
                if not (np.array_equal(base, _pairs_key(-x, y)) and np.array_equal(base, _pairs_key(x, -y))):
                    bad += 1
        out.append(Check("equinum", name, "pairings over an orbit hit x and -x equally often", bad == 0,
                         {"orbits": orbits, "roots": len(rts), "orthogonal_pairs": len(ortho), "violations": bad}))
    return out


def suite_longroot(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name in LONGROOT_TYPES:
        d = parse_type(name)
        factor = short_coroot_factor(d)
        rows = []
        ok = True
        for i in range(d.rank):
            chi = orbit_sum(d, d.fundamental_weight(i), ceiling)
            rho = chi - len(chi)
            for x in (chi, rho):
                long_v, short_v = dynkin_index(d, x), dynkin_index_short(d, x)
                ok &= short_v == factor * long_v
            rows.append([long_v, short_v])
        out.append(Check("longroot", name, "short-root index = q(short coroot) * long-root index", ok,
                         {"factor": factor, "values": rows}))
    return out


FUNDAMENTAL_GROUPS = {
    **{f"A{n}": [n + 1] for n in range(1, 9)},
    **{f"B{n}": [2] for n in range(2, 9)},
    **{f"C{n}": [2] for n in range(2, 9)},
    **{f"D{n}": ([4] if n % 2 else [2, 2]) for n in range(3, 9)},
    "E6": [3], "E7": [2], "E8": [], "F4": [], "G2": [],
}


def suite_steinberg(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name in STEINBERG_TYPES:
        d = parse_type(name)
        n = d.rank
        ok_a = all(steinberg_rho(d, (j,)) == tuple(x - y for x, y in zip(d.fundamental_weight(j), d.simple_root(j)))
                   for j in range(n))
        ok_b = True
        for k in range(2, n + 1):
            for combo in itertools.combinations(range(n), k):
                if any(d.cartan[a][b] for a, b in itertools.combinations(combo, 2)):
                    continue
                total = [0] * n
                for j in combo:
                    total = [x + y for x, y in zip(total, steinberg_rho(d, (j,)))]
                ok_b &= steinberg_rho(d, combo) == tuple(total)
        pairs = [steinberg_pair_identity(d, i, j) for i in range(n) for j in range(n)
                 if i != j and d.cartan[i][j]]
        ok_c = all(p.holds for p in pairs)
        out.append(Check("steinberg", name, "rho_{s_j} = w_j - alpha_j; orthogonal products add; "
                         "rho_{s_i s_j} = rho_{s_i} + <alpha_i, alpha_j^vee> alpha_j", ok_a and ok_b and ok_c,
                         {"single": ok_a, "orthogonal": ok_b,
                          "pairs": [[p.i, p.j, p.coefficient, p.holds] for p in pairs]}))
    for name, want in FUNDAMENTAL_GROUPS.items():
        fg = fundamental_group(parse_type(name))
        out.append(Check("steinberg", f"center {name}", "Lambda / Lambda_r has the expected invariant factors",
                         list(fg.invariant_factors) == want, {"invariant_factors": list(fg.invariant_factors)}))
    for n in (5, 7):
        fg = fundamental_group(parse_type(f"D{n}"))
        a, b, c = (fg.images[k][0] for k in (n - 3, n - 2, n - 1))
        ok = fg.invariant_factors == (4,) and a == 2 and b in (1, 3) and c == (-b) % 4
        out.append(Check("steinberg", f"images D{n}", "w_{n-2}, w_{n-1}, w_n map to 2, +-1, +-3 in Z/4", ok,
                         {"images": [list(x) for x in fg.images]}))
    return out


def suite_rationality(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    out = []
    for name in RATIONAL_EVEN + RATIONAL_ODD:
        d = parse_type(name)
        cert = theta_rational_certificate(d)
        ok = cert.holds and cert.expand(d.rank) == invariant_form_q(d)
        detail = {"method": cert.method,
                  "terms": [[t.coefficient, list(t.left), list(t.right)] for t in cert.terms]}
        if name in RATIONAL_ODD:
            trivial = all(in_tits_kernel(d, d.fundamental_weight(i)) for i in range(d.rank))
            ok &= trivial
            detail["kernel_is_everything"] = trivial
        out.append(Check("rationality", name, "theta is rational when Tits algebras have index <= 2", ok, detail))
    return out


def suite_kunneth(ceiling=DEFAULT_ORBIT_CEILING, threads=1) -> list[Check]:
    g2 = parse_type("G2")
    out = []
    got = product_torsion([g2, g2], 2, ceiling, threads)
    out.append(Check("kunneth", "G2xG2 degree 2", "Tors of a product is the direct sum of the factors",
                     got == FinAbGroup(0, (2, 2)), {"group": str(got)}))
    got3 = product_torsion([g2], 3, ceiling, threads)
    want3 = gamma3_torsion(g2, ceiling, threads).torsion + FinAbGroup(0, (2,))
    out.append(Check("kunneth", "G2 degree 3", "degree-3 Kunneth term adds the degree-2 torsion",
                     got3 == want3, {"group": str(got3)}))
    for name in KUNNETH_SINGLE:
        d = parse_type(name)
        got = product_torsion([d], 2, ceiling, threads)
        want = gamma2_torsion(d, ceiling, threads).torsion
        out.append(Check("kunneth", f"{name} single", "one-factor product equals the factor",
                         got == want, {"group": str(got)}))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "table": suite_table,
    "gamma2": suite_gamma2,
    "maincomp": suite_maincomp,
    "iprime": suite_iprime,
    "examples": suite_examples,
    "typeA": suite_type_a,
    "gamma3": suite_gamma3,
    "equinum": suite_equinum,
    "longroot": suite_longroot,
    "steinberg": suite_steinberg,
    "rationality": suite_rationality,
    "kunneth": suite_kunneth,
}


def run_suite(name: str, ceiling: int = DEFAULT_ORBIT_CEILING, threads: int = 1) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](ceiling, threads)]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    return SUITES[name](ceiling, threads)
