"""Obstruction battery deciding whether a torus subcircle is essential in
the Hamiltonian group.

Each rule is the contrapositive of a one-directional theorem, so the verdict
vocabulary is essential / inconclusive only.  Rules never certify that a
loop is contractible.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .actions import (
    fixed_components,
    global_isotropy_bound,
    isotropy_components,
    isotropy_order,
    q_pair,
    superlevel_isotropy_bound,
    FIXED,
)
from .cohomology import build_ring, face_betti, restrict_to_face
from .polynomials import poly_mul, poly_const
from .polytope import centroid, normalize
from .quantum import qsub
from .seidel import seidel_element, verify_leading_term


@dataclass(frozen=True)
class Finding:
    rule: str
    triggered: bool
    definitive: bool
    certificate: dict
    assumptions: tuple = ()


@dataclass(frozen=True)
class ObstructionReport:
    verdict: str  # "essential" | "inconclusive"
    findings: tuple
    seidel_summary: object = None
    normalized: bool = False

    def finding(self, rule):
        return next(f for f in self.findings if f.rule == rule)

    def triggered_rules(self):
        return [f.rule for f in self.findings if f.triggered]


# ------------------------------------------------------------------- helpers

def _euler_class_nonzero(ring, comp):
    """Euler class of the obstruction bundle along a fixed face: the product
    of the restricted facet classes to the powers (weight magnitude - 1)
    over the negative-weight facets."""
    poly = ring.polytope
    face = comp.face
    face_ring, value = None, None
    product_full = poly_const(1, poly.num_facets)
    rank = 0
    for i, w in comp.weights.items():
        if w <= -2:
            mono = [0] * poly.num_facets
            mono[i] = -w - 1
            rank += -w - 1
            product_full = poly_mul(product_full, {tuple(mono): Fraction(1)})
    if rank == 0:
        return True  # rank-zero bundle: the Euler class is the unit
    face_ring, value = restrict_to_face(ring, product_full, face)
    return bool(value)


def _classical_class(ring, facet_powers):
    poly = ring.polytope
    mono = [0] * poly.num_facets
    for i, e in facet_powers.items():
        mono[i] = e
    return ring.reduce_full({tuple(mono): Fraction(1)})


# ----------------------------------------------------------------- the rules

def _rule_t1(comps):
    fmax, fmin = comps[0], comps[-1]
    hits = []
    if fmax.semifree:
        hits.append({"extremum": "max", "face": sorted(fmax.facets),
                     "K": fmax.K, "weights": dict(fmax.weights)})
    if fmin.semifree:
        hits.append({"extremum": "min", "face": sorted(fmin.facets),
                     "K": fmin.K, "weights": dict(fmin.weights)})
    return Finding(
        rule="T1", triggered=bool(hits), definitive=True,
        certificate={"semifree_extrema": hits})


def _rule_t2(poly, ring, xi, comps):
    fmax = comps[0]
    details = []
    triggered = False
    for comp in comps:
        positive_ok = all(w == 1 for w in comp.weights.values() if w > 0)
        visible = positive_ok and _euler_class_nonzero(ring, comp)
        entry = {"face": sorted(comp.facets), "K": comp.K, "m": comp.m,
                 "visible": visible, "semifree": comp.semifree}
        if visible:
            if comp is fmax:
                entry["case"] = "maximum"
                entry["triggered"] = True
                triggered = True
            else:
                bound = superlevel_isotropy_bound(poly, xi, comp.K)
                entry["superlevel_isotropy"] = bound
                if bound <= 2:
                    bad = comp.K != 0 or comp.m != 0 or not comp.semifree
                    entry["case"] = "interior"
                    entry["triggered"] = bad
                    triggered = triggered or bad
                else:
                    entry["case"] = "interior, inapplicable (isotropy > 2)"
                    entry["triggered"] = False
        else:
            entry["triggered"] = False
        details.append(entry)
    return Finding(rule="T2", triggered=triggered, definitive=True,
                   certificate={"components": details})


def _rule_p4(ring, comps):
    triggered = False
    details = []
    for comp in comps:
        if not comp.semifree:
            continue
        plus = {i: 1 for i, w in comp.weights.items() if w == 1}
        minus = {i: 1 for i, w in comp.weights.items() if w == -1}
        x_plus = _classical_class(ring, plus)
        x_minus = _classical_class(ring, minus)
        bad = comp.K != 0 or comp.m != 0 or x_plus != x_minus
        details.append({"face": sorted(comp.facets), "K": comp.K,
                        "m": comp.m, "f_plus": sorted(plus),
                        "f_minus": sorted(minus),
                        "classes_equal": x_plus == x_minus,
                        "triggered": bad})
        triggered = triggered or bad
    return Finding(rule="P4", triggered=triggered, definitive=True,
                   certificate={"semifree_components": details})


def _rule_r5(ring, comps):
    triggered = False
    details = []
    for comp in comps:
        plus = {i: w for i, w in comp.weights.items() if w > 0}
        minus = {i: -w for i, w in comp.weights.items() if w < 0}
        x_plus = _classical_class(ring, plus)
        x_minus = _classical_class(ring, minus)
        if not x_plus or not x_minus:
            continue
        bad = comp.K != 0 or comp.m != 0 or x_plus != x_minus
        details.append({"face": sorted(comp.facets), "K": comp.K,
                        "m": comp.m, "triggered": bad})
        triggered = triggered or bad
    return Finding(rule="R5", triggered=triggered, definitive=True,
                   certificate={"components_with_nonzero_products": details})


def _rule_s2(poly, xi, comps):
    bound = global_isotropy_bound(poly, xi)
    if bound > 2:
        return Finding(rule="S2", triggered=False, definitive=True,
                       certificate={"applicable": False,
                                    "isotropy_bound": bound})
    fmax, fmin = comps[0], comps[-1]
    problems = []
    if fmax.K != -fmin.K:
        problems.append(f"K_max={fmax.K} != -K_min={-fmin.K}")
    if fmax.m != -fmin.m:
        problems.append(f"m_max={fmax.m} != -m_min={-fmin.m}")
    stratum = isotropy_components(poly, xi, 2)
    for component in stratum.components:
        members = [c for c in comps if c.facets in component]
        if not members:
            continue
        pairs = sorted({(c.K, c.m) for c in members})
        for K, m in pairs:
            left = [c for c in members if c.K == K and c.m == m]
            right = [c for c in members if c.K == -K and c.m == -m]
            profile_l = {}
            for c in left:
                for i, b in enumerate(face_betti(poly, c.face)):
                    j = 2 * i + c.index
                    profile_l[j] = profile_l.get(j, 0) + b
            profile_r = {}
            for c in right:
                for i, b in enumerate(face_betti(poly, c.face)):
                    j = 2 * i + c.coindex
                    profile_r[j] = profile_r.get(j, 0) + b
            if profile_l != profile_r:
                problems.append(
                    f"homology profile at (K,m)=({K},{m}) is asymmetric: "
                    f"{profile_l} vs {profile_r}")
    return Finding(rule="S2", triggered=bool(problems), definitive=True,
                   certificate={"applicable": True, "isotropy_bound": bound,
                                "violations": problems})


def _rule_c(poly, xi, comps):
    k = global_isotropy_bound(poly, xi)
    a = comps[0].K
    b = -comps[-1].K
    assert a > 0 and b > 0, "mean normalized moment maps change sign"
    bad = max(a, b) > (k - 1) * min(a, b)
    return Finding(rule="C", triggered=bad, definitive=True,
                   certificate={"K_max": a, "abs_K_min": b,
                                "isotropy_bound": k,
                                "bound": (k - 1) * min(a, b)})


@dataclass(frozen=True)
class ChainBound:
    min_cost: Fraction
    K_max: Fraction
    optimal_paths: tuple  # tuples of face-key tuples
    m_condition_achievable: bool
    q_values: dict


def chain_bound(poly, xi):
    """Cheapest chain of fixed components from the maximum to the minimum,
    with cost |dK| / q over each hop, and whether some cheapest chain also
    realizes the weight-sum condition.  Chains visit each component at most
    once."""
    comps = fixed_components(poly, xi)
    n = len(comps)
    fmax, fmin = comps[0], comps[-1]
    qmat = {}
    for i, j in combinations(range(n), 2):
        qmat[(i, j)] = qmat[(j, i)] = q_pair(
            poly, xi, comps[i].face, comps[j].face)

    def cost(i, j):
        dk = comps[i].K - comps[j].K
        if dk == 0:
            return None
        return abs(dk) / qmat[(i, j)]

    best = {0: Fraction(0)}
    # positive edge costs on a tiny complete graph: plain Dijkstra
    import heapq
    heap = [(Fraction(0), 0)]
    dist = {}
    while heap:
        d, u = heapq.heappop(heap)
        if u in dist:
            continue
        dist[u] = d
        for v in range(n):
            if v == u or v in dist:
                continue
            c = cost(u, v)
            if c is None:
                continue
            heapq.heappush(heap, (d + c, v))
    min_cost = dist[n - 1]

    paths = []
    achieved = []

    def dfs(u, visited, acc_cost, acc_m, path):
        if acc_cost > min_cost:
            return
        if u == n - 1:
            if acc_cost == min_cost:
                paths.append(tuple(path))
                achieved.append(acc_m == fmax.m)
            return
        for v in range(n):
            if v in visited:
                continue
            c = cost(u, v)
            if c is None:
                continue
            du = comps[u].K - comps[v].K
            sign = 1 if du > 0 else -1
            step_m = Fraction(comps[u].m - comps[v].m, qmat[(u, v)]) * sign
            visited.add(v)
            path.append(tuple(sorted(comps[v].facets)))
            dfs(v, visited, acc_cost + c, acc_m + step_m, path)
            path.pop()
            visited.discard(v)

    dfs(0, {0}, Fraction(0), Fraction(0), [tuple(sorted(fmax.facets))])
    m_ok = any(achieved)
    return ChainBound(min_cost=min_cost, K_max=fmax.K,
                      optimal_paths=tuple(paths),
                      m_condition_achievable=m_ok,
                      q_values={(tuple(sorted(comps[i].facets)),
                                 tuple(sorted(comps[j].facets))): q
                                for (i, j), q in qmat.items() if i < j})


def _rule_p6(poly, xi):
    bound = chain_bound(poly, xi)
    if bound.min_cost > bound.K_max:
        bad, why = True, "every chain is more expensive than K_max"
    elif bound.min_cost == bound.K_max and not bound.m_condition_achievable:
        bad, why = True, ("chains matching K_max exist but none realizes "
                          "the weight-sum condition")
    else:
        bad, why = False, "a compatible chain exists"
    return Finding(rule="P6", triggered=bad, definitive=True,
                   certificate={"min_cost": bound.min_cost,
                                "K_max": bound.K_max,
                                "m_condition": bound.m_condition_achievable,
                                "optimal_paths": bound.optimal_paths,
                                "note": why}), bound


def _rule_sd(qp, xi):
    element = seidel_element(qp, xi)
    nontrivial = not qsub(element.qclass, qp.one()).is_zero()
    ok, lead_report = verify_leading_term(qp, xi, element=element)
    assumptions = ["fano asserted by caller"] if qp.mode == "fano" else \
        ["nef asserted by caller", "Y table supplied by caller"]
    return Finding(rule="SD",
                   triggered=nontrivial,
                   definitive=qp.mode == "fano",
                   certificate={"seidel_nontrivial": nontrivial,
                                "leading_term": lead_report},
                   assumptions=tuple(assumptions)), element


# ------------------------------------------------------------------ analyze

def analyze(poly, xi, qp=None):
    """Run the full battery; the verdict is essential iff some rule fires.

    The moment data is mean normalized first (the K = 0 tests depend on it).
    A supplied quantum presentation must be built on the same normalized
    polytope.
    """
    normalized = False
    if any(c != 0 for c in centroid(poly)):
        poly = normalize(poly)
        normalized = True
    if qp is not None:
        same = [f.support for f in qp.polytope.facets] == \
            [f.support for f in poly.facets] and \
            [f.normal for f in qp.polytope.facets] == \
            [f.normal for f in poly.facets]
        if not same:
            raise ValueError(
                "the quantum presentation was built on different moment "
                "data; rebuild it on the normalized polytope")
    xi = tuple(int(x) for x in xi)
    ring = build_ring(poly)
    comps = fixed_components(poly, xi)
    findings = [
        _rule_t1(comps),
        _rule_t2(poly, ring, xi, comps),
        _rule_p4(ring, comps),
        _rule_r5(ring, comps),
        _rule_s2(poly, xi, comps),
        _rule_c(poly, xi, comps),
    ]
    p6, _ = _rule_p6(poly, xi)
    findings.append(p6)
    element = None
    if qp is not None:
        sd, element = _rule_sd(qp, xi)
        findings.append(sd)
    verdict = "essential" if any(f.triggered for f in findings) \
        else "inconclusive"
    return ObstructionReport(verdict=verdict, findings=tuple(findings),
                             seidel_summary=element, normalized=normalized)
