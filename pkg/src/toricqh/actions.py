"""Circle subgroups of the torus: moment data, fixed faces, weights, isotropy.

The sign convention: at a vertex whose facet normals are eta_{i_1..i_n}, a
circle direction xi = sum a_j eta_{i_j} has weight -a_j on the direction
transverse to the facet D_{i_j}.  This makes a facet's own circle have that
facet as its maximum.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .cohomology import face_betti  # noqa: F401  (part of this module's API)
from .errors import InconsistentWeights, InvariantMismatch, ZeroVector
from .polytope import h2_lattice


@dataclass(frozen=True)
class FixedComponentData:
    face: object
    K: Fraction
    weights: dict  # facet index -> integer weight (zero weights omitted)
    m: int
    index: int  # 2 * number of negative weights
    coindex: int
    semifree: bool
    dimF: int

    @property
    def facets(self):
        return self.face.facets


def _check_xi(xi):
    xi = tuple(int(x) for x in xi)
    if all(x == 0 for x in xi):
        raise ZeroVector("the circle direction must be nonzero")
    return xi


def moment_value(poly, xi, face):
    """Value of <xi, .> on a face on which it is constant."""
    vids = face.vertex_ids
    vals = {linalg.vec_dot(xi, poly.vertex_point(v)) for v in vids}
    assert len(vals) == 1, "moment map is not constant on the face"
    return vals.pop()


def is_fixed_face(poly, xi, face):
    normals = [poly.normal(i) for i in sorted(face.facets)]
    return linalg.in_span(normals, xi)


def weights(poly, xi, face):
    """Weight data of the circle xi along a fixed face.

    Solves xi in the outward-normal basis at every vertex of the face and
    asserts the answers agree; nonzero weights sit exactly on the facets
    containing the face.
    """
    xi = _check_xi(xi)
    result = None
    for vid in face.vertex_ids:
        idx = sorted(poly.vertex_facets(vid))
        coeffs = linalg.solve_unimodular([poly.normal(i) for i in idx], xi)
        w = {i: -c for i, c in zip(idx, coeffs) if c != 0}
        if any(i not in face.facets for i in w):
            raise InconsistentWeights(
                f"nonzero weight off the fixed face at vertex {vid}")
        if result is None:
            result = w
        elif result != w:
            raise InconsistentWeights(
                f"weights disagree across vertices of {sorted(face.facets)}")
    return result


def _component_from_face(poly, xi, face):
    w = weights(poly, xi, face)
    negatives = sum(1 for x in w.values() if x < 0)
    positives = sum(1 for x in w.values() if x > 0)
    return FixedComponentData(
        face=face,
        K=moment_value(poly, xi, face),
        weights=w,
        m=sum(w.values()),
        index=2 * negatives,
        coindex=2 * positives,
        semifree=all(abs(x) == 1 for x in w.values()),
        dimF=2 * face.dim,
    )


def fixed_components(poly, xi):
    """Maximal faces on which <xi, .> is constant, with weight data, sorted
    by decreasing moment value."""
    xi = _check_xi(xi)
    fixed = []
    for face in sorted(poly.faces.values(), key=lambda f: -f.dim):
        if not is_fixed_face(poly, xi, face):
            continue
        if any(other.facets <= face.facets for other in fixed):
            continue  # contained in a bigger fixed face
        fixed.append(face)
    comps = [_component_from_face(poly, xi, f) for f in fixed]
    comps.sort(key=lambda c: (-c.K, sorted(c.facets)))
    assert len({v for c in comps for v in c.face.vertex_ids}) == \
        sum(len(c.face.vertex_ids) for c in comps), "fixed faces overlap"
    return comps


def extrema(poly, xi):
    comps = fixed_components(poly, xi)
    return comps[0], comps[-1]  # F_max, F_min


# ------------------------------------------------------------------ isotropy

FIXED = "fixed"


def isotropy_order(poly, xi, face):
    """Order of the generic stabilizer along a face: FIXED if the face is
    fixed, else the content of the image of xi in the quotient lattice by
    the face's normal directions."""
    xi = _check_xi(xi)
    if is_fixed_face(poly, xi, face):
        return FIXED
    vid = poly.lex_least_vertex_of(face)
    idx = sorted(poly.vertex_facets(vid))
    coeffs = linalg.solve_unimodular([poly.normal(i) for i in idx], xi)
    rest = [c for i, c in zip(idx, coeffs) if i not in face.facets]
    g = 0
    for c in rest:
        g = gcd(g, abs(c))
    assert g > 0
    return g


@dataclass(frozen=True)
class IsotropyStratum:
    q: int
    faces: frozenset  # face keys in the stratum
    components: tuple  # tuple of frozensets of face keys


def isotropy_components(poly, xi, q):
    """Connected components (by face containment) of the locus with
    stabilizer divisible by q, including all fixed faces."""
    xi = _check_xi(xi)
    qualifying = []
    for key, face in poly.faces.items():
        order = isotropy_order(poly, xi, face)
        if order is FIXED or order % q == 0:
            qualifying.append(key)
    qual = set(qualifying)
    # closure under subfaces: a subface has facet set containing the face's,
    # and its stabilizer order is a multiple, so it must qualify too
    for key in qual:
        for other in poly.faces:
            if key < other:
                assert other in qual, "stratum not closed under subfaces"
    seen = set()
    components = []
    for key in sorted(qualifying, key=sorted):
        if key in seen:
            continue
        comp = {key}
        frontier = [key]
        while frontier:
            cur = frontier.pop()
            for other in qualifying:
                if other in comp:
                    continue
                if cur <= other or other <= cur:
                    comp.add(other)
                    frontier.append(other)
        seen |= comp
        components.append(frozenset(comp))
    return IsotropyStratum(q=q, faces=frozenset(qualifying),
                           components=tuple(components))


def q_pair(poly, xi, face_a, face_b):
    """Largest q so that both faces lie in one component of the q-isotropy
    stratum; at least 1, since the whole manifold is the 1-stratum."""
    candidates = {1}
    for face in poly.faces.values():
        order = isotropy_order(poly, xi, face)
        if order is not FIXED:
            for d in range(2, order + 1):
                if order % d == 0:
                    candidates.add(d)
    key_a, key_b = face_a.facets, face_b.facets
    best = 1
    for q in sorted(candidates, reverse=True):
        stratum = isotropy_components(poly, xi, q)
        for comp in stratum.components:
            if key_a in comp and key_b in comp:
                best = q
                break
        if best == q:
            break
    return best


def global_isotropy_bound(poly, xi):
    """Largest finite stabilizer order on the manifold (1 if semifree)."""
    best = 1
    for face in poly.faces.values():
        order = isotropy_order(poly, xi, face)
        if order is not FIXED:
            best = max(best, order)
    return best


def superlevel_isotropy_bound(poly, xi, c):
    """Max finite isotropy over faces whose moment maximum exceeds c."""
    xi = _check_xi(xi)
    best = 1
    for face in poly.faces.values():
        order = isotropy_order(poly, xi, face)
        if order is FIXED:
            continue
        top = max(linalg.vec_dot(xi, poly.vertex_point(v))
                  for v in face.vertex_ids)
        if top > c:
            best = max(best, order)
    return best


# ------------------------------------------------------- the (K, -m) invariant

def action_invariant(poly, xi):
    """The pair (K(v), -m(v)) at a critical point, well defined modulo the
    lattice of (omega, c1) values of spherical classes; asserts the vertex
    values agree modulo that lattice and returns the representative at the
    maximum."""
    xi = _check_xi(xi)
    lattice_rows = [(b.omega(poly), Fraction(b.c1()))
                    for b in h2_lattice(poly)]
    values = []
    for vid in range(len(poly.vertices)):
        idx = sorted(poly.vertex_facets(vid))
        coeffs = linalg.solve_unimodular([poly.normal(i) for i in idx], xi)
        K = linalg.vec_dot(xi, poly.vertex_point(vid))
        m = -sum(coeffs)
        values.append((K, Fraction(-m)))
    base = max(values)
    for val in values:
        diff = (val[0] - base[0], val[1] - base[1])
        if not linalg.in_rational_lattice(lattice_rows, diff):
            raise InvariantMismatch(
                f"vertex values {val} and {base} differ by {diff}, outside "
                "the (omega, c1) lattice")
    fmax, _ = extrema(poly, xi)
    return (fmax.K, -fmax.m)
