"""Delzant polytopes: validation, face lattice, primitive sets, H2 lattice.

A polytope is given by facet data (outward primitive integer normal, rational
support value): Delta = {u : <eta_i, u> <= support_i}.  All derived data is
exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import linalg
from .errors import (
    NonIntegralCoefficient,
    NonPositiveEnergy,
    NonPrimitiveNormal,
    NotFullDimensional,
    NotSimple,
    NotSmooth,
    RedundantFacet,
    Unbounded,
)


@dataclass(frozen=True)
class Facet:
    normal: tuple  # outward primitive integer normal
    support: Fraction
    label: str = ""

    def __post_init__(self):
        if linalg.vec_content(self.normal) != 1:
            raise NonPrimitiveNormal(f"normal {self.normal} is not primitive")
        object.__setattr__(self, "support", Fraction(self.support))


@dataclass(frozen=True)
class Face:
    """A face, identified by the exact set of facets containing it."""
    facets: frozenset
    dim: int
    vertex_ids: tuple  # indices into polytope.vertices


@dataclass
class DelzantPolytope:
    n: int
    facets: tuple
    vertices: tuple  # ((point, facet frozenset), ...) sorted lex by point
    faces: dict = field(repr=False)  # frozenset -> Face
    name: str = ""

    # -- basic queries ------------------------------------------------------

    @property
    def num_facets(self):
        return len(self.facets)

    def normal(self, i):
        return self.facets[i].normal

    def support(self, i):
        return self.facets[i].support

    def vertex_point(self, vid):
        return self.vertices[vid][0]

    def vertex_facets(self, vid):
        return self.vertices[vid][1]

    def faces_of_dim(self, d):
        return [f for f in self.faces.values() if f.dim == d]

    def face(self, facet_set):
        return self.faces[frozenset(facet_set)]

    def vertex_normal_columns(self, vid):
        return [self.normal(i) for i in sorted(self.vertex_facets(vid))]

    def lex_least_vertex_of(self, face):
        return min(face.vertex_ids, key=lambda v: self.vertex_point(v))


def _feasible(point, facets):
    return all(linalg.vec_dot(f.normal, point) <= f.support for f in facets)


def _positive_kernel_exists(normals):
    """Is there lambda > 0 with sum lambda_i eta_i = 0?

    Works on the polytope {lambda >= 0, sum lambda = 1, N lambda = 0} whose
    vertices are basic feasible solutions with support of size <= n+1; an
    all-positive point exists iff every coordinate is positive somewhere.
    """
    n = len(normals[0])
    N = len(normals)
    hit = [False] * N
    for size in range(1, min(N, n + 1) + 1):
        for supp in combinations(range(N), size):
            # solve: sum_{j in supp} lam_j eta_j = 0, sum lam_j = 1
            rows = [[normals[j][k] for j in supp] for k in range(n)]
            rows.append([1] * size)
            rhs = [0] * n + [1]
            # least-squares-free exact solve: system may be over/under
            # determined; try square subsystems of the row set
            sol = None
            for rsel in combinations(range(n + 1), size):
                if n not in rsel:
                    continue  # need the normalization row
                sub = [rows[r] for r in rsel]
                try:
                    cand = linalg.solve_rational(sub, [rhs[r] for r in rsel])
                except ValueError:
                    continue
                # verify against all rows
                if all(sum(rows[r][j] * cand[j] for j in range(size)) == rhs[r]
                       for r in range(n + 1)):
                    sol = cand
                    break
            if sol is None or any(x < 0 for x in sol):
                continue
            for j, lam in zip(supp, sol):
                if lam > 0:
                    hit[j] = True
        if all(hit):
            return True
    return all(hit)


def validate_delzant(facet_specs, name=""):
    """Build a DelzantPolytope from raw facet data.

    `facet_specs` is an iterable of (normal, support) or (normal, support,
    label) tuples, or Facet instances.  Raises a structured PolytopeError on
    invalid input.
    """
    facets = []
    for spec in facet_specs:
        if isinstance(spec, Facet):
            facets.append(spec)
        else:
            normal, support = spec[0], spec[1]
            label = spec[2] if len(spec) > 2 else ""
            facets.append(Facet(tuple(int(x) for x in normal),
                                Fraction(support), label))
    if not facets:
        raise NotFullDimensional("no facets given")
    n = len(facets[0].normal)
    if n < 1:
        raise NotFullDimensional("dimension must be at least 1")
    if any(len(f.normal) != n for f in facets):
        raise NotFullDimensional("normals of mixed dimension")
    if len(facets) < n + 1:
        raise Unbounded(f"need at least {n + 1} facets in dimension {n}")

    normals = [f.normal for f in facets]
    if linalg.rank([list(v) for v in normals]) < n:
        raise Unbounded("facet normals do not span; recession cone is nontrivial")
    if not _positive_kernel_exists(normals):
        raise Unbounded("facet normals do not positively span the space")

    # candidate vertices: n-subsets with invertible normal matrix
    points = {}
    for subset in combinations(range(len(facets)), n):
        m = [list(normals[i]) for i in subset]
        if linalg.det(m) == 0:
            continue
        point = linalg.solve_rational(m, [facets[i].support for i in subset])
        if not _feasible(point, facets):
            continue
        active = frozenset(i for i in range(len(facets))
                           if linalg.vec_dot(normals[i], point) == facets[i].support)
        if point in points:
            continue
        points[point] = active
    if not points:
        raise Unbounded("no vertices; the region is empty or unbounded")

    vlist = sorted(points.items())
    base = vlist[0][0]
    if linalg.rank([list(linalg.vec_sub(p, base)) for p, _ in vlist[1:]]) < n:
        raise NotFullDimensional("vertices span a proper affine subspace")

    for point, active in vlist:
        if len(active) > n:
            raise NotSimple(
                f"vertex {point} lies on {len(active)} facets {sorted(active)}")
        cols = [normals[i] for i in sorted(active)]
        m = [[cols[j][i] for j in range(n)] for i in range(n)]
        d = linalg.det(m)
        if abs(d) != 1:
            raise NotSmooth(
                f"vertex {point} on facets {sorted(active)} has |det| = {abs(d)}")

    touched = set()
    for _, active in vlist:
        touched |= active
    missing = set(range(len(facets))) - touched
    if missing:
        raise RedundantFacet(
            f"facets {sorted(missing)} support no vertex of the region")

    vertices = tuple((p, a) for p, a in vlist)
    poly = DelzantPolytope(n=n, facets=tuple(facets), vertices=vertices,
                           faces={}, name=name)
    poly.faces = _build_faces(poly)
    return poly


def _build_faces(poly):
    """Every nonempty intersection of facets, canonically keyed by the full
    facet set containing it.  Includes Delta itself (empty facet set)."""
    n = poly.n
    face_sets = {frozenset()}
    vertex_sets = [vf for _, vf in poly.vertices]
    # faces of a simple polytope through a vertex correspond to subsets of
    # its facet set
    for vf in vertex_sets:
        for size in range(1, n + 1):
            for sub in combinations(sorted(vf), size):
                face_sets.add(frozenset(sub))
    faces = {}
    for s in face_sets:
        vids = tuple(vid for vid in range(len(poly.vertices))
                     if s <= poly.vertex_facets(vid))
        assert vids, "face with no vertices"
        faces[s] = Face(facets=s, dim=n - len(s), vertex_ids=vids)
    return faces


def faces(poly):
    return poly.faces


# ---------------------------------------------------------------- dual cones

def dual_cone_face(poly, v):
    """The unique face whose dual cone contains integer vector v, plus the
    coefficient map over the facets of that face.

    Locates a vertex cone containing v, solves in the vertex's unimodular
    normal basis, and drops zero coefficients.
    """
    v = tuple(int(x) for x in v)
    for vid in range(len(poly.vertices)):
        idx = sorted(poly.vertex_facets(vid))
        cols = [poly.normal(i) for i in idx]
        coeffs = linalg.solve_unimodular(cols, v)
        if all(c >= 0 for c in coeffs):
            support = {i: c for i, c in zip(idx, coeffs) if c > 0}
            return poly.face(frozenset(support)), support
    raise AssertionError("complete fan does not cover %r" % (v,))


# ------------------------------------------------------------------ H2 data

@dataclass(frozen=True)
class H2Class:
    pairings: tuple  # integer pairing with each facet class

    def omega(self, poly):
        return sum(Fraction(a) * poly.support(i)
                   for i, a in enumerate(self.pairings))

    def c1(self):
        return sum(self.pairings)


def h2_lattice(poly):
    """Integer basis of {a : sum a_i eta_i = 0} as H2Class objects."""
    n, N = poly.n, poly.num_facets
    m = [[poly.normal(i)[j] for i in range(N)] for j in range(n)]
    return [H2Class(b) for b in linalg.kernel_basis_int(m)]


@dataclass(frozen=True)
class PrimitiveSet:
    indices: tuple  # sorted facet indices I
    j_indices: tuple  # sorted facet indices J (disjoint from I)
    coeffs: tuple  # positive integers c_j, aligned with j_indices
    beta: H2Class

    @property
    def key(self):
        return frozenset(self.indices)


def beta_class(poly, indices, j_indices, coeffs):
    """The spherical class of the relation sum_I eta = sum_J c_j eta."""
    pairings = [0] * poly.num_facets
    for i in indices:
        pairings[i] = 1
    for j, c in zip(j_indices, coeffs):
        pairings[j] = -c
    beta = H2Class(tuple(pairings))
    if beta.omega(poly) <= 0:
        raise NonPositiveEnergy(
            f"relation class of I={list(indices)} has energy "
            f"{beta.omega(poly)} <= 0")
    return beta


def primitive_sets(poly):
    """All primitive facet subsets with their dual-cone data, by size."""
    N = poly.num_facets
    in_sigma = set()
    for vid in range(len(poly.vertices)):
        vf = sorted(poly.vertex_facets(vid))
        for size in range(1, len(vf) + 1):
            for sub in combinations(vf, size):
                in_sigma.add(frozenset(sub))
    results = []
    primitive_found = set()
    for size in range(2, N + 1):
        for sub in combinations(range(N), size):
            fs = frozenset(sub)
            if fs in in_sigma:
                continue
            if any(p <= fs for p in primitive_found):
                continue  # a proper subset already fails to intersect
            if all(frozenset(s) in in_sigma
                   for s in combinations(sub, size - 1)):
                primitive_found.add(fs)
                v = tuple(sum(poly.normal(i)[k] for i in sub)
                          for k in range(poly.n))
                _, support = dual_cone_face(poly, v)
                j_sorted = tuple(sorted(support))
                coeffs = tuple(support[j] for j in j_sorted)
                if any(Fraction(c).denominator != 1 or c <= 0 for c in coeffs):
                    raise NonIntegralCoefficient(
                        f"dual-cone coefficients for I={sub} are {coeffs}")
                if fs & frozenset(j_sorted):
                    raise NonIntegralCoefficient(
                        f"I={sub} meets its complement set {j_sorted}")
                beta = beta_class(poly, sub, j_sorted, coeffs)
                results.append(PrimitiveSet(indices=tuple(sub),
                                            j_indices=j_sorted,
                                            coeffs=coeffs, beta=beta))
    results.sort(key=lambda p: (len(p.indices), p.indices))
    return results


# ----------------------------------------------------------------- centroid

def _simplices_of_face(poly, face):
    """Recursive triangulation from the lex-least vertex of each face.

    Returns simplices as tuples of vertex ids; each has dim(face)+1 entries.
    """
    if face.dim == 0:
        return [(face.vertex_ids[0],)]
    anchor = poly.lex_least_vertex_of(face)
    simplices = []
    for sub in poly.faces.values():
        if sub.dim != face.dim - 1 or not (face.facets <= sub.facets):
            continue
        if anchor in sub.vertex_ids:
            continue
        for s in _simplices_of_face(poly, sub):
            simplices.append((anchor,) + s)
    return simplices


def centroid(poly):
    """Exact centroid of Delta under Lebesgue measure."""
    top = poly.face(frozenset())
    total_vol = Fraction(0)
    weighted = [Fraction(0)] * poly.n
    for simplex in _simplices_of_face(poly, top):
        pts = [poly.vertex_point(v) for v in simplex]
        base = pts[0]
        m = [list(linalg.vec_sub(p, base)) for p in pts[1:]]
        vol = abs(linalg.det(m))  # n! * volume; constant factor cancels
        if vol == 0:
            continue
        c = [sum(p[k] for p in pts) / Fraction(len(pts)) for k in range(poly.n)]
        total_vol += vol
        for k in range(poly.n):
            weighted[k] += vol * c[k]
    assert total_vol > 0
    return tuple(w / total_vol for w in weighted)


def normalize(poly):
    """Translate supports so the centroid moves to the origin."""
    c = centroid(poly)
    if all(x == 0 for x in c):
        return poly
    specs = [(f.normal, f.support - linalg.vec_dot(f.normal, c), f.label)
             for f in poly.facets]
    return validate_delzant(specs, name=poly.name)
