"""Finite simplicial complexes with exact cohomology and cup products.

Vertex labels are opaque strings carrying an explicit total order (default
lexicographic); every cochain-level formula (coboundary signs, the
front-face/back-face cup product, staircase product triangulations) is
stated against that order, so the order is fixed at construction and never
changes.  Complexes are immutable; derived data (Betti numbers, cocycle
bases) is cached on the instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import exactalg
from .exactalg import QQ, PrimeField

Simplex = tuple[int, ...]  # strictly increasing vertex indices


@dataclass(frozen=True)
class GradedBetti:
    """Per-degree cohomology dimensions over a stated coefficient ring.

    For integer coefficients ``torsion[i]`` lists the torsion divisors (> 1)
    of H^i; it is ``None`` for field coefficients.
    """

    field_name: str
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...] | None = None

    @property
    def total(self) -> int:
        return sum(self.betti)

    def __str__(self) -> str:
        s = f"H^*(-;{self.field_name}) = {self.betti}"
        if self.torsion is not None and any(self.torsion):
            s += f" torsion {self.torsion}"
        return s


class SimplicialComplex:
    """Finite simplicial complex on an ordered vertex set."""

    def __init__(self, vertices: tuple[str, ...], facets: tuple[Simplex, ...]):
        # Internal constructor: facets already index tuples, sorted, no
        # redundancy.  Use from_facets for validated construction.
        self.vertices = vertices
        self.facets = facets
        self._vertex_index = {v: i for i, v in enumerate(vertices)}
        simplices: dict[int, set[Simplex]] = {}
        for f in facets:
            for k in range(1, len(f) + 1):
                simplices.setdefault(k - 1, set()).update(combinations(f, k))
        self._simplices: dict[int, list[Simplex]] = {
            d: sorted(simplices[d]) for d in simplices
        }
        self._simplex_index: dict[int, dict[Simplex, int]] = {
            d: {s: i for i, s in enumerate(lst)} for d, lst in self._simplices.items()
        }
        self.dim = max(self._simplices) if self._simplices else -1
        self._cache: dict = {}

    # -- construction --------------------------------------------------

    @classmethod
    def from_facets(cls, facets, vertex_order=None) -> "SimplicialComplex":
        """Build a complex from facet vertex sets.

        Redundant (contained) facets are dropped.  ``vertex_order`` fixes
        the total vertex order; by default labels sort lexicographically.
        """
        facet_sets = [frozenset(str(v) for v in f) for f in facets]
        if not facet_sets:
            raise ValueError("empty facet list")
        if any(not f for f in facet_sets):
            raise ValueError("empty facet")
        labels = set().union(*facet_sets)
        if vertex_order is None:
            order = tuple(sorted(labels))
        else:
            order = tuple(str(v) for v in vertex_order)
            if len(set(order)) != len(order):
                raise ValueError("duplicate vertex in vertex_order")
            unknown = labels - set(order)
            if unknown:
                raise ValueError(f"facet references unknown vertex: {sorted(unknown)}")
        index = {v: i for i, v in enumerate(order)}
        idx_facets = sorted({tuple(sorted(index[v] for v in f)) for f in facet_sets})
        maximal = [
            f for f in idx_facets
            if not any(set(f) < set(g) for g in idx_facets if len(g) > len(f))
        ]
        return cls(order, tuple(maximal))

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls((), ())

    @classmethod
    def from_simplices(cls, vertex_order: tuple[str, ...], simplices) -> "SimplicialComplex":
        """Internal builder tolerating the empty complex (e.g. fixed sets)."""
        index = {v: i for i, v in enumerate(vertex_order)}
        idx = sorted({tuple(sorted(index[str(v)] for v in s)) for s in simplices})
        maximal = [
            f for f in idx
            if not any(set(f) < set(g) for g in idx if len(g) > len(f))
        ]
        used = sorted({v for f in maximal for v in f})
        remap = {v: i for i, v in enumerate(used)}
        verts = tuple(vertex_order[v] for v in used)
        return cls(verts, tuple(tuple(remap[v] for v in f) for f in maximal))

    # -- basic invariants ----------------------------------------------

    def simplices(self, k: int) -> list[Simplex]:
        return self._simplices.get(k, [])

    def simplex_labels(self, k: int) -> list[tuple[str, ...]]:
        return [tuple(self.vertices[v] for v in s) for s in self.simplices(k)]

    def n_simplices(self, k: int) -> int:
        return len(self._simplices.get(k, []))

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.n_simplices(k) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.n_simplices(k) for k in range(self.dim + 1))

    def connected_components(self) -> list[set[int]]:
        # Only vertices that are simplices count; a label can sit in the
        # declared order without being used by any facet.
        used = [s[0] for s in self.simplices(0)]
        parent = {v: v for v in used}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for (a, b) in self.simplices(1):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps: dict[int, set[int]] = {}
        for v in used:
            comps.setdefault(find(v), set()).add(v)
        return sorted(comps.values(), key=min)

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def is_pure(self) -> bool:
        return all(len(f) - 1 == self.dim for f in self.facets)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector})"

    # -- coboundary matrices --------------------------------------------

    def coboundary_rows(self, k: int) -> list[dict[int, int]]:
        """delta^k: C^k -> C^{k+1} as sparse rows indexed by (k+1)-simplices."""
        key = ("cob", k)
        if key not in self._cache:
            idx = self._simplex_index.get(k, {})
            rows = []
            for tau in self.simplices(k + 1):
                row = {}
                for i in range(len(tau)):
                    face = tau[:i] + tau[i + 1:]
                    row[idx[face]] = 1 if i % 2 == 0 else -1
                rows.append(row)
            self._cache[key] = rows
        return self._cache[key]

    def coboundary_matrix(self, k: int) -> np.ndarray:
        rows = self.coboundary_rows(k)
        M = np.zeros((len(rows), self.n_simplices(k)), dtype=np.int64)
        for i, row in enumerate(rows):
            for c, v in row.items():
                M[i, c] = v
        return M

    def _coboundary_rank(self, k: int, field) -> int:
        key = ("cobrank", k, field.name)
        if key not in self._cache:
            rows = self.coboundary_rows(k)
            if isinstance(field, PrimeField):
                srows = [
                    {c: v % field.p for c, v in r.items() if v % field.p} for r in rows
                ]
                self._cache[key] = exactalg.sparse_rank_modp(srows, field.p)
            else:
                self._cache[key] = exactalg.sparse_rank_q([dict(r) for r in rows])
        return self._cache[key]

    # -- cohomology ------------------------------------------------------

    def cohomology(self, field) -> GradedBetti:
        """Betti numbers over Q or F_p from coboundary ranks."""
        key = ("betti", field.name)
        if key not in self._cache:
            betti = []
            for i in range(self.dim + 1):
                dim_ci = self.n_simplices(i)
                r_i = self._coboundary_rank(i, field)
                r_prev = self._coboundary_rank(i - 1, field) if i > 0 else 0
                betti.append(dim_ci - r_i - r_prev)
            self._cache[key] = GradedBetti(field.name, tuple(betti))
        return self._cache[key]

    def integral_cohomology(self) -> GradedBetti:
        """Free ranks and torsion divisors of H^*(X;Z) via Smith form."""
        if "integral" not in self._cache:
            betti = []
            torsion = []
            snf: dict[int, tuple[int, ...]] = {}
            for i in range(self.dim + 1):
                rows = self.coboundary_rows(i - 1) if i > 0 else []
                if i > 0 and rows:
                    M = self.coboundary_matrix(i - 1)
                    snf[i - 1] = exactalg.smith_normal_form(M.astype(object)).divisors
                r_prev = sum(1 for d in snf.get(i - 1, ()) if d) if i > 0 else 0
                r_i = self._coboundary_rank(i, QQ)
                betti.append(self.n_simplices(i) - r_i - r_prev)
                torsion.append(tuple(d for d in snf.get(i - 1, ()) if d > 1))
            self._cache["integral"] = GradedBetti("Z", tuple(betti), tuple(torsion))
        return self._cache["integral"]

    def torsion_valuation_profile(self, p: int) -> dict[int, list[int]]:
        """Per degree, p-adic valuations of the Smith divisors of delta^{i-1}.

        Degree i torsion of H^i(X;Z) lives in the divisors of delta^{i-1};
        this p-local route avoids full Smith reduction on large complexes.
        """
        key = ("pval", p)
        if key not in self._cache:
            out = {}
            for i in range(1, self.dim + 1):
                rows = [dict(r) for r in self.coboundary_rows(i - 1)]
                out[i] = exactalg.p_valuation_profile(rows, p)
            self._cache[key] = out
        return self._cache[key]

    # -- cocycle bases and class arithmetic -------------------------------

    def cohomology_basis(self, field, degree: int) -> "_DegreeBasis":
        key = ("basis", field.name, degree)
        if key not in self._cache:
            self._cache[key] = _DegreeBasis(self, field, degree)
        return self._cache[key]

    def cup_cochain(self, field, i: int, j: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Front-face/back-face cup product of cochains a in C^i, b in C^j."""
        idx_i = self._simplex_index.get(i, {})
        idx_j = self._simplex_index.get(j, {})
        target = self.simplices(i + j)
        if isinstance(field, PrimeField):
            out = np.zeros(len(target), dtype=np.int64)
            for t, s in enumerate(target):
                av = a[idx_i[s[: i + 1]]]
                if av:
                    bv = b[idx_j[s[i:]]]
                    if bv:
                        out[t] = int(av) * int(bv) % field.p
        else:
            out = np.zeros(len(target), dtype=object)
            for t, s in enumerate(target):
                av = a[idx_i[s[: i + 1]]]
                if av:
                    out[t] = av * b[idx_j[s[i:]]]
        return out


class _DegreeBasis:
    """Reduced-echelon cocycle representatives of H^i plus a class reducer.

    The basis is deterministic: the rref of im(delta^{i-1}) is removed from
    the kernel of delta^i and the residues are put in reduced echelon form
    against the fixed simplex order.  The prime-field backend is dense
    int64; the rational backend works on sparse rows throughout, which is
    what makes cocycle bases affordable on the product complexes.
    """

    def __init__(self, X: SimplicialComplex, field, degree: int):
        self.complex = X
        self.field = field
        self.degree = degree
        n = X.n_simplices(degree)
        self.ncochains = n
        if isinstance(field, PrimeField):
            self._init_dense(X, field, degree, n)
        else:
            self._init_sparse_q(X, degree, n)

    def _init_dense(self, X, field, degree, n):
        self._sparse = False
        if degree > 0 and X.n_simplices(degree - 1):
            # Image of delta^{i-1} in C^i: columns of the coboundary matrix.
            im_rows = _transpose_rows(
                X.coboundary_rows(degree - 1), X.n_simplices(degree - 1)
            )
            M = _rows_to_matrix(im_rows, n, field)
            self.im_rref, self.im_pivots = exactalg.rref(M, field)
        else:
            self.im_rref, self.im_pivots = _rows_to_matrix([], n, field), []
        cob = X.coboundary_rows(degree)
        Mk = _rows_to_matrix(cob, n, field)
        kernel = exactalg.kernel_basis(Mk, field) if n else []
        reduced = []
        for v in kernel:
            w = self._reduce_by_image(np.array(v))
            if any(w):
                reduced.append(w)
        if reduced:
            R, piv = exactalg.rref(np.array(reduced), field)
            self.basis = [R[r] for r in range(len(piv))]
            self.pivots = piv
        else:
            self.basis = []
            self.pivots = []

    def _init_sparse_q(self, X, degree, n):
        self._sparse = True
        if degree > 0 and X.n_simplices(degree - 1):
            im_rows = _transpose_rows(
                X.coboundary_rows(degree - 1), X.n_simplices(degree - 1)
            )
            self.im_rows_s, self.im_pivots = exactalg.sparse_rref_q(im_rows)
        else:
            self.im_rows_s, self.im_pivots = [], []
        _, kern = exactalg.sparse_kernel_q(X.coboundary_rows(degree), n)
        reduced = []
        for v in kern:
            w = self._reduce_sparse(v)
            if w:
                reduced.append(_clear_denominators(w))
        if reduced:
            self.basis_rows_s, self.pivots = exactalg.sparse_rref_q(reduced)
        else:
            self.basis_rows_s, self.pivots = [], []
        self.basis = []
        for row in self.basis_rows_s:
            dense = np.zeros(n, dtype=object)
            for c, val in row.items():
                dense[c] = val
            self.basis.append(dense)

    def __len__(self):
        return len(self.basis)

    def _reduce_by_image(self, v: np.ndarray) -> np.ndarray:
        R, piv = self.im_rref, self.im_pivots
        p = self.field.p
        v = v % p
        for r, pc in enumerate(piv):
            if v[pc]:
                v = (v - int(v[pc]) * R[r]) % p
        return v

    def _reduce_sparse(self, v: dict) -> dict:
        v = {c: Fraction(x) for c, x in v.items() if x}
        for row, pc in zip(self.im_rows_s, self.im_pivots):
            f = v.get(pc)
            if f:
                for c, val in row.items():
                    nv = v.get(c, 0) - f * val
                    if nv:
                        v[c] = nv
                    else:
                        v.pop(c, None)
        return v

    def express(self, cochain) -> np.ndarray:
        """Coefficients of a cocycle's class in the basis; errors otherwise."""
        if not self._sparse:
            p = self.field.p
            w = self._reduce_by_image(np.array(cochain))
            coeffs = np.zeros(len(self.basis), dtype=np.int64)
            for r, pc in enumerate(self.pivots):
                if w[pc]:
                    coeffs[r] = int(w[pc]) % p
                    w = (w - coeffs[r] * self.basis[r]) % p
            if any(w):
                raise ValueError("cochain is not a cocycle modulo coboundaries")
            return coeffs
        if isinstance(cochain, dict):
            sparse = cochain
        else:
            sparse = {c: cochain[c] for c in range(len(cochain)) if cochain[c]}
        w = self._reduce_sparse(sparse)
        coeffs = np.zeros(len(self.basis), dtype=object)
        for r, pc in enumerate(self.pivots):
            f = w.get(pc)
            if f:
                coeffs[r] = f
                for c, val in self.basis_rows_s[r].items():
                    nv = w.get(c, 0) - f * val
                    if nv:
                        w[c] = nv
                    else:
                        w.pop(c, None)
        if w:
            raise ValueError("cochain is not a cocycle modulo coboundaries")
        return coeffs


def _clear_denominators(row: dict) -> dict[int, int]:
    from math import gcd, lcm

    denoms = [Fraction(v).denominator for v in row.values()]
    mult = 1
    for d in denoms:
        mult = lcm(mult, d)
    ints = {c: int(Fraction(v) * mult) for c, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _transpose_rows(rows: list[dict[int, int]], ncols_in: int) -> list[dict[int, int]]:
    out: list[dict[int, int]] = [dict() for _ in range(ncols_in)]
    for r, row in enumerate(rows):
        for c, v in row.items():
            out[c][r] = v
    return out


def _rows_to_matrix(rows: list[dict[int, int]], ncols: int, field) -> np.ndarray:
    if isinstance(field, PrimeField):
        M = np.zeros((len(rows), ncols), dtype=np.int64)
        for i, row in enumerate(rows):
            for c, v in row.items():
                M[i, c] = v % field.p
    else:
        M = np.zeros((len(rows), ncols), dtype=object)
        for i, row in enumerate(rows):
            for c, v in row.items():
                M[i, c] = v
    return M


# ---------------------------------------------------------------------------
# Cohomology ring / Poincare duality
# ---------------------------------------------------------------------------

@dataclass
class CohomologyRing:
    """Graded cohomology ring data: bases, structure constants, orientation.

    ``structure[(i, j)][a][b]`` is the coefficient vector of the product of
    the a-th degree-i and b-th degree-j basis classes in the degree-(i+j)
    basis.  ``orientation`` is the functional on the top-degree basis when
    the top Betti number is one (normalised to 1 on the basis class).
    """

    field: object
    betti: tuple[int, ...]
    top_degree: int
    structure: dict
    orientation: np.ndarray | None

    def pairing_matrix(self, i: int) -> np.ndarray:
        """Gram matrix of H^i x H^{n-i} -> H^n composed with the orientation."""
        n = self.top_degree
        bi, bj = self.betti[i], self.betti[n - i]
        M = np.zeros((bi, bj), dtype=object)
        for a in range(bi):
            for b in range(bj):
                coeffs = self.structure[(i, n - i)][a][b]
                M[a, b] = sum(
                    c * o for c, o in zip(coeffs, self.orientation)
                ) if self.orientation is not None else 0
                if isinstance(self.field, PrimeField):
                    M[a, b] = int(M[a, b]) % self.field.p
        return M


@dataclass(frozen=True)
class PDResult:
    is_pd: bool
    formal_dim: int | None
    orientation: np.ndarray | None
    failures: tuple[str, ...] = ()


def cup_pairing(X: SimplicialComplex, field) -> CohomologyRing:
    """Cohomology ring with cup products on reduced-echelon cocycle bases."""
    key = ("ring", field.name)
    if key in X._cache:
        return X._cache[key]
    betti = X.cohomology(field).betti
    top = max((i for i, b in enumerate(betti) if b), default=0)
    bases = {i: X.cohomology_basis(field, i) for i in range(X.dim + 1)}
    structure: dict = {}
    for i in range(top + 1):
        for j in range(top + 1 - i):
            if betti[i] == 0 or betti[j] == 0:
                continue
            tbl = []
            target = bases[i + j]
            for a in range(betti[i]):
                row = []
                for b in range(betti[j]):
                    cochain = X.cup_cochain(field, i, j, bases[i].basis[a], bases[j].basis[b])
                    row.append(target.express(cochain))
                tbl.append(row)
            structure[(i, j)] = tbl
    orientation = None
    if betti[top] == 1:
        if isinstance(field, PrimeField):
            orientation = np.array([1], dtype=np.int64)
        else:
            orientation = np.array([Fraction(1)], dtype=object)
    ring = CohomologyRing(field, betti, top, structure, orientation)
    X._cache[key] = ring
    return ring


def pd_check(X: SimplicialComplex, field) -> PDResult:
    """Poincare duality over a field: b_n = 1 and all cup pairings perfect.

    The formal dimension is the top degree with nonzero cohomology; a
    cohomologically trivial complex (a point up to the field) passes with
    formal dimension 0.
    """
    comps = X.connected_components()
    if len(comps) != 1:
        raise ValueError(f"pd_check requires a connected complex ({len(comps)} components)")
    ring = cup_pairing(X, field)
    n = ring.top_degree
    failures = []
    if ring.betti[n] != 1:
        failures.append(f"top Betti number b_{n} = {ring.betti[n]} != 1")
    else:
        for i in range(n + 1):
            M = ring.pairing_matrix(i)
            if M.shape[0] != M.shape[1]:
                failures.append(
                    f"pairing H^{i} x H^{n - i} not square: {M.shape[0]} vs {M.shape[1]}"
                )
            elif M.shape[0] and exactalg.rank(M, field) != M.shape[0]:
                failures.append(f"pairing H^{i} x H^{n - i} is degenerate")
    ok = not failures
    return PDResult(
        is_pd=ok,
        formal_dim=n if ok else None,
        orientation=ring.orientation if ok else None,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# Constructors: subdivision, join, suspension, product
# ---------------------------------------------------------------------------

def bary_label(labels: tuple[str, ...]) -> str:
    return "(" + "|".join(labels) + ")"


def barycentric_subdivision(X: SimplicialComplex) -> SimplicialComplex:
    """Barycentric subdivision: vertices are simplices, simplices are chains.

    The new vertex order sorts barycenters by (dimension, source simplex),
    so the construction is deterministic and homeomorphism-invariant data
    (Euler characteristic, Betti numbers) is preserved.
    """
    all_simps = []
    for d in range(X.dim + 1):
        all_simps.extend(X.simplices(d))
    order = tuple(
        bary_label(tuple(X.vertices[v] for v in s))
        for s in sorted(all_simps, key=lambda s: (len(s), s))
    )
    facets = []

    def chains(s: Simplex, chain: list[Simplex]):
        if len(s) == 1:
            facets.append(tuple(chain))
            return
        for drop in range(len(s)):
            face = s[:drop] + s[drop + 1:]
            chains(face, chain + [face])

    for f in X.facets:
        chains(f, [f])
    label_facets = [
        [bary_label(tuple(X.vertices[v] for v in s)) for s in chain] for chain in facets
    ]
    return SimplicialComplex.from_facets(label_facets, vertex_order=order)


def _relabel_disjoint(X: SimplicialComplex, Y: SimplicialComplex):
    clash = set(X.vertices) & set(Y.vertices)
    if not clash:
        return X, Y
    xv = tuple("L:" + v for v in X.vertices)
    yv = tuple("R:" + v for v in Y.vertices)
    return SimplicialComplex(xv, X.facets), SimplicialComplex(yv, Y.facets)


def join(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join: all unions of a simplex of X and a simplex of Y."""
    X, Y = _relabel_disjoint(X, Y)
    order = X.vertices + Y.vertices
    facets = []
    for f in X.facets:
        for g in Y.facets:
            facets.append(
                tuple(X.vertices[v] for v in f) + tuple(Y.vertices[v] for v in g)
            )
    return SimplicialComplex.from_facets(facets, vertex_order=order)


def suspension(X: SimplicialComplex, poles: tuple[str, str] = ("N*", "S*")) -> SimplicialComplex:
    lo, hi = poles
    while lo in X.vertices or hi in X.vertices:
        lo, hi = lo + "*", hi + "*"
    two_points = SimplicialComplex((lo, hi), ((0,), (1,)))
    return join(X, two_points)


def product(X: SimplicialComplex, Y: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of |X| x |Y| determined by the vertex orders.

    Top cells are monotone unit-step lattice paths through each facet pair's
    vertex grid; no new vertices are introduced.
    """
    pair_label = {}
    order = []
    for xi, xv in enumerate(X.vertices):
        for yi, yv in enumerate(Y.vertices):
            lbl = f"({xv},{yv})"
            pair_label[(xi, yi)] = lbl
            order.append(lbl)
    facets = []
    for f in X.facets:
        for g in Y.facets:
            a, b = len(f) - 1, len(g) - 1

            def walk(i, j, path):
                if i == a and j == b:
                    facets.append(tuple(pair_label[(v, w)] for v, w in path))
                    return
                if i < a:
                    walk(i + 1, j, path + [(f[i + 1], g[j])])
                if j < b:
                    walk(i, j + 1, path + [(f[i], g[j + 1])])

            walk(0, 0, [(f[0], g[0])])
    return SimplicialComplex.from_facets(facets, vertex_order=tuple(order))


def link(X: SimplicialComplex, simplex_labels) -> SimplicialComplex:
    """Link of a simplex: all faces disjoint from it whose union is a face."""
    s = tuple(sorted(X._vertex_index[str(v)] for v in simplex_labels))
    d = len(s) - 1
    if X._simplex_index.get(d, {}).get(s) is None:
        raise ValueError("not a simplex of the complex")
    sset = set(s)
    candidates = []
    for f in X.facets:
        if sset <= set(f):
            rest = tuple(v for v in f if v not in sset)
            if rest:
                candidates.append(tuple(X.vertices[v] for v in rest))
    if not candidates:
        return SimplicialComplex.empty()
    return SimplicialComplex.from_simplices(X.vertices, candidates)
