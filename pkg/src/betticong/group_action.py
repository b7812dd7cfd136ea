"""Simplicial Z/p actions and their cohomological invariants.

An action is a vertex permutation of order dividing p (p an odd prime) that
sends simplices to simplices.  Regularity (setwise-invariant implies
pointwise-fixed) is enforced by barycentric subdivision so that the fixed
subcomplex genuinely computes the fixed set's cohomology; quotients demand
the stronger condition that simplex orbits embed, which may need one more
subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exactalg
from .exactalg import GF, QQ, PrimeField
from .simplicial import (
    GradedBetti,
    SimplicialComplex,
    barycentric_subdivision,
    bary_label,
)


@dataclass(frozen=True)
class GroupAction:
    """A validated Z/p generator acting simplicially on a complex."""

    complex: SimplicialComplex
    p: int
    vertex_map: tuple[tuple[str, str], ...]  # full map, sorted by source

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.vertex_map)

    def perm(self) -> list[int]:
        """Generator as a permutation of vertex indices."""
        idx = self.complex._vertex_index
        m = self.mapping
        return [idx[m[v]] for v in self.complex.vertices]

    def power(self, k: int) -> "GroupAction":
        k %= self.p
        m = self.mapping
        out = {}
        for v in self.complex.vertices:
            w = v
            for _ in range(k):
                w = m[w]
            out[v] = w
        return GroupAction(self.complex, self.p, tuple(sorted(out.items())))

    def is_trivial(self) -> bool:
        return all(a == b for a, b in self.vertex_map)


def validate_action(X: SimplicialComplex, sigma: dict, p: int) -> GroupAction:
    """Check sigma generates a simplicial Z/p action; errors are specific.

    Vertices omitted from ``sigma`` are fixed.  Requires p an odd prime,
    sigma a vertex bijection with sigma^p = id, and every simplex mapped to
    a simplex.
    """
    if p == 2 or not exactalg._is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    mapping = {str(k): str(v) for k, v in sigma.items()}
    vertices = set(X.vertices)
    unknown = (set(mapping) | set(mapping.values())) - vertices
    if unknown:
        raise ValueError(f"action references unknown vertices: {sorted(unknown)}")
    for v in X.vertices:
        mapping.setdefault(v, v)
    if set(mapping.values()) != vertices:
        raise ValueError("vertex map is not a permutation")
    # Order must divide p: every cycle has length 1 or p.
    seen = set()
    for v in X.vertices:
        if v in seen:
            continue
        cycle = [v]
        w = mapping[v]
        while w != v:
            cycle.append(w)
            w = mapping[w]
        seen.update(cycle)
        if len(cycle) not in (1, p):
            raise ValueError(
                f"permutation order mismatch: cycle {tuple(cycle)} has length "
                f"{len(cycle)}, not 1 or {p}"
            )
    idx = X._vertex_index
    for f in X.facets:
        image = tuple(sorted(idx[mapping[X.vertices[v]]] for v in f))
        if X._simplex_index.get(len(f) - 1, {}).get(image) is None:
            labels = tuple(X.vertices[v] for v in f)
            raise ValueError(f"image of simplex {labels} is not a simplex")
    return GroupAction(X, p, tuple(sorted(mapping.items())))


def trivial_action(X: SimplicialComplex, p: int) -> GroupAction:
    return validate_action(X, {}, p)


# ---------------------------------------------------------------------------
# Regularity and fixed sets
# ---------------------------------------------------------------------------

def _invariant_offender(action: GroupAction) -> tuple | None:
    """First setwise-invariant simplex that is not pointwise fixed."""
    X = action.complex
    perm = action.perm()
    for d in range(X.dim + 1):
        index = X._simplex_index[d]
        for s in X.simplices(d):
            img = tuple(sorted(perm[v] for v in s))
            if img == s and any(perm[v] != v for v in s):
                return s
            if img != s and index.get(img) is None:  # pragma: no cover
                raise AssertionError("action stopped being simplicial")
    return None


def is_regular(action: GroupAction) -> bool:
    return _invariant_offender(action) is None


def subdivide_action(action: GroupAction) -> GroupAction:
    """Barycentric subdivision with the induced action on barycenters."""
    X = action.complex
    S = barycentric_subdivision(X)
    m = action.mapping
    idx = X._vertex_index
    new_map = {}
    for d in range(X.dim + 1):
        for s in X.simplex_labels(d):
            image = tuple(sorted((m[v] for v in s), key=idx.get))
            new_map[bary_label(s)] = bary_label(image)
    return validate_action(S, new_map, action.p)


def make_regular(action: GroupAction) -> GroupAction:
    """Subdivide until setwise-invariant simplices are pointwise fixed.

    Betti data is unchanged (subdivision is a homeomorphism); at most two
    rounds are ever needed.
    """
    current = action
    for _ in range(3):
        if is_regular(current):
            return current
        current = subdivide_action(current)
    raise AssertionError("regularity not reached after 3 subdivisions")


def fixed_subcomplex(action: GroupAction) -> SimplicialComplex:
    """Subcomplex of pointwise-fixed simplices; requires a regular action."""
    if not is_regular(action):
        raise ValueError(
            "action is not regular; apply make_regular before taking fixed sets"
        )
    X = action.complex
    m = action.mapping
    fixed_vertices = {v for v in X.vertices if m[v] == v}
    if not fixed_vertices:
        return SimplicialComplex.empty()
    candidates = []
    for f in X.facets:
        labels = [X.vertices[v] for v in f]
        kept = tuple(l for l in labels if l in fixed_vertices)
        if kept:
            candidates.append(kept)
    if not candidates:
        return SimplicialComplex.empty()
    return SimplicialComplex.from_simplices(X.vertices, candidates)


# ---------------------------------------------------------------------------
# Induced maps on cochains and cohomology
# ---------------------------------------------------------------------------

def pullback_permutation(action: GroupAction, degree: int) -> tuple[list[int], list[int]]:
    """sigma^# on C^degree as (simplex permutation, signs).

    (sigma^# a)[s] = signs[s] * a[perm[s]], where perm sends the index of a
    simplex to the index of its sorted image and the sign is the sorting
    permutation's parity.
    """
    X = action.complex
    key = ("pullperm", action.vertex_map, degree)
    if key in X._cache:
        return X._cache[key]
    perm_v = action.perm()
    simps = X.simplices(degree)
    index = X._simplex_index.get(degree, {})
    perm, signs = [], []
    for s in simps:
        img = [perm_v[v] for v in s]
        order = sorted(range(len(img)), key=lambda k: img[k])
        perm.append(index[tuple(sorted(img))])
        signs.append(_permutation_sign(order))
    X._cache[key] = (perm, signs)
    return perm, signs


def apply_pullback(action: GroupAction, degree: int, vec, field):
    """Apply sigma^# to a cochain vector in O(n)."""
    perm, signs = pullback_permutation(action, degree)
    if isinstance(field, PrimeField):
        out = np.zeros(len(perm), dtype=np.int64)
        for s in range(len(perm)):
            out[s] = signs[s] * vec[perm[s]] % field.p
    else:
        out = np.zeros(len(perm), dtype=object)
        for s in range(len(perm)):
            out[s] = signs[s] * vec[perm[s]]
    return out


def cochain_pullback_matrix(action: GroupAction, degree: int, field) -> np.ndarray:
    """Matrix of the pullback sigma^# on C^degree in the simplex basis."""
    X = action.complex
    perm, signs = pullback_permutation(action, degree)
    n = len(perm)
    dtype = np.int64 if isinstance(field, PrimeField) else object
    M = np.zeros((n, n), dtype=dtype)
    for i in range(n):
        # (sigma^# a)(s) = sign * a(sigma(s)); column perm[i] feeds row i.
        M[i, perm[i]] = signs[i] if dtype is object else signs[i] % field.p
    return M


def _permutation_sign(order: list[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def induced_cohomology_action(action: GroupAction, field) -> list[np.ndarray]:
    """Per-degree matrices of sigma^* on H^*(X; field) in the echelon bases."""
    X = action.complex
    key = ("gstar", field.name, action.vertex_map)
    if key in X._cache:
        return X._cache[key]
    out = []
    for d in range(X.dim + 1):
        basis = X.cohomology_basis(field, d)
        b = len(basis)
        dtype = np.int64 if isinstance(field, PrimeField) else object
        M = np.zeros((b, b), dtype=dtype)
        for j in range(b):
            image = apply_pullback(action, d, basis.basis[j], field)
            M[:, j] = basis.express(image)
        out.append(M)
    X._cache[key] = out
    return out


def lefschetz_number(action: GroupAction) -> int:
    """Lefschetz number: alternating trace of sigma^* on rational cohomology."""
    mats = induced_cohomology_action(action, QQ)
    total = Fraction(0)
    for d, M in enumerate(mats):
        tr = sum((M[i, i] for i in range(M.shape[0])), Fraction(0))
        total += (-1) ** d * tr
    assert total.denominator == 1
    return int(total)


def trivial_rational_action_check(action: GroupAction) -> bool:
    """Whether sigma^* = id on H^*(X;Q).

    A linear map of order p on a rational space of dimension below p - 1
    has minimal polynomial x - 1, so this must hold whenever the total
    rational Betti number is smaller than p; the property tests pin that.
    """
    for M in induced_cohomology_action(action, QQ):
        n = M.shape[0]
        for i in range(n):
            for j in range(n):
                if M[i, j] != (1 if i == j else 0):
                    return False
    return True


# ---------------------------------------------------------------------------
# Bockstein condition and the T/F/R decomposition
# ---------------------------------------------------------------------------

def bockstein_condition(X: SimplicialComplex, p: int) -> bool:
    """True iff no integral elementary divisor has p-adic valuation exactly 1.

    Equivalent to: every mod-p class lifts to Z/p^2, i.e. H^*(X;Z_(p)) has
    no Z/p direct summand.
    """
    profiles = X.torsion_valuation_profile(p)
    return all(1 not in vals for vals in profiles.values())


@dataclass(frozen=True)
class TFRDecomposition:
    """Per-degree F_p[Z/p]-module structure of H^*(X;F_p) from block sizes.

    ``t[i]``, ``f[i]``, ``r[i]`` count Jordan blocks of sigma^* - id of
    sizes 1, p and p-1 (trivial, free and augmentation-kernel summands);
    ``other[i]`` lists any remaining block sizes, which the Bockstein
    condition (``bockstein_ok``) rules out.
    """

    p: int
    t: tuple[int, ...]
    f: tuple[int, ...]
    r: tuple[int, ...]
    other: tuple[tuple[int, ...], ...]
    bockstein_ok: bool

    @property
    def dim_t(self) -> int:
        return sum(self.t)

    @property
    def dim_f(self) -> int:
        return self.p * sum(self.f)

    @property
    def dim_r(self) -> int:
        return (self.p - 1) * sum(self.r)

    @property
    def hypothesis_failing(self) -> bool:
        return not self.bockstein_ok or any(self.other)

    def block_sizes(self, i: int) -> list[int]:
        sizes = [1] * self.t[i] + [self.p] * self.f[i] + [self.p - 1] * self.r[i]
        sizes += list(self.other[i])
        return sorted(sizes, reverse=True)


def tfr_decomposition(action: GroupAction, p: int | None = None) -> TFRDecomposition:
    """Classify H^i(X;F_p) into trivial/free/ker-epsilon summands per degree."""
    p = p or action.p
    X = action.complex
    fieldp = GF(p)
    mats = induced_cohomology_action(action, fieldp)
    t, f, r, other = [], [], [], []
    for M in mats:
        b = M.shape[0]
        N = (M - np.eye(b, dtype=np.int64)) % p
        sizes = exactalg.nilpotent_block_sizes(N, fieldp, p) if b else []
        t.append(sum(1 for s in sizes if s == 1))
        f.append(sum(1 for s in sizes if s == p))
        r.append(sum(1 for s in sizes if s == p - 1 and p - 1 != 1))
        other.append(tuple(s for s in sizes if s not in (1, p - 1, p)))
    return TFRDecomposition(
        p=p,
        t=tuple(t),
        f=tuple(f),
        r=tuple(r),
        other=tuple(other),
        bockstein_ok=bockstein_condition(X, p),
    )


# ---------------------------------------------------------------------------
# Quotients of free actions
# ---------------------------------------------------------------------------

def _vertex_orbit_reps(action: GroupAction) -> dict[str, str]:
    m = action.mapping
    reps = {}
    for v in action.complex.vertices:
        orbit = [v]
        w = m[v]
        while w != v:
            orbit.append(w)
            w = m[w]
        rep = min(orbit)
        for u in orbit:
            reps[u] = rep
    return reps


def _quotient_obstruction(action: GroupAction) -> str | None:
    """Why simplex orbits do not yet form a simplicial complex, if they don't."""
    X = action.complex
    m = action.mapping
    reps = _vertex_orbit_reps(action)
    image_owner: dict[tuple, tuple] = {}
    for d in range(X.dim + 1):
        for s in X.simplex_labels(d):
            rep_set = tuple(sorted({reps[v] for v in s}))
            if len(rep_set) != len(s):
                return f"simplex {s} meets a vertex orbit twice"
            orbit = [tuple(sorted(s))]
            cur = s
            for _ in range(action.p - 1):
                cur = tuple(m[v] for v in cur)
                orbit.append(tuple(sorted(cur)))
            canon = min(orbit)
            owner = image_owner.setdefault(rep_set, canon)
            if owner != canon:
                return (
                    f"distinct simplex orbits {owner} and {canon} share the "
                    f"vertex-orbit image {rep_set}"
                )
    return None


def quotient_complex(action: GroupAction, max_subdivisions: int = 3):
    """Quotient of a free action: simplices are orbits, lex-least representative.

    Rejects non-free actions.  Subdivides barycentrically (preserving the
    action) until simplex orbits embed in the vertex-orbit set, which the
    classical regularity theorem guarantees after at most two rounds.
    Returns ``(quotient, regularized_action)``.
    """
    current = action
    offender = _invariant_offender(current)
    if offender is not None or any(a == b for a, b in current.vertex_map):
        raise ValueError("quotient_complex requires a free action")
    for _ in range(max_subdivisions + 1):
        if _quotient_obstruction(current) is None:
            break
        current = subdivide_action(current)
    else:
        raise AssertionError("quotient regularity not reached")
    X = current.complex
    reps = _vertex_orbit_reps(current)
    order = sorted(set(reps.values()))
    facet_images = {
        tuple(sorted({reps[v] for v in f})) for f in (
            tuple(X.vertices[v] for v in facet) for facet in X.facets
        )
    }
    quotient = SimplicialComplex.from_facets(sorted(facet_images), vertex_order=order)
    return quotient, current


# ---------------------------------------------------------------------------
# Convenience wrappers used throughout the theorem checks
# ---------------------------------------------------------------------------

def fixed_set_cohomology(action: GroupAction, field) -> GradedBetti:
    """Betti data of the fixed set, regularizing first when necessary."""
    reg = make_regular(action)
    F = fixed_subcomplex(reg)
    if F.dim < 0:
        return GradedBetti(field.name, ())
    return F.cohomology(field)
