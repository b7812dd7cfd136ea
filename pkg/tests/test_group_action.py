"""Group action tests: validation, regularity, fixed sets, induced maps,
Lefschetz numbers, Bockstein condition, T/F/R decomposition, quotients."""

from __future__ import annotations

import numpy as np
import pytest

from betticong import corpus
from betticong.exactalg import GF, QQ
from betticong.group_action import (
    bockstein_condition,
    cochain_pullback_matrix,
    fixed_set_cohomology,
    fixed_subcomplex,
    induced_cohomology_action,
    is_regular,
    lefschetz_number,
    make_regular,
    quotient_complex,
    subdivide_action,
    tfr_decomposition,
    trivial_action,
    trivial_rational_action_check,
    validate_action,
)
from betticong.simplicial import SimplicialComplex


def rot(prefix, n):
    return {f"{prefix}{i}": f"{prefix}{(i + 1) % n}" for i in range(n)}


def rank_mod_oracle(M, p):
    """Plain-loop exact rank over F_p (independent of the library path)."""
    A = [[int(x) % p for x in row] for row in np.asarray(M)]
    m = len(A)
    n = len(A[0]) if m else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_validate_pentagon_rotation():
    a = corpus.free_polygon_action(5)
    assert a.p == 5 and not a.is_trivial()


def test_validate_order_mismatch():
    with pytest.raises(ValueError, match="length 5, not 1 or 3"):
        validate_action(corpus.polygon(5), rot("v", 5), 3)


def test_validate_transposition_rejected():
    with pytest.raises(ValueError, match="not 1 or 3"):
        validate_action(corpus.polygon(3), {"v0": "v1", "v1": "v0"}, 3)


def test_validate_non_simplicial_rejected():
    # Swap-free map on a path complex that breaks an edge.
    X = SimplicialComplex.from_facets([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")])
    bad = {"a": "b", "b": "c", "c": "a"}  # d, e fixed; edge (d,e) ok, edge (c,d)->(a,d) missing
    with pytest.raises(ValueError, match="not a simplex"):
        validate_action(X, bad, 3)


def test_validate_p2_rejected():
    with pytest.raises(ValueError, match="odd prime"):
        validate_action(corpus.polygon(4), rot("v", 4), 2)


def test_identity_is_valid():
    a = trivial_action(corpus.torus(), 3)
    assert a.is_trivial()


# ---------------------------------------------------------------------------
# regularity / fixed sets
# ---------------------------------------------------------------------------

def scan_offenders(action):
    """Oracle: direct scan for setwise-invariant, not pointwise-fixed simplices."""
    X = action.complex
    m = action.mapping
    out = []
    for d in range(X.dim + 1):
        for s in X.simplex_labels(d):
            if tuple(sorted(m[v] for v in s)) == s and any(m[v] != v for v in s):
                out.append(s)
    return out


def test_sphere_rotation_already_regular():
    a = corpus.sphere_rotation(3)
    assert scan_offenders(a) == []
    assert is_regular(a)
    assert make_regular(a) is a


def test_free_polygon_regular():
    assert is_regular(corpus.free_polygon_action(5))


def test_disc_rotation_needs_one_subdivision():
    a = corpus.disc_rotation()
    assert scan_offenders(a) == [("a0", "a1", "a2")]
    reg = make_regular(a)
    assert reg.complex.n_simplices(0) == 7  # barycentric subdivision of a triangle
    assert is_regular(reg)
    F = fixed_subcomplex(reg)
    assert F.f_vector == (1,)  # the barycenter: a disc rotation fixes its center


def test_subdivided_action_regular_after_one_more():
    for a in (corpus.sphere_rotation(3), corpus.torus_rotation(3), corpus.disc_rotation()):
        s = subdivide_action(a)
        r = s
        rounds = 0
        while not is_regular(r):
            r = subdivide_action(r)
            rounds += 1
        assert rounds <= 1


def test_fixed_free_rotation_empty():
    F = fixed_subcomplex(corpus.free_polygon_action(5))
    assert F.dim == -1 and F.euler_characteristic() == 0


def test_fixed_sphere_rotation_two_points():
    F = fixed_subcomplex(corpus.sphere_rotation(3))
    assert F.f_vector == (2,)
    assert F.cohomology(QQ).betti == (2,)


def test_fixed_second_factor_action_two_circles():
    a = corpus.second_factor_sphere_action()
    F = fixed_subcomplex(a)
    assert F.cohomology(QQ).total == 4
    assert len(F.connected_components()) == 2


def test_fixed_not_regular_rejected():
    a = corpus.disc_rotation()
    with pytest.raises(ValueError, match="make_regular"):
        fixed_subcomplex(a)


def test_fixed_subcomplex_same_for_powers():
    for a in (corpus.sphere_rotation(5), corpus.s3_free_action()):
        F1 = fixed_subcomplex(a)
        for k in range(2, a.p):
            Fk = fixed_subcomplex(a.power(k))
            assert F1.vertices == Fk.vertices and F1.facets == Fk.facets


# ---------------------------------------------------------------------------
# induced maps on cohomology
# ---------------------------------------------------------------------------

def test_rotation_trivial_on_circle_cohomology():
    a = corpus.free_polygon_action(5)
    mats = induced_cohomology_action(a, QQ)
    for M in mats:
        assert M.shape == (1, 1) and M[0, 0] == 1


def test_identity_action_identity_matrices():
    a = corpus.trivial_torus_action()
    for field in (QQ, GF(3)):
        for M in induced_cohomology_action(a, field):
            b = M.shape[0]
            assert (np.asarray(M) == np.eye(b, dtype=int)).all()


def test_free_join_orientation_preserved():
    a = corpus.s3_free_action()
    mats = induced_cohomology_action(a, QQ)
    assert mats[0][0, 0] == 1
    assert mats[3][0, 0] == 1


def test_pullback_has_order_p():
    a = corpus.sphere_rotation(3)
    for field in (QQ, GF(3)):
        for d in range(a.complex.dim + 1):
            P = cochain_pullback_matrix(a, d, field)
            Pp = np.linalg.matrix_power(P.astype(object), 3)
            if field is not QQ:
                Pp = Pp % field.p
            assert (Pp == np.eye(P.shape[0], dtype=int)).all()


def test_induced_action_order_divides_p():
    for a in (corpus.s2xs2_rotation(3), corpus.wedge_spheres_action()):
        for M in induced_cohomology_action(a, GF(3)):
            b = M.shape[0]
            Mp = np.linalg.matrix_power(M.astype(object), 3) % 3
            assert (Mp == np.eye(b, dtype=int)).all()


# ---------------------------------------------------------------------------
# Lefschetz numbers vs fixed-set Euler characteristics
# ---------------------------------------------------------------------------

def test_lefschetz_free_rotation_zero():
    assert lefschetz_number(corpus.free_polygon_action(5)) == 0


def test_lefschetz_sphere_rotation_two():
    a = corpus.sphere_rotation(3)
    assert lefschetz_number(a) == 2
    assert fixed_set_cohomology(a, QQ).total == 2  # chi(S^0) = 2 as well


def test_lefschetz_trivial_torus():
    assert lefschetz_number(corpus.trivial_torus_action()) == 0


# ---------------------------------------------------------------------------
# trivial rational action
# ---------------------------------------------------------------------------

def test_trivial_rational_small_betti():
    a = corpus.sphere_rotation(3)  # dim H^* = 2 < 3
    assert trivial_rational_action_check(a)


def test_trivial_rational_identity():
    assert trivial_rational_action_check(corpus.trivial_torus_action())


def test_minimal_polynomial_bound_over_corpus():
    for name, a in corpus.corpus_actions().items():
        if name == "s2xs2_rotation_p7":
            continue  # rational bases on the large product are exercised elsewhere
        total = a.complex.cohomology(QQ).total
        if total < a.p:
            assert trivial_rational_action_check(a), name


# ---------------------------------------------------------------------------
# Bockstein condition
# ---------------------------------------------------------------------------

def test_bockstein_torsion_free_complexes():
    for X in (corpus.sphere_suspension(3), corpus.torus(), corpus.s3_join()):
        assert bockstein_condition(X, 3)
        assert bockstein_condition(X, 5)


def test_bockstein_rp2_p3():
    # Only 2-torsion: fine at p = 3.
    assert bockstein_condition(corpus.rp2_six_vertex(), 3)


def test_bockstein_lens_space_fails_p3():
    L = corpus.lens_space()
    assert not bockstein_condition(L, 3)
    # SNF oracle: the Z/3 must sit in H^2, i.e. in the divisors of delta^1.
    from betticong.exactalg import smith_normal_form

    divisors = smith_normal_form(L.coboundary_matrix(1).astype(object)).divisors
    assert any(d % 3 == 0 and d > 1 for d in divisors)
    assert L.cohomology(GF(3)).betti == (1, 1, 1, 1)


# ---------------------------------------------------------------------------
# T/F/R decomposition
# ---------------------------------------------------------------------------

def test_tfr_trivial_torus():
    d = tfr_decomposition(corpus.trivial_torus_action())
    assert d.t == (1, 2, 1) and sum(d.f) == 0 and sum(d.r) == 0
    assert d.dim_t == 4
    assert not d.hypothesis_failing


def test_tfr_free_join():
    d = tfr_decomposition(corpus.s3_free_action())
    assert d.dim_t == 2 and d.dim_f == 0 and d.dim_r == 0
    assert d.t == (1, 0, 0, 1)


def test_tfr_wedge_has_free_block():
    d = tfr_decomposition(corpus.wedge_spheres_action())
    assert d.t[0] == 1
    assert d.f[2] == 1 and d.t[2] == 0 and d.r[2] == 0
    # Kernel-profile oracle: the permutation block on H^2 is a single J_3.
    a = corpus.wedge_spheres_action()
    M = induced_cohomology_action(a, GF(3))[2]
    N = (M - np.eye(3, dtype=np.int64)) % 3
    dims = [3 - rank_mod_oracle(np.linalg.matrix_power(N, k) % 3, 3) for k in (1, 2, 3)]
    assert dims == [1, 2, 3]


def test_tfr_dimension_bookkeeping():
    for name, a in corpus.corpus_actions().items():
        if name == "s2xs2_rotation_p7":
            continue
        d = tfr_decomposition(a)
        betti = a.complex.cohomology(GF(a.p)).betti
        for i, b in enumerate(betti):
            total = d.t[i] + a.p * d.f[i] + (a.p - 1) * d.r[i] + sum(d.other[i])
            assert total == b, (name, i)


def test_tfr_invariant_lines_count():
    # One sigma^*-invariant line per Jordan block.
    for a in (corpus.wedge_spheres_action(), corpus.s3_free_action()):
        p = a.p
        d = tfr_decomposition(a)
        mats = induced_cohomology_action(a, GF(p))
        for i, M in enumerate(mats):
            b = M.shape[0]
            if not b:
                continue
            N = (M - np.eye(b, dtype=np.int64)) % p
            inv_dim = b - rank_mod_oracle(N, p)
            assert inv_dim == d.t[i] + d.f[i] + d.r[i] + len(d.other[i])


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

def test_quotient_pentagon_circle():
    Q, reg = quotient_complex(corpus.free_polygon_action(5))
    assert Q.cohomology(QQ).betti == (1, 1)
    assert Q.euler_characteristic() * 5 == reg.complex.euler_characteristic()


def test_quotient_lens_space_betti():
    L = corpus.lens_space()
    assert L.cohomology(GF(3)).betti == (1, 1, 1, 1)
    assert L.cohomology(QQ).betti == (1, 0, 0, 1)


def test_quotient_chi_divides():
    for a in (corpus.free_polygon_action(3), corpus.free_polygon_action(5)):
        Q, reg = quotient_complex(a)
        assert Q.euler_characteristic() * a.p == reg.complex.euler_characteristic()


def test_quotient_rejects_nonfree():
    with pytest.raises(ValueError, match="free"):
        quotient_complex(corpus.sphere_rotation(3))
