"""Hypothesis validation and mod-4 congruence verdicts for the main theorems.

Reports are data, never exceptions: the free-sphere counterexamples are
first-class fixtures whose job is to come out NOT APPLICABLE while visibly
violating the congruence.  A congruence is only ever asserted when every
hypothesis on the checklist holds; expensive hypotheses (the full
homology-manifold scan) are skipped, and marked so, once a cheap one fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactalg import GF, QQ
from .group_action import (
    GroupAction,
    fixed_set_cohomology,
    fixed_subcomplex,
    make_regular,
    tfr_decomposition,
)
from .simplicial import SimplicialComplex, link, pd_check
from .pd_algebra import (
    BigradedAlgebra,
    Differential,
    Orientation,
    check_pd,
    euler_and_dim,
    homology,
    odd_congruence,
)


@dataclass(frozen=True)
class Hypothesis:
    name: str
    satisfied: bool | None  # None: not evaluated (earlier hypothesis failed)
    evidence: str = ""


@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    subject: str
    hypotheses: tuple[Hypothesis, ...]
    lhs: int | None
    rhs: int | None
    modulus: int = 4

    @property
    def applicable(self) -> bool:
        return all(h.satisfied for h in self.hypotheses)

    @property
    def congruent(self) -> bool | None:
        """Informational congruence value; only a claim when applicable."""
        if self.lhs is None or self.rhs is None:
            return None
        return (self.lhs - self.rhs) % self.modulus == 0

    @property
    def verdict(self) -> str:
        if not self.applicable:
            return "N/A"
        return "PASS" if self.congruent else "FAIL"

    def lines(self) -> list[str]:
        out = [f"THEOREM {self.theorem} on {self.subject}"]
        for h in self.hypotheses:
            state = "yes" if h.satisfied else ("no" if h.satisfied is not None else "skipped")
            ev = f" ({h.evidence})" if h.evidence else ""
            out.append(f"  hypothesis {h.name}: {state}{ev}")
        out.append(f"  applicable: {'yes' if self.applicable else 'no'}")
        lhs = "-" if self.lhs is None else self.lhs
        rhs = "-" if self.rhs is None else self.rhs
        out.append(
            f"CHECK theorem{self.theorem}: {self.verdict} — {lhs} vs {rhs} (mod {self.modulus})"
        )
        return out


# ---------------------------------------------------------------------------
# Theorem 2 (Z/p, F_p coefficients)
# ---------------------------------------------------------------------------

def check_theorem2(action: GroupAction, p: int | None = None, subject: str = "") -> TheoremReport:
    """F_p-PD + Bockstein + parity hypotheses, then
    dim H^*(X^G) = dim T^* + dim R^*/(p-1) mod 4."""
    p = p or action.p
    X = action.complex
    field = GF(p)
    hyps: list[Hypothesis] = []

    ncomp = len(X.connected_components())
    hyps.append(Hypothesis("connected", ncomp == 1, f"{ncomp} component(s)"))

    decomp = tfr_decomposition(action, p)
    lhs = fixed_set_cohomology(action, field).total
    rhs = decomp.dim_t + sum(decomp.r)

    if ncomp == 1:
        pd = pd_check(X, field)
        hyps.append(
            Hypothesis(
                "fp_poincare_duality",
                pd.is_pd,
                f"formal dimension {pd.formal_dim}" if pd.is_pd else "; ".join(pd.failures),
            )
        )
        if pd.is_pd:
            n = pd.formal_dim
            bock = decomp.bockstein_ok
            hyps.append(
                Hypothesis(
                    "bockstein_vanishes",
                    bock,
                    "no divisor of p-valuation 1" if bock else "Z/p summand present",
                )
            )
            hyps.append(_parity_hypothesis(action, decomp, n, field))
        else:
            hyps.append(Hypothesis("bockstein_vanishes", None))
            hyps.append(Hypothesis("parity", None))
    else:
        hyps.append(Hypothesis("fp_poincare_duality", None))
        hyps.append(Hypothesis("bockstein_vanishes", None))
        hyps.append(Hypothesis("parity", None))

    return TheoremReport(
        theorem="2",
        subject=subject or f"Z/{p} action on {X!r}",
        hypotheses=tuple(hyps),
        lhs=lhs,
        rhs=rhs,
    )


def _parity_hypothesis(action, decomp, n, field) -> Hypothesis:
    if n % 2 == 0:
        return Hypothesis("parity", True, f"n = {n} even")
    m = (n - 1) // 2
    fixed_empty = fixed_set_cohomology(action, field).total == 0
    if fixed_empty:
        return Hypothesis("parity", False, f"n = {n} odd and fixed set empty")
    bad = []
    for i in range(1, m + 1):
        if i % 2 == 0 and i < len(decomp.t) and decomp.t[i]:
            bad.append(f"T^{i} != 0")
        if i % 2 == 1 and i < len(decomp.r) and decomp.r[i]:
            bad.append(f"R^{i} != 0")
    if bad:
        return Hypothesis("parity", False, f"n = {n} odd; " + ", ".join(bad))
    return Hypothesis("parity", True, f"n = {n} odd, fixed set nonempty, T/R window clear")


# ---------------------------------------------------------------------------
# Theorem 1 (algebraic form)
# ---------------------------------------------------------------------------

def check_theorem1_algebraic(
    A: BigradedAlgebra,
    delta: Differential | None,
    phi: Orientation,
    fixed_set_dim: int | None = None,
    subject: str = "",
) -> TheoremReport:
    """Theorem 1 on user-supplied rational cohomology algebras.

    Even formal dimension runs the dim = chi route; odd dimension runs the
    odd-dimension congruence route on (A, delta) and optionally pins the
    homology dimension to a
    supplied fixed-set total Betti number.
    """
    hyps: list[Hypothesis] = []
    hyps.append(Hypothesis("rational_coefficients", A.field is QQ or A.field.char == 0))
    pd = check_pd(A, phi)
    hyps.append(Hypothesis("connected_pd_algebra", pd.is_pd, f"formal dimension {pd.formal_dim}"))
    concentrated = all(e == 0 for e, _ in A.bidegrees)
    hyps.append(Hypothesis("concentrated_in_second_grading", concentrated))
    n = phi.formal_dim
    lhs = rhs = None
    if n % 2 == 0:
        hyps.append(Hypothesis("parity", True, f"n = {n} even: Euler route"))
        total, chi = euler_and_dim(A)
        lhs, rhs = total, chi
    else:
        if delta is None:
            hyps.append(Hypothesis("parity", False, f"n = {n} odd but no differential supplied"))
        else:
            rep = odd_congruence(A, delta, phi)
            hyps.append(
                Hypothesis(
                    "odd_case_hypotheses",
                    rep.applicable,
                    "; ".join(rep.failures) if rep.failures else
                    f"skew form nondegenerate on a {rep.quotient_dim}-dimensional quotient",
                )
            )
            if rep.applicable:
                lhs, rhs = rep.dim_total, rep.dim_homology
                if fixed_set_dim is not None:
                    hyps.append(
                        Hypothesis(
                            "fixed_set_dimension_matches",
                            rep.dim_homology == fixed_set_dim,
                            f"dim H(A, delta) = {rep.dim_homology} vs fixed set {fixed_set_dim}",
                        )
                    )
            else:
                H, _ = homology(A, delta, phi)
                lhs, rhs = A.dim, (H.dim if H is not None else 0)
    return TheoremReport(
        theorem="1-algebraic",
        subject=subject or "rational PD algebra",
        hypotheses=tuple(hyps),
        lhs=lhs if lhs is not None else A.dim,
        rhs=rhs,
    )


# ---------------------------------------------------------------------------
# Homology manifolds: Theorem 4 and the even-codimension check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyManifoldReport:
    is_hm: bool
    pure: bool
    orientable: bool
    dim: int
    failures: tuple[tuple[str, ...], ...] = ()

    @property
    def orientable_hm(self) -> bool:
        return self.is_hm and self.orientable


def homology_manifold_check(X: SimplicialComplex, p: int) -> HomologyManifoldReport:
    """Every link must look like a sphere of complementary dimension over Z_(p).

    A link passes when its reduced Betti numbers over Q and over F_p both
    match the (d - k - 1)-sphere pattern; matching both fields certifies
    there is no p-torsion (universal coefficients).  Orientability: top
    rational Betti number one and no p-torsion in the top integral degree.
    """
    key = ("hm", p)
    if key in X._cache:
        return X._cache[key]
    d = X.dim
    pure = X.is_pure()
    failures: list[tuple[str, ...]] = []
    if pure:
        fieldp = GF(p)
        for k in range(d + 1):
            want_dim = d - k - 1
            for s in X.simplex_labels(k):
                L = link(X, s)
                if not _is_field_sphere(L, want_dim, QQ) or not _is_field_sphere(L, want_dim, fieldp):
                    failures.append(s)
    betti_q = X.cohomology(QQ).betti
    orientable = bool(betti_q) and betti_q[-1] == 1 if d >= 0 else False
    if orientable and d >= 1:
        top_vals = X.torsion_valuation_profile(p).get(d, [])
        orientable = all(v == 0 for v in top_vals)
    report = HomologyManifoldReport(
        is_hm=pure and not failures,
        pure=pure,
        orientable=orientable,
        dim=d,
        failures=tuple(failures),
    )
    X._cache[key] = report
    return report


def _is_field_sphere(L: SimplicialComplex, n: int, field) -> bool:
    """Does L have the reduced cohomology of S^n over the field?

    S^(-1) is the empty complex; its reduced cohomology is trivial in
    non-negative degrees.
    """
    if n < 0:
        return L.dim < 0
    if L.dim < 0:
        return False
    betti = L.cohomology(field).betti
    reduced = [b - (1 if i == 0 else 0) for i, b in enumerate(betti)]
    return all(
        r == (1 if i == n else 0) for i, r in enumerate(reduced)
    ) and len(reduced) > n


def check_theorem4(action: GroupAction, p: int | None = None, subject: str = "") -> TheoremReport:
    """Even-dimensional orientable Z_(p)-homology manifold with large p:
    rational total Betti numbers of fixed set and ambient agree mod 4."""
    p = p or action.p
    X = action.complex
    hyps: list[Hypothesis] = []
    ncomp = len(X.connected_components())
    hyps.append(Hypothesis("connected", ncomp == 1, f"{ncomp} component(s)"))
    hyps.append(Hypothesis("even_dimension", X.dim % 2 == 0, f"dim X = {X.dim}"))
    total_fp = X.cohomology(GF(p)).total
    hyps.append(
        Hypothesis("p_exceeds_total_betti", p > total_fp, f"p = {p}, dim H^*(X;F_p) = {total_fp}")
    )
    cheap_ok = ncomp == 1 and X.dim % 2 == 0 and p > total_fp
    if cheap_ok:
        hm = homology_manifold_check(X, p)
        ev = "links are spheres" if hm.is_hm else f"{len(hm.failures)} link failure(s)"
        if hm.is_hm and not hm.orientable:
            ev = "links pass but not orientable"
        hyps.append(Hypothesis("orientable_homology_manifold", hm.orientable_hm, ev))
    else:
        hyps.append(Hypothesis("orientable_homology_manifold", None))
    lhs = fixed_set_cohomology(action, QQ).total
    rhs = X.cohomology(QQ).total
    return TheoremReport(
        theorem="4",
        subject=subject or f"Z/{p} action on {X!r}",
        hypotheses=tuple(hyps),
        lhs=lhs,
        rhs=rhs,
    )


@dataclass(frozen=True)
class ComponentVerdict:
    component_dim: int
    codimension: int
    is_hm: bool
    even_codim: bool

    @property
    def ok(self) -> bool:
        return self.is_hm and self.even_codim


@dataclass(frozen=True)
class EvenCodimReport:
    components: tuple[ComponentVerdict, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.components)


def check_even_codim(action: GroupAction, p: int | None = None) -> EvenCodimReport:
    """Each fixed component is a homology manifold of even codimension."""
    p = p or action.p
    reg = make_regular(action)
    F = fixed_subcomplex(reg)
    verdicts = []
    if F.dim >= 0:
        comps = F.connected_components()
        for comp in comps:
            simp = [
                tuple(F.vertices[v] for v in f)
                for f in F.facets
                if set(f) <= comp
            ]
            C = SimplicialComplex.from_simplices(F.vertices, simp)
            hm = homology_manifold_check(C, p)
            codim = reg.complex.dim - C.dim
            verdicts.append(
                ComponentVerdict(
                    component_dim=C.dim,
                    codimension=codim,
                    is_hm=hm.is_hm,
                    even_codim=codim % 2 == 0,
                )
            )
    return EvenCodimReport(tuple(verdicts))


def smith_inequality_check(action: GroupAction, p: int | None = None) -> dict:
    """dim H^*(X^G; F_p) <= dim H^*(X; F_p)."""
    p = p or action.p
    field = GF(p)
    fixed_total = fixed_set_cohomology(action, field).total
    ambient_total = action.complex.cohomology(field).total
    return {
        "fixed_total": fixed_total,
        "ambient_total": ambient_total,
        "ok": fixed_total <= ambient_total,
    }


def euler_route_congruence(X: SimplicialComplex, p: int) -> dict:
    """The section-3 chain: dim H^*(X;F_p) = chi(X) mod 4 for even-dim F_p-PD X.

    Used as the cross-check route against Theorem 2 on trivial actions.
    """
    total = X.cohomology(GF(p)).total
    chi = X.euler_characteristic()
    return {"total": total, "chi": chi, "ok": (total - chi) % 4 == 0}
