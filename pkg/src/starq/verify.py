"""Verification suites behind ``starq verify``.

Every check is exact.  A suite is a list of named checks; running it gives a
report whose checks are sorted by name, so the output only depends on the
configuration and the seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import explicit, oracle
from .geometry import (
    GeneratorFamily,
    Multivector,
    canonical_bivectors,
    g_vector,
    generators,
    lie_derivative,
    schouten,
)
from .hochschild import Cochain, hochschild_delta, star_commutator, transform_star
from .operators import (
    D,
    E,
    IDENTITY,
    Bounds,
    R,
    R0,
    T,
    basis_monomials,
    commutant_check,
    commutator,
    dxi,
    lift,
    mult,
    same_operator,
)
from .parsing import format_symbol, parse_symbol
from .properties import (
    check_associativity,
    check_covariance,
    check_homogeneity,
    check_invariance,
    check_strong_invariance,
    check_symmetry,
    random_generator,
    random_symbol,
)
from .quantization import (
    HALF,
    adjoint,
    check_equivariance,
    check_moment_condition,
    compose_symbols,
    dequantize,
    q_coefficient,
    quantize,
    star_quant,
)
from .symbols import SymbolPoly, poisson

SCHEMA = 1
SUITES = ("algebra", "operators", "quantization", "star", "hochschild", "bivectors")


@dataclass
class Config:
    n: int = 1
    geometry: GeneratorFamily | None = None
    lam: Fraction = HALF
    max_deg: int = 3
    seed: int = 0
    cases: int = 100

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_deg < 1:
            raise ValueError("degree bounds must be at least 1")
        if self.geometry is None:
            self.geometry = generators("projective", self.n)
        if self.geometry.n != self.n:
            raise ValueError(f"geometry has dimension {self.geometry.n}, expected n={self.n}")

    @property
    def metric(self):
        return self.geometry.metric or (1,) * self.n


@dataclass
class CheckResult:
    name: str
    paper_anchor: str
    status: str  # "pass" | "fail"
    witness: dict | None = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "paper_anchor": self.paper_anchor, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "checks": [c.as_dict() for c in self.checks],
            "seed": self.seed,
        }

    def text(self) -> str:
        lines = [f"{c.name}: {c.status}" for c in self.checks]
        lines.append(f"suite {self.suite}: {'pass' if self.passed else 'fail'} (seed {self.seed})")
        return "\n".join(lines)


def _sym(F) -> str:
    return format_symbol(F) if isinstance(F, SymbolPoly) else str(F)


def _stringify(w):
    if w is None:
        return None
    if isinstance(w, dict):
        return {str(k): _sym(v) for k, v in w.items()}
    return {"detail": _sym(w)}


Check = tuple[str, str, Callable[[], object]]  # name, anchor, fn returning None or witness


# -- algebra -------------------------------------------------------------------------


def _algebra_checks(cfg: Config, rng: random.Random) -> list[Check]:
    n, deg = cfg.n, cfg.max_deg
    triples = [tuple(random_symbol(rng, n, deg, nu=True) for _ in range(3)) for _ in range(cfg.cases)]

    def ring_laws():
        for F, G, H in triples:
            if (F * G) * H != F * (G * H):
                return {"law": "associativity", "F": F, "G": G, "H": H}
            if F * G != G * F:
                return {"law": "commutativity", "F": F, "G": G}
            if F * (G + H) != F * G + F * H:
                return {"law": "distributivity", "F": F, "G": G, "H": H}
        return None

    def poisson_laws():
        for F, G, H in triples[:30]:
            if poisson(F, G) != -poisson(G, F):
                return {"law": "antisymmetry", "F": F, "G": G}
            jac = poisson(F, poisson(G, H)) + poisson(G, poisson(H, F)) + poisson(H, poisson(F, G))
            if jac:
                return {"law": "jacobi", "F": F, "G": G, "H": H}
            if poisson(F, G * H) != poisson(F, G) * H + G * poisson(F, H):
                return {"law": "leibniz", "F": F, "G": G, "H": H}
        return None

    def roundtrip():
        for F, _, _ in triples:
            if parse_symbol(format_symbol(F), n) != F:
                return {"F": F}
        return None

    return [
        ("ring-laws", "symbols form a commutative ring", ring_laws),
        ("poisson-laws", "Poisson bracket: antisymmetry, Jacobi, Leibniz", poisson_laws),
        ("parse-format-roundtrip", "text form is faithful", roundtrip),
    ]


# -- operators ----------------------------------------------------------------------


def _operators_checks(cfg: Config, rng: random.Random) -> list[Check]:
    n = cfg.n
    bounds = Bounds(3, 4, 0)
    fam = cfg.geometry

    def same(A, B):
        m = same_operator(A, B, n, bounds)
        return None if m is None else {"monomial": m}

    def lift_D():
        for i, (label, X) in enumerate(generators("projective", n).labelled()):
            if not label.startswith("inversion"):
                continue
            j = int(label.split()[-1]) - 1
            rhs = (E.scale(2).shift(n + 1)) @ dxi(j)
            w = same(commutator(lift(X), D), rhs)
            if w:
                w["generator"] = label
                return w
        return None

    def commutes(candidate):
        def run():
            res = commutant_check(fam, candidate, bounds)
            return None if res else {"generator": res.generator, "monomial": res.witness}

        return run

    def not_commutes(candidate):
        def run():
            res = commutant_check(fam, candidate, bounds)
            return {"detail": "unexpectedly commutes"} if res else None

        return run

    checks: list[Check] = [
        ("[E,D] = -D", "Euler operator lowers D by one degree", lambda: same(commutator(E, D), -D)),
        (
            "[L_X,D] = (2E+n+1)d/dxi",
            "D fails to commute with the inversions by (2E+n+1) d/dxi_i",
            lift_D,
        ),
        (f"E in commutant ({fam.kind})", "E commutes with every lifted generator", commutes(E)),
    ]
    if n == 1:
        m = cfg.metric
        checks.append(("R0 = E(E-1)", "in dimension one R0 reduces to E(E-1)", lambda: same(R0(m), E @ E - E)))
    if fam.kind == "conformal":
        m = fam.metric
        checks += [
            ("[R,T] = -4E-2n", "sl2 relations of R, T, E", lambda: same(commutator(R(m), T(m)), (E.scale(-4)).shift(-2 * n))),
            ("[E,R] = 2R", "sl2 relations of R, T, E", lambda: same(commutator(E, R(m)), R(m).scale(2))),
            ("[E,T] = -2T", "sl2 relations of R, T, E", lambda: same(commutator(E, T(m)), T(m).scale(-2))),
            ("R0 in commutant (conformal)", "R0 commutes with every conformal generator", commutes(R0(m))),
            ("D not in commutant (conformal)", "D is not conformally invariant", not_commutes(D)),
        ]
    else:
        checks.append(("D not in commutant (projective)", "D is not projectively invariant", not_commutes(D)))
    return checks


# -- quantization -------------------------------------------------------------------


def _quantization_checks(cfg: Config, rng: random.Random) -> list[Check]:
    n, lam = cfg.n, cfg.lam
    fam = generators("projective", n)
    samples = [random_symbol(rng, n, cfg.max_deg) for _ in range(cfg.cases)]

    def moment_condition():
        for l in (Fraction(1, 3), HALF, Fraction(1), lam):
            rep = check_moment_condition(l, fam)
            if not rep:
                label, J = rep.failures[0]
                return {"lambda": l, "generator": label, "J_X": J}
        return None

    def equivariance():
        rep = check_equivariance(lam, fam, samples[:20])
        if rep:
            return None
        label, F = rep.failures[0]
        return {"generator": label, "F": F}

    def roundtrip():
        for F in samples:
            if dequantize(quantize(F, lam)) != F:
                return {"F": F}
        return None

    def half_expansion():
        for nn in range(1, 5):
            for e in range(11):
                if q_coefficient(1, e, HALF, nn) != HALF:
                    return {"n": nn, "e": e, "C1": q_coefficient(1, e, HALF, nn)}
        return None

    def adjoint_check():
        for F in samples[:30]:
            G = F + F.times_nu()
            if adjoint(quantize(G, HALF)).base != quantize(G.conj(), HALF).base:
                return {"F": G}
        return None

    def normal_order():
        xi, x = SymbolPoly.xi(0, n), SymbolPoly.x(0, n)
        got = compose_symbols(xi, x)
        want = x * xi + SymbolPoly.nu(n)
        return None if got == want else {"got": got}

    return [
        ("moment-condition", "Q(J_X) = nu L_X for lambda in {1/3, 1/2, 1}", moment_condition),
        ("equivariance", "[L_X, Q(F)] = Q(L_X F)", equivariance),
        ("dequantize-roundtrip", "Q is invertible and triangular", roundtrip),
        ("half-density-first-order", "Q_1/2 = Id + nu/2 D + O(nu^2)", half_expansion),
        ("adjoint", "Q_1/2 intertwines conjugation and the formal adjoint", adjoint_check),
        ("normal-ordering", "xi o x = x xi + nu", normal_order),
    ]


# -- star -----------------------------------------------------------------------------


def _star_checks(cfg: Config, rng: random.Random) -> list[Check]:
    n, deg = cfg.n, cfg.max_deg
    star = explicit.star_explicit
    fam = generators("projective", n)
    cases = cfg.cases
    pairs = [(random_symbol(rng, n, deg), random_symbol(rng, n, deg)) for _ in range(cases)]
    fields = [random_generator(rng, fam) for _ in range(cases)]
    fields2 = [random_generator(rng, fam) for _ in range(cases)]

    def route_equivalence():
        mons = basis_monomials(n, Bounds(deg, deg, 0))
        for F in mons:
            for G in mons:
                a, b = star(F, G), star_quant(F, G, HALF)
                if a != b:
                    return {"F": F, "G": G, "explicit": a, "composition": b}
        return None

    def over_fields(fn):
        def run():
            for (label, X), (F, G) in zip(fields, pairs):
                w = fn(X, F, G)
                if w is not None:
                    w["generator"] = label
                    return w
            return None

        return run

    def covariance():
        for (la, X), (lb, Y) in zip(fields, fields2):
            w = check_covariance(star, X, Y)
            if w is not None:
                w.update(X=la, Y=lb)
                return w
        return None

    def plain(fn):
        def run():
            for F, G in pairs:
                w = fn(star, F, G)
                if w is not None:
                    return w
            return None

        return run

    def associativity():
        for i in range(min(cases, 30)):
            F, G, H = (random_symbol(rng, n, min(deg, 2), terms=2) for _ in range(3))
            w = check_associativity(star, F, G, H)
            if w is not None:
                return w
        return None

    def normalization():
        for nn in range(1, 5):
            for k in range(6):
                for l in range(6):
                    got = (
                        explicit.coeff_B(nn, k, l, 0, 0, 0, 0),
                        explicit.coeff_B(nn, k, l, 1, 0, 0, 0) if k else HALF,
                        explicit.coeff_B(nn, k, l, 0, 1, 0, 0) if l else -HALF,
                    )
                    if got != (1, HALF, -HALF):
                        return {"n": nn, "k": k, "l": l, "values": got}
        return None

    def inversion_residuals():
        for k in range(4):
            for l in range(4):
                for r in range(5):
                    for idx in explicit.index_tuples(r):
                        for which in (1, 2):
                            if explicit.admissible(which, k, l, idx):
                                v = explicit.residual_inversion(which, n, k, l, idx)
                                if v:
                                    return {"equation": which, "k": k, "l": l, "index": idx, "residual": v}
        return None

    def assoc_residuals():
        for k in range(3):
            for l in range(3):
                for m in range(3):
                    for r in range(4):
                        res = explicit.residual_assoc(n, k, l, m, r)
                        if res:
                            e, v = next(iter(res.items()))
                            return {"k": k, "l": l, "m": m, "r": r,
                                    "monomial": explicit.format_generator_monomial(e), "residual": v}
        return None

    def coefficient_oracle():
        for k in range(4):
            for l in range(4):
                solved = oracle.solve_table(n, k, l)
                closed = explicit.coeff_table(n, k, l)
                if solved != closed:
                    idx = next(i for i in closed if solved.get(i) != closed[i])
                    return {"k": k, "l": l, "index": idx, "closed": closed[idx], "oracle": solved.get(idx)}
        return None

    def coefficient_symmetry():
        for k in range(4):
            for l in range(4):
                for (a, b, c, d), v in explicit.coeff_table(n, k, l).items():
                    if v != (-1) ** (a + b + c + d) * explicit.coeff_B(n, l, k, b, a, d, c):
                        return {"k": k, "l": l, "index": (a, b, c, d)}
        return None

    return [
        ("route-equivalence", "closed-form star equals Q^-1(Q(F) o Q(G))", route_equivalence),
        ("associativity", "(F*G)*H = F*(G*H)", associativity),
        ("invariance", "L_X is a derivation of the star", over_fields(lambda X, F, G: check_invariance(star, X, F, G))),
        ("strong-invariance", "J_X*F - F*J_X = nu {J_X, F}", over_fields(lambda X, F, G: check_strong_invariance(star, X, F))),
        ("covariance", "[J_X, J_Y]_star = {J_X, J_Y}", covariance),
        ("symmetry", "conj(F*G) = conj(G)*conj(F)", plain(check_symmetry)),
        ("homogeneity", "E_hat is a derivation of the star", plain(check_homogeneity)),
        ("normalization", "B_0000 = 1, B_1000 = -B_0100 = 1/2", normalization),
        ("inversion-residuals", "closed form solves the inversion-invariance system", inversion_residuals),
        ("associativity-residuals", "associator vanishes as a polynomial in contractions", assoc_residuals),
        ("coefficient-oracle", "closed form equals the solved recursion", coefficient_oracle),
        ("coefficient-symmetry", "B^{k,l}_abcd = (-1)^r B^{l,k}_badc", coefficient_symmetry),
    ]


# -- hochschild ----------------------------------------------------------------------


def random_cochain(rng: random.Random, n: int, metric) -> Cochain:
    """Random combination of compositions of named operators."""
    pool = [E, D, IDENTITY, T(metric), dxi(rng.randrange(n)), mult(SymbolPoly.x(rng.randrange(n), n), "x")]
    op = None
    for _ in range(rng.randint(1, 3)):
        term = rng.choice(pool)
        if rng.random() < 0.5:
            term = term @ rng.choice(pool)
        term = term.scale(rng.choice([-2, -1, 1, 3]))
        op = term if op is None else op + term
    return Cochain.from_op(op)


def _hochschild_checks(cfg: Config, rng: random.Random) -> list[Check]:
    n, deg = cfg.n, cfg.max_deg
    metric = cfg.metric
    cochains = [random_cochain(rng, n, metric) for _ in range(cfg.cases)]
    triples = [tuple(random_symbol(rng, n, 2, terms=2) for _ in range(3)) for _ in range(cfg.cases)]
    star = explicit.star_explicit

    def dd_zero():
        for C, (F, G, H) in zip(cochains, triples):
            v = hochschild_delta(hochschild_delta(C))(F, G, H)
            if v:
                return {"cochain": C.name, "F": F, "G": G, "H": H, "value": v}
        return None

    def derivations():
        # derivations are cocycles; a second-order operator is not
        F, G, _ = triples[0]
        for op in (E, dxi(0), E + dxi(0)):
            v = hochschild_delta(Cochain.from_op(op))(F, G)
            if v:
                return {"cochain": op.name, "F": F, "G": G, "value": v}
        xi = SymbolPoly.xi(0, n)
        if not hochschild_delta(Cochain.from_op(T(metric)))(xi, xi):
            return {"detail": "T looks like a derivation"}
        return None

    def commutator_divisible():
        for F, G, _ in triples:
            try:
                star_commutator(F, G, star)
            except ValueError:
                return {"F": F, "G": G}
        return None

    order = 4
    shifted = transform_star(star, [(1, Cochain.from_op(E))], order=order)
    fam = generators("projective", n)
    samples = [(random_symbol(rng, n, 2, terms=2), random_symbol(rng, n, 2, terms=2)) for _ in range(10)]

    def phi_invariance():
        for X in fam:
            for F, G in samples:
                w = check_invariance(shifted, X, F, G)
                if w is not None:
                    return w
        return None

    def phi_not_homogeneous():
        for F, G in samples:
            if check_homogeneity(shifted, F, G, order) is not None:
                return None
        return {"detail": "equivalent star still looks homogeneous"}

    def reparametrization():
        c = Fraction(5, 2)
        rep = transform_star(star, mu=(1, 0, c))
        for F, G in samples:
            d = (rep(F, G) - rep(G, F)) - (star(F, G) - star(G, F))
            if d.nu_part(3) != poisson(F, G).scale(c):
                return {"F": F, "G": G, "difference": d}
        return None

    return [
        ("delta-squared-zero", "the Hochschild coboundary squares to zero", dd_zero),
        ("derivations-are-cocycles", "1-cocycles are exactly the derivations", derivations),
        ("star-commutator-divisible", "F*G - G*F is divisible by nu", commutator_divisible),
        ("equivalence-keeps-invariance", "Phi = Id + nu E preserves invariance", phi_invariance),
        ("equivalence-breaks-homogeneity", "Phi = Id + nu E does not preserve homogeneity", phi_not_homogeneous),
        ("reparametrization", "nu -> nu + c nu^3 shifts the nu^3 skew part by c {F, G}", reparametrization),
    ]


# -- bivectors -----------------------------------------------------------------------


def _is_zero(W: Multivector) -> bool:
    return all(not v for v in W.terms.values())


def _bivector_checks(cfg: Config, rng: random.Random) -> list[Check]:
    n, fam = cfg.n, cfg.geometry
    biv = canonical_bivectors(n, fam)
    Pi, Lam = biv["Pi"], biv["Lambda"]
    families = [generators("projective", n)]
    if fam.kind == "conformal":
        families.append(fam)

    def invariant(W, fams):
        def run():
            for f in fams:
                for label, X in f.labelled():
                    if not _is_zero(lie_derivative(X, W)):
                        return {"family": f.kind, "generator": label}
            return None

        return run

    checks: list[Check] = [
        ("pi-poisson", "[Pi, Pi] = 0", lambda: None if _is_zero(schouten(Pi, Pi)) else {"detail": "nonzero"}),
        ("pi-invariant", "Pi is invariant under every generator", invariant(Pi, families)),
    ]
    if Lam is not None:
        G = g_vector(n, fam.metric)
        dxi1 = Multivector(n, 1, {(n,): SymbolPoly.one(n)})
        dxi2 = Multivector(n, 1, {(n + 1,): SymbolPoly.one(n)})
        expected = dxi1.wedge(dxi2).wedge(G).scale(2)

        def bracket():
            got = schouten(Pi, Lam)
            if _is_zero(got):
                return {"detail": "[Pi, Lambda] vanishes"}
            if not _is_zero(got - expected):
                return {"got": str(got.terms), "expected": str(expected.terms)}
            return None

        def not_projective():
            w = invariant(Lam, [generators("projective", n)])()
            return {"detail": "Lambda is projectively invariant"} if w is None else None

        checks += [
            ("lambda-poisson", "[Lambda, Lambda] = 0", lambda: None if _is_zero(schouten(Lam, Lam)) else {"detail": "nonzero"}),
            ("lambda-invariant", "Lambda is conformally invariant", invariant(Lam, [fam])),
            ("lambda-not-projective", "Lambda is not projectively invariant", not_projective),
            ("schouten-nonzero", "[Pi, Lambda] = 2 d/dxi1 ^ d/dxi2 ^ G", bracket),
        ]
    return checks


_BUILDERS = {
    "algebra": _algebra_checks,
    "operators": _operators_checks,
    "quantization": _quantization_checks,
    "star": _star_checks,
    "hochschild": _hochschild_checks,
    "bivectors": _bivector_checks,
}


def run_suite(suite: str, cfg: Config) -> Report:
    """Run one suite, or every suite for ``"all"``."""
    names = SUITES if suite == "all" else (suite,)
    for s in names:
        if s not in _BUILDERS:
            raise ValueError(f"unknown suite {s!r}; expected one of {SUITES + ('all',)}")
    report = Report(suite, cfg.seed)
    for s in names:
        rng = random.Random(f"{cfg.seed}:{s}")
        for name, anchor, fn in _BUILDERS[s](cfg, rng):
            w = fn()
            report.checks.append(CheckResult(name, anchor, "pass" if w is None else "fail", _stringify(w)))
    report.checks.sort(key=lambda c: c.name)
    return report


__all__ = ["CheckResult", "Config", "Report", "SCHEMA", "SUITES", "random_cochain", "run_suite"]
