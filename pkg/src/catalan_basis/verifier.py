"""Exact machine checks of the basis theorem and the supporting identities.

Every check returns a :class:`VerificationReport`; a failing report carries a
witness (a nonzero polynomial difference or remainder).  Nothing here uses a
tolerance.

The ``perturb`` / ``derivations`` keyword arguments exist for negative controls:
they corrupt one side of the checked identity so the check must fail.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .catalan_core import (
    ArrangementParams,
    Derivation,
    basis,
    coned_degree,
    derivation_delta,
    generator_degree,
    h_poly,
    hyperplanes,
    phi_poly,
    psi_coned,
)
from .exact_poly import (
    PolyMatrix,
    Polynomial,
    determinant,
    reduce_mod_linear,
    try_exact_divide,
)
from .factorial_kit import binom, falling_poly, half_binom, p_ratio_poly, poly_binom, rising, rising_poly

__all__ = [
    "VerificationReport",
    "SaitoResult",
    "Prop2Result",
    "check_membership",
    "saito_check",
    "saito_report",
    "predicted_abs_constant",
    "paper_signed_constant",
    "check_prop1",
    "check_lemma1",
    "check_prop2",
    "prop2_report",
    "check_phi",
    "check_phi_partial",
    "check_symm_recurrence",
    "check_integral_formula",
]


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, Polynomial):
        return {"type": "polynomial", "value": w.to_dict(), "text": str(w)}
    if isinstance(w, Fraction):
        return {"type": "rational", "value": [str(w.numerator), str(w.denominator)]}
    return {"type": "text", "value": str(w)}


@dataclass
class VerificationReport:
    check_id: str
    params: dict
    status: str
    witness: object = None
    detail: str = ""
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("failing report needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def sort_key(self):
        return (self.check_id, sorted(self.params.items()))

    def to_dict(self, *, timing: bool = False) -> dict:
        d = {
            "check_id": self.check_id,
            "params": dict(sorted(self.params.items())),
            "status": self.status,
            "witness": _witness_json(self.witness),
            "detail": self.detail,
        }
        if timing:
            d["elapsed"] = round(self.elapsed, 6)
        return d

    def to_json(self, *, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing=timing), separators=(",", ":"))


def _report(check_id, params, diff: Polynomial, t0, *, detail="", ok_witness=None) -> VerificationReport:
    ok = diff.is_zero()
    return VerificationReport(
        check_id,
        dict(params),
        "pass" if ok else "fail",
        ok_witness if ok else diff,
        detail,
        time.perf_counter() - t0,
    )


# -- membership -------------------------------------------------------------


def check_membership(params: ArrangementParams, u: int, *, derivation: Derivation | None = None) -> VerificationReport:
    """Check that the derivation is logarithmic along every hyperplane of the cone.

    For each family with normal form ``alpha`` the image ``theta(alpha)`` is reduced
    modulo every translate ``alpha + k z``; all remainders must vanish.
    """
    t0 = time.perf_counter()
    theta = derivation if derivation is not None else derivation_delta(params, u)
    checked = 0
    for fam in hyperplanes(params):
        image = theta.apply(fam.normal())
        for f in fam.factors:
            rem = reduce_mod_linear(image, f)
            checked += 1
            if rem:
                return VerificationReport(
                    "membership",
                    {"ell": params.ell, "m": params.m, "u": u},
                    "fail",
                    rem,
                    f"{theta.label or 'derivation'}({fam.label()}) not in ({f})",
                    time.perf_counter() - t0,
                )
    return VerificationReport(
        "membership",
        {"ell": params.ell, "m": params.m, "u": u},
        "pass",
        None,
        f"{checked} linear factors",
        time.perf_counter() - t0,
    )


def membership_full_product(params: ArrangementParams, u: int) -> bool:
    """Slow oracle: divide ``theta(alpha)`` by the whole family product at once."""
    theta = derivation_delta(params, u)
    for fam in hyperplanes(params):
        if try_exact_divide(theta.apply(fam.normal()), fam.product()) is None:
            return False
    return True


# -- Saito's criterion ------------------------------------------------------


def predicted_abs_constant(params: ArrangementParams) -> Fraction:
    out = Fraction(1)
    m = params.m
    for i in range(params.ell):
        out /= abs(half_binom(Fraction(2 * (i + 1) * (m + 1) - 1, 2), m + 1))
    return out


def paper_signed_constant(params: ArrangementParams) -> Fraction:
    """The signed constant from the leading-coefficient comparison, ``prod (-1)^{im} / binom(...)``."""
    out = Fraction(1)
    m = params.m
    for i in range(params.ell):
        out *= Fraction((-1) ** (i * m)) / half_binom(Fraction(2 * (i + 1) * (m + 1) - 1, 2), m + 1)
    return out


@dataclass
class SaitoResult:
    params: ArrangementParams
    det: Polynomial
    quotient_constant: Fraction | None
    predicted_abs_c: Fraction
    degrees: list[int]
    defining_degree: int
    passed: bool
    detail: str = ""

    @property
    def sign(self) -> int:
        c = self.quotient_constant
        return 0 if not c else (1 if c > 0 else -1)

    def to_report(self, elapsed: float = 0.0) -> VerificationReport:
        p = {"ell": self.params.ell, "m": self.params.m}
        if self.passed:
            return VerificationReport("saito", p, "pass", self.quotient_constant, self.detail, elapsed)
        if self.quotient_constant is not None:
            witness = self.quotient_constant
        else:
            witness = self.det if self.det else "zero determinant"
        return VerificationReport("saito", p, "fail", witness, self.detail, elapsed)


def saito_matrix(derivs: Sequence[Derivation]) -> PolyMatrix:
    """Rows are coordinates ``(z, x_1, ..., x_ell)``, columns are the derivations."""
    return PolyMatrix.from_columns([d.column() for d in derivs])


def saito_check(
    params: ArrangementParams,
    *,
    derivations: Sequence[Derivation] | None = None,
    cross_check: bool = False,
) -> SaitoResult:
    derivs = list(derivations) if derivations is not None else basis(params)
    if len(derivs) != params.ell + 1:
        raise ValueError(f"need {params.ell + 1} derivations, got {len(derivs)}")
    det = determinant(saito_matrix(derivs), cross_check=cross_check)
    F = psi_coned(params)
    predicted = predicted_abs_constant(params)
    degrees = [d.degree() for d in derivs]
    D = coned_degree(params)
    problems = []
    q = try_exact_divide(det, F) if det else None
    c = None
    if det.is_zero():
        problems.append("determinant vanishes")
    elif q is None:
        problems.append("determinant not divisible by the defining polynomial")
    elif not q.is_constant():
        problems.append(f"quotient is not constant: {q}")
    else:
        c = q.constant_value()
        if det - F.scale(c):
            problems.append("det - c*F is nonzero")
        if abs(c) != predicted:
            problems.append(f"|c| = {abs(c)} but predicted {predicted}")
    if not all(d.is_homogeneous() for d in derivs):
        problems.append("non-homogeneous derivation")
    if sum(degrees) != D:
        problems.append(f"degree sum {sum(degrees)} != {D}")
    expected = [1] + [generator_degree(params, u) for u in range(params.ell)]
    if derivations is None and degrees != expected:
        problems.append(f"degrees {degrees} != {expected}")
    detail = "; ".join(problems) if problems else f"c = {c}, sign {'+' if c > 0 else '-'}, degree sum {sum(degrees)}"
    return SaitoResult(params, det, c, predicted, degrees, D, not problems, detail)


def saito_report(params: ArrangementParams, **kw) -> VerificationReport:
    t0 = time.perf_counter()
    res = saito_check(params, **kw)
    return res.to_report(time.perf_counter() - t0)


# -- identities for ell = 1 ----------------------------------------------------

_XY = ("x", "y")


def _h1(m: int, u: int) -> Polynomial:
    return h_poly(1, m, u, "x", ("y",), _XY)


def check_prop1(m: int, u: int, *, perturb=0) -> VerificationReport:
    """The three-term recurrence in m relating h_{1,m+1,u-1}, h_{1,m,u}, h_{1,m,u+1}."""
    if u < 1:
        raise ValueError("the recurrence needs u >= 1")
    t0 = time.perf_counter()
    x, y = Polynomial.gens(_XY)
    lhs = _h1(m + 1, u - 1).scale(Fraction(2 * u - 1, 2 * m + 4))
    const = (m + u + 1) ** 2 + u**2 + Fraction(perturb)
    rhs = (x * x + y * y - const) * _h1(m, u) - _h1(m, u + 1).scale(2)
    return _report("prop1", {"m": m, "u": u}, lhs - rhs, t0)


def check_lemma1(m: int, u: int, *, perturb=0) -> VerificationReport:
    """The terminating balanced sum, checked as a polynomial identity in a free variable k."""
    t0 = time.perf_counter()
    K = ("k",)
    k = Polynomial.variable(K, "k")
    half = Fraction(1, 2)
    lhs = Polynomial.zero(K)
    for s in range(m + 1):
        c = Fraction((-1) ** s * binom(m, s)) / half_binom(m + s + u + half, m + 1)
        lhs = lhs + poly_binom(k + (m + u + s + half), 2 * m).scale(c)
    rhs = (falling_poly(k, m) * rising_poly(k + (u + Fraction(3, 2)), m)).scale(
        Fraction(m + 1) / rising(u + half, 2 * m + 1)
    )
    rhs = rhs + Fraction(perturb)
    return _report("lemma1", {"m": m, "u": u}, lhs - rhs, t0)


@dataclass
class Prop2Result:
    m: int
    u: int
    a_const: Fraction | None
    y_side_const: Fraction | None
    both_sides_consistent: bool
    cancellation: bool
    witness: object = None

    @property
    def passed(self) -> bool:
        return self.a_const is not None and self.both_sides_consistent and self.cancellation


def _constant_quotient(p: Polynomial, d: Polynomial):
    q = try_exact_divide(p, d)
    if q is None:
        return None, p
    if not q.is_constant():
        return None, q
    return q.constant_value(), None


def check_prop2(m: int, u: int, *, perturb=0) -> Prop2Result:
    """Extract the constant A_{m,u} from h_{1,m,u} restricted to the line x + y + m = 0."""
    x, y = Polynomial.gens(_XY)
    h = _h1(m, u) + Fraction(perturb)
    half = Fraction(1, 2)
    n = 3 * m + 2 * u + 1

    on_x = h.substitute("y", -x - m)
    d_x = rising_poly(x - (m + u), n) * rising_poly(x + half, m)
    a, wx = _constant_quotient(on_x, d_x)

    on_y = h.substitute("x", -y - m)
    d_y = rising_poly(y - (m + u), n) * rising_poly(y + half, m)
    b, wy = _constant_quotient(on_y, d_y)

    consistent = a is not None and b is not None and a == -b
    swapped = h.rename({"x": "y", "y": "x"})
    rem = reduce_mod_linear(h + swapped, x + y + m)
    witness = wx if wx is not None else wy
    if witness is None and not consistent:
        witness = Fraction(a + b) if (a is not None and b is not None) else "missing constant"
    if witness is None and rem:
        witness = rem
    return Prop2Result(m, u, a, b, consistent, rem.is_zero(), witness)


def prop2_report(m: int, u: int, **kw) -> VerificationReport:
    t0 = time.perf_counter()
    r = check_prop2(m, u, **kw)
    params = {"m": m, "u": u}
    if r.passed:
        return VerificationReport("prop2", params, "pass", r.a_const, f"A = {r.a_const}", time.perf_counter() - t0)
    return VerificationReport("prop2", params, "fail", r.witness, "", time.perf_counter() - t0)


# -- the auxiliary sum Phi -----------------------------------------------------

_YZ = ("y", "w")


def _phi(m, k, v):
    return phi_poly(m, k, v, "y", "w", _YZ)


def _phi_partial(m: int, k: int, v: int, r: int) -> Polynomial:
    out = Polynomial.zero(_YZ)
    for t in range(max(r, 0), m + 1):
        c = binom(m, t) * binom(m, k - t)
        if c:
            out = out + (p_ratio_poly("y", v + m, v + t, _YZ) * p_ratio_poly("w", v + m + t, v + k, _YZ)).scale(c)
    return out


def check_phi(m: int, k: int, v: int, *, perturb=0) -> VerificationReport:
    """Recurrence in k and y/z symmetry of Phi_{m,k,v}."""
    t0 = time.perf_counter()
    params = {"m": m, "k": k, "v": v}
    rec = _phi(m, k, v + 1) - _phi(m, k, v) + _phi(m, k + 1, v).scale((k + 1) * (2 * v + k + m + 2))
    rec = rec + Fraction(perturb)
    if rec:
        return _report("phi", params, rec, t0, detail="recurrence")
    p = _phi(m, k, v)
    sym = p - p.rename({"y": "w", "w": "y"})
    return _report("phi", params, sym, t0, detail="recurrence, symmetry")


def check_phi_partial(m: int, k: int, v: int, r: int, *, perturb=0) -> VerificationReport:
    """The partial-sum identity (tail sums from t = r) behind the Phi recurrence."""
    t0 = time.perf_counter()
    lhs = (
        _phi_partial(m, k, v + 1, r)
        - _phi_partial(m, k, v, r)
        + _phi_partial(m, k + 1, v, r).scale((k + 1) * (2 * v + k + m + 2))
    )
    c = r * (2 * v + r + m + 1) * binom(m, r) * binom(m, k - r + 1)
    if c:
        rhs = (p_ratio_poly("y", v + m, v + r, _YZ) * p_ratio_poly("w", v + m + r, v + k + 1, _YZ)).scale(c)
    else:
        rhs = Polynomial.zero(_YZ)
    rhs = rhs + Fraction(perturb)
    return _report("phi_partial", {"m": m, "k": k, "v": v, "r": r}, lhs - rhs, t0)


# -- symmetry of h in its y-arguments ------------------------------------------


def check_symm_recurrence(ell: int, m: int, u: int, i: int, *, perturb=0) -> VerificationReport:
    """Expansion of h_{ell,m,u} along y_i, plus invariance under permuting the y's."""
    if not 1 <= i <= ell:
        raise ValueError(f"i must be in 1..{ell}")
    t0 = time.perf_counter()
    ys = tuple(f"y_{j}" for j in range(1, ell + 1))
    V = ("x", *ys)
    h = h_poly(ell, m, u, "x", ys, V)
    rest = ys[: i - 1] + ys[i:]
    yi = ys[i - 1]
    rhs = Polynomial.zero(V)
    for k in range(m + 1):
        c = (-1) ** k * binom(m, k)
        rhs = rhs + (p_ratio_poly(yi, u + m, u + k, V) * h_poly(ell - 1, m, u + k, "x", rest, V)).scale(c)
    rhs = rhs + Fraction(perturb)
    params = {"ell": ell, "m": m, "u": u, "i": i}
    diff = h - rhs
    if diff:
        return _report("symm", params, diff, t0, detail="recurrence")
    # transpositions generate the symmetric group; for small ell check every permutation
    perms = permutations(ys) if ell <= 3 else [
        ys[:a] + (ys[a + 1], ys[a]) + ys[a + 2 :] for a in range(ell - 1)
    ]
    for p in perms:
        g = h.rename(dict(zip(ys, p)))
        if g != h:
            return _report("symm", params, g - h, t0, detail=f"not invariant under {p}")
    return _report("symm", params, diff, t0, detail="recurrence, permutation invariance")


# -- the integral representation -----------------------------------------------


def integral_monomial_sum(m: int, u: int, vars=("x", "y")) -> Polynomial:
    """``sum_s (-1)^s binom(m,s) / binom(m+u+s+1/2, m+1) x^{2m+2u+2s+1} y^{2m-2s}``."""
    out = Polynomial.zero(vars)
    ix, iy = vars.index("x"), vars.index("y")
    for s in range(m + 1):
        c = Fraction((-1) ** s * binom(m, s)) / half_binom(Fraction(2 * (m + u + s) + 1, 2), m + 1)
        e = [0] * len(vars)
        e[ix] = 2 * m + 2 * u + 2 * s + 1
        e[iy] = 2 * m - 2 * s
        out = out + Polynomial(vars, {tuple(e): c})
    return out


def check_integral_formula(m: int, u: int, *, perturb=0) -> VerificationReport:
    """``2(m+1) * int_0^x t^{2u}(t^2-x^2)^m (t^2-y^2)^m dt`` against its closed monomial sum.

    Also checks that this sum is the top-degree homogeneous part of h_{1,m,u}.
    """
    if m < 0 or u < 0:
        raise ValueError("m, u must be non-negative")
    t0 = time.perf_counter()
    V = ("x", "y", "t")
    x, y, t = Polynomial.gens(V)
    integrand = t ** (2 * u) * (t * t - x * x) ** m * (t * t - y * y) ** m
    integral = integrand.antiderivative("t").substitute("t", x).scale(2 * (m + 1))
    closed = integral_monomial_sum(m, u, V) + Fraction(perturb)
    params = {"m": m, "u": u}
    diff = integral - closed
    if diff:
        return _report("integral", params, diff, t0, detail="closed form")
    if integral.parity_flip("x") != -integral:
        return _report("integral", params, integral, t0, detail="parity")
    h = _h1(m, u).embed(V)
    top = h.homogeneous_part(h.degree())
    return _report("integral", params, top - closed, t0, detail="closed form, parity, top-degree part of h")
