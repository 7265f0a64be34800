"""Builders for the coned extended Catalan arrangement of type B and its derivations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact_poly import LinearForm, Polynomial, homogenize, make_varset
from .factorial_kit import binom, falling_poly, half_binom, p_poly, p_ratio_poly

__all__ = [
    "ArrangementParams",
    "Derivation",
    "HyperplaneFamily",
    "arrangement_vars",
    "psi",
    "psi_coned",
    "coned_degree",
    "hyperplanes",
    "h_poly",
    "generator_F",
    "derivation_delta",
    "euler",
    "basis",
    "generator_degree",
    "phi_poly",
]

CONE_VAR = "z"


def arrangement_vars(ell: int) -> tuple[str, ...]:
    """``(x_1, ..., x_ell, z)``: graded-lex order puts x_1 highest and z lowest."""
    return tuple(f"x_{i}" for i in range(1, ell + 1)) + (CONE_VAR,)


@dataclass(frozen=True)
class ArrangementParams:
    ell: int
    m: int

    def __post_init__(self):
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ValueError(f"ell must be a positive integer, got {self.ell!r}")
        if not isinstance(self.m, int) or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m!r}")

    @property
    def vars(self) -> tuple[str, ...]:
        return arrangement_vars(self.ell)

    def x(self, i: int) -> str:
        if not 1 <= i <= self.ell:
            raise IndexError(f"coordinate index {i} out of range 1..{self.ell}")
        return f"x_{i}"


def _P_of(arg: Polynomial, b: int) -> Polynomial:
    return falling_poly(arg + b, 2 * b + 1)


def psi(params: ArrangementParams) -> Polynomial:
    """The defining polynomial of Cat(B_ell, m), over ``params.vars`` (z does not occur)."""
    V = params.vars
    xs = Polynomial.gens(V)[:-1]
    out = Polynomial.constant(V, 1)
    for xa in xs:
        out = out * _P_of(xa, params.m)
    for b, c in itertools.combinations(range(params.ell), 2):
        out = out * _P_of(xs[b] + xs[c], params.m) * _P_of(xs[b] - xs[c], params.m)
    return out


def coned_degree(params: ArrangementParams) -> int:
    return 1 + (2 * params.m + 1) * params.ell**2


def psi_coned(params: ArrangementParams) -> Polynomial:
    """``z * homogenize(psi)``, the defining polynomial of the cone."""
    p = psi(params)
    out = Polynomial.variable(params.vars, CONE_VAR) * homogenize(p, CONE_VAR)
    assert out.degree() == coned_degree(params)
    return out


@dataclass(frozen=True)
class HyperplaneFamily:
    """One factor group of the coned defining polynomial.

    ``kind`` is ``"cone_z"``, ``"coordinate"``, ``"sum"`` or ``"difference"``;
    ``indices`` holds the 1-based coordinate indices involved.
    """

    kind: str
    indices: tuple[int, ...]
    factors: tuple[LinearForm, ...]

    def product(self) -> Polynomial:
        out = Polynomial.constant(self.factors[0].vars, 1)
        for f in self.factors:
            out = out * f.poly
        return out

    def normal(self) -> Polynomial:
        """The homogeneous linear form shared by all factors (the k = 0 translate)."""
        V = self.factors[0].vars
        g = dict(zip(V, Polynomial.gens(V)))
        if self.kind == "cone_z":
            return g[CONE_VAR]
        if self.kind == "coordinate":
            return g[f"x_{self.indices[0]}"]
        b, c = (g[f"x_{i}"] for i in self.indices)
        return b + c if self.kind == "sum" else b - c

    def label(self) -> str:
        if self.kind == "cone_z":
            return "z"
        if self.kind == "coordinate":
            return f"x_{self.indices[0]}"
        op = "+" if self.kind == "sum" else "-"
        b, c = self.indices
        return f"x_{b}{op}x_{c}"


def hyperplanes(params: ArrangementParams) -> list[HyperplaneFamily]:
    V = params.vars
    g = dict(zip(V, Polynomial.gens(V)))
    z = g[CONE_VAR]
    ks = range(-params.m, params.m + 1)

    def translates(normal: Polynomial) -> tuple[LinearForm, ...]:
        return tuple(LinearForm(normal + z.scale(k)) for k in ks)

    fams = [HyperplaneFamily("cone_z", (), (LinearForm(z),))]
    for a in range(1, params.ell + 1):
        fams.append(HyperplaneFamily("coordinate", (a,), translates(g[f"x_{a}"])))
    for b, c in itertools.combinations(range(1, params.ell + 1), 2):
        xb, xc = g[f"x_{b}"], g[f"x_{c}"]
        fams.append(HyperplaneFamily("sum", (b, c), translates(xb + xc)))
        fams.append(HyperplaneFamily("difference", (b, c), translates(xb - xc)))
    return fams


@lru_cache(maxsize=4096)
def _h_cached(ell: int, m: int, u: int, x: str, ys: tuple[str, ...], vars: tuple[str, ...]) -> Polynomial:
    # Group the (m+1)^ell multi-indices by S = s_1 + ... + s_ell: the x-factor and the
    # scalar denominator depend on S only, so the y-products are summed per S first.
    by_S: dict[int, Polynomial] = {0: Polynomial.constant(vars, 1)}
    for y in ys:
        nxt: dict[int, Polynomial] = {}
        for S_prev, acc in by_S.items():
            for s in range(m + 1):
                term = acc * p_ratio_poly(y, u + m + S_prev, u + S_prev + s, vars).scale(binom(m, s))
                S = S_prev + s
                nxt[S] = nxt[S] + term if S in nxt else term
        by_S = nxt
    out = Polynomial.zero(vars)
    for S, ypart in sorted(by_S.items()):
        denom = half_binom(Fraction(2 * (m + u + S) + 1, 2), m + 1)
        assert denom != 0
        coeff = Fraction((-1) ** S) / denom
        out = out + (p_poly(x, m + u + S, vars) * ypart).scale(coeff)
    return out


def h_poly(ell: int, m: int, u: int, x: str, ys: Sequence[str], vars: Sequence[str] | None = None) -> Polynomial:
    """The generating polynomial ``h_{ell,m,u}(x; ys)``.

    ``ell = 0`` gives ``P(x, m+u) / binom(m+u+1/2, m+1)``.  The result lives over
    ``vars`` (default ``(x, *ys)``).
    """
    ys = tuple(ys)
    if ell < 0 or m < 0 or u < 0:
        raise ValueError(f"need ell, m, u >= 0, got {(ell, m, u)}")
    if len(ys) != ell:
        raise ValueError(f"expected {ell} y-variables, got {len(ys)}")
    if x in ys or len(set(ys)) != len(ys):
        raise ValueError("x and ys must be distinct variables")
    vars = make_varset(vars if vars is not None else (x, *ys))
    missing = {x, *ys} - set(vars)
    if missing:
        raise ValueError(f"variables {sorted(missing)} not in varset")
    return _h_cached(ell, m, u, x, ys, vars)


def generator_F(params: ArrangementParams, u: int, i: int) -> Polynomial:
    """``h_{ell-1,m,u}(x_i; x_1, ..., (omit x_i), ..., x_ell)`` over ``params.vars``."""
    xi = params.x(i)
    others = [params.x(j) for j in range(1, params.ell + 1) if j != i]
    return h_poly(params.ell - 1, params.m, u, xi, others, params.vars)


def generator_degree(params: ArrangementParams, u: int) -> int:
    return 2 * params.m * params.ell + 2 * u + 1


@dataclass(frozen=True)
class Derivation:
    """A polynomial vector field ``coeff_z d/dz + sum_i coeffs[i] d/dx_{i+1}``."""

    coeff_z: Polynomial
    coeffs: tuple[Polynomial, ...]
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        V = self.coeff_z.vars
        if any(c.vars != V for c in self.coeffs):
            raise ValueError("derivation coefficients over different varsets")
        if V != arrangement_vars(len(self.coeffs)):
            raise ValueError(f"varset {V!r} does not match {len(self.coeffs)} coordinates")

    @property
    def vars(self) -> tuple[str, ...]:
        return self.coeff_z.vars

    @property
    def ell(self) -> int:
        return len(self.coeffs)

    def column(self) -> list[Polynomial]:
        """Coefficients in coordinate order ``(z, x_1, ..., x_ell)``."""
        return [self.coeff_z, *self.coeffs]

    def apply(self, f: Polynomial) -> Polynomial:
        """``theta(f)`` for a polynomial ``f``."""
        out = self.coeff_z * f.diff(CONE_VAR)
        for i, c in enumerate(self.coeffs, start=1):
            d = f.diff(f"x_{i}")
            if d:
                out = out + c * d
        return out

    def degree(self) -> int:
        """Polynomial degree (common degree of the homogeneous coefficients)."""
        return max(p.degree() for p in self.column())

    def is_homogeneous(self) -> bool:
        degs = {p.degree() for p in self.column() if p}
        return len(degs) <= 1 and all(p.is_homogeneous() for p in self.column())

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "vars": list(self.vars),
            "coeff_z": self.coeff_z.to_dict(),
            "coeffs": [c.to_dict() for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data) -> "Derivation":
        return cls(
            Polynomial.from_dict(data["coeff_z"]),
            tuple(Polynomial.from_dict(c) for c in data["coeffs"]),
            data.get("label", ""),
        )

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.vars[-1:] + self.vars[:-1], self.column()):
            if c:
                parts.append(f"({c})*d/d{name}")
        return " + ".join(parts) if parts else "0"


def derivation_delta(params: ArrangementParams, u: int) -> Derivation:
    if u < 0:
        raise ValueError("u must be non-negative")
    deg = generator_degree(params, u)
    coeffs = tuple(
        homogenize(generator_F(params, u, i), CONE_VAR, deg) for i in range(1, params.ell + 1)
    )
    d = Derivation(Polynomial.zero(params.vars), coeffs, f"delta_{params.ell},{params.m},{u}")
    assert all(c.is_homogeneous(deg) for c in coeffs)
    return d


def euler(params: ArrangementParams | int) -> Derivation:
    ell = params.ell if isinstance(params, ArrangementParams) else int(params)
    V = arrangement_vars(ell)
    g = Polynomial.gens(V)
    return Derivation(g[-1], g[:-1], "delta_E")


def basis(params: ArrangementParams) -> list[Derivation]:
    """``delta_E`` followed by ``delta_{ell,m,u}`` for ``u = 0, ..., ell-1``."""
    return [euler(params)] + [derivation_delta(params, u) for u in range(params.ell)]


def phi_poly(m: int, k: int, v: int, y: str, z: str, vars: Sequence[str] | None = None) -> Polynomial:
    """The auxiliary two-variable sum used in the symmetry argument.

    ``sum_t binom(m,t) binom(m,k-t) P(y,v+m) P(z,v+m+t) / (P(y,v+t) P(z,v+k))``
    with each quotient realized as a polynomial.
    """
    if min(m, k, v) < 0:
        raise ValueError("m, k, v must be non-negative")
    vars = make_varset(vars if vars is not None else (y, z))
    out = Polynomial.zero(vars)
    for t in range(m + 1):
        c = binom(m, t) * binom(m, k - t)
        if not c:
            continue
        term = p_ratio_poly(y, v + m, v + t, vars) * p_ratio_poly(z, v + m + t, v + k, vars)
        out = out + term.scale(c)
    return out
