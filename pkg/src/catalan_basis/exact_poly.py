"""Sparse multivariate polynomials with exact rational coefficients.

Polynomials are immutable.  A polynomial lives over an ordered tuple of
variable names (its *varset*); the order fixes the graded-lex term order
used for iteration, printing, JSON and leading terms.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Polynomial",
    "LinearForm",
    "PolyMatrix",
    "VarSetMismatch",
    "NotDivisible",
    "make_varset",
    "arith",
    "scale",
    "substitute",
    "reduce_mod_linear",
    "try_exact_divide",
    "homogenize",
    "coefficient_of",
    "determinant",
    "det_cofactor",
    "det_bareiss",
]

Exps = tuple[int, ...]


class VarSetMismatch(ValueError):
    """Operands live over different variable sets."""


class NotDivisible(ArithmeticError):
    """Raised by :meth:`Polynomial.exact_div` when the division leaves a remainder."""


def make_varset(names: Iterable[str]) -> tuple[str, ...]:
    names = tuple(names)
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate variable names in {names!r}")
    for n in names:
        if not isinstance(n, str) or not n:
            raise ValueError(f"bad variable name {n!r}")
    return names


def _to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def _grlex_key(exps: Exps):
    # sorts descending in graded-lex when used with reverse=True
    return (sum(exps), exps)


class Polynomial:
    """An element of Q[vars].

    ``terms`` maps exponent tuples to nonzero :class:`~fractions.Fraction`
    coefficients.  Zero coefficients are dropped on construction.
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exps, object] | None = None):
        self.vars = make_varset(vars)
        n = len(self.vars)
        clean: dict[Exps, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps!r} for varset {self.vars!r}")
                c = _to_fraction(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict[Exps, Fraction]) -> "Polynomial":
        # trusted constructor: varset already validated, no zero coefficients
        p = object.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Polynomial":
        return cls(vars)

    @classmethod
    def constant(cls, vars: Sequence[str], c) -> "Polynomial":
        vars = make_varset(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: Sequence[str], name: str) -> "Polynomial":
        vars = make_varset(vars)
        if name not in vars:
            raise KeyError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {exps: 1})

    @classmethod
    def gens(cls, vars: Sequence[str]) -> tuple["Polynomial", ...]:
        vars = make_varset(vars)
        return tuple(cls.variable(vars, v) for v in vars)

    @classmethod
    def from_univariate(cls, vars: Sequence[str], name: str, coeffs: Sequence) -> "Polynomial":
        """Build ``sum(coeffs[i] * name**i)``."""
        vars = make_varset(vars)
        idx = vars.index(name)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * len(vars)
            e[idx] = i
            terms[tuple(e)] = c
        return cls(vars, terms)

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> dict[Exps, Fraction]:
        """A copy of the term map, in graded-lex order (highest first)."""
        return {e: self._terms[e] for e in self._sorted_exps()}

    def _sorted_exps(self) -> list[Exps]:
        return sorted(self._terms, key=_grlex_key, reverse=True)

    def items(self) -> Iterator[tuple[Exps, Fraction]]:
        for e in self._sorted_exps():
            yield e, self._terms[e]

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * len(self.vars), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``.  The zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        i = self._index(var)
        return max(e[i] for e in self._terms)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if degree is not None:
            return degs <= {degree}
        return len(degs) <= 1

    def leading_term(self) -> tuple[Exps, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def coefficient(self, mono: Exps | Mapping[str, int]) -> Fraction:
        if isinstance(mono, Mapping):
            unknown = set(mono) - set(self.vars)
            if unknown:
                raise KeyError(f"unknown variables {sorted(unknown)}")
            mono = tuple(int(mono.get(v, 0)) for v in self.vars)
        else:
            mono = tuple(mono)
            if len(mono) != len(self.vars):
                raise ValueError("monomial length does not match varset")
        return self._terms.get(mono, Fraction(0))

    def occurs(self, var: str) -> bool:
        i = self._index(var)
        return any(e[i] for e in self._terms)

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._raw(self.vars, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r} (varset {self.vars!r})") from None

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise VarSetMismatch(f"{self.vars!r} vs {other.vars!r}")
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.vars, {e: -c for e, c in self._terms.items()})

    def __pos__(self) -> "Polynomial":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "Polynomial":
        c = _to_fraction(c)
        if not c:
            return Polynomial._raw(self.vars, {})
        return Polynomial._raw(self.vars, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exps, Fraction] = {}
        get = out.get
        b_items = list(b.items())
        for ea, ca in a.items():
            for eb, cb in b_items:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return Polynomial._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Polynomial):
            return self.scale(Fraction(1) / _to_fraction(other))
        return NotImplemented

    def exact_div(self, d: "Polynomial") -> "Polynomial":
        """Return ``q`` with ``self == q * d``; raise :class:`NotDivisible` otherwise."""
        q = try_exact_divide(self, d)
        if q is None:
            raise NotDivisible("polynomial division leaves a remainder")
        return q

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            c = _to_fraction(other)
            if not c:
                return not self._terms
            return self._terms == {(0,) * len(self.vars): c}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus / substitution -------------------------------------

    def diff(self, var: str) -> "Polynomial":
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1 :]
                out[ne] = c * k
        return Polynomial._raw(self.vars, out)

    def antiderivative(self, var: str) -> "Polynomial":
        """Term-wise antiderivative in ``var`` with zero constant of integration."""
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            ne = e[:i] + (k + 1,) + e[i + 1 :]
            out[ne] = c / (k + 1)
        return Polynomial._raw(self.vars, out)

    def substitute(self, var: str, value) -> "Polynomial":
        return substitute(self, var, value)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        """Evaluate at a rational point that assigns every variable."""
        missing = [v for v in self.vars if v not in point]
        if missing:
            raise KeyError(f"no value for {missing}")
        vals = [_to_fraction(point[v]) for v in self.vars]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x**k
            total += t
        return total

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Permute variables: the result has ``mapping[v]`` wherever ``self`` had ``v``.

        The varset is unchanged; ``mapping`` must be a permutation of (a subset of) it.
        """
        for src, dst in mapping.items():
            self._index(src)
            self._index(dst)
        perm = [self.vars.index(mapping.get(v, v)) for v in self.vars]
        if len(set(perm)) != len(perm):
            raise ValueError("rename mapping is not a permutation of the varset")
        n = len(self.vars)
        out = {}
        for e, c in self._terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                ne[perm[i]] = k
            out[tuple(ne)] = c
        return Polynomial._raw(self.vars, out)

    def embed(self, vars: Sequence[str]) -> "Polynomial":
        """Re-express over a larger (or reordered) varset containing every occurring variable."""
        vars = make_varset(vars)
        pos = {v: i for i, v in enumerate(vars)}
        occurring = [i for i, v in enumerate(self.vars) if self.occurs(v)]
        for i in occurring:
            if self.vars[i] not in pos:
                raise VarSetMismatch(f"variable {self.vars[i]!r} missing from target varset")
        idx = [(i, pos[self.vars[i]]) for i in occurring]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(vars)
            for i, j in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return Polynomial._raw(vars, out)

    def homogenize(self, hv: str, target_degree: int | None = None) -> "Polynomial":
        return homogenize(self, hv, target_degree)

    def parity_flip(self, var: str) -> "Polynomial":
        """``self`` with ``var`` replaced by ``-var``."""
        i = self._index(var)
        return Polynomial._raw(self.vars, {e: (-c if e[i] & 1 else c) for e, c in self._terms.items()})

    # -- rendering / serialization -----------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({self.vars!r}, {str(self)!r})"

    def to_dict(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"coeff": [str(c.numerator), str(c.denominator)], "exps": list(e)}
                for e, c in self.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Polynomial":
        vars = make_varset(data["vars"])
        terms = {}
        for t in data["terms"]:
            num, den = t["coeff"]
            exps = tuple(t["exps"])
            if exps in terms:
                raise ValueError(f"duplicate monomial {exps!r} in serialized polynomial")
            terms[exps] = Fraction(int(num), int(den))
        return cls(vars, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        return cls.from_dict(json.loads(text))


# -- functional API ---------------------------------------------------


def arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    if p.vars != q.vars:
        raise VarSetMismatch(f"{p.vars!r} vs {q.vars!r}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def scale(p: Polynomial, c) -> Polynomial:
    return p.scale(c)


def substitute(p: Polynomial, var: str, value) -> Polynomial:
    """Replace ``var`` by ``value`` (a polynomial over the same varset, or a rational)."""
    i = p._index(var)
    if not isinstance(value, Polynomial):
        value = Polynomial.constant(p.vars, _to_fraction(value))
    elif value.vars != p.vars:
        raise VarSetMismatch(f"{p.vars!r} vs {value.vars!r}")
    # group by the exponent of var
    groups: dict[int, dict[Exps, Fraction]] = {}
    for e, c in p._terms.items():
        k = e[i]
        groups.setdefault(k, {})[e[:i] + (0,) + e[i + 1 :]] = c
    result = Polynomial._raw(p.vars, {})
    if not groups:
        return result
    # Horner in the powers of value
    top = max(groups)
    for k in range(top, -1, -1):
        result = result * value
        g = groups.get(k)
        if g:
            result = result + Polynomial._raw(p.vars, g)
    return result


class LinearForm:
    """A nonzero polynomial of degree at most one, with a pivot variable used for elimination.

    The pivot defaults to the first variable (in varset order) with a nonzero coefficient.
    """

    __slots__ = ("poly", "pivot")

    def __init__(self, poly: Polynomial, pivot: str | None = None):
        if poly.is_zero():
            raise ValueError("zero linear form")
        if poly.degree() > 1:
            raise ValueError(f"not linear: {poly}")
        if poly.degree() < 1:
            raise ValueError(f"constant is not a linear form: {poly}")
        if pivot is None:
            for v in poly.vars:
                if linear_coeff(poly, v):
                    pivot = v
                    break
        elif not linear_coeff(poly, pivot):
            raise ValueError(f"pivot {pivot!r} has zero coefficient in {poly}")
        self.poly = poly
        self.pivot = pivot

    @classmethod
    def from_coeffs(cls, vars: Sequence[str], coeffs: Mapping[str, object], constant=0, pivot=None):
        vars = make_varset(vars)
        p = Polynomial.constant(vars, constant)
        for v, c in coeffs.items():
            p = p + Polynomial.variable(vars, v).scale(c)
        return cls(p, pivot)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.poly.vars

    def coeff(self, var: str) -> Fraction:
        return linear_coeff(self.poly, var)

    def solve_for_pivot(self) -> Polynomial:
        """The value of the pivot on the hyperplane ``self == 0``."""
        c = self.coeff(self.pivot)
        x = Polynomial.variable(self.vars, self.pivot)
        return (x.scale(c) - self.poly).scale(Fraction(1) / c)

    def is_proportional(self, other: "LinearForm") -> bool:
        a, b = self.poly, other.poly
        ea, ca = a.leading_term()
        cb = b.coefficient(ea)
        if not cb:
            return False
        return a.scale(cb) == b.scale(ca)

    def __eq__(self, other):
        if isinstance(other, LinearForm):
            return self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"LinearForm({str(self.poly)!r})"


def linear_coeff(p: Polynomial, var: str) -> Fraction:
    i = p._index(var)
    e = tuple(1 if j == i else 0 for j in range(len(p.vars)))
    return p._terms.get(e, Fraction(0))


def reduce_mod_linear(p: Polynomial, f: LinearForm | Polynomial) -> Polynomial:
    """Normal form of ``p`` modulo the principal ideal ``(f)``.

    The pivot variable of ``f`` is eliminated; the result is zero iff ``f`` divides ``p``.
    """
    if not isinstance(f, LinearForm):
        f = LinearForm(f)
    if f.vars != p.vars:
        raise VarSetMismatch(f"{p.vars!r} vs {f.vars!r}")
    return substitute(p, f.pivot, f.solve_for_pivot())


def try_exact_divide(p: Polynomial, d: Polynomial) -> Polynomial | None:
    """Exact quotient ``p / d`` or ``None`` if ``d`` does not divide ``p``."""
    if d.vars != p.vars:
        raise VarSetMismatch(f"{p.vars!r} vs {d.vars!r}")
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ld, lc = d.leading_term()
    inv = Fraction(1) / lc
    d_rest = [(e, c) for e, c in d._terms.items() if e != ld]
    rem = dict(p._terms)
    quot: dict[Exps, Fraction] = {}
    while rem:
        lr = max(rem, key=_grlex_key)
        qe = tuple(a - b for a, b in zip(lr, ld))
        if any(k < 0 for k in qe):
            return None
        qc = rem.pop(lr) * inv
        quot[qe] = qc
        for e, c in d_rest:
            ne = tuple(a + b for a, b in zip(qe, e))
            v = rem.get(ne, 0) - qc * c
            if v:
                rem[ne] = v
            else:
                rem.pop(ne, None)
    q = Polynomial._raw(p.vars, quot)
    if q * d != p:  # pragma: no cover - guards the division loop itself
        raise AssertionError("exact division failed re-multiplication check")
    return q


def homogenize(p: Polynomial, hv: str, target_degree: int | None = None) -> Polynomial:
    """Multiply each term by a power of ``hv`` so every term has ``target_degree``."""
    i = p._index(hv)
    if p.occurs(hv):
        raise ValueError(f"homogenizing variable {hv!r} already occurs")
    deg = p.degree()
    if target_degree is None:
        target_degree = max(deg, 0)
    elif target_degree < deg:
        raise ValueError(f"target degree {target_degree} below degree {deg}")
    out = {}
    for e, c in p._terms.items():
        ne = list(e)
        ne[i] = target_degree - sum(e)
        out[tuple(ne)] = c
    return Polynomial._raw(p.vars, out)


def coefficient_of(p: Polynomial, mono) -> Fraction:
    return p.coefficient(mono)


# -- determinants -----------------------------------------------------


class PolyMatrix:
    """A square matrix of polynomials over a common varset."""

    __slots__ = ("rows", "vars")

    def __init__(self, rows: Sequence[Sequence[Polynomial]]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("empty matrix")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        vars = rows[0][0].vars
        for r in rows:
            for p in r:
                if p.vars != vars:
                    raise VarSetMismatch("matrix entries over different varsets")
        self.rows = rows
        self.vars = vars

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        n = len(cols)
        if any(len(c) != n for c in cols):
            raise ValueError("matrix is not square")
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]


DEFAULT_DET_CAP = 8


def _as_matrix(M) -> PolyMatrix:
    if isinstance(M, PolyMatrix):
        return M
    return PolyMatrix(M)


def det_cofactor(M) -> Polynomial:
    """Laplace expansion along rows with memoized minors."""
    M = _as_matrix(M)
    n = M.size
    rows = M.rows
    memo: dict[tuple[int, ...], Polynomial] = {}

    def minor(cols: tuple[int, ...]) -> Polynomial:
        # determinant of the bottom len(cols) rows restricted to cols
        got = memo.get(cols)
        if got is not None:
            return got
        r = n - len(cols)
        if len(cols) == 1:
            res = rows[r][cols[0]]
        else:
            res = Polynomial.zero(M.vars)
            for k, c in enumerate(cols):
                a = rows[r][c]
                if a.is_zero():
                    continue
                sub = minor(cols[:k] + cols[k + 1 :])
                if sub.is_zero():
                    continue
                term = a * sub
                res = res - term if k & 1 else res + term
        memo[cols] = res
        return res

    return minor(tuple(range(n)))


def det_bareiss(M) -> Polynomial:
    """Fraction-free Gaussian elimination (Bareiss) with row pivoting."""
    M = _as_matrix(M)
    n = M.size
    a = [list(r) for r in M.rows]
    sign = 1
    prev = Polynomial.constant(M.vars, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(M.vars)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def determinant(M, *, cap: int = DEFAULT_DET_CAP, cross_check: bool = False) -> Polynomial:
    """Exact determinant; ``cross_check`` also runs Bareiss and asserts agreement."""
    M = _as_matrix(M)
    if M.size > cap:
        raise ValueError(f"matrix dimension {M.size} exceeds cap {cap}")
    d = det_cofactor(M)
    if cross_check:
        other = det_bareiss(M)
        if other != d:
            raise AssertionError("cofactor and Bareiss determinants disagree")
    return d
