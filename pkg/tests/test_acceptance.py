"""Exit criteria.  Every comparison is exact; each test records one PASS/FAIL line."""

import random
import time
from fractions import Fraction

import pytest

from catalan_basis.catalan_core import ArrangementParams, basis, derivation_delta, psi_coned
from catalan_basis.exact_poly import (
    LinearForm,
    Polynomial,
    det_bareiss,
    det_cofactor,
    reduce_mod_linear,
    try_exact_divide,
)
from catalan_basis.factorial_kit import half_binom
from catalan_basis.verifier import (
    check_integral_formula,
    check_lemma1,
    check_membership,
    check_phi,
    check_phi_partial,
    check_prop1,
    check_prop2,
    check_symm_recurrence,
    saito_check,
    saito_matrix,
)

INSTANCES = [(ell, m) for ell in (1, 2, 3) for m in (0, 1, 2)]
PER_INSTANCE_LIMIT = 300.0
SUITE_LIMIT = 600.0


def expected_abs_c(ell, m):
    out = Fraction(1)
    for i in range(ell):
        out /= abs(half_binom(Fraction(2 * (i + 1) * (m + 1) - 1, 2), m + 1))
    return out


@pytest.fixture(scope="module")
def saito_results():
    out = {}
    for ell, m in INSTANCES:
        t0 = time.perf_counter()
        res = saito_check(ArrangementParams(ell, m))
        out[(ell, m)] = (res, time.perf_counter() - t0)
    return out


def test_criterion_1_basis(saito_results, record_criterion):
    bad = []
    for (ell, m), (res, elapsed) in saito_results.items():
        c = res.quotient_constant
        ok = (
            res.passed
            and c is not None
            and c != 0
            and res.det == psi_coned(ArrangementParams(ell, m)).scale(c)
            and abs(c) == expected_abs_c(ell, m)
            and elapsed <= PER_INSTANCE_LIMIT
        )
        if not ok:
            bad.append((ell, m, res.detail, elapsed))
    spot = abs(saito_results[(1, 0)][0].quotient_constant) == 2 and abs(
        saito_results[(2, 0)][0].quotient_constant
    ) == Fraction(4, 3)
    slowest = max(e for _, e in saito_results.values())
    record_criterion(
        "1 basis (Saito)",
        not bad and spot,
        f"{len(INSTANCES)} instances, slowest {slowest:.2f}s" if not bad else f"failures {bad}",
    )


def test_criterion_2_membership(record_criterion):
    bad = []
    n = 0
    for ell, m in INSTANCES:
        P = ArrangementParams(ell, m)
        for u in range(ell + 1):
            n += 1
            r = check_membership(P, u)
            if not r.passed:
                bad.append((ell, m, u))
    record_criterion("2 membership", not bad, f"{n} derivations" if not bad else f"failures {bad}")


def test_criterion_3_degrees(saito_results, record_criterion):
    bad = []
    for (ell, m), (res, _) in saito_results.items():
        if sum(res.degrees) != 1 + (2 * m + 1) * ell**2 or res.defining_degree != sum(res.degrees):
            bad.append((ell, m, res.degrees))
    ok = not bad and sum(saito_results[(3, 2)][0].degrees) == 46
    record_criterion("3 degree audit", ok, "(3,2) -> 46" if ok else f"failures {bad}")


def test_criterion_4_identities(record_criterion):
    t0 = time.perf_counter()
    bad = []
    counts = {}

    def run(name, reports):
        reports = list(reports)
        counts[name] = len(reports)
        bad.extend((name, r.params) for r in reports if not r.passed)

    run("prop1", (check_prop1(m, u) for m in range(4) for u in range(1, 5)))
    run("lemma1", (check_lemma1(m, u) for m in range(5) for u in range(5)))

    prop2 = [check_prop2(m, u) for m in range(4) for u in range(4)]
    counts["prop2"] = len(prop2)
    bad.extend(("prop2", (r.m, r.u)) for r in prop2 if not r.passed)
    bad.extend(("prop2 A_{0,u}", r.u) for r in prop2 if r.m == 0 and r.a_const != Fraction(2, 2 * r.u + 1))
    bad.extend(("prop2 sign", (r.m, r.u)) for r in prop2 if r.y_side_const != -r.a_const)

    run("phi", (check_phi(m, k, v) for m in range(4) for k in range(2 * m + 1) for v in range(4)))
    run(
        "phi_partial",
        (
            check_phi_partial(m, k, v, r)
            for m in range(4)
            for k in range(2 * m + 1)
            for v in range(4)
            for r in range(m + 2)
        ),
    )
    run(
        "symm",
        (
            check_symm_recurrence(ell, m, u, i)
            for ell in range(2, 5)
            for m in range(3)
            for u in range(3)
            for i in range(1, ell + 1)
        ),
    )
    run("integral", (check_integral_formula(m, u) for m in range(4) for u in range(4)))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed <= SUITE_LIMIT
    note = ", ".join(f"{k} {v}" for k, v in counts.items()) + f"; {elapsed:.1f}s"
    record_criterion("4 identity suite", ok, note if not bad else f"failures {bad[:5]}")


def _perturbed_delta(P, u):
    d = derivation_delta(P, u)
    coeffs = list(d.coeffs)
    coeffs[0] = coeffs[0] + 1
    return type(d)(d.coeff_z, tuple(coeffs), "corrupted")


def test_criterion_5_negative_controls(record_criterion):
    P = ArrangementParams(2, 1)
    derivs = basis(P)
    derivs[2] = _perturbed_delta(P, 1)
    saito_bad = saito_check(P, derivations=derivs).to_report()
    reports = {
        "membership": check_membership(P, 0, derivation=_perturbed_delta(P, 0)),
        "saito": saito_bad,
        "prop1": check_prop1(1, 2, perturb=1),
        "lemma1": check_lemma1(2, 1, perturb=Fraction(1, 3)),
        "phi": check_phi(2, 1, 1, perturb=1),
        "phi_partial": check_phi_partial(2, 2, 1, 1, perturb=1),
        "symm": check_symm_recurrence(3, 1, 1, 2, perturb=1),
        "integral": check_integral_formula(1, 1, perturb=1),
    }
    prop2 = check_prop2(1, 1, perturb=1)
    failed_properly = {
        name: (not r.passed and r.witness is not None and r.witness != 0) for name, r in reports.items()
    }
    failed_properly["prop2"] = not prop2.passed and prop2.witness is not None
    missing = [k for k, v in failed_properly.items() if not v]
    record_criterion(
        "5 negative controls", not missing, f"{len(failed_properly)} families" if not missing else f"{missing}"
    )


def _random_poly(rng, vars, n_terms=4, max_exp=3):
    terms = {}
    for _ in range(n_terms):
        e = tuple(rng.randint(0, max_exp) for _ in vars)
        terms[e] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return Polynomial(vars, terms)


def test_criterion_6_engine(record_criterion):
    rng = random.Random(20241015)
    V = ("x", "y", "z")
    problems = []
    for _ in range(200):
        a, b, c = (_random_poly(rng, V) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or a * b != b * a or (a + b) + c != a + (b + c):
            problems.append("ring axioms")
            break
    for _ in range(200):
        p = _random_poly(rng, V)
        coeffs = [rng.randint(-2, 2) for _ in V]
        if not any(coeffs):
            coeffs[0] = 1
        lin = Polynomial(V, {tuple(int(i == j) for j in range(3)): c for i, c in enumerate(coeffs)})
        f = LinearForm(lin + rng.randint(-2, 2))
        if rng.random() < 0.5:
            p = p * f.poly
        if reduce_mod_linear(p, f).is_zero() != (try_exact_divide(p, f.poly) is not None):
            problems.append("reduce/divide")
            break
    n_det = 0
    for ell, m in INSTANCES:
        M = saito_matrix(basis(ArrangementParams(ell, m)))
        n_det += 1
        if det_cofactor(M) != det_bareiss(M):
            problems.append(f"det {ell},{m}")
    for _ in range(60):
        n = rng.randint(1, 4)
        M = [[_random_poly(rng, V, 2, 2) for _ in range(n)] for _ in range(n)]
        n_det += 1
        if det_cofactor(M) != det_bareiss(M):
            problems.append("random det")
            break
    for _ in range(100):
        p = _random_poly(rng, V, 6)
        t = p.to_json()
        q = Polynomial.from_json(t)
        if q != p or q.to_json() != t:
            problems.append("json")
            break
    for ell, m in INSTANCES[:6]:
        for d in basis(ArrangementParams(ell, m)):
            if type(d).from_dict(d.to_dict()) != d:
                problems.append("derivation json")
    record_criterion("6 engine properties", not problems, f"{n_det} determinant pairs" if not problems else f"{problems}")
