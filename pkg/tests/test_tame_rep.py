import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from tamelift.cohomology import is_cocycle
from tamelift.matrix_algebra import Ad0Vector, CocyclePair, Mat2
from tamelift.padic_ring import Ring, RingParams, find_prime, hensel_sqrt, invert_unit
from tamelift.tame_rep import (
    AmbiguousAtPrecision,
    DeterminantMismatch,
    DeterminantNotFixed,
    PrecisionTooLow,
    RelationViolated,
    TameCharacter,
    TameRep,
    TypeLabel,
    case_tag,
    classify_integral,
    classify_residual,
    extract_f_local,
    induced_twist,
    is_bad,
    principal_series_rep,
    reduction_compatible,
    twist_normalize,
    validate,
)

P72 = RingParams(7, e=2)
R1 = Ring(P72, 1)
Q1 = find_prime(7 ** 6, 1)
QM = find_prime(7 ** 6, 7 ** 6 - 1)


# ---------------------------------------------------------------- validate


def test_unramified_diag_is_valid():
    R = Ring(P72, 6)
    q = 11
    validate(TameRep(q, Mat2.diag(R(q), R.one), Mat2.identity(R)))


def test_relation_violated_reports_defect():
    R = Ring(P72, 4)
    rep = TameRep(3, Mat2.identity(R), Mat2(R.one, R.one, R.zero, R.one))
    with pytest.raises(RelationViolated):
        validate(rep)


def test_determinant_mismatch():
    R = Ring(P72, 4)
    rep = TameRep(11, Mat2.diag(R(11), R.one), Mat2.identity(R), TameCharacter(11, R.one, R.one))
    with pytest.raises(DeterminantMismatch):
        validate(rep)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_nice_shape_unipotent(k):
    # A B A^-1 scales the corner of B by q; B^q multiplies it by q too
    N = 6
    R = Ring(P72, N)
    pk = R.pi ** k
    A = Mat2.diag(R(11), R.one)
    B = Mat2(R.one, pk, R.zero, R.one)
    conj = A * B * A.inv()
    assert conj.b == pk * 11 and (B ** 11).b == pk * 11
    validate(TameRep(11, A, B))
    # the wrong scaling breaks the relation
    with pytest.raises(RelationViolated):
        validate(TameRep(11, Mat2.diag(R(3), R.one), B))


# ---------------------------------------------------------------- classification


def test_residual_unramified():
    lab = classify_residual(TameRep(3, Mat2.diag(R1(3), R1.one), Mat2.identity(R1)))
    assert lab.family == "Unramified" and lab.params["frob_type"] == "split"


def test_residual_steinberg():
    lab = classify_residual(TameRep(29, Mat2.identity(R1), Mat2.from_ints(R1, [[1, 1], [0, 1]])))
    assert lab.family == "Steinberg"


def test_residual_induced():
    q = find_prime(42, 41)
    rep = TameRep(q, Mat2.from_ints(R1, [[0, 1], [1, 0]]), Mat2.diag(R1(2), R1(4)))
    validate(rep)
    assert classify_residual(rep).family == "Induced"


def test_integral_diagonal_r0():
    R = Ring(P72, 8)
    lab = classify_integral(TameRep(3, Mat2.diag(R(3), R.one), Mat2.identity(R)))
    assert lab.family == "PrincipalSeries" and lab.params["r"] == 0


def test_integral_extension_level():
    R = Ring(P72, 10)
    pi = R.pi
    rep = principal_series_rep(Q1, R(3), R(3) + pi, R.one + pi ** 2, R.one, 1)
    lab = classify_integral(rep)
    assert lab.family == "PrincipalSeries" and lab.params["r"] == 1
    assert lab.subcase == "4.1-jordan"
    assert case_tag(lab.residual, lab) == "4.1-jordan"


def test_integral_induced_antidiag():
    R = Ring(P72, 8)
    x = R.one + R.pi
    rep = TameRep(QM, Mat2(R.zero, R.one, R.one, R.zero), Mat2.diag(x, x ** QM))
    lab = classify_integral(rep)
    assert lab.family == "Induced" and lab.params["M"] == "ramified"


def test_integral_needs_precision_two():
    with pytest.raises(PrecisionTooLow):
        classify_integral(TameRep(3, Mat2.diag(R1(3), R1.one), Mat2.identity(R1)))


def test_reduction_compatibility_rows():
    ps = TypeLabel("PrincipalSeries", "4.1-jordan")
    stb = TypeLabel("Steinberg", "steinberg", level="residual")
    ind_res = TypeLabel("Induced", "induced", level="residual")
    unr = TypeLabel("Unramified", "scalar", level="residual")
    ind = TypeLabel("Induced", "4.2-antidiag", params={"M": "ramified"})
    assert reduction_compatible(ps, stb, 29, 7)
    assert not reduction_compatible(ps, stb, 31, 7)
    assert not reduction_compatible(TypeLabel("Steinberg", "steinberg"), ind_res, 41, 7)
    assert reduction_compatible(ind, unr, 13, 7)
    assert not reduction_compatible(ind, unr, 11, 7)


# ---------------------------------------------------------------- badness


def test_bad_when_inequality_strict():
    R = Ring(P72, 10)
    pi = R.pi
    rep = principal_series_rep(Q1, R.one, R.one + pi, R.one + pi ** 3, R.one, 1)
    rep_ = is_bad(rep)
    assert rep_.is_bad and (rep_.lhs_valuation, rep_.rhs_valuation) == (1, 2)


def test_not_bad_when_balanced():
    R = Ring(P72, 10)
    pi = R.pi
    rep = principal_series_rep(Q1, R.one, R.one + pi ** 2, R.one + pi ** 3, R.one, 1)
    assert not is_bad(rep).is_bad


def test_not_bad_when_residually_ramified():
    R = Ring(P72, 6)
    rep = TameRep(29, Mat2.diag(R(29), R.one), Mat2(R.one, R.one, R.zero, R.one))
    assert not is_bad(rep).is_bad


# ---------------------------------------------------------------- twisting


def test_twist_by_trivial():
    R = Ring(P72, 6)
    rep = principal_series_rep(Q1, R(3), R(3) + R.pi, R.one + R.pi ** 2, R.one, 1)
    assert twist_normalize(rep, TameCharacter.trivial(Q1, rep.ring)).same_as(rep)


def test_twist_diagonal():
    R = Ring(P72, 6)
    rep = TameRep(3, Mat2.diag(R(3), R.one), Mat2.identity(R))
    out = twist_normalize(rep, TameCharacter(3, R(2), R.one))
    assert out.A == Mat2.diag(R(6), R(2)) and out.B == rep.B


def test_case_42_twist():
    R = Ring(P72, 10)
    pi = R.pi
    x = R.one + pi
    t = R.one + pi  # v(t - 1) = 1 = v(x - y)
    rep = TameRep(QM, Mat2(R.zero, t, R.one, R.zero), Mat2.diag(x, x ** QM))
    validate(rep)
    vxy = (rep.B.a - rep.B.d).val()
    assert (t - 1).val() <= vxy
    out, eta = induced_twist(rep)
    assert out.A.a.is_zero() and out.A.d.is_zero() and out.A.c == out.ring.one
    assert out.A.b == eta * eta * t
    assert (out.A.b - 1).val() > vxy
    validate(out)


# ---------------------------------------------------------------- the class f


def test_f_of_trivial_lift():
    R = Ring(P72, 2)
    rep = TameRep(3, Mat2.diag(R(3), R.one), Mat2.identity(R))
    assert extract_f_local(rep).is_zero()


def test_f_reads_e2_digit():
    R = Ring(P72, 2)
    Abar = Mat2.diag(R(3), R.one)
    A = (Mat2.identity(R) + Mat2(R.zero, R.pi * 4, R.zero, R.zero)) * Abar
    f = extract_f_local(TameRep(3, A, Mat2.identity(R)))
    assert f == CocyclePair(Ad0Vector(0, 4, 0), Ad0Vector())


def test_f_special_shape():
    R = Ring(P72, 2)
    q = find_prime(7, 1)
    f = extract_f_local(TameRep(q, Mat2(R.one, R.pi, R.zero, R.one), Mat2.identity(R)))
    assert f == CocyclePair(Ad0Vector(0, 1, 0), Ad0Vector())


def test_f_needs_fixed_determinant():
    R = Ring(P72, 2)
    A = Mat2.diag(R.one + R.pi, R.one)
    with pytest.raises(DeterminantNotFixed):
        extract_f_local(TameRep(3, A, Mat2.identity(R)))


def test_f_needs_precision_two():
    with pytest.raises(PrecisionTooLow):
        extract_f_local(TameRep(3, Mat2.diag(R1(3), R1.one), Mat2.identity(R1)))


# ---------------------------------------------------------------- properties

digit = st.integers(0, 6)


@st.composite
def normal_form_reps(draw):
    """Principal series in normal form with q = 1 mod 7^6 and principal unit inertia."""
    N, r = 8, draw(st.integers(0, 2))
    R = Ring(P72, N + r)
    pi = R.pi
    def rnd():
        return R.from_digits([draw(digit) for _ in range(N + r)])

    a = R.lift_residue(draw(st.integers(1, 6))) + pi * rnd()
    x = R.one + pi * rnd()
    if r:
        # the off-diagonal entries divide by pi^r
        b, y = a + R.pi_pow(r) * rnd(), x + R.pi_pow(r) * rnd()
        assume(b.val() == 0)
    else:
        b, y = R.lift_residue(draw(st.integers(1, 6))) + pi * rnd(), R.one + pi * rnd()
    return principal_series_rep(Q1, a, b, x, y, r)


def _random_unit_det(ring, rng):
    F = ring.field
    while True:
        M = Mat2(*(ring.from_digits([rng.randrange(F.order) for _ in range(ring.precision)]) for _ in range(4)))
        if M.det().val() == 0:
            return M


@settings(max_examples=60, deadline=None)
@given(normal_form_reps(), st.integers(0, 10 ** 6), st.integers(1, 8))
def test_validate_is_stable(rep, seed, m):
    validate(rep)
    rng = random.Random(seed)
    validate(rep.conjugate(_random_unit_det(rep.ring, rng)))
    validate(rep.reduce(m))
    chi = TameCharacter(rep.q, rep.ring.lift_residue(rng.randrange(1, 7)), rep.ring.one)
    validate(twist_normalize(rep, chi))


@settings(max_examples=500, deadline=None)
@given(normal_form_reps())
def test_residual_label_matches_integral_row(rep):
    try:
        lab = classify_integral(rep)
    except AmbiguousAtPrecision:
        assume(False)
    res = classify_residual(rep.residual())
    assert lab.residual.family == res.family
    assert reduction_compatible(lab, res, rep.q, 7)


@settings(max_examples=200, deadline=None)
@given(normal_form_reps())
def test_normal_forms_not_bad_unless_inequality(rep):
    rpt = is_bad(rep)
    if rpt.is_bad:
        assert rpt.lhs_valuation < rpt.rhs_valuation


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.lists(digit, min_size=4, max_size=4))
def test_f_is_a_cocycle(beta, d):
    # a rep with fixed determinant at precision 2 around rho-bar = diag(beta, 1), unramified
    q = 11 if beta != 4 else 3
    R = Ring(P72, 2)
    beta = 11 % 7 if beta == 1 else beta
    pi = R.pi
    A = Mat2(R(beta) + pi * d[0], pi * d[1], pi * d[2], R.one - pi * d[0] * P72.field.inv(beta))
    rep = TameRep(q, A, Mat2.identity(R))
    if A.det() != R(beta):
        return
    f = extract_f_local(rep)
    assert is_cocycle(f, rep.residual())


def test_hensel_sqrt_gives_twist_parameter():
    R = Ring(P72, 6)
    t = R.one + R.pi
    eta = invert_unit(hensel_sqrt(t))
    assert (eta * eta * t) == R.one
