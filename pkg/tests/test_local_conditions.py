import itertools
import random

import numpy as np
import pytest

from tamelift.cohomology import act_on_deformation, h1_space
from tamelift.local_conditions import (
    BadPrime,
    Delegated,
    IncompatiblePair,
    KhareDatum,
    LocalCondition,
    NoLift,
    NotNearlyOrdinary,
    NotNice,
    PreservationFailed,
    ShapeMismatch,
    build_condition,
    explicit_conjugators,
    khare_congruence,
    khare_lift,
    lift_member,
    membership_test,
    nearly_ordinary_ledger,
    nice_condition,
    preservation_check,
    prime_predicates,
)
from tamelift.matrix_algebra import Ad0Vector, CocyclePair, Mat2
from tamelift.padic_ring import Ring, find_prime
from tamelift.tame_rep import TameRep, TypeLabel, principal_series_rep, validate

from samplers import P72, Q1, case_catalogue

F7 = P72.field
CAT = case_catalogue()


def cp(sigma=(0, 0, 0), tau=(0, 0, 0)):
    return CocyclePair(Ad0Vector(*sigma), Ad0Vector(*tau))


@pytest.fixture(scope="module")
def conds():
    return {k: build_condition(r) for k, r in CAT.items()}


# ---------------------------------------------------------------- construction


@pytest.mark.parametrize(
    "name,tag,alpha,basis",
    [
        ("4.1-jordan", "4.1-jordan", 4, [cp(tau=(0, 1, 0))]),
        ("4.1-distinct", "4.1-distinct", 3, [cp(sigma=(1, 0, 0))]),
        ("2.2", "2.2", 2, [cp(sigma=(0, 1, 0))]),
        ("2.3", "2.3", 1, []),
        ("4.2-antidiag", "4.2-antidiag", 3, [cp(tau=(0, 1, 6))]),
        ("4.2-general", "4.2-general", 3, [cp(tau=(0, 1, 0))]),
    ],
)
def test_case_shapes(conds, name, tag, alpha, basis):
    c = conds[name]
    assert (c.case_tag, c.alpha, c.nq_basis) == (tag, alpha, basis)
    assert len(c.nq_basis) == c.space.h1_dim - c.space.h2_dim


def test_scalar_bases_have_codim_h2(conds):
    for name, c in conds.items():
        if c.case_tag == "4.1-scalar":
            assert len(c.nq_basis) == 3 and c.space.h2_dim == 3
            assert c.nq_tags == ["form", "trivial", "trivial"]


def test_jordan_alpha_tracks_inertia_gap():
    R = Ring(P72, 12)
    pi = R.pi
    rep = principal_series_rep(Q1, R(3), R(3) + pi, R.one + pi ** 3, R.one, 1)
    with pytest.raises(BadPrime):
        build_condition(rep)  # v(a - b) = 1 < v(x - y) - 1
    assert build_condition(rep, force=True).alpha == 5
    # with v(x - y) = r the inertia is residually ramified and the Khare form takes over
    rep = principal_series_rep(Q1, R(3), R(3) + pi, R.one + pi, R.one, 1)
    c = build_condition(rep)
    assert (c.case_tag, c.alpha) == ("2.2", 2)


def test_delegated_cases():
    R = Ring(P72, 6)
    rep = TameRep(3, Mat2.diag(R(3), R.one), Mat2.identity(R))
    c = build_condition(rep)
    assert c.delegated and c.case_tag == "unramified"
    with pytest.raises(Delegated):
        build_condition(rep, allow_delegated=False)
    with pytest.raises(Delegated):
        membership_test(c, rep)


def test_bad_prime_guard():
    R = Ring(P72, 12)
    pi = R.pi
    rep = principal_series_rep(Q1, R.one + pi, R.one, R.one + pi ** 3, R.one, 1)
    with pytest.raises(BadPrime) as exc:
        build_condition(rep)
    assert exc.value.report.is_bad
    assert build_condition(rep, force=True).case_tag == "4.1-jordan"


def test_incompatible_labels():
    R = Ring(P72, 8)
    rep = principal_series_rep(31, R(3), R(3) + R.pi, R.one, R.one, 1)
    stb = TypeLabel("Steinberg", "steinberg", level="residual")
    with pytest.raises(IncompatiblePair):
        build_condition(rep, residual=stb)


def test_condition_json_roundtrip(conds):
    c = conds["2.3"]
    data = c.to_json()
    back = LocalCondition.from_json(P72, data)
    assert back.nq_basis == [] and back.template.in_form(c.template.member(3))
    with pytest.raises(ValueError):
        LocalCondition.from_json(P72, dict(data, extra=1))


# ---------------------------------------------------------------- membership


@pytest.mark.parametrize("name", sorted(CAT))
def test_members_and_lifts(conds, name):
    c = conds[name]
    rng = random.Random(7)
    for m in (max(2, c.alpha), c.alpha + 2):
        mem = c.template.random_member(m, rng)
        assert membership_test(c, mem) is not None
        L = lift_member(c, mem, m + 2)
        assert L.reduce(m).same_as(mem)
        validate(L)
        assert membership_test(c, L) is not None


def test_singleton_rejects_every_nonzero_class(conds):
    c = conds["2.3"]
    mem = c.template.member(3)
    for u in h1_space(mem.reduce(1)).classes():
        moved = act_on_deformation(u, mem)
        assert (membership_test(c, moved) is None) == (not u.is_zero())


def test_template_knows_its_precision(conds):
    c = conds["2.2"]
    with pytest.raises(Exception):
        c.template.normal_form(c.template.member(c.template.max_precision + 1))


# ---------------------------------------------------------------- preservation


@pytest.mark.parametrize("name", sorted(CAT))
def test_preservation_sample(conds, name):
    c = conds[name]
    rng = random.Random(11)
    for m in range(max(2, c.alpha), c.alpha + 3):
        span = list(c.span())
        for _ in range(3):
            mem = c.template.random_member(m, rng)
            for u in c.nq_basis + rng.sample(span, min(8, len(span))):
                w = preservation_check(c, u, mem)
                assert w.kind in ("identity", "trivial", "lambda", "normal_form")


def test_preservation_rejects_outside_span(conds):
    c = conds["4.1-jordan"]
    with pytest.raises(ValueError):
        preservation_check(c, cp(sigma=(0, 0, 1)), c.template.member(4))


def test_bad_rep_loses_preservation():
    R = Ring(P72, 12)
    pi = R.pi
    rep = principal_series_rep(Q1, R.one + pi, R.one, R.one + pi ** 3, R.one, 1)
    c = build_condition(rep, force=True)
    mem = c.template.member(c.alpha)
    failures = 0
    for u in c.span():
        try:
            preservation_check(c, u, mem)
        except PreservationFailed as exc:
            failures += 1
            assert exc.details["case"] == "4.1-jordan"
    assert failures > 0


@pytest.mark.parametrize("name", [k for k in sorted(CAT) if k.startswith("4.1-scalar") or k.startswith("4.2")])
def test_displayed_conjugators(conds, name):
    c = conds[name]
    for m in range(c.alpha, c.alpha + 3):
        mem = c.template.ref.reduce(m) if c.case_tag.startswith("4.2") else c.template.member(m)
        found = explicit_conjugators(c, mem)
        assert found
        for _, u, C in found:
            assert act_on_deformation(u, mem).conjugate(C).same_as(mem)


# ---------------------------------------------------------------- Khare form


def _datum(beta, gamma, q=Q1, psi_digits=(1, 0, 1), N=8):
    R = Ring(P72, N)
    psi = R.from_digits(list(psi_digits))
    m = beta.prec
    return KhareDatum(psi, beta + gamma * (psi.reduce(m) - 1), beta, gamma, -R.one, q)


def test_khare_lift_reduces_and_is_valid():
    R1 = Ring(P72, 1)
    d = _datum(R1(1), R1(2))
    L = khare_lift(d, 1, 8)
    validate(L)
    assert L.reduce(1).A == Mat2.from_ints(R1, [[1, 2], [0, 1]])
    assert L.B.d == L.ring.one and L.B.b == L.ring.one


def test_khare_congruence_failure():
    R1 = Ring(P72, 1)
    d = _datum(R1(2), R1(2))  # 4 + 0 - 1 = 3 != 0
    assert not khare_congruence(d, 1)
    with pytest.raises(NoLift):
        khare_lift(d, 1, 6)


def test_khare_shape_checks():
    R1 = Ring(P72, 1)
    d = _datum(R1(1), R1(2), psi_digits=(2, 0, 1))
    with pytest.raises(ShapeMismatch):
        khare_lift(d, 1, 6)
    good = _datum(R1(1), R1(2))
    bad = KhareDatum(good.psi_tau, R1(3), good.beta_entry, good.gamma_entry, good.Psi, good.q)
    with pytest.raises(ShapeMismatch):
        khare_lift(bad, 1, 6)


def test_khare_exhaustive_mod_pi2():
    # a lift exists exactly when the congruence holds; checked over every (beta, gamma) mod pi^2
    R2 = Ring(P72, 2)
    for bd in itertools.product(range(7), repeat=2):
        beta = R2.from_digits(list(bd))
        if beta.val():
            continue
        for gd in ((2, 0), (0, 3), (5, 6)):
            d = _datum(beta, R2.from_digits(list(gd)))
            if khare_congruence(d, 2):
                L = khare_lift(d, 2, 6)
                assert L.A.d.reduce(2) == beta
            else:
                with pytest.raises(NoLift):
                    khare_lift(d, 2, 6)


# ---------------------------------------------------------------- nice primes


def test_nice_condition():
    R1 = Ring(P72, 1)
    rb = TameRep(11, Mat2.diag(R1(11), R1.one), Mat2.identity(R1))
    pr = prime_predicates(rb, 11, 7, 1)
    assert pr.nice_for_rhobar and pr.nice_for_rho_n
    c = nice_condition(11, rb)
    assert c.nq_basis == [cp(tau=(0, 1, 0))] and c.space.h1_dim == 2
    rng = random.Random(1)
    for m in (2, 3, 4):
        mem = c.template.random_member(m, rng)
        for u in c.span():
            preservation_check(c, u, mem)


def test_not_nice():
    R1 = Ring(P72, 1)
    rb = TameRep(29, Mat2.diag(R1(29), R1.one), Mat2.identity(R1))
    assert "congruence" in prime_predicates(rb, 29, 7, 1).reasons
    with pytest.raises(NotNice):
        nice_condition(29, rb)


def test_special_prime():
    q = find_prime(7, 1)
    R = Ring(P72, 2)
    rep = TameRep(q, Mat2(R.one, R.pi, R.zero, R.one), Mat2.identity(R))
    assert prime_predicates(rep, q, 7, 2).special_for_f


# ---------------------------------------------------------------- the prime p


def _h0_oracle(gens, twist_by_chi, quotient_e2=False, sub_u=False):
    """Count fixed vectors by conjugating every X in sl2(F7) directly."""
    grid = np.array(list(itertools.product(range(7), repeat=3)))
    if sub_u:
        grid = grid[grid[:, 2] == 0]
    ok = np.ones(len(grid), dtype=bool)
    for g, chi in gens:
        a, b, c, d = g
        G = np.array([[a, b], [c, d]])
        det = (a * d - b * c) % 7
        Ginv = (pow(det, -1, 7) * np.array([[d, -b], [-c, a]])) % 7
        s = chi if twist_by_chi else 1
        for i, (l1, l2, l3) in enumerate(grid):
            X = np.array([[l1, l2], [l3, -l1]])
            Y = s * (G @ X @ Ginv) % 7
            diff = (Y - X) % 7
            if quotient_e2:
                diff[0, 1] = 0
            if diff.any():
                ok[i] = False
    count = int(ok.sum())
    if quotient_e2:
        count //= 7
    return round(np.log(count) / np.log(7))


LEDGER_SHAPES = [
    [((2, 0, 0, 1), 2), ((1, 1, 0, 1), 1)],
    [((2, 0, 0, 1), 2)],
    [((3, 0, 0, 1), 2)],
    [((2, 1, 0, 1), 2)],
    [((3, 0, 0, 5), 1), ((1, 1, 0, 1), 3)],
    [((2, 0, 0, 1), 3), ((1, 1, 0, 1), 1)],
    [((4, 0, 0, 2), 2)],
    [((2, 0, 0, 1), 2), ((1, 0, 0, 1), 3)],
    [((6, 0, 0, 1), 6)],
    [((2, 3, 0, 1), 4)],
]


@pytest.mark.parametrize("gens", LEDGER_SHAPES)
def test_ledger_against_fixed_point_oracle(gens):
    L = nearly_ordinary_ledger(gens, F7)
    assert L.h0_Ad == _h0_oracle(gens, False)
    assert L.h0_Adstar == _h0_oracle(gens, True)
    assert L.h0_U == _h0_oracle(gens, False, sub_u=True)
    assert L.h0_Ustar == _h0_oracle(gens, True, quotient_e2=True)
    assert L.h2_Ad == L.h0_Adstar
    assert L.dim_Np + L.codim_Np == L.h1_Ad
    assert L.h1_Ad - L.h0_Ad - L.h2_Ad == 3


def test_ledger_frozen_row():
    L = nearly_ordinary_ledger([((6, 0, 0, 1), 6)], F7)
    assert (L.h0_Ad, L.h0_Adstar, L.h1_Ad, L.dim_Np, L.codim_Np, L.non_smooth_flag) == (1, 2, 6, 4, 2, True)


def test_ledger_rejections():
    with pytest.raises(NotNearlyOrdinary):
        nearly_ordinary_ledger([((1, 1, 0, 1), 3)], F7)
    with pytest.raises(NotNearlyOrdinary):
        nearly_ordinary_ledger([((1, 0, 1, 1), 3)], F7)
    with pytest.raises(NotNearlyOrdinary):
        nearly_ordinary_ledger([], F7)
    with pytest.raises(ValueError):
        nearly_ordinary_ledger([((2, 0, 0, 1), 1)], F7)
