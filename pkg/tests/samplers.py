"""Random valid tame representations over O/pi^m (p = 7, e = 2), for the property and acceptance tests.

Entries are integers or Teichmuller lifts, so the relation holds exactly at every
precision and the reduction mod pi is a valid residual representation.
"""

from __future__ import annotations

import random

from tamelift.lifting_engine import _rep_23
from tamelift.local_conditions import KhareDatum, khare_lift
from tamelift.matrix_algebra import Mat2
from tamelift.padic_ring import Ring, RingParams, div_pi, find_prime, teichmuller_root
from tamelift.tame_rep import TameRep, principal_series_rep, validate

P72 = RingParams(7, e=2)
R1 = Ring(P72, 1)

# q mod 42 decides which shapes are consistent: 43 = 1, 41 = -1, the rest generic
PRIMES = (3, 11, 29, 41, 43, 13)


def _gl2(rng):
    while True:
        m = [rng.randrange(7) for _ in range(4)]
        if (m[0] * m[3] - m[1] * m[2]) % 7:
            return m


def _teich(z, m):
    return teichmuller_root(P72, 6, z, m)


def random_rep(rng: random.Random, m: int = 1) -> TameRep:
    R = Ring(P72, m)
    kind = rng.choice(["unramified", "steinberg", "diag", "induced"])
    if kind == "unramified":
        q = rng.choice(PRIMES)
        a = _gl2(rng)
        rep = TameRep(q, Mat2.from_ints(R, [a[:2], a[2:]]), Mat2.identity(R))
    elif kind == "steinberg":
        q = rng.choice(PRIMES)
        s, t = rng.randrange(1, 7), rng.randrange(7)
        rep = TameRep(q, Mat2.from_ints(R, [[q * s, t], [0, s]]), Mat2.from_ints(R, [[1, 1], [0, 1]]))
    elif kind == "diag":
        q = 43
        A = Mat2.diag(R(rng.randrange(1, 7)), R(rng.randrange(1, 7)))
        rep = TameRep(q, A, Mat2.diag(_teich(rng.randrange(1, 7), m), _teich(rng.randrange(1, 7), m)))
    else:
        q = 41
        Z = _teich(rng.randrange(1, 7), m)
        A = Mat2(R.zero, R(rng.randrange(1, 7)), R(rng.randrange(1, 7)), R.zero)
        rep = TameRep(q, A, Mat2.diag(Z, Z ** q))
    validate(rep)
    return rep


def random_residual(rng: random.Random) -> TameRep:
    return random_rep(rng, 1)


# ---------------------------------------------------------------- one rep per constructed case

Q1 = find_prime(7 ** 8, 1)
QM = find_prime(7 ** 8, 7 ** 8 - 1)


def case_catalogue(N: int = 16) -> dict[str, TameRep]:
    """Integral representations exercising every built (C_q, N_q) construction."""
    R = Ring(P72, N)
    pi, one = R.pi, R.one
    reps = {
        "4.1-jordan": principal_series_rep(Q1, R(3), R(3) + pi, one + pi ** 2, one, 1),
        "4.1-scalar split, v(a-b) < v(x-y)": principal_series_rep(Q1, one, one + pi, one + pi ** 2, one, 0),
        "4.1-scalar split, v(a-b) > v(x-y)": principal_series_rep(Q1, one, one + pi ** 2, one + pi, one, 0),
        "4.1-scalar extension, v(a-b) < v(z)": principal_series_rep(Q1, one, one + pi ** 2, one + pi ** 3, one, 1),
        "4.1-scalar extension, v(a-b) = v(z)": principal_series_rep(Q1, one, one + pi ** 2, one + pi ** 2 * 2, one, 1),
        "4.1-distinct": principal_series_rep(Q1, R(2), R(3), one + pi, one, 0),
    }
    x = one + pi
    reps["4.2-antidiag"] = TameRep(QM, Mat2(R.zero, one, one, R.zero), Mat2.diag(x, x ** QM))
    x = one + pi ** 2
    z = div_pi(x ** QM - x, 1)
    n = z.prec
    reps["4.2-general"] = TameRep(QM, Mat2(one, div_pi(pi ** 2, 1), pi, -one).reduce(n), Mat2(x.reduce(n), z, R.zero.reduce(n), (x ** QM).reduce(n)))
    R1_ = Ring(P72, 1)
    reps["2.2"] = khare_lift(KhareDatum(one + pi ** 2, R1_(1), R1_(1), R1_(2), -one, Q1), 1, N)
    reps["2.3"] = _rep_23(P72, QM, N - 2)
    return reps
