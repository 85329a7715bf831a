"""Stepwise lifting of a mod pi^n representation through local conditions.

Global Galois cohomology over Q is out of reach, so the global side is a
SyntheticGlobalSpace: an F-vector space F^dim with explicit restriction maps
to every local H^1 (coordinates in the condition's h1 basis) and, for p, to
the quotient H^1(G_p)/N_p directly.  At every step the restriction of the
unknown global lift is modelled as the template lift of the current local
representation, moved by a pseudo-random cocycle ("noise"); the engine then
solves for the global class that puts every local representation back into
its condition, and checks membership.

The local representations in a LiftState are kept in their condition frames.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import _linalg as la
from .cohomology import act_on_deformation, strictly_conjugate
from .local_conditions import (
    KhareDatum,
    LocalCondition,
    NearlyOrdinaryLedger,
    NoTemplateLift,
    build_condition,
    khare_lift,
    lift_member,
    membership_test,
    nearly_ordinary_ledger,
    nice_condition,
    preservation_check,
)
from .matrix_algebra import Ad0Vector, CocyclePair, Mat2, image_contains_sl2
from .padic_ring import Ring, RingParams, div_pi, find_prime, invert_unit
from .tame_rep import TameRep, extract_f_local, validate


class LiftingError(Exception):
    pass


class LedgerInconsistent(LiftingError):
    pass


class SurjObstructed(LiftingError):
    pass


class SobreFailed(LiftingError):
    def __init__(self, report: dict):
        super().__init__(f"restriction to the local quotients fails: {report.get('failures')}")
        self.report = report


class MembershipLost(LiftingError):
    pass


# ----------------------------------------------------------------------------
# data


@dataclass
class PrimeEntry:
    name: str
    q: int
    rep: TameRep
    cond: LocalCondition
    role: str = "P"

    def target(self, M: int) -> TameRep:
        """The characteristic zero local representation rho_v, reduced to precision M."""
        return self.cond.template.member(M)


@dataclass
class SyntheticGlobalSpace:
    """H^1(G_S, Ad) as F^dim with declared restriction maps.

    restriction_maps[name] has one row per local coordinate and dim columns.
    """

    dim: int
    restriction_maps: dict[str, list[list[int]]]
    distinguished_f: list[int]
    sha1_dim: int = 0
    sha2_dim: int = 0

    def restrict(self, F, name: str, g: Sequence[int]) -> list[int]:
        return la.matvec(F, self.restriction_maps[name], g)

    def joint_kernel_dim(self, F) -> int:
        rows = [row for M in self.restriction_maps.values() for row in M]
        if not rows:
            return self.dim
        return self.dim - la.rank(F, rows)

    def check(self, F) -> None:
        for name, M in self.restriction_maps.items():
            if any(len(row) != self.dim for row in M):
                raise ValueError(f"restriction map {name} does not have {self.dim} columns")
        if len(self.distinguished_f) != self.dim:
            raise ValueError("distinguished_f has the wrong length")
        k = self.joint_kernel_dim(F)
        if k != self.sha1_dim:
            raise LedgerInconsistent(f"declared sha1 = {self.sha1_dim} but the joint kernel has dimension {k}")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "restriction_maps": self.restriction_maps,
            "distinguished_f": self.distinguished_f,
            "sha1_dim": self.sha1_dim,
            "sha2_dim": self.sha2_dim,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SyntheticGlobalSpace":
        return cls(
            int(data["dim"]),
            {k: [list(map(int, r)) for r in v] for k, v in data["restriction_maps"].items()},
            list(map(int, data["distinguished_f"])),
            int(data.get("sha1_dim", 0)),
            int(data.get("sha2_dim", 0)),
        )


@dataclass
class GlobalProblem:
    params: RingParams
    primes: list[PrimeEntry]
    p_ledger: NearlyOrdinaryLedger
    global_space: SyntheticGlobalSpace
    n: int
    target_N: int
    det: dict = field(default_factory=dict)
    lifta_space: SyntheticGlobalSpace | None = None
    lifta_roles: dict[str, str] = field(default_factory=dict)
    aux_schedule: dict[int, dict[str, list[int]]] = field(default_factory=dict)
    image_generators: list[Mat2] = field(default_factory=list)
    noise_seed: int = 0

    @property
    def F(self):
        return self.params.field

    def prime(self, name: str) -> PrimeEntry:
        for e in self.primes:
            if e.name == name:
                return e
        raise KeyError(name)

    def validate(self) -> list[dict]:
        """Check the stated invariants; returns check records, raises on hard failures."""
        checks: list[dict] = []
        F = self.F
        self.global_space.check(F)
        checks.append({"name": "sha1_declared", "status": "pass"})
        for e in self.primes:
            validate(e.rep)
            if e.rep.precision != self.n:
                raise ValueError(f"{e.name}: local rep has precision {e.rep.precision}, expected {self.n}")
            if membership_test(e.cond, e.rep) is None:
                raise MembershipLost(f"{e.name}: rho_n is not a member-reduction of C_v")
            if e.name not in self.global_space.restriction_maps:
                raise ValueError(f"no restriction map for {e.name}")
        checks.append({"name": "local_memberships_at_n", "status": "pass"})
        for name, ok in f_in_nv(self).items():
            if not ok:
                raise LedgerInconsistent(f"f does not restrict into N_v at {name}")
        checks.append({"name": "f_in_every_Nv", "status": "pass"})
        if self.n >= 2:
            mism = [e.name for e in self.primes if not _f_matches_local(self, e)]
            if mism:
                raise LedgerInconsistent(f"f disagrees with the mod pi^2 reduction at {mism}")
            checks.append({"name": "f_from_mod_pi2", "status": "pass"})
        if self.image_generators:
            e = self.params.e
            if self.n >= e:
                rep = image_contains_sl2(self.image_generators, e)
                checks.append({"name": "image_contains_SL2(O/p)", "status": "pass" if rep.contains else "fail", "details": {"mode": rep.mode}})
        return checks


@dataclass
class LiftState:
    m: int
    local_reps: dict[str, TameRep]
    log: list[dict] = field(default_factory=list)
    family: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "local_reps": {k: v.to_json() for k, v in self.local_reps.items()},
            "log": self.log,
            "family": self.family,
        }


# ----------------------------------------------------------------------------
# local pieces


def alpha_of(problem: GlobalProblem | Sequence[LocalCondition]) -> int:
    conds = [e.cond for e in problem.primes] if isinstance(problem, GlobalProblem) else list(problem)
    return max([c.alpha for c in conds] or [1])


def local_lift_step(cond: LocalCondition, rep_m: TameRep) -> TameRep:
    """A member-reduction at precision m + 1 lifting rep_m."""
    return lift_member(cond, rep_m, rep_m.precision + 1)


def difference_cocycle(L: TameRep, T: TameRep) -> CocyclePair:
    """u with T = (1 + pi^(M-1) u) L, for L = T (mod pi^(M-1))."""
    M = min(L.precision, T.precision)
    ring = Ring(L.params, M)
    F = L.params.field
    out = []
    for X, Y in ((L.A, T.A), (L.B, T.B)):
        D = Y.reduce(M) * X.reduce(M).inv() - Mat2.identity(ring)
        if any(x.val() < M - 1 for x in D.entries()):
            raise ValueError("the two lifts differ before the last digit")
        r = [div_pi(x, M - 1).residue() for x in D.entries()]
        if F.add(r[0], r[3]) != 0:
            raise ValueError("difference has nonzero trace: determinants differ")
        out.append(Ad0Vector(r[0], r[1], r[2]))
    return CocyclePair(out[0], out[1])


def _quotient_rows(cond: LocalCondition) -> list[list[int]]:
    """Rows of a map H^1 -> H^1 / N_v in h1 coordinates."""
    F = cond.space.F
    h1 = cond.space.h1_dim
    N = [cond.space.coords(b) for b in cond.nq_basis]
    if not N:
        return [[1 if i == j else 0 for j in range(h1)] for i in range(h1)]
    return la.nullspace(F, N, h1)


def _p_rows(problem: GlobalProblem) -> list[list[int]]:
    return problem.global_space.restriction_maps.get("p", [])


def _sobre_blocks(problem: GlobalProblem, roles: Sequence[str] | None = None):
    """(name, rows) blocks of the composed map F^dim -> (+)_v H^1/N_v."""
    F = problem.F
    G = problem.global_space
    blocks = []
    for e in problem.primes:
        if roles is not None and e.role not in roles:
            continue
        Q = _quotient_rows(e.cond)
        R = G.restriction_maps[e.name]
        blocks.append((e.name, la.matmul(F, Q, R) if Q else []))
    if "p" in G.restriction_maps:
        blocks.append(("p", G.restriction_maps["p"]))
    return blocks


def f_in_nv(problem: GlobalProblem) -> dict[str, bool]:
    F = problem.F
    f = problem.global_space.distinguished_f
    return {name: not any(la.matvec(F, rows, f)) for name, rows in _sobre_blocks(problem)}


def _f_matches_local(problem: GlobalProblem, e: PrimeEntry) -> bool:
    F = problem.F
    local = e.cond.space.coords(extract_f_local(e.rep.reduce(2)))
    glob = problem.global_space.restrict(F, e.name, problem.global_space.distinguished_f)
    return list(local) == list(glob)


# ----------------------------------------------------------------------------
# global checks


def check_sobre(problem: GlobalProblem) -> dict:
    F = problem.F
    G = problem.global_space
    blocks = _sobre_blocks(problem)
    rows = [row for _, b in blocks for row in b]
    labels = [(name, i) for name, b in blocks for i in range(len(b))]
    rank = la.rank(F, rows) if rows else 0
    kernel = la.nullspace(F, rows, G.dim) if rows else [[1 if i == j else 0 for j in range(G.dim)] for i in range(G.dim)]
    surjective = rank == len(rows)
    missed = []
    if not surjective:
        cols = [[rows[i][j] for i in range(len(rows))] for j in range(G.dim)]
        for k, lab in enumerate(labels):
            e_k = [1 if i == k else 0 for i in range(len(rows))]
            if not la.in_span(F, e_k, cols):
                missed.append({"prime": lab[0], "coordinate": lab[1]})
    f = G.distinguished_f
    kernel_is_f = len(kernel) == 1 and any(f) and la.same_span(F, kernel, [f])
    s = _s_value(problem)
    failures = []
    if not surjective:
        failures.append("not surjective")
    if not kernel_is_f:
        failures.append("kernel is not <f>")
    return {
        "surjective": surjective,
        "rank": rank,
        "target_dim": len(rows),
        "s": s,
        "target_dim_is_s_plus_1": len(rows) == s + 1,
        "kernel_basis": kernel,
        "kernel_is_f": kernel_is_f,
        "missed": missed,
        "passed": surjective and kernel_is_f,
        "failures": failures,
    }


def _s_value(problem: GlobalProblem, roles: Sequence[str] = ("P",)) -> int:
    s = sum(e.cond.space.h2_dim for e in problem.primes if e.role in roles)
    return s + problem.p_ledger.h2_Ad


def dimension_ledger(problem: GlobalProblem) -> dict:
    """r, s, d and the dimension identities.

    r is dim Sha^1((Ad)^*), which by Poitou-Tate duality equals the declared
    dim Sha^2(Ad).
    """
    F = problem.F
    G = problem.global_space
    r = G.sha2_dim
    s = _s_value(problem)
    n_T = sum(1 for e in problem.primes if e.role == "T")
    required = r + s + 2 + n_T
    if G.dim != required:
        raise LedgerInconsistent(f"global dimension {G.dim} but r + s + 2 (+ |T|) = {required}")
    P_blocks = _sobre_blocks(problem, roles=("P",))
    rows = [row for _, b in P_blocks for row in b]
    if len(rows) != s + 1:
        raise LedgerInconsistent(f"(+)_P H^1/N_v has dimension {len(rows)}, expected s + 1 = {s + 1}")
    kernel = la.nullspace(F, rows, G.dim) if rows else [[0] * G.dim]
    d = len(kernel) - 1
    if d > r:
        raise LedgerInconsistent(f"kernel <f, f_1..f_d> has d = {d} > r = {r}")
    sobre = check_sobre(problem)
    out = {"r": r, "s": s, "d": d, "dim": G.dim, "required_dim": required, "sobre": sobre["passed"]}
    if sobre["passed"] and G.sha2_dim == 0:
        out["conclusion"] = "H^1_L = <f> and the problem is unobstructed: R_u = W(F)[[X]]"
    return out


# ----------------------------------------------------------------------------
# noise model for the unknown global lift


def _noise(problem: GlobalProblem, m: int, salt: str) -> random.Random:
    return random.Random(f"{problem.noise_seed}:{m}:{salt}")


def _random_class(cond: LocalCondition, rng: random.Random) -> tuple[list[int], CocyclePair]:
    F = cond.space.F
    c = [rng.randrange(F.order) for _ in range(cond.space.h1_dim)]
    return c, cond.space.from_coords(c)


def _add_cocycles(F, u: CocyclePair, v: CocyclePair) -> CocyclePair:
    return CocyclePair.from_vector(la.vec_add(F, u.to_vector(), v.to_vector()))


# ----------------------------------------------------------------------------
# below alpha


def run_lifta(problem: GlobalProblem, state: LiftState | None = None) -> LiftState:
    """Lift from n to alpha so that every local rep becomes a reduction of rho_v.

    At each step the local lift differs from rho_v by a class u_v; a global g
    with g|_v = u_v (and prescribed values on the auxiliary blocks) is found
    from the synthetic data and applied.
    """
    F = problem.F
    alpha = alpha_of(problem)
    if state is None:
        state = LiftState(problem.n, {e.name: e.rep for e in problem.primes})
    if state.m >= alpha:
        return state
    space = problem.lifta_space or _identity_lifta_space(problem)
    if space.sha1_dim or space.sha2_dim:
        raise SurjObstructed("Sha^1 and Sha^2 must vanish for the below-alpha loop")
    P_names = [e.name for e in problem.primes]
    for name in P_names:
        if name not in space.restriction_maps:
            raise SurjObstructed(f"lifta space has no restriction to {name}")
    PP = P_names + [k for k, v in problem.lifta_roles.items() if v == "P'"]
    PP_rows = [row for k in PP for row in space.restriction_maps[k]]
    if la.rank(F, PP_rows) != len(PP_rows):
        raise SurjObstructed("restriction to P u P' is not surjective")
    while state.m < alpha:
        m = state.m
        M = m + 1
        lifts, u_coords, steps = {}, {}, {}
        for e in problem.primes:
            rep = state.local_reps[e.name]
            target = e.target(M)
            C = strictly_conjugate(rep, target.reduce(m))
            if not C:
                raise MembershipLost(f"{e.name}: state is not conjugate to rho_v mod pi^{m}")
            Tm = target.conjugate(C.lift(M).inv())
            _, w = _random_class(e.cond, _noise(problem, m, e.name))
            L = act_on_deformation(w, Tm)
            u = difference_cocycle(L, Tm)
            lifts[e.name] = L
            u_coords[e.name] = e.cond.space.coords(u)
        # g1: match u_v on P u P'; g2: fix the Q and T blocks without touching P u P'
        rows, rhs = [], []
        for k in PP:
            R = space.restriction_maps[k]
            rows += R
            rhs += u_coords.get(k, [0] * len(R))
        g1 = la.solve(F, rows, rhs)
        if g1 is None:
            raise SurjObstructed(f"no g1 at step {m}")
        aux_rows, aux_rhs = [], []
        sched = problem.aux_schedule.get(m, {})
        for k, role in problem.lifta_roles.items():
            if role not in ("Q", "T"):
                continue
            R = space.restriction_maps[k]
            want = sched.get(k, [0] * len(R)) if role == "Q" else [0] * len(R)
            now = la.matvec(F, R, g1)
            aux_rows += R
            aux_rhs += [F.sub(a, b) for a, b in zip(want, now)]
        g2 = [0] * space.dim
        if aux_rows:
            g2 = la.solve(F, rows + aux_rows, [0] * len(rows) + aux_rhs)
            if g2 is None:
                raise SurjObstructed(f"no g2 at step {m}")
        g = la.vec_add(F, g1, g2)
        new = {}
        for e in problem.primes:
            loc = e.cond.space.from_coords(la.matvec(F, space.restriction_maps[e.name], g))
            out = act_on_deformation(loc, lifts[e.name])
            if not strictly_conjugate(out, e.target(M)):
                raise MembershipLost(f"{e.name}: corrected lift is not rho_v mod pi^{M}")
            new[e.name] = out
            steps[e.name] = {"u": u_coords[e.name]}
        state.local_reps = new
        state.m = M
        state.log.append({"phase": "lifta", "m": M, "g1": g1, "g2": g2, "local": steps})
    return state


def _identity_lifta_space(problem: GlobalProblem) -> SyntheticGlobalSpace:
    dims = [(e.name, e.cond.space.h1_dim) for e in problem.primes]
    D = sum(d for _, d in dims)
    maps, off = {}, 0
    for name, d in dims:
        maps[name] = [[1 if j == off + i else 0 for j in range(D)] for i in range(d)]
        off += d
    return SyntheticGlobalSpace(D, maps, [0] * D)


# ----------------------------------------------------------------------------
# alpha and above


def run_main_lift(
    problem: GlobalProblem,
    state: LiftState | None = None,
    family: Callable[[int], int] | Sequence[int] | None = None,
) -> LiftState:
    """Lift from max(n, alpha) to target_N through the conditions (C_v, N_v).

    family chooses the coefficient of f at each step (default 0); the
    sequence of choices is the free parameter X of the resulting family.
    """
    F = problem.F
    alpha = alpha_of(problem)
    if state is None:
        state = LiftState(problem.n, {e.name: e.rep for e in problem.primes})
    if state.m < alpha:
        raise ValueError(f"main lift starts at m >= alpha = {alpha}; run run_lifta first")
    report = check_sobre(problem)
    if not report["passed"]:
        raise SobreFailed(report)
    G = problem.global_space
    f = G.distinguished_f
    blocks = _sobre_blocks(problem)
    rows = [row for _, b in blocks for row in b]
    local_Q = {e.name: _quotient_rows(e.cond) for e in problem.primes}
    step_index = 0
    while state.m < problem.target_N:
        m = state.m
        M = m + 1
        lifts, noise, rhs, steps = {}, {}, [], {}
        for e in problem.primes:
            try:
                L = local_lift_step(e.cond, state.local_reps[e.name])
            except NoTemplateLift as exc:
                raise MembershipLost(f"{e.name}: {exc}") from None
            c, w = _random_class(e.cond, _noise(problem, m, e.name))
            lifts[e.name] = act_on_deformation(w, L)
            noise[e.name] = (c, w, L)
        for name, Q in blocks:
            if name == "p":
                rng = _noise(problem, m, "p")
                wp = [rng.randrange(F.order) for _ in Q]
                rhs += [F.neg(x) for x in wp]
                steps["p"] = {"noise": wp}
            else:
                c = noise[name][0]
                rhs += [F.neg(x) for x in la.matvec(F, local_Q[name], c)]
        g = la.solve(F, rows, rhs)
        if g is None:
            raise SobreFailed(check_sobre(problem))
        if family is None:
            k = 0
        elif callable(family):
            k = family(m) % F.order
        else:
            k = family[step_index] % F.order if step_index < len(family) else 0
        g = la.vec_add(F, g, la.vec_scale(F, k, f))
        new = {}
        for e in problem.primes:
            c, w, L = noise[e.name]
            res = la.matvec(F, G.restriction_maps[e.name], g)
            glob = e.cond.space.from_coords(res)
            out = act_on_deformation(glob, lifts[e.name])
            total = _add_cocycles(F, glob, w)
            try:
                wit = preservation_check(e.cond, total, L)
            except Exception as exc:
                raise MembershipLost(f"{e.name}: correction left N_v: {exc}") from None
            if membership_test(e.cond, out) is None:
                raise MembershipLost(f"{e.name}: lift at precision {M} is not a member-reduction")
            if not out.reduce(m).same_as(state.local_reps[e.name]):
                raise MembershipLost(f"{e.name}: lift does not reduce to the previous state")
            new[e.name] = out
            steps[e.name] = {"noise": c, "global_restriction": res, "witness": wit.kind}
        state.local_reps = new
        state.m = M
        state.family.append(k)
        state.log.append({"phase": "main", "m": M, "g": g, "f_coefficient": k, "local": steps})
        step_index += 1
    return state


def run(problem: GlobalProblem, family=None) -> LiftState:
    state = run_lifta(problem)
    return run_main_lift(problem, state, family)


def family_parameter(state: LiftState) -> list[int]:
    """Digits of X in pi O: the f-coefficient chosen at each main step."""
    return [0] + list(state.family)


# ----------------------------------------------------------------------------
# a worked instance: one nice prime, one Case 2.2 prime, one Case 2.3 prime


def _khare_rep(params: RingParams, q: int, N: int) -> TameRep:
    """Khare form with psi(tau) = 1 + pi^2, Psi = -1 and gamma = 2 + 3 pi.

    The pi-digit of gamma makes the mod pi^2 class f a nonzero multiple of
    sigma -> e2.
    """
    ring = Ring(params, N)
    R2 = Ring(params, 2)
    psi = ring.one + ring.pi ** 2
    gamma = R2(2) + R2.pi * 3
    beta = R2.one
    d = KhareDatum(psi, beta + gamma * (R2(psi) - 1), beta, gamma, -ring.one, q)
    return khare_lift(d, 2, N)


def _rep_23(params: RingParams, q: int, N: int) -> TameRep:
    """Induced from the unramified quadratic, in the lattice where inertia is [[x, 1], [0, y]]."""
    ring = Ring(params, N + 2)
    pi = ring.pi
    x = ring.one + pi ** 2
    y = x ** q
    z = div_pi(y - x, 2)
    R = Ring(params, N)
    A = Mat2(R.one, R.zero, R(pi ** 2), -R.one)
    B = Mat2(R(x), z, R.zero, R(y))
    return TameRep(q, A, B).conjugate(Mat2.diag(invert_unit(z), R.one))


def demo_problem(n: int = 2, extra: int = 6, seed: int = 0) -> GlobalProblem:
    """The three-prime instance used by the acceptance suite.

    Local data are genuine (conditions built from explicit representations);
    the global space is engineered: dim = r + s + 2 with r = 0, the map to
    (+)_v H^1/N_v is onto with kernel <f>, and f restricts to the class
    extracted from each rho_n mod pi^2.
    """
    params = RingParams(7, e=2)
    F = params.field
    q22 = find_prime(7 ** 8, 1)
    q23 = find_prime(7 ** 8, 7 ** 8 - 1)
    q_nice = 11
    Nref = 16
    rep22 = _khare_rep(params, q22, Nref)
    rep23 = _rep_23(params, q23, Nref)
    R1 = Ring(params, 1)
    nice = nice_condition(q_nice, TameRep(q_nice, Mat2.diag(R1(q_nice), R1.one), Mat2.identity(R1)))
    c22 = build_condition(rep22)
    c23 = build_condition(rep23)
    entries = [
        PrimeEntry(f"q{q_nice}", q_nice, nice.template.member(n), nice),
        PrimeEntry(f"q{q22}", q22, c22.to_frame(rep22).reduce(n), c22),
        PrimeEntry(f"q{q23}", q23, c23.to_frame(rep23).reduce(n), c23),
    ]
    # p: nearly ordinary, indecomposable, chi nontrivial: h2 = 0, codim N_p = 1
    ledger = nearly_ordinary_ledger([((2, 0, 0, 1), 2), ((1, 1, 0, 1), 1)], F)
    alpha = alpha_of([e.cond for e in entries])
    target = max(n, alpha) + extra
    space = engineer_global_space(params, entries, ledger, seed=seed)
    gens = [Mat2.from_ints(Ring(params, n), m) for m in ([[1, 1], [0, 1]], [[1, 0], [1, 1]])]
    gens.append(Mat2(Ring(params, n).one, Ring(params, n).pi, Ring(params, n).zero, Ring(params, n).one))
    return GlobalProblem(params, entries, ledger, space, n, target, image_generators=gens, noise_seed=seed)


def engineer_global_space(params: RingParams, entries: Sequence[PrimeEntry], ledger: NearlyOrdinaryLedger, r: int = 0, seed: int = 0) -> SyntheticGlobalSpace:
    """A global space mapping onto (+)_v H^1/N_v with kernel <f>.

    Basis before mixing: f, then one class per quotient coordinate (lifted to
    a local class with zero N_v-part), then r classes restricting to zero
    modulo N_v everywhere (the room Sha would make).  f restricts to the
    class of rho_n mod pi^2 at every prime.
    """
    F = params.field
    rng = random.Random(seed)
    quotient = []  # (name, local lift in h1 coordinates) per quotient coordinate
    f_cols: dict[str, list[int]] = {}
    for e in entries:
        sp = e.cond.space
        f_cols[e.name] = sp.coords(extract_f_local(e.rep.reduce(2))) if e.rep.precision >= 2 else [0] * sp.h1_dim
        Q = _quotient_rows(e.cond)
        N = [sp.coords(b) for b in e.cond.nq_basis]
        comp = la.complement_basis(F, N, sp.h1_dim) if N else [[1 if i == j else 0 for j in range(sp.h1_dim)] for i in range(sp.h1_dim)]
        # comp maps isomorphically onto the quotient; pick preimages of the unit vectors
        img = [la.matvec(F, Q, c) for c in comp]
        for i in range(len(Q)):
            unit = [1 if j == i else 0 for j in range(len(Q))]
            coeff = la.coordinates(F, unit, img)
            v = [0] * sp.h1_dim
            for a, c in zip(coeff, comp):
                v = la.vec_add(F, v, la.vec_scale(F, a, c))
            quotient.append((e.name, i, v))
    p_dim = ledger.codim_Np
    D = 1 + len(quotient) + p_dim + r
    cols: dict[str, list[list[int]]] = {e.name: [] for e in entries}
    cols["p"] = []
    # column 0: f
    for e in entries:
        cols[e.name].append(f_cols[e.name])
    cols["p"].append([0] * p_dim)
    for name, _, v in quotient:
        for e in entries:
            cols[e.name].append(v if e.name == name else [0] * e.cond.space.h1_dim)
        cols["p"].append([0] * p_dim)
    for i in range(p_dim):
        for e in entries:
            cols[e.name].append([0] * e.cond.space.h1_dim)
        cols["p"].append([1 if j == i else 0 for j in range(p_dim)])
    for _ in range(r):
        for e in entries:
            nq = [e.cond.space.coords(b) for b in e.cond.nq_basis]
            v = [0] * e.cond.space.h1_dim
            for b in nq:
                v = la.vec_add(F, v, la.vec_scale(F, rng.randrange(F.order), b))
            cols[e.name].append(v)
        cols["p"].append([0] * p_dim)
    maps = {k: [[c[i] for c in v] for i in range(len(v[0]))] if v and v[0] else [] for k, v in cols.items()}
    # mix the basis so that the structure is not visible coordinatewise
    P = _random_invertible(F, D, rng)
    Pinv = _inverse(F, P)
    maps = {k: la.matmul(F, M, Pinv) if M else [] for k, M in maps.items()}
    f = la.matvec(F, P, [1] + [0] * (D - 1))
    space = SyntheticGlobalSpace(D, maps, f, sha1_dim=0, sha2_dim=r)
    space.sha1_dim = space.joint_kernel_dim(F)
    return space


def _random_invertible(F, n: int, rng: random.Random) -> list[list[int]]:
    while True:
        M = [[rng.randrange(F.order) for _ in range(n)] for _ in range(n)]
        if la.rank(F, M) == n:
            return M


def _inverse(F, M: list[list[int]]) -> list[list[int]]:
    n = len(M)
    cols = [la.solve(F, M, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def demo_lifta_problem(seed: int = 0, extra: int = 2) -> GlobalProblem:
    """One principal series prime with alpha > 2 reached from n = 2.

    The below-alpha space has the local H^1 plus one coordinate each for an
    auxiliary P' prime, a Q prime with scheduled values and a T prime.
    """
    from .tame_rep import principal_series_rep

    params = RingParams(7, e=2)
    F = params.field
    q = find_prime(7 ** 8, 1)
    R = Ring(params, 16)
    u, x = R.one + R.pi, R.one + R.pi ** 2
    # determinants are digit-zero lifts, so f is defined
    rep = principal_series_rep(q, R(3) * u, R(3) * invert_unit(u), x, invert_unit(x), 1)
    cond = build_condition(rep)
    n = 2
    entry = PrimeEntry(f"q{q}", q, cond.to_frame(rep).reduce(n), cond)
    h1 = cond.space.h1_dim
    D = h1 + 3
    rng = random.Random(seed)
    unit = lambda i: [1 if j == i else 0 for j in range(D)]
    maps = {entry.name: [unit(i) for i in range(h1)], "aux_P": [unit(h1)], "aux_Q": [unit(h1 + 1)], "aux_T": [unit(h1 + 2)]}
    P = _random_invertible(F, D, rng)
    Pinv = _inverse(F, P)
    maps = {k: la.matmul(F, M, Pinv) for k, M in maps.items()}
    lifta = SyntheticGlobalSpace(D, maps, [0] * D)
    roles = {"aux_P": "P'", "aux_Q": "Q", "aux_T": "T"}
    schedule = {m: {"aux_Q": [rng.randrange(F.order)]} for m in range(n, cond.alpha)}
    ledger = nearly_ordinary_ledger([((2, 0, 0, 1), 2), ((1, 1, 0, 1), 1)], F)
    main = engineer_global_space(params, [entry], ledger, seed=seed)
    return GlobalProblem(params, [entry], ledger, main, n, cond.alpha + extra, lifta_space=lifta, lifta_roles=roles, aux_schedule=schedule, noise_seed=seed)


# ----------------------------------------------------------------------------
# config ingestion

DEMOS = {"three_prime": demo_problem, "below_alpha": demo_lifta_problem}

_PROBLEM_KEYS = {"demo", "seed", "n", "target", "primes", "p_ledger", "global_space", "lifta_space", "lifta_roles", "aux_schedule", "noise_seed", "image_generators", "det"}
_PRIME_KEYS = {"name", "q", "rep", "reference", "condition", "role"}


class ConfigError(ValueError):
    pass


def problem_from_config(params: RingParams | None, cfg: dict) -> GlobalProblem:
    """Build a GlobalProblem from the "problem" block of a run config.

    Either {"demo": name, "seed": k} or an explicit problem: primes with a
    characteristic zero reference rep (condition "auto") or a hand-supplied
    condition, the p-ledger generators, and the synthetic global space as
    explicit matrices (or "engineered").
    """
    unknown = set(cfg) - _PROBLEM_KEYS
    if unknown:
        raise ConfigError(f"unknown problem keys: {sorted(unknown)}")
    if "demo" in cfg:
        name = cfg["demo"]
        if name not in DEMOS:
            raise ConfigError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}")
        return DEMOS[name](seed=int(cfg.get("seed", 0)))
    if params is None:
        raise ConfigError("an explicit problem needs a ring block")
    for key in ("n", "target", "primes", "p_ledger", "global_space"):
        if key not in cfg:
            raise ConfigError(f"problem is missing {key!r}")
    n = int(cfg["n"])
    F = params.field
    entries = []
    for pc in cfg["primes"]:
        bad = set(pc) - _PRIME_KEYS
        if bad:
            raise ConfigError(f"unknown prime keys: {sorted(bad)}")
        spec_cond = pc.get("condition", "auto")
        if spec_cond == "auto":
            if "reference" not in pc:
                raise ConfigError(f"prime {pc.get('name')}: condition 'auto' needs a reference rep")
            ref = TameRep.from_json(params, pc["reference"])
            cond = build_condition(ref)
            rep = TameRep.from_json(params, pc["rep"]) if "rep" in pc else cond.to_frame(ref).reduce(n)
        else:
            cond = LocalCondition.from_json(params, spec_cond)
            if "rep" not in pc:
                raise ConfigError(f"prime {pc.get('name')}: a hand-supplied condition needs rep")
            rep = TameRep.from_json(params, pc["rep"])
        entries.append(PrimeEntry(str(pc["name"]), int(pc.get("q", rep.q)), rep, cond, pc.get("role", "P")))
    gens = [(tuple(g[0]), int(g[1])) for g in cfg["p_ledger"]["gens"]]
    ledger = nearly_ordinary_ledger(gens, F)
    gs = cfg["global_space"]
    if gs == "engineered":
        space = engineer_global_space(params, entries, ledger, seed=int(cfg.get("noise_seed", 0)))
    else:
        space = SyntheticGlobalSpace.from_json(gs)
    lifta = SyntheticGlobalSpace.from_json(cfg["lifta_space"]) if "lifta_space" in cfg else None
    sched = {int(k): {a: list(map(int, b)) for a, b in v.items()} for k, v in cfg.get("aux_schedule", {}).items()}
    img = [Mat2.from_ints(Ring(params, n), m) for m in cfg.get("image_generators", [])]
    return GlobalProblem(
        params, entries, ledger, space, n, int(cfg["target"]),
        det=cfg.get("det", {}), lifta_space=lifta, lifta_roles=dict(cfg.get("lifta_roles", {})),
        aux_schedule=sched, image_generators=img, noise_seed=int(cfg.get("noise_seed", 0)),
    )
