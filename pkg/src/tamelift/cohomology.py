"""Cohomology of the tame group at q != p with coefficients in Ad0 of a residual rep.

A 1-cocycle is determined by its values at sigma and tau.  Applying the
cocycle rule to sigma tau sigma^-1 = tau^q gives the single linear condition

    (1 - Ad(tau)^q) u(sigma) + Ad(sigma) u(tau) = (1 + Ad(tau) + ... + Ad(tau)^(q-1)) u(tau)

so Z^1 is a kernel inside F^6.  H^2 is read off through local duality as H^0
of the twisted module, where sigma acts by q * Ad(sigma).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _linalg as la
from ._linalg import NoSolution, solve_chain
from .matrix_algebra import (
    DEFAULT_BUDGET,
    Ad0Vector,
    BudgetExceeded,
    CocyclePair,
    Mat2,
    ad_matrix,
)
from .padic_ring import Ring, RingElem, div_pi
from .tame_rep import RelationViolated, TameRep, validate

__all__ = [
    "CocyclePair",
    "CohomologySpace",
    "EulerCheckFailed",
    "NotTrivial",
    "act_on_deformation",
    "action_trivial_witness",
    "brute_force_h1",
    "h0_dim",
    "h1_space",
    "is_cocycle",
    "strictly_conjugate",
]


class EulerCheckFailed(AssertionError):
    pass


@dataclass
class NotTrivial:
    reason: str

    def __bool__(self) -> bool:
        return False


def _mat_order(F, M: la.Matrix, limit: int = 10 ** 6) -> int:
    I = la.identity(len(M))
    P = M
    k = 1
    while P != I:
        P = la.matmul(F, P, M)
        k += 1
        if k > limit:  # pragma: no cover - finite groups only
            raise RuntimeError("matrix order search did not terminate")
    return k


def geometric_sum(F, T: la.Matrix, q: int) -> la.Matrix:
    """sum_{i<q} T^i, using T^o = 1: q = k o + s gives k * (sum_{i<o}) + sum_{i<s}."""
    o = _mat_order(F, T)
    k, s = divmod(q, o)
    full = la.zeros(3, 3)
    part = la.zeros(3, 3)
    P = la.identity(3)
    for i in range(o):
        if i == s:
            part = [row[:] for row in full]
        full = la.mat_add(F, full, P)
        P = la.matmul(F, P, T)
    if s == 0:
        part = la.zeros(3, 3)
    return la.mat_add(F, la.mat_scale(F, k % F.p, full), part)


def relation_matrix(F, S: la.Matrix, T: la.Matrix, q: int) -> la.Matrix:
    """3 x 6 matrix whose kernel is Z^1 (columns: u(sigma), then u(tau))."""
    Tq = la.mat_pow(F, T, q % _mat_order(F, T))
    left = la.mat_sub(F, la.identity(3), Tq)
    right = la.mat_sub(F, S, geometric_sum(F, T, q))
    return [left[i] + right[i] for i in range(3)]


def coboundary_matrix(F, S: la.Matrix, T: la.Matrix) -> la.Matrix:
    """6 x 3 matrix m -> ((S - 1) m, (T - 1) m)."""
    I = la.identity(3)
    return la.mat_sub(F, S, I) + la.mat_sub(F, T, I)


def h0_dim(action_gens, F) -> int:
    """Dimension of the common fixed space of (scalar * M) over the generators."""
    rows: la.Matrix = []
    dim = None
    for M, scalar in action_gens:
        dim = len(M)
        g = la.mat_scale(F, scalar, M) if scalar != 1 else M
        rows.extend(la.mat_sub(F, g, la.identity(dim)))
    if dim is None:
        raise ValueError("need at least one generator")
    return dim - la.rank(F, rows)


@dataclass
class CohomologySpace:
    F: object
    q: int
    S: la.Matrix
    T: la.Matrix
    z1_basis: list[list[int]]
    b1_basis: list[list[int]]
    h1_basis: list[list[int]]
    h0_dim: int
    h1_dim: int
    h2_dim: int
    module_twist: str = "none"

    def is_cocycle(self, u: CocyclePair) -> bool:
        M = relation_matrix(self.F, self.S, self.T, self.q)
        return not any(la.matvec(self.F, M, u.to_vector()))

    def is_coboundary(self, u: CocyclePair) -> bool:
        return la.in_span(self.F, u.to_vector(), self.b1_basis)

    def coords(self, u: CocyclePair) -> list[int]:
        """Coordinates of the class of u in h1_basis."""
        basis = self.h1_basis + self.b1_basis
        c = la.coordinates(self.F, u.to_vector(), basis)
        if c is None:
            raise ValueError("not a cocycle")
        return c[: len(self.h1_basis)]

    def from_coords(self, c) -> CocyclePair:
        v = [0] * 6
        for ci, b in zip(c, self.h1_basis):
            if ci:
                v = la.vec_add(self.F, v, la.vec_scale(self.F, ci, b))
        return CocyclePair.from_vector(v)

    def classes(self):
        """Every class in H^1, as representative cocycles (|F|^h1 of them)."""
        for c in itertools.product(self.F.elements(), repeat=self.h1_dim):
            yield self.from_coords(c)

    def to_json(self) -> dict:
        return {
            "h0": self.h0_dim,
            "h1": self.h1_dim,
            "h2": self.h2_dim,
            "z1_basis": self.z1_basis,
            "b1_basis": self.b1_basis,
            "h1_basis": self.h1_basis,
            "module_twist": self.module_twist,
        }


def ad_pair(rep_bar: TameRep):
    F = rep_bar.params.field
    return F, ad_matrix(F, rep_bar.A.residue()), ad_matrix(F, rep_bar.B.residue())


def h1_space(rep_bar: TameRep) -> CohomologySpace:
    F, S, T = ad_pair(rep_bar)
    q = rep_bar.q
    Z = la.span_basis(F, la.nullspace(F, relation_matrix(F, S, T, q), 6))
    Bmat = coboundary_matrix(F, S, T)
    images = [[Bmat[i][j] for i in range(6)] for j in range(3)]
    B1 = la.span_basis(F, images)
    comp = []
    current = list(B1)
    for z in Z:
        if la.rank(F, current + [z]) > len(current):
            current = la.span_basis(F, current + [z])
            comp.append(z)
    h0 = h0_dim([(S, 1), (T, 1)], F)
    h2 = h0_dim([(S, q % F.p), (T, 1)], F)
    h1 = len(Z) - len(B1)
    if h0 - h1 + h2 != 0:
        raise EulerCheckFailed(f"h0={h0}, h1={h1}, h2={h2}")
    return CohomologySpace(F, q, S, T, Z, B1, comp, h0, h1, h2)


def is_cocycle(u: CocyclePair, rep_bar: TameRep) -> bool:
    F, S, T = ad_pair(rep_bar)
    M = relation_matrix(F, S, T, rep_bar.q)
    return not any(la.matvec(F, M, u.to_vector()))


# ----------------------------------------------------------------------------
# exhaustive oracle


@dataclass
class BruteForceH1:
    z1_size: int
    b1_size: int
    h1_dim: int
    z1: np.ndarray

    def matches(self, space: CohomologySpace) -> bool:
        """Dims agree and the enumerated Z^1 is exactly the span of space.z1_basis."""
        p = space.F.p
        if self.h1_dim != space.h1_dim or self.z1_size != p ** len(space.z1_basis):
            return False
        members = {tuple(int(x) for x in row) for row in self.z1}
        return all(tuple(b) in members for b in space.z1_basis)


def brute_force_h1(rep_bar: TameRep, budget: int = DEFAULT_BUDGET) -> BruteForceH1:
    """Enumerate (Ad0)^2, keep pairs satisfying the relation, divide by coboundaries.

    Independent of the elimination code: the geometric sum is accumulated
    term by term over q mod (ord(T) * p) steps.
    """
    params = rep_bar.params
    if params.f != 1:
        raise NotImplementedError("brute force oracle is implemented for prime residue fields")
    p = params.p
    total = p ** 6
    if total > budget:
        raise BudgetExceeded(total, budget)
    F = params.field
    S = np.array(ad_matrix(F, rep_bar.A.residue()), dtype=np.int64)
    T = np.array(ad_matrix(F, rep_bar.B.residue()), dtype=np.int64)
    I = np.eye(3, dtype=np.int64)
    # order of T
    o, P = 1, T.copy()
    while not np.array_equal(P % p, I):
        P = P @ T % p
        o += 1
    steps = rep_bar.q % (o * p)
    acc = np.zeros((3, 3), dtype=np.int64)
    P = I.copy()
    for _ in range(steps):
        acc = (acc + P) % p
        P = P @ T % p
    Tq = I.copy()
    for _ in range(rep_bar.q % o):
        Tq = Tq @ T % p
    grid = np.array(list(itertools.product(range(p), repeat=6)), dtype=np.int64)
    us, ut = grid[:, :3], grid[:, 3:]
    lhs = (us @ (I - Tq).T + ut @ S.T) % p
    rhs = ut @ acc.T % p
    ok = np.all(lhs == rhs, axis=1)
    z1 = grid[ok]
    ms = np.array(list(itertools.product(range(p), repeat=3)), dtype=np.int64)
    cob = np.concatenate([ms @ (S - I).T % p, ms @ (T - I).T % p], axis=1)
    b1 = np.unique(cob, axis=0)
    ratio = len(z1) // len(b1)
    h1 = 0
    while p ** h1 < ratio:
        h1 += 1
    return BruteForceH1(len(z1), len(b1), h1, z1)


# ----------------------------------------------------------------------------
# action on deformations


def _lift_u(u: Ad0Vector, ring: Ring) -> Mat2:
    return u.to_matrix(ring)


def act_on_deformation(u: CocyclePair, rep_m: TameRep, check: bool = True) -> TameRep:
    """(1 + pi^(m-1) u) rho at sigma and tau."""
    m = rep_m.precision
    if m < 2:
        raise ValueError("the action needs m >= 2")
    ring = rep_m.ring
    I = Mat2.identity(ring)
    eps = ring.pi_pow(m - 1)
    Us = I + _lift_u(u.at_sigma, ring) * eps
    Ut = I + _lift_u(u.at_tau, ring) * eps
    out = TameRep(rep_m.q, Us * rep_m.A, Ut * rep_m.B, rep_m.det_target)
    if check:
        try:
            validate(out)
        except RelationViolated as exc:
            raise RelationViolated(exc.defect, "acting by u broke the tame relation: u is not a cocycle for this residual rep") from None
    return out


def strictly_conjugate(R: TameRep, T: TameRep) -> Mat2 | NotTrivial:
    """C = I (mod pi) with C R C^-1 = T, or NotTrivial.

    Writing C = I + pi D turns the condition into the linear system
    D R(g) - T(g) D = (T(g) - R(g)) / pi over O/pi^(m-1).
    """
    m = min(R.precision, T.precision)
    ring = Ring(R.params, m)
    if m <= 1:
        return Mat2.identity(ring) if R.reduce(m).same_as(T.reduce(m)) else NotTrivial("residual reps differ")
    R, T = R.reduce(m), T.reduce(m)
    if not (R.reduce(1).same_as(T.reduce(1))):
        return NotTrivial("residual reps differ")
    k = m - 1
    rows = []
    rhs = []
    for Rg, Tg in ((R.A, T.A), (R.B, T.B)):
        diff = Tg - Rg
        target = [div_pi(x) for x in diff.entries()]
        r = [x.reduce(k) for x in Rg.entries()]
        t = [x.reduce(k) for x in Tg.entries()]
        zero = RingElem.from_int(R.params, 0, k)
        # unknown D = [[d0, d1], [d2, d3]]; (D R - T D)_{ij}
        for i in range(2):
            for j in range(2):
                coeff = [zero] * 4
                # (D R)_{ij} = sum_l D_{il} R_{lj}
                for l in range(2):
                    coeff[2 * i + l] = coeff[2 * i + l] + r[2 * l + j]
                # (T D)_{ij} = sum_l T_{il} D_{lj}
                for l in range(2):
                    coeff[2 * l + j] = coeff[2 * l + j] - t[2 * i + l]
                rows.append(coeff)
                rhs.append(target[2 * i + j])
    try:
        d = solve_chain(rows, rhs)
    except NoSolution as exc:
        return NotTrivial(str(exc))
    pi = ring.pi
    D = Mat2(*(x.with_prec(m) for x in d))
    C = Mat2.identity(ring) + D * pi
    if not R.conjugate(C).same_as(T):  # pragma: no cover - the solver is exact
        return NotTrivial("solver produced a non-witness")
    return C


def action_trivial_witness(u: CocyclePair, rep_m: TameRep) -> Mat2 | NotTrivial:
    """C = I (mod pi) with C (u . rho) C^-1 = rho, or NotTrivial."""
    if u.is_zero():
        return Mat2.identity(rep_m.ring)
    moved = act_on_deformation(u, rep_m, check=False)
    return strictly_conjugate(moved, rep_m)


def is_witness(C: Mat2, u: CocyclePair, rep_m: TameRep) -> bool:
    moved = act_on_deformation(u, rep_m, check=False)
    return moved.conjugate(C).same_as(rep_m)


def relation_defect(rep: TameRep) -> Mat2:
    """A B A^-1 B^-q - 1: the obstruction read as a matrix of valuation >= precision."""
    A, B = rep.A, rep.B
    return A * B * A.inv() * (B ** rep.q).inv() - Mat2.identity(rep.ring)
