"""Tame local representations at q != p, their types, and the mod pi^2 class f.

A representation of the tame quotient of G_q is the pair (A, B) = (rho(sigma),
rho(tau)) subject to A B A^-1 = B^q.  Classification follows the usual
trichotomy (principal series, Steinberg, induced) on the residual and the
integral level, and the integral classifier also names the local case used
by the condition builder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .matrix_algebra import (
    Ad0Vector,
    CocyclePair,
    Mat2,
    Singular,
)
from .padic_ring import (
    Ring,
    RingElem,
    RingError,
    RingParams,
    div_pi,
    divide,
    invert_unit,
    is_prime,
)


class RepError(RingError):
    pass


class RelationViolated(RepError):
    def __init__(self, defect: Mat2 | None = None, message: str = "tame relation fails"):
        super().__init__(message)
        self.defect = defect


class DeterminantMismatch(RepError):
    pass


class UnclassifiedShape(RepError):
    pass


class PrecisionTooLow(RepError):
    pass


class AmbiguousAtPrecision(RepError):
    pass


class DeterminantNotFixed(RepError):
    pass


# ----------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class TameCharacter:
    q: int
    sigma_value: RingElem
    tau_value: RingElem

    def check(self) -> None:
        if not (self.tau_value ** (self.q - 1) - 1).is_zero():
            raise RepError("character value at tau is not a (q-1)-th root of unity")

    @classmethod
    def trivial(cls, q: int, ring: Ring) -> "TameCharacter":
        return cls(q, ring.one, ring.one)

    def reduce(self, n: int) -> "TameCharacter":
        return TameCharacter(self.q, self.sigma_value.reduce(n), self.tau_value.reduce(n))

    def __mul__(self, other: "TameCharacter") -> "TameCharacter":
        return TameCharacter(self.q, self.sigma_value * other.sigma_value, self.tau_value * other.tau_value)

    def to_json(self) -> dict:
        return {"sigma": self.sigma_value.digits(), "tau": self.tau_value.digits()}


@dataclass(frozen=True)
class TameRep:
    q: int
    A: Mat2
    B: Mat2
    det_target: TameCharacter | None = None

    @property
    def precision(self) -> int:
        return min(self.A.prec, self.B.prec)

    @property
    def params(self) -> RingParams:
        return self.A.params

    @property
    def ring(self) -> Ring:
        return Ring(self.params, self.precision)

    def reduce(self, n: int) -> "TameRep":
        det = self.det_target.reduce(n) if self.det_target else None
        return TameRep(self.q, self.A.reduce(n), self.B.reduce(n), det)

    def residual(self) -> "TameRep":
        return self.reduce(1)

    def conjugate(self, C: Mat2) -> "TameRep":
        """C rho C^-1."""
        Ci = C.inv()
        return TameRep(self.q, C * self.A * Ci, C * self.B * Ci, self.det_target)

    def with_matrices(self, A: Mat2, B: Mat2) -> "TameRep":
        return TameRep(self.q, A, B, self.det_target)

    def determinant(self) -> TameCharacter:
        return TameCharacter(self.q, self.A.det(), self.B.det())

    def fixed_determinant(self) -> "TameRep":
        return TameRep(self.q, self.A, self.B, self.determinant())

    def same_as(self, other: "TameRep") -> bool:
        return self.q == other.q and self.A == other.A and self.B == other.B

    def to_json(self) -> dict:
        out: dict[str, Any] = {"q": self.q, "A": self.A.to_json(), "B": self.B.to_json(), "precision": self.precision}
        if self.det_target is not None:
            out["det"] = self.det_target.to_json()
        return out

    @classmethod
    def from_json(cls, params: RingParams, data: dict) -> "TameRep":
        n = int(data["precision"])
        ring = Ring(params, n)
        A = _mat_from_json(ring, data["A"])
        B = _mat_from_json(ring, data["B"])
        det = None
        if "det" in data:
            det = TameCharacter(int(data["q"]), ring(list(data["det"]["sigma"])), ring(list(data["det"]["tau"])))
        return cls(int(data["q"]), A, B, det)


def _mat_from_json(ring: Ring, data) -> Mat2:
    """Accepts [[a,b],[c,d]] of ints or four digit arrays."""
    if len(data) == 2:
        return Mat2.from_ints(ring, data)
    return Mat2(*(ring(list(x)) if isinstance(x, list) else ring(int(x)) for x in data))


@dataclass
class TypeLabel:
    family: str
    subcase: str
    twist_data: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    level: str = "integral"
    conjugator: Mat2 | None = None
    residual: "TypeLabel | None" = None
    compatible: bool | None = None

    def to_json(self) -> dict:
        out = {
            "family": self.family,
            "subcase": self.subcase,
            "level": self.level,
            "twist_data": _jsonable(self.twist_data),
            "params": _jsonable(self.params),
        }
        if self.conjugator is not None:
            out["conjugator"] = self.conjugator.to_json()
        if self.residual is not None:
            out["residual"] = self.residual.to_json()
            out["reduction_compatible"] = self.compatible
        return out


def _jsonable(obj):
    if isinstance(obj, RingElem):
        return obj.digits()
    if isinstance(obj, Mat2):
        return obj.to_json()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


@dataclass
class BadnessReport:
    is_bad: bool
    r: int | None = None
    lhs_valuation: int | None = None
    rhs_valuation: int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "is_bad": self.is_bad,
            "r": self.r,
            "lhs_valuation": self.lhs_valuation,
            "rhs_valuation": self.rhs_valuation,
            "reason": self.reason,
        }


# ----------------------------------------------------------------------------
# validation


def validate(rep: TameRep) -> None:
    if rep.q == rep.params.p or not is_prime(rep.q):
        raise RepError(f"q = {rep.q} must be a prime different from p")
    A, B = rep.A, rep.B
    if not A.det().is_unit() or not B.det().is_unit():
        raise Singular("rho(sigma) and rho(tau) must be invertible")
    defect = A * B * A.inv() - B ** rep.q
    if not all(x.is_zero() for x in defect.entries()):
        raise RelationViolated(defect, f"A B A^-1 != B^q (defect valuation {defect.min_val()})")
    if rep.det_target is not None:
        if not (A.det() - rep.det_target.sigma_value).is_zero() or not (B.det() - rep.det_target.tau_value).is_zero():
            raise DeterminantMismatch("determinant differs from the fixed target")


def is_valid(rep: TameRep) -> bool:
    try:
        validate(rep)
    except RepError:
        return False
    except Singular:
        return False
    return True


# ----------------------------------------------------------------------------
# small helpers over F and O/pi^N


def _field_roots(F, tr: int, det: int) -> list[int]:
    """Roots in F of x^2 - tr x + det, each listed once."""
    roots = []
    for x in F.elements():
        if F.add(F.sub(F.mul(x, x), F.mul(tr, x)), det) == 0:
            roots.append(x)
    return roots


def _residue_shape(F, M: tuple[int, int, int, int]) -> tuple[str, list[int]]:
    """'scalar', 'jordan', 'distinct' or 'irreducible', with eigenvalues in F."""
    a, b, c, d = M
    if b == 0 and c == 0 and a == d:
        return "scalar", [a]
    tr = F.add(a, d)
    det = F.sub(F.mul(a, d), F.mul(b, c))
    roots = _field_roots(F, tr, det)
    if len(roots) == 2:
        return "distinct", roots
    if len(roots) == 1:
        return "jordan", roots
    return "irreducible", []


def _hensel_eigenvalue(M: Mat2, seed: int) -> RingElem:
    """Simple root of the characteristic polynomial lifting the residue seed."""
    ring = M.ring
    tr, det = M.trace(), M.det()
    x = ring.lift_residue(seed)
    for _ in range(M.prec.bit_length() + 2):
        fx = x * x - tr * x + det
        if fx.is_zero():
            break
        x = x - fx * invert_unit(x * 2 - tr)
    return x


def _eigenvector(M: Mat2, lam: RingElem) -> tuple[RingElem, RingElem]:
    """A primitive vector in the kernel of M - lam (when M - lam is residually nonzero)."""
    a, b, c, d = M.entries()
    if b.is_unit() or (lam - a).is_unit():
        return (b, lam - a)
    return (lam - d, c)


def eigenbasis(M: Mat2) -> Mat2 | None:
    """Columns are eigenvectors of M when M has distinct residual eigenvalues in F."""
    F = M.params.field
    shape, roots = _residue_shape(F, M.residue())
    if shape != "distinct":
        return None
    vecs = [_eigenvector(M, _hensel_eigenvalue(M, r)) for r in roots]
    C = Mat2(vecs[0][0], vecs[1][0], vecs[0][1], vecs[1][1])
    if not C.det().is_unit():
        return None
    return C


def nonscalar_depth(M: Mat2) -> int:
    """Largest k with M congruent to a scalar mod pi^k."""
    return min(M.b.val(), M.c.val(), (M.a - M.d).val())


def frobenius_tiebreak(rep: TameRep) -> TameRep:
    """Replace sigma by tau sigma (another Frobenius element)."""
    det = rep.det_target
    if det is not None:
        det = TameCharacter(det.q, det.sigma_value * det.tau_value, det.tau_value)
    return TameRep(rep.q, rep.B * rep.A, rep.B, det)


# ----------------------------------------------------------------------------
# residual classification


def classify_residual(rep_bar: TameRep) -> TypeLabel:
    if rep_bar.precision != 1:
        rep_bar = rep_bar.reduce(1)
    F = rep_bar.params.field
    Abar, Bbar = rep_bar.A.residue(), rep_bar.B.residue()
    p = rep_bar.params.p
    b_shape, b_roots = _residue_shape(F, Bbar)
    a_shape, a_roots = _residue_shape(F, Abar)
    params = {"frob_shape": a_shape, "inertia_shape": b_shape, "frob_eigenvalues": a_roots, "inertia_eigenvalues": b_roots}
    if b_shape == "scalar":
        twist = {} if b_roots[0] == 1 else {"inertia_scalar": b_roots[0]}
        split = {"scalar": "split", "distinct": "split", "jordan": "unipotent", "irreducible": "irreducible"}[a_shape]
        params["frob_type"] = split
        return TypeLabel("Unramified", a_shape, twist, params, level="residual")
    if b_shape == "jordan":
        # inertia acts through a nontrivial unipotent: the Frobenius eigenvalue
        # ratio along the inertia-stable line is q
        lam = b_roots[0]
        a, b, c, d = Abar
        x, y, z, w = Bbar
        # the B-eigenline
        vec = (y, F.sub(lam, x)) if y else (F.sub(lam, w), z)
        Av = (F.add(F.mul(a, vec[0]), F.mul(b, vec[1])), F.add(F.mul(c, vec[0]), F.mul(d, vec[1])))
        if F.sub(F.mul(Av[0], vec[1]), F.mul(Av[1], vec[0])) != 0:
            raise UnclassifiedShape("Frobenius does not preserve the inertia-stable line")
        params["q_mod_p"] = rep_bar.q % p
        twist = {} if lam == 1 else {"inertia_scalar": lam}
        return TypeLabel("Steinberg", "steinberg", twist, params, level="residual")
    if b_shape == "distinct":
        a, b, c, d = Abar
        x_, y_ = b_roots
        vecs = []
        for lam in b_roots:
            x, y, z, w = Bbar
            vecs.append((y, F.sub(lam, x)) if (y or F.sub(lam, x)) else (F.sub(lam, w), z))
        preserved = True
        for v in vecs:
            Av = (F.add(F.mul(a, v[0]), F.mul(b, v[1])), F.add(F.mul(c, v[0]), F.mul(d, v[1])))
            if F.sub(F.mul(Av[0], v[1]), F.mul(Av[1], v[0])) != 0:
                preserved = False
        if preserved:
            return TypeLabel("PrincipalSeries", "ramified", {}, params, level="residual")
        return TypeLabel("Induced", "induced", {}, params, level="residual")
    # inertia eigenvalues outside F: irreducible, induced from the unramified quadratic extension
    return TypeLabel("Induced", "induced", {"M": "unramified"}, params, level="residual")


# ----------------------------------------------------------------------------
# integral classification


def _upper_label(rep: TameRep, conj: Mat2 | None, notes: dict) -> TypeLabel:
    A, B = rep.A, rep.B
    a, c, b = A.a, A.b, A.d
    x, z, y = B.a, B.b, B.d
    v_ab, v_xy, v_c, v_z = (a - b).val(), (x - y).val(), c.val(), z.val()
    N = rep.precision
    params = {"v_ab": v_ab, "v_xy": v_xy, "v_c": v_c, "v_z": v_z, "precision": N}
    params.update(notes)
    if (x - y).is_zero() and z.is_zero():
        params["ramified"] = False
        if (a - b).is_zero():
            sub = "scalar" if c.is_zero() else "unipotent"
            params["r"] = 0
            return TypeLabel("PrincipalSeries", sub, {}, params, conjugator=conj)
        r = 0 if c.is_zero() else max(0, v_ab - v_c)
        params["r"] = r
        return TypeLabel("PrincipalSeries", "extension" if r > 0 else "split", {}, params, conjugator=conj)
    if (x - y).is_zero():
        # nontrivial unipotent inertia
        params["ramified"] = True
        params["n"] = v_z
        ratio = divide(a, b) if b.is_unit() else None
        params["frob_ratio_minus_q"] = (ratio - rep.q).val() if ratio is not None else None
        return TypeLabel("Steinberg", "steinberg", {}, params, conjugator=conj)
    params["ramified"] = True
    r = 0 if z.is_zero() else max(0, v_xy - v_z)
    params["r"] = r
    return TypeLabel("PrincipalSeries", "extension" if r > 0 else "split", {}, params, conjugator=conj)


def _shape_label(rep: TameRep, conj: Mat2 | None, notes: dict) -> TypeLabel | None:
    A, B = rep.A, rep.B
    if A.c.is_zero() and B.c.is_zero():
        return _upper_label(rep, conj, notes)
    if A.b.is_zero() and B.b.is_zero():
        S = Mat2.from_ints(rep.ring, [[0, 1], [1, 0]])
        swapped = rep.conjugate(S)
        return _upper_label(swapped, S if conj is None else S * conj, notes)
    # induced: Frobenius swaps the two inertia eigenlines
    if A.a.is_zero() and A.d.is_zero() and B.b.is_zero() and B.c.is_zero() and A.c.is_unit():
        t = -A.det()
        params = {"t": t, "v_xy": (B.a - B.d).val(), "v_t_minus_1": (t - 1).val(), "M": "ramified", "shape": "antidiag"}
        params.update(notes)
        return TypeLabel("Induced", "antidiag", {}, params, conjugator=conj)
    if (A.a + A.d).is_zero() and not A.c.is_zero() and B.c.is_zero():
        params = {
            "a": -A.a,
            "b": A.c,
            "c": A.b,
            "v_z": B.b.val(),
            "v_xy": (B.a - B.d).val(),
            "M": "ramified",
            "shape": "general",
        }
        params.update(notes)
        return TypeLabel("Induced", "general", {}, params, conjugator=conj)
    return None


def _normalize_antidiag(rep: TameRep, conj: Mat2 | None) -> tuple[TameRep, Mat2 | None]:
    """With B diagonal and A antidiagonal, rescale so that A = [[0, t], [1, 0]]."""
    A = rep.A
    if A.a.is_zero() and A.d.is_zero() and A.c.is_unit():
        s = A.c
        ring = rep.ring
        D = Mat2.diag(s, ring.one)
        rep2 = rep.conjugate(D)
        return rep2, D if conj is None else D * conj
    return rep, conj


def classify_integral(rep: TameRep) -> TypeLabel:
    if rep.precision < 2:
        raise PrecisionTooLow("integral classification needs precision >= 2")
    residual = classify_residual(rep.reduce(1))
    label = _classify_integral_shape(rep, residual)
    label.residual = residual
    label.subcase = case_tag(residual, label)
    label.compatible = reduction_compatible(label, residual, rep.q)
    return label


def _classify_integral_shape(rep: TameRep, residual: TypeLabel) -> TypeLabel:
    direct = _shape_label(rep, None, {})
    if direct is not None:
        return direct
    # find a basis adapted to one of the generators
    for name in ("B", "A"):
        M = rep.B if name == "B" else rep.A
        k = nonscalar_depth(M)
        if k >= rep.precision:
            continue
        if k > 0:
            M1 = Mat2(div_pi(M.a - M.d, k), div_pi(M.b, k), div_pi(M.c, k), RingElem.from_int(M.params, 0, rep.precision - k))
            work = rep.reduce(rep.precision - k)
        else:
            M1 = M
            work = rep
        C = eigenbasis(M1)
        if C is None:
            continue
        C = C.reduce(work.precision)
        Ci = C.inv()
        new = work.conjugate(Ci)
        if new.precision < 2:
            raise AmbiguousAtPrecision("precision exhausted while diagonalising")
        notes = {"diagonalised": name, "precision_lost": k}
        if name == "B" and new.A.a.is_zero() and new.A.d.is_zero():
            new, conj = _normalize_antidiag(new, Ci)
            lab = _shape_label(new, conj, notes)
        else:
            lab = _shape_label(new, Ci, notes)
        if lab is not None:
            return lab
    found = _common_line_search(rep)
    if found is not None:
        C = found
        lab = _shape_label(rep.conjugate(C.inv()), C.inv(), {"line_search": True})
        if lab is not None:
            return lab
    raise AmbiguousAtPrecision("no normal form recognised at this precision")


def _common_line_search(rep: TameRep, cap: int = 4000) -> Mat2 | None:
    """Digit-by-digit search for a line stable under A and B.

    Candidates are kept modulo pi^(k+1); the search gives up (returns None)
    when the candidate set outgrows cap, which happens exactly when the
    precision does not pin the line down.
    """
    ring = rep.ring
    N = rep.precision
    F = ring.field
    A, B = rep.A, rep.B

    def defect(chart: int, s: RingElem, k: int) -> bool:
        v = (ring.one, s) if chart == 0 else (s, ring.one)
        for M in (A, B):
            w0 = M.a * v[0] + M.b * v[1]
            w1 = M.c * v[0] + M.d * v[1]
            if (v[0] * w1 - v[1] * w0).val() < k:
                return False
        return True

    for chart in (0, 1):
        cands = [ring.zero]
        pipow = ring.one
        for k in range(N):
            nxt = []
            for s in cands:
                for d in F.elements():
                    if chart == 1 and k == 0 and d != 0:
                        continue
                    t = s + ring.lift_residue(d) * pipow if d else s
                    if defect(chart, t, k + 1):
                        nxt.append(t)
            cands = nxt
            if not cands or len(cands) > cap:
                break
            pipow = pipow * ring.pi
        if cands and len(cands) <= cap:
            s = cands[0]
            if chart == 0:
                return Mat2(ring.one, ring.zero, s, ring.one)
            return Mat2(s, ring.one, ring.one, ring.zero)
    return None


def case_tag(residual: TypeLabel, integral: TypeLabel) -> str:
    R, I = residual.family, integral.family
    if R == "Steinberg":
        return {"Steinberg": "2.1", "PrincipalSeries": "2.2", "Induced": "2.3"}[I]
    if R == "PrincipalSeries":
        return "1"
    if R == "Induced":
        return "3"
    # residually unramified
    if I == "Steinberg":
        return "4-steinberg"
    if I == "Induced":
        return "4.2-" + integral.params.get("shape", "antidiag")
    if not integral.params.get("ramified", True):
        return "unramified"
    return "4.1-" + residual.subcase


# ----------------------------------------------------------------------------


def reduction_compatible(integral: TypeLabel, residual: TypeLabel, q: int, p: int | None = None) -> bool:
    I, R = integral.family, residual.family
    if p is None:
        p = integral.params.get("p") or residual.params.get("p")
    qmod = None if p is None else q % p

    def cong(target: int) -> bool:
        # without p the caller vouches for the congruence
        return True if qmod is None else qmod == target % p

    if I == "PrincipalSeries":
        if R in ("PrincipalSeries", "Unramified"):
            return True
        if R == "Steinberg":
            return cong(1)
        return False
    if I == "Steinberg":
        return R in ("Steinberg", "Unramified")
    if I == "Induced":
        if R == "Induced":
            return True
        if R in ("Steinberg", "Unramified"):
            return cong(-1) and integral.params.get("M", "ramified") == "ramified"
        return False
    return False


def is_bad(rep: TameRep) -> BadnessReport:
    try:
        label = classify_integral(rep)
    except (AmbiguousAtPrecision, PrecisionTooLow) as exc:
        return BadnessReport(False, reason=f"not applicable: {exc}")
    if label.family != "PrincipalSeries" or label.params.get("r", 0) <= 0:
        return BadnessReport(False, reason="not applicable: not an extension of characters with r > 0")
    residual = label.residual
    r = label.params["r"]
    if residual.family != "Unramified":
        return BadnessReport(False, r=r, reason="residual representation is ramified")
    if residual.params["frob_shape"] not in ("scalar", "jordan"):
        return BadnessReport(False, r=r, reason="residual Frobenius semisimplification is not scalar")
    lhs = label.params["v_ab"]
    rhs = label.params["v_xy"] - r
    return BadnessReport(lhs < rhs, r=r, lhs_valuation=lhs, rhs_valuation=rhs, reason="valuation inequality" if lhs < rhs else "valuations balanced")


def twist_normalize(rep: TameRep, by: TameCharacter, base_change: Mat2 | None = None) -> TameRep:
    """(chi (x) rho), optionally conjugated: C (chi rho) C^-1."""
    A = rep.A * by.sigma_value
    B = rep.B * by.tau_value
    det = rep.det_target
    if det is not None:
        det = TameCharacter(det.q, det.sigma_value * by.sigma_value * by.sigma_value, det.tau_value * by.tau_value * by.tau_value)
    out = TameRep(rep.q, A, B, det)
    if base_change is not None:
        out = out.conjugate(base_change)
    return out


def induced_twist(rep: TameRep) -> tuple[TameRep, RingElem]:
    """Twist an antidiagonal induced rep so that v(t' - 1) > v(x - y).

    Picks eta = 1 (mod pi) with eta^2 t close to 1, so t' = eta^2 t.
    """
    from .padic_ring import hensel_sqrt

    A, B = rep.A, rep.B
    t = -A.det()
    vxy = (B.a - B.d).val()
    if (t - 1).val() > vxy:
        return rep, rep.ring.one
    eta = invert_unit(hensel_sqrt(t))
    if eta.residue() != 1:
        eta = -eta
    if eta.residue() != 1:
        raise RepError("t is not a square of a principal unit times 1")
    ring = rep.ring
    chi = TameCharacter(rep.q, eta, ring.one)
    C = Mat2.diag(eta, ring.one)
    return twist_normalize(rep, chi, C), eta


# ----------------------------------------------------------------------------
# the class f


def extract_f_local(rep2: TameRep) -> CocyclePair:
    if rep2.precision != 2:
        raise PrecisionTooLow("extract_f_local needs precision exactly 2")
    ring = rep2.ring
    F = ring.field
    out = []
    for M in (rep2.A, rep2.B):
        bar = Mat2(*(ring.lift_residue(x.residue()) for x in M.entries()))
        X = M * bar.inv() - Mat2.identity(ring)
        if any(x.residue() for x in X.entries()):
            raise RepError("residual part mismatch")
        digits = [x.digits()[1] for x in X.entries()]
        if F.add(digits[0], digits[3]) != 0:
            raise DeterminantNotFixed("the pi-linear part has nonzero trace")
        out.append(Ad0Vector(digits[0], digits[1], digits[2]))
    return CocyclePair(out[0], out[1])


# ----------------------------------------------------------------------------
# constructors used throughout the tests and the condition builder


def principal_series_rep(q: int, a: RingElem, b: RingElem, x: RingElem, y: RingElem, r: int, beta: RingElem | None = None, precision: int | None = None) -> TameRep:
    """rho(g) = [[psi1, beta (psi1 - psi2)/pi^r], [0, psi2]] at g = sigma, tau.

    The entries must be known to precision N + r; the result has precision N.
    """
    n = a.prec - r if precision is None else precision
    one = RingElem.from_int(a.params, 1, a.prec)
    beta = one if beta is None else beta
    c = divide(beta * (a - b), _pi_pow(a, r)) if r else beta * (a - b)
    z = divide(beta * (x - y), _pi_pow(a, r)) if r else beta * (x - y)
    zero = RingElem.from_int(a.params, 0, n)
    A = Mat2(a.reduce(n), c.with_prec(n) if c.prec < n else c.reduce(n), zero, b.reduce(n))
    B = Mat2(x.reduce(n), z.with_prec(n) if z.prec < n else z.reduce(n), zero, y.reduce(n))
    return TameRep(q, A, B)


def _pi_pow(a: RingElem, r: int) -> RingElem:
    return Ring(a.params, a.prec).pi_pow(r)
