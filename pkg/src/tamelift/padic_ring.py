"""Exact arithmetic in O/pi^N for O a finite extension of Z_p.

O is presented as W[x]/(E(x)) where W = W(F_{p^f}) is the unramified ring
with residue field F = F_p[y]/(g(y)) and E(x) = x^e + c_{e-1}x^{e-1} + ... + c_0
is Eisenstein.  An element is stored as its coefficients a_0..a_{e-1} in W,
each reduced to the depth that still matters at pi-adic precision N:

    v(sum a_i x^i) = min_i (e * v_p(a_i) + i)

so a_i is only significant modulo p^ceil((N - i) / e).  That reduction is a
canonical form, which makes equality and hashing digit-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class RingError(Exception):
    pass


class StructuralError(RingError):
    """Operands live in different rings."""


class NotAUnit(RingError):
    pass


class NoSquareRoot(RingError):
    pass


class InvalidSeed(RingError):
    pass


class PrecisionError(RingError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def find_prime(modulus: int, residue: int, start: int = 2, exclude: Iterable[int] = ()) -> int:
    """Smallest prime q >= start with q = residue (mod modulus)."""
    excluded = set(exclude)
    q = max(start, 2)
    q += (residue - q) % modulus
    while True:
        if q not in excluded and is_prime(q):
            return q
        q += modulus


# ----------------------------------------------------------------------------
# polynomials over Z/p, used for the residue field


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    m = list(m)
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _poly_trim(a[:dm] if dm else [])


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim([c % p for c in a]), _poly_trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base: list[int], exp: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, m, p)
    while exp:
        if exp & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        exp >>= 1
    return result


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Rabin-style check: x^(p^k) - x shares no factor with poly for k < deg."""
    poly = _poly_trim([c % p for c in poly])
    d = len(poly) - 1
    if d < 1 or poly[-1] == 0:
        return False
    if d == 1:
        return True
    x = [0, 1]
    xp = x
    for k in range(1, d // 2 + 1):
        xp = _poly_powmod(xp, p, poly, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(list(poly), _poly_trim(diff), p)
        if len(g) > 1:
            return False
    return True


def default_residue_poly(p: int, f: int) -> list[int]:
    """Lexicographically first monic irreducible of degree f (little-endian)."""
    if f == 1:
        return [0, 1]
    for n in range(p ** f):
        coeffs = [(n // p ** i) % p for i in range(f)] + [1]
        if coeffs[0] and is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise RingError(f"no irreducible polynomial of degree {f} mod {p}")


class ResidueField:
    """F_{p^f}, elements encoded as ints 0 <= a < p^f (base-p coefficients in y)."""

    def __init__(self, p: int, f: int, poly: Sequence[int]):
        self.p = p
        self.f = f
        self.poly = list(poly)
        self.order = p ** f
        if f > 1:
            self._build_tables()

    def _build_tables(self) -> None:
        q = self.order
        enc = self.encode
        dec = self.decode
        # exp/log tables from a primitive element
        for cand in range(2, q):
            powers = [1]
            x = 1
            for _ in range(q - 2):
                x = enc(_poly_mod(_poly_mul(dec(x), dec(cand), self.p), self.poly, self.p))
                if x == 1:
                    break
                powers.append(x)
            if len(powers) == q - 1:
                break
        else:  # pragma: no cover - a finite field always has a generator
            raise RingError("no primitive element found")
        self._exp = powers + powers
        self._log = {v: i for i, v in enumerate(powers)}

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def decode(self, a: int) -> list[int]:
        return _poly_trim([(a // self.p ** i) % self.p for i in range(self.f)])

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.f):
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def neg(self, a: int) -> int:
        if self.f == 1:
            return -a % self.p
        p = self.p
        out, scale = 0, 1
        for _ in range(self.f):
            out += (-(a % p) % p) * scale
            a //= p
            scale *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in residue field")
        if self.f == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if self.f == 1:
            return pow(a, n, self.p) if n >= 0 else pow(self.inv(a), -n, self.p)
        if a == 0:
            return 0 if n else 1
        return self._exp[(self._log[a] * n) % (self.order - 1)]

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        n = self.order - 1
        order = n
        for d in range(1, n + 1):
            if n % d == 0 and self.pow(a, d) == 1:
                return d
        return order

    def sqrt(self, a: int) -> int | None:
        """Least code s with s^2 = a, or None."""
        for s in range(self.order):
            if self.mul(s, s) == a:
                return s
        return None

    def elements(self) -> range:
        return range(self.order)


# ----------------------------------------------------------------------------
# ring parameters


@dataclass(frozen=True)
class RingParams:
    p: int
    e: int = 1
    f: int = 1
    residue_poly: tuple[int, ...] | None = None
    eisenstein_tail: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1 or self.f < 1:
            raise ValueError("ramification and residue degrees must be >= 1")
        poly = self.residue_poly
        if poly is None:
            poly = tuple(default_residue_poly(self.p, self.f))
        poly = tuple(int(c) % self.p for c in poly)
        if len(poly) != self.f + 1 or poly[-1] != 1:
            raise ValueError("residue_poly must be monic of degree f (little-endian)")
        if not is_irreducible_mod_p(poly, self.p):
            raise ValueError(f"residue_poly {list(poly)} is reducible mod {self.p}")
        object.__setattr__(self, "residue_poly", poly)

        tail = self.eisenstein_tail
        if tail is None:
            tail = (-self.p,) + (0,) * (self.e - 1)
        tail = tuple(int(c) for c in tail)
        if len(tail) != self.e:
            raise ValueError("eisenstein_tail needs exactly e coefficients")
        if tail[0] % self.p or (tail[0] // self.p) % self.p == 0:
            raise ValueError("Eisenstein condition fails: need v_p(c_0) = 1")
        if any(c % self.p for c in tail[1:]):
            raise ValueError("Eisenstein condition fails: need p | c_i")
        object.__setattr__(self, "eisenstein_tail", tail)

    @cached_property
    def field(self) -> ResidueField:
        return ResidueField(self.p, self.f, self.residue_poly)

    @cached_property
    def _c0_unit_inv(self) -> int:
        return self.eisenstein_tail[0] // self.p

    @classmethod
    def from_config(cls, cfg: dict) -> "RingParams":
        allowed = {"p", "e", "f", "residue_poly", "eisenstein_tail", "precision"}
        unknown = set(cfg) - allowed
        if unknown:
            raise ValueError(f"unknown ring keys: {sorted(unknown)}")
        rp = cfg.get("residue_poly")
        tail = cfg.get("eisenstein_tail")
        return cls(
            p=int(cfg["p"]),
            e=int(cfg.get("e", 1)),
            f=int(cfg.get("f", 1)),
            residue_poly=tuple(rp) if rp is not None else None,
            eisenstein_tail=tuple(tail) if tail is not None else None,
        )

    def to_config(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "residue_poly": list(self.residue_poly),
            "eisenstein_tail": list(self.eisenstein_tail),
        }

    # depth (power of p) kept for coefficient i at precision n
    def depth(self, i: int, n: int) -> int:
        return max(0, -(-(n - i) // self.e))

    def ring(self, precision: int) -> "Ring":
        return Ring(self, precision)


# ----------------------------------------------------------------------------
# unramified coefficient arithmetic (W / p^k); f == 1 uses plain ints


class _W:
    """Helpers for coefficients in W/p^k: ints when f == 1, tuples otherwise."""

    def __init__(self, params: RingParams):
        self.p = params.p
        self.f = params.f
        self.g = params.residue_poly
        self.zero = 0 if self.f == 1 else (0,) * self.f

    def reduce(self, a, k: int):
        m = self.p ** k
        if self.f == 1:
            return a % m
        return tuple(c % m for c in a)

    def add(self, a, b):
        if self.f == 1:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.f == 1:
            return a - b
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, n: int):
        if self.f == 1:
            return a * n
        return tuple(x * n for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return a * b
        f = self.f
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        g = self.g
        for i in range(2 * f - 2, f - 1, -1):
            c = prod[i]
            if c:
                for j in range(f):
                    prod[i - f + j] -= c * g[j]
        return tuple(prod[:f])

    def vp(self, a, cap: int) -> int:
        """p-adic valuation, capped."""
        vals = [a] if self.f == 1 else list(a)
        best = cap
        for c in vals:
            if c:
                v = 0
                while c % self.p == 0 and v < best:
                    c //= self.p
                    v += 1
                best = min(best, v)
        return best

    def is_zero(self, a) -> bool:
        return a == 0 if self.f == 1 else not any(a)

    def div_p(self, a):
        if self.f == 1:
            return a // self.p
        return tuple(c // self.p for c in a)

    def residue_code(self, a, field: ResidueField) -> int:
        if self.f == 1:
            return a % self.p
        return field.encode(a)

    def from_code(self, code: int, field: ResidueField):
        if self.f == 1:
            return code
        coeffs = [(code // self.p ** i) % self.p for i in range(self.f)]
        return tuple(coeffs)


@dataclass(frozen=True)
class Valuation:
    value: int
    exact: bool = True

    def __post_init__(self) -> None:
        if not self.exact and self.value < 0:
            raise ValueError("inexact valuation must be the precision")

    def __lt__(self, other: "Valuation") -> bool:
        return self.value < other.value

    def __int__(self) -> int:
        return self.value


# ----------------------------------------------------------------------------
# elements


class RingElem:
    """An element of O/pi^N in canonical coefficient form."""

    __slots__ = ("params", "coeffs", "prec", "_hash")

    def __init__(self, params: RingParams, coeffs: Sequence, prec: int, _canonical: bool = False):
        self.params = params
        self.prec = prec
        if _canonical:
            self.coeffs = tuple(coeffs)
        else:
            w = _w_of(params)
            self.coeffs = tuple(w.reduce(c, params.depth(i, prec)) for i, c in enumerate(coeffs))
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_int(cls, params: RingParams, n: int, prec: int) -> "RingElem":
        w = _w_of(params)
        c0 = n if params.f == 1 else (n,) + (0,) * (params.f - 1)
        return cls(params, [c0] + [w.zero] * (params.e - 1), prec)

    @classmethod
    def from_digits(cls, params: RingParams, digits: Sequence[int], prec: int | None = None) -> "RingElem":
        """Digits are residue-field codes, little-endian in pi."""
        prec = len(digits) if prec is None else prec
        ring = Ring(params, prec)
        acc = ring.zero
        pipow = ring.one
        pi = ring.pi
        for d in digits[:prec]:
            if d:
                acc = acc + ring.lift_residue(d) * pipow
            pipow = pipow * pi
        return acc

    # -- basic protocol ------------------------------------------------------
    def _check(self, other: "RingElem") -> None:
        if not isinstance(other, RingElem):
            raise StructuralError(f"cannot combine RingElem with {type(other).__name__}")
        if other.params != self.params:
            raise StructuralError("operands over different rings")

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, int):
            return RingElem.from_int(self.params, other, self.prec)
        self._check(other)
        return other

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = RingElem.from_int(self.params, other, self.prec)
        if not isinstance(other, RingElem) or other.params != self.params:
            return NotImplemented
        if other.prec == self.prec:
            return self.coeffs == other.coeffs
        n = min(self.prec, other.prec)
        return self.reduce(n).coeffs == other.reduce(n).coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.prec, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"RingElem({self.digits()}, prec={self.prec})"

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other) -> "RingElem":
        other = self._coerce(other)
        w = _w_of(self.params)
        n = min(self.prec, other.prec)
        return RingElem(self.params, [w.add(a, b) for a, b in zip(self.coeffs, other.coeffs)], n)

    __radd__ = __add__

    def __neg__(self) -> "RingElem":
        w = _w_of(self.params)
        return RingElem(self.params, [w.scale(a, -1) for a in self.coeffs], self.prec)

    def __sub__(self, other) -> "RingElem":
        other = self._coerce(other)
        w = _w_of(self.params)
        n = min(self.prec, other.prec)
        return RingElem(self.params, [w.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)], n)

    def __rsub__(self, other) -> "RingElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RingElem":
        other = self._coerce(other)
        params = self.params
        w = _w_of(params)
        e = params.e
        n = min(self.prec, other.prec)
        a, b = self.coeffs, other.coeffs
        prod = [w.zero] * (2 * e - 1)
        for i in range(e):
            if w.is_zero(a[i]):
                continue
            for j in range(e):
                if not w.is_zero(b[j]):
                    prod[i + j] = w.add(prod[i + j], w.mul(a[i], b[j]))
        tail = params.eisenstein_tail
        for k in range(2 * e - 2, e - 1, -1):
            h = prod[k]
            if not w.is_zero(h):
                for i, c in enumerate(tail):
                    if c:
                        prod[k - e + i] = w.sub(prod[k - e + i], w.scale(h, c))
        return RingElem(params, prod[:e], n)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElem":
        if k < 0:
            return invert_unit(self) ** (-k)
        result = RingElem.from_int(self.params, 1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- precision handling ------------------------------------------------------
    def reduce(self, n: int) -> "RingElem":
        if n > self.prec:
            raise PrecisionError(f"cannot reduce precision {self.prec} element to {n}")
        if n == self.prec:
            return self
        return RingElem(self.params, self.coeffs, n)

    def lift(self, n: int) -> "RingElem":
        """Digit-zero extension to precision n >= prec."""
        if n < self.prec:
            return self.reduce(n)
        return RingElem.from_digits(self.params, self.digits(), n)

    def with_prec(self, n: int) -> "RingElem":
        """Reinterpret the stored representative at precision n (any lift)."""
        if n <= self.prec:
            return self.reduce(n)
        return RingElem(self.params, self.coeffs, n, _canonical=True)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        w = _w_of(self.params)
        return all(w.is_zero(c) for c in self.coeffs)

    def valuation(self) -> Valuation:
        return valuation(self)

    def val(self) -> int:
        """Valuation as an int (precision when zero)."""
        return valuation(self).value

    def residue(self) -> int:
        if self.prec == 0:
            return 0
        return _w_of(self.params).residue_code(self.coeffs[0], self.params.field)

    def is_unit(self) -> bool:
        return self.prec > 0 and self.residue() != 0

    def digits(self) -> list[int]:
        ring = Ring(self.params, self.prec)
        out = []
        a = self
        for i in range(self.prec):
            d = a.residue()
            out.append(d)
            if d:
                a = a - ring.lift_residue(d).with_prec(a.prec)
            a = div_pi(a, 1) if a.prec > 1 else a
        return out

    def to_json(self) -> list[int]:
        return self.digits()


_W_CACHE: dict[RingParams, _W] = {}


def _w_of(params: RingParams) -> _W:
    w = _W_CACHE.get(params)
    if w is None:
        w = _W_CACHE[params] = _W(params)
    return w


def valuation(a: RingElem) -> Valuation:
    w = _w_of(a.params)
    e = a.params.e
    best = a.prec
    for i, c in enumerate(a.coeffs):
        if not w.is_zero(c):
            cap = a.params.depth(i, a.prec)
            best = min(best, e * w.vp(c, cap) + i)
    if best >= a.prec:
        return Valuation(a.prec, exact=False)
    return Valuation(best, exact=True)


def div_pi(a: RingElem, k: int = 1) -> RingElem:
    """a / pi^k; requires v(a) >= k.  Precision drops by k."""
    if k == 0:
        return a
    params = a.params
    w = _w_of(params)
    e = params.e
    tail = params.eisenstein_tail
    c0_unit = params._c0_unit_inv
    c0_inv_cache = {}
    cur = a
    for _ in range(k):
        if cur.val() < 1:
            raise PrecisionError("division by pi of a unit")
        n = cur.prec
        K = params.depth(0, n) + 1
        mod = params.p ** K
        if K not in c0_inv_cache:
            c0_inv_cache[K] = pow(c0_unit, -1, mod)
        coeffs = list(cur.coeffs)
        a0 = coeffs[0]
        # a0 / c0 = (a0 / p) * (c0 / p)^-1
        q0 = w.scale(w.div_p(a0), c0_inv_cache[K])
        new = [w.zero] * e
        for i in range(1, e):
            new[i - 1] = coeffs[i]
        # a0 / x = -(a0 / c0) * (x^{e-1} + c_{e-1} x^{e-2} + ... + c_1)
        new[e - 1] = w.sub(new[e - 1], q0)
        for i in range(1, e):
            if tail[i]:
                new[i - 1] = w.sub(new[i - 1], w.scale(q0, tail[i]))
        cur = RingElem(params, new, n - 1)
    return cur


def pi_power(params: RingParams, k: int, prec: int) -> RingElem:
    ring = Ring(params, prec)
    return ring.pi ** k if k else ring.one


def ring_arith(a: RingElem, b: RingElem, kind: str) -> RingElem:
    a._check(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def invert_unit(a: RingElem) -> RingElem:
    if not a.is_unit():
        raise NotAUnit(f"{a!r} has positive valuation")
    params = a.params
    field_ = params.field
    ring = Ring(params, a.prec)
    x = ring.lift_residue(field_.inv(a.residue()))
    # Newton: each step doubles the number of correct digits
    correct = 1
    while correct < a.prec:
        x = x * (2 - a * x)
        correct *= 2
    return x


def divide(a: RingElem, b: RingElem) -> RingElem:
    """a / b with b = pi^k * unit, k <= v(a).  Precision drops by k."""
    vb = b.valuation()
    if not vb.exact:
        raise ZeroDivisionError("divisor is zero at working precision")
    k = vb.value
    if a.val() < k:
        raise PrecisionError(f"v(a) = {a.val()} < v(b) = {k}: quotient not integral")
    ub = div_pi(b, k)
    n = min(a.prec - k, ub.prec)
    return div_pi(a, k).reduce(n) * invert_unit(ub.reduce(n))


def quo(a: RingElem, b: RingElem) -> RingElem:
    """Some q at a's precision with q * b = a (requires v(b) <= v(a))."""
    if a.is_zero():
        return RingElem.from_int(a.params, 0, a.prec)
    q = divide(a, b)
    return q.with_prec(a.prec)


def hensel_sqrt(a: RingElem) -> RingElem:
    v = a.valuation()
    if v.exact and v.value > 0:
        raise NoSquareRoot(f"non-unit of valuation {v.value}")
    if not a.is_unit():
        raise NoSquareRoot("zero has no unit square root at this precision")
    if a.params.p == 2:
        raise NoSquareRoot("p = 2 is not supported")
    field_ = a.params.field
    s0 = field_.sqrt(a.residue())
    if s0 is None:
        raise NoSquareRoot("residue is not a square in F")
    ring = Ring(a.params, a.prec)
    s = ring.lift_residue(s0)
    inv2 = invert_unit(ring.from_int(2))
    correct = 1
    while correct < a.prec:
        s = (s + a * invert_unit(s)) * inv2
        correct *= 2
    return s


def teichmuller_root(params: RingParams, order: int, seed: int, prec: int) -> RingElem:
    """The unique u = seed (mod pi) with u^order = 1, order | p^f - 1."""
    q = params.p ** params.f
    if (q - 1) % order:
        raise InvalidSeed(f"order {order} does not divide p^f - 1 = {q - 1}")
    field_ = params.field
    if seed == 0 or field_.pow(seed, order) != 1:
        raise InvalidSeed(f"seed {seed} has order not dividing {order}")
    ring = Ring(params, prec)
    u = ring.lift_residue(seed)
    # u -> u^q converges to the Teichmuller lift (one digit per step at worst)
    for _ in range(prec + 1):
        nxt = u ** q
        if nxt == u:
            break
        u = nxt
    return u


# ----------------------------------------------------------------------------


class Ring:
    """Convenience factory for elements of O/pi^N."""

    def __init__(self, params: RingParams, precision: int):
        if precision < 0:
            raise ValueError("precision must be >= 0")
        self.params = params
        self.precision = precision

    def __repr__(self) -> str:
        return f"Ring(p={self.params.p}, e={self.params.e}, f={self.params.f}, N={self.precision})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and (self.params, self.precision) == (other.params, other.precision)

    def __hash__(self) -> int:
        return hash((self.params, self.precision))

    @property
    def field(self) -> ResidueField:
        return self.params.field

    @property
    def zero(self) -> RingElem:
        return RingElem.from_int(self.params, 0, self.precision)

    @property
    def one(self) -> RingElem:
        return RingElem.from_int(self.params, 1, self.precision)

    @property
    def pi(self) -> RingElem:
        params = self.params
        w = _w_of(params)
        if params.e == 1:
            # pi = -c_0 = p * unit
            return self.from_int(-params.eisenstein_tail[0])
        one = 1 if params.f == 1 else (1,) + (0,) * (params.f - 1)
        coeffs = [w.zero] * params.e
        coeffs[1] = one
        return RingElem(params, coeffs, self.precision)

    def from_int(self, n: int) -> RingElem:
        return RingElem.from_int(self.params, n, self.precision)

    def __call__(self, value) -> RingElem:
        if isinstance(value, RingElem):
            return value.with_prec(self.precision) if value.prec < self.precision else value.reduce(self.precision)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, (list, tuple)):
            return self.from_digits(value)
        raise TypeError(f"cannot build a ring element from {type(value).__name__}")

    def from_digits(self, digits: Sequence[int]) -> RingElem:
        return RingElem.from_digits(self.params, list(digits), self.precision)

    def lift_residue(self, code: int) -> RingElem:
        w = _w_of(self.params)
        coeffs = [w.zero] * self.params.e
        coeffs[0] = w.from_code(code, self.params.field)
        return RingElem(self.params, coeffs, self.precision)

    def pi_pow(self, k: int) -> RingElem:
        if k >= self.precision:
            return self.zero
        return self.pi ** k

    def elements(self) -> Iterable[RingElem]:
        """Every element of O/pi^N (|F|^N of them)."""
        import itertools

        q = self.params.field.order
        for digits in itertools.product(range(q), repeat=self.precision):
            yield self.from_digits(list(reversed(digits)))


def load_ring_config(text: str) -> tuple[RingParams, int]:
    cfg = json.loads(text)
    return RingParams.from_config(cfg), int(cfg.get("precision", 8))
