"""Exact scalars for the two valued fields used throughout the package.

Two backends are supported:

* trivially valued rationals: every nonzero element has valuation 0;
* t-adic rational functions over the rationals: the valuation of a
  nonzero function is the order of vanishing at t = 0 (order of the
  numerator minus order of the denominator).

Valuations are additive, written on the -log scale: ``v(xy) = v(x) + v(y)``
and ``v(x + y) >= min(v(x), v(y))`` with equality when the two valuations
differ.  The valuation of 0 is plus infinity, represented by the ``INF``
sentinel which compares greater than every rational.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class FieldError(ValueError):
    """Raised for malformed scalars or unsupported backend operations."""


class _PlusInfinity:
    """Sentinel for +infinity on the valuation scale.  Singleton ``INF``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("geonorm.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("INF has no negative on the valuation scale")


INF = _PlusInfinity()


def parse_fraction(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` into an exact rational."""
    return Fraction(text)


def format_fraction(q: Fraction) -> str:
    """Serialize a rational as ``"num/den"`` (``"num"`` when integral)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# Integer-coefficient polynomials in one variable t, constant term first.
# Only what the rational-function field needs: ring ops, order at t = 0,
# gcd (primitive part, computed by the Euclidean algorithm over Q).
# ---------------------------------------------------------------------------


def _trim(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _poly_neg(a):
    return tuple(-x for x in a)


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_content(a) -> int:
    g = 0
    for x in a:
        g = gcd(g, abs(x))
    return g


def _poly_primitive(a):
    g = _poly_content(a)
    if g <= 1:
        return _trim(a)
    return tuple(x // g for x in a)


def _poly_ord(a) -> int:
    """Order of vanishing at t = 0; caller guarantees a nonzero."""
    for i, x in enumerate(a):
        if x:
            return i
    raise FieldError("order of the zero polynomial")


def _poly_gcd(a, b):
    """Primitive gcd over Z, via the Euclidean algorithm with Fractions."""
    fa = [Fraction(x) for x in a]
    fb = [Fraction(x) for x in b]
    while fb and any(fb):
        # remainder of fa by fb
        fb_trim = list(fb)
        while fb_trim and fb_trim[-1] == 0:
            fb_trim.pop()
        r = list(fa)
        while len(r) >= len(fb_trim) and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(fb_trim):
                break
            q = r[-1] / fb_trim[-1]
            shift = len(r) - len(fb_trim)
            for i, c in enumerate(fb_trim):
                r[shift + i] -= q * c
        fa, fb = fb_trim, r
    # fa is the gcd over Q; clear denominators and take the primitive part
    while fa and fa[-1] == 0:
        fa.pop()
    if not fa:
        return ()
    den_lcm = 1
    for c in fa:
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in fa]
    return _poly_primitive(ints)


def _poly_exact_div(a, b):
    """Exact division of integer polynomials (a divisible by b)."""
    fa = [Fraction(x) for x in a]
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(out) - 1, -1, -1):
        q = fa[k + len(b) - 1] / Fraction(b[-1])
        out[k] = q
        for i, c in enumerate(b):
            fa[k + i] -= q * c
    if any(fa):
        raise FieldError("inexact polynomial division")
    if any(c.denominator != 1 for c in out):
        raise FieldError("non-integer quotient in exact division")
    return _trim(int(c) for c in out)


class RatFunc:
    """A rational function num(t)/den(t) with integer coefficients, reduced.

    Canonical form: poly-gcd(num, den) = 1, gcd of the two contents is 1,
    and the lowest-order nonzero coefficient of den is positive.  This makes
    equality and hashing structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,), _reduced=False):
        num = _trim(num)
        den = _trim(den)
        if not den:
            raise FieldError("zero denominator")
        if not num:
            self.num, self.den = (), (1,)
            return
        if not _reduced:
            g = _poly_gcd(num, den)
            if len(g) > 1 or (g and g[0] != 1):
                num = _poly_exact_div(num, g)
                den = _poly_exact_div(den, g)
            cn, cd = _poly_content(num), _poly_content(den)
            c = gcd(cn, cd)
            if c > 1:
                num = tuple(x // c for x in num)
                den = tuple(x // c for x in den)
            if den[_poly_ord(den)] < 0:
                num = _poly_neg(num)
                den = _poly_neg(den)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, int):
            return RatFunc((x,))
        if isinstance(x, Fraction):
            return RatFunc((x.numerator,), (x.denominator,))
        raise FieldError(f"cannot coerce {x!r} to a rational function")

    @staticmethod
    def t_power(k: int) -> "RatFunc":
        if k >= 0:
            return RatFunc((0,) * k + (1,))
        return RatFunc((1,), (0,) * (-k) + (1,))

    # -- ring/field operations ---------------------------------------------

    def __add__(self, other):
        o = RatFunc.of(other)
        num = _poly_add(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den))
        return RatFunc(num, _poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(_poly_neg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-RatFunc.of(other))

    def __rsub__(self, other):
        return RatFunc.of(other) + (-self)

    def __mul__(self, other):
        o = RatFunc.of(other)
        return RatFunc(_poly_mul(self.num, o.num), _poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.of(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(_poly_mul(self.num, o.den), _poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        return RatFunc.of(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.of(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        def fmt(p):
            if not p:
                return "0"
            terms = []
            for i, c in enumerate(p):
                if c == 0:
                    continue
                if i == 0:
                    terms.append(str(c))
                elif i == 1:
                    terms.append(f"{c}*t" if c != 1 else "t")
                else:
                    terms.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
            return " + ".join(terms)

        if self.den == (1,):
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"

    def order(self):
        """Order of vanishing at t = 0 (the t-adic valuation); INF at 0."""
        if not self.num:
            return INF
        return Fraction(_poly_ord(self.num) - _poly_ord(self.den))


# ---------------------------------------------------------------------------
# Field backends.  Elements of the trivially valued field are plain
# Fractions; elements of the t-adic field are RatFunc instances.  The
# backend object carries the valuation and the JSON codec.
# ---------------------------------------------------------------------------


class TriviallyValuedRationals:
    name = "trivial"
    zero = Fraction(0)
    one = Fraction(1)

    def of(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldError(f"cannot coerce {x!r} into the trivially valued field")

    def valuation(self, x):
        return INF if x == 0 else Fraction(0)

    def is_zero(self, x) -> bool:
        return x == 0

    def to_json(self, x):
        return {"q": format_fraction(x)}

    def from_json(self, obj):
        if not (isinstance(obj, dict) and set(obj) == {"q"}):
            raise FieldError(f"malformed trivially valued scalar: {obj!r}")
        return parse_fraction(obj["q"])

    def __repr__(self):
        return "TrivialQ"


class TAdicRationalFunctions:
    name = "tadic"
    zero = RatFunc(())
    one = RatFunc((1,))
    t = RatFunc((0, 1))

    def of(self, x):
        return RatFunc.of(x)

    def valuation(self, x):
        return RatFunc.of(x).order()

    def is_zero(self, x) -> bool:
        return not RatFunc.of(x)

    def to_json(self, x):
        x = RatFunc.of(x)
        return {"t": {"num": list(x.num), "den": list(x.den)}}

    def from_json(self, obj):
        if not (isinstance(obj, dict) and set(obj) == {"t"}):
            raise FieldError(f"malformed t-adic scalar: {obj!r}")
        body = obj["t"]
        if not (isinstance(body, dict) and set(body) == {"num", "den"}):
            raise FieldError(f"malformed t-adic scalar body: {obj!r}")
        return RatFunc(tuple(body["num"]), tuple(body["den"]))

    def __repr__(self):
        return "TAdicQ(t)"


TRIVIAL = TriviallyValuedRationals()
TADIC = TAdicRationalFunctions()

_FIELDS = {"trivial": TRIVIAL, "tadic": TADIC}


def field_by_name(name: str):
    try:
        return _FIELDS[name]
    except KeyError:
        raise FieldError(f"unknown field backend {name!r}") from None


def scalar_from_json(obj):
    """Decode a scalar, inferring the backend from the JSON shape."""
    if isinstance(obj, dict) and "q" in obj:
        return TRIVIAL.from_json(obj)
    if isinstance(obj, dict) and "t" in obj:
        return TADIC.from_json(obj)
    raise FieldError(f"unrecognized scalar encoding: {obj!r}")
