"""Truncated Laurent series over F_p and finite lattice windows.

A series is known exactly modulo t^prec.  Nonzero series store a dense
coefficient run from the valuation up to (but excluding) the precision
order; the zero series keeps only its precision.  All values are
immutable and every operation is exact: precision never silently
increases, and asking for a coefficient at or beyond the precision is
an error rather than a guess.

Series literals follow a small grammar, whitespace-insensitive::

    series := term ("+" term)* ("+" "O(t^" int ")")?
    term   := coeff | coeff "*"? atom | atom
    atom   := "t" ("^" int)?
    coeff  := unsigned integer        # reduced mod p
    int    := optionally signed integer

The canonical printer emits ascending exponents, omits zero terms, and
always appends the precision tail, e.g. ``"2*t^-1 + t + O(t^2)"`` or
``"0 + O(t^3)"``; parse and format are mutually inverse on canonical
forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    ExponentOverflow,
    InsufficientPrecision,
    OutsideWindow,
    SeriesParseError,
)
from .linalg import check_prime

# Dense storage bound: exponents and precision spans beyond this are
# refused rather than allocated.
MAX_EXPONENT = 10**6


def _check_exponent(e: int) -> int:
    if abs(e) > MAX_EXPONENT:
        raise ExponentOverflow(f"exponent {e} beyond ±{MAX_EXPONENT}")
    return e


class LaurentSeries:
    """A Laurent series over F_p known modulo t^prec."""

    __slots__ = ("p", "prec", "val", "coeffs")

    def __init__(self, p: int, val: int, coeffs, prec: int):
        check_prime(p)
        _check_exponent(prec)
        _check_exponent(val)
        cs = [int(c) % p for c in coeffs]
        # Drop anything at or beyond the precision order.
        if val + len(cs) > prec:
            cs = cs[: max(0, prec - val)]
        # Normalize: strip leading zeros, raising the valuation.
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        val = val + lead
        if not cs:
            object.__setattr__(self, "val", None)
            object.__setattr__(self, "coeffs", ())
        else:
            if prec - val > MAX_EXPONENT:
                raise ExponentOverflow(f"span {prec - val} beyond {MAX_EXPONENT}")
            cs = cs + [0] * (prec - val - len(cs))
            object.__setattr__(self, "val", val)
            object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def zero(cls, p: int, prec: int) -> "LaurentSeries":
        return cls(p, 0, (), prec)

    @classmethod
    def one(cls, p: int, prec: int) -> "LaurentSeries":
        return cls(p, 0, (1,), prec)

    @classmethod
    def t_power(cls, p: int, k: int, prec: int, coeff: int = 1) -> "LaurentSeries":
        """The monomial coeff * t^k known modulo t^prec."""
        return cls(p, k, (coeff,), prec)

    @classmethod
    def from_terms(cls, p: int, terms: dict[int, int], prec: int) -> "LaurentSeries":
        """Build from an exponent -> coefficient mapping."""
        live = {e: c % p for e, c in terms.items() if c % p and e < prec}
        if not live:
            return cls.zero(p, prec)
        val = min(live)
        _check_exponent(val)
        if prec - val > MAX_EXPONENT:
            raise ExponentOverflow(f"span {prec - val} beyond {MAX_EXPONENT}")
        cs = [0] * (prec - val)
        for e, c in live.items():
            cs[e - val] = c
        return cls(p, val, cs, prec)

    @property
    def is_zero(self) -> bool:
        return self.val is None

    def coeff(self, e: int) -> int:
        """Coefficient of t^e; exact for e < prec, error beyond."""
        if e >= self.prec:
            raise InsufficientPrecision(
                f"coefficient of t^{e} requested from a series known mod t^{self.prec}"
            )
        if self.is_zero or e < self.val:
            return 0
        return self.coeffs[e - self.val]

    def support(self) -> tuple[int, ...]:
        """Exponents with nonzero coefficient."""
        if self.is_zero:
            return ()
        return tuple(self.val + i for i, c in enumerate(self.coeffs) if c)

    def _check_same_field(self, other: "LaurentSeries"):
        if self.p != other.p:
            raise DimensionMismatch(f"mixed fields F_{self.p} and F_{other.p}")

    def add(self, other: "LaurentSeries") -> "LaurentSeries":
        """Coefficientwise sum; precision is the minimum of the operands'."""
        self._check_same_field(other)
        prec = min(self.prec, other.prec)
        if self.is_zero and other.is_zero:
            return LaurentSeries.zero(self.p, prec)
        vals = [s.val for s in (self, other) if not s.is_zero]
        val = min(vals)
        cs = [0] * max(0, prec - val)
        for s in (self, other):
            if s.is_zero:
                continue
            for i, c in enumerate(s.coeffs):
                e = s.val + i
                if e < prec:
                    cs[e - val] = (cs[e - val] + c) % self.p
        return LaurentSeries(self.p, val, cs, prec)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self.add(other)

    def scale(self, c: int) -> "LaurentSeries":
        """Scalar multiple; the precision window is unchanged."""
        c = c % self.p
        if self.is_zero or c == 0:
            return LaurentSeries.zero(self.p, self.prec)
        return LaurentSeries(self.p, self.val, [c * x for x in self.coeffs], self.prec)

    def neg(self) -> "LaurentSeries":
        return self.scale(self.p - 1)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k: valuation and precision both move by k."""
        _check_exponent(k)
        if self.is_zero:
            return LaurentSeries.zero(self.p, self.prec + k)
        return LaurentSeries(self.p, self.val + k, self.coeffs, self.prec + k)

    def truncate(self, prec: int) -> "LaurentSeries":
        """Forget information: reduce the precision to prec <= self.prec."""
        if prec > self.prec:
            raise InsufficientPrecision(
                f"cannot extend precision from {self.prec} to {prec}"
            )
        if self.is_zero:
            return LaurentSeries.zero(self.p, prec)
        return LaurentSeries(self.p, self.val, self.coeffs, prec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.p == other.p
            and self.prec == other.prec
            and self.val == other.val
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.prec, self.val, self.coeffs))

    def __repr__(self) -> str:
        return f"LaurentSeries({self.p}, {format_series(self)!r})"

    def __str__(self) -> str:
        return format_series(self)


def parse_series(text: str, p: int, default_prec: int) -> LaurentSeries:
    """Parse a series literal; see the module grammar."""
    check_prime(p)
    parser = _Parser(text)
    terms: list[tuple[int, int]] = []
    o_prec: int | None = None
    terms.append(parser.term())
    while True:
        parser.skip_ws()
        if parser.done():
            break
        parser.expect("+")
        parser.skip_ws()
        if parser.peek() == "O":
            o_prec = parser.o_tail()
            parser.skip_ws()
            if not parser.done():
                parser.fail("trailing input after precision tail")
            break
        terms.append(parser.term())
    prec = default_prec if o_prec is None else o_prec
    _check_exponent(prec)
    acc: dict[int, int] = {}
    for e, c in terms:
        acc[e] = (acc.get(e, 0) + c) % p
    return LaurentSeries.from_terms(p, acc, prec)


class _Parser:
    """Recursive-descent reader for series literals."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, msg: str):
        raise SeriesParseError(msg, self.pos)

    def done(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def unsigned(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("expected an integer")
        return int(self.text[start : self.pos])

    def signed(self) -> int:
        self.skip_ws()
        sign = 1
        if self.peek() in "+-":
            if self.peek() == "-":
                sign = -1
            self.pos += 1
        return sign * self.unsigned()

    def atom(self) -> int:
        """Parse 't' with optional '^int'; return the exponent."""
        self.expect("t")
        self.skip_ws()
        if self.peek() == "^":
            self.pos += 1
            e = self.signed()
        else:
            e = 1
        return _check_exponent(e)

    def term(self) -> tuple[int, int]:
        """Parse one term; return (exponent, raw coefficient)."""
        self.skip_ws()
        ch = self.peek()
        if ch.isdigit():
            c = self.unsigned()
            self.skip_ws()
            if self.peek() == "*":
                self.pos += 1
                self.skip_ws()
                return (self.atom(), c)
            if self.peek() == "t":
                return (self.atom(), c)
            return (0, c)
        if ch == "t":
            return (self.atom(), 1)
        self.fail("expected a term")

    def o_tail(self) -> int:
        """Parse 'O(t^int)' and return the precision order."""
        for ch in "O(":
            self.expect(ch)
            self.skip_ws()
        self.expect("t")
        self.skip_ws()
        self.expect("^")
        n = self.signed()
        self.skip_ws()
        self.expect(")")
        return n


def format_series(s: LaurentSeries) -> str:
    """Canonical printer: ascending exponents, no zero terms, O-tail."""
    if s.is_zero:
        body = "0"
    else:
        parts = []
        for i, c in enumerate(s.coeffs):
            if not c:
                continue
            e = s.val + i
            if e == 0:
                parts.append(str(c))
            else:
                stem = "t" if e == 1 else f"t^{e}"
                parts.append(stem if c == 1 else f"{c}*{stem}")
        body = " + ".join(parts)
    return f"{body} + O(t^{s.prec})"


class SeriesVector:
    """A d-tuple of series over one field with one shared precision."""

    __slots__ = ("p", "d", "prec", "series")

    def __init__(self, series):
        ss = tuple(series)
        if not ss:
            raise DimensionMismatch("a SeriesVector needs at least one component")
        p, prec = ss[0].p, ss[0].prec
        for s in ss:
            if s.p != p:
                raise DimensionMismatch("components live over different fields")
            if s.prec != prec:
                raise DimensionMismatch("components carry different precisions")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", len(ss))
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "series", ss)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesVector is immutable")

    @classmethod
    def zero(cls, p: int, d: int, prec: int) -> "SeriesVector":
        return cls([LaurentSeries.zero(p, prec)] * d)

    def component(self, i: int) -> LaurentSeries:
        """1-based component access (components are numbered 1..d)."""
        if not 1 <= i <= self.d:
            raise DimensionMismatch(f"component {i} outside 1..{self.d}")
        return self.series[i - 1]

    @property
    def is_zero(self) -> bool:
        return all(s.is_zero for s in self.series)

    def valuation(self) -> int | None:
        """Minimal component valuation, or None for the zero vector."""
        vals = [s.val for s in self.series if not s.is_zero]
        return min(vals) if vals else None

    def add(self, other: "SeriesVector") -> "SeriesVector":
        if self.d != other.d:
            raise DimensionMismatch("vector lengths differ")
        return SeriesVector([a.add(b) for a, b in zip(self.series, other.series)])

    def __add__(self, other: "SeriesVector") -> "SeriesVector":
        return self.add(other)

    def scale(self, c: int) -> "SeriesVector":
        return SeriesVector([s.scale(c) for s in self.series])

    def shift(self, k: int) -> "SeriesVector":
        return SeriesVector([s.shift(k) for s in self.series])

    def truncate(self, prec: int) -> "SeriesVector":
        return SeriesVector([s.truncate(prec) for s in self.series])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesVector):
            return NotImplemented
        return self.series == other.series

    def __hash__(self):
        return hash(self.series)

    def __repr__(self) -> str:
        return f"SeriesVector({format_vector(self)})"


def format_vector(v: SeriesVector) -> str:
    """Tuple notation with each component in canonical series syntax."""
    return "(" + ", ".join(format_series(s) for s in v.series) + ")"


def coeff_tap(v: SeriesVector, component: int, exponent: int) -> int:
    """Read one coefficient of one component (1-based component index)."""
    return v.component(component).coeff(exponent)


@dataclass(frozen=True)
class LatticeWindow:
    """The finite slice t^lo B / t^hi B of the standard lattice B.

    Coordinates are indexed by (component, exponent) pairs with
    components 1..d outermost and exponents lo..hi-1 ascending inside,
    so index (c, e) = (c-1)*(hi-lo) + (e-lo).
    """

    lo: int
    hi: int
    d: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        if self.lo >= self.hi:
            raise DimensionMismatch(f"empty window [{self.lo}, {self.hi})")
        if self.d < 1:
            raise DimensionMismatch("window needs at least one component")
        if self.dim > 512:
            raise DimensionMismatch(f"window dimension {self.dim} beyond 512")

    @property
    def width(self) -> int:
        return self.hi - self.lo

    @property
    def dim(self) -> int:
        return self.d * (self.hi - self.lo)

    def contains_exp(self, e: int) -> bool:
        return self.lo <= e < self.hi

    def index(self, component: int, exponent: int) -> int:
        if not 1 <= component <= self.d:
            raise DimensionMismatch(f"component {component} outside 1..{self.d}")
        if not self.contains_exp(exponent):
            raise DimensionMismatch(
                f"exponent {exponent} outside window [{self.lo}, {self.hi})"
            )
        return (component - 1) * self.width + (exponent - self.lo)

    def labels(self) -> list[tuple[int, int]]:
        """Coordinate labels (component, exponent) in index order."""
        return [(c, e) for c in range(1, self.d + 1) for e in range(self.lo, self.hi)]


def window_coords(v: SeriesVector, w: LatticeWindow) -> np.ndarray:
    """Coordinates of the class of v mod t^hi B in window order.

    Requires v.prec >= w.hi (so every window coefficient is known) and
    support at or above w.lo (so the class is representable).
    """
    if v.p != w.p or v.d != w.d:
        raise DimensionMismatch("vector and window are incompatible")
    if v.prec < w.hi:
        raise InsufficientPrecision(
            f"vector known mod t^{v.prec} cannot fill a window reaching t^{w.hi}"
        )
    out = np.zeros(w.dim, dtype=np.int64)
    for c in range(1, w.d + 1):
        s = v.component(c)
        for e in s.support():
            if e >= w.hi:
                continue
            if e < w.lo:
                raise OutsideWindow(
                    f"component {c} has a t^{e} term below the window floor {w.lo}"
                )
            out[w.index(c, e)] = s.coeff(e)
    return out


def coords_to_vector(coords, w: LatticeWindow) -> SeriesVector:
    """Canonical representative (prec = w.hi) of a window coordinate vector."""
    arr = np.asarray(coords, dtype=np.int64) % w.p
    if arr.shape != (w.dim,):
        raise DimensionMismatch(f"expected {w.dim} coordinates, got shape {arr.shape}")
    comps = []
    for c in range(1, w.d + 1):
        block = arr[(c - 1) * w.width : c * w.width]
        comps.append(LaurentSeries(w.p, w.lo, list(block), w.hi))
    return SeriesVector(comps)


def random_series(rng, p: int, prec: int, min_val: int = -3, zero_weight: float = 0.1) -> LaurentSeries:
    """Sampling helper for tests: a series with valuation >= min_val."""
    if rng.random() < zero_weight:
        return LaurentSeries.zero(p, prec)
    val = rng.randint(min_val, max(min_val, prec - 1))
    cs = [rng.randrange(p) for _ in range(prec - val)]
    return LaurentSeries(p, val, cs, prec)


def random_vector(rng, p: int, d: int, prec: int, min_val: int = 0) -> SeriesVector:
    """Sampling helper for tests: a vector of random series."""
    return SeriesVector([random_series(rng, p, prec, min_val) for _ in range(d)])
