"""Exact evaluation of the f(n,q) bound formulas.

Values stay exact integers while they fit in ``CAP_BITS`` bits.  Beyond that
they are kept in tower form ``(h, x)``, meaning ``2^2^...^x`` with ``h`` twos;
the top ``x`` is a float no larger than ``CAP_TOP``.  Tower values obtained by
recursion drop additive terms that vanish at float precision, so they carry
``approx=True`` and are displayed with a ``~`` mark.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

CAP_BITS = 10**6
CAP_TOP = float(CAP_BITS)

# sqrt(e) to 40 significant digits, kept only to check SQRT_E_UPPER
SQRT_E_REFERENCE = "1.648721270700128146848650787814163571654"


def _sqrt_e_upper(terms: int = 24) -> Fraction:
    """A rational ``r`` with ``r > e^{1/2}``: series partial sum plus a tail bound.

    The tail ``sum_{k>K} 2^-k/k!`` is at most twice its first term.
    """
    s = Fraction(0)
    term = Fraction(1)
    for k in range(terms + 1):
        if k:
            term /= 2 * k
        s += term
    tail = 2 * term / (2 * (terms + 1))
    return s + tail


SQRT_E_UPPER = _sqrt_e_upper()


class DomainError(ValueError):
    pass


def log2_int(v: int) -> float:
    """log2 of a positive integer of any size, to double precision."""
    if v <= 0:
        raise DomainError("log2 of a non-positive integer")
    b = v.bit_length()
    if b <= 1000:
        return math.log2(v)
    shift = b - 64
    return shift + math.log2(v >> shift)


def _normalize(h: int, x: float) -> tuple[int, float]:
    while x > CAP_TOP:
        x = math.log2(x)
        h += 1
    while h > 0 and x < math.log2(CAP_TOP) and 2.0 ** x <= CAP_TOP:
        x = 2.0 ** x
        h -= 1
    return h, x


@total_ordering
@dataclass(frozen=True)
class BoundValue:
    """One evaluated bound: an exact integer, a tower or a rational power."""

    name: str
    expr: str
    exact: int | None = None
    height: int = 0
    top: float = 0.0
    approx: bool = False
    power: tuple | None = None  # (base, Fraction exponent) when not integral

    @classmethod
    def of(cls, name: str, expr: str, value: int) -> "BoundValue":
        if value.bit_length() <= CAP_BITS:
            return cls(name, expr, exact=value)
        h, x = _normalize(1, log2_int(value))
        return cls(name, expr, height=h, top=x)

    @classmethod
    def tower(cls, name: str, expr: str, h: int, x: float, approx: bool = True) -> "BoundValue":
        h, x = _normalize(h, x)
        return cls(name, expr, height=h, top=x, approx=approx)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def key(self) -> tuple[int, float]:
        """Normalized ``(h, x)`` with ``h`` minimal such that ``log2^{(h)} V <= CAP_TOP``."""
        if self.exact is not None:
            if self.exact <= CAP_TOP:
                return 0, float(self.exact)
            return _normalize(1, log2_int(self.exact))
        if self.power is not None:
            b, e = self.power
            return _normalize(1, float(e) * math.log2(b)) if b > 1 else (0, 1.0)
        return self.height, self.top

    def log2(self) -> float:
        """log2 of the value; ``inf`` if it does not fit a float."""
        if self.exact is not None:
            return log2_int(self.exact)
        h, x = self.key()
        for _ in range(h - 1):
            if x > 1023:
                return math.inf
            x = 2.0 ** x
        return x if h >= 1 else math.log2(x)

    def __eq__(self, other):
        if not isinstance(other, BoundValue):
            return NotImplemented
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        return self.key() == other.key()

    def __lt__(self, other):
        if isinstance(other, int):
            other = BoundValue.of("", "", other)
        if self.exact is not None and other.exact is not None:
            return self.exact < other.exact
        return self.key() < other.key()

    def __hash__(self):
        return hash((self.exact, self.key()))

    def render(self, digits: int = 60) -> str:
        if self.exact is not None:
            if self.exact.bit_length() <= digits * 3:
                return str(self.exact)
            lg = log2_int(self.exact) * math.log10(2)
            mant = 10 ** (lg - math.floor(lg))
            return f"{mant:.6f}e{math.floor(lg)} ({math.floor(lg) + 1} digits)"
        if self.power is not None:
            b, e = self.power
            return f"{b}^({e}) ~ {float(b) ** float(e):.6g}"
        mark = "~" if self.approx else ""
        return f"{mark}tower(h={self.height}, top={self.top:.6g})"

    def __str__(self):
        return self.render()


def _exact(v) -> int:
    if isinstance(v, BoundValue):
        if v.exact is None:
            raise DomainError(f"{v.name} is not exact")
        return v.exact
    return int(v)


def f2_exact(q: int) -> BoundValue:
    if q < 1:
        raise DomainError("q must be >= 1")
    return BoundValue.of("f2_exact", "2q+1", 2 * q + 1)


def recur_upper(f_nq, q: int) -> BoundValue:
    """``(f + 1)(q^f + 1) - 1``, exact while ``q^f`` fits the cap."""
    if q < 1:
        raise DomainError("q must be >= 1")
    expr = "(f+1)(q^f+1)-1"
    if isinstance(f_nq, int) or f_nq.is_exact:
        f = _exact(f_nq)
        if q == 1 or f <= CAP_BITS / math.log2(q):
            return BoundValue.of("recur_upper", expr, (f + 1) * (q ** f + 1) - 1)
        # log2 of the result is f log2 q plus log2(f+1), up to a vanishing term;
        # one level up that is log2 f + log2 log2 q
        c = math.log2(math.log2(q)) if q > 2 else 0.0
        return BoundValue.tower("recur_upper", expr, 2, log2_int(f) + c)
    h, x = f_nq.key()
    c = math.log2(math.log2(q)) if q > 2 else 0.0
    if h == 1:
        # log2 log2 result ~ log2 f + log2 log2 q
        return BoundValue.tower("recur_upper", expr, 2, x + c)
    return BoundValue.tower("recur_upper", expr, h + 1, x)


def t2_count(q: int) -> BoundValue:
    """Number of 2-minimal words: ``q + sum_{r=1}^{q-1} q(q-1)...(q-r) 2^r``."""
    if q < 1:
        raise DomainError("q must be >= 1")
    total = q
    falling = q
    for r in range(1, q):
        falling *= q - r
        total += falling * 2 ** r
    return BoundValue.of("t2_count", "q+sum q(q-1)...(q-r)2^r", total)


def f3_upper_rs(q: int) -> BoundValue:
    if q < 1:
        raise DomainError("q must be >= 1")
    return BoundValue.of("f3_upper_rs", "2^(q+1)(q+1)!", 2 ** (q + 1) * math.factorial(q + 1))


def f3_upper_improved(q: int) -> BoundValue:
    """Ceiling of ``3 r 2^q q!`` with ``r = SQRT_E_UPPER > e^{1/2}``; valid for q > 3."""
    if q <= 3:
        raise DomainError(f"f3_upper_improved needs q > 3, got {q}")
    v = 3 * SQRT_E_UPPER * 2 ** q * math.factorial(q)
    return BoundValue.of("f3_upper_improved", "3e^(1/2)2^q q!", -(-v.numerator // v.denominator))


def f3_lower(q: int) -> BoundValue:
    """Length of the improved Eulerian construction; ``f(3,q)`` exceeds it."""
    if q < 5:
        raise DomainError(f"f3_lower needs q >= 5, got {q}")
    return BoundValue.of("f3_lower", "3*2^(q-2)q!+2q-4", 3 * 2 ** (q - 2) * math.factorial(q) + 2 * q - 4)


def tower_bound(n: int, q: int) -> BoundValue:
    """Tower of ``n - 1`` copies of ``q``, the upper bound for ``f(n,q)`` when q >= 35."""
    if n < 3:
        raise DomainError("tower_bound needs n >= 3")
    if q < 2:
        raise DomainError("tower_bound needs q >= 2")
    expr = f"q^q^...^q ({n - 1} q's)"
    v: int | None = q
    h, x = 0, float(q)
    lq = math.log2(q)
    for _ in range(n - 2):
        if v is not None and v <= CAP_BITS / lq:
            v = q ** v
            continue
        if v is not None:
            # log2(q^v) = v log2 q, which may itself overflow a float
            h, x = 2, log2_int(v) + math.log2(lq)
            v = None
        elif h == 1:
            h, x = 2, x + math.log2(lq)
        else:
            h += 1
        h, x = _normalize(h, x)
    if v is not None:
        return BoundValue.of("tower_bound", expr, v)
    return BoundValue.tower("tower_bound", expr, h, x)


def verify_base_inequality(q: int) -> bool:
    """Exact check of ``2^{q+1}(q+1)! <= q^{q-1}``."""
    return 2 ** (q + 1) * math.factorial(q + 1) <= q ** (q - 1)


def least_base_q(lo: int = 2, hi: int = 100) -> int | None:
    """Smallest q in ``[lo, hi]`` from which the base inequality holds through ``hi``."""
    best = None
    for q in range(hi, lo - 1, -1):
        if not verify_base_inequality(q):
            break
        best = q
    return best


def threshold_length(n: int, q: int) -> BoundValue:
    """Random-word threshold ``q^{2^{n-1} - (n+1)/2}`` for the appearance of Z_n."""
    if n < 2:
        raise DomainError("threshold_length needs n >= 2")
    e = Fraction(2 ** (n - 1)) - Fraction(n + 1, 2)
    expr = "q^(2^(n-1)-(n+1)/2)"
    if e.denominator == 1:
        return BoundValue.of("threshold_length", expr, q ** int(e))
    return BoundValue("threshold_length", expr, power=(q, e))


def log_count_bound(m_words, q: int) -> BoundValue:
    """``floor(log_q m)``: a lower bound for f(n,q) from a count m of avoiding words."""
    m = _exact(m_words)
    if m < 1:
        raise DomainError("m must be >= 1")
    if q < 2:
        raise DomainError("q must be >= 2")
    k = max(0, int(log2_int(m) / math.log2(q)) - 1)
    while q ** (k + 1) <= m:
        k += 1
    while k > 0 and q ** k > m:
        k -= 1
    return BoundValue.of("log_count_bound", "floor(log_q m)", k)


def f_upper(n: int, q: int, base: str = "rs") -> BoundValue:
    """Upper bound chain: ``f(2,q)``, then ``2^(q+1)(q+1)!`` (or the e^(1/2) form) for n = 3, then recursion."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if n == 1:
        return BoundValue.of("f_upper", "f(1,q)=1", 1)
    v = f2_exact(q)
    if n == 2:
        return v
    if base == "rs":
        v = f3_upper_rs(q)
    elif base == "improved" and q > 3:
        v = f3_upper_improved(q)
    else:
        v = recur_upper(v, q)
    for _ in range(n - 3):
        v = recur_upper(v, q)
    return BoundValue(f"f_upper[{base}]", v.expr, v.exact, v.height, v.top, v.approx, v.power)


# ---------------------------------------------------------------- oracle

def two_minimal_words(q: int) -> list:
    """Enumerate 2-minimal words over ``0..q-1`` by extending Z_2-free words.

    A word is 2-minimal when it contains Z_2 while its longest proper prefix
    and suffix avoid it.  Z_2 appears exactly when some letter recurs at
    distance at least 2.
    """
    def z2_free(w) -> bool:
        first: dict = {}
        for i, a in enumerate(w):
            if i - first.setdefault(a, i) >= 2:
                return False
        return True

    out = []
    stack = [()]
    while stack:
        w = stack.pop()
        for a in range(q):
            v = w + (a,)
            if z2_free(v):
                stack.append(v)
            elif z2_free(v[1:]):
                out.append(v)
    out.sort()
    return out
