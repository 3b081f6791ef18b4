"""Fractional-linear maps sending zero-carrying vertical lines to circles.

Three maps matter here, all variants of w = 1 - 1/s with integer-scaled
coefficients:

    w   = (s - 1)/s          critical line Re s = 1/2  ->  unit circle
    w_h = (2s - 1)/(2s + 1)  line Re s = 0             ->  unit circle
    w_m = (2s - 3)/(2s - 1)  line Re s = 1             ->  unit circle

Composed against the inverse of w, the shifted maps act on the w-plane as
w_h = (1+w)/(3-w) and w_m = (3w-1)/(w+1), sharing a second-order fixed
point at w = 1. Constant-modulus loci of these w-plane forms are circles
or lines (Apollonius), emitted as sampled polylines for plotting.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .context import PrecisionContext
from .errors import PrecisionRefusal, XikitError

KINDS = ("w", "w_h", "w_m")


@dataclass(frozen=True)
class MobiusMap:
    """(a p + b) / (c p + d) with exact integer coefficients."""

    kind: str
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise XikitError("degenerate Mobius map")

    def apply(self, p):
        den = self.c * p + self.d
        if den == 0:
            raise PrecisionRefusal("Mobius map pole at %s" % p)
        return (self.a * p + self.b) / den

    def inverse(self) -> MobiusMap:
        return MobiusMap(self.kind + "_inv", self.d, -self.b, -self.c, self.a)

    def compose(self, other: MobiusMap, kind: str = "") -> MobiusMap:
        """self after other, by 2x2 coefficient matrix product."""
        return MobiusMap(
            kind or (self.kind + "o" + other.kind),
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def fixed_point_poly(self):
        """Coefficients (A, B, C) of the fixed-point equation A z^2 + B z + C = 0."""
        return (self.c, self.d - self.a, -self.b)


def make_map(kind: str) -> MobiusMap:
    """Forward map from the s-plane for the given kind."""
    if kind == "w":
        return MobiusMap("w", 1, -1, 1, 0)
    if kind == "w_h":
        return MobiusMap("w_h", 2, -1, 2, 1)
    if kind == "w_m":
        return MobiusMap("w_m", 2, -3, 2, -1)
    raise XikitError("unknown map kind %r (expected one of %s)" % (kind, (KINDS,)))


def w_plane_form(kind: str) -> MobiusMap:
    """The map expressed as a function of w = (s-1)/s."""
    m = make_map(kind).compose(make_map("w").inverse(), kind=kind + "(w)")
    # normalize the common factor to keep coefficients small
    from math import gcd
    g = gcd(gcd(abs(m.a), abs(m.b)), gcd(abs(m.c), abs(m.d)))
    if g > 1:
        m = MobiusMap(m.kind, m.a // g, m.b // g, m.c // g, m.d // g)
    return m


def mobius_apply(m: MobiusMap, p):
    return m.apply(p)


@dataclass(frozen=True)
class Locus:
    """Constant-modulus locus: a circle (center, radius) or a line (point, direction)."""

    kind: str            # "circle" | "line"
    map_kind: str
    modulus: float
    center: object       # circle center, or a point on the line
    radius: object       # circle radius, or None for a line
    direction: object    # unit direction for a line, or None
    points: tuple        # sampled complex points


def locus_emit(map_kind: str, modulus, samples: int, ctx: PrecisionContext) -> Locus:
    """Sampled locus {p : |map(p)| = modulus} in the w-plane.

    From |a p + b|^2 = mu^2 |c p + d|^2: with A = |a|^2 - mu^2 |c|^2,
    B = a conj(b) - mu^2 c conj(d), C = |b|^2 - mu^2 |d|^2 the locus is
    A |p|^2 + 2 Re(B p) + C = 0 -- a circle when A != 0, else a line.
    """
    if samples < 2:
        raise PrecisionRefusal("samples must be >= 2")
    m = w_plane_form(map_kind)
    with ctx.workdps():
        mu2 = mpf(modulus) ** 2
        if mpf(modulus) <= 0:
            raise PrecisionRefusal("modulus must be positive")
        A = mpf(m.a * m.a) - mu2 * (m.c * m.c)
        B = mpf(m.a * m.b) - mu2 * (m.c * m.d)  # integer coeffs are real
        C = mpf(m.b * m.b) - mu2 * (m.d * m.d)
        if A != 0:
            center = -B / A  # real for these maps
            rad2 = (B / A) ** 2 - C / A
            if rad2 <= 0:
                raise PrecisionRefusal("degenerate locus: empty or a point")
            radius = mp.sqrt(rad2)
            pts = []
            for k in range(samples):
                th = 2 * mp.pi * k / samples
                pts.append(center + radius * mp.exp(1j * th))
            return Locus("circle", map_kind, float(modulus), center, radius, None, tuple(pts))
        # line: 2 Re(B p) + C = 0 with real B -> vertical line u = -C/(2B)
        if B == 0:
            raise PrecisionRefusal("degenerate locus (line at infinity)")
        u0 = -C / (2 * B)
        pts = []
        span = mpf(4)
        for k in range(samples):
            v = -span + 2 * span * k / (samples - 1)
            pts.append(mp.mpc(u0, v))
        return Locus("line", map_kind, float(modulus), mp.mpc(u0, 0), None, mp.mpc(0, 1), tuple(pts))
