"""Independent elliptic-curve oracle over F_{p^k}, characteristic at least 5.

Supplies the ground truth the rest of the toolkit is validated against:
j-invariants, brute-force point counts, the Deuring criterion (vanishing of
the Hasse invariant, the coefficient of x^(p-1) in (x^3+ax+b)^((p-1)/2)),
exhaustive supersingular j-enumeration over F_{p^2}, and degree-2 isogeny
neighbours via Velu's formulas.

Nothing here reads the shipped modular polynomial tables; agreement between
the two routes is what the validation commands check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import BoundExceeded, ExcludedJ, SmallCharacteristic
from .ffield import FieldCtx, make_field
from .polyring import UniPoly, field_embedding, roots

POINT_COUNT_BOUND = 1 << 16
SUPERSINGULAR_SCAN_BOUND = 1 << 10


def _require_char(ctx: FieldCtx):
    if ctx.p < 5:
        raise SmallCharacteristic("the oracle needs characteristic >= 5")


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + a x + b with nonzero discriminant."""
    ctx: FieldCtx
    a: tuple
    b: tuple

    def __post_init__(self):
        _require_char(self.ctx)
        if not any(self.discriminant()):
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0")

    def discriminant(self):
        F = self.ctx
        a3 = F.mul(self.a, F.mul(self.a, self.a))
        b2 = F.mul(self.b, self.b)
        return F.add(F.scalar_mul(4, a3), F.scalar_mul(27, b2))

    def j_invariant(self):
        F = self.ctx
        a3 = F.scalar_mul(4, F.mul(self.a, F.mul(self.a, self.a)))
        return F.mul(F.scalar_mul(1728, a3), F.inv(self.discriminant()))


def curve_from_j(ctx: FieldCtx, j) -> WeierstrassCurve:
    """A fixed section of the j-line: j = 0 -> (0,1), 1728 -> (1,0), else
    a = 3j(1728-j), b = 2j(1728-j)^2."""
    _require_char(ctx)
    j = tuple(j)
    if j == ctx.zero():
        return WeierstrassCurve(ctx, ctx.zero(), ctx.one())
    if j == ctx.from_int(1728):
        return WeierstrassCurve(ctx, ctx.one(), ctx.zero())
    d = ctx.sub(ctx.from_int(1728), j)
    a = ctx.scalar_mul(3, ctx.mul(j, d))
    b = ctx.scalar_mul(2, ctx.mul(j, ctx.mul(d, d)))
    return WeierstrassCurve(ctx, a, b)


def count_points(E: WeierstrassCurve) -> int:
    """#E(F_q) including the point at infinity, by quadratic-character sums."""
    F = E.ctx
    if F.q > POINT_COUNT_BOUND:
        raise BoundExceeded(f"field size {F.q} exceeds brute-force bound")
    # chi table: number of y with y^2 = v
    sq: dict = {}
    for v in range(F.q):
        z = F.element_from_key(v)
        w = F.mul(z, z)
        sq[w] = sq.get(w, 0) + 1
    n = 1
    a, b = E.a, E.b
    for v in range(F.q):
        x = F.element_from_key(v)
        rhs = F.add(F.mul(x, F.mul(x, x)), F.add(F.mul(a, x), b))
        n += sq.get(rhs, 0)
    return n


# Hasse invariant -------------------------------------------------------------

def _pack(ctx: FieldCtx, coeffs, slots, shift):
    # 2D Kronecker packing: x-slot blocks of `slots` t-limbs, `shift` bits each
    n = 0
    for j, c in enumerate(coeffs):
        base = j * slots
        for i, ci in enumerate(c):
            if ci:
                n |= ci << ((base + i) * shift)
    return n


def _unpack_mul(ctx: FieldCtx, n, deg_bound, slots, shift):
    mask = (1 << shift) - 1
    out = []
    for j in range(deg_bound + 1):
        base = j * slots
        vec = [(n >> ((base + i) * shift)) & mask for i in range(slots)]
        out.append(ctx.reduce_coeffs(vec))
    return out


def _trunc_mul(ctx: FieldCtx, A, B, trunc, slots, shift):
    # multiply coefficient lists (raw tuples), truncating at degree < trunc
    n = _pack(ctx, A, slots, shift) * _pack(ctx, B, slots, shift)
    deg = min(trunc - 1, len(A) + len(B) - 2)
    out = _unpack_mul(ctx, n, deg, slots, shift)
    while out and not any(out[-1]):
        out.pop()
    return out


def hasse_invariant(ctx: FieldCtx, a, b):
    """Coefficient of x^(p-1) in (x^3 + a x + b)^((p-1)/2)."""
    _require_char(ctx)
    p, k = ctx.p, ctx.k
    e = (p - 1) // 2
    trunc = p  # only coefficients below x^p matter
    # packing parameters: product limb bound < trunc * k * (p-1)^2
    shift = max(16, (trunc * k * (p - 1) * (p - 1)).bit_length() + 1)
    slots = 2 * k  # room for t-degree up to 2k-2 without block overflow
    base = [tuple(b), tuple(a), ctx.zero(), ctx.one()]
    acc = [ctx.one()]
    while e:
        if e & 1:
            acc = _trunc_mul(ctx, acc, base, trunc, slots, shift)
        e >>= 1
        if e:
            base = _trunc_mul(ctx, base, base, trunc, slots, shift)
    return acc[p - 1] if len(acc) > p - 1 else ctx.zero()


def is_supersingular(ctx: FieldCtx, j, cross_check: bool = False) -> bool:
    """Deuring criterion: the Hasse invariant of curve_from_j(j) vanishes."""
    _require_char(ctx)
    E = curve_from_j(ctx, j)
    ss = not any(hasse_invariant(ctx, E.a, E.b))
    if cross_check and ctx.q <= (1 << 12):
        n = count_points(E)
        assert (n % ctx.p == 1 % ctx.p) == ss, \
            f"Deuring criterion disagrees with point count at j={j}"
    return ss


@dataclass
class SupersingularReport:
    """Sorted supersingular j-invariants of F_{p^2}."""
    p: int
    ctx: FieldCtx
    js: list  # raw tuples over F_{p^2}, canonical order
    count: int

    def to_json(self) -> str:
        ctx = self.ctx
        base = make_field(self.p, 1)
        emb = field_embedding(base, ctx)
        encoded = []
        for j in self.js:
            if ctx.in_subfield(j, 1):
                encoded.append(base.format_element(emb.down(j)))
            else:
                encoded.append(ctx.format_element(j))
        return json.dumps({"p": self.p, "js": encoded, "count": self.count})


def supersingular_set(p: int, cross_check: bool = False) -> SupersingularReport:
    """All supersingular j in F_{p^2} by exhaustive Deuring scan."""
    if p < 5:
        raise SmallCharacteristic("the oracle needs characteristic >= 5")
    if p > SUPERSINGULAR_SCAN_BOUND:
        raise BoundExceeded(f"p = {p} exceeds the exhaustive scan bound")
    ctx = make_field(p, 2)
    js = [j for j in ctx.elements() if is_supersingular(ctx, j, cross_check)]
    count = len(js)
    lo, hi = p // 12, p // 12 + 2
    assert lo <= count <= hi, f"mass bound violated: {count} not in [{lo},{hi}]"
    stable = {ctx.frobenius(j, 1) for j in js}
    assert stable == set(js), "supersingular set is not Frobenius-stable"
    js.sort(key=ctx.value_key)
    return SupersingularReport(p=p, ctx=ctx, js=js, count=count)


def two_isogenous_j(ctx: FieldCtx, j):
    """The three j-invariants 2-isogenous to j, by Velu over a splitting field.

    Returns (big_ctx, multiset) where multiset is a sorted list of raw
    j-invariants over big_ctx (an extension of ctx chosen so the 2-torsion
    cubic splits).  j = 0 and j = 1728 are excluded: extra automorphisms
    distort the multiplicity bookkeeping.
    """
    _require_char(ctx)
    j = tuple(j)
    if j == ctx.zero() or j == ctx.from_int(1728):
        raise ExcludedJ("j = 0 and j = 1728 are excluded from isogeny validation")
    E = curve_from_j(ctx, j)
    cubic = UniPoly(ctx, [E.b, E.a, ctx.zero(), ctx.one()])
    big, a, b, xroots = _split_cubic(ctx, E.a, E.b, cubic)
    out = []
    for x0 in xroots:
        t = big.add(big.scalar_mul(3, big.mul(x0, x0)), a)
        w = big.mul(x0, t)
        a2 = big.sub(a, big.scalar_mul(5, t))
        b2 = big.sub(b, big.scalar_mul(7, w))
        out.append(WeierstrassCurve(big, a2, b2).j_invariant())
    out.sort(key=big.value_key)
    return big, out


def _split_cubic(ctx, a, b, cubic):
    from .correspondence import _nonlinear_factor_degrees
    rs = roots(cubic)
    mass = sum(m for _, m in rs)
    if mass == 3:
        return ctx, a, b, [r for r, m in rs for _ in range(m)]
    grow = 1
    for d in _nonlinear_factor_degrees(cubic):
        grow = grow * d // __import__("math").gcd(grow, d)
    big = make_field(ctx.p, ctx.k * grow)
    emb = field_embedding(ctx, big)
    a2, b2 = emb.apply(a), emb.apply(b)
    lifted = UniPoly(big, [b2, a2, big.zero(), big.one()])
    rs = roots(lifted)
    assert sum(m for _, m in rs) == 3, "cubic failed to split in its splitting field"
    return big, a2, b2, [r for r, m in rs for _ in range(m)]
