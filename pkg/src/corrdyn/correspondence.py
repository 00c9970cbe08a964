"""Type (d,e) correspondences on the projective line over F_q.

The curve Z is the plane model F(x,y) = 0 inside P^1 x P^1; the two projections
are the maps f (degree d = deg_y F) and g (degree e = deg_x F).  forward
realizes the multi-valued map x -> { y : F(x,y) = 0 }, backward its adjoint.

One extra point per side represents infinity; fibers over it come from the
reversed-coefficient specialization, and a degree drop in a finite fiber
contributes the point at infinity with the drop as its multiplicity.

All rational operations are relative to the coefficient field of F.  The
geometric fiber routine extends the field just enough for the fiber to split,
which is what clump closure needs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import (CtxMismatch, DegenerateComponent, NotOnCurve, ZeroPolynomial)
from .ffield import FieldCtx, make_field, parse_element
from .polyring import (BiPoly, UniPoly, bi_is_squarefree, field_embedding,
                       parse_bipoly, roots)


class PointP1:
    """A point of P^1(F_{p^k}): a field element or the symbol infinity."""

    __slots__ = ("raw",)
    _INF = None

    def __init__(self, raw):
        self.raw = raw  # tuple, or None for infinity

    @classmethod
    def infinity(cls):
        if cls._INF is None:
            cls._INF = cls(None)
        return cls._INF

    @classmethod
    def finite(cls, raw):
        return cls(tuple(raw))

    @property
    def is_infinity(self):
        return self.raw is None

    def __eq__(self, other):
        return isinstance(other, PointP1) and self.raw == other.raw

    def __hash__(self):
        return hash(self.raw)

    def __repr__(self):
        return "inf" if self.raw is None else str(self.raw)


INF = PointP1.infinity()


def point_key(ctx: FieldCtx, pt: PointP1):
    """Canonical sort key; infinity sorts last."""
    if pt.is_infinity:
        return (1, 0)
    return (0, ctx.value_key(pt.raw))


def format_point(ctx: FieldCtx, pt: PointP1) -> str:
    return "inf" if pt.is_infinity else ctx.format_element(pt.raw)


def parse_point(text: str, ctx: FieldCtx) -> PointP1:
    text = text.strip()
    if text == "inf":
        return INF
    _, raw = parse_element(text, ctx)
    return PointP1.finite(raw)


@dataclass(frozen=True)
class EdgePoint:
    """A point z of the curve: coordinates plus fiber multiplicities.

    mult_f is the multiplicity of z inside the forward fiber over z.x (the
    order of y = z.y as a root of F(z.x, y)); mult_g the analogue over z.y.
    The two need not agree at folded points of the plane model.
    """
    x: PointP1
    y: PointP1
    mult_f: int = 1
    mult_g: int = 1

    def coords(self):
        return (self.x, self.y)


class Correspondence:
    """Immutable plane-model correspondence; safe to share across threads."""

    def __init__(self, F: BiPoly, name: str = "", assert_irreducible: bool = False,
                 check: bool = True):
        if F.is_zero():
            raise ZeroPolynomial("zero polynomial does not define a curve")
        self.ctx = F.ctx
        self.F = F
        self.d = F.deg_y
        self.e = F.deg_x
        self.name = name or "anonymous"
        if check:
            if self.d < 1 or self.e < 1:
                raise DegenerateComponent(
                    f"type ({self.d},{self.e}) needs both degrees >= 1")
            cy = F.content_in("y")
            if cy.degree > 0:
                raise DegenerateComponent("vertical component: content in y "
                                          "has positive degree")
            cx = F.content_in("x")
            if cx.degree > 0:
                raise DegenerateComponent("horizontal component: content in x "
                                          "has positive degree")
        self.minimal = bi_is_squarefree(F)
        self.symmetric = self._transpose_symmetric()
        self.assert_irreducible = assert_irreducible
        if assert_irreducible:
            self._irreducibility_heuristic()

    def _transpose_symmetric(self) -> bool:
        ctx = self.ctx
        T = self.F.transpose()
        if set(T.terms) != set(self.F.terms):
            return False
        ratio = None
        for key, c in self.F.terms.items():
            r = ctx.div(T.terms[key], c)
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
        return True

    def _irreducibility_heuristic(self):
        # point counts over F_{q^m}, m = 1..3, against a one-component band
        ctx = self.ctx
        deg = max(self.d, self.e)
        for m in (1, 2, 3):
            try:
                big = make_field(ctx.p, ctx.k * m)
            except Exception:
                return
            if not big.exhaustive_ok or big.q > 1 << 14:
                return
            emb = field_embedding(ctx, big)
            lifted = lift_bipoly(self.F, big)
            n = 0
            for x0 in big.elements():
                sp, _ = lifted.specialize("x", x0)
                if sp.is_zero():
                    n += big.q
                    continue
                for _, mult in roots(sp):
                    n += 1
            band = (deg * deg + 2) * (big.q ** 0.5) + deg * deg
            if abs(n - big.q) > band:
                warnings.warn(
                    f"{self.name}: point count {n} over F_{big.q} is outside the "
                    f"single-component band around {big.q}; the curve may be "
                    "reducible", stacklevel=3)
                return

    # fibers -------------------------------------------------------------

    def _fiber_poly(self, side: str, pt: PointP1):
        # side 'f': fiber of the map to the x-line (polynomial in y)
        var = "x" if side == "f" else "y"
        if pt.is_infinity:
            return self.F.specialize_at_infinity(var)
        return self.F.specialize(var, pt.raw)

    def fiber(self, side: str, pt: PointP1):
        """Rational fiber: sorted list of (PointP1, multiplicity).

        Total multiplicity is d (resp. e) iff the specialized polynomial
        splits over the coefficient field; infinity soaks up the degree drop.
        """
        poly, drop = self._fiber_poly(side, pt)
        out = []
        if not poly.is_zero():
            for r, m in roots(poly):
                out.append((PointP1.finite(r), m))
        else:
            # identically zero specialization: a vertical/horizontal component
            # was excluded at construction, so this cannot happen
            raise DegenerateComponent("fiber polynomial vanished identically")
        if drop:
            out.append((INF, drop))
        out.sort(key=lambda t: point_key(self.ctx, t[0]))
        return out

    def forward(self, x0: PointP1):
        """Multiset of y with F(x0, y) = 0, multiplicity-counted, plus infinity."""
        return self.fiber("f", x0)

    def backward(self, y0: PointP1):
        return self.fiber("g", y0)

    def fiber_degrees(self, side: str, pt: PointP1):
        """Degrees of the irreducible factors of the fiber polynomial that have
        no rational root; empty when the fiber splits."""
        poly, _ = self._fiber_poly(side, pt)
        rational_mass = sum(m for _, m in roots(poly)) if poly.degree > 0 else 0
        if poly.degree <= 0 or rational_mass == poly.degree:
            return []
        return _nonlinear_factor_degrees(poly)

    def on_curve(self, x: PointP1, y: PointP1) -> bool:
        if x.is_infinity or y.is_infinity:
            poly, _ = self._fiber_poly("f", x)
            if y.is_infinity:
                _, drop = self._fiber_poly("f", x)
                return drop > 0
            return not any(poly.eval(y.raw))
        return not any(self.F.eval(x.raw, y.raw))

    def edge(self, x: PointP1, y: PointP1) -> EdgePoint:
        """Edge point with both fiber multiplicities; NotOnCurve if absent."""
        mf = self._mult_in_fiber("f", x, y)
        if mf == 0:
            raise NotOnCurve(f"({x},{y}) is not on {self.name}")
        mg = self._mult_in_fiber("g", y, x)
        return EdgePoint(x, y, mf, mg)

    def _mult_in_fiber(self, side, base, other):
        poly, drop = self._fiber_poly(side, base)
        if other.is_infinity:
            return drop
        if poly.is_zero():
            return 0
        F = self.ctx
        m = 0
        lin = UniPoly(F, (F.neg(other.raw), F.one()))
        g = poly
        while True:
            q, rem = g.divmod(lin)
            if not rem.is_zero():
                break
            m += 1
            g = q
            if g.degree < 0:
                break
        return m

    def etale_at(self, z: EdgePoint):
        """Raw simple-root tests: (etale over x-side, etale over y-side)."""
        mf = self._mult_in_fiber("f", z.x, z.y)
        if mf == 0:
            raise NotOnCurve(f"({z.x},{z.y}) is not on {self.name}")
        mg = self._mult_in_fiber("g", z.y, z.x)
        return (mf == 1, mg == 1)

    # orbit ----------------------------------------------------------------

    def orbit_closure(self, x0: PointP1, budget: int):
        """Least pair of sets closed under forward/backward transfer.

        Returns (x_side, y_side, bounded).  Breadth-first in canonical order;
        deterministic truncation when the budget binds.
        """
        if budget < 1:
            raise ValueError("budget must be >= 1")
        xs, ys = {x0}, set()
        queue = [("x", x0)]
        bounded = True
        while queue:
            side, pt = queue.pop(0)
            fib = self.forward(pt) if side == "x" else self.backward(pt)
            for q, _ in fib:
                tgt, tag = (ys, "y") if side == "x" else (xs, "x")
                if q not in tgt:
                    if len(xs) + len(ys) + 1 > budget:
                        bounded = False
                        continue
                    tgt.add(q)
                    queue.append((tag, q))
        return xs, ys, bounded

    def is_symmetric(self) -> bool:
        return self.symmetric

    def __repr__(self):
        return (f"Correspondence({self.name!r}, type=({self.d},{self.e}), "
                f"F_{self.ctx.p}^{self.ctx.k}, minimal={self.minimal}, "
                f"symmetric={self.symmetric})")


def _nonlinear_factor_degrees(poly: UniPoly):
    """Degrees of irreducible factors without rational roots (distinct-degree)."""
    F = poly.ctx
    f = poly.monic()
    # strip rational linear factors
    for r, m in roots(f):
        lin = UniPoly(F, (F.neg(r), F.one()))
        for _ in range(m):
            f = f // lin
    # strip repeated factors so distinct-degree decomposition applies
    d = f.derivative()
    if d.is_zero() and f.degree > 0:
        # p-th power; factor degrees of the base repeat
        return _nonlinear_factor_degrees_of_pth_root(f)
    if f.degree <= 0:
        return []
    g = f.gcd(d) if not d.is_zero() else UniPoly.const(F, F.one())
    sqf = (f // g).monic() if g.degree > 0 else f
    out = []
    x = UniPoly.x(F)
    h = x
    work = sqf
    deg = 0
    while work.degree > 0:
        deg += 1
        if work.degree < 2 * deg:
            out.append(work.degree)
            break
        h = h.pow_mod(F.q, work)
        common = work.gcd(h - x)
        if common.degree > 0:
            out.extend([deg] * (common.degree // deg))
            work = (work // common).monic()
            if work.degree > 0:
                h = h % work
    # factors hidden in the repeated part
    if g.degree > 0:
        out.extend(_nonlinear_factor_degrees(g))
    return sorted(out)


def _nonlinear_factor_degrees_of_pth_root(f: UniPoly):
    F = f.ctx
    p = F.p
    w = UniPoly(F, [F.frobenius(f.coeffs[i], F.k - 1) if F.k > 1 else f.coeffs[i]
                    for i in range(0, f.degree + 1, p)])
    return _nonlinear_factor_degrees(w)


def lift_bipoly(P: BiPoly, big: FieldCtx) -> BiPoly:
    """Re-express P over an extension of its coefficient field."""
    if P.ctx == big:
        return P
    emb = field_embedding(P.ctx, big)
    return BiPoly(big, {ij: emb.apply(c) for ij, c in P.terms.items()})


def lift_correspondence(c: Correspondence, m: int) -> Correspondence:
    """The same curve viewed over F_{q^m}."""
    if m == 1:
        return c
    big = make_field(c.ctx.p, c.ctx.k * m)
    out = Correspondence(lift_bipoly(c.F, big), name=c.name, check=False)
    return out


def geometric_fiber(c: Correspondence, side: str, pt: PointP1, growth_limit: int):
    """Fiber with full mass d (resp. e): extends the field until the fiber splits.

    Returns (corr, embed_or_None, fiber) where corr is c over the (possibly)
    extended field, embed maps old raw elements into it, and fiber is the
    rational fiber there.  growth_limit caps the total extension degree over
    the prime field; returns None in place of the fiber when the limit binds.
    """
    poly, drop = c._fiber_poly(side, pt)
    target = poly.degree + drop if not poly.is_zero() else drop
    fib = c.fiber(side, pt)
    mass = sum(m for _, m in fib)
    if mass == target:
        return c, None, fib
    degs = _nonlinear_factor_degrees(poly)
    grow = 1
    for dd in degs:
        grow = _lcm(grow, dd)
    new_k = c.ctx.k * grow
    if new_k > growth_limit:
        return c, None, None
    big = make_field(c.ctx.p, new_k)
    emb = field_embedding(c.ctx, big)
    c2 = Correspondence(lift_bipoly(c.F, big), name=c.name, check=False)
    pt2 = pt if pt.is_infinity else PointP1.finite(emb.apply(pt.raw))
    fib2 = c2.fiber(side, pt2)
    return c2, emb, fib2


def _lcm(a, b):
    from math import gcd
    return a * b // gcd(a, b)


def load(source, p: int | None = None, k: int = 1, name: str = "",
         assert_irreducible: bool = False) -> Correspondence:
    """Load a correspondence from bipoly text or a file path.

    Integer-mode tables need the target prime p (and optional extension k).
    """
    import os
    text = source
    if isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
        if not name:
            name = os.path.splitext(os.path.basename(os.fspath(source)))[0]
    ctx = make_field(p, k) if p is not None else None
    P = parse_bipoly(text, ctx)
    return Correspondence(P, name=name, assert_irreducible=assert_irreducible)
