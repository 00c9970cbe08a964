"""Univariate and bivariate polynomials over F_q.

UniPoly is a dense coefficient list of raw field tuples, normalized (no
trailing zeros); the zero polynomial has degree -1 (stand-in for -infinity).
BiPoly is a sparse dict {(i, j): coeff} with cached x/y degrees.

Root finding is exact and deterministic: exhaustive scan for small fields,
otherwise gcd with x^q - x followed by equal-degree splitting driven by the
canonical element sequence (no randomness anywhere).
"""

from __future__ import annotations

from .errors import (BoundExceeded, CtxMismatch, DivisionByZero, ParseError,
                     ZeroModulus, ZeroPolynomial)
from .ffield import FieldCtx, make_field

# fields up to this size use the exhaustive root scan by default
EXHAUSTIVE_ROOT_BOUND = 512


class UniPoly:
    """Dense univariate polynomial over a FieldCtx."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        self.ctx = ctx
        cs = [tuple(c) for c in coeffs]
        while cs and not any(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_ints(cls, ctx, ints):
        return cls(ctx, [ctx.from_int(n) for n in ints])

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, (c,))

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (ctx.zero(), ctx.one()))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _chk(self, other):
        if self.ctx != other.ctx:
            raise CtxMismatch("polynomials over different fields")

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.ctx == other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.k, self.coeffs))

    def __add__(self, other):
        self._chk(other)
        F = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        z = F.zero()
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return UniPoly(F, [F.add(x, y) for x, y in zip(a, b)])

    def __sub__(self, other):
        self._chk(other)
        F = self.ctx
        n = max(len(self.coeffs), len(other.coeffs))
        z = F.zero()
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return UniPoly(F, [F.sub(x, y) for x, y in zip(a, b)])

    def __neg__(self):
        F = self.ctx
        return UniPoly(F, [F.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._chk(other)
        F = self.ctx
        if not self.coeffs or not other.coeffs:
            return UniPoly.zero(F)
        out = [F.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if any(a):
                for j, b in enumerate(other.coeffs):
                    if any(b):
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return UniPoly(F, out)

    def scale(self, c):
        F = self.ctx
        return UniPoly(F, [F.mul(c, a) for a in self.coeffs])

    def monic(self):
        if self.is_zero():
            return self
        li = self.ctx.inv(self.lead())
        return self.scale(li)

    def divmod(self, other):
        self._chk(other)
        if other.is_zero():
            raise ZeroModulus("division by zero polynomial")
        F = self.ctx
        r = list(self.coeffs)
        d = other.degree
        if self.degree < d:
            return UniPoly.zero(F), self
        li = F.inv(other.lead())
        q = [F.zero()] * (self.degree - d + 1)
        for i in range(self.degree, d - 1, -1):
            c = r[i]
            if any(c):
                c = F.mul(c, li)
                q[i - d] = c
                for j in range(d + 1):
                    r[i - d + j] = F.sub(r[i - d + j], F.mul(c, other.coeffs[j]))
        return UniPoly(F, q), UniPoly(F, r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other):
        """Monic gcd; gcd(0, f) = monic f."""
        self._chk(other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        F = self.ctx
        return UniPoly(F, [F.scalar_mul(i, c) for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        F = self.ctx
        acc = F.zero()
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def pow_mod(self, n: int, modulus: "UniPoly") -> "UniPoly":
        if modulus.is_zero():
            raise ZeroModulus("power modulo zero")
        F = self.ctx
        acc = UniPoly.const(F, F.one())
        b = self % modulus
        while n:
            if n & 1:
                acc = (acc * b) % modulus
            n >>= 1
            if n:
                b = (b * b) % modulus
        return acc

    def shift_roots(self, c):
        """f(x + c), used by the deterministic splitting sweep."""
        F = self.ctx
        out = UniPoly.zero(F)
        xc = UniPoly(F, (c, F.one()))
        for a in reversed(self.coeffs):
            out = out * xc + UniPoly.const(F, a)
        return out

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if any(c):
                terms.append(f"{self.ctx.format_element(c)}*y^{i}")
        return "UniPoly(" + " + ".join(terms) + ")"


def uni_arith(a: UniPoly, b: UniPoly, op: str) -> UniPoly:
    if a.ctx != b.ctx:
        raise CtxMismatch("polynomials over different fields")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "mod":
        return a % b
    if op == "gcd":
        return a.gcd(b)
    raise ValueError(f"unknown op {op!r}")


# root finding ---------------------------------------------------------------

def _roots_exhaustive(f: UniPoly):
    F = f.ctx
    out = []
    for r in F.elements():
        if not any(f.eval(r)):
            m = 0
            g = f
            lin = UniPoly(F, (F.neg(r), F.one()))
            while True:
                q, rem = g.divmod(lin)
                if not rem.is_zero():
                    break
                m += 1
                g = q
                if g.is_zero():
                    break
            out.append((r, m))
    return out


def roots(f: UniPoly, method: str = "auto"):
    """All roots of f in its coefficient field, with multiplicities.

    Returns a list of (raw_element, multiplicity) sorted in canonical element
    order.  Exact: every root satisfies f(r) = 0 with the stated multiplicity
    and no root of f in the field is missed.
    """
    if f.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    F = f.ctx
    if f.degree == 0:
        return []
    if method == "auto":
        method = "exhaustive" if (F.q <= EXHAUSTIVE_ROOT_BOUND and F.exhaustive_ok) \
            else "algebraic"
    if method == "exhaustive":
        if not F.exhaustive_ok:
            raise BoundExceeded("field too large for exhaustive root scan")
        return _roots_exhaustive(f)
    if method != "algebraic":
        raise ValueError(f"unknown method {method!r}")
    return _roots_algebraic(f)


def _roots_algebraic(f: UniPoly):
    F = f.ctx
    # reduce to the squarefree linear part: gcd(x^q - x, f)
    fm = f.monic()
    xq = UniPoly.x(F).pow_mod(F.q, fm)
    lin = fm.gcd(xq - UniPoly.x(F))
    found = []
    _split_linear(lin, found)
    # multiplicities by repeated exact division
    out = []
    for r in found:
        m = 0
        g = f
        linp = UniPoly(F, (F.neg(r), F.one()))
        while True:
            q, rem = g.divmod(linp)
            if not rem.is_zero():
                break
            m += 1
            g = q
            if g.degree < 0:
                break
        out.append((r, m))
    out.sort(key=lambda t: F.value_key(t[0]))
    return out


def _split_linear(g: UniPoly, sink):
    """g = product of distinct linear factors; collect the roots."""
    F = g.ctx
    if g.degree == 0:
        return
    if g.degree == 1:
        # x + c0 (monic)
        sink.append(F.neg(g.coeffs[0]))
        return
    if F.p == 2:
        _split_linear_char2(g, sink)
        return
    # odd characteristic: (x+c)^((q-1)/2) - 1 splits the roots; sweep c in
    # canonical order; always succeeds for some c since the map r -> r+c
    # changes quadratic residuosity patterns
    e = (F.q - 1) // 2
    one = UniPoly.const(F, F.one())
    for key in range(F.q):
        c = F.element_from_key(key)
        shifted = g.shift_roots(c)
        h = UniPoly.x(F).pow_mod(e, shifted) - one
        d = shifted.gcd(h)
        if 0 < d.degree < shifted.degree:
            a = d
            b = (shifted // d).monic()
            back = F.neg(c)
            _split_linear(a.shift_roots(back), sink)
            _split_linear(b.shift_roots(back), sink)
            return
        # c = 0 special case: if x | g then 0 is a root
        if key == 0 and not any(g.coeffs[0]):
            sink.append(F.zero())
            _split_linear((g // UniPoly.x(F)).monic(), sink)
            return
    raise AssertionError("deterministic splitting sweep exhausted the field")


def _split_linear_char2(g: UniPoly, sink):
    # trace splitting: Tr(c x) = sum_{i<k} (c x)^(2^i) takes both values 0,1
    # on the roots for some c in the canonical sweep
    F = g.ctx
    if g.degree == 1:
        sink.append(F.neg(g.coeffs[0]))
        return
    for key in range(1, F.q):
        c = F.element_from_key(key)
        # T(x) = sum (c x)^(2^i) mod g
        cx = UniPoly(F, (F.zero(), c)) % g
        acc = cx
        term = cx
        for _ in range(F.k - 1):
            term = (term * term) % g
            acc = acc + term
        d = g.gcd(acc)
        if 0 < d.degree < g.degree:
            _split_linear_char2(d, sink)
            _split_linear_char2((g // d).monic(), sink)
            return
    raise AssertionError("char-2 trace splitting failed (non-squarefree input?)")


def is_squarefree(f: UniPoly) -> bool:
    """True iff gcd(f, f') is constant (and f' does not vanish)."""
    if f.is_zero():
        raise ZeroPolynomial("squarefreeness of the zero polynomial")
    if f.degree == 0:
        return True
    d = f.derivative()
    if d.is_zero():
        return False  # p-th power
    return f.gcd(d).degree == 0


def irreducible_modulus(p: int, k: int) -> UniPoly:
    """Canonical monic irreducible of degree k over F_p as a UniPoly."""
    base = make_field(p, 1)
    from .ffield import canonical_modulus
    return UniPoly.from_ints(base, canonical_modulus(p, k))


# bivariate -------------------------------------------------------------------

class BiPoly:
    """Sparse bivariate polynomial over F_q; keys (i, j) mean x^i y^j."""

    __slots__ = ("ctx", "terms", "deg_x", "deg_y")

    def __init__(self, ctx: FieldCtx, terms):
        self.ctx = ctx
        t = {}
        for (i, j), c in (terms.items() if isinstance(terms, dict) else terms):
            c = tuple(c)
            if any(c):
                if (i, j) in t:
                    raise ParseError(f"duplicate monomial ({i},{j})")
                t[(i, j)] = c
        self.terms = t
        self.deg_x = max((i for i, _ in t), default=-1)
        self.deg_y = max((j for _, j in t), default=-1)

    @classmethod
    def from_int_terms(cls, ctx, int_terms):
        return cls(ctx, {ij: ctx.from_int(c) for ij, c in int_terms.items()})

    def is_zero(self):
        return not self.terms

    def eval(self, x, y):
        F = self.ctx
        # Horner in y of Horner-in-x rows
        rows = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(j, {})[i] = c
        acc = F.zero()
        for j in range(self.deg_y, -1, -1):
            acc = F.mul(acc, y)
            row = rows.get(j)
            if row:
                racc = F.zero()
                for i in range(self.deg_x, -1, -1):
                    racc = F.mul(racc, x)
                    if i in row:
                        racc = F.add(racc, row[i])
                acc = F.add(acc, racc)
        return acc

    def specialize(self, var: str, value) -> tuple[UniPoly, int]:
        """Substitute var = value; returns (poly in the other variable, degree drop).

        The drop is deg_y - deg(result) when var = 'x' (resp. deg_x), i.e. the
        multiplicity of the point at infinity in the fiber.
        """
        F = self.ctx
        if var == "x":
            full = self.deg_y
            out = [F.zero()] * (full + 1)
            powers = _power_table(F, value, self.deg_x)
            for (i, j), c in self.terms.items():
                out[j] = F.add(out[j], F.mul(c, powers[i]))
        elif var == "y":
            full = self.deg_x
            out = [F.zero()] * (full + 1)
            powers = _power_table(F, value, self.deg_y)
            for (i, j), c in self.terms.items():
                out[i] = F.add(out[i], F.mul(c, powers[j]))
        else:
            raise ValueError("var must be 'x' or 'y'")
        poly = UniPoly(F, out)
        return poly, full - poly.degree if not poly.is_zero() else full + 1

    def specialize_at_infinity(self, var: str) -> tuple[UniPoly, int]:
        """Fiber over the point at infinity: reversal at degree deg_var."""
        F = self.ctx
        if var == "x":
            full = self.deg_y
            out = [F.zero()] * (full + 1)
            for (i, j), c in self.terms.items():
                if i == self.deg_x:
                    out[j] = F.add(out[j], c)
        elif var == "y":
            full = self.deg_x
            out = [F.zero()] * (full + 1)
            for (i, j), c in self.terms.items():
                if j == self.deg_y:
                    out[i] = F.add(out[i], c)
        else:
            raise ValueError("var must be 'x' or 'y'")
        poly = UniPoly(F, out)
        return poly, full - poly.degree if not poly.is_zero() else full + 1

    def transpose(self):
        return BiPoly(self.ctx, {(j, i): c for (i, j), c in self.terms.items()})

    def derivative(self, var: str):
        F = self.ctx
        t = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i > 0:
                t[(i - 1, j)] = F.scalar_mul(i, c)
            elif var == "y" and j > 0:
                t[(i, j - 1)] = F.scalar_mul(j, c)
        return BiPoly(self.ctx, t)

    def content_in(self, var: str) -> UniPoly:
        """gcd over F_q[other] of the coefficients of powers of var."""
        F = self.ctx
        rows: dict[int, dict[int, tuple]] = {}
        for (i, j), c in self.terms.items():
            if var == "y":
                rows.setdefault(j, {})[i] = c
            else:
                rows.setdefault(i, {})[j] = c
        g = UniPoly.zero(F)
        for row in rows.values():
            coeffs = [F.zero()] * (max(row) + 1)
            for e, c in row.items():
                coeffs[e] = c
            g = g.gcd(UniPoly(F, coeffs))
            if g.degree == 0:
                break
        return g

    def as_poly_in_y(self):
        """Coefficient list in y, entries UniPoly in x."""
        F = self.ctx
        rows: dict[int, dict[int, tuple]] = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(j, {})[i] = c
        out = []
        for j in range(self.deg_y + 1):
            row = rows.get(j, {})
            coeffs = [F.zero()] * ((max(row) + 1) if row else 0)
            for e, c in row.items():
                coeffs[e] = c
            out.append(UniPoly(F, coeffs))
        return out

    def __eq__(self, other):
        return (isinstance(other, BiPoly) and self.ctx == other.ctx
                and self.terms == other.terms)

    def __repr__(self):
        return f"BiPoly(deg_x={self.deg_x}, deg_y={self.deg_y}, {len(self.terms)} terms)"


def _power_table(F, value, n):
    powers = [F.one()]
    for _ in range(n):
        powers.append(F.mul(powers[-1], value))
    return powers


def bi_is_squarefree(Fpoly: BiPoly) -> bool:
    """Squarefreeness of F(x,y) via pseudo-remainder gcd in y (content removed)."""
    if Fpoly.is_zero():
        raise ZeroPolynomial("squarefreeness of the zero polynomial")
    dx = Fpoly.derivative("x")
    dy = Fpoly.derivative("y")
    if dx.is_zero() and dy.is_zero():
        return False  # p-th power
    # F squarefree iff gcd(F, dF/dy) and gcd(F, dF/dx) both trivial where the
    # derivative is nonzero
    for d, var in ((dy, "y"), (dx, "x")):
        if d.is_zero():
            continue
        if not _bi_gcd_trivial(Fpoly, d, var):
            return False
    return True


def _to_y_vector(P: BiPoly, var: str):
    if var == "y":
        return P.as_poly_in_y()
    return P.transpose().as_poly_in_y()


def _bi_gcd_trivial(A: BiPoly, B: BiPoly, var: str) -> bool:
    """True iff gcd of A, B as polynomials in `var` over F_q(other) is constant."""
    F = A.ctx
    a = _strip_content(_to_y_vector(A, var), F)
    b = _strip_content(_to_y_vector(B, var), F)

    def deg(v):
        return len(v) - 1

    def is_zero_vec(v):
        return not v

    while not is_zero_vec(b):
        if deg(b) == 0:
            return True
        a = _pseudo_rem(a, b, F)
        a = _strip_content(a, F)
        a, b = b, a
    return deg(a) == 0


def _strip_content(vec, F):
    # vec: list of UniPoly coefficients (in the other variable); remove
    # trailing zeros and divide out the content
    v = list(vec)
    while v and v[-1].is_zero():
        v.pop()
    if not v:
        return v
    g = UniPoly.zero(F)
    for c in v:
        g = g.gcd(c)
        if g.degree == 0:
            break
    if g.degree > 0:
        v = [c // g for c in v]
    return v


def _pseudo_rem(a, b, F):
    # pseudo-remainder of a by b, entries UniPoly over F_q[x]
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        # a = lead * a - a_lead * x^(da-db) * b
        alead = a[-1]
        a = [c * lead for c in a]
        for j in range(db + 1):
            a[da - db + j] = a[da - db + j] - alead * b[j]
        while a and a[-1].is_zero():
            a.pop()
        if not a:
            break
    return a


# field embeddings -----------------------------------------------------------

class Embedding:
    """Canonical embedding F_{p^m} -> F_{p^K} for m | K.

    The generator of the small field is sent to the smallest root (canonical
    element order) of the small field's modulus inside the big field.
    """

    __slots__ = ("src", "dst", "_rows", "_inv_map")

    def __init__(self, src: FieldCtx, dst: FieldCtx):
        if src.p != dst.p or dst.k % src.k:
            raise CtxMismatch(f"no embedding F_{src.p}^{src.k} -> F_{dst.p}^{dst.k}")
        self.src = src
        self.dst = dst
        if src.k == 1:
            rows = [dst.one()]
        else:
            lifted = UniPoly(dst, [dst.from_int(c) for c in src.modulus])
            rs = roots(lifted)
            if not rs:
                raise AssertionError("modulus must split in the extension")
            root = rs[0][0]  # canonical order is already sorted
            rows = [dst.one()]
            for _ in range(1, src.k):
                rows.append(dst.mul(rows[-1], root))
        self._rows = tuple(rows)
        self._inv_map = None

    def apply(self, a):
        dst = self.dst
        acc = dst.zero()
        for c, row in zip(a, self._rows):
            if c:
                acc = dst.add(acc, dst.scalar_mul(c, row))
        return acc

    def down(self, b):
        """Preimage in the small field; raises CtxMismatch if b is not in the image."""
        if self._inv_map is None:
            self._build_inverse()
        key = self._inv_map.get(b)
        if key is None:
            raise CtxMismatch("element not in the embedded subfield")
        return key

    def _build_inverse(self):
        if self.src.q <= 1 << 20:
            inv = {}
            for v in range(self.src.q):
                a = self.src.element_from_key(v)
                inv[self.apply(a)] = a
            self._inv_map = inv
        else:
            raise BoundExceeded("inverse embedding table too large")


_EMBED_CACHE: dict = {}


def field_embedding(src: FieldCtx, dst: FieldCtx) -> Embedding:
    key = (src.p, src.k, dst.k)
    e = _EMBED_CACHE.get(key)
    if e is None:
        e = Embedding(src, dst)
        _EMBED_CACHE[key] = e
    return e


# bipoly file format ----------------------------------------------------------

def parse_bipoly(text: str, ctx: FieldCtx | None = None) -> BiPoly:
    """Parse the plain-text BiPoly format.

    Header line: ``p k dX dY``.  A header with p = 0 marks an integer table:
    coefficients are plain (possibly negative) integers reduced into ``ctx``,
    which must then be supplied.  Otherwise coefficients are in element text
    encoding and ctx, if given, must match (p, k).
    """
    from .ffield import parse_element
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty bipoly file")
    head = lines[0].split()
    if len(head) != 4:
        raise ParseError(f"bad header {lines[0]!r}")
    try:
        p, k, dx, dy = (int(t) for t in head)
    except ValueError as exc:
        raise ParseError(f"bad header {lines[0]!r}") from exc
    integer_mode = p == 0
    if integer_mode:
        if ctx is None:
            raise ParseError("integer-mode bipoly needs a target field")
    else:
        if ctx is None:
            ctx = make_field(p, k)
        elif (ctx.p, ctx.k) != (p, k):
            raise CtxMismatch("bipoly field does not match the supplied context")
    terms = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"bad monomial line {ln!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad exponents in {ln!r}") from exc
        if (i, j) in terms:
            raise ParseError(f"duplicate monomial ({i},{j})")
        if integer_mode:
            try:
                c = ctx.from_int(int(parts[2]))
            except ValueError as exc:
                raise ParseError(f"bad integer coefficient in {ln!r}") from exc
        else:
            _, c = parse_element(parts[2], ctx)
        terms[(i, j)] = c
    P = BiPoly(ctx, terms)
    if P.deg_x > dx or P.deg_y > dy:
        raise ParseError(f"declared degrees ({dx},{dy}) below actual "
                         f"({P.deg_x},{P.deg_y})")
    return P


def format_bipoly(P: BiPoly) -> str:
    ctx = P.ctx
    out = [f"{ctx.p} {ctx.k} {P.deg_x} {P.deg_y}"]
    for (i, j) in sorted(P.terms):
        out.append(f"{i} {j} {ctx.format_element(P.terms[(i, j)])}")
    return "\n".join(out) + "\n"
