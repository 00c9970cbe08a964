"""Arithmetic in F_p and F_{p^k} with deterministic construction.

Elements of F_{p^k} are coefficient vectors of length k over Z/p, stored as
plain tuples ("raw" form).  All field operations are exposed twice: as methods
of :class:`FieldCtx` acting on raw tuples (the fast path used by the polynomial
layer) and through the :class:`FieldElement` wrapper with operator overloading.

Two contexts with equal (p, k) are interchangeable: the defining modulus is the
canonical one (lexicographically least monic irreducible, coefficients compared
low-degree-first), so encodings are reproducible across runs and machines.

Canonical element order is by integer value sum(c_i * p^i), i.e. coefficient
vectors compared most-significant-last.  ``enumerate_field`` yields elements in
this order.
"""

from __future__ import annotations

from .errors import BoundExceeded, CtxMismatch, DegreeZero, DivisionByZero, NotPrime

DEFAULT_ENUM_BOUND = 2 ** 24
_MAX_PRIME = 2 ** 31

# deterministic Miller-Rabin, exact for n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n == w:
            return True
        if n % w == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _poly_mul_mod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod(a, m, p):
    # a, m lists of ints mod p, m monic; returns a mod m
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    while len(a) > dm:
        a.pop()
    while len(a) < dm:
        a.append(0)
    return a


def _poly_gcd_is_one(a, b, p):
    # gcd over F_p; plain Euclid, degrees here are tiny
    def deg(v):
        for i in range(len(v) - 1, -1, -1):
            if v[i]:
                return i
        return -1

    def rem(u, v):
        u = list(u)
        dv = deg(v)
        inv = pow(v[dv], p - 2, p)
        for i in range(deg(u), dv - 1, -1):
            c = u[i] * inv % p
            if c:
                for j in range(dv + 1):
                    u[i - dv + j] = (u[i - dv + j] - c * v[j]) % p
        return u

    u, v = list(a), list(b)
    while deg(v) >= 0:
        u, v = v, rem(u, v)
    return deg(u) == 0


def _is_irreducible(m, p, k):
    # m: monic coefficient list of length k+1 over F_p.
    # f irreducible iff x^(p^k) = x mod f and gcd(x^(p^(k/t)) - x, f) = 1
    # for every prime t | k; checking all i <= k/2 is the spec's certificate.
    if k == 1:
        return True

    def powx(e):
        # x^(p^e) mod m by square-and-multiply on the exponent p^e
        result = [0, 1] + [0] * (k - 2)  # x
        exp = p ** e
        base = result
        # binary powering of polynomial x to exponent exp modulo m
        acc = [1] + [0] * (k - 1)
        b = list(base)
        while exp:
            if exp & 1:
                acc = _poly_mod(_poly_mul_mod_p(acc, b, p), m, p)
            exp >>= 1
            if exp:
                b = _poly_mod(_poly_mul_mod_p(b, b, p), m, p)
        return acc

    for i in range(1, k // 2 + 1):
        t = powx(i)
        t[1] = (t[1] - 1) % p  # x^(p^i) - x
        if not _poly_gcd_is_one(m, t, p):
            return False
    t = powx(k)
    t[1] = (t[1] - 1) % p
    return not any(t)


def canonical_modulus(p: int, k: int):
    """Lexicographically least monic irreducible of degree k over F_p.

    Coefficient tuples (c0, ..., c_{k-1}) are compared low-degree-first.
    Degree 1 yields x (prime-field convention).
    """
    if k == 1:
        return (0, 1)
    # odometer with c0 most significant; c0 = 0 means x | f, so start at c0 = 1
    coeffs = [1] + [0] * (k - 1)
    while True:
        m = list(coeffs) + [1]
        if _is_irreducible(m, p, k):
            return tuple(m)
        i = k - 1
        while i >= 0:
            coeffs[i] += 1
            if coeffs[i] < p:
                break
            coeffs[i] = 0
            i -= 1
        if i < 0:
            raise AssertionError("no irreducible found (impossible)")


class FieldCtx:
    """Immutable context for F_{p^k}; safe to share across threads."""

    __slots__ = ("p", "k", "q", "modulus", "enum_bound", "exhaustive_ok",
                 "_redtab", "_frob_rows", "_zero", "_one")

    _cache: dict = {}

    def __new__(cls, p, k, enum_bound=DEFAULT_ENUM_BOUND):
        key = (p, k, enum_bound)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p >= _MAX_PRIME:
            raise BoundExceeded(f"p must be < 2^31, got {p}")
        if k < 1:
            raise DegreeZero(f"extension degree must be >= 1, got {k}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = canonical_modulus(p, k)
        self.enum_bound = enum_bound
        self.exhaustive_ok = self.q <= enum_bound
        self._zero = (0,) * k
        self._one = (1,) + (0,) * (k - 1)
        # reduction table: t^(k+i) mod modulus for i in 0..k-2
        red = []
        if k > 1:
            cur = [(-c) % p for c in self.modulus[:k]]  # t^k
            red.append(tuple(cur))
            for _ in range(k - 2):
                cur = [0] + cur
                hi = cur.pop()
                if hi:
                    cur = [(cur[j] - hi * self.modulus[j]) % p for j in range(k)]
                red.append(tuple(cur))
        self._redtab = tuple(red)
        self._frob_rows = None
        cls._cache[key] = self
        return self

    # raw-tuple arithmetic -------------------------------------------------

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def from_int(self, n: int):
        """Integer reduced into the prime subfield."""
        return (n % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % p for c in conv[:k]]
        for i in range(k, 2 * k - 1):
            c = conv[i] % p
            if c:
                row = self._redtab[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out)

    def scalar_mul(self, c: int, a):
        p = self.p
        c %= p
        return tuple(x * c % p for x in a)

    def reduce_coeffs(self, seq):
        """Reduce a t-coefficient list of length <= 2k-1 to a raw tuple."""
        p, k = self.p, self.k
        out = [c % p for c in seq[:k]] + [0] * max(0, k - len(seq))
        for i in range(k, len(seq)):
            c = seq[i] % p
            if c:
                row = self._redtab[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out)

    def inv(self, a):
        if not any(a):
            raise DivisionByZero("inverse of zero")
        p, k = self.p, self.k
        if k == 1:
            return (pow(a[0], p - 2, p),)
        # extended Euclid in F_p[t] against the modulus
        r0, r1 = list(self.modulus), list(a) + [0]
        s0, s1 = [0] * (k + 1), [1] + [0] * k

        def deg(v):
            for i in range(len(v) - 1, -1, -1):
                if v[i]:
                    return i
            return -1

        while True:
            d1 = deg(r1)
            if d1 <= 0:
                break
            d0 = deg(r0)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            c = r0[d0] * pow(r1[d1], p - 2, p) % p
            sh = d0 - d1
            for j in range(d1 + 1):
                r0[j + sh] = (r0[j + sh] - c * r1[j]) % p
            for j in range(k + 1 - sh):
                s0[j + sh] = (s0[j + sh] - c * s1[j]) % p
        c = r1[0]
        if c == 0:
            raise DivisionByZero("element not invertible (modulus not irreducible?)")
        ci = pow(c, p - 2, p)
        return tuple(s1[j] * ci % p for j in range(k))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        acc = self._one
        b = a
        while n:
            if n & 1:
                acc = self.mul(acc, b)
            n >>= 1
            if n:
                b = self.mul(b, b)
        return acc

    def frobenius(self, a, i: int = 1):
        """a^(p^i); linear over F_p, computed from a cached matrix."""
        i %= self.k
        if i == 0 or not any(a):
            return tuple(a)
        if self._frob_rows is None:
            # rows[j] = (t^j)^p as a raw tuple
            if self.k > 1:
                tp = self.pow((0, 1) + (0,) * (self.k - 2), self.p)
            else:
                tp = self._one
            rows = [self._one]
            cur = self._one
            for _ in range(1, self.k):
                cur = self.mul(cur, tp)
                rows.append(cur)
            self._frob_rows = tuple(rows)
        out = a
        for _ in range(i):
            acc = self._zero
            for j, c in enumerate(out):
                if c:
                    acc = self.add(acc, self.scalar_mul(c, self._frob_rows[j]))
            out = acc
        return out

    def in_subfield(self, a, m: int) -> bool:
        """True iff a lies in F_{p^m} (requires m | k)."""
        if self.k % m:
            return False
        return self.frobenius(a, m) == tuple(a)

    def value_key(self, a) -> int:
        """Canonical order key: integer value with c0 least significant."""
        v = 0
        for c in reversed(a):
            v = v * self.p + c
        return v

    def element_from_key(self, v: int):
        out = []
        for _ in range(self.k):
            out.append(v % self.p)
            v //= self.p
        return tuple(out)

    def elements(self):
        """All p^k elements in canonical order."""
        if not self.exhaustive_ok:
            raise BoundExceeded(
                f"field of size {self.q} exceeds enumeration bound {self.enum_bound}")
        for v in range(self.q):
            yield self.element_from_key(v)

    # encoding -------------------------------------------------------------

    def format_element(self, a) -> str:
        if self.k == 1:
            return f"{a[0]}@{self.p}"
        return "[" + ",".join(str(c) for c in a) + f"]@{self.p}^{self.k}"

    def __repr__(self):
        return f"FieldCtx(p={self.p}, k={self.k})"

    def __eq__(self, other):
        return self is other or (isinstance(other, FieldCtx)
                                 and self.p == other.p and self.k == other.k)

    def __hash__(self):
        return hash((self.p, self.k))


def make_field(p: int, k: int, enum_bound: int = DEFAULT_ENUM_BOUND) -> FieldCtx:
    """Construct F_{p^k} with the canonical modulus; deterministic across runs."""
    return FieldCtx(p, k, enum_bound)


def parse_element(text: str, ctx: FieldCtx | None = None):
    """Inverse of FieldCtx.format_element.

    Returns (ctx, raw).  If ctx is given the encoding must match its (p, k).
    """
    from .errors import ParseError
    text = text.strip()
    if "@" not in text:
        raise ParseError(f"missing '@' in element {text!r}")
    left, right = text.rsplit("@", 1)
    try:
        if "^" in right:
            ps, ks = right.split("^", 1)
            p, k = int(ps), int(ks)
        else:
            p, k = int(right), 1
        if left.startswith("["):
            if not left.endswith("]"):
                raise ValueError
            coeffs = [int(c) for c in left[1:-1].split(",")] if left != "[]" else []
        else:
            coeffs = [int(left)]
    except ValueError as exc:
        raise ParseError(f"bad element encoding {text!r}") from exc
    if ctx is None:
        ctx = make_field(p, k)
    elif (ctx.p, ctx.k) != (p, k):
        raise CtxMismatch(f"element {text!r} not in F_{ctx.p}^{ctx.k}")
    if len(coeffs) > ctx.k:
        raise ParseError(f"too many coefficients in {text!r}")
    coeffs = coeffs + [0] * (ctx.k - len(coeffs))
    return ctx, tuple(c % ctx.p for c in coeffs)


class FieldElement:
    """Element wrapper with operator overloading; values are immutable."""

    __slots__ = ("ctx", "raw")

    def __init__(self, ctx: FieldCtx, raw):
        if len(raw) > ctx.k:
            raise CtxMismatch(f"coefficient vector longer than k={ctx.k}")
        self.ctx = ctx
        raw = tuple(c % ctx.p for c in raw)
        if len(raw) < ctx.k:
            raw = raw + (0,) * (ctx.k - len(raw))
        self.raw = raw

    @classmethod
    def from_int(cls, ctx, n):
        return cls(ctx, ctx.from_int(n))

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise CtxMismatch("elements from different fields")
            return other.raw
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add(self.raw, r))

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub(self.raw, r))

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub(r, self.raw))

    def __mul__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul(self.raw, r))

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.div(self.raw, r))

    def __rtruediv__(self, other):
        r = self._coerce(other)
        if r is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.div(r, self.raw))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.raw))

    def __pow__(self, n):
        return FieldElement(self.ctx, self.ctx.pow(self.raw, n))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.raw))

    def frobenius(self, i=1):
        return FieldElement(self.ctx, self.ctx.frobenius(self.raw, i))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.k, self.raw))

    def __bool__(self):
        return any(self.raw)

    def __lt__(self, other):
        r = self._coerce(other)
        return self.ctx.value_key(self.raw) < self.ctx.value_key(r)

    def __repr__(self):
        return self.ctx.format_element(self.raw)


def arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatcher form of the four field operations."""
    if a.ctx != b.ctx:
        raise CtxMismatch("elements from different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def frobenius(a: FieldElement, i: int = 1) -> FieldElement:
    return a.frobenius(i)


def enumerate_field(ctx: FieldCtx):
    """All elements of the field as FieldElement, canonical order."""
    for raw in ctx.elements():
        yield FieldElement(ctx, raw)
