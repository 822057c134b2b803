"""Exact scalar arithmetic for the verification engine.

Every coefficient in the engine is a rational function, over the rationals,
in q^(1/4) and the fourth roots of a finite set of multiplicative parameters
(a0..a5 in the Painleve system, central-charge exponentials gamma in the
lattice systems).  Internally each declared symbol s is tracked through the
exponent of s^(1/4), so quarter-integer powers of s are plain integers.

Representation: a unit (rational coefficient times a Laurent monomial, all
parameters being invertible) times a product of primitive polynomial
factors over a product of primitive factors.  Sums expand, then cancel by
exact trial division against the denominator factors; products and
inverses just merge factor lists.  The birational maps verified by this
package are subtraction-free compositions of small affine factors, so this
partially factored form stays small where a generic expanded form blows up.
"""

from __future__ import annotations

import random
from fractions import Fraction

QUARTER = Fraction(1, 4)

#: adjacency of the D5^(1) diagram: 0-2, 1-2, 2-3, 3-4, 3-5
D5_EDGES = ((0, 2), (1, 2), (2, 3), (3, 4), (3, 5))

PAINLEVE_NAMES = ("q", "a0", "a1", "a2", "a3", "a4", "a5")

_ZERO = Fraction(0)
_ONE = Fraction(1)


def d5_cartan() -> tuple[tuple[int, ...], ...]:
    """6x6 Cartan matrix of type D5^(1)."""
    c = [[0] * 6 for _ in range(6)]
    for i in range(6):
        c[i][i] = 2
    for i, j in D5_EDGES:
        c[i][j] = -1
        c[j][i] = -1
    return tuple(tuple(row) for row in c)


# ----------------------------------------------------------------------
# sparse polynomial helpers: dict[exponent tuple -> Fraction]
# ----------------------------------------------------------------------


def _p_add(a: dict, b: dict) -> dict:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _p_mul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            c = ca * cb
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out


def _p_scale(a: dict, c: Fraction, shift=None) -> dict:
    if not c:
        return {}
    if shift is None or not any(shift):
        return {k: v * c for k, v in a.items()} if c != 1 else dict(a)
    return {tuple(x + y for x, y in zip(k, shift)): v * c for k, v in a.items()}


def _p_normalize(p: dict, nvars: int):
    """Split p into (content coeff, content key, primitive factor key).

    The primitive part has per-variable minimum exponent 0 and leading
    (lex-greatest) coefficient 1; it is returned as a hashable sorted
    tuple of (exponent, coeff) items.  Zero maps to (0, 0-key, ()).
    """
    if not p:
        return _ZERO, (0,) * nvars, ()
    mins = None
    for k in p:
        if mins is None:
            mins = list(k)
        else:
            for i, v in enumerate(k):
                if v < mins[i]:
                    mins[i] = v
    lead = max(p)
    c = p[lead]
    key = tuple(mins)
    if any(key) or c != 1:
        ci = 1 / c
        prim = tuple(sorted((tuple(x - m for x, m in zip(k, mins)), v * ci) for k, v in p.items()))
    else:
        prim = tuple(sorted(p.items()))
    if len(prim) == 1 and not any(prim[0][0]):
        prim = ()  # pure monomial: all content
    return c, key, prim


def _p_divexact(p: dict, f: dict, max_terms: int = None):
    """Exact quotient p/f in the ordinary polynomial ring, or None.

    Both arguments must have nonnegative exponents (primitive factors do).
    ``max_terms`` bails out of pathological partial divisions (a binomial
    with a large exponent gap can "divide" for billions of steps); a miss
    only forgoes a simplification.
    """
    if not f:
        raise ZeroDivisionError
    if not p:
        return {}
    if max_terms is None:
        max_terms = 4 * len(p) + 64
    fl = max(f)
    fc = f[fl]
    r = dict(p)
    q = {}
    while r:
        rl = max(r)
        kq = tuple(a - b for a, b in zip(rl, fl))
        if any(x < 0 for x in kq):
            return None
        if len(q) >= max_terms:
            return None
        cq = r[rl] / fc
        q[kq] = cq
        for kf, cf in f.items():
            k = tuple(a + b for a, b in zip(kq, kf))
            s = r.get(k)
            s = -cq * cf if s is None else s - cq * cf
            if s:
                r[k] = s
            else:
                r.pop(k, None)
    return q


def _expand(factors) -> dict:
    """Multiply out a factor list [(prim_key, mult), ...]."""
    out = None
    for prim, mult in factors:
        f = dict(prim)
        for _ in range(mult):
            out = dict(f) if out is None else _p_mul(out, f)
    return out if out is not None else None


def _rational_root(r: Fraction, d: int):
    """Exact d-th root of a positive rational, or None."""
    def iroot(x: int) -> int | None:
        if x == 0:
            return 0
        lo = round(x ** (1.0 / d))
        for c in (lo - 1, lo, lo + 1):
            if c > 0 and c ** d == x:
                return c
        return None

    if r <= 0:
        return None
    n = iroot(r.numerator)
    m = iroot(r.denominator)
    if n is None or m is None:
        return None
    return Fraction(n, m)


def _binomial_divides(p: dict, w: tuple, rho: Fraction) -> bool:
    """Exact divisibility test of p by the binomial X^w - rho * X^0.

    p is divisible iff it vanishes under X^w -> rho: bucket the support by
    residue classes modulo Zw and sum rho-weighted coefficients.  O(|p|).
    """
    i0 = next(i for i, x in enumerate(w) if x)
    w0 = w[i0]
    classes = {}
    for k, c in p.items():
        j = k[i0] // w0 if w0 > 0 else -((-k[i0]) // (-w0))
        r = tuple(a - j * b for a, b in zip(k, w))
        acc = classes.get(r)
        v = c * rho ** j
        classes[r] = v if acc is None else acc + v
    return all(not v for v in classes.values())


def _binomial_gcd(cur: dict, f: dict):
    """gcd(cur, f) for a primitive two-term f, as a product of binomials.

    The irreducible factors of c1*X^k1 + c2*X^k2 over the rationals with
    all symbols invertible are binomials X^(w/d) - rho with rho^d = -c2/c1;
    each candidate is divisibility-tested in O(|cur|), then divided out.
    """
    import math
    (k2, c2), (k1, c1) = sorted(f.items())
    w = tuple(a - b for a, b in zip(k1, k2))
    g0 = 0
    for x in w:
        g0 = math.gcd(g0, abs(x))
    ratio = -c2 / c1
    out = None
    # only small root orders occur (quarter-exponent lattice)
    for d in range(1, min(g0, 8) + 1):
        if g0 % d:
            continue
        wd = tuple(x // d for x in w)
        roots = []
        if d % 2:
            r = _rational_root(abs(ratio), d)
            if r is not None:
                roots.append(r if ratio > 0 else -r)
        else:
            r = _rational_root(ratio, d) if ratio > 0 else None
            if r is not None:
                roots.extend((r, -r))
        for rho in roots:
            if not _binomial_divides(cur, wd, rho):
                continue
            wp = tuple(max(x, 0) for x in wd)
            wm = tuple(max(-x, 0) for x in wd)
            if wp == wm:
                continue
            cand = {wp: _ONE, wm: -rho}
            q = _p_divexact(cur, cand, max_terms=8 * len(cur) + 64)
            if q is not None:
                qf = _p_divexact(f, cand)
                if qf is not None:
                    cur = q
                    f = qf
                    out = cand if out is None else _p_mul(out, cand)
                    if len(f) < 2:
                        return out
    return out


def _uni_gcd(u: dict, v: dict) -> dict:
    """Monic gcd of univariate Fraction-coefficient polys {deg: coeff}."""
    while v:
        # u mod v
        dv = max(v)
        lv = v[dv]
        r = dict(u)
        while r and max(r) >= dv:
            dr = max(r)
            c = r[dr] / lv
            for k, cv in v.items():
                kk = k + dr - dv
                s = r.get(kk)
                s = -c * cv if s is None else s - c * cv
                if s:
                    r[kk] = s
                else:
                    r.pop(kk, None)
        u, v = v, r
    d = max(u)
    lu = u[d]
    if lu != 1:
        u = {k: c / lu for k, c in u.items()}
    return u


def _classes_along(p: dict, w: tuple):
    """Bucket p's support along the lattice direction w.

    Returns {representative: {j: coeff}} with p = sum_r X^r * P_r(X^w),
    every class polynomial shifted to start at j = 0.
    """
    i0 = next(i for i, x in enumerate(w) if x)
    w0 = w[i0]
    classes = {}
    for k, c in p.items():
        j = k[i0] // w0 if w0 > 0 else -((-k[i0]) // (-w0))
        r = tuple(a - j * b for a, b in zip(k, w))
        classes.setdefault(r, {})[j] = c
    out = {}
    for r, cl in classes.items():
        j0 = min(cl)
        if j0:
            rep = tuple(a + j0 * b for a, b in zip(r, w))
            out[rep] = {j - j0: c for j, c in cl.items()}
        else:
            out[r] = cl
    return out


def _directional_gcd(a: dict, b: dict):
    """Common factor of the shape g(X^w) along a Newton-polytope edge.

    Any factor shared by a and b has edge directions among a's edge
    directions; for each candidate direction w the X^w-content of a
    polynomial is the univariate gcd of its class polynomials.  Returns a
    verified common factor or None.
    """
    import math
    kmax = max(a)
    seen = set()
    keys = sorted(a, reverse=True)[1:6]
    for k in keys:
        w = tuple(x - y for x, y in zip(kmax, k))
        g0 = 0
        for x in w:
            g0 = math.gcd(g0, abs(x))
        if not g0:
            continue
        for d in range(1, min(g0, 8) + 1):
            if g0 % d:
                continue
            w0 = tuple(x * d // g0 for x in w)
            if w0 in seen:
                continue
            seen.add(w0)
            ca = _classes_along(a, w0)
            g = None
            for cl in ca.values():
                g = cl if g is None else _uni_gcd(g, cl)
                if max(g) == 0:
                    break
            if g is None or max(g) == 0:
                continue
            for cl in _classes_along(b, w0).values():
                g = _uni_gcd(g, cl)
                if max(g) == 0:
                    break
            if max(g) == 0:
                continue
            # expand g(X^w0) into a multivariate factor with nonneg keys
            neg = tuple(max(-x, 0) for x in w0)
            out = {}
            for j, c in g.items():
                key = tuple(j * x + max(g) * nx for x, nx in zip(w0, neg))
                out[key] = c
            if _p_divexact(a, out) is not None and _p_divexact(b, out) is not None:
                return out
    return None


_RING_CACHE = {}


def _sym_ring(nvars: int):
    ring = _RING_CACHE.get(nvars)
    if ring is None:
        from sympy import QQ
        from sympy.polys.rings import ring as make_ring
        ring = make_ring(",".join(f"x{i}" for i in range(nvars)), QQ)[0]
        _RING_CACHE[nvars] = ring
    return ring


def _sympy_gcd(a: dict, b: dict):
    from sympy import QQ
    n = len(next(iter(a)))
    R = _sym_ring(n)
    pa = R.from_dict({k: QQ(c.numerator, c.denominator) for k, c in a.items()})
    pb = R.from_dict({k: QQ(c.numerator, c.denominator) for k, c in b.items()})
    g = pa.gcd(pb)
    terms = list(g.terms())
    if len(terms) == 1 and not any(terms[0][0]):
        return None
    return {k: Fraction(int(c.numerator), int(c.denominator)) for k, c in terms}


def _p_gcd(a: dict, b: dict):
    """gcd of two primitive polynomials; returns None when trivial/unfound.

    Binomials are peeled directly (cheap and exhaustive for unit-coefficient
    lattices); the general case goes to a sparse polynomial-ring gcd.  A
    size cap keeps degenerate inputs from stalling; a miss only forgoes a
    simplification, never correctness.
    """
    if not a or not b:
        return None
    if a == b:
        return dict(a)
    if len(b) == 2:
        return _binomial_gcd(a, b)
    if len(a) == 2:
        return _binomial_gcd(b, a)
    if max(len(a), len(b)) > 900:
        return None
    g = _directional_gcd(a, b) if len(a) <= len(b) else _directional_gcd(b, a)
    if g is not None:
        return g
    if max(len(a), len(b)) > 260:
        return None
    return _sympy_gcd(a, b)


class ParamSystem:
    """A fixed, duplicate-free list of multiplicative parameter symbols.

    The symbol 'q' is always present.  Exponent denominator is fixed at 4:
    internal exponents count powers of s^(1/4).
    """

    def __init__(self, names):
        names = tuple(names)
        if "q" not in names:
            raise ValueError("parameter system must contain q")
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter symbols")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.zero_key = (0,) * self.nvars
        self._one = CoeffElement(self, _ONE, self.zero_key, (), ())
        self._zero = CoeffElement(self, _ZERO, self.zero_key, (), ())
        self._qcache = {}

    def __repr__(self):
        return f"ParamSystem({', '.join(self.names)})"

    def __eq__(self, other):
        return isinstance(other, ParamSystem) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    # -- constructors -------------------------------------------------

    def coeff(self, value) -> "CoeffElement":
        v = Fraction(value)
        if not v:
            return self._zero
        return CoeffElement(self, v, self.zero_key, (), ())

    @property
    def one(self) -> "CoeffElement":
        return self._one

    @property
    def zero(self) -> "CoeffElement":
        return self._zero

    def monomial(self, exps: dict, coeff=1) -> "CoeffElement":
        """Monomial coeff * prod s^e[s] with quarter-integer exponents e."""
        vec = [0] * self.nvars
        for name, e in exps.items():
            k = Fraction(e) * 4
            if k.denominator != 1:
                raise ValueError(f"exponent {e} of {name} outside (1/4)Z")
            vec[self.index[name]] += int(k)
        c = Fraction(coeff)
        if not c:
            return self._zero
        return CoeffElement(self, c, tuple(vec), (), ())

    def sym(self, name) -> "CoeffElement":
        return self.monomial({name: 1})

    def q_pow(self, e) -> "CoeffElement":
        e = Fraction(e)
        out = self._qcache.get(e)
        if out is None:
            out = self.monomial({"q": e})
            self._qcache[e] = out
        return out

    def from_num_den(self, num: dict, den: dict) -> "CoeffElement":
        """Build from explicit Laurent numerator/denominator dicts."""
        if not den:
            raise ZeroDivisionError("zero denominator in CoeffElement")
        nc, nk, nprim = _p_normalize(num, self.nvars)
        if not nc:
            return self._zero
        dc, dk, dprim = _p_normalize(den, self.nvars)
        uc = nc / dc
        uk = tuple(a - b for a, b in zip(nk, dk))
        if nprim and dprim:
            if nprim == dprim:
                return CoeffElement(self, uc, uk, (), ())
            q = _p_divexact(dict(nprim), dict(dprim))
            if q is not None:
                qc, qk, qprim = _p_normalize(q, self.nvars)
                return CoeffElement(self, uc * qc, tuple(a + b for a, b in zip(uk, qk)),
                                    ((qprim, 1),) if qprim else (), ())
            g = _p_gcd(dict(nprim), dict(dprim))
            if g is not None:
                nq = _p_divexact(dict(nprim), g)
                dq = _p_divexact(dict(dprim), g)
                nc2, nk2, nprim = _p_normalize(nq, self.nvars)
                dc2, dk2, dprim = _p_normalize(dq, self.nvars)
                uc *= nc2 / dc2
                uk = tuple(a + b - c for a, b, c in zip(uk, nk2, dk2))
        nf = ((nprim, 1),) if nprim else ()
        df = ((dprim, 1),) if dprim else ()
        return CoeffElement(self, uc, uk, nf, df)


def _merge_factors(fa, fb) -> tuple:
    if not fa:
        return tuple(fb)
    if not fb:
        return tuple(fa)
    out = dict(fa)
    for prim, m in fb:
        out[prim] = out.get(prim, 0) + m
    return tuple((p, m) for p, m in out.items() if m)


def _cancel_factorlists(nf, df):
    """Cancel identical primitive factors between numerator and denominator."""
    if not nf or not df:
        return tuple(nf), tuple(df)
    dd = dict(df)
    nn = []
    for prim, m in nf:
        dm = dd.get(prim)
        if dm:
            k = min(m, dm)
            m -= k
            dd[prim] = dm - k
        if m:
            nn.append((prim, m))
    return tuple(nn), tuple((p, m) for p, m in dd.items() if m)


class CoeffElement:
    """Exact rational function in the system parameters (immutable).

    unit coefficient * unit monomial * prod(num factors) / prod(den factors);
    factors are primitive polynomials, multiplicities positive.
    """

    __slots__ = ("system", "uc", "uk", "nf", "df")

    def __init__(self, system: ParamSystem, uc: Fraction, uk: tuple, nf, df):
        self.system = system
        self.uc = uc
        self.uk = uk
        self.nf = tuple(nf)
        self.df = tuple(df)

    # -- basic protocol -----------------------------------------------

    def __bool__(self):
        return bool(self.uc)

    def as_num_den(self) -> tuple[dict, dict]:
        """Expanded Laurent (numerator, denominator) pair."""
        num = _expand(self.nf)
        num = {self.uk: self.uc} if num is None else _p_scale(num, self.uc, self.uk)
        den = _expand(self.df)
        den = {self.system.zero_key: _ONE} if den is None else den
        return num, den

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.system.coeff(other)
        if not isinstance(other, CoeffElement):
            return NotImplemented
        if self.system is not other.system and self.system != other.system:
            return False
        if not self.uc or not other.uc:
            return self.uc == other.uc
        if self.uc == other.uc and self.uk == other.uk and \
                sorted(self.nf) == sorted(other.nf) and sorted(self.df) == sorted(other.df):
            return True
        n1, d1 = self.as_num_den()
        n2, d2 = other.as_num_den()
        return _p_mul(n1, d2) == _p_mul(n2, d1)

    __hash__ = None

    def __repr__(self):
        def mono(k):
            return "*".join(f"{n}^({Fraction(e, 4)})" for n, e in zip(self.system.names, k) if e)

        def poly(p):
            return " + ".join(f"{c}*{mono(k)}" if any(k) else f"{c}" for k, c in sorted(p.items()))

        if not self.uc:
            return "0"
        bits = [str(self.uc)]
        if any(self.uk):
            bits.append(mono(self.uk))
        for prim, m in self.nf:
            bits.append(f"({poly(dict(prim))})^{m}")
        s = "*".join(bits)
        if self.df:
            s += " / " + "*".join(f"({poly(dict(prim))})^{m}" for prim, m in self.df)
        return s

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CoeffElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.system.coeff(other)
        return None

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        uc = self.uc * o.uc
        if not uc:
            return self.system.zero
        uk = tuple(a + b for a, b in zip(self.uk, o.uk))
        nf = _merge_factors(self.nf, o.nf)
        df = _merge_factors(self.df, o.df)
        nf, df = _cancel_factorlists(nf, df)
        return CoeffElement(self.system, uc, uk, nf, df)

    __rmul__ = __mul__

    def inv(self) -> "CoeffElement":
        if not self.uc:
            raise ZeroDivisionError("inverting zero CoeffElement")
        return CoeffElement(self.system, 1 / self.uc, tuple(-x for x in self.uk), self.df, self.nf)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __neg__(self):
        return CoeffElement(self.system, -self.uc, self.uk, self.nf, self.df)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.uc:
            return self
        if not self.uc:
            return o
        sysm = self.system
        # shared denominator factors divide only once
        da = dict(self.df)
        g = {}
        db = {}
        for prim, m in o.df:
            common = min(m, da.get(prim, 0))
            if common:
                g[prim] = common
                da[prim] = da.get(prim, 0) - common
                if m - common:
                    db[prim] = m - common
            else:
                db[prim] = m
        da = {p: m for p, m in da.items() if m}
        # numerators over the common denominator
        left = _merge_factors(self.nf, tuple(db.items()))
        right = _merge_factors(o.nf, tuple(da.items()))
        pa = _expand(left)
        pa = {self.uk: self.uc} if pa is None else _p_scale(pa, self.uc, self.uk)
        pb = _expand(right)
        pb = {o.uk: o.uc} if pb is None else _p_scale(pb, o.uc, o.uk)
        num = _p_add(pa, pb)
        if not num:
            return sysm.zero
        den_factors = _merge_factors(tuple(g.items()), _merge_factors(tuple(da.items()), tuple(db.items())))
        uc, uk, nprim = _p_normalize(num, sysm.nvars)
        nf = []
        if nprim:
            # cancel the fresh numerator against the denominator factors:
            # whole-factor trial division first, then partial gcds
            cur = dict(nprim)
            work = list(den_factors)
            new_den = []
            while work:
                prim, m = work.pop()
                f = dict(prim)
                while m and cur:
                    q = _p_divexact(cur, f)
                    if q is None:
                        break
                    qc, qk, qprim = _p_normalize(q, sysm.nvars)
                    uc *= qc
                    uk = tuple(a + b for a, b in zip(uk, qk))
                    cur = dict(qprim)
                    m -= 1
                if m and cur:
                    g = _p_gcd(cur, f)
                    if g is not None:
                        quo = _p_divexact(cur, g)
                        fq = _p_divexact(f, g)
                        cc, ck, cprim = _p_normalize(quo, sysm.nvars)
                        uc *= cc
                        uk = tuple(a + b for a, b in zip(uk, ck))
                        cur = dict(cprim)
                        qc2, qk2, qprim2 = _p_normalize(fq, sysm.nvars)
                        uc /= qc2
                        uk = tuple(a - b for a, b in zip(uk, qk2))
                        if qprim2:
                            work.append((qprim2, 1))
                        if m > 1:
                            work.append((prim, m - 1))
                        continue
                if m:
                    new_den.append((prim, m))
            den_factors = tuple(new_den)
            if cur:
                nf.append((tuple(sorted(cur.items())), 1))
        return CoeffElement(sysm, uc, uk, tuple(nf), den_factors)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __pow__(self, n: int):
        if n == 0:
            return self.system.one
        if n < 0:
            return self.inv() ** (-n)
        uc = self.uc ** n
        uk = tuple(x * n for x in self.uk)
        nf = tuple((p, m * n) for p, m in self.nf)
        df = tuple((p, m * n) for p, m in self.df)
        return CoeffElement(self.system, uc, uk, nf, df)

    # -- structure ----------------------------------------------------

    def is_monomial(self) -> bool:
        return bool(self.uc) and not self.nf and not self.df

    def monomial_parts(self) -> tuple[Fraction, dict[str, Fraction]]:
        """Decompose a monomial into (rational coefficient, exponent map)."""
        if not self.is_monomial():
            raise ValueError("not a monomial")
        exps = {}
        for name, i in self.system.index.items():
            if self.uk[i]:
                exps[name] = Fraction(self.uk[i], 4)
        return self.uc, exps

    # -- substitution endomorphisms -------------------------------------

    def subs_monomials(self, images: dict) -> "CoeffElement":
        """Apply the endomorphism sending each symbol s to a monomial.

        ``images[s] = (coeff, exps)`` with exps a {symbol: Fraction} map at
        symbol level; unlisted symbols are fixed.  Monomial images map
        terms to terms, so the factored shape is preserved.
        """
        sysm = self.system
        if not self.uc:
            return self
        n = sysm.nvars
        rows = []
        coeffs = []
        nontrivial = False
        for i, name in enumerate(sysm.names):
            if name in images:
                c, exps = images[name]
                row = [Fraction(0)] * n
                for nm, e in exps.items():
                    row[sysm.index[nm]] += Fraction(e)
                rows.append(row)
                coeffs.append(Fraction(c))
                nontrivial = True
            else:
                row = [Fraction(0)] * n
                row[i] = _ONE
                rows.append(row)
                coeffs.append(_ONE)
        if not nontrivial:
            return self

        def map_key(vec, coeff):
            new = [Fraction(0)] * n
            for i, e in enumerate(vec):
                if not e:
                    continue
                row = rows[i]
                for j in range(n):
                    if row[j]:
                        new[j] += row[j] * e
                if coeffs[i] != 1:
                    if e % 4:
                        raise ValueError(
                            "image with nontrivial coefficient needs integral symbol power")
                    coeff = coeff * coeffs[i] ** (e // 4)
            key = []
            for v in new:
                if v.denominator != 1:
                    raise ValueError("substitution left the quarter-exponent lattice")
                key.append(int(v))
            return tuple(key), coeff

        def map_factor(prim):
            out = {}
            for k, c in prim:
                key, c2 = map_key(k, c)
                s = out.get(key)
                s = c2 if s is None else s + c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
            return out

        uk, uc = map_key(self.uk, self.uc)
        nf = []
        df = []
        for target, side in ((nf, self.nf), (df, self.df)):
            for prim, m in side:
                p = map_factor(prim)
                if not p:
                    if target is nf:
                        return sysm.zero
                    raise ZeroDivisionError("substitution annihilated a denominator factor")
                c, k, prim2 = _p_normalize(p, n)
                uc = uc * c ** m if target is nf else uc / c ** m
                sign = 1 if target is nf else -1
                uk = tuple(a + sign * m * b for a, b in zip(uk, k))
                if prim2:
                    target.append((prim2, m))
        return CoeffElement(sysm, uc, uk, tuple(nf), tuple(df))

    # -- evaluation -----------------------------------------------------

    def eval_root(self, assignment: dict):
        """Evaluate given values for the fourth roots s^(1/4) of each symbol.

        Exact Fractions in, exact Fraction out; floats/complex in,
        float/complex out.  Raises ZeroDivisionError when a denominator
        factor vanishes at the point.
        """
        vals = []
        for name in self.system.names:
            if name not in assignment:
                raise KeyError(f"no value for parameter {name}")
            vals.append(assignment[name])

        def ev_key(k):
            acc = None
            for v, e in zip(vals, k):
                if e:
                    acc = v ** e if acc is None else acc * v ** e
            return 1 if acc is None else acc

        def ev_poly(p):
            total = None
            for k, c in p.items():
                acc = c * ev_key(k)
                total = acc if total is None else total + acc
            return 0 if total is None else total

        out = self.uc * ev_key(self.uk)
        for prim, m in self.nf:
            out = out * ev_poly(dict(prim)) ** m
        for prim, m in self.df:
            d = ev_poly(dict(prim)) ** m
            if d == 0:
                raise ZeroDivisionError("denominator vanished at specialization")
            out = out / d
        return out


def weyl_substitute(element: CoeffElement, i: int) -> CoeffElement:
    """Simple reflection s_i on the Painleve parameters: a_j -> a_i^(-C_ij) a_j.

    q is fixed.  The element must live in the Painleve system.
    """
    if not 0 <= i <= 5:
        raise ValueError(f"unknown reflection index {i}")
    sysm = element.system
    for k in range(6):
        if f"a{k}" not in sysm.index:
            raise ValueError("weyl_substitute needs the Painleve parameters a0..a5")
    cartan = d5_cartan()
    images = {}
    for j in range(6):
        cij = cartan[i][j]
        exps = {f"a{j}": Fraction(1)}
        if cij:
            exps[f"a{i}"] = exps.get(f"a{i}", _ZERO) - cij
        images[f"a{j}"] = (_ONE, exps)
    return element.subs_monomials(images)


def sigma_substitute(element: CoeffElement) -> CoeffElement:
    """Diagram automorphism sigma: a0 <-> a1^(-1), a4 <-> a5^(-1), a2,a3 -> inverse."""
    images = {
        "a0": (_ONE, {"a1": Fraction(-1)}),
        "a1": (_ONE, {"a0": Fraction(-1)}),
        "a2": (_ONE, {"a2": Fraction(-1)}),
        "a3": (_ONE, {"a3": Fraction(-1)}),
        "a4": (_ONE, {"a5": Fraction(-1)}),
        "a5": (_ONE, {"a4": Fraction(-1)}),
    }
    return element.subs_monomials(images)


def swap_substitute(element: CoeffElement) -> CoeffElement:
    """Plain diagram swaps a0 <-> a1 and a4 <-> a5 (candidate sigma01 sigma45)."""
    images = {
        "a0": (_ONE, {"a1": Fraction(1)}),
        "a1": (_ONE, {"a0": Fraction(1)}),
        "a4": (_ONE, {"a5": Fraction(1)}),
        "a5": (_ONE, {"a4": Fraction(1)}),
    }
    return element.subs_monomials(images)


def tau_substitute(element: CoeffElement) -> CoeffElement:
    """Diagram automorphism tau: a_j <-> a_(5-j)^(-1).  Parameter data only."""
    images = {
        f"a{j}": (_ONE, {f"a{5 - j}": Fraction(-1)}) for j in range(6)
    }
    return element.subs_monomials(images)


def painleve_system() -> ParamSystem:
    return ParamSystem(PAINLEVE_NAMES)


def p_monomial(system: ParamSystem) -> CoeffElement:
    """p = a0 a1 a2^2 a3^2 a4 a5, the multiplicative time step."""
    return system.monomial({"a0": 1, "a1": 1, "a2": 2, "a3": 2, "a4": 1, "a5": 1})


def t_monomial(system: ParamSystem) -> CoeffElement:
    """t = a3^2 a4 a5, the time parameter."""
    return system.monomial({"a3": 2, "a4": 1, "a5": 1})


def eval_numeric(element: CoeffElement, assignment: dict, mode: str = "exact"):
    """Evaluate at symbol-level values.

    In exact mode every value must be the fourth power of a Fraction (the
    random point generators below only produce such values), keeping the
    result an exact Fraction.  In float mode values are arbitrary positive
    numbers.
    """
    roots = {}
    for name, v in assignment.items():
        if mode == "exact":
            r = _exact_fourth_root(Fraction(v))
            if r is None:
                raise ValueError(f"{name}={v} is not a rational fourth power; use float mode")
            roots[name] = r
        else:
            roots[name] = float(v) ** 0.25
    return element.eval_root(roots)


def _exact_fourth_root(v: Fraction):
    if v <= 0:
        return None
    num = round(v.numerator ** 0.25)
    den = round(v.denominator ** 0.25)
    for n in (num - 1, num, num + 1):
        for d in (den - 1, den, den + 1):
            if n > 0 and d > 0 and Fraction(n ** 4, d ** 4) == v:
                return Fraction(n, d)
    return None


def random_root_point(system: ParamSystem, rng: random.Random,
                      lo: int = 2, hi: int = 9) -> dict[str, Fraction]:
    """Random exact specialization, one Fraction per symbol at root level.

    Values are small positive rationals, never 0 or 1, so that generic
    denominators stay nonzero; callers retry on unlucky points.
    """
    out = {}
    for name in system.names:
        while True:
            num = rng.randint(lo, hi)
            den = rng.randint(lo, hi)
            if num != den:
                out[name] = Fraction(num, den)
                break
    return out
