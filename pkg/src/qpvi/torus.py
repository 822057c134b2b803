"""Quantum torus algebras and Ore-fraction skew-field arithmetic.

A presentation fixes an ordered generator list and an antisymmetric
pairing matrix eps with g_i g_j = q^(2 eps_ij) g_j g_i.  Elements are
finite sums of normal-ordered monomials X^u (u a quarter-integer exponent
vector) with CoeffElement coefficients; reordering products accumulates
exact q powers.

Equality of the rational expressions produced by the reflection and time
evolution maps is decided in a skew polynomial ring K[X; sigma]: left
fractions D^(-1) N reduced by greatest common left divisors (left
division), added and multiplied through least common left multiples
(extended right division).  The coefficient field K is kept effectively
univariate: apart from the distinguished direction X, exactly one
complement direction (its symplectic partner) may carry polynomial
dependence, while every other complement direction pairs to zero with the
whole lattice and enters only through invertible monomials.  gcd in K is
therefore a complete monic Euclid in one variable over the parameter
field, which is what keeps intermediate expression swell in check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import CoeffElement, ParamSystem


class NotNormalizable(Exception):
    """Expression cannot be brought to single-direction Ore fraction form."""


@dataclass
class Verdict:
    status: str                 # equal | unequal | inconclusive
    witness: object = None
    detail: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "equal"


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class TorusPresentation:
    """Ordered generators plus the antisymmetric q-commutation pairing."""

    def __init__(self, system: ParamSystem, names, pairing):
        self.system = system
        self.names = tuple(names)
        self.index = {n: i for i, n in enumerate(self.names)}
        n = len(self.names)
        eps = [[_frac(pairing[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                if eps[i][j] != -eps[j][i]:
                    raise ValueError("pairing matrix must be antisymmetric")
        self.eps = tuple(tuple(row) for row in eps)
        self.rank = n

    def __repr__(self):
        return f"TorusPresentation({', '.join(self.names)})"

    def eps_vec(self, u, v) -> Fraction:
        """Bilinear pairing eps(u, v) of two exponent vectors."""
        total = Fraction(0)
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.eps[i]
            for j, vj in enumerate(v):
                if vj and row[j]:
                    total += ui * vj * row[j]
        return total

    def reorder_exponent(self, u, v) -> Fraction:
        """q-exponent theta with X^u X^v = q^theta X^(u+v)."""
        total = Fraction(0)
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.eps[i]
            for j in range(i):
                vj = v[j]
                if vj and row[j]:
                    total += 2 * ui * vj * row[j]
        return total

    # -- element constructors -------------------------------------------

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})

    def one(self) -> "TorusElement":
        return self.monomial({})

    def gen(self, name, power=1) -> "TorusElement":
        vec = [Fraction(0)] * self.rank
        vec[self.index[name]] = _frac(power)
        return self.monomial_vec(tuple(vec))

    def monomial(self, exps: dict, coeff=None) -> "TorusElement":
        vec = [Fraction(0)] * self.rank
        for name, e in exps.items():
            vec[self.index[name]] = _frac(e)
        return self.monomial_vec(tuple(vec), coeff)

    def monomial_vec(self, vec, coeff=None) -> "TorusElement":
        if coeff is None:
            coeff = self.system.one
        elif isinstance(coeff, (int, Fraction)):
            coeff = self.system.coeff(coeff)
        vec = tuple(_frac(v) for v in vec)
        if not coeff:
            return TorusElement(self, {})
        return TorusElement(self, {vec: coeff})

    def scalar(self, coeff) -> "TorusElement":
        return self.monomial({}, coeff)


def normal_order(pres: TorusPresentation, word) -> "TorusElement":
    """Normal-order a word of (generator name, power) pairs.

    Returns the canonical monomial q^theta X^u obtained by sorting the word
    into the fixed generator order, with the exact reordering q power.
    """
    out = pres.one()
    for name, power in word:
        out = out * pres.gen(name, power)
    return out


class TorusElement:
    """Finite CoeffElement-combination of normal-ordered torus monomials."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: TorusPresentation, terms: dict):
        self.pres = pres
        self.terms = {v: c for v, c in terms.items() if c}

    # -- inspection -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CoeffElement)):
            other = self.pres.scalar(other if not isinstance(other, CoeffElement) else other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        if self.pres is not other.pres:
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(c == other.terms[v] for v, c in self.terms.items())

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for vec, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{n}^{e}" for n, e in zip(self.pres.names, vec) if e
            )
            bits.append(f"({c!r})*{mono or '1'}")
        return " + ".join(bits)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial(self) -> tuple[tuple[Fraction, ...], CoeffElement]:
        if not self.is_monomial():
            raise ValueError("not a monomial")
        return next(iter(self.terms.items()))

    # -- ring operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TorusElement):
            if other.pres is not self.pres:
                raise ValueError("mixed torus presentations")
            return other
        if isinstance(other, (int, Fraction, CoeffElement)):
            return self.pres.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for v, c in o.terms.items():
            s = out.get(v)
            out[v] = c if s is None else s + c
        return TorusElement(self.pres, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.pres, {v: -c for v, c in self.terms.items()})

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

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        pres = self.pres
        out = {}
        for u, cu in self.terms.items():
            for v, cv in o.terms.items():
                theta = pres.reorder_exponent(u, v)
                c = cu * cv
                if theta:
                    c = c * pres.system.q_pow(theta)
                w = tuple(a + b for a, b in zip(u, v))
                s = out.get(w)
                out[w] = c if s is None else s + c
        return TorusElement(pres, out)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __pow__(self, n: int):
        if n == 0:
            return self.pres.one()
        if n < 0:
            return self.inv() ** (-n)
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def inv(self) -> "TorusElement":
        """Inverse of a monomial; general inverses live in OreFraction."""
        vec, c = self.monomial()
        theta = self.pres.reorder_exponent(vec, vec)
        coeff = c.inv()
        if theta:
            coeff = coeff * self.pres.system.q_pow(theta)
        return self.pres.monomial_vec(tuple(-v for v in vec), coeff)

    # -- maps -----------------------------------------------------------

    def map_coeffs(self, fn) -> "TorusElement":
        return TorusElement(self.pres, {v: fn(c) for v, c in self.terms.items()})


def adjoin_quarter_root(pres: TorusPresentation, monomial: TorusElement) -> TorusElement:
    """Formal fourth root of a torus monomial.

    The exponent lattice already allows quarter entries, so the root is the
    monomial with all exponents divided by 4; its pairings are one quarter
    of the source pairings.  The root of the coefficient must itself be
    representable, so the coefficient is restricted to unit parameter
    monomials.
    """
    vec, c = monomial.monomial()
    coeff, exps = c.monomial_parts()
    if coeff != 1:
        raise ValueError("fourth root of a non-unit coefficient is ambiguous")
    root_exps = {n: e / 4 for n, e in exps.items()}
    return pres.monomial_vec(tuple(v / 4 for v in vec), pres.system.monomial(root_exps))


# ----------------------------------------------------------------------
# univariate rational coefficients for the skew layer
# ----------------------------------------------------------------------


class RatFunc:
    """Rational function in one symbol S over a parameter system.

    num: Laurent dict {S power: CoeffElement}; den: polynomial dict with
    minimum key 0, reduced against num by monic Euclid, leading coefficient
    one.  All parameter content (including central torus directions) lives
    inside the CoeffElement coefficients, where every symbol is a unit.
    """

    __slots__ = ("K", "num", "den")

    def __init__(self, K: ParamSystem, num: dict, den: dict, reduce: bool = True):
        if not den:
            raise ZeroDivisionError("zero denominator in RatFunc")
        num = {k: c for k, c in num.items() if c}
        den = {k: c for k, c in den.items() if c}
        if reduce:
            num, den = _rf_reduce(K, num, den)
        self.K = K
        self.num = num
        self.den = den

    @classmethod
    def const(cls, K: ParamSystem, c: CoeffElement) -> "RatFunc":
        return cls(K, {0: c} if c else {}, {0: K.one}, reduce=False)

    @classmethod
    def monomial(cls, K: ParamSystem, power: int, c: CoeffElement) -> "RatFunc":
        return cls(K, {power: c} if c else {}, {0: K.one}, reduce=False)

    def __bool__(self):
        return bool(self.num)

    def is_const(self) -> bool:
        return self.den == {0: self.K.one} and (not self.num or set(self.num) == {0})

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        if set(self.num) != set(other.num) or set(self.den) != set(other.den):
            return False
        return all(c == other.num[k] for k, c in self.num.items()) and \
            all(c == other.den[k] for k, c in self.den.items())

    __hash__ = None

    def __repr__(self):
        def side(p):
            return " + ".join(f"({p[k]!r})*S^{k}" for k in sorted(p)) if p else "0"
        if self.den == {0: self.K.one}:
            return side(self.num)
        return f"[{side(self.num)}] / [{side(self.den)}]"

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, CoeffElement):
            return RatFunc.const(self.K, other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.K, self.K.coeff(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RatFunc(self.K, _up_add(self.num, o.num), self.den)
        num = _up_add(_up_mul(self.num, o.den), _up_mul(o.num, self.den))
        return RatFunc(self.K, num, _up_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.K, {k: -c for k, c in self.num.items()}, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc(self.K, {}, {0: self.K.one}, reduce=False)
        return RatFunc(self.K, _up_mul(self.num, o.num), _up_mul(self.den, o.den))

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverting zero RatFunc")
        return RatFunc(self.K, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()


def _up_add(a: dict, b: dict) -> dict:
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


def _up_mul(a: dict, b: dict) -> dict:
    out = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
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


def _up_divmod(a: dict, b: dict):
    """Polynomial division in S over the parameter field."""
    db = max(b)
    lb_inv = b[db].inv()
    q = {}
    r = dict(a)
    while r:
        dr = max(r)
        if dr < db:
            break
        c = r[dr] * lb_inv
        k = dr - db
        q[k] = c
        for kb, cb in b.items():
            kk = kb + k
            s = r.get(kk)
            s = -c * cb if s is None else s - c * cb
            if s:
                r[kk] = s
            else:
                r.pop(kk, None)
    return q, r


def _up_gcd(a: dict, b: dict) -> dict:
    """Monic univariate gcd over the parameter field.

    Every remainder is made monic on the spot; rescaling by units keeps the
    gcd and stops coefficient fractions from snowballing down the chain.
    """
    while b:
        _, r = _up_divmod(a, b)
        if r:
            lead = r[max(r)]
            li = lead.inv()
            r = {k: c * li for k, c in r.items()}
        a, b = b, r
    lead = a[max(a)]
    one = lead.system.one
    if lead != one:
        li = lead.inv()
        a = {k: c * li for k, c in a.items()}
        a[max(a)] = one
    return a


def _rf_reduce(K: ParamSystem, num: dict, den: dict):
    if not num:
        return {}, {0: K.one}
    # clear S-monomial content
    mn = min(num)
    md = min(den)
    if md or mn:
        shift = md
        den = {k - md: c for k, c in den.items()}
        num = {k - md: c for k, c in num.items()}
    if len(den) == 1:
        (k0, c0), = den.items()
        ci = c0.inv()
        num = {k - k0: c * ci for k, c in num.items()}
        return num, {0: K.one}
    # polynomial part of num for the gcd (num may be Laurent)
    mn = min(num)
    pnum = num if mn >= 0 else {k - mn: c for k, c in num.items()}
    g = _up_gcd(pnum, den)
    if max(g) > 0:
        pnum, _ = _up_divmod(pnum, g)
        den, _ = _up_divmod(den, g)
        num = pnum if mn >= 0 else {k + mn: c for k, c in pnum.items()}
        if len(den) == 1:
            return _rf_reduce(K, num, den)
    lead = den[max(den)]
    if lead != K.one:
        li = lead.inv()
        den = {k: c * li for k, c in den.items()}
        num = {k: c * li for k, c in num.items()}
    md = min(den)
    if md:
        den = {k - md: c for k, c in den.items()}
        num = {k - md: c for k, c in num.items()}
    return num, den


# ----------------------------------------------------------------------
# Ore fractions
# ----------------------------------------------------------------------


class OreContext:
    """Skew polynomial ring K[X; sigma] attached to a presentation.

    X is the torus monomial in direction ``x_vec``; the complement basis
    must pair to zero among itself.  One complement direction (``poly_dir``)
    becomes the coefficient variable S; all others are central unit symbols
    U_i adjoined to the parameter system.  sigma scales S and each U_i by
    the exact q power dictated by their pairing with X.
    """

    def __init__(self, pres: TorusPresentation, x_vec, basis, poly_dir: int = 0):
        self.pres = pres
        self.x_vec = tuple(_frac(v) for v in x_vec)
        self.basis = [tuple(_frac(v) for v in b) for b in basis]
        n = pres.rank
        if len(self.basis) + 1 != n:
            raise NotNormalizable("complement basis must have rank one less than the torus")
        for i, bi in enumerate(self.basis):
            for bj in self.basis[i + 1:]:
                if pres.eps_vec(bi, bj):
                    raise NotNormalizable(
                        "coefficient directions do not commute; fraction form unavailable")
        if not self.basis:
            raise NotNormalizable("rank-1 torus needs no Ore machinery")
        self.poly_dir = poly_dir
        cols = [self.x_vec] + self.basis
        self._solver = _LinearSolver(cols)
        base = pres.system
        self.unit_dirs = [i for i in range(len(self.basis)) if i != poly_dir]
        self.K = ParamSystem(base.names + tuple(f"U{i}" for i in self.unit_dirs))
        self._unit_slot = {i: self.K.index[f"U{i}"] for i in self.unit_dirs}
        # sigma multiplies direction b by q^(2 eps(x, b)) per symbol unit
        self.s_twist = 2 * pres.eps_vec(self.x_vec, self.basis[poly_dir])
        self.u_twists = {i: 2 * pres.eps_vec(self.x_vec, self.basis[i]) for i in self.unit_dirs}
        self._qslot = self.K.index["q"]
        self._npad = len(self.unit_dirs)

    # -- coefficient embedding -------------------------------------------

    def lift_params(self, c: CoeffElement) -> CoeffElement:
        """Embed a scalar-system coefficient into the extended system."""
        pad = (0,) * self._npad

        def map_fac(factors):
            return tuple((tuple((k + pad, v) for k, v in prim), m) for prim, m in factors)

        return CoeffElement(self.K, c.uc, c.uk + pad, map_fac(c.nf), map_fac(c.df))

    def coeff_monomial(self, rest_coords, c: CoeffElement) -> RatFunc:
        """RatFunc monomial for rest coordinates over the complement basis."""
        out = self.lift_params(c)
        spow = rest_coords[self.poly_dir] * 4
        if spow.denominator != 1:
            raise NotNormalizable("non-quarter-integral coefficient direction")
        exps = {}
        for i in self.unit_dirs:
            r = rest_coords[i]
            if r:
                exps[f"U{i}"] = r
        if exps:
            out = out * self.K.monomial(exps)
        return RatFunc.monomial(self.K, int(spow), out)

    def _twist_param(self, c: CoeffElement, power: int) -> CoeffElement:
        """q-shift the unit symbols of a parameter coefficient."""
        if not any(self.u_twists.values()):
            return c
        qslot = self._qslot

        def shifted_key(vec):
            shift = Fraction(0)
            for i, w in self.u_twists.items():
                e = vec[self._unit_slot[i]]
                if e and w:
                    shift += w * e
            shift *= power
            if shift.denominator != 1:
                raise NotNormalizable("sigma twist leaves the quarter lattice")
            if not shift:
                return vec
            key = list(vec)
            key[qslot] += int(shift)
            return tuple(key)

        from .scalars import _p_normalize

        def map_fac(factors, uc, uk, is_num):
            out = []
            for prim, m in factors:
                p = {}
                for k, v in prim:
                    p[shifted_key(k)] = v
                c2, k2, prim2 = _p_normalize(p, self.K.nvars)
                uc = uc * c2 ** m if is_num else uc / c2 ** m
                sgn = 1 if is_num else -1
                uk = tuple(a + sgn * m * b for a, b in zip(uk, k2))
                if prim2:
                    out.append((prim2, m))
            return tuple(out), uc, uk

        uk = shifted_key(c.uk)
        uc = c.uc
        nf, uc, uk = map_fac(c.nf, uc, uk, True)
        df, uc, uk = map_fac(c.df, uc, uk, False)
        return CoeffElement(self.K, uc, uk, nf, df)

    def sigma(self, c: RatFunc, power: int = 1) -> RatFunc:
        """Twist X * c = sigma(c) * X, iterated ``power`` times (may be negative)."""
        if not power or not c.num:
            return c

        def map_side(p):
            out = {}
            for k, v in p.items():
                v2 = self._twist_param(v, power)
                if k and self.s_twist:
                    e = self.s_twist * k * power / 4
                    # S = X^(b/4): per S unit the twist is q^(2 eps(x,b)/4)
                    if e.denominator != 1:
                        raise NotNormalizable("sigma twist leaves the quarter lattice")
                    v2 = v2 * self.K.q_pow(e)
                out[k] = v2
            return out

        return RatFunc(self.K, map_side(c.num), map_side(c.den), reduce=False)

    # -- torus <-> skew conversion ----------------------------------------

    def decompose(self, vec) -> tuple[int, tuple[Fraction, ...]]:
        coords = self._solver.solve(vec)
        if coords is None:
            raise NotNormalizable("exponent outside the chosen span")
        k = coords[0]
        if k.denominator != 1:
            raise NotNormalizable("non-integral power of the distinguished direction")
        return int(k), tuple(coords[1:])

    def to_skew_pair(self, elem: TorusElement) -> tuple["SkewPoly", "SkewPoly"]:
        """Write elem as D^(-1) N with D a power of X (not yet reduced)."""
        pres = self.pres
        pieces = {}
        kmin = 0
        for vec, c in elem.terms.items():
            k, rest = self.decompose(vec)
            rest_vec = tuple(u - k * x for u, x in zip(vec, self.x_vec))
            kx = tuple(k * x for x in self.x_vec)
            # X^u = q^(-theta) * X^rest * X^(k x) with theta the reordering power
            theta = pres.reorder_exponent(rest_vec, kx)
            coeff = c if not theta else c * pres.system.q_pow(-theta)
            rf = self.coeff_monomial(rest, coeff)
            s = pieces.get(k)
            pieces[k] = rf if s is None else s + rf
            kmin = min(kmin, k)
        num = SkewPoly(self, {k - kmin: c for k, c in pieces.items() if c})
        den = SkewPoly(self, {-kmin: RatFunc.const(self.K, self.K.one)})
        if kmin:
            num = SkewPoly(self, {k: self.sigma(c, -kmin) for k, c in num.coeffs.items()})
        return den, num

    def x_element(self) -> TorusElement:
        return self.pres.monomial_vec(self.x_vec)

    def rf_one(self) -> RatFunc:
        return RatFunc.const(self.K, self.K.one)

    def coeff_to_torus(self, c: RatFunc) -> TorusElement:
        """Expand a coefficient back into torus form (den must be S-free)."""
        if max(c.den) > 0:
            raise NotNormalizable("coefficient denominator depends on the partner direction")
        den_param = c.den[0]
        nparams = len(self.pres.system.names)
        base = self.pres.system

        def param_to_base(pc: CoeffElement):
            """Split off unit-symbol content and shrink back to the base system."""
            uvec = [Fraction(0)] * self.pres.rank

            def strip(vec):
                for i in self.unit_dirs:
                    e = vec[self._unit_slot[i]]
                    if e:
                        for j, bj in enumerate(self.basis[i]):
                            uvec[j] += Fraction(e, 4) * bj
                return vec[:nparams]

            def strip_factors(factors, kind):
                out = []
                for prim, m in factors:
                    prim2 = []
                    for k, v in prim:
                        if any(k[nparams:]):
                            raise NotNormalizable(
                                "unit torus direction appears inside a polynomial factor")
                        prim2.append((k[:nparams], v))
                    out.append((tuple(prim2), m))
                return tuple(out)

            uk = strip(pc.uk)
            nf = strip_factors(pc.nf, "n")
            df = strip_factors(pc.df, "d")
            return CoeffElement(base, pc.uc, uk, nf, df), uvec

        dc, dvec = param_to_base(den_param.inv())
        out = self.pres.zero()
        for k, nc in c.num.items():
            ncc, nvec = param_to_base(nc)
            vec = [a + b for a, b in zip(nvec, dvec)]
            for j, bj in enumerate(self.basis[self.poly_dir]):
                vec[j] += Fraction(k, 4) * bj
            out = out + self.pres.monomial_vec(tuple(vec), ncc * dc)
        return out


class _LinearSolver:
    """Exact solver for coordinates in a fixed column basis."""

    def __init__(self, cols):
        self.n = len(cols[0])
        self.m = len(cols)
        if self.m != self.n:
            raise NotNormalizable("basis does not span the exponent lattice")
        self.mat = [[_frac(cols[j][i]) for j in range(self.m)] for i in range(self.n)]
        self._cache = {}

    def solve(self, rhs):
        rhs = tuple(rhs)
        hit = self._cache.get(rhs)
        if hit is not None:
            return hit
        a = [row[:] + [_frac(r)] for row, r in zip(self.mat, rhs)]
        n, m = self.n, self.m
        row = 0
        pivots = []
        for col in range(m):
            piv = next((r for r in range(row, n) if a[r][col]), None)
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            pv = a[row][col]
            a[row] = [x / pv for x in a[row]]
            for r in range(n):
                if r != row and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[row])]
            pivots.append(col)
            row += 1
        sol = [Fraction(0)] * m
        for r, col in enumerate(pivots):
            sol[col] = a[r][m]
        for r in range(row, n):
            if a[r][m]:
                self._cache[rhs] = None
                return None
        sol = tuple(sol)
        self._cache[rhs] = sol
        return sol


class SkewPoly:
    """Polynomial in X over the Ore context's coefficient field."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: OreContext, coeffs: dict):
        self.ctx = ctx
        self.coeffs = {int(k): c for k, c in coeffs.items() if c}
        if any(k < 0 for k in self.coeffs):
            raise ValueError("skew polynomial with negative exponent")

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        if set(self.coeffs) != set(other.coeffs):
            return False
        return all(c == other.coeffs[k] for k, c in self.coeffs.items())

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c!r})*X^{k}" for k, c in sorted(self.coeffs.items()))

    @property
    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def lead(self) -> RatFunc:
        return self.coeffs[self.degree]

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return SkewPoly(self.ctx, out)

    def __neg__(self):
        return SkewPoly(self.ctx, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                c = a * ctx.sigma(b, i)
                k = i + j
                s = out.get(k)
                out[k] = c if s is None else s + c
        return SkewPoly(ctx, out)

    def scale_left(self, c: RatFunc) -> "SkewPoly":
        return SkewPoly(self.ctx, {k: c * a for k, a in self.coeffs.items()})

    def divmod_right(self, b: "SkewPoly"):
        """Q, R with self = Q*b + R and deg R < deg b."""
        if not b:
            raise ZeroDivisionError("skew division by zero")
        ctx = self.ctx
        q = SkewPoly(ctx, {})
        r = self
        bl = b.lead()
        nb = b.degree
        while r and r.degree >= nb:
            k = r.degree - nb
            c = r.lead() * ctx.sigma(bl, k).inv()
            mono = SkewPoly(ctx, {k: c})
            q = q + mono
            r = r - mono * b
        return q, r

    def divmod_left(self, b: "SkewPoly"):
        """Q, R with self = b*Q + R and deg R < deg b."""
        if not b:
            raise ZeroDivisionError("skew division by zero")
        ctx = self.ctx
        q = SkewPoly(ctx, {})
        r = self
        bl_inv = b.lead().inv()
        nb = b.degree
        while r and r.degree >= nb:
            k = r.degree - nb
            c = ctx.sigma(bl_inv * r.lead(), -nb)
            mono = SkewPoly(ctx, {k: c})
            q = q + mono
            r = r - b * mono
        return q, r


def gcld(a: SkewPoly, b: SkewPoly) -> SkewPoly:
    """Greatest common left divisor, computed with left division.

    Remainders are left-rescaled monic at each step; the GCLD is only
    defined up to a left unit, and monic remainders keep the coefficient
    fractions from snowballing.
    """
    while b:
        _, r = a.divmod_left(b)
        a, b = b, r
    return a


def lclm(a: SkewPoly, b: SkewPoly):
    """Least common left multiple M = u*a = v*b via extended right Euclid.

    Returns (M, u, v).  Each remainder row is rescaled by a left unit
    (making the remainder monic), which preserves r = u*a + v*b.
    """
    ctx = a.ctx
    one = SkewPoly(ctx, {0: ctx.rf_one()})
    zero = SkewPoly(ctx, {})
    r0, r1 = a, b
    u0, u1 = one, zero
    v0, v1 = zero, one
    while r1:
        q, r = r0.divmod_right(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    m = u1 * a
    return m, u1, SkewPoly(a.ctx, {k: -c for k, c in v1.coeffs.items()})


class OreFraction:
    """Reduced left fraction D^(-1) N over an OreContext."""

    __slots__ = ("ctx", "den", "num")

    def __init__(self, ctx: OreContext, den: SkewPoly, num: SkewPoly, reduce: bool = True):
        self.ctx = ctx
        if not den:
            raise ZeroDivisionError("zero denominator in Ore fraction")
        if reduce:
            den, num = self._reduce(den, num)
        self.den = den
        self.num = num

    @staticmethod
    def _reduce(den: SkewPoly, num: SkewPoly):
        ctx = den.ctx
        one = ctx.rf_one()
        if not num:
            return SkewPoly(ctx, {0: one}), num
        if den.degree > 0 or num.degree > 0:
            g = gcld(den, num)
            if g.degree > 0:
                dq, dr = den.divmod_left(g)
                nq, nr = num.divmod_left(g)
                if not dr and not nr:
                    den, num = dq, nq
        c = den.lead()
        if c != one:
            ci = c.inv()
            den = den.scale_left(ci)
            num = num.scale_left(ci)
        return den, num

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_torus(cls, ctx: OreContext, elem: TorusElement) -> "OreFraction":
        den, num = ctx.to_skew_pair(elem)
        return cls(ctx, den, num)

    @classmethod
    def one(cls, ctx: OreContext) -> "OreFraction":
        unit = SkewPoly(ctx, {0: ctx.rf_one()})
        return cls(ctx, unit, unit, reduce=False)

    @classmethod
    def zero(cls, ctx: OreContext) -> "OreFraction":
        return cls(ctx, SkewPoly(ctx, {0: ctx.rf_one()}), SkewPoly(ctx, {}), reduce=False)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"({self.den!r})^-1 * ({self.num!r})"

    # -- field operations ----------------------------------------------------

    def _check(self, other):
        if self.ctx is not other.ctx:
            raise ValueError("mixed Ore contexts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CoeffElement, TorusElement)):
            other = _coerce_fraction(self.ctx, other)
        if not isinstance(other, OreFraction):
            return NotImplemented
        self._check(other)
        if self.den == other.den:
            return OreFraction(self.ctx, self.den, self.num + other.num)
        m, u1, u2 = lclm(self.den, other.den)
        return OreFraction(self.ctx, m, u1 * self.num + u2 * other.num)

    __radd__ = __add__

    def __neg__(self):
        return OreFraction(self.ctx, self.den, -self.num, reduce=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CoeffElement, TorusElement)):
            other = _coerce_fraction(self.ctx, other)
        if not isinstance(other, OreFraction):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CoeffElement, TorusElement)):
            other = _coerce_fraction(self.ctx, other)
        if not isinstance(other, OreFraction):
            return NotImplemented
        self._check(other)
        if not self.num or not other.num:
            return OreFraction.zero(self.ctx)
        # N1 * D2^(-1) = u^(-1) v  from  u N1 = v D2
        if other.den.degree == 0:
            only = other.den.coeffs[0]
            num2 = other.num if only == self.ctx.rf_one() else other.num.scale_left(only.inv())
            return OreFraction(self.ctx, self.den, self.num * num2)
        m, u, v = lclm(self.num, other.den)
        return OreFraction(self.ctx, u * self.den, v * other.num)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CoeffElement, TorusElement)):
            return _coerce_fraction(self.ctx, other) * self
        return NotImplemented

    def inv(self) -> "OreFraction":
        if not self.num:
            raise ZeroDivisionError("inverting zero Ore fraction")
        return OreFraction(self.ctx, self.num, self.den)

    def __pow__(self, n: int):
        if n == 0:
            return OreFraction.one(self.ctx)
        base = self if n > 0 else self.inv()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CoeffElement, TorusElement)):
            other = _coerce_fraction(self.ctx, other)
        if not isinstance(other, OreFraction):
            return NotImplemented
        return (self - other).is_zero()

    # -- conversion back ------------------------------------------------------

    def to_torus(self) -> TorusElement:
        """Expand to a torus element when the denominator is X^k * coeff."""
        if len(self.den.coeffs) != 1:
            raise NotNormalizable("denominator is not a monomial in X")
        k, dc = next(iter(self.den.coeffs.items()))
        ctx = self.ctx
        x = ctx.x_element()
        dc_inv = dc.inv()
        out = ctx.pres.zero()
        for j, c in self.num.coeffs.items():
            coeff = ctx.sigma(dc_inv * c, -k)
            xpow = x ** (j - k) if j >= k else x.inv() ** (k - j)
            out = out + ctx.coeff_to_torus(coeff) * xpow
        return out


def _coerce_fraction(ctx: OreContext, value) -> OreFraction:
    if isinstance(value, TorusElement):
        return OreFraction.from_torus(ctx, value)
    if isinstance(value, CoeffElement):
        return OreFraction.from_torus(ctx, ctx.pres.scalar(value))
    return OreFraction.from_torus(ctx, ctx.pres.scalar(Fraction(value)))


def default_context(pres: TorusPresentation, x_name: str, poly_name: str = None) -> OreContext:
    """Ore context distinguishing one presentation generator.

    ``poly_name`` names the single complement generator allowed to carry
    polynomial coefficient dependence (default: the first non-X generator
    with nonzero pairing against X, else the first non-X generator).
    """
    n = pres.rank
    xi = pres.index[x_name]
    x = [Fraction(0)] * n
    x[xi] = Fraction(1)
    rest = [j for j in range(n) if j != xi]
    if poly_name is not None:
        pj = pres.index[poly_name]
    else:
        pj = next((j for j in rest if pres.eps[xi][j]), rest[0] if rest else None)
    basis = []
    poly_dir = 0
    for pos, j in enumerate(rest):
        b = [Fraction(0)] * n
        b[j] = Fraction(1)
        basis.append(tuple(b))
        if j == pj:
            poly_dir = pos
    return OreContext(pres, tuple(x), basis, poly_dir)


def torus_equals(a, b, mode: str = "exact", ctx: OreContext = None, oracle=None) -> Verdict:
    """Decide equality of two torus/Ore expressions.

    exact mode normalizes both sides to reduced Ore fractions and compares;
    oracle mode (or exact-mode fallback when normalization fails and an
    oracle callback is supplied) delegates to probabilistic evaluation.
    """
    if mode == "oracle":
        if oracle is None:
            return Verdict("inconclusive", detail="no oracle supplied")
        return oracle(a, b)
    try:
        if isinstance(a, TorusElement) and isinstance(b, TorusElement) and ctx is None:
            eq = a == b
            return Verdict("equal" if eq else "unequal",
                           witness=None if eq else "normal-form mismatch")
        fa = a if isinstance(a, OreFraction) else _coerce_fraction(ctx, a)
        fb = b if isinstance(b, OreFraction) else _coerce_fraction(ctx, b)
        eq = (fa - fb).is_zero()
        return Verdict("equal" if eq else "unequal",
                       witness=None if eq else "nonzero difference numerator")
    except NotNormalizable as exc:
        if oracle is not None:
            return oracle(a, b)
        return Verdict("inconclusive", detail=str(exc))
