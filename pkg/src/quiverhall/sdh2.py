"""The Z/2-graded semi-derived Hall algebra of rep_k(Q).

Elements are kept in normal form: every term is

    coeff * T_g . [R_key],

where g = (alpha, beta) is a point of the Grothendieck lattice of acyclic
complexes (exponents of the classes [K_{P_j}] and [K*_{P_j}] over the
indecomposable projectives), and R_key is the minimal projective-component
complex with homology pair key.  Freeness over the quantum torus makes this
a basis, so equality of elements is equality of normal forms.

All torus bookkeeping reduces to integer exponents of q:
  <K_{P_j}, X>  = q^(dim X^0 at j)          (chain maps from K_{P_j})
  <K*_{P_j}, X> = q^(dim X^1 at j)
  <X, K_{P_j}>  = q^(hom(X^1, P_j))         (X with projective components)
  <X, K*_{P_j}> = q^(hom(X^0, P_j))
with hom between projectives given by the additive Euler form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cx2 import Cx2, Cx2Tools, minimal_complex
from .errors import ShapeError
from .reps import Rep, RepCategory
from .scalars import CoeffScalar, q_power, v_power


@dataclass(frozen=True)
class NormalForm2:
    """[X] = coeff * T_(alpha,beta) . [minimal_complex(key)]."""
    coeff: CoeffScalar
    alpha: tuple
    beta: tuple
    key: tuple


class SDH2Element:
    """Linear combination of normal-form basis terms ((alpha, beta), key)."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "SDH2Algebra", terms=None):
        self.algebra = algebra
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            t = c if s is None else s + c
            if t.is_zero():
                out.pop(k, None)
            else:
                out[k] = t
        return SDH2Element(self.algebra, out)

    def __sub__(self, other):
        return self + other.scale_scalar(CoeffScalar.of(self.algebra.q, -1))

    def scale_scalar(self, c: CoeffScalar):
        return SDH2Element(self.algebra, {k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SDH2Element) and self.terms == other.terms

    def __str__(self):
        return _format_terms(self.terms, reduced=False)


class SDH2Reduced:
    """Element of the reduced twisted algebra: torus lattice collapsed to Z^n."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "SDH2Algebra", terms=None):
        self.algebra = algebra
        self.terms = {}
        if terms:
            for k, c in terms.items():
                if not c.is_zero():
                    self.terms[k] = c

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            t = c if s is None else s + c
            if t.is_zero():
                out.pop(k, None)
            else:
                out[k] = t
        return SDH2Reduced(self.algebra, out)

    def __sub__(self, other):
        return self + other.scale_scalar(CoeffScalar.of(self.algebra.q, -1))

    def scale_scalar(self, c: CoeffScalar):
        return SDH2Reduced(self.algebra, {k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SDH2Reduced) and self.terms == other.terms

    def __mul__(self, other):
        return self.algebra.reduced_product(self, other)

    def star(self):
        """Shift involution on the reduced algebra.

        Computed by lifting to the K-slot, starring there (which moves the
        lattice to the K*-slot) and reducing back; the reduction conversion
        contributes q^(-<C, R^0 + R^1>) with C the class of the lattice point.
        """
        alg = self.algebra
        out = {}
        for (c, (h0, h1)), coeff in self.terms.items():
            R = alg.rep_of_key((h1, h0))
            comp_sum = tuple(u + v for u, v in zip(R.M0.dim, R.M1.dim))
            C = alg.dim_of_coords(c)
            cc = coeff * q_power(alg.q, -alg.cat.euler_form_int(C, comp_sum))
            key = (tuple(-x for x in c), (h1, h0))
            cur = out.get(key)
            tot = cc if cur is None else cur + cc
            if not tot.is_zero():
                out[key] = tot
        return SDH2Reduced(self.algebra, out)

    def __str__(self):
        return _format_terms(self.terms, reduced=True)


def _format_terms(terms, reduced: bool) -> str:
    if not terms:
        return "0"
    def keystr(k):
        g, (h0, h1) = k
        if reduced:
            gs = f"K{list(g)}" if any(g) else ""
        else:
            a, b = g
            gs = ""
            if any(a):
                gs += f"K{list(a)}"
            if any(b):
                gs += f"K*{list(b)}"
        hs = f"[{h0.label}|{h1.label}]"
        return (gs + "." + hs) if gs else hs
    bits = []
    for k in sorted(terms, key=lambda t: (t[0], t[1][0].sig, t[1][1].sig)):
        bits.append(f"({terms[k]})*{keystr(k)}")
    return " + ".join(bits)


class SDH2Algebra:
    def __init__(self, cat: RepCategory):
        self.cat = cat
        self.q = cat.p
        self.tools = Cx2Tools(cat)
        n = cat.quiver.n
        self.projectives = [cat.projective(i) for i in range(1, n + 1)]
        # hom(P_j, P_k) = dim of P_k at vertex j
        self.hom_pp = [[self.projectives[k].dim[j] for k in range(n)] for j in range(n)]
        self._coords_cache = {}
        self._inv_cols = self._projective_coordinate_inverse()
        self._rep_cache = {}
        self._nf_cache = {}
        self._pair_cache = {}

    # ------------------------------------------------------------------
    # K_0 coordinates in the basis of indecomposable projectives

    def _projective_coordinate_inverse(self):
        """Inverse of the matrix whose columns are dim P_j, over Q (unimodular)."""
        n = self.cat.quiver.n
        cols = [list(P.dim) for P in self.projectives]
        A = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
        inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if A[r][c] != 0), None)
            if piv is None:
                raise ShapeError("projective dimension vectors are dependent (engine bug)")
            A[c], A[piv] = A[piv], A[c]
            inv[c], inv[piv] = inv[piv], inv[c]
            f = A[c][c]
            A[c] = [x / f for x in A[c]]
            inv[c] = [x / f for x in inv[c]]
            for r in range(n):
                if r != c and A[r][c] != 0:
                    g = A[r][c]
                    A[r] = [x - g * y for x, y in zip(A[r], A[c])]
                    inv[r] = [x - g * y for x, y in zip(inv[r], inv[c])]
        return inv

    def coords(self, dimvec) -> tuple:
        """Coordinates of a K_0 class (dimension-vector valued) in the P-basis."""
        dv = tuple(int(x) for x in dimvec)
        if dv in self._coords_cache:
            return self._coords_cache[dv]
        n = self.cat.quiver.n
        out = []
        for r in range(n):
            val = sum(self._inv_cols[r][c] * dv[c] for c in range(n))
            if val.denominator != 1:
                raise ShapeError("non-integral projective coordinates (engine bug)")
            out.append(int(val))
        res = tuple(out)
        self._coords_cache[dv] = res
        return res

    def dim_of_coords(self, a) -> tuple:
        n = self.cat.quiver.n
        return tuple(sum(a[j] * self.projectives[j].dim[i] for j in range(n))
                     for i in range(n))

    # ------------------------------------------------------------------
    # basis representatives

    def zero_key2(self) -> tuple:
        z = self.cat.zero_key()
        return (z, z)

    def key_of(self, X: Cx2) -> tuple:
        return self.tools.homology_keys(X)

    def rep_of_key(self, key) -> Cx2:
        ck = (key[0].sig, key[1].sig)
        R = self._rep_cache.get(ck)
        if R is None:
            R = minimal_complex(self.cat, key[0].rep, key[1].rep)
            self._rep_cache[ck] = R
        return R

    # ------------------------------------------------------------------
    # integer exponent pairings

    def exp_g_R(self, g, key) -> int:
        """log_q <K_g, R_key> for the Euler form (left acyclic argument)."""
        R = self.rep_of_key(key)
        a, b = g
        return (sum(aj * R.M0.dim[j] for j, aj in enumerate(a))
                + sum(bj * R.M1.dim[j] for j, bj in enumerate(b)))

    def exp_R_g(self, key, g) -> int:
        """log_q <R_key, K_g> (right acyclic argument; R has projective parts)."""
        R = self.rep_of_key(key)
        a, b = g
        e = 0
        for j, aj in enumerate(a):
            if aj:
                e += aj * self.cat.euler_form_int(R.M1.dim, self.projectives[j].dim)
        for j, bj in enumerate(b):
            if bj:
                e += bj * self.cat.euler_form_int(R.M0.dim, self.projectives[j].dim)
        return e

    def exp_g_h(self, g, h) -> int:
        """log_q of the Euler form between two acyclic lattice points."""
        a, b = g
        c, d = h
        n = self.cat.quiver.n
        e = 0
        for j in range(n):
            gj = a[j] + b[j]
            if gj:
                for k in range(n):
                    hk = c[k] + d[k]
                    if hk:
                        e += gj * hk * self.hom_pp[j][k]
        return e

    def torus_euler(self, g, h) -> CoeffScalar:
        """Euler form of two acyclic lattice points, as a power of q."""
        return q_power(self.q, self.exp_g_h(g, h))

    # ------------------------------------------------------------------
    # normal form

    def normal_form(self, X: Cx2) -> NormalForm2:
        """Normal form of a projective-component complex.

        The homology pair gives the key; the acyclic direct complement is
        identified through the ranks of the differentials:
            alpha-class = [im d0] - [P1(H1)],  beta-class = [im d1] - [P1(H0)].
        """
        ck = X.signature()
        nf = self._nf_cache.get(ck)
        if nf is not None:
            return nf
        cat = self.cat
        H0, H1 = self.tools.homology(X)
        k0, k1 = cat.intern(H0), cat.intern(H1)
        rank0 = tuple(m.rank() for m in X.d0.mats)
        rank1 = tuple(m.rank() for m in X.d1.mats)
        P1H0 = cat.min_proj_resolution(k0.rep)[0]
        P1H1 = cat.min_proj_resolution(k1.rep)[0]
        alpha = self.coords(tuple(r - d for r, d in zip(rank0, P1H1.dim)))
        beta = self.coords(tuple(r - d for r, d in zip(rank1, P1H0.dim)))
        key = (k0, k1)
        coeff = q_power(self.q, self.exp_g_R((alpha, beta), key))
        nf = NormalForm2(coeff, alpha, beta, key)
        self._nf_cache[ck] = nf
        return nf

    def element_of(self, X: Cx2) -> SDH2Element:
        nf = self.normal_form(X)
        return SDH2Element(self, {((nf.alpha, nf.beta), nf.key): nf.coeff})

    # ------------------------------------------------------------------
    # element constructors

    def unit(self) -> SDH2Element:
        z = (0,) * self.cat.quiver.n
        return SDH2Element(self, {((z, z), self.zero_key2()): CoeffScalar.one(self.q)})

    def zero(self) -> SDH2Element:
        return SDH2Element(self, {})

    def term(self, g, key, coeff=None) -> SDH2Element:
        c = coeff if coeff is not None else CoeffScalar.one(self.q)
        return SDH2Element(self, {(g, key): c})

    def torus_term(self, g) -> SDH2Element:
        return self.term(g, self.zero_key2())

    def torus_inverse_term(self, g) -> SDH2Element:
        """T_g^{-1} = (1/<g,g>) T_{-g}."""
        a, b = g
        neg = (tuple(-x for x in a), tuple(-x for x in b))
        c = q_power(self.q, -self.exp_g_h(g, g))
        return self.term(neg, self.zero_key2(), c)

    def E_class(self, A: Rep) -> SDH2Element:
        """Class of the stalk complex (0 <-> A) with A in degree 1."""
        if A.is_zero():
            return self.unit()
        P1A, _P0A, _i, _p = self.cat.min_proj_resolution(A)
        e1 = self.coords(P1A.dim)
        z = (0,) * self.cat.quiver.n
        g = (tuple(-x for x in e1), z)
        key = (self.cat.zero_key(), self.cat.intern(A))
        coeff = q_power(self.q, -self.exp_g_h((e1, z), (e1, z)))
        return self.term(g, key, coeff)

    def F_class(self, A: Rep) -> SDH2Element:
        return self.star(self.E_class(A))

    def K_class(self, alpha_dim) -> SDH2Element:
        a = self.coords(alpha_dim)
        z = (0,) * self.cat.quiver.n
        return self.torus_term((a, z))

    def Kstar_class(self, alpha_dim) -> SDH2Element:
        a = self.coords(alpha_dim)
        z = (0,) * self.cat.quiver.n
        return self.torus_term((z, a))

    def star(self, x: SDH2Element) -> SDH2Element:
        """Shift involution: swaps the two torus slots and the homology pair."""
        out = {}
        for ((a, b), (h0, h1)), c in x.terms.items():
            out[((b, a), (h1, h0))] = c
        return SDH2Element(self, out)

    # ------------------------------------------------------------------
    # products

    def product2(self, x: SDH2Element, y: SDH2Element) -> SDH2Element:
        out = self.zero()
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                out = out + self._product_terms(kx, ky).scale_scalar(cx * cy)
        return out

    def _product_terms(self, t1, t2) -> SDH2Element:
        g1, k1 = t1
        g2, k2 = t2
        pk = (g1, k1[0].sig, k1[1].sig, g2, k2[0].sig, k2[1].sig)
        cached = self._pair_cache.get(pk)
        if cached is not None:
            return SDH2Element(self, dict(cached))
        R1 = self.rep_of_key(k1)
        R2 = self.rep_of_key(k2)
        base_exp = (self.exp_g_R(g2, k1) - self.exp_R_g(k1, g2)
                    - self.exp_g_h(g1, g2)
                    - self.tools.hom_dim(R1, R2))
        g12 = (tuple(a + b for a, b in zip(g1[0], g2[0])),
               tuple(a + b for a, b in zip(g1[1], g2[1])))
        terms = {}
        for _f, E in self.tools.ext1_classes_proj(R1, R2):
            nf = self.normal_form(E)
            ell = (nf.alpha, nf.beta)
            g = (tuple(a + b for a, b in zip(g12[0], ell[0])),
                 tuple(a + b for a, b in zip(g12[1], ell[1])))
            c = nf.coeff * q_power(self.q, base_exp - self.exp_g_h(g12, ell))
            key = (g, nf.key)
            cur = terms.get(key)
            tot = c if cur is None else cur + c
            if tot.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = tot
        self._pair_cache[pk] = terms
        return SDH2Element(self, dict(terms))

    def comp_class(self, term_key, degree: int) -> tuple:
        """K_0 class (dimension-vector valued) of the degree-b component of a
        normal-form term's representative complex."""
        g, key = term_key
        R = self.rep_of_key(key)
        base = R.M0.dim if degree % 2 == 0 else R.M1.dim
        a, b = g
        extra = self.dim_of_coords(tuple(x + y for x, y in zip(a, b)))
        return tuple(u + v for u, v in zip(base, extra))

    def cw_exponent(self, t1, t2) -> int:
        """log_v of the componentwise twist between two basis terms."""
        c0x = self.comp_class(t1, 0)
        c1x = self.comp_class(t1, 1)
        c0y = self.comp_class(t2, 0)
        c1y = self.comp_class(t2, 1)
        return (self.cat.euler_form_int(c0x, c0y)
                + self.cat.euler_form_int(c1x, c1y))

    def twisted_product2(self, x: SDH2Element, y: SDH2Element) -> SDH2Element:
        out = self.zero()
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                tw = v_power(self.q, self.cw_exponent(kx, ky))
                out = out + self._product_terms(kx, ky).scale_scalar(cx * cy * tw)
        return out

    # ------------------------------------------------------------------
    # reduction

    def reduce(self, x) -> SDH2Reduced:
        """Quotient by K_alpha * K_alpha^* = 1.

        Terms are stored as T_(a,b) . [R] with the untwisted torus action, but
        the reduction ideal lives in the twisted algebra, where the torus is
        the plain group algebra.  Rewriting T_(a,b) = T_(a-b,0) * T_(b,b) and
        dropping the shift-invariant factor converts the coefficient by
        q^(-<B, R^0 + R^1>) with B the class carried by the K*-slot.
        """
        if isinstance(x, SDH2Reduced):
            return x
        out = {}
        for ((a, b), key), c in x.terms.items():
            R = self.rep_of_key(key)
            B = self.dim_of_coords(b)
            comp_sum = tuple(u + v for u, v in zip(R.M0.dim, R.M1.dim))
            c = c * q_power(self.q, -self.cat.euler_form_int(B, comp_sum))
            rk = (tuple(x1 - y1 for x1, y1 in zip(a, b)), key)
            cur = out.get(rk)
            tot = c if cur is None else cur + c
            if tot.is_zero():
                out.pop(rk, None)
            else:
                out[rk] = tot
        return SDH2Reduced(self, out)

    def lift(self, x: SDH2Reduced) -> SDH2Element:
        z = (0,) * self.cat.quiver.n
        out = {}
        for (c, key), coeff in x.terms.items():
            out[((c, z), key)] = coeff
        return SDH2Element(self, out)

    def reduced_product(self, x: SDH2Reduced, y: SDH2Reduced) -> SDH2Reduced:
        return self.reduce(self.twisted_product2(self.lift(x), self.lift(y)))

    def reduced_unit(self) -> SDH2Reduced:
        return self.reduce(self.unit())

    def reduced_zero(self) -> SDH2Reduced:
        return SDH2Reduced(self, {})

    # ------------------------------------------------------------------
    # quantum group relation suite

    def quantum_group_generators(self, perturb: bool = False) -> dict:
        q = self.q
        n = self.cat.quiver.n
        gens = {"E": {}, "F": {}, "K": {}, "Kinv": {}}
        for i in range(1, n + 1):
            Si = self.cat.simple(i)
            gens["E"][i] = self.reduce(self.E_class(Si)).scale_scalar(
                CoeffScalar.of(q, Fraction(1, q - 1)))
            fc = CoeffScalar(q, 0, Fraction(-1, q - 1))
            if perturb:
                fc = CoeffScalar.of(q, Fraction(1, q - 1))
            gens["F"][i] = self.reduce(self.F_class(Si)).scale_scalar(fc)
            gens["K"][i] = self.reduce(self.K_class(Si.dim))
            kinv = SDH2Reduced(self, {
                (tuple(-x for x in self.coords(Si.dim)), self.zero_key2()):
                CoeffScalar.one(q)})
            gens["Kinv"][i] = kinv
        return gens

    def verify_quantum_group(self, perturb: bool = False) -> list:
        """K-E commutation, E-F commutator and quantum Serre checks for the
        generator assignment E_i = [0 <-> S_i]/(q-1), F_i = -v [S_i <-> 0]/(q-1),
        K_i = K_{S_i} in the reduced twisted algebra."""
        Q = self.cat.quiver
        q = self.q
        g = self.quantum_group_generators(perturb=perturb)
        checks = []
        v1 = v_power(q, 1)
        vm1 = v_power(q, -1)
        comm_inv = CoeffScalar(q, 0, Fraction(1, q - 1))  # 1/(v - v^{-1})
        for i in range(1, Q.n + 1):
            for j in range(1, Q.n + 1):
                aij = Q.symmetrized_euler(self.cat.simple(i).dim, self.cat.simple(j).dim)
                lhs = g["K"][i] * g["E"][j] * g["Kinv"][i]
                rhs = g["E"][j].scale_scalar(v_power(q, aij))
                checks.append((f"K{i}E{j}K{i}^-1 = v^{aij} E{j}", lhs, rhs))
                lhsf = g["K"][i] * g["F"][j] * g["Kinv"][i]
                rhsf = g["F"][j].scale_scalar(v_power(q, -aij))
                checks.append((f"K{i}F{j}K{i}^-1 = v^-{aij} F{j}", lhsf, rhsf))
        for i in range(1, Q.n + 1):
            for j in range(1, Q.n + 1):
                lhs = g["E"][i] * g["F"][j] - g["F"][j] * g["E"][i]
                if i == j:
                    rhs = (g["K"][i] - g["Kinv"][i]).scale_scalar(comm_inv)
                else:
                    rhs = self.reduced_zero()
                checks.append((f"[E{i},F{j}]", lhs, rhs))
        for fam in ("E", "F"):
            for i in range(1, Q.n + 1):
                for j in range(1, Q.n + 1):
                    if i == j:
                        continue
                    Xi, Xj = g[fam][i], g[fam][j]
                    if Q.adjacent(i, j):
                        lhs = (Xi * Xi) * Xj \
                            - (Xi * Xj * Xi).scale_scalar(v1 + vm1) \
                            + Xj * (Xi * Xi)
                        checks.append((f"serre-{fam}({i},{j})", lhs, self.reduced_zero()))
                    elif i < j:
                        checks.append((f"commute-{fam}({i},{j})",
                                       Xi * Xj - Xj * Xi, self.reduced_zero()))
        out = []
        for name, lhs, rhs in checks:
            status = "pass" if (lhs - rhs).is_zero() else "fail"
            out.append((name, status, str(lhs), str(rhs)))
        if Q.n == 1:
            out.append(("serre(vacuous)", "pass", "0", "0"))
        return out
