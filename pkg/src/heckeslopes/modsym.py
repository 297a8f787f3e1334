"""Modular symbols for Gamma_0(M), plus quotient, with exact Hecke action.

The presentation is the classical one on Manin symbols (i, (c:d)) with
0 <= i <= k-2 and (c:d) in P^1(Z/M), modulo the two-term and three-term
relations and folded by the star involution [-1,0;0,1] (so one copy of
each complex-conjugate pair survives).  The two-term and star relations
are absorbed by a signed union-find before the three-term relations go
through sparse exact row reduction; this keeps the reduction at a quarter
of the naive column count.

The cuspidal subspace is the kernel of the boundary map to star-folded
cusp classes, and its dimension is asserted against the dimension formula
on every build.  Hecke operators T_n (and U_p at p | M) act through the
standard determinant-n family, dropping images whose bottom row is not
primitive mod M.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .dimensions import dim_cuspforms
from .errors import ConsistencyError
from .exact import IntPolynomial, inverse_charpoly, is_prime
from .linalg import SparseRREF, SpanSolver, kernel_basis

__all__ = [
    "P1List", "PlusQuotient", "plus_quotient",
    "hecke_on_cuspidal", "charpoly_cuspidal", "merel_family",
]


def gcdex(a, b):
    """Extended gcd: returns (x, y, g) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def _lift_to_unit(n, d, a):
    # lift a unit a mod d (d | n) to a unit mod n: CRT to 1 on the part of n
    # coprime to d
    if n == 1:
        return 0
    u, v = 1, n
    g = gcd(v, d)
    while g > 1:
        u *= g
        v //= g
        g = gcd(v, g)
    x, y, _ = gcdex(u, v)
    return (u * x + a % n * y * v) % n


def _p1_reduce(M, u, v):
    """Canonical representative of (u:v) in P^1(Z/M), or None if not primitive."""
    u %= M
    v %= M
    if u == 0:
        return (0, 1) if gcd(v, M) == 1 else None
    _, s, g = gcdex(M, u)
    if gcd(g, v) > 1:
        return None
    # now u ~ g with multiplier s, a unit mod M/g
    s = _lift_to_unit(M, M // g, s)
    v = s * v % M
    if g == 1:
        return (1, v)
    # the stabilizer of g scales v by units t with t = 1 mod M/g
    vmin = v
    for t in range(1, M, M // g):
        if gcd(t, M) == 1:
            w = v * t % M
            if w < vmin:
                vmin = w
    return (g, vmin)


class P1List:
    """P^1(Z/M) with canonical representatives and a full lookup table.

    index(c, d) returns the point index, or None when (c, d) is not
    primitive mod M (the convention Hecke sums rely on at p | M).
    """

    __slots__ = ("M", "points", "table")

    def __init__(self, M):
        if M < 1:
            raise ValueError("level must be >= 1")
        self.M = M
        cache = {}
        for u in range(M):
            for v in range(M):
                cache[(u, v)] = _p1_reduce(M, u, v)
        if M == 1:
            cache[(0, 0)] = (0, 1)
        pts = sorted({r for r in cache.values() if r is not None})
        pos = {pt: i for i, pt in enumerate(pts)}
        self.points = pts
        self.table = {uv: pos[r] for uv, r in cache.items() if r is not None}

    def __len__(self):
        return len(self.points)

    def index(self, c, d):
        return self.table.get((c % self.M, d % self.M))


class _SignedDSU:
    """Union-find tracking e_x = sign * e_root, with dead (forced zero) classes."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.sign = [1] * n
        self.dead = [False] * n

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        # path compression: walk back from the node nearest the root,
        # accumulating the sign to the root as we go
        acc = 1
        for y in reversed(path):
            acc *= self.sign[y]
            self.parent[y] = x
            self.sign[y] = acc
        return x, acc if path else 1

    def union(self, a, b, rel):
        """Impose e_a = rel * e_b."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        s = sa * rel * sb
        if ra == rb:
            if s == -1:
                self.dead[ra] = True
            return
        self.parent[ra] = rb
        self.sign[ra] = s
        if self.dead[ra]:
            self.dead[rb] = True


def merel_family(n):
    """The standard determinant-n integer matrix family computing T_n on
    Manin symbols (with the primitivity drop rule at gcd(n, M) > 1)."""
    mats = []
    for a in range(1, n + 1):
        for d in range((n + a - 1) // a, n + 2 - a):
            bc = a * d - n
            if bc == 0:
                for b in range(a):
                    mats.append((a, b, 0, d))
                for c in range(1, d):
                    mats.append((a, 0, c, d))
            else:
                # bc > 0 forces d >= 2 here since a <= n
                for b in range((bc - 1) // (d - 1) + 1, a):
                    if bc % b == 0:
                        mats.append((a, b, bc // b, d))
    return mats


def _binomial_powers(x, y, w):
    """tab[i][j] = coefficient of X^j Y^(i-j) in (x*X + y*Y)^i, for i <= w."""
    tab = [[1]]
    for i in range(w):
        row = tab[i]
        nxt = [0] * (i + 2)
        for j, c in enumerate(row):
            if c:
                nxt[j] += y * c
                nxt[j + 1] += x * c
        tab.append(nxt)
    return tab


class PlusQuotient:
    """Weight-k modular symbols for Gamma_0(M), star-(+1) part.

    Attributes:
      quotient_dim   dimension of the full plus quotient
      dim            dimension of the cuspidal subspace (== dim S_k)
      cusp_count     number of star-folded cusp classes
    """

    def __init__(self, k, M):
        if k < 2 or k % 2:
            raise ValueError(f"weight must be even and >= 2, got {k}")
        if M < 1:
            raise ValueError(f"level must be >= 1, got {M}")
        self.k = k
        self.M = M
        self.p1 = P1List(M)
        self._build_quotient()
        self._build_cuspidal()

    # -- presentation ---------------------------------------------------

    def _gen(self, i, t):
        return i * len(self.p1) + t

    def _build_quotient(self):
        k, M, p1 = self.k, self.M, self.p1
        w = k - 2
        npts = len(p1)
        ncols = (w + 1) * npts
        dsu = _SignedDSU(ncols)

        for i in range(w + 1):
            for t, (c, d) in enumerate(p1.points):
                x = self._gen(i, t)
                # two-term relation: x + (-1)^i (w-i, (d:-c)) = 0
                t2 = p1.index(d, -c)
                dsu.union(x, self._gen(w - i, t2), -1 if i % 2 == 0 else 1)
                # star fold: x = (-1)^i (i, (-c:d))
                t3 = p1.index(-c, d)
                dsu.union(x, self._gen(i, t3), 1 if i % 2 == 0 else -1)

        binom = [[0] * (w + 1) for _ in range(w + 1)]
        for i in range(w + 1):
            binom[i][0] = 1
            for j in range(1, i + 1):
                binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j]

        rref = SparseRREF()
        for i in range(w + 1):
            for t, (c, d) in enumerate(p1.points):
                # three-term relation x + x.tau + x.tau^2 = 0 written out on
                # generators (weight factors from the polynomial action)
                terms = [(i, p1.index(c, d), 1)]
                ta = p1.index(d, -c - d)
                for j in range(w - i + 1):
                    terms.append((j, ta, (-1) ** j * binom[w - i][j]))
                tb = p1.index(-c - d, c)
                for j in range(i + 1):
                    terms.append((w - i + j, tb, (-1) ** (i + j) * binom[i][j]))
                row = {}
                for ii, tt, coeff in terms:
                    r, s = dsu.find(self._gen(ii, tt))
                    if dsu.dead[r]:
                        continue
                    row[r] = row.get(r, 0) + s * coeff
                if row:
                    rref.add_row(row)

        live = sorted({dsu.find(x)[0] for x in range(ncols)
                       if not dsu.dead[dsu.find(x)[0]]})
        pivots = set(rref.pivot_rows)
        free = [r for r in live if r not in pivots]
        pos = {r: idx for idx, r in enumerate(free)}

        self.quotient_dim = len(free)
        self.free_roots = free
        self._dsu = dsu

        pi = []
        for x in range(ncols):
            r, s = dsu.find(x)
            if dsu.dead[r]:
                pi.append({})
                continue
            prow = rref.pivot_rows.get(r)
            if prow is None:
                pi.append({pos[r]: Fraction(s)})
            else:
                pi.append({pos[c]: -s * v for c, v in prow.items() if c != r})
        self._pi = pi

    # -- boundary and cuspidal subspace ---------------------------------

    def _cusp_index(self, cusps, u, v):
        for i, rep in enumerate(cusps):
            if self._cusps_equiv(rep, (u, v)) or self._cusps_equiv(rep, (-u, v)):
                return i
        cusps.append((u, v))
        return len(cusps) - 1

    def _cusps_equiv(self, A, B):
        (u1, v1), (u2, v2) = A, B
        s1 = gcdex(u1, v1)[0]
        s2 = gcdex(u2, v2)[0]
        g = gcd(self.M, v1 * v2 % self.M)
        return (s1 * v2 - s2 * v1) % g == 0

    def _build_cuspidal(self):
        w = self.k - 2
        npts = len(self.p1)
        cusps = []
        rows = {}
        for col, r in enumerate(self.free_roots):
            i, t = divmod(r, npts)
            c, d = self.p1.points[t]
            a, b, g = gcdex(d, -c)
            if g != 1:
                raise ConsistencyError("non-unimodular symbol representative")
            # boundary of the symbol: present only at the extreme weights
            if i == w:
                ci = self._cusp_index(cusps, a, c)
                rows.setdefault(ci, {})[col] = rows.get(ci, {}).get(col, 0) + 1
            if i == 0:
                ci = self._cusp_index(cusps, b, d)
                rows.setdefault(ci, {})[col] = rows.get(ci, {}).get(col, 0) - 1
        self.cusp_count = len(cusps)
        D = self.quotient_dim
        dense = [[Fraction(rows.get(ci, {}).get(c, 0)) for c in range(D)]
                 for ci in range(len(cusps))]
        self.cuspidal_basis = kernel_basis(dense, D)
        self.dim = len(self.cuspidal_basis)
        expected = dim_cuspforms(self.k, self.M)
        if self.dim != expected:
            raise ConsistencyError(
                f"cuspidal dimension {self.dim} != formula {expected} "
                f"at (k={self.k}, M={self.M})")

    # -- Hecke action ----------------------------------------------------

    def _quotient_hecke_columns(self, n):
        """Images of the free generators under T_n, in quotient coordinates."""
        w = self.k - 2
        p1 = self.p1
        npts = len(p1)
        D = self.quotient_dim
        cols = [[Fraction(0)] * D for _ in range(D)]
        for (aa, bb, cc, dd) in merel_family(n):
            tab1 = _binomial_powers(aa, bb, w)
            tab2 = _binomial_powers(cc, dd, w)
            tgt = {}
            for col, r in enumerate(self.free_roots):
                i, t = divmod(r, npts)
                c, d = p1.points[t]
                if t not in tgt:
                    tgt[t] = p1.index(aa * c + cc * d, bb * c + dd * d)
                t1 = tgt[t]
                if t1 is None:
                    continue  # image not primitive mod M: dropped
                # (aa X + bb Y)^i (cc X + dd Y)^(w-i) expanded in X^j Y^(w-j)
                row1, row2 = tab1[i], tab2[w - i]
                vec = cols[col]
                for j in range(w + 1):
                    coeff = 0
                    for u in range(max(0, j - (w - i)), min(i, j) + 1):
                        coeff += row1[u] * row2[j - u]
                    if coeff:
                        for fp, fv in self._pi[self._gen(j, t1)].items():
                            vec[fp] += coeff * fv
        return cols

    def hecke_matrix(self, n):
        """Matrix of T_n (U_p when n = p | M) on the cuspidal basis."""
        if n < 1:
            raise ValueError("Hecke index must be >= 1")
        if n > 1 and not is_prime(n):
            # composite indices would need the full multiplicative recursion
            raise ValueError(f"Hecke index must be 1 or prime, got {n}")
        d = self.dim
        if d == 0:
            return []
        cols = self._quotient_hecke_columns(n)
        solver = SpanSolver(self.cuspidal_basis)
        A = [[Fraction(0)] * d for _ in range(d)]
        for j, bvec in enumerate(self.cuspidal_basis):
            img = [Fraction(0)] * self.quotient_dim
            for r, x in enumerate(bvec):
                if x:
                    colr = cols[r]
                    for idx in range(self.quotient_dim):
                        if colr[idx]:
                            img[idx] += x * colr[idx]
            try:
                coeffs = solver.solve(img)
            except ValueError:
                raise ConsistencyError(
                    f"T_{n} does not preserve the cuspidal subspace at "
                    f"(k={self.k}, M={self.M})") from None
            for i in range(d):
                A[i][j] = coeffs[i]
        return A


@lru_cache(maxsize=48)
def plus_quotient(k, M):
    return PlusQuotient(k, M)


@lru_cache(maxsize=256)
def hecke_on_cuspidal(k, M, n):
    """Cuspidal Hecke matrix as a tuple of row tuples (cached)."""
    A = plus_quotient(k, M).hecke_matrix(n)
    return tuple(tuple(row) for row in A)


@lru_cache(maxsize=None)
def charpoly_cuspidal(k, M, p):
    """det(1 - T_p X) on S_k(Gamma_0(M)); U_p when p | M.

    Raw degree always equals dim S_k, so trailing zero coefficients record
    zero eigenvalues.
    """
    A = [list(row) for row in hecke_on_cuspidal(k, M, p)]
    if not A:
        return IntPolynomial([1])
    return inverse_charpoly(A)
