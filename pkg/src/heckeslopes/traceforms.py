"""Trace-formula engine: Hurwitz class numbers, local embedding counts,
tr T_n on S_k(Gamma_0(N)) for gcd(n, N) = 1, and characteristic polynomials
of T_p rebuilt from power traces.

This route never touches modular symbols, so it serves as a fully
independent cross-check of the linear algebra engine.  Its reach is
bounded by the class number table: tr T_n needs H(4n - t^2) for all
|t| <= 2 sqrt(n), so the deepest usable n satisfies 4n <= DISC_CAP.
"""

import threading
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .dimensions import dim_cuspforms
from .errors import TraceBudgetExceeded
from .exact import IntPolynomial, divisors, factorize, kronecker

__all__ = [
    "DISC_CAP_DEFAULT", "hurwitz_class_number", "ClassNumberTable",
    "default_table", "local_embedding_count", "trace_tn",
    "hecke_power_traces", "charpoly_from_traces", "trace_feasible",
]

# largest |t^2 - 4n| the bundled class number table will sieve; covers
# 4 * 7^8, the deepest charpoly request the cross-check grid can pose
DISC_CAP_DEFAULT = 24_000_000

# requests at or below this threshold trigger only a small sieve, so
# light uses of the engine never pay for the full table
_SMALL_REQUEST = 100_000
_SMALL_BUILD = 400_000


def hurwitz_class_number(n):
    """Hurwitz class number H(n) as a Fraction.

    Counts reduced positive definite forms of discriminant -n, weighting
    x^2+y^2 classes by 1/2 and x^2+xy+y^2 classes by 1/3; H(0) = -1/12,
    H(n) = 0 unless n is 0 or 3 mod 4.
    """
    if n < 0:
        raise ValueError("negative discriminant argument")
    if n == 0:
        return Fraction(-1, 12)
    total = Fraction(0)
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            num = b * b + n
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue  # its mirror (a, -b, a) ~ (a, b, a) is already counted
            if a == b == c:
                total += Fraction(1, 3)
            elif b == 0 and a == c:
                total += Fraction(1, 2)
            else:
                total += 1
        a += 1
    return total


class ClassNumberTable:
    """Sieved table of 6*H(n) plus a smallest-prime-factor array.

    Both arrays build lazily; a request beyond `cap` raises
    TraceBudgetExceeded instead of attempting a hopeless sieve.  Thread
    safe so parallel surveys can share one instance.
    """

    def __init__(self, cap=DISC_CAP_DEFAULT):
        self.cap = cap
        self.limit = -1
        self._h6 = None
        self._spf = None
        self._lock = threading.Lock()

    def ensure(self, n):
        if n <= self.limit:
            return
        if n > self.cap:
            raise TraceBudgetExceeded(
                f"class number table capped at {self.cap}, need {n}", n=n)
        with self._lock:
            if n <= self.limit:
                return
            L = _SMALL_BUILD if n <= _SMALL_REQUEST else self.cap
            self._build(L)

    def _build(self, L):
        h6 = np.zeros(L + 1, dtype=np.int32)
        a = 1
        while 3 * a * a <= L:
            fa = 4 * a
            for b in range(a + 1):
                n0 = fa * a - b * b
                # c = a term: b >= 0 only, special weights on the diagonal
                if n0 <= L:
                    h6[n0] += 2 if b == a else (3 if b == 0 else 6)
                # c > a terms: generic forms count for both signs of b
                start = n0 + fa
                if start <= L:
                    h6[start::fa] += 6 if (b == 0 or b == a) else 12
            a += 1
        spf = np.zeros(L + 1, dtype=np.int32)
        p = 2
        while p * p <= L:
            if spf[p] == 0:
                view = spf[p * p::p]
                view[view == 0] = p
            p += 1
        self._h6 = h6
        self._spf = spf
        self.limit = L

    def h6(self, n):
        """6 * H(n) as an int (n >= 1)."""
        if n < 1:
            raise ValueError("h6 needs n >= 1; H(0) is -1/12")
        self.ensure(n)
        return int(self._h6[n])

    def factor(self, n):
        self.ensure(n)
        out = {}
        spf = self._spf
        while n > 1:
            p = int(spf[n]) or n
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out

    def h6_primitive(self, n):
        """6 * (class number of primitive forms of discriminant -n)."""
        self.ensure(n)
        square_primes = [p for p, e in self.factor(n).items() if e >= 2]
        terms = [(1, 1)]
        for p in square_primes:
            terms += [(f2 * p * p, -s) for f2, s in terms]
        return sum(s * int(self._h6[n // f2]) for f2, s in terms)


_DEFAULT_TABLE = ClassNumberTable()


def default_table():
    return _DEFAULT_TABLE


def local_embedding_count(q, sigma, c, nu):
    """Number of local optimal embeddings at q for an order of level q^nu.

    sigma is the Kronecker symbol of the fundamental discriminant at q,
    c = v_q of the conductor, nu = v_q(N).  Levels beyond q^4 are out of
    scope for this engine.
    """
    if nu == 0:
        return 1
    if nu == 1:
        return (1 + sigma) if c == 0 else 2
    if nu == 2:
        if sigma == 1:
            return 2 if c == 0 else (q + 2 if c == 1 else q + 1)
        if sigma == -1:
            return 0 if c == 0 else (q if c == 1 else q + 1)
        return 0 if c == 0 else q + 1
    if nu == 3:
        if sigma == 1:
            return 2 if c == 0 else (2 * q + 2 if c == 1 else 2 * q)
        if sigma == -1:
            return 0 if c <= 1 else 2 * q
        return 0 if c == 0 else (q if c == 1 else 2 * q)
    if nu == 4:
        if sigma == 1:
            return (2, 2 * q + 2, q * q + 2 * q)[c] if c <= 2 else q * q + q
        if sigma == -1:
            return (0, 0, q * q)[c] if c <= 2 else q * q + q
        return 0 if c <= 1 else q * q + q
    raise ValueError(f"level valuation {nu} > 4 not supported")


def _fundamental_split(disc_abs, table):
    """|Delta| -> (|D0|, f0) with Delta = D0 * f0^2, D0 fundamental."""
    fact = table.factor(disc_abs)
    f = 1
    m = 1
    for p, e in fact.items():
        f *= p ** (e // 2)
        if e % 2:
            m *= p
    # -m squarefree; a fundamental discriminant unless -m = 1 mod 4 fails
    if (-m) % 4 == 1:
        return m, f
    return 4 * m, f // 2


def _gegenbauer(k, t, n):
    """P_k(t, n): coefficient polynomial of the elliptic term.

    p_0 = 1, p_1 = t, p_m = t p_{m-1} - n p_{m-2}; returns p_{k-2}.
    """
    pm2, pm1 = 1, t
    if k == 2:
        return 1
    for _ in range(k - 3):
        pm2, pm1 = pm1, t * pm1 - n * pm2
    return pm1


def _euler_phi(n):
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _sigma_phi(e_minus_d, N):
    # sum of phi(gcd(tau, N/tau)) over tau | N with gcd(tau, N/tau) | (e - d)
    total = 0
    for tau in divisors(N):
        g = gcd(tau, N // tau)
        if e_minus_d % g == 0:
            total += _euler_phi(g)
    return total


def trace_tn(k, N, n, table=None):
    """Trace of T_n on S_k(Gamma_0(N)) for gcd(n, N) = 1, k even >= 2.

    Pure class-number arithmetic; raises TraceBudgetExceeded when 4n is
    beyond the table cap.
    """
    if k < 2 or k % 2:
        raise ValueError(f"weight must be even and >= 2, got {k}")
    if N < 1 or n < 1:
        raise ValueError("level and index must be >= 1")
    if gcd(n, N) != 1:
        raise ValueError(f"trace formula route needs gcd(n, N) = 1")
    table = table or _DEFAULT_TABLE
    if 4 * n > table.cap:
        raise TraceBudgetExceeded(
            f"tr T_{n} at level {N} needs class numbers up to {4 * n}, "
            f"cap is {table.cap}", k=k, N=N, n=n)
    level_fact = factorize(N)
    if any(e > 4 for e in level_fact.values()):
        raise ValueError("levels with a prime power beyond q^4 are "
                         "not supported by the trace route")
    table.ensure(4 * n)

    psi = N
    for q in level_fact:
        psi = psi // q * (q + 1)

    # elliptic + identity terms: -(1/2) sum over t^2 <= 4n
    elliptic = Fraction(0)
    tmax = isqrt(4 * n)
    for t in range(tmax + 1):
        weight = 1 if t == 0 else 2  # P_k is even in t for even k
        if t * t == 4 * n:
            loc = Fraction(-psi, 12)
        else:
            d0, f0 = _fundamental_split(4 * n - t * t, table)
            sig = {q: kronecker(-d0, q) for q in level_fact}
            acc = 0
            for g in divisors(f0):
                emb = table.h6_primitive(d0 * g * g)
                for q, nu in level_fact.items():
                    emb *= local_embedding_count(q, sig[q], _vq(g, q), nu)
                acc += emb
            loc = Fraction(acc, 6)
        if loc:
            elliptic += weight * _gegenbauer(k, t, n) * loc

    # hyperbolic term over divisor pairs d * e = n, d <= e
    hyper = Fraction(0)
    for d in divisors(n):
        e = n // d
        if d > e:
            break
        term = d ** (k - 1) * _sigma_phi(e - d, N)
        hyper += Fraction(term, 2) if d == e else term

    total = -elliptic / 2 - hyper
    if k == 2:
        total += sum(c for c in divisors(n) if gcd(c, N) == 1)
    if total.denominator != 1:
        raise ArithmeticError(
            f"non-integral trace {total} at (k={k}, N={N}, n={n})")
    return int(total)


def _vq(g, q):
    v = 0
    while g % q == 0:
        g //= q
        v += 1
    return v


def hecke_power_traces(k, N, p, count, table=None):
    """Power sums s_m = tr(T_p^m) on S_k(Gamma_0(N)) for m = 1..count.

    Converts tr T_{p^j} into traces of plain matrix powers through the
    Hecke recursion T_p T_{p^j} = T_{p^(j+1)} + p^(k-1) T_{p^(j-1)}.
    """
    dim = dim_cuspforms(k, N)
    t = [dim] + [trace_tn(k, N, p ** j, table) for j in range(1, count + 1)]
    scale = p ** (k - 1)
    out = []
    a = [0, 1]  # X = q_1
    for m in range(1, count + 1):
        out.append(sum(aj * t[j] for j, aj in enumerate(a) if aj))
        # multiply by X in the q_j basis
        nxt = [0] * (len(a) + 1)
        nxt[0] = scale * a[1] if len(a) > 1 else 0
        for j in range(1, len(a) + 1):
            nxt[j] = a[j - 1] + (scale * a[j + 1] if j + 1 < len(a) else 0)
        a = nxt
    return out


def trace_feasible(k, N, p, table=None):
    """Whether charpoly_from_traces can run to completion for (k, N, p)."""
    cap = (table or _DEFAULT_TABLE).cap
    if any(e > 4 for e in factorize(N).values()):
        return False
    return 4 * p ** dim_cuspforms(k, N) <= cap


def charpoly_from_traces(k, N, p, table=None):
    """det(1 - T_p X) on S_k(Gamma_0(N)) from the traces of T_p^m, m <= dim.

    Newton's identities over exact rationals; every elementary symmetric
    function must come out integral.
    """
    dim = dim_cuspforms(k, N)
    if dim == 0:
        return IntPolynomial([1])
    if 4 * p ** dim > (table or _DEFAULT_TABLE).cap:
        raise TraceBudgetExceeded(
            f"charpoly at (k={k}, N={N}, p={p}) needs tr T_{p}^{dim}",
            k=k, N=N, n=p ** dim)
    s = hecke_power_traces(k, N, p, dim, table)
    e = [Fraction(1)]
    for m in range(1, dim + 1):
        acc = Fraction(0)
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * s[i - 1]
        e.append(acc / m)
    coeffs = []
    for j, ej in enumerate(e):
        if ej.denominator != 1:
            raise ArithmeticError(f"non-integral charpoly coefficient {ej}")
        coeffs.append((-1) ** j * int(ej))
    return IntPolynomial(coeffs)
