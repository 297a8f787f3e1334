"""Genus and cusp form dimension formulas for Gamma_0(N).

These are the classical index / elliptic point / cusp counts; they serve
as hard consistency checks for the modular symbols engine and as the
bookkeeping behind old/new decompositions at level N*p.
"""

from dataclasses import dataclass

from .exact import factorize, kronecker

__all__ = [
    "psi_index", "nu2", "nu3", "nu_infinity", "genus",
    "dim_cuspforms", "dim_new_at_p", "DimensionProfile", "dimension_profile",
]


def psi_index(N):
    """Index of Gamma_0(N) in SL_2(Z): N * prod_{p|N} (1 + 1/p)."""
    if N < 1:
        raise ValueError("level must be >= 1")
    out = N
    for p in factorize(N):
        out = out // p * (p + 1)
    return out


def nu2(N):
    """Number of elliptic points of order 2 on X_0(N)."""
    if N % 4 == 0:
        return 0
    out = 1
    for p in factorize(N):
        if p == 2:
            continue
        out *= 1 + kronecker(-1, p)
    return out


def nu3(N):
    """Number of elliptic points of order 3 on X_0(N)."""
    if N % 9 == 0:
        return 0
    out = 1
    for p in factorize(N):
        if p == 3:
            continue
        out *= 1 + kronecker(-3, p)
    return out


def nu_infinity(N):
    """Number of cusps of X_0(N): sum over d|N of phi(gcd(d, N/d))."""
    out = 0
    fac = factorize(N)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    for d in divs:
        g = _gcd(d, N // d)
        out += _euler_phi(g)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _euler_phi(n):
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def genus(N):
    """Genus of X_0(N)."""
    twelve_g = 12 + psi_index(N) - 3 * nu2(N) - 4 * nu3(N) - 6 * nu_infinity(N)
    if twelve_g % 12:
        raise ArithmeticError(f"genus formula not integral at N={N}")
    return twelve_g // 12


def dim_cuspforms(k, N):
    """dim S_k(Gamma_0(N)) for even k >= 2 (0 for k < 2 or odd k)."""
    if k < 2 or k % 2:
        return 0
    g = genus(N)
    if k == 2:
        return g
    d = (k - 1) * (g - 1) + (k // 2 - 1) * nu_infinity(N) \
        + (k // 4) * nu2(N) + (k // 3) * nu3(N)
    return d


def dim_new_at_p(k, N, p):
    """Dimension of the p-new subspace of S_k(Gamma_0(N*p)) for p not dividing N.

    Degeneracy maps embed two copies of S_k(Gamma_0(N)); what is left is new
    at p.  A negative value means inconsistent inputs and raises.
    """
    if N % p == 0:
        raise ValueError("p must not divide the base level")
    d = dim_cuspforms(k, N * p) - 2 * dim_cuspforms(k, N)
    if d < 0:
        raise ArithmeticError(f"negative p-new dimension at (k={k}, N={N}, p={p})")
    return d


@dataclass(frozen=True)
class DimensionProfile:
    """Old/new bookkeeping for S_k at level N*p."""
    k: int
    N: int
    p: int
    dim_base: int
    dim_full: int
    dim_new: int

    @property
    def dim_old(self):
        return 2 * self.dim_base


def dimension_profile(k, N, p):
    base = dim_cuspforms(k, N)
    full = dim_cuspforms(k, N * p)
    new = dim_new_at_p(k, N, p)
    return DimensionProfile(k=k, N=N, p=p, dim_base=base, dim_full=full, dim_new=new)
