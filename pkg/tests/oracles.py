"""Independent reference computations used to pin expected values.

Nothing here imports from the package's math internals: q-expansions
come from eta products, class numbers from a direct reduced-form
enumeration (a different normal form than the library uses), and
characteristic polynomials from cofactor expansion.  Agreement between
these and the package is the point of the tests, so keep it that way.
"""

from fractions import Fraction
from math import isqrt


# ----------------------------------------------------------------------
# q-expansions of eta products

def eta_product_qexp(factors, terms):
    """Coefficients c[0..terms-1] of prod eta(s*z)^e for factors ((s, e), ...).

    The eta prefactor q^(s*e/24) must come out integral over the whole
    product (true for every form used here).
    """
    shift, rem = divmod(sum(s * e for s, e in factors), 24)
    if rem:
        raise ValueError("eta prefactor is not an integral power of q")
    coeffs = [0] * terms
    coeffs[0] = 1
    for s, e in factors:
        for _ in range(e):
            # multiply by (1 - q^(s*m)) for all relevant m
            for m in range(1, (terms - 1) // s + 1):
                step = s * m
                for n in range(terms - 1, step - 1, -1):
                    coeffs[n] -= coeffs[n - step]
    out = [0] * terms
    for n in range(terms - shift):
        out[n + shift] = coeffs[n]
    return out


def delta_coefficients(terms):
    """tau(n) at index n, from q times the 24th power of prod(1-q^m)."""
    return eta_product_qexp(((1, 24),), terms)


# weight, level -> eta factors for the one-dimensional cusp spaces used as pins
ETA_SPACES = {
    (2, 11): ((1, 2), (11, 2)),
    (8, 2): ((1, 8), (2, 8)),
    (6, 4): ((2, 12),),
    (4, 8): ((2, 4), (4, 4)),
    (4, 9): ((3, 8),),
}


def eta_space_coefficient(k, M, n):
    """n-th q-coefficient of the unique normalized cusp form in ETA_SPACES."""
    return eta_product_qexp(ETA_SPACES[(k, M)], n + 1)[n]


# ----------------------------------------------------------------------
# Hurwitz class numbers, enumerated with the |b| <= a <= c normal form

def hurwitz_reference(n):
    """H(n) by brute force: reduced forms weighted 1/2 on (d,0,d), 1/3 on (d,d,d).

    Reduction convention: |b| <= a <= c with b >= 0 whenever |b| = a or
    a = c; iteration is b-outer, unlike the library's a-outer loop.
    """
    if n == 0:
        return Fraction(-1, 12)
    if n < 0 or n % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    for b in range(n % 2, isqrt(n // 3) + 1, 2):
        m = (n + b * b) // 4
        for a in range(max(b, 1), isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            if b == 0:
                total += Fraction(1, 2) if a == c else Fraction(1)
            elif b == a:
                total += Fraction(1, 3) if a == c else Fraction(1)
            elif a == c:
                total += Fraction(1)
            else:
                total += Fraction(2)  # (a, b, c) and (a, -b, c)
    return total


# ----------------------------------------------------------------------
# characteristic polynomials by cofactor expansion (small matrices only)

def _padd(f, g):
    out = [Fraction(0)] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return out


def _pmul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _pdet(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = [Fraction(0)]
    for j in range(n):
        minor = [[row[jj] for jj in range(n) if jj != j] for row in rows[1:]]
        term = _pmul(rows[0][j], _pdet(minor))
        if j % 2:
            term = [-c for c in term]
        total = _padd(total, term)
    return total


def charpoly_reference(mat):
    """Coefficients of det(xI - mat), constant term first, monic."""
    n = len(mat)
    rows = [[[Fraction(-mat[i][j]), Fraction(1)] if i == j else [Fraction(-mat[i][j])]
             for j in range(n)] for i in range(n)]
    out = _pdet(rows)
    out += [Fraction(0)] * (n + 1 - len(out))
    return out


def inverse_charpoly_reference(mat):
    """Coefficients of det(1 - mat*X), constant first, length n+1."""
    # det(1 - MX) = X^n * charpoly(M)(1/X): reverse the monic charpoly
    return list(reversed(charpoly_reference(mat)))
