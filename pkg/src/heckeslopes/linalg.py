"""Small exact linear algebra over Fraction: RREF (dense and sparse),
kernel bases, span membership with certificates, characteristic polynomials.

Everything is deterministic: pivoting always takes the first usable row /
smallest column, so repeated runs produce identical bases and matrices.
"""

from fractions import Fraction

__all__ = [
    "rref", "kernel_basis", "charpoly_monic", "SparseRREF", "SpanSolver",
]


def _frac_rows(rows):
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows, ncols=None):
    """Reduced row echelon form.

    Returns (matrix, pivot_columns).  Input rows are not modified.
    """
    mat = _frac_rows(rows)
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def kernel_basis(rows, ncols):
    """Basis of {v : A v = 0} for the matrix with the given rows.

    One basis vector per free column, in ascending free-column order; the
    vector for free column c has a 1 there, so the basis is deterministic
    and echelon-shaped.
    """
    mat, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -mat[r][fc]
        basis.append(tuple(v))
    return basis


def _brute_charpoly_2x2(m):
    a, b, c, d = m[0][0], m[0][1], m[1][0], m[1][1]
    return [a * d - b * c, -(a + d), Fraction(1)]


def charpoly_monic(M):
    """Coefficients of det(X*I - M), constant first, exact over Fraction.

    Similarity reduction to Hessenberg form followed by the standard
    leading-principal-minor recurrence; O(n^3) field operations, much
    faster than division-free methods once entries grow.
    """
    n = len(M)
    if n == 0:
        return [Fraction(1)]
    H = _frac_rows(M)
    if n == 1:
        return [-H[0][0], Fraction(1)]
    if n == 2:
        return _brute_charpoly_2x2(H)
    for c in range(n - 2):
        piv = None
        for r in range(c + 1, n):
            if H[r][c] != 0:
                piv = r
                break
        if piv is None:
            continue
        if piv != c + 1:
            # swap rows and the matching columns to keep similarity
            H[c + 1], H[piv] = H[piv], H[c + 1]
            for row in H:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = 1 / H[c + 1][c]
        for r in range(c + 2, n):
            f = H[r][c]
            if f == 0:
                continue
            f *= inv
            Hr, Hc1 = H[r], H[c + 1]
            for j in range(c, n):
                Hr[j] -= f * Hc1[j]
            # inverse column operation: col_{c+1} += f * col_r
            for row in H:
                row[c + 1] += f * row[r]
    # p_m(X) = det(X I - H[:m,:m]); expanding along the last column:
    # p_m = (X - H[m-1][m-1]) p_{m-1}
    #       - sum_{i>=1} H[m-1-i][m-1] * (prod of the i subdiagonal entries
    #                                     H[m-j][m-j-1], j=1..i) * p_{m-1-i}
    polys = [[Fraction(1)]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [Fraction(0)] * (m + 1)
        a = H[m - 1][m - 1]
        for i, ci in enumerate(prev):
            cur[i + 1] += ci
            cur[i] -= a * ci
        sub = Fraction(1)
        for i in range(1, m):
            sub *= H[m - i][m - i - 1]
            if sub == 0:
                break
            f = H[m - 1 - i][m - 1] * sub
            if f:
                for j, cj in enumerate(polys[m - 1 - i]):
                    cur[j] -= f * cj
        polys.append(cur)
    return polys[n]


class SparseRREF:
    """Incremental reduced echelon form for sparse integer/rational rows.

    Rows are dicts {column: coefficient}.  Insertion order is the
    deterministic part: each new row is reduced against current pivots,
    then (if nonzero) normalized and used to clear its column everywhere.
    """

    def __init__(self):
        self.pivot_rows = {}  # pivot column -> row dict (pivot coeff 1)

    def add_row(self, row):
        """Reduce row and absorb it; returns the new pivot column or None.

        Invariant: every stored pivot row has coefficient 1 at its pivot
        column and support otherwise only on free columns.
        """
        row = {c: Fraction(v) for c, v in row.items() if v}
        # eliminating a pivot column only introduces free columns, so one
        # sorted pass over the pivot columns initially present is complete
        for c in sorted(c for c in row if c in self.pivot_rows):
            f = row.pop(c, None)
            if not f:
                continue
            for k, v in self.pivot_rows[c].items():
                if k == c:
                    continue
                nv = row.get(k, Fraction(0)) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            return None
        c = min(row)
        inv = 1 / row[c]
        row = {k: v * inv for k, v in row.items()}
        for prow in self.pivot_rows.values():
            f = prow.get(c)
            if f:
                for k, v in row.items():
                    nv = prow.get(k, Fraction(0)) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
        self.pivot_rows[c] = row
        return c

    @property
    def pivot_columns(self):
        return sorted(self.pivot_rows)

    def reduce_vector(self, vec):
        """Image of a sparse vector in the quotient by the row span.

        Eliminates pivot coordinates, leaving a vector supported on free
        columns only.
        """
        vec = {c: Fraction(v) for c, v in vec.items() if v}
        for c in sorted(set(vec) & set(self.pivot_rows)):
            f = vec.pop(c, None)
            if not f:
                continue
            for k, v in self.pivot_rows[c].items():
                if k == c:
                    continue
                nv = vec.get(k, Fraction(0)) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec


class SpanSolver:
    """Exact membership test for the span of a fixed list of vectors.

    solve(target) returns coefficients x with sum x_i * basis_i == target,
    or raises ValueError when target is outside the span.  Used to restrict
    operators to invariant subspaces, where inconsistency means the
    subspace was not actually invariant.
    """

    def __init__(self, vectors):
        self.vectors = [tuple(Fraction(x) for x in v) for v in vectors]
        self._ech = []  # (pivot column, reduced vector, combination coeffs)
        n = len(self.vectors)
        for i, v in enumerate(self.vectors):
            coeffs = [Fraction(0)] * n
            coeffs[i] = Fraction(1)
            v = list(v)
            for pc, ev, ec in self._ech:
                f = v[pc]
                if f:
                    for j in range(len(v)):
                        v[j] -= f * ev[j]
                    for j in range(n):
                        coeffs[j] -= f * ec[j]
            pc = next((j for j, x in enumerate(v) if x != 0), None)
            if pc is None:
                raise ValueError("dependent basis vector")
            inv = 1 / v[pc]
            v = [x * inv for x in v]
            coeffs = [x * inv for x in coeffs]
            self._ech.append((pc, v, coeffs))

    def solve(self, target):
        v = [Fraction(x) for x in target]
        n = len(self.vectors)
        out = [Fraction(0)] * n
        for pc, ev, ec in self._ech:
            f = v[pc]
            if f:
                for j in range(len(v)):
                    v[j] -= f * ev[j]
                for j in range(n):
                    out[j] += f * ec[j]
        if any(v):
            raise ValueError("vector not in span")
        return out
