"""Slope-side reasoning on top of the two characteristic-polynomial engines.

Everything in this module works with p-adic valuations only.  Hecke
eigenvalues are never materialized as algebraic numbers: a refinement
pair (the two roots of X^2 - a_p X + p^(k-1)) is read off the Newton
polygon through (0,0), (1, v_p(a_p)), (2, k-1), which depends on the
slope v_p(a_p) alone.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cache import fetch_or_compute
from .dimensions import dim_cuspforms
from .errors import ConsistencyError
from .exact import INFINITY, SlopeMultiset, is_prime, newton_slopes
from .modsym import charpoly_cuspidal
from .traceforms import charpoly_from_traces

ENGINES = ("modsym", "trace", "both")


@dataclass(frozen=True)
class HeckeContext:
    """A triple (p, N, k): prime, tame level with p not dividing N, even weight."""

    p: int
    N: int
    k: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("p must be prime, got %r" % (self.p,))
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError("N must be a positive integer, got %r" % (self.N,))
        if self.N % self.p == 0:
            raise ValueError("p = %d divides N = %d; the tame level must be prime to p"
                             % (self.p, self.N))
        if not isinstance(self.k, int) or self.k < 2 or self.k % 2:
            raise ValueError("k must be an even integer >= 2, got %r" % (self.k,))


def _charpoly(k, N, p, engine):
    if engine not in ENGINES:
        raise ValueError("engine must be one of %r, got %r" % (ENGINES, engine))
    if engine == "trace":
        return fetch_or_compute(p, N, k, "trace", lambda: charpoly_from_traces(k, N, p))
    f = fetch_or_compute(p, N, k, "modsym", lambda: charpoly_cuspidal(k, N, p))
    if engine == "both":
        g = fetch_or_compute(p, N, k, "trace", lambda: charpoly_from_traces(k, N, p))
        if f != g:
            raise ConsistencyError(
                "engine disagreement at (k=%d, N=%d, p=%d): modsym %r vs trace %r"
                % (k, N, p, list(f.coeffs), list(g.coeffs)))
    return f


def tp_slopes(ctx, engine="modsym"):
    """T_p slope multiset on S_k(Gamma_0(N)), plus the zero-eigenvalue count.

    Returns (SlopeMultiset, zero_count).  The multiset lists valuations of
    the nonzero eigenvalues only; zero_count = dim - effective degree of
    det(1 - T_p X) counts eigenvalues that are exactly zero.
    """
    dim = dim_cuspforms(ctx.k, ctx.N)
    if dim == 0:
        return SlopeMultiset(), 0
    f = _charpoly(ctx.k, ctx.N, ctx.p, engine)
    return newton_slopes(f, ctx.p), dim - max(f.degree, 0)


def regularity_weight_range(p):
    """Weights Definition-style regularity inspects: 2..floor((p+3)/2), but {2,3,4} at p=2."""
    if p == 2:
        return (2, 3, 4)
    return tuple(range(2, (p + 3) // 2 + 1))


@dataclass(frozen=True)
class RegularityRow:
    k: int
    slopes: SlopeMultiset
    dim: int
    zero_count: int


@dataclass(frozen=True)
class RegularityVerdict:
    p: int
    N: int
    regular: bool
    table: tuple  # RegularityRow per weight in regularity_weight_range(p)
    j: int | None  # least violating weight; present iff not regular


def _row_violates(p, row):
    # A zero eigenvalue is maximally non-ordinary, so it always violates.
    if row.zero_count:
        return True
    allowed = {0, 1} if (p == 2 and row.k == 4) else {0}
    return any(Fraction(s) not in allowed for s, _ in row.slopes)


def is_regular(p, N, engine="modsym"):
    """Decide Gamma_0(N)-regularity of p from low-weight T_p slopes.

    Odd p is regular iff every T_p slope on S_k(Gamma_0(N)) vanishes for
    integer k in 2..floor((p+3)/2); p = 2 additionally inspects weight 4,
    where slopes 0 and 1 are both allowed.  Odd weights contribute
    zero-dimensional spaces and are recorded as vacuous rows without any
    computation.
    """
    if not is_prime(p):
        raise ValueError("p must be prime, got %r" % (p,))
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer, got %r" % (N,))
    if N % p == 0:
        raise ValueError("p = %d divides N = %d; regularity is defined for tame levels"
                         % (p, N))
    table = []
    j = None
    for k in regularity_weight_range(p):
        if k % 2:
            table.append(RegularityRow(k, SlopeMultiset(), 0, 0))
            continue
        slopes, zero_count = tp_slopes(HeckeContext(p, N, k), engine)
        row = RegularityRow(k, slopes, dim_cuspforms(k, N), zero_count)
        table.append(row)
        if j is None and _row_violates(p, row):
            j = k
    return RegularityVerdict(p, N, j is None, tuple(table), j)


def refinement_pair(v, k):
    """Slopes of the two refinements attached to a T_p slope v in weight k.

    Newton polygon of X^2 - a_p X + p^(k-1) through (0,0), (1,v), (2,k-1):
    pair {v, k-1-v} when v < (k-1)/2, and the tie {(k-1)/2, (k-1)/2}
    otherwise.  v = INFINITY (zero eigenvalue) lands in the tie case.
    """
    half = Fraction(k - 1, 2)
    if v is INFINITY or Fraction(v) >= half:
        return SlopeMultiset(((half, 2),))
    v = Fraction(v)
    return SlopeMultiset.of_slopes((v, k - 1 - v))


@dataclass(frozen=True)
class UpSlopeAssembly:
    p: int
    N: int
    k: int
    old_pairs: tuple  # (source T_p slope or INFINITY, SlopeMultiset pair) per eigenvalue
    new_slope: Fraction  # (k-2)/2, from lambda^2 = p^(k-2) on the p-new part
    new_multiplicity: int
    combined: SlopeMultiset


def up_assembly(ctx, engine="modsym"):
    """Predicted U_p slopes on S_k(Gamma_0(Np)) from T_p data at level N.

    Each level-N eigenvalue contributes its refinement pair; the p-new
    part contributes dim S_k(Np) - 2 dim S_k(N) copies of (k-2)/2.  A
    negative new multiplicity cannot happen for p not dividing N and is
    reported as a consistency failure.
    """
    slopes, zero_count = tp_slopes(ctx, engine)
    pairs = [(v, refinement_pair(v, ctx.k)) for v in slopes.as_list()]
    pairs.extend((INFINITY, refinement_pair(INFINITY, ctx.k)) for _ in range(zero_count))
    dim_tame = dim_cuspforms(ctx.k, ctx.N)
    dim_full = dim_cuspforms(ctx.k, ctx.N * ctx.p)
    new_mult = dim_full - 2 * dim_tame
    if new_mult < 0:
        raise ConsistencyError(
            "negative p-new dimension at (k=%d, N=%d, p=%d): %d - 2*%d"
            % (ctx.k, ctx.N, ctx.p, dim_full, dim_tame))
    new_slope = Fraction(ctx.k - 2, 2)
    combined = SlopeMultiset(((new_slope, new_mult),))
    for _, pair in pairs:
        combined = combined.union(pair)
    if combined.total != dim_full:
        raise ConsistencyError(
            "assembled %d slopes but dim S_%d(Gamma_0(%d)) = %d"
            % (combined.total, ctx.k, ctx.N * ctx.p, dim_full))
    return UpSlopeAssembly(ctx.p, ctx.N, ctx.k, tuple(pairs), new_slope, new_mult, combined)


def up_slopes_direct(ctx):
    """U_p slopes at level Np computed directly by the modular symbols engine."""
    dim = dim_cuspforms(ctx.k, ctx.N * ctx.p)
    if dim == 0:
        return SlopeMultiset()
    f = fetch_or_compute(ctx.p, ctx.N * ctx.p, ctx.k, "modsym",
                         lambda: charpoly_cuspidal(ctx.k, ctx.N * ctx.p, ctx.p))
    if f.degree < dim:
        # U_p is invertible here: old eigenvalues multiply to p^(k-1) per
        # pair and new ones square to p^(k-2), so a vanishing eigenvalue
        # means an engine bug, not mathematics.
        raise ConsistencyError(
            "U_%d has %d zero eigenvalues on S_%d(Gamma_0(%d))"
            % (ctx.p, dim - max(f.degree, 0), ctx.k, ctx.N * ctx.p))
    return newton_slopes(f, ctx.p)


@dataclass(frozen=True)
class Witness:
    """An even weight whose U_p slope multiset meets (0, 1)."""

    k: int
    slope: Fraction
    source: str  # "direct" (level Np computation) or "old-refinement" (T_p slope)


def default_witness_bound(p, j):
    """Search bound when none is given: max(50, j + 2(p-1)), j = 0 if regular."""
    return max(50, (j or 0) + 2 * (p - 1))


def find_fractional_witness(p, N, k_max=None, engine="modsym"):
    """Scan even weights for a U_p slope strictly between 0 and 1 at level Np.

    Weight 2 is examined directly at level Np; for k > 2 the slopes of
    U_p in (0,1) agree with those of T_p at level N, so the tame-level
    polynomial is used.  Returns the first hit (smallest weight, then
    smallest slope) or None; the theorem behind the search gives no
    effective bound, so exhausting k_max is a legitimate "not found".
    """
    if k_max is None:
        verdict = is_regular(p, N, engine)
        k_max = default_witness_bound(p, verdict.j)
    for k in range(2, k_max + 1, 2):
        ctx = HeckeContext(p, N, k)
        if k == 2:
            band = up_slopes_direct(ctx).in_open_interval(0, 1)
            source = "direct"
        else:
            band = tp_slopes(ctx, engine)[0].in_open_interval(0, 1)
            source = "old-refinement"
        if band:
            slope = band.as_list()[0]
            if not classicality_filter(slope, k):
                raise ConsistencyError(
                    "witness slope %s at weight %d is not classical" % (slope, k))
            return Witness(k, slope, source)
    return None


@dataclass(frozen=True)
class WitnessReport:
    p: int
    N: int
    j: int
    witness: Witness | None
    predicted: tuple  # (j, j + (p-1))
    match: bool | None  # None when the search was inconclusive
    label: str


def minimal_witness_report(p, N, k_max=None, engine="modsym"):
    """Compare the minimal witness weight against the heuristic {j, j + (p-1)}.

    Only meaningful for an irregular pair; a regular input is rejected.
    A witness weight outside the predicted set is an observation worth
    reporting, never an error: the heuristic is numerical, not proved.
    """
    verdict = is_regular(p, N, engine)
    if verdict.regular:
        raise ValueError("(%d, %d) is regular; no witness weight to compare" % (p, N))
    j = verdict.j
    if k_max is None:
        k_max = default_witness_bound(p, j)
    witness = find_fractional_witness(p, N, k_max, engine)
    predicted = (j, j + p - 1)
    if witness is None:
        return WitnessReport(p, N, j, None, predicted, None,
                             "inconclusive: no fractional slope up to k_max=%d" % k_max)
    if witness.k == j:
        label = "k = j"
    elif witness.k == predicted[1]:
        label = "k = j + (p-1)"
    else:
        label = ("mismatch: minimal witness k=%d outside {%d, %d}"
                 % (witness.k, predicted[0], predicted[1]))
    return WitnessReport(p, N, j, witness, predicted, witness.k in predicted, label)


def weight_sequence(j, p, n):
    """The weight 2 + j + (p-1)*p^n; constant j residue 2 + j mod (p-1)."""
    if not isinstance(j, int) or j < 0:
        raise ValueError("j must be an integer >= 0")
    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be an integer >= 0")
    if not is_prime(p):
        raise ValueError("p must be prime")
    return 2 + j + (p - 1) * p ** n


def classicality_filter(h, k):
    """Coleman's criterion as a filter: slope h forces a classical form iff h < k-1."""
    h = Fraction(h)
    if h < 0:
        raise ValueError("slopes are nonnegative")
    return h < k - 1


@dataclass(frozen=True)
class P2Refinement:
    k: int
    source: object  # violating T_2 slope (Fraction) or INFINITY
    pair: SlopeMultiset


@dataclass(frozen=True)
class P2Report:
    N: int
    rows: tuple  # RegularityRow for weights 2 and 4
    already_fractional: tuple  # (k, slope, mult) for non-integral T_2 slopes
    refinements: tuple  # P2Refinement per integral (or zero) violating eigenvalue


def p2_refinement_check(N):
    """Check that breaking 2-regularity forces fractional slopes somewhere.

    A non-integral T_2 slope on S_2 or S_4 at level N is fractional as it
    stands and is reported directly.  Every other violating eigenvalue
    (weight-2 slope 1, weight-4 slope 2 or 3, or an exactly-zero
    eigenvalue) is refined; its pair must come out fractional ({1/2,1/2}
    from weight 2, {3/2,3/2} from weight 4) and an integral pair is a
    hard failure.
    """
    if N % 2 == 0:
        raise ValueError("N must be odd, got %d" % N)
    verdict = is_regular(2, N)
    rows = tuple(row for row in verdict.table if row.k % 2 == 0)
    fractional = []
    refinements = []
    for row in rows:
        for s, mult in row.slopes:
            if Fraction(s).denominator != 1:
                fractional.append((row.k, s, mult))
            elif _row_violates(2, RegularityRow(row.k, SlopeMultiset(((s, 1),)), 1, 0)):
                refinements.extend(
                    P2Refinement(row.k, s, refinement_pair(s, row.k)) for _ in range(mult))
        refinements.extend(
            P2Refinement(row.k, INFINITY, refinement_pair(INFINITY, row.k))
            for _ in range(row.zero_count))
    for ref in refinements:
        if all(Fraction(s).denominator == 1 for s, _ in ref.pair):
            raise ConsistencyError(
                "refinement of weight-%d slope %s at level %d is integral: %r"
                % (ref.k, ref.source, N, ref.pair))
    return P2Report(N, rows, tuple(fractional), tuple(refinements))
