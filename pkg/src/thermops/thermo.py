"""Thermo-majorisation: beta-ordering, curves and ordering checks, the
rational embedding bridge to plain majorisation, constructive Gibbs-stochastic
synthesis, an independent linear-programming feasibility oracle, and a
degenerate-bath simulation that realises a target Gibbs-stochastic matrix
from permutations on a constant-energy block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .core import (
    DEFAULT_EPS,
    GibbsContext,
    PLCurve,
    ProbVec,
    StochasticMatrix,
    curve_dominates,
)
from .errors import (
    ApproximationError,
    DimensionMismatchError,
    InvalidInputError,
    OrderingError,
    ResolutionError,
)
from .majorization import hlp_construct, majorizes


@dataclass(frozen=True)
class BetaOrder:
    """Permutation pi sorting the ratios x_i / g_i non-increasingly.

    Stored 0-based; `ranks` lists source indices, so ranks[0] is the index
    with the largest ratio. Ties are broken by ascending index (stable).
    """

    ranks: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.ranks, dtype=int)
        if sorted(arr.tolist()) != list(range(len(arr))):
            raise InvalidInputError("not a permutation")
        object.__setattr__(self, "ranks", arr)
        arr.setflags(write=False)

    def one_based(self) -> tuple:
        return tuple(int(i) + 1 for i in self.ranks)


@dataclass(frozen=True)
class EmbeddingSpec:
    """Integer weights d approximating the thermal vector as d_i / D."""

    d: np.ndarray
    approx_error: float

    def __post_init__(self):
        arr = np.asarray(self.d, dtype=int)
        if np.any(arr < 1):
            raise InvalidInputError("all embedding weights must be >= 1")
        object.__setattr__(self, "d", arr)
        arr.setflags(write=False)

    @property
    def D(self) -> int:
        return int(self.d.sum())

    @property
    def n(self) -> int:
        return len(self.d)

    def blocks(self):
        """Index ranges [start, stop) of each block in the embedded space."""
        stops = np.cumsum(self.d)
        starts = stops - self.d
        return list(zip(starts.tolist(), stops.tolist()))

    def rational_gibbs(self) -> ProbVec:
        return ProbVec(self.d / self.D)


def beta_order(x: ProbVec, ctx: GibbsContext) -> BetaOrder:
    if len(x) != ctx.n:
        raise DimensionMismatchError("state/context dimension mismatch")
    ratios = x.p / ctx.gibbs.p
    return BetaOrder(np.argsort(-ratios, kind="stable"))


def thermo_curve(x: ProbVec, ctx: GibbsContext) -> PLCurve:
    """Concave curve joining the origin and the beta-ordered cumulative points
    (sum of Boltzmann weights, sum of populations); ends at (Z, 1)."""
    order = beta_order(x, ctx).ranks
    w = ctx.boltzmann_weights()[order]
    pts = np.zeros((ctx.n + 1, 2))
    pts[1:, 0] = np.cumsum(w)
    pts[1:, 1] = np.cumsum(x.p[order])
    return PLCurve(pts)


def thermo_majorizes(x: ProbVec, y: ProbVec, ctx: GibbsContext, eps: float = DEFAULT_EPS) -> bool:
    """True iff the thermal curve of x lies nowhere below that of y."""
    if len(x) != len(y):
        raise DimensionMismatchError("thermo_majorizes requires equal dimensions")
    return curve_dominates(thermo_curve(x, ctx), thermo_curve(y, ctx), eps)


def _round_to_weights(g: np.ndarray, D: int) -> np.ndarray:
    """Largest-remainder rounding of g*D to integers summing to D, min 1."""
    raw = g * D
    d = np.floor(raw).astype(int)
    rem = raw - d
    short = D - d.sum()
    if short > 0:
        for i in np.argsort(-rem, kind="stable")[:short]:
            d[i] += 1
    # guarantee every level at least one slot, stealing from the largest
    while np.any(d < 1):
        d[np.argmax(d)] -= 1
        d[np.argmin(d)] += 1
    return d


def rationalize(ctx: GibbsContext, d_max: int) -> EmbeddingSpec:
    """Best rational approximation g ~ d/D with D <= d_max.

    Scans every denominator, keeping the smallest worst-case error
    max_i |g_i - d_i/D|; the error is always reported, never hidden.
    """
    n = ctx.n
    if d_max < n:
        raise InvalidInputError(f"d_max must be at least the dimension {n}")
    g = ctx.gibbs.p
    best = None
    for D in range(n, int(d_max) + 1):
        d = _round_to_weights(g, D)
        err = np.max(np.abs(g - d / D))
        if best is None or err < best[1] - 1e-18:
            best = (d, float(err))
            if err == 0.0:
                break
    return EmbeddingSpec(best[0], best[1])


def embed(x: ProbVec, spec: EmbeddingSpec) -> ProbVec:
    """Expand entry i into d_i equal parts x_i / d_i."""
    if len(x) != spec.n:
        raise DimensionMismatchError("state/spec dimension mismatch")
    return ProbVec(np.repeat(x.p / spec.d, spec.d))


def unembed(p: ProbVec, spec: EmbeddingSpec) -> ProbVec:
    """Sum each block back; left inverse of embed up to one rounding.

    Bit-uniform blocks (the image of embed) are recovered with the single
    multiplication d * value, so the round trip is exact whenever IEEE
    arithmetic allows (always for power-of-two weights, and within one ulp
    otherwise)."""
    if len(p) != spec.D:
        raise DimensionMismatchError("embedded vector has wrong dimension")
    out = np.empty(spec.n)
    for i, (a, b) in enumerate(spec.blocks()):
        block = p.p[a:b]
        if np.all(block == block[0]):
            out[i] = (b - a) * block[0]
        else:
            out[i] = math.fsum(block)
    return ProbVec(out)


def construct_gibbs_stochastic(
    x: ProbVec,
    y: ProbVec,
    ctx: GibbsContext,
    d_max: int = 128,
    eps: float = DEFAULT_EPS,
) -> StochasticMatrix:
    """Synthesise G with G x = y and G fixing the (rationalised) thermal vector.

    Route: rationalise g as d/D, lift x and y with the embedding map, run the
    T-transform construction in dimension D, and compress back by summing
    block rows and averaging block columns. Averaging is valid because
    embedded inputs are uniform within blocks, and it preserves both the
    column sums and the d/D fixed point exactly.
    """
    if len(x) != len(y) or len(x) != ctx.n:
        raise DimensionMismatchError("construct requires matching dimensions")
    if not thermo_majorizes(x, y, ctx, eps):
        raise OrderingError("x does not thermo-majorise y")
    spec = rationalize(ctx, d_max)
    ex, ey = embed(x, spec), embed(y, spec)
    if not majorizes(ex, ey, eps):
        raise ApproximationError(
            "embedded majorisation fails at denominator cap "
            f"{d_max} (approx error {spec.approx_error:.3e}); raise d_max",
            approx_error=spec.approx_error,
        )
    chain = hlp_construct(ex, ey, eps)
    D, n = spec.D, spec.n
    # Need row/column block aggregates of B = chain.matrix() without forming
    # the dense D x D product: W = B^T U^T for U the n x D block indicator,
    # computed by applying the (symmetric) transforms to U^T in reverse.
    u = np.zeros((D, n))
    starts_stops = spec.blocks()
    for i, (a, b) in enumerate(starts_stops):
        u[a:b, i] = 1.0
    if chain.perm is not None:
        # (P M)^T U0 = M^T (P^T U0); P^T scatters row r to row perm[r]
        scattered = np.empty_like(u)
        scattered[chain.perm] = u
        u = scattered
    for tr in reversed(chain):
        ri, rj = u[tr.i].copy(), u[tr.j].copy()
        u[tr.i] = tr.t * ri + (1.0 - tr.t) * rj
        u[tr.j] = (1.0 - tr.t) * ri + tr.t * rj
    # u[c, i] = sum over block-i rows of B, column c; average over block cols
    g_entries = np.empty((n, n))
    for j, (a, b) in enumerate(starts_stops):
        g_entries[:, j] = u[a:b, :].sum(axis=0) / spec.d[j]
    return StochasticMatrix(g_entries)


def feasibility_lp_oracle(x: ProbVec, y: ProbVec, g: ProbVec) -> bool:
    """Decide by exact linear feasibility whether some column-stochastic G has
    G x = y and G g = g. Independent of the curve machinery; n^2 variables
    with 3n equality constraints, solved with the HiGHS phase-1."""
    n = len(x)
    if len(y) != n or len(g) != n:
        raise DimensionMismatchError("oracle requires equal dimensions")
    if np.any(g.p <= 0):
        raise InvalidInputError("thermal vector must be strictly positive")
    nv = n * n  # variable (i, j) at index i * n + j
    a_eq = np.zeros((3 * n, nv))
    b_eq = np.zeros(3 * n)
    for j in range(n):  # column sums
        a_eq[j, j::n] = 1.0
        b_eq[j] = 1.0
    for i in range(n):  # G x = y
        a_eq[n + i, i * n : (i + 1) * n] = x.p
        b_eq[n + i] = y.p[i]
    for i in range(n):  # G g = g
        a_eq[2 * n + i, i * n : (i + 1) * n] = g.p
        b_eq[2 * n + i] = g.p[i]
    res = linprog(
        c=np.zeros(nv),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=(0.0, 1.0),
        method="highs",
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise RuntimeError(f"LP solver failed with status {res.status}: {res.message}")


def _rebalance_to_marginals(real: np.ndarray, row_marg, col_marg) -> np.ndarray:
    """Nearest matrix (entrywise, measured in column-marginal units) to `real`
    with the exact integer marginals; tiny deterministic LP."""
    n_r, n_c = real.shape
    nv = n_r * n_c
    a_eq = np.zeros((n_r + n_c, nv + 1))
    b_eq = np.concatenate([row_marg, col_marg]).astype(float)
    for i in range(n_r):
        a_eq[i, i * n_c : (i + 1) * n_c] = 1.0
    for j in range(n_c):
        a_eq[n_r + j, j:nv:n_c] = 1.0
    a_ub = np.zeros((2 * nv, nv + 1))
    b_ub = np.zeros(2 * nv)
    scale = np.tile(np.asarray(col_marg, dtype=float), n_r)
    idx = np.arange(nv)
    a_ub[idx, idx] = 1.0
    a_ub[idx, nv] = -scale
    b_ub[:nv] = real.ravel()
    a_ub[nv + idx, idx] = -1.0
    a_ub[nv + idx, nv] = -scale
    b_ub[nv:] = -real.ravel()
    c = np.zeros(nv + 1)
    c[nv] = 1.0
    bounds = [(0.0, None)] * nv + [(0.0, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        raise ResolutionError("marginal rebalancing infeasible; increase the degeneracy scale")
    return res.x[:nv].reshape(n_r, n_c)


def _cycle_round(real: np.ndarray) -> np.ndarray:
    """Round a matrix with integer marginals to an integer matrix with the
    same marginals, moving every entry by strictly less than one.

    Fractional entries are edges of a bipartite row/column graph in which
    every incident node has degree >= 2 (fractional parts at a node sum to an
    integer), so they always contain a cycle; pushing mass alternately around
    a cycle until some entry hits its floor or ceiling keeps both marginals
    and every entry inside [floor, ceil], and removes at least one fractional
    entry per pass.
    """
    m = real.copy()
    tol = 1e-9
    for _ in range(2 * m.size + 2):
        frac = np.abs(m - np.rint(m)) > tol
        if not frac.any():
            break
        i0, j0 = (int(v) for v in np.argwhere(frac)[0])
        # walk row -> column -> row ... along fractional edges, never reusing
        # the edge just traversed, until a node repeats
        node_pos = {("r", i0): 0}
        edges = []
        cur, prev_edge = ("r", i0), None
        while True:
            if cur[0] == "r":
                i = cur[1]
                cands = [int(jj) for jj in np.nonzero(frac[i])[0] if (i, int(jj)) != prev_edge]
                if not cands:
                    raise ResolutionError("fractional graph lost its cycle structure")
                edge, nxt = (i, cands[0]), ("c", cands[0])
            else:
                j = cur[1]
                cands = [int(ii) for ii in np.nonzero(frac[:, j])[0] if (int(ii), j) != prev_edge]
                if not cands:
                    raise ResolutionError("fractional graph lost its cycle structure")
                edge, nxt = (cands[0], j), ("r", cands[0])
            edges.append(edge)
            prev_edge = edge
            if nxt in node_pos:
                cycle = edges[node_pos[nxt]:]
                break
            node_pos[nxt] = len(node_pos)
            cur = nxt
        up, dn = cycle[0::2], cycle[1::2]
        delta = min(
            min(np.ceil(m[e] - tol) - m[e] for e in up),
            min(m[e] - np.floor(m[e] + tol) for e in dn),
        )
        for e in up:
            m[e] += delta
        for e in dn:
            m[e] -= delta
    out = np.rint(m).astype(np.int64)
    if np.max(np.abs(out - m)) > 1e-6:
        raise ResolutionError("cycle rounding did not converge")
    return out


def _integer_transport(real: np.ndarray, row_marg, col_marg) -> np.ndarray:
    """Non-negative integer matrix with the given integer marginals, staying
    within one unit (plus the marginal-rebalancing shift) of `real`."""
    balanced = _rebalance_to_marginals(real, row_marg, col_marg)
    counts = _cycle_round(balanced)
    if np.any(counts < 0):
        raise ResolutionError("integer transport produced negative counts")
    if np.any(counts.sum(axis=1) != np.asarray(row_marg)) or np.any(
        counts.sum(axis=0) != np.asarray(col_marg)
    ):
        raise ResolutionError("integer transport failed; increase the degeneracy scale")
    return counts


def bath_model_simulate(
    g_target: StochasticMatrix, ctx: GibbsContext, gE: int
) -> tuple[StochasticMatrix, float]:
    """Realise a Gibbs-stochastic target from one constant-energy bath block.

    A block at total energy E holds d_i = round(gE * exp(-beta(E_i - E_min)))
    states for each system level i; permuting them transfers n_(i|j) of the
    d_j states of level j to level i, inducing G_(i|j) = n_(i|j)/d_j. The
    induced matrix is exactly stochastic and exactly fixes the rounded
    thermal vector d/D; its distance to the target (the returned residual)
    shrinks as the degeneracy scale gE grows.
    """
    n = ctx.n
    if g_target.n != n:
        raise DimensionMismatchError("target/context dimension mismatch")
    if not g_target.fixes(ctx.gibbs, tol=1e-9):
        raise InvalidInputError("target matrix does not preserve the thermal vector")
    e = ctx.spectrum.energies
    d = np.rint(gE * np.exp(-ctx.beta * (e - e.min()))).astype(np.int64)
    if np.any(d < 1):
        raise ResolutionError(
            "degeneracy scale too small: some level would get zero bath states"
        )
    # column sums of G diag(d) are exactly d_j; row sums miss d_i only by the
    # rounding of d itself, which the marginal rebalancing absorbs
    real = g_target.entries * d[None, :]
    counts = _integer_transport(real, d, d)
    induced = StochasticMatrix(counts / d[None, :])
    residual = float(np.max(np.abs(induced.entries - g_target.entries)))
    return induced, residual
