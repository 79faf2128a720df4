"""Separation profiles: exact brute force, sampled estimates, growth classes.

The profile of a graph at n is the largest cut number over subgraphs with at
most n vertices.  Exhausting all subgraphs is only possible for tiny graphs;
beyond that we sample declared candidate families (balls, annuli, sphere
shells, square subgrids, explicit lists) and treat the resulting curve as a
lower-bound sample of the true profile.  Growth classification fits constant,
logarithmic, and power models and refuses to pick one when the fit is poor;
profile comparisons search for small witnesses of the scale-insensitive
order g(n) <= D*h(D*n) + D and report them as finite-range evidence only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import InputError
from .graph import Graph, as_vertex_set, bfs_root, induced_subgraph, neighborhood
from .separator import CutBounds, cut_bounds, cut_exact_subsets


@dataclass
class ProfilePoint:
    n: int
    lower: int
    upper: int
    source: str
    family: str


@dataclass
class ProfileCurve:
    """Aggregated cut bounds per subgraph size, ascending in n.

    Aggregation keeps, for every n that occurred, the largest lower bound
    and the smallest upper bound (clamped to stay an interval).  The curve
    samples candidate subgraphs only: it is evidence about the profile from
    below, never the full supremum.
    """
    points: list[ProfilePoint]
    family: str

    def __post_init__(self):
        ns = [p.n for p in self.points]
        if ns != sorted(set(ns)):
            raise InputError("profile points must be strictly increasing in n")
        for p in self.points:
            if p.lower > p.upper:
                raise InputError(f"lower > upper at n={p.n}")

    @property
    def ns(self) -> list[int]:
        return [p.n for p in self.points]

    def lower_envelope(self) -> list[tuple[int, int]]:
        """Running maximum of lower bounds: the profile lower estimate."""
        out, best = [], 0
        for p in self.points:
            best = max(best, p.lower)
            out.append((p.n, best))
        return out

    def to_rows(self) -> list[tuple]:
        return [(p.family, p.n, p.lower, p.upper, p.source) for p in self.points]


def aggregate_points(points: list[ProfilePoint], family: str) -> ProfileCurve:
    """Bucket raw points by n (max lower, min upper) into a ProfileCurve."""
    buckets: dict[int, ProfilePoint] = {}
    for p in points:
        cur = buckets.get(p.n)
        if cur is None:
            buckets[p.n] = ProfilePoint(p.n, p.lower, p.upper, p.source, family)
            continue
        if p.lower > cur.lower:
            cur.lower = p.lower
            cur.source = p.source
        cur.upper = min(cur.upper, p.upper)
        cur.upper = max(cur.upper, cur.lower)
    return ProfileCurve(points=[buckets[n] for n in sorted(buckets)], family=family)


def sep_exact_bruteforce(g: Graph, n_max: int | None = None) -> ProfileCurve:
    """Exact profile by enumerating every induced subgraph (tiny graphs only).

    Connectivity is not required of subgraphs.  The subset oracle fixes the
    degenerate conventions: the empty graph needs no cut, a single vertex
    needs one (removing nothing leaves a too-large component).
    """
    if g.n > 12:
        raise InputError(f"brute force capped at 12 vertices, got {g.n}")
    if n_max is None:
        n_max = g.n
    if not 0 <= n_max <= g.n:
        raise InputError(f"n_max must lie in [0, {g.n}]")
    points = []
    best, best_src = 0, "empty"
    points.append(ProfilePoint(0, 0, 0, "empty", "exact-bruteforce"))
    for k in range(1, n_max + 1):
        for sub in combinations(range(g.n), k):
            cert = cut_exact_subsets(induced_subgraph(g, list(sub)).graph)
            if cert.value > best:
                best, best_src = cert.value, f"subset {list(sub)}"
        points.append(ProfilePoint(k, best, best, best_src, "exact-bruteforce"))
    return ProfileCurve(points=points, family="exact-bruteforce")


def _ball_candidates(g: Graph, b, budget):
    for r in range(0, b.radius + 1):
        yield f"ball r={r}", b.ball(r)


def _annulus_candidates(g: Graph, b, budget):
    for r in range(1, b.radius // 2 + 1):
        members = np.nonzero((b.dist > r) & (b.dist <= 2 * r))[0]
        if members.size:
            yield f"annulus ({r},{2 * r}]", members


def _shell_candidates(g: Graph, b, delta, budget):
    for r in range(1, b.radius - delta + 1):
        yield f"shell r={r} d={delta}", neighborhood(g, b.sphere(r), delta)


def _subgrid_candidates(rows: int, cols: int):
    for k in range(2, min(rows, cols) + 1):
        ids = np.array([i * cols + j for i in range(k) for j in range(k)],
                       dtype=np.int64)
        yield f"subgrid {k}x{k}", ids


FAMILY_KINDS = ("balls", "annuli", "sphere-shells", "square-subgrids", "explicit")


def profile_estimate(g: Graph, family: dict, beta=Fraction(1, 2),
                     budget: int | None = None, **engine_opts) -> ProfileCurve:
    """Cut bounds over one candidate family, aggregated into a curve.

    family is a spec dict: {"kind": ..., ...params}.  Kinds:
      balls           {"root": int}                 BFS balls around the root
      annuli          {"root": int}                 rings (r, 2r]
      sphere-shells   {"root": int, "delta": int}   sphere neighborhoods
      square-subgrids {"rows": int, "cols": int}    top-left k-by-k subgrids
                      (vertex ids in row-major order, as generate.grid)
      explicit        {"sets": [[...], ...]}        given vertex sets
    budget caps the number of candidates (evenly subsampled, ends kept).
    """
    kind = family.get("kind")
    if kind not in FAMILY_KINDS:
        raise InputError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
    if kind == "square-subgrids":
        rows, cols = int(family["rows"]), int(family["cols"])
        if rows * cols != g.n:
            raise InputError(f"grid dims {rows}x{cols} do not match n={g.n}")
        cands = list(_subgrid_candidates(rows, cols))
    elif kind == "explicit":
        sets = family.get("sets")
        if not sets:
            raise InputError("explicit family needs nonempty 'sets'")
        cands = [(f"explicit {i}", as_vertex_set(s, g.n)) for i, s in enumerate(sets)]
    else:
        root = int(family.get("root", 0))
        b = bfs_root(g, root)
        if kind == "balls":
            cands = list(_ball_candidates(g, b, budget))
        elif kind == "annuli":
            cands = list(_annulus_candidates(g, b, budget))
        else:
            delta = int(family.get("delta", 1))
            cands = list(_shell_candidates(g, b, delta, budget))
    if budget is not None and len(cands) > budget:
        keep = np.unique(np.linspace(0, len(cands) - 1, num=budget, dtype=int))
        cands = [cands[i] for i in keep]

    points = []
    for name, members in cands:
        members = as_vertex_set(members, g.n)
        if members.size == 0:
            continue
        sub = induced_subgraph(g, members)
        bounds = cut_bounds(sub.graph, beta, **engine_opts)
        points.append(ProfilePoint(n=sub.graph.n, lower=bounds.lower,
                                   upper=bounds.upper, source=name, family=kind))
    if not points:
        raise InputError("family produced no candidates")
    return aggregate_points(points, kind)


# ---------------------------------------------------------------------------
# growth classification
# ---------------------------------------------------------------------------

@dataclass
class GrowthClass:
    tag: str                       # bounded | log | power | superlog-subpoly | indeterminate
    exponent: float | None = None
    exponent_ci: tuple[float, float] | None = None
    r2: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def __str__(self):
        if self.tag == "power":
            return f"power({self.exponent:.3f})"
        return self.tag


def _fit_models(ns: np.ndarray, ys: np.ndarray) -> dict:
    """Constant / a*log n + b / a*n^p fits with log-space residual scores."""
    ly = np.log(ys)
    ln = np.log(ns)
    npts = len(ns)
    out = {}

    def score(pred, k, params):
        if (pred <= 0).any():
            return None
        resid = ly - np.log(pred)
        rss = float(resid @ resid)
        tss = float(((ly - ly.mean()) ** 2).sum())
        # fp-noise floor: an exactly-flat or exactly-fit curve is a perfect fit
        r2 = 1.0 if tss <= 1e-12 or rss <= 1e-12 else 1.0 - rss / tss
        if npts - k - 1 <= 0:
            return None
        aic = npts * math.log(max(rss, 1e-12) / npts) + 2 * k
        aicc = aic + 2 * k * (k + 1) / (npts - k - 1)
        return {"rss": rss, "r2": r2, "aicc": aicc, "params": params}

    c = float(np.exp(ly.mean()))
    out["constant"] = score(np.full(npts, c), 1, {"c": c})

    # relative-error weighting keeps the fit consistent with log-space scoring
    A = np.stack([ln, np.ones(npts)], axis=1)
    w = 1.0 / ys
    coef, *_ = np.linalg.lstsq(A * w[:, None], ys * w, rcond=None)
    pred = A @ coef
    if (pred > 0).all():
        w = 1.0 / pred
        coef, *_ = np.linalg.lstsq(A * w[:, None], ys * w, rcond=None)
    out["log"] = score(A @ coef, 2, {"a": float(coef[0]), "b": float(coef[1])})

    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    p, loga = float(coef[0]), float(coef[1])
    pred = np.exp(A @ coef)
    sc = score(pred, 2, {"p": p, "a": float(math.exp(loga))})
    if sc is not None and npts > 2:
        resid = ly - np.log(pred)
        denom = float(((ln - ln.mean()) ** 2).sum())
        se = math.sqrt((resid @ resid) / (npts - 2) / denom) if denom > 0 else math.inf
        sc["ci"] = (p - 1.96 * se, p + 1.96 * se)
    out["power"] = sc
    return {k: v for k, v in out.items() if v is not None}


def fit_against_log(curve: ProfileCurve | list[tuple[int, int]],
                    use: str = "lower") -> tuple[float, float, float]:
    """Ordinary least squares of the curve values against log n.

    Returns (a, b, r2) for y = a*ln n + b with the coefficient of
    determination taken in natural space.  Points with n < 2 are dropped.
    """
    data = _usable_points(curve, use, y_floor=0)
    if len(data) < 2:
        raise InputError(f"need >= 2 usable points, got {len(data)}")
    ns = np.array([n for n, _ in data], dtype=np.float64)
    ys = np.array([y for _, y in data], dtype=np.float64)
    A = np.stack([np.log(ns), np.ones(len(ns))], axis=1)
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    rss = float(resid @ resid)
    tss = float(((ys - ys.mean()) ** 2).sum())
    r2 = 1.0 if tss <= 1e-12 or rss <= 1e-12 else 1.0 - rss / tss
    return float(coef[0]), float(coef[1]), r2


def _usable_points(curve, use, y_floor=1):
    if isinstance(curve, ProfileCurve):
        data = curve.lower_envelope() if use == "lower" else \
            [(p.n, p.upper) for p in curve.points]
    else:
        data = list(curve)
    return [(n, y) for n, y in data if n >= 2 and y >= y_floor]


# slowest-growth-first order used to resolve statistical ties
_GROWTH_ORDER = ("constant", "log", "power")


def classify_growth(curve: ProfileCurve | list[tuple[int, int]],
                    use: str = "lower") -> GrowthClass:
    """Pick the best-supported growth model for a profile curve.

    use selects the y-values: "lower" (envelope of lower bounds, the default
    read on profile data) or "upper".  Points with n < 2 or y < 1 are outside
    every model's domain and are dropped.  Requires >= 4 usable points; the
    best fit must reach R^2 >= 0.9 in log space or the result is
    indeterminate.  Models within 2 AICc units of the best are statistically
    equivalent; such ties resolve to the slower-growing model, the
    conservative call for data whose provenance is lower bounds.  A power fit
    whose exponent is indistinguishable from 0 falls back to log if that
    model fits, else superlog-subpoly.
    """
    data = _usable_points(curve, use)
    if len(data) < 4:
        raise InputError(f"need >= 4 usable points, got {len(data)}")
    ns = np.array([n for n, _ in data], dtype=np.float64)
    ys = np.array([y for _, y in data], dtype=np.float64)
    fits = _fit_models(ns, ys)
    if not fits:
        return GrowthClass(tag="indeterminate", diagnostics=fits)
    best_aicc = min(info["aicc"] for info in fits.values())
    if max(info["r2"] for info in fits.values()
           if info["aicc"] <= best_aicc + 2.0) < 0.9:
        return GrowthClass(tag="indeterminate",
                           r2=min(fits.values(), key=lambda i: i["aicc"])["r2"],
                           diagnostics=fits)
    pick = next(name for name in _GROWTH_ORDER
                if name in fits and fits[name]["aicc"] <= best_aicc + 2.0)
    info = fits[pick]
    if pick == "constant":
        return GrowthClass(tag="bounded", r2=info["r2"], diagnostics=fits)
    if pick == "log":
        return GrowthClass(tag="log", r2=info["r2"], diagnostics=fits)
    p = info["params"]["p"]
    lo, hi = info.get("ci", (p, p))
    if lo > 0.05:
        return GrowthClass(tag="power", exponent=p, exponent_ci=(lo, hi),
                           r2=info["r2"], diagnostics=fits)
    logfit = fits.get("log")
    if logfit is not None and logfit["r2"] >= 0.9:
        return GrowthClass(tag="log", r2=logfit["r2"], diagnostics=fits)
    return GrowthClass(tag="superlog-subpoly", exponent=p, exponent_ci=(lo, hi),
                       r2=info["r2"], diagnostics=fits)


# ---------------------------------------------------------------------------
# profile comparison
# ---------------------------------------------------------------------------

@dataclass
class ProfileComparison:
    verdict: str                 # g-below-h | h-below-g | equivalent-at-scale | incomparable-at-scale
    d_gh: int | None             # least D witnessing g(n) <= D*h(Dn) + D on the samples
    d_hg: int | None
    note: str

    def __str__(self):
        return f"{self.verdict} (D_gh={self.d_gh}, D_hg={self.d_hg})"


def _step_value(env: list[tuple[int, int]], m: int) -> int | None:
    """Envelope value at the largest sampled n <= m (None below the range)."""
    val = None
    for n, y in env:
        if n <= m:
            val = y
        else:
            break
    return val


def _witness(env_g, env_h, d_max: int) -> int | None:
    for d in range(1, d_max + 1):
        checked = ok = 0
        for n, yg in env_g:
            if n < d:
                continue
            yh = _step_value(env_h, d * n)
            if yh is None:
                continue
            checked += 1
            if yg <= d * yh + d:
                ok += 1
            else:
                break
        if checked and ok == checked:
            return d
    return None


def compare_profiles(curve_g: ProfileCurve, curve_h: ProfileCurve,
                     d_max: int = 64) -> ProfileComparison:
    """Search for order witnesses between two sampled profiles.

    A direction is reported when one D <= d_max satisfies the defining
    inequality at every usable sample.  Both directions give
    equivalent-at-scale; neither gives incomparable-at-scale.  All verdicts
    are statements about the sampled ranges only: a slowly growing profile
    can always masquerade as bounded on a finite window.
    """
    env_g, env_h = curve_g.lower_envelope(), curve_h.lower_envelope()
    lo = max(env_g[0][0], env_h[0][0])
    hi = min(env_g[-1][0], env_h[-1][0])
    if lo > hi:
        raise InputError("profiles have disjoint n ranges")
    d_gh = _witness(env_g, env_h, d_max)
    d_hg = _witness(env_h, env_g, d_max)
    if d_gh and d_hg:
        verdict = "equivalent-at-scale"
    elif d_gh:
        verdict = "g-below-h"
    elif d_hg:
        verdict = "h-below-g"
    else:
        verdict = "incomparable-at-scale"
    return ProfileComparison(
        verdict=verdict, d_gh=d_gh, d_hg=d_hg,
        note=f"evidence over sampled n in [{lo}, {hi}] with D <= {d_max}; "
             "finite samples cannot certify asymptotics")
