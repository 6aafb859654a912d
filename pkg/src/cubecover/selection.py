"""Disjoint sub-collection selectors with exact certified guarantees.

Every selector returns a :class:`~cubecover.geometry.Selection` whose
``certified_bound`` is the fraction of the input union volume the algorithm
provably retains on any valid input, and whose ``achieved_ratio`` is the
exact fraction it retained on this one.  Certificates are never stronger
than what the shipped code guarantees: the lexicographic sweep for congruent
cubes certifies 3^-d even though it usually does much better, while exact
mode delegates to the oracle and certifies 2^-d, the optimal constant for
congruent cubes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import constants
from .errors import EmptyCollectionError, InputError, VerificationError
from .geometry import (
    Collection,
    Cube,
    Selection,
    as_scalar,
    intersects,
    make_selection,
    union_volume,
)
from .oracle import ORACLE_DEFAULT_CAP, phi_exact


@dataclass(frozen=True)
class Window:
    """Radius interval [lo, hi] with 0 < lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_scalar(self.lo))
        object.__setattr__(self, "hi", as_scalar(self.hi))
        if not 0 < self.lo <= self.hi:
            raise InputError(f"window needs 0 < lo <= hi, got [{self.lo}, {self.hi}]")

    def covers(self, r: Fraction) -> bool:
        return self.lo <= r <= self.hi


@dataclass(frozen=True)
class LacunaryStructure:
    """Ascending windows with bounded in-window ratio and wide gaps.

    Each window satisfies hi <= mu * lo, and consecutive windows satisfy
    next.lo >= lam * prev.hi with lam > 1, so radii from different windows
    differ by at least the factor lam.
    """

    windows: tuple[Window, ...]
    lam: Fraction
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "windows", tuple(self.windows))
        object.__setattr__(self, "lam", as_scalar(self.lam))
        object.__setattr__(self, "mu", as_scalar(self.mu))
        if not self.windows:
            raise InputError("lacunary structure needs at least one window")
        if self.lam <= 1:
            raise InputError("gap factor must exceed 1")
        if self.mu < 1:
            raise InputError("in-window ratio bound must be at least 1")
        for w in self.windows:
            if w.hi > self.mu * w.lo:
                raise InputError(f"window [{w.lo}, {w.hi}] exceeds ratio bound {self.mu}")
        for prev, nxt in zip(self.windows, self.windows[1:]):
            if nxt.lo < self.lam * prev.hi:
                raise InputError(
                    f"window [{nxt.lo}, {nxt.hi}] starts before {self.lam} x {prev.hi}"
                )


@dataclass(frozen=True)
class PipelineParams:
    """Parameters of the residue-class pipeline.

    gamma_guarantee is the congruent subroutine's honest certificate and must
    match the unit selector: 3^-d for "sweep", 2^-d for "exact".
    """

    J: int
    lam: Fraction
    unit_selector: str
    gamma_guarantee: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_scalar(self.lam))
        object.__setattr__(self, "gamma_guarantee", as_scalar(self.gamma_guarantee))
        if not isinstance(self.J, int) or self.J < 3:
            raise InputError("pipeline needs an integer class count J >= 3")
        if self.lam <= 1:
            raise InputError("pipeline scale ratio must exceed 1")
        if self.unit_selector not in ("sweep", "exact"):
            raise InputError(f"unknown unit selector {self.unit_selector!r}")
        if not 0 < self.gamma_guarantee <= 1:
            raise InputError("gamma guarantee must lie in (0, 1]")


def unit_gamma(d: int, mode: str) -> Fraction:
    """Honest certificate of the congruent subroutine in the given mode."""
    if mode == "sweep":
        return Fraction(1, 3 ** d)
    if mode == "exact":
        return Fraction(1, 2 ** d)
    raise InputError(f"unknown unit selector {mode!r}")


def _require_nonempty(c: Collection) -> None:
    if not c.cubes:
        raise EmptyCollectionError("selection requires a nonempty collection")


def greedy_vitali(c: Collection) -> Selection:
    """Repeatedly select the largest remaining cube and drop everything it meets.

    Ties in size are broken by lowest index.  Certifies 3^-d of the union
    volume; additionally, every input cube is contained in the 3-fold
    concentric inflation of some selected cube.
    """
    _require_nonempty(c)
    n = len(c.cubes)
    order = sorted(range(n), key=lambda i: c.cubes[i].radius, reverse=True)
    alive = [True] * n
    chosen = []
    for i in order:
        if not alive[i]:
            continue
        chosen.append(i)
        alive[i] = False
        for j in range(n):
            if alive[j] and intersects(c.cubes[i], c.cubes[j]):
                alive[j] = False
    return make_selection(c, sorted(chosen), Fraction(1, 3 ** c.dim))


def congruent_select(c: Collection, mode: str = "sweep", cap: int = ORACLE_DEFAULT_CAP) -> Selection:
    """Select among cubes of one common radius.

    "sweep": greedily take the remaining cube with lexicographically smallest
    center and drop everything it meets; the resulting family is maximal, so
    3^-d is certified.  "exact": delegate to the oracle (within cap) and
    certify 2^-d, the optimal constant for congruent cubes.
    """
    _require_nonempty(c)
    r0 = c.cubes[0].radius
    if any(q.radius != r0 for q in c.cubes):
        raise InputError("congruent selection requires all radii equal")
    if mode == "exact":
        _, witness = phi_exact(c, cap)
        return make_selection(c, witness.indices, unit_gamma(c.dim, mode))
    if mode != "sweep":
        raise InputError(f"unknown unit selector {mode!r}")
    n = len(c.cubes)
    order = sorted(range(n), key=lambda i: (c.cubes[i].center, i))
    alive = [True] * n
    chosen = []
    for i in order:
        if not alive[i]:
            continue
        chosen.append(i)
        alive[i] = False
        for j in range(n):
            if alive[j] and intersects(c.cubes[i], c.cubes[j]):
                alive[j] = False
    return make_selection(c, sorted(chosen), unit_gamma(c.dim, mode))


def window_select(c: Collection, w: Window, mode: str = "sweep", cap: int = ORACLE_DEFAULT_CAP) -> Selection:
    """Select among cubes whose radii share one window [lo, hi].

    Every cube is inflated concentrically to the maximum radius present, the
    congruent selector runs on the inflated family, and the pre-images of its
    choices are returned: disjoint inflations force disjoint originals.
    Certifies (r_max / lo)^-d times the congruent certificate, which is at
    least (hi/lo)^-d times it.
    """
    _require_nonempty(c)
    for i, q in enumerate(c.cubes):
        if not w.covers(q.radius):
            raise InputError(f"cube {i} has radius {q.radius} outside window [{w.lo}, {w.hi}]")
    r_max = max(q.radius for q in c.cubes)
    inflated = Collection(c.dim, tuple(Cube(q.center, r_max) for q in c.cubes))
    base = congruent_select(inflated, mode, cap)
    cert = (w.lo / r_max) ** c.dim * unit_gamma(c.dim, mode)
    return make_selection(c, base.indices, cert)


def lacunary_select(
    c: Collection,
    ls: LacunaryStructure,
    mode: str = "sweep",
    cap: int = ORACLE_DEFAULT_CAP,
) -> Selection:
    """Select among cubes whose radii form a lacunary set.

    Cubes are bucketed into the structure's windows; a top-down pruning pass
    keeps only cubes meeting nothing kept in any higher window; each surviving
    window family is inflated by (1 + 2/lam), selected per window, and
    deflated.  Pruning makes cross-window picks disjoint, and the inflation
    guarantees the pruned cubes stay covered, which is what the certificate
    mu^-d (1 + 2/lam)^-d gamma accounts for.  A single-window structure needs
    no pruning and reduces exactly to :func:`window_select`.
    """
    _require_nonempty(c)
    if len(ls.windows) == 1:
        return window_select(c, ls.windows[0], mode, cap)

    buckets: list[list[int]] = [[] for _ in ls.windows]
    for i, q in enumerate(c.cubes):
        for j, w in enumerate(ls.windows):
            if w.covers(q.radius):
                buckets[j].append(i)
                break
        else:
            raise InputError(f"cube {i} has radius {q.radius} in no window")

    kept: list[int] = []
    pruned: list[list[int]] = [[] for _ in ls.windows]
    for j in reversed(range(len(ls.windows))):
        mine = [
            i
            for i in buckets[j]
            if all(not intersects(c.cubes[i], c.cubes[k]) for k in kept)
        ]
        pruned[j] = mine
        kept.extend(mine)

    grow = 1 + Fraction(2) / ls.lam
    chosen: list[int] = []
    for j, mine in enumerate(pruned):
        if not mine:
            continue
        sub = Collection(c.dim, tuple(Cube(c.cubes[i].center, c.cubes[i].radius * grow) for i in mine))
        w2 = Window(ls.windows[j].lo * grow, ls.windows[j].hi * grow)
        picked = window_select(sub, w2, mode, cap)
        chosen.extend(mine[k] for k in picked.indices)

    cert = (1 / ls.mu) ** c.dim * (1 / grow) ** c.dim * unit_gamma(c.dim, mode)
    return make_selection(c, sorted(chosen), cert)


def _floor_log(lam: Fraction, value: Fraction) -> int:
    """Largest integer m with lam^m <= value, for rational lam > 1 and value > 0."""
    est = math.log(value.numerator) - math.log(value.denominator)
    base = math.log(lam.numerator) - math.log(lam.denominator)
    m = math.floor(est / base)
    while lam ** m > value:
        m -= 1
    while lam ** (m + 1) <= value:
        m += 1
    return m


def pipeline_select(c: Collection, params: PipelineParams, cap: int = ORACLE_DEFAULT_CAP) -> Selection:
    """Full selection pipeline for arbitrary radii.

    Radii are split into J residue classes by the exponent of lam (half-open
    bands [lam^m, lam^(m+1)), class = m mod J); the class with the largest
    union volume holds at least 1/J of the total, which is asserted.  Its
    occupied bands form a (lam^(J-1), lam)-lacunary structure, on which the
    lacunary selector runs.  Certifies
    J^-1 (lam (1 + 2 lam^(1-J)))^-d gamma.
    """
    _require_nonempty(c)
    d = c.dim
    if params.gamma_guarantee != unit_gamma(d, params.unit_selector):
        raise InputError(
            f"gamma guarantee {params.gamma_guarantee} does not match the "
            f"{params.unit_selector!r} selector certificate in dimension {d}"
        )
    J, lam = params.J, params.lam

    exps = [_floor_log(lam, q.radius) for q in c.cubes]
    classes: dict[int, list[int]] = {}
    for i, m in enumerate(exps):
        classes.setdefault(m % J, []).append(i)

    total = union_volume(c)
    best_i = None
    best_vol = None
    for i in sorted(classes):
        vol = union_volume(Collection(d, tuple(c.cubes[k] for k in classes[i])))
        if best_vol is None or vol > best_vol:
            best_i, best_vol = i, vol
    if not best_vol * J >= total:
        raise VerificationError("largest residue class fell below a 1/J share of the union")

    members = classes[best_i]
    occupied = sorted({exps[k] for k in members})
    windows = tuple(Window(lam ** m, lam ** (m + 1)) for m in occupied)
    structure = LacunaryStructure(windows, lam ** (J - 1), lam)

    sub = Collection(d, tuple(c.cubes[k] for k in members))
    inner = lacunary_select(sub, structure, params.unit_selector, cap)
    indices = sorted(members[k] for k in inner.indices)
    cert = certified_bound(d, J, lam, params.gamma_guarantee)
    return make_selection(c, indices, cert, total_volume=total)


def certified_bound(d: int, J: int, lam, gamma_guar) -> Fraction:
    """Exact pipeline certificate J^-1 (lam (1 + 2 lam^(1-J)))^-d gamma."""
    if d < 1:
        raise InputError("dimension must be >= 1")
    if not isinstance(J, int) or J < 2:
        raise InputError("class count J must be an integer >= 2")
    lam = as_scalar(lam)
    gamma = as_scalar(gamma_guar)
    if lam < 1:
        raise InputError("scale ratio must be at least 1")
    if not 0 < gamma <= 1:
        raise InputError("gamma guarantee must lie in (0, 1]")
    core = lam * (1 + 2 * lam ** (1 - J))
    return Fraction(1, J) * core ** (-d) * gamma


def auto_params(d: int, unit_selector: str = "sweep") -> PipelineParams:
    """Pipeline parameters tuned for dimension d.

    J = L_d + 2 from the integer minimization of h_d, and lam is a rational
    within 1e-6 of the optimal scale ratio for that J (kept strictly above 1).
    """
    if d < 2:
        raise InputError("parameter optimization needs dimension >= 2")
    L, _, _ = constants.optimize_L(d)
    J = L + 2
    lam_star, _ = constants.optimal_lambda(J)
    lam = Fraction(round(float(lam_star) * 10 ** 6), 10 ** 6)
    if lam <= 1:
        lam = Fraction(10 ** 6 + 1, 10 ** 6)
    return PipelineParams(J=J, lam=lam, unit_selector=unit_selector, gamma_guarantee=unit_gamma(d, unit_selector))
