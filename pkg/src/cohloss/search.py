"""Search for the local projective measurement that destroys the most coherence.

Three strategies share one bookkeeping path (:class:`_Tracker`), so the
reported best loss is always the maximum over every basis actually evaluated:

* ``grid``: exhaustive Bloch-sphere scan, qubit side only;
* ``random``: Haar-random bases;
* ``simplex``: Nelder-Mead over a Hermitian-generator chart of the unitary
  group, started from random points plus the computational and MUB bases.

No optimum is assumed anywhere; for non-QI states the answer is whatever
the search finds.
"""
import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg, measures
from .measurement import (
    MUB_PRIMES,
    ProjectiveBasis,
    computational_basis,
    mub_family,
    project_local,
)
from .measures import MeasureKind
from .states import DensityMatrix, Ensemble, qi_state, random_qi

NEGATIVE_LOSS_TOL = 1e-9
VIOLATION_TOL = 1e-9
SEARCH_EXCESS_TOL = 1e-6

SIMPLEX_STEP = 0.25
SIMPLEX_DIAMETER_TOL = 1e-7
SIMPLEX_START_SCALE = 1.0


@dataclass(frozen=True, eq=False)
class LossObjective:
    state: DensityMatrix
    side: str
    measure: MeasureKind
    initial: float = field(init=False)

    def __post_init__(self):
        linalg.check_side(self.side)
        kind = MeasureKind.parse(self.measure)
        if kind is MeasureKind.ABS_SUM:
            raise ValueError("coherence loss needs a coherence measure (l1 or relent), not abs-sum")
        object.__setattr__(self, "measure", kind)
        object.__setattr__(self, "initial", measures.coherence(self.state, kind))

    @property
    def dim(self) -> int:
        return self.state.side_dim(self.side)


def coherence_loss(obj: LossObjective, basis: ProjectiveBasis) -> float:
    """C(state) - C(state measured on ``obj.side`` in ``basis``).

    Can be genuinely negative: a measurement in a basis other than the
    reference one is not an incoherent operation and may create coherence.
    """
    after = project_local(obj.state, obj.side, basis)
    return obj.initial - measures.coherence(after, obj.measure)


@dataclass(frozen=True, eq=False)
class SearchOutcome:
    best_basis: ProjectiveBasis
    best_loss: float
    baseline_loss_reference_basis: float
    method: str
    evaluations: int
    seed: object
    metadata: dict = field(default_factory=dict)


class _Tracker:
    """Counts evaluations and keeps the first basis reaching the maximal loss."""

    def __init__(self, obj):
        self.obj = obj
        self.evaluations = 0
        self.best_loss = -math.inf
        self.best_basis = None
        self.best_tag = None
        self.min_loss = math.inf
        self.negative = 0

    def __call__(self, basis, tag=None):
        loss = coherence_loss(self.obj, basis)
        self.evaluations += 1
        if loss > self.best_loss:
            self.best_loss, self.best_basis, self.best_tag = loss, basis, tag
        if loss < self.min_loss:
            self.min_loss = loss
        if loss < -NEGATIVE_LOSS_TOL:
            self.negative += 1
        return loss

    def merge(self, other):
        self.evaluations += other.evaluations
        if other.best_loss > self.best_loss:
            self.best_loss, self.best_basis, self.best_tag = other.best_loss, other.best_basis, other.best_tag
        self.min_loss = min(self.min_loss, other.min_loss)
        self.negative += other.negative

    def outcome(self, method, seed, **metadata):
        baseline = coherence_loss(self.obj, computational_basis(self.obj.dim))
        metadata.update(min_loss=self.min_loss, negative_loss_evaluations=self.negative)
        return SearchOutcome(
            best_basis=self.best_basis,
            best_loss=self.best_loss,
            baseline_loss_reference_basis=baseline,
            method=method,
            evaluations=self.evaluations,
            seed=seed,
            metadata=metadata,
        )


def qubit_basis(theta: float, phi: float) -> ProjectiveBasis:
    """|l0> = (cos(theta/2), e^{i phi} sin(theta/2)) and its orthogonal complement."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ph = complex(math.cos(phi), math.sin(phi))
    u = np.array([[c, -ph.conjugate() * s], [ph * s, c]], dtype=np.complex128)
    return ProjectiveBasis(u, f"bloch({theta!r},{phi!r})")


def grid_angles(resolution: int):
    """theta_k = pi k / r, phi_k = 2 pi k / r for k < r.

    theta = pi is left out because it is the theta = 0 basis with its two
    vectors swapped; the grid at 2r then contains the grid at r exactly.
    """
    k = np.arange(resolution)
    return np.pi * k / resolution, 2.0 * np.pi * k / resolution


def search_grid_qubit(obj: LossObjective, resolution: int) -> SearchOutcome:
    if obj.dim != 2:
        raise ValueError(f"grid search needs a qubit side, side {obj.side} has dimension {obj.dim}")
    if resolution < 8:
        raise ValueError(f"resolution must be >= 8, got {resolution}")
    tracker = _Tracker(obj)
    thetas, phis = grid_angles(resolution)
    for theta in thetas:
        for phi in phis:
            tracker(qubit_basis(float(theta), float(phi)), (float(theta), float(phi)))
    theta, phi = tracker.best_tag
    return tracker.outcome("grid", None, resolution=resolution, best_theta=theta, best_phi=phi)


def _seed_value(seed):
    return None if isinstance(seed, np.random.Generator) else seed


def search_random(obj: LossObjective, samples: int, seed) -> SearchOutcome:
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = linalg.make_rng(seed)
    tracker = _Tracker(obj)
    for i in range(samples):
        tracker(ProjectiveBasis(linalg.random_unitary(obj.dim, rng)), i)
    return tracker.outcome("random", _seed_value(seed), samples=samples, best_sample=tracker.best_tag)


@functools.lru_cache(maxsize=None)
def _upper_indices(dim):
    return np.triu_indices(dim, 1)


def hermitian_from_params(x, dim: int) -> np.ndarray:
    """Fill a Hermitian matrix from dim^2 reals: the diagonal, then (re, im) of
    each upper-triangular entry in row-major order."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dim * dim,):
        raise ValueError(f"expected {dim * dim} parameters, got shape {x.shape}")
    h = np.diag(x[:dim]).astype(np.complex128)
    iu = _upper_indices(dim)
    upper = x[dim::2] + 1j * x[dim + 1::2]
    h[iu] = upper
    h[iu[1], iu[0]] = upper.conj()
    return h


def basis_from_params(x, dim: int, anchor=None) -> ProjectiveBasis:
    """Columns of ``anchor @ exp(i H(x))``; the anchor defaults to the identity."""
    u = linalg.unitary_from_generator(hermitian_from_params(x, dim))
    if anchor is not None:
        u = anchor @ u
    return ProjectiveBasis(u)


def nelder_mead(f, x0, step=SIMPLEX_STEP, max_iters=500, diameter_tol=SIMPLEX_DIAMETER_TOL):
    """Minimize ``f`` with the textbook Nelder-Mead simplex.

    Coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
    Stops when the largest vertex-to-vertex distance falls below
    ``diameter_tol`` or after ``max_iters`` iterations.

    Returns ``(x_best, f_best, iterations, converged)``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    pts = np.vstack([x0, x0 + step * np.eye(n)])
    vals = np.array([f(p) for p in pts])

    iterations = 0
    converged = False
    while True:
        order = np.argsort(vals, kind="stable")
        pts, vals = pts[order], vals[order]
        diffs = pts[:, None, :] - pts[None, :, :]
        if np.sqrt(np.max(np.sum(diffs * diffs, axis=-1))) < diameter_tol:
            converged = True
            break
        if iterations >= max_iters:
            break
        iterations += 1

        centroid = pts[:-1].mean(axis=0)
        worst = pts[-1]
        xr = centroid + (centroid - worst)
        fr = f(xr)
        if fr < vals[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = f(xe)
            pts[-1], vals[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                pts[-1], vals[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (worst - centroid)
            fc = f(xc)
            if fc < vals[-1]:
                pts[-1], vals[-1] = xc, fc
                continue
        for i in range(1, n + 1):
            pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
            vals[i] = f(pts[i])

    return pts[0].copy(), float(vals[0]), iterations, converged


def reference_starts(dim: int) -> list:
    """Computational basis plus, for prime dim <= 7, every nontrivial MUB basis."""
    starts = [computational_basis(dim)]
    if dim in MUB_PRIMES:
        starts.extend(mub_family(dim).nontrivial())
    return starts


def _run_start(obj, anchor, x0, max_iters):
    tracker = _Tracker(obj)
    d = obj.dim

    def negloss(x):
        return -tracker(basis_from_params(x, d, anchor))

    _x, _fx, iterations, converged = nelder_mead(negloss, x0, max_iters=max_iters)
    return tracker, iterations, converged


def search_simplex(
    obj: LossObjective,
    restarts: int,
    max_iters: int,
    seed,
    include_reference_starts: bool = True,
    threads: int = 1,
) -> SearchOutcome:
    """Nelder-Mead on the negated loss over ``anchor @ exp(i H(x))``.

    Random restarts use the identity anchor and a standard-normal ``x``; the
    computational and MUB bases are added as starts at ``x = 0`` with
    themselves as anchor. Restarts may run on ``threads`` workers; results
    are merged in start order, so the outcome does not depend on ``threads``.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    d = obj.dim
    streams = linalg.split_rng(linalg.make_rng(seed), restarts)
    starts = [(None, SIMPLEX_START_SCALE * s.standard_normal(d * d)) for s in streams]
    if include_reference_starts:
        starts += [(b.u, np.zeros(d * d)) for b in reference_starts(d)]

    def run(start):
        return _run_start(obj, start[0], start[1], max_iters)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]

    tracker = _Tracker(obj)
    best_start = None
    converged = []
    iterations = []
    for i, (t, its, conv) in enumerate(results):
        before = tracker.best_loss
        tracker.merge(t)
        if tracker.best_loss > before:
            best_start = i
        converged.append(conv)
        iterations.append(its)
    return tracker.outcome(
        "simplex",
        _seed_value(seed),
        restarts=restarts,
        max_iters=max_iters,
        starts=len(starts),
        best_start=best_start,
        converged=all(converged),
        converged_starts=sum(converged),
        iterations=iterations,
    )


@dataclass(frozen=True, eq=False)
class QiSample:
    ensemble: Ensemble
    state: DensityMatrix
    coherence: float
    weighted_member_coherence: float
    marginal_coherence: float
    loss_computational: float
    mub_losses: tuple
    search: object

    @property
    def convexity_gap(self) -> float:
        """sum_i p_i C(rho_i) - C(rho_A): the loss any MUB measurement achieves."""
        return self.weighted_member_coherence - self.marginal_coherence

    @property
    def best_mub_loss(self) -> float:
        return max(self.mub_losses)

    @property
    def violates_proposition(self) -> bool:
        """A MUB measurement beats the reference-basis measurement."""
        return self.best_mub_loss > self.loss_computational + VIOLATION_TOL

    @property
    def search_exceeds_mub(self) -> bool:
        return self.search is not None and self.search.best_loss > self.best_mub_loss + SEARCH_EXCESS_TOL


def analyze_qi(e: Ensemble, dB: int, measure, search_seed=None, restarts=1, max_iters=200) -> QiSample:
    """Losses of one incoherent-on-B state at the computational basis, at every
    nontrivial MUB basis on B and (when ``search_seed`` is given) via simplex search."""
    if dB not in MUB_PRIMES:
        raise ValueError(f"dB must be one of {MUB_PRIMES} for MUB availability, got {dB}")
    kind = MeasureKind.parse(measure)
    chi = qi_state(e, dB)
    obj = LossObjective(chi, "B", kind)
    loss_comp = coherence_loss(obj, computational_basis(dB))
    mub_losses = tuple(coherence_loss(obj, b) for b in mub_family(dB).nontrivial())
    weighted = math.fsum(p * measures.coherence(m, kind) for p, m in zip(e.probs, e.members))
    marginal = measures.coherence(chi.reduced("A"), kind)
    outcome = None
    if search_seed is not None:
        outcome = search_simplex(obj, restarts, max_iters, search_seed)
    return QiSample(e, chi, obj.initial, weighted, marginal, loss_comp, mub_losses, outcome)


@dataclass(frozen=True, eq=False)
class QiScanResult:
    dA: int
    dB: int
    measure: MeasureKind
    seed: int
    samples: tuple

    @property
    def violations(self) -> int:
        return sum(s.violates_proposition for s in self.samples)

    @property
    def search_exceeds_mub(self) -> int:
        return sum(s.search_exceeds_mub for s in self.samples)

    @property
    def strict_gap_samples(self) -> int:
        return sum(s.convexity_gap > VIOLATION_TOL for s in self.samples)


def qi_scan(dA: int, dB: int, samples: int, seed, measure, restarts=1, max_iters=200, search=True) -> QiScanResult:
    """Sample random incoherent-on-B states and compare reference-basis,
    MUB-basis and searched losses.

    Sample ``k`` draws from the ``k``-th spawned child of the seed stream; the
    simplex seed of that sample is the first 63-bit integer of a grandchild.
    """
    if dB not in MUB_PRIMES:
        raise ValueError(f"dB must be one of {MUB_PRIMES} for MUB availability, got {dB}")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    kind = MeasureKind.parse(measure)
    out = []
    for stream in linalg.split_rng(linalg.make_rng(seed), samples) if samples else []:
        state_rng, search_rng = stream.spawn(2)
        e = random_qi(dA, dB, state_rng)
        search_seed = int(search_rng.integers(0, 2**63)) if search else None
        out.append(analyze_qi(e, dB, kind, search_seed, restarts, max_iters))
    return QiScanResult(dA, dB, kind, seed, tuple(out))
