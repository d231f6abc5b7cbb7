"""Seeded Monte-Carlo generation of causal paths, eigenphase tracking,
Maslov lifting along paths, and the desk-scale verification harness.

Paths are piecewise exponentials W_{i+1} = exp(dt_i X_i) W_i with
right-trivialized cone tangents X_i, which keeps every grid matrix
symplectic to the accuracy of the matrix exponential.  All randomness is
derived deterministically from a single seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from ._version import __version__
from .core import (
    ConeStatus,
    block_rotation,
    block_rotation_generator,
    cone_status,
    is_symplectic,
    omega_matrix,
    standard_J,
)
from .causal import (
    connect,
    dist_formula,
    exit_times,
    finsler_G,
    geodesic_flow,
)
from .elliptic import (
    elliptic_angles,
    is_positively_elliptic,
    log_elliptic,
    minus_inverse,
    mu_elliptic,
    tau,
)
from .exceptions import (
    DriftExceededError,
    MatchingAmbiguousError,
    NotConnectableError,
    NotEllipticError,
    SignatureDegenerateError,
)
from .krein import Location, krein_spectrum, nu

#: Symplecticity drift bound for generated paths.
DRIFT_TOL = 1e-7
#: Per-step phase jump bound before adaptive refinement kicks in.
PHASE_JUMP = np.pi / 4
_MAX_REFINE = 20


@dataclass(frozen=True)
class CausalPath:
    """Discrete causal path: grid, right-trivialized tangents, matrices."""

    grid: np.ndarray
    tangents: tuple[np.ndarray, ...]
    matrices: tuple[np.ndarray, ...]

    @property
    def steps(self) -> int:
        return len(self.tangents)

    @property
    def endpoint(self) -> np.ndarray:
        return self.matrices[-1]

    def validate(self, drift_tol: float = DRIFT_TOL) -> None:
        """Check the CausalPath invariants; raises on violation."""
        if len(self.matrices) != len(self.tangents) + 1:
            raise ValueError("grid/tangent/matrix counts are inconsistent")
        for i, W in enumerate(self.matrices):
            chk = is_symplectic(W, tol=drift_tol)
            if not chk:
                raise DriftExceededError(
                    f"symplectic residual {chk.residual:.3e} at grid index {i}"
                )
        for i, X in enumerate(self.tangents):
            if not cone_status(X).causal:
                raise ValueError(f"tangent at grid index {i} is not cone-admissible")


@dataclass(frozen=True)
class PhaseTrack:
    """Continuous unit-circle eigenphases along a path with Krein labels."""

    grid: np.ndarray
    plus: np.ndarray   # (N+1, n) continuous Krein-positive phases
    minus: np.ndarray  # (N+1, n) continuous Krein-negative phases
    crossings: tuple[tuple[int, str, float], ...] = field(default_factory=tuple)
    off_circle: np.ndarray | None = None


def random_cone_element(seed, n: int, scale: float = 1.0) -> np.ndarray:
    """Seeded interior cone element X = Omega^{-1} (A^T A + eps I) * scale."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((2 * n, 2 * n))
    S = A.T @ A + 1e-3 * np.eye(2 * n)
    O = omega_matrix(n)
    return -O @ S * scale


def random_symplectic(seed, n: int, scale: float = 1.0) -> np.ndarray:
    """Seeded symplectic matrix exp(X) for a random Hamiltonian X."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((2 * n, 2 * n))
    S = (A + A.T) / 2
    O = omega_matrix(n)
    return scipy.linalg.expm(-O @ S * scale)


def random_elliptic(seed, n: int, margin: float = 0.05) -> np.ndarray:
    """Seeded positively elliptic matrix with largest angle in
    (margin, pi - margin)."""
    rng = np.random.default_rng(seed)
    X = random_cone_element(rng, n)
    rho = float(np.max(np.abs(np.linalg.eigvals(X).imag)))
    target = rng.uniform(margin, np.pi - margin)
    return scipy.linalg.expm(X * (target / rho))


def random_elliptic_banded(
    seed, n: int, lo: float = 0.5, hi: float = 2.5
) -> np.ndarray:
    """Seeded elliptic matrix with every angle in [lo, hi].

    A conjugated block rotation; useful where quantities like the time
    function must be kept away from the region boundary at the start.
    """
    rng = np.random.default_rng(seed)
    angles = np.sort(rng.uniform(lo, hi, n))
    S = random_symplectic(rng, n, scale=0.4)
    O = omega_matrix(n)
    return S @ block_rotation(angles) @ (-O @ S.T @ O)


def random_torus_pair(seed, n: int):
    """Seeded commuting pair (W0, X) in a conjugated maximal torus.

    Returns (W0, X, angles, speeds) with W0 = S R(angles) S^{-1} and
    X = S gen(speeds) S^{-1} for a common random symplectic S, so the
    eigenphases of exp(t X) W0 are angles + t * speeds: the flow stays on
    the unit circle and the exit times are available in closed form,
    c1 = min(angles / speeds) and c2 = min((pi - angles) / speeds).
    Angles sit in [0.7, 2.2] and speeds in [0.5, 1.0], which keeps the
    non-exiting terms of the time function from masking its divergence.
    """
    rng = np.random.default_rng(seed)
    angles = np.sort(rng.uniform(0.7, 2.2, n))
    speeds = rng.uniform(0.5, 1.0, n)
    S = random_symplectic(rng, n, scale=0.4)
    O = omega_matrix(n)
    Si = -O @ S.T @ O
    W0 = S @ block_rotation(angles) @ Si
    X = S @ block_rotation_generator(speeds) @ Si
    return W0, X, angles, speeds


def geodesic_path(
    X: np.ndarray, W0: np.ndarray, t0: float, t1: float, steps: int
) -> CausalPath:
    """Uniform-grid discretisation of the geodesic t -> exp(t X) W0."""
    grid = np.linspace(t0, t1, steps + 1)
    flow = geodesic_flow(X, W0)
    matrices = tuple(flow(float(t)) for t in grid)
    tangents = tuple(X.copy() for _ in range(steps))
    return CausalPath(grid=grid, tangents=tangents, matrices=matrices)


def random_causal_path(
    seed,
    n: int,
    steps: int,
    W_start: np.ndarray | None = None,
    step_size: float = 0.05,
    confine: bool = False,
) -> CausalPath:
    """Piecewise-exponential causal path with fresh random cone tangents.

    Tangents are normalised to unit Frobenius norm.  With ``confine=True``
    steps that would leave the positively elliptic region are retried with
    halved step size (up to 20 halvings).  Symplecticity drift beyond
    DRIFT_TOL raises DriftExceededError.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    W = np.eye(2 * n) if W_start is None else np.asarray(W_start, dtype=float)
    grid = [0.0]
    tangents: list[np.ndarray] = []
    matrices = [W]
    for _ in range(steps):
        dt = step_size
        for _attempt in range(_MAX_REFINE + 1):
            X = random_cone_element(rng, n)
            X = X / np.linalg.norm(X)
            W_next = scipy.linalg.expm(dt * X) @ W
            if not confine or is_positively_elliptic(W_next):
                break
            dt /= 2
        else:
            raise DriftExceededError(
                "could not confine step to the elliptic region"
            )
        chk = is_symplectic(W_next, tol=DRIFT_TOL)
        if not chk:
            raise DriftExceededError(
                f"symplectic drift {chk.residual:.3e} exceeds {DRIFT_TOL}"
            )
        tangents.append(X)
        grid.append(grid[-1] + dt)
        matrices.append(W_next)
        W = W_next
    return CausalPath(
        grid=np.array(grid), tangents=tuple(tangents), matrices=tuple(matrices)
    )


def _wrap(a: np.ndarray | float) -> np.ndarray | float:
    """Wrap angles to (-pi, pi]."""
    return -((-np.asarray(a) + np.pi) % (2 * np.pi) - np.pi)


def _labeled_args(W: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Raw unit-circle eigenphases split by Krein label, or None off circle."""
    spec = krein_spectrum(W, on_degenerate="mark")
    plus: list[float] = []
    minus: list[float] = []
    for c in spec.clusters:
        if c.location is Location.OFF_CIRCLE:
            return None
        if c.degenerate:
            raise SignatureDegenerateError(
                f"degenerate Krein signature at eigenvalue {c.value:.6g}"
            )
        p, q = c.krein_signature
        if c.location is Location.PLUS_ONE or c.location is Location.MINUS_ONE:
            # signature (p, p) at +-1: split evenly between the labels
            half = c.alg_mult // 2
            plus.extend([c.angle] * half)
            minus.extend([c.angle] * half)
        else:
            plus.extend([c.angle] * p)
            minus.extend([c.angle] * q)
    if len(plus) != spec.n or len(minus) != spec.n:
        return None
    return np.array(plus), np.array(minus)


def _match(prev: np.ndarray, raw: np.ndarray) -> tuple[np.ndarray, float]:
    """Continuous continuation of prev onto the raw phases (mod 2 pi)."""
    diff = _wrap(raw[None, :] - prev[:, None])
    rows, cols = scipy.optimize.linear_sum_assignment(np.abs(diff))
    new = prev.copy()
    new[rows] = prev[rows] + diff[rows, cols]
    jump = float(np.max(np.abs(diff[rows, cols]))) if rows.size else 0.0
    return new, jump


def track_phases(path: CausalPath) -> PhaseTrack:
    """Continuous-argument eigenphases with Krein labels along a path.

    Consecutive grid points are joined by nearest-angle assignment per
    label; a step whose phase jump exceeds pi/4 is refined by inserting
    midpoints through the stored tangent.  Off-circle grid points are
    flagged and their phases set to NaN.
    """
    N = path.steps
    n = path.matrices[0].shape[0] // 2
    plus = np.full((N + 1, n), np.nan)
    minus = np.full((N + 1, n), np.nan)
    off = np.zeros(N + 1, dtype=bool)
    crossings: list[tuple[int, str, float]] = []

    first = _labeled_args(path.matrices[0])
    if first is None:
        off[0] = True
    else:
        plus[0], minus[0] = np.sort(first[0]), np.sort(first[1])

    def advance(p, m, W_from, X, dt, depth):
        W_to = scipy.linalg.expm(dt * X) @ W_from
        labeled = _labeled_args(W_to)
        if labeled is None:
            return None
        new_p, j1 = _match(p, labeled[0])
        new_m, j2 = _match(m, labeled[1])
        if max(j1, j2) > PHASE_JUMP:
            if depth >= _MAX_REFINE:
                raise MatchingAmbiguousError(
                    "phase jump above pi/4 after refinement is exhausted"
                )
            half = advance(p, m, W_from, X, dt / 2, depth + 1)
            if half is None:
                return None
            W_mid = scipy.linalg.expm((dt / 2) * X) @ W_from
            return advance(half[0], half[1], W_mid, X, dt / 2, depth + 1)
        return new_p, new_m

    for i in range(N):
        if off[i]:
            nxt = _labeled_args(path.matrices[i + 1])
            if nxt is None:
                off[i + 1] = True
            else:
                plus[i + 1], minus[i + 1] = np.sort(nxt[0]), np.sort(nxt[1])
            continue
        dt = path.grid[i + 1] - path.grid[i]
        result = advance(plus[i], minus[i], path.matrices[i], path.tangents[i], dt, 0)
        if result is None:
            off[i + 1] = True
            continue
        plus[i + 1], minus[i + 1] = result
        for label, old, new in (("+", plus[i], plus[i + 1]), ("-", minus[i], minus[i + 1])):
            for a, b in zip(old, new):
                k0, k1 = np.floor(a / np.pi), np.floor(b / np.pi)
                for k in range(int(min(k0, k1)) + 1, int(max(k0, k1)) + 1):
                    crossings.append((i + 1, label, k * np.pi))
    return PhaseTrack(
        grid=path.grid,
        plus=plus,
        minus=minus,
        crossings=tuple(crossings),
        off_circle=off,
    )


def mu_along_path(path: CausalPath, start: float | None = None) -> np.ndarray:
    """Continuous real lift of arg(nu) / 2 pi along the path.

    Anchored at ``start`` when given; otherwise at the wrapped argument of
    nu at the first grid point, which is 0 for paths starting at id.
    """
    def nu_arg(W):
        return float(np.angle(nu(W)))

    def lift_segment(a_prev, W_from, X, dt, depth):
        W_to = scipy.linalg.expm(dt * X) @ W_from
        a_next = nu_arg(W_to)
        d = float(_wrap(a_next - a_prev))
        if abs(d) > np.pi / 2:
            if depth >= _MAX_REFINE:
                raise MatchingAmbiguousError("nu winds too fast for the grid")
            d1, a_mid = lift_segment(a_prev, W_from, X, dt / 2, depth + 1)
            W_mid = scipy.linalg.expm((dt / 2) * X) @ W_from
            d2, a_end = lift_segment(a_mid, W_mid, X, dt / 2, depth + 1)
            return d1 + d2, a_end
        return d, a_next

    a0 = nu_arg(path.matrices[0])
    cont = [float(_wrap(a0))]
    a_prev = a0
    for i in range(path.steps):
        dt = path.grid[i + 1] - path.grid[i]
        d, a_prev = lift_segment(
            a_prev, path.matrices[i], path.tangents[i], dt, 0
        )
        cont.append(cont[-1] + d)
    mu = np.array(cont) / (2 * np.pi)
    if start is not None:
        mu += start - mu[0]
    return mu


def _spawn(seed, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(index,))


def verify_suite(seed: int, n: int, trials: int) -> dict:
    """Run the desk-scale property checks and return a machine-readable report.

    Every property records a pass flag and its worst-case margin; failures
    are reported, never thrown.  The report is deterministic per seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    props: dict[str, dict] = {}

    def record(name, passed, margin, detail=""):
        props[name] = {
            "passed": bool(passed),
            "worst_margin": float(margin),
            "detail": detail,
        }

    # time function and phase monotonicity along region-confined paths,
    # plus endpoint connection
    min_dtau = np.inf
    min_plus_step = np.inf
    max_minus_step = -np.inf
    connect_ok = True
    for k in range(trials):
        # confined walks from ill-conditioned starting points can creep into
        # the boundary and exhaust the halving budget; redraw the whole trial
        # (starting point and path) with a fresh derived seed in that case
        for r in range(50):
            key = 2 * k + 900_000 * r
            W0 = random_elliptic_banded(_spawn(seed, key), n, lo=0.3, hi=1.8)
            try:
                path = random_causal_path(
                    _spawn(seed, key + 1), n, steps=15,
                    W_start=W0, step_size=0.05, confine=True,
                )
                break
            except DriftExceededError:
                continue
        else:
            raise DriftExceededError("confined path generation failed 50 times")
        taus = np.array([tau(W) for W in path.matrices])
        min_dtau = min(min_dtau, float(np.min(np.diff(taus))))
        trk = track_phases(path)
        min_plus_step = min(min_plus_step, float(np.min(np.diff(trk.plus, axis=0))))
        max_minus_step = max(max_minus_step, float(np.max(np.diff(trk.minus, axis=0))))
        try:
            conn = connect(W0, path.endpoint, samples=8)
            connect_ok = connect_ok and conn.status.causal
        except NotConnectableError:
            connect_ok = False
    record("tau_monotone", min_dtau > 0, min_dtau,
           "min per-step increment of the time function")
    record("phase_monotone",
           min_plus_step > -1e-9 and max_minus_step < 1e-9,
           min(min_plus_step, -max_minus_step),
           "Krein-positive phases non-decreasing, negative non-increasing")
    record("endpoint_connect", connect_ok, 0.0,
           "connect succeeds on region-confined path endpoints")

    # broken-geodesic length never beats the distance formula
    worst_excess = -np.inf
    rng = np.random.default_rng(_spawn(seed, 10_001))
    count = 0
    guard = 0
    while count < trials and guard < 50 * trials:
        guard += 1
        W = random_elliptic(rng, n, margin=0.3)
        X = log_elliptic(W)
        a = rng.uniform(0.2, 0.8)
        Y = random_cone_element(rng, n)
        Y = Y / np.linalg.norm(Y)
        M = scipy.linalg.expm(a * X + 0.05 * Y)
        try:
            if not is_positively_elliptic(M):
                continue
            conn = connect(M, W, samples=8)
        except (NotConnectableError, NotEllipticError):
            continue
        total = finsler_G(log_elliptic(M)) + finsler_G(conn.tangent)
        worst_excess = max(worst_excess, total - dist_formula(W))
        count += 1
    record("broken_geodesic_max", worst_excess <= 1e-9, worst_excess,
           f"max broken-geodesic excess over dist on {count} pairs")

    # exit times are finite and tau diverges at the ends.  tau divergence is
    # probed on commuting torus pairs, whose eigenphases pass the boundary
    # linearly; a generic hyperbolic exit approaches like sqrt(c2 - t), which
    # caps |tau| at a fixed offset inside regardless of the starting point.
    finite_ok = True
    min_abs_tau = np.inf
    for k in range(trials):
        W0, X, angles, speeds = random_torus_pair(_spawn(seed, 20_000 + k), n)
        et = exit_times(W0, X, t_max=5e3)
        if not et.finite:
            finite_ok = False
            continue
        flow = geodesic_flow(X, W0)
        min_abs_tau = min(
            min_abs_tau,
            abs(tau(flow(et.c2 - 1e-6))),
            abs(tau(flow(-et.c1 + 1e-6))),
        )
        # generic (non-commuting) pair: finiteness only
        Xg = random_cone_element(_spawn(seed, 30_000 + k), n)
        etg = exit_times(W0, Xg / np.linalg.norm(Xg), t_max=5e3)
        finite_ok = finite_ok and etg.finite
    record("exit_times", finite_ok and min_abs_tau > 10, min_abs_tau,
           "finite exits; |tau| at 1e-6 inside each end of torus flows")

    # angle-complement symmetry of W -> -W^{-1}
    worst_dev = 0.0
    for k in range(trials):
        W = random_elliptic(_spawn(seed, 40_000 + k), n)
        th = elliptic_angles(W)
        th_m = elliptic_angles(minus_inverse(W))
        worst_dev = max(worst_dev, float(np.max(np.abs(th_m - (np.pi - th[::-1])))))
    record("angle_complement", worst_dev <= 1e-8, worst_dev,
           "angles of -W^{-1} vs pi minus reversed angles of W")

    # boundedness evidence for causal diamonds
    angles0 = 0.2 + 0.1 * np.arange(n)
    W0 = block_rotation(angles0)
    Z = random_cone_element(_spawn(seed, 50_000), n)
    Z = Z / np.linalg.norm(Z)
    W1 = scipy.linalg.expm(0.8 * Z) @ W0
    rng = np.random.default_rng(_spawn(seed, 50_001))
    max_norm = 0.0
    accepted = 0
    guard = 0
    while accepted < trials and guard < 100 * trials:
        guard += 1
        Y = random_cone_element(rng, n)
        Y = Y / np.linalg.norm(Y)
        M = scipy.linalg.expm(rng.uniform(0.0, 0.5) * Y) @ W0
        try:
            if not is_positively_elliptic(M):
                continue
            connect(M, W1, samples=0)
        except (NotConnectableError, NotEllipticError):
            continue
        max_norm = max(max_norm, float(np.linalg.norm(M)))
        accepted += 1
    record("diamond_bounded", np.isfinite(max_norm) and accepted > 0, max_norm,
           f"max Frobenius norm over {accepted} sampled diamond midpoints")

    # closed timelike loop at the group level
    J = standard_J(n)
    loop = geodesic_path(J, W0, 0.0, 2 * np.pi, 64)
    closure = float(np.linalg.norm(loop.endpoint - loop.matrices[0]))
    tangents_interior = all(
        cone_status(X) is ConeStatus.INTERIOR for X in loop.tangents
    )
    record("closed_timelike_loop", closure <= 1e-9 and tangents_interior, closure,
           "e^{tJ} W closes; all tangents interior (group-level total viciousness)")

    # empirical quasimorphism defect (recorded, not asserted)
    defect = 0.0
    pairs = 0
    rng = np.random.default_rng(_spawn(seed, 60_000))
    guard = 0
    while pairs < trials and guard < 50 * trials:
        guard += 1
        V = random_elliptic(rng, n)
        W = random_elliptic(rng, n)
        try:
            defect = max(
                defect,
                abs(mu_elliptic(V @ W) - mu_elliptic(V) - mu_elliptic(W)),
            )
            pairs += 1
        except NotEllipticError:
            continue
    record("quasimorphism_defect", True, defect,
           f"empirical Maslov defect over {pairs} elliptic pairs (no bound asserted)")

    return {
        "provenance": {
            "seed": int(seed),
            "n": int(n),
            "trials": int(trials),
            "version": __version__,
        },
        "properties": props,
        "all_passed": all(p["passed"] for p in props.values()),
    }
