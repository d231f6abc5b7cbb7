"""Complex eigenstructure of symplectic matrices with Krein signatures.

The Krein form is the Hermitian form on C^{2n} obtained from the complexified
symplectic form.  The conjugation-slot convention is pinned by calibration:
with ``kappa(v, w) = -i v^T Omega conj(w)`` the unit eigenvector of the
standard complex structure J for eigenvalue +i has ``kappa(v, v) = +1``, which
is what makes ``e^{theta J}`` positively elliptic for theta in (0, pi).

Invariant subspaces of eigenvalue clusters are taken from eigenvectors for
simple clusters and from an ordered complex Schur reduction when a cluster has
algebraic multiplicity greater than one (stable for clustered or defective
eigenvalues).  Degenerate Gram matrices are reported, never silently resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from .core import omega_matrix, require_symplectic
from .exceptions import DimensionMismatchError, SignatureDegenerateError

#: Relative gap below which eigenvalues are merged into one cluster.
DELTA_CLUSTER = 1e-6
#: Tolerance on | |lambda| - 1 | for unit-circle detection.
DELTA_CIRCLE = 1e-8
#: Tolerance on |lambda -+ 1| for detection of the eigenvalues +-1.
DELTA_REAL = 1e-8
#: Gram eigenvalues within this fraction of ||K|| of zero count as degenerate.
SIGMA_REL = 1e-8


class Location(Enum):
    """Where an eigenvalue cluster sits relative to the unit circle."""

    UNIT_CIRCLE_NONREAL = "unit-circle"
    PLUS_ONE = "+1"
    MINUS_ONE = "-1"
    OFF_CIRCLE = "off-circle"

    @property
    def on_circle(self) -> bool:
        return self is not Location.OFF_CIRCLE


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue cluster with multiplicity and optional Krein signature."""

    value: complex
    alg_mult: int
    location: Location
    krein_signature: tuple[int, int] | None = None
    degenerate: bool = False

    @property
    def angle(self) -> float:
        """Argument of the representative in (-pi, pi]."""
        return float(np.angle(self.value))


@dataclass(frozen=True)
class KreinSpectrum:
    """Clustered spectrum of a 2n x 2n symplectic matrix."""

    n: int
    clusters: tuple[EigenCluster, ...] = field(default_factory=tuple)

    @property
    def total_multiplicity(self) -> int:
        return sum(c.alg_mult for c in self.clusters)

    def select(self, location: Location) -> list[EigenCluster]:
        return [c for c in self.clusters if c.location is location]

    @property
    def all_on_circle(self) -> bool:
        return all(c.location.on_circle for c in self.clusters)


def krein_gram(vectors) -> np.ndarray:
    """Gram matrix K_{jk} = -i u_j^T Omega conj(u_k) of complex 2n-vectors.

    K is Hermitian by construction; its signature is the Krein signature of
    the span of the vectors.
    """
    U = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    if U.shape[0] % 2:
        raise DimensionMismatchError(f"vectors of odd length {U.shape[0]}")
    O = omega_matrix(U.shape[0] // 2)
    K = -1j * (U.T @ O @ U.conj())
    return (K + K.conj().T) / 2


def _cluster_indices(
    evals: np.ndarray, delta: float, delta_real: float = DELTA_REAL
) -> list[np.ndarray]:
    """Union-find clustering of eigenvalues with relative gap delta.

    Eigenvalues on opposite sides of the real axis are never merged: a
    conjugate pair approaching -1 stays two clusters until each member is
    within delta_real of the axis, so membership tests resolve the boundary
    to delta_real rather than to the (coarser) clustering gap.
    """
    m = evals.size
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def side(z):
        if z.imag > delta_real:
            return 1
        if z.imag < -delta_real:
            return -1
        return 0

    for i in range(m):
        for j in range(i + 1, m):
            if side(evals[i]) != side(evals[j]):
                continue
            gap = delta * max(1.0, abs(evals[i]), abs(evals[j]))
            if abs(evals[i] - evals[j]) <= gap:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


def _classify(rep: complex, delta_circle: float, delta_real: float) -> Location:
    if abs(rep - 1.0) <= delta_real:
        return Location.PLUS_ONE
    if abs(rep + 1.0) <= delta_real:
        return Location.MINUS_ONE
    if abs(abs(rep) - 1.0) <= delta_circle and abs(rep.imag) > delta_real:
        return Location.UNIT_CIRCLE_NONREAL
    return Location.OFF_CIRCLE


def _invariant_subspace(W: np.ndarray, rep: complex, radius: float) -> np.ndarray:
    """Orthonormal basis of the invariant subspace for eigenvalues near rep."""
    for r in (radius, 10 * radius, 100 * radius):
        T, Z, sdim = scipy.linalg.schur(
            W.astype(complex), output="complex", sort=lambda z, r=r: abs(z - rep) <= r
        )
        if sdim > 0:
            return Z[:, :sdim]
    raise RuntimeError("ordered Schur reduction selected an empty subspace")


def krein_spectrum(
    W: np.ndarray,
    delta_circle: float = DELTA_CIRCLE,
    delta_real: float = DELTA_REAL,
    on_degenerate: str = "raise",
) -> KreinSpectrum:
    """Clustered eigenvalues of W with Krein signatures on on-circle clusters.

    Parameters
    ----------
    W : symplectic 2n x 2n matrix.
    delta_circle, delta_real : detection tolerances for the unit circle and
        for the eigenvalues +-1.
    on_degenerate : "raise" to signal SignatureDegenerateError when a Gram
        eigenvalue lies within tolerance of zero, "mark" to record the
        degeneracy on the cluster instead.
    """
    if on_degenerate not in ("raise", "mark"):
        raise ValueError("on_degenerate must be 'raise' or 'mark'")
    W = require_symplectic(W, tol=1e-7)
    n = W.shape[0] // 2
    evals, evecs = np.linalg.eig(W)
    clusters: list[EigenCluster] = []
    for idx in _cluster_indices(evals, DELTA_CLUSTER):
        vals = evals[idx]
        rep = complex(vals.mean())
        mult = int(idx.size)
        loc = _classify(rep, delta_circle, delta_real)
        signature = None
        degenerate = False
        if loc.on_circle:
            if mult == 1:
                v = evecs[:, idx[0]]
                U = (v / np.linalg.norm(v)).reshape(-1, 1)
            else:
                spread = float(np.max(np.abs(vals - rep)))
                radius = 2 * spread + DELTA_CLUSTER * max(1.0, abs(rep))
                U = _invariant_subspace(W, rep, radius)
                if U.shape[1] != mult:
                    # widened selection; fall back to the selected dimension
                    mult = U.shape[1]
            K = krein_gram(U.T)
            ew = np.linalg.eigvalsh(K)
            sig_tol = SIGMA_REL * max(float(np.max(np.abs(ew))), _gram_floor())
            degenerate = bool(np.any(np.abs(ew) <= sig_tol))
            if degenerate:
                if on_degenerate == "raise":
                    raise SignatureDegenerateError(
                        f"Krein Gram matrix degenerate at eigenvalue {rep:.6g}"
                    )
            else:
                p = int(np.sum(ew > sig_tol))
                q = int(np.sum(ew < -sig_tol))
                signature = (p, q)
        clusters.append(
            EigenCluster(
                value=rep,
                alg_mult=mult,
                location=loc,
                krein_signature=signature,
                degenerate=degenerate,
            )
        )
    clusters.sort(key=lambda c: (round(np.angle(c.value), 12), abs(c.value)))
    return KreinSpectrum(n=n, clusters=tuple(clusters))


def _gram_floor() -> float:
    return np.finfo(float).eps


def nu(W: np.ndarray, delta_real: float = DELTA_REAL) -> complex:
    """Unit-circle spectral invariant underlying the Maslov quasimorphism.

    nu(W) = (-1)^m * prod over unit-circle non-real eigenvalue clusters of
    lambda^p(lambda), where 2m is the total algebraic multiplicity of the
    negative real eigenvalues and p the positive part of the Krein signature.
    The result is normalised to unit modulus.
    """
    spec = krein_spectrum(W, on_degenerate="raise")
    m2 = 0
    for c in spec.clusters:
        if c.location is Location.MINUS_ONE:
            m2 += c.alg_mult
        elif (
            c.location is Location.OFF_CIRCLE
            and abs(c.value.imag) <= delta_real
            and c.value.real < 0
        ):
            m2 += c.alg_mult
    result = complex(-1.0 if (m2 // 2) % 2 else 1.0)
    for c in spec.select(Location.UNIT_CIRCLE_NONREAL):
        p = c.krein_signature[0]
        if p:
            result *= c.value**p
    return result / abs(result)
