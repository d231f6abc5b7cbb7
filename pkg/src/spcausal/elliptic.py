"""The positively elliptic region: membership, normal form, logarithm,
time function and Maslov value.

A symplectic W is positively elliptic when its whole spectrum lies on the
unit circle away from +-1 and the Krein form is positive definite exactly on
the eigenspaces with positive imaginary part.  Such W splits R^{2n} into
symplectic planes on which it rotates by angles theta_k in (0, pi); every
quantity in this module is a function of those angles and of the adapted
basis realising the splitting.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    block_rotation_generator,
    half_dim,
    omega_matrix,
    require_symplectic,
    symmetrized_form,
    symplectic_inverse,
)
from .exceptions import IllConditionedWarning, NotEllipticError
from .krein import DELTA_CLUSTER, KreinSpectrum, Location, krein_spectrum

#: Angles within this band of {0, pi} are classified as boundary.
ANGLE_BOUNDARY_BAND = 1e-8
#: Relative tolerance for the exp/log roundtrip.
TOL_EXP = 1e-9


@dataclass(frozen=True)
class EllipticCheck:
    """Membership verdict with the first violated condition, if any."""

    elliptic: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.elliptic


@dataclass(frozen=True)
class EllipticSplitting:
    """Adapted symplectic basis splitting R^{2n} into invariant planes.

    ``basis`` is symplectic with columns (p_1..p_n, q_1..q_n); plane V_k is
    spanned by columns k and n+k, and in the adapted coordinates W acts on
    V_k as the rotation e^{theta_k J_2}.  Angles are sorted ascending.
    """

    n: int
    angles: np.ndarray
    basis: np.ndarray

    def generator(self) -> np.ndarray:
        """The Hamiltonian X with exp(X) = W, assembled from the splitting."""
        K = block_rotation_generator(self.angles)
        return self.basis @ K @ np.linalg.inv(self.basis)

    def complex_structure(self, k: int) -> np.ndarray:
        """Ambient matrix acting as the compatible complex structure on V_k
        and as zero on the other planes."""
        S = np.zeros((2 * self.n, 2 * self.n))
        S[self.n + k, k] = 1.0
        S[k, self.n + k] = -1.0
        return self.basis @ S @ np.linalg.inv(self.basis)


def _check_from_spectrum(spec: KreinSpectrum) -> EllipticCheck:
    for c in spec.clusters:
        if c.location is Location.OFF_CIRCLE:
            return EllipticCheck(False, "off-circle eigenvalue")
    for c in spec.clusters:
        if c.location is Location.PLUS_ONE:
            return EllipticCheck(False, "eigenvalue +1")
        if c.location is Location.MINUS_ONE:
            return EllipticCheck(False, "eigenvalue -1")
    for c in spec.clusters:
        th = abs(c.angle)
        if th < ANGLE_BOUNDARY_BAND or th > np.pi - ANGLE_BOUNDARY_BAND:
            return EllipticCheck(False, "boundary")
        if c.degenerate:
            return EllipticCheck(False, "boundary")
    for c in spec.clusters:
        if c.value.imag > 0 and c.krein_signature[1] > 0:
            return EllipticCheck(False, "indefinite Krein signature")
    return EllipticCheck(True, None)


def is_positively_elliptic(W: np.ndarray, tol: float = 1e-7) -> EllipticCheck:
    """Membership test for the positively elliptic region with diagnosis.

    The diagnosis names the first violated condition: "off-circle
    eigenvalue", "eigenvalue +1" / "eigenvalue -1", "boundary" (angle or
    Krein Gram within the boundary band) or "indefinite Krein signature".
    """
    W = require_symplectic(W, tol=tol)
    spec = krein_spectrum(W, on_degenerate="mark")
    return _check_from_spectrum(spec)


def elliptic_angles(W: np.ndarray) -> np.ndarray:
    """Sorted rotation angles theta_1 <= ... <= theta_n in (0, pi)."""
    W = require_symplectic(W, tol=1e-7)
    spec = krein_spectrum(W, on_degenerate="mark")
    chk = _check_from_spectrum(spec)
    if not chk:
        raise NotEllipticError(chk.reason)
    angles: list[float] = []
    for c in spec.clusters:
        if c.value.imag > 0:
            angles.extend([c.angle] * c.alg_mult)
    th = np.sort(np.array(angles))
    if th.size != spec.n:
        raise NotEllipticError("eigenvalue count off the real axis is not n")
    return th


def _kappa(v: np.ndarray, w: np.ndarray, O: np.ndarray) -> complex:
    # Hermitian Krein form, linear in the first slot.
    return complex(-1j * (v @ O @ w.conj()))


def elliptic_splitting(W: np.ndarray) -> EllipticSplitting:
    """Adapted symplectic basis and angles realising the plane splitting.

    The basis is built from kappa-normalised eigenvectors: for a unit
    eigenvector v of the angle theta the plane is spanned by
    p = sqrt(2) Re v and q = -sqrt(2) Im v, which makes the basis symplectic
    by construction up to roundoff.  Within a repeated angle the eigenvectors
    are kappa-orthonormalised in input order (the splitting is non-unique
    there; ties are broken deterministically).
    """
    W = require_symplectic(W, tol=1e-7)
    chk = is_positively_elliptic(W)
    if not chk:
        raise NotEllipticError(chk.reason)
    n = half_dim(W)
    O = omega_matrix(n)
    evals, evecs = np.linalg.eig(W)
    pos = np.where(evals.imag > 0)[0]
    if pos.size != n:
        raise NotEllipticError("eigenvalue count off the real axis is not n")
    args = np.angle(evals[pos])
    order = np.argsort(args, kind="stable")
    accepted: list[tuple[np.ndarray, float]] = []
    for k in order:
        v = evecs[:, pos[k]].astype(complex)
        th = float(args[k])
        for w, th_w in accepted:
            if abs(th - th_w) <= DELTA_CLUSTER * 10:
                v = v - w * _kappa(v, w, O)
        c = _kappa(v, v, O).real
        if c <= 0:
            raise NotEllipticError("indefinite Krein signature")
        v = v / np.sqrt(c)
        accepted.append((v, th))
    P = np.column_stack([np.sqrt(2) * v.real for v, _ in accepted])
    Q = np.column_stack([-np.sqrt(2) * v.imag for v, _ in accepted])
    B = np.hstack([P, Q])
    residual = np.linalg.norm(B.T @ O @ B - O)
    if residual > 1e-6 * max(1.0, np.linalg.norm(B) ** 2):
        raise RuntimeError(f"splitting basis lost symplecticity: {residual:.3e}")
    angles = np.array([th for _, th in accepted])
    return EllipticSplitting(n=n, angles=angles, basis=B)


def log_elliptic(W: np.ndarray) -> np.ndarray:
    """Principal logarithm of a positively elliptic W.

    The result is the unique X in the positive cone with spectrum in
    i(-pi, pi) and exp(X) = W.  Assembled from the plane splitting, then
    symmetry-cleaned by projecting Omega @ X onto its symmetric part.
    Emits IllConditionedWarning when an angle is within 1e-6 of pi.
    """
    split = elliptic_splitting(W)
    if float(np.min(np.pi - split.angles)) < 1e-6:
        warnings.warn(
            "angle within 1e-6 of pi; logarithm is ill-conditioned",
            IllConditionedWarning,
        )
    X = split.generator()
    O = omega_matrix(split.n)
    return -O @ symmetrized_form(X)


def tau(W: np.ndarray) -> float:
    """Time function: sum of ln(theta_k) - ln(pi - theta_k) over the angles."""
    th = elliptic_angles(W)
    return float(np.sum(np.log(th) - np.log(np.pi - th)))


def mu_elliptic(W: np.ndarray) -> float:
    """Maslov value (theta_1 + ... + theta_n) / (2 pi) of the canonical lift."""
    return float(np.sum(elliptic_angles(W)) / (2 * np.pi))


def minus_inverse(W: np.ndarray) -> np.ndarray:
    """The involution W -> -W^{-1}; maps angles theta to pi - theta."""
    W = require_symplectic(W, tol=1e-7)
    return -symplectic_inverse(W)
