"""Free-space propagation, lens relays, and phase-space rotations.

Three complementary views of the same paraxial optics:

* Gaussian-beam parameters q(z) = z - i z_R for widths, curvatures, and the
  accumulated longitudinal phase.
* ABCD ray matrices, including the symmetric lens relay that realizes a
  clean phase-space rotation by an adjustable angle.
* Field propagation, either analytically (superpositions of displaced
  Gaussians stay Gaussian under the Fresnel integral) or by direct kernel
  quadrature for arbitrary sampled fields.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, ValidationError
from .states import (
    C_LIGHT,
    CoherentTerm,
    ModeFrame,
    SuperpositionState,
    coherent_overlap,
)


@dataclass(frozen=True)
class BeamParams:
    """Gaussian beam descriptors at a plane a distance z from the waist."""

    z: float
    width: float
    curvature_radius: float
    gouy: float
    rayleigh: float

    @property
    def q(self) -> complex:
        """Complex beam parameter z - i z_R (waist convention)."""
        return complex(self.z, -self.rayleigh)


def beam_params_at(frame: ModeFrame, z: float) -> BeamParams:
    """Width, wavefront curvature, and Gouy phase at distance z from the waist.

    w(z) = w0 sqrt(1 + (z/z_R)^2), R(z) = z (1 + (z_R/z)^2) (infinite at the
    waist), Gouy phase -arctan(z/z_R).
    """
    z_r = frame.z_r
    ratio = z / z_r
    width = frame.w0 * math.sqrt(1.0 + ratio**2)
    curvature = math.inf if z == 0.0 else z * (1.0 + (z_r / z) ** 2)
    return BeamParams(
        z=z,
        width=width,
        curvature_radius=curvature,
        gouy=-math.atan(ratio),
        rayleigh=z_r,
    )


@dataclass(frozen=True)
class RayMatrix:
    """Paraxial ABCD matrix acting on (x, v_x) rays, v_x = p_x / (hbar k).

    Passive paraxial elements conserve phase-space area, so construction
    rejects matrices whose determinant strays from 1.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise ValidationError(f"ray matrix must be unimodular, det = {det!r}")

    def compose(self, other: "RayMatrix") -> "RayMatrix":
        """This matrix applied after ``other`` (matrix product self @ other)."""
        return RayMatrix(
            a=self.a * other.a + self.b * other.c,
            b=self.a * other.b + self.b * other.d,
            c=self.c * other.a + self.d * other.c,
            d=self.c * other.b + self.d * other.d,
        )

    def apply(self, x: float, angle: float) -> tuple[float, float]:
        return self.a * x + self.b * angle, self.c * x + self.d * angle

    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c


def ray_free(z: float) -> RayMatrix:
    """Free flight over a distance z."""
    return RayMatrix(1.0, z, 0.0, 1.0)


def ray_lens(f: float) -> RayMatrix:
    """Thin lens of focal length f."""
    if f == 0.0:
        raise ValidationError("lens focal length must be nonzero")
    return RayMatrix(1.0, 0.0, -1.0 / f, 1.0)


def compose(*matrices: RayMatrix) -> RayMatrix:
    """Product of elements listed in propagation order (first acts first)."""
    if not matrices:
        raise ValidationError("compose needs at least one matrix")
    acc = matrices[0]
    for m in matrices[1:]:
        acc = m.compose(acc)
    return acc


@dataclass(frozen=True)
class LensSystem:
    """Symmetric relay free(L) -> lens(f) -> free(L) with L = f (1 - cos(theta_l)).

    In coordinates (x, x') with x' = f0 * angle and f0 = f sin(theta_l), the
    relay acts as a rotation by theta_l, so theta_l = pi/2 (L = f, i.e. the
    classic 2f line) swaps the position and angle quadratures.
    """

    f: float
    theta_l: float

    def __post_init__(self):
        if not (self.f > 0.0):
            raise ValidationError(f"focal length must be positive, got {self.f}")
        if not (0.0 < self.theta_l <= math.pi):
            raise ValidationError(
                f"rotation angle must lie in (0, pi], got {self.theta_l}"
            )

    @property
    def arm_length(self) -> float:
        return self.f * (1.0 - math.cos(self.theta_l))

    @property
    def f0(self) -> float:
        """Scale length turning angles into the rotated coordinate."""
        return self.f * math.sin(self.theta_l)

    def matrix(self) -> RayMatrix:
        arm = ray_free(self.arm_length)
        return arm.compose(ray_lens(self.f).compose(arm))

    def rotation_matrix(self) -> RayMatrix:
        """The same relay expressed in (x, f0 * angle) coordinates."""
        m = self.matrix()
        return RayMatrix(m.a, m.b / self.f0, m.c * self.f0, m.d)


@dataclass(frozen=True)
class PropagatedField:
    """Analytic x-field at one plane: sum of exp(-a x^2 + b x + c) terms.

    The y mode is carried along only through the pairwise overlaps that weight
    the y-reduced intensity; free propagation is unitary on the y mode so
    those overlaps are the ones fixed at the waist.
    """

    frame: ModeFrame
    z: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    y_weights: np.ndarray

    def field(self, x: np.ndarray) -> np.ndarray:
        """Complex x-field (valid picture when all terms share one y mode)."""
        x = np.asarray(x, dtype=float)
        xcol = x[..., None]
        return np.sum(np.exp(-self.a * xcol**2 + self.b * xcol + self.c), axis=-1)

    def intensity(self, x: np.ndarray) -> np.ndarray:
        """y-reduced intensity sum_jk E_j(x) conj(E_k(x)) <y_k|y_j>."""
        x = np.asarray(x, dtype=float)
        xcol = x[..., None]
        fields = np.exp(-self.a * xcol**2 + self.b * xcol + self.c)
        out = np.einsum("...j,...k,jk->...", fields, np.conj(fields), self.y_weights)
        return out.real

    def power(self) -> float:
        """Exact integral of the intensity over the whole axis."""
        aj = self.a[:, None]
        ak = np.conj(self.a[None, :])
        bj = self.b[:, None]
        bk = np.conj(self.b[None, :])
        cj = self.c[:, None]
        ck = np.conj(self.c[None, :])
        pair = np.sqrt(np.pi / (aj + ak)) * np.exp(
            (bj + bk) ** 2 / (4.0 * (aj + ak)) + cj + ck
        )
        return float(np.sum(pair * self.y_weights).real)

    def _moments(self) -> tuple[float, float]:
        """Intensity-weighted mean and variance of x, exactly."""
        aj = self.a[:, None]
        ak = np.conj(self.a[None, :])
        bj = self.b[:, None]
        bk = np.conj(self.b[None, :])
        cj = self.c[:, None]
        ck = np.conj(self.c[None, :])
        s = aj + ak
        m = bj + bk
        base = np.sqrt(np.pi / s) * np.exp(m**2 / (4.0 * s) + cj + ck)
        mom0 = float(np.sum(base * self.y_weights).real)
        mom1 = float(np.sum(base * (m / (2.0 * s)) * self.y_weights).real)
        mom2 = float(
            np.sum(base * (1.0 / (2.0 * s) + (m / (2.0 * s)) ** 2) * self.y_weights).real
        )
        mean = mom1 / mom0
        return mean, mom2 / mom0 - mean**2

    def centroid(self) -> float:
        """Intensity-weighted mean position."""
        return self._moments()[0]

    def rms_width(self) -> float:
        """Twice the RMS spread of the intensity: equals w(z) for one Gaussian."""
        _, var = self._moments()
        return 2.0 * math.sqrt(var)


def _waist_exponents(
    state: SuperpositionState,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, b, c) per term so the waist x-field is sum exp(-a x^2 + b x + c)."""
    w0 = state.frame.w0
    alphas = state.alphas_x()
    coeffs = state.coeffs()
    d = math.sqrt(2.0) * w0 * alphas.real
    kappa = 2.0 * math.sqrt(2.0) * alphas.imag / w0
    a = np.full(alphas.shape, 1.0 / w0**2, dtype=complex)
    b = 2.0 * d / w0**2 + 1j * kappa
    log_n0 = np.array(
        [cmath.log(c0 * (2.0 / (math.pi * w0**2)) ** 0.25) for c0 in coeffs]
    )
    c = -(d**2) / w0**2 - 1j * kappa * d / 2.0 + log_n0
    return a, b, c


def _y_weight_matrix(state: SuperpositionState) -> np.ndarray:
    ay = state.alphas_y()
    n = ay.size
    out = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            out[j, k] = coherent_overlap(ay[j], ay[k])
    return out


def propagate_analytic(state: SuperpositionState, z: float) -> PropagatedField:
    """Fresnel-propagate a displaced-Gaussian superposition a distance z.

    Pulls each term through the Fresnel integral in closed form: with
    a' = a - i k/(2 z), the exponent parameters map as

        a -> k^2 / (4 a' z^2) - i k / (2 z)
        b -> -i b k / (2 a' z)
        c -> c + b^2 / (4 a') + ln( sqrt(k / (2 pi i z)) sqrt(pi / a') )

    z = 0 returns the waist field unchanged; z < 0 is rejected.
    """
    if z < 0.0:
        raise ValidationError(f"propagation distance must be >= 0, got {z}")
    a, b, c = _waist_exponents(state)
    weights = _y_weight_matrix(state)
    if z == 0.0:
        return PropagatedField(
            frame=state.frame, z=0.0, a=a, b=b, c=c, y_weights=weights
        )
    k = state.frame.k
    ap = a - 1j * k / (2.0 * z)
    half_ik = 1j * k / (2.0 * z)
    a_out = k**2 / (4.0 * ap * z**2) - half_ik
    b_out = -1j * b * k / (2.0 * ap * z)
    prefactor = np.sqrt(k / (2.0j * math.pi * z)) * np.sqrt(math.pi / ap)
    c_out = c + b**2 / (4.0 * ap) + np.log(prefactor)
    return PropagatedField(
        frame=state.frame, z=z, a=a_out, b=b_out, c=c_out, y_weights=weights
    )


def kernel_step(frame: ModeFrame, z: float, span: float) -> float:
    """Largest safe input-grid step for the direct Fresnel kernel.

    The chirp e^{i k (x - x')^2 / (2 z)} must advance by less than pi between
    adjacent samples over the full window, and the mode itself needs w0/64.
    """
    if z <= 0.0:
        raise ValidationError(f"kernel step needs z > 0, got {z}")
    if span <= 0.0:
        raise ValidationError(f"window span must be positive, got {span}")
    return min(frame.w0 / 64.0, math.pi * z / (frame.k * span))


def propagate_kernel(
    psi: np.ndarray,
    x_in: np.ndarray,
    x_out: np.ndarray,
    z: float,
    frame: ModeFrame,
) -> np.ndarray:
    """Direct quadrature of the Fresnel integral for a sampled field.

    psi holds the complex field on the uniform grid x_in; the result is the
    field on x_out after a free flight z.  Rejects negative z; z = 0 requires
    matching grids and returns the input.  Raises on chirp aliasing (grid too
    coarse for the quadratic phase) and on power loss beyond 1e-6 (window too
    small).
    """
    psi = np.asarray(psi, dtype=complex)
    x_in = np.asarray(x_in, dtype=float)
    x_out = np.asarray(x_out, dtype=float)
    if psi.shape != x_in.shape:
        raise ValidationError("field samples and input grid differ in shape")
    if z < 0.0:
        raise ValidationError(f"propagation distance must be >= 0, got {z}")
    if z == 0.0:
        if x_out.shape != x_in.shape or not np.allclose(x_out, x_in, atol=0.0):
            raise ValidationError("z = 0 propagation requires identical grids")
        return psi.copy()
    dx = x_in[1] - x_in[0]
    if not np.allclose(np.diff(x_in), dx, rtol=1e-9):
        raise ValidationError("input grid must be uniform")
    k = frame.k
    span = max(
        abs(float(x_out.max()) - float(x_in.min())),
        abs(float(x_in.max()) - float(x_out.min())),
    )
    if k * span * dx / z > math.pi:
        raise NumericsError(
            "kernel chirp aliases on this grid; shrink the step below "
            f"{math.pi * z / (k * span):.3e} m"
        )
    weights = np.full(x_in.shape, dx)
    weights[0] = weights[-1] = dx / 2.0
    chirp = np.exp(1j * k * (x_out[:, None] - x_in[None, :]) ** 2 / (2.0 * z))
    psi_out = np.sqrt(k / (2.0j * math.pi * z)) * (chirp @ (weights * psi))
    p_in = float(np.trapezoid(np.abs(psi) ** 2, x_in))
    p_out = float(np.trapezoid(np.abs(psi_out) ** 2, x_out))
    if abs(p_out - p_in) > 1e-6 * p_in:
        raise NumericsError(
            f"kernel propagation lost power: {p_in!r} -> {p_out!r}; widen the window"
        )
    return psi_out


def rotate_phase_space(state: SuperpositionState, theta: float) -> SuperpositionState:
    """Rotate the state in phase space: every alpha -> alpha e^{-i theta}.

    This is the harmonic evolution the graded-index relay realizes; theta =
    pi/2 maps the position distribution onto the momentum distribution.  Both
    transverse axes rotate together.  A global phase is dropped.
    """
    phase = cmath.exp(-1j * theta)
    terms = [
        CoherentTerm(coeff=t.coeff, alpha_x=t.alpha_x * phase, alpha_y=t.alpha_y * phase)
        for t in state.terms
    ]
    return SuperpositionState.from_terms(state.frame, terms)


@dataclass(frozen=True)
class FiberSpec:
    """Graded-index fiber as a phase-space rotator.

    period_length is c T', the zigzag self-imaging distance over which the
    transverse state completes one full 2 pi rotation.
    """

    period_length: float

    def __post_init__(self):
        if not (self.period_length > 0.0):
            raise ValidationError(
                f"self-image period must be positive, got {self.period_length}"
            )

    @classmethod
    def from_omega(cls, omega_gi: float) -> "FiberSpec":
        """Build from the transverse oscillation frequency (rad/s)."""
        if not (omega_gi > 0.0):
            raise ValidationError(f"omega_GI must be positive, got {omega_gi}")
        return cls(period_length=2.0 * math.pi * C_LIGHT / omega_gi)

    def rotation_angle(self, length: float) -> float:
        return 2.0 * math.pi * length / self.period_length


def gi_fiber_evolve(
    state: SuperpositionState, length: float, fiber: FiberSpec
) -> SuperpositionState:
    """Evolve through a graded-index segment: rotation by 2 pi L / (c T')."""
    if length < 0.0:
        raise ValidationError(f"fiber length must be >= 0, got {length}")
    return rotate_phase_space(state, fiber.rotation_angle(length))
