"""Wigner functions, marginals, quadrature moments, and negativity scans.

The x-mode Wigner function of a state with y dependence traced out is

    W(x, p) = (1/(2 pi hbar)) Int psi(x + u/2) psi*(x - u/2) e^{-i u p / hbar} du.

For superpositions of displaced Gaussians both the closed form and the
marginals are analytic; the quadrature evaluator exists as an independent
cross-check and for states added later.

Nondimensional maps use X = sqrt(2) x / w0 and P = w0 p / (sqrt(2) hbar)
with W~ = hbar * W, so the vacuum reads W~ = exp(-X^2 - P^2) / pi and the
global minimum allowed for any state is -1/pi (-1/(pi hbar) in SI units).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, ValidationError
from .states import (
    HBAR,
    ModeFrame,
    QubitParams,
    SuperpositionState,
    coherent_overlap,
)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Rectangular phase-space window; SI units or nondimensional (X, P)."""

    x_min: float
    x_max: float
    nx: int
    p_min: float
    p_max: float
    np_: int
    si_units: bool = False

    def __post_init__(self):
        if self.nx < 2 or self.np_ < 2:
            raise ValidationError("grid needs at least 2 points per axis")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValidationError("grid maxima must exceed minima")

    def x_axis(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def p_axis(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np_)


@dataclass(frozen=True)
class WignerMap:
    """Wigner values (shape nx x np) over a grid, plus integral bookkeeping."""

    grid: PhaseSpaceGrid
    values: np.ndarray

    def integral(self) -> float:
        x = self.grid.x_axis()
        p = self.grid.p_axis()
        return float(np.trapezoid(np.trapezoid(self.values, p, axis=1), x))

    def min_value(self) -> float:
        return float(self.values.min())

    def min_location(self) -> tuple[float, float]:
        idx = np.unravel_index(np.argmin(self.values), self.values.shape)
        return float(self.grid.x_axis()[idx[0]]), float(self.grid.p_axis()[idx[1]])


def _floor(si_units: bool) -> float:
    return -1.0 / (math.pi * HBAR) if si_units else -1.0 / math.pi


def _term_exponents(term, w0: float) -> tuple[float, float]:
    """(center d, tilt kappa) of one displaced-Gaussian term."""
    a = complex(term.alpha_x)
    return math.sqrt(2.0) * w0 * a.real, 2.0 * math.sqrt(2.0) * a.imag / w0


def wigner_of_state(
    state: SuperpositionState, x: np.ndarray, p: np.ndarray
) -> np.ndarray:
    """Closed-form x-mode Wigner function on the meshgrid of (x, p) in SI.

    Each term pair (j, k) contributes a Gaussian centered at the midpoint of
    the two term centers in x and at hbar times the mean tilt in p, carrying
    the interference phase (kappa_j - kappa_k) x - (d_j - d_k) p / hbar +
    (kappa_k d_j - kappa_j d_k)/2, all weighted by the y-mode overlap.
    Returns shape (len(x), len(p)).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    w0 = state.frame.w0
    xg, pg = np.meshgrid(x, p, indexing="ij")
    out = np.zeros(xg.shape, dtype=float)
    pref = 1.0 / (math.pi * HBAR)
    for j, tj in enumerate(state.terms):
        dj, kj = _term_exponents(tj, w0)
        for k, tk in enumerate(state.terms):
            dk, kk = _term_exponents(tk, w0)
            weight = tj.coeff * np.conj(tk.coeff) * coherent_overlap(
                tj.alpha_y, tk.alpha_y
            )
            if weight == 0.0:
                continue
            xm = 0.5 * (dj + dk)
            km = 0.5 * (kj + kk)
            gauss = np.exp(
                -2.0 * (xg - xm) ** 2 / w0**2 - w0**2 * (pg / HBAR - km) ** 2 / 2.0
            )
            phase = (kj - kk) * xg - (dj - dk) * pg / HBAR + (kk * dj - kj * dk) / 2.0
            out += pref * (weight * gauss * np.exp(1j * phase)).real
    return out


def wigner_closed_form(
    params: QubitParams, frame: ModeFrame, x: np.ndarray, p_x: np.ndarray
) -> np.ndarray:
    """Three-Gaussian closed form of the (T, phi, d) qubit Wigner function.

    W = [T W_vac(x, p) + (1-T) W_vac(x - d, p)
         + 2 sqrt(T(1-T)) W_vac(x - d/2, p) cos(phi - d p / hbar)] / N_arb

    with W_vac(x, p) = exp(-2 x^2 / w0^2 - w0^2 p^2 / (2 hbar^2)) / (pi hbar).
    Broadcasts over x and p arrays of a common shape.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p_x, dtype=float)
    w0 = frame.w0
    d = params.d
    alpha = params.alpha(w0)
    cos_theta = math.exp(-(alpha**2))
    root = math.sqrt(params.T * (1.0 - params.T))
    n_arb = 1.0 + 2.0 * root * cos_theta * math.cos(params.phi)
    if n_arb <= 1e-15:
        raise ValidationError("normalization factor vanishes for these parameters")

    def w_vac(xc):
        return np.exp(-2.0 * (x - xc) ** 2 / w0**2 - w0**2 * p**2 / (2.0 * HBAR**2)) / (
            math.pi * HBAR
        )

    cross = 2.0 * root * w_vac(d / 2.0) * np.cos(params.phi - d * p / HBAR)
    return (params.T * w_vac(0.0) + (1.0 - params.T) * w_vac(d) + cross) / n_arb


def marginal_position(params: QubitParams, frame: ModeFrame, x: np.ndarray) -> np.ndarray:
    """Closed-form position density of the qubit state (integrates to 1).

    I(x) = [T I_vac(x) + (1-T) I_vac(x-d)
            + 2 sqrt(T(1-T)) I_vac(x-d/2) cos(theta_d) cos(phi)] / N_arb
    """
    x = np.asarray(x, dtype=float)
    w0 = frame.w0
    d = params.d
    cos_theta = math.exp(-(params.alpha(w0) ** 2))
    root = math.sqrt(params.T * (1.0 - params.T))
    n_arb = 1.0 + 2.0 * root * cos_theta * math.cos(params.phi)
    if n_arb <= 1e-15:
        raise ValidationError("normalization factor vanishes for these parameters")
    norm = math.sqrt(2.0 / math.pi) / w0

    def i_vac(xc):
        return norm * np.exp(-2.0 * (x - xc) ** 2 / w0**2)

    cross = 2.0 * root * cos_theta * math.cos(params.phi) * i_vac(d / 2.0)
    return (params.T * i_vac(0.0) + (1.0 - params.T) * i_vac(d) + cross) / n_arb


def marginal_momentum(params: QubitParams, frame: ModeFrame, p_x: np.ndarray) -> np.ndarray:
    """Closed-form momentum density of the qubit state (integrates to 1).

    I~(p) = I~_vac(p) [1 + 2 sqrt(T(1-T)) cos(phi - d p / hbar)] / N_arb,
    a Gaussian envelope of 1/e^2 half-width 2 hbar / w0 carrying a fringe of
    period 2 pi hbar / d.
    """
    p = np.asarray(p_x, dtype=float)
    w0 = frame.w0
    d = params.d
    cos_theta = math.exp(-(params.alpha(w0) ** 2))
    root = math.sqrt(params.T * (1.0 - params.T))
    n_arb = 1.0 + 2.0 * root * cos_theta * math.cos(params.phi)
    if n_arb <= 1e-15:
        raise ValidationError("normalization factor vanishes for these parameters")
    envelope = w0 / (HBAR * math.sqrt(2.0 * math.pi)) * np.exp(
        -(w0**2) * p**2 / (2.0 * HBAR**2)
    )
    return envelope * (1.0 + 2.0 * root * np.cos(params.phi - d * p / HBAR)) / n_arb


def quadrature_moments(
    state: SuperpositionState, theta_l: float = 0.0
) -> tuple[float, float]:
    """Mean and variance of the rotated quadrature X_theta = X cos + P sin.

    Nondimensional units: the vacuum gives (0, 1/2) for every theta_l.
    Uses the bilinear matrix elements between displaced-Gaussian terms,
    <beta| X_theta |alpha> = (alpha e^{-i theta} + conj(beta) e^{i theta}) <beta|alpha>,
    <beta| X_theta^2 |alpha> = [( . )^2 + 1/2] <beta|alpha>.
    """
    e_m = complex(math.cos(theta_l), -math.sin(theta_l))
    e_p = np.conj(e_m)
    first = 0.0 + 0.0j
    second = 0.0 + 0.0j
    total = 0.0 + 0.0j
    for tj in state.terms:
        for tk in state.terms:
            ov = coherent_overlap(tj.alpha_x, tk.alpha_x) * coherent_overlap(
                tj.alpha_y, tk.alpha_y
            )
            w = np.conj(tk.coeff) * tj.coeff * ov
            amp = tj.alpha_x * e_m + np.conj(tk.alpha_x) * e_p
            total += w
            first += w * amp
            second += w * (amp * amp + 0.5)
    if abs(total - 1.0) > 1e-9:
        raise NumericsError(f"state norm drifted to {total!r} in moment evaluation")
    mean = first.real
    var = second.real - mean**2
    return mean, var


def _auto_grid(
    state: SuperpositionState, n: int, si_units: bool
) -> PhaseSpaceGrid:
    """Window centered on the state covering its support.

    Starts at +-4 sqrt(Var) (at least 4 vacuum widths) about the centroid and
    grows by x1.5 while any boundary cell exceeds 1e-8 of the map peak.
    """
    mean_x, var_x = quadrature_moments(state, 0.0)
    mean_p, var_p = quadrature_moments(state, math.pi / 2.0)
    half_x = 4.0 * max(math.sqrt(var_x), math.sqrt(0.5))
    half_p = 4.0 * max(math.sqrt(var_p), math.sqrt(0.5))
    frame = state.frame
    for _ in range(12):
        xs = np.linspace(mean_x - half_x, mean_x + half_x, n)
        ps = np.linspace(mean_p - half_p, mean_p + half_p, n)
        vals = wigner_of_state(
            state, frame.x_scale * xs, frame.p_scale * ps
        )
        peak = np.abs(vals).max()
        edge = max(
            np.abs(vals[0, :]).max(),
            np.abs(vals[-1, :]).max(),
            np.abs(vals[:, 0]).max(),
            np.abs(vals[:, -1]).max(),
        )
        if edge <= 1e-8 * peak:
            if si_units:
                return PhaseSpaceGrid(
                    x_min=frame.x_scale * (mean_x - half_x),
                    x_max=frame.x_scale * (mean_x + half_x),
                    nx=n,
                    p_min=frame.p_scale * (mean_p - half_p),
                    p_max=frame.p_scale * (mean_p + half_p),
                    np_=n,
                    si_units=True,
                )
            return PhaseSpaceGrid(
                x_min=mean_x - half_x,
                x_max=mean_x + half_x,
                nx=n,
                p_min=mean_p - half_p,
                p_max=mean_p + half_p,
                np_=n,
                si_units=False,
            )
        half_x *= 1.5
        half_p *= 1.5
    raise NumericsError("auto grid did not localize the state after 12 expansions")


def _grid_si_axes(grid: PhaseSpaceGrid, frame: ModeFrame) -> tuple[np.ndarray, np.ndarray, float]:
    """SI x/p axes of a grid plus the Wigner scale factor to grid units."""
    if grid.si_units:
        return grid.x_axis(), grid.p_axis(), 1.0
    x = frame.x_scale * grid.x_axis()
    p = frame.p_scale * grid.p_axis()
    # dx dp (SI) = x_scale * p_scale * dX dP = hbar dX dP, so W~ = hbar W
    return x, p, HBAR


def wigner_map(
    state: SuperpositionState,
    grid: PhaseSpaceGrid | None = None,
    n: int = 256,
    si_units: bool = False,
) -> WignerMap:
    """Closed-form Wigner map; auto-sizes and validates when grid is None."""
    auto = grid is None
    if auto:
        grid = _auto_grid(state, n, si_units)
    x, p, scale = _grid_si_axes(grid, state.frame)
    values = scale * wigner_of_state(state, x, p)
    out = WignerMap(grid=grid, values=values)
    _validate_map(out, auto=auto)
    return out


def _validate_map(m: WignerMap, auto: bool) -> None:
    floor = _floor(m.grid.si_units)
    if m.values.min() < floor * (1.0 + 1e-9):
        raise NumericsError(
            f"Wigner map dips below the physical floor: {m.values.min()!r} < {floor!r}"
        )
    if auto:
        total = m.integral()
        if abs(total - 1.0) > 1e-6:
            raise NumericsError(
                f"auto-sized Wigner map integrates to {total!r}, not 1"
            )


def wigner_numeric(
    state: SuperpositionState, grid: PhaseSpaceGrid
) -> WignerMap:
    """Quadrature evaluation of the defining integral over the grid.

    Works in w0 / (hbar / w0) internal units, windowing the chord variable u
    to cover every term-pair separation plus 12 w0 of Gaussian tails, with
    step w0/64 refined by halving until two Richardson levels agree to 1e-9
    (nondimensional).  The y dependence is reduced analytically term-by-term.
    """
    frame = state.frame
    w0 = frame.w0
    x_si, p_si, _ = _grid_si_axes(grid, frame)
    xs = x_si / w0
    ps = p_si * w0 / HBAR

    coeffs = state.coeffs()
    ax = state.alphas_x()
    ay = state.alphas_y()
    centers = np.sqrt(2.0) * ax.real
    span = (
        float(np.max(centers) - np.min(centers)) if centers.size > 1 else 0.0
    )
    # the chord correlation of term pair (j, k) is a Gaussian in u centered
    # at d_j - d_k, so the window must cover every pairwise separation
    half_window = span + 8.0

    def evaluate(n_u: int) -> np.ndarray:
        u = np.linspace(-half_window, half_window, n_u)
        du = u[1] - u[0]
        corr = np.zeros((xs.size, u.size), dtype=complex)
        for j in range(coeffs.size):
            fj = _mode_unit(ax[j], xs[:, None] + u[None, :] / 2.0)
            for k in range(coeffs.size):
                fk = _mode_unit(ax[k], xs[:, None] - u[None, :] / 2.0)
                oy = coherent_overlap(ay[j], ay[k])
                corr += (coeffs[j] * np.conj(coeffs[k]) * oy) * fj * np.conj(fk)
        kernel = np.exp(-1j * np.outer(u, ps))
        vals = (corr @ kernel).real * du / (2.0 * math.pi)
        # endpoint halving completes the trapezoid rule
        edge = (
            corr[:, :1] * kernel[:1, :] + corr[:, -1:] * kernel[-1:, :]
        ).real * du / (4.0 * math.pi)
        return vals - edge

    n_u = max(int(round(2.0 * half_window * 64)) + 1, 129)
    prev = evaluate(n_u)
    for _ in range(3):
        n_u = 2 * n_u - 1
        cur = evaluate(n_u)
        if np.max(np.abs(cur - prev)) <= 1e-9:
            # internal (x/w0, p w0/hbar) cell equals the (X, P) cell, so the
            # nondimensional value carries over; SI needs the 1/hbar Jacobian
            values = cur / HBAR if grid.si_units else cur
            out = WignerMap(grid=grid, values=values)
            _validate_map(out, auto=False)
            return out
        prev = cur
    raise NumericsError("Wigner quadrature did not converge after 3 refinements")


def _mode_unit(alpha: complex, xn: np.ndarray) -> np.ndarray:
    """Displaced-tilted Gaussian in w0 = 1 units (normalized over xn)."""
    a = complex(alpha)
    d = math.sqrt(2.0) * a.real
    kappa = 2.0 * math.sqrt(2.0) * a.imag
    norm = (2.0 / math.pi) ** 0.25
    out = norm * np.exp(-((xn - d) ** 2))
    if kappa == 0.0:
        return out.astype(complex)
    return out * np.exp(1j * (kappa * xn - kappa * d / 2.0))


def negativity_scan(
    state: SuperpositionState, grid: PhaseSpaceGrid | None = None, n: int = 256
) -> tuple[float, tuple[float, float], float]:
    """Grid minimum, its location, and the magnitude of the negative volume."""
    m = wigner_map(state, grid=grid, n=n)
    x = m.grid.x_axis()
    p = m.grid.p_axis()
    cell = (x[1] - x[0]) * (p[1] - p[0])
    neg = -float(m.values[m.values < 0.0].sum() * cell)
    return m.min_value(), m.min_location(), max(neg, 0.0)
