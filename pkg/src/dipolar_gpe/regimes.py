"""Stable/unstable classification and the anisotropic collapse witness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .dipole import KHAT_MAX, KHAT_MIN
from .energy import energy_terms
from .spectral import l2_norm_sq

__all__ = [
    "Regime",
    "classify",
    "ResolutionError",
    "bump",
    "witness_field",
    "CollapseWitnessReport",
    "witness_report",
    "MIN_POINTS_PER_SUPPORT",
]

MIN_POINTS_PER_SUPPORT = 8
# support radii of the transverse and axial profiles; see witness_field
DEFAULT_SUPPORT = (0.25, 0.25)


@dataclass(frozen=True)
class Regime:
    """Classification of ``(lambda1, lambda2)``.

    ``margin`` is the smallest value of ``lambda1 + lambda2 * khat`` over all
    frequencies; the regime is stable exactly when it is non-negative.
    """

    stable: bool
    margin: float

    @property
    def tag(self):
        return "Stable" if self.stable else "Unstable"

    def __str__(self):
        return f"{self.tag} margin={self.margin:.4f}"


def classify(lambda1, lambda2):
    if not (np.isfinite(lambda1) and np.isfinite(lambda2)):
        raise ValueError("lambda1 and lambda2 must be finite")
    if lambda2 >= 0:
        margin = lambda1 + lambda2 * KHAT_MIN
    else:
        margin = lambda1 + lambda2 * KHAT_MAX
    return Regime(stable=bool(margin >= 0), margin=float(margin))


class ResolutionError(ValueError):
    """The requested witness field cannot be represented on the grid."""

    def __init__(self, message, min_epsilon):
        super().__init__(f"{message} (smallest admissible epsilon: {min_epsilon:.4g})")
        self.min_epsilon = min_epsilon


def bump(s):
    """Mollifier ``exp(-1 / (1 - s^2))`` on ``|s| < 1``, zero outside."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


# squared L2 norms of the unit bumps in 2-D (radial) and 1-D
_BUMP2_SQ = quad(lambda r: 2.0 * np.pi * r * np.exp(-2.0 / (1.0 - r * r)), 0.0, 1.0)[0]
_BUMP1_SQ = quad(lambda s: np.exp(-2.0 / (1.0 - s * s)), -1.0, 1.0)[0]


def _min_epsilon(grid, support, orientation, h_power):
    hx = grid.spacing
    a, b = support
    need = MIN_POINTS_PER_SUPPORT / 2.0
    if orientation == "cigar":
        # transverse radius a*eps, axial radius b*eps**h_power
        return max(need * hx[0] / a, need * hx[1] / a, (need * hx[2] / b) ** (1.0 / h_power))
    return max(need * hx[2] / b, (need * hx[0] / a) ** (1.0 / h_power),
               (need * hx[1] / a) ** (1.0 / h_power))


def witness_field(epsilon, c, grid, h=None, support=DEFAULT_SUPPORT, orientation="cigar"):
    """Anisotropic trial state of mass ``c**2``.

    ``orientation="cigar"`` (default, for ``lambda2 > 0``)::

        u(x) = eps^-1 f1(x1/eps, x2/eps) h^-1/2 f2(x3/h),   h = sqrt(eps)

    which is thin across the dipole axis and long along it.  ``"pancake"``
    exchanges the roles (thin along x3) and targets ``lambda2 < 0``; it is
    experimental.  ``f1`` and ``f2`` are mollifier bumps with support radii
    ``support = (a, b)``.  The sampled field is rescaled so that its discrete
    mass is exactly ``c**2``.
    """
    if orientation not in ("cigar", "pancake"):
        raise ValueError(f"unknown orientation {orientation!r}")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if c <= 0:
        raise ValueError("c must be positive")
    h = np.sqrt(epsilon) if h is None else float(h)
    a, b = support
    thin, wide = (epsilon, h) if orientation == "cigar" else (h, epsilon)
    r_perp, r_par = a * thin, b * wide

    min_eps = _min_epsilon(grid, support, orientation, 0.5)
    hx = grid.spacing
    L = grid.box_half_lengths
    if (2 * r_perp < MIN_POINTS_PER_SUPPORT * max(hx[0], hx[1])
            or 2 * r_par < MIN_POINTS_PER_SUPPORT * hx[2]):
        raise ResolutionError(f"epsilon={epsilon:g} is not resolved by the grid", min_eps)
    if r_perp >= min(L[0], L[1]) or r_par >= L[2]:
        raise ValueError(f"epsilon={epsilon:g}: witness support does not fit in the box")

    x1, x2, x3 = grid.axes
    rr = np.sqrt(x1[:, None] ** 2 + x2[None, :] ** 2)
    f1 = bump(rr / r_perp) / (r_perp * np.sqrt(_BUMP2_SQ))
    f2 = bump(x3 / r_par) / np.sqrt(r_par * _BUMP1_SQ)
    u = c * f1[:, :, None] * f2[None, None, :]
    return u * (c / np.sqrt(l2_norm_sq(grid, u)))


@dataclass
class CollapseWitnessReport:
    epsilons: np.ndarray
    h_values: np.ndarray
    energies: np.ndarray
    masses: np.ndarray
    kinetic: np.ndarray = field(repr=False)
    trap: np.ndarray = field(repr=False)
    interaction: np.ndarray = field(repr=False)
    verdict: bool = False

    @property
    def normalized_interaction(self):
        """Interaction energy times ``eps^2 h``; tends to a constant of the sign
        of ``lambda1 - (4 pi/3) lambda2`` along the cigar family."""
        return self.interaction * self.epsilons ** 2 * self.h_values

    def rows(self):
        return list(zip(self.epsilons, self.h_values, self.energies, self.masses))


def collapse_verdict(energies):
    e = np.asarray(energies, dtype=float)
    if e.size < 2:
        return False
    return bool(np.all(np.diff(e) < 0) and e[-1] < 0)


def witness_report(params, grid, epsilons, **witness_kw):
    """Energies of the witness family along decreasing ``epsilons``.

    The verdict is True when the energies strictly decrease and end negative.
    """
    eps = np.asarray(sorted(epsilons, reverse=True), dtype=float)
    if eps.size == 0:
        raise ValueError("need at least one epsilon")
    h_override = witness_kw.pop("h", None)
    rows = []
    for e in eps:
        h = np.sqrt(e) if h_override is None else h_override
        u = witness_field(e, params.mass_c, grid, h=h, **witness_kw)
        t = energy_terms(grid, u, params)
        rows.append((h, l2_norm_sq(grid, u), t["kinetic"], t["trap"],
                     t["contact"] + t["dipolar"]))
    h_vals, masses, kin, trap, inter = (np.array(col) for col in zip(*rows))
    energies = kin + trap + inter
    return CollapseWitnessReport(
        epsilons=eps, h_values=h_vals, energies=energies, masses=masses,
        kinetic=kin, trap=trap, interaction=inter,
        verdict=collapse_verdict(energies),
    )

