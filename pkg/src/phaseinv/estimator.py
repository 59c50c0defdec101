"""Estimator-style wrapper around :func:`~phaseinv.gelfand_levitan.reconstruct`.

``fit`` takes phase shifts and builds the potential; ``predict`` evaluates
q at arbitrary radii.  Hyperparameters mirror
:class:`~phaseinv.config.InversionConfig`, so ``get_params``/``set_params``
and ``sklearn.base.clone`` work as usual and a (c, h) scan can be written
as a loop over ``set_params``.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_array, check_is_fitted

from .config import InversionConfig
from .errors import DomainError
from .forward import PhaseShiftSet
from .gelfand_levitan import reconstruct


def check_phase_set(phases, k=None, a=None):
    """Coerce input to a :class:`PhaseShiftSet`.

    Parameters
    ----------
    phases : PhaseShiftSet or array-like of float
        Phase shifts; a plain sequence needs ``k`` and ``a``.
    k, a : float, optional
        Wavenumber and support radius for array input.  Must be omitted
        (or agree) when ``phases`` is already a PhaseShiftSet.
    """
    if isinstance(phases, PhaseShiftSet):
        for name, given, held in (("k", k, phases.k), ("a", a, phases.a)):
            if given is not None and not math.isclose(given, held, rel_tol=1e-12):
                raise DomainError(f"{name}={given} contradicts the phase set ({held})")
        return phases
    if k is None or a is None:
        raise DomainError("array input needs k and a")
    deltas = check_array(np.asarray(phases, dtype=float).reshape(1, -1), ensure_2d=True).ravel()
    return PhaseShiftSet(float(k), float(a), tuple(deltas))


def check_radii(r):
    """Finite, non-negative radii as a 1-d float array (scalars allowed)."""
    arr = np.asarray(r, dtype=float)
    flat = check_array(arr.reshape(-1, 1), ensure_2d=True, ensure_min_samples=1).ravel()
    if np.any(flat < 0):
        raise DomainError("radii must be non-negative")
    return flat.reshape(arr.shape)


class PhaseShiftInversion(BaseEstimator):
    """Reconstruct a compactly supported potential from fixed-energy phase shifts.

    Parameters
    ----------
    c, h, n_phases, mode, bs_count, drop_c0, r_min, r0, gl_step, trial_lambdas,
    initial_lambdas, assess_q0, constraint, dps
        Forwarded to :class:`~phaseinv.config.InversionConfig`.

    Attributes
    ----------
    curve_ : PotentialCurve
        Reconstructed q on the r grid.
    report_ : ReconstructionReport
        Moments, expansion, kernel diagonal and quality indicators.
    smoothness_ : float
        Total variation of q on [r0, a].
    lambdas_ : tuple of float
        Bound-state positions used in the expansion.
    a_, k_ : float
        Support radius and wavenumber of the fitted data.
    """

    def __init__(self, c=-1.0, h=0.0, n_phases=None, mode="auto", bs_count=2, drop_c0=False,
                 r_min=None, r0=0.05, gl_step=None, trial_lambdas=None, initial_lambdas=None,
                 assess_q0=0.0, constraint="half", dps=None):
        self.c = c
        self.h = h
        self.n_phases = n_phases
        self.mode = mode
        self.bs_count = bs_count
        self.drop_c0 = drop_c0
        self.r_min = r_min
        self.r0 = r0
        self.gl_step = gl_step
        self.trial_lambdas = trial_lambdas
        self.initial_lambdas = initial_lambdas
        self.assess_q0 = assess_q0
        self.constraint = constraint
        self.dps = dps

    def to_config(self):
        """The :class:`InversionConfig` described by the current parameters."""
        p = self.get_params()
        for name in ("trial_lambdas", "initial_lambdas"):
            if p[name] is not None:
                p[name] = tuple(float(v) for v in p[name])
        return InversionConfig(**p)

    def fit(self, X, y=None, k=None, a=None):
        """Run the inversion.

        Parameters
        ----------
        X : PhaseShiftSet or array-like of float
            Phase shifts delta_0, delta_1, ...
        y : None
            Ignored; present for API compatibility.
        k, a : float, optional
            Required when ``X`` is a plain array.

        Returns
        -------
        self
        """
        phases = check_phase_set(X, k, a)
        curve, report = reconstruct(phases, self.to_config())
        self.curve_ = curve
        self.report_ = report
        self.smoothness_ = report.smoothness
        self.lambdas_ = tuple(report.lambdas)
        self.a_ = phases.a
        self.k_ = phases.k
        return self

    def predict(self, r):
        """q at radii ``r``; zero outside the support.

        Raises
        ------
        DomainError
            For radii inside the reconstructed range's inner cut-off.
        """
        check_is_fitted(self, "curve_")
        r = check_radii(r)
        grid = self.curve_.grid
        if np.any(r < grid[0] * (1 - 1e-12)):
            raise DomainError(f"radii below r_min = {grid[0]:.6g} were not reconstructed")
        inside = r < self.a_
        out = np.zeros(r.shape)
        out[inside] = np.interp(r[inside], grid, self.curve_.values)
        return out

    def score(self, X=None, y=None):
        """Negative smoothness measure of the fit (larger is better).

        When ``X`` is given, a copy with the same parameters is fitted to it
        and scored; this estimator is left unchanged.
        """
        if X is not None:
            return -clone(self).fit(X).smoothness_
        check_is_fitted(self, "smoothness_")
        return -self.smoothness_
