"""Pinned inversion scenarios with reference values.

Every scenario bundles the phase shifts (generated or tabulated), the
inversion settings and the physical scale that converts q into a
potential energy.  Phase shifts of constant wells are generated with the
analytic formula in extended precision because the moment problem needs
them to nearly full double accuracy.  The Gauss and Woods-Saxon inputs
are rounded to 4 and 2 significant digits to mimic tabulated data.

Wavenumbers for the experimental data:

* e-Ar at 12 eV = 0.4412 hartree: k = sqrt(2 E) in atomic units, V = q / 2.
* n-alpha: k^2 = E / (hbar^2 / 2 mu) with the neutron-alpha reduced mass,
  V = (hbar^2 / 2 mu) q in MeV with r in fm.
"""

from dataclasses import dataclass, field
import math

from .config import InversionConfig
from .errors import DomainError
from .forward import PhaseShiftSet, RadialPotential, constant_well_phases, solve_phase_shifts

HBARC_MEV_FM = 197.3269804
NEUTRON_MEV = 939.56542052
ALPHA_MEV = 3727.3794066
REDUCED_MASS_N_ALPHA = NEUTRON_MEV * ALPHA_MEV / (NEUTRON_MEV + ALPHA_MEV)
HBAR2_2MU_N_ALPHA = HBARC_MEV_FM ** 2 / (2.0 * REDUCED_MASS_N_ALPHA)

E_AR_HARTREE = 0.4412
E_AR_PHASES = (-1.218, -0.626, 1.191, 0.118)
N_ALPHA_TABLE = (
    # E (MeV), combined phases, a (fm), c
    (9.6, (1.763, 1.553, 0.028), 3.9, -4.25),
    (12.8, (1.676, 1.466, 0.066), 3.4, -2.96),
    (16.0, (1.588, 1.396, 0.117), 3.3, -2.37),
)


@dataclass(frozen=True)
class Run:
    """One inversion: input phases, settings and reference values."""

    label: str
    phases: PhaseShiftSet
    config: InversionConfig
    energy_scale: float = 1.0
    energy_unit: str = ""
    length_unit: str = ""
    expected: dict = field(default_factory=dict)
    exact: object = None  # callable q(r) when the source potential is known


def _rounded(phases, digits):
    """Phases rounded to ``digits`` significant digits."""
    return PhaseShiftSet(phases.k, phases.a, tuple(float(f"{float(d):.{digits}g}") for d in phases.deltas))


def table2():
    phases = constant_well_phases(1.2, 2.0, 1.0, 11, dps=60)
    cfg = InversionConfig(c=-0.3, h=-0.5, mode="one")
    return [Run("table2", phases, cfg, expected={"sqrt_neg_lambda": -1.4447, "c_minus1": -6.4667, "c2": 7.2085},
                exact=RadialPotential.constant(1.2, 2.0))]


def fig2():
    phases = constant_well_phases(1.2, 2.0, 1.0, 11, dps=60)
    exact = RadialPotential.constant(1.2, 2.0)
    panels = [("fig2a", -1.0, 0.0, 12.0), ("fig2b", -1.0, -0.15, 15.0), ("fig2c", -0.3, 0.0, 0.15), ("fig2d", -0.3, -0.15, 0.011)]
    return [Run(lab, phases, InversionConfig(c=c, h=h, mode="zero"), expected={"s": s}, exact=exact) for lab, c, h, s in panels]


def phase_count():
    """Constant well 1.2 H_2 from 5, 10, 20 and 40 phases at (c, h) = (-1, 0)."""
    phases = constant_well_phases(1.2, 2.0, 1.0, 40, dps=100)
    exact = RadialPotential.constant(1.2, 2.0)
    return [Run(f"phases{n}", phases.truncated(n), InversionConfig(c=-1.0, h=0.0, mode="zero"), exact=exact) for n in (5, 10, 20, 40)]


def fig4():
    small = constant_well_phases(0.8, 2.0, 1.0, 11, dps=60)
    large = constant_well_phases(0.8, 11.0, 1.0, 11, dps=60)
    return [
        Run("fig4a", small, InversionConfig(c=-1.0, h=0.0, mode="one"), expected={"lambdas": (-0.105,), "s": 0.049},
            exact=RadialPotential.constant(0.8, 2.0)),
        Run("fig4b", small, InversionConfig(c=-0.5, h=-0.65, mode="one"), expected={"lambdas": (-1.39,), "s": 0.0022},
            exact=RadialPotential.constant(0.8, 2.0)),
        Run("fig4c", large, InversionConfig(c=-1.5, h=0.0, mode="multi", bs_count=2, assess_q0=0.8),
            expected={"lambdas": (-0.48, -2.43), "s": 1.28}, exact=RadialPotential.constant(0.8, 11.0)),
        Run("fig4d", large, InversionConfig(c=-1.5, h=5.0, mode="one"), expected={"lambdas": (-2.41,), "s": 0.11},
            exact=RadialPotential.constant(0.8, 11.0)),
    ]


def gauss():
    pot = RadialPotential.gauss(-4.0, 5.0, 1.5)
    phases = _rounded(solve_phase_shifts(pot, 1.5, 6, ode_tol=1e-11), 4)
    cfg = InversionConfig(c=-0.74, h=0.0, mode="one")
    return [Run("gauss", phases, cfg, expected={"assessed_lambda": -3.22, "lambdas": (-3.36,)}, exact=pot)]


def woods_saxon():
    pot = RadialPotential.woods_saxon(-4.0, 0.5, 0.1, 2.0)
    phases = _rounded(solve_phase_shifts(pot, 1.5, 3, ode_tol=1e-11), 2)
    cfg = InversionConfig(c=-1.25, h=0.0, mode="one")
    return [Run("ws", phases, cfg, expected={"assessed_lambda": -2.44, "lambdas": (-2.46,)}, exact=pot)]


def e_ar():
    k = math.sqrt(2.0 * E_AR_HARTREE)
    phases = PhaseShiftSet(k, 3.9, E_AR_PHASES)
    cfg = InversionConfig(c=-3.7, h=1.9, mode="one")
    return [Run("e-ar", phases, cfg, energy_scale=0.5, energy_unit="hartree", length_unit="bohr",
                expected={"lambdas": (-0.44,), "v_min": -2.8, "r_min": 1.2})]


def n_alpha():
    runs = []
    for energy, deltas, a, c in N_ALPHA_TABLE:
        k = math.sqrt(energy / HBAR2_2MU_N_ALPHA)
        runs.append(Run(f"n-alpha-{energy:g}", PhaseShiftSet(k, a, deltas), InversionConfig(c=c, h=0.0, mode="one"),
                        energy_scale=HBAR2_2MU_N_ALPHA, energy_unit="MeV", length_unit="fm",
                        expected={"v_min_range": (-57.0, -45.0), "r_min": 1.15}))
    return runs


SCENARIOS = {
    "table2": table2,
    "fig2": fig2,
    "phase-count": phase_count,
    "fig4": fig4,
    "gauss": gauss,
    "ws": woods_saxon,
    "e-ar": e_ar,
    "n-alpha": n_alpha,
}


def get(name):
    """Runs of a named scenario."""
    try:
        return SCENARIOS[name]()
    except KeyError:
        raise DomainError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
