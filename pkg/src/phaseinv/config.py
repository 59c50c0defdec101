"""Parameters of one inversion run."""

from dataclasses import dataclass, asdict, replace
import math

from .errors import DomainError

MODES = ("auto", "zero", "one", "multi")
CONSTRAINTS = ("half", "literal")


@dataclass(frozen=True)
class InversionConfig:
    """Everything an inversion needs besides the phase shifts themselves.

    The wavenumber and support radius travel with the data
    (:class:`~phaseinv.forward.PhaseShiftSet`), not with the configuration.

    Parameters
    ----------
    c : float
        Liouville scale parameter, strictly negative.
    h : float
        Boundary parameter of the auxiliary problem.
    n_phases : int or None
        Use only the first ``n_phases`` phase shifts (all when None).
    mode : {'auto', 'zero', 'one', 'multi'}
        Number of bound-state terms in the expansion of F.  ``'auto'`` takes
        the count from the exponential-well assessment (none when the
        assessment well is not binding).
    bs_count : int
        Number of bound states in ``'multi'`` mode (>= 2).
    drop_c0 : bool
        Remove the n = 0 column in ``'zero'`` mode.
    r_min : float or None
        Inner radius of the Gel'fand-Levitan domain; 0.01 a when None.
        Clamped to at most ``r0`` so the reported range is always covered.
    r0 : float
        Inner end of the interval [r0, a] used for the smoothness measure.
    gl_step : float or None
        Step of the x grid; 0.02 |c| when None.
    trial_lambdas : pair of float or None
        Trial bound-state positions for ``'one'`` mode; (-1, -4)/c^2 when None.
    initial_lambdas : sequence of float or None
        Starting positions for ``'multi'`` mode.
    auto_assess : bool
        In ``'multi'`` mode without ``initial_lambdas``, start from the
        exponential-well assessment.
    assess_q0 : float
        Potential value used by that assessment (kappa^2 = k^2 - assess_q0).
    constraint : {'half', 'literal'}
        Form of the F(0) = -h constraint in ``'multi'`` mode.
    dps : int or None
        Working precision of moments and moment solves (automatic when None).
    max_iter : int
        Newton iteration cap in ``'multi'`` mode.
    """

    c: float = -1.0
    h: float = 0.0
    n_phases: int = None
    mode: str = "auto"
    bs_count: int = 2
    drop_c0: bool = False
    r_min: float = None
    r0: float = 0.05
    gl_step: float = None
    trial_lambdas: tuple = None
    initial_lambdas: tuple = None
    auto_assess: bool = True
    assess_q0: float = 0.0
    constraint: str = "half"
    dps: int = None
    max_iter: int = 200

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c < 0):
            raise DomainError(f"c must be strictly negative, got {self.c!r}")
        if not math.isfinite(self.h):
            raise DomainError(f"h must be finite, got {self.h!r}")
        if self.n_phases is not None and (int(self.n_phases) != self.n_phases or self.n_phases < 1):
            raise DomainError(f"n_phases must be a positive integer, got {self.n_phases!r}")
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "multi":
            if int(self.bs_count) != self.bs_count or self.bs_count < 2:
                raise DomainError("multi mode needs bs_count >= 2")
            if self.initial_lambdas is None and not self.auto_assess:
                raise DomainError("multi mode needs initial_lambdas or auto_assess")
            if self.initial_lambdas is not None and len(self.initial_lambdas) != self.bs_count:
                raise DomainError("initial_lambdas must have bs_count entries")
        if self.drop_c0 and self.mode not in ("zero", "auto"):
            raise DomainError("drop_c0 applies to mode 'zero' only")
        for name in ("r_min", "gl_step"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if not (math.isfinite(self.r0) and self.r0 > 0):
            raise DomainError(f"r0 must be positive, got {self.r0!r}")
        if self.trial_lambdas is not None:
            if len(self.trial_lambdas) != 2 or not all(v < 0 for v in self.trial_lambdas):
                raise DomainError("trial_lambdas must be two negative numbers")
        if self.constraint not in CONSTRAINTS:
            raise DomainError(f"constraint must be one of {CONSTRAINTS}")
        if self.dps is not None and self.dps < 16:
            raise DomainError("dps below 16 would be less precise than double arithmetic")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")

    def effective_r_min(self, a):
        r_min = 0.01 * a if self.r_min is None else self.r_min
        return min(r_min, self.r0, a)

    def effective_step(self):
        return 0.02 * abs(self.c) if self.gl_step is None else self.gl_step

    def with_params(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)
