"""Phase-file parsing and writing, CSV potentials and text reports.

Phase file grammar (one item per line, ``#`` starts a comment)::

    k = <real>
    a = <real>
    <l> <delta>                       # one phase per row, or
    <l> <delta_plus> <delta_minus>    # spin-split phases, combined on read

Both headers are required, each at most once, and before the first row.
The rows must all have the same shape and cover l = 0..N without gaps or
repeats (in any order).  Numbers are written with ``%.17g`` so that a
write/parse round trip is exact.
"""

from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError
from .forward import PhaseShiftSet

HEADER_KEYS = ("k", "a")


def combine_spin_phases(l, delta_plus, delta_minus):
    """Spin-averaged phase [(l + 1) delta+ + l delta-] / (2 l + 1)."""
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l!r}")
    return ((l + 1) * delta_plus + l * delta_minus) / (2 * l + 1)


def _number(text, line, path, what):
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not a number", line, path) from None


def parse_phase_text(text, path=None):
    """Parse phase-file content (see the module docstring)."""
    header = {}
    rows = {}
    shape = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" in body:
            key, _, value = (part.strip() for part in body.partition("="))
            if key not in HEADER_KEYS:
                raise ParseError(f"unknown header {key!r}", lineno, path)
            if key in header:
                raise ParseError(f"header {key!r} given twice", lineno, path)
            if rows:
                raise ParseError(f"header {key!r} after the first phase row", lineno, path)
            header[key] = _number(value, lineno, path, f"header {key}")
            continue
        fields = body.split()
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 'l delta' or 'l delta+ delta-', got {len(fields)} fields", lineno, path)
        if shape is None:
            shape = len(fields)
        elif len(fields) != shape:
            raise ParseError("rows mix one-phase and spin-split shapes", lineno, path)
        try:
            l = int(fields[0])
        except ValueError:
            raise ParseError(f"l {fields[0]!r} is not an integer", lineno, path) from None
        if l < 0:
            raise ParseError(f"l must be non-negative, got {l}", lineno, path)
        if l in rows:
            raise ParseError(f"duplicate l = {l}", lineno, path)
        vals = [_number(f, lineno, path, "phase") for f in fields[1:]]
        if not all(np.isfinite(vals)):
            raise ParseError("phase is not finite", lineno, path)
        rows[l] = (vals[0] if shape == 2 else combine_spin_phases(l, *vals), lineno)
    for key in HEADER_KEYS:
        if key not in header:
            raise ParseError(f"missing header '{key} = ...'", None, path)
    if not rows:
        raise ParseError("no phase rows", None, path)
    missing = sorted(set(range(max(rows) + 1)) - set(rows))
    if missing:
        raise ParseError(f"phase rows skip l = {missing[0]}", rows[max(rows)][1], path)
    try:
        return PhaseShiftSet(header["k"], header["a"], tuple(rows[l][0] for l in range(len(rows))))
    except DomainError as exc:
        raise ParseError(str(exc), None, path) from None


def parse_phase_file(path):
    """Read a phase file into a :class:`PhaseShiftSet`."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", None, path) from None
    return parse_phase_text(text, path)


def format_phase_file(phases, comment=None):
    """Phase-file text for ``phases`` with round-trip exact numbers."""
    lines = []
    if comment:
        lines.extend(f"# {part}" for part in comment.splitlines())
    lines.append(f"k = {float(phases.k):.17g}")
    lines.append(f"a = {float(phases.a):.17g}")
    lines.extend(f"{l} {float(d):.17g}" for l, d in enumerate(phases.deltas))
    return "\n".join(lines) + "\n"


def write_phase_file(path, phases, comment=None):
    Path(path).write_text(format_phase_file(phases, comment))


def format_curve_csv(curve, scale=1.0):
    """CSV text with columns r,q at 12 significant digits, increasing r."""
    lines = ["r,q"]
    for r, q in zip(curve.grid, curve.values):
        lines.append(f"{r:.12g},{scale * q:.12g}")
    return "\n".join(lines) + "\n"


def _fmt(v):
    return f"{float(v):.12g}"


def format_report(report, label=None):
    """Deterministic key=value report with sectioned tables."""
    exp = report.expansion
    cfg = report.config
    out = ["[run]"]
    if label:
        out.append(f"label={label}")
    out += [
        f"k={_fmt(report.k)}",
        f"a={_fmt(report.a)}",
        f"c={_fmt(cfg.c)}",
        f"h={_fmt(cfg.h)}",
        f"mode={cfg.mode}",
        f"mode_used={report.extras.get('mode_used', cfg.mode)}",
        f"n_phases={len(report.moments)}",
        f"dps={report.extras.get('dps')}",
        f"r_min={_fmt(report.extras['r_min'])}",
        f"x_max={_fmt(report.extras['x_max'])}",
        f"gl_step={_fmt(report.grid.step)}",
        "",
        "[quality]",
        f"s={_fmt(report.smoothness)}",
        f"f0_plus_h={float(report.f0_residual):.6e}",
        f"q_a_minus={_fmt(report.q_a_minus)}",
        f"gl_max_residual={float(np.max(report.grid.residuals)):.3e}",
        "",
        "[bound_states]",
        f"count={exp.n_bound}",
    ]
    for i, (s, w) in enumerate(exp.bound_terms, start=1):
        out.append(f"sqrt_neg_lambda_{i}={_fmt(s)}")
        out.append(f"lambda_{i}={_fmt(-float(s) ** 2)}")
        out.append(f"half_weight_{i}={_fmt(w)}")
    if report.assessment is not None:
        a = report.assessment
        out.append(f"assessed_count={a.count}")
        out.append("assessed_lambdas=" + " ".join(_fmt(v) for v in a.lambdas))
    out += ["", "[moments]", "l,mu"]
    out += [f"{l},{_fmt(m)}" for l, m in enumerate(report.moments)]
    out += ["", "[coefficients]", "n,c_n"]
    out += [f"{n},{_fmt(v)}" for n, v in enumerate(exp.coeffs_float())]
    return "\n".join(out) + "\n"


def format_bound_states(bs):
    out = [f"count={bs.count}"]
    for i, lam in enumerate(bs.lambdas, start=1):
        out.append(f"lambda_{i}={_fmt(lam)}")
        if bs.weights is not None:
            out.append(f"weight_{i}={_fmt(bs.weights[i - 1])}")
    for key in sorted(bs.flags):
        out.append(f"{key}={bs.flags[key]}")
    return "\n".join(out) + "\n"


def format_tune(result):
    """Grid table (one line per cell) plus the winning cell."""
    out = ["c,h,s,status"]
    for (c, h), cell in sorted(result.grid.results.items()):
        if "s" in cell:
            out.append(f"{_fmt(c)},{_fmt(h)},{_fmt(cell['s'])},ok")
        else:
            out.append(f"{_fmt(c)},{_fmt(h)},,failed[{cell.get('stage')}]")
    out += ["", f"best_c={_fmt(result.c)}", f"best_h={_fmt(result.h)}", f"best_s={_fmt(result.s)}"]
    return "\n".join(out) + "\n"
