"""Command-line front end.

Single-point commands print one JSON record; curves and Wigner grids are CSV.
Exit codes: 0 success, 1 domain or tolerance failure, 2 usage error.

Examples::

    qreading optimal --delta pi --energy 4 --eta 0.9
    qreading curve --delta pi --eta 1 --emin 0 --emax 6 --points 61 --out curve.csv
    qreading wigner --optimal --delta pi --energy 4 --eta 0.9 --grid 101 --range 5
    qreading oracle composition --dim 16 --trials 20 --seed 7
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .exceptions import DomainError, OracleError, TruncationError
from .reading import ReadingTask, optimal_strategy, sql_strategy, tradeoff_curve
from .states import SqueezedCoherentState, wigner_grid

__all__ = [
    "RunRecord",
    "parse_angle",
    "build_parser",
    "cmd_sql",
    "cmd_optimal",
    "cmd_curve",
    "cmd_wigner",
    "cmd_oracle",
    "main",
]

DEFAULT_TOL = 1e-7

_ANGLE = re.compile(
    r"""^\s*(?P<sign>[+-]?)\s*(?P<coef>\d+(\.\d*)?|\.\d+)?\s*\*?\s*pi
        \s*(/\s*(?P<den>\d+(\.\d*)?|\.\d+))?\s*$""",
    re.VERBOSE,
)


def parse_angle(text) -> float:
    """Radians from ``"pi"``, ``"pi/2"``, ``"3pi/4"``, ``"-2*pi/3"`` or a plain number.

    Fractions of pi are formed as ``coef * math.pi / den`` so that ``pi/2``
    is bit-for-bit ``math.pi / 2``.
    """
    if isinstance(text, (int, float)):
        return float(text)
    m = _ANGLE.match(str(text).lower())
    if m:
        coef = float(m.group("coef")) if m.group("coef") else 1.0
        den = float(m.group("den")) if m.group("den") else 1.0
        if den == 0.0:
            raise argparse.ArgumentTypeError(f"zero denominator in angle {text!r}")
        value = coef * math.pi / den
        return -value if m.group("sign") == "-" else value
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite: {text!r}")
    return value


def _state(text) -> tuple[float, float, float, float]:
    parts = str(text).split(",") if isinstance(text, str) else list(text)
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("state must be a,phi,r,theta")
    a = float(parts[0])
    r = float(parts[2])
    return a, parse_angle(parts[1]), r, parse_angle(parts[3])


@dataclass
class RunRecord:
    command: str
    inputs: dict
    outputs: dict
    version: str = __version__

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


@dataclass
class Result:
    text: str
    code: int = 0


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _task(ns) -> ReadingTask:
    return ReadingTask(ns.delta, ns.energy, ns.eta)


def _task_inputs(ns, task) -> dict:
    return {"delta": task.delta, "energy": task.energy, "eta": task.eta}


def _strategy_output(ns, command, task, strategy) -> Result:
    record = RunRecord(command, _task_inputs(ns, task), strategy.as_dict())
    if ns.format == "csv":
        row = {**record.inputs, **record.outputs}
        row["flags"] = ";".join(row["flags"])
        return Result(_csv_text([list(row), list(row.values())]))
    return Result(record.to_json())


def cmd_sql(ns) -> Result:
    task = _task(ns)
    return _strategy_output(ns, "sql", task, sql_strategy(task))


def cmd_optimal(ns) -> Result:
    task = _task(ns)
    strategy = optimal_strategy(task, check_regime=not ns.no_regime_check)
    return _strategy_output(ns, "optimal", task, strategy)


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def cmd_curve(ns) -> Result:
    if ns.points < 1:
        raise DomainError(f"--points must be >= 1, got {ns.points}")
    if ns.emin > ns.emax:
        raise DomainError(f"--emin {ns.emin} exceeds --emax {ns.emax}")
    grid = [ns.emin] if ns.points == 1 else list(np.linspace(ns.emin, ns.emax, ns.points))
    rows = tradeoff_curve(ns.delta, ns.eta, [float(e) for e in grid], check_regime=ns.regime_check)
    hybrid = any(r.pe_hybrid is not None for r in rows)
    header = ["E", "pe_sql", "pe_opt", "r_opt", "sinh2_r_opt"] + (["pe_hybrid"] if hybrid else [])
    body = []
    for r in rows:
        vals = [r.energy, r.pe_sql, r.pe_opt, r.r_opt, r.sinh2_r_opt]
        if hybrid:
            vals.append(r.pe_hybrid)
        body.append([_fmt(v) for v in vals])
    return Result(_csv_text([header] + body))


def cmd_wigner(ns) -> Result:
    if ns.optimal:
        if ns.delta is None or ns.energy is None:
            raise DomainError("--optimal needs --delta and --energy")
        s = optimal_strategy(_task(ns), check_regime=False).probe
    else:
        s = SqueezedCoherentState(*ns.state)
    if ns.range <= 0.0:
        raise DomainError(f"--range must be positive, got {ns.range}")
    xs, ps, w = wigner_grid(s, (-ns.range, ns.range), (-ns.range, ns.range), ns.grid, ns.convention)
    rows = [["x\\p"] + [_fmt(p) for p in ps]]
    rows += [[_fmt(x)] + [_fmt(v) for v in row] for x, row in zip(xs, w)]
    return Result(_csv_text(rows))


def _oracle_composition(ns, rng):
    from .fock import random_probes, verify_composition

    probes = random_probes(3, ns.dim, seed=ns.seed)
    worst, where = 0.0, None
    for _ in range(ns.trials):
        alpha, beta = (float(v) for v in rng.uniform(size=2))
        dist = verify_composition(alpha, beta, ns.dim, probes)
        if where is None or dist > worst:
            worst, where = dist, {"alpha": alpha, "beta": beta}
    return {"max_distance": worst, "worst_case": where}


def _oracle_commutation(ns, rng):
    from .fock import BeamSplitter, PhaseShifter, random_probes, verify_commutation

    single = random_probes(2, ns.dim, seed=ns.seed)
    double = random_probes(2, ns.dim, n_modes=2, seed=ns.seed)
    worst, where = 0.0, None
    for _ in range(ns.trials):
        phi = float(rng.uniform(-math.pi, math.pi))
        tau = float(rng.uniform())
        eta = float(rng.uniform(0.05, 1.0))
        cases = [({"unitary": "phase", "phi": phi, "eta": eta},
                  verify_commutation(PhaseShifter(phi), eta, ns.dim, single))]
        etas = (eta, float(rng.uniform(0.05, 1.0))) if ns.unequal_eta else eta
        cases.append(({"unitary": "beamsplitter", "transmittivity": tau, "eta": etas},
                      verify_commutation(BeamSplitter(tau), etas, ns.dim, double)))
        for params, dist in cases:
            if where is None or dist > worst:
                worst, where = dist, params
    return {"max_distance": worst, "worst_case": where, "unequal_eta": ns.unequal_eta}


def _oracle_decomposition(ns, rng):
    from .fock import verify_bs_decomposition

    worst, where = 0.0, None
    for _ in range(ns.trials):
        alpha, beta = (float(v) for v in rng.uniform(size=2))
        dist = verify_bs_decomposition(alpha, beta, ns.dim)
        if where is None or dist > worst:
            worst, where = dist, {"alpha": alpha, "beta": beta}
    return {"max_distance": worst, "worst_case": where}


def homodyne_samples(rng, n, d, max_energy=2.0):
    """Seeded probe/quadrature pairs for the homodyne scale fit."""
    from .fock import squeezed_coherent_vector

    out = []
    while len(out) < n:
        r = float(rng.uniform(0.0, 0.5))
        room = max_energy - math.sinh(r) ** 2
        a = math.sqrt(room * rng.uniform(0.05, 1.0))
        phi, theta, psi = (float(v) for v in rng.uniform(-math.pi, math.pi, size=3))
        if abs(math.cos(psi - phi)) < 0.1:
            continue
        try:
            squeezed_coherent_vector(a, phi, r, theta, d)
        except TruncationError:
            continue
        out.append((SqueezedCoherentState(a, phi, r, theta), psi))
    return out


def _oracle_homodyne(ns, rng):
    from .fock import mean_scale_fit

    samples = homodyne_samples(rng, ns.trials, ns.dim)
    try:
        fit = mean_scale_fit(samples, d=ns.dim, eta=ns.eta)
    except OracleError as exc:
        return {"max_distance": math.inf, "error": str(exc)}
    width_dev = fit.max_width_deviation
    return {
        "kappa": fit.kappa,
        "kappa_max_deviation": fit.max_deviation,
        "width_ratio_max_deviation": width_dev,
        "max_l1_residual": fit.max_l1_residual,
        "max_distance": max(fit.max_deviation, width_dev),
    }


# suite -> (runner, default dimension, default trials)
_ORACLES = {
    "composition": (_oracle_composition, 16, 20),
    "commutation": (_oracle_commutation, 12, 5),
    "decomposition": (_oracle_decomposition, 12, 20),
    "homodyne": (_oracle_homodyne, 40, 10),
}


def cmd_oracle(ns) -> Result:
    run, default_dim, default_trials = _ORACLES[ns.suite]
    ns.dim = default_dim if ns.dim is None else ns.dim
    ns.trials = default_trials if ns.trials is None else ns.trials
    if ns.dim < 8:
        raise DomainError(f"--dim must be >= 8, got {ns.dim}")
    if ns.trials < 1:
        raise DomainError(f"--trials must be >= 1, got {ns.trials}")
    if not 0.0 < ns.eta <= 1.0:
        raise DomainError(f"--eta must lie in (0, 1], got {ns.eta}")
    rng = np.random.default_rng(ns.seed)
    outputs = run(ns, rng)
    outputs["tolerance"] = ns.tol
    outputs["passed"] = bool(outputs["max_distance"] < ns.tol)
    inputs = {"suite": ns.suite, "dim": ns.dim, "trials": ns.trials, "seed": ns.seed}
    if ns.suite == "homodyne":
        inputs["eta"] = ns.eta
    record = RunRecord("oracle", inputs, outputs)
    return Result(record.to_json(), 0 if outputs["passed"] else 1)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _task_flags(p, required=True):
    p.add_argument("--delta", type=parse_angle, help="phase difference (radians or e.g. pi/2)")
    p.add_argument("--energy", type=float, help="mean photon number budget E")
    p.add_argument("--eta", type=float, default=1.0, help="detection efficiency in (0, 1]")
    p.set_defaults(_required=("delta", "energy") if required else ())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qreading",
        description="Error probabilities for reading a phase-shift memory with squeezed light.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file whose keys mirror the flags; flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("sql", "coherent-state strategy"), ("optimal", "closed-form squeezed strategy")):
        p = sub.add_parser(name, help=helptext)
        _task_flags(p)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
        p.set_defaults(format="json")
        if name == "optimal":
            p.add_argument("--no-regime-check", action="store_true",
                           help="skip the numeric comparison at small phase differences")
        p.add_argument("--out", default="-")

    p = sub.add_parser("curve", help="energy versus error CSV")
    p.add_argument("--delta", type=parse_angle)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--emin", type=float, default=0.0)
    p.add_argument("--emax", type=float, default=6.0)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("--regime-check", action="store_true",
                   help="flag points where a numeric search beats the closed form")
    p.add_argument("--out", default="-")
    p.set_defaults(_required=("delta",))

    p = sub.add_parser("wigner", help="Wigner function grid CSV")
    p.add_argument("--state", type=_state, help="a,phi,r,theta")
    p.add_argument("--optimal", action="store_true", help="use the optimal probe for --delta/--energy/--eta")
    _task_flags(p, required=False)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--range", type=float, default=5.0)
    p.add_argument("--convention", choices=("printed", "marginal"), default="printed")
    p.add_argument("--out", default="-")

    p = sub.add_parser("oracle", help="Fock-space brute-force checks")
    p.add_argument("suite", choices=sorted(_ORACLES))
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--trials", type=int, default=None, help="default depends on the suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--eta", type=float, default=1.0, help="detector efficiency for the homodyne suite")
    p.add_argument("--unequal-eta", action="store_true",
                   help="commutation: use different losses on the two modes (expected to fail)")
    p.add_argument("--out", default="-")
    return parser


_COMMANDS = {
    "sql": cmd_sql,
    "optimal": cmd_optimal,
    "curve": cmd_curve,
    "wigner": cmd_wigner,
    "oracle": cmd_oracle,
}


def _parse(parser, argv):
    ns = parser.parse_args(argv)
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {ns.config}: {exc}")
        if not isinstance(config, dict):
            parser.error("config file must hold a JSON object")
        # re-parse with the file as defaults so explicit flags still win
        sub = parser._subparsers._group_actions[0].choices[ns.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(config) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        converters = {a.dest: a.type for a in sub._actions if a.type is not None}
        defaults = {}
        for key, value in config.items():
            conv = converters.get(key)
            try:
                defaults[key] = conv(value) if conv and value is not None else value
            except (argparse.ArgumentTypeError, ValueError, TypeError) as exc:
                parser.error(f"config key {key}: {exc}")
        sub.set_defaults(**defaults)
        ns = parser.parse_args(argv)
    for name in getattr(ns, "_required", ()):
        if getattr(ns, name, None) is None:
            parser.error(f"{ns.command}: --{name} is required (flag or config key)")
    if ns.command == "wigner" and not ns.optimal and ns.state is None:
        parser.error("wigner: give --state or --optimal")
    return ns


def main(argv=None) -> int:
    parser = build_parser()
    ns = _parse(parser, argv)
    try:
        result = _COMMANDS[ns.command](ns)
    except (DomainError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if ns.out == "-":
            sys.stdout.write(result.text)
        else:
            with open(ns.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(result.text)
    except OSError as exc:
        print(f"error: cannot write {ns.out}: {exc}", file=sys.stderr)
        return 1
    return result.code


if __name__ == "__main__":
    sys.exit(main())
