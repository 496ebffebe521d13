"""Command-line front end.

Every command emits a table (CSV or JSON) to stdout or ``--out``. Exit codes:
0 success, 1 numerical discrepancy in ``verify``, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import excitations, fock, gaussian, matrixio, rindler
from .errors import FermirelError, InvalidRange

EXIT_OK, EXIT_DISCREPANCY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- tables -------------------------------------------------------------------


@dataclass
class Table:
    columns: List[str]
    rows: List[list]


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _parse_cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def _plain(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def format_table(table: Table, fmt: str) -> str:
    if fmt == "json":
        rows = [[_plain(v) for v in row] for row in table.rows]
        return json.dumps({"columns": table.columns, "rows": rows}, indent=2) + "\n"
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return out.getvalue()


def parse_table(text: str, fmt: str) -> Table:
    if fmt == "json":
        obj = json.loads(text)
        return Table(list(obj["columns"]), [list(r) for r in obj["rows"]])
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    return Table(columns, [[_parse_cell(c) for c in row] for row in reader])


# -- commands -----------------------------------------------------------------


def cmd_spectrum(ell_min: float, ell_max: float, steps: int) -> Table:
    """Table of ``(ell, lambda_ell)`` on a uniform grid including both endpoints."""
    if steps < 2:
        raise InvalidRange("need at least two steps")
    if not ell_min < ell_max:
        raise InvalidRange(f"empty range [{ell_min}, {ell_max}]")
    grid = np.linspace(ell_min, ell_max, steps)
    grid[0], grid[-1] = ell_min, ell_max
    return Table(["ell", "lambda"], [[float(x), rindler.lambda_spectrum(x)] for x in grid])


def cmd_entropy_gaussian(cov_path: str, ref_path: Optional[str] = None) -> Table:
    cov = matrixio.load_covariance(cov_path)
    t = gaussian.density_from_covariance(cov)
    rows = [
        ["n_modes", cov.n_modes],
        ["von_neumann_entropy", gaussian.von_neumann_entropy(t)],
        ["partition_log", gaussian.partition_log(cov)],
    ]
    if ref_path is not None:
        cov0 = matrixio.load_covariance(ref_path)
        if cov0.n_modes != cov.n_modes:
            raise UsageError("state and reference have different mode counts")
        t0 = gaussian.density_from_covariance(cov0)
        rows.append(["reference_entropy", gaussian.von_neumann_entropy(t0)])
        rows.append(["relative_entropy", float(gaussian.relative_entropy(t, t0, cov0))])
        rows.append(["relative_entropy_entropy_form", gaussian.relative_entropy_via_entropies(t, t0, cov0)])
    return Table(["quantity", "value"], rows)


def cmd_entropy_excite(d: Sequence[float], f: Sequence[complex]) -> Table:
    value = excitations.excite_relative_entropy(excitations.VacuumSpectrum(d), excitations.ExcitationProfile(f))
    return Table(["quantity", "value"], [["n_modes", len(d)], ["relative_entropy", float(value)]])


def cmd_entropy_nonunitary(lams: Sequence[float], fsqs: Sequence[float]) -> Table:
    rows = []
    for lam in lams:
        for x in fsqs:
            rows.append([lam, x, excitations.nonunitary_relative_entropy(lam, x)])
    return Table(["lambda", "f_norm_sq", "relative_entropy"], rows)


def cmd_entropy_rindler(
    gaussian_params: Optional[Sequence[float]] = None,
    profile_path: Optional[str] = None,
    ell_grid: Optional[Sequence[float]] = None,
    epsabs: float = 1e-9,
) -> Table:
    """Entropy of a boost-space Gaussian descriptor or a CSV profile.

    A ``theta`` CSV is transformed onto ``ell_grid = (min, max, steps)``
    before integration.
    """
    if (gaussian_params is None) == (profile_path is None):
        raise UsageError("give exactly one of --gaussian or --profile")
    rows = []
    if gaussian_params is not None:
        center, width = gaussian_params
        profile = rindler.GaussianBoostProfile(center, width)
        rows.append(["input", "gaussian"])
    else:
        profile = rindler.read_profile_csv(profile_path)
        if isinstance(profile, rindler.RapidityProfile):
            if ell_grid is None:
                raise UsageError("a theta-space profile needs --ell-grid MIN,MAX,STEPS")
            lo, hi, steps = ell_grid
            profile = rindler.rapidity_to_boost(profile, np.linspace(lo, hi, int(steps)))
            rows.append(["input", "theta"])
        else:
            rows.append(["input", "ell"])
    est = rindler.rindler_relative_entropy(profile, epsabs=epsabs)
    rows += [
        ["relative_entropy", est.value],
        ["quadrature_error", est.abserr],
        ["truncation_error", est.truncation],
        ["domain_min", est.domain[0]],
        ["domain_max", est.domain[1]],
        ["method", est.method],
    ]
    if isinstance(profile, rindler.BoostModeProfile):
        rows.append(["n_points", int(profile.ell.size)])
    return Table(["quantity", "value"], rows)


VERIFY_CHECKS = (
    "von_neumann",
    "partition_log",
    "reduced_density",
    "relative_entropy",
    "entropy_forms",
    "bogoliubov",
    "excite_formula",
    "nonunitary",
)


def _verify_trial(seed: int, trial: int, n_modes_max: int, scale: float) -> dict:
    rng = np.random.default_rng([seed, trial])
    n = int(rng.integers(1, n_modes_max + 1))
    cov = gaussian.random_covariance(rng, n, scale)
    cov0 = gaussian.random_covariance(rng, n, scale)
    t = gaussian.density_from_covariance(cov)
    t0 = gaussian.density_from_covariance(cov0)
    w = fock.gaussian_density_matrix(cov)
    w0 = fock.gaussian_density_matrix(cov0)

    srel0 = float(gaussian.relative_entropy(t, t0, cov0))
    transform, energies = gaussian.bogoliubov_diagonalize(cov)
    diag = transform.conjugate(cov) - np.diag(np.concatenate([energies, -energies]))

    d = rng.uniform(0.05, 0.95, n)
    f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    f /= np.linalg.norm(f)
    vac = fock.number_preserving_density(d)
    excite = excitations.excite_relative_entropy(d, f)

    lam = float(rng.uniform(0.05, 0.95))
    fsq = float(rng.exponential(2.0))
    w1 = fock.number_preserving_density([lam])
    wf = fock.even_part(fock.nonunitary_excited_density(w1, [math.sqrt(fsq)]))

    return {
        "von_neumann": abs(gaussian.von_neumann_entropy(t) - fock.oracle_von_neumann(w)),
        "partition_log": abs(gaussian.partition_log(cov) - fock.fock_partition_log(cov)),
        "reduced_density": float(np.max(np.abs(fock.oracle_reduced_density(w) - t.data))),
        "relative_entropy": abs(srel0 - fock.oracle_relative_entropy(w, w0)),
        "entropy_forms": abs(srel0 - gaussian.relative_entropy_via_entropies(t, t0, cov0)),
        "bogoliubov": max(float(np.max(np.abs(diag))), transform.unitarity_residual(), transform.structure_residual()),
        "excite_formula": abs(excite - fock.oracle_relative_entropy(fock.excited_density(vac, f), vac)),
        "nonunitary": abs(excitations.nonunitary_relative_entropy(lam, fsq) - fock.oracle_relative_entropy(wf, w1)),
    }


def cmd_verify(seed: int, n_trials: int, n_modes_max: int, tol: float = 1e-8, jobs: int = 1, scale: float = 2.0):
    """Compare every closed form against the Fock oracle on random instances.

    Returns ``(table, all_passed)``. Trials are independent (seeded by
    ``(seed, trial)``) and reported in trial order whatever ``jobs`` is.
    """
    fock.check_mode_count(n_modes_max)
    if n_trials < 1:
        raise UsageError("need at least one trial")

    def run(trial):
        return _verify_trial(seed, trial, n_modes_max, scale)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, range(n_trials)))
    else:
        results = [run(trial) for trial in range(n_trials)]

    rows = []
    passed = True
    for check in VERIFY_CHECKS:
        worst = max(r[check] for r in results)
        ok = worst <= tol
        passed &= ok
        rows.append([check, n_trials, worst, tol, "PASS" if ok else "FAIL"])
    table = Table(["check", "trials", "max_discrepancy", "tolerance", "status"], rows)
    return table, passed


# -- argument parsing ---------------------------------------------------------


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complexes(text: str) -> List[complex]:
    try:
        return [complex(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
    common.add_argument("--config", metavar="PATH", help="JSON file whose keys mirror the flags")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="fermirel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="tabulate the Rindler spectrum")
    p.add_argument("--ell-min", type=float, default=-2.0)
    p.add_argument("--ell-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=401)

    p = sub.add_parser("entropy-gaussian", parents=[common], help="entropies of a Gaussian state")
    p.add_argument("--cov", help="covariance matrix JSON")
    p.add_argument("--ref", help="reference covariance matrix JSON")

    p = sub.add_parser("entropy-excite", parents=[common], help="unitary single-mode excitation")
    p.add_argument("--d", type=_floats, help="vacuum occupations, comma-separated")
    p.add_argument("--f", type=_complexes, help="excitation mode, comma-separated (e.g. 0.6,0.8j)")

    p = sub.add_parser("entropy-nonunitary", parents=[common], help="non-unitary excitation sweep")
    p.add_argument("--lam", type=_floats, default=[0.25])
    p.add_argument("--fsq", type=_floats, default=[1.0])

    p = sub.add_parser("entropy-rindler", parents=[common], help="Rindler single-excitation entropy")
    p.add_argument("--gaussian", type=_floats, metavar="CENTER,WIDTH")
    p.add_argument("--profile", metavar="CSV")
    p.add_argument("--ell-grid", type=_floats, metavar="MIN,MAX,STEPS")
    p.add_argument("--epsabs", type=float, default=1e-9)

    p = sub.add_parser("verify", parents=[common], help="cross-check formulas against the Fock oracle")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--modes", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--scale", type=float, default=2.0)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    known = vars(args)
    defaults = {}
    for key, value in config.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("command", "config"):
            raise UsageError(f"unknown config key {key!r}")
        defaults[dest] = value
    # explicit flags win over the config file
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        status = EXIT_OK
        if args.command == "spectrum":
            table = cmd_spectrum(args.ell_min, args.ell_max, args.steps)
        elif args.command == "entropy-gaussian":
            if not args.cov:
                raise UsageError("--cov is required")
            table = cmd_entropy_gaussian(args.cov, args.ref)
        elif args.command == "entropy-excite":
            if not args.d or not args.f:
                raise UsageError("--d and --f are required")
            table = cmd_entropy_excite(args.d, args.f)
        elif args.command == "entropy-nonunitary":
            table = cmd_entropy_nonunitary(args.lam, args.fsq)
        elif args.command == "entropy-rindler":
            table = cmd_entropy_rindler(args.gaussian, args.profile, args.ell_grid, args.epsabs)
        else:
            table, passed = cmd_verify(args.seed, args.trials, args.modes, args.tol, args.jobs, args.scale)
            status = EXIT_OK if passed else EXIT_DISCREPANCY
    except (UsageError, FermirelError, ValueError, OSError) as exc:
        print(f"fermirel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = format_table(table, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
