"""``qpyc`` command line: tables and figure data as long-format CSV.

Every output starts with a ``# manifest {...}`` line holding the command, the
resolved parameters, the seed, the RNG and the package version.  With the
same inputs the output bytes are identical; ``--timestamp`` adds wall-clock
time to the manifest and gives that up.

Exit codes: 0 ok, 2 usage, 3 infeasible parameters, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .codes import (
    InfeasibleError,
    QpcCode,
    QpycCode,
    bits_per_mode,
    bits_per_mode_crossover,
    bits_per_photon,
    four_qubit_code,
    parse_code,
    qpyc_code,
    qpyc_failure_prob,
    qpyc_success_prob,
    three_qutrit_code,
    HILBERT_PAIRS,
)
from .montecarlo import RNG_ALGORITHM, THREADS_ENV, default_threads

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 2, 3, 4


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return "" if v is None else str(v)


def render(command: str, params: dict, columns, rows, notes: dict | None = None,
           timestamp: bool = False) -> str:
    manifest = {"command": command, "params": params, "seed": params.get("seed"),
                "rng": RNG_ALGORITHM, "version": __version__}
    if timestamp:
        manifest["timestamp"] = datetime.now(timezone.utc).isoformat()
    buf = io.StringIO()
    buf.write("# manifest " + json.dumps(manifest, sort_keys=True, default=str) + "\n")
    for key, val in (notes or {}).items():
        buf.write(f"# {key}: {_fmt(val)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    keys = [c.split("[")[0] for c in columns]
    for row in rows:
        w.writerow([_fmt(row.get(k)) for k in keys])
    return buf.getvalue()


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _params(args) -> dict:
    skip = {"func", "out", "config", "timestamp", "threads", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _threads(args) -> int:
    return args.threads or default_threads()


def _floats(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in str(text).split(",") if x.strip()]


def _code(text: str):
    try:
        return parse_code(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# --------------------------------------------------------------------------
# commands


def cmd_table1(args) -> str:
    from .percolation import mc_success_prob

    geometries = ("toric", "planar") if args.geometry == "both" else (args.geometry,)
    rows = []
    for D, k in HILBERT_PAIRS.items():
        for g in geometries:
            r = mc_success_prob(D, args.pl, args.runs, args.seed, g, _threads(args))
            rows.append({"D": D, "k": k, "p_l": args.pl,
                         "qpyc_failure": qpyc_failure_prob(k, args.pl),
                         "surface_failure": 1 - r.estimate, "surface_std_error": r.std_error,
                         "geometry": g, "runs": args.runs})
    cols = ["D", "k", "p_l[prob]", "qpyc_failure[prob]", "surface_failure[prob]",
            "surface_std_error[prob]", "geometry", "runs[count]"]
    return render("table1", _params(args), cols, rows, timestamp=args.timestamp)


def cmd_fig1(args) -> str:
    a, b = three_qutrit_code(), four_qubit_code()
    grid = np.linspace(0.0, 1.0, args.points)
    rows = []
    for code in (a, b):
        for p in grid:
            p = float(p)
            rows.append({"code": code.name, "p_l": p,
                         "bits_per_photon": bits_per_photon(code, p),
                         "bits_per_mode": bits_per_mode(code, p)})
    cols = ["code", "p_l[prob]", "bits_per_photon[bit/photon]", "bits_per_mode[bit/mode]"]
    notes = {"bits_per_mode_crossover_p_l": bits_per_mode_crossover(a, b)}
    return render("fig1", _params(args), cols, rows, notes, args.timestamp)


def cmd_fig3(args) -> str:
    from .percolation import mc_success_prob

    grid = [float(p) for p in np.linspace(args.pmin, args.pmax, args.points)]
    rows = []
    for k in _ints(args.k):
        for p in grid:
            rows.append({"family": "qpyc", "size": k, "p_l": p,
                         "success": qpyc_success_prob(k, p), "std_error": 0.0})
    for D in _ints(args.D):
        for p in grid:
            r = mc_success_prob(D, p, args.runs, args.seed, args.geometry, _threads(args))
            rows.append({"family": f"surface-{args.geometry}", "size": D, "p_l": p,
                         "success": r.estimate, "std_error": r.std_error})
    cols = ["family", "size", "p_l[prob]", "success[prob]", "std_error[prob]"]
    return render("fig3", _params(args), cols, rows, timestamp=args.timestamp)


def cmd_fig4(args) -> str:
    from .repeater import SWEEP_COLUMNS, sweep_rate_vs_distance

    codes = [qpyc_code(k) for k in _ints(args.k)]
    grid = [float(x) for x in np.arange(args.step, args.Lmax + args.step / 2, args.step)]
    rows = sweep_rate_vs_distance(codes, _floats(args.eps), args.L0, grid, args.t0, args.Latt)
    units = {"L_tot_km": "L_tot_km[km]", "R_t0": "R_t0[1]", "Q": "Q[prob]",
             "P_chain": "P_chain[prob]", "R_t0_approx": "R_t0_approx[1]", "eps": "eps[prob]"}
    cols = [units.get(c, c) for c in SWEEP_COLUMNS]
    return render("fig4", _params(args), cols, rows, timestamp=args.timestamp)


def cmd_costs(args) -> str:
    from .costopt import CostQuery, LossOnlyQpc, cost_m, cost_q

    eps = (args.eps_g, args.eps_d, args.eps_p)
    rows = []
    for metric, fn in (("qubits", cost_q), ("modes", cost_m)):
        q = CostQuery(args.Ltot, metric, eps)
        for res in (fn(q), LossOnlyQpc().cost(q)):
            rows.append({"family": res.family, "metric": metric, "cost": res.cost,
                         "k": res.k, "d": res.d, "n": res.n, "m": res.m, "L0": res.L0,
                         "feasible": res.feasible})
    if not any(r["feasible"] and r["family"] == "qpyc" for r in rows):
        raise InfeasibleError("no grid point gives a positive key rate")
    cols = ["family", "metric", "cost[resource/km/(sbit/s)]", "k", "d", "n", "m", "L0[km]",
            "feasible"]
    return render("costs", _params(args), cols, rows, timestamp=args.timestamp)


def cmd_simulate(args) -> str:
    from .simulator import recovery as rec
    from .simulator.state import SimulationError, erase, fidelity, outcome_probabilities
    from .simulator.tec import TecNoise, tec_cycle

    code = _code(args.code)
    if isinstance(code, QpcCode):
        raise UsageError("simulate supports 3qutrit, qpyc:1 and 4qubit")
    if isinstance(code, QpycCode) and code.k != 1:
        raise UsageError("state-vector simulation is limited to the [[3,1,2]]_3 code")
    if args.tec and not isinstance(code, QpycCode):
        raise UsageError("--tec needs a QPyC code")
    n = code.n
    erased = args.erase if args.erase is not None else list(range(n))
    for e in erased:
        if not 0 <= e < n:
            raise UsageError(f"--erase {e} out of range for {n} qudits")
    rng = np.random.default_rng(args.seed)
    dim = code.dim if isinstance(code, QpycCode) else 4
    rows = []

    def add(s, e, branch, f, status=None):
        rows.append({"code": code.name, "state": s, "erased": e, "branch": branch,
                     "fidelity": f, "status": status or ("corrected" if f > 1 - 1e-9 else "failed")})

    for s in range(args.states):
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps /= np.linalg.norm(amps)
        if args.tec:
            for e in erased:
                res = tec_cycle(rec.encode_qpyc(code, amps), code, TecNoise({e}), rng=rng)
                add(s, e, "", res.fidelity, res.status)
            continue
        if isinstance(code, QpycCode):
            enc = rec.encode_qpyc(code, amps)
        else:
            enc = rec.encode_four_qubit(amps)
        for e in erased:
            # every hidden erasure outcome, and for [[4,2,2]] every helper outcome
            for o in np.flatnonzero(outcome_probabilities(enc, e, "Z") > 1e-12):
                st = erase(enc, e, outcome=int(o))
                if isinstance(code, QpycCode):
                    out = rec.recover_three_qutrit(st, e)
                    add(s, e, str(o), fidelity(rec.recovered_logical_state(out, code, e), amps))
                    continue
                for m in (0, 1):
                    try:
                        out = rec.recover_four_qubit(st, e, outcome=m)
                    except SimulationError:
                        continue
                    add(s, e, f"{o}/{m}",
                        fidelity(rec.recovered_logical_state(out, code, e), amps))
    notes = {"min_fidelity": min(r["fidelity"] for r in rows)}
    cols = ["code", "state", "erased", "branch", "fidelity[1]", "status"]
    return render("simulate", _params(args), cols, rows, notes, args.timestamp)


def cmd_percolate(args) -> str:
    from .percolation import CSV_COLUMNS, sweep_rows

    rows = sweep_rows(_ints(args.D), _floats(args.pl), args.runs, args.seed, args.geometry,
                      _threads(args))
    units = {"p_l": "p_l[prob]", "success": "success[prob]", "std_error": "std_error[prob]",
             "runs": "runs[count]"}
    return render("percolate", _params(args), [units.get(c, c) for c in CSV_COLUMNS], rows,
                  timestamp=args.timestamp)


def cmd_keyrate(args) -> str:
    from .repeater import RepeaterConfig, end_to_end, key_rate

    code = _code(args.code)
    if not isinstance(code, QpycCode):
        raise UsageError("keyrate needs a QPyC code (qpyc:k or 3qutrit)")
    cfg = RepeaterConfig(args.Ltot, args.L0, code, args.eps_g, args.eps_d, args.eps_p,
                         args.t0, args.Latt)
    res = end_to_end(cfg)
    R, rt0 = key_rate(cfg)
    row = {"code": code.name, "L_tot": cfg.L_tot, "L0": cfg.L0, "hops": res.hops,
           "P_chain": res.P_chain, "Q_X": res.Q_X, "Q_Z": res.Q_Z, "Q": res.Q,
           "R": R, "R_t0": rt0}
    cols = ["code", "L_tot[km]", "L0[km]", "hops[count]", "P_chain[prob]", "Q_X[prob]",
            "Q_Z[prob]", "Q[prob]", "R[1/s]", "R_t0[1]"]
    return render("keyrate", _params(args), cols, [row], timestamp=args.timestamp)


def cmd_optimize(args) -> str:
    from .costopt import CONTOUR_COLUMNS, LossOnlyQpc, compare_ratio

    rows = compare_ratio(_floats(args.Ltot), _floats(args.eps_tilde), args.dominant,
                         LossOnlyQpc(), args.metric)
    units = {"L_tot": "L_tot[km]", "eps_tilde": "eps_tilde[1]", "ratio": "ratio[1]",
             "opt_L0": "opt_L0[km]"}
    return render("optimize", _params(args), [units.get(c, c) for c in CONTOUR_COLUMNS],
                  rows, timestamp=args.timestamp)


# --------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, seed=True, runs=None):
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--config", help="JSON or TOML file whose keys mirror the flags")
    p.add_argument("--timestamp", action="store_true", help="record wall-clock time in the manifest")
    if seed:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default ${THREADS_ENV} or CPU count)")
    if runs is not None:
        p.add_argument("--runs", type=int, default=runs)


def _channel_flags(p):
    p.add_argument("--eps-g", type=float, default=0.0)
    p.add_argument("--eps-d", type=float, default=0.0)
    p.add_argument("--eps-p", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qpyc", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="QPyC vs surface-code failure at 20%% loss")
    _common(p, runs=1_000_000)
    p.add_argument("--pl", type=float, default=0.2)
    p.add_argument("--geometry", choices=("toric", "planar", "both"), default="toric")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("fig1", help="bits per photon and per mode of the two small codes")
    _common(p, seed=False)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig3", help="success probability vs loss, QPyC and surface code")
    _common(p, runs=100_000)
    p.add_argument("--k", default="1,3,6,9,15,21")
    p.add_argument("--D", default="3,5,7,9,11")
    p.add_argument("--pmin", type=float, default=0.0)
    p.add_argument("--pmax", type=float, default=0.6)
    p.add_argument("--points", type=int, default=13)
    p.add_argument("--geometry", choices=("toric", "planar"), default="toric")
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("fig4", help="R t0 vs distance for QPyC chains")
    _common(p, seed=False)
    p.add_argument("--k", default="1,2,3")
    p.add_argument("--eps", default="0,1e-6,1e-5,1e-4")
    p.add_argument("--L0", type=float, default=1.0)
    p.add_argument("--Latt", type=float, default=20.0)
    p.add_argument("--t0", type=float, default=1e-6)
    p.add_argument("--Lmax", type=float, default=10_000.0)
    p.add_argument("--step", type=float, default=50.0)
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("costs", help="optimal qubit and mode cost coefficients")
    _common(p, seed=False)
    p.add_argument("--Ltot", type=float, default=10_000.0)
    _channel_flags(p)
    p.set_defaults(func=cmd_costs)

    p = sub.add_parser("simulate", help="erasure recovery (or one TEC cycle) on random logical states")
    _common(p)
    p.add_argument("--code", default="3qutrit")
    p.add_argument("--erase", type=int, action="append", help="erased qudit (repeatable); default all")
    p.add_argument("--states", type=int, default=5)
    p.add_argument("--tec", action="store_true", help="run a TEC cycle with the erasure instead")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("percolate", help="surface-code erasure success by Monte Carlo")
    _common(p, runs=100_000)
    p.add_argument("--D", default="3,5,7")
    p.add_argument("--pl", default="0.2")
    p.add_argument("--geometry", choices=("toric", "planar"), default="toric")
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("keyrate", help="Q and secret-key rate of one chain")
    _common(p, seed=False)
    p.add_argument("--code", default="qpyc:1")
    p.add_argument("--Ltot", type=float, default=700.0)
    p.add_argument("--L0", type=float, default=1.0)
    p.add_argument("--Latt", type=float, default=20.0)
    p.add_argument("--t0", type=float, default=1e-6)
    _channel_flags(p)
    p.set_defaults(func=cmd_keyrate)

    p = sub.add_parser("optimize", help="QPC/QPyC cost ratio over distance and error rate")
    _common(p, seed=False)
    p.add_argument("--Ltot", default="1000,3000,10000")
    p.add_argument("--eps-tilde", default="0,1e-9,1e-8")
    p.add_argument("--dominant", choices=("gate", "depolarization", "dephasing"), default="gate")
    p.add_argument("--metric", choices=("qubits", "modes"), default="qubits")
    p.set_defaults(func=cmd_optimize)
    return ap


def _load_config(path: str) -> dict:
    from .repeater import load_document

    doc = load_document(path)
    if not isinstance(doc, dict):
        raise UsageError("config must be a table/object")
    return {k.replace("-", "_"): v for k, v in doc.items()}


def _parse(argv) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        try:
            doc = _load_config(args.config)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        known = set(vars(args))
        unknown = set(doc) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        # flags given explicitly on the command line win over the file
        sub = ap._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**doc)
        args = ap.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = _parse(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"qpyc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _emit(args, args.func(args))
    except UsageError as exc:
        print(f"qpyc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"qpyc: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"qpyc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover
        print(f"qpyc: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
