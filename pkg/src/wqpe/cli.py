"""Command-line interface: deterministic CSV/JSON emission for every
experiment the library supports.

Every output file starts with '#'-prefixed manifest lines (tool version,
command, sorted parameters, seed) so identical invocations are
byte-identical; timestamps are omitted by design.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import WqpeError
from .qpe import (
    QpeConfig,
    cbar_metric,
    error_rate,
    min_extra_qubits,
    run_qpe_circuit,
    verify_tail_bound,
)
from .statevector import (
    EigenDecomposition,
    QuantumState,
    UnitaryOperator,
    eig_hermitian,
    expi_hermitian,
)
from .stateprep import (
    PrepConfig,
    ground_state_distance,
    lambda_shift_policy,
    perturbation_error_bound,
    run_preparation,
)
from .thirring import (
    ThirringParams,
    TrotterConfig,
    build_hamiltonian,
    diagonal_ground_reference,
    effective_hamiltonian,
    optimize_overlap,
    sigma_chi,
    suzuki2_step,
    variational_state,
)
from .windows import WindowKind, WindowSpec, qpe_filter, window_amplitudes

DEFAULT_SEED = 7
DEFAULT_N_SAMPLES = 50
DEFAULT_LAYERS = 2


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int
    output_path: str
    tool_version: str = __version__

    def header_lines(self) -> list[str]:
        lines = [
            f"# tool = wqpe {self.tool_version}",
            f"# command = {self.command}",
            f"# seed = {self.seed}",
            f"# output = {self.output_path}",
        ]
        for key in sorted(self.parameters):
            lines.append(f"# {key} = {self.parameters[key]}")
        return lines


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, manifest: RunManifest, columns: list[str], rows: list[tuple]) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            for line in manifest.header_lines():
                fh.write(line + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _windows_for(arg: str) -> list[WindowKind]:
    if arg == "both":
        return [WindowKind.RECT, WindowKind.COSINE]
    return [WindowKind.parse(arg)]


def load_model(spec: str, args) -> ThirringParams:
    """--model is either the literal 'thirring' (with --sites/--mass/--coupling)
    or a path to a JSON file {"model": "thirring", "sites": N, ...}."""
    if spec == "thirring":
        return ThirringParams(sites=args.sites, mass=args.mass, coupling=args.coupling)
    with open(spec) as fh:
        data = json.load(fh)
    if data.get("model") != "thirring":
        raise WqpeError(f"unsupported model {data.get('model')!r} in {spec}")
    return ThirringParams(
        sites=int(data["sites"]),
        mass=float(data.get("mass", 1.0)),
        coupling=float(data.get("coupling", 0.5)),
    )


def _prepared_system(params: ThirringParams, d: int):
    """Shared setup: terms, scaling, step unitary, effective Hamiltonian."""
    terms = build_hamiltonian(params)
    evals = np.linalg.eigvalsh(terms.total.entries)
    lam, shift = lambda_shift_policy(evals)
    shifted = terms.shifted(shift)
    u_step = suzuki2_step(shifted, TrotterConfig(d=d, lam=lam))
    h_eff = effective_hamiltonian(u_step, d, lam)
    return terms, shifted, lam, shift, u_step, h_eff


def _initial_state(kind: str, terms, layers: int, seed: int):
    """Deterministic initial-state choices for prepare/qpe run."""
    if kind == "neel":
        return diagonal_ground_reference(terms), {}
    if kind == "ground":
        eig = eig_hermitian(terms.total)
        return QuantumState(terms.sites, eig.eigenvectors[:, 0]), {}
    if kind == "uniform":
        dim = 1 << terms.sites
        return QuantumState(terms.sites, np.full(dim, 1.0 / math.sqrt(dim))), {}
    if kind == "variational":
        reference = diagonal_ground_reference(terms)
        result = optimize_overlap(terms, layers, reference, seed=seed)
        state = variational_state(result.params, terms, reference)
        return state, {"variational_energy": result.energy, "variational_overlap": result.overlap}
    raise WqpeError(f"unknown initial state {kind!r}")


# ---------------------------------------------------------------- commands


def cmd_windows_dump(args) -> int:
    spec = WindowSpec(m=args.m, kind=WindowKind.parse(args.kind))
    amps = window_amplitudes(spec)
    M = 1 << args.m
    labels = np.arange(-(M // 2), M // 2)
    rows = []
    for x, w in zip(labels, amps):
        rows.append(("window", int(x), float(w.real), float(w.imag), float(abs(w) ** 2)))
    filt = qpe_filter(labels.astype(float), args.m, spec.kind)
    for q, f in zip(labels, filt):
        rows.append(("filter", int(q), float(f.real), float(f.imag), float(abs(f) ** 2)))
    manifest = RunManifest(
        command="windows dump",
        parameters={"m": args.m, "kind": spec.kind.value},
        seed=args.seed,
        output_path=args.out,
    )
    write_csv(args.out, manifest, ["series", "index", "re", "im", "abs2"], rows)
    return 0


def cmd_qpe_error_rate(args) -> int:
    windows = _windows_for(args.window)
    ps = list(range(args.p_min, args.p_max + 1))
    columns = ["p"] + [f"e_{w.value}" for w in windows]
    rows = []
    for p in ps:
        row: list = [p]
        for w in windows:
            row.append(error_rate(args.t, p, args.delta2m, w))
        rows.append(tuple(row))
    manifest = RunManifest(
        command="qpe error-rate",
        parameters={
            "t": args.t,
            "p_min": args.p_min,
            "p_max": args.p_max,
            "delta2m": args.delta2m,
            "window": args.window,
            "note": "values below 1e-25 are numerically zero",
        },
        seed=args.seed,
        output_path=args.out,
    )
    write_csv(args.out, manifest, columns, rows)
    return 0


def cmd_qpe_qubits(args) -> int:
    for w in _windows_for(args.window):
        p = min_extra_qubits(args.e, w)
        print(f"window={w.value} e={args.e!r} p={p} m=t+p={args.t + p} (t={args.t})")
    return 0


def cmd_qpe_cbar(args) -> int:
    rows = []
    for w in _windows_for(args.window):
        cfg = QpeConfig(t=args.m, p=0, window=w)
        value = cbar_metric(cfg, nodes=args.nodes)
        rows.append((w.value, args.m, value))
        print(f"window={w.value} m={args.m} cbar={value!r}")
    if args.out:
        manifest = RunManifest(
            command="qpe cbar",
            parameters={"m": args.m, "window": args.window, "nodes": args.nodes},
            seed=args.seed,
            output_path=args.out,
        )
        write_csv(args.out, manifest, ["window", "m", "cbar"], rows)
    return 0


def cmd_qpe_run(args) -> int:
    params = load_model(args.model, args)
    terms, shifted, lam, shift, u_step, h_eff = _prepared_system(params, max(args.d, 1))
    window = WindowKind.parse(args.window)
    cfg = QpeConfig(t=args.m, p=0, window=window, lam=lam)
    state, extra = _initial_state(args.state, terms, args.layers, args.seed)
    if args.d == 0:
        u = expi_hermitian(shifted.total, 2.0 * np.pi * lam)
        h_eig = eig_hermitian(shifted.total)
        phases = np.exp(2j * np.pi * lam * h_eig.eigenvalues)
        dist = run_qpe_circuit(
            state, u, cfg, u_eig=EigenDecomposition(phases, h_eig.eigenvectors)
        )
    else:
        u_full = u_step.entries
        for _ in range(args.d - 1):
            u_full = u_step.entries @ u_full
        dist = run_qpe_circuit(state, UnitaryOperator(u_full), cfg)
    rows = [(int(q), float(p)) for q, p in zip(dist.labels, dist.probabilities)]
    manifest = RunManifest(
        command="qpe run",
        parameters={
            "model": args.model,
            "sites": params.sites,
            "mass": params.mass,
            "coupling": params.coupling,
            "m": args.m,
            "window": window.value,
            "state": args.state,
            "d": args.d,
            "lam": lam,
            "shift": shift,
            **extra,
        },
        seed=args.seed,
        output_path=args.out,
    )
    write_csv(args.out, manifest, ["q", "prob"], rows)
    return 0


def cmd_prepare(args) -> int:
    params = load_model(args.model, args)
    terms, shifted, lam, shift, u_step, h_eff = _prepared_system(params, args.d)
    eig_eff = eig_hermitian(h_eff)
    theta0 = lam * float(eig_eff.eigenvalues[0])
    xi = args.xi if args.xi is not None else 2.0 ** -(args.m + 2)
    initial, extra = _initial_state(args.init, terms, args.layers, args.seed)

    def chi_obs(st):
        return sigma_chi(st, u_step, args.n_samples)[1]

    windows = _windows_for(args.window)
    rows = []
    params_echo = {
        "model": args.model,
        "sites": params.sites,
        "mass": params.mass,
        "coupling": params.coupling,
        "d": args.d,
        "m": args.m,
        "r_max": args.r_max,
        "window": args.window,
        "init": args.init,
        "layers": args.layers,
        "xi": xi,
        "n_samples": args.n_samples,
        "lam": lam,
        "shift": shift,
        **extra,
    }
    for window in windows:
        # deterministic estimate error of magnitude xi, biased below the true
        # phase like an upward energy scan's first success
        theta0_est = theta0 - xi
        cfg = PrepConfig(
            m=args.m,
            window=window,
            r=args.r_max,
            theta0_est=theta0_est,
            xi=xi,
            lam=lam,
            shift=0.0,  # h_eff already carries the model shift
        )
        params_echo[f"theta0_est_{window.value}"] = theta0_est
        report = run_preparation(initial, h_eff, cfg, observable=chi_obs)
        for it in report.iterations:
            rows.append(
                (
                    it.r,
                    window.value,
                    it.success_prob,
                    it.cumulative_prob,
                    it.epsilon,
                    it.observable,
                )
            )
    manifest = RunManifest(
        command="prepare", parameters=params_echo, seed=args.seed, output_path=args.out
    )
    write_csv(
        args.out,
        manifest,
        ["r", "window", "success_prob", "cum_Pr", "epsilon", "sigma_chi"],
        rows,
    )
    return 0


def cmd_varprep(args) -> int:
    params = load_model(args.model, args)
    terms = build_hamiltonian(params)
    reference = diagonal_ground_reference(terms)
    result = optimize_overlap(terms, args.layers, reference, seed=args.seed)
    eig = eig_hermitian(terms.total)
    ref_overlap = float(abs(np.vdot(eig.eigenvectors[:, 0], reference.amplitudes)))
    rows = [
        (layer, float(a), float(b), float(g))
        for layer, (a, b, g) in enumerate(
            zip(result.params.alphas, result.params.betas, result.params.gammas), start=1
        )
    ]
    manifest = RunManifest(
        command="varprep",
        parameters={
            "model": args.model,
            "sites": params.sites,
            "mass": params.mass,
            "coupling": params.coupling,
            "layers": args.layers,
            "energy": result.energy,
            "ground_energy": float(eig.eigenvalues[0]),
            "overlap": result.overlap,
            "reference_overlap": ref_overlap,
        },
        seed=args.seed,
        output_path=args.out,
    )
    write_csv(args.out, manifest, ["layer", "alpha", "beta", "gamma"], rows)
    return 0


def cmd_bounds_check(args) -> int:
    rows = []
    for p in args.p_list:
        empirical, bound = verify_tail_bound(args.t, p)
        rows.append(
            ("qpe_tail", f"t={args.t} p={p}", float(empirical), float(bound), empirical < bound)
        )
    params = ThirringParams(sites=args.sites)
    terms = build_hamiltonian(params)
    evals = np.linalg.eigvalsh(terms.total.entries)
    lam, shift = lambda_shift_policy(evals)
    shifted = terms.shifted(shift)
    for d in args.d_list:
        u_step = suzuki2_step(shifted, TrotterConfig(d=d, lam=lam))
        h_eff = effective_hamiltonian(u_step, d, lam)
        bound = perturbation_error_bound(shifted.total, h_eff, lam)
        truth = ground_state_distance(shifted.total, h_eff)
        rows.append(
            ("ground_state_perturbation", f"N={args.sites} d={d}", truth, bound, truth <= bound)
        )
    manifest = RunManifest(
        command="bounds check",
        parameters={
            "t": args.t,
            "p_list": " ".join(map(str, args.p_list)),
            "sites": args.sites,
            "d_list": " ".join(map(str, args.d_list)),
        },
        seed=args.seed,
        output_path=args.out,
    )
    write_csv(args.out, manifest, ["check", "detail", "empirical", "bound", "ok"], rows)
    return 0


# ---------------------------------------------------------------- dispatch


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wqpe", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wqpe {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    def add_model_args(p):
        p.add_argument("--model", default="thirring", help="'thirring' or a JSON model file")
        p.add_argument("--sites", type=int, default=4)
        p.add_argument("--mass", type=float, default=1.0)
        p.add_argument("--coupling", type=float, default=0.5)

    windows = sub.add_parser("windows", help="window/filter tables")
    wsub = windows.add_subparsers(dest="subcommand", required=True)
    dump = wsub.add_parser("dump", help="dump window samples and filter values as CSV")
    dump.add_argument("--m", type=int, required=True)
    dump.add_argument("--kind", required=True, choices=["rect", "cos", "rectangular", "cosine"])
    dump.add_argument("--out", required=True)
    add_common(dump)
    dump.set_defaults(func=cmd_windows_dump)

    qpe = sub.add_parser("qpe", help="phase-estimation tools")
    qsub = qpe.add_subparsers(dest="subcommand", required=True)

    er = qsub.add_parser("error-rate", help="tail error rate vs extra qubits")
    er.add_argument("--t", type=int, required=True)
    er.add_argument("--p-min", type=int, default=1)
    er.add_argument("--p-max", type=int, default=8)
    er.add_argument("--delta2m", type=float, required=True)
    er.add_argument("--window", default="both", choices=["rect", "cos", "both"])
    er.add_argument("--out", required=True)
    add_common(er)
    er.set_defaults(func=cmd_qpe_error_rate)

    qq = qsub.add_parser("qubits", help="minimum extra qubits for a target error rate")
    qq.add_argument("--e", type=float, required=True)
    qq.add_argument("--window", default="both", choices=["rect", "cos", "both"])
    qq.add_argument("--t", type=int, default=10)
    add_common(qq)
    qq.set_defaults(func=cmd_qpe_qubits)

    qc = qsub.add_parser("cbar", help="windowed variance metric")
    qc.add_argument("--m", type=int, required=True)
    qc.add_argument("--window", default="both", choices=["rect", "cos", "both"])
    qc.add_argument("--nodes", type=int, default=1 << 12)
    qc.add_argument("--out", default="")
    add_common(qc)
    qc.set_defaults(func=cmd_qpe_cbar)

    qr = qsub.add_parser("run", help="simulate the QPE circuit on a model file")
    add_model_args(qr)
    qr.add_argument("--m", type=int, required=True)
    qr.add_argument("--window", default="cos", choices=["rect", "cos"])
    qr.add_argument("--state", default="ground", choices=["ground", "neel", "uniform", "variational"])
    qr.add_argument("--d", type=int, default=0, help="Trotter steps; 0 = exact evolution")
    qr.add_argument("--layers", type=int, default=DEFAULT_LAYERS)
    qr.add_argument("--out", required=True)
    add_common(qr)
    qr.set_defaults(func=cmd_qpe_run)

    prep = sub.add_parser("prepare", help="iterative projective ground-state preparation")
    add_model_args(prep)
    prep.add_argument("--d", type=int, default=1)
    prep.add_argument("--m", type=int, default=8)
    prep.add_argument("--r-max", type=int, default=6)
    prep.add_argument("--window", default="both", choices=["rect", "cos", "both"])
    prep.add_argument("--init", default="variational", choices=["variational", "neel", "uniform", "ground"])
    prep.add_argument("--layers", type=int, default=DEFAULT_LAYERS)
    prep.add_argument("--xi", type=float, default=None, help="estimate precision in turns (default 2^-(m+2))")
    prep.add_argument("--n-samples", type=int, default=DEFAULT_N_SAMPLES)
    prep.add_argument("--out", required=True)
    add_common(prep)
    prep.set_defaults(func=cmd_prepare)

    var = sub.add_parser("varprep", help="variational warm start")
    add_model_args(var)
    var.add_argument("--layers", type=int, default=DEFAULT_LAYERS)
    var.add_argument("--out", required=True)
    add_common(var)
    var.set_defaults(func=cmd_varprep)

    bounds = sub.add_parser("bounds", help="bound verification sweeps")
    bsub = bounds.add_subparsers(dest="subcommand", required=True)
    bc = bsub.add_parser("check", help="tail bound and perturbation bound sweeps")
    bc.add_argument("--t", type=int, default=8)
    bc.add_argument("--p-list", type=_int_list, default=[3, 4, 5])
    bc.add_argument("--sites", type=int, default=4)
    bc.add_argument("--d-list", type=_int_list, default=[1, 2, 3])
    bc.add_argument("--out", required=True)
    add_common(bc)
    bc.set_defaults(func=cmd_bounds_check)

    return parser


def dispatch(argv: list[str]) -> int:
    """Run one subcommand; 0 on success, 2 on usage errors, 1 on
    computation/input errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (WqpeError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"wqpe: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
