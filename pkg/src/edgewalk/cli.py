"""``edgewalk`` command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 numeric contract violation.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .asymptotics import (
    AsymptoticParams,
    asymptotic_p_fixed_j,
    asymptotic_p_scaled,
    ballistic_front,
    scaled_envelope,
)
from .coined import coin_operator, coined_step, edge_to_coined, verify_intertwining
from .config import COMMANDS, ConfigError, ExperimentConfig, load_config
from .graph import GraphError
from .output import ResultTable, emit_csv, emit_svg_histogram
from .spectral import (
    cycle_eigensystem,
    eigen_residual,
    even_odd_ratio,
    free_spectrum,
    phase_shifted_eigensystem,
    quartic_residual,
    uniform_limit_condition,
)
from .transport import VertexScatterer, resonances, scattering_coefficients
from .walk import (
    ContractViolation,
    WalkState,
    basis_state,
    edge_probabilities,
    iter_states,
    line_coordinate,
    line_ring_size,
    ring_step_operator,
    time_averaged_distribution,
    uniform_state,
    vertex_probabilities,
)

NORM_TOL = 1e-9


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("EDGEWALK_THREADS", "1")))
    except ValueError:
        return 1


def _ring_size(cfg: ExperimentConfig, steps: int) -> int:
    if cfg.geometry == "ring":
        return cfg.n or 8
    need = line_ring_size(steps)
    n = cfg.n or need
    if n < 2 * steps + 4:
        raise ConfigError("n", f"line embedding needs n >= {2 * steps + 4} for {steps} steps")
    return n


def _start_state(cfg: ExperimentConfig, graph) -> WalkState:
    if cfg.start == "uniform":
        return uniform_state(graph)
    a, b = (int(x) % graph.vertex_count for x in cfg.start.split(","))
    return basis_state(graph, a, b)


def _operator(cfg: ExperimentConfig, n: int):
    alternating = cfg.phi != 0 and cfg.phi_placement == "even"
    if alternating and n % 2:
        raise ConfigError("n", "alternating phase shifters need an even ring")
    return ring_step_operator(n, cfg.t, cfg.reflection, cfg.phi, alternating)


def _labels(cfg: ExperimentConfig, n: int) -> list[int]:
    return [line_coordinate(a, n) if cfg.geometry == "line" else a for a in range(n)]


def _check_distribution(p: np.ndarray, what: str):
    total = float(np.sum(p))
    if abs(total - 1) > NORM_TOL or np.any(p < 0):
        raise ContractViolation(f"{what} normalization", f"sum = {total!r}")


def _distribution_table(cfg, p: np.ndarray, labels) -> ResultTable:
    _check_distribution(p, cfg.measure if cfg.command == "simulate" else "distribution")
    order = np.argsort(labels, kind="stable")
    rows = [(i, int(labels[k]), float(p[k])) for i, k in enumerate(order)]
    return ResultTable(["index", "label", "probability"], rows)


def _simulate(cfg: ExperimentConfig) -> ResultTable:
    n = _ring_size(cfg, cfg.steps)
    op = _operator(cfg, n)
    s = _start_state(cfg, op.graph)
    a = s.amplitudes
    for _, a in iter_states(op, s, cfg.steps):
        pass
    state = WalkState(op.graph, a)
    if abs(state.norm - 1) > NORM_TOL:
        raise ContractViolation("unitarity", f"norm drifted to {state.norm!r}")
    dist = edge_probabilities(state) if cfg.measure == "edge" else vertex_probabilities(state)
    table = _distribution_table(cfg, dist.probabilities, _labels(cfg, n))
    table.metadata.append(("info.ring_size", str(n)))
    if cfg.geometry == "line" and 0 < abs(cfg.t) < 1 and cfg.steps > 0:
        speed = abs(cfg.t) ** 2 if (cfg.phi and cfg.phi_placement == "even" and
                                    math.isclose(cfg.phi % math.pi, math.pi / 2)) else abs(cfg.t)
        front = ballistic_front(speed, cfg.steps)
        labels = np.array(_labels(cfg, n))
        outside = float(np.sum(dist.probabilities[np.abs(labels) > front]))
        table.metadata += [("info.front", str(front)), ("info.probability_outside_front", repr(outside))]
    return table


def _average(cfg: ExperimentConfig) -> ResultTable:
    cfg_ring = cfg if cfg.geometry == "ring" else replace(cfg, geometry="ring")
    n = cfg_ring.n or 8
    op = _operator(cfg_ring, n)
    dist = time_averaged_distribution(op, _start_state(cfg_ring, op.graph), cfg.m)
    table = _distribution_table(cfg, dist.probabilities, list(range(n)))
    dev = float(np.max(np.abs(dist.probabilities - 1 / n)))
    table.metadata += [
        ("info.max_deviation_from_uniform", repr(dev)),
        ("info.uniform_limit_condition", str(uniform_limit_condition(n, cfg.t))),
    ]
    return table


def _spectrum(cfg: ExperimentConfig) -> ResultTable:
    n = cfg.n or 16
    t, r = cfg.t, cfg.reflection
    if cfg.phi != 0 and cfg.phi_placement == "even":
        if n % 2:
            raise ConfigError("n", "alternating phase shifters need an even ring")
        if r == 0:
            raise ConfigError("r", "the phase-shifted spectrum needs r != 0")
        entries = phase_shifted_eigensystem(n, t, r, cfg.phi)
    elif r == 0:
        entries = free_spectrum(n, t)
    else:
        entries = cycle_eigensystem(n, t, r)
    op = _operator(cfg, n)
    cols = ["k", "theta", "branch", "re_lambda", "im_lambda", "residual"]
    shifted = len(entries[0].coeffs) == 4
    if shifted:
        cols += ["quartic_residual", "even_odd_ratio"]
    rows = []
    for e in entries:
        res = eigen_residual(op, e)
        if res > 1e-9:
            raise ContractViolation("eigen residual", f"k={e.k}: {res!r}")
        row = [e.k, e.theta, e.branch, e.eigenvalue.real, e.eigenvalue.imag, res]
        if shifted:
            row += [quartic_residual(e.eigenvalue, e.theta, t, r, cfg.phi), even_odd_ratio(e)]
        rows.append(tuple(row))
    return ResultTable(cols, rows)


def _asymptotic(cfg: ExperimentConfig) -> ResultTable:
    params = AsymptoticParams.from_amplitudes(cfg.t, cfg.reflection)
    last = cfg.tau + cfg.window
    n = _ring_size(replace(cfg, geometry="line"), last)
    op = ring_step_operator(n, cfg.t, cfg.reflection)
    taus = range(cfg.tau - cfg.window, last + 1)
    rows = []
    for tau, a in iter_states(op, basis_state(op.graph, 0, 1), last):
        if tau not in taus:
            continue
        if cfg.mode == "fixed":
            j = cfg.j
            pred = asymptotic_p_fixed_j(j, tau, params)
            env = params.r_mag / (math.pi * tau * params.t_mag)
        else:
            j = int(round(cfg.alpha * tau))
            pred = asymptotic_p_scaled(j / tau, tau, params).p
            env = scaled_envelope(cfg.alpha, tau, params)
        k = j % n
        sim = float(abs(a[2 * k]) ** 2 + abs(a[2 * k + 1]) ** 2)
        rows.append((tau, j, sim, pred, env))
    table = ResultTable(["tau", "j", "simulated", "asymptotic", "envelope"], rows)
    sim, pred = np.mean(table.column("simulated")), np.mean(table.column("asymptotic"))
    table.metadata += [("info.window_mean_simulated", repr(float(sim))),
                       ("info.window_mean_asymptotic", repr(float(pred)))]
    return table


def _barrier(cfg: ExperimentConfig) -> list[VertexScatterer]:
    out = []
    for i, t in enumerate(cfg.barrier_t):
        r = cfg.barrier_r[i] if cfg.barrier_r else complex(math.sqrt(max(1 - abs(t) ** 2, 0.0)))
        phi = cfg.barrier_phi[i] if cfg.barrier_phi else 0.0
        try:
            out.append(VertexScatterer(t, r, phi))
        except ValueError as exc:
            raise ConfigError(f"barrier_t[{i}]", str(exc)) from None
    return out


def _scattering(cfg: ExperimentConfig) -> ResultTable:
    barrier = _barrier(cfg)
    thetas = [2 * math.pi * k / cfg.theta_points for k in range(cfg.theta_points)]
    with ThreadPoolExecutor(_threads()) as pool:
        results = list(pool.map(lambda th: scattering_coefficients(barrier, th), thetas))
    rows = []
    for res in results:
        if res.residual > 1e-10:
            raise ContractViolation("flux conservation R+T=1", f"theta={res.theta!r}: {res.residual!r}")
        rows.append((res.theta, res.R, res.T, res.residual))
    table = ResultTable(["theta", "R", "T", "residual"], rows)
    table.metadata.append(("info.resonances", ";".join(repr(th) for th in resonances(results))))
    return table


def _equivalence(cfg: ExperimentConfig) -> ResultTable:
    n = _ring_size(cfg, cfg.steps)
    t, r = cfg.t, cfg.reflection
    op = ring_step_operator(n, t, r)
    s = _start_state(cfg, op.graph)
    coined = edge_to_coined(s)
    g = coin_operator(t, r)
    a = s.amplitudes
    for _, a in iter_states(op, s, cfg.steps):
        pass
    for _ in range(cfg.steps):
        coined = coined_step(coined, g)
    state = WalkState(op.graph, a)
    pe = edge_probabilities(state).probabilities
    pv = vertex_probabilities(state).probabilities
    pc = coined.vertex_probabilities()
    for p, what in ((pe, "edge"), (pv, "vertex"), (pc, "coined")):
        _check_distribution(p, what)
    labels = _labels(cfg, n)
    order = np.argsort(labels, kind="stable")
    rows = [(i, labels[k], float(pe[k]), float(pv[k]), float(pc[k])) for i, k in enumerate(order)]
    table = ResultTable(["index", "label", "edge_probability", "vertex_probability", "coined_probability"], rows)

    rng = np.random.default_rng(cfg.seed)
    worst = verify_intertwining(min(n, 64), t, r)
    for _ in range(cfg.trials):
        nn = int(rng.integers(3, 65))
        mag = rng.uniform(0, 1)
        tt = mag * np.exp(1j * rng.uniform(-np.pi, np.pi))
        rr = math.sqrt(1 - mag**2) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        worst = max(worst, verify_intertwining(nn, tt, rr))
    if worst > 1e-12:
        raise ContractViolation("intertwining VE = EU", repr(worst))
    table.metadata.append(("info.max_intertwining_deviation", repr(worst)))
    return table


_DISPATCH = {
    "simulate": _simulate,
    "average": _average,
    "spectrum": _spectrum,
    "asymptotic": _asymptotic,
    "scattering": _scattering,
    "equivalence": _equivalence,
}


def run(cfg: ExperimentConfig) -> ResultTable:
    """Execute one experiment; the table's metadata records the full config."""
    cfg.validate()
    table = _DISPATCH[cfg.command](cfg)
    meta = [("tool", f"edgewalk {__version__}")]
    meta += [(f"config.{k}", v) for k, v in cfg.to_pairs()]
    table.metadata[:0] = meta
    return table


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="edgewalk", description="Interferometric quantum walks on graphs.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", help="optional SVG histogram path")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.command, args.config, args.set)
        table = run(cfg)
    except (ConfigError, GraphError) as exc:
        print(f"edgewalk: config error: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"edgewalk: {exc}", file=sys.stderr)
        return 3
    emit_csv(table, args.out)
    if args.svg:
        emit_svg_histogram(table, args.svg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
