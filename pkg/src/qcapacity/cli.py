"""Command line entry point: ``qcapacity <subcommand> ...``.

Exit codes: 0 success, 1 a reproduced value is out of tolerance, 2 the
input could not be parsed, 3 the input parsed but is not a valid channel,
ensemble or parameter set.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, dmc, holevo, photon, receivers
from .errors import ConvergenceError, DimensionError, ValidationError
from .qstate import density_matrix, ket
from .report import RunReport
from .reproduce import format_table, run_checks

EXIT_OK, EXIT_TOLERANCE, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3

BASES = {"bits": 2.0, "nats": math.e}
UNITS = {"bits": "bit", "nats": "nat"}

RECEIVERS = (
    "horizontal", "helstrom", "povm-erasure",
    "trine-parallel", "trine-orthogonal", "trine-binary", "trine-pair",
)


class ParseError(Exception):
    pass


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _emit(report: RunReport, as_json: bool, text: str) -> None:
    print(report.to_json() if as_json else text)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_reproduce(args) -> int:
    checks = run_checks()
    report = RunReport(
        scenario="reproduce",
        inputs={"reference": {c.name: c.reference for c in checks},
                "tolerance": {c.name: c.tolerance for c in checks}},
    )
    for c in checks:
        report.add(c.name, c.computed, c.unit)
    failed = [c.name for c in checks if not c.passed]
    text = format_table(checks)
    if failed:
        text += "\n\nout of tolerance: " + ", ".join(failed)
    _emit(report, args.json, text)
    if failed and args.json:
        print("out of tolerance: " + ", ".join(failed), file=sys.stderr)
    return EXIT_TOLERANCE if failed else EXIT_OK


def _channel_text(ch: dmc.Dmc) -> str:
    width = max(8, *(len(l) for l in ch.output_labels))
    head = " " * 8 + "".join(f"{l:>{width}}" for l in ch.output_labels)
    rows = [f"{l:<8}" + "".join(f"{v:>{width}.4f}" for v in row)
            for l, row in zip(ch.input_labels, ch.transition)]
    return "\n".join([head, *rows])


def cmd_dmc(args) -> int:
    obj = _load_json(args.file)
    if not isinstance(obj, dict) or "P" not in obj:
        raise ParseError("channel JSON must be an object with a 'P' matrix")
    try:
        ch = dmc.Dmc.from_json(obj)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ValidationError, DimensionError)):
            raise
        raise ParseError(f"malformed channel: {exc}") from exc
    base = BASES[args.base]
    res = dmc.blahut_arimoto(ch, base)
    unit = UNITS[args.base]
    report = RunReport("dmc", inputs={"file": str(args.file), "base": args.base, "channel": ch.to_json()})
    report.add("capacity", res.capacity, unit)
    for label, q in zip(ch.input_labels, res.optimal_input):
        report.add(f"Q({label})", q, "")
    report.add("gap", res.gap, unit)
    text = "\n".join([
        _channel_text(ch),
        f"capacity: {res.capacity:.4f} {unit}",
        "optimal input: " + ", ".join(f"Q({l})={q:.4f}" for l, q in zip(ch.input_labels, res.optimal_input)),
    ])
    _emit(report, args.json, text)
    return EXIT_OK


def _parse_state(entry) -> np.ndarray:
    arr = np.asarray(entry, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ParseError("complex entries must be [re, im] pairs")
    z = arr[..., 0] + 1j * arr[..., 1]
    if z.ndim == 1:
        return ket(z)
    if z.ndim == 2:
        return density_matrix(z, tol=1e-10)
    raise ParseError("a state is a ket (list of pairs) or a density matrix (list of lists of pairs)")


def cmd_holevo(args) -> int:
    obj = _load_json(args.file)
    if not isinstance(obj, dict) or "states" not in obj:
        raise ParseError("ensemble JSON must be an object with a 'states' list")
    try:
        states = [_parse_state(s) for s in obj["states"]]
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ValidationError, DimensionError)):
            raise
        raise ParseError(f"malformed state: {exc}") from exc
    base = BASES[args.base]
    unit = UNITS[args.base]
    res = holevo.maximize_holevo(states, base)
    labels = obj.get("labels") or [f"s{k}" for k in range(len(states))]
    report = RunReport("holevo", inputs={"file": str(args.file), "base": args.base, "n_states": len(states)})
    report.add("holevo_capacity", res.capacity, unit)
    report.add("chi_at_uniform", res.chi_at_uniform, unit)
    for l, q in zip(labels, res.optimal_priors):
        report.add(f"q({l})", q, "")
    lines = [f"Holevo capacity: {res.capacity:.4f} {unit}",
             f"chi at uniform priors: {res.chi_at_uniform:.4f} {unit}",
             "optimal priors: " + ", ".join(f"q({l})={q:.4f}" for l, q in zip(labels, res.optimal_priors))]
    if "priors" in obj:
        chi = holevo.holevo_chi(list(zip(obj["priors"], states)), base)
        report.add("chi_at_given_priors", chi, unit)
        lines.append(f"chi at given priors: {chi:.4f} {unit}")
    _emit(report, args.json, "\n".join(lines))
    return EXIT_OK


def build_receiver(kind: str, angle_deg: float = 45.0):
    """(signals, channel, support mask) for a named receiver configuration."""
    if kind in ("horizontal", "helstrom", "povm-erasure"):
        s0 = receivers.ket_from_angle(0.0)
        s1 = receivers.ket_from_angle(math.radians(angle_deg))
        signals = receivers.SignalSet((s0, s1), ("s0", "s1"))
        if kind == "horizontal":
            return signals, receivers.measure_channel(signals, receivers.polarization_filter(0.0)), None
        if kind == "helstrom":
            return signals, receivers.helstrom_binary(s0, s1)[1], None
        return signals, receivers.povm_binary_erasure(s0, s1)[1], None
    trine = receivers.trine_states()
    if kind == "trine-parallel":
        return trine, receivers.measure_channel(trine, receivers.trine_povm_parallel()), None
    if kind == "trine-orthogonal":
        return trine, receivers.measure_channel(trine, receivers.trine_povm_orthogonal()), None
    if kind == "trine-binary":
        filt, _ = receivers.helstrom_binary(trine.states[0], trine.states[1])
        return trine, receivers.measure_channel(trine, filt), [True, True, False]
    if kind == "trine-pair":
        pairs = receivers.pair_signals(trine)
        return pairs, receivers.measure_channel(pairs, receivers.square_root_measurement(pairs)), None
    raise ValueError(f"unknown receiver {kind!r}")


def cmd_receiver(args) -> int:
    signals, ch, support = build_receiver(args.kind, args.angle)
    base = BASES[args.base]
    unit = UNITS[args.base]
    cap = dmc.blahut_arimoto(ch, base, support=support)
    used = list(signals.states) if support is None else [s for s, u in zip(signals.states, support) if u]
    bound = holevo.maximize_holevo(used, base)
    report = RunReport("receiver", inputs={"kind": args.kind, "angle_deg": args.angle, "base": args.base,
                                           "channel": ch.to_json()})
    report.add("shannon_capacity", cap.capacity, unit)
    report.add("holevo_capacity", bound.capacity, unit)
    for l, q in zip(ch.input_labels, cap.optimal_input):
        report.add(f"Q({l})", q, "")
    lines = [_channel_text(ch),
             f"Shannon capacity: {cap.capacity:.4f} {unit}",
             f"Holevo capacity:  {bound.capacity:.4f} {unit}",
             "optimal input: " + ", ".join(f"Q({l})={q:.4f}" for l, q in zip(ch.input_labels, cap.optimal_input))]
    if args.samples:
        if args.seed is None:
            raise ValueError("--samples requires --seed")
        report.seed = args.seed
        report.inputs["rng"] = receivers.RNG_NAME
        report.inputs["samples"] = args.samples
        lines.append(f"Monte Carlo ({args.samples} uses per input, {receivers.RNG_NAME}, seed {args.seed}):")
        for k, l in enumerate(ch.input_labels):
            hist = receivers.sample_outcomes(ch, k, args.samples, args.seed + k)
            freq = hist / args.samples
            for ol, f in zip(ch.output_labels, freq):
                report.add(f"freq({ol}|{l})", f, "")
            lines.append(f"  {l:<8}" + "".join(f"{f:>10.4f}" for f in freq))
    _emit(report, args.json, "\n".join(lines))
    return EXIT_OK


def cmd_curve(args) -> int:
    if args.points < 1:
        raise ValueError("--points must be at least 1")
    if args.points == 1:
        grid = np.array([args.start])
    elif args.scale == "log":
        if args.start <= 0:
            raise ValueError("log grid needs a positive start")
        grid = np.geomspace(args.start, args.stop, args.points)
    else:
        grid = np.linspace(args.start, args.stop, args.points)
    pts = photon.emit_curve(args.kind, grid, gamma0=args.gamma0)
    text = photon.curve_csv(args.kind, pts)
    Path(args.out).write_text(text, encoding="utf-8")
    report = RunReport("curve", inputs={"kind": args.kind, "from": args.start, "to": args.stop,
                                        "points": args.points, "scale": args.scale, "out": str(args.out)})
    if args.kind == "fig7":
        report.inputs["gamma0"] = args.gamma0
        report.add("first_cost_per_bit", pts[0].photons_per_bit, "photon/bit")
        report.add("last_cost_per_bit", pts[-1].photons_per_bit, "photon/bit")
    else:
        report.add("first_nats_per_photon", pts[0].nats_per_photon, "nat/photon")
        report.add("last_nats_per_photon", pts[-1].nats_per_photon, "nat/photon")
    _emit(report, args.json, f"wrote {len(pts)} rows to {args.out}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcapacity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, base=True):
        p.add_argument("--json", action="store_true", help="print a JSON run report")
        if base:
            p.add_argument("--base", choices=sorted(BASES), default="bits")

    p = sub.add_parser("reproduce", help="recompute every published value and compare")
    common(p, base=False)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("dmc", help="capacity of a channel given as JSON {inputs, outputs, P}")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_dmc)

    p = sub.add_parser("holevo", help="Holevo capacity of an ensemble given as JSON {states, priors?}")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_holevo)

    p = sub.add_parser("receiver", help="channel and capacities of a built-in receiver")
    p.add_argument("kind", choices=RECEIVERS)
    p.add_argument("--angle", type=float, default=45.0, help="signal separation in degrees (binary receivers)")
    p.add_argument("--samples", type=int, default=0, help="Monte Carlo channel uses per input")
    p.add_argument("--seed", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_receiver)

    p = sub.add_parser("curve", help="tabulate the cost-per-bit (fig7) or photon-efficiency (fig8) curve")
    p.add_argument("kind", choices=("fig7", "fig8"))
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--scale", choices=("lin", "log"), default="lin")
    p.add_argument("--gamma0", type=float, default=1.0, help="background rate for fig7")
    p.add_argument("--out", required=True)
    common(p, base=False)
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, DimensionError, ConvergenceError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
