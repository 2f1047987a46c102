"""Command-line interface.

Subcommands: ``synth`` (tabulate a dataset from a model file), ``sample``
(emit tangential samples from a dataset), ``reduce`` (build a reduced model
with lf / pork-out / pork-in / irka), ``eval`` (H2 error against a truth
model) and ``repro`` (rebuild the bundled benchmark and compare against the
frozen reference matrices).

Exit codes: 0 success, 1 usage error, 2 malformed data, 3 numerical failure
(including out-of-tolerance ``repro`` runs).
"""

import argparse
import sys

import numpy as np

from . import dataio, demo
from .errors import DataFormatError, MissingDeltaS, QlfError
from .irka import IrkaConfig, error_surrogate, run_irka, verify_h2_optimality
from .loewner import build_pencil, conjugate_pairing, lf_rom, realify_rom, verify_interpolation
from .lti import Domain, h2_error, h2_norm
from .pork import pork_input, pork_output
from .sampling import (
    DEFAULT_DELTA_S,
    ExactSampler,
    FqlfSampler,
    TqlfSampler,
    build_sample_set,
    derivative_samples,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 by default; route through our exit-code map
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="qlf", description="Data-driven reduced-order modeling "
                                             "from offline transfer-function samples")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="tabulate frequency or impulse response data")
    p.add_argument("--model", required=True)
    p.add_argument("--kind", required=True, choices=["frd", "ird"])
    p.add_argument("--from", dest="start", type=float, default=0.0)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sample", help="emit tangential samples from a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--delta-s", default=None, help="complex step, e.g. 1e-4+1e-4j")
    p.add_argument("--out", required=True)

    p = sub.add_parser("reduce", help="build a reduced-order model")
    p.add_argument("--method", required=True, choices=["lf", "pork-out", "pork-in", "irka"])
    p.add_argument("--sampler", required=True, choices=["exact", "fqlf", "tqlf"])
    p.add_argument("--data", required=True,
                   help="model file for --sampler exact, dataset file otherwise")
    p.add_argument("--points", default=None, help="tangential data file")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta-s", default=None)
    p.add_argument("--max-iterations", type=int, default=50)
    p.add_argument("--shift-tol", type=float, default=1e-6)
    p.add_argument("--surrogate-tol", type=float, default=1e-8)
    p.add_argument("--surrogate-window", type=int, default=3)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)

    p = sub.add_parser("eval", help="H2 error of a reduced model against the truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--rom", required=True)

    p = sub.add_parser("repro", help="rebuild the bundled benchmark against reference results")
    p.add_argument("--example", required=True, choices=["1", "2"])
    return parser


def _parse_delta_s(text):
    if text is None:
        return None
    try:
        return complex(text)
    except ValueError as exc:
        raise _UsageError(f"cannot parse complex step {text!r}") from exc


def _make_sampler(kind, data_path):
    if kind == "exact":
        model = dataio.load_model(data_path)
        return ExactSampler(model)
    if kind == "fqlf":
        return FqlfSampler(dataio.load_frd(data_path))
    return TqlfSampler(dataio.load_ird(data_path))


def _cmd_synth(args):
    model = dataio.load_model(args.model)
    dataset = dataio.synthesize_dataset(model, args.kind, args.start, args.stop, args.points)
    dataio.save_dataset(args.out, dataset)
    print(f"wrote {args.kind} dataset with {args.points} points to {args.out}")
    return EXIT_OK


def _cmd_sample(args):
    dataset = dataio.load_dataset(args.data)
    sampler = FqlfSampler(dataset) if hasattr(dataset, "omegas") else TqlfSampler(dataset)
    data = dataio.load_points(args.points)
    delta_s = _parse_delta_s(args.delta_s)
    if data.hermite and delta_s is None:
        delta_s = DEFAULT_DELTA_S
    samples = build_sample_set(sampler, data, delta_s)
    dataio.save_samples(args.out, samples)
    print(f"wrote {samples.r} tangential samples to {args.out}")
    return EXIT_OK


def _shifts_json(shifts):
    return {"re": [float(x) for x in shifts.real], "im": [float(x) for x in shifts.imag]}


def _maybe_realify(rom, points):
    """Realify when the point set is conjugate-closed; else keep the complex ROM."""
    try:
        pairs = conjugate_pairing(points)
        return realify_rom(rom, pairs), True
    except QlfError:
        return rom, False


def _cmd_reduce(args):
    sampler = _make_sampler(args.sampler, args.data)
    delta_s = _parse_delta_s(args.delta_s)
    report = {"method": args.method, "sampler": args.sampler}
    if args.method == "irka":
        if args.order is None and args.points is None:
            raise _UsageError("irka needs --order (or --points)")
        initial = dataio.load_points(args.points) if args.points else None
        order = args.order if args.order is not None else initial.r
        config = IrkaConfig(
            r=order, max_iterations=args.max_iterations, shift_tolerance=args.shift_tol,
            surrogate_tolerance=args.surrogate_tol, surrogate_window=args.surrogate_window,
            delta_s=delta_s if delta_s is not None else DEFAULT_DELTA_S,
            seed=args.seed, initial_data=initial,
        )
        model, trace = run_irka(sampler, config)
        report["config"] = {
            "order": order, "seed": args.seed,
            "max_iterations": config.max_iterations,
            "shift_tolerance": config.shift_tolerance,
            "surrogate_tolerance": config.surrogate_tolerance,
            "surrogate_window": config.surrogate_window,
        }
        report["termination"] = trace.termination.value
        report["detail"] = trace.detail
        report["iterations"] = [
            {"shifts": _shifts_json(rec.shifts),
             "shift_change": rec.shift_change,
             "surrogate": None if not np.isfinite(rec.surrogate) else rec.surrogate}
            for rec in trace.records
        ]
        if model is None:
            dataio.save_report(args.report or args.out + ".report.json", report)
            print(f"irka failed: {trace.detail}", file=sys.stderr)
            return EXIT_NUMERICAL
        opt = verify_h2_optimality(sampler, model,
                                   delta_s=None if args.sampler == "exact" else config.delta_s)
        report["residuals"] = {
            "derivative_max": float(opt.derivative.max()),
            "left_max": float(opt.left.max()),
            "right_max": float(opt.right.max()),
        }
        report["realified"] = True
        dataio.save_model(args.out, model)
    else:
        if args.points is None:
            raise _UsageError(f"method {args.method} needs --points")
        data = dataio.load_points(args.points)
        if args.order is not None and args.order != data.r:
            raise _UsageError(f"--order {args.order} does not match {data.r} points")
        if args.method == "lf":
            if data.hermite and delta_s is None and args.sampler != "exact":
                delta_s = DEFAULT_DELTA_S
            samples = build_sample_set(sampler, data, delta_s)
            rom = lf_rom(build_pencil(data, samples))
            realify_points = data.sigma
        elif args.method == "pork-out":
            right = sampler.right_samples(data.sigma, data.b)
            rom = pork_output(right, data.sigma, data.b)
            realify_points = data.sigma
        else:
            left = sampler.left_samples(data.mu, data.c)
            rom = pork_input(left, data.mu, data.c)
            realify_points = data.mu
        rom_out, realified = _maybe_realify(rom, realify_points)
        interp = verify_interpolation(sampler, rom_out, data)
        report["config"] = {"order": data.r, "hermite": bool(data.hermite)}
        report["realified"] = realified
        report["residuals"] = {
            "right_max": float(interp.right.max()),
            "left_max": float(interp.left.max()),
        }
        if interp.hermite is not None:
            report["residuals"]["hermite_max"] = float(interp.hermite.max())
        dataio.save_model(args.out, rom_out)
    report["rom_path"] = args.out
    if args.report:
        dataio.save_report(args.report, report)
    print(f"wrote reduced model to {args.out}")
    return EXIT_OK


def _cmd_eval(args):
    truth = dataio.load_model(args.truth)
    rom = dataio.load_model(args.rom)
    absolute = h2_error(truth, rom)
    scale = h2_norm(truth)
    print(f"H2 error: absolute {absolute:.12e}  relative {absolute / scale:.12e}")
    return EXIT_OK


def _compare(label, computed, reference, tol):
    delta = np.asarray(computed) - np.asarray(reference)
    # reference entries are rounded decimals; real and imaginary parts count
    # as separate printed components
    dev = float(max(np.abs(delta.real).max(), np.abs(delta.imag).max()))
    status = "ok" if dev <= tol else "FAIL"
    print(f"  {label:<24s} max deviation {dev:.3e}  (tolerance {tol:.1e})  {status}")
    return dev <= tol


def _cmd_repro(args):
    model = demo.demo_model()
    data = demo.demo_tangential_data()
    exact = ExactSampler(model)
    ok = True
    if args.example == "1":
        print("exact-sample reduction vs reference:")
        rom = lf_rom(build_pencil(data, build_sample_set(exact, data)))
        real = realify_rom(rom, conjugate_pairing(data.sigma))
        for key, M in (("A", real.A), ("B", real.B), ("C", real.C)):
            ok &= _compare(f"LF {key}", M, demo.REFERENCE_LF[key], demo.TOL_EXACT)

        print("frequency-domain quadrature reduction vs reference:")
        frd = dataio.synthesize_frd(model, *demo.FRD_SPAN, demo.FRD_POINTS)
        sampler = FqlfSampler(frd)
        rom = lf_rom(build_pencil(data, build_sample_set(sampler, data)))
        real = realify_rom(rom, conjugate_pairing(data.sigma))
        for key, M in (("A", real.A), ("B", real.B), ("C", real.C)):
            ok &= _compare(f"FQLF {key}", M, demo.REFERENCE_FQLF[key], demo.TOL_FRD)

        print("derivative samples (tabulated as C(sI-A)^-2 B b = -G'(s)b):")
        for tag, idx in (("s1", 0), ("s3", 2)):
            sig = data.sigma[idx:idx + 1]
            dirs = data.b[:, idx:idx + 1]
            exact_d = -exact.exact_hermite_diag(sig, dirs)[:, 0]
            ok &= _compare(f"exact deriv {tag}", exact_d,
                           demo.REFERENCE_NEG_DERIV_EXACT[tag], demo.TOL_DERIV_EXACT)
            est = -derivative_samples(sampler, sig, dirs, demo.DELTA_S)[:, 0]
            ok &= _compare(f"FQLF deriv {tag}", est,
                           demo.REFERENCE_NEG_DERIV_FQLF[tag], demo.TOL_DERIV_ESTIMATE)
    else:
        print("time-domain quadrature reduction vs reference:")
        ird = dataio.synthesize_ird(model, demo.IRD_SPAN[1], demo.IRD_POINTS)
        sampler = TqlfSampler(ird)
        rom = lf_rom(build_pencil(data, build_sample_set(sampler, data)))
        real = realify_rom(rom, conjugate_pairing(data.sigma))
        for key, M in (("A", real.A), ("B", real.B), ("C", real.C)):
            ok &= _compare(f"TQLF {key}", M, demo.REFERENCE_TQLF[key], demo.TOL_IRD)

        print("derivative samples (tabulated as C(sI-A)^-2 B b = -G'(s)b):")
        for tag, idx in (("s1", 0), ("s3", 2)):
            sig = data.sigma[idx:idx + 1]
            dirs = data.b[:, idx:idx + 1]
            est = -derivative_samples(sampler, sig, dirs, demo.DELTA_S)[:, 0]
            ok &= _compare(f"TQLF deriv {tag}", est,
                           demo.REFERENCE_NEG_DERIV_TQLF[tag], demo.TOL_DERIV_ESTIMATE)
    print("result:", "all comparisons within tolerance" if ok else "DEVIATIONS EXCEED TOLERANCE")
    return EXIT_OK if ok else EXIT_NUMERICAL


_COMMANDS = {
    "synth": _cmd_synth,
    "sample": _cmd_sample,
    "reduce": _cmd_reduce,
    "eval": _cmd_eval,
    "repro": _cmd_repro,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MissingDeltaS as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except QlfError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
