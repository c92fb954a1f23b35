"""Command-line interface: ``qbaker <command> [options]``.

Exit codes: 0 success, 1 verification failed, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dynamics, formats, operators, spectral, states
from .errors import InvalidInputError, QBakerError, SpecInconsistencyError

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3


def _qs(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _perm_or_shift(args):
    if args.perm is not None:
        return _qs(args.perm)
    return args.k


def _mod_spec(args):
    if args.q is not None:
        spec = operators.ModMultSpec(args.A, args.q, args.sign or "plus")
        if args.N is not None and args.N != spec.N:
            raise SpecInconsistencyError(f"N = {args.N} but A q {args.sign} 1 = {spec.N}")
        return spec
    if args.N is None:
        raise InvalidInputError("give --q or --N")
    return operators.ModMultSpec.from_modulus(args.A, args.N, args.sign)


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInputError(f"{args.kind} needs {', '.join(missing)}")


def cmd_build(args):
    kind = args.kind
    if kind == "dft":
        _require(args, "D")
        M = operators.generalized_dft(args.D, args.alpha, args.beta)
    elif kind == "modmult":
        _require(args, "A", "N")
        M = operators.modmult_full(args.A, args.N)
    elif kind == "modmult-reduced":
        _require(args, "A")
        M = operators.modmult_reduced(_mod_spec(args))
    elif kind == "baker-bv":
        _require(args, "D", "A")
        M = operators.bv_baker(args.D, args.A, _perm_or_shift(args), args.alpha, args.beta)
    else:
        _require(args, "A")
        M = operators.tilde_baker(_mod_spec(args), args.k)
    formats.write_cmat(args.out, M)
    print(f"wrote {M.shape[0]}x{M.shape[1]} matrix to {args.out}")
    return EXIT_OK


def cmd_verify(args):
    cert = operators.certify(_mod_spec(args))
    print(f"residual={formats.fmt(cert.residual)}")
    print(f"residual_max={formats.fmt(cert.residual_max)}")
    print(f"unitarity={formats.fmt(cert.unitarity)}")
    print(f"cross={formats.fmt(cert.cross)}")
    print(f"cross_max={formats.fmt(cert.cross_max)}")
    print(f"index_offset={cert.label_offset}")
    print(f"omega_convention={cert.omega_convention}")
    ok = cert.passed(args.tol)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAILED


def _point(z):
    return None if z is None else [z[0], z[1]]


def cmd_evolve(args):
    spec = _mod_spec(args)
    report = dynamics.semiclassical_error(spec, args.k, (args.x0, args.p0), args.sigma, args.target,
                                          threads=args.threads)
    psi = states.torus_coherent_state(args.x0, args.p0, args.sigma, spec.D)
    phi = operators.tilde_baker(spec, args.k) @ psi
    grid = states.husimi(phi, args.nx, args.np, args.sigma, args.normalization, threads=args.threads)
    os.makedirs(args.outdir, exist_ok=True)
    formats.write_state(os.path.join(args.outdir, "evolved.state"), phi)
    formats.write_husimi_csv(os.path.join(args.outdir, "husimi.csv"), grid)
    summary = {
        "A": spec.A,
        "q": spec.q,
        "N": spec.N,
        "sign": spec.sign,
        "k": args.k,
        "D": spec.D,
        "sigma": args.sigma,
        "z0": [args.x0, args.p0],
        "target": report.target,
        "error": report.error,
        "classicalTarget": _point(report.classical_target),
        "shiftedTarget": _point(report.shifted_target),
        "husimiPeak": list(grid.peak()),
        "goodRegion": report.good_region,
        "conventions": {
            "index_offset": spec.label_offset,
            "omega_convention": operators.resolve_omega_convention(spec)[0],
            "husimi_grid": "corners",
            "husimi_normalization": grid.normalization,
            "target_sigma": args.sigma / spec.A**2,
        },
    }
    with open(os.path.join(args.outdir, "summary.json"), "w", encoding="ascii", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({"error": report.error, "husimiPeak": summary["husimiPeak"]}))
    return EXIT_OK


def cmd_husimi(args):
    psi = formats.read_state(args.input)
    grid = states.husimi(psi, args.nx, args.np, args.sigma, args.normalization, threads=args.threads)
    formats.write_husimi_csv(args.out, grid)
    return EXIT_OK


def cmd_spectrum(args):
    U = formats.read_cmat(args.input)
    phases = spectral.eigenphases(U, method=args.method)
    formats.write_spectrum_csv(args.out, phases)
    if args.degeneracy:
        formats.write_degeneracy_csv(args.degeneracy, spectral.degeneracy_histogram(phases, args.tol))
    if args.ratios:
        formats.write_ratios_csv(args.ratios, *spectral.spacing_ratios(phases))
    return EXIT_OK


def _sink(path):
    return sys.stdout if path in (None, "-") else path


def cmd_scan(args):
    rows = dynamics.convergence_scan(args.A, args.k, args.sign, (args.x0, args.p0), args.sigma, args.qs,
                                     args.target, threads=args.threads)
    formats.write_scan_csv(_sink(args.out), rows)
    return EXIT_OK


def cmd_classical(args):
    orbit = dynamics.classical_orbit(args.A, _perm_or_shift(args), (args.x0, args.p0), args.steps)
    formats.write_orbit_csv(_sink(args.out), orbit)
    return EXIT_OK


def _add_spec_args(p, need_k=True):
    p.add_argument("--A", type=int, required=True, help="multiplier / number of strips")
    p.add_argument("--q", type=int, help="strip height, D = A q")
    p.add_argument("--N", type=int, help="modulus (alternative to --q)")
    p.add_argument("--sign", choices=["plus", "minus"], default=None,
                   help="N = A q + 1 (plus) or A q - 1 (minus); inferred from --N when omitted")
    if need_k:
        p.add_argument("--k", type=int, default=0, help="cyclic shift of the tilde map")


def _add_point_args(p):
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--p0", type=float, required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="qbaker", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $QBAKER_THREADS or 1)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    def sub_add(name, **kw):
        return subparsers.add_parser(name, parents=[common], **kw)

    p = sub_add("build", help="write an operator as a CMAT file")
    p.add_argument("kind", choices=["dft", "modmult", "modmult-reduced", "baker-bv", "baker-tilde"])
    p.add_argument("--D", type=int)
    p.add_argument("--A", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--sign", choices=["plus", "minus"], default=None)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--perm", help="explicit block permutation for baker-bv, e.g. 2,0,1")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub_add("verify", help="certify the decomposition into tilde baker maps")
    _add_spec_args(p, need_k=False)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub_add("evolve", help="evolve a coherent state under one tilde baker map")
    _add_spec_args(p)
    _add_point_args(p)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--nx", type=int, default=None, help="Husimi grid size in x (default D)")
    p.add_argument("--np", type=int, default=None, help="Husimi grid size in p (default D)")
    p.add_argument("--target", choices=list(dynamics.TARGETS), default="classical")
    p.add_argument("--normalization", choices=list(states.NORMALIZATIONS), default="raw")
    p.add_argument("--outdir", default=".")
    p.set_defaults(func=cmd_evolve)

    p = sub_add("husimi", help="Husimi grid of a STATE file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--nx", type=int, required=True)
    p.add_argument("--np", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--normalization", choices=list(states.NORMALIZATIONS), default="raw")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_husimi)

    p = sub_add("spectrum", help="eigenphases of a CMAT file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--degeneracy")
    p.add_argument("--ratios")
    p.add_argument("--tol", type=float, default=spectral.DEFAULT_TOL)
    p.add_argument("--method", choices=["cayley", "qr"], default="cayley")
    p.set_defaults(func=cmd_spectrum)

    p = sub_add("scan", help="semiclassical error versus dimension")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--sign", choices=["plus", "minus"], default="plus")
    _add_point_args(p)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--qs", type=_qs, required=True, help="comma-separated q values")
    p.add_argument("--target", choices=list(dynamics.TARGETS), default="classical")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub_add("classical", help="orbit of the classical baker map")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--perm", help="explicit block permutation, e.g. 2,0,1")
    _add_point_args(p)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_classical)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evolve":
            D = _mod_spec(args).D
            args.nx = D if args.nx is None else args.nx
            args.np = D if args.np is None else args.np
        if args.threads is not None and args.threads < 1:
            raise InvalidInputError(f"--threads must be >= 1, got {args.threads}")
        return args.func(args)
    except QBakerError as exc:
        print(f"qbaker: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"qbaker: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
