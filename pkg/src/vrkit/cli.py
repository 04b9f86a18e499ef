"""Command line: ``vrkit <region|curve|simulate|verify|figure> ...``.

Exit codes: 0 success, 1 verification failure, 2 bad input,
3 degenerate domain, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import disc, halfplane, io, verify
from .errors import (BranchAmbiguity, DegenerateInput, MalformedBoundary, RejectionBudgetExceeded,
                     ToleranceUnreachable, VrkitError)
from .figures import FIGURES, figure
from .loewner import Exponent, Slit, exponent_driving, exponent_trajectory, integrate, thunder_check
from .representations import sample_driving
from .svg import DISC, HALFPLANE, region_svg

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DEGENERATE, EXIT_NUMERIC = 0, 1, 2, 3, 4

HP_KINDS = ("VI", "VIstar")
DISC_KINDS = ("VT", "VU", "VUstar", "VR", "VRgeq", "VRgt", "VR0")
HP_CURVES = halfplane.CURVE_KINDS
DISC_CURVES = disc.DISC_CURVE_KINDS
RC_CURVES = ("rcA", "rcB", "rcC")


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style input: ``1+1i``, ``0.5``, ``-i``, ``2-0.5i``, ``1+2j``."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if not s:
        raise UsageError("empty complex number")
    s = re.sub(r"(^|[+-])i", r"\g<1>1i", s)
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as a+bi") from None


@dataclass
class RunConfig:
    command: str
    z0: complex | None = None
    kind: str | None = None
    tau: float | None = None
    driving: str | None = None
    n: int = 1
    seed: int = 0
    tol: float | None = None
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("sample count must be >= 1")
        if self.z0 is not None and not np.isfinite(self.z0):
            raise UsageError("z0 must be finite")


def _need_z0(cfg, disc_kind: bool) -> complex:
    if cfg.z0 is None:
        raise UsageError("--z0 is required")
    z0 = cfg.z0
    if disc_kind and not (0 < abs(z0) < 1):
        raise UsageError(f"z0 = {z0} must satisfy 0 < |z0| < 1")
    if not disc_kind and not z0.imag > 0:
        raise UsageError(f"z0 = {z0} must satisfy Im z0 > 0")
    return z0


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# commands

def cmd_region(cfg: RunConfig, resolution: float = 1e-6) -> int:
    if cfg.kind in HP_KINDS:
        z0 = _need_z0(cfg, False)
        region = (halfplane.region_VI if cfg.kind == "VI" else halfplane.region_VIstar)(z0, resolution=resolution)
        vp = HALFPLANE
    elif cfg.kind in DISC_KINDS:
        z0 = _need_z0(cfg, True)
        if cfg.kind == "VT" and cfg.tau is None:
            raise UsageError("--tau is required for VT")
        region = disc.disc_region(cfg.kind, z0, tau=cfg.tau, resolution=resolution)
        vp = DISC
    else:
        raise UsageError(f"--kind must be one of {HP_KINDS + DISC_KINDS}")
    if cfg.format == "svg":
        _emit(region_svg(region, vp), cfg.out)
    elif cfg.format == "json":
        _emit(io.dumps(io.region_to_json(region)), cfg.out)
    else:
        raise UsageError("region output format must be json or svg")
    return EXIT_OK


def cmd_curve(cfg: RunConfig, t_max: float | None = None) -> int:
    n = max(cfg.n, 2)
    kind = cfg.kind
    if kind in HP_CURVES:
        z0 = _need_z0(cfg, False)
        if z0.real < 0:
            raise UsageError("half-plane curves are defined for Re z0 >= 0")
        if kind == "Dstar":
            top = abs(z0) if t_max is None else min(t_max, abs(z0))
            t = np.linspace(0.0, top, n, endpoint=top < abs(z0))
        else:
            t = np.linspace(0.0, 10.0 if t_max is None else t_max, n)
        w = halfplane.hp_curve_point(kind, z0, t)
    elif kind in DISC_CURVES:
        z0 = _need_z0(cfg, True)
        top = 10.0 if t_max is None else t_max
        t = np.linspace(0.0, top, n)
        if kind.endswith("Star"):
            t = -t
        w = disc.disc_curve_point(kind, z0, t)
    elif kind in RC_CURVES:
        z0 = _need_z0(cfg, True)
        t = np.linspace(0.0, 1.0, n)
        w = disc.rc_curve(kind[2:], z0, t)
    else:
        raise UsageError(f"--kind must be one of {HP_CURVES + DISC_CURVES + RC_CURVES}")
    if cfg.format == "csv":
        _emit(io.curve_to_csv(t, w), cfg.out)
    elif cfg.format == "json":
        _emit(io.dumps(io.curve_to_json(kind, z0, t, w)), cfg.out)
    else:
        raise UsageError("curve output format must be json or csv")
    return EXIT_OK


def _load_driving(path: str):
    doc = json.loads(Path(path).read_text())
    # a trajectory document carries its driving
    if isinstance(doc, dict) and doc.get("type") == "trajectory":
        doc = doc["driving"]
    return io.driving_from_json(doc)


def cmd_simulate(cfg: RunConfig, T: float | None = None, exponent: float | None = None,
                 random: bool = False, eta_end: float | None = None, thunder: bool = False) -> int:
    z0 = _need_z0(cfg, False)
    rel_tol = 1e-10 if cfg.tol is None else cfg.tol
    if (cfg.driving is not None) + (exponent is not None) + bool(random) > 1:
        raise UsageError("give at most one of --driving, --exponent, --random")
    if cfg.driving is not None:
        driving = _load_driving(cfg.driving)
    elif exponent is not None:
        driving = exponent_driving(exponent, z0)
    elif random:
        driving = sample_driving(10, (0.0, 50.0), cfg.seed)
    else:
        driving = Slit.constant(0.0)
    if isinstance(driving, Exponent):
        if abs(driving.z0 - z0) > 0:
            raise UsageError("the exponent driving is tied to its own z0")
        traj = exponent_trajectory(driving, 2 * z0.imag if eta_end is None else eta_end, rel_tol)
    else:
        horizon = driving.t_end if T is None else T
        if not math.isfinite(horizon):
            horizon = 1.0
        if horizon > driving.t_end:
            raise UsageError(f"horizon {horizon} exceeds the driving's end time {driving.t_end}")
        traj = integrate(z0, driving, horizon, rel_tol)
    report = thunder_check(traj) if thunder else None
    _emit(io.dumps(io.trajectory_to_json(traj, report)), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.kind not in verify.SUITES:
        raise UsageError(f"--suite must be one of {verify.SUITES}")
    rep = verify.run_suite(cfg.kind, n=cfg.n, seed=cfg.seed, z0=cfg.z0,
                           tol=1e-7 if cfg.tol is None else cfg.tol)
    _emit(io.dumps(io.report_to_json(rep)), cfg.out)
    status = "PASS" if rep.passed else "FAIL"
    print(f"{status} {rep.suite}: {rep.samples} samples, {rep.n_failures} failures, "
          f"{rep.wall_time:.2f} s", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_figure(cfg: RunConfig) -> int:
    names = FIGURES if cfg.kind == "all" else (cfg.kind,)
    if names[0] not in FIGURES:
        raise UsageError(f"--name must be one of {FIGURES} or all")
    for name in names:
        svg = figure(name).render()
        if cfg.out is None:
            sys.stdout.write(svg)
        else:
            out = Path(cfg.out)
            target = out / f"{name}.svg" if (len(names) > 1 or out.is_dir()) else out
            _emit(svg, str(target))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vrkit", description="value regions of symmetric univalent maps")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, kind_help, *kind_aliases):
        sp.add_argument("--z0", type=parse_complex, help="base point a+bi")
        sp.add_argument("--kind", *kind_aliases, dest="kind", help=kind_help)
        sp.add_argument("--tau", type=float)
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--format", choices=("json", "svg", "csv"), default="json")
        sp.add_argument("--out", help="output file (default stdout)")

    r = sub.add_parser("region", help="region boundary as JSON or SVG")
    common(r, "VI, VIstar, VT, VU, VUstar, VR, VRgeq, VRgt, VR0")
    r.add_argument("--resolution", type=float, default=1e-6)
    c = sub.add_parser("curve", help="sampled boundary curve as JSON or CSV")
    common(c, "C, D, Cstar, Dstar, Cplus, Cminus, CplusStar, CminusStar, rcA, rcB, rcC")
    c.set_defaults(n=201)
    c.add_argument("--t-max", type=float)
    s = sub.add_parser("simulate", help="integrate the Loewner flow")
    common(s, "unused")
    s.add_argument("--driving", help="driving JSON file")
    s.add_argument("--exponent", type=float, help="exponent driving with parameter x")
    s.add_argument("--random", action="store_true", help="seeded random 10-piece measure driving")
    s.add_argument("--T", type=float, help="time horizon")
    s.add_argument("--eta-end", type=float, help="final height for exponent drivings")
    s.add_argument("--thunder", action="store_true", help="append the thunder-bound report")
    v = sub.add_parser("verify", help="run a verification suite")
    common(v, "suite name", "--suite")
    v.set_defaults(n=10_000)
    f = sub.add_parser("figure", help="emit a reference figure as SVG")
    common(f, "fig1, fig2, fig4, fig5, fig6 or all", "--name")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = RunConfig(args.command, args.z0, args.kind, args.tau, getattr(args, "driving", None),
                        args.n, args.seed, args.tol, args.out, args.format)
        if args.command == "region":
            return cmd_region(cfg, args.resolution)
        if args.command == "curve":
            return cmd_curve(cfg, args.t_max)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.T, args.exponent, args.random, args.eta_end, args.thunder)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_figure(cfg)
    except DegenerateInput as exc:
        return _fail(EXIT_DEGENERATE, exc)
    except (ToleranceUnreachable, RejectionBudgetExceeded, BranchAmbiguity, MalformedBoundary,
            FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    except (VrkitError, ValueError, OSError) as exc:
        return _fail(EXIT_INPUT, exc)


def _fail(code, exc) -> int:
    print(f"vrkit: error: {exc}", file=sys.stderr)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
