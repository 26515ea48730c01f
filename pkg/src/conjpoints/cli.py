"""``conjpoints`` command line."""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from . import __version__
from .config import ConfigError, ExperimentConfig, RunRecord
from .groebner import BudgetExceeded

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4


class BudgetStop(RuntimeError):
    pass


class Budget:
    def __init__(self, ms: Optional[int]):
        self.start = time.perf_counter()
        self.ms = ms

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1e3

    def seconds_left(self) -> Optional[float]:
        return None if self.ms is None else max(0.0, (self.ms - self.elapsed_ms()) / 1e3)

    def check(self) -> None:
        if self.ms is not None and self.elapsed_ms() > self.ms:
            raise BudgetStop(f"budget of {self.ms} ms exhausted")


def _q(x) -> str:
    return str(Fraction(x)) if isinstance(x, (int, Fraction)) else repr(x)


def _rationals(text: str) -> List[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"expected comma-separated rationals, got {text!r}") from exc


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    path.write_bytes(buf.getvalue().encode("utf-8"))


def _load_config(args) -> ExperimentConfig:
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        cfg = ExperimentConfig.from_ini(text)
    else:
        cfg = ExperimentConfig().validate()
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    return cfg


def _finish(args, cfg: Optional[ExperimentConfig], budget: Budget, outputs: List[str]) -> None:
    out = Path(args.out)
    rec = RunRecord(cfg.hash() if cfg else "", __version__, args.command,
                    cfg.seed if cfg else (args.seed or 0), round(budget.elapsed_ms(), 3), outputs)
    (out / f"{args.command}.run.json").write_text(rec.to_json() + "\n", encoding="utf-8")


# -- subcommands -----------------------------------------------------------------

def cmd_schur(args, budget: Budget) -> int:
    from .symmetric import Partition, schur
    try:
        lam = Partition.parse(args.lam)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.tau < 1:
        raise ConfigError("tau must be positive")
    s = schur(lam, args.tau) if lam.length() <= args.tau else None
    if args.point is None:
        print("0" if s is None else s.format())
        return EXIT_OK
    pt = _rationals(args.point)
    if len(pt) != args.tau:
        raise ConfigError(f"point needs {args.tau} coordinates")
    print("0" if s is None else _q(s.evaluate(pt)))
    return EXIT_OK


def _parse_map(text: str, names: Sequence[str]):
    from .polynomial import parse_polynomial
    from .symord import PolynomialMap
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    try:
        comps = tuple(parse_polynomial(c, names) for c in body.split(",") if c.strip())
        return PolynomialMap(comps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_symord(args, budget: Budget) -> int:
    from .symord import INFINITE, symord_via_elimination
    names = [v.strip() for v in args.vars.split(",") if v.strip()]
    p = _parse_map(args.map, names)
    try:
        res = symord_via_elimination(p, max_seconds=budget.seconds_left())
    except BudgetExceeded as exc:
        raise BudgetStop(str(exc)) from exc
    print(res.value)
    out = Path(args.out)
    ynames = names + [f"Y{k}" for k in range(1, p.tau + 1)]
    lines = [f"map: {args.map}", f"order: {res.basis.order.describe()}", f"symord: {res.value}"]
    if res.witness is not None:
        lines.append(f"witness: {res.witness.format(ynames)}")
    lines.append("basis:")
    lines += [f"  {g.format(ynames)}" for g in res.basis.generators]
    cert = out / "symord_certificate.txt"
    cert.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _finish(args, None, budget, [cert.name])
    return EXIT_OK


def _points(cfg: ExperimentConfig, args) -> List[List[Fraction]]:
    from .lattice import sample_points
    if getattr(args, "x", None):
        pt = _rationals(args.x)
        if len(pt) != len(cfg.variables):
            raise ConfigError(f"--x needs {len(cfg.variables)} coordinates")
        return [pt]
    return sample_points([(float(a), float(b)) for a, b in cfg.domain], cfg.samples, cfg.seed)


def cmd_tailor(args, budget: Budget) -> int:
    from .tailored import TailoringError, construct_tailored
    cfg = _load_config(args)
    rows = []
    for eps in cfg.eps:
        prof = cfg.profile(eps)
        for Q in cfg.Q:
            for x in _points(cfg, args):
                budget.check()
                t = time.perf_counter()
                f = cfg.full_map(x)
                try:
                    r = construct_tailored(f, prof, Q, cfg.delta0, cfg.cF)
                    status, prime = "ok", str(r.prime)
                    minima = " ".join(_q(v) for v in r.minima)
                    polys = " | ".join(str(P) for P in r.polynomials)
                except TailoringError as exc:
                    status, prime, minima, polys = exc.stage, "", "", ""
                rows.append([_q(eps), Q, " ".join(_q(v) for v in x), status, prime, minima, polys,
                             f"{(time.perf_counter() - t) * 1e3:.1f}"])
    path = Path(args.out) / "tailor.csv"
    _write_csv(path, ["eps", "Q", "x", "status", "prime", "minima", "polynomials", "wall_ms"], rows)
    _finish(args, cfg, budget, [path.name])
    print(f"{sum(r[3] == 'ok' for r in rows)}/{len(rows)} ok")
    return EXIT_OK


def cmd_count(args, budget: Budget) -> int:
    from .counting import count_near_manifold, fit_exponent
    cfg = _load_config(args)
    chart = cfg.chart()
    rows = []
    for c in cfg.c:
        pts = []
        for Q in cfg.Q:
            budget.check()
            r = count_near_manifold(chart, cfg.n, Q, cfg.gamma, c, list(cfg.domain), jobs=args.jobs)
            rows.append([Q, _q(cfg.gamma), _q(c), r.count, r.undecidable, f"{r.wall_ms:.1f}"])
            pts.append((Q, r.count))
        if len(pts) >= 3 and all(k > 0 for _, k in pts):
            slope, _, _ = fit_exponent(pts)
            print(f"c={_q(c)}: slope {slope:.4f}")
    path = Path(args.out) / "count.csv"
    _write_csv(path, ["Q", "gamma", "c", "count", "undecidable", "wall_ms"], rows)
    _finish(args, cfg, budget, [path.name])
    return EXIT_OK


def cmd_scaling(args, budget: Budget) -> int:
    from .lattice import scaling_parameters
    cfg = _load_config(args)
    rows = []
    for eps in cfg.eps:
        prof = cfg.profile(eps)
        for Q in cfg.Q:
            sp = scaling_parameters(prof, Q)
            sp.check(prof, Q)
            rows.append([_q(eps), Q, repr(sp.delta)] + [repr(t) for t in sp.t])
    width = cfg.n + 1
    path = Path(args.out) / "scaling.csv"
    _write_csv(path, ["eps", "Q", "delta"] + [f"t{i}" for i in range(width)], rows)
    _finish(args, cfg, budget, [path.name])
    return EXIT_OK


def cmd_measure(args, budget: Budget) -> int:
    from .lattice import measure_estimate
    cfg = _load_config(args)
    ball = [(float(a), float(b)) for a, b in cfg.domain]
    rows = []
    for Q in cfg.Q:
        for eps in sorted(cfg.eps, reverse=True):
            budget.check()
            t = time.perf_counter()
            fr = measure_estimate(ball, cfg.full_map, cfg.profile(eps), Q, cfg.samples, cfg.seed)
            rows.append([_q(eps), Q, cfg.samples, _q(fr), f"{float(fr):.6f}",
                         f"{(time.perf_counter() - t) * 1e3:.1f}"])
    path = Path(args.out) / "measure.csv"
    _write_csv(path, ["eps", "Q", "samples", "fraction", "fraction_float", "wall_ms"], rows)
    _finish(args, cfg, budget, [path.name])
    return EXIT_OK


def cmd_goodness(args, budget: Budget) -> int:
    import numpy as np
    from .goodness import goodness_bound_check, random_polynomial_map
    cfg = _load_config(args)
    gen = np.random.Generator(np.random.Philox(key=cfg.seed))
    rows = []
    for i in range(cfg.maps):
        budget.check()
        d = 1 + i % 2
        deg = int(gen.integers(1, 5))
        N = int(gen.integers(1, 4))
        g = random_polynomial_map(gen, d, deg, N)
        rep = goodness_bound_check(g, [(0.0, 1.0)] * d, resolution=cfg.resolution)
        worst = max(r.measure - r.bound for r in rep.rows)
        rows.append([i, d, rep.degree, N, "; ".join(p.format() for p in g), f"{rep.norm:.6g}",
                     rep.violations, f"{worst:.6f}"])
    path = Path(args.out) / "goodness.csv"
    _write_csv(path, ["map", "d", "degree", "N", "components", "norm", "violations", "worst_margin"], rows)
    _finish(args, cfg, budget, [path.name])
    bad = sum(r[6] > 0 for r in rows)
    print(f"{bad} violating maps out of {len(rows)}")
    return EXIT_OK if bad == 0 else EXIT_INVARIANT


def cmd_accept(args, budget: Budget) -> int:
    from .acceptance import CRITERIA, _timed
    numbers = [int(k) for k in args.only.split(",")] if args.only else sorted(CRITERIA)
    if any(k not in CRITERIA for k in numbers):
        raise ConfigError(f"criteria are numbered {min(CRITERIA)}..{max(CRITERIA)}")
    results = []
    for k in numbers:
        budget.check()
        r = _timed(k, *CRITERIA[k])
        print(r.line(), flush=True)
        results.append(r)
    path = Path(args.out) / "accept.csv"
    _write_csv(path, ["criterion", "name", "passed", "detail", "seconds"],
               [[r.number, r.name, int(r.passed), r.detail, f"{r.seconds:.1f}"] for r in results])
    _finish(args, None, budget, [path.name])
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


COMMANDS = {
    "schur": cmd_schur, "symord": cmd_symord, "tailor": cmd_tailor, "count": cmd_count,
    "scaling": cmd_scaling, "measure": cmd_measure, "goodness": cmd_goodness, "accept": cmd_accept,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment config (INI)")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--budget-ms", type=int, dest="budget_ms")
    common.add_argument("--jobs", type=int, default=1)

    ap = argparse.ArgumentParser(prog="conjpoints")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("schur", parents=[common], help="print or evaluate a Schur polynomial")
    s.add_argument("--lambda", dest="lam", required=True, help="partition, e.g. 2,1")
    s.add_argument("--tau", type=int, required=True)
    s.add_argument("--point", help="comma-separated rationals")
    s = sub.add_parser("symord", parents=[common], help="order of symmetric independence")
    s.add_argument("map", help="components, e.g. '(x, x^2)'")
    s.add_argument("--vars", default="x", help="variable names, comma-separated")
    s = sub.add_parser("tailor", parents=[common], help="tailored polynomials at sample points")
    s.add_argument("--x", help="a single point instead of the configured samples")
    for name in ("count", "scaling", "measure", "goodness"):
        sub.add_parser(name, parents=[common])
    s = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criterion numbers")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    budget = Budget(args.budget_ms)
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be positive")
        Path(args.out).mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](args, budget)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BudgetStop as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (AssertionError, ArithmeticError) as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
