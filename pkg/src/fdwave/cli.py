"""Command-line front end: ``fdwave eval | kernel | mellin | verify``.

Exit codes: 0 success, 1 I/O or invalid input, 2 at least one grid point
failed numerically, 3 a symbol could not be compiled into a series,
4 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from . import greens, mellin, subord, verify
from .errors import DoublePoleError, EmptyFamily, EmptyStrip, FdwaveError

EXIT_OK = 0
EXIT_IO = 1
EXIT_NUMERIC = 2
EXIT_SYMBOLIC = 3
EXIT_VERIFY = 4

HEADER = "r,t,value,abs_err,method"
KERNELS = ("wright", "phi", "general", "example1")
BASES = ("gauss", "delta1", "2d", "delta")


class UsageError(Exception):
    """Invalid flags or configuration values."""


@dataclass
class RunConfig:
    """Everything a subcommand needs; built from flags over a config file."""

    command: str = "eval"
    alpha: float = 2.0
    beta: float = 1.0
    n: int = 1
    kernel: str = "phi"
    gamma_ratio: float = 0.5
    delta: float = 1.0
    base: str = "gauss"
    side: str = "left"
    cancel: bool = True
    suite: str = "all"
    r_min: float = 0.1
    r_max: float = 5.0
    r_steps: int = 10
    t_min: float = 1.0
    t_max: float = 1.0
    t_steps: int = 1
    log_grid: bool = False
    tol: float = 1e-10
    out: str = "-"
    workers: int = 1

    def validate(self) -> "RunConfig":
        for lo, hi, steps, name in ((self.r_min, self.r_max, self.r_steps, "r"),
                                    (self.t_min, self.t_max, self.t_steps, "t")):
            if not (lo > 0 and hi > 0):
                raise UsageError(f"{name} grid bounds must be positive")
            if lo > hi:
                raise UsageError(f"{name}-min must not exceed {name}-max")
            if steps < 0:
                raise UsageError(f"{name}-steps must be non-negative")
        if not 0 < self.tol < 1:
            raise UsageError("tol must lie in (0, 1)")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if self.kernel not in KERNELS:
            raise UsageError(f"kernel must be one of {', '.join(KERNELS)}")
        if self.base not in BASES:
            raise UsageError(f"base must be one of {', '.join(BASES)}")
        if self.side not in ("left", "right"):
            raise UsageError("side must be left or right")
        return self

    @property
    def params(self):
        """FDWParams for ``eval``/``mellin``, the kernel spec for ``kernel``."""
        if self.command == "kernel":
            return self.kernel_spec()
        return greens.FDWParams(self.alpha, self.beta, self.n)

    def kernel_spec(self) -> subord.KernelSpec:
        if self.kernel == "wright":
            return subord.WrightRatio(self.gamma_ratio)
        if self.kernel == "phi":
            return subord.TheoremPhi(self.alpha, self.beta)
        if self.kernel == "general":
            return subord.GeneralPhi(self.alpha, self.beta, self.delta, self.n)
        return subord.ExampleOnePdf(self.alpha, self.beta)

    def axis(self, lo: float, hi: float, steps: int) -> list:
        if steps == 0:
            return []
        if steps == 1:
            return [float(lo)]
        pts = np.geomspace(lo, hi, steps) if self.log_grid else np.linspace(lo, hi, steps)
        return [float(x) for x in pts]

    @property
    def r_values(self) -> list:
        return self.axis(self.r_min, self.r_max, self.r_steps)

    @property
    def t_values(self) -> list:
        return self.axis(self.t_min, self.t_max, self.t_steps)


# ---------------------------------------------------------------- config

_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _coerce(name: str, text: str):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    kind = kinds[name]
    if kind == "bool":
        try:
            return _BOOL[text.strip().lower()]
        except KeyError:
            raise UsageError(f"{name}: expected a boolean, got {text!r}") from None
    conv = {"float": float, "int": int, "str": str}[kind]
    try:
        return conv(text.strip())
    except ValueError:
        raise UsageError(f"{name}: cannot parse {text!r}") from None


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes equal underscores."""
    known = {f.name for f in fields(RunConfig)} - {"command"}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in known:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, value)
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    g = common.add_argument_group("model")
    g.add_argument("--alpha", type=float, default=S)
    g.add_argument("--beta", type=float, default=S)
    g.add_argument("--n", type=int, default=S)
    g = common.add_argument_group("grid")
    g.add_argument("--r-min", dest="r_min", type=float, default=S)
    g.add_argument("--r-max", dest="r_max", type=float, default=S)
    g.add_argument("--r-steps", dest="r_steps", type=int, default=S)
    g.add_argument("--t-min", dest="t_min", type=float, default=S)
    g.add_argument("--t-max", dest="t_max", type=float, default=S)
    g.add_argument("--t-steps", dest="t_steps", type=int, default=S)
    g.add_argument("--log-grid", dest="log_grid", action="store_true", default=S,
                   help="geometric instead of uniform spacing")
    g = common.add_argument_group("run")
    g.add_argument("--tol", type=float, default=S)
    g.add_argument("--out", default=S, help="output file, '-' for stdout")
    g.add_argument("--workers", type=int, default=S)
    g.add_argument("--config", default=None, help="key=value file; flags override it")

    parser = _Parser(prog="fdwave", description="Fundamental solutions of the "
                     "space-time fractional diffusion-wave equation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("eval", parents=[common], help="tabulate G over an (r, t) grid")
    k = sub.add_parser("kernel", parents=[common],
                       help="tabulate a subordination density (r column = density variable)")
    k.add_argument("--kernel", choices=KERNELS, default=S)
    k.add_argument("--gamma-ratio", dest="gamma_ratio", type=float, default=S)
    k.add_argument("--delta", type=float, default=S)
    m = sub.add_parser("mellin", parents=[common],
                       help="print a target/base factorization and its series")
    m.add_argument("--base", choices=BASES, default=S)
    m.add_argument("--delta", type=float, default=S)
    m.add_argument("--side", choices=("left", "right"), default=S)
    m.add_argument("--no-cancel", dest="cancel", action="store_false", default=S,
                   help="keep matching gamma terms uncancelled")
    v = sub.add_parser("verify", parents=[common], help="run invariant suites")
    v.add_argument("suite", nargs="?", choices=("all",) + verify.SUITES, default=S)
    return parser


def config_from_args(argv: Sequence[str] | None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    path = ns.pop("config", None)
    base = read_config(path) if path else {}
    if ns["command"] == "verify" and "tol" not in ns and "tol" not in base:
        base["tol"] = 1e-7
    base.update(ns)
    return RunConfig(**base).validate()


# ---------------------------------------------------------------- CSV

def fmt(x: float) -> str:
    """Shortest round-trip decimal; independent of locale."""
    return repr(float(x))


def csv_row(r: float, t: float, value: float, abs_err: float, method: str) -> str:
    return ",".join((fmt(r), fmt(t), fmt(value), fmt(abs_err), method))


def _eval_row(cfg: RunConfig, t: float) -> list:
    p = cfg.params
    rows = []
    for r in cfg.r_values:
        try:
            res = greens.g_eval(p, (r, t), tol=cfg.tol)
            rows.append((r, t, res.value, res.abs_err, res.method))
        except FdwaveError as exc:
            rows.append(_failed(r, t, exc))
    return rows


def _kernel_row(cfg: RunConfig, t: float) -> list:
    kern = cfg.kernel_spec()
    rows = []
    for s in cfg.r_values:
        try:
            res = subord.density_at(kern, s, t, tol=cfg.tol)
            rows.append((s, t, res.value, res.abs_err, res.method))
        except FdwaveError as exc:
            rows.append(_failed(s, t, exc))
    return rows


def _failed(r: float, t: float, exc: Exception):
    best = getattr(exc, "best", None)
    value = getattr(best, "value", best) if best is not None else math.nan
    err = getattr(best, "abs_err", math.nan) if best is not None else math.nan
    try:
        value = float(value)
    except (TypeError, ValueError):
        value = math.nan
    return (r, t, value, float(err), "failed")


def _rows(cfg: RunConfig, worker) -> list:
    ts = cfg.t_values
    if not cfg.r_values or not ts:
        return []
    if cfg.workers == 1 or len(ts) == 1:
        blocks = [worker(cfg, t) for t in ts]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            blocks = list(pool.map(worker, [cfg] * len(ts), ts))
    return [row for block in blocks for row in block]


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _write(path: str, lines: Iterable[str]) -> None:
    fh, owned = _open_out(path)
    try:
        for line in lines:
            fh.write(line + "\n")
        fh.flush()
    finally:
        if owned:
            fh.close()


# ---------------------------------------------------------------- commands

def cmd_eval(cfg: RunConfig) -> int:
    """CSV of G over the grid."""
    rows = _rows(cfg, _eval_row)
    try:
        _write(cfg.out, [HEADER] + [csv_row(*row) for row in rows])
    except OSError as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_NUMERIC if any(row[4] == "failed" for row in rows) else EXIT_OK


def cmd_kernel(cfg: RunConfig) -> int:
    """CSV of the kernel density, with one ``# mass=`` footer per time."""
    kern = cfg.kernel_spec()
    rows = _rows(cfg, _kernel_row)
    footer = []
    if rows:
        for t in cfg.t_values:
            try:
                rep = subord.pdf_verify(kern, t)
                footer.append(f"# mass={fmt(rep.mass)} mass_err={fmt(rep.mass_err)} t={fmt(t)}")
            except FdwaveError:
                footer.append(f"# mass=failed t={fmt(t)}")
    try:
        _write(cfg.out, [HEADER] + [csv_row(*row) for row in rows] + footer)
    except OSError as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = any(row[4] == "failed" for row in rows) or any("failed" in f for f in footer)
    return EXIT_NUMERIC if failed else EXIT_OK


def _base_symbol(cfg: RunConfig) -> tuple:
    a, n, c = cfg.alpha, cfg.n, cfg.cancel
    if cfg.base == "gauss":
        return "K_{2,1,n}", mellin.builtin("K", alpha=2.0, beta=1.0, n=n, cancel=c)
    if cfg.base == "delta1":
        return "K_{alpha,1,n}", mellin.builtin("K", alpha=a, beta=1.0, n=n, cancel=c)
    if cfg.base == "2d":
        if n != 2:
            raise UsageError("the 2d base needs --n 2")
        return "K_{alpha,alpha/2,2}", mellin.builtin("K", alpha=a, beta=a / 2, n=2, cancel=c)
    return "K_{alpha,delta,n}", mellin.builtin("K", alpha=a, beta=cfg.delta, n=n, cancel=c)


def mellin_report(cfg: RunConfig, terms: int = 10) -> list:
    """Lines printed by ``fdwave mellin``; raises DoublePoleError."""
    target = mellin.builtin("K", alpha=cfg.alpha, beta=cfg.beta, n=cfg.n, cancel=cfg.cancel)
    label, base = _base_symbol(cfg)
    quotient = mellin.GammaQuotientSymbol(
        target.prefactor / base.prefactor, target.scale_base / base.scale_base,
        list(target.numerator) + list(base.denominator),
        list(target.denominator) + list(base.numerator), cancel=cfg.cancel)
    lines = [f"target K_{{alpha,beta,n}}: {mellin.pretty(target)}",
             f"base {label}: {mellin.pretty(base)}",
             f"kernel: {mellin.pretty(quotient)}"]
    try:
        st = mellin.strip(quotient)
        lines.append(f"strip: ({fmt(st.lo + 0.0)}, {fmt(st.hi + 0.0)})")
    except EmptyStrip:
        lines.append("strip: empty")
    if quotient.is_unit():
        lines.append("series: unit kernel")
        return lines
    try:
        rep = mellin.residue_series(quotient, cfg.side)
    except EmptyFamily:
        lines.append(f"series ({cfg.side}): no poles on this side")
        return lines
    lines.append(f"series ({cfg.side}): sum c_k tau^e_k, tau^{fmt(rep.arg_power)} steps")
    lines.append("k,coeff,exponent")
    for k, (c, e) in enumerate(rep.terms[:terms]):
        lines.append(f"{k},{fmt(c)},{fmt(e)}")
    return lines


def cmd_mellin(cfg: RunConfig) -> int:
    """Target, base and kernel symbols with the kernel's first series terms."""
    try:
        lines = mellin_report(cfg)
    except DoublePoleError as exc:
        print(f"DoublePoleError: {exc}")
        return EXIT_SYMBOLIC
    try:
        _write(cfg.out, lines)
    except OSError as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _verify_rows(suite: str, tol: float):
    names = verify.SUITES if suite == "all" else (suite,)
    for name in names:
        try:
            yield from verify.run_suite(name, tol)
        except Exception as exc:  # a crashing suite is a failed check, not a crash
            yield verify.Check(name, f"error:{type(exc).__name__}", "fail", math.nan, 0.0)


def _json(check: verify.Check) -> str:
    d = check.as_dict()
    for key in ("observed", "bound"):
        if not math.isfinite(d[key]):
            d[key] = None
    return json.dumps(d)


def cmd_verify(suite: str, tol: float, out: str = "-") -> int:
    """JSON line per check; exit 4 when any check fails."""
    ok = True
    try:
        fh, owned = _open_out(out)
    except OSError as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        for check in _verify_rows(suite, tol):
            ok &= check.status == "pass"
            fh.write(_json(check) + "\n")
            fh.flush()
    finally:
        if owned:
            fh.close()
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:
        # argparse exits for --help (0) and for bad flags (1, see _Parser)
        return exc.code if isinstance(exc.code, int) else EXIT_IO
    except (UsageError, OSError) as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO
    except FdwaveError as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if cfg.command == "eval":
            cfg.params
            return cmd_eval(cfg)
        if cfg.command == "kernel":
            cfg.kernel_spec()
            return cmd_kernel(cfg)
        if cfg.command == "mellin":
            return cmd_mellin(cfg)
        return cmd_verify(cfg.suite, cfg.tol, cfg.out)
    except (UsageError, ValueError) as exc:
        print(f"fdwave: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
