"""Command-line frontend: one JSON document (or CSV table) per invocation."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import mpmath

from . import __version__
from .asymptotics import (
    convergence_study,
    delta_exponent,
    exponent_gamma,
    exponent_theta,
    phi_sum_direct,
    phi_sum_sieve,
    squarefree_direct,
    squarefree_sieve,
)
from .boxes import BoxSpec, count_fixed_det, fixed_det_max_report, residual_record
from .constants import euler_constant_S, euler_constant_sigma
from .core import BudgetExceeded, DetstatError, LinearForm, factorize, hadamard_range, resolve_budget
from .counts import closed_form_N, closed_form_N_sq, oracle_singular_count
from .expsums import FAMILIES, bound_report_prime, bound_report_prime_sq, crt_product, eval_expsum
from .verify import SUITES, run_suite

TOOL = "detstat"
COMMANDS = ("count-singular", "count-box", "fixed-det", "expsum", "expsum-sweep", "squarefree",
            "phi-sum", "constants", "exponents", "convergence", "verify")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    m: int | None = None
    d: int | None = None
    h: str | None = None
    bounds: str | None = None
    a: int | None = None
    form: str | None = None
    family: str | None = None
    method: str | None = None
    square: bool = False
    prime_limit: int | None = None
    budget: int | None = None
    threads: int = 1
    format: str = "json"
    seed: int = 0
    suite: str | None = None

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class Outcome:
    fields: dict[str, Any]
    records: list[dict[str, Any]]
    iterations: int
    ok: bool = True


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 20, strip_zeros=False)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, LinearForm):
        return x.format()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return x.item()
    return x


def _csv_cell(v):
    v = _plain(v)
    if isinstance(v, list):
        return ";".join(str(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def render_json(cfg: RunConfig, out: Outcome, wall: float | None) -> str:
    doc = {
        "tool": TOOL,
        "version": __version__,
        "config": cfg.as_dict(),
        "config_hash": cfg.digest(),
        "iterations": out.iterations,
        "wall_time_s": wall,
    }
    doc.update(_plain(out.fields))
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def render_csv(out: Outcome) -> str:
    records = out.records or [out.fields]
    header: list[str] = []
    for r in records:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in records:
        w.writerow([_csv_cell(r.get(k)) for k in header])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [f"--{k.replace('_', '-')}" for k in names if getattr(cfg, k) is None]
    if missing:
        raise UsageError(f"{cfg.command} requires {', '.join(missing)}")


def _int_list(text: str, flag: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects a comma-separated list of integers") from None
    if not out:
        raise UsageError(f"{flag} is empty")
    return out


def _single_h(cfg: RunConfig) -> int:
    hs = _int_list(cfg.h, "--h")
    if len(hs) != 1:
        raise UsageError("--h takes a single box bound here")
    return hs[0]


def _box(cfg: RunConfig) -> BoxSpec:
    if cfg.bounds is not None:
        return BoxSpec(cfg.n, tuple(_int_list(cfg.bounds, "--bounds")))
    _need(cfg, "h")
    return BoxSpec.uniform(cfg.n, _single_h(cfg))


def _form(cfg: RunConfig) -> LinearForm:
    _need(cfg, "form")
    try:
        form = LinearForm.parse(cfg.form)
    except ValueError as exc:
        raise UsageError(f"bad --form {cfg.form!r}: {exc}") from None
    if form.n != cfg.n:
        raise UsageError(f"--form is {form.n}x{form.n} but --n is {cfg.n}")
    return form


def _squarefree_shape(m: int) -> str | None:
    if m == 1:
        return "unit"
    exps = set(factorize(m).values())
    return {frozenset({1}): "squarefree", frozenset({2}): "square"}.get(frozenset(exps))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_count_singular(cfg: RunConfig) -> Outcome:
    _need(cfg, "n", "m")
    n, m = cfg.n, cfg.m
    shape = _squarefree_shape(m)
    closed = None
    if shape == "squarefree":
        closed = closed_form_N(n, m)
    elif shape == "square":
        closed = closed_form_N_sq(n, math.isqrt(m))
    elif shape == "unit":
        closed = 1
    use_oracle = cfg.method == "oracle" or closed is None
    count = oracle_singular_count(n, m, budget=cfg.budget, workers=cfg.threads) if use_oracle else closed
    fields = {"n": n, "m": m, "count": count, "closed_form": closed,
              "source": "oracle" if use_oracle else "closed-form",
              "density": Fraction(count, m ** (n * n))}
    return Outcome(fields, [fields], m ** (n * n) if use_oracle else 0)


def cmd_count_box(cfg: RunConfig) -> Outcome:
    _need(cfg, "n", "m")
    box = _box(cfg)
    rec = residual_record(cfg.n, cfg.m, box, budget=cfg.budget)
    fields = {"n": cfg.n, "m": cfg.m, "bounds": list(box.bounds), "box_size": box.size,
              "count": rec.exact_count, "main_term": rec.main_term, "residual": rec.residual}
    return Outcome(fields, [fields], box.size if cfg.n > 2 else 0)


def cmd_fixed_det(cfg: RunConfig) -> Outcome:
    _need(cfg, "n")
    if cfg.a is not None:
        box = _box(cfg)
        c = count_fixed_det(cfg.n, box, cfg.a, budget=cfg.budget)
        fields = {"n": cfg.n, "bounds": list(box.bounds), "a": cfg.a, "count": c}
        return Outcome(fields, [fields], box.size if cfg.n > 2 else 0)
    _need(cfg, "h")
    Hs = _int_list(cfg.h, "--h")
    rows = fixed_det_max_report(cfg.n, Hs, budget=cfg.budget)
    records = [dataclasses.asdict(r) for r in rows]
    iters = sum((2 * H + 1) ** (cfg.n * cfg.n) for H in Hs) if cfg.n > 2 else 0
    return Outcome({"n": cfg.n, "rows": records}, records, iters)


def cmd_expsum(cfg: RunConfig) -> Outcome:
    """S_m(L) directly; with --d (square-free) also the CRT product over p | d."""
    _need(cfg, "n")
    if (cfg.m is None) == (cfg.d is None):
        raise UsageError("expsum takes exactly one of --m or --d")
    form = _form(cfg)
    d = cfg.d
    if d is not None:
        if _squarefree_shape(d) not in ("squarefree", "unit"):
            raise UsageError("--d must be square-free")
        m = d * d if cfg.square else d
    else:
        m = cfg.m
    r = eval_expsum(cfg.n, m, form.reduced(m), budget=cfg.budget, workers=cfg.threads)
    fields = {"n": cfg.n, "m": m, "form": form, "value_re": r.value.real, "value_im": r.value.imag,
              "magnitude": r.magnitude, "histogram": list(r.histogram)}
    iters = m ** (cfg.n * cfg.n)
    if d is not None and d > 1:
        prod, parts = crt_product(cfg.n, d, form, square=cfg.square, budget=cfg.budget)
        fields["crt_re"], fields["crt_im"] = prod.real, prod.imag
        fields["crt_moduli"] = [p.modulus for p in parts]
        fields["crt_factors"] = [[p.value.real, p.value.imag] for p in parts]
        iters += sum(p.modulus ** (cfg.n * cfg.n) for p in parts)
    return Outcome(fields, [fields], iters)


def cmd_expsum_sweep(cfg: RunConfig) -> Outcome:
    _need(cfg, "n", "m")
    p = cfg.m
    if cfg.square:
        rep = bound_report_prime_sq(cfg.n, p, seed=cfg.seed, budget=cfg.budget)
        iters = len(rep.rows) * (p * p) ** (cfg.n * cfg.n)
    else:
        family = cfg.family or "all-nontrivial"
        if family not in FAMILIES:
            raise UsageError(f"--family must be one of {', '.join(FAMILIES)}")
        rep = bound_report_prime(cfg.n, p, family, budget=cfg.budget)
        iters = len(rep.rows) * p ** (cfg.n * cfg.n)
    records = [{"form": r.form, "magnitude": r.magnitude, **{f"ratio_{k}": v for k, v in r.ratios.items()}}
               for r in rep.rows]
    fields = {"n": cfg.n, "modulus": rep.modulus, "family": rep.family, "forms": len(rep.rows),
              "max_magnitude": rep.max_magnitude, "max_ratio": rep.max_ratio, "rows": records}
    return Outcome(fields, records, iters)


def _pipeline(cfg: RunConfig, direct: Callable, sieve: Callable, key: str) -> Outcome:
    _need(cfg, "n", "h")
    H = _single_h(cfg)
    method = cfg.method or "direct"
    if method not in ("direct", "sieve", "both"):
        raise UsageError("--method must be direct, sieve or both")
    size = (2 * H + 1) ** (cfg.n * cfg.n)
    fields: dict[str, Any] = {"n": cfg.n, "H": H, "box_size": size}
    if method in ("direct", "both"):
        fields[key] = direct(cfg.n, H, budget=cfg.budget)
    if method in ("sieve", "both"):
        fields[f"{key}_sieve"] = sieve(cfg.n, H, budget=cfg.budget)
    value = fields.get(key, fields.get(f"{key}_sieve"))
    fields["density"] = Fraction(value) / size
    if method == "both":
        fields["agree"] = fields[key] == fields[f"{key}_sieve"]
    iters = size if cfg.n > 2 else 0
    return Outcome(fields, [fields], iters, fields.get("agree", True))


def cmd_squarefree(cfg: RunConfig) -> Outcome:
    return _pipeline(cfg, squarefree_direct, squarefree_sieve, "count")


def cmd_phi_sum(cfg: RunConfig) -> Outcome:
    return _pipeline(cfg, phi_sum_direct, phi_sum_sieve, "sum")


def cmd_constants(cfg: RunConfig) -> Outcome:
    _need(cfg, "n")
    P = cfg.prime_limit or 10**6
    records = []
    for c in (euler_constant_S(cfg.n, P), euler_constant_sigma(cfg.n, P)):
        records.append({"name": c.name, "n": c.n, "truncation_prime": P, "lo": c.lo, "hi": c.hi,
                        "mid": c.mid, "width": mpmath.nstr(c.width, 6), "tail_bound": c.tail_bound_method})
    fields = {"n": cfg.n, "prime_limit": P, "S": records[0], "sigma": records[1]}
    return Outcome(fields, records, 2 * P)


def cmd_exponents(cfg: RunConfig) -> Outcome:
    _need(cfg, "n")
    n = cfg.n
    fields = {"n": n, "gamma": exponent_gamma(n), "theta": exponent_theta(n),
              "delta_squarefree": delta_exponent(n, "squarefree"), "delta_phi": delta_exponent(n, "phi"),
              "hadamard_range_H1": hadamard_range(n, 1)}
    return Outcome(fields, [fields], 0)


def cmd_convergence(cfg: RunConfig) -> Outcome:
    _need(cfg, "n", "h")
    Hs = _int_list(cfg.h, "--h")
    table = convergence_study(cfg.n, Hs, prime_limit=cfg.prime_limit or 10**5, budget=cfg.budget)
    records = [dataclasses.asdict(r) for r in table.rows]
    fields = {"n": cfg.n, "constant_S": table.constant_S, "constant_sigma": table.constant_sigma,
              "slope_squarefree": table.slope_squarefree, "slope_phi": table.slope_phi, "rows": records}
    iters = sum((2 * H + 1) ** (cfg.n * cfg.n) for H in Hs) if cfg.n > 2 else 0
    return Outcome(fields, records, iters)


def cmd_verify(cfg: RunConfig) -> Outcome:
    tag = cfg.suite or "all"
    if tag != "all" and tag not in SUITES:
        raise UsageError(f"unknown suite {tag!r}; expected all or one of {', '.join(SUITES)}")
    checks = [c.as_dict() for c in run_suite(tag)]
    failed = sum(not c["passed"] for c in checks)
    fields = {"suite": tag, "checks": len(checks), "failed": failed, "passed": failed == 0,
              "results": checks}
    return Outcome(fields, checks, 0, failed == 0)


HANDLERS: dict[str, Callable[[RunConfig], Outcome]] = {
    "count-singular": cmd_count_singular,
    "count-box": cmd_count_box,
    "fixed-det": cmd_fixed_det,
    "expsum": cmd_expsum,
    "expsum-sweep": cmd_expsum_sweep,
    "squarefree": cmd_squarefree,
    "phi-sum": cmd_phi_sum,
    "constants": cmd_constants,
    "exponents": cmd_exponents,
    "convergence": cmd_convergence,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("run options")
    g.add_argument("--budget", type=int, help="max enumeration iterations (env DETSTAT_BUDGET)")
    g.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker threads")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    g.add_argument("--timing", action="store_true", help="embed wall time in the document")

    parser = _Parser(prog=TOOL, description="Exact counts and sums around integer matrix determinants.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_, *flags):
        p = sub.add_parser(name, parents=[common], help=help_)
        for flag in flags:
            flag(p)
        return p

    n = lambda p: p.add_argument("--n", type=int, required=True, help="matrix dimension")  # noqa: E731
    m = lambda p: p.add_argument("--m", type=int, required=True, help="modulus")  # noqa: E731
    h = lambda p: p.add_argument("--h", help="box bound H (comma list where several are allowed)")  # noqa: E731
    bounds = lambda p: p.add_argument("--bounds", help="per-entry bounds, row-major comma list")  # noqa: E731

    add("count-singular", "N_n(m), singular matrices mod m", n, m,
        lambda p: p.add_argument("--method", choices=("closed-form", "oracle")))
    add("count-box", "matrices in a box with det = 0 mod m", n, m, h, bounds)
    add("fixed-det", "matrices in a box with a given determinant", n, h, bounds,
        lambda p: p.add_argument("--a", type=int, help="target determinant (omit for the max report)"))
    add("expsum", "complete exponential sum S_m(L)", n,
        lambda p: p.add_argument("--m", type=int, help="modulus"),
        lambda p: p.add_argument("--d", type=int, help="square-free modulus, adds the CRT product"),
        lambda p: p.add_argument("--square", action="store_true", help="with --d, use modulus d^2"),
        lambda p: p.add_argument("--form", required=True, help='linear form, e.g. "1,0;0,0"'))
    add("expsum-sweep", "sweep |S_p(L)| over a family of forms", n,
        lambda p: p.add_argument("--m", type=int, required=True, help="prime p"),
        lambda p: p.add_argument("--family", choices=FAMILIES, default="all-nontrivial"),
        lambda p: p.add_argument("--square", action="store_true", help="modulus p^2, sampled forms"))
    for name, what in (("squarefree", "count of square-free determinants"),
                       ("phi-sum", "sum of phi(|det|)/|det|")):
        add(name, what, n, h, lambda p: p.add_argument("--method", choices=("direct", "sieve", "both")))
    add("constants", "rigorous Euler-product intervals", n,
        lambda p: p.add_argument("--prime-limit", type=int, default=10**6))
    add("exponents", "power-saving exponents", n)
    add("convergence", "density ladder against the predicted main term", n, h,
        lambda p: p.add_argument("--prime-limit", type=int, default=10**5))
    add("verify", "run a verification suite", lambda p: p.add_argument(
        "--suite", default="all", help=f"all or one of {', '.join(SUITES)}"))
    return parser


def parse_config(argv: list[str]) -> tuple[RunConfig, bool]:
    ns = build_parser().parse_args(argv)
    values = vars(ns)
    timing = values.pop("timing")
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    cfg = RunConfig(**{k: v for k, v in values.items() if k in fields})
    if cfg.threads < 1:
        raise UsageError("--threads must be >= 1")
    if cfg.n is not None and cfg.n < 1:
        raise UsageError("--n must be >= 1")
    if cfg.prime_limit is not None and cfg.prime_limit < 2:
        raise UsageError("--prime-limit must be >= 2")
    if cfg.budget is not None and cfg.budget <= 0:
        raise UsageError("--budget must be positive")
    return cfg, timing


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg, timing = parse_config(argv)
        if cfg.budget is None:
            resolve_budget()  # surfaces a malformed DETSTAT_BUDGET as invalid input
        start = time.perf_counter()
        out = HANDLERS[cfg.command](cfg)
        wall = time.perf_counter() - start
    except UsageError as exc:
        print(f"{TOOL}: error: {exc}", file=stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"{TOOL}: budget refused: {exc}", file=stderr)
        return 2
    except (DetstatError, ValueError, ZeroDivisionError) as exc:
        print(f"{TOOL}: invalid input: {exc}", file=stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    print(f"{TOOL}: {cfg.command} finished in {wall:.3f}s", file=stderr)
    text = render_csv(out) if cfg.format == "csv" else render_json(cfg, out, wall if timing else None)
    stdout.write(text)
    return 0 if out.ok else 1


def main() -> None:
    sys.exit(run())
