"""Command-line driver for the verification suites.

Each suite writes one JSON report::

    {suite, params, checks: [{name, eq, residual, pass}], max_residual, pass, wall_time_s}

Exit status is 0 when every residual is within tolerance, 1 when a check
fails and 2 for usage or configuration errors (including size refusals).
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .bialgebra import check_coassociativity
from .gns_rep import Representation, build_space, generator_ops, gns_gram_residual, truncated_dimension
from .intertwiner import (
    assemble_direct_sum,
    build_W,
    check_coisometry,
    check_covariance,
    check_direct_sum_covariance,
    check_pentagon,
    partial_isometry_residual,
)
from .states import check_monoid_condition, parse_family, rho, state_tensor
from .word_algebra import AlgebraElement, random_monomial

SUITES = ("wcs", "states", "gns", "covariance", "pentagon", "kernel")
COMMANDS = {f"check-{s}": s for s in SUITES}
COMMANDS["run-all"] = "all"

ALL_FAMILIES = ("basis-first", "basis-last", "uniform", "phase:1.0")
MONOID_PHASES = (0.0, 1.0, math.pi)
MONOID_RANGE = 50
DEFAULT_TRIPLES = ((2, 2, 2), (2, 2, 3), (2, 3, 2), (3, 2, 2), (1, 2, 3))

# resource caps; exceeding one is refused rather than silently truncated
MAX_ARITY_PRODUCT = 64
MAX_SPACE_DIM = 250_000
MAX_TRIPLE_BASIS = 2_000_000
MAX_DIRECT_SUM_DIM = 3_000

SIZE_KEYS = ("n", "m", "l", "n_max", "L")


class ConfigError(ValueError):
    """Invalid configuration or a refused size; maps to exit status 2."""


@dataclass
class SuiteConfig:
    suite: str
    n: Optional[int] = None
    m: Optional[int] = None
    l: Optional[int] = None
    n_max: Optional[int] = None
    L: Optional[int] = None
    family: Optional[str] = None
    tol: float = 1e-10
    seed: int = 0
    samples: Optional[int] = None

    def validate(self) -> "SuiteConfig":
        if self.suite not in SUITES and self.suite != "all":
            raise ConfigError(f"unknown suite {self.suite!r}")
        for key in ("n", "m", "l", "n_max", "samples"):
            v = getattr(self, key)
            if v is not None and v < 1:
                raise ConfigError(f"{key} must be a positive integer, got {v}")
        if self.L is not None and self.L < 0:
            raise ConfigError(f"L must be non-negative, got {self.L}")
        if not self.tol > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tol}")
        if self.family is not None and self.family != "all":
            try:
                parse_family(self.family)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        return self

    def families(self) -> List[str]:
        if self.family in (None, "all"):
            return list(ALL_FAMILIES)
        return [self.family]

    def pick(self, key: str, default):
        v = getattr(self, key)
        return default if v is None else v


class Report:
    def __init__(self, suite: str, params: dict, tol: float):
        self.suite = suite
        self.params = params
        self.tol = tol
        self.checks: List[dict] = []

    def add(self, name: str, eq: str, residual: float):
        residual = float(residual)
        self.checks.append({"name": name, "eq": eq, "residual": residual, "pass": bool(residual <= self.tol)})

    def as_dict(self, wall_time: float) -> dict:
        residuals = [c["residual"] for c in self.checks]
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": self.checks,
            "max_residual": max(residuals, default=0.0),
            "pass": all(c["pass"] for c in self.checks),
            "wall_time_s": wall_time,
        }


def _monomials(arity: int, max_len: int, count: int, rng) -> List[AlgebraElement]:
    return [AlgebraElement(arity, {random_monomial(arity, max_len, rng): 1.0}) for _ in range(count)]


def _pairs(cfg: SuiteConfig, default: Sequence[int]):
    ns = [cfg.n] if cfg.n is not None else list(default)
    ms = [cfg.m] if cfg.m is not None else list(default)
    return [(n, m) for n in ns for m in ms]


def _refuse_dim(label: str, dim: int, cap: int):
    if dim > cap:
        raise ConfigError(f"refusing {label}: dimension {dim} exceeds the cap {cap}")


# --- suites ---------------------------------------------------------------


def suite_wcs(cfg: SuiteConfig, rep: Report, rng):
    cap = cfg.pick("n_max", 24)
    samples = cfg.pick("samples", 50)
    if None not in (cfg.n, cfg.m, cfg.l):
        triples = [(cfg.n, cfg.m, cfg.l)]
    else:
        triples = [(a, b, c) for a in range(1, cap + 1) for b in range(1, cap // a + 1)
                   for c in range(1, cap // (a * b) + 1)]
    for a, b, c in triples:
        if a * b * c > MAX_ARITY_PRODUCT:
            raise ConfigError(f"refusing a*b*c = {a * b * c} > {MAX_ARITY_PRODUCT}")
        worst = 0.0
        for x in _monomials(a * b * c, 3, samples, rng):
            worst = max(worst, check_coassociativity(a, b, c, x))
        rep.add(f"coassociativity[a={a},b={b},c={c}]", "mixed coassociativity", worst)


def suite_states(cfg: SuiteConfig, rep: Report, rng):
    top = cfg.pick("n_max", 5)
    samples = cfg.pick("samples", 100)
    for fam in cfg.families():
        seq = parse_family(fam)
        for n in range(1, top + 1):
            for m in range(1, top + 1):
                worst = 0.0
                for x in _monomials(n * m, 3, samples, rng):
                    worst = max(worst, abs(state_tensor(seq(n), seq(m), x) - rho(seq(n * m), x)))
                rep.add(f"state-equation[{seq.id},n={n},m={m}]", "state equation", worst)
    monoid = [parse_family(f) for f in cfg.families()]
    if cfg.family in (None, "all"):
        monoid = [parse_family(f) for f in ALL_FAMILIES[:3]]
        monoid += [parse_family(f"phase:{t!r}") for t in MONOID_PHASES]
    for seq in monoid:
        worst = max(check_monoid_condition(seq, n, m)
                    for n in range(1, MONOID_RANGE + 1) for m in range(1, MONOID_RANGE + 1))
        rep.add(f"monoid[{seq.id},n,m<={MONOID_RANGE}]", "monoid condition", worst)


def suite_gns(cfg: SuiteConfig, rep: Report, rng):
    L = cfg.pick("L", 8)
    ns = [cfg.n] if cfg.n is not None else [1, 2, 3, 4]
    word_len = min(3, L)
    for n in ns:
        _refuse_dim(f"H_{n} at L={L}", truncated_dimension(n, L), MAX_SPACE_DIM)
        space = build_space(n, L)
        # s_i^* s_j = delta_ij on words of length <= L - 1
        ops = generator_ops(space)
        safe = np.nonzero(space.safe_mask(1))[0]
        eye = sp.identity(space.dim, dtype=complex, format="csc")
        worst = 0.0
        for i, si in enumerate(ops):
            for j, sj in enumerate(ops):
                diff = (si.conj().T @ sj - (eye if i == j else 0 * eye)).tocsc()[:, safe]
                worst = max(worst, float(np.max(np.abs(diff.data), initial=0.0)))
        rep.add(f"cuntz-relations[n={n},L={L}]", "Cuntz relations on safe vectors", worst)
        for fam in cfg.families():
            seq = parse_family(fam)
            r = Representation(space, z=seq(n))
            rep.add(f"gns-identity[{seq.id},n={n},L={L}]", "GNS identity",
                    gns_gram_residual(r, word_len))


def suite_covariance(cfg: SuiteConfig, rep: Report, rng):
    L = cfg.pick("L", 5)
    samples = cfg.pick("samples", 20)
    for n, m in _pairs(cfg, (1, 2, 3)):
        _check_pair(n, m, L)
        w = build_W(n, m, L)
        rep.add(f"partial-isometry[n={n},m={m},L={L}]", "W W* W = W", partial_isometry_residual(w))
        rep.add(f"co-isometry[n={n},m={m},L={L}]", "W W* = I", check_coisometry(n, m, L))
        del w
    for n, m in _pairs(cfg, (2, 3)):
        xs = [AlgebraElement.generator(n * m, i) for i in range(1, n * m + 1)]
        xs += _monomials(n * m, 2, samples, rng)
        for fam in cfg.families():
            worst = max(check_covariance(n, m, L, fam, x) for x in xs)
            rep.add(f"covariance[{parse_family(fam).id},n={n},m={m},L={L}]", "covariance", worst)


def _check_pair(n: int, m: int, L: int):
    if n * m > MAX_ARITY_PRODUCT:
        raise ConfigError(f"refusing n*m = {n * m} > {MAX_ARITY_PRODUCT}")
    _refuse_dim(f"H_{n * m} at L={L}", truncated_dimension(n * m, L), MAX_SPACE_DIM)


def _triple_basis_size(dims_by_length: Sequence[Sequence[int]], L: int) -> int:
    conv = np.array([1], dtype=object)
    for counts in dims_by_length:
        conv = np.convolve(conv, np.array(counts, dtype=object))[: L + 1]
    return int(sum(conv))


def _length_counts(n: int, L: int) -> List[int]:
    if n == 1:
        return [1] + [0] * L
    return [1] + [(n - 1) * n ** (k - 1) for k in range(1, L + 1)]


def suite_pentagon(cfg: SuiteConfig, rep: Report, rng):
    L = cfg.pick("L", 4)
    if None not in (cfg.n, cfg.m, cfg.l):
        triples = [(cfg.n, cfg.m, cfg.l)]
    elif any(v is not None for v in (cfg.n, cfg.m, cfg.l)):
        raise ConfigError("the pentagon suite needs all of --n, --m, --l or none of them")
    else:
        triples = list(DEFAULT_TRIPLES)
    fam = cfg.families()[0]
    for n, m, l in triples:
        if n * m * l > MAX_ARITY_PRODUCT:
            raise ConfigError(f"refusing n*m*l = {n * m * l} > {MAX_ARITY_PRODUCT}")
        size = _triple_basis_size([_length_counts(k, L) for k in (n * m, l, l)], L)
        _refuse_dim(f"triple tensor for ({n},{m},{l}) at L={L}", size, MAX_TRIPLE_BASIS)
        rep.add(f"pentagon[n={n},m={m},l={l},L={L}]", "pentagon", check_pentagon(n, m, l, L, fam))


def suite_kernel(cfg: SuiteConfig, rep: Report, rng):
    n_max = cfg.pick("n_max", 6)
    L = cfg.pick("L", 3)
    samples = cfg.pick("samples", 5)
    _refuse_dim(f"direct sum up to n_max={n_max} at L={L}",
                sum(truncated_dimension(a, L) for a in range(1, n_max + 1)), MAX_DIRECT_SUM_DIM)
    arities = [cfg.n] if cfg.n is not None else [a for a in (2, 4, 6) if a <= n_max]
    for fam in cfg.families():
        asm = assemble_direct_sum(n_max, L, fam, seed=cfg.seed)
        rep.add(f"kernel[{asm.family.id},n_max={n_max},L={L}]", "kernel law", asm.kernel_residual)
        for a in arities:
            if a > n_max:
                raise ConfigError(f"arity {a} exceeds n_max={n_max}")
            xs = [AlgebraElement.generator(a, i) for i in range(1, a + 1)] + _monomials(a, 2, samples, rng)
            worst = max(check_direct_sum_covariance(asm, x) for x in xs)
            rep.add(f"direct-sum-covariance[{asm.family.id},a={a},L={L}]", "direct-sum covariance", worst)


RUNNERS: Dict[str, Callable] = {
    "wcs": suite_wcs,
    "states": suite_states,
    "gns": suite_gns,
    "covariance": suite_covariance,
    "pentagon": suite_pentagon,
    "kernel": suite_kernel,
}


def run_suite(cfg: SuiteConfig) -> dict:
    """Run one suite (or all of them) and return the report as a dict."""
    cfg.validate()
    start = time.perf_counter()
    rep = Report(cfg.suite, asdict(cfg), cfg.tol)
    if cfg.suite == "all":
        given = [k for k in SIZE_KEYS if getattr(cfg, k) is not None]
        if given:
            raise ConfigError(f"run-all uses each suite's default sizes; drop {', '.join(given)}")
        for i, name in enumerate(SUITES):
            RUNNERS[name](replace(cfg, suite=name), rep, np.random.default_rng([cfg.seed, i]))
    else:
        RUNNERS[cfg.suite](cfg, rep, np.random.default_rng([cfg.seed, SUITES.index(cfg.suite)]))
    return rep.as_dict(time.perf_counter() - start)


def emit_report(report: dict, path: Optional[str]) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


# --- argument handling ----------------------------------------------------

_INT_KEYS = {"n", "m", "l", "n_max", "L", "seed", "samples"}
_CONFIG_KEYS = _INT_KEYS | {"family", "tol", "out"}


def read_config_file(path: str) -> dict:
    """Parse a ``key = value`` file whose keys mirror the command-line flags."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[config]\n" + fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    out = {}
    for key, raw in parser["config"].items():
        name = key.strip().lstrip("-").replace("-", "_")
        if name == "tolerance":
            name = "tol"
        if name not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r} in {path}")
        try:
            if name in _INT_KEYS:
                out[name] = int(raw)
            elif name == "tol":
                out[name] = float(raw)
            else:
                out[name] = raw.strip()
        except ValueError:
            raise ConfigError(f"bad value for {key!r} in {path}: {raw!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuntz-pentagon", description="Numerical verification suites for Cuntz algebra bialgebra structures."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--L", dest="L", type=int, help="word-length cutoff")
        p.add_argument("--family", help="basis-first, basis-last, uniform, phase:<t>[:base] or all")
        p.add_argument("--tol", type=float, help="tolerance (default 1e-10)")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--config", help="key = value file; flags override it")
    return parser


def config_from_args(args: argparse.Namespace) -> tuple:
    values = read_config_file(args.config) if args.config else {}
    for key in ("n", "m", "l", "n_max", "L", "family", "tol", "seed", "samples", "out"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    out = values.pop("out", None)
    return SuiteConfig(suite=COMMANDS[args.command], **values), out


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, out = config_from_args(args)
        report = run_suite(cfg)
        emit_report(report, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if out is not None:
        status = "PASS" if report["pass"] else "FAIL"
        print(f"{report['suite']}: {status} max_residual={report['max_residual']:.3e} -> {out}")
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
