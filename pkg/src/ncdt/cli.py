"""Command line driver: ``ncdt compute | compare | wallcross | tv | quiver | crystals | info``.

A job is described by one JSON document (``--config``); command line flags
override its fields.  Everything printed on standard output is JSON with
sorted keys, so a fixed job always produces the same bytes.

Exit codes: 0 success or equal, 1 mathematical mismatch, 2 usage or
configuration error, 3 internal assertion (integrality, stabilisation).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Sequence

from . import __version__
from .crystal import TypeData, enumerate_crystals, q_prefactor, z_crystal
from .dt import default_beta_cap, z_tv_bruteforce
from .quiver import base_quiver, behrend_signs, hat_quiver, peaks_valleys
from .roots import SigmaMap, basis_matrix, unimodular_inverse
from .series import LaurentSeries, recip, v_to_q
from .vertexop import closed_form_ncdt, closed_form_tv, z_tv_vertex, z_vertex

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

NCDT_METHODS = ("crystal", "vertex", "closed")
TV_METHODS = ("brute", "vertex", "closed")
MAX_REPORTED = 10


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    sigma: str = "+"
    theta_walls: list[int] = field(default_factory=list)
    pt: bool = False
    nu_plus: list[int] = field(default_factory=list)
    nu_minus: list[int] = field(default_factory=list)
    lam: list[list[int]] | None = None
    order: int = 4
    methods: list[str] = field(default_factory=lambda: ["crystal"])
    validation: bool = False
    beta_cap: int | None = None
    chambers: list[list[int]] = field(default_factory=list)
    workers: int = 1

    def validate(self) -> "JobConfig":
        try:
            s = SigmaMap.parse(self.sigma)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        L = s.L
        if self.order < 0:
            raise ConfigError("order must be nonnegative")
        if self.lam is not None and len(self.lam) != L:
            raise ConfigError(f"lambda needs {L} partitions, got {len(self.lam)}")
        for walls in [self.theta_walls] + list(self.chambers):
            if any(not 0 <= int(i) < L for i in walls):
                raise ConfigError(f"wall sequence {walls} has a vertex outside 0..{L - 1}")
        for mu in [self.nu_plus, self.nu_minus] + list(self.lam or []):
            if list(mu) != sorted(mu, reverse=True) or any(x <= 0 for x in mu):
                raise ConfigError(f"{mu} is not a partition")
        if self.pt and (self.nu_plus or self.nu_minus):
            raise ConfigError("the PT orientation needs empty nu")
        if self.beta_cap is not None and self.beta_cap < 0:
            raise ConfigError("beta_cap must be nonnegative")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        return self

    @property
    def L(self) -> int:
        return len(self.sigma)

    def type_data(self, walls: Sequence[int] | None = None) -> TypeData:
        w = self.theta_walls if walls is None else walls
        return TypeData.make(self.sigma, w, (self.nu_plus, self.nu_minus), self.lam, self.pt)

    def metadata(self) -> dict:
        meta = asdict(self)
        meta["lambda"] = meta.pop("lam")
        meta.update(
            {
                "version": __version__,
                "exponent_unit": "half (stored doubled)",
                "theta_orientation": "reflected" if self.pt else "unreflected",
                "colour_grading": "v_i counts boxes of colour i removed from V_min",
                "q_grading": "v -> sum v_i alpha(theta, i)",
                "tv_grading": "t = q_0 ... q_{L-1}, n = v_0, beta_i = v_i - v_0",
            }
        )
        meta.pop("workers")
        return meta


# ---------------------------------------------------------------------------
# configuration parsing
# ---------------------------------------------------------------------------


def _parse_ints(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        return [int(x) for x in json.loads(text)]
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_partition(text: str) -> list[int]:
    return [] if text.strip() in ("-", "0") else _parse_ints(text)


def _parse_walls(text: str) -> list[int]:
    return _parse_ints(text)


def _parse_lambda(text: str) -> list[list[int]]:
    text = text.strip()
    if text.startswith("["):
        return [[int(x) for x in mu] for mu in json.loads(text)]
    return [_parse_partition(part) for part in text.split("/")]


def _config_from_args(args: argparse.Namespace) -> JobConfig:
    data: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    if "lambda" in data:
        data["lam"] = data.pop("lambda")
    known = set(JobConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields {sorted(unknown)}")
    cfg = JobConfig(**data)
    try:
        if args.sigma is not None:
            cfg.sigma = args.sigma
        if args.theta is not None:
            cfg.theta_walls = _parse_walls(args.theta)
        if args.pt:
            cfg.pt = True
        if args.nu_plus is not None:
            cfg.nu_plus = _parse_partition(args.nu_plus)
        if args.nu_minus is not None:
            cfg.nu_minus = _parse_partition(args.nu_minus)
        if args.lam is not None:
            cfg.lam = _parse_lambda(args.lam)
        if args.order is not None:
            cfg.order = args.order
        if getattr(args, "method", None):
            cfg.methods = list(args.method)
        if args.validation:
            cfg.validation = True
        if getattr(args, "beta_cap", None) is not None:
            cfg.beta_cap = args.beta_cap
        if getattr(args, "chamber", None):
            cfg.chambers = [_parse_walls(c) for c in args.chamber]
        if args.workers is not None:
            cfg.workers = args.workers
    except (ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


# ---------------------------------------------------------------------------
# computations (module level so they can run in worker processes)
# ---------------------------------------------------------------------------


def _ncdt_series(cfg: JobConfig, method: str, walls: Sequence[int] | None = None) -> LaurentSeries:
    T = cfg.type_data(walls)
    extra = cfg.L if cfg.validation else 0
    if method == "crystal":
        return z_crystal(T, cfg.order, window_extra=extra)
    if method == "vertex":
        return z_vertex(T, cfg.order, window_extra=extra)
    if method == "closed":
        return closed_form_ncdt(T, cfg.order)
    raise ConfigError(f"unknown method {method!r}; choose from {', '.join(NCDT_METHODS)}")


def _tv_series(cfg: JobConfig, method: str) -> LaurentSeries:
    s = SigmaMap.parse(cfg.sigma)
    lam = cfg.lam if cfg.lam is not None else [[]] * cfg.L
    args = (s, tuple(cfg.nu_plus), tuple(cfg.nu_minus), [tuple(m) for m in lam], cfg.order, cfg.beta_cap)
    if method == "brute":
        return z_tv_bruteforce(*args)
    if method == "vertex":
        return z_tv_vertex(*args)
    if method == "closed":
        return closed_form_tv(*args)
    raise ConfigError(f"unknown method {method!r}; choose from {', '.join(TV_METHODS)}")


def _run_all(fn, jobs: list[tuple], workers: int) -> list[LaurentSeries]:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _diff_report(name_a: str, a: LaurentSeries, name_b: str, b: LaurentSeries, keep=None) -> list[dict]:
    out = []
    for e in sorted(set(a.terms) | set(b.terms)):
        if keep is not None and not keep(e):
            continue
        ca, cb = a.coeff(e), b.coeff(e)
        if ca != cb:
            out.append({"exp": list(e), name_a: str(ca), name_b: str(cb)})
    return out


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=1))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_compute(cfg: JobConfig) -> int:
    methods = cfg.methods
    series = _run_all(_ncdt_series, [(cfg, m) for m in methods], cfg.workers)
    _emit({"metadata": cfg.metadata(), "series": {m: s.to_json() for m, s in zip(methods, series)}})
    return EXIT_OK


def _compare(cfg: JobConfig, methods: list[str], series: list[LaurentSeries], fixture: LaurentSeries | None) -> int:
    names = list(methods)
    if fixture is not None:
        names.append("fixture")
        series = list(series) + [fixture]
    ref_name, ref = names[0], series[0]
    discrepancies = []
    for name, s in zip(names[1:], series[1:]):
        discrepancies += [dict(d, against=name) for d in _diff_report(ref_name, ref, name, s)]
    equal = not discrepancies
    _emit(
        {
            "metadata": cfg.metadata(),
            "methods": names,
            "equal": equal,
            "discrepancy_count": len(discrepancies),
            "discrepancies": discrepancies[:MAX_REPORTED],
        }
    )
    return EXIT_OK if equal else EXIT_MISMATCH


def cmd_compare(cfg: JobConfig, fixture: LaurentSeries | None = None) -> int:
    methods = cfg.methods if len(cfg.methods) > 1 or fixture is not None else list(NCDT_METHODS)
    series = _run_all(_ncdt_series, [(cfg, m) for m in methods], cfg.workers)
    return _compare(cfg, methods, series, fixture)


def chamber_quotient(cfg: JobConfig, walls: Sequence[int], method: str = "crystal") -> tuple[LaurentSeries, Any]:
    """``q(type) Z_theta / Z_{empty, theta}`` in ``q`` plus its completeness test.

    Returns the series and a predicate on doubled ``q`` exponents that holds
    exactly when the coefficient there is known: its colour coordinates
    (after removing the prefactor) have total at most ``order``.
    """
    T = cfg.type_data(walls)
    empty_cfg = replace(cfg, nu_plus=[], nu_minus=[], lam=None)
    z = _ncdt_series(cfg, method, walls)
    z0 = _ncdt_series(empty_cfg, method, walls)
    basis = basis_matrix(T.theta)
    pref = tuple(2 * x for x in q_prefactor(T))
    quotient = v_to_q(z * recip(z0), basis).shift(pref)
    inv = unimodular_inverse(basis)
    L = T.L
    cap = 2 * cfg.order

    def complete(e) -> bool:
        m = [a - b for a, b in zip(e, pref)]
        v = [sum(m[k] * inv[k][i] for k in range(L)) for i in range(L)]
        return sum(v) <= cap

    return quotient, complete


def _both(ca, cb):
    return lambda e: ca(e) and cb(e)


def cmd_wallcross(cfg: JobConfig) -> int:
    chambers = cfg.chambers or [cfg.theta_walls]
    method = cfg.methods[0]
    results = [chamber_quotient(cfg, w, method) for w in chambers]
    discrepancies = []
    for i in range(len(results)):
        for j in range(i + 1, len(results)):
            (a, ca), (b, cb) = results[i], results[j]
            for d in _diff_report("left", a, "right", b, keep=_both(ca, cb)):
                discrepancies.append(dict(d, chambers=[chambers[i], chambers[j]]))
    equal = not discrepancies
    _emit(
        {
            "metadata": cfg.metadata(),
            "chambers": chambers,
            "quotients": {json.dumps(w): r[0].to_json() for w, r in zip(chambers, results)},
            "equal": equal,
            "discrepancy_count": len(discrepancies),
            "discrepancies": discrepancies[:MAX_REPORTED],
        }
    )
    return EXIT_OK if equal else EXIT_MISMATCH


def cmd_tv(cfg: JobConfig) -> int:
    methods = [m for m in cfg.methods if m != "crystal"] or list(TV_METHODS)
    series = _run_all(_tv_series, [(cfg, m) for m in methods], cfg.workers)
    meta = cfg.metadata()
    meta["beta_cap"] = cfg.beta_cap if cfg.beta_cap is not None else default_beta_cap(cfg.order)
    equal = all(s == series[0] for s in series[1:])
    _emit({"metadata": meta, "series": {m: s.to_json() for m, s in zip(methods, series)}, "equal": equal})
    return EXIT_OK if equal else EXIT_MISMATCH


def cmd_quiver(cfg: JobConfig) -> int:
    s = SigmaMap.parse(cfg.sigma)
    payload: dict[str, Any] = {"metadata": cfg.metadata(), "base": base_quiver(s).to_json()}
    if not (cfg.nu_plus or cfg.nu_minus):
        T = cfg.type_data()
        if not T.pt:
            Q = hat_quiver(s, T.theta, T.lam)
            valleys, peaks = peaks_valleys(T.theta, T.lam)
            payload["framed"] = Q.to_json()
            payload["valleys"] = valleys
            payload["peaks"] = peaks
            payload["sign_rule"] = list(behrend_signs(Q, s.L))
    _emit(payload)
    return EXIT_OK


def cmd_crystals(cfg: JobConfig) -> int:
    T = cfg.type_data()
    rows = []
    for c in enumerate_crystals(T, cfg.order):
        d = c.transition.to_json()
        d["weight"] = list(c.weight)
        rows.append(d)
    counts = [0] * (cfg.order + 1)
    for r in rows:
        counts[sum(r["weight"])] += 1
    _emit({"metadata": cfg.metadata(), "counts": counts, "crystals": rows})
    return EXIT_OK


def cmd_info(cfg: JobConfig | None) -> int:
    _emit(
        {
            "package": "ncdt",
            "version": __version__,
            "commands": ["compute", "compare", "wallcross", "tv", "quiver", "crystals", "info"],
            "ncdt_methods": list(NCDT_METHODS),
            "tv_methods": list(TV_METHODS),
            "exit_codes": {"ok": EXIT_OK, "mismatch": EXIT_MISMATCH, "usage": EXIT_USAGE, "internal": EXIT_INTERNAL},
            "config_fields": sorted(JobConfig.__dataclass_fields__),
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncdt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def job_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON job file; flags override its fields")
        p.add_argument("--sigma", help="sign string such as +- or ++-")
        p.add_argument("--theta", help="wall sequence, e.g. 1,0 (empty for the identity)")
        p.add_argument("--pt", action="store_true", help="use the reflected (PT) orientation")
        p.add_argument("--nu-plus", dest="nu_plus", help="partition, e.g. 2,1")
        p.add_argument("--nu-minus", dest="nu_minus", help="partition, e.g. 1")
        p.add_argument("--lambda", dest="lam", help="partitions per residue, '/'-separated or JSON")
        p.add_argument("--order", type=int, help="truncation order")
        p.add_argument("--validation", action="store_true", help="widen enumeration windows")
        p.add_argument("--workers", type=int, help="worker processes")

    for name in ("compute", "compare"):
        p = sub.add_parser(name)
        job_flags(p)
        p.add_argument("--method", action="append", choices=NCDT_METHODS)
        if name == "compare":
            p.add_argument("--fixture", help="series JSON to compare against")
    p = sub.add_parser("wallcross")
    job_flags(p)
    p.add_argument("--method", action="append", choices=("crystal", "vertex"))
    p.add_argument("--chamber", action="append", help="wall sequence of one chamber (repeatable)")
    p = sub.add_parser("tv")
    job_flags(p)
    p.add_argument("--method", action="append", choices=TV_METHODS)
    p.add_argument("--beta-cap", dest="beta_cap", type=int, help="cap on each curve-class entry")
    for name in ("quiver", "crystals"):
        job_flags(sub.add_parser(name))
    sub.add_parser("info")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "info":
        return cmd_info(None)
    try:
        cfg = _config_from_args(args)
        fixture = None
        if getattr(args, "fixture", None):
            with open(args.fixture) as fh:
                fixture = LaurentSeries.from_json(json.load(fh))
    except (ConfigError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"ncdt: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        if args.command == "compute":
            code = cmd_compute(cfg)
        elif args.command == "compare":
            code = cmd_compare(cfg, fixture)
        elif args.command == "wallcross":
            code = cmd_wallcross(cfg)
        elif args.command == "tv":
            code = cmd_tv(cfg)
        elif args.command == "quiver":
            code = cmd_quiver(cfg)
        else:
            code = cmd_crystals(cfg)
    except ConfigError as exc:
        print(f"ncdt: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, AssertionError) as exc:
        print(f"ncdt: internal assertion: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(f"ncdt: {args.command} finished in {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
