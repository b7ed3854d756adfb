"""Command line front end: ``mtakit zhu|mta|verma``.

Exit status 0 means every requested check passed, 1 a configuration
error, 2 a failed verification.  JSON reports carry the certified payload
under "result"; the run timestamp lives only in the "metadata" envelope.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import __version__
from .liealg import KINDS, WindowExceeded, algebra
from .partitions import partition_count
from .pbw import TermLimitExceeded

SCHEMA = "mta-kit/1"
HEISENBERG_CAP = 8

EXIT_OK, EXIT_CONFIG, EXIT_FAIL = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}\n{self.format_usage()}")


@dataclass
class RunConfig:
    command: str
    algebra: str
    level: int | None = None
    degree: int | None = None
    window: int | None = None
    max_level: int | None = None
    max_degree: int | None = None
    find_identity: bool = False
    verify: str | None = None
    eigenvalue: str = "formal"
    central_charge: str = "formal"
    singular: bool = False
    unital: bool = False
    table: bool = False
    out: str | None = None
    format: str = "json"
    jobs: int = 1
    allow_large: bool = False
    timestamp: bool = True


def _param(text: str) -> str:
    if text == "formal":
        return text
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number or 'formal', got {text!r}")
    return text


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mtakit", description="Higher Zhu algebras and mode transition algebras, exactly.")
    p.add_argument("--version", action="version", version=f"mtakit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--algebra", required=True, choices=KINDS)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--jobs", type=_nonneg, default=1)
        sp.add_argument("--window", type=_nonneg, help="Virasoro index window")
        sp.add_argument("--allow-large", action="store_true", help=f"lift the Heisenberg cap d <= {HEISENBERG_CAP}")
        sp.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    z = sub.add_parser("zhu", help="structure of the level-d Zhu algebra")
    common(z)
    z.add_argument("--level", type=_nonneg, required=True)
    z.add_argument("--table", action="store_true", help="include the full multiplication table")

    m = sub.add_parser("mta", help="identities, strong identities and splitting")
    common(m)
    m.add_argument("--degree", type=_nonneg)
    m.add_argument("--max-level", type=_nonneg)
    m.add_argument("--find-identity", action="store_true")
    m.add_argument("--verify", choices=("strong-identity", "splitting", "addabbo-barron", "structure"))

    v = sub.add_parser("verma", help="generalized Verma modules")
    common(v)
    v.add_argument("--degree", type=_nonneg)
    v.add_argument("--max-degree", type=_nonneg)
    v.add_argument("--lambda", dest="eigenvalue", type=_param)
    v.add_argument("--h", dest="h", type=_param)
    v.add_argument("--c", dest="central_charge", type=_param, default="formal")
    v.add_argument("--singular", action="store_true")
    v.add_argument("--unital", action="store_true", help="check the unit of each degree acts as identity")
    return p


def parse_config(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    data = vars(ns)
    if data.get("h") is not None:
        if data.get("eigenvalue") is not None:
            raise ConfigError("give only one of --lambda / --h")
        data["eigenvalue"] = data["h"]
    data.pop("h", None)
    if data.get("eigenvalue") is None:
        data["eigenvalue"] = "formal"
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in data.items() if k in fields})


def _cap(cfg: RunConfig, d: int) -> None:
    if cfg.algebra == "heisenberg" and d > HEISENBERG_CAP and not cfg.allow_large:
        raise ConfigError(f"d = {d} exceeds the default cap {HEISENBERG_CAP}; pass --allow-large")


def _window(cfg: RunConfig):
    return algebra(cfg.algebra, cfg.window)


# ---------------------------------------------------------------------------


def run_zhu(cfg: RunConfig) -> tuple[dict, bool]:
    from . import zhu

    d = cfg.level
    if cfg.algebra == "heisenberg":
        _cap(cfg, d)
        report = zhu.verify_heisenberg_structure(d, jobs=cfg.jobs)
        if cfg.table:
            alg = algebra("heisenberg")
            basis = zhu.zhu_basis(d)
            table = zhu.multiplication_table(alg, d, jobs=cfg.jobs)
            report["basis"] = [zhu.key_label(alg, k) for k in basis]
            report["table"] = [[e.to_json() for e in row] for row in table]
        return report, report["ok"]
    if d != 1:
        raise ConfigError("Virasoro Zhu checks are available at --level 1")
    bound = cfg.window if cfg.window is not None else 8
    if bound < 4:
        raise ConfigError("--window must be at least 4")
    report = zhu.verify_virasoro_level1(bound)
    return report, report["ok"]


def run_mta(cfg: RunConfig) -> tuple[dict, bool]:
    from . import mta, zhu

    alg = _window(cfg)
    if not cfg.find_identity and cfg.verify is None:
        raise ConfigError("mta needs --find-identity or --verify")
    result: dict = {"algebra": cfg.algebra}
    ok = True
    if cfg.find_identity:
        if cfg.degree is None:
            raise ConfigError("--find-identity needs --degree")
        _cap(cfg, cfg.degree)
        res = mta.find_identity(alg, cfg.degree)
        result["find_identity"] = res.to_json()
        result["d"] = cfg.degree
        result["identity"] = res.identity.to_json() if res.identity is not None else None
        if res.identity is None:
            cert = res.certificate()
            result["summary"] = f"NONE (denominator {cert.get('denominator')})"
        else:
            result["summary"] = str(res.identity)
    if cfg.verify == "strong-identity":
        d_max = cfg.max_level if cfg.max_level is not None else cfg.degree
        if d_max is None:
            raise ConfigError("strong-identity needs --max-level or --degree")
        n_window = cfg.window if cfg.window is not None else d_max
        _cap(cfg, d_max + n_window)
        rep = mta.verify_strong_identity(algebra(cfg.algebra), d_max, n_window)
        result["strong_identity"] = rep
        ok &= rep["ok"]
    elif cfg.verify == "splitting":
        if cfg.degree is None or cfg.degree < 1:
            raise ConfigError("splitting needs --degree >= 1")
        _cap(cfg, cfg.degree)
        rep = mta.verify_splitting(alg, cfg.degree)
        result["splitting"] = rep
        ok &= rep["ok"]
    elif cfg.verify == "addabbo-barron":
        if cfg.algebra != "heisenberg":
            raise ConfigError("the matrix decomposition check is Heisenberg only")
        top = cfg.max_level if cfg.max_level is not None else cfg.degree
        if top is None:
            raise ConfigError("addabbo-barron needs --max-level")
        _cap(cfg, top)
        levels = []
        for d in range(top + 1):
            st = zhu.verify_heisenberg_structure(d, jobs=cfg.jobs)
            expected = sum(partition_count(j) ** 2 for j in range(d + 1))
            entry = {"d": d, "rank": st["rank"], "expected_rank": expected, "structure_ok": st["ok"],
                     "failures": st["failures"]}
            good = st["ok"] and st["rank"] == expected
            if d >= 1:
                sp = mta.verify_splitting(alg, d)
                entry["splitting_ok"] = sp["ok"]
                good &= sp["ok"]
            entry["ok"] = good
            ok &= good
            levels.append(entry)
        result["addabbo_barron"] = levels
    elif cfg.verify == "structure":
        if cfg.algebra != "heisenberg":
            raise ConfigError("the closed-form table check is Heisenberg only")
        if cfg.degree is None:
            raise ConfigError("structure needs --degree")
        _cap(cfg, cfg.degree)
        rep = mta.verify_heisenberg_table(cfg.degree)
        result["structure"] = rep
        ok &= rep["ok"]
    return result, ok


def run_verma(cfg: RunConfig) -> tuple[dict, bool]:
    from . import mta, verma

    alg = _window(cfg)
    module = verma.VermaModule(alg, cfg.eigenvalue, cfg.central_charge)
    if cfg.degree is not None:
        degrees = [cfg.degree]
    elif cfg.max_degree is not None:
        degrees = list(range(1, cfg.max_degree + 1))
    else:
        raise ConfigError("verma needs --degree or --max-degree")
    if cfg.algebra == "heisenberg":
        _cap(cfg, max(degrees))
    result = module.describe()
    result["dimensions"] = [{"degree": d, "dim": module.dimension(d), "partitions": partition_count(d)}
                            for d in degrees]
    ok = all(e["dim"] == e["partitions"] for e in result["dimensions"])
    if cfg.singular:
        reps = []
        for d in degrees:
            if d < 1:
                raise ConfigError("singular vectors live in positive degree")
            reps.append(verma.singular_vectors(module, d).to_json())
        result["singular"] = reps
    if cfg.unital:
        checks = []
        for d in degrees:
            ident = mta.find_identity(alg, d)
            if ident.identity is None:
                checks.append({"degree": d, "ok": False, "reason": "no identity", "certificate": ident.certificate()})
                ok = False
                continue
            good = all(verma.mta_act(ident.identity, module.basis_vector(b)) == module.basis_vector(b)
                       for b in module.basis(d))
            checks.append({"degree": d, "ok": good})
            ok &= good
        result["unital"] = checks
    return result, ok


RUNNERS = {"zhu": run_zhu, "mta": run_mta, "verma": run_verma}


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(cfg: RunConfig, result: dict, ok: bool) -> str:
    config = {k: v for k, v in asdict(cfg).items() if k not in ("out", "format", "jobs", "timestamp")}
    doc = {"schema": SCHEMA, "command": cfg.command, "status": "OK" if ok else "FAILED",
           "config": config, "result": result}
    if cfg.timestamp:
        doc["metadata"] = {"version": __version__,
                           "generated": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}
    if cfg.format == "json":
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    return "\n".join(_text(doc)) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        result, ok = RUNNERS[cfg.command](cfg)
    except ConfigError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_CONFIG
    except (WindowExceeded, TermLimitExceeded) as exc:
        print(f"mtakit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(cfg, result, ok)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
